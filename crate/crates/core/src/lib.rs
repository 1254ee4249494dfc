//! Decomposition of networks into higher-order building blocks ("atoms") by
//! inference over microcanonical subgraph configuration models.
//!
//! The crate is organized bottom-up: [`graph`] and [`motif`] provide graphs,
//! canonical labeling and motif catalogs; [`configuration`] holds placed atoms;
//! [`models`] and [`priors`] evaluate likelihoods and priors; [`dl`] assembles
//! description lengths; [`infer`] runs discovery and the greedy cover search;
//! [`generators`] samples synthetic networks.

pub mod catalog;
pub mod configuration;
pub mod discover;
pub mod dl;
pub mod embed;
pub mod error;
pub mod generators;
pub mod graph;
pub mod infer;
pub mod math;
pub mod models;
pub mod motif;
pub mod partitions;
pub mod priors;

pub use catalog::Catalog;
pub use configuration::{Granularity, OrbitDegreeTable, Placement, SubgraphConfiguration};
pub use error::{Error, Result};
pub use graph::Graph;
pub use models::ModelVariant;
pub use motif::{CanonCode, Motif, SmallGraph};
