//! Command line front end: edge-list ingestion, the analysis pipeline, report
//! writing and the benchmark generators.

pub mod config;
pub mod error;
pub mod generate;
pub mod ingest;
pub mod report;
pub mod run;

pub use config::{FileConfig, GeneratorSpec, RunConfig, RunOverrides};
pub use error::{CliError, CliResult};
pub use generate::{generate, generate_to};
pub use ingest::{ingest_edge_list, parse_edge_list, Ingested};
pub use run::{analyze, run};
