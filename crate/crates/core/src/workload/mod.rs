//! Update streams, run orchestration and report serialization.

use thiserror::Error;

use crate::engine::EngineError;

pub mod bench;
pub mod generate;
pub mod report;
pub mod run;
pub mod stream;

pub use bench::{bench, BenchTable, CellSummary, SweepCell};
pub use generate::{generate, StreamModel};
pub use report::{emit_report, emit_table, ReportFormat, CSV_COLUMNS, CSV_LEVEL_FIELDS};
pub use run::{run, AuditPolicy, RunOptions, RunReport};
pub use stream::{parse_stream, write_stream, StreamHeader};

#[derive(Debug, Error)]
pub enum WorkloadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("stream has no header line")]
    HeaderMissing,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("event {index}: {source}")]
    InvalidEvent { index: usize, source: EngineError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
