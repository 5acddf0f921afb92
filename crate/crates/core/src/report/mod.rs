//! Config ingestion, check orchestration and report rendering.

mod config;
mod render;
mod run;

pub use config::{digest, parse_points, Check, CheckConfig, CheckSection, ConfigFile, Document, Subject, DEFAULT_GRID};
pub use render::{render_report, Format};
pub use run::{run_checks, CheckReport, ObstructionReport, PointDefect, Status};
