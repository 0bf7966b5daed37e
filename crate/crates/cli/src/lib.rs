//! Library behind the `ym2` command: job handling, engine dispatch, the
//! regression table of explicit `U(N)` expectations and limit studies.

pub mod compare;
pub mod error;
pub mod job;
pub mod limits;
pub mod mm;
pub mod run;
pub mod table;

pub use error::{CliError, ErrorKind};
pub use job::{word_with_defaults, Engine, JobSpec, OutputFormat};
pub use run::{run, run_master, MasterOptions, MasterRoute, Report, CSV_HEADER, SCHEMA_VERSION};
