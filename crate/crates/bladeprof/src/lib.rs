//! Run specifications, CSV/SVG output and the command-line front end for
//! [`bladeprof_core`].

pub mod checks;
pub mod cli;
pub mod config;
pub mod csv;
pub mod svg;

pub use cli::run_cli;
pub use config::{parse_run_spec, ConfigError, Problem, RunSpec};
pub use csv::{write_csv, CsvData, CsvError};
pub use svg::{render_svg, BladeShape, RenderOptions};
