//! File formats, report rendering and the `spherolimb` command line.

pub mod cli;
pub mod render;
pub mod spec_file;

pub use render::{fmt_num, ReportFormat};
pub use spec_file::{parse_limb_spec, LimbSpecFile, ParseError, SpecError};
