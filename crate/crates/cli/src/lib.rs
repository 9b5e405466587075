//! File formats, exporters and the command line for CHFIS surfaces.

pub mod cli;
pub mod export;
pub mod format;

pub use cli::{run, CliError};
pub use export::{read_grid_csv, write_grid_csv, write_heightmap_pgm, GridSource, GridTable};
pub use format::{fmt_g17, parse_dataset, write_dataset, DatasetFile, FileParams, FormatError};
