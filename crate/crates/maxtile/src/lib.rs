//! File formats, run manifests and the `maxtile` command line on top of
//! [`maxtile_core`].

pub mod cli;
pub mod config_file;
pub mod io;
pub mod manifest;
pub mod model_file;
pub mod report;
pub mod tile_file;

pub use maxtile_core as core;
