//! Library side of the `drlift` command: instance loading, the run and
//! verify pipelines, record encodings and the scaling fits.

pub mod error;
pub mod record;
pub mod run;
pub mod scaling;
pub mod verify;

use std::path::Path;

use drlift::instance::{parse_instance, InstanceSpec};

pub use error::{CliError, CliResult};

/// Reads and parses an instance file. A missing `id` defaults to the file stem.
pub fn load_instance(path: &Path) -> CliResult<InstanceSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut spec = parse_instance(&text)?;
    if spec.id.is_none() {
        spec.id = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(spec)
}
