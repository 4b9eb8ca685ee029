use std::fs;
use std::path::Path;

use ridgeflow::PipelineParams;

use crate::error::{CliError, CliResult};

/// Defaults, then the config file, then each `key=value` override.
pub fn load_params(config: Option<&Path>, overrides: &[String]) -> CliResult<PipelineParams> {
    let mut params = PipelineParams::default();
    if let Some(path) = config {
        let text = fs::read_to_string(path).map_err(|e| CliError::unreadable(path, e))?;
        params.apply_config(&text)?;
    }
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Argument(format!("expected key=value, got {item:?}")))?;
        params.set(key.trim(), value.trim())?;
    }
    params.validate()?;
    Ok(params)
}
