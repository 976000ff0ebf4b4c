//! Resolves the model configuration: stage flags beat the file, the file
//! beats the preset defaults.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use dfg_shaper::{ModelConfig, Preset};
use serde_json::Value;

use crate::args::{CommonArgs, ToggleArgs};

/// `fallback` is the preset used when neither `--preset` nor the file names one.
pub fn resolve(common: &CommonArgs, fallback: Preset) -> Result<ModelConfig> {
    let mut config = match &common.config {
        Some(path) => {
            let doc = read_document(path)?;
            let has_preset = doc.pointer("/pipeline/preset").is_some();
            let preset = common.preset.or((!has_preset).then_some(fallback));
            ModelConfig::from_value(doc, preset)
                .with_context(|| format!("invalid configuration in {}", path.display()))?
        }
        None => ModelConfig::preset(common.preset.unwrap_or(fallback)),
    };
    apply_toggles(&mut config, common.toggles);
    config.validate()?;
    Ok(config)
}

/// Reads a TOML file, a JSON configuration, or a run manifest (whose
/// `config` member is used).
fn read_document(path: &Path) -> Result<Value> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let doc: Value = if is_json {
        serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?
    } else {
        toml_document(&text).with_context(|| format!("{} is not valid TOML", path.display()))?
    };
    Ok(match doc {
        Value::Object(mut map) if map.contains_key("config") && map.contains_key("tool") => {
            map.remove("config").expect("checked above")
        }
        other => other,
    })
}

fn toml_document(text: &str) -> Result<Value> {
    Ok(toml::from_str(text)?)
}

fn apply_toggles(config: &mut ModelConfig, t: ToggleArgs) {
    let s = &mut config.pipeline.stages;
    s.envelope &= !t.no_envelope;
    s.window &= !t.no_window;
    s.shaper_resolution &= !t.no_shaper_res;
    s.dual_mode &= !t.no_dual_mode;
    s.dye_linewidth &= !t.no_dye_linewidth;
    s.spectrometer &= !t.no_spectrometer;
}
