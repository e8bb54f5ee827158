use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{manifest_path, Result};
use crate::io::{hex_digest, write_output, Input};

#[derive(Clone, Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce an output: written as
/// `<output>.manifest.json` next to it. Contains no timestamps.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub flags: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, flags: &impl Serialize) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            flags: serde_json::to_value(flags).unwrap_or(serde_json::Value::Null),
            seeds: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn seed(mut self, name: &str, value: u64) -> Self {
        self.seeds.insert(name.into(), value);
        self
    }

    pub fn input(mut self, input: &Input) -> Self {
        self.inputs.push(FileDigest {
            path: input.path.display().to_string(),
            sha256: input.sha256.clone(),
        });
        self
    }

    pub fn inputs<'a>(self, inputs: impl IntoIterator<Item = &'a Input>) -> Self {
        inputs.into_iter().fold(self, RunManifest::input)
    }

    pub fn note(mut self, key: &str, value: &str) -> Self {
        self.notes.insert(key.into(), value.into());
        self
    }

    /// Writes `text` to `out` and the manifest beside it.
    pub fn write_with(mut self, out: &Path, text: &str) -> Result<()> {
        write_output(out, text)?;
        self.outputs.push(FileDigest {
            path: out.display().to_string(),
            sha256: hex_digest(text.as_bytes()),
        });
        let mut json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        json.push('\n');
        write_output(&manifest_path(out), &json)
    }
}
