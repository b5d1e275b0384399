use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Provenance of a run: the configuration echo and a SHA-256 of every output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub master_seed: u64,
    pub config: serde_json::Value,
    pub checksums: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, master_seed: u64, config: &impl Serialize) -> Result<Self> {
        Ok(Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed,
            config: serde_json::to_value(config)?,
            checksums: BTreeMap::new(),
        })
    }

    /// Writes `contents` to `dir/name` and records its checksum.
    pub fn write_output(&mut self, dir: &Path, name: &str, contents: &str) -> Result<()> {
        std::fs::write(dir.join(name), contents)?;
        self.checksums
            .insert(name.to_string(), sha256_hex(contents.as_bytes()));
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
