use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Record of one invocation. Re-running with the same command line and
/// inputs reproduces `output_digest`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    /// SHA-256 of every file argument, keyed by path.
    pub input_digests: BTreeMap<String, String>,
    pub wall_time_ms: u64,
    /// SHA-256 of the JSON written to standard output.
    pub output_digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    /// `manifest_path` is the manifest's own path, never counted as an input.
    pub fn new(command_line: Vec<String>, manifest_path: &str, seed: Option<u64>, output: &str, wall_time_ms: u64) -> Self {
        let versions = BTreeMap::from([
            ("rpp-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("rpp-core".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ]);
        // Any argument naming an existing file counts as an input.
        let input_digests = command_line
            .iter()
            .skip(1)
            .filter(|a| a.as_str() != manifest_path)
            .filter_map(|a| std::fs::read(a).ok().map(|b| (a.clone(), sha256_hex(&b))))
            .collect();
        Self {
            command_line,
            seed,
            versions,
            input_digests,
            wall_time_ms,
            output_digest: sha256_hex(output.as_bytes()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
