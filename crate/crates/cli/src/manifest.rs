//! Run manifests: enough information to re-run a command and check that it reproduces its output.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dmbst::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Subcommand name, e.g. `nkry` or `gadget audit`.
    pub command: String,
    /// Arguments after the program name, excluding `--manifest` and its value.
    pub flags: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    /// Digest of the primary output; `path` is `-` for standard output.
    pub outputs: Vec<FileDigest>,
    pub wall_time_ms: f64,
    pub artifact_version: String,
}

pub const ARTIFACT_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse_manifest(text: &str) -> Result<RunManifest> {
    let m: RunManifest = serde_json::from_str(text)?;
    if m.flags.is_empty() {
        return Err(Error::InvalidInput("manifest has no recorded arguments".into()));
    }
    if m.outputs.iter().chain(&m.inputs).any(|d| d.sha256.len() != 64 || !d.sha256.bytes().all(|c| c.is_ascii_hexdigit())) {
        return Err(Error::InvalidInput("manifest digests must be 64 hex digits".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn manifest_validation() {
        assert!(parse_manifest("{}").is_err());
        let good = RunManifest {
            command: "mst".into(),
            flags: vec!["mst".into(), "a.json".into()],
            seed: 0,
            inputs: vec![FileDigest { path: "a.json".into(), sha256: sha256_hex(b"x") }],
            outputs: vec![],
            wall_time_ms: 1.0,
            artifact_version: ARTIFACT_VERSION.into(),
        };
        let text = serde_json::to_string(&good).unwrap();
        assert_eq!(parse_manifest(&text).unwrap(), good);
        let bad = text.replace(&good.inputs[0].sha256, "zz");
        assert!(parse_manifest(&bad).is_err());
    }
}
