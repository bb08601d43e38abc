use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Fail;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Every flag of every command, as read from a JSON config file.
/// Command-line flags override these.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub order: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub nmax: Option<usize>,
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub restarts: Option<usize>,
    pub atoms: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub suite: Option<String>,
    pub population: Option<usize>,
    pub f: Option<String>,
    pub mn: Option<f64>,
    pub rings: Option<usize>,
    pub spokes: Option<usize>,
    pub max_radius: Option<f64>,
    pub kmax: Option<usize>,
    pub t: Option<f64>,
    pub m: Option<usize>,
    pub grid: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Fail> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Fail::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Keeps `flag` when given, else falls back to the file value.
pub fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

/// What every output artifact starts with.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
    pub params: serde_json::Value,
}

impl Header {
    pub fn new(command: &str, seed: u64, params: serde_json::Value) -> Self {
        let canonical = serde_json::json!({ "command": command, "seed": seed, "params": params });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config_hash: hex::encode(digest),
            params,
        }
    }

    pub fn csv_lines(&self) -> String {
        format!(
            "# {} {} command={} seed={} config_hash={}\n# params={}\n",
            self.tool, self.version, self.command, self.seed, self.config_hash, self.params
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_on_params_only_through_content() {
        let a = Header::new("optimize", 7, serde_json::json!({ "n": 2 }));
        let b = Header::new("optimize", 7, serde_json::json!({ "n": 2 }));
        let c = Header::new("optimize", 8, serde_json::json!({ "n": 2 }));
        assert_eq!(a.config_hash, b.config_hash);
        assert_ne!(a.config_hash, c.config_hash);
        assert_eq!(a.config_hash.len(), 64);
    }

    #[test]
    fn flags_override_file() {
        assert_eq!(pick(&Some(3), &Some(4)), Some(3));
        assert_eq!(pick(&None, &Some(4)), Some(4));
        assert_eq!(pick::<u8>(&None, &None), None);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"sed": 1}"#).is_err());
        let c: FileConfig = serde_json::from_str(r#"{"seed": 1, "format": "csv"}"#).unwrap();
        assert_eq!(c.format, Some(Format::Csv));
    }
}
