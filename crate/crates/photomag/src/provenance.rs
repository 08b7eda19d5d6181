//! SHA-256 of the canonical config, stamped on every output file.

use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn config_hash(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(cfg.provenance_text().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// `# ` comment lines that lead every CSV and PGM file.
pub fn header_lines(cfg: &RunConfig, what: &str) -> Vec<String> {
    vec![
        format!("# photomag {TOOL_VERSION} {what}"),
        format!("# config-sha256 {}", config_hash(cfg)),
    ]
}

/// Extracts the hash from a file's header, if present.
pub fn read_hash(text: &str) -> Option<&str> {
    text.lines().find_map(|l| l.strip_prefix("# config-sha256 ")).map(str::trim)
}
