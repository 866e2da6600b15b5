//! Advisory result cache: one file per (space hash, command, parameters),
//! storing the exact output bytes. Deleting the directory is always safe.

use sha2::{Digest, Sha256};

use maghom::space::space_to_json;
use maghom::QuasiMetricSpace;

/// Content hash over the canonical space document, the command name, its
/// parameters, and the crate version.
pub fn cache_key(space: Option<&QuasiMetricSpace>, command: &str, params: &str) -> String {
    let mut hasher = Sha256::new();
    if let Some(space) = space {
        hasher.update(space_to_json(space, false).to_string().as_bytes());
    }
    hasher.update(command.as_bytes());
    hasher.update(params.as_bytes());
    hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
    hex::encode(hasher.finalize())
}

pub fn lookup(dir: &str, key: &str) -> Option<String> {
    std::fs::read_to_string(format!("{}/{}.out", dir, key)).ok()
}

pub fn store(dir: &str, key: &str, output: &str) {
    // Best effort: a failed write only loses the cache entry.
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(format!("{}/{}.out", dir, key), output);
    }
}
