use sha2::{Digest, Sha256};

/// Hex SHA-256 of a value's canonical JSON encoding; used to stamp configs
/// into manifests and to check scenario identity across runs.
pub fn hash_json<T: serde::Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("serializable config");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
