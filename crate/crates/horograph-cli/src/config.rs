//! Run provenance. Every artifact records the hash of the configuration
//! that produced it, so outputs can be traced back and reruns compared.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Tool name and version, as stamped into artifacts.
pub fn tool() -> String {
    format!("horograph {}", env!("CARGO_PKG_VERSION"))
}

/// First twelve hex digits of the SHA-256 of the canonical JSON encoding
/// of `config`. Encoding goes through `serde_json::Value`, whose object
/// keys are sorted, so the hash does not depend on field order.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let value = serde_json::to_value(config).expect("config encodes as JSON");
    let digest = Sha256::digest(value.to_string().as_bytes());
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

/// Comment payload identifying a run.
pub fn stamp(hash: &str) -> String {
    format!("config {hash} {}", tool())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_ignores_key_order() {
        let a = json!({ "h": 0.1, "cap": 4.0 });
        let b = json!({ "cap": 4.0, "h": 0.1 });
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 12);
    }

    #[test]
    fn hash_sees_value_changes() {
        let a = json!({ "cap": 4.0 });
        let b = json!({ "cap": 8.0 });
        assert_ne!(config_hash(&a), config_hash(&b));
    }
}
