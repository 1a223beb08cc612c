use serde::{Deserialize, Serialize};

/// Provenance block attached to every output.
///
/// The timestamp is the only field outside the determinism contract. It is
/// serialized last and on a line of its own so that [`strip_timestamp`] can
/// drop it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new<P: Serialize>(
        command: &str,
        params: &P,
        seed: Option<u64>,
    ) -> serde_json::Result<Self> {
        Ok(Self {
            command: command.to_string(),
            params: serde_json::to_value(params)?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        })
    }

    /// `#`-prefixed header lines for CSV output.
    pub fn csv_header(&self) -> serde_json::Result<String> {
        let seed = self
            .seed
            .map_or_else(|| "none".to_string(), |s| s.to_string());
        Ok(format!(
            "# command: {}\n# params: {}\n# seed: {}\n# version: {}\n# timestamp: {}\n",
            self.command,
            serde_json::to_string(&self.params)?,
            seed,
            self.version,
            self.timestamp
        ))
    }
}

/// Removes the manifest timestamp line from CSV or pretty-printed JSON text.
pub fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| {
            let t = l.trim_start();
            !(t.starts_with("# timestamp:") || t.starts_with("\"timestamp\":"))
        })
        .map(|l| format!("{l}\n"))
        .collect()
}
