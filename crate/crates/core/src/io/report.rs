use std::fmt;

use sha2::{Digest, Sha256};

/// Machine-readable summary of one CLI run: `key: value` lines in a fixed
/// order, then an optional payload after a `---` line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub operation: String,
    pub inputs_sha256: String,
    pub outcome: String,
    pub fields: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub timing_ms: Option<u128>,
    pub payload: Option<String>,
}

impl RunReport {
    pub fn new(operation: &str, inputs_sha256: String) -> Self {
        RunReport { operation: operation.to_string(), inputs_sha256, ..Default::default() }
    }

    pub fn field(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn warn(&mut self, msg: impl Into<String>) -> &mut Self {
        self.warnings.push(msg.into());
        self
    }

    /// The report without the timing line, for comparing runs.
    pub fn stable(&self) -> String {
        RunReport { timing_ms: None, ..self.clone() }.to_string()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operation: {}", self.operation)?;
        writeln!(f, "inputs_sha256: {}", self.inputs_sha256)?;
        writeln!(f, "outcome: {}", self.outcome)?;
        for (k, v) in &self.fields {
            writeln!(f, "{}: {}", k, v)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {}", w)?;
        }
        if let Some(t) = self.timing_ms {
            writeln!(f, "timing_ms: {}", t)?;
        }
        if let Some(p) = &self.payload {
            writeln!(f, "---")?;
            f.write_str(p)?;
        }
        Ok(())
    }
}

/// SHA-256 over the inputs in order, each framed by its length.
pub fn inputs_digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}
