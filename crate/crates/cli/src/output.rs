//! Versioned output envelopes and atomic file writes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "hft";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Wraps a result with the provenance needed to reproduce it.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub config: &'a C,
    pub result: &'a R,
}

impl<'a, C: Serialize, R: Serialize> Envelope<'a, C, R> {
    pub fn new(command: &'a str, seed: u64, config: &'a C, result: &'a R) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            version: VERSION,
            command,
            seed,
            config,
            result,
        }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output is serializable");
        s.push('\n');
        s
    }

    /// `#`-prefixed provenance lines for CSV and text output.
    pub fn comment_header(&self) -> String {
        let cfg = serde_json::to_string(self.config).expect("config is serializable");
        format!(
            "# schema_version={} tool={} version={} command={} seed={}\n# config={}\n",
            self.schema_version, self.tool, self.version, self.command, self.seed, cfg
        )
    }
}

/// Minimal CSV: header plus rows of already-formatted cells.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Float formatting shared by CSV and text so both carry the JSON values.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        serde_json::to_string(&x).expect("finite floats serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = csv(&["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(s, "a,b\n1,2\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn numbers_round_trip() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1e-15), "1e-15");
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
