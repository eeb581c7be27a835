use std::fs;
use std::path::PathBuf;

use serde_json::{Map, Value};

/// Reals with 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Short human form: rounds to 12 significant digits, so `1.0000000000000002`
/// prints as `1`.
pub fn short(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    rounded.to_string()
}

#[derive(Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Binary PGM, white where the mask is set.
pub fn pgm(width: usize, height: usize, mask: &[bool]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(mask.iter().map(|&m| if m { 255u8 } else { 0 }));
    out
}

/// Collects artifacts and the key metrics of one run.
pub struct Report {
    pub subcommand: &'static str,
    pub pass: bool,
    pub metrics: Map<String, Value>,
    out_dir: Option<PathBuf>,
}

impl Report {
    pub fn new(subcommand: &'static str, out_dir: Option<PathBuf>) -> Self {
        Report {
            subcommand,
            pass: true,
            metrics: Map::new(),
            out_dir,
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }

    /// Writes `name` under the output directory, if one was given.
    pub fn artifact(&mut self, name: &str, bytes: &[u8]) -> Result<(), String> {
        let Some(dir) = &self.out_dir else {
            return Ok(());
        };
        fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))
    }

    pub fn summary(&self) -> String {
        serde_json::json!({
            "subcommand": self.subcommand,
            "pass": self.pass,
            "key_metrics": Value::Object(self.metrics.clone()),
        })
        .to_string()
    }
}
