//! Output plumbing: full-precision number formatting, schema-tagged CSV,
//! and writing to a file or stdout.

use std::path::Path;

use anyhow::{Context, Result};

/// Formats an f64 with 17 significant digits, enough to round-trip exactly.
pub fn full(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// A CSV table with a `#schema=` comment line ahead of the header.
pub struct CsvTable {
    schema: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(schema: &str, header: &[&str]) -> Self {
        Self {
            schema: schema.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = format!("#schema={}\n", self.schema);
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes to the given path, or stdout when none.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_round_trips() {
        for &x in &[
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            -1.2345678901234567e-300,
            0.0,
        ] {
            let s = full(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn csv_has_schema_line() {
        let mut t = CsvTable::new("demo-v1", &["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        let text = t.render();
        assert!(text.starts_with("#schema=demo-v1\na,b\n1,2\n"));
    }
}
