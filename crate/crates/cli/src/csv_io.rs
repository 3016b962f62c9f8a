//! Comma-separated output with `#` metadata lines and 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use cnd_core::make_grid;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// Metadata lines without the leading `# `.
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        }
        std::fs::write(path, self.to_csv()).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let metadata = text
            .lines()
            .filter_map(|l| l.strip_prefix('#'))
            .map(|l| l.strip_prefix(' ').unwrap_or(l).to_string())
            .collect();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(text.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::Data(format!("csv header: {e}")))?
            .iter()
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::Data(format!("csv row {}: {e}", i + 1)))?;
            let row = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::Data(format!("csv row {}: {e}", i + 1)))?;
            rows.push(row);
        }
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::parse(&text)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let c = self
            .columns
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CliError::Data(format!("no column '{name}'")))?;
        Ok(self.rows.iter().map(|r| r[c]).collect())
    }

    /// Uniform cell width inferred from the `x` column.
    pub fn spacing(&self) -> Result<f64, CliError> {
        let x = self.column("x")?;
        match x.as_slice() {
            [a, b, ..] if b > a => Ok(b - a),
            [_] => Err(CliError::Data("cannot infer spacing from a single row".into())),
            _ => Err(CliError::Data("x column must be increasing".into())),
        }
    }

    /// Every non-`x` column sampled at the nearest cell to each point of `x`.
    pub fn sample_onto(&self, x: &[f64]) -> Result<Vec<(String, Vec<f64>)>, CliError> {
        let own_x = self.column("x")?;
        let dx = self.spacing()?;
        let grid = make_grid(own_x[0] - 0.5 * dx, own_x[own_x.len() - 1] + 0.5 * dx, own_x.len())
            .map_err(|e| CliError::Data(e.to_string()))?;
        let index: Vec<usize> = x.iter().map(|&xi| grid.nearest_cell(xi)).collect();
        Ok(self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, n)| n.as_str() != "x")
            .map(|(c, n)| (n.clone(), index.iter().map(|&j| self.rows[j][c]).collect()))
            .collect())
    }
}
