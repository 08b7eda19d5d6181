//! Minimal CSV emission with a provenance comment header, plus the
//! absorption-table reader.

use std::fmt::Display;
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new().flexible(false).from_writer(Vec::new());
        // writing into a Vec cannot fail and every row has the header's width
        w.write_record(&self.header).expect("in-memory CSV write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory CSV write");
        }
        let bytes = w.into_inner().expect("in-memory CSV flush");
        out.push_str(&String::from_utf8(bytes).expect("CSV of UTF-8 fields"));
        out
    }

    pub fn write(&self, path: &Path, comments: &[String]) -> Result<()> {
        std::fs::write(path, self.render(comments)).map_err(|e| CliError::io(path, e))
    }
}

/// Shortest round-trip representation.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt<T: Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Reads `wavelength_nm,absorption` rows; `#` comments and a non-numeric
/// header line are skipped.
pub fn parse_absorption_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (n, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Format(format!("absorption table: {e}")))?;
        let line = rec.position().map_or(n + 1, |p| p.line() as usize);
        let (a, b) = (rec.get(0).unwrap_or(""), rec.get(1).unwrap_or(""));
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(nm), Ok(abs)) => rows.push((nm, abs)),
            (Err(_), _) if rows.is_empty() => continue,
            _ => {
                return Err(CliError::Format(format!(
                    "absorption table line {line}: expected `nm,absorption`, got {:?}",
                    rec.iter().collect::<Vec<_>>().join(",")
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Format("absorption table has no rows".into()));
    }
    Ok(rows)
}

pub fn load_absorption_table(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_absorption_table(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_with_header() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![num(1.5), "x,y".into()]);
        assert_eq!(t.render(&["# h".into()]), "# h\na,b\n1.5,\"x,y\"\n");
    }

    #[test]
    fn absorption_rows() {
        let t = parse_absorption_table("# comment\nwavelength_nm,absorption\n1200,0.05\n1300, 0.12\n").unwrap();
        assert_eq!(t, vec![(1200.0, 0.05), (1300.0, 0.12)]);
        assert!(parse_absorption_table("1200,0.05\n1300,abc").is_err());
        assert!(parse_absorption_table("# nothing").is_err());
    }
}
