//! Minimal CSV tables: `#` comment lines, one header row, comma-separated
//! fields without quoting (all emitted values are numbers or bare words).

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { comments: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Render; `meta = false` drops the comment lines.
    pub fn render(&self, meta: bool) -> String {
        let mut out = String::new();
        if meta {
            for c in &self.comments {
                out.push_str("# ");
                out.push_str(c);
                out.push('\n');
            }
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Table::default();
        for (i, line) in text.lines().enumerate() {
            if let Some(c) = line.strip_prefix('#') {
                t.comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<String> = line.split(',').map(str::to_string).collect();
            if t.header.is_empty() {
                t.header = fields;
            } else if fields.len() != t.header.len() {
                return Err(Error::Csv {
                    line: i + 1,
                    msg: format!("expected {} fields, found {}", t.header.len(), fields.len()),
                });
            } else {
                t.rows.push(fields);
            }
        }
        if t.header.is_empty() {
            return Err(Error::Csv { line: 0, msg: "missing header".into() });
        }
        Ok(t)
    }
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
