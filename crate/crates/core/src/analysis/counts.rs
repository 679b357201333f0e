use crate::error::{Error, Result};

/// Which field of a CSV count file holds the counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountColumn {
    /// Zero-based field index; a non-numeric first row is taken as a header.
    Index(usize),
    /// Header name.
    Name(String),
}

impl CountColumn {
    /// Digits select by index, anything else by header name.
    pub fn parse(s: &str) -> Self {
        match s.parse() {
            Ok(i) => CountColumn::Index(i),
            Err(_) => CountColumn::Name(s.to_string()),
        }
    }
}

fn number(field: &str, line: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse(format!("line {line}: {field:?} is not a number")))
}

/// Reads counts: one number per line (`#` comments allowed), or one CSV
/// column when `column` is given.
pub fn parse_counts(text: &str, column: Option<&CountColumn>) -> Result<Vec<f64>> {
    let Some(column) = column else {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                out.push(number(line, i + 1)?);
            }
        }
        return Ok(out);
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = reader.records();
    let mut out = Vec::new();
    let index = match column {
        CountColumn::Index(i) => *i,
        CountColumn::Name(name) => {
            let header = rows
                .next()
                .ok_or_else(|| Error::Parse("empty count file".into()))?
                .map_err(|e| Error::Parse(e.to_string()))?;
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Parse(format!("no column named {name:?}")))?
        }
    };
    for (row_no, row) in rows.enumerate() {
        let row = row.map_err(|e| Error::Parse(e.to_string()))?;
        let line = row.position().map_or(row_no + 1, |p| p.line() as usize);
        let field = row.get(index).ok_or_else(|| Error::Parse(format!("line {line}: no field {index}")))?;
        match number(field, line) {
            Ok(v) => out.push(v),
            Err(_) if row_no == 0 && matches!(column, CountColumn::Index(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
