//! Plain-text numeric tables: `key = value` header lines, `#` comments,
//! whitespace-separated rows. Numbers use shortest round-trip formatting;
//! invalid entries are written as `nan`.

use std::fmt::Write as _;

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn parse_f64(token: &str) -> Option<f64> {
    match token {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

/// Builder for one table file.
#[derive(Debug, Default, Clone)]
pub struct Table {
    text: String,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    pub fn columns<S: AsRef<str>>(&mut self, names: &[S]) -> &mut Self {
        self.text.push('#');
        for n in names {
            self.text.push(' ');
            self.text.push_str(n.as_ref());
        }
        self.text.push('\n');
        self
    }

    pub fn comment(&mut self, line: &str) -> &mut Self {
        let _ = writeln!(self.text, "# {line}");
        self
    }

    pub fn row(&mut self, values: impl IntoIterator<Item = f64>) -> &mut Self {
        let mut first = true;
        for v in values {
            if !first {
                self.text.push(' ');
            }
            first = false;
            self.text.push_str(&fmt_f64(v));
        }
        self.text.push('\n');
        self
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Parsed table: header entries in order, then numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub meta: Vec<(String, String)>,
    pub rows: Vec<Vec<f64>>,
}

impl ParsedTable {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_table(text: &str) -> Result<ParsedTable, String> {
    let mut meta = Vec::new();
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            if !rows.is_empty() {
                return Err(format!("line {}: header entry after data rows", lineno + 1));
            }
            meta.push((k.trim().to_string(), v.trim().to_string()));
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_f64(t).ok_or_else(|| format!("line {}: bad number '{t}'", lineno + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(ParsedTable { meta, rows })
}
