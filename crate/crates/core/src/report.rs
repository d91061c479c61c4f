//! Line-oriented records shared by the command-line front end.
//!
//! A [`Record`] is an ordered list of key/value pairs. It prints as
//! `key=value` lines, and a slice of records prints as CSV whose header is
//! the union of keys in first-seen order.

use std::fmt::{self, Display};

use crate::block::{LinearBlockCode, MinDistance};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing an earlier value in place.
    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        let value = value.to_string();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
        self
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.set(key, value);
        self
    }

    /// Sets `key` only when there is a value.
    pub fn set_opt<T: Display>(&mut self, key: &str, value: Option<T>) -> &mut Self {
        if let Some(v) = value {
            self.set(key, v);
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn to_kv(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Inverse of [`Record::to_kv`]; blank lines and `#` comments are skipped.
    pub fn parse_kv(text: &str) -> Result<Self> {
        let mut r = Self::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("'{line}' is not key=value")))?;
            if k.is_empty() {
                return Err(Error::Parse(format!("empty key in '{line}'")));
            }
            r.set(k, v);
        }
        Ok(r)
    }
}

impl Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kv())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Records as CSV; a key missing from a record leaves its cell empty.
pub fn to_csv(records: &[Record]) -> String {
    let mut header: Vec<&str> = Vec::new();
    for r in records {
        for k in r.keys() {
            if !header.contains(&k) {
                header.push(k);
            }
        }
    }
    let mut out = header.iter().map(|k| csv_field(k)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in records {
        let row: Vec<String> = header.iter().map(|k| csv_field(r.get(k).unwrap_or(""))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// The per-code record: graph identifier, `n`, `k`, rate and the distance.
/// An inexact distance is written as its bracket `lower..upper`.
pub fn code_record(graph: Option<&str>, code: &LinearBlockCode, d: Option<&MinDistance>) -> Record {
    let mut r = Record::new();
    r.set_opt("graph", graph);
    r.set("n", code.n())
        .set("k", code.k())
        .set("rate", code.rate());
    if let Some(d) = d {
        if d.exact {
            r.set("d_min", d.upper);
        } else {
            r.set("d_min", format!("{}..{}", d.lower, d.upper));
        }
        r.set("d_min_exact", d.exact);
    }
    r
}
