use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// A pass/fail property checked by an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Assertion { name: name.into(), passed, detail }
    }
}

/// Column-aligned plain-text table.
pub(crate) fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            let pad = w[i] - c.chars().count();
            let _ = write!(s, "{}{}", c, " ".repeat(pad + 2));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    out += &line(w.iter().map(|n| "-".repeat(*n)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

/// Tab-separated rows with a header line.
pub(crate) fn tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join("\t") + "\n";
    for r in rows {
        out += &(r.join("\t") + "\n");
    }
    out
}

pub(crate) fn assertions_text(a: &[Assertion]) -> String {
    let mut s = String::new();
    for x in a {
        let _ = writeln!(s, "[{}] {}: {}", if x.passed { "pass" } else { "FAIL" }, x.name, x.detail);
    }
    s
}

pub(crate) fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into())
}
