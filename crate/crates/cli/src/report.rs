use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// The document every command emits. Maps are ordered, numbers are integers
/// and exact scalars are strings, so rendering is deterministic.
///
/// Fields are declared in key order so a generic JSON re-rendering matches.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: Vec<String>,
    pub config: BTreeMap<String, Value>,
    pub passed: bool,
    pub symbolic: BTreeMap<String, String>,
    pub tables: BTreeMap<String, Table>,
    pub verdicts: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }
}

impl ReportDocument {
    pub fn new(command: Vec<String>, field: &str) -> ReportDocument {
        let mut doc = ReportDocument {
            command,
            ..Default::default()
        };
        doc.config.insert("field".into(), Value::from(field));
        doc
    }

    pub fn config(&mut self, key: &str, v: impl Into<Value>) {
        self.config.insert(key.into(), v.into());
    }

    pub fn verdict(&mut self, key: &str, ok: bool) {
        self.verdicts.insert(key.into(), ok);
    }

    /// `passed` is the conjunction of all verdicts.
    pub fn seal(mut self) -> ReportDocument {
        self.passed = self.verdicts.values().all(|v| *v);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ rabcone {}", self.command.join(" "));
        for (k, v) in &self.config {
            let _ = writeln!(out, "  {k}: {}", plain(v));
        }
        for (name, t) in &self.tables {
            let _ = writeln!(out, "\n{name}");
            let _ = writeln!(out, "  {}", t.columns.join("\t"));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(plain).collect();
                let _ = writeln!(out, "  {}", cells.join("\t"));
            }
        }
        if !self.symbolic.is_empty() {
            let _ = writeln!(out);
            for (k, v) in &self.symbolic {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        let _ = writeln!(out);
        for (k, v) in &self.verdicts {
            let _ = writeln!(out, "[{}] {k}", if *v { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportDocument {
        let mut d = ReportDocument::new(vec!["rab".into(), "F(0)".into()], "q");
        d.config("window", serde_json::json!([-8, 8]));
        let mut t = Table::new(&["degree", "entry"]);
        t.push(vec![Value::from(-1), Value::from("1/(1 - t)")]);
        d.tables.insert("H0".into(), t);
        d.symbolic.insert("H0".into(), "LS".into());
        d.verdict("ok", true);
        d.seal()
    }

    #[test]
    fn json_round_trips_byte_for_byte() {
        let doc = sample();
        let s = doc.to_json();
        let back: ReportDocument = serde_json::from_str(&s).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), s);
        let generic: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string_pretty(&generic).unwrap() + "\n", s);
    }

    #[test]
    fn seal_is_conjunction() {
        let mut d = sample();
        d.verdict("bad", false);
        assert!(!d.seal().passed);
        assert!(ReportDocument::new(vec![], "q").seal().passed);
    }
}
