//! The self-describing report document and its text rendering.

use lojacobi::polyops::{Poly, Ring};
use lojacobi::suite::Status;
use serde_json::{json, Map, Value};

use crate::cache::CODE_VERSION;

pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub status: Status,
    /// Run-specific facts kept out of `results` (cache use, timings).
    pub run: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.into(),
            inputs: inputs.as_object().cloned().unwrap_or_default(),
            results: Value::Null,
            status: Status::Pass,
            run: Map::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut provenance = Map::new();
        provenance.insert("version".into(), json!(CODE_VERSION));
        provenance.insert("timestamp".into(), json!(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)));
        provenance.extend(self.run.clone());
        json!({
            "schema": 1,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "status": self.status.name(),
            "provenance": provenance,
        })
    }

    pub fn to_text(&self) -> String {
        let doc = self.to_json();
        let mut rows: Vec<(String, String)> = vec![
            ("command".into(), self.command.clone()),
            ("status".into(), self.status.name().into()),
        ];
        flatten("inputs", &doc["inputs"], &mut rows);
        flatten("results", &doc["results"], &mut rows);
        flatten("provenance", &doc["provenance"], &mut rows);
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.into(), items.join(", ")));
        }
        _ => out.push((prefix.into(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

/// Polynomial text without zero exponents or unit coefficients, e.g. `-√6*z*wb^2`.
pub fn compact<R: Ring>(p: &Poly<R>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (m, c)) in p.terms().rev().enumerate() {
        let vars: Vec<String> = (0..4)
            .filter(|&k| m.0[k] > 0)
            .map(|k| if m.0[k] == 1 { R::GENERATORS[k].to_string() } else { format!("{}^{}", R::GENERATORS[k], m.0[k]) })
            .collect();
        let coeff = c.pretty();
        let (neg, body) = match coeff.strip_prefix('-') {
            Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => (true, rest.to_string()),
            _ => (false, coeff.clone()),
        };
        let body = if body.contains(" + ") || body.contains(" - ") { format!("({body})") } else { body };
        let term = match (body.as_str(), vars.is_empty()) {
            (b, true) => b.to_string(),
            ("1", false) => vars.join("*"),
            (b, false) => format!("{b}*{}", vars.join("*")),
        };
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lojacobi::numfield::FieldElem;
    use lojacobi::polyops::{Monomial, SpherePoly};

    #[test]
    fn compact_text() {
        let p = SpherePoly::from_terms([
            (Monomial([1, 0, 0, 0]), FieldElem::one()),
            (Monomial([0, 0, 0, 2]), -FieldElem::sqrt_radicand(6).unwrap()),
        ]);
        let s = compact(&p);
        assert_eq!(s, "-√6*wb^2 + z");
        assert_eq!(compact(&SpherePoly::var(1)), "zb");
        assert_eq!(compact(&SpherePoly::zero()), "0");
    }

    #[test]
    fn text_rendering() {
        let mut r = Report::new("inertia", json!({"k": 3}));
        r.results = json!({"inertia": {"plus": 40, "zero": 8, "minus": 0}, "list": [1, 2]});
        let t = r.to_text();
        assert!(t.contains("results.inertia.plus"));
        assert!(t.contains("results.list"));
        assert!(t.lines().any(|l| l.starts_with("status") && l.ends_with("pass")));
    }
}
