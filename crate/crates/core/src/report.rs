//! Report assembly for the command-line interface: a deterministic text
//! rendering plus a single self-describing structured document per run.

use crate::galois::GaloisElement;
use serde_json::{json, Value};

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    entries: Vec<(String, Value)>,
    failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.lines
            .push(format!("[{}] {name}", if ok { "ok" } else { "FAIL" }));
        self.entries.push((format!("check:{name}"), json!(ok)));
        if !ok {
            self.failed = true;
        }
    }

    pub fn value(&mut self, name: &str, v: Value) {
        self.lines.push(format!("{name}: {}", render_value(&v)));
        self.entries.push((name.to_string(), v));
    }

    pub fn element(&mut self, name: &str, e: &GaloisElement) {
        let rendered = e.render();
        self.entries.push((
            format!("expr:{name}"),
            json!({
                "canonical": rendered,
                "components": e
                    .components()
                    .map(|(s, r)| {
                        json!({
                            "subset": s,
                            "numerator_terms": r.num.serialize_terms(),
                            "denominator": r
                                .den
                                .iter()
                                .map(|(f, e)| json!({"factor": format!("{f}"), "power": e}))
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect::<Vec<_>>(),
            }),
        ));
        self.lines.push(format!("{name}:"));
        for l in rendered.lines() {
            self.lines.push(format!("  {l}"));
        }
    }

    pub fn any_failed(&self) -> bool {
        self.failed
    }

    pub fn text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }

    pub fn structured(&self, command: &str) -> String {
        let mut doc = serde_json::Map::new();
        doc.insert("command".into(), json!(command));
        doc.insert("passed".into(), json!(!self.failed));
        for (k, v) in &self.entries {
            doc.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
