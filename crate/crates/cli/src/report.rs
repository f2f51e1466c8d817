use std::collections::BTreeMap;

use hilbfock::report::TheoremReport;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CheckSummary {
    pub checked: usize,
    pub failed: usize,
}

/// The JSON document printed by every command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_hash: Option<String>,
    pub parameters: BTreeMap<String, String>,
    /// `pass`, `fail` or `error`.
    pub status: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, CheckSummary>,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            model: None,
            model_hash: None,
            parameters: BTreeMap::new(),
            status: "pass".into(),
            checks: BTreeMap::new(),
            witnesses: Vec::new(),
            error: None,
            result: None,
            timing_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn absorb(&mut self, rep: &TheoremReport) {
        for (name, c) in &rep.checks {
            let s = self.checks.entry(name.clone()).or_insert(CheckSummary {
                checked: 0,
                failed: 0,
            });
            s.checked += c.checked;
            s.failed += c.failed;
        }
        self.witnesses.extend(rep.witnesses());
        if !rep.passed() {
            self.status = "fail".into();
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn render(&self, pretty: bool) -> String {
        if !pretty {
            return serde_json::to_string(self).expect("report serializes");
        }
        let mut out = format!("{}: {}\n", self.command, self.status);
        if let Some(m) = &self.model {
            out += &format!("model: {m}\n");
        }
        for (k, v) in &self.parameters {
            out += &format!("  {k} = {v}\n");
        }
        for (k, c) in &self.checks {
            out += &format!("  {k}: {} checked, {} failed\n", c.checked, c.failed);
        }
        for w in &self.witnesses {
            out += &format!("  witness: {w}\n");
        }
        if let Some(e) = &self.error {
            out += &format!("error: {e}\n");
        }
        if let Some(r) = &self.result {
            out += &serde_json::to_string_pretty(r).expect("result serializes");
            out.push('\n');
        }
        if let Some(t) = self.timing_ms {
            out += &format!("time: {t} ms\n");
        }
        out.trim_end().to_string()
    }
}
