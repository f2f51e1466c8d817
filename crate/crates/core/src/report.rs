//! Pass/fail accounting shared by the verifiers.

use std::collections::BTreeMap;

use serde::Serialize;

/// Witnesses kept per report; further failures are only counted.
const WITNESS_CAP: usize = 20;

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.failed += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for w in other.witnesses {
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(w);
            }
        }
    }
}

/// Named sub-checks of one verification run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TheoremReport {
    pub checks: BTreeMap<String, CheckReport>,
}

impl TheoremReport {
    pub fn check(&mut self, name: &str) -> &mut CheckReport {
        self.checks.entry(name.to_string()).or_default()
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(CheckReport::passed)
    }

    /// Records audit violations under `audit`, one check per table.
    pub fn audit(&mut self, violations: Vec<String>) {
        let a = self.check("audit");
        a.checked += 1;
        for v in violations {
            a.fail(v);
        }
    }

    pub fn merge(&mut self, other: TheoremReport) {
        for (k, v) in other.checks {
            self.checks.entry(k).or_default().merge(v);
        }
    }

    pub fn witnesses(&self) -> Vec<String> {
        self.checks
            .iter()
            .flat_map(|(k, v)| v.witnesses.iter().map(move |w| format!("{k}: {w}")))
            .collect()
    }
}
