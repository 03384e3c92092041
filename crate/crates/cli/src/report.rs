//! Report assembly: JSON (schema 1) and a text rendering.
//!
//! ```text
//! {
//!   "schema": 1,
//!   "scenario": name,
//!   "seed": u64,
//!   "trunc": u32 or null,
//!   "tasks": [{
//!     "name", "kind", "claim",
//!     "verdict": "pass" | "fail" | "skip",
//!     "reason": string or null,
//!     "instances": number of checked instances,
//!     "certificate": task-specific data,
//!     "elapsed_ms": u64
//!   }],
//!   "summary": [{ "row", "statement", "verified", "instances", "tasks" }]
//! }
//! ```
//!
//! Everything except `elapsed_ms` is a function of the scenario text and the
//! seed.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub kind: String,
    pub claim: String,
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub instances: usize,
    pub certificate: Value,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub row: String,
    pub statement: String,
    /// `None` when no task in the scenario speaks to this row.
    pub verified: Option<bool>,
    pub instances: usize,
    pub tasks: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: String,
    pub seed: u64,
    pub trunc: Option<u32>,
    pub tasks: Vec<TaskReport>,
    pub summary: Vec<SummaryRow>,
}

/// `(row, statement, claims)`.
const ROWS: &[(&str, &str, &[&str])] = &[
    (
        "dimension",
        "dim S = n over a zero-dimensional base; minimal primes are extended maximal ideals; catenary on monomial chains",
        &["dimension", "minimal-primes", "catenary", "krull-bound"],
    ),
    ("flatness", "S is faithfully flat over R", &["faithful-flatness"]),
    (
        "cohen-macaulay",
        "height-generated ideals are unmixed, have grade equal to height, and are generated by regular sequences",
        &["unmixedness", "grade-equals-height", "regular-generation", "height-generated"],
    ),
    (
        "counterexample",
        "non-SFT base ring, weak-Bourbaki failure, non-Noetherian chain",
        &["non-sft", "wb-failure", "non-noetherian"],
    ),
];

impl Report {
    pub fn new(scenario: String, seed: u64, trunc: Option<u32>, tasks: Vec<TaskReport>) -> Self {
        let summary = ROWS
            .iter()
            .map(|(row, statement, claims)| {
                let mine: Vec<&TaskReport> = tasks.iter().filter(|t| claims.contains(&t.claim.as_str())).collect();
                let ran: Vec<&&TaskReport> = mine.iter().filter(|t| t.verdict != Verdict::Skip).collect();
                SummaryRow {
                    row: row.to_string(),
                    statement: statement.to_string(),
                    verified: (!ran.is_empty()).then(|| ran.iter().all(|t| t.verdict == Verdict::Pass)),
                    instances: ran.iter().map(|t| t.instances).sum(),
                    tasks: mine.iter().map(|t| t.name.clone()).collect(),
                }
            })
            .collect();
        Report {
            schema: 1,
            scenario,
            seed,
            trunc,
            tasks,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.tasks.iter().all(|t| t.verdict != Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} (seed {})\n", self.scenario, self.seed);
        let w = self.tasks.iter().map(|t| t.name.len()).max().unwrap_or(4).max(4);
        out.push_str(&format!(
            "{:<w$}  {:<22}  {:<7}  {:>9}  {:>8}\n",
            "task", "claim", "verdict", "instances", "ms"
        ));
        for t in &self.tasks {
            let v = match t.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skip => "skip",
            };
            out.push_str(&format!(
                "{:<w$}  {:<22}  {:<7}  {:>9}  {:>8}\n",
                t.name, t.claim, v, t.instances, t.elapsed_ms
            ));
            if let Some(r) = &t.reason {
                out.push_str(&format!("{:<w$}    {r}\n", ""));
            }
        }
        out.push('\n');
        out.push_str(&format!(
            "{:<15}  {:<27}  statement\n",
            "property", "verified on instances"
        ));
        for r in &self.summary {
            let v = match r.verified {
                None => "-".to_string(),
                Some(true) => format!("yes ({})", r.instances),
                Some(false) => format!("no ({})", r.instances),
            };
            out.push_str(&format!("{:<15}  {:<27}  {}\n", r.row, v, r.statement));
        }
        out
    }
}

/// The JSON text with every `elapsed_ms` zeroed.
pub fn without_timings(json: &str) -> String {
    let mut v: Value = serde_json::from_str(json).expect("valid report");
    if let Some(tasks) = v.get_mut("tasks").and_then(Value::as_array_mut) {
        for t in tasks {
            t["elapsed_ms"] = Value::from(0);
        }
    }
    serde_json::to_string_pretty(&v).expect("serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(claim: &str, verdict: Verdict, instances: usize) -> TaskReport {
        TaskReport {
            name: format!("{claim}-task"),
            kind: "x".into(),
            claim: claim.into(),
            verdict,
            reason: None,
            instances,
            certificate: Value::Null,
            elapsed_ms: 12,
        }
    }

    #[test]
    fn summary_rows() {
        let r = Report::new(
            "t".into(),
            0,
            None,
            vec![
                task("faithful-flatness", Verdict::Pass, 10),
                task("non-sft", Verdict::Pass, 3),
                task("wb-failure", Verdict::Fail, 2),
            ],
        );
        assert_eq!(r.summary[0].verified, None);
        assert_eq!((r.summary[1].verified, r.summary[1].instances), (Some(true), 10));
        assert_eq!((r.summary[3].verified, r.summary[3].instances), (Some(false), 5));
        assert!(!r.all_pass());
        assert!(r.to_text().contains("yes (10)"));
    }

    #[test]
    fn timings_are_masked() {
        let r = Report::new("t".into(), 0, None, vec![task("non-sft", Verdict::Pass, 1)]);
        let mut other = r.clone();
        other.tasks[0].elapsed_ms = 999;
        assert_ne!(r.to_json(), other.to_json());
        assert_eq!(without_timings(&r.to_json()), without_timings(&other.to_json()));
    }
}
