//! Scenario runner for `artin-core`.
//!
//! A scenario is a TOML file of tasks; running it yields a [`Report`] with a
//! verdict, an instance count and re-checkable certificate data per task.

pub mod builtins;
pub mod report;
pub mod scenario;
pub mod tasks;

use std::collections::HashMap;

pub use report::{Report, TaskReport, Verdict};
pub use scenario::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal self-check failed: {0}")]
    Internal(String),
}

impl From<artin_core::Error> for RunError {
    fn from(e: artin_core::Error) -> Self {
        match e {
            artin_core::Error::NoSolution(m) => RunError::Internal(m),
            other => RunError::Parse(other.to_string()),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => 2,
            RunError::Internal(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trunc: Option<u32>,
}

/// Run every task in declaration order.
pub fn run(scenario: &Scenario, overrides: Overrides) -> Result<Report, RunError> {
    let seed = overrides.seed.or(scenario.seed).unwrap_or(0);
    let trunc = overrides.trunc.or(scenario.trunc);
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for t in scenario.task.iter().filter(|t| t.name.is_none()) {
        *seen.entry(t.kind.as_str()).or_default() += 1;
    }
    let mut counter: HashMap<&str, usize> = HashMap::new();
    let mut tasks = Vec::with_capacity(scenario.task.len());
    for t in &scenario.task {
        let name = match &t.name {
            Some(n) => n.clone(),
            None if seen[t.kind.as_str()] == 1 => t.kind.clone(),
            None => {
                let c = counter.entry(t.kind.as_str()).or_default();
                *c += 1;
                format!("{}-{c}", t.kind)
            }
        };
        let env = tasks::Env {
            scenario,
            task: t,
            seed,
            trunc,
        };
        tasks.push(tasks::run_task(&env, name)?);
    }
    let name = scenario.name.clone().unwrap_or_else(|| "unnamed".into());
    Ok(Report::new(name, seed, trunc, tasks))
}

/// Scenario text from a path, or from a built-in scenario of that name.
pub fn load(source: &str) -> Result<Scenario, RunError> {
    let text = match std::fs::read_to_string(source) {
        Ok(t) => t,
        Err(e) => match builtins::scenario_text(source) {
            Some(t) => t.to_string(),
            None => return Err(RunError::Parse(format!("{source}: {e}"))),
        },
    };
    Scenario::parse(&text)
}
