//! Scenario files: TOML with a few fixed sections and a list of tasks.
//!
//! ```toml
//! name = "small"
//! seed = 7
//! trunc = 4
//!
//! [family]
//! stream = "example-ring"
//! field = "Q"
//!
//! [family.chain]
//! generators = ["z0", "z1", "z2"]
//!
//! [series]
//! n = 2
//!
//! [ideal]
//! gens = ["X1*X2", "X1*X3"]
//!
//! [flat]
//! n = 2
//! seeds = 50
//!
//! [[task]]
//! kind = "unmixed"
//! ```

use serde::{Deserialize, Deserializer};

use crate::RunError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub trunc: Option<u32>,
    pub family: Option<FamilySpec>,
    pub series: Option<SeriesSpec>,
    pub ideal: Option<IdealSpec>,
    pub flat: Option<FlatSpec>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub task: Vec<TaskSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    /// A built-in ring name, or `"list"` for the generators below.
    pub stream: String,
    pub field: Option<String>,
    /// Factor count for `split`.
    pub copies: Option<usize>,
    /// Default window size.
    pub window: Option<usize>,
    /// Base presentation for `list`; empty means the base field.
    #[serde(default)]
    pub base_vars: Vec<String>,
    #[serde(default)]
    pub base_relations: Vec<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    /// Adjoined elements generate a field at each step.
    #[serde(default)]
    pub field_tower: bool,
    pub chain: Option<ChainSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub generators: Vec<String>,
    pub t: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub vars: Option<Vec<String>>,
    pub n: Option<usize>,
    pub trunc: Option<u32>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub gens: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatSpec {
    pub n: Option<usize>,
    pub seeds: Option<usize>,
    pub trunc: Option<u32>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub kind: String,
    pub name: Option<String>,
    /// Built-in ring names; defaults depend on the task.
    pub rings: Option<Vec<String>>,
    pub ring: Option<String>,
    pub window: Option<usize>,
    /// Number of series variables, or its upper bound for sweeps.
    pub n: Option<usize>,
    pub vars: Option<Vec<String>>,
    pub trunc: Option<u32>,
    pub seeds: Option<usize>,
    pub samples: Option<usize>,
    /// Relation length bound for `flat`.
    pub terms: Option<usize>,
    pub gens: Option<Vec<String>>,
    pub ideals: Option<Vec<Vec<String>>>,
    pub exhaustive: Option<bool>,
    pub max_gens: Option<usize>,
    pub max_degree: Option<u32>,
    pub k_max: Option<usize>,
    pub t: Option<usize>,
    /// Extra seeded ideals for `replace`.
    pub count: Option<usize>,
    /// Certificates embedded per ring for `flat`.
    pub embed: Option<usize>,
    /// `"reject"` to expect the check to refuse the input.
    pub expect: Option<String>,
}

pub const TASK_KINDS: &[&str] = &[
    "chain",
    "dimension",
    "flat",
    "grade",
    "krull",
    "minimal-primes",
    "non-noetherian",
    "regular",
    "replace",
    "sft",
    "unmixed",
    "wb",
];

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<TaskSpec>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(Box<TaskSpec>),
        Many(Vec<TaskSpec>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(t) => vec![*t],
        OneOrMany::Many(v) => v,
    })
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let s: Scenario = toml::from_str(text).map_err(|e| RunError::Parse(e.to_string()))?;
        for t in &s.task {
            if !TASK_KINDS.contains(&t.kind.as_str()) {
                return Err(RunError::Parse(format!(
                    "unknown task kind {:?}; expected one of {}",
                    t.kind,
                    TASK_KINDS.join(", ")
                )));
            }
            if let Some(e) = &t.expect {
                if e != "reject" && e != "pass" {
                    return Err(RunError::Parse(format!(
                        "expect must be \"pass\" or \"reject\", not {e:?}"
                    )));
                }
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_task_table() {
        let s = Scenario::parse("[task]\nkind = \"wb\"\n").unwrap();
        assert_eq!(s.task.len(), 1);
        let s = Scenario::parse("[[task]]\nkind = \"wb\"\n[[task]]\nkind = \"sft\"\n").unwrap();
        assert_eq!(s.task.len(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_kinds() {
        assert!(Scenario::parse("[[task]]\nkind = \"nope\"\n").is_err());
        assert!(Scenario::parse("[[task]]\nkind = \"wb\"\nwindw = 3\n").is_err());
        assert!(Scenario::parse("sed = 1\n").is_err());
    }

    #[test]
    fn empty_is_fine() {
        let s = Scenario::parse("").unwrap();
        assert!(s.task.is_empty());
    }
}
