//! Built-in rings, streams and scenarios.

use std::sync::Arc;

use artin_core::artinian::ArtinianAlgebra;
use artin_core::exactpoly::Field;
use artin_core::family::{DirectedFamily, ListStream, StreamGenerator};

use crate::scenario::FamilySpec;
use crate::RunError;

pub const RINGS: &[(&str, &str)] = &[
    (
        "example-ring",
        "Q[y, z0, z1, ..]/(y^2, z_i^2, y z_i), local and non-Noetherian",
    ),
    ("quadratic-tower", "Q(sqrt 2, sqrt 3, sqrt 5, ..), a field"),
    ("split", "Q x Q, two maximal ideals"),
    ("rationals", "Q"),
    ("dual-numbers", "Q[t]/(t^2)"),
];

pub const STREAMS: &[(&str, &str)] = &[
    ("example-ring", "z0, z1, .. with z_i^2 = y z_i = 0"),
    ("quadratic-tower", "square roots of successive primes"),
    ("list", "finitely many generators given in the scenario"),
];

pub const SCENARIOS: &[(&str, &str)] = &[
    ("paper-suite", include_str!("../scenarios/paper-suite.toml")),
    ("smoke", include_str!("../scenarios/smoke.toml")),
];

/// `(section, name)` pairs in a fixed order.
pub fn list_builtins() -> Vec<(&'static str, &'static str)> {
    let mut out = Vec::new();
    out.extend(RINGS.iter().map(|(n, _)| ("ring", *n)));
    out.extend(STREAMS.iter().map(|(n, _)| ("stream", *n)));
    out.extend(SCENARIOS.iter().map(|(n, _)| ("scenario", *n)));
    out
}

pub fn scenario_text(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn is_ring(name: &str) -> bool {
    RINGS.iter().any(|(n, _)| *n == name)
}

/// Window used when a task does not name one.
pub fn default_window(ring: &str) -> usize {
    match ring {
        "example-ring" => 4,
        "quadratic-tower" => 2,
        _ => 0,
    }
}

pub fn parse_field(s: Option<&str>) -> Result<Field, RunError> {
    match s.map(str::trim) {
        None | Some("Q") | Some("QQ") => Ok(Field::Rational),
        Some(f) => {
            let p = f
                .strip_prefix("F")
                .or_else(|| f.strip_prefix("GF"))
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| RunError::Parse(format!("unknown field {f:?}; use Q or F<p>")))?;
            Field::prime(p).map_err(|e| RunError::Parse(e.to_string()))
        }
    }
}

/// A fresh family for a built-in ring name.
pub fn ring(name: &str, field: Field) -> Result<Arc<DirectedFamily>, RunError> {
    let fam = match name {
        "example-ring" => DirectedFamily::example_ring(field),
        "quadratic-tower" => {
            if field != Field::Rational {
                return Err(RunError::Parse("quadratic-tower is defined over Q only".into()));
            }
            DirectedFamily::quadratic_tower()
        }
        "split" => DirectedFamily::split(field, 2)?,
        "rationals" => DirectedFamily::constant("rationals", ArtinianAlgebra::base_field(field)),
        "dual-numbers" => {
            DirectedFamily::constant("dual-numbers", ArtinianAlgebra::present_str(field, &["t"], &["t^2"])?)
        }
        _ => return Err(RunError::Parse(format!("unknown ring {name:?}"))),
    };
    Ok(fam)
}

/// The family described by a `[family]` section.
pub fn family(spec: &FamilySpec) -> Result<Arc<DirectedFamily>, RunError> {
    let field = parse_field(spec.field.as_deref())?;
    match spec.stream.as_str() {
        "split" if spec.copies.is_some() => Ok(DirectedFamily::split(field, spec.copies.unwrap_or(2))?),
        "list" => {
            let vars: Vec<&str> = spec.base_vars.iter().map(String::as_str).collect();
            let rels: Vec<&str> = spec.base_relations.iter().map(String::as_str).collect();
            let base = if vars.is_empty() {
                ArtinianAlgebra::base_field(field)
            } else {
                ArtinianAlgebra::present_str(field, &vars, &rels)?
            };
            let gens = spec
                .generators
                .iter()
                .map(|g| StreamGenerator {
                    name: g.name.clone(),
                    relations: g.relations.clone(),
                })
                .collect();
            Ok(DirectedFamily::new(
                "list",
                base,
                Arc::new(ListStream::new("list", gens, spec.field_tower)),
            ))
        }
        name => ring(name, field),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;

    #[test]
    fn listing_is_stable_and_complete() {
        let a = list_builtins();
        assert_eq!(a, list_builtins());
        for name in ["example-ring", "quadratic-tower", "paper-suite"] {
            assert!(a.iter().any(|(_, n)| *n == name), "{name}");
        }
    }

    #[test]
    fn builtin_scenarios_parse() {
        for (name, text) in SCENARIOS {
            Scenario::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn rings_build() {
        for (name, _) in RINGS {
            let f = ring(name, Field::Rational).unwrap();
            f.subring(&f.window(default_window(name))).unwrap();
        }
        assert!(ring("nope", Field::Rational).is_err());
        assert_eq!(parse_field(Some("F7")).unwrap(), Field::Prime(7));
        assert!(parse_field(Some("F8")).is_err());
    }
}
