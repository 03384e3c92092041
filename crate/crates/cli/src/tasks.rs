//! One runner per task kind. Each returns an [`Outcome`] or a core error;
//! [`run_task`] turns that into a [`TaskReport`].

use std::sync::Arc;
use std::time::Instant;

use artin_core::artinian::{maximal_ideals, AlgebraElement};
use artin_core::exactpoly::Monomial;
use artin_core::examples::{non_sft_scan, wb_failure_check, WbReport};
use artin_core::family::{DirectedFamily, SubringHandle};
use artin_core::flatcert::{random_relation, solve, survival_check, verify};
use artin_core::idealkit::monomial::{minimal_generators, slice_monomials};
use artin_core::idealkit::{
    catenary_check, cgrade, extended_chain, height_monomial, is_regular_sequence, monomial_family, prime_chain,
    replace_with_regular, same_truncated_ideal, seeded_redundant_ideal, verify_unmixed, FgIdeal, PrimeChain,
    RegularSequenceReport,
};
use artin_core::series::{
    ext_membership, minimal_primes, random_series, residue_map, ExtIdealDesc, SeriesContext, SeriesElement,
};
use artin_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::builtins;
use crate::report::{TaskReport, Verdict};
use crate::scenario::{Scenario, TaskSpec};
use crate::RunError;

type Core<T> = std::result::Result<T, Error>;

pub struct Outcome {
    pub pass: bool,
    pub reason: Option<String>,
    pub instances: usize,
    pub certificate: Value,
}

impl Outcome {
    fn new(failures: &[String], instances: usize, certificate: Value) -> Self {
        let reason = match failures.len() {
            0 => None,
            1 => Some(failures[0].clone()),
            n => Some(format!("{} (and {} more)", failures[0], n - 1)),
        };
        Outcome {
            pass: failures.is_empty(),
            reason,
            instances,
            certificate,
        }
    }
}

pub fn claim(kind: &str) -> &'static str {
    match kind {
        "flat" => "faithful-flatness",
        "dimension" => "dimension",
        "minimal-primes" => "minimal-primes",
        "krull" => "krull-bound",
        "unmixed" => "unmixedness",
        "grade" => "grade-equals-height",
        "replace" => "regular-generation",
        "regular" => "height-generated",
        "chain" => "catenary",
        "sft" => "non-sft",
        "wb" => "wb-failure",
        "non-noetherian" => "non-noetherian",
        _ => "unknown",
    }
}

/// splitmix64 step, for deriving sub-seeds.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Resolved settings shared by the runners.
pub struct Env<'a> {
    pub scenario: &'a Scenario,
    pub task: &'a TaskSpec,
    pub seed: u64,
    pub trunc: Option<u32>,
}

struct Ring {
    label: String,
    family: Arc<DirectedFamily>,
    window: usize,
}

impl Ring {
    fn handle(&self) -> SubringHandle {
        self.family.window(self.window)
    }
}

impl Env<'_> {
    fn trunc(&self, section: Option<u32>, default: u32) -> u32 {
        self.task.trunc.or(section).or(self.trunc).unwrap_or(default)
    }

    fn series_trunc(&self, default: u32) -> u32 {
        self.trunc(self.scenario.series.as_ref().and_then(|s| s.trunc), default)
    }

    fn nvars(&self, default: usize) -> usize {
        self.task
            .n
            .or_else(|| self.scenario.series.as_ref().and_then(|s| s.n))
            .unwrap_or(default)
    }

    fn vars(&self) -> Option<Vec<String>> {
        self.task
            .vars
            .clone()
            .or_else(|| self.scenario.series.as_ref().and_then(|s| s.vars.clone()))
    }

    fn context(&self, fam: &Arc<DirectedFamily>, n: usize, trunc: u32) -> Core<Arc<SeriesContext>> {
        match self.vars() {
            Some(v) => SeriesContext::new(Arc::clone(fam), v, trunc),
            None => SeriesContext::with_standard_vars(Arc::clone(fam), n, trunc),
        }
    }

    /// Rings named by the task, else the scenario family, else `defaults`.
    fn rings(&self, defaults: &[&str]) -> Result<Vec<Ring>, RunError> {
        let names: Vec<String> = if let Some(r) = &self.task.rings {
            r.clone()
        } else if let Some(r) = &self.task.ring {
            vec![r.clone()]
        } else if let Some(f) = &self.scenario.family {
            let family = builtins::family(f)?;
            let window = self
                .task
                .window
                .or(f.window)
                .unwrap_or_else(|| builtins::default_window(&f.stream));
            return Ok(vec![Ring {
                label: f.stream.clone(),
                family,
                window,
            }]);
        } else {
            defaults.iter().map(|s| s.to_string()).collect()
        };
        let field = builtins::parse_field(self.scenario.family.as_ref().and_then(|f| f.field.as_deref()))?;
        names
            .into_iter()
            .map(|name| {
                let family = builtins::ring(&name, field)?;
                Ok(Ring {
                    window: self.task.window.unwrap_or_else(|| builtins::default_window(&name)),
                    label: name,
                    family,
                })
            })
            .collect()
    }

    /// Explicit ideals: `ideals`, `gens`, or the `[ideal]` section.
    fn ideals(&self) -> Option<Vec<Vec<String>>> {
        self.task
            .ideals
            .clone()
            .or_else(|| self.task.gens.clone().map(|g| vec![g]))
            .or_else(|| self.scenario.ideal.as_ref().map(|i| vec![i.gens.clone()]))
    }

    /// Explicit ideals unless `exhaustive` is set.
    fn explicit_ideals(&self) -> Option<Vec<Vec<String>>> {
        if self.task.exhaustive == Some(true) {
            None
        } else {
            self.ideals()
        }
    }
}

pub fn run_task(env: &Env, name: String) -> Result<TaskReport, RunError> {
    let kind = env.task.kind.as_str();
    let claim = claim(kind);
    let start = Instant::now();
    let result = match kind {
        "flat" => flat(env),
        "dimension" => dimension(env),
        "minimal-primes" => minimal(env),
        "krull" => krull(env),
        "unmixed" => unmixed(env),
        "grade" => grade(env),
        "replace" => replace(env),
        "regular" => regular(env),
        "chain" => chain(env),
        "sft" => sft(env),
        "wb" => wb(env),
        "non-noetherian" => non_noetherian(env),
        other => return Err(RunError::Parse(format!("unknown task kind {other:?}"))),
    }?;
    let expect_reject = env.task.expect.as_deref() == Some("reject");
    let (verdict, reason, instances, certificate) = match result {
        Err(Error::NoSolution(m)) => {
            return Err(RunError::Internal(format!(
                "[{claim}] {name}: certificate solver found no solution: {m}"
            )))
        }
        Err(e) if expect_reject => (
            Verdict::Pass,
            Some(format!("rejected as expected: {e}")),
            1,
            json!({ "rejected": e.to_string() }),
        ),
        Err(e) => (Verdict::Fail, Some(format!("[{claim}] {e}")), 0, Value::Null),
        Ok(o) if expect_reject => {
            if o.pass {
                (
                    Verdict::Fail,
                    Some(format!("[{claim}] expected a rejection, but the check passed")),
                    o.instances,
                    o.certificate,
                )
            } else {
                let r = o.reason.unwrap_or_default();
                (
                    Verdict::Pass,
                    Some(format!("rejected as expected: {r}")),
                    o.instances,
                    o.certificate,
                )
            }
        }
        Ok(o) if o.pass => (Verdict::Pass, o.reason, o.instances, o.certificate),
        Ok(o) => (
            Verdict::Fail,
            Some(format!(
                "[{claim}] {}",
                o.reason.unwrap_or_else(|| "check failed".into())
            )),
            o.instances,
            o.certificate,
        ),
    };
    Ok(TaskReport {
        name,
        kind: kind.to_string(),
        claim: claim.to_string(),
        verdict,
        reason,
        instances,
        certificate,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn render_alg(a: &AlgebraElement) -> String {
    a.render()
}

fn render_all(fs: &[SeriesElement]) -> Vec<String> {
    fs.iter().map(SeriesElement::render).collect()
}

fn monomial_ideal(ctx: &Arc<SeriesContext>, ms: &[Monomial]) -> Core<FgIdeal> {
    let fam = ctx.family();
    let h = fam.base_handle();
    let one = fam.base().one();
    let gens = ms
        .iter()
        .map(|m| ctx.term(&h, &one, m.clone()))
        .collect::<Core<Vec<_>>>()?;
    FgIdeal::new(ctx, gens)
}

/// Least height over the components, and whether every component sees
/// exactly that many minimal generators.
fn slice_height(gens: &[SeriesElement], comps: &[ExtIdealDesc]) -> Core<(usize, bool)> {
    let mut ht = usize::MAX;
    let mut generated = true;
    for c in comps {
        let h = height_monomial(gens, c)?;
        let mg = minimal_generators(&slice_monomials(gens, c)?).len();
        generated &= mg == h;
        ht = ht.min(h);
    }
    Ok((if comps.is_empty() { 0 } else { ht }, generated))
}

// ---------------------------------------------------------------- flatness

fn flat(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["example-ring", "split", "quadratic-tower"])?;
    let fs = env.scenario.flat.clone().unwrap_or_default();
    let seeds = env.task.seeds.or(fs.seeds).unwrap_or(500);
    let n_max = env.task.n.or(fs.n).unwrap_or(3).max(1);
    let trunc = env.trunc(fs.trunc, 4);
    let terms = env.task.terms.unwrap_or(3).max(1);
    let embed = env.task.embed.unwrap_or(1);
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut instances = 0;
        let mut per_ring = Vec::new();
        for (ri, ring) in rings.iter().enumerate() {
            let h = ring.handle();
            let ctxs = (1..=n_max)
                .map(|n| SeriesContext::with_standard_vars(Arc::clone(&ring.family), n, trunc))
                .collect::<Core<Vec<_>>>()?;
            let mut verified = 0;
            let mut samples = Vec::new();
            for i in 0..seeds {
                let ctx = &ctxs[i % n_max];
                let len = 1 + (i / n_max) % terms;
                let s = mix(mix(env.seed, ri as u64), i as u64);
                let inst = random_relation(ctx, &h, len, s)?;
                let cert = solve(&inst)?;
                instances += 1;
                if verify(&inst, &cert)? {
                    verified += 1;
                } else {
                    failures.push(format!("{}: certificate for sample {i} does not verify", ring.label));
                }
                if samples.len() < embed {
                    samples.push(json!({
                        "sample": i,
                        "vars": ctx.vars(),
                        "r": inst.r().iter().map(render_alg).collect::<Vec<_>>(),
                        "m": render_all(inst.m()),
                        "beta": cert.beta.indices(),
                        "b": cert.b.iter().map(|row| row.iter().map(render_alg).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "y": render_all(&cert.y),
                    }));
                }
            }
            let alg = ring.family.subring(&h)?;
            let maxes = maximal_ideals(&alg)?;
            let comps = minimal_primes(&ctxs[0], &h)?;
            let mut survives = Vec::new();
            for c in &comps {
                let ok = survival_check(c)?;
                if !ok {
                    failures.push(format!("{}: {} extends to the unit ideal", ring.label, c.describe()));
                }
                survives.push(json!({ "ideal": c.describe(), "proper": ok }));
            }
            if comps.len() != maxes.len() {
                failures.push(format!(
                    "{}: {} maximal ideals but {} checked",
                    ring.label,
                    maxes.len(),
                    comps.len()
                ));
            }
            per_ring.push(json!({
                "ring": ring.label,
                "window": ring.window,
                "trunc": trunc,
                "relations": seeds,
                "verified": verified,
                "maximal_ideals": survives,
                "samples": samples,
            }));
        }
        Ok(Outcome::new(&failures, instances, json!({ "rings": per_ring })))
    })())
}

// --------------------------------------------------------------- dimension

fn chain_json(c: &PrimeChain) -> Value {
    json!({
        "component": c.component,
        "length": c.length(),
        "links": c.links.iter().map(|l| json!({
            "ideal": l.render,
            "next_variable_outside": l.proper_next,
            "quotient_rank": l.quotient_rank,
            "expected_rank": l.expected_rank,
        })).collect::<Vec<_>>(),
        "tensor_identity": {
            "residue_degree": c.presentation.residue_degree,
            "monomials": c.presentation.monomials,
            "rank": c.presentation.rank,
            "expected": c.presentation.expected,
        },
        "saturated_chains": c.catenary.as_ref().map(|k| json!({ "count": k.chains, "lengths": k.lengths })),
    })
}

fn dimension(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["example-ring", "quadratic-tower", "split", "rationals", "dual-numbers"])?;
    let n_max = env.nvars(3);
    let trunc = env.series_trunc(4);
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut out = Vec::new();
        let mut instances = 0;
        for ring in &rings {
            for n in 1..=n_max {
                let ctx = SeriesContext::with_standard_vars(Arc::clone(&ring.family), n, trunc)?;
                for comp in minimal_primes(&ctx, &ring.handle())? {
                    let c = prime_chain(&comp)?;
                    instances += 1;
                    if c.length() != n || !c.certified() {
                        failures.push(format!(
                            "{} n={n}: chain above {} is not a certified chain of length {n}",
                            ring.label, c.component
                        ));
                    }
                    out.push(json!({ "ring": ring.label, "n": n, "trunc": trunc, "chain": chain_json(&c) }));
                }
            }
        }
        Ok(Outcome::new(&failures, instances, json!({ "chains": out })))
    })())
}

fn chain(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["example-ring"])?;
    let n = env.nvars(2);
    let trunc = env.series_trunc(4);
    let ideals = env.ideals();
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut out = Vec::new();
        let mut instances = 0;
        for ring in &rings {
            let ctx = env.context(&ring.family, n, trunc)?;
            let comps = minimal_primes(&ctx, &ring.handle())?;
            for comp in &comps {
                let c = prime_chain(comp)?;
                instances += 1;
                if c.length() != ctx.nvars() || !c.certified() {
                    failures.push(format!("{}: chain above {} is not certified", ring.label, c.component));
                }
                out.push(json!({ "ring": ring.label, "chain": chain_json(&c) }));
            }
            // saturated chains from each associated prime of the given ideals up to the maximal one
            for gens in ideals.iter().flatten() {
                let ideal = FgIdeal::parse(&ctx, gens)?;
                let all: Vec<usize> = (0..ctx.nvars()).collect();
                for comp in &comps {
                    for p in artin_core::idealkit::associated_primes_monomial(ideal.gens(), comp)? {
                        let k = catenary_check(ctx.nvars(), &p.vars, &all);
                        instances += 1;
                        if !k.holds() {
                            failures.push(format!(
                                "{}: saturated chains above {} differ in length",
                                ring.label,
                                p.render(ctx.vars())
                            ));
                        }
                        out.push(json!({
                            "ring": ring.label,
                            "ideal": ideal.render(),
                            "from": p.render(ctx.vars()),
                            "saturated_chains": k.chains,
                            "lengths": k.lengths,
                        }));
                    }
                }
            }
        }
        Ok(Outcome::new(&failures, instances, json!({ "checks": out })))
    })())
}

fn minimal(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["example-ring", "quadratic-tower", "split", "rationals", "dual-numbers"])?;
    let n = env.nvars(2);
    let trunc = env.series_trunc(4);
    let samples = env.task.samples.unwrap_or(200);
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut out = Vec::new();
        let mut instances = 0;
        for (ri, ring) in rings.iter().enumerate() {
            let ctx = env.context(&ring.family, n, trunc)?;
            let h = ring.handle();
            let alg = ring.family.subring(&h)?;
            let mut expected: Vec<String> = maximal_ideals(&alg)?
                .iter()
                .map(|m| format!("{}S", m.describe()))
                .collect();
            let comps = minimal_primes(&ctx, &h)?;
            let mut found: Vec<String> = comps.iter().map(ExtIdealDesc::describe).collect();
            expected.sort();
            found.sort();
            if expected != found {
                failures.push(format!("{}: minimal primes {found:?} against {expected:?}", ring.label));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(mix(env.seed, ri as u64));
            let mut agree = 0;
            let mut inside = 0;
            for j in 0..samples {
                let c = &comps[(j / 2) % comps.len()];
                let f = if j % 2 == 0 {
                    random_series(&ctx, &h, 0.6, &mut rng)?
                } else {
                    let mut acc = ctx.zero(&h)?;
                    for g in c.maximal().generators() {
                        acc = acc.add(&ctx.constant(&h, g)?.mul(&random_series(&ctx, &h, 0.6, &mut rng)?)?)?;
                    }
                    acc
                };
                for c in &comps {
                    let kernel = residue_map(&f, c)?.is_zero();
                    let member = ext_membership(&f, c)?;
                    inside += member as usize;
                    if kernel == member {
                        agree += 1;
                    } else {
                        failures.push(format!("{}: sample {j} disagrees on {}", ring.label, c.describe()));
                    }
                }
            }
            instances += samples * comps.len();
            out.push(json!({
                "ring": ring.label,
                "window": ring.window,
                "maximal_ideals": expected,
                "minimal_primes": found,
                "samples": samples,
                "agreements": agree,
                "members": inside,
            }));
        }
        Ok(Outcome::new(&failures, instances, json!({ "rings": out })))
    })())
}

// ------------------------------------------------------------ monomial sweep

/// The ideals a sweep task runs over: explicit ones, or every monomial
/// ideal in `1..=n` variables with the given bounds.
/// A context, its components, and the ideals to check there.
type Batch = (Arc<SeriesContext>, Vec<ExtIdealDesc>, Vec<FgIdeal>);

fn sweep(env: &Env, ring: &Ring, trunc: u32) -> Core<Vec<Batch>> {
    if let Some(ideals) = env.explicit_ideals() {
        let ctx = env.context(&ring.family, env.nvars(3), trunc)?;
        let comps = minimal_primes(&ctx, &ring.handle())?;
        let is = ideals
            .iter()
            .map(|g| FgIdeal::parse(&ctx, g))
            .collect::<Core<Vec<_>>>()?;
        return Ok(vec![(ctx, comps, is)]);
    }
    let gens = env.task.max_gens.unwrap_or(3);
    let deg = env.task.max_degree.unwrap_or(3);
    let mut out = Vec::new();
    for n in 1..=env.nvars(3) {
        let ctx = SeriesContext::with_standard_vars(Arc::clone(&ring.family), n, trunc)?;
        let comps = minimal_primes(&ctx, &ring.handle())?;
        let is = monomial_family(n, gens, deg)
            .iter()
            .map(|ms| monomial_ideal(&ctx, ms))
            .collect::<Core<Vec<_>>>()?;
        out.push((ctx, comps, is));
    }
    Ok(out)
}

fn krull(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["rationals"])?;
    let trunc = env.series_trunc(6);
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut rows = Vec::new();
        let mut instances = 0;
        for ring in &rings {
            for (ctx, comps, ideals) in sweep(env, ring, trunc)? {
                let (mut regular, mut tight) = (0, 0);
                let mut listed = Vec::new();
                for ideal in &ideals {
                    let (ht, _) = slice_height(ideal.gens(), &comps)?;
                    let rep = is_regular_sequence(&ctx, ideal.gens())?;
                    instances += 1;
                    if ht > ideal.len() {
                        failures.push(format!(
                            "{}: height {ht} exceeds {} generators",
                            ideal.render(),
                            ideal.len()
                        ));
                    }
                    if ht == ideal.len() {
                        tight += 1;
                    }
                    if rep.is_regular() {
                        regular += 1;
                        if ht != ideal.len() {
                            failures.push(format!(
                                "{}: regular of length {} but height {ht}",
                                ideal.render(),
                                ideal.len()
                            ));
                        }
                    }
                    if env.explicit_ideals().is_some() {
                        listed.push(json!({ "ideal": ideal.render(), "height": ht, "generators": ideal.len(), "regular": rep.is_regular() }));
                    }
                }
                rows.push(json!({
                    "ring": ring.label,
                    "n": ctx.nvars(),
                    "trunc": trunc,
                    "ideals": ideals.len(),
                    "height_equals_generators": tight,
                    "regular": regular,
                    "listed": listed,
                }));
            }
        }
        Ok(Outcome::new(&failures, instances, json!({ "sweeps": rows })))
    })())
}

fn unmixed(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["rationals"])?;
    let trunc = env.series_trunc(6);
    let explicit = env.explicit_ideals().is_some();
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut rows = Vec::new();
        let mut instances = 0;
        for ring in &rings {
            for (ctx, comps, ideals) in sweep(env, ring, trunc)? {
                let mut checked = 0;
                let mut listed = Vec::new();
                for ideal in &ideals {
                    if !explicit && !slice_height(ideal.gens(), &comps)?.1 {
                        continue;
                    }
                    let rep = verify_unmixed(ideal.gens(), &comps)?;
                    checked += 1;
                    instances += 1;
                    if !rep.unmixed() {
                        failures.push(format!("{} has associated primes of different heights", ideal.render()));
                    }
                    if explicit {
                        listed.push(json!({
                            "ideal": ideal.render(),
                            "components": rep.components.iter().map(|c| json!({
                                "component": c.component,
                                "height": c.height,
                                "associated_primes": c.primes.iter().map(|p| p.render(ctx.vars())).collect::<Vec<_>>(),
                                "unmixed": c.unmixed,
                            })).collect::<Vec<_>>(),
                        }));
                    }
                }
                let mut embedded = None;
                if !explicit && ctx.nvars() >= 2 {
                    let bad = FgIdeal::parse(&ctx, &["X1^2", "X1*X2"])?;
                    let rejected = matches!(verify_unmixed(bad.gens(), &comps), Err(Error::NotHeightGenerated(_)));
                    if !rejected {
                        failures.push("(X1^2, X1*X2) was not rejected as not height-generated".into());
                    }
                    embedded = Some(rejected);
                }
                rows.push(json!({
                    "ring": ring.label,
                    "n": ctx.nvars(),
                    "ideals": ideals.len(),
                    "height_generated": checked,
                    "embedded_case_rejected": embedded,
                    "listed": listed,
                }));
            }
        }
        Ok(Outcome::new(&failures, instances, json!({ "sweeps": rows })))
    })())
}

fn grade(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["rationals"])?;
    let trunc = env.series_trunc(6);
    let explicit = env.explicit_ideals().is_some();
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut rows = Vec::new();
        let mut instances = 0;
        for ring in &rings {
            for (ctx, comps, ideals) in sweep(env, ring, trunc)? {
                let mut checked = 0;
                let mut listed = Vec::new();
                for ideal in &ideals {
                    let (ht, generated) = slice_height(ideal.gens(), &comps)?;
                    if !explicit && !generated {
                        continue;
                    }
                    let g = cgrade(ideal)?;
                    checked += 1;
                    instances += 1;
                    if g.grade != ht || !g.report.is_regular() {
                        failures.push(format!("{}: grade {} against height {ht}", ideal.render(), g.grade));
                    }
                    if explicit {
                        listed.push(json!({
                            "ideal": ideal.render(),
                            "height": ht,
                            "grade": g.grade,
                            "sequence": render_all(&g.sequence),
                        }));
                    }
                }
                rows.push(json!({
                    "ring": ring.label,
                    "n": ctx.nvars(),
                    "trunc": trunc,
                    "height_generated": checked,
                    "listed": listed,
                }));
            }
        }
        Ok(Outcome::new(&failures, instances, json!({ "sweeps": rows })))
    })())
}

// ---------------------------------------------------------------- regular

fn regular_json(r: &RegularSequenceReport) -> Value {
    json!({
        "sequence": render_all(&r.sequence),
        "certified_to_degree": r.certified_to_degree,
        "steps": r.steps.iter().map(|s| json!({
            "index": s.index,
            "degree_bound": s.degree_bound,
            "domain_dim": s.domain_dim,
            "kernel_dim": s.kernel_dim,
            "ideal_dim": s.ideal_dim,
            "certified": s.certified,
            "witness": s.witness.as_ref().map(SeriesElement::render),
        })).collect::<Vec<_>>(),
    })
}

fn replace(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["split"])?;
    let n = env.nvars(3);
    let trunc = env.series_trunc(5);
    let count = env.task.count.unwrap_or(10);
    let suite = env
        .ideals()
        .unwrap_or_else(|| vec![vec!["e0*X1".into(), "e1*X1".into()]]);
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut out = Vec::new();
        for ring in &rings {
            let ctx = env.context(&ring.family, n, trunc)?;
            let mut inputs = suite
                .iter()
                .map(|g| FgIdeal::parse(&ctx, g))
                .collect::<Core<Vec<_>>>()?;
            for i in 0..count {
                inputs.push(seeded_redundant_ideal(&ctx, mix(env.seed, i as u64))?);
            }
            for ideal in &inputs {
                let rep = replace_with_regular(ideal)?;
                let same = same_truncated_ideal(ideal, &rep.ideal)?;
                let check = is_regular_sequence(&ctx, rep.ideal.gens())?;
                if !same || !check.is_regular() {
                    failures.push(format!(
                        "{}: replacement {} (same ideal: {same})",
                        ideal.render(),
                        rep.ideal.render()
                    ));
                }
                out.push(json!({
                    "ring": ring.label,
                    "input": ideal.render(),
                    "output": rep.ideal.render(),
                    "unchanged": rep.unchanged,
                    "redundant": rep.redundant,
                    "steps": rep.steps.iter().map(|s| json!({
                        "base": s.base,
                        "multipliers": s.multipliers.iter().map(|(i, m)| json!([i, m.render()])).collect::<Vec<_>>(),
                        "element": s.element.render(),
                        "dropped": s.dropped,
                        "candidates_tried": s.candidates_tried,
                    })).collect::<Vec<_>>(),
                    "same_truncated_ideal": same,
                    "regular": regular_json(&check),
                }));
            }
        }
        let instances = out.len();
        Ok(Outcome::new(&failures, instances, json!({ "ideals": out })))
    })())
}

fn regular(env: &Env) -> Result<Core<Outcome>, RunError> {
    let rings = env.rings(&["rationals"])?;
    let n = env.nvars(3);
    let trunc = env.series_trunc(6);
    let Some(ideals) = env.ideals() else {
        return Err(RunError::Parse(
            "a regular task needs gens, ideals, or an [ideal] section".into(),
        ));
    };
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut out = Vec::new();
        for ring in &rings {
            let ctx = env.context(&ring.family, n, trunc)?;
            let comps = minimal_primes(&ctx, &ring.handle())?;
            for gens in &ideals {
                let ideal = FgIdeal::parse(&ctx, gens)?;
                let rep = is_regular_sequence(&ctx, ideal.gens())?;
                let height = slice_height(ideal.gens(), &comps).ok().map(|h| h.0);
                if !rep.is_regular() {
                    let at = rep.failure().map_or(0, |s| s.index);
                    failures.push(format!("{}: not regular at position {}", ideal.render(), at + 1));
                } else if let Some(h) = height.filter(|&h| h != ideal.len()) {
                    failures.push(format!("{}: regular but height {h}", ideal.render()));
                }
                out.push(json!({ "ring": ring.label, "ideal": ideal.render(), "height": height, "report": regular_json(&rep) }));
            }
        }
        let instances = out.len();
        Ok(Outcome::new(&failures, instances, json!({ "ideals": out })))
    })())
}

// ------------------------------------------------------------- counterexample

fn example_family(env: &Env) -> Result<Arc<DirectedFamily>, RunError> {
    let rings = env.rings(&["example-ring"])?;
    match rings.as_slice() {
        [r] if r.family.stream().name() == "example-ring" => Ok(Arc::clone(&r.family)),
        _ => Err(RunError::Parse(format!(
            "{} needs the example-ring family",
            env.task.kind
        ))),
    }
}

fn sft(env: &Env) -> Result<Core<Outcome>, RunError> {
    let fam = example_family(env)?;
    let k_max = env.task.k_max.unwrap_or(6);
    let ideals = env.ideals().unwrap_or_else(|| {
        vec![
            vec!["z0".into()],
            (0..5).map(|i| format!("z{i}")).collect(),
            vec!["z0*z1".into()],
        ]
    });
    Ok((|| -> Core<Outcome> {
        let mut failures = Vec::new();
        let mut out = Vec::new();
        let mut instances = 0;
        for j in &ideals {
            let ws = non_sft_scan(&fam, j, k_max)?;
            for w in &ws {
                instances += 1;
                if !w.holds() {
                    failures.push(format!("J = ({}), k = {}: witness {} fails", j.join(", "), w.k, w.f));
                }
            }
            out.push(json!({
                "ideal": j,
                "witnesses": ws.iter().map(|w| json!({
                    "k": w.k,
                    "s": w.s,
                    "f": w.f,
                    "power": w.power,
                    "coefficient": w.coefficient.to_string(),
                    "product": w.product,
                    "expansion_exact": w.expansion_exact,
                    "outside": w.outside,
                    "stable": w.stable,
                })).collect::<Vec<_>>(),
            }));
        }
        Ok(Outcome::new(&failures, instances, json!({ "scans": out })))
    })())
}

fn wb(env: &Env) -> Result<Core<Outcome>, RunError> {
    let fam = example_family(env)?;
    let s = env.task.window.unwrap_or(4);
    let trunc = env.series_trunc(6);
    let samples = env.task.samples.unwrap_or(50);
    let seed = env.seed;
    Ok((|| -> Core<Outcome> {
        let r: WbReport = wb_failure_check(&fam, s, trunc, samples, seed)?;
        let mut failures = Vec::new();
        if r.annihilated != r.spanning {
            failures.push(format!("y kills {} of {} spanning elements", r.annihilated, r.spanning));
        }
        if r.nonzero != r.samples {
            failures.push(format!("y h = 0 for {} unit samples", r.samples - r.nonzero));
        }
        for (what, ok) in &r.spot_checks {
            if !ok {
                failures.push(format!("{what} does not hold"));
            }
        }
        let cert = json!({
            "window": r.s,
            "trunc": r.trunc,
            "spanning": r.spanning,
            "annihilated": r.annihilated,
            "samples": r.samples,
            "unit_samples_not_killed": r.nonzero,
            "spot_checks": r.spot_checks.iter().map(|(w, ok)| json!({ "check": w, "holds": ok })).collect::<Vec<_>>(),
            "minimal_primes_of_zero": r.minimal_primes,
            "minimal_prime_height": 0,
            "cited": WbReport::CITED,
        });
        Ok(Outcome::new(&failures, r.spanning + r.samples, cert))
    })())
}

fn non_noetherian(env: &Env) -> Result<Core<Outcome>, RunError> {
    let fam = match env.scenario.family.as_ref().and_then(|f| f.chain.as_ref()) {
        Some(_) => env.rings(&[])?.remove(0).family,
        None => example_family(env)?,
    };
    let chain = env
        .scenario
        .family
        .as_ref()
        .and_then(|f| f.chain.clone())
        .unwrap_or_default();
    let t = env.task.t.or(chain.t).unwrap_or(6);
    let gens = env
        .task
        .gens
        .clone()
        .or((!chain.generators.is_empty()).then_some(chain.generators))
        .unwrap_or_else(|| (0..=t).map(|i| format!("z{i}")).collect());
    let trunc = env.series_trunc(3);
    let n = env.nvars(1);
    Ok((|| -> Core<Outcome> {
        let ctx = env.context(&fam, n, trunc)?;
        let links = extended_chain(&ctx, &gens, t)?;
        let failures: Vec<String> = links
            .iter()
            .filter(|l| !(l.strict_in_r && l.strict_in_s && l.consistent()))
            .map(|l| {
                format!(
                    "adding {} is not strict (base: {}, series: {})",
                    l.added, l.strict_in_r, l.strict_in_s
                )
            })
            .collect();
        let cert = json!({
            "generators": gens[..=t.min(gens.len().saturating_sub(1))],
            "trunc": trunc,
            "links": links.iter().map(|l| json!({
                "added": l.added,
                "strict_in_base": l.strict_in_r,
                "strict_in_series": l.strict_in_s,
            })).collect::<Vec<_>>(),
        });
        Ok(Outcome::new(&failures, links.len(), cert))
    })())
}
