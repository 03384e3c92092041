//! Acceptance criteria 1 to 11. Each prints one PASS/FAIL line with its
//! runtime against the budget; the process exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use artin_core::artinian::{maximal_ideals, AlgebraElement};
use artin_core::exactpoly::{Field, Monomial};
use artin_core::examples::{non_sft_scan, wb_failure_check};
use artin_core::family::{DirectedFamily, SubringHandle};
use artin_core::flatcert::{random_relation, solve, survival_check, verify, FlatCertificate, RelationInstance};
use artin_core::idealkit::{
    associated_primes_monomial, cgrade, extended_chain, height_monomial, is_regular_sequence, monomial_family,
    prime_chain, replace_with_regular, seeded_redundant_ideal, truncated_membership, verify_unmixed, FgIdeal,
};
use artin_core::series::{ext_membership, minimal_primes, random_series, residue_map, SeriesContext, SeriesElement};
use artin_core::Error;
use artin_series::report::without_timings;
use artin_series::{builtins, load, run, Overrides};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (usize, &'static str, f64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(name: &str) -> (Arc<DirectedFamily>, SubringHandle) {
    let fam = builtins::ring(name, Field::Rational).unwrap();
    let h = fam.window(builtins::default_window(name));
    (fam, h)
}

const ALL_RINGS: [&str; 5] = ["example-ring", "quadratic-tower", "split", "rationals", "dual-numbers"];

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ------------------------------------------------------------ monomial oracle

type Exps = Vec<Vec<u32>>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(gens: &Exps) -> Exps {
    let mut out: Exps = Vec::new();
    for g in gens {
        if gens.iter().any(|h| h != g && divides(h, g)) || out.contains(g) {
            continue;
        }
        out.push(g.clone());
    }
    out
}

/// Minimum number of variables meeting every generator's support.
fn cover(n: usize, gens: &Exps) -> usize {
    (0u32..1 << n)
        .filter(|s| gens.iter().all(|g| (0..n).any(|v| s & (1 << v) != 0 && g[v] > 0)))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

/// Monomial primes of the form `(I : m)`, by enumerating `m` with each
/// exponent up to the largest one occurring in `I`.
fn colon_primes(n: usize, gens: &Exps) -> BTreeSet<Vec<usize>> {
    let top: Vec<u32> = (0..n).map(|v| gens.iter().map(|g| g[v]).max().unwrap_or(0)).collect();
    let mut out = BTreeSet::new();
    let mut m = vec![0u32; n];
    loop {
        if !gens.iter().any(|g| divides(g, &m)) {
            let colon: Exps = gens
                .iter()
                .map(|g| g.iter().zip(&m).map(|(a, b)| a.saturating_sub(*b)).collect())
                .collect();
            let colon = minimalize(&colon);
            if colon.iter().all(|g| g.iter().sum::<u32>() == 1) {
                let vars: Vec<usize> = colon.iter().map(|g| g.iter().position(|&e| e == 1).unwrap()).collect();
                out.insert(vars.into_iter().collect::<BTreeSet<_>>().into_iter().collect());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if m[i] < top[i] {
                m[i] += 1;
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

struct Sweep {
    n: usize,
    ctx: Arc<SeriesContext>,
    ideals: Vec<(Exps, FgIdeal)>,
}

fn sweep(ring_name: &str, d: u32) -> Vec<Sweep> {
    let (fam, _) = ring(ring_name);
    (1..=3)
        .map(|n| {
            let ctx = SeriesContext::with_standard_vars(Arc::clone(&fam), n, d).unwrap();
            let one = fam.base().one();
            let ideals = monomial_family(n, 3, 3)
                .into_iter()
                .map(|ms| {
                    let exps: Exps = ms.iter().map(|m| m.exponents().to_vec()).collect();
                    let gens = ms
                        .into_iter()
                        .map(|m| ctx.term(&fam.base_handle(), &one, m).unwrap())
                        .collect();
                    (exps, FgIdeal::new(&ctx, gens).unwrap())
                })
                .collect();
            Sweep { n, ctx, ideals }
        })
        .collect()
}

// ---------------------------------------------------------------- criteria

fn recheck(inst: &RelationInstance, cert: &FlatCertificate) -> Result<(), String> {
    let ctx = inst.ctx();
    let fam = ctx.family();
    for j in 0..cert.y.len() {
        let mut acc: Option<AlgebraElement> = None;
        for (i, r) in inst.r().iter().enumerate() {
            let term = fam.embed(r, inst.r_subring(), &cert.beta).unwrap().mul(&cert.b[i][j]);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        ensure(acc.is_none_or(|a| a.is_zero()), || {
            format!("column {j} is not a syzygy")
        })?;
    }
    for (i, m) in inst.m().iter().enumerate() {
        let mut acc = ctx.zero(&cert.beta).unwrap();
        for (j, y) in cert.y.iter().enumerate() {
            acc = acc.add(&y.scale(&cert.b[i][j])).unwrap();
        }
        ensure(acc.sub(m).unwrap().is_zero(), || format!("m_{i} is not recovered"))?;
    }
    Ok(())
}

fn criterion_1() -> Check {
    let mut total = 0;
    for (ri, name) in ["example-ring", "split", "quadratic-tower"].iter().enumerate() {
        let (fam, h) = ring(name);
        let ctxs: Vec<_> = (1..=3)
            .map(|n| SeriesContext::with_standard_vars(Arc::clone(&fam), n, 4).unwrap())
            .collect();
        for i in 0..500u64 {
            let ctx = &ctxs[i as usize % 3];
            let len = 1 + (i as usize / 3) % 3;
            let inst = random_relation(ctx, &h, len, 1000 * ri as u64 + i).map_err(|e| format!("{name} {i}: {e}"))?;
            let cert = solve(&inst).map_err(|e| format!("{name} {i}: {e}"))?;
            ensure(verify(&inst, &cert).unwrap(), || format!("{name} {i}: verify rejects"))?;
            recheck(&inst, &cert).map_err(|e| format!("{name} {i}: {e}"))?;
            total += 1;
        }
        let alg = fam.subring(&h).unwrap();
        let comps = minimal_primes(&ctxs[0], &h).unwrap();
        ensure(comps.len() == maximal_ideals(&alg).unwrap().len(), || {
            format!("{name}: maximal ideal count")
        })?;
        for c in &comps {
            ensure(survival_check(c).unwrap(), || {
                format!("{name}: {} is not proper", c.describe())
            })?;
            ensure(!residue_map(&ctxs[0].one(), c).unwrap().is_zero(), || {
                format!("{name}: 1 maps to 0")
            })?;
        }
    }
    Ok(format!("{total} certificates, both identities re-checked"))
}

fn criterion_2() -> Check {
    let d = 4;
    let mut chains = 0;
    for name in ALL_RINGS {
        let (fam, h) = ring(name);
        let alg = fam.subring(&h).unwrap();
        for n in 1..=3 {
            let ctx = SeriesContext::with_standard_vars(Arc::clone(&fam), n, d).unwrap();
            let comps = minimal_primes(&ctx, &h).unwrap();
            ensure(!comps.is_empty(), || format!("{name}: no minimal primes"))?;
            for c in &comps {
                // [k(M) : k0] as the codimension of M in the member
                let deg = alg.dim() - alg.ideal_span(c.maximal().generators()).rank();
                let chain = prime_chain(c).unwrap();
                ensure(chain.length() == n && chain.certified(), || {
                    format!("{name} n={n}: chain not certified")
                })?;
                for (i, link) in chain.links.iter().enumerate() {
                    let want = deg * binomial(n - i + d as usize - 1, n - i);
                    ensure(link.quotient_rank == want, || {
                        format!("{name} n={n} link {i}: rank {} != {want}", link.quotient_rank)
                    })?;
                }
                let want = deg * binomial(n + d as usize - 1, n);
                ensure(chain.presentation.rank == want, || {
                    format!("{name} n={n}: tensor rank {} != {want}", chain.presentation.rank)
                })?;
                chains += 1;
            }
        }
    }
    Ok(format!(
        "{chains} chains of length n certified, tensor identity exact at D = {d}"
    ))
}

fn criterion_3() -> Check {
    let mut samples = 0;
    for (ri, name) in ALL_RINGS.iter().enumerate() {
        let (fam, h) = ring(name);
        let ctx = SeriesContext::with_standard_vars(Arc::clone(&fam), 2, 4).unwrap();
        let alg = fam.subring(&h).unwrap();
        let want: BTreeSet<String> = maximal_ideals(&alg)
            .unwrap()
            .iter()
            .map(|m| format!("{}S", m.describe()))
            .collect();
        let comps = minimal_primes(&ctx, &h).unwrap();
        let got: BTreeSet<String> = comps.iter().map(|c| c.describe()).collect();
        ensure(want == got && comps.len() == want.len(), || {
            format!("{name}: {got:?} != {want:?}")
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(77 + ri as u64);
        for j in 0..200 {
            let target = &comps[j % comps.len()];
            let mut f = random_series(&ctx, &h, 0.6, &mut rng).unwrap();
            if j % 2 == 1 {
                for g in target.maximal().generators() {
                    let r = random_series(&ctx, &h, 0.6, &mut rng).unwrap();
                    f = f.add(&ctx.constant(&h, g).unwrap().mul(&r).unwrap()).unwrap();
                }
            }
            for c in &comps {
                let k = residue_map(&f, c).unwrap().is_zero();
                ensure(k == ext_membership(&f, c).unwrap(), || {
                    format!("{name}: sample {j} disagrees")
                })?;
            }
            samples += 1;
        }
    }
    Ok(format!(
        "minimal primes match maximal ideals; kernel identity on {samples} samples"
    ))
}

fn criterion_4() -> Check {
    let mut count = 0;
    let mut regular = 0;
    for s in sweep("rationals", 6) {
        let comps = minimal_primes(&s.ctx, &s.ctx.family().base_handle()).unwrap();
        for (exps, ideal) in &s.ideals {
            let h = height_monomial(ideal.gens(), &comps[0]).unwrap();
            let oracle = cover(s.n, exps);
            ensure(h == oracle, || {
                format!("{}: height {h}, oracle {oracle}", ideal.render())
            })?;
            ensure(h <= ideal.len(), || {
                format!("{}: height exceeds generators", ideal.render())
            })?;
            if is_regular_sequence(&s.ctx, ideal.gens()).unwrap().is_regular() {
                regular += 1;
                ensure(h == ideal.len(), || {
                    format!("{}: regular but height {h}", ideal.render())
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} monomial ideals, {regular} certified regular"))
}

fn criterion_5() -> Check {
    let mut count = 0;
    for ring_name in ["rationals", "split"] {
        for s in sweep(ring_name, 6) {
            let comps = minimal_primes(&s.ctx, &s.ctx.family().base_handle()).unwrap();
            for (exps, ideal) in &s.ideals {
                let min = minimalize(exps);
                let ht = cover(s.n, exps);
                if min.len() != ht {
                    continue;
                }
                let oracle = colon_primes(s.n, exps);
                let rep = verify_unmixed(ideal.gens(), &comps).map_err(|e| format!("{}: {e}", ideal.render()))?;
                ensure(rep.unmixed(), || format!("{}: not unmixed", ideal.render()))?;
                for c in &comps {
                    let got: BTreeSet<Vec<usize>> = associated_primes_monomial(ideal.gens(), c)
                        .unwrap()
                        .into_iter()
                        .map(|p| p.vars)
                        .collect();
                    ensure(got == oracle, || {
                        format!("{}: {got:?} against colon oracle {oracle:?}", ideal.render())
                    })?;
                    ensure(got.iter().all(|p| p.len() == ht), || {
                        format!("{}: mixed heights", ideal.render())
                    })?;
                }
                count += 1;
            }
        }
    }
    let ctx = SeriesContext::with_standard_vars(ring("rationals").0, 2, 6).unwrap();
    let comps = minimal_primes(&ctx, &ctx.family().base_handle()).unwrap();
    let bad = FgIdeal::parse(&ctx, &["X1^2", "X1*X2"]).unwrap();
    ensure(
        matches!(verify_unmixed(bad.gens(), &comps), Err(Error::NotHeightGenerated(_))),
        || "(X1^2, X1*X2) accepted".into(),
    )?;
    ensure(colon_primes(2, &vec![vec![2, 0], vec![1, 1]]).len() == 2, || {
        "oracle misses the embedded prime".into()
    })?;
    Ok(format!(
        "{count} height-generated ideals unmixed, primes match the colon oracle; embedded case rejected"
    ))
}

fn criterion_6() -> Check {
    let mut count = 0;
    for s in sweep("rationals", 6) {
        for (exps, ideal) in &s.ideals {
            let ht = cover(s.n, exps);
            if minimalize(exps).len() != ht {
                continue;
            }
            let g = cgrade(ideal).map_err(|e| format!("{}: {e}", ideal.render()))?;
            ensure(g.grade == ht, || {
                format!("{}: grade {} height {ht}", ideal.render(), g.grade)
            })?;
            ensure(g.report.is_regular() && g.report.certified_to_degree == 6, || {
                format!("{}: sequence not certified", ideal.render())
            })?;
            for f in &g.sequence {
                ensure(truncated_membership(f, ideal).unwrap(), || {
                    format!("{}: sequence leaves the ideal", ideal.render())
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("cgrade = height on {count} height-generated ideals at D = 6"))
}

fn criterion_7() -> Check {
    let (fam, _) = ring("split");
    let ctx = SeriesContext::with_standard_vars(fam, 3, 5).unwrap();
    let mut suite = vec![FgIdeal::parse(&ctx, &["e0*X1", "e1*X1"]).unwrap()];
    for seed in 0..10 {
        suite.push(seeded_redundant_ideal(&ctx, seed).unwrap());
    }
    for i in &suite {
        let r = replace_with_regular(i).map_err(|e| format!("{}: {e}", i.render()))?;
        for f in r.ideal.gens() {
            ensure(truncated_membership(f, i).unwrap(), || {
                format!("{}: output leaves the ideal", i.render())
            })?;
        }
        for f in i.gens() {
            ensure(truncated_membership(f, &r.ideal).unwrap(), || {
                format!("{}: output misses {}", i.render(), f.render())
            })?;
        }
        ensure(is_regular_sequence(&ctx, r.ideal.gens()).unwrap().is_regular(), || {
            format!("{}: not regular", i.render())
        })?;
    }
    let first = replace_with_regular(&suite[0]).unwrap();
    ensure(first.ideal.len() == 1, || {
        format!("split suite gave {}", first.ideal.render())
    })?;
    Ok(format!(
        "{} ideals replaced by regular sequences generating the same ideal",
        suite.len()
    ))
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

fn criterion_8() -> Check {
    let fam = DirectedFamily::example_ring(Field::Rational);
    let ideals: Vec<(Vec<String>, usize)> = vec![
        (vec!["z0".into()], 1),
        ((0..5).map(|i| format!("z{i}")).collect(), 5),
        (vec!["z0*z1".into()], 2),
    ];
    let mut count = 0;
    for (j, least) in &ideals {
        let ws = non_sft_scan(&fam, j, 6).map_err(|e| e.to_string())?;
        ensure(ws.len() == 6, || "six witnesses".into())?;
        for w in &ws {
            ensure(w.holds() && w.s == *least, || {
                format!("J={j:?} k={}: witness {w:?}", w.k)
            })?;
            let alg = fam.subring(&fam.window(w.s + w.k + 3)).unwrap();
            let zs: Vec<AlgebraElement> = (w.s..w.s + w.k).map(|t| alg.parse(&format!("z{t}")).unwrap()).collect();
            let f = zs.iter().skip(1).fold(zs[0].clone(), |a, z| a.add(z));
            let prod = zs.iter().skip(1).fold(zs[0].clone(), |a, z| a.mul(z));
            let power = f.pow(w.k as u64);
            ensure(power == prod.scale(&alg.field().from_i64(factorial(w.k))), || {
                format!("k={}: expansion", w.k)
            })?;
            ensure(!prod.is_zero(), || "square-free product vanished".into())?;
            let gens: Vec<AlgebraElement> = j.iter().map(|g| alg.parse(g).unwrap()).collect();
            ensure(!alg.ideal_contains(&gens, &power).unwrap(), || {
                format!("J={j:?} k={}: power inside J", w.k)
            })?;
            ensure(w.coefficient.to_string() == factorial(w.k).to_string(), || {
                "coefficient".into()
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} witnesses with f^k = k! z_s..z_(s+k-1) outside J, stable under enlargement"
    ))
}

fn criterion_9() -> Check {
    let fam = DirectedFamily::example_ring(Field::Rational);
    let r = wb_failure_check(&fam, 4, 6, 50, 9).map_err(|e| e.to_string())?;
    ensure(r.annihilator_is_p(), || format!("report {r:?}"))?;
    ensure(r.spanning == 16 * 6 && r.samples == 50, || format!("sizes {r:?}"))?;
    // independent recount
    let h = fam.window(4);
    let alg = fam.subring(&h).unwrap();
    let ctx = SeriesContext::new(Arc::clone(&fam), vec!["X".into()], 6).unwrap();
    let y = ctx.constant(&h, &alg.parse("y").unwrap()).unwrap();
    let mut killed = 0;
    for b in 0..alg.dim() {
        let e = alg.basis_element(b);
        if e.is_one() {
            continue;
        }
        for i in 0..6 {
            let g = ctx.term(&h, &e, Monomial::from_exponents(vec![i])).unwrap();
            killed += y.mul(&g).unwrap().is_zero() as usize;
        }
    }
    ensure(killed == 96, || format!("y kills {killed} of 96"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    for _ in 0..50 {
        let tail: SeriesElement = random_series(&ctx, &h, 0.7, &mut rng)
            .unwrap()
            .mul(&ctx.var(0).unwrap())
            .unwrap();
        let u = ctx
            .constant(&h, &alg.one().scale(&alg.field().from_i64(rng.gen_range(1..5))))
            .unwrap();
        let f = tail.add(&u).unwrap();
        ensure(!y.mul(&f).unwrap().is_zero(), || format!("y kills {}", f.render()))?;
    }
    Ok(format!(
        "y kills all {} spanning elements, no unit sample; minimal primes of (0): {}",
        r.spanning, r.minimal_primes
    ))
}

fn criterion_10() -> Check {
    let fam = DirectedFamily::example_ring(Field::Rational);
    let ctx = SeriesContext::with_standard_vars(Arc::clone(&fam), 1, 3).unwrap();
    let gens: Vec<String> = (0..=6).map(|i| format!("z{i}")).collect();
    let links = extended_chain(&ctx, &gens, 6).map_err(|e| e.to_string())?;
    ensure(links.len() == 6, || "six links".into())?;
    let alg = fam.subring(&fam.window(7)).unwrap();
    for (i, l) in links.iter().enumerate() {
        ensure(l.strict_in_r && l.strict_in_s, || format!("link {i} not strict"))?;
        let prev: Vec<AlgebraElement> = gens[..=i].iter().map(|g| alg.parse(g).unwrap()).collect();
        let next = alg.parse(&gens[i + 1]).unwrap();
        ensure(!alg.ideal_contains(&prev, &next).unwrap(), || {
            format!("oracle: link {i} not strict")
        })?;
    }
    Ok("chain (z0) < (z0, z1) < .. < (z0..z6) strict in R and in S".into())
}

fn criterion_11() -> Check {
    let s = load("paper-suite").map_err(|e| e.to_string())?;
    let a = run(&s, Overrides::default()).map_err(|e| e.to_string())?;
    let b = run(&s, Overrides::default()).map_err(|e| e.to_string())?;
    ensure(a.all_pass(), || format!("paper-suite not all-pass:\n{}", a.to_text()))?;
    ensure(without_timings(&a.to_json()) == without_timings(&b.to_json()), || {
        "reports differ".into()
    })?;
    Ok(format!("{} tasks, identical JSON modulo timings", a.tasks.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "faithful flatness", 60.0, criterion_1),
        (2, "dimension", 10.0, criterion_2),
        (3, "minimal primes", 10.0, criterion_3),
        (4, "Krull bound", 30.0, criterion_4),
        (5, "unmixedness", 30.0, criterion_5),
        (6, "grade = height", 30.0, criterion_6),
        (7, "regular generation", 10.0, criterion_7),
        (8, "non-SFT witness", 5.0, criterion_8),
        (9, "WB failure", 5.0, criterion_9),
        (10, "non-Noetherian chain", 5.0, criterion_10),
        (11, "determinism", f64::INFINITY, criterion_11),
    ];
    let mut failed = 0;
    for (i, name, budget, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let budget_text = if budget.is_finite() {
            format!(" (budget {budget:.0} s)")
        } else {
            String::new()
        };
        let result = result.and_then(|m| {
            if secs < budget {
                Ok(m)
            } else {
                Err(format!("{m}; over budget"))
            }
        });
        match result {
            Ok(m) => println!("criterion {i:>2} {name:<21} PASS  {secs:6.2} s{budget_text}  {m}"),
            Err(m) => {
                failed += 1;
                println!("criterion {i:>2} {name:<21} FAIL  {secs:6.2} s{budget_text}  {m}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria pass");
}
