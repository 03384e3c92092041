//! The local ring `k[Y, Z_0, Z_1, ..]/(Y^2, Z_i^2, Y Z_i)` with maximal
//! ideal `P = (y, z_0, z_1, ..)`: witnesses that `P` is not SFT, and the
//! check that `P[[X]]` is the annihilator of `y` in the series ring.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artinian::{maximal_ideals, AlgebraElement, ArtinianAlgebra, MaximalKind};
use crate::error::{Error, Result};
use crate::exactpoly::{parse_expr, Monomial};
use crate::family::{DirectedFamily, SubringHandle};
use crate::series::{random_coefficient, SeriesContext, SeriesElement};

/// The first `s` generators `z_0 .. z_(s-1)` materialized.
#[derive(Clone)]
pub struct ExampleRingWindow {
    family: Arc<DirectedFamily>,
    handle: SubringHandle,
    algebra: Arc<ArtinianAlgebra>,
}

impl ExampleRingWindow {
    pub fn new(family: &Arc<DirectedFamily>, s: usize) -> Result<Self> {
        if family.stream().name() != "example-ring" {
            return Err(Error::Invalid(format!("{} is not the example ring", family.name())));
        }
        let handle = family.window(s);
        let algebra = family.subring(&handle)?;
        Ok(ExampleRingWindow {
            family: Arc::clone(family),
            handle,
            algebra,
        })
    }

    pub fn family(&self) -> &Arc<DirectedFamily> {
        &self.family
    }

    pub fn s(&self) -> usize {
        self.handle.indices().len()
    }

    pub fn handle(&self) -> &SubringHandle {
        &self.handle
    }

    pub fn algebra(&self) -> &Arc<ArtinianAlgebra> {
        &self.algebra
    }

    pub fn y(&self) -> AlgebraElement {
        self.algebra.parse("y").expect("y is a base variable")
    }

    pub fn z(&self, i: usize) -> Result<AlgebraElement> {
        self.algebra.parse(&format!("z{i}"))
    }

    /// `y, z_0, .., z_(s-1)`.
    pub fn maximal_generators(&self) -> Vec<AlgebraElement> {
        let mut out = vec![self.y()];
        out.extend((0..self.s()).map(|i| self.z(i).expect("inside the window")));
        out
    }

    /// One maximal ideal, generated by the variables.
    pub fn is_local(&self) -> Result<bool> {
        let ms = maximal_ideals(&self.algebra)?;
        Ok(ms.len() == 1
            && matches!(ms[0].kind(), MaximalKind::LocalMonomial)
            && ms[0].generators().len() == self.s() + 1)
    }

    /// `y * y = y * z_i = 0`.
    pub fn y_annihilates_maximal(&self) -> bool {
        let y = self.y();
        self.maximal_generators().iter().all(|g| y.mul(g).is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct SftWitness {
    pub k: usize,
    pub s: usize,
    pub f: String,
    /// `f^k` as computed.
    pub power: String,
    /// `k!`.
    pub coefficient: BigInt,
    /// `z_s * .. * z_(s+k-1)`.
    pub product: String,
    /// `f^k == k! * product`, exactly.
    pub expansion_exact: bool,
    /// `f^k` is not in `J`.
    pub outside: bool,
    /// Same verdict in a window three generators larger.
    pub stable: bool,
}

impl SftWitness {
    pub fn holds(&self) -> bool {
        self.expansion_exact && self.outside && self.stable
    }
}

struct Verdict {
    power: AlgebraElement,
    expected: AlgebraElement,
    outside: bool,
}

fn verdict(
    fam: &Arc<DirectedFamily>,
    j: &[(SubringHandle, AlgebraElement)],
    s: usize,
    k: usize,
    extra: usize,
) -> Result<Verdict> {
    let mut h = fam.window(s + k + extra);
    for (hj, _) in j {
        h = h.join(hj)?;
    }
    let alg = fam.subring(&h)?;
    let gens = j
        .iter()
        .map(|(hj, a)| fam.embed(a, hj, &h))
        .collect::<Result<Vec<_>>>()?;
    let mut f = alg.zero();
    let mut product = alg.one();
    for t in s..s + k {
        let z = alg.parse(&format!("z{t}"))?;
        f = f.add(&z);
        product = product.mul(&z);
    }
    let power = f.pow(k as u64);
    let fact = alg.field().from_bigint(&factorial(k));
    let expected = product.scale(&fact);
    let outside = !alg.ideal_contains(&gens, &power)?;
    Ok(Verdict {
        power,
        expected,
        outside,
    })
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * i)
}

fn parse_ideal(fam: &Arc<DirectedFamily>, j: &[String]) -> Result<Vec<(SubringHandle, AlgebraElement)>> {
    j.iter().map(|g| fam.parse_element(g)).collect()
}

/// Least `s` past every `z` index occurring in the generators of `J`.
fn least_s(fam: &Arc<DirectedFamily>, j: &[String]) -> Result<usize> {
    let mut s = 0;
    for g in j {
        for v in parse_expr(g)?.variables() {
            if let Some(i) = fam.stream().index_of(&v) {
                s = s.max(i + 1);
            }
        }
    }
    Ok(s)
}

/// `f_k = z_s + .. + z_(s+k-1)` with `f_k^k` outside `J`.
pub fn sft_witness(family: &Arc<DirectedFamily>, j: &[String], k: usize) -> Result<SftWitness> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let p = family.field().characteristic();
    if p != 0 && p as usize <= k {
        return Err(Error::CharacteristicTooSmall { p, k });
    }
    let gens = parse_ideal(family, j)?;
    let mut h = family.base_handle();
    for (hj, _) in &gens {
        h = h.join(hj)?;
    }
    let alg = family.subring(&h)?;
    let embedded = gens
        .iter()
        .map(|(hj, a)| family.embed(a, hj, &h))
        .collect::<Result<Vec<_>>>()?;
    if alg.ideal_contains(&embedded, &alg.one())? {
        return Err(Error::NotProper);
    }
    let s = least_s(family, j)?;
    let v = verdict(family, &gens, s, k, 0)?;
    let wide = verdict(family, &gens, s, k, 3)?;
    let names: Vec<String> = (s..s + k).map(|t| format!("z{t}")).collect();
    Ok(SftWitness {
        k,
        s,
        f: names.join(" + "),
        power: v.power.render(),
        coefficient: factorial(k),
        product: names.join("*"),
        expansion_exact: v.power == v.expected,
        outside: v.outside,
        stable: v.outside == wide.outside && wide.power == wide.expected,
    })
}

/// One witness for each `k = 1..k_max`.
pub fn non_sft_scan(family: &Arc<DirectedFamily>, j: &[String], k_max: usize) -> Result<Vec<SftWitness>> {
    (1..=k_max).map(|k| sft_witness(family, j, k)).collect()
}

#[derive(Clone, Debug)]
pub struct WbReport {
    pub s: usize,
    pub trunc: u32,
    /// Size of the spanning set `b X^i` of truncated `P[[X]]`, `b` running
    /// over the non-unit standard monomials.
    pub spanning: usize,
    /// How many of those `y` kills.
    pub annihilated: usize,
    pub samples: usize,
    /// Sampled `h` with unit constant term and `y h ≠ 0`.
    pub nonzero: usize,
    /// Named spot checks: `(description, holds)`.
    pub spot_checks: Vec<(String, bool)>,
    /// Minimal primes of `(0)` in the truncated series ring, over the window.
    pub minimal_primes: usize,
}

impl WbReport {
    pub fn annihilator_is_p(&self) -> bool {
        self.annihilated == self.spanning && self.nonzero == self.samples && self.spot_checks.iter().all(|(_, ok)| *ok)
    }

    pub const CITED: &'static str =
        "P[[X]] has infinite height in R[[X]] for this non-SFT R (known result, not computed)";
}

/// Check `P[[X]] = (0 : y)` at truncation `trunc` over the window of size
/// `s`, with `samples` seeded unit-constant-term elements.
pub fn wb_failure_check(
    family: &Arc<DirectedFamily>,
    s: usize,
    trunc: u32,
    samples: usize,
    seed: u64,
) -> Result<WbReport> {
    if s == 0 || trunc < 2 {
        return Err(Error::Invalid(
            "need a window of size at least 1 and truncation at least 2".into(),
        ));
    }
    let win = ExampleRingWindow::new(family, s)?;
    let ctx = SeriesContext::new(Arc::clone(family), vec!["X".to_string()], trunc)?;
    let h = win.handle().clone();
    let alg = win.algebra();
    let y = ctx.constant(&h, &win.y())?;
    let mut spanning = 0;
    let mut annihilated = 0;
    for b in 0..alg.dim() {
        let e = alg.basis_element(b);
        if e.is_one() {
            continue;
        }
        for i in 0..trunc {
            let g = ctx.term(&h, &e, Monomial::from_exponents(vec![i]))?;
            spanning += 1;
            if y.mul(&g)?.is_zero() {
                annihilated += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonzero = 0;
    for _ in 0..samples {
        let hx = sample_unit_series(&ctx, &h, alg, &mut rng)?;
        if !y.mul(&hx)?.is_zero() {
            nonzero += 1;
        }
    }
    let mut spot = Vec::new();
    let g = ctx.parse("y*X")?;
    spot.push(("y * (y*X) = 0".to_string(), y.mul(&g)?.is_zero()));
    let h1 = ctx.parse("1 + z0*X")?;
    spot.push(("y * (1 + z0*X) = y".to_string(), y.mul(&h1)? == y));
    if s > 3 {
        let g = ctx.parse("z3*X^2")?;
        spot.push(("y * (z3*X^2) = 0".to_string(), y.mul(&g)?.is_zero()));
    }
    let minimal_primes = crate::series::minimal_primes(&ctx, &h)?.len();
    Ok(WbReport {
        s,
        trunc,
        spanning,
        annihilated,
        samples,
        nonzero,
        spot_checks: spot,
        minimal_primes,
    })
}

fn sample_unit_series<R: Rng>(
    ctx: &Arc<SeriesContext>,
    h: &SubringHandle,
    alg: &Arc<ArtinianAlgebra>,
    rng: &mut R,
) -> Result<SeriesElement> {
    let one_index = (0..alg.dim())
        .find(|&i| alg.basis_element(i).is_one())
        .expect("unit basis element");
    let mut out = ctx.zero(h)?;
    for m in ctx.monomials() {
        let mut c = random_coefficient(alg, rng);
        if m.is_one() {
            let mut coords = c.coords().to_vec();
            let unit = [1, -1, 2, -2, 3][rng.gen_range(0..5)];
            coords[one_index] = alg.field().from_i64(unit);
            c = alg.element(coords)?;
        }
        out = out.add(&ctx.term(h, &c, m.clone())?)?;
    }
    Ok(out)
}
