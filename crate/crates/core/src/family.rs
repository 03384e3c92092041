//! Directed families of Artinian subrings `F(R0, R)`.
//!
//! `R` is the union of `R0[g_i : i in A]` over finite index sets `A`, where
//! the generators `g_0, g_1, ...` come from a [`GeneratorStream`]. Each
//! generator is bound by relations in the base variables and itself, and
//! the subring on a finite index set is presented by collecting them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::artinian::{AlgebraElement, ArtinianAlgebra};
use crate::error::{Error, Result};
use crate::exactpoly::{parse_expr, parse_polynomial, Field, Polynomial};

static NEXT_FAMILY_ID: AtomicU64 = AtomicU64::new(1);

/// One adjoined generator: its name and relations written in the base
/// variables plus that name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamGenerator {
    pub name: String,
    pub relations: Vec<String>,
}

pub trait GeneratorStream: Send + Sync {
    fn name(&self) -> &str;

    /// Number of generators, `None` when the stream never ends.
    fn bound(&self) -> Option<usize>;

    /// Generator `i`. Only called for `i` below the bound.
    fn produce(&self, i: usize) -> StreamGenerator;

    /// Index of the generator with this name.
    fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.bound()?).find(|&i| self.produce(i).name == name)
    }

    /// Whether every subring over a field base is claimed to be a field.
    fn field_tower(&self) -> bool {
        false
    }
}

/// `z0, z1, ...` with `z_i^2 = y z_i = 0`.
pub struct ExampleRingStream;

impl GeneratorStream for ExampleRingStream {
    fn name(&self) -> &str {
        "example-ring"
    }

    fn bound(&self) -> Option<usize> {
        None
    }

    fn produce(&self, i: usize) -> StreamGenerator {
        StreamGenerator {
            name: format!("z{i}"),
            relations: vec![format!("z{i}^2"), format!("y*z{i}")],
        }
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        let digits = name.strip_prefix('z')?;
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return None;
        }
        digits.parse().ok()
    }
}

/// Square roots of 2, 3, 5, 7, ... adjoined one at a time.
pub struct QuadraticTowerStream;

fn nth_prime(n: usize) -> u64 {
    let mut found = 0;
    let mut c = 1u64;
    loop {
        c += 1;
        if (2..).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            if found == n {
                return c;
            }
            found += 1;
        }
    }
}

impl GeneratorStream for QuadraticTowerStream {
    fn name(&self) -> &str {
        "quadratic-tower"
    }

    fn bound(&self) -> Option<usize> {
        None
    }

    fn produce(&self, i: usize) -> StreamGenerator {
        let p = nth_prime(i);
        StreamGenerator {
            name: format!("sqrt{p}"),
            relations: vec![format!("sqrt{p}^2 - {p}")],
        }
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        let p: u64 = name.strip_prefix("sqrt")?.parse().ok()?;
        (0..64).find(|&i| nth_prime(i) == p)
    }

    fn field_tower(&self) -> bool {
        true
    }
}

/// A finite list of generators, as read from a scenario.
pub struct ListStream {
    name: String,
    gens: Vec<StreamGenerator>,
    field_tower: bool,
}

impl ListStream {
    pub fn new(name: impl Into<String>, gens: Vec<StreamGenerator>, field_tower: bool) -> Self {
        ListStream {
            name: name.into(),
            gens,
            field_tower,
        }
    }

    pub fn empty() -> Self {
        Self::new("none", Vec::new(), false)
    }
}

impl GeneratorStream for ListStream {
    fn name(&self) -> &str {
        &self.name
    }

    fn bound(&self) -> Option<usize> {
        Some(self.gens.len())
    }

    fn produce(&self, i: usize) -> StreamGenerator {
        self.gens[i].clone()
    }

    fn field_tower(&self) -> bool {
        self.field_tower
    }
}

/// Names a member `R_A` of a family by its finite index set `A`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubringHandle {
    family: u64,
    indices: Vec<usize>,
}

impl fmt::Debug for SubringHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{:?}", self.indices)
    }
}

impl SubringHandle {
    pub fn family_id(&self) -> u64 {
        self.family
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_base(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, other: &SubringHandle) -> bool {
        self.family == other.family && other.indices.iter().all(|i| self.indices.binary_search(i).is_ok())
    }

    pub fn join(&self, other: &SubringHandle) -> Result<SubringHandle> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch);
        }
        let set: BTreeSet<usize> = self.indices.iter().chain(&other.indices).copied().collect();
        Ok(SubringHandle {
            family: self.family,
            indices: set.into_iter().collect(),
        })
    }
}

/// Join of two handles; fails on handles from different families.
pub fn join(a: &SubringHandle, b: &SubringHandle) -> Result<SubringHandle> {
    a.join(b)
}

pub struct DirectedFamily {
    id: u64,
    name: String,
    base: Arc<ArtinianAlgebra>,
    stream: Arc<dyn GeneratorStream>,
    cache: Mutex<HashMap<Vec<usize>, Arc<ArtinianAlgebra>>>,
}

impl fmt::Debug for DirectedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirectedFamily({}, base {})", self.name, self.base.describe())
    }
}

impl DirectedFamily {
    pub fn new(name: impl Into<String>, base: Arc<ArtinianAlgebra>, stream: Arc<dyn GeneratorStream>) -> Arc<Self> {
        let mut cache = HashMap::new();
        cache.insert(Vec::new(), Arc::clone(&base));
        Arc::new(DirectedFamily {
            id: NEXT_FAMILY_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            base,
            stream,
            cache: Mutex::new(cache),
        })
    }

    /// `Q[y]/(y^2)` with `z0, z1, ...` such that `z_i^2 = y z_i = 0`.
    pub fn example_ring(field: Field) -> Arc<Self> {
        let base = ArtinianAlgebra::present_str(field, &["y"], &["y^2"]).expect("dual numbers");
        Self::new("example-ring", base, Arc::new(ExampleRingStream))
    }

    /// `Q` with square roots of successive primes.
    pub fn quadratic_tower() -> Arc<Self> {
        Self::new(
            "quadratic-tower",
            ArtinianAlgebra::base_field(Field::Rational),
            Arc::new(QuadraticTowerStream),
        )
    }

    /// A product of `copies` copies of the base field, with no generators.
    pub fn split(field: Field, copies: usize) -> Result<Arc<Self>> {
        let k = ArtinianAlgebra::base_field(field);
        let base = ArtinianAlgebra::product(vec![k; copies])?;
        Ok(Self::constant(format!("split-{copies}"), base))
    }

    /// The family whose only member is `base`.
    pub fn constant(name: impl Into<String>, base: Arc<ArtinianAlgebra>) -> Arc<Self> {
        Self::new(name, base, Arc::new(ListStream::empty()))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn base(&self) -> &Arc<ArtinianAlgebra> {
        &self.base
    }

    pub fn stream(&self) -> &Arc<dyn GeneratorStream> {
        &self.stream
    }

    pub fn handle(&self, indices: impl IntoIterator<Item = usize>) -> SubringHandle {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        SubringHandle {
            family: self.id,
            indices: set.into_iter().collect(),
        }
    }

    pub fn base_handle(&self) -> SubringHandle {
        self.handle([])
    }

    /// Handle for the first `s` generators.
    pub fn window(&self, s: usize) -> SubringHandle {
        self.handle(0..s)
    }

    fn check(&self, h: &SubringHandle) -> Result<()> {
        if h.family != self.id {
            return Err(Error::FamilyMismatch);
        }
        if let (Some(n), Some(&last)) = (self.stream.bound(), h.indices.last()) {
            if last >= n {
                return Err(Error::StreamFinite(n));
            }
        }
        Ok(())
    }

    /// The member `R0[g_i : i in h]`, presented and cached.
    pub fn subring(&self, h: &SubringHandle) -> Result<Arc<ArtinianAlgebra>> {
        self.check(h)?;
        if let Some(a) = self.cache.lock().expect("cache lock").get(&h.indices) {
            return Ok(Arc::clone(a));
        }
        let built = self.present(&h.indices)?;
        let mut cache = self.cache.lock().expect("cache lock");
        Ok(Arc::clone(cache.entry(h.indices.clone()).or_insert(built)))
    }

    fn present(&self, indices: &[usize]) -> Result<Arc<ArtinianAlgebra>> {
        if self.base.is_product() {
            return Err(Error::UnsupportedPresentation(
                "generators over a product base are not supported".into(),
            ));
        }
        let field = self.field();
        let base_vars = self.base.vars().to_vec();
        let nb = base_vars.len();
        let n = nb + indices.len();
        let mut vars = base_vars.clone();
        let identity: Vec<usize> = (0..nb).collect();
        let mut relations: Vec<Polynomial> = self
            .base
            .relations()
            .expect("presented base")
            .generators()
            .iter()
            .map(|r| r.remap(n, &identity))
            .collect();
        for (pos, &i) in indices.iter().enumerate() {
            let g = self.stream.produce(i);
            let mut local = base_vars.clone();
            local.push(g.name.clone());
            let mut map = identity.clone();
            map.push(nb + pos);
            for r in &g.relations {
                relations.push(parse_polynomial(r, field, &local)?.remap(n, &map));
            }
            vars.push(g.name);
        }
        if self.stream.field_tower() && self.base.dim() == 1 {
            ArtinianAlgebra::tower(field, vars, relations)
        } else {
            ArtinianAlgebra::present(field, vars, relations)
        }
    }

    /// Carry an element of `R_from` into `R_to`, which must contain it.
    pub fn embed(&self, a: &AlgebraElement, from: &SubringHandle, to: &SubringHandle) -> Result<AlgebraElement> {
        if !to.contains(from) || from.family != self.id {
            return Err(Error::Invalid(format!("{from:?} is not contained in {to:?}")));
        }
        let src = self.subring(from)?;
        if !Arc::ptr_eq(a.owner(), &src) {
            return Err(Error::Invalid(format!("element does not belong to {from:?}")));
        }
        if from == to {
            return Ok(a.clone());
        }
        let dst = self.subring(to)?;
        let nb = self.base.vars().len();
        let mut map: Vec<usize> = (0..nb).collect();
        for i in &from.indices {
            map.push(nb + to.indices.binary_search(i).expect("contained"));
        }
        let p = a.to_polynomial().expect("presented subring");
        dst.from_polynomial(&p.remap(dst.vars().len(), &map))
    }

    /// Smallest handle covering the named symbols (base variables and
    /// generator names; `e0, e1, ...` name product idempotents).
    pub fn handle_for_names<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<SubringHandle> {
        let mut idx = BTreeSet::new();
        for name in names {
            if self.base.vars().iter().any(|v| v == name) {
                continue;
            }
            if self.base.is_product()
                && name
                    .strip_prefix('e')
                    .and_then(|d| d.parse::<usize>().ok())
                    .is_some_and(|i| i < self.base.factors().len())
            {
                continue;
            }
            match self.stream.index_of(name) {
                Some(i) => {
                    idx.insert(i);
                }
                None => return Err(Error::Parse(format!("unknown symbol {name:?} in family {}", self.name))),
            }
        }
        let h = self.handle(idx);
        self.check(&h)?;
        Ok(h)
    }

    /// Parse an element of `R` together with the least handle containing
    /// its symbols.
    pub fn parse_element(&self, s: &str) -> Result<(SubringHandle, AlgebraElement)> {
        let vars = parse_expr(s)?.variables();
        let h = self.handle_for_names(vars.iter().map(String::as_str))?;
        let a = self.subring(&h)?.parse(s)?;
        Ok((h, a))
    }

    /// A monic polynomial over the base field (hence over `R0`) satisfied
    /// by `a`; its minimal polynomial over the field of constants.
    pub fn integrality_witness(&self, h: &SubringHandle, a: &AlgebraElement) -> Result<Polynomial> {
        let owner = self.subring(h)?;
        if !Arc::ptr_eq(a.owner(), &owner) {
            return Err(Error::Invalid(format!("element does not belong to {h:?}")));
        }
        Ok(a.minimal_polynomial())
    }

    /// For `i = 0..t`, whether `r_{i+1}` lies outside `(r_0, .., r_i)R`,
    /// decided in a member containing all of them.
    pub fn non_noetherian_chain(&self, gens: &[String], t: usize) -> Result<Vec<bool>> {
        if t == 0 {
            return Ok(Vec::new());
        }
        if gens.len() < t + 1 {
            return Err(Error::Invalid(format!(
                "a chain of length {t} needs {} elements",
                t + 1
            )));
        }
        let parsed = gens[..=t]
            .iter()
            .map(|g| self.parse_element(g))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::with_capacity(t);
        for i in 0..t {
            let mut h = parsed[i + 1].0.clone();
            for (hj, _) in &parsed[..=i] {
                h = h.join(hj)?;
            }
            let alg = self.subring(&h)?;
            let prev = parsed[..=i]
                .iter()
                .map(|(hj, a)| self.embed(a, hj, &h))
                .collect::<Result<Vec<_>>>()?;
            let next = self.embed(&parsed[i + 1].1, &parsed[i + 1].0, &h)?;
            out.push(!alg.ideal_contains(&prev, &next)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(a: &Arc<ArtinianAlgebra>) -> Vec<String> {
        (0..a.dim()).map(|i| a.basis_name(i)).collect()
    }

    #[test]
    fn subring_examples() {
        let f = DirectedFamily::example_ring(Field::Rational);
        assert!(Arc::ptr_eq(&f.subring(&f.base_handle()).unwrap(), f.base()));
        let w = f.subring(&f.window(2)).unwrap();
        assert_eq!(w.dim(), 5);
        let mut got = names(&w);
        got.sort();
        assert_eq!(got, ["1", "y", "z0", "z0*z1", "z1"]);
        assert_eq!(f.subring(&f.window(4)).unwrap().dim(), 17);

        let t = DirectedFamily::quadratic_tower();
        let a = t.subring(&t.window(2)).unwrap();
        let mut got = names(&a);
        got.sort();
        assert_eq!(got, ["1", "sqrt2", "sqrt2*sqrt3", "sqrt3"]);
    }

    #[test]
    fn subring_is_cached() {
        let f = DirectedFamily::example_ring(Field::Rational);
        let h = f.handle([3, 1]);
        assert!(Arc::ptr_eq(
            &f.subring(&h).unwrap(),
            &f.subring(&f.handle([1, 3])).unwrap()
        ));
    }

    #[test]
    fn join_examples() {
        let f = DirectedFamily::example_ring(Field::Rational);
        let a = f.handle([0]);
        let b = f.handle([1]);
        assert_eq!(a.join(&a).unwrap(), a);
        assert_eq!(a.join(&b).unwrap(), f.handle([0, 1]));
        assert_eq!(f.base_handle().join(&b).unwrap(), b);
        let g = DirectedFamily::example_ring(Field::Rational);
        assert_eq!(a.join(&g.handle([0])), Err(Error::FamilyMismatch));
    }

    #[test]
    fn integrality_examples() {
        let t = vec!["t".to_string()];
        let f = DirectedFamily::example_ring(Field::Rational);
        let (h, z0) = f.parse_element("z0").unwrap();
        assert_eq!(f.integrality_witness(&h, &z0).unwrap().render(&t), "t^2");
        let (h, s) = f.parse_element("y + z0").unwrap();
        assert_eq!(f.integrality_witness(&h, &s).unwrap().render(&t), "t^2");
        let q = DirectedFamily::quadratic_tower();
        let (h, r) = q.parse_element("sqrt2").unwrap();
        assert_eq!(q.integrality_witness(&h, &r).unwrap().render(&t), "t^2 - 2");
    }

    #[test]
    fn embedding_respects_products() {
        let f = DirectedFamily::example_ring(Field::Rational);
        let small = f.handle([1]);
        let big = f.handle([0, 1, 2]);
        let a = f.subring(&small).unwrap();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let (x, y) = (a.basis_element(i), a.basis_element(j));
                let lhs = f.embed(&x.mul(&y), &small, &big).unwrap();
                let rhs = f
                    .embed(&x, &small, &big)
                    .unwrap()
                    .mul(&f.embed(&y, &small, &big).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        assert!(f.embed(&a.one(), &big, &small).is_err());
    }

    #[test]
    fn chain_examples() {
        let f = DirectedFamily::example_ring(Field::Rational);
        let z: Vec<String> = (0..4).map(|i| format!("z{i}")).collect();
        assert_eq!(f.non_noetherian_chain(&z, 3).unwrap(), [true, true, true]);
        assert!(f.non_noetherian_chain(&z, 0).unwrap().is_empty());
        let same = vec!["z0".to_string(); 4];
        assert_eq!(f.non_noetherian_chain(&same, 3).unwrap(), [false, false, false]);
    }

    #[test]
    fn finite_streams_report_exhaustion() {
        let base = ArtinianAlgebra::base_field(Field::Rational);
        let s = ListStream::new(
            "one",
            vec![StreamGenerator {
                name: "a".into(),
                relations: vec!["a^2".into()],
            }],
            false,
        );
        let f = DirectedFamily::new("one", base, Arc::new(s));
        assert_eq!(f.subring(&f.window(1)).unwrap().dim(), 2);
        assert_eq!(f.subring(&f.window(2)).unwrap_err(), Error::StreamFinite(1));
    }

    #[test]
    fn product_families_have_only_the_base() {
        let f = DirectedFamily::split(Field::Rational, 2).unwrap();
        let (h, e) = f.parse_element("e0").unwrap();
        assert!(h.is_base());
        assert_eq!(e.render(), "(1, 0)");
    }

    #[test]
    fn primes() {
        let p: Vec<u64> = (0..6).map(nth_prime).collect();
        assert_eq!(p, [2, 3, 5, 7, 11, 13]);
    }
}
