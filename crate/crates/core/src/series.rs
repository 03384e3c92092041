//! Power series over a directed family, truncated by total degree.
//!
//! A [`SeriesElement`] carries a handle naming one member `R_A` that holds
//! all of its coefficients. Coefficients of total degree `>= D` are dropped,
//! so every identity here is exact below degree `D` and says nothing above.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use rand::Rng;

use crate::artinian::{maximal_ideals, residue_field, AlgebraElement, ArtinianAlgebra, MaximalIdealDesc, ResidueField};
use crate::error::{Error, Result};
use crate::exactpoly::linalg::{self, RowSpace, SparseVec};
use crate::exactpoly::{
    buchberger, monomials_below, normal_form, parse_expr, ExprTarget, GroebnerBasis, Monomial, Polynomial,
};
use crate::family::{DirectedFamily, SubringHandle};

/// Series variables and truncation degree over a family.
pub struct SeriesContext {
    family: Arc<DirectedFamily>,
    vars: Vec<String>,
    trunc: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl fmt::Debug for SeriesContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SeriesContext({} [{}] < {})",
            self.family.name(),
            self.vars.join(","),
            self.trunc
        )
    }
}

impl SeriesContext {
    pub fn new(family: Arc<DirectedFamily>, vars: Vec<String>, trunc: u32) -> Result<Arc<Self>> {
        if vars.is_empty() {
            return Err(Error::Invalid("at least one series variable is required".into()));
        }
        if trunc == 0 {
            return Err(Error::Invalid("truncation degree must be at least 1".into()));
        }
        let monomials = monomials_below(vars.len(), trunc);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Arc::new(SeriesContext {
            family,
            vars,
            trunc,
            monomials,
            index,
        }))
    }

    /// Variables named `X1..Xn` (or `X` when `n = 1`).
    pub fn with_standard_vars(family: Arc<DirectedFamily>, n: usize, trunc: u32) -> Result<Arc<Self>> {
        let vars = if n == 1 {
            vec!["X".to_string()]
        } else {
            (1..=n).map(|i| format!("X{i}")).collect()
        };
        Self::new(family, vars, trunc)
    }

    pub fn family(&self) -> &Arc<DirectedFamily> {
        &self.family
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// All series monomials of total degree below the truncation, in
    /// degrevlex order starting from 1.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The same variables and truncation over another family.
    pub fn over(&self, family: Arc<DirectedFamily>) -> Arc<SeriesContext> {
        Arc::new(SeriesContext {
            family,
            vars: self.vars.clone(),
            trunc: self.trunc,
            monomials: self.monomials.clone(),
            index: self.index.clone(),
        })
    }

    pub fn zero(self: &Arc<Self>, h: &SubringHandle) -> Result<SeriesElement> {
        let algebra = self.family.subring(h)?;
        Ok(SeriesElement {
            ctx: Arc::clone(self),
            subring: h.clone(),
            algebra,
            coeffs: BTreeMap::new(),
            no_single_subring: false,
        })
    }

    pub fn one(self: &Arc<Self>) -> SeriesElement {
        let h = self.family.base_handle();
        self.constant(&h, &self.family.base().one()).expect("base handle")
    }

    pub fn constant(self: &Arc<Self>, h: &SubringHandle, a: &AlgebraElement) -> Result<SeriesElement> {
        self.term(h, a, Monomial::one(self.nvars()))
    }

    /// `a * m` for an element `a` of `R_h`.
    pub fn term(self: &Arc<Self>, h: &SubringHandle, a: &AlgebraElement, m: Monomial) -> Result<SeriesElement> {
        let mut out = self.zero(h)?;
        if !Arc::ptr_eq(a.owner(), &out.algebra) {
            return Err(Error::Invalid(format!("coefficient does not belong to {h:?}")));
        }
        if m.nvars() != self.nvars() {
            return Err(Error::AmbientMismatch);
        }
        if m.degree() < self.trunc && !a.is_zero() {
            out.coeffs.insert(m, a.clone());
        }
        Ok(out)
    }

    /// The variable `X_i` with coefficient 1 in `R0`.
    pub fn var(self: &Arc<Self>, i: usize) -> Result<SeriesElement> {
        if i >= self.nvars() {
            return Err(Error::Invalid(format!("series variable {i} out of range")));
        }
        let h = self.family.base_handle();
        self.term(&h, &self.family.base().one(), Monomial::var(self.nvars(), i))
    }

    /// Parse `y + z0*X + 2*X^2`: series variables plus symbols of the family.
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<SeriesElement> {
        let expr = parse_expr(s)?;
        let names = expr.variables();
        let h = self
            .family
            .handle_for_names(names.iter().filter(|n| !self.vars.contains(n)).map(String::as_str))?;
        let algebra = self.family.subring(&h)?;
        expr.eval(&SeriesTarget {
            ctx: self,
            handle: h,
            algebra,
        })
    }

    /// Parse a list of generators and lift all of them to their join.
    pub fn parse_all(self: &Arc<Self>, gens: &[impl AsRef<str>]) -> Result<Vec<SeriesElement>> {
        let parsed = gens
            .iter()
            .map(|g| self.parse(g.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        lift_all(self, &parsed)
    }
}

/// Lift every element to the join of their handles.
pub fn lift_all(ctx: &Arc<SeriesContext>, fs: &[SeriesElement]) -> Result<Vec<SeriesElement>> {
    let mut h = ctx.family.base_handle();
    for f in fs {
        f.check_ctx(ctx)?;
        h = h.join(&f.subring)?;
    }
    fs.iter().map(|f| f.lift(&h)).collect()
}

struct SeriesTarget<'a> {
    ctx: &'a Arc<SeriesContext>,
    handle: SubringHandle,
    algebra: Arc<ArtinianAlgebra>,
}

impl ExprTarget for SeriesTarget<'_> {
    type Value = SeriesElement;

    fn constant(&self, q: &BigRational) -> Result<SeriesElement> {
        let c = self
            .algebra
            .field()
            .from_rational(q)
            .ok_or_else(|| Error::Parse(format!("{q} undefined in {}", self.algebra.field())))?;
        self.ctx.constant(&self.handle, &self.algebra.scalar(c))
    }

    fn variable(&self, name: &str) -> Result<SeriesElement> {
        if let Some(i) = self.ctx.vars.iter().position(|v| v == name) {
            let m = Monomial::var(self.ctx.nvars(), i);
            return self.ctx.term(&self.handle, &self.algebra.one(), m);
        }
        self.ctx.constant(&self.handle, &self.algebra.parse(name)?)
    }

    fn add(&self, a: &SeriesElement, b: &SeriesElement) -> Result<SeriesElement> {
        a.add(b)
    }

    fn sub(&self, a: &SeriesElement, b: &SeriesElement) -> Result<SeriesElement> {
        a.sub(b)
    }

    fn mul(&self, a: &SeriesElement, b: &SeriesElement) -> Result<SeriesElement> {
        a.mul(b)
    }

    fn neg(&self, a: &SeriesElement) -> Result<SeriesElement> {
        Ok(a.neg())
    }
}

/// A truncated series whose coefficients lie in one member of the family.
#[derive(Clone)]
pub struct SeriesElement {
    ctx: Arc<SeriesContext>,
    subring: SubringHandle,
    algebra: Arc<ArtinianAlgebra>,
    coeffs: BTreeMap<Monomial, AlgebraElement>,
    no_single_subring: bool,
}

impl fmt::Debug for SeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.render(), self.subring)
    }
}

impl fmt::Display for SeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl PartialEq for SeriesElement {
    fn eq(&self, other: &Self) -> bool {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) {
            return false;
        }
        match self.subring.join(&other.subring) {
            Ok(h) => match (self.lift(&h), other.lift(&h)) {
                (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
                _ => false,
            },
            Err(_) => false,
        }
    }
}

impl SeriesElement {
    pub fn ctx(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn subring(&self) -> &SubringHandle {
        &self.subring
    }

    pub fn algebra(&self) -> &Arc<ArtinianAlgebra> {
        &self.algebra
    }

    /// Nonzero coefficients in increasing monomial order.
    pub fn coeffs(&self) -> impl Iterator<Item = (&Monomial, &AlgebraElement)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> AlgebraElement {
        self.coeffs.get(m).cloned().unwrap_or_else(|| self.algebra.zero())
    }

    pub fn constant_term(&self) -> AlgebraElement {
        self.coeff(&Monomial::one(self.ctx.nvars()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least total degree of a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(Monomial::degree).min()
    }

    /// Set for truncations of series lying in no single member.
    pub fn no_single_subring(&self) -> bool {
        self.no_single_subring
    }

    fn check_ctx(&self, ctx: &Arc<SeriesContext>) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// The same series viewed in the larger member `R_h`.
    pub fn lift(&self, h: &SubringHandle) -> Result<SeriesElement> {
        if *h == self.subring {
            return Ok(self.clone());
        }
        let fam = &self.ctx.family;
        let algebra = fam.subring(h)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, a)| Ok((m.clone(), fam.embed(a, &self.subring, h)?)))
            .collect::<Result<_>>()?;
        Ok(SeriesElement {
            ctx: Arc::clone(&self.ctx),
            subring: h.clone(),
            algebra,
            coeffs,
            no_single_subring: self.no_single_subring,
        })
    }

    fn joined(&self, other: &SeriesElement) -> Result<(SeriesElement, SeriesElement)> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let h = self.subring.join(&other.subring)?;
        Ok((self.lift(&h)?, other.lift(&h)?))
    }

    fn with_coeffs(&self, coeffs: BTreeMap<Monomial, AlgebraElement>) -> SeriesElement {
        SeriesElement {
            ctx: Arc::clone(&self.ctx),
            subring: self.subring.clone(),
            algebra: Arc::clone(&self.algebra),
            coeffs,
            no_single_subring: self.no_single_subring,
        }
    }

    pub fn add(&self, other: &SeriesElement) -> Result<SeriesElement> {
        let (a, b) = self.joined(other)?;
        let mut coeffs = a.coeffs.clone();
        for (m, c) in &b.coeffs {
            let s = match coeffs.get(m) {
                Some(x) => x.add(c),
                None => c.clone(),
            };
            if s.is_zero() {
                coeffs.remove(m);
            } else {
                coeffs.insert(m.clone(), s);
            }
        }
        let mut out = a.with_coeffs(coeffs);
        out.no_single_subring |= b.no_single_subring;
        Ok(out)
    }

    pub fn neg(&self) -> SeriesElement {
        self.with_coeffs(self.coeffs.iter().map(|(m, c)| (m.clone(), c.neg())).collect())
    }

    pub fn sub(&self, other: &SeriesElement) -> Result<SeriesElement> {
        self.add(&other.neg())
    }

    /// Cauchy product, reduced in the joined member and truncated.
    pub fn mul(&self, other: &SeriesElement) -> Result<SeriesElement> {
        let (a, b) = self.joined(other)?;
        let d = self.ctx.trunc;
        let mut coeffs: BTreeMap<Monomial, AlgebraElement> = BTreeMap::new();
        for (m1, c1) in &a.coeffs {
            for (m2, c2) in &b.coeffs {
                if m1.degree() + m2.degree() >= d {
                    continue;
                }
                let p = c1.mul(c2);
                if p.is_zero() {
                    continue;
                }
                let m = m1.mul(m2);
                let s = match coeffs.remove(&m) {
                    Some(x) => x.add(&p),
                    None => p,
                };
                if !s.is_zero() {
                    coeffs.insert(m, s);
                }
            }
        }
        let mut out = a.with_coeffs(coeffs);
        out.no_single_subring |= b.no_single_subring;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<SeriesElement> {
        let mut acc = self.ctx.one().lift(&self.subring)?;
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiply every coefficient by `a`, an element of this series' member.
    pub fn scale(&self, a: &AlgebraElement) -> SeriesElement {
        self.with_coeffs(
            self.coeffs
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(a)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }

    /// Multiply by the series monomial `m`, dropping what falls past the
    /// truncation.
    pub fn shift(&self, m: &Monomial) -> SeriesElement {
        let d = self.ctx.trunc;
        self.with_coeffs(
            self.coeffs
                .iter()
                .filter(|(k, _)| k.degree() + m.degree() < d)
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        )
    }

    /// Coordinates in `R_h[X]/(X)^D` with index `mono * dim + basis`.
    /// The series must already live in `R_h`.
    pub fn to_vector(&self) -> SparseVec {
        let dim = self.algebra.dim();
        let mut e = Vec::new();
        for (m, c) in &self.coeffs {
            let k = self.ctx.monomial_index(m).expect("monomial below truncation");
            for (b, x) in c.coords().iter().enumerate() {
                if !x.is_zero() {
                    e.push((k * dim + b, x.clone()));
                }
            }
        }
        SparseVec::from_entries(e)
    }

    /// Inverse of [`SeriesElement::to_vector`].
    pub fn from_vector(ctx: &Arc<SeriesContext>, h: &SubringHandle, v: &SparseVec) -> Result<SeriesElement> {
        let mut out = ctx.zero(h)?;
        let dim = out.algebra.dim();
        let field = out.algebra.field();
        let mut grouped: BTreeMap<usize, Vec<(usize, crate::exactpoly::Scalar)>> = BTreeMap::new();
        for (i, c) in v.entries() {
            grouped.entry(i / dim).or_default().push((i % dim, c.clone()));
        }
        for (k, entries) in grouped {
            let coeff = out.algebra.from_sparse(&SparseVec::from_entries(entries));
            let _ = field;
            out.coeffs.insert(ctx.monomials[k].clone(), coeff);
        }
        Ok(out)
    }

    /// The least handle whose member contains every coefficient, read off
    /// from the standard-monomial representatives.
    pub fn minimize_subring(&self) -> Result<SeriesElement> {
        if self.algebra.is_product() {
            return Ok(self.clone());
        }
        let vars = self.algebra.vars();
        let nb = self.ctx.family.base().vars().len();
        let mut used = Vec::new();
        for c in self.coeffs.values() {
            for v in c.to_polynomial().expect("presented").support_vars() {
                if v >= nb {
                    used.push(self.subring.indices()[v - nb]);
                }
            }
        }
        let _ = vars;
        let h = self.ctx.family.handle(used);
        let algebra = self.ctx.family.subring(&h)?;
        let mut map = vec![0; self.algebra.vars().len()];
        for (i, slot) in map.iter_mut().enumerate().take(nb) {
            *slot = i;
        }
        for (pos, idx) in h.indices().iter().enumerate() {
            let from = self.subring.indices().binary_search(idx).expect("subset");
            map[nb + from] = nb + pos;
        }
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            let p = c.to_polynomial().expect("presented");
            let remapped = Polynomial::from_terms(
                p.field(),
                algebra.vars().len(),
                p.terms()
                    .map(|(mm, x)| (mm.remap(algebra.vars().len(), &map), x.clone())),
            );
            coeffs.insert(m.clone(), algebra.from_polynomial(&remapped)?);
        }
        Ok(SeriesElement {
            ctx: Arc::clone(&self.ctx),
            subring: h,
            algebra,
            coeffs,
            no_single_subring: self.no_single_subring,
        })
    }

    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.coeffs {
            let cs = c.render();
            let term = if m.is_one() {
                cs
            } else {
                let ms = m.render(&self.ctx.vars);
                if c.is_one() {
                    ms
                } else if c.neg().is_one() {
                    format!("-{ms}")
                } else if cs.contains(' ') && !self.algebra.is_product() {
                    format!("({cs})*{ms}")
                } else {
                    format!("{cs}*{ms}")
                }
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

/// Truncation of `sum_i coeff(i) X_var^i`, a series that may lie in no
/// single member; flagged accordingly.
pub fn unbounded_truncation(
    ctx: &Arc<SeriesContext>,
    var: usize,
    coeff: &dyn Fn(usize) -> String,
) -> Result<SeriesElement> {
    let mut acc = ctx.zero(&ctx.family.base_handle())?;
    for i in 0..ctx.trunc as usize {
        let (h, a) = ctx.family.parse_element(&coeff(i))?;
        let mut e = vec![0u32; ctx.nvars()];
        e[var] = i as u32;
        acc = acc.add(&ctx.term(&h, &a, Monomial::from_exponents(e))?)?;
    }
    acc.no_single_subring = true;
    Ok(acc)
}

/// For each truncation `1..=dmax`, the least member needed to hold the
/// truncation of `sum_i coeff(i) X^i`.
pub fn unbounded_windows(
    family: &Arc<DirectedFamily>,
    coeff: &dyn Fn(usize) -> String,
    dmax: u32,
) -> Result<Vec<(u32, SubringHandle)>> {
    (1..=dmax)
        .map(|d| {
            let ctx = SeriesContext::new(Arc::clone(family), vec!["X".into()], d)?;
            let f = unbounded_truncation(&ctx, 0, coeff)?.minimize_subring()?;
            Ok((d, f.subring.clone()))
        })
        .collect()
}

/// Random element of an algebra: each coordinate zero with probability
/// one half, otherwise a small integer.
pub fn random_coefficient<R: Rng>(a: &Arc<ArtinianAlgebra>, rng: &mut R) -> AlgebraElement {
    let field = a.field();
    let coords = (0..a.dim())
        .map(|_| {
            if rng.gen_bool(0.5) {
                field.zero()
            } else {
                field.from_i64(rng.gen_range(-3..=3))
            }
        })
        .collect();
    a.element(coords).expect("dimension matches")
}

/// Random truncated series in `R_h`; each monomial is present with the
/// given probability.
pub fn random_series<R: Rng>(
    ctx: &Arc<SeriesContext>,
    h: &SubringHandle,
    density: f64,
    rng: &mut R,
) -> Result<SeriesElement> {
    let mut out = ctx.zero(h)?;
    for m in ctx.monomials.iter() {
        if rng.gen_bool(density) {
            let c = random_coefficient(&out.algebra, rng);
            if !c.is_zero() {
                out.coeffs.insert(m.clone(), c);
            }
        }
    }
    Ok(out)
}

enum MembershipTest {
    Groebner(GroebnerBasis),
    Span(RowSpace),
}

/// `M_h = M ∩ R_h` for a member inside the window.
pub struct Restriction {
    handle: SubringHandle,
    algebra: Arc<ArtinianAlgebra>,
    generators: Vec<AlgebraElement>,
    test: MembershipTest,
}

impl Restriction {
    pub fn handle(&self) -> &SubringHandle {
        &self.handle
    }

    /// A k-basis of `M_h`, which also generates it as an ideal.
    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    /// Membership by normal form against relations and generators, or by
    /// span for products.
    pub fn contains(&self, a: &AlgebraElement) -> bool {
        assert!(Arc::ptr_eq(a.owner(), &self.algebra), "element of a different member");
        match &self.test {
            MembershipTest::Groebner(g) => {
                let p = a.to_polynomial().expect("presented");
                normal_form(&p, g).expect("same ambient").is_zero()
            }
            MembershipTest::Span(rs) => rs.contains(&a.to_sparse()),
        }
    }
}

/// Basis of `{c in R_small : c in span}` where `span` lives in `R_big`.
fn contract(
    family: &DirectedFamily,
    span: &RowSpace,
    big: &SubringHandle,
    small: &SubringHandle,
) -> Result<Vec<SparseVec>> {
    let a = family.subring(small)?;
    let cols = (0..a.dim())
        .map(|j| Ok(span.reduce(&family.embed(&a.basis_element(j), small, big)?.to_sparse())))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::kernel(a.field(), &cols))
}

/// The extension `MS` of a maximal ideal `M`, described through a window
/// member carrying `M`.
pub struct ExtIdealDesc {
    ctx: Arc<SeriesContext>,
    window: SubringHandle,
    maximal: MaximalIdealDesc,
    residue: ResidueField,
    residue_ctx: Arc<SeriesContext>,
    span: RowSpace,
    restrictions: Mutex<HashMap<SubringHandle, Arc<Restriction>>>,
}

impl fmt::Debug for ExtIdealDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtIdealDesc({} in {:?})", self.maximal.describe(), self.window)
    }
}

impl ExtIdealDesc {
    pub fn new(ctx: &Arc<SeriesContext>, window: &SubringHandle, maximal: MaximalIdealDesc) -> Result<Self> {
        let algebra = ctx.family.subring(window)?;
        if !Arc::ptr_eq(maximal.owner(), &algebra) {
            return Err(Error::IncompatibleIdeal(format!(
                "maximal ideal does not live on {window:?}"
            )));
        }
        let residue = residue_field(&algebra, &maximal)?;
        let fam = DirectedFamily::constant(
            format!("residue field of {} at {}", ctx.family.name(), maximal.describe()),
            Arc::clone(residue.field()),
        );
        let residue_ctx = ctx.over(fam);
        let span = algebra.ideal_span(maximal.generators());
        Ok(ExtIdealDesc {
            ctx: Arc::clone(ctx),
            window: window.clone(),
            maximal,
            residue,
            residue_ctx,
            span,
            restrictions: Mutex::new(HashMap::new()),
        })
    }

    pub fn ctx(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn window(&self) -> &SubringHandle {
        &self.window
    }

    pub fn maximal(&self) -> &MaximalIdealDesc {
        &self.maximal
    }

    pub fn residue(&self) -> &ResidueField {
        &self.residue
    }

    /// `k(M)[[X]]` at the same truncation.
    pub fn residue_ctx(&self) -> &Arc<SeriesContext> {
        &self.residue_ctx
    }

    /// `[k(M) : k0]`.
    pub fn residue_degree(&self) -> usize {
        self.residue.degree()
    }

    pub fn describe(&self) -> String {
        format!("{}S", self.maximal.describe())
    }

    fn check_handle(&self, h: &SubringHandle) -> Result<()> {
        if !self.window.contains(h) {
            return Err(Error::IncompatibleIdeal(format!(
                "{h:?} is not inside the window {:?} carrying {}",
                self.window,
                self.maximal.describe()
            )));
        }
        Ok(())
    }

    /// `M ∩ R_h`, computed from the generators of `M` (not from the
    /// residue map) and cached.
    pub fn restriction(&self, h: &SubringHandle) -> Result<Arc<Restriction>> {
        self.check_handle(h)?;
        if let Some(r) = self.restrictions.lock().expect("restriction lock").get(h) {
            return Ok(Arc::clone(r));
        }
        let fam = &self.ctx.family;
        let algebra = fam.subring(h)?;
        let generators: Vec<AlgebraElement> = contract(fam, &self.span, &self.window, h)?
            .iter()
            .map(|v| algebra.from_sparse(v))
            .collect();
        let test = match algebra.relations() {
            Some(rel) => {
                let mut polys: Vec<Polynomial> = rel.generators().to_vec();
                polys.extend(generators.iter().map(|g| g.to_polynomial().expect("presented")));
                if polys.is_empty() {
                    MembershipTest::Groebner(GroebnerBasis::zero_ideal(algebra.field(), algebra.vars().len()))
                } else {
                    MembershipTest::Groebner(buchberger(&polys)?)
                }
            }
            None => MembershipTest::Span(algebra.ideal_span(&generators)),
        };
        let r = Arc::new(Restriction {
            handle: h.clone(),
            algebra,
            generators,
            test,
        });
        let mut cache = self.restrictions.lock().expect("restriction lock");
        Ok(Arc::clone(cache.entry(h.clone()).or_insert(r)))
    }

    /// Whether `M_small = M_big ∩ R_small` for `small ⊆ big` inside the window.
    pub fn compatible(&self, small: &SubringHandle, big: &SubringHandle) -> Result<bool> {
        if !big.contains(small) {
            return Err(Error::Invalid(format!("{small:?} is not inside {big:?}")));
        }
        let rs = self.restriction(small)?;
        let rb = self.restriction(big)?;
        let fam = &self.ctx.family;
        let big_alg = fam.subring(big)?;
        let big_span = big_alg.ideal_span(rb.generators());
        let contracted = contract(fam, &big_span, big, small)?;
        if contracted.len() != rs.generators.len() {
            return Ok(false);
        }
        let mut own = RowSpace::new(fam.field());
        for g in &rs.generators {
            own.insert(&g.to_sparse());
        }
        Ok(contracted.iter().all(|v| own.contains(v)))
    }
}

/// Apply the quotient map `R -> k(M)` to every coefficient.
pub fn residue_map(f: &SeriesElement, e: &ExtIdealDesc) -> Result<SeriesElement> {
    f.check_ctx(&e.ctx)?;
    e.check_handle(&f.subring)?;
    let lifted = f.lift(&e.window)?;
    let rctx = &e.residue_ctx;
    let mut out = rctx.zero(&rctx.family.base_handle())?;
    for (m, c) in &lifted.coeffs {
        let img = e.residue.project(c);
        if !img.is_zero() {
            out.coeffs.insert(m.clone(), img);
        }
    }
    Ok(out)
}

/// Whether every coefficient of `f` lies in `M ∩ R_A`, `A` the handle of `f`.
pub fn ext_membership(f: &SeriesElement, e: &ExtIdealDesc) -> Result<bool> {
    f.check_ctx(&e.ctx)?;
    let r = e.restriction(&f.subring)?;
    Ok(f.coeffs.values().all(|c| r.contains(c)))
}

/// One extension `MS` per maximal ideal `M` of the window, after checking
/// that the maximal ideals of the next larger member contract bijectively
/// onto them.
pub fn minimal_primes(ctx: &Arc<SeriesContext>, window: &SubringHandle) -> Result<Vec<ExtIdealDesc>> {
    let fam = &ctx.family;
    let algebra = fam.subring(window)?;
    let ms = maximal_ideals(&algebra)?;
    let next = (0..)
        .find(|i| window.indices().binary_search(i).is_err())
        .expect("unbounded search");
    let has_next = fam.stream().bound().is_none_or(|n| next < n);
    if has_next {
        let larger = window.join(&fam.handle([next]))?;
        let big = fam.subring(&larger)?;
        let own: Vec<RowSpace> = ms.iter().map(|m| algebra.ideal_span(m.generators())).collect();
        let mut hits = vec![0usize; ms.len()];
        for mb in maximal_ideals(&big)? {
            let span = big.ideal_span(mb.generators());
            let contracted = contract(fam, &span, &larger, window)?;
            let matched: Vec<usize> = own
                .iter()
                .enumerate()
                .filter(|(_, o)| o.rank() == contracted.len() && contracted.iter().all(|v| o.contains(v)))
                .map(|(i, _)| i)
                .collect();
            if matched.len() != 1 {
                return Err(Error::IncompatibleIdeal(format!(
                    "maximal ideal {} of {:?} does not contract to a unique maximal ideal of {window:?}",
                    mb.describe(),
                    larger
                )));
            }
            hits[matched[0]] += 1;
        }
        if hits.contains(&0) {
            return Err(Error::IncompatibleIdeal(format!(
                "some maximal ideal of {window:?} is not a contraction from {larger:?}"
            )));
        }
    }
    ms.into_iter().map(|m| ExtIdealDesc::new(ctx, window, m)).collect()
}

/// `S/MS` at truncation, with the dimension count
/// `rank = [k(M) : k0] * #{monomials below D}`.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub residue_ctx: Arc<SeriesContext>,
    pub residue_degree: usize,
    pub monomials: usize,
    pub rank: usize,
    pub expected: usize,
}

impl QuotientPresentation {
    pub fn holds(&self) -> bool {
        self.rank == self.expected
    }
}

/// Image of `R_W[X]/(X)^D` under the residue map, with `variables` killed.
pub(crate) fn residue_image_rank(e: &ExtIdealDesc, killed: &[usize]) -> Result<usize> {
    let ctx = &e.ctx;
    let algebra = ctx.family.subring(&e.window)?;
    let deg = e.residue_degree();
    let mut rs = RowSpace::new(algebra.field());
    for (k, m) in ctx.monomials.iter().enumerate() {
        if killed.iter().any(|&v| m.exponents()[v] > 0) {
            continue;
        }
        for b in 0..algebra.dim() {
            let img = e.residue.project(&algebra.basis_element(b));
            let v = SparseVec::from_entries(
                img.to_sparse()
                    .entries()
                    .iter()
                    .map(|(i, c)| (k * deg + i, c.clone()))
                    .collect(),
            );
            rs.insert(&v);
        }
    }
    Ok(rs.rank())
}

pub fn quotient_presentation(ctx: &Arc<SeriesContext>, e: &ExtIdealDesc) -> Result<QuotientPresentation> {
    if !Arc::ptr_eq(ctx, &e.ctx) {
        return Err(Error::ContextMismatch);
    }
    let rank = residue_image_rank(e, &[])?;
    let monomials = ctx.monomials.len();
    Ok(QuotientPresentation {
        residue_ctx: Arc::clone(&e.residue_ctx),
        residue_degree: e.residue_degree(),
        monomials,
        rank,
        expected: e.residue_degree() * monomials,
    })
}
