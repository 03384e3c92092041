//! Finite-dimensional algebras over an exact field: presentations
//! `k[Y_1..Y_m]/I` with a finite standard-monomial basis, and finite
//! products of such algebras.
//!
//! Maximal ideals are computed for three presentation forms only:
//! monomial relations (local), explicit products, and field towers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactpoly::linalg::{self, Insertion, RowSpace, SparseVec};
use crate::exactpoly::univariate::{is_irreducible_rational, DensePoly};
use crate::exactpoly::{
    buchberger, normal_form, parse_expr, ExprTarget, Field, GroebnerBasis, Monomial, Polynomial, Scalar,
};

/// Structure constants are cached only up to this dimension; larger
/// algebras multiply through normal forms.
const TABLE_LIMIT: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationForm {
    /// All relations are monomials: a local algebra.
    Monomial,
    /// Claimed to be a field, built by adjoining roots one at a time.
    Tower,
    /// Anything else.
    General,
}

struct Presented {
    vars: Vec<String>,
    relations: GroebnerBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    form: PresentationForm,
    table: OnceLock<Vec<Vec<SparseVec>>>,
}

struct Product {
    factors: Vec<Arc<ArtinianAlgebra>>,
    offsets: Vec<usize>,
}

enum Structure {
    Presented(Presented),
    Product(Product),
}

pub struct ArtinianAlgebra {
    field: Field,
    dim: usize,
    structure: Structure,
}

impl fmt::Debug for ArtinianAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArtinianAlgebra({})", self.describe())
    }
}

impl ArtinianAlgebra {
    /// `field[vars]/(relations)`; fails unless the relations cut out a
    /// finite-dimensional algebra.
    pub fn present(field: Field, vars: Vec<String>, relations: Vec<Polynomial>) -> Result<Arc<Self>> {
        Self::build(field, vars, relations, None)
    }

    /// Parse relation strings and present.
    pub fn present_str(field: Field, vars: &[&str], relations: &[&str]) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|r| crate::exactpoly::parse_polynomial(r, field, &vars))
            .collect::<Result<Vec<_>>>()?;
        Self::present(field, vars, rels)
    }

    /// A presentation claimed to be a field; checked when maximal ideals
    /// are requested.
    pub fn tower(field: Field, vars: Vec<String>, minpolys: Vec<Polynomial>) -> Result<Arc<Self>> {
        Self::build(field, vars, minpolys, Some(PresentationForm::Tower))
    }

    pub fn tower_str(field: Field, vars: &[&str], minpolys: &[&str]) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = minpolys
            .iter()
            .map(|r| crate::exactpoly::parse_polynomial(r, field, &vars))
            .collect::<Result<Vec<_>>>()?;
        Self::tower(field, vars, rels)
    }

    /// The base field itself, as an algebra with no variables.
    pub fn base_field(field: Field) -> Arc<Self> {
        Self::present(field, Vec::new(), Vec::new()).expect("the base field is Artinian")
    }

    pub fn product(factors: Vec<Arc<ArtinianAlgebra>>) -> Result<Arc<Self>> {
        let field = factors
            .first()
            .ok_or_else(|| Error::Invalid("a product needs at least one factor".into()))?
            .field;
        if factors.iter().any(|f| f.field != field) {
            return Err(Error::Invalid("product factors over different fields".into()));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut dim = 0;
        for f in &factors {
            offsets.push(dim);
            dim += f.dim;
        }
        Ok(Arc::new(ArtinianAlgebra {
            field,
            dim,
            structure: Structure::Product(Product { factors, offsets }),
        }))
    }

    fn build(
        field: Field,
        vars: Vec<String>,
        relations: Vec<Polynomial>,
        form: Option<PresentationForm>,
    ) -> Result<Arc<Self>> {
        let n = vars.len();
        for r in &relations {
            if r.nvars() != n || r.field() != field {
                return Err(Error::AmbientMismatch);
            }
        }
        let nonzero: Vec<Polynomial> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let gb = if nonzero.is_empty() {
            GroebnerBasis::zero_ideal(field, n)
        } else {
            buchberger(&nonzero)?
        };
        if gb.is_unit_ideal() {
            return Err(Error::NotArtinian("relations generate the unit ideal".into()));
        }
        let mut bound = vec![None::<u32>; n];
        for lm in gb.leading_monomials() {
            if let Some(i) = lm.pure_power_var() {
                let e = lm.exponents()[i];
                bound[i] = Some(bound[i].map_or(e, |b| b.min(e)));
            }
        }
        if let Some(i) = bound.iter().position(Option::is_none) {
            return Err(Error::NotArtinian(format!(
                "no power of {} lies in the leading-term ideal",
                vars[i]
            )));
        }
        let bound: Vec<u32> = bound.into_iter().map(Option::unwrap).collect();
        let mut basis = Vec::new();
        let mut cur = vec![0u32; n];
        enumerate_standard(&gb, &bound, 0, &mut cur, &mut basis);
        basis.sort();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let form = form.unwrap_or(if gb.is_monomial_ideal() {
            PresentationForm::Monomial
        } else {
            PresentationForm::General
        });
        Ok(Arc::new(ArtinianAlgebra {
            field,
            dim: basis.len(),
            structure: Structure::Presented(Presented {
                vars,
                relations: gb,
                basis,
                index,
                form,
                table: OnceLock::new(),
            }),
        }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Dimension over the base field.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_product(&self) -> bool {
        matches!(self.structure, Structure::Product(_))
    }

    pub fn form(&self) -> Option<PresentationForm> {
        match &self.structure {
            Structure::Presented(p) => Some(p.form),
            Structure::Product(_) => None,
        }
    }

    pub fn vars(&self) -> &[String] {
        match &self.structure {
            Structure::Presented(p) => &p.vars,
            Structure::Product(_) => &[],
        }
    }

    pub fn relations(&self) -> Option<&GroebnerBasis> {
        match &self.structure {
            Structure::Presented(p) => Some(&p.relations),
            Structure::Product(_) => None,
        }
    }

    /// Standard monomials of a presented algebra, in basis order.
    pub fn basis_monomials(&self) -> Option<&[Monomial]> {
        match &self.structure {
            Structure::Presented(p) => Some(&p.basis),
            Structure::Product(_) => None,
        }
    }

    pub fn factors(&self) -> &[Arc<ArtinianAlgebra>] {
        match &self.structure {
            Structure::Product(p) => &p.factors,
            Structure::Presented(_) => &[],
        }
    }

    /// Offset of factor `i` in product coordinates.
    pub fn factor_offset(&self, i: usize) -> usize {
        match &self.structure {
            Structure::Product(p) => p.offsets[i],
            Structure::Presented(_) => 0,
        }
    }

    pub fn describe(&self) -> String {
        match &self.structure {
            Structure::Presented(p) => {
                let rels: Vec<String> = p.relations.generators().iter().map(|r| r.render(&p.vars)).collect();
                format!("{}[{}]/({})", self.field, p.vars.join(","), rels.join(", "))
            }
            Structure::Product(p) => p.factors.iter().map(|f| f.describe()).collect::<Vec<_>>().join(" x "),
        }
    }

    /// Name of basis element `i`.
    pub fn basis_name(&self, i: usize) -> String {
        match &self.structure {
            Structure::Presented(p) => p.basis[i].render(&p.vars),
            Structure::Product(p) => {
                let f = p.offsets.partition_point(|&o| o <= i) - 1;
                format!("e{}:{}", f, p.factors[f].basis_name(i - p.offsets[f]))
            }
        }
    }

    fn one_coords(&self) -> Vec<Scalar> {
        match &self.structure {
            Structure::Presented(_) => {
                let mut v = vec![self.field.zero(); self.dim];
                v[0] = self.field.one();
                v
            }
            Structure::Product(p) => p.factors.iter().flat_map(|f| f.one_coords()).collect(),
        }
    }

    fn coords_to_poly(p: &Presented, field: Field, a: &[Scalar]) -> Polynomial {
        Polynomial::from_terms(
            field,
            p.vars.len(),
            a.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (p.basis[i].clone(), c.clone())),
        )
    }

    fn poly_to_coords(&self, p: &Presented, f: &Polynomial) -> Vec<Scalar> {
        let nf = normal_form(f, &p.relations).expect("ambient checked");
        let mut v = vec![self.field.zero(); self.dim];
        for (m, c) in nf.terms() {
            v[p.index[m]] = c.clone();
        }
        v
    }

    fn table<'a>(&self, p: &'a Presented) -> &'a Vec<Vec<SparseVec>> {
        p.table.get_or_init(|| {
            (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| {
                            let f = Polynomial::term(
                                self.field,
                                p.vars.len(),
                                p.basis[i].mul(&p.basis[j]),
                                self.field.one(),
                            );
                            SparseVec::from_dense(&self.poly_to_coords(p, &f))
                        })
                        .collect()
                })
                .collect()
        })
    }

    fn mul_coords(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let zero = self.field.zero();
        match &self.structure {
            Structure::Product(p) => {
                let mut out = Vec::with_capacity(self.dim);
                for (f, &o) in p.factors.iter().zip(&p.offsets) {
                    out.extend(f.mul_coords(&a[o..o + f.dim], &b[o..o + f.dim]));
                }
                out
            }
            Structure::Presented(p) if p.form == PresentationForm::Monomial => {
                let mut out = vec![zero; self.dim];
                for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        // a product of standard monomials is standard or lies in the ideal
                        if let Some(&k) = p.index.get(&p.basis[i].mul(&p.basis[j])) {
                            out[k] = &out[k] + &(x * y);
                        }
                    }
                }
                out
            }
            Structure::Presented(p) if self.dim <= TABLE_LIMIT => {
                let t = self.table(p);
                let mut out = vec![zero; self.dim];
                for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        let xy = x * y;
                        for (k, c) in t[i][j].entries() {
                            out[*k] = &out[*k] + &(&xy * c);
                        }
                    }
                }
                out
            }
            Structure::Presented(p) => {
                let f = Self::coords_to_poly(p, self.field, a).mul(&Self::coords_to_poly(p, self.field, b));
                self.poly_to_coords(p, &f)
            }
        }
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement {
            owner: Arc::clone(self),
            coords: vec![self.field.zero(); self.dim],
        }
    }

    pub fn one(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement {
            owner: Arc::clone(self),
            coords: self.one_coords(),
        }
    }

    pub fn scalar(self: &Arc<Self>, c: Scalar) -> AlgebraElement {
        self.one().scale(&c)
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
        let mut coords = vec![self.field.zero(); self.dim];
        coords[i] = self.field.one();
        AlgebraElement {
            owner: Arc::clone(self),
            coords,
        }
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Scalar>) -> Result<AlgebraElement> {
        if coords.len() != self.dim {
            return Err(Error::Invalid(format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        Ok(AlgebraElement {
            owner: Arc::clone(self),
            coords,
        })
    }

    pub fn from_sparse(self: &Arc<Self>, v: &SparseVec) -> AlgebraElement {
        AlgebraElement {
            owner: Arc::clone(self),
            coords: v.to_dense(self.dim, self.field),
        }
    }

    /// Class of a polynomial in the presenting variables.
    pub fn from_polynomial(self: &Arc<Self>, f: &Polynomial) -> Result<AlgebraElement> {
        match &self.structure {
            Structure::Presented(p) => {
                if f.nvars() != p.vars.len() || f.field() != self.field {
                    return Err(Error::AmbientMismatch);
                }
                Ok(AlgebraElement {
                    owner: Arc::clone(self),
                    coords: self.poly_to_coords(p, f),
                })
            }
            Structure::Product(_) => Err(Error::UnsupportedPresentation(
                "products have no polynomial presentation".into(),
            )),
        }
    }

    pub fn var(self: &Arc<Self>, i: usize) -> Result<AlgebraElement> {
        let n = self.vars().len();
        if i >= n {
            return Err(Error::Invalid(format!("variable index {i} out of range")));
        }
        self.from_polynomial(&Polynomial::var(self.field, n, i))
    }

    /// Parse an element. Product elements are written `(a, b, ...)` is not
    /// supported; use the factor identities `e0`, `e1`, ... instead.
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<AlgebraElement> {
        parse_expr(s)?.eval(&ElementTarget { algebra: self })
    }

    /// Identity of factor `i` of a product.
    pub fn factor_identity(self: &Arc<Self>, i: usize) -> Result<AlgebraElement> {
        match &self.structure {
            Structure::Product(p) if i < p.factors.len() => {
                let mut coords = vec![self.field.zero(); self.dim];
                let one = p.factors[i].one_coords();
                coords[p.offsets[i]..p.offsets[i] + one.len()].clone_from_slice(&one);
                Ok(AlgebraElement {
                    owner: Arc::clone(self),
                    coords,
                })
            }
            _ => Err(Error::Invalid(format!("no product factor {i}"))),
        }
    }

    /// Lift an element of factor `i` into the product (zero elsewhere).
    pub fn inject_factor(self: &Arc<Self>, i: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        match &self.structure {
            Structure::Product(p) if i < p.factors.len() && Arc::ptr_eq(&p.factors[i], &a.owner) => {
                let mut coords = vec![self.field.zero(); self.dim];
                coords[p.offsets[i]..p.offsets[i] + a.coords.len()].clone_from_slice(&a.coords);
                Ok(AlgebraElement {
                    owner: Arc::clone(self),
                    coords,
                })
            }
            _ => Err(Error::Invalid(format!("element does not belong to factor {i}"))),
        }
    }

    /// Component of a product element in factor `i`.
    pub fn project_factor(&self, i: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        match &self.structure {
            Structure::Product(p) if i < p.factors.len() => {
                let f = &p.factors[i];
                Ok(AlgebraElement {
                    owner: Arc::clone(f),
                    coords: a.coords[p.offsets[i]..p.offsets[i] + f.dim].to_vec(),
                })
            }
            _ => Err(Error::Invalid(format!("no product factor {i}"))),
        }
    }

    /// Nontrivial idempotents coming from the product structure (the
    /// identities of the factors), recursively.
    pub fn structural_idempotents(self: &Arc<Self>) -> Vec<AlgebraElement> {
        match &self.structure {
            Structure::Product(p) if p.factors.len() > 1 => (0..p.factors.len())
                .map(|i| self.factor_identity(i).expect("in range"))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// The k-span of the ideal generated by `gens`.
    pub fn ideal_span(self: &Arc<Self>, gens: &[AlgebraElement]) -> RowSpace {
        let mut rs = RowSpace::new(self.field);
        for g in gens {
            for col in g.mul_columns() {
                rs.insert(&col);
            }
        }
        rs
    }

    /// Membership in the ideal generated by `gens`. For presentations this
    /// is a Gröbner normal form against relations plus generators.
    pub fn ideal_contains(self: &Arc<Self>, gens: &[AlgebraElement], x: &AlgebraElement) -> Result<bool> {
        for g in gens.iter().chain(std::iter::once(x)) {
            if !Arc::ptr_eq(&g.owner, self) {
                return Err(Error::Invalid("element of a different algebra".into()));
            }
        }
        match &self.structure {
            Structure::Presented(p) => {
                let mut all: Vec<Polynomial> = p.relations.generators().to_vec();
                all.extend(gens.iter().map(|g| Self::coords_to_poly(p, self.field, &g.coords)));
                let f = Self::coords_to_poly(p, self.field, &x.coords);
                crate::exactpoly::ideal_membership(&f, &all)
            }
            Structure::Product(_) => Ok(self.ideal_span(gens).contains(&x.to_sparse())),
        }
    }

    /// Decide whether this algebra is a field.
    ///
    /// Over Q: search a primitive element `sum c^i y_i`; the algebra is a
    /// field iff such an element has an irreducible minimal polynomial of
    /// full degree. Over F_p: the Frobenius map must be injective with a
    /// one-dimensional fixed space.
    pub fn is_field(self: &Arc<Self>) -> Result<bool> {
        if self.dim == 1 {
            return Ok(true);
        }
        if self.is_product() {
            return Ok(false);
        }
        match self.field {
            Field::Rational => {
                let m = self.vars().len().max(1);
                let bound = self.dim * (self.dim - 1) / 2 * (m - 1) + 1;
                let vars: Vec<AlgebraElement> = (0..self.vars().len()).map(|i| self.var(i)).collect::<Result<_>>()?;
                for c in 1..=bound as i64 {
                    let mut x = self.zero();
                    let mut w = self.field.one();
                    let cc = self.field.from_i64(c);
                    for v in &vars {
                        x = x.add(&v.scale(&w));
                        w = &w * &cc;
                    }
                    let mp = x.minimal_polynomial();
                    if mp.total_degree() == Some(self.dim as u32) {
                        return is_irreducible_rational(&to_dense_rational(&mp));
                    }
                }
                Ok(false)
            }
            Field::Prime(p) => {
                let frob: Vec<SparseVec> = (0..self.dim)
                    .map(|j| self.basis_element(j).pow(p).to_sparse())
                    .collect();
                if linalg::rank(self.field, &frob) != self.dim {
                    return Ok(false);
                }
                let minus_id: Vec<SparseVec> = frob
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.axpy(&-&self.field.one(), &SparseVec::unit(j, self.field)))
                    .collect();
                Ok(linalg::kernel(self.field, &minus_id).len() == 1)
            }
        }
    }
}

fn to_dense_rational(p: &Polynomial) -> DensePoly {
    let d = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![BigRational::from_integer(0.into()); d + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[0] as usize] = c.as_rational().expect("rational coefficients").clone();
    }
    out
}

fn enumerate_standard(gb: &GroebnerBasis, bound: &[u32], i: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    let m = Monomial::from_exponents(cur.clone());
    if !gb.is_standard(&m) {
        return;
    }
    if i == cur.len() {
        out.push(m);
        return;
    }
    for e in 0..bound[i] {
        cur[i] = e;
        enumerate_standard(gb, bound, i + 1, cur, out);
        if !gb.is_standard(&Monomial::from_exponents(cur.clone())) {
            break;
        }
    }
    cur[i] = 0;
}

struct ElementTarget<'a> {
    algebra: &'a Arc<ArtinianAlgebra>,
}

impl ExprTarget for ElementTarget<'_> {
    type Value = AlgebraElement;

    fn constant(&self, q: &BigRational) -> Result<AlgebraElement> {
        let c = self
            .algebra
            .field
            .from_rational(q)
            .ok_or_else(|| Error::Parse(format!("{q} undefined in {}", self.algebra.field)))?;
        Ok(self.algebra.scalar(c))
    }

    fn variable(&self, name: &str) -> Result<AlgebraElement> {
        if let Some(i) = self.algebra.vars().iter().position(|v| v == name) {
            return self.algebra.var(i);
        }
        if self.algebra.is_product() {
            if let Some(i) = name.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
                return self.algebra.factor_identity(i);
            }
        }
        Err(Error::Parse(format!("unknown symbol {name:?}")))
    }

    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(a.mul(b))
    }

    fn neg(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(a.neg())
    }
}

/// Element of an [`ArtinianAlgebra`], as coordinates over its basis.
#[derive(Clone)]
pub struct AlgebraElement {
    owner: Arc<ArtinianAlgebra>,
    coords: Vec<Scalar>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.owner, &other.owner) && self.coords == other.coords
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Result of [`AlgebraElement::zero_divisor_test`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroDivisorTest {
    /// `a * witness = 0` with `witness != 0`.
    ZeroDivisor { witness: AlgebraElement },
    /// `a * inverse = 1`.
    Unit { inverse: AlgebraElement },
}

impl AlgebraElement {
    pub fn owner(&self) -> &Arc<ArtinianAlgebra> {
        &self.owner
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_dense(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords == self.owner.one_coords()
    }

    fn same_owner(&self, other: &AlgebraElement) {
        assert!(Arc::ptr_eq(&self.owner, &other.owner), "elements of different algebras");
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        self.same_owner(other);
        AlgebraElement {
            owner: Arc::clone(&self.owner),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.same_owner(other);
        AlgebraElement {
            owner: Arc::clone(&self.owner),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            owner: Arc::clone(&self.owner),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement {
            owner: Arc::clone(&self.owner),
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.same_owner(other);
        AlgebraElement {
            owner: Arc::clone(&self.owner),
            coords: self.owner.mul_coords(&self.coords, &other.coords),
        }
    }

    pub fn pow(&self, mut e: u64) -> AlgebraElement {
        let mut acc = self.owner.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Columns of the multiplication-by-`self` map on the basis.
    pub fn mul_columns(&self) -> Vec<SparseVec> {
        (0..self.owner.dim)
            .map(|j| self.mul(&self.owner.basis_element(j)).to_sparse())
            .collect()
    }

    /// The polynomial representative in standard monomials (presented
    /// algebras only).
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        match &self.owner.structure {
            Structure::Presented(p) => Some(ArtinianAlgebra::coords_to_poly(p, self.owner.field, &self.coords)),
            Structure::Product(_) => None,
        }
    }

    /// Monic polynomial of least degree annihilating `self`, in one
    /// variable, found as the first linear dependence among powers.
    pub fn minimal_polynomial(&self) -> Polynomial {
        let field = self.owner.field;
        let mut rs = RowSpace::tracking(field);
        let mut power = self.owner.one();
        loop {
            match rs.insert(&power.to_sparse()) {
                Insertion::Independent(_) => power = power.mul(self),
                Insertion::Dependent(rel) => {
                    let rel = rel.expect("tracking");
                    return Polynomial::from_terms(
                        field,
                        1,
                        rel.entries()
                            .iter()
                            .map(|(k, c)| (Monomial::from_exponents(vec![*k as u32]), c.clone())),
                    );
                }
            }
        }
    }

    /// Evaluate a univariate polynomial at `self`.
    pub fn eval_univariate(&self, p: &Polynomial) -> AlgebraElement {
        let mut acc = self.owner.zero();
        for (m, c) in p.terms() {
            acc = acc.add(&self.pow(m.exponents()[0] as u64).scale(c));
        }
        acc
    }

    /// Decide zero-divisor versus unit via the multiplication matrix.
    pub fn zero_divisor_test(&self) -> ZeroDivisorTest {
        let field = self.owner.field;
        let cols = self.mul_columns();
        if let Some(k) = linalg::kernel(field, &cols).into_iter().next() {
            return ZeroDivisorTest::ZeroDivisor {
                witness: self.owner.from_sparse(&k),
            };
        }
        let mut rs = RowSpace::tracking(field);
        for c in &cols {
            rs.insert(c);
        }
        let x = rs
            .express(&self.owner.one().to_sparse())
            .expect("injective endomorphism of a finite-dimensional space is onto");
        ZeroDivisorTest::Unit {
            inverse: self.owner.from_sparse(&x),
        }
    }

    /// `Some(witness)` when `self` is a zero divisor.
    pub fn is_zero_divisor(&self) -> Option<AlgebraElement> {
        match self.zero_divisor_test() {
            ZeroDivisorTest::ZeroDivisor { witness } => Some(witness),
            ZeroDivisorTest::Unit { .. } => None,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.is_zero_divisor().is_none()
    }

    pub fn render(&self) -> String {
        match &self.owner.structure {
            Structure::Presented(p) => {
                ArtinianAlgebra::coords_to_poly(p, self.owner.field, &self.coords).render(&p.vars)
            }
            Structure::Product(p) => {
                let parts: Vec<String> = (0..p.factors.len())
                    .map(|i| self.owner.project_factor(i, self).expect("in range").render())
                    .collect();
                format!("({})", parts.join(", "))
            }
        }
    }
}

/// How a maximal ideal arises from the supported presentation forms.
#[derive(Clone, Debug)]
pub enum MaximalKind {
    /// Generated by all variables of a monomial presentation.
    LocalMonomial,
    /// Lift of a maximal ideal of one product factor.
    ProductFactor {
        factor: usize,
        inner: Box<MaximalIdealDesc>,
    },
    /// The zero ideal of a field.
    FieldZero,
}

#[derive(Clone, Debug)]
pub struct MaximalIdealDesc {
    owner: Arc<ArtinianAlgebra>,
    generators: Vec<AlgebraElement>,
    kind: MaximalKind,
}

impl MaximalIdealDesc {
    pub fn owner(&self) -> &Arc<ArtinianAlgebra> {
        &self.owner
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    pub fn kind(&self) -> &MaximalKind {
        &self.kind
    }

    pub fn contains(&self, x: &AlgebraElement) -> Result<bool> {
        self.owner.ideal_contains(&self.generators, x)
    }

    pub fn describe(&self) -> String {
        if self.generators.is_empty() {
            return "(0)".to_string();
        }
        let gens: Vec<String> = self.generators.iter().map(AlgebraElement::render).collect();
        format!("({})", gens.join(", "))
    }
}

/// All maximal ideals of an algebra in one of the supported forms.
pub fn maximal_ideals(a: &Arc<ArtinianAlgebra>) -> Result<Vec<MaximalIdealDesc>> {
    match &a.structure {
        Structure::Product(p) => {
            let mut out = Vec::new();
            for (i, f) in p.factors.iter().enumerate() {
                for inner in maximal_ideals(f)? {
                    let mut gens = Vec::new();
                    for j in 0..p.factors.len() {
                        if j != i {
                            gens.push(a.factor_identity(j)?);
                        }
                    }
                    for g in &inner.generators {
                        gens.push(a.inject_factor(i, g)?);
                    }
                    out.push(MaximalIdealDesc {
                        owner: Arc::clone(a),
                        generators: gens,
                        kind: MaximalKind::ProductFactor {
                            factor: i,
                            inner: Box::new(inner),
                        },
                    });
                }
            }
            Ok(out)
        }
        Structure::Presented(p) => {
            if a.dim == 1 {
                return Ok(vec![MaximalIdealDesc {
                    owner: Arc::clone(a),
                    generators: Vec::new(),
                    kind: MaximalKind::FieldZero,
                }]);
            }
            match p.form {
                PresentationForm::Monomial => {
                    let gens = (0..p.vars.len())
                        .map(|i| a.var(i))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .filter(|g| !g.is_zero())
                        .collect();
                    Ok(vec![MaximalIdealDesc {
                        owner: Arc::clone(a),
                        generators: gens,
                        kind: MaximalKind::LocalMonomial,
                    }])
                }
                PresentationForm::Tower | PresentationForm::General => {
                    if a.is_field()? {
                        Ok(vec![MaximalIdealDesc {
                            owner: Arc::clone(a),
                            generators: Vec::new(),
                            kind: MaximalKind::FieldZero,
                        }])
                    } else if p.form == PresentationForm::Tower {
                        Err(Error::NotAField(a.describe()))
                    } else {
                        Err(Error::UnsupportedPresentation(a.describe()))
                    }
                }
            }
        }
    }
}

/// The residue field `A/M` together with the quotient map on coordinates.
#[derive(Clone, Debug)]
pub struct ResidueField {
    source: Arc<ArtinianAlgebra>,
    field: Arc<ArtinianAlgebra>,
    columns: Vec<SparseVec>,
}

impl ResidueField {
    pub fn source(&self) -> &Arc<ArtinianAlgebra> {
        &self.source
    }

    /// The residue field, presented as a field (form (c) or the base field).
    pub fn field(&self) -> &Arc<ArtinianAlgebra> {
        &self.field
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        self.field.dim
    }

    /// The quotient map.
    pub fn project(&self, a: &AlgebraElement) -> AlgebraElement {
        assert!(Arc::ptr_eq(&a.owner, &self.source), "element of a different algebra");
        let v = linalg::apply(&self.columns, &a.to_sparse(), self.source.field);
        self.field.from_sparse(&v)
    }
}

/// Build `A/M` and its quotient map, checking that the map kills `M`, is
/// onto, and has kernel exactly the span of `M`.
pub fn residue_field(a: &Arc<ArtinianAlgebra>, m: &MaximalIdealDesc) -> Result<ResidueField> {
    if !Arc::ptr_eq(a, &m.owner) {
        return Err(Error::Invalid("maximal ideal of a different algebra".into()));
    }
    let (field, columns) = residue_columns(a, m)?;
    let rf = ResidueField {
        source: Arc::clone(a),
        field,
        columns,
    };
    for g in &m.generators {
        if !rf.project(g).is_zero() {
            return Err(Error::Invalid(format!("quotient map does not kill {}", g.render())));
        }
    }
    if linalg::rank(a.field, &rf.columns) != rf.field.dim {
        return Err(Error::Invalid("quotient map is not onto".into()));
    }
    if a.ideal_span(&m.generators).rank() + rf.field.dim != a.dim {
        return Err(Error::Invalid(format!(
            "{} is not the kernel of the quotient map",
            m.describe()
        )));
    }
    Ok(rf)
}

fn residue_columns(a: &Arc<ArtinianAlgebra>, m: &MaximalIdealDesc) -> Result<(Arc<ArtinianAlgebra>, Vec<SparseVec>)> {
    match &m.kind {
        MaximalKind::FieldZero => Ok((Arc::clone(a), (0..a.dim).map(|j| SparseVec::unit(j, a.field)).collect())),
        MaximalKind::LocalMonomial => {
            let k = ArtinianAlgebra::base_field(a.field);
            let cols = (0..a.dim)
                .map(|j| {
                    if j == 0 {
                        SparseVec::unit(0, a.field)
                    } else {
                        SparseVec::new()
                    }
                })
                .collect();
            Ok((k, cols))
        }
        MaximalKind::ProductFactor { factor, inner } => {
            let f = &a.factors()[*factor];
            let (k, inner_cols) = residue_columns(f, inner)?;
            let off = a.factor_offset(*factor);
            let cols = (0..a.dim)
                .map(|j| {
                    if j >= off && j < off + f.dim {
                        inner_cols[j - off].clone()
                    } else {
                        SparseVec::new()
                    }
                })
                .collect();
            Ok((k, cols))
        }
    }
}
