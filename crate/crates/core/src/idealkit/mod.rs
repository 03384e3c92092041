//! Finitely generated ideals of the truncated series ring.
//!
//! Everything is decided inside `S_D = R_G[X]/(X)^D`, a finite-dimensional
//! space over the base field, where `R_G` is the join of the members of all
//! series involved. Coordinates follow [`SeriesElement::to_vector`].

mod chain;
mod grade;
pub mod monomial;
mod replace;

use std::sync::Arc;

use crate::artinian::{maximal_ideals, residue_field, ResidueField};
use crate::error::{Error, Result};
use crate::exactpoly::linalg::{self, RowSpace};
use crate::family::SubringHandle;
use crate::series::{lift_all, SeriesContext, SeriesElement};

pub use chain::{catenary_check, extended_chain, prime_chain, CatenaryCheck, ChainLink, ExtendedLink, PrimeChain};
pub use grade::{cgrade, GradeReport};
pub use monomial::{
    associated_primes_monomial, height_monomial, monomial_family, verify_unmixed, ComponentUnmixed, MonomialPrime,
    UnmixedReport,
};
pub use replace::{replace_with_regular, seeded_redundant_ideal, Replacement, ReplacementStep};

#[derive(Clone, Debug)]
pub struct FgIdeal {
    ctx: Arc<SeriesContext>,
    gens: Vec<SeriesElement>,
}

impl FgIdeal {
    pub fn new(ctx: &Arc<SeriesContext>, gens: Vec<SeriesElement>) -> Result<Self> {
        for g in &gens {
            if !Arc::ptr_eq(g.ctx(), ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(FgIdeal {
            ctx: Arc::clone(ctx),
            gens,
        })
    }

    pub fn parse(ctx: &Arc<SeriesContext>, gens: &[impl AsRef<str>]) -> Result<Self> {
        let gens = gens.iter().map(|g| ctx.parse(g.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, gens)
    }

    pub fn ctx(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn gens(&self) -> &[SeriesElement] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Join of the members of all generators.
    pub fn handle(&self) -> Result<SubringHandle> {
        let mut h = self.ctx.family().base_handle();
        for g in &self.gens {
            h = h.join(g.subring())?;
        }
        Ok(h)
    }

    pub fn render(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(SeriesElement::render).collect();
        format!("({})", gens.join(", "))
    }
}

/// Number of series monomials of degree below `bound`; they form a prefix
/// of the context's monomial list.
pub(crate) fn prefix_len(ctx: &SeriesContext, bound: u32) -> usize {
    ctx.monomials().iter().take_while(|m| m.degree() < bound).count()
}

/// Span of the ideal generated by `gens` in `R[X]/(X)^bound`, for
/// `bound <= D`. All generators must share one member.
pub(crate) fn ideal_span(ctx: &Arc<SeriesContext>, gens: &[SeriesElement], bound: u32) -> RowSpace {
    let mut rs = RowSpace::new(ctx.family().field());
    let Some(first) = gens.first() else {
        return rs;
    };
    let algebra = first.algebra();
    let cut = prefix_len(ctx, bound) * algebra.dim();
    for g in gens {
        for b in 0..algebra.dim() {
            let gb = g.scale(&algebra.basis_element(b));
            let Some(o) = gb.order() else { continue };
            for m in ctx.monomials() {
                if m.degree() + o >= bound {
                    break;
                }
                rs.insert(&gb.shift(m).to_vector().filter(|i| i < cut));
            }
        }
    }
    rs
}

/// Whether `f` lies in `I + (X)^D`.
pub fn truncated_membership(f: &SeriesElement, ideal: &FgIdeal) -> Result<bool> {
    if !Arc::ptr_eq(f.ctx(), &ideal.ctx) {
        return Err(Error::ContextMismatch);
    }
    let mut all = ideal.gens.clone();
    all.push(f.clone());
    let mut lifted = lift_all(&ideal.ctx, &all)?;
    let f = lifted.pop().expect("pushed");
    let span = ideal_span(&ideal.ctx, &lifted, ideal.ctx.trunc());
    Ok(span.contains(&f.to_vector()))
}

/// Whether the two ideals agree at truncation.
pub fn same_truncated_ideal(a: &FgIdeal, b: &FgIdeal) -> Result<bool> {
    for f in a.gens() {
        if !truncated_membership(f, b)? {
            return Ok(false);
        }
    }
    for f in b.gens() {
        if !truncated_membership(f, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of one step of [`is_regular_sequence`].
#[derive(Clone, Debug)]
pub struct RegularStep {
    pub index: usize,
    /// Degree bound `D - e` of the multiplied classes.
    pub degree_bound: Option<u32>,
    /// Dimension of the space of multiplied classes.
    pub domain_dim: usize,
    /// Dimension of the kernel of multiplication into `S_D/J_D`.
    pub kernel_dim: usize,
    /// Dimension of the image of `J` below the same degree bound.
    pub ideal_dim: usize,
    pub certified: bool,
    /// A class killed by the new element but not in `J`, when not certified.
    pub witness: Option<SeriesElement>,
}

#[derive(Clone, Debug)]
pub struct RegularSequenceReport {
    pub sequence: Vec<SeriesElement>,
    pub certified_to_degree: u32,
    /// Every certified step, followed by the first failing one if any.
    pub steps: Vec<RegularStep>,
}

impl RegularSequenceReport {
    pub fn certified_len(&self) -> usize {
        self.steps.iter().take_while(|s| s.certified).count()
    }

    pub fn is_regular(&self) -> bool {
        self.certified_len() == self.sequence.len()
    }

    pub fn failure(&self) -> Option<&RegularStep> {
        self.steps.iter().find(|s| !s.certified)
    }
}

/// Largest order of the residue images of `f` over the maximal ideals of
/// its member, when all of them are nonzero and the member is supported.
fn residue_order(residues: &[ResidueField], f: &SeriesElement) -> Option<u32> {
    let mut worst = None;
    for rf in residues {
        let o = f
            .coeffs()
            .filter(|(_, c)| !rf.project(c).is_zero())
            .map(|(m, _)| m.degree())
            .min()?;
        worst = Some(worst.map_or(o, |w: u32| w.max(o)));
    }
    worst
}

/// Certify `f_1, .., f_t` as a regular sequence at truncation `D`.
///
/// With `J = (f_1..f_i)` and `f = f_(i+1)`, classes `g` of degree below
/// `D - e` are multiplied by `f` into `S_D/J_D`, and the step is certified
/// when every class in the kernel lies in `J`. Here `e` is the order of `f`,
/// raised to the largest order of its residue images when those are all
/// nonzero: nilpotent low-order coefficients otherwise produce kernel
/// classes at the top degree that vanish as `D` grows.
pub fn is_regular_sequence(ctx: &Arc<SeriesContext>, fs: &[SeriesElement]) -> Result<RegularSequenceReport> {
    let d = ctx.trunc();
    let mut report = RegularSequenceReport {
        sequence: fs.to_vec(),
        certified_to_degree: d,
        steps: Vec::new(),
    };
    if fs.is_empty() {
        return Ok(report);
    }
    let lifted = lift_all(ctx, fs)?;
    let h = lifted[0].subring().clone();
    for (i, f) in lifted.iter().enumerate() {
        if f.constant_term().is_unit() {
            return Err(Error::UnitGenerator(i));
        }
    }
    let algebra = Arc::clone(lifted[0].algebra());
    let residues: Vec<ResidueField> = match maximal_ideals(&algebra) {
        Ok(ms) => ms.iter().filter_map(|m| residue_field(&algebra, m).ok()).collect(),
        Err(_) => Vec::new(),
    };
    let dim = algebra.dim();
    let field = algebra.field();
    for (i, f) in lifted.iter().enumerate() {
        let prev = &lifted[..i];
        let e = f.order().map(|o| residue_order(&residues, f).map_or(o, |r| r.max(o)));
        let step = match e {
            Some(e) if e < d => {
                let j_full = ideal_span(ctx, prev, d);
                let j_low = ideal_span(ctx, prev, d - e);
                let fb: Vec<SeriesElement> = (0..dim).map(|b| f.scale(&algebra.basis_element(b))).collect();
                let mut cols = Vec::new();
                for m in ctx.monomials().iter().take_while(|m| m.degree() < d - e) {
                    for g in &fb {
                        cols.push(j_full.reduce(&g.shift(m).to_vector()));
                    }
                }
                let ker = linalg::kernel(field, &cols);
                let witness = match ker.iter().find(|v| !j_low.contains(v)) {
                    Some(v) => Some(SeriesElement::from_vector(ctx, &h, v)?),
                    None => None,
                };
                RegularStep {
                    index: i,
                    degree_bound: Some(d - e),
                    domain_dim: cols.len(),
                    kernel_dim: ker.len(),
                    ideal_dim: j_low.rank(),
                    certified: witness.is_none(),
                    witness,
                }
            }
            _ => RegularStep {
                index: i,
                degree_bound: None,
                domain_dim: 0,
                kernel_dim: 0,
                ideal_dim: 0,
                certified: false,
                witness: Some(ctx.one().lift(&h)?),
            },
        };
        let ok = step.certified;
        report.steps.push(step);
        if !ok {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Field;
    use crate::family::DirectedFamily;

    fn field_ctx(n: usize, d: u32) -> Arc<SeriesContext> {
        let fam = DirectedFamily::constant("Q", crate::artinian::ArtinianAlgebra::base_field(Field::Rational));
        SeriesContext::with_standard_vars(fam, n, d).unwrap()
    }

    fn split_ctx(n: usize, d: u32) -> Arc<SeriesContext> {
        SeriesContext::with_standard_vars(DirectedFamily::split(Field::Rational, 2).unwrap(), n, d).unwrap()
    }

    #[test]
    fn membership_examples() {
        let ctx = field_ctx(2, 4);
        let i = FgIdeal::parse(&ctx, &["X1"]).unwrap();
        assert!(truncated_membership(&ctx.parse("X1").unwrap(), &i).unwrap());
        assert!(!truncated_membership(&ctx.one(), &i).unwrap());
        assert!(truncated_membership(&ctx.parse("X1*X2 + 3*X1^3").unwrap(), &i).unwrap());
        assert!(!truncated_membership(&ctx.parse("X2").unwrap(), &i).unwrap());

        let s = split_ctx(1, 3);
        let i = FgIdeal::parse(&s, &["e0*X", "e1*X"]).unwrap();
        assert!(truncated_membership(&s.parse("X").unwrap(), &i).unwrap());
        let half = FgIdeal::parse(&s, &["e0*X"]).unwrap();
        assert!(!truncated_membership(&s.parse("X").unwrap(), &half).unwrap());
    }

    #[test]
    fn one_is_never_in_a_variable_ideal() {
        for d in 1..5 {
            let ctx = field_ctx(1, d);
            let i = FgIdeal::parse(&ctx, &["X"]).unwrap();
            assert!(!truncated_membership(&ctx.one(), &i).unwrap());
        }
    }

    #[test]
    fn regular_sequence_examples() {
        let ctx = field_ctx(2, 6);
        let r = is_regular_sequence(&ctx, &ctx.parse_all(&["X1", "X2"]).unwrap()).unwrap();
        assert!(r.is_regular());

        let r = is_regular_sequence(&ctx, &ctx.parse_all(&["X1", "X1"]).unwrap()).unwrap();
        assert_eq!(r.certified_len(), 1);
        let fail = r.failure().unwrap();
        assert_eq!(fail.index, 1);
        let w = fail.witness.as_ref().unwrap();
        // the witness is killed by X1 modulo (X1) but is not itself in (X1)
        let j = FgIdeal::parse(&ctx, &["X1"]).unwrap();
        assert!(!truncated_membership(w, &j).unwrap());

        let s = split_ctx(1, 6);
        let r = is_regular_sequence(&s, &s.parse_all(&["e0*X"]).unwrap()).unwrap();
        assert_eq!(r.certified_len(), 0);
        let w = r.failure().unwrap().witness.as_ref().unwrap();
        assert_eq!(w.render(), "(0, 1)");
    }

    #[test]
    fn unit_generators_are_rejected() {
        let ctx = field_ctx(1, 4);
        let err = is_regular_sequence(&ctx, &ctx.parse_all(&["X", "1 + X"]).unwrap()).unwrap_err();
        assert_eq!(err, Error::UnitGenerator(1));
    }

    #[test]
    fn non_monomial_regular_element() {
        let ctx = field_ctx(2, 6);
        let r = is_regular_sequence(&ctx, &ctx.parse_all(&["X1*X2", "X1 + X2"]).unwrap()).unwrap();
        assert!(r.is_regular());
        let r = is_regular_sequence(&ctx, &ctx.parse_all(&["X1*X2", "X1^2"]).unwrap()).unwrap();
        assert!(!r.is_regular());
    }

    #[test]
    fn nilpotent_coefficients_are_zero_divisors() {
        let fam = DirectedFamily::example_ring(Field::Rational);
        let ctx = SeriesContext::with_standard_vars(fam, 1, 5).unwrap();
        let r = is_regular_sequence(&ctx, &ctx.parse_all(&["y*X"]).unwrap()).unwrap();
        assert!(!r.is_regular());
        let r = is_regular_sequence(&ctx, &ctx.parse_all(&["X + y"]).unwrap()).unwrap();
        assert!(r.is_regular());
    }
}
