//! Flatness certificates for relations `sum r_i m_i = 0`.
//!
//! For `r_i` in the base ring and `m_i` truncated series, a certificate is
//! a matrix `b` over some member `R_β` and series `y_j` with
//! `sum_i r_i b_ij = 0` for every `j` and `m_i = sum_j b_ij y_j`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artinian::{AlgebraElement, ArtinianAlgebra};
use crate::error::{Error, Result};
use crate::exactpoly::linalg::{self, RowSpace, SparseVec};
use crate::family::SubringHandle;
use crate::series::{
    ext_membership, lift_all, random_coefficient, random_series, ExtIdealDesc, SeriesContext, SeriesElement,
};

/// Resampling attempts in [`random_relation`].
pub const RETRY_BUDGET: usize = 64;

#[derive(Clone, Debug)]
pub struct RelationInstance {
    ctx: Arc<SeriesContext>,
    r_subring: SubringHandle,
    r: Vec<AlgebraElement>,
    m: Vec<SeriesElement>,
}

impl RelationInstance {
    /// `r` lives in the member `r_subring`.
    pub fn new(
        ctx: &Arc<SeriesContext>,
        r_subring: &SubringHandle,
        r: Vec<AlgebraElement>,
        m: Vec<SeriesElement>,
    ) -> Result<Self> {
        if r.is_empty() || r.len() != m.len() {
            return Err(Error::Invalid(format!(
                "{} coefficients against {} series",
                r.len(),
                m.len()
            )));
        }
        let alg = ctx.family().subring(r_subring)?;
        if r.iter().any(|a| !Arc::ptr_eq(a.owner(), &alg)) {
            return Err(Error::Invalid(format!("coefficients do not live in {r_subring:?}")));
        }
        if m.iter().any(|f| !Arc::ptr_eq(f.ctx(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        let inst = RelationInstance {
            ctx: Arc::clone(ctx),
            r_subring: r_subring.clone(),
            r,
            m,
        };
        if !inst.relation()?.is_zero() {
            return Err(Error::ConstraintViolated);
        }
        Ok(inst)
    }

    pub fn ctx(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn r_subring(&self) -> &SubringHandle {
        &self.r_subring
    }

    pub fn r(&self) -> &[AlgebraElement] {
        &self.r
    }

    pub fn m(&self) -> &[SeriesElement] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `sum r_i m_i` at truncation.
    pub fn relation(&self) -> Result<SeriesElement> {
        let mut acc = self.ctx.zero(&self.r_subring)?;
        for (a, f) in self.r.iter().zip(&self.m) {
            let c = self.ctx.constant(&self.r_subring, a)?;
            acc = acc.add(&c.mul(f)?)?;
        }
        Ok(acc)
    }

    /// Smallest member holding all the data.
    pub fn beta(&self) -> Result<SubringHandle> {
        let mut h = self.r_subring.clone();
        for f in &self.m {
            h = h.join(f.subring())?;
        }
        Ok(h)
    }
}

#[derive(Clone, Debug)]
pub struct FlatCertificate {
    pub beta: SubringHandle,
    /// `n x s`, row `i` holding `b_i1 .. b_is`.
    pub b: Vec<Vec<AlgebraElement>>,
    pub y: Vec<SeriesElement>,
}

impl FlatCertificate {
    pub fn width(&self) -> usize {
        self.y.len()
    }
}

/// Build a certificate. The columns of `b` are a base-field basis of the
/// syzygies of `r` in `R_β`; `y_j` comes from writing the coefficient
/// vector `(m_i[μ])_i` of each monomial in that basis.
pub fn solve(inst: &RelationInstance) -> Result<FlatCertificate> {
    if !inst.relation()?.is_zero() {
        return Err(Error::ConstraintViolated);
    }
    let ctx = &inst.ctx;
    let fam = ctx.family();
    let beta = inst.beta()?;
    let alg: Arc<ArtinianAlgebra> = fam.subring(&beta)?;
    let field = alg.field();
    let d = alg.dim();
    let n = inst.len();
    let r: Vec<AlgebraElement> = inst
        .r
        .iter()
        .map(|a| fam.embed(a, &inst.r_subring, &beta))
        .collect::<Result<_>>()?;
    let m = lift_all(ctx, &inst.m)?
        .into_iter()
        .map(|f| f.lift(&beta))
        .collect::<Result<Vec<_>>>()?;

    // x in R_β^n, coordinate i*d + k; column (i, k) is r_i * e_k
    let mut cols = Vec::with_capacity(n * d);
    for ri in &r {
        cols.extend(ri.mul_columns());
    }
    let syz = linalg::kernel(field, &cols);
    let mut space = RowSpace::tracking(field);
    for s in &syz {
        space.insert(s);
    }
    let mut y: Vec<SeriesElement> = vec![ctx.zero(&beta)?; syz.len()];
    let one = alg.one();
    for mono in ctx.monomials() {
        let mut entries = Vec::new();
        for (i, f) in m.iter().enumerate() {
            for (k, c) in f.coeff(mono).to_sparse().entries() {
                entries.push((i * d + k, c.clone()));
            }
        }
        if entries.is_empty() {
            continue;
        }
        let v = SparseVec::from_entries(entries);
        let Some(combo) = space.express(&v) else {
            return Err(Error::NoSolution(format!("coefficient of {}", mono.render(ctx.vars()))));
        };
        for (j, c) in combo.entries() {
            let t = ctx.term(&beta, &one.scale(c), mono.clone())?;
            y[*j] = y[*j].add(&t)?;
        }
    }
    let b = (0..n)
        .map(|i| {
            syz.iter()
                .map(|s| {
                    let block = s
                        .entries()
                        .iter()
                        .filter(|(k, _)| *k / d == i)
                        .map(|(k, c)| (k - i * d, c.clone()))
                        .collect();
                    alg.from_sparse(&SparseVec::from_entries(block))
                })
                .collect()
        })
        .collect();
    Ok(FlatCertificate { beta, b, y })
}

/// Re-check both identities of a certificate directly.
pub fn verify(inst: &RelationInstance, cert: &FlatCertificate) -> Result<bool> {
    let ctx = &inst.ctx;
    let fam = ctx.family();
    if !cert.beta.contains(&inst.beta()?) || cert.b.len() != inst.len() {
        return Ok(false);
    }
    let alg = fam.subring(&cert.beta)?;
    let r: Vec<AlgebraElement> = inst
        .r
        .iter()
        .map(|a| fam.embed(a, &inst.r_subring, &cert.beta))
        .collect::<Result<_>>()?;
    for j in 0..cert.width() {
        let mut acc = alg.zero();
        for (i, ri) in r.iter().enumerate() {
            acc = acc.add(&ri.mul(&cert.b[i][j]));
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    for (i, mi) in inst.m.iter().enumerate() {
        let mut acc = ctx.zero(&cert.beta)?;
        for (j, yj) in cert.y.iter().enumerate() {
            acc = acc.add(&yj.scale(&cert.b[i][j]))?;
        }
        if acc.sub(mi)?.is_zero() {
            continue;
        }
        return Ok(false);
    }
    Ok(true)
}

/// `PS ≠ S` at truncation: the unit `1` is not in `PS`.
pub fn survival_check(e: &ExtIdealDesc) -> Result<bool> {
    let one = e.ctx().one();
    Ok(!ext_membership(&one, e)?)
}

/// A seeded instance over the member `h`: `r` and `m_1..m_(n-1)` are
/// sampled, then `m_n` is solved for degree by degree from
/// `r_n m_n = -sum r_i m_i`, plus a random element of the annihilator of
/// `r_n`. Samples with no solution are discarded.
pub fn random_relation(ctx: &Arc<SeriesContext>, h: &SubringHandle, n: usize, seed: u64) -> Result<RelationInstance> {
    if n == 0 {
        return Err(Error::Invalid("a relation needs at least one term".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = ctx.family().subring(h)?;
    let field = alg.field();
    for _ in 0..RETRY_BUDGET {
        let r: Vec<AlgebraElement> = (0..n).map(|_| random_coefficient(&alg, &mut rng)).collect();
        let mut m = (0..n - 1)
            .map(|_| random_series(ctx, h, 0.6, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let mut rhs = ctx.zero(h)?;
        for (a, f) in r.iter().zip(&m) {
            rhs = rhs.sub(&ctx.constant(h, a)?.mul(f)?)?;
        }
        let cols = r[n - 1].mul_columns();
        let mut space = RowSpace::tracking(field);
        for c in &cols {
            space.insert(c);
        }
        let ann = linalg::kernel(field, &cols);
        let mut last = ctx.zero(h)?;
        let mut ok = true;
        for mono in ctx.monomials() {
            let Some(mut x) = space.express(&rhs.coeff(mono).to_sparse()) else {
                ok = false;
                break;
            };
            for k in &ann {
                let c = field.from_i64(rng.gen_range(-2..=2));
                x = x.axpy(&c, k);
            }
            let t = ctx.term(h, &alg.from_sparse(&x), mono.clone())?;
            last = last.add(&t)?;
        }
        if !ok {
            continue;
        }
        m.push(last);
        return RelationInstance::new(ctx, h, r, m);
    }
    Err(Error::SamplingExhausted(RETRY_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Field;
    use crate::family::DirectedFamily;
    use crate::series::minimal_primes;

    fn dual_numbers() -> Arc<SeriesContext> {
        let base = ArtinianAlgebra::present_str(Field::Rational, &["y"], &["y^2"]).unwrap();
        SeriesContext::with_standard_vars(DirectedFamily::constant("dual", base), 1, 4).unwrap()
    }

    #[test]
    fn smallest_syzygy() {
        let ctx = dual_numbers();
        let h = ctx.family().base_handle();
        let y = ctx.family().base().parse("y").unwrap();
        let inst = RelationInstance::new(&ctx, &h, vec![y.clone()], vec![ctx.parse("y").unwrap()]).unwrap();
        let cert = solve(&inst).unwrap();
        assert!(verify(&inst, &cert).unwrap());
        // the syzygies of y are the multiples of y
        assert!(cert.b[0].iter().all(|b| b.mul(&y).is_zero()));
    }

    #[test]
    fn diagonal_and_zero_relations() {
        let ctx = dual_numbers();
        let h = ctx.family().base_handle();
        let a = ctx.family().base();
        let f = ctx.parse("1 + y*X + X^3").unwrap();
        let inst = RelationInstance::new(&ctx, &h, vec![a.one(), a.one().neg()], vec![f.clone(), f.clone()]).unwrap();
        let cert = solve(&inst).unwrap();
        assert!(verify(&inst, &cert).unwrap());
        let inst = RelationInstance::new(&ctx, &h, vec![a.zero()], vec![f]).unwrap();
        assert!(verify(&inst, &solve(&inst).unwrap()).unwrap());
    }

    #[test]
    fn violated_constraint() {
        let ctx = dual_numbers();
        let h = ctx.family().base_handle();
        let a = ctx.family().base();
        let err = RelationInstance::new(&ctx, &h, vec![a.one()], vec![ctx.parse("X").unwrap()]).unwrap_err();
        assert_eq!(err, Error::ConstraintViolated);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let ctx = dual_numbers();
        let h = ctx.family().base_handle();
        let a = ctx.family().base();
        let f = ctx.parse("y + X").unwrap();
        let inst = RelationInstance::new(&ctx, &h, vec![a.one(), a.one().neg()], vec![f.clone(), f]).unwrap();
        let mut cert = solve(&inst).unwrap();
        cert.y[0] = cert.y[0].add(&ctx.parse("X^2").unwrap()).unwrap();
        assert!(!verify(&inst, &cert).unwrap());
    }

    #[test]
    fn seeded_relations() {
        let ctx = dual_numbers();
        let h = ctx.family().base_handle();
        let a = random_relation(&ctx, &h, 2, 0).unwrap();
        let b = random_relation(&ctx, &h, 2, 0).unwrap();
        assert_eq!(a.m(), b.m());
        assert_eq!(a.r(), b.r());
        assert!(verify(&a, &solve(&a).unwrap()).unwrap());
        for seed in 0..20 {
            let inst = random_relation(&ctx, &h, 1 + (seed as usize % 3), seed).unwrap();
            assert!(inst.relation().unwrap().is_zero());
            assert!(verify(&inst, &solve(&inst).unwrap()).unwrap());
        }
    }

    #[test]
    fn every_maximal_ideal_survives() {
        let ctx = SeriesContext::with_standard_vars(DirectedFamily::example_ring(Field::Rational), 1, 3).unwrap();
        let w = ctx.family().window(3);
        for e in minimal_primes(&ctx, &w).unwrap() {
            assert!(survival_check(&e).unwrap());
        }
        let s = SeriesContext::with_standard_vars(DirectedFamily::split(Field::Rational, 2).unwrap(), 1, 3).unwrap();
        let comps = minimal_primes(&s, &s.family().base_handle()).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|e| survival_check(e).unwrap()));
    }
}
