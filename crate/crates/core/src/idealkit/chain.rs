//! Prime chains above a component, and strict chains of extended ideals.

use std::sync::Arc;

use crate::error::Result;
use crate::series::{
    quotient_presentation, residue_image_rank, residue_map, ExtIdealDesc, QuotientPresentation, SeriesContext,
};

use super::{truncated_membership, FgIdeal};

/// `MS + (X_1..X_i)` together with its certificates.
#[derive(Clone, Debug)]
pub struct ChainLink {
    pub vars: Vec<usize>,
    pub render: String,
    /// `X_(i+1)` is not in this ideal; `None` on the top link.
    pub proper_next: Option<bool>,
    /// Dimension of the quotient at truncation.
    pub quotient_rank: usize,
    /// `[k(M) : k0]` times the number of monomials in the remaining
    /// variables below `D`.
    pub expected_rank: usize,
}

impl ChainLink {
    pub fn certified(&self) -> bool {
        self.proper_next != Some(false) && self.quotient_rank == self.expected_rank
    }
}

/// Saturated chains of variable subsets between two monomial primes.
#[derive(Clone, Debug)]
pub struct CatenaryCheck {
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
    pub chains: usize,
    pub lengths: Vec<usize>,
}

impl CatenaryCheck {
    pub fn holds(&self) -> bool {
        self.chains > 0 && self.lengths.iter().all(|&l| l + self.bottom.len() == self.top.len())
    }
}

#[derive(Clone, Debug)]
pub struct PrimeChain {
    pub component: String,
    pub links: Vec<ChainLink>,
    pub presentation: QuotientPresentation,
    pub catenary: Option<CatenaryCheck>,
}

impl PrimeChain {
    pub fn length(&self) -> usize {
        self.links.len().saturating_sub(1)
    }

    pub fn certified(&self) -> bool {
        self.links.iter().all(ChainLink::certified)
            && self.presentation.holds()
            && self.catenary.as_ref().is_none_or(CatenaryCheck::holds)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree below `d` in `n` variables.
fn monomials_below(n: usize, d: u32) -> usize {
    binomial(n + d as usize - 1, n)
}

/// `MS ⊂ MS + (X1) ⊂ .. ⊂ MS + (X1..Xn)` at the context's truncation.
pub fn prime_chain(e: &ExtIdealDesc) -> Result<PrimeChain> {
    let ctx = e.ctx();
    let n = ctx.nvars();
    let d = ctx.trunc();
    let rctx = e.residue_ctx();
    let mut links = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let vars: Vec<usize> = (0..i).collect();
        let proper_next = if i < n {
            // X_(i+1) modulo MS, against (X1..Xi) over the residue field
            let x = residue_map(&ctx.var(i)?, e)?;
            let gens = (0..i).map(|j| rctx.var(j)).collect::<Result<Vec<_>>>()?;
            Some(!truncated_membership(&x, &FgIdeal::new(rctx, gens)?)?)
        } else {
            None
        };
        let names: Vec<&str> = vars.iter().map(|&j| ctx.vars()[j].as_str()).collect();
        let render = if names.is_empty() {
            e.describe()
        } else {
            format!("{} + ({})", e.describe(), names.join(", "))
        };
        links.push(ChainLink {
            quotient_rank: residue_image_rank(e, &vars)?,
            expected_rank: e.residue_degree() * monomials_below(n - i, d),
            vars,
            render,
            proper_next,
        });
    }
    let presentation = quotient_presentation(ctx, e)?;
    let catenary = (n <= 4).then(|| catenary_check(n, &[], &(0..n).collect::<Vec<_>>()));
    Ok(PrimeChain {
        component: e.describe(),
        links,
        presentation,
        catenary,
    })
}

/// Enumerate every saturated chain of variable subsets from `bottom` to
/// `top`. A step is saturated when no subset lies strictly between.
pub fn catenary_check(n: usize, bottom: &[usize], top: &[usize]) -> CatenaryCheck {
    let mask = |s: &[usize]| s.iter().fold(0u32, |a, &i| a | (1 << i));
    let (lo, hi) = (mask(bottom), mask(top));
    let mut lengths = Vec::new();
    if lo & hi == lo {
        let between: Vec<u32> = (0u32..1 << n).filter(|s| s & lo == lo && s & hi == *s).collect();
        let saturated = |a: u32, b: u32| {
            a != b && a & b == a && !between.iter().any(|&w| w != a && w != b && a & w == a && w & b == w)
        };
        let mut stack = vec![(lo, 0usize)];
        while let Some((cur, len)) = stack.pop() {
            if cur == hi {
                lengths.push(len);
                continue;
            }
            for &next in &between {
                if saturated(cur, next) {
                    stack.push((next, len + 1));
                }
            }
        }
    }
    lengths.sort_unstable();
    CatenaryCheck {
        bottom: bottom.to_vec(),
        top: top.to_vec(),
        chains: lengths.len(),
        lengths,
    }
}

/// One step of a chain `(a_0) ⊂ (a_0, a_1) ⊂ ..` in the base ring and its
/// extension to the series ring.
#[derive(Clone, Debug)]
pub struct ExtendedLink {
    pub added: String,
    pub strict_in_r: bool,
    pub strict_in_s: bool,
}

impl ExtendedLink {
    /// An element of `I S` has its constant term in `I`, so strictness in
    /// the base ring forces strictness after extension.
    pub fn consistent(&self) -> bool {
        self.strict_in_r == self.strict_in_s
    }
}

/// Check `a_(i+1) ∉ (a_0..a_i)` for `i < t`, in the base ring and in the
/// truncated series ring over the context's family.
pub fn extended_chain(ctx: &Arc<SeriesContext>, gens: &[String], t: usize) -> Result<Vec<ExtendedLink>> {
    let fam = ctx.family();
    let in_r = fam.non_noetherian_chain(gens, t)?;
    let mut out = Vec::with_capacity(t);
    for (i, strict_in_r) in in_r.into_iter().enumerate() {
        let mut consts = Vec::with_capacity(i + 1);
        for g in &gens[..=i] {
            let (h, a) = fam.parse_element(g)?;
            consts.push(ctx.constant(&h, &a)?);
        }
        let (h, a) = fam.parse_element(&gens[i + 1])?;
        let next = ctx.constant(&h, &a)?;
        let strict_in_s = !truncated_membership(&next, &FgIdeal::new(ctx, consts)?)?;
        out.push(ExtendedLink {
            added: gens[i + 1].clone(),
            strict_in_r,
            strict_in_s,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::ArtinianAlgebra;
    use crate::exactpoly::Field;
    use crate::family::DirectedFamily;
    use crate::series::minimal_primes;

    #[test]
    fn chain_over_the_rationals() {
        let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
        let ctx = SeriesContext::with_standard_vars(fam, 2, 4).unwrap();
        let comps = minimal_primes(&ctx, &ctx.family().base_handle()).unwrap();
        assert_eq!(comps.len(), 1);
        let c = prime_chain(&comps[0]).unwrap();
        assert_eq!(c.length(), 2);
        assert!(c.certified());
        let r: Vec<&str> = c.links.iter().map(|l| l.render.as_str()).collect();
        assert_eq!(r, ["(0)S", "(0)S + (X1)", "(0)S + (X1, X2)"]);
    }

    #[test]
    fn chain_over_the_example_ring() {
        let fam = DirectedFamily::example_ring(Field::Rational);
        let ctx = SeriesContext::with_standard_vars(fam, 1, 4).unwrap();
        let w = ctx.family().window(2);
        let comps = minimal_primes(&ctx, &w).unwrap();
        let c = prime_chain(&comps[0]).unwrap();
        assert_eq!(c.length(), 1);
        assert!(c.certified());
    }

    #[test]
    fn saturated_chains() {
        let c = catenary_check(3, &[0], &[0, 1, 2]);
        assert_eq!(c.chains, 2);
        assert!(c.holds());
        assert_eq!(catenary_check(4, &[], &[0, 1, 2, 3]).chains, 24);
        assert_eq!(catenary_check(3, &[1], &[0, 2]).chains, 0);
    }

    #[test]
    fn example_ring_chain_stays_strict() {
        let fam = DirectedFamily::example_ring(Field::Rational);
        let ctx = SeriesContext::with_standard_vars(fam, 1, 3).unwrap();
        let gens: Vec<String> = (0..5).map(|i| format!("z{i}")).collect();
        let links = extended_chain(&ctx, &gens, 4).unwrap();
        assert!(links.iter().all(|l| l.strict_in_r && l.strict_in_s && l.consistent()));
    }
}
