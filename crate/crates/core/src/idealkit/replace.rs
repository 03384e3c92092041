//! Rewriting a height-generated ideal on a regular sequence.
//!
//! Generators are replaced one at a time by `f_a + sum g_b f_b` with
//! multipliers `g_b` drawn from a fixed list, until the new element is
//! regular modulo the ones already chosen. Generators that fall into the
//! ideal of the chosen elements are dropped.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactpoly::Monomial;
use crate::series::{lift_all, minimal_primes, SeriesContext, SeriesElement};

use super::monomial::{height, minimal_generators, slice_monomials};
use super::{is_regular_sequence, truncated_membership, FgIdeal, RegularSequenceReport};

/// Candidates tried per replacement before giving up.
pub const SEARCH_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct ReplacementStep {
    /// Index of the replaced generator in the input.
    pub base: usize,
    /// `(input index, multiplier)` for each nonzero `g_b`.
    pub multipliers: Vec<(usize, SeriesElement)>,
    pub element: SeriesElement,
    pub candidates_tried: usize,
    /// Input generators found to lie in the ideal of the chosen elements.
    pub dropped: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Replacement {
    pub ideal: FgIdeal,
    pub report: RegularSequenceReport,
    pub steps: Vec<ReplacementStep>,
    /// Input generators lying in the ideal of the other ones, removed
    /// before the search.
    pub redundant: Vec<usize>,
    /// True when the input was already a certified regular sequence.
    pub unchanged: bool,
}

/// Multipliers of degree at most one: `±1`, idempotents, and `±X_i`,
/// `e * X_i` for each variable and idempotent `e`.
fn multipliers(ctx: &Arc<SeriesContext>, sample: &SeriesElement) -> Result<Vec<SeriesElement>> {
    let h = sample.subring();
    let alg = sample.algebra();
    let one = ctx.one().lift(h)?;
    let mut idem = alg.structural_idempotents();
    idem.retain(|e| !e.is_one());
    let mut out = vec![one.clone(), one.neg()];
    for e in &idem {
        out.push(ctx.constant(h, e)?);
    }
    for i in 0..ctx.nvars() {
        let x = Monomial::var(ctx.nvars(), i);
        out.push(one.shift(&x));
        out.push(one.shift(&x).neg());
        for e in &idem {
            out.push(ctx.term(h, e, x.clone())?);
        }
    }
    Ok(out)
}

/// Height on the monomial slice: the least component height.
fn slice_height(ideal: &FgIdeal) -> Result<Option<usize>> {
    if ideal.gens().iter().any(|g| g.coeffs().count() > 1) {
        return Ok(None);
    }
    let ctx = ideal.ctx();
    let comps = minimal_primes(ctx, &ideal.handle()?)?;
    let mut best = None;
    for c in &comps {
        let mons = minimal_generators(&slice_monomials(ideal.gens(), c)?);
        let h = height(ctx.nvars(), &mons);
        best = Some(best.map_or(h, |b: usize| b.min(h)));
    }
    Ok(best)
}

/// A candidate `rest[a] + sum g_b rest[b]`, as indices into `rest` and
/// the multiplier list.
struct Plan {
    a: usize,
    terms: Vec<(usize, usize)>,
}

/// Lowest base index first within each number of nonzero multipliers,
/// then the multiplier list order. At most `cap` plans.
fn plans(n: usize, mults: usize, cap: usize) -> Vec<Plan> {
    let mut out = Vec::new();
    for weight in 0..n {
        for a in 0..n {
            let others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
            for subset in subsets(&others, weight) {
                let mut choice = vec![0usize; subset.len()];
                loop {
                    if out.len() >= cap {
                        return out;
                    }
                    out.push(Plan {
                        a,
                        terms: subset.iter().copied().zip(choice.iter().copied()).collect(),
                    });
                    if !advance(&mut choice, mults) {
                        break;
                    }
                }
            }
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut tail in subsets(&items[i + 1..], k - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

fn advance(choice: &mut [usize], base: usize) -> bool {
    for c in choice.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

struct Search<'a> {
    ctx: &'a Arc<SeriesContext>,
    mults: &'a [SeriesElement],
    /// Length bound from the height, when known.
    bound: Option<usize>,
    tried: usize,
    exhausted: bool,
}

/// Original index and generator.
type Indexed = Vec<(usize, SeriesElement)>;

impl Search<'_> {
    /// Generators of `rest` not in the ideal of `chosen`.
    fn prune(&self, chosen: &[SeriesElement], rest: Indexed) -> Result<(Indexed, Vec<usize>)> {
        let current = FgIdeal::new(self.ctx, chosen.to_vec())?;
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for (i, f) in rest {
            if truncated_membership(&f, &current)? {
                dropped.push(i);
            } else {
                kept.push((i, f));
            }
        }
        Ok((kept, dropped))
    }

    /// Depth-first: the first regular candidate is kept unless the rest of
    /// the ideal cannot then be finished.
    fn extend(
        &mut self,
        chosen: &mut Vec<SeriesElement>,
        rest: &[(usize, SeriesElement)],
    ) -> Result<Option<Vec<ReplacementStep>>> {
        if rest.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if self.bound.is_some_and(|b| chosen.len() >= b) {
            return Ok(None);
        }
        for plan in plans(rest.len(), self.mults.len(), SEARCH_CAP) {
            if self.tried >= SEARCH_CAP {
                self.exhausted = true;
                return Ok(None);
            }
            self.tried += 1;
            let mut h = rest[plan.a].1.clone();
            let mut used = Vec::new();
            for &(b, g) in &plan.terms {
                h = h.add(&self.mults[g].mul(&rest[b].1)?)?;
                used.push((rest[b].0, self.mults[g].clone()));
            }
            if h.is_zero() || h.constant_term().is_unit() {
                continue;
            }
            chosen.push(h.clone());
            if is_regular_sequence(self.ctx, chosen)?.is_regular() {
                let remaining: Vec<(usize, SeriesElement)> = rest
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != plan.a)
                    .map(|(_, x)| x.clone())
                    .collect();
                let (kept, dropped) = self.prune(chosen, remaining)?;
                let tried = self.tried;
                if let Some(mut steps) = self.extend(chosen, &kept)? {
                    steps.insert(
                        0,
                        ReplacementStep {
                            base: rest[plan.a].0,
                            multipliers: used,
                            element: h,
                            candidates_tried: tried,
                            dropped,
                        },
                    );
                    return Ok(Some(steps));
                }
                if self.exhausted {
                    return Ok(None);
                }
            }
            chosen.pop();
        }
        Ok(None)
    }
}

/// Replace the generators of `ideal` by a regular sequence generating the
/// same ideal at truncation.
pub fn replace_with_regular(ideal: &FgIdeal) -> Result<Replacement> {
    let ctx = ideal.ctx();
    if ideal.is_empty() {
        return Ok(Replacement {
            ideal: ideal.clone(),
            report: is_regular_sequence(ctx, &[])?,
            steps: Vec::new(),
            redundant: Vec::new(),
            unchanged: true,
        });
    }
    let report = is_regular_sequence(ctx, ideal.gens())?;
    if report.is_regular() {
        return Ok(Replacement {
            ideal: ideal.clone(),
            report,
            steps: Vec::new(),
            redundant: Vec::new(),
            unchanged: true,
        });
    }
    let Some(ht) = slice_height(ideal)? else {
        return Err(Error::NotHeightGenerated(format!(
            "{} is outside the monomial slice and not a regular sequence",
            ideal.render()
        )));
    };
    let lifted = lift_all(ctx, ideal.gens())?;
    let mults = multipliers(ctx, &lifted[0])?;
    let mut rest: Vec<(usize, SeriesElement)> = lifted.into_iter().enumerate().collect();
    // drop generators lying in the ideal of the others, last first
    let mut redundant = Vec::new();
    let mut k = rest.len();
    while k > 0 {
        k -= 1;
        let others: Vec<SeriesElement> = rest
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, (_, f))| f.clone())
            .collect();
        if rest[k].1.is_zero() || (!others.is_empty() && truncated_membership(&rest[k].1, &FgIdeal::new(ctx, others)?)?)
        {
            redundant.push(rest.remove(k).0);
        }
    }
    let mut search = Search {
        ctx,
        mults: &mults,
        bound: Some(ht),
        tried: 0,
        exhausted: false,
    };
    let mut chosen = Vec::new();
    let Some(steps) = search.extend(&mut chosen, &rest)? else {
        if search.exhausted {
            return Err(Error::SearchExhausted(search.tried));
        }
        return Err(Error::NotHeightGenerated(format!(
            "{} has height {ht} but no {ht} elements of the search space generate it",
            ideal.render()
        )));
    };
    let out = FgIdeal::new(ctx, chosen)?;
    if !super::same_truncated_ideal(ideal, &out)? {
        return Err(Error::Invalid("replacement changed the ideal".into()));
    }
    let report = is_regular_sequence(ctx, out.gens())?;
    Ok(Replacement {
        ideal: out,
        report,
        steps,
        redundant,
        unchanged: false,
    })
}

/// A seeded height-generated monomial ideal presented redundantly:
/// pairwise coprime monomials `m_i`, each given as itself, split along
/// the base idempotents, or accompanied by a multiple `X_k m_i`. Every
/// generator has degree below the truncation.
pub fn seeded_redundant_ideal(ctx: &Arc<SeriesContext>, seed: u64) -> Result<FgIdeal> {
    let room = ctx.trunc().saturating_sub(2) as usize;
    if room == 0 {
        return Err(Error::Invalid("seeded ideals need truncation at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.nvars();
    let h = ctx.family().base_handle();
    let base = ctx.family().base();
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(&mut rng);
    let t = rng.gen_range(1..=n.min(3));
    let mut groups: Vec<Vec<usize>> = vars[..t].iter().map(|&v| vec![v]).collect();
    for &v in &vars[t..] {
        if rng.gen_bool(0.3) {
            let g = rng.gen_range(0..t);
            if groups[g].len() < room {
                groups[g].push(v);
            }
        }
    }
    let idem: Vec<_> = base
        .structural_idempotents()
        .into_iter()
        .filter(|e| !e.is_one())
        .collect();
    let mut gens = Vec::new();
    for g in &groups {
        let mut e = vec![0u32; n];
        let mut deg = 0;
        for (i, &v) in g.iter().enumerate() {
            let left = g.len() - i - 1;
            e[v] = if deg + 2 + left <= room {
                rng.gen_range(1..=2)
            } else {
                1
            };
            deg += e[v] as usize;
        }
        let m = ctx.term(&h, &base.one(), Monomial::from_exponents(e))?;
        match rng.gen_range(0..3) {
            1 if !idem.is_empty() => {
                for p in &idem {
                    gens.push(m.scale(p));
                }
            }
            2 => {
                gens.push(m.clone());
                gens.push(m.shift(&Monomial::var(n, rng.gen_range(0..n))));
            }
            _ => gens.push(m),
        }
    }
    gens.shuffle(&mut rng);
    FgIdeal::new(ctx, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::ArtinianAlgebra;
    use crate::exactpoly::Field;
    use crate::family::DirectedFamily;
    use crate::idealkit::same_truncated_ideal;

    #[test]
    fn split_generators_merge() {
        let ctx = SeriesContext::with_standard_vars(DirectedFamily::split(Field::Rational, 2).unwrap(), 1, 5).unwrap();
        let i = FgIdeal::parse(&ctx, &["e0*X", "e1*X"]).unwrap();
        let r = replace_with_regular(&i).unwrap();
        assert_eq!(r.ideal.len(), 1);
        assert_eq!(r.ideal.gens()[0].render(), "X");
        assert!(r.steps[0].multipliers[0].1.constant_term().is_one());
        assert_eq!(r.steps[0].dropped, vec![1]);
        assert!(r.report.is_regular());
        assert!(same_truncated_ideal(&i, &r.ideal).unwrap());
    }

    #[test]
    fn regular_input_is_kept() {
        let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
        let ctx = SeriesContext::with_standard_vars(fam, 2, 5).unwrap();
        let i = FgIdeal::parse(&ctx, &["X1", "X2^2"]).unwrap();
        let r = replace_with_regular(&i).unwrap();
        assert!(r.unchanged);
        assert_eq!(r.ideal.render(), "(X1, X2^2)");
        let empty = FgIdeal::new(&ctx, Vec::new()).unwrap();
        assert!(replace_with_regular(&empty).unwrap().ideal.is_empty());
    }

    #[test]
    fn redundant_and_embedded() {
        let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
        let ctx = SeriesContext::with_standard_vars(fam, 2, 6).unwrap();
        let i = FgIdeal::parse(&ctx, &["X1*X2", "X1^2*X2"]).unwrap();
        let r = replace_with_regular(&i).unwrap();
        assert_eq!(r.ideal.render(), "(X1*X2)");
        assert_eq!(r.redundant, vec![1]);
        let bad = FgIdeal::parse(&ctx, &["X1^2", "X1*X2"]).unwrap();
        assert!(matches!(replace_with_regular(&bad), Err(Error::NotHeightGenerated(_))));
    }

    #[test]
    fn seeded_ideals_are_replaced() {
        let ctx = SeriesContext::with_standard_vars(DirectedFamily::split(Field::Rational, 2).unwrap(), 3, 5).unwrap();
        for seed in 0..6 {
            let i = seeded_redundant_ideal(&ctx, seed).unwrap();
            let r = replace_with_regular(&i).unwrap();
            assert!(r.report.is_regular(), "seed {seed}: {}", i.render());
            assert!(same_truncated_ideal(&i, &r.ideal).unwrap());
        }
    }

    #[test]
    fn seeded_generators_survive_truncation() {
        let ctx = SeriesContext::with_standard_vars(DirectedFamily::split(Field::Rational, 2).unwrap(), 3, 4).unwrap();
        for seed in 0..200u64 {
            let i = seeded_redundant_ideal(&ctx, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)).unwrap();
            assert!(i.gens().iter().all(|g| !g.is_zero()), "seed {seed}: {}", i.render());
        }
        let tiny = SeriesContext::with_standard_vars(DirectedFamily::split(Field::Rational, 2).unwrap(), 3, 2).unwrap();
        assert!(seeded_redundant_ideal(&tiny, 0).is_err());
    }

    #[test]
    fn zero_generators_are_redundant() {
        let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
        let ctx = SeriesContext::with_standard_vars(fam, 2, 3).unwrap();
        let i = FgIdeal::parse(&ctx, &["X1^3", "X2"]).unwrap();
        let r = replace_with_regular(&i).unwrap();
        assert_eq!(r.ideal.render(), "(X2)");
    }
}
