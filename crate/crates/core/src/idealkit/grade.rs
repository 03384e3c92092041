//! Classical grade on the monomial slice, by greedy regular sequences.

use crate::error::{Error, Result};
use crate::series::{minimal_primes, residue_map, ExtIdealDesc, SeriesElement};

use super::monomial::{associated_primes, height, minimal_generators, slice_monomials};
use super::{is_regular_sequence, FgIdeal, RegularSequenceReport};

#[derive(Clone, Debug)]
pub struct GradeReport {
    pub grade: usize,
    /// Least height over the components, on the monomial slice.
    pub height: Option<usize>,
    pub sequence: Vec<SeriesElement>,
    pub report: RegularSequenceReport,
    pub candidates_tried: usize,
}

/// Whether `f` lies in `MS + (X_i : i in vars)`.
fn in_monomial_prime(f: &SeriesElement, c: &ExtIdealDesc, vars: &[usize]) -> Result<bool> {
    let r = residue_map(f, c)?;
    let inside = r.coeffs().all(|(m, _)| vars.iter().any(|&v| m.exponents()[v] > 0));
    Ok(inside)
}

fn subset_sums(gens: &[SeriesElement]) -> Result<Vec<SeriesElement>> {
    let t = gens.len();
    let mut masks: Vec<u32> = (1u32..1 << t).collect();
    masks.sort_by_key(|m| (m.count_ones(), (0..t).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>()));
    let mut out = Vec::with_capacity(masks.len());
    for mask in masks {
        let mut acc: Option<SeriesElement> = None;
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = Some(match acc {
                    None => g.clone(),
                    Some(a) => a.add(g)?,
                });
            }
        }
        out.push(acc.expect("nonempty mask"));
    }
    Ok(out)
}

/// Grow a regular sequence inside `ideal` from sums of its generators,
/// skipping candidates inside an associated prime of the current sequence.
pub fn cgrade(ideal: &FgIdeal) -> Result<GradeReport> {
    let ctx = ideal.ctx();
    if ideal.is_empty() {
        return Ok(GradeReport {
            grade: 0,
            height: Some(0),
            sequence: Vec::new(),
            report: is_regular_sequence(ctx, &[])?,
            candidates_tried: 0,
        });
    }
    if ideal.gens().iter().any(|g| g.coeffs().count() > 1) {
        let report = is_regular_sequence(ctx, ideal.gens())?;
        if !report.is_regular() {
            return Err(Error::NotSupportedSlice(ideal.render()));
        }
        return Ok(GradeReport {
            grade: ideal.len(),
            height: None,
            sequence: ideal.gens().to_vec(),
            report,
            candidates_tried: 0,
        });
    }
    if ideal.len() > 16 {
        return Err(Error::NotSupportedSlice(format!("{} generators", ideal.len())));
    }
    let comps = minimal_primes(ctx, &ideal.handle()?)?;
    let mut ht = None;
    for c in &comps {
        let h = height(ctx.nvars(), &minimal_generators(&slice_monomials(ideal.gens(), c)?));
        ht = Some(ht.map_or(h, |b: usize| b.min(h)));
    }
    let candidates = subset_sums(ideal.gens())?;
    let mut seq: Vec<SeriesElement> = Vec::new();
    let mut tried = 0;
    'grow: loop {
        let monomial = seq.iter().all(|f| f.coeffs().count() == 1);
        let mut primes = Vec::new();
        if monomial {
            for c in &comps {
                for p in associated_primes(ctx.nvars(), &slice_monomials(&seq, c)?) {
                    primes.push((c, p));
                }
            }
        }
        for cand in &candidates {
            if cand.constant_term().is_unit() {
                continue;
            }
            let mut avoids = true;
            for (c, p) in &primes {
                if in_monomial_prime(cand, c, p)? {
                    avoids = false;
                    break;
                }
            }
            if !avoids {
                continue;
            }
            tried += 1;
            let mut next = seq.clone();
            next.push(cand.clone());
            if is_regular_sequence(ctx, &next)?.is_regular() {
                seq = next;
                continue 'grow;
            }
        }
        break;
    }
    let report = is_regular_sequence(ctx, &seq)?;
    Ok(GradeReport {
        grade: seq.len(),
        height: ht,
        sequence: seq,
        report,
        candidates_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::ArtinianAlgebra;
    use crate::exactpoly::Field;
    use crate::family::DirectedFamily;
    use crate::series::SeriesContext;

    #[test]
    fn grade_examples() {
        let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
        let ctx = SeriesContext::with_standard_vars(fam, 3, 6).unwrap();
        let g = cgrade(&FgIdeal::parse(&ctx, &["X1", "X2", "X3"]).unwrap()).unwrap();
        assert_eq!(g.grade, 3);
        let g = cgrade(&FgIdeal::parse(&ctx, &["X1*X2"]).unwrap()).unwrap();
        assert_eq!((g.grade, g.height), (1, Some(1)));
        let g = cgrade(&FgIdeal::new(&ctx, Vec::new()).unwrap()).unwrap();
        assert_eq!(g.grade, 0);
        let g = cgrade(&FgIdeal::parse(&ctx, &["X1*X2", "X1*X3", "X2*X3"]).unwrap()).unwrap();
        assert_eq!((g.grade, g.height), (2, Some(2)));
    }

    #[test]
    fn outside_the_slice() {
        let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
        let ctx = SeriesContext::with_standard_vars(fam, 2, 5).unwrap();
        let i = FgIdeal::parse(&ctx, &["X1 + X2", "X1^2 + X1*X2"]).unwrap();
        assert!(matches!(cgrade(&i), Err(Error::NotSupportedSlice(_))));
    }
}
