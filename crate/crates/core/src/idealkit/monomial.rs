//! Monomial ideals in the series variables.
//!
//! A generator `c * X^a` contributes `X^a` over the component `MS` exactly
//! when `c` survives in `k(M)`, so over each component the ideal becomes a
//! monomial ideal of `k(M)[[X]]` and everything is combinatorial.

use crate::error::{Error, Result};
use crate::exactpoly::Monomial;
use crate::series::{residue_map, ExtIdealDesc, SeriesElement};

/// Drop generators divisible by another one; sort and dedupe.
pub fn minimal_generators(gens: &[Monomial]) -> Vec<Monomial> {
    let mut g: Vec<Monomial> = gens.to_vec();
    g.sort();
    g.dedup();
    let keep: Vec<Monomial> = g
        .iter()
        .filter(|m| !g.iter().any(|o| o != *m && o.divides(m)))
        .cloned()
        .collect();
    keep
}

/// Least number of variables meeting the support of every generator.
pub fn height(nvars: usize, gens: &[Monomial]) -> usize {
    let supports: Vec<u32> = minimal_generators(gens)
        .iter()
        .map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i)))
        .collect();
    assert!(nvars <= 16, "exhaustive cover search is limited to 16 variables");
    (0..=nvars)
        .find(|&k| {
            (0u32..1 << nvars)
                .filter(|mask| mask.count_ones() as usize == k)
                .any(|mask| supports.iter().all(|s| s & mask != 0))
        })
        .unwrap_or(nvars)
}

/// `(I : a)` for a monomial `a`.
pub fn colon(gens: &[Monomial], a: &Monomial) -> Vec<Monomial> {
    let q: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let e = m
                .exponents()
                .iter()
                .zip(a.exponents())
                .map(|(x, y)| x.saturating_sub(*y))
                .collect();
            Monomial::from_exponents(e)
        })
        .collect();
    minimal_generators(&q)
}

/// Irreducible components `(x_i^(a_i) : a_i > 0)`, each encoded as the
/// exponent vector `a`, of an irredundant decomposition.
pub fn irreducible_components(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::new();
    split(minimal_generators(gens), &mut out);
    out.sort();
    out.dedup();
    let contains = |q: &Monomial, other: &Monomial| {
        // other ⊆ q: every x_i^(b_i) of other lies in q
        other
            .exponents()
            .iter()
            .zip(q.exponents())
            .all(|(&b, &a)| b == 0 || (a > 0 && a <= b))
    };
    out.iter()
        .filter(|q| !out.iter().any(|o| o != *q && contains(q, o)))
        .cloned()
        .collect()
}

fn split(gens: Vec<Monomial>, out: &mut Vec<Monomial>) {
    if gens.iter().any(Monomial::is_one) {
        return;
    }
    match gens.iter().find(|m| m.support().count() > 1) {
        None => {
            let n = gens.first().map_or(0, Monomial::nvars);
            let mut e = vec![0u32; n];
            for m in &gens {
                let i = m.pure_power_var().expect("pure power");
                let a = m.exponents()[i];
                if e[i] == 0 || a < e[i] {
                    e[i] = a;
                }
            }
            out.push(Monomial::from_exponents(e));
        }
        Some(m) => {
            let i = m.support().next().expect("nonempty support");
            let mut power = vec![0u32; m.nvars()];
            power[i] = m.exponents()[i];
            let power = Monomial::from_exponents(power);
            let rest = power.quotient_of(m).expect("divides");
            let mut left = gens.clone();
            left.push(power);
            split(minimal_generators(&left), out);
            let mut right = gens;
            right.push(rest);
            split(minimal_generators(&right), out);
        }
    }
}

/// Associated primes as sorted variable sets: the radicals of the
/// irreducible components. The zero ideal gives the empty set.
pub fn associated_primes(nvars: usize, gens: &[Monomial]) -> Vec<Vec<usize>> {
    if gens.is_empty() {
        return vec![Vec::new()];
    }
    let mut primes: Vec<Vec<usize>> = irreducible_components(gens)
        .iter()
        .map(|q| q.support().collect())
        .collect();
    let _ = nvars;
    primes.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    primes.dedup();
    primes
}

/// Every set of at most `max_gens` distinct monomials of degree
/// `1..=max_deg` in `nvars` variables, each sorted, in a fixed order.
pub fn monomial_family(nvars: usize, max_gens: usize, max_deg: u32) -> Vec<Vec<Monomial>> {
    let pool: Vec<Monomial> = crate::exactpoly::monomials_below(nvars, max_deg + 1)
        .into_iter()
        .filter(|m| !m.is_one())
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<Monomial>)> = vec![(0, Vec::new())];
    while let Some((start, cur)) = stack.pop() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_gens {
            continue;
        }
        for i in (start..pool.len()).rev() {
            let mut next = cur.clone();
            next.push(pool[i].clone());
            stack.push((i + 1, next));
        }
    }
    out
}

/// `MS + (X_i : i in vars)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialPrime {
    pub vars: Vec<usize>,
    pub component: String,
    pub height: usize,
}

impl MonomialPrime {
    pub fn render(&self, names: &[String]) -> String {
        if self.vars.is_empty() {
            return self.component.clone();
        }
        let xs: Vec<&str> = self.vars.iter().map(|&i| names[i].as_str()).collect();
        format!("{} + ({})", self.component, xs.join(", "))
    }
}

/// Series monomials seen by the component: single-term generators whose
/// coefficient survives in the residue field.
pub fn slice_monomials(gens: &[SeriesElement], component: &ExtIdealDesc) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    for g in gens {
        let terms: Vec<_> = g.coeffs().collect();
        if terms.len() > 1 {
            return Err(Error::NotMonomial(g.render()));
        }
        if residue_map(g, component)?.is_zero() {
            continue;
        }
        let m = terms[0].0.clone();
        if m.is_one() {
            return Err(Error::Invalid(format!(
                "{} is a unit over {}",
                g.render(),
                component.describe()
            )));
        }
        out.push(m);
    }
    Ok(out)
}

/// Height of the ideal over the component: a minimum vertex cover.
pub fn height_monomial(gens: &[SeriesElement], component: &ExtIdealDesc) -> Result<usize> {
    let mons = slice_monomials(gens, component)?;
    Ok(height(component.ctx().nvars(), &mons))
}

pub fn associated_primes_monomial(gens: &[SeriesElement], component: &ExtIdealDesc) -> Result<Vec<MonomialPrime>> {
    let mons = slice_monomials(gens, component)?;
    Ok(associated_primes(component.ctx().nvars(), &mons)
        .into_iter()
        .map(|vars| MonomialPrime {
            height: vars.len(),
            vars,
            component: component.describe(),
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct ComponentUnmixed {
    pub component: String,
    pub height: usize,
    pub generators: usize,
    pub primes: Vec<MonomialPrime>,
    pub minimal: Vec<Vec<usize>>,
    pub maximal: Vec<Vec<usize>>,
    pub unmixed: bool,
}

#[derive(Clone, Debug)]
pub struct UnmixedReport {
    pub components: Vec<ComponentUnmixed>,
}

impl UnmixedReport {
    pub fn unmixed(&self) -> bool {
        self.components.iter().all(|c| c.unmixed)
    }
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Check that every prime divisor has the ideal's height, component by
/// component. Requires the ideal to be height-generated on each.
pub fn verify_unmixed(gens: &[SeriesElement], components: &[ExtIdealDesc]) -> Result<UnmixedReport> {
    let mut out = Vec::new();
    for c in components {
        let mons = minimal_generators(&slice_monomials(gens, c)?);
        let n = c.ctx().nvars();
        let h = height(n, &mons);
        if mons.len() != h {
            return Err(Error::NotHeightGenerated(format!(
                "over {}: height {h} but {} minimal generators",
                c.describe(),
                mons.len()
            )));
        }
        let primes = associated_primes_monomial(gens, c)?;
        let sets: Vec<Vec<usize>> = primes.iter().map(|p| p.vars.clone()).collect();
        let minimal: Vec<Vec<usize>> = sets
            .iter()
            .filter(|p| !sets.iter().any(|q| q != *p && subset(q, p)))
            .cloned()
            .collect();
        let maximal: Vec<Vec<usize>> = sets
            .iter()
            .filter(|p| !sets.iter().any(|q| q != *p && subset(p, q)))
            .cloned()
            .collect();
        out.push(ComponentUnmixed {
            component: c.describe(),
            height: h,
            generators: mons.len(),
            unmixed: primes.iter().all(|p| p.height == h) && minimal == maximal,
            primes,
            minimal,
            maximal,
        });
    }
    Ok(UnmixedReport { components: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn heights() {
        assert_eq!(height(2, &[m(&[1, 1])]), 1);
        assert_eq!(height(3, &[m(&[1, 1, 0]), m(&[1, 0, 1]), m(&[0, 1, 1])]), 2);
        assert_eq!(height(3, &[m(&[1, 0, 0]), m(&[0, 1, 0]), m(&[0, 0, 1])]), 3);
        assert_eq!(height(3, &[]), 0);
    }

    #[test]
    fn associated_prime_examples() {
        assert_eq!(associated_primes(2, &[m(&[2, 0])]), vec![vec![0]]);
        assert_eq!(
            associated_primes(2, &[m(&[2, 0]), m(&[1, 1])]),
            vec![vec![0], vec![0, 1]]
        );
        assert_eq!(associated_primes(2, &[m(&[1, 1])]), vec![vec![0], vec![1]]);
        assert_eq!(associated_primes(2, &[]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn components_intersect_back() {
        // (x^2, xy) = (x) ∩ (x^2, y)
        let comps = irreducible_components(&[m(&[2, 0]), m(&[1, 1])]);
        assert_eq!(comps, vec![m(&[1, 0]), m(&[2, 1])]);
    }

    #[test]
    fn colon_examples() {
        let i = [m(&[2, 0]), m(&[1, 1])];
        assert_eq!(colon(&i, &m(&[1, 0])), vec![m(&[0, 1]), m(&[1, 0])]);
        assert_eq!(colon(&i, &m(&[0, 1])), vec![m(&[1, 0])]);
    }

    #[test]
    fn family_sizes() {
        assert_eq!(monomial_family(1, 3, 3).len(), 7);
        assert_eq!(monomial_family(2, 3, 3).len(), 129);
        assert_eq!(monomial_family(3, 3, 3).len(), 1159);
    }
}
