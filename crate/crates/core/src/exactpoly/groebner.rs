//! Reduced Gröbner bases under degrevlex, normal forms and ideal membership.

use std::collections::BTreeSet;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::scalar::Field;
use crate::error::{Error, Result};

/// A reduced Gröbner basis (degrevlex), sorted by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    field: Field,
    nvars: usize,
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    /// Basis of the zero ideal.
    pub fn zero_ideal(field: Field, nvars: usize) -> Self {
        GroebnerBasis {
            field,
            nvars,
            polys: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.polys
            .iter()
            .map(|p| p.leading_monomial().expect("nonzero basis element"))
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.leading_monomials().any(Monomial::is_one)
    }

    pub fn is_monomial_ideal(&self) -> bool {
        self.polys.iter().all(Polynomial::is_monomial)
    }

    /// A monomial is standard when no leading monomial divides it.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials().any(|l| l.divides(m))
    }

    /// Every S-polynomial reduces to zero and the basis is reduced.
    pub fn verify(&self) -> bool {
        for (i, f) in self.polys.iter().enumerate() {
            if !f.leading_term().is_some_and(|(_, c)| c.is_one()) {
                return false;
            }
            for (j, g) in self.polys.iter().enumerate() {
                if i == j {
                    continue;
                }
                let lg = g.leading_monomial().unwrap();
                if f.terms().any(|(m, _)| lg.divides(m)) {
                    return false;
                }
                if i < j && !normal_form_raw(&s_polynomial(f, g), &self.polys).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let l = mf.lcm(mg);
    let a = mf.quotient_of(&l).unwrap();
    let b = mg.quotient_of(&l).unwrap();
    f.mul_term(&a, &cf.inv().unwrap())
        .sub(&g.mul_term(&b, &cg.inv().unwrap()))
}

/// Full reduction of `f` modulo `divisors` (no Gröbner property assumed).
pub(crate) fn normal_form_raw(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let mut p = f.clone();
    let mut rem = Polynomial::zero(f.field(), f.nvars());
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = divisors.iter().find_map(|g| {
            let (lg, cg) = g.leading_term()?;
            lg.quotient_of(&m).map(|q| (g, q, cg))
        });
        match hit {
            Some((g, q, cg)) => {
                let factor = &c * &cg.inv().unwrap();
                p = p.sub(&g.mul_term(&q, &factor));
            }
            None => {
                p.remove_term(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem
}

/// Remainder of `f` modulo `g`; zero exactly when `f` lies in the ideal.
pub fn normal_form(f: &Polynomial, g: &GroebnerBasis) -> Result<Polynomial> {
    if f.nvars() != g.nvars || f.field() != g.field {
        return Err(Error::AmbientMismatch);
    }
    Ok(normal_form_raw(f, &g.polys))
}

/// Buchberger's algorithm with the coprime and chain criteria, followed by
/// inter-reduction.
pub fn buchberger(gens: &[Polynomial]) -> Result<GroebnerBasis> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Invalid("buchberger needs at least one generator".into()))?;
    for g in gens {
        first.check_ambient(g)?;
    }
    let field = first.field();
    let nvars = first.nvars();

    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        let r = normal_form_raw(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let lcm_deg = |b: &[Polynomial], i: usize, j: usize| {
        b[i].leading_monomial()
            .unwrap()
            .lcm(b[j].leading_monomial().unwrap())
            .degree()
    };
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((lcm_deg(&basis, i, j), i, j));
        }
    }
    let pending = |pairs: &BTreeSet<(u32, usize, usize)>, b: &[Polynomial], i: usize, j: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        pairs.contains(&(lcm_deg(b, i, j), i, j))
    };

    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        let li = basis[i].leading_monomial().unwrap();
        let lj = basis[j].leading_monomial().unwrap();
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&l)
                && !pending(&pairs, &basis, i, k)
                && !pending(&pairs, &basis, j, k)
        });
        if chain {
            continue;
        }
        let r = normal_form_raw(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            basis.push(r.monic());
            let n = basis.len() - 1;
            for k in 0..n {
                pairs.insert((lcm_deg(&basis, k, n), k, n));
            }
        }
    }

    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Polynomial> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = h.leading_monomial().unwrap();
            j != i && lh.divides(lg) && (lh != lg || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // reduce tails
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        reduced.push(normal_form_raw(&keep[i], &others).monic());
    }
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    Ok(GroebnerBasis {
        field,
        nvars,
        polys: reduced,
    })
}

/// Whether `f` lies in the ideal generated by `gens`.
pub fn ideal_membership(f: &Polynomial, gens: &[Polynomial]) -> Result<bool> {
    for g in gens {
        f.check_ambient(g)?;
    }
    if gens.iter().all(Polynomial::is_zero) {
        return Ok(f.is_zero());
    }
    let g = buchberger(gens)?;
    Ok(normal_form(f, &g)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse::parse_polynomial;

    fn p(s: &str, vars: &[&str]) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        parse_polynomial(s, Field::Rational, &names).unwrap()
    }

    const V: [&str; 2] = ["Y", "Z0"];

    #[test]
    fn normal_form_examples() {
        let g = buchberger(&[p("Y^2", &V), p("Z0^2", &V), p("Y*Z0", &V)]).unwrap();
        assert!(normal_form(&p("Y^2", &V), &g).unwrap().is_zero());
        assert_eq!(normal_form(&p("Y*Z0 + Z0", &V), &g).unwrap(), p("Z0", &V));
        let t = ["t"];
        let g = buchberger(&[p("t^2 - 2", &t)]).unwrap();
        assert_eq!(normal_form(&p("t^2", &t), &g).unwrap(), p("2", &t));
    }

    #[test]
    fn monomial_and_principal_bases_are_fixed() {
        let gens = vec![p("Y^2", &V), p("Z0^2", &V), p("Y*Z0", &V)];
        let g = buchberger(&gens).unwrap();
        let mut want = gens.clone();
        want.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        assert_eq!(g.generators(), &want[..]);
        let t = ["t"];
        let g = buchberger(&[p("t^2 - 2", &t)]).unwrap();
        assert_eq!(g.generators(), &[p("t^2 - 2", &t)]);
    }

    #[test]
    fn basis_of_x_minus_y_and_y_squared() {
        let v = ["X", "Y"];
        let g = buchberger(&[p("X - Y", &v), p("Y^2", &v)]).unwrap();
        assert!(g.verify());
        assert_eq!(g.generators(), &[p("X - Y", &v), p("Y^2", &v)]);
        assert!(normal_form(&p("X^2", &v), &g).unwrap().is_zero());
        assert!(normal_form(&p("X*Y", &v), &g).unwrap().is_zero());
        assert!(!normal_form(&p("X", &v), &g).unwrap().is_zero());
    }

    #[test]
    fn membership_examples() {
        let z = ["z0", "z1", "z2"];
        assert!(!ideal_membership(&p("z1", &z), &[p("z0", &z)]).unwrap());
        assert!(ideal_membership(&p("z0*z1", &z), &[p("z0", &z)]).unwrap());
        assert!(!ideal_membership(&p("z2", &z), &[p("z0", &z), p("z1", &z)]).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let g = buchberger(&[p("Y^2", &V)]).unwrap();
        let other = p("t", &["t"]);
        assert_eq!(normal_form(&other, &g), Err(Error::AmbientMismatch));
        assert_eq!(ideal_membership(&other, &[p("Y", &V)]), Err(Error::AmbientMismatch));
    }

    #[test]
    fn cyclic_three_is_consistent() {
        let v = ["a", "b", "c"];
        let gens = vec![p("a + b + c", &v), p("a*b + b*c + c*a", &v), p("a*b*c - 1", &v)];
        let g = buchberger(&gens).unwrap();
        assert!(g.verify());
        for f in &gens {
            assert!(normal_form(f, &g).unwrap().is_zero());
        }
        assert!(normal_form(&p("c^3 - 1", &v), &g).unwrap().is_zero());
    }
}
