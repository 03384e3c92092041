//! Dense univariate helpers used by field checks: Kronecker trial
//! factorization over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Highest degree for which rational irreducibility is decided.
pub const MAX_IRREDUCIBILITY_DEGREE: usize = 8;

const COMBINATION_BUDGET: u64 = 4_000_000;

/// Coefficients low-to-high, trailing zeros stripped.
pub type DensePoly = Vec<BigRational>;

fn trim(p: &mut DensePoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn degree(p: &DensePoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Remainder of `a` divided by `b` over the rationals.
pub fn rem(a: &DensePoly, b: &DensePoly) -> DensePoly {
    let mut r = a.clone();
    trim(&mut r);
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let q = &r[dr] / &lead;
        for i in 0..=db {
            let t = &q * &b[i];
            r[dr - db + i] -= t;
        }
        trim(&mut r);
    }
    r
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Interpolating polynomial through `(xs[i], ys[i])` (Newton form).
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> DensePoly {
    let n = xs.len();
    let xs: Vec<BigRational> = xs.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut coef: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand Newton basis
    let mut out: DensePoly = vec![BigRational::zero(); n];
    let mut basis: DensePoly = vec![BigRational::one()];
    for (k, c) in coef.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            out[i] += c * b;
        }
        if k + 1 < n {
            // basis *= (x - xs[k])
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * &xs[k];
            }
            basis = next;
        }
    }
    trim(&mut out);
    out
}

/// Whether a rational polynomial of degree `1..=8` is irreducible over Q.
///
/// Factors of each degree up to half are searched by Kronecker's method:
/// a factor is determined by its values at `e + 1` integer points, and each
/// value divides the polynomial's value there.
pub fn is_irreducible_rational(p: &DensePoly) -> Result<bool> {
    let mut p = p.clone();
    trim(&mut p);
    let d = match degree(&p) {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d,
    };
    if d > MAX_IRREDUCIBILITY_DEGREE {
        return Err(Error::UnsupportedPresentation(format!(
            "irreducibility test is capped at degree {MAX_IRREDUCIBILITY_DEGREE}, got {d}"
        )));
    }
    // clear denominators
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    if ints[0].is_zero() {
        return Ok(false);
    }

    let mut points: Vec<(usize, BigInt, BigInt)> = Vec::new();
    for a in -12i64..=12 {
        let a = BigInt::from(a);
        let v = eval_int(&ints, &a);
        if v.is_zero() {
            return Ok(false);
        }
        points.push((divisors(&v).len(), a, v));
    }
    points.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.abs().cmp(&y.1.abs())));

    for e in 1..=d / 2 {
        let chosen = &points[..=e];
        let xs: Vec<BigInt> = chosen.iter().map(|c| c.1.clone()).collect();
        let choices: Vec<Vec<BigInt>> = chosen
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let pos = divisors(&c.2);
                if i == 0 {
                    pos
                } else {
                    pos.iter().flat_map(|x| [x.clone(), -x]).collect()
                }
            })
            .collect();
        let total: u64 = choices.iter().map(|c| c.len() as u64).product();
        if total > COMBINATION_BUDGET {
            return Err(Error::UnsupportedPresentation(format!(
                "trial factorization would need {total} combinations"
            )));
        }
        let mut idx = vec![0usize; choices.len()];
        loop {
            let ys: Vec<BigInt> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            let g = interpolate(&xs, &ys);
            if degree(&g) == Some(e) && g.iter().all(|c| c.is_integer()) && rem(&p, &g).is_empty() {
                return Ok(false);
            }
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(true)
}

/// Helper for tests and diagnostics: integer coefficients as `i64`.
pub fn small_coefficients(p: &DensePoly) -> Option<Vec<i64>> {
    p.iter()
        .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
        .collect()
}
