//! Exact sparse linear algebra over a [`Field`].

use std::collections::HashMap;

use super::scalar::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: Field) -> Self {
        SparseVec {
            entries: vec![(i, field.one())],
        }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    /// Build from unsorted entries, summing duplicates.
    pub fn from_entries(mut e: Vec<(usize, Scalar)>) -> Self {
        e.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(e.len());
        for (i, c) in e {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d = &*d + &c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec { entries: out }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut v = vec![field.zero(); len];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, a)| (*i, a * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = other.entries.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.entries[a].clone());
                a += 1;
            } else if ib < ia {
                out.push((ib, c * &other.entries[b].1));
                b += 1;
            } else {
                let s = &self.entries[a].1 + &(c * &other.entries[b].1);
                if !s.is_zero() {
                    out.push((ia, s));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec, field: Field) -> SparseVec {
        self.axpy(&field.one(), other)
    }

    /// Keep only indices satisfying the predicate.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().filter(|(i, _)| keep(*i)).cloned().collect(),
        }
    }
}

/// Outcome of adding a vector to a [`RowSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// New pivot column.
    Independent(usize),
    /// Linear relation among inserted vectors (present when tracking).
    Dependent(Option<SparseVec>),
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    track: Option<SparseVec>,
}

/// Incrementally built echelon basis of a subspace.
///
/// With tracking enabled every row remembers its expression in terms of the
/// inserted vectors, which gives kernels and solutions.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    rows: Vec<Row>,
    pivots: HashMap<usize, usize>,
    inserted: usize,
    track: bool,
}

impl RowSpace {
    pub fn new(field: Field) -> Self {
        RowSpace {
            field,
            rows: Vec::new(),
            pivots: HashMap::new(),
            inserted: 0,
            track: false,
        }
    }

    pub fn tracking(field: Field) -> Self {
        RowSpace {
            track: true,
            ..Self::new(field)
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce against the current rows; returns the residual and, when
    /// tracking, the combination `c` with `v = residual + sum c_k v_k`.
    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo = SparseVec::new();
        let mut i = 0;
        while i < v.entries.len() {
            let (col, c) = v.entries[i].clone();
            match self.pivots.get(&col) {
                Some(&r) => {
                    let row = &self.rows[r];
                    v = v.axpy(&-&c, &row.vec);
                    if let Some(t) = &row.track {
                        combo = combo.axpy(&c, t);
                    }
                }
                None => i += 1,
            }
        }
        (v, combo)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coefficients over the inserted vectors that produce `v`, if `v` lies
    /// in the span. Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express needs a tracking row space");
        let (r, combo) = self.reduce_tracked(v);
        r.is_zero().then_some(combo)
    }

    pub fn insert(&mut self, v: &SparseVec) -> Insertion {
        let k = self.inserted;
        self.inserted += 1;
        let (r, combo) = self.reduce_tracked(v);
        let track = self
            .track
            .then(|| SparseVec::unit(k, self.field).axpy(&-&self.field.one(), &combo));
        match r.leading() {
            None => Insertion::Dependent(track),
            Some((col, lead)) => {
                let col = *col;
                let inv = lead.inv().expect("nonzero pivot");
                let row = Row {
                    vec: r.scale(&inv),
                    track: track.map(|t| t.scale(&inv)),
                };
                self.pivots.insert(col, self.rows.len());
                self.rows.push(row);
                Insertion::Independent(col)
            }
        }
    }

    /// Rows of the echelon basis.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|r| &r.vec)
    }
}

/// Basis of the kernel of the linear map whose columns are given:
/// vectors `x` with `sum x_j columns[j] = 0`.
pub fn kernel(field: Field, columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut rs = RowSpace::tracking(field);
    let mut out = Vec::new();
    for c in columns {
        if let Insertion::Dependent(Some(rel)) = rs.insert(c) {
            out.push(rel);
        }
    }
    out
}

pub fn rank(field: Field, vectors: &[SparseVec]) -> usize {
    let mut rs = RowSpace::new(field);
    for v in vectors {
        rs.insert(v);
    }
    rs.rank()
}

/// Apply the linear map with the given columns to `x`.
pub fn apply(columns: &[SparseVec], x: &SparseVec, field: Field) -> SparseVec {
    let mut out = SparseVec::new();
    for (j, c) in x.entries() {
        out = out.axpy(c, &columns[*j]);
    }
    let _ = field;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: Field, xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_membership() {
        let q = Field::Rational;
        let mut rs = RowSpace::new(q);
        rs.insert(&v(q, &[1, 2, 0]));
        rs.insert(&v(q, &[0, 1, 1]));
        assert_eq!(rs.insert(&v(q, &[1, 3, 1])), Insertion::Dependent(None));
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&v(q, &[2, 5, 1])));
        assert!(!rs.contains(&v(q, &[0, 0, 1])));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let q = Field::Rational;
        let cols = vec![v(q, &[1, 0]), v(q, &[0, 1]), v(q, &[1, 1]), v(q, &[2, 0])];
        let ker = kernel(q, &cols);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(apply(&cols, k, q).is_zero());
        }
    }

    #[test]
    fn express_recovers_combination() {
        let q = Field::Rational;
        let mut rs = RowSpace::tracking(q);
        let a = v(q, &[1, 1, 0]);
        let b = v(q, &[0, 1, 1]);
        rs.insert(&a);
        rs.insert(&b);
        let target = v(q, &[2, -1, -3]);
        let c = rs.express(&target).unwrap();
        assert_eq!(apply(&[a, b], &c, q), target);
        assert!(rs.express(&v(q, &[1, 0, 0])).is_none());
    }

    #[test]
    fn works_mod_p() {
        let f = Field::prime(3).unwrap();
        // (1,1) and (2,2) are dependent, (1,2) is not
        let cols = vec![v(f, &[1, 1]), v(f, &[2, 2]), v(f, &[1, 2])];
        assert_eq!(rank(f, &cols), 2);
        assert_eq!(kernel(f, &cols).len(), 1);
    }
}
