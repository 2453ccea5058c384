use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector(Vec<Rat>);

impl QVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        QVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVector(coords.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn zeros(n: usize) -> Self {
        QVector(vec![Rat::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rat::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rat {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rat) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: &Rat, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Positive multiple with coprime integer coordinates. The zero vector is
    /// returned unchanged.
    pub fn primitive(&self) -> QVector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        QVector(ints.into_iter().map(|c| Rat::from_integer(c / &g)).collect())
    }

    /// Primitive form with the first nonzero coordinate positive.
    pub fn primitive_unsigned(&self) -> QVector {
        let p = self.primitive();
        match p.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => p.neg(),
            _ => p,
        }
    }

    pub fn concat(&self, other: &QVector) -> QVector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        QVector(v)
    }
}

impl Index<usize> for QVector {
    type Output = Rat;

    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", super::format_rat(c))?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    ncols: usize,
    rows: Vec<QVector>,
}

impl QMatrix {
    pub fn new(ncols: usize, rows: Vec<QVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        QMatrix { ncols, rows }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::new(ncols, rows.iter().map(|r| QVector::from_ints(r)).collect())
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::new(ncols, vec![QVector::zeros(ncols); nrows])
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| QVector::unit(n, i)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows, self.ncols)
    }
}

/// Exact rank by fraction-free (Bareiss) elimination on integer-scaled rows.
pub fn rank(rows: &[QVector], ncols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.primitive()
                .into_coords()
                .into_iter()
                .map(|c| c.to_integer())
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[QVector], ncols: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m.into_iter().map(QVector::new).collect(), pivots)
}

/// Basis of `{x : row . x = 0 for every row}`, primitive integer vectors.
pub fn nullspace(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            QVector::new(v).primitive()
        })
        .collect()
}

/// Coefficients expressing `v` in the linearly independent family `basis`,
/// or `None` when `v` is outside its span.
pub fn solve_in_span(basis: &[QVector], v: &QVector) -> Option<Vec<Rat>> {
    let k = basis.len();
    let n = v.len();
    // Augmented system: columns are basis vectors, last column is v.
    let rows: Vec<QVector> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            QVector::new(row)
        })
        .collect();
    let (red, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (row, &p) in red.iter().zip(&pivots) {
        coeffs[p] = row[k].clone();
    }
    Some(coeffs)
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[QVector]) -> Rat {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut acc = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    acc
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub(crate) fn project_off(v: &QVector, basis: &[QVector]) -> QVector {
    if basis.is_empty() {
        return v.clone();
    }
    // Solve the Gram system G c = B v, then v - B^T c.
    let k = basis.len();
    let gram: Vec<QVector> = basis
        .iter()
        .map(|bi| {
            let mut row: Vec<Rat> = basis.iter().map(|bj| bi.dot(bj)).collect();
            row.push(bi.dot(v));
            QVector::new(row)
        })
        .collect();
    let (red, pivots) = rref(&gram, k + 1);
    let mut out = v.clone();
    for (row, &p) in red.iter().zip(&pivots) {
        if p < k {
            out = out.axpy(&-row[k].clone(), &basis[p]);
        }
    }
    out
}
