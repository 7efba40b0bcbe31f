//! Exact matrix algebra.
//!
//! [`IntMatrix`] and [`snf`] work over the integers with arbitrary precision.
//! [`ModMatrix`] works over `Z/N`; every entry is kept reduced, so machine
//! words suffice there and the module category is built on it.

mod modular;

pub(crate) use modular::{gcd_u64, mul_mod};
pub use modular::{howell_basis, nullspace_mod, snf_mod, solve_mod_lexmin, ModMatrix, ModSnf, ModSolver};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Reduces every entry into `[0, n)`.
    pub fn to_mod(&self, n: u64) -> ModMatrix {
        let big_n = BigInt::from(n);
        let data = self
            .entries
            .iter()
            .map(|x| {
                let r = ((x % &big_n) + &big_n) % &big_n;
                u64::try_from(r).expect("reduced entry fits")
            })
            .collect();
        ModMatrix::from_flat(n, self.rows, self.cols, data)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * c;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * c;
            self.entries[i * self.cols + dst] += v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let k = i * self.cols + j;
            self.entries[k] = -std::mem::take(&mut self.entries[k]);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal of `d`, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Smith normal form over the integers.
///
/// Pivots on the entry of least nonzero absolute value (first in row-major
/// order on ties). The diagonal is nonnegative and sorted by divisibility;
/// signs are pushed into `v`.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = smallest_nonzero(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let p = d.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..r {
            if !d.get(i, t).is_zero() {
                let q = -(d.get(i, t) / &p);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
        }
        for j in t + 1..c {
            if !d.get(t, j).is_zero() {
                let q = -(d.get(t, j) / &p);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
        }
        if !clean {
            continue;
        }
        let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(d.get(i, j) % &p).is_zero()));
        if let Some(i) = offender {
            d.add_row(t, i, &BigInt::one());
            u.add_row(t, i, &BigInt::one());
            continue;
        }
        if p.is_negative() {
            d.negate_col(t);
            v.negate_col(t);
        }
        t += 1;
    }
    SnfResult { u, d, v }
}

fn smallest_nonzero(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// A solution of `A x = b (mod N)`: a particular solution together with a
/// generating set of the homogeneous solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSolution {
    /// Lexicographically least solution with entries in `[0, N)`.
    pub particular: Vec<BigInt>,
    /// Echelon (Howell) basis of the solution space of `A x = 0 (mod N)`.
    pub nullspace: Vec<Vec<BigInt>>,
}

/// Solves `A x = b (mod n)`, returning the lexicographically least solution.
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], n: u64) -> Result<Option<Vec<BigInt>>> {
    Ok(solve_mod_full(a, b, n)?.map(|s| s.particular))
}

/// Like [`solve_mod`] but also returns a basis of the nullspace.
pub fn solve_mod_full(a: &IntMatrix, b: &[BigInt], n: u64) -> Result<Option<ModSolution>> {
    if n < 2 {
        return Err(Error::Malformed(format!("modulus {n} must be at least 2")));
    }
    if b.len() != a.rows {
        return Err(Error::Shape(format!("right-hand side has length {} but the matrix has {} rows", b.len(), a.rows)));
    }
    let am = a.to_mod(n);
    let bm = IntMatrix::new(b.len(), 1, b.to_vec())?.to_mod(n).column(0);
    let null = nullspace_mod(&am);
    let basis = howell_basis(&null, a.cols, n);
    let to_big = |v: &Vec<u64>| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    Ok(solve_mod_lexmin(&am, &bm)
        .map(|x| ModSolution { particular: to_big(&x), nullspace: basis.iter().map(to_big).collect() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_identity_keeps_transforms_trivial() {
        let a = m(&[vec![1, 0], vec![0, 1]]);
        let s = snf(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_zero() {
        let s = snf(&m(&[vec![0]]));
        assert_eq!(s.d, m(&[vec![0]]));
    }

    #[test]
    fn snf_two_by_two() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let s = snf(&a);
        assert_eq!(s.diagonal(), big(&[2, 4]));
        assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn snf_empty() {
        let s = snf(&IntMatrix::zeros(0, 3));
        assert_eq!(s.d.rows(), 0);
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn solve_examples() {
        let a = m(&[vec![2]]);
        let s = solve_mod_full(&a, &big(&[0]), 4).unwrap().unwrap();
        assert_eq!(s.particular, big(&[0]));
        assert_eq!(s.nullspace, vec![big(&[2])]);
        assert_eq!(solve_mod(&a, &big(&[1]), 4).unwrap(), None);
        let a = m(&[vec![2, 1]]);
        assert_eq!(solve_mod(&a, &big(&[3]), 8).unwrap(), Some(big(&[0, 3])));
    }

    #[test]
    fn solve_rejects_bad_shapes() {
        let a = m(&[vec![2, 1]]);
        assert!(solve_mod(&a, &big(&[3, 1]), 8).is_err());
        assert!(solve_mod(&a, &big(&[3]), 1).is_err());
    }
}
