use std::fmt;

/// Dense matrix over `Z/N` with entries kept in `[0, N)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

fn neg_mod(a: u64, n: u64) -> u64 {
    if a == 0 {
        0
    } else {
        n - a
    }
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn to_mod(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

fn inverse_mod(a: u64, n: u64) -> u64 {
    let (g, s, _) = ext_gcd(a as i128, n as i128);
    debug_assert_eq!(g, 1);
    to_mod(s, n)
}

/// For `a` in `Z/n` returns `(g, u)` with `u` a unit and `a*u = g = gcd(a, n)`.
/// The zero element gives `(n, 1)`.
pub(crate) fn unit_normalizer(a: u64, n: u64) -> (u64, u64) {
    let g = gcd_u64(a, n);
    if g == n {
        return (n, 1);
    }
    let n1 = n / g;
    let mut u = inverse_mod((a / g) % n1, n1);
    while gcd_u64(u, n) != 1 {
        u += n1;
    }
    (g, u % n)
}

impl ModMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        ModMatrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub(crate) fn from_flat(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ModMatrix { modulus, rows, cols, data }
    }

    /// Builds from rows, reducing entries. Panics on ragged input.
    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(modulus, rows, cols)
    }

    pub fn from_rows_with_cols(modulus: u64, rows: &[Vec<u64>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().map(|&x| x % modulus).collect();
        ModMatrix { modulus, rows: rows.len(), cols, data }
    }

    /// Builds from column vectors of length `rows`.
    pub fn from_columns(modulus: u64, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(modulus, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % modulus;
            }
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows, "shape");
        let n = self.modulus;
        let mut out = ModMatrix::zeros(n, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(k, j), n), n);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "shape");
        let n = self.modulus;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0u128, |acc, (&a, &x)| acc + a as u128 * x as u128) % n as u128)
            .map(|x| x as u64)
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: u64) {
        for j in 0..self.cols {
            let k = i * self.cols + j;
            self.data[k] = mul_mod(self.data[k], c, self.modulus);
        }
    }

    fn scale_col(&mut self, j: usize, c: u64) {
        for i in 0..self.rows {
            let k = i * self.cols + j;
            self.data[k] = mul_mod(self.data[k], c, self.modulus);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: u64) {
        let n = self.modulus;
        for j in 0..self.cols {
            let v = mul_mod(self.data[src * self.cols + j], c, n);
            let k = dst * self.cols + j;
            self.data[k] = add_mod(self.data[k], v, n);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: u64) {
        let n = self.modulus;
        for i in 0..self.rows {
            let v = mul_mod(self.data[i * self.cols + src], c, n);
            let k = i * self.cols + dst;
            self.data[k] = add_mod(self.data[k], v, n);
        }
    }

    /// Rows `(a, b)` become `(m00 a + m01 b, m10 a + m11 b)`.
    fn mix_rows(&mut self, a: usize, b: usize, m: [u64; 4]) {
        let n = self.modulus;
        for j in 0..self.cols {
            let (x, y) = (self.data[a * self.cols + j], self.data[b * self.cols + j]);
            self.data[a * self.cols + j] = add_mod(mul_mod(m[0], x, n), mul_mod(m[1], y, n), n);
            self.data[b * self.cols + j] = add_mod(mul_mod(m[2], x, n), mul_mod(m[3], y, n), n);
        }
    }

    /// Columns `(a, b)` become `(m00 a + m10 b, m01 a + m11 b)`, i.e. right
    /// multiplication by `[[m00, m01], [m10, m11]]`.
    fn mix_cols(&mut self, a: usize, b: usize, m: [u64; 4]) {
        let n = self.modulus;
        for i in 0..self.rows {
            let (x, y) = (self.data[i * self.cols + a], self.data[i * self.cols + b]);
            self.data[i * self.cols + a] = add_mod(mul_mod(m[0], x, n), mul_mod(m[2], y, n), n);
            self.data[i * self.cols + b] = add_mod(mul_mod(m[1], x, n), mul_mod(m[3], y, n), n);
        }
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

/// Smith form over `Z/N`: `u * a * v = diag` with `u`, `v` invertible.
///
/// Diagonal entries are divisors of `N` forming a divisibility chain; a zero
/// entry is recorded as `N` itself.
#[derive(Clone, Debug)]
pub struct ModSnf {
    pub u: ModMatrix,
    pub u_inv: ModMatrix,
    pub v: ModMatrix,
    pub diag: Vec<u64>,
}

pub fn snf_mod(a: &ModMatrix) -> ModSnf {
    let n = a.modulus;
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = ModMatrix::identity(n, r);
    let mut u_inv = ModMatrix::identity(n, r);
    let mut v = ModMatrix::identity(n, c);
    let k = r.min(c);
    let mut t = 0;
    'outer: while t < k {
        // pivot: entry generating the largest ideal, first in row-major order
        let mut best: Option<(usize, usize, u64)> = None;
        for i in t..r {
            for j in t..c {
                let x = d.get(i, j);
                if x != 0 {
                    let g = gcd_u64(x, n);
                    if best.is_none_or(|(_, _, bg)| g < bg) {
                        best = Some((i, j, g));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let (g, unit) = unit_normalizer(d.get(t, t), n);
            if unit != 1 {
                d.scale_row(t, unit);
                u.scale_row(t, unit);
                u_inv.scale_col(t, inverse_mod(unit, n));
            }
            let p = g;
            let mut restart = false;
            for i in t + 1..r {
                let b = d.get(i, t);
                if b == 0 {
                    continue;
                }
                if b.is_multiple_of(p) {
                    let q = neg_mod((b / p) % n, n);
                    d.add_row(i, t, q);
                    u.add_row(i, t, q);
                    u_inv.add_col(t, i, neg_mod(q, n));
                } else {
                    let (h, s, s2) = ext_gcd(p as i128, b as i128);
                    let m = [to_mod(s, n), to_mod(s2, n), to_mod(-(b as i128 / h), n), to_mod(p as i128 / h, n)];
                    let inv = [to_mod(p as i128 / h, n), to_mod(-s2, n), to_mod(b as i128 / h, n), to_mod(s, n)];
                    d.mix_rows(t, i, m);
                    u.mix_rows(t, i, m);
                    u_inv.mix_cols(t, i, inv);
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            for j in t + 1..c {
                let b = d.get(t, j);
                if b == 0 {
                    continue;
                }
                if b.is_multiple_of(p) {
                    let q = neg_mod((b / p) % n, n);
                    d.add_col(j, t, q);
                    v.add_col(j, t, q);
                } else {
                    let (h, s, s2) = ext_gcd(p as i128, b as i128);
                    let m = [to_mod(s, n), to_mod(-(b as i128 / h), n), to_mod(s2, n), to_mod(p as i128 / h, n)];
                    d.mix_cols(t, j, m);
                    v.mix_cols(t, j, m);
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(p)));
            if let Some(i) = offender {
                d.add_row(t, i, 1);
                u.add_row(t, i, 1);
                u_inv.add_col(i, t, n - 1);
                continue;
            }
            t += 1;
            continue 'outer;
        }
    }
    let diag = (0..k).map(|i| if d.get(i, i) == 0 { n } else { d.get(i, i) }).collect();
    ModSnf { u, u_inv, v, diag }
}

/// Generators of `{x : a x = 0 (mod N)}`.
pub fn nullspace_mod(a: &ModMatrix) -> Vec<Vec<u64>> {
    let n = a.modulus;
    let s = snf_mod(a);
    let mut gens = Vec::new();
    for j in 0..a.cols {
        let scale = if j < s.diag.len() { n / s.diag[j] } else { 1 };
        if scale == n {
            continue;
        }
        let col: Vec<u64> = s.v.column(j).iter().map(|&x| mul_mod(x, scale, n)).collect();
        if col.iter().any(|&x| x != 0) {
            gens.push(col);
        }
    }
    gens
}

/// Echelon basis of the span of `gens` in `(Z/N)^ncols` with the Howell
/// property: for every `j`, the rows whose pivot lies at column `j` or later
/// span exactly the vectors of the span vanishing before column `j`.
/// Pivots are divisors of `N`.
pub fn howell_basis(gens: &[Vec<u64>], ncols: usize, n: u64) -> Vec<Vec<u64>> {
    let mut work: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| x % n).collect::<Vec<_>>())
        .filter(|g: &Vec<u64>| g.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<Vec<u64>> = Vec::new();
    for col in 0..ncols {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::new();
        for row in work {
            if row[col] == 0 {
                rest.push(row);
                continue;
            }
            pivot = Some(match pivot {
                None => row,
                Some(p) => {
                    let (a, b) = (p[col] as i128, row[col] as i128);
                    let (h, s, s2) = ext_gcd(a, b);
                    let (c1, c2) = (to_mod(s, n), to_mod(s2, n));
                    let (d1, d2) = (to_mod(-(b / h), n), to_mod(a / h, n));
                    let new_p: Vec<u64> =
                        p.iter().zip(&row).map(|(&x, &y)| add_mod(mul_mod(c1, x, n), mul_mod(c2, y, n), n)).collect();
                    let new_r: Vec<u64> =
                        p.iter().zip(&row).map(|(&x, &y)| add_mod(mul_mod(d1, x, n), mul_mod(d2, y, n), n)).collect();
                    rest.push(new_r);
                    new_p
                }
            });
        }
        if let Some(mut p) = pivot {
            let (g, unit) = unit_normalizer(p[col], n);
            for x in p.iter_mut() {
                *x = mul_mod(*x, unit, n);
            }
            let ann: Vec<u64> = p.iter().map(|&x| mul_mod(x, n / g, n)).collect();
            rest.push(ann);
            out.push(p);
        }
        work = rest.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    }
    // clear entries above each pivot for a canonical basis
    for k in 0..out.len() {
        let col = out[k].iter().position(|&x| x != 0).expect("nonzero row");
        let g = out[k][col];
        for i in 0..k {
            let q = out[i][col] / g;
            if q != 0 {
                let row = out[k].clone();
                for (x, y) in out[i].iter_mut().zip(row) {
                    *x = add_mod(*x, neg_mod(mul_mod(q, y, n), n), n);
                }
            }
        }
    }
    out
}

/// Reduces `x` modulo the span of a Howell basis to the lexicographically
/// least member of its coset.
pub(crate) fn reduce_by_howell(x: &mut [u64], basis: &[Vec<u64>], n: u64) {
    for row in basis {
        let col = row.iter().position(|&v| v != 0).expect("nonzero row");
        let q = x[col] / row[col];
        if q != 0 {
            for (xi, &r) in x.iter_mut().zip(row) {
                *xi = add_mod(*xi, neg_mod(mul_mod(q, r, n), n), n);
            }
        }
    }
}

/// Prepared solver for `a x = b (mod N)` with many right-hand sides.
#[derive(Clone, Debug)]
pub struct ModSolver {
    cols: usize,
    snf: ModSnf,
    basis: Vec<Vec<u64>>,
}

impl ModSolver {
    pub fn new(a: &ModMatrix) -> Self {
        let n = a.modulus;
        let snf = snf_mod(a);
        let k = snf.diag.len();
        let mut null = Vec::new();
        for j in 0..a.cols {
            let scale = if j < k { n / snf.diag[j] } else { 1 };
            if scale != n {
                null.push(snf.v.column(j).iter().map(|&v| mul_mod(v, scale, n)).collect());
            }
        }
        let basis = howell_basis(&null, a.cols, n);
        ModSolver { cols: a.cols, snf, basis }
    }

    /// Howell basis of the nullspace.
    pub fn nullspace(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Lexicographically least solution in `[0, N)^cols`, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let n = self.snf.u.modulus;
        assert_eq!(b.len(), self.snf.u.cols, "shape");
        let c = self.snf.u.mul_vec(b);
        let k = self.snf.diag.len();
        let mut y = vec![0u64; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            if i < k {
                let d = self.snf.diag[i];
                if ci % d != 0 {
                    return None;
                }
                if d != n {
                    y[i] = ci / d;
                }
            } else if ci != 0 {
                return None;
            }
        }
        let mut x = self.snf.v.mul_vec(&y);
        reduce_by_howell(&mut x, &self.basis, n);
        Some(x)
    }
}

/// Lexicographically least `x` in `[0, N)^cols` with `a x = b (mod N)`.
pub fn solve_mod_lexmin(a: &ModMatrix, b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(b.len(), a.rows, "shape");
    ModSolver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizer_gives_units() {
        for n in [4u64, 8, 9, 12, 30] {
            for a in 0..n {
                let (g, u) = unit_normalizer(a, n);
                assert_eq!(gcd_u64(u, n), 1);
                assert_eq!(mul_mod(a, u, n), g % n);
            }
        }
    }

    #[test]
    fn snf_mod_twelve() {
        let a = ModMatrix::from_rows(12, &[vec![4, 6], vec![0, 0]]);
        let s = snf_mod(&a);
        assert_eq!(s.diag, vec![2, 12]);
        let d = s.u.mul(&a).mul(&s.v);
        assert_eq!(d.get(0, 0), 2);
        assert_eq!(d.get(0, 1), 0);
        assert_eq!(d.get(1, 1), 0);
        assert_eq!(s.u.mul(&s.u_inv), ModMatrix::identity(12, 2));
    }

    #[test]
    fn howell_of_annihilated_pivot() {
        // span of (2, 1) mod 4 contains (0, 2)
        let h = howell_basis(&[vec![2, 1]], 2, 4);
        assert_eq!(h, vec![vec![2, 1], vec![0, 2]]);
    }
}
