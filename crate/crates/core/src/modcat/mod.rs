//! Finitely generated modules over `Z/N` and their morphisms.
//!
//! A [`Module`] is stored in invariant-factor form `Z/d1 + ... + Z/dk` with
//! `d1 | d2 | ... | dk | N`, so equality of values is isomorphism of modules.
//! A [`Morphism`] is a matrix whose `(i, j)` entry is the image of the `j`-th
//! generator in the `i`-th coordinate of the target.

mod class;
mod construct;
mod hom;

pub use class::TestClass;
pub(crate) use construct::quotient_canonical;
pub use construct::{
    biproduct, biproduct_of, cokernel, dual_module, dualize, image, kernel, pullback, pushout, Biproduct, Cokernel,
    Image, Kernel, Pullback, Pushout,
};
pub use hom::{hom_group, HomGroup, HomSpace};

use crate::error::{Error, Result};
use crate::exactlin::{gcd_u64, mul_mod, ModMatrix, ModSolver};
use num_bigint::BigUint;
use num_traits::One;
use std::fmt;
use std::sync::OnceLock;

/// The ring `Z/N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Ring {
    n: u64,
}

impl Ring {
    pub fn new(n: u64) -> Result<Ring> {
        if n < 2 {
            return Err(Error::Malformed(format!("ring modulus {n} must be at least 2")));
        }
        if n > u32::MAX as u64 {
            return Err(Error::Malformed(format!("ring modulus {n} is too large")));
        }
        Ok(Ring { n })
    }

    pub fn modulus(self) -> u64 {
        self.n
    }

    /// The prime powers `p^a` exactly dividing `N`.
    pub fn prime_power_blocks(self) -> Vec<u64> {
        prime_power_parts(self.n)
    }

    /// Orders of the indecomposable modules: every `p^b` with `p^b | N`, `b >= 1`.
    pub fn indecomposable_orders(self) -> Vec<u64> {
        let mut out = Vec::new();
        for q in self.prime_power_blocks() {
            let p = smallest_prime_factor(q);
            let mut x = p;
            while q % x == 0 {
                out.push(x);
                x *= p;
            }
        }
        out.sort_unstable();
        out
    }

    /// All modules of this ring with order at most `bound`, in a fixed order.
    pub fn modules_up_to(self, bound: u64) -> Vec<Module> {
        let orders = self.indecomposable_orders();
        let mut out = Vec::new();
        // multisets of indecomposable orders, as nondecreasing index sequences
        fn rec(orders: &[u64], start: usize, acc: &mut Vec<u64>, size: u64, bound: u64, out: &mut Vec<Vec<u64>>) {
            out.push(acc.clone());
            for k in start..orders.len() {
                if size * orders[k] <= bound {
                    acc.push(orders[k]);
                    rec(orders, k, acc, size * orders[k], bound, out);
                    acc.pop();
                }
            }
        }
        let mut parts = Vec::new();
        rec(&orders, 0, &mut Vec::new(), 1, bound, &mut parts);
        for p in parts {
            out.push(Module::from_cyclic_orders(self, &p).expect("orders divide N"));
        }
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.factors.cmp(&b.factors)));
        out.dedup();
        out
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.n)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

/// Splits `d` into its maximal prime-power divisors, in increasing prime order.
pub(crate) fn prime_power_parts(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while d > 1 {
        if p * p > d {
            out.push(d);
            break;
        }
        if d.is_multiple_of(p) {
            let mut q = 1;
            while d.is_multiple_of(p) {
                d /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    out
}

/// A finitely generated `Z/N`-module in invariant-factor form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Module {
    ring: Ring,
    factors: Vec<u64>,
}

impl Module {
    /// Validates an invariant-factor list: each factor exceeds 1, divides `N`,
    /// and divides the next one.
    pub fn new(ring: Ring, factors: Vec<u64>) -> Result<Module> {
        for (k, &d) in factors.iter().enumerate() {
            if d <= 1 {
                return Err(Error::InvalidModule(format!("factor {d} at position {k} must exceed 1")));
            }
            if !ring.n.is_multiple_of(d) {
                return Err(Error::InvalidModule(format!("factor {d} does not divide {}", ring.n)));
            }
            if k > 0 && d % factors[k - 1] != 0 {
                return Err(Error::InvalidModule(format!(
                    "factors {} and {d} do not form a divisibility chain",
                    factors[k - 1]
                )));
            }
        }
        Ok(Module { ring, factors })
    }

    /// Canonical form of `Z/o1 + ... + Z/ok` for arbitrary divisors `oi` of `N`
    /// (units allowed), computed from the primary decomposition.
    pub fn from_cyclic_orders(ring: Ring, orders: &[u64]) -> Result<Module> {
        let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
        for &o in orders {
            if o == 0 || !ring.n.is_multiple_of(o) {
                return Err(Error::InvalidModule(format!("order {o} does not divide {}", ring.n)));
            }
            for q in prime_power_parts(o) {
                let p = smallest_prime_factor(q);
                match by_prime.iter_mut().find(|(pp, _)| *pp == p) {
                    Some((_, v)) => v.push(q),
                    None => by_prime.push((p, vec![q])),
                }
            }
        }
        let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (_, mut v) in by_prime {
            v.sort_unstable();
            let off = len - v.len();
            for (k, q) in v.into_iter().enumerate() {
                factors[off + k] *= q;
            }
        }
        Module::new(ring, factors)
    }

    pub fn zero(ring: Ring) -> Module {
        Module { ring, factors: Vec::new() }
    }

    pub fn cyclic(ring: Ring, d: u64) -> Result<Module> {
        if d == 1 {
            return Ok(Module::zero(ring));
        }
        Module::new(ring, vec![d])
    }

    /// `R^k`.
    pub fn free(ring: Ring, k: usize) -> Module {
        Module { ring, factors: vec![ring.n; k] }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of invariant factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.factors.iter().all(|&d| d == self.ring.n)
    }

    /// Projective over `Z/N`: every primary part is a full block `Z/p^a`, `p^a || N`.
    pub fn is_projective(&self) -> bool {
        let blocks = self.ring.prime_power_blocks();
        self.indecomposable_orders().iter().all(|q| blocks.contains(q))
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &d| acc * d)
    }

    /// Order as a machine integer when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    /// Orders `p^b` of the indecomposable summands, sorted.
    pub fn indecomposable_orders(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.factors.iter().flat_map(|&d| prime_power_parts(d)).collect();
        v.sort_unstable();
        v
    }

    pub fn zero_element(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    /// Unit vector for the `j`-th generator.
    pub fn generator(&self, j: usize) -> Vec<u64> {
        let mut v = self.zero_element();
        v[j] = 1 % self.factors[j];
        v
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        v.iter().zip(&self.factors).map(|(&x, &d)| x % d).collect()
    }

    pub fn add_elements(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((&x, &y), &d)| (x + y) % d).collect()
    }

    pub fn neg_element(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| (d - x % d) % d).collect()
    }

    pub fn scale_element(&self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| mul_mod(c, x, d)).collect()
    }

    /// Iterates over all elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Elements {
        Elements { factors: self.factors.clone(), next: Some(self.zero_element()) }
    }

    /// The element obtained from `index` in mixed radix (last coordinate fastest).
    pub fn element_at(&self, mut index: u64) -> Vec<u64> {
        let mut v = self.zero_element();
        for k in (0..self.rank()).rev() {
            v[k] = index % self.factors[k];
            index /= self.factors[k];
        }
        v
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (k, d) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

/// Iterator over the elements of a module.
pub struct Elements {
    factors: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for Elements {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.factors[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(cur)
    }
}

/// A homomorphism between modules in invariant-factor form.
#[derive(Clone, Debug)]
pub struct Morphism {
    src: Module,
    dst: Module,
    matrix: Vec<Vec<u64>>,
    solver: OnceLock<ModSolver>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.dst == other.dst && self.matrix == other.matrix
    }
}

impl Eq for Morphism {}

impl std::hash::Hash for Morphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.src.hash(state);
        self.dst.hash(state);
        self.matrix.hash(state);
    }
}

pub(crate) fn check_ring(a: &Module, b: &Module) -> Result<()> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(a.ring.n, b.ring.n));
    }
    Ok(())
}

impl Morphism {
    /// Builds a morphism from a `dst.rank() x src.rank()` matrix. Entries are
    /// reduced modulo the target factors and the well-definedness congruences
    /// `d_j * a_ij = 0 (mod e_i)` are checked.
    pub fn new(src: Module, dst: Module, matrix: Vec<Vec<u64>>) -> Result<Morphism> {
        check_ring(&src, &dst)?;
        if matrix.len() != dst.rank() {
            return Err(Error::Shape(format!(
                "matrix has {} rows but the target has {} generators",
                matrix.len(),
                dst.rank()
            )));
        }
        let mut matrix = matrix;
        for (i, row) in matrix.iter_mut().enumerate() {
            if row.len() != src.rank() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries but the source has {} generators",
                    row.len(),
                    src.rank()
                )));
            }
            let e = dst.factors[i];
            for (j, a) in row.iter_mut().enumerate() {
                *a %= e;
                if mul_mod(src.factors[j], *a, e) != 0 {
                    return Err(Error::NotWellDefined(format!(
                        "entry ({i},{j}) = {a}: Z/{} cannot map its generator to order-{} element of Z/{e}",
                        src.factors[j],
                        e / gcd_u64(*a, e)
                    )));
                }
            }
        }
        Ok(Morphism { src, dst, matrix, solver: OnceLock::new() })
    }

    /// Builds from the images of the source generators.
    pub fn from_columns(src: Module, dst: Module, columns: &[Vec<u64>]) -> Result<Morphism> {
        if columns.len() != src.rank() || columns.iter().any(|c| c.len() != dst.rank()) {
            return Err(Error::Shape("column images do not match the modules".into()));
        }
        let matrix = (0..dst.rank()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        Morphism::new(src, dst, matrix)
    }

    pub fn zero(src: &Module, dst: &Module) -> Morphism {
        let matrix = vec![vec![0; src.rank()]; dst.rank()];
        Morphism { src: src.clone(), dst: dst.clone(), matrix, solver: OnceLock::new() }
    }

    pub fn identity(m: &Module) -> Morphism {
        let k = m.rank();
        let matrix = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
        Morphism { src: m.clone(), dst: m.clone(), matrix, solver: OnceLock::new() }
    }

    /// Multiplication by `c`.
    pub fn scalar(m: &Module, c: u64) -> Morphism {
        let k = m.rank();
        let matrix = (0..k).map(|i| (0..k).map(|j| if i == j { c % m.factors[i] } else { 0 }).collect()).collect();
        Morphism { src: m.clone(), dst: m.clone(), matrix, solver: OnceLock::new() }
    }

    pub fn src(&self) -> &Module {
        &self.src
    }

    pub fn dst(&self) -> &Module {
        &self.dst
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.matrix[i][j]
    }

    /// Image of the `j`-th generator.
    pub fn column(&self, j: usize) -> Vec<u64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        debug_assert_eq!(x.len(), self.src.rank());
        self.matrix
            .iter()
            .zip(&self.dst.factors)
            .map(|(row, &e)| {
                (row.iter().zip(x).fold(0u128, |acc, (&a, &b)| acc + a as u128 * b as u128) % e as u128) as u64
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.dst != self.src {
            return Err(Error::Mismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.src, self.dst, inner.src, inner.dst
            )));
        }
        let columns: Vec<Vec<u64>> = (0..inner.src.rank()).map(|j| self.apply(&inner.column(j))).collect();
        let matrix = (0..self.dst.rank()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        Ok(Morphism { src: inner.src.clone(), dst: self.dst.clone(), matrix, solver: OnceLock::new() })
    }

    fn same_shape(&self, other: &Morphism) -> Result<()> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Mismatch(format!(
                "cannot add {} -> {} and {} -> {}",
                self.src, self.dst, other.src, other.dst
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.same_shape(other)?;
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .zip(&self.dst.factors)
            .map(|((r, s), &e)| r.iter().zip(s).map(|(&a, &b)| (a + b) % e).collect())
            .collect();
        Ok(Morphism { src: self.src.clone(), dst: self.dst.clone(), matrix, solver: OnceLock::new() })
    }

    pub fn neg(&self) -> Morphism {
        let matrix =
            self.matrix.iter().zip(&self.dst.factors).map(|(r, &e)| r.iter().map(|&a| (e - a) % e).collect()).collect();
        Morphism { src: self.src.clone(), dst: self.dst.clone(), matrix, solver: OnceLock::new() }
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Morphism {
        let matrix = self
            .matrix
            .iter()
            .zip(&self.dst.factors)
            .map(|(r, &e)| r.iter().map(|&a| mul_mod(c, a, e)).collect())
            .collect();
        Morphism { src: self.src.clone(), dst: self.dst.clone(), matrix, solver: OnceLock::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&a| a == 0)
    }

    pub fn is_mono(&self) -> bool {
        kernel(self).module.is_zero()
    }

    pub fn is_epi(&self) -> bool {
        cokernel(self).module.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// The matrix `[A | diag(e)]` over `Z/N` whose solutions describe preimages.
    fn lifted_system(&self) -> ModMatrix {
        let n = self.src.ring.n;
        let (k, l) = (self.src.rank(), self.dst.rank());
        let mut m = ModMatrix::zeros(n, l, k + l);
        for i in 0..l {
            for j in 0..k {
                m.set(i, j, self.matrix[i][j]);
            }
            m.set(i, k + i, self.dst.factors[i]);
        }
        m
    }

    fn solver(&self) -> &ModSolver {
        self.solver.get_or_init(|| ModSolver::new(&self.lifted_system()))
    }

    /// The lexicographically least `x` with `self(x) = y`, if one exists.
    pub fn preimage(&self, y: &[u64]) -> Option<Vec<u64>> {
        let y = self.dst.reduce(y);
        let x = self.solver().solve(&y)?;
        Some(self.src.reduce(&x[..self.src.rank()]))
    }

    /// Whether `y` lies in the image.
    pub fn hits(&self, y: &[u64]) -> bool {
        self.preimage(y).is_some()
    }

    /// Given `self` mono and `g` with image inside the image of `self`,
    /// the unique `u` with `self ∘ u = g`.
    pub fn lift_through_mono(&self, g: &Morphism) -> Result<Morphism> {
        if g.dst != self.dst {
            return Err(Error::Mismatch("lift target differs from the mono's target".into()));
        }
        let mut columns = Vec::with_capacity(g.src.rank());
        for j in 0..g.src.rank() {
            let y = g.column(j);
            let x = self
                .preimage(&y)
                .ok_or_else(|| Error::Precondition(format!("generator {j} is not mapped into the image")))?;
            columns.push(x);
        }
        let u = Morphism::from_columns(g.src.clone(), self.src.clone(), &columns)?;
        Ok(u)
    }

    /// Lexicographically least `u` with `self ∘ u = g`, if any. Unlike
    /// [`Morphism::lift_through_mono`] this does not require `self` to be mono;
    /// the lift is searched in the whole Hom group so it is always well-defined.
    pub fn lift(&self, g: &Morphism) -> Result<Option<Morphism>> {
        if g.dst != self.dst {
            return Err(Error::Mismatch("lift target differs from the map's target".into()));
        }
        let unknowns = HomSpace::new(vec![(g.src.clone(), self.src.clone())])?;
        let target = HomSpace::new(vec![(g.src.clone(), self.dst.clone())])?;
        let post = unknowns.linear_map(&target, |x| Ok(vec![self.compose(&x[0])?]))?;
        let rhs = target.encode(std::slice::from_ref(g))?;
        Ok(post.preimage(&rhs).map(|c| unknowns.decode(&c).remove(0)))
    }

    /// Given `self` epi and `g` vanishing on its kernel, the unique `u` with
    /// `u ∘ self = g`.
    pub fn descend_through_epi(&self, g: &Morphism) -> Result<Morphism> {
        if g.src != self.src {
            return Err(Error::Mismatch("map to descend has a different source".into()));
        }
        let mut columns = Vec::with_capacity(self.dst.rank());
        for i in 0..self.dst.rank() {
            let x = self
                .preimage(&self.dst.generator(i))
                .ok_or_else(|| Error::Precondition("map to descend through is not epi".into()))?;
            columns.push(g.apply(&x));
        }
        let u = Morphism::from_columns(self.dst.clone(), g.dst.clone(), &columns)
            .map_err(|_| Error::Precondition("map does not vanish on the kernel".into()))?;
        if u.compose(self)? != *g {
            return Err(Error::Precondition("map does not vanish on the kernel".into()));
        }
        Ok(u)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.src, self.dst, self.matrix)
    }
}

/// `g ∘ f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    g.compose(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    #[test]
    fn module_validation() {
        assert!(Module::new(r(4), vec![2, 4]).is_ok());
        assert!(Module::new(r(4), vec![4, 2]).is_err());
        assert!(Module::new(r(4), vec![3]).is_err());
        assert!(Module::new(r(4), vec![1]).is_err());
        assert!(Module::new(r(12), vec![2, 6]).is_ok());
    }

    #[test]
    fn canonical_from_orders() {
        let m = Module::from_cyclic_orders(r(12), &[2, 3, 4, 1]).unwrap();
        assert_eq!(m.factors(), &[2, 12]);
        let m = Module::from_cyclic_orders(r(12), &[6, 2]).unwrap();
        assert_eq!(m.factors(), &[2, 6]);
    }

    #[test]
    fn compose_scalars() {
        let z4 = Module::cyclic(r(4), 4).unwrap();
        let two = Morphism::scalar(&z4, 2);
        assert!(two.compose(&two).unwrap().is_zero());
        let f = Morphism::new(z4.clone(), z4.clone(), vec![vec![3]]).unwrap();
        assert_eq!(Morphism::identity(&z4).compose(&f).unwrap(), f);
    }

    #[test]
    fn well_definedness_is_enforced() {
        let z4 = Module::cyclic(r(8), 4).unwrap();
        let z8 = Module::cyclic(r(8), 8).unwrap();
        assert!(Morphism::new(z4.clone(), z8.clone(), vec![vec![1]]).is_err());
        assert!(Morphism::new(z4, z8, vec![vec![2]]).is_ok());
    }

    #[test]
    fn elements_enumerate_everything() {
        let m = Module::new(r(4), vec![2, 4]).unwrap();
        let all: Vec<_> = m.elements().collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[5], m.element_at(5));
    }

    #[test]
    fn small_module_lists() {
        let mods = r(4).modules_up_to(4);
        let fs: Vec<_> = mods.iter().map(|m| m.factors().to_vec()).collect();
        assert_eq!(fs, vec![vec![], vec![2], vec![2, 2], vec![4]]);
    }
}
