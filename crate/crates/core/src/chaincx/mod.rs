//! Bounded chain complexes over `Z/N`.
//!
//! Differentials lower degree: `diff(m)` maps `X_m -> X_{m-1}`. A complex is
//! stored on a finite support `[lo, hi]` and is zero outside it.

mod map;

pub use map::{ChainMap, ChainMapGroup};

use crate::error::{Error, Result};
use crate::modcat::{
    cokernel, dualize, image, kernel, Cokernel, HomSpace, Image, Kernel, Module, Morphism, Ring, TestClass,
};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    modules: Vec<Module>,
    diffs: Vec<Morphism>,
}

impl ChainComplex {
    /// `modules[k]` sits in degree `lo + k`; `diffs[k]` maps degree `lo + k + 1`
    /// to `lo + k`. Checks shapes and `∂∂ = 0`.
    pub fn new(lo: i64, modules: Vec<Module>, diffs: Vec<Morphism>) -> Result<ChainComplex> {
        let ring = modules
            .first()
            .map(Module::ring)
            .ok_or_else(|| Error::Shape("a complex needs at least one degree".into()))?;
        if diffs.len() + 1 != modules.len() {
            return Err(Error::Shape(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.src() != &modules[k + 1] || d.dst() != &modules[k] {
                return Err(Error::Shape(format!(
                    "differential out of degree {} has the wrong source or target",
                    lo + k as i64 + 1
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k - 1].compose(&diffs[k])?.is_zero() {
                return Err(Error::Precondition(format!(
                    "differentials compose to a nonzero map at degree {}",
                    lo + k as i64 + 1
                )));
            }
        }
        if modules.iter().any(|m| m.ring() != ring) {
            return Err(Error::Shape("modules over different rings".into()));
        }
        Ok(ChainComplex { ring, lo, modules, diffs })
    }

    pub fn zero(ring: Ring) -> ChainComplex {
        ChainComplex { ring, lo: 0, modules: vec![Module::zero(ring)], diffs: Vec::new() }
    }

    /// `C` in degrees `m` and `m - 1` joined by the identity.
    pub fn disk(c: &Module, m: i64) -> ChainComplex {
        ChainComplex {
            ring: c.ring(),
            lo: m - 1,
            modules: vec![c.clone(), c.clone()],
            diffs: vec![Morphism::identity(c)],
        }
    }

    /// `C` in degree `m`.
    pub fn sphere(c: &Module, m: i64) -> ChainComplex {
        ChainComplex { ring: c.ring(), lo: m, modules: vec![c.clone()], diffs: Vec::new() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn diffs(&self) -> &[Morphism] {
        &self.diffs
    }

    pub fn component(&self, m: i64) -> Module {
        if (self.lo..=self.hi()).contains(&m) {
            self.modules[(m - self.lo) as usize].clone()
        } else {
            Module::zero(self.ring)
        }
    }

    /// `∂_m: X_m -> X_{m-1}`; the zero map outside the support.
    pub fn diff(&self, m: i64) -> Morphism {
        if m > self.lo && m <= self.hi() {
            self.diffs[(m - self.lo - 1) as usize].clone()
        } else {
            Morphism::zero(&self.component(m), &self.component(m - 1))
        }
    }

    /// The same complex on a larger support `[lo, hi]`, padded with zeros.
    pub fn widen(&self, lo: i64, hi: i64) -> ChainComplex {
        let (lo, hi) = (lo.min(self.lo), hi.max(self.hi()));
        let modules = (lo..=hi).map(|m| self.component(m)).collect();
        let diffs = (lo + 1..=hi).map(|m| self.diff(m)).collect();
        ChainComplex { ring: self.ring, lo, modules, diffs }
    }

    /// Drops zero modules at both ends.
    pub fn trimmed(&self) -> ChainComplex {
        let nz: Vec<i64> = self.degrees().filter(|&m| !self.component(m).is_zero()).collect();
        match (nz.first(), nz.last()) {
            (Some(&lo), Some(&hi)) => {
                let modules = (lo..=hi).map(|m| self.component(m)).collect();
                let diffs = (lo + 1..=hi).map(|m| self.diff(m)).collect();
                ChainComplex { ring: self.ring, lo, modules, diffs }
            }
            _ => ChainComplex::zero(self.ring),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(Module::is_zero)
    }

    /// `Z_m = ker ∂_m`.
    pub fn cycles(&self, m: i64) -> Kernel {
        kernel(&self.diff(m))
    }

    /// `B_m = im ∂_{m+1}`.
    pub fn boundaries(&self, m: i64) -> Image {
        image(&self.diff(m + 1))
    }

    /// `Q_m = X_m / B_m`.
    pub fn quotient(&self, m: i64) -> Cokernel {
        cokernel(&self.diff(m + 1))
    }

    /// `H_m = Z_m / B_m`.
    pub fn homology(&self, m: i64) -> Module {
        let z = self.cycles(m);
        let into_cycles = z.factor(&self.diff(m + 1)).expect("∂∂ = 0");
        cokernel(&into_cycles).module
    }

    pub fn is_exact(&self) -> bool {
        self.degrees().all(|m| self.homology(m).is_zero())
    }

    /// The complex of groups `Hom(T, X)`.
    pub fn hom_from(&self, t: &Module) -> Result<ChainComplex> {
        let spaces: Vec<HomSpace> =
            self.degrees().map(|m| HomSpace::new(vec![(t.clone(), self.component(m))])).collect::<Result<_>>()?;
        let mut diffs = Vec::new();
        for m in self.lo + 1..=self.hi() {
            let k = (m - self.lo) as usize;
            let d = self.diff(m);
            diffs.push(spaces[k].linear_map(&spaces[k - 1], |x| Ok(vec![d.compose(&x[0])?]))?);
        }
        let modules = spaces.iter().map(|s| s.module().clone()).collect();
        ChainComplex::new(self.lo, modules, diffs)
    }

    /// Exactness of `Hom(T, X)` for every indecomposable `T` of the class.
    pub fn is_hom_exact_from(&self, class: &TestClass) -> Result<bool> {
        for t in class.indecomposables() {
            if !self.hom_from(&t)?.is_exact() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Hom(-, Z/N)` applied degreewise: `D(X_m)` sits in degree `-m`.
    pub fn dual(&self) -> ChainComplex {
        let hi = self.hi();
        let modules = (self.lo..=hi).rev().map(|m| self.component(m)).collect();
        let diffs = (self.lo + 1..=hi).rev().map(|m| dualize(&self.diff(m))).collect();
        ChainComplex { ring: self.ring, lo: -hi, modules, diffs }
    }

    pub fn is_contractible(&self) -> bool {
        let id = ChainMap::identity(self);
        id.is_homotopic_to_zero()
    }
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.degrees().rev() {
            if m != self.hi() {
                write!(f, " -> ")?;
            }
            write!(f, "[{m}] {}", self.component(m))?;
        }
        Ok(())
    }
}

/// The three complex classes attached to a module class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ComplexClassKind {
    /// Every component lies in the class.
    DegreewiseF,
    /// Exact with every cycle module in the class.
    FComplex,
    /// Components in the class and every map into a complex from the right
    /// orthogonal is nullhomotopic.
    DgF,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Membership {
    Yes,
    No,
    /// Only decided where the degreewise and dg classes are known to agree.
    Undecidable,
}

impl From<bool> for Membership {
    fn from(b: bool) -> Membership {
        if b {
            Membership::Yes
        } else {
            Membership::No
        }
    }
}

/// Class membership of a complex. The dg class is decided only for the
/// Gorenstein-projective class, which over `Z/N` is every module; there the
/// dg and degreewise classes coincide.
pub fn class_membership(x: &ChainComplex, kind: ComplexClassKind, class: &TestClass) -> Membership {
    let dw = x.degrees().all(|m| class.contains(&x.component(m)));
    match kind {
        ComplexClassKind::DegreewiseF => dw.into(),
        ComplexClassKind::FComplex => (x.is_exact() && x.degrees().all(|m| class.contains(&x.cycles(m).module))).into(),
        ComplexClassKind::DgF if class.contains_all_modules() => dw.into(),
        ComplexClassKind::DgF => Membership::Undecidable,
    }
}
