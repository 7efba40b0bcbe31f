//! Extensions of modules and of complexes, Baer sums, Ext groups via free
//! resolutions, and the subgroups of extensions that stay exact under
//! `Hom(F, -)` for a test class `F`.

mod complex;
mod ext;
pub mod oracle;
mod relative;
mod resolution;

pub use complex::{ComplexExtension, TestFamily};
pub use ext::{ext_group, phi, psi, ExtElement, ExtGroup};
pub use relative::{
    is_extension_closed, relative_ext_subgroup, special_precover_free, RelativeSubgroup, SpecialPrecover,
};
pub use resolution::{free_resolution, Resolution};

use crate::chaincx::ChainComplex;
use crate::error::{Error, Result};
use crate::modcat::{biproduct, biproduct_of, dualize, pullback, pushout, HomSpace, Module, Morphism, TestClass};
use std::fmt;

/// An exact sequence `0 -> D -> E^i -> ... -> E^1 -> C -> 0`.
///
/// `maps[0]` is `D -> E^i` and `maps[i]` is `E^1 -> C`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Extension {
    maps: Vec<Morphism>,
}

impl Extension {
    /// Checks composability and exactness at every spot.
    pub fn new(maps: Vec<Morphism>) -> Result<Extension> {
        if maps.len() < 2 {
            return Err(Error::Shape("an extension needs at least two maps".into()));
        }
        for k in 1..maps.len() {
            if maps[k].src() != maps[k - 1].dst() {
                return Err(Error::Shape(format!("maps {} and {k} do not compose", k - 1)));
            }
        }
        let e = Extension { maps };
        if !e.is_exact() {
            return Err(Error::Precondition("the sequence is not exact".into()));
        }
        Ok(e)
    }

    /// A short exact sequence `0 -> D -> E -> C -> 0`.
    pub fn short(alpha: Morphism, beta: Morphism) -> Result<Extension> {
        Extension::new(vec![alpha, beta])
    }

    /// `0 -> D -> D + C -> C -> 0`.
    pub fn split(c: &Module, d: &Module) -> Result<Extension> {
        let b = biproduct(d, c)?;
        Extension::short(b.injections[0].clone(), b.projections[1].clone())
    }

    fn is_exact(&self) -> bool {
        let k = self.maps.len();
        if !self.maps[0].is_mono() || !self.maps[k - 1].is_epi() {
            return false;
        }
        (1..k).all(|j| {
            let (f, g) = (&self.maps[j - 1], &self.maps[j]);
            match g.compose(f) {
                Ok(c) if c.is_zero() => {}
                _ => return false,
            }
            // |ker g| = |im f| once g f = 0
            let ker = crate::modcat::kernel(g).module.order();
            let im = crate::modcat::image(f).module.order();
            ker == im
        })
    }

    pub fn degree(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn maps(&self) -> &[Morphism] {
        &self.maps
    }

    /// The left end `D`.
    pub fn left(&self) -> &Module {
        self.maps[0].src()
    }

    /// The right end `C`.
    pub fn right(&self) -> &Module {
        self.maps[self.maps.len() - 1].dst()
    }

    /// `E^k` for `1 <= k <= degree`.
    pub fn middle_at(&self, k: usize) -> &Module {
        self.maps[self.maps.len() - k].src()
    }

    /// The middle of a short exact sequence.
    pub fn middle(&self) -> &Module {
        self.middle_at(1)
    }

    pub fn alpha(&self) -> &Morphism {
        &self.maps[0]
    }

    pub fn beta(&self) -> &Morphism {
        &self.maps[self.maps.len() - 1]
    }

    fn require_short(&self, what: &str) -> Result<()> {
        if self.degree() != 1 {
            return Err(Error::Unsupported(format!("{what} is implemented for 1-extensions")));
        }
        Ok(())
    }

    /// Whether `β` has a section.
    pub fn is_split(&self) -> bool {
        self.degree() == 1 && matches!(self.beta().lift(&Morphism::identity(self.right())), Ok(Some(_)))
    }

    /// The sequence as a complex with `C` in degree 0 and `D` in degree `i + 1`.
    pub fn to_complex(&self) -> ChainComplex {
        let mut modules = vec![self.right().clone()];
        let mut diffs = Vec::new();
        for f in self.maps.iter().rev() {
            modules.push(f.src().clone());
            diffs.push(f.clone());
        }
        ChainComplex::new(0, modules, diffs).expect("an exact sequence is a complex")
    }

    /// `Hom(T, -)` keeps the sequence exact for every `T` in the class.
    pub fn is_left_relative(&self, class: &TestClass) -> bool {
        self.to_complex().is_hom_exact_from(class).expect("same ring")
    }

    /// `Hom(-, G)` keeps the sequence exact for every `G` in the class; decided
    /// on the dual sequence, since `Hom(-, Z/N)` is exact and `D(Z/d) = Z/d`.
    pub fn is_right_relative(&self, class: &TestClass) -> bool {
        self.dual().is_left_relative(class)
    }

    /// `Hom(-, Z/N)` applied to the sequence.
    pub fn dual(&self) -> Extension {
        Extension { maps: self.maps.iter().rev().map(dualize).collect() }
    }

    /// Whether a ladder `E^k -> Ê^k` exists that is the identity on both ends.
    pub fn is_related(&self, other: &Extension) -> Result<bool> {
        if self.degree() != other.degree() || self.left() != other.left() || self.right() != other.right() {
            return Err(Error::Mismatch("extensions have different degrees or ends".into()));
        }
        let i = self.degree();
        // unknowns u_k: E^k -> Ê^k, stored with maps index: slot j is the
        // target of maps[j] for j = 0..i
        let unknowns =
            HomSpace::new((0..i).map(|j| (self.maps[j].dst().clone(), other.maps[j].dst().clone())).collect())?;
        // one equation per map: u_{j} maps[j] - other.maps[j] u_{j-1} with
        // identities at the ends
        let eq_pairs: Vec<(Module, Module)> =
            (0..=i).map(|j| (self.maps[j].src().clone(), other.maps[j].dst().clone())).collect();
        let equations = HomSpace::new(eq_pairs)?;
        let sys = unknowns.linear_map(&equations, |u| {
            let mut out = Vec::with_capacity(i + 1);
            for j in 0..=i {
                let left = if j < i {
                    u[j].compose(&self.maps[j])?
                } else {
                    Morphism::zero(self.maps[j].src(), other.maps[j].dst())
                };
                let right = if j > 0 {
                    other.maps[j].compose(&u[j - 1])?
                } else {
                    Morphism::zero(self.maps[j].src(), other.maps[j].dst())
                };
                out.push(left.sub(&right)?);
            }
            Ok(out)
        })?;
        // u_0 α = α̂ and β̂ u_{i-1} = β
        let mut rhs = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let m = if j == 0 {
                other.maps[0].clone()
            } else if j == i {
                self.maps[i].neg()
            } else {
                Morphism::zero(self.maps[j].src(), other.maps[j].dst())
            };
            rhs.push(m);
        }
        let target = equations.encode(&rhs)?;
        Ok(sys.hits(&target))
    }

    /// Pushout along `g: D -> D'`.
    pub fn pushout_along(&self, g: &Morphism) -> Result<Extension> {
        self.require_short("pushout along a map")?;
        let q = pushout(self.alpha(), g)?;
        let beta = q.factor(self.beta(), &Morphism::zero(g.dst(), self.right()))?;
        Extension::short(q.from_right.clone(), beta)
    }

    /// Pullback along `h: C' -> C`.
    pub fn pullback_along(&self, h: &Morphism) -> Result<Extension> {
        self.require_short("pullback along a map")?;
        let p = pullback(self.beta(), h)?;
        let alpha = p.factor(self.alpha(), &Morphism::zero(self.left(), h.src()))?;
        Extension::short(alpha, p.to_right.clone())
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0 -> {}", self.left())?;
        for m in &self.maps {
            write!(f, " -> {}", m.dst())?;
        }
        write!(f, " -> 0")
    }
}

/// The Baer sum: direct sum, pullback along the diagonal of `C`, pushout along
/// the codiagonal of `D`.
pub fn baer_sum(s1: &Extension, s2: &Extension) -> Result<Extension> {
    s1.require_short("the Baer sum")?;
    s2.require_short("the Baer sum")?;
    if s1.left() != s2.left() || s1.right() != s2.right() {
        return Err(Error::Mismatch("Baer sum of extensions with different ends".into()));
    }
    let (c, d) = (s1.right().clone(), s1.left().clone());
    let ee = biproduct(s1.middle(), s2.middle())?;
    let cc = biproduct_of(&[c.clone(), c.clone()])?;
    let dd = biproduct_of(&[d.clone(), d.clone()])?;
    // β1 + β2 and α1 + α2
    let beta_sum = cc.pair_into(&[s1.beta().compose(&ee.projections[0])?, s2.beta().compose(&ee.projections[1])?])?;
    let alpha_sum =
        ee.pair_into(&[s1.alpha().compose(&dd.projections[0])?, s2.alpha().compose(&dd.projections[1])?])?;
    let diagonal = cc.pair_into(&[Morphism::identity(&c), Morphism::identity(&c)])?;
    let codiagonal = dd.copair_from(&[Morphism::identity(&d), Morphism::identity(&d)])?;
    // step 2: pullback along the diagonal
    let p = pullback(&beta_sum, &diagonal)?;
    let alpha_p = p.factor(&alpha_sum, &Morphism::zero(&dd.module, &c))?;
    // step 3: pushout along the codiagonal
    let q = pushout(&alpha_p, &codiagonal)?;
    let beta = q.factor(&p.to_right, &Morphism::zero(&d, &c))?;
    Extension::short(q.from_right.clone(), beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::Ring;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    fn nonsplit() -> Extension {
        let z2 = m(4, &[2]);
        let z4 = m(4, &[4]);
        Extension::short(
            Morphism::new(z2.clone(), z4.clone(), vec![vec![2]]).unwrap(),
            Morphism::new(z4, z2, vec![vec![1]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn split_and_nonsplit() {
        let z2 = m(4, &[2]);
        let s = Extension::split(&z2, &z2).unwrap();
        assert!(s.is_split());
        assert!(!nonsplit().is_split());
        assert!(!s.is_related(&nonsplit()).unwrap());
        assert!(s.is_related(&s).unwrap());
        assert!(nonsplit().is_related(&nonsplit()).unwrap());
    }

    #[test]
    fn split_presentations_are_related() {
        let z2 = m(4, &[2]);
        let e = m(4, &[2, 2]);
        let a = Morphism::new(z2.clone(), e.clone(), vec![vec![1], vec![0]]).unwrap();
        let b = Morphism::new(e.clone(), z2.clone(), vec![vec![0, 1]]).unwrap();
        let a2 = Morphism::new(z2.clone(), e.clone(), vec![vec![1], vec![1]]).unwrap();
        let b2 = Morphism::new(e, z2, vec![vec![1, 1]]).unwrap();
        let s1 = Extension::short(a, b).unwrap();
        let s2 = Extension::short(a2, b2).unwrap();
        assert!(s1.is_related(&s2).unwrap());
    }

    #[test]
    fn non_exact_rejected() {
        let z4 = m(4, &[4]);
        let two = Morphism::scalar(&z4, 2);
        assert!(Extension::short(two.clone(), two).is_err());
    }

    #[test]
    fn baer_sums() {
        let z2 = m(4, &[2]);
        let split = Extension::split(&z2, &z2).unwrap();
        let s = nonsplit();
        assert!(baer_sum(&s, &s).unwrap().is_split());
        assert!(baer_sum(&split, &split).unwrap().is_split());
        assert!(baer_sum(&s, &split).unwrap().is_related(&s).unwrap());
    }

    #[test]
    fn relativity() {
        let ring = Ring::new(4).unwrap();
        let z2 = m(4, &[2]);
        let s = nonsplit();
        assert!(!s.is_left_relative(&TestClass::new(ring, vec![z2.clone()]).unwrap()));
        assert!(s.is_left_relative(&TestClass::free(ring)));
        assert!(Extension::split(&z2, &z2).unwrap().is_left_relative(&TestClass::all(ring)));
        assert!(!s.is_right_relative(&TestClass::new(ring, vec![z2]).unwrap()));
        assert!(s.is_right_relative(&TestClass::free(ring)));
    }
}
