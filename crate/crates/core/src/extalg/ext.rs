use super::{free_resolution, Extension, Resolution};
use crate::error::{Error, Result};
use crate::modcat::{cokernel, kernel, pushout, Cokernel, HomSpace, Kernel, Module, Morphism};
use num_bigint::BigUint;

/// `Ext^i(C, D)` as the cohomology of `Hom(F_•, D)` at spot `i`.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    degree: usize,
    c: Module,
    d: Module,
    resolution: Resolution,
    /// `Hom(F_i, D)`.
    cochains: HomSpace,
    /// Cocycles inside `Hom(F_i, D)`.
    cocycles: Kernel,
    /// Cocycles modulo coboundaries.
    classes: Cokernel,
}

/// A class in an [`ExtGroup`]: canonical coordinates and a representing cocycle.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtElement {
    pub coords: Vec<u64>,
    pub cocycle: Morphism,
}

pub fn ext_group(i: usize, c: &Module, d: &Module) -> Result<ExtGroup> {
    if i < 1 {
        return Err(Error::Precondition("Ext degree must be at least 1".into()));
    }
    if c.ring() != d.ring() {
        return Err(Error::RingMismatch(c.ring().modulus(), d.ring().modulus()));
    }
    let resolution = free_resolution(c, i + 1)?;
    ExtGroup::from_resolution(i, resolution, d)
}

impl ExtGroup {
    /// Ext computed from a given resolution of `C`, which must reach `F_{i+1}`.
    pub fn from_resolution(i: usize, resolution: Resolution, d: &Module) -> Result<ExtGroup> {
        if resolution.depth() < i + 1 {
            return Err(Error::Precondition("resolution is too short".into()));
        }
        let spaces = resolution.hom_spaces(d)?;
        let pre = |k: usize| -> Result<Morphism> {
            // Hom(f_k, D): Hom(F_{k-1}, D) -> Hom(F_k, D)
            let f = resolution.map(k).clone();
            spaces[k - 1].linear_map(&spaces[k], move |g| Ok(vec![g[0].compose(&f)?]))
        };
        let next = pre(i + 1)?;
        let cocycles = kernel(&next);
        let coboundaries = cocycles.factor(&pre(i)?)?;
        let classes = cokernel(&coboundaries);
        Ok(ExtGroup {
            degree: i,
            c: resolution.target().clone(),
            d: d.clone(),
            cochains: spaces[i].clone(),
            resolution,
            cocycles,
            classes,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn left(&self) -> &Module {
        &self.d
    }

    pub fn right(&self) -> &Module {
        &self.c
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    /// The group in invariant-factor form.
    pub fn module(&self) -> &Module {
        &self.classes.module
    }

    pub fn order(&self) -> BigUint {
        self.module().order()
    }

    pub fn order_u64(&self) -> u64 {
        self.module().order_u64().expect("desk-scale group")
    }

    pub fn is_zero(&self) -> bool {
        self.module().is_zero()
    }

    /// Class of a cocycle `F_i -> D`.
    pub fn class_of(&self, cocycle: &Morphism) -> Result<Vec<u64>> {
        let raw = self.cochains.encode(std::slice::from_ref(cocycle))?;
        let z =
            self.cocycles.inclusion.preimage(&raw).ok_or_else(|| Error::Precondition("map is not a cocycle".into()))?;
        Ok(self.classes.projection.apply(&z))
    }

    /// The element with the given coordinates, represented by the
    /// lexicographically least cocycle preimage.
    pub fn element(&self, coords: &[u64]) -> ExtElement {
        let coords = self.module().reduce(coords);
        let z = self.classes.projection.preimage(&coords).expect("projection is epi");
        let raw = self.cocycles.inclusion.apply(&z);
        let cocycle = self.cochains.decode(&raw).remove(0);
        ExtElement { coords, cocycle }
    }

    pub fn element_from_cocycle(&self, cocycle: &Morphism) -> Result<ExtElement> {
        Ok(ExtElement { coords: self.class_of(cocycle)?, cocycle: cocycle.clone() })
    }

    pub fn zero(&self) -> ExtElement {
        self.element(&self.module().zero_element())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.module().add_elements(a, b)
    }

    /// All elements in the canonical order of coordinates.
    pub fn elements(&self) -> Vec<ExtElement> {
        self.module().elements().map(|c| self.element(&c)).collect()
    }
}

/// The class of an `i`-extension: lift `f_0` along the sequence step by step
/// to a ladder `F_k -> E^{k+1}`, then factor `g_{i-1} ∘ f_i` through `D`.
pub fn phi(s: &Extension, group: &ExtGroup) -> Result<ExtElement> {
    let i = s.degree();
    if i != group.degree() || s.right() != group.right() || s.left() != group.left() {
        return Err(Error::Mismatch("extension does not match the Ext group".into()));
    }
    let res = group.resolution();
    let maps = s.maps();
    // g_0: F_0 -> E^1 with β g_0 = f_0
    let mut g = maps[i].lift(res.map(0))?.ok_or_else(|| Error::Precondition("the extension is not exact".into()))?;
    for k in 1..i {
        let want = g.compose(res.map(k))?;
        g = maps[i - k].lift(&want)?.ok_or_else(|| Error::Precondition("the extension is not exact".into()))?;
    }
    let top = g.compose(res.map(i))?;
    let cocycle = maps[0].lift_through_mono(&top)?;
    group.element_from_cocycle(&cocycle)
}

/// An extension representing a class of `Ext^1`: descend the cocycle through
/// the cover `F_1 -> ker f_0` and push out the inclusion `ker f_0 -> F_0`.
pub fn psi(e: &ExtElement, group: &ExtGroup) -> Result<Extension> {
    if group.degree() != 1 {
        return Err(Error::Unsupported("extensions are realized for degree 1 only".into()));
    }
    let res = group.resolution();
    let syz = res.syzygy(0);
    let h = res.cover(0).descend_through_epi(&e.cocycle)?;
    let q = pushout(&syz.inclusion, &h)?;
    let beta = q.factor(res.map(0), &Morphism::zero(group.left(), group.right()))?;
    Extension::short(q.from_right.clone(), beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::Ring;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    #[test]
    fn ext_orders() {
        let z2 = m(4, &[2]);
        assert_eq!(ext_group(1, &z2, &z2).unwrap().order_u64(), 2);
        assert_eq!(ext_group(2, &z2, &z2).unwrap().order_u64(), 2);
        assert!(ext_group(1, &m(4, &[4]), &z2).unwrap().is_zero());
        assert!(ext_group(1, &z2, &m(4, &[4])).unwrap().is_zero());
    }

    #[test]
    fn phi_psi_on_two_by_two() {
        let z2 = m(4, &[2]);
        let g = ext_group(1, &z2, &z2).unwrap();
        let split = Extension::split(&z2, &z2).unwrap();
        assert_eq!(phi(&split, &g).unwrap().coords, vec![0]);
        for e in g.elements() {
            let s = psi(&e, &g).unwrap();
            assert_eq!(phi(&s, &g).unwrap().coords, e.coords);
        }
        let nonzero = g.element(&[1]);
        assert_eq!(psi(&nonzero, &g).unwrap().middle(), &m(4, &[4]));
    }
}
