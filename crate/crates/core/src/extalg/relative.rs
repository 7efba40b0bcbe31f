use super::{ext_group, free_resolution, psi, ExtGroup};
use crate::error::Result;
use crate::modcat::{Kernel, Module, Morphism, Ring, TestClass};

/// The classes of `Ext^1(C, D)` whose realizing extensions are `Hom(F, -)`-exact.
#[derive(Clone, Debug)]
pub struct RelativeSubgroup {
    pub group: ExtGroup,
    /// Coordinates of the member classes, in the group's element order.
    pub members: Vec<Vec<u64>>,
}

impl RelativeSubgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, coords: &[u64]) -> bool {
        self.members.iter().any(|c| c == coords)
    }

    /// Contains zero, closed under addition (hence under negation, the group
    /// being finite).
    pub fn is_subgroup(&self) -> bool {
        let zero = self.group.module().zero_element();
        self.contains(&zero)
            && self.members.iter().all(|a| self.members.iter().all(|b| self.contains(&self.group.add(a, b))))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// Realizes every class of `Ext^1(C, D)` and keeps the left-relative ones.
pub fn relative_ext_subgroup(c: &Module, d: &Module, class: &TestClass) -> Result<RelativeSubgroup> {
    let group = ext_group(1, c, d)?;
    let mut members = Vec::new();
    for e in group.elements() {
        if psi(&e, &group)?.is_left_relative(class) {
            members.push(e.coords);
        }
    }
    Ok(RelativeSubgroup { group, members })
}

/// Members of the class with at most two indecomposable summands.
fn small_members(class: &TestClass) -> Vec<Module> {
    let ind: Vec<u64> = class.indecomposables().iter().map(|m| m.factors()[0]).collect();
    let ring = class.ring();
    let mut out = Vec::new();
    for (a, &p) in ind.iter().enumerate() {
        out.push(Module::from_cyclic_orders(ring, &[p]).expect("divides N"));
        for &q in &ind[a..] {
            out.push(Module::from_cyclic_orders(ring, &[p, q]).expect("divides N"));
        }
    }
    out.extend(class.generators().iter().cloned());
    out.sort_by(|x, y| x.factors().cmp(y.factors()));
    out.dedup();
    out
}

/// Whether every extension between members of the class has its middle in
/// the class. Ends range over the generators and over members with at most
/// two indecomposable summands.
pub fn is_extension_closed(class: &TestClass) -> Result<bool> {
    let pool = small_members(class);
    for a in &pool {
        for b in &pool {
            let g = ext_group(1, a, b)?;
            for e in g.elements() {
                if !class.contains(psi(&e, &g)?.middle()) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A free cover `R^k -> M` with its kernel and the certificate that the
/// kernel is Ext-orthogonal to the free class.
#[derive(Clone, Debug)]
pub struct SpecialPrecover {
    pub cover: Morphism,
    pub kernel: Kernel,
    /// `Ext^1(R, ker)` vanishes.
    pub certified: bool,
}

pub fn special_precover_free(m: &Module) -> Result<SpecialPrecover> {
    let res = free_resolution(m, 1)?;
    let ring: Ring = m.ring();
    let kernel = res.syzygy(0).clone();
    let mut certified = true;
    for g in TestClass::free(ring).generators() {
        certified &= ext_group(1, g, &kernel.module)?.is_zero();
    }
    Ok(SpecialPrecover { cover: res.map(0).clone(), kernel, certified })
}
