use super::{Module, Ring};
use crate::error::{Error, Result};
use std::fmt;

/// The additive closure of a finite list of modules.
///
/// By Krull-Schmidt a module belongs to the closure exactly when each of its
/// indecomposable summands `Z/p^b` is a summand of some generator. The zero
/// module is always a member.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TestClass {
    ring: Ring,
    generators: Vec<Module>,
    blocks: Vec<u64>,
}

impl TestClass {
    pub fn new(ring: Ring, generators: Vec<Module>) -> Result<TestClass> {
        if let Some(g) = generators.iter().find(|g| g.ring() != ring) {
            return Err(Error::RingMismatch(g.ring().modulus(), ring.modulus()));
        }
        let mut blocks: Vec<u64> = generators.iter().flat_map(|g| g.indecomposable_orders()).collect();
        blocks.sort_unstable();
        blocks.dedup();
        Ok(TestClass { ring, generators, blocks })
    }

    /// Projective modules, generated by `R` itself.
    pub fn free(ring: Ring) -> TestClass {
        TestClass::new(ring, vec![Module::free(ring, 1)]).expect("same ring")
    }

    /// Every module, generated by all indecomposables.
    pub fn all(ring: Ring) -> TestClass {
        let gens = ring
            .indecomposable_orders()
            .into_iter()
            .map(|q| Module::cyclic(ring, q).expect("prime power divides N"))
            .collect();
        TestClass::new(ring, gens).expect("same ring")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[Module] {
        &self.generators
    }

    /// The indecomposable members `Z/p^b`, by increasing order.
    pub fn indecomposables(&self) -> Vec<Module> {
        self.blocks.iter().map(|&q| Module::cyclic(self.ring, q).expect("divides N")).collect()
    }

    pub fn contains(&self, m: &Module) -> bool {
        m.ring() == self.ring && m.indecomposable_orders().iter().all(|q| self.blocks.binary_search(q).is_ok())
    }

    pub fn is_subclass_of(&self, other: &TestClass) -> bool {
        self.blocks.iter().all(|q| other.blocks.binary_search(q).is_ok())
    }

    pub fn contains_all_modules(&self) -> bool {
        self.ring.indecomposable_orders() == self.blocks
    }

    pub fn with_generator(&self, m: Module) -> Result<TestClass> {
        let mut gens = self.generators.clone();
        gens.push(m);
        TestClass::new(self.ring, gens)
    }
}

impl fmt::Display for TestClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "add{{")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_by_summands() {
        let r = Ring::new(12).unwrap();
        let c = TestClass::new(r, vec![Module::new(r, vec![6]).unwrap()]).unwrap();
        assert!(c.contains(&Module::zero(r)));
        assert!(c.contains(&Module::new(r, vec![2, 6]).unwrap()));
        assert!(!c.contains(&Module::new(r, vec![12]).unwrap()));
        assert!(TestClass::free(r).is_subclass_of(&TestClass::all(r)));
        assert!(TestClass::all(r).contains_all_modules());
        assert!(!c.contains_all_modules());
    }
}
