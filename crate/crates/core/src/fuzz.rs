//! Seeded random instances: rings, modules, maps, complexes and classes.
//!
//! Every generator draws only from the supplied RNG, so a seed and an
//! instance index determine the instance.

use crate::chaincx::ChainComplex;
use crate::error::Result;
use crate::extalg::{ext_group, psi, ComplexExtension};
use crate::modcat::{hom_group, kernel, Module, Morphism, Ring, TestClass};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Moduli used when no ring is fixed.
pub const FUZZ_RINGS: [u64; 4] = [4, 8, 9, 12];

/// Size limits for generated objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Indecomposable summands drawn per module, hence at most this many
    /// invariant factors.
    pub max_factors: usize,
    /// Number of degrees a complex may occupy.
    pub max_support: usize,
    /// Modules of larger order are redrawn.
    pub max_order: u64,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { max_factors: 3, max_support: 5, max_order: 1728 }
    }
}

impl Bounds {
    /// Small enough for the raw classification of complex extensions.
    pub fn small() -> Bounds {
        Bounds { max_factors: 1, max_support: 3, max_order: 9 }
    }
}

/// The RNG for instance `index` of a run seeded with `seed`: the seed picks
/// the key, the index the stream.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_ring(rng: &mut impl Rng) -> Ring {
    Ring::new(*FUZZ_RINGS.choose(rng).expect("nonempty")).expect("valid modulus")
}

pub fn random_module(rng: &mut impl Rng, ring: Ring, bounds: &Bounds) -> Module {
    let orders = ring.indecomposable_orders();
    loop {
        let k = rng.gen_range(0..=bounds.max_factors);
        let parts: Vec<u64> = (0..k).map(|_| *orders.choose(rng).expect("N > 1")).collect();
        let m = Module::from_cyclic_orders(ring, &parts).expect("orders divide N");
        if m.order_u64().is_some_and(|o| o <= bounds.max_order) {
            return m;
        }
    }
}

/// A nonzero module when the bounds allow one.
pub fn random_nonzero_module(rng: &mut impl Rng, ring: Ring, bounds: &Bounds) -> Module {
    for _ in 0..64 {
        let m = random_module(rng, ring, bounds);
        if !m.is_zero() {
            return m;
        }
    }
    Module::cyclic(ring, ring.indecomposable_orders()[0]).expect("divides N")
}

/// A uniformly random element of a finite module.
pub fn random_element(rng: &mut impl Rng, m: &Module) -> Vec<u64> {
    match m.order_u64() {
        Some(n) if n > 0 => m.element_at(rng.gen_range(0..n)),
        _ => m.zero_element(),
    }
}

/// A uniformly random morphism `A -> B`.
pub fn random_morphism(rng: &mut impl Rng, a: &Module, b: &Module) -> Result<Morphism> {
    let h = hom_group(a, b)?;
    let coords = random_element(rng, h.space().module());
    Ok(h.from_coordinates(&coords))
}

/// A random complex: `∂_k` is a random map from `X_k` into the cycles of
/// `X_{k-1}`, so `∂∂ = 0` holds by construction.
pub fn random_complex(rng: &mut impl Rng, ring: Ring, bounds: &Bounds) -> Result<ChainComplex> {
    let len = rng.gen_range(1..=bounds.max_support.max(1));
    let lo = rng.gen_range(-1..=1);
    let modules: Vec<Module> = (0..len).map(|_| random_module(rng, ring, bounds)).collect();
    let mut diffs: Vec<Morphism> = Vec::new();
    for k in 1..len {
        let into = match diffs.last() {
            Some(d) => kernel(d).inclusion,
            None => Morphism::identity(&modules[0]),
        };
        let f = random_morphism(rng, &modules[k], into.src())?;
        diffs.push(into.compose(&f)?);
    }
    ChainComplex::new(lo, modules, diffs)
}

fn shifted(x: &ChainComplex, by: i64) -> ChainComplex {
    ChainComplex::new(x.lo() + by, x.modules().to_vec(), x.diffs().to_vec()).expect("shifts keep ∂∂ = 0")
}

/// An exact complex: a disk, or a random short exact sequence, possibly plus
/// a second such piece, placed at a random degree. The support stays within the
/// bounds.
pub fn random_exact_complex(rng: &mut impl Rng, ring: Ring, bounds: &Bounds) -> Result<ChainComplex> {
    let mut x = exact_piece(rng, ring, bounds)?;
    if rng.gen_bool(0.3) {
        let y = exact_piece(rng, ring, bounds)?;
        let lo = x.lo().min(y.lo());
        let hi = x.hi().max(y.hi());
        if hi - lo < bounds.max_support as i64 {
            x = ComplexExtension::split(&x, &y)?.middle().clone();
        }
    }
    Ok(x.trimmed())
}

fn exact_piece(rng: &mut impl Rng, ring: Ring, bounds: &Bounds) -> Result<ChainComplex> {
    let span = bounds.max_support as i64;
    if span >= 3 && rng.gen_bool(0.5) {
        let a = random_module(rng, ring, bounds);
        let c = random_module(rng, ring, bounds);
        let g = ext_group(1, &c, &a)?;
        let e = g.element(&random_element(rng, g.module()));
        let s = psi(&e, &g)?;
        Ok(shifted(&s.to_complex(), rng.gen_range(-1..=span - 4)))
    } else {
        let top = rng.gen_range(0..=(span - 1).max(0));
        Ok(ChainComplex::disk(&random_module(rng, ring, bounds), top))
    }
}

/// A class closed under extensions: for each prime block `Z/p^a` choose no
/// summands, only the projective `Z/p^a`, or every `Z/p^b`.
pub fn random_closed_class(rng: &mut impl Rng, ring: Ring) -> TestClass {
    let mut gens = Vec::new();
    for q in ring.prime_power_blocks() {
        match rng.gen_range(0..3) {
            0 => {}
            1 => gens.push(Module::cyclic(ring, q).expect("block divides N")),
            _ => {
                for d in ring.indecomposable_orders().into_iter().filter(|d| q % d == 0) {
                    gens.push(Module::cyclic(ring, d).expect("divides N"));
                }
            }
        }
    }
    TestClass::new(ring, gens).expect("same ring")
}

/// An arbitrary additive class: a random subset of the indecomposables.
pub fn random_class(rng: &mut impl Rng, ring: Ring) -> TestClass {
    let gens = ring
        .indecomposable_orders()
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|d| Module::cyclic(ring, d).expect("divides N"))
        .collect();
    TestClass::new(ring, gens).expect("same ring")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extalg::is_extension_closed;

    #[test]
    fn same_seed_same_instance() {
        let b = Bounds::default();
        let draw = |seed, index| {
            let mut rng = instance_rng(seed, index);
            let ring = random_ring(&mut rng);
            random_complex(&mut rng, ring, &b).unwrap()
        };
        assert_eq!(draw(42, 3), draw(42, 3));
        let distinct: std::collections::BTreeSet<String> = (0..20).map(|i| draw(42, i).to_string()).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn generated_objects_respect_bounds() {
        let b = Bounds::default();
        for i in 0..200 {
            let mut rng = instance_rng(7, i);
            let ring = random_ring(&mut rng);
            let m = random_module(&mut rng, ring, &b);
            assert!(m.rank() <= 3);
            let x = random_complex(&mut rng, ring, &b).unwrap();
            assert!(x.modules().len() <= 5);
            let e = random_exact_complex(&mut rng, ring, &b).unwrap();
            assert!(e.is_exact() && e.modules().len() <= 5, "{e}");
        }
    }

    #[test]
    fn closed_classes_are_closed() {
        for i in 0..40 {
            let mut rng = instance_rng(1, i);
            let ring = random_ring(&mut rng);
            assert!(is_extension_closed(&random_closed_class(&mut rng, ring)).unwrap());
        }
    }
}
