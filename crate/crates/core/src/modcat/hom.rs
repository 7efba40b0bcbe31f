//! Hom groups as modules.
//!
//! A morphism `Z/d -> Z/e` is determined by the image of `1`, which must lie
//! in the cyclic subgroup generated by `e / gcd(d, e)`. A tuple of morphisms
//! between several pairs of modules is therefore a point of
//! `+_{pairs, i, j} Z/gcd(d_j, e_i)`, which [`HomSpace`] brings to canonical
//! form. Every "find a morphism making the diagram commute" problem becomes a
//! preimage question for a [`Morphism`] between two such spaces.

use super::{check_ring, quotient_canonical, Module, Morphism, Ring};
use crate::error::{Error, Result};
use crate::exactlin::gcd_u64;
use num_bigint::BigUint;

/// `Hom(A_1, B_1) + ... + Hom(A_k, B_k)` as a canonical module.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pairs: Vec<(Module, Module)>,
    /// `(pair, row, col, gcd, step)` per raw coordinate.
    slots: Vec<(usize, usize, usize, u64, u64)>,
    module: Module,
    to: Vec<Vec<u64>>,
    from: Vec<Vec<u64>>,
}

impl HomSpace {
    pub fn new(pairs: Vec<(Module, Module)>) -> Result<HomSpace> {
        let ring = match pairs.first() {
            Some((a, _)) => a.ring(),
            None => return Err(Error::Shape("a Hom space needs at least one pair".into())),
        };
        let mut slots = Vec::new();
        for (p, (a, b)) in pairs.iter().enumerate() {
            check_ring(a, b)?;
            if a.ring() != ring {
                return Err(Error::RingMismatch(a.ring().modulus(), ring.modulus()));
            }
            for (i, &e) in b.factors().iter().enumerate() {
                for (j, &d) in a.factors().iter().enumerate() {
                    let g = gcd_u64(d, e);
                    slots.push((p, i, j, g, e / g));
                }
            }
        }
        let g = slots.len();
        let rels: Vec<Vec<u64>> = slots
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let mut v = vec![0u64; g];
                v[k] = s.3 % ring.modulus();
                v
            })
            .collect();
        let p = quotient_canonical(ring, g, &rels);
        Ok(HomSpace { pairs, slots, module: p.module, to: p.to, from: p.from })
    }

    pub fn ring(&self) -> Ring {
        self.pairs[0].0.ring()
    }

    pub fn pairs(&self) -> &[(Module, Module)] {
        &self.pairs
    }

    /// The canonical module of tuples of morphisms.
    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn order(&self) -> BigUint {
        self.module.order()
    }

    fn check_tuple(&self, maps: &[Morphism]) -> Result<()> {
        if maps.len() != self.pairs.len() {
            return Err(Error::Shape(format!("expected {} morphisms, got {}", self.pairs.len(), maps.len())));
        }
        for (f, (a, b)) in maps.iter().zip(&self.pairs) {
            if f.src() != a || f.dst() != b {
                return Err(Error::Mismatch(format!("morphism {} -> {} in slot for {a} -> {b}", f.src(), f.dst())));
            }
        }
        Ok(())
    }

    /// Canonical coordinates of a tuple of morphisms.
    pub fn encode(&self, maps: &[Morphism]) -> Result<Vec<u64>> {
        self.check_tuple(maps)?;
        let raw: Vec<u64> = self.slots.iter().map(|&(p, i, j, _, step)| maps[p].entry(i, j) / step).collect();
        Ok(self
            .to
            .iter()
            .zip(self.module.factors())
            .map(|(row, &d)| {
                (row.iter().zip(&raw).fold(0u128, |acc, (&a, &t)| acc + a as u128 * t as u128) % d as u128) as u64
            })
            .collect())
    }

    /// The tuple of morphisms with the given canonical coordinates.
    pub fn decode(&self, coords: &[u64]) -> Vec<Morphism> {
        let mut mats: Vec<Vec<Vec<u64>>> =
            self.pairs.iter().map(|(a, b)| vec![vec![0u64; a.rank()]; b.rank()]).collect();
        for (k, &(p, i, j, g, step)) in self.slots.iter().enumerate() {
            let t =
                self.from[k].iter().zip(coords).fold(0u128, |acc, (&a, &c)| acc + a as u128 * c as u128) % g as u128;
            mats[p][i][j] = t as u64 * step;
        }
        self.pairs
            .iter()
            .zip(mats)
            .map(|((a, b), m)| Morphism::new(a.clone(), b.clone(), m).expect("decoded entries are well-defined"))
            .collect()
    }

    /// The canonical generators, each decoded to a tuple of morphisms.
    pub fn generators(&self) -> Vec<Vec<Morphism>> {
        (0..self.module.rank()).map(|k| self.decode(&self.module.generator(k))).collect()
    }

    /// Every tuple, in the element order of [`HomSpace::module`].
    pub fn elements(&self) -> impl Iterator<Item = Vec<Morphism>> + '_ {
        self.module.elements().map(move |c| self.decode(&c))
    }

    /// The morphism `module() -> target.module()` induced by an additive map
    /// on tuples of morphisms, evaluated on generators.
    pub fn linear_map<F>(&self, target: &HomSpace, f: F) -> Result<Morphism>
    where
        F: Fn(&[Morphism]) -> Result<Vec<Morphism>>,
    {
        let mut columns = Vec::with_capacity(self.module.rank());
        for k in 0..self.module.rank() {
            let x = self.decode(&self.module.generator(k));
            columns.push(target.encode(&f(&x)?)?);
        }
        Morphism::from_columns(self.module.clone(), target.module.clone(), &columns)
            .map_err(|e| Error::Precondition(format!("induced map is not additive: {e}")))
    }
}

/// `Hom(A, B)` with a generating set and the order of each generator.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub src: Module,
    pub dst: Module,
    pub generators: Vec<Morphism>,
    pub orders: Vec<u64>,
    space: HomSpace,
}

impl HomGroup {
    pub fn space(&self) -> &HomSpace {
        &self.space
    }

    pub fn order(&self) -> BigUint {
        self.space.order()
    }

    /// Coefficients of `f` in terms of the generators.
    pub fn coordinates(&self, f: &Morphism) -> Result<Vec<u64>> {
        self.space.encode(std::slice::from_ref(f))
    }

    pub fn from_coordinates(&self, c: &[u64]) -> Morphism {
        self.space.decode(c).remove(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Morphism> + '_ {
        self.space.elements().map(|mut v| v.remove(0))
    }
}

pub fn hom_group(a: &Module, b: &Module) -> Result<HomGroup> {
    let space = HomSpace::new(vec![(a.clone(), b.clone())])?;
    let generators = space.generators().into_iter().map(|mut v| v.remove(0)).collect();
    let orders = space.module().factors().to_vec();
    Ok(HomGroup { src: a.clone(), dst: b.clone(), generators, orders, space })
}
