use super::ChainComplex;
use crate::error::{Error, Result};
use crate::modcat::{dualize, kernel, HomSpace, Kernel, Module, Morphism};
use num_bigint::BigUint;
use std::fmt;

/// A chain map, stored on the union of the two supports.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainMap {
    src: ChainComplex,
    dst: ChainComplex,
    lo: i64,
    components: Vec<Morphism>,
}

fn union_range(x: &ChainComplex, y: &ChainComplex) -> (i64, i64) {
    (x.lo().min(y.lo()), x.hi().max(y.hi()))
}

impl ChainMap {
    /// `components[k]` is the map in degree `lo + k`; missing degrees are zero.
    /// Checks `∂ f = f ∂` everywhere.
    pub fn new(src: &ChainComplex, dst: &ChainComplex, lo: i64, components: Vec<Morphism>) -> Result<ChainMap> {
        let f = Self::unchecked(src, dst, |m| {
            let k = m - lo;
            if k >= 0 && (k as usize) < components.len() {
                Some(components[k as usize].clone())
            } else {
                None
            }
        })?;
        for (k, c) in components.iter().enumerate() {
            let m = lo + k as i64;
            if c.src() != &src.component(m) || c.dst() != &dst.component(m) {
                return Err(Error::Shape(format!("component in degree {m} has the wrong ends")));
            }
        }
        f.check_commutes()?;
        Ok(f)
    }

    fn unchecked(src: &ChainComplex, dst: &ChainComplex, comp: impl Fn(i64) -> Option<Morphism>) -> Result<ChainMap> {
        let (lo, hi) = union_range(src, dst);
        let components = (lo..=hi)
            .map(|m| comp(m).unwrap_or_else(|| Morphism::zero(&src.component(m), &dst.component(m))))
            .collect();
        Ok(ChainMap { src: src.clone(), dst: dst.clone(), lo, components })
    }

    /// Builds from a closure giving the component in each degree of the union
    /// support; the result is checked.
    pub fn from_fn(src: &ChainComplex, dst: &ChainComplex, comp: impl Fn(i64) -> Morphism) -> Result<ChainMap> {
        let f = Self::unchecked(src, dst, |m| Some(comp(m)))?;
        for m in f.degrees() {
            let c = f.component(m);
            if c.src() != &src.component(m) || c.dst() != &dst.component(m) {
                return Err(Error::Shape(format!("component in degree {m} has the wrong ends")));
            }
        }
        f.check_commutes()?;
        Ok(f)
    }

    fn check_commutes(&self) -> Result<()> {
        for m in self.lo..=self.hi() + 1 {
            let left = self.dst.diff(m).compose(&self.component(m))?;
            let right = self.component(m - 1).compose(&self.src.diff(m))?;
            if left != right {
                return Err(Error::Precondition(format!(
                    "chain map does not commute with the differentials at degree {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(x: &ChainComplex) -> ChainMap {
        let components = x.degrees().map(|m| Morphism::identity(&x.component(m))).collect();
        ChainMap { src: x.clone(), dst: x.clone(), lo: x.lo(), components }
    }

    pub fn zero(x: &ChainComplex, y: &ChainComplex) -> ChainMap {
        Self::unchecked(x, y, |_| None).expect("zero map")
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }

    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }

    fn hi(&self) -> i64 {
        self.lo + self.components.len() as i64 - 1
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn component(&self, m: i64) -> Morphism {
        if (self.lo..=self.hi()).contains(&m) {
            self.components[(m - self.lo) as usize].clone()
        } else {
            Morphism::zero(&self.src.component(m), &self.dst.component(m))
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.dst != self.src {
            return Err(Error::Mismatch("chain maps do not compose".into()));
        }
        let (lo, hi) = union_range(&inner.src, &self.dst);
        let (lo, hi) = (lo.min(self.src.lo()), hi.max(self.src.hi()));
        let mut comps = Vec::new();
        for m in lo..=hi {
            comps.push(self.component(m).compose(&inner.component(m))?);
        }
        Self::unchecked(&inner.src, &self.dst, |m| Some(comps[(m - lo) as usize].clone()))
    }

    fn zip_with(&self, other: &ChainMap, op: impl Fn(&Morphism, &Morphism) -> Result<Morphism>) -> Result<ChainMap> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Mismatch("chain maps have different ends".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| op(a, b)).collect::<Result<_>>()?;
        Ok(ChainMap { src: self.src.clone(), dst: self.dst.clone(), lo: self.lo, components })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> ChainMap {
        let components = self.components.iter().map(Morphism::neg).collect();
        ChainMap { src: self.src.clone(), dst: self.dst.clone(), lo: self.lo, components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Morphism::is_zero)
    }

    /// Degreewise mono.
    pub fn is_mono(&self) -> bool {
        self.components.iter().all(Morphism::is_mono)
    }

    /// Degreewise epi.
    pub fn is_epi(&self) -> bool {
        self.components.iter().all(Morphism::is_epi)
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// `Z_m(f): Z_m(X) -> Z_m(Y)`.
    pub fn cycles_map(&self, m: i64) -> Result<Morphism> {
        let zx = self.src.cycles(m);
        let zy = self.dst.cycles(m);
        zy.factor(&self.component(m).compose(&zx.inclusion)?)
    }

    /// `Q_m(f): Q_m(X) -> Q_m(Y)`.
    pub fn quotient_map(&self, m: i64) -> Result<Morphism> {
        let qx = self.src.quotient(m);
        let qy = self.dst.quotient(m);
        qx.factor(&qy.projection.compose(&self.component(m))?)
    }

    /// `Hom(-, Z/N)` applied degreewise: `D(Y) -> D(X)`.
    pub fn dual(&self) -> ChainMap {
        let (x, y) = (self.src.dual(), self.dst.dual());
        Self::unchecked(&y, &x, |m| Some(dualize(&self.component(-m)))).expect("dual map")
    }

    /// Whether `f = ∂s + s∂` for some family `s_m: X_m -> Y_{m+1}`.
    pub fn is_homotopic_to_zero(&self) -> bool {
        let group = ChainMapGroup::new(&self.src, &self.dst).expect("same ring");
        group.is_nullhomotopic(self)
    }
}

impl fmt::Display for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "[{}] {:?}", self.lo + k as i64, c.matrix())?;
        }
        Ok(())
    }
}

/// The group of chain maps `X -> Y`, computed as the kernel of the
/// commutation defect on `prod_m Hom(X_m, Y_m)`.
#[derive(Clone, Debug)]
pub struct ChainMapGroup {
    src: ChainComplex,
    dst: ChainComplex,
    lo: i64,
    hi: i64,
    space: HomSpace,
    kernel: Kernel,
}

impl ChainMapGroup {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> Result<ChainMapGroup> {
        if x.ring() != y.ring() {
            return Err(Error::RingMismatch(x.ring().modulus(), y.ring().modulus()));
        }
        let (lo, hi) = union_range(x, y);
        let space = HomSpace::new((lo..=hi).map(|m| (x.component(m), y.component(m))).collect())?;
        let defect_space = HomSpace::new((lo..=hi + 1).map(|m| (x.component(m), y.component(m - 1))).collect())?;
        let defect = space.linear_map(&defect_space, |f| {
            let at = |m: i64| -> Morphism {
                if (lo..=hi).contains(&m) {
                    f[(m - lo) as usize].clone()
                } else {
                    Morphism::zero(&x.component(m), &y.component(m))
                }
            };
            (lo..=hi + 1).map(|m| y.diff(m).compose(&at(m))?.sub(&at(m - 1).compose(&x.diff(m))?)).collect()
        })?;
        let kernel = kernel(&defect);
        Ok(ChainMapGroup { src: x.clone(), dst: y.clone(), lo, hi, space, kernel })
    }

    /// The group as an abstract module.
    pub fn module(&self) -> &Module {
        &self.kernel.module
    }

    pub fn order(&self) -> BigUint {
        self.kernel.module.order()
    }

    pub fn decode(&self, coords: &[u64]) -> ChainMap {
        let raw = self.kernel.inclusion.apply(coords);
        let comps = self.space.decode(&raw);
        ChainMap::unchecked(&self.src, &self.dst, |m| Some(comps[(m - self.lo) as usize].clone()))
            .expect("kernel elements are chain maps")
    }

    pub fn encode(&self, f: &ChainMap) -> Result<Vec<u64>> {
        let comps: Vec<Morphism> = (self.lo..=self.hi).map(|m| f.component(m)).collect();
        let raw = self.space.encode(&comps)?;
        self.kernel.inclusion.preimage(&raw).ok_or_else(|| Error::Precondition("not a chain map".into()))
    }

    pub fn elements(&self) -> impl Iterator<Item = ChainMap> + '_ {
        self.kernel.module.elements().map(move |c| self.decode(&c))
    }

    pub fn generators(&self) -> Vec<ChainMap> {
        (0..self.kernel.module.rank()).map(|k| self.decode(&self.kernel.module.generator(k))).collect()
    }

    /// The homotopy assembly `s -> ∂s + s∂` into `prod_m Hom(X_m, Y_m)`.
    fn assembly(&self) -> Morphism {
        let (x, y, lo, hi) = (&self.src, &self.dst, self.lo, self.hi);
        let homotopies =
            HomSpace::new((lo - 1..=hi).map(|m| (x.component(m), y.component(m + 1))).collect()).expect("same ring");
        homotopies
            .linear_map(&self.space, |s| {
                let at = |m: i64| -> Morphism {
                    if (lo - 1..=hi).contains(&m) {
                        s[(m - lo + 1) as usize].clone()
                    } else {
                        Morphism::zero(&x.component(m), &y.component(m + 1))
                    }
                };
                (lo..=hi).map(|m| y.diff(m + 1).compose(&at(m))?.add(&at(m - 1).compose(&x.diff(m))?)).collect()
            })
            .expect("homotopy assembly is additive")
    }

    pub fn is_nullhomotopic(&self, f: &ChainMap) -> bool {
        let comps: Vec<Morphism> = (self.lo..=self.hi).map(|m| f.component(m)).collect();
        match self.space.encode(&comps) {
            Ok(raw) => self.assembly().hits(&raw),
            Err(_) => false,
        }
    }

    /// Whether every chain map `X -> Y` is nullhomotopic.
    pub fn all_nullhomotopic(&self) -> bool {
        let a = self.assembly();
        self.generators().iter().all(|g| {
            let comps: Vec<Morphism> = (self.lo..=self.hi).map(|m| g.component(m)).collect();
            a.hits(&self.space.encode(&comps).expect("same shape"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::Ring;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    #[test]
    fn maps_into_zero() {
        let x = ChainComplex::disk(&m(8, &[4]), 1);
        let z = ChainComplex::zero(Ring::new(8).unwrap());
        assert_eq!(ChainMapGroup::new(&x, &z).unwrap().order(), BigUint::from(1u32));
    }

    #[test]
    fn disk_into_sphere_and_back() {
        let d = ChainComplex::disk(&m(8, &[2]), 3);
        let s = ChainComplex::sphere(&m(8, &[4]), 3);
        assert_eq!(ChainMapGroup::new(&d, &s).unwrap().order(), BigUint::from(2u32));
        // Z_3(D^3(Z/4)) = 0, so only the disk one degree up receives maps
        let s2 = ChainComplex::sphere(&m(8, &[2]), 3);
        let d4 = ChainComplex::disk(&m(8, &[4]), 3);
        assert_eq!(ChainMapGroup::new(&s2, &d4).unwrap().order(), BigUint::from(1u32));
        let d4 = ChainComplex::disk(&m(8, &[4]), 4);
        assert_eq!(ChainMapGroup::new(&s2, &d4).unwrap().order(), BigUint::from(2u32));
    }

    #[test]
    fn homotopies() {
        let z4 = m(4, &[4]);
        let disk = ChainComplex::disk(&z4, 1);
        assert!(ChainMap::identity(&disk).is_homotopic_to_zero());
        let s = ChainComplex::sphere(&m(4, &[2]), 0);
        assert!(!ChainMap::identity(&s).is_homotopic_to_zero());
        assert!(ChainMap::zero(&s, &s).is_homotopic_to_zero());
    }

    #[test]
    fn sphere_into_disk_is_nullhomotopic() {
        let s = ChainComplex::sphere(&m(4, &[2]), 0);
        let d = ChainComplex::disk(&m(4, &[4]), 1);
        let g = ChainMapGroup::new(&s, &d).unwrap();
        assert_eq!(g.order(), BigUint::from(2u32));
        assert!(g.elements().all(|f| f.is_homotopic_to_zero()));
    }

    #[test]
    fn functorial_cycles() {
        let z4 = m(4, &[4]);
        let x = ChainComplex::new(0, vec![z4.clone(), z4.clone()], vec![Morphism::scalar(&z4, 2)]).unwrap();
        let two = ChainMap::new(&x, &x, 0, vec![Morphism::scalar(&z4, 3), Morphism::scalar(&z4, 3)]).unwrap();
        let sq = two.compose(&two).unwrap();
        assert_eq!(sq.cycles_map(1).unwrap(), two.cycles_map(1).unwrap().compose(&two.cycles_map(1).unwrap()).unwrap());
        assert_eq!(
            sq.quotient_map(0).unwrap(),
            two.quotient_map(0).unwrap().compose(&two.quotient_map(0).unwrap()).unwrap()
        );
        let g = ChainMapGroup::new(&x, &x).unwrap();
        for f in g.elements() {
            assert_eq!(g.decode(&g.encode(&f).unwrap()), f);
        }
    }
}
