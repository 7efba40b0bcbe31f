//! Kernels, cokernels, images, biproducts, pullbacks, pushouts and duality.
//!
//! Everything reduces to one step: a quotient `(Z/N)^g / span(relations)` is
//! brought to invariant-factor form by a Smith form over `Z/N`, which also
//! yields the coordinate change in both directions.

use super::{check_ring, Module, Morphism, Ring};
use crate::error::{Error, Result};
use crate::exactlin::{nullspace_mod, snf_mod, ModMatrix};

/// A canonical module `Q` together with mutually inverse coordinate maps
/// between `(Z/N)^g / span(relations)` and `Q`.
pub(crate) struct Presentation {
    pub module: Module,
    /// `rank(Q) x g`: raw coordinates to canonical coordinates.
    pub to: Vec<Vec<u64>>,
    /// `g x rank(Q)`: canonical generators in raw coordinates.
    pub from: Vec<Vec<u64>>,
}

/// Canonical form of `(Z/N)^g / span(relations)`; each relation has length `g`.
pub(crate) fn quotient_canonical(ring: Ring, g: usize, relations: &[Vec<u64>]) -> Presentation {
    let n = ring.modulus();
    let rel = ModMatrix::from_columns(n, g, relations);
    let s = snf_mod(&rel);
    let mut factors = Vec::new();
    let mut keep = Vec::new();
    for i in 0..g {
        let d = if i < s.diag.len() { s.diag[i] } else { n };
        if d > 1 {
            factors.push(d);
            keep.push(i);
        }
    }
    let module = Module::new(ring, factors).expect("Smith diagonal is a divisibility chain");
    let to = keep.iter().zip(module.factors()).map(|(&i, &d)| s.u.row(i).iter().map(|&x| x % d).collect()).collect();
    let from = (0..g).map(|r| keep.iter().map(|&i| s.u_inv.get(r, i)).collect()).collect();
    Presentation { module, to, from }
}

/// The submodule of `m` generated by `gens`, with its inclusion.
pub(crate) fn submodule(m: &Module, gens: &[Vec<u64>]) -> (Module, Morphism) {
    let ring = m.ring();
    let n = ring.modulus();
    let k = m.rank();
    let g = gens.len();
    // relations among the generators: c with sum c_j gens_j = 0 in m
    let mut sys = ModMatrix::zeros(n, k, g + k);
    for (j, v) in gens.iter().enumerate() {
        for (i, (&x, &d)) in v.iter().zip(m.factors()).enumerate() {
            sys.set(i, j, x % d);
        }
    }
    for i in 0..k {
        sys.set(i, g + i, m.factors()[i]);
    }
    let rels: Vec<Vec<u64>> = nullspace_mod(&sys).into_iter().map(|v| v[..g].to_vec()).collect();
    let p = quotient_canonical(ring, g, &rels);
    let columns: Vec<Vec<u64>> = (0..p.module.rank())
        .map(|c| {
            let mut acc = vec![0u64; k];
            for (j, v) in gens.iter().enumerate() {
                let coef = p.from[j][c];
                for i in 0..k {
                    acc[i] = (acc[i] + coef * (v[i] % m.factors()[i])) % m.factors()[i];
                }
            }
            acc
        })
        .collect();
    let inc = Morphism::from_columns(p.module.clone(), m.clone(), &columns)
        .expect("inclusion of a generated submodule is well-defined");
    (p.module, inc)
}

/// Kernel object with its inclusion.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub module: Module,
    pub inclusion: Morphism,
}

impl Kernel {
    /// The unique `u` with `inclusion ∘ u = g`; requires `f ∘ g = 0`.
    pub fn factor(&self, g: &Morphism) -> Result<Morphism> {
        self.inclusion.lift_through_mono(g)
    }
}

pub fn kernel(f: &Morphism) -> Kernel {
    let n = f.src().ring().modulus();
    let (k, l) = (f.src().rank(), f.dst().rank());
    let mut sys = ModMatrix::zeros(n, l, k + l);
    for i in 0..l {
        for j in 0..k {
            sys.set(i, j, f.entry(i, j));
        }
        sys.set(i, k + i, f.dst().factors()[i]);
    }
    let gens: Vec<Vec<u64>> = nullspace_mod(&sys)
        .into_iter()
        .map(|v| f.src().reduce(&v[..k]))
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let (module, inclusion) = submodule(f.src(), &gens);
    Kernel { module, inclusion }
}

/// Cokernel object with its projection.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub module: Module,
    pub projection: Morphism,
}

impl Cokernel {
    /// The unique `u` with `u ∘ projection = g`; requires `g ∘ f = 0`.
    pub fn factor(&self, g: &Morphism) -> Result<Morphism> {
        self.projection.descend_through_epi(g)
    }
}

pub fn cokernel(f: &Morphism) -> Cokernel {
    let ring = f.src().ring();
    let l = f.dst().rank();
    let mut rels: Vec<Vec<u64>> = (0..f.src().rank()).map(|j| f.column(j)).collect();
    for i in 0..l {
        let mut e = vec![0u64; l];
        e[i] = f.dst().factors()[i];
        rels.push(e);
    }
    let p = quotient_canonical(ring, l, &rels);
    let projection = Morphism::new(f.dst().clone(), p.module.clone(), p.to).expect("quotient map is well-defined");
    Cokernel { module: p.module, projection }
}

/// Image object: `f = inclusion ∘ corestriction`.
#[derive(Clone, Debug)]
pub struct Image {
    pub module: Module,
    pub inclusion: Morphism,
    pub corestriction: Morphism,
}

pub fn image(f: &Morphism) -> Image {
    let gens: Vec<Vec<u64>> = (0..f.src().rank()).map(|j| f.column(j)).collect();
    let (module, inclusion) = submodule(f.dst(), &gens);
    let corestriction = inclusion.lift_through_mono(f).expect("columns lie in their span");
    Image { module, inclusion, corestriction }
}

/// A biproduct `M_1 + ... + M_k` in canonical form.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub module: Module,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

impl Biproduct {
    /// `sum_k injection_k ∘ maps_k` for maps out of a common source.
    pub fn pair_into(&self, maps: &[Morphism]) -> Result<Morphism> {
        let src = maps
            .first()
            .map(|m| m.src().clone())
            .ok_or_else(|| Error::Shape("pairing needs at least one map".into()))?;
        let mut acc = Morphism::zero(&src, &self.module);
        for (inj, m) in self.injections.iter().zip(maps) {
            acc = acc.add(&inj.compose(m)?)?;
        }
        Ok(acc)
    }

    /// `sum_k maps_k ∘ projection_k` for maps into a common target.
    pub fn copair_from(&self, maps: &[Morphism]) -> Result<Morphism> {
        let dst = maps
            .first()
            .map(|m| m.dst().clone())
            .ok_or_else(|| Error::Shape("copairing needs at least one map".into()))?;
        let mut acc = Morphism::zero(&self.module, &dst);
        for (proj, m) in self.projections.iter().zip(maps) {
            acc = acc.add(&m.compose(proj)?)?;
        }
        Ok(acc)
    }
}

pub fn biproduct_of(parts: &[Module]) -> Result<Biproduct> {
    let ring = match parts.first() {
        Some(m) => m.ring(),
        None => return Err(Error::Shape("biproduct of an empty list".into())),
    };
    for m in parts {
        check_ring(&parts[0], m)?;
    }
    let raw: Vec<u64> = parts.iter().flat_map(|m| m.factors().iter().copied()).collect();
    let g = raw.len();
    let rels: Vec<Vec<u64>> = raw
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0u64; g];
            e[i] = d;
            e
        })
        .collect();
    let p = quotient_canonical(ring, g, &rels);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for m in parts {
        let k = m.rank();
        let inj_matrix: Vec<Vec<u64>> = p.to.iter().map(|row| row[off..off + k].to_vec()).collect();
        injections.push(Morphism::new(m.clone(), p.module.clone(), inj_matrix)?);
        let proj_matrix: Vec<Vec<u64>> = p.from[off..off + k].to_vec();
        projections.push(Morphism::new(p.module.clone(), m.clone(), proj_matrix)?);
        off += k;
    }
    Ok(Biproduct { module: p.module, injections, projections })
}

pub fn biproduct(a: &Module, b: &Module) -> Result<Biproduct> {
    biproduct_of(&[a.clone(), b.clone()])
}

/// `P` with `f ∘ to_left = g ∘ to_right`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub module: Module,
    pub to_left: Morphism,
    pub to_right: Morphism,
    sum: Biproduct,
    kernel: Kernel,
}

impl Pullback {
    /// The unique map `T -> P` induced by `u: T -> A`, `v: T -> B` with `f u = g v`.
    pub fn factor(&self, u: &Morphism, v: &Morphism) -> Result<Morphism> {
        let w = self.sum.pair_into(&[u.clone(), v.clone()])?;
        self.kernel.factor(&w)
    }
}

pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Pullback> {
    if f.dst() != g.dst() {
        return Err(Error::Mismatch(format!("pullback needs a common target, got {} and {}", f.dst(), g.dst())));
    }
    let sum = biproduct(f.src(), g.src())?;
    let h = f.compose(&sum.projections[0])?.sub(&g.compose(&sum.projections[1])?)?;
    let kernel = kernel(&h);
    let to_left = sum.projections[0].compose(&kernel.inclusion)?;
    let to_right = sum.projections[1].compose(&kernel.inclusion)?;
    Ok(Pullback { module: kernel.module.clone(), to_left, to_right, sum, kernel })
}

/// `Q` with `from_left ∘ f = from_right ∘ g`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: Module,
    pub from_left: Morphism,
    pub from_right: Morphism,
    sum: Biproduct,
    cokernel: Cokernel,
}

impl Pushout {
    /// The unique map `Q -> T` induced by `u: A -> T`, `v: B -> T` with `u f = v g`.
    pub fn factor(&self, u: &Morphism, v: &Morphism) -> Result<Morphism> {
        let w = self.sum.copair_from(&[u.clone(), v.clone()])?;
        self.cokernel.factor(&w)
    }
}

pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Pushout> {
    if f.src() != g.src() {
        return Err(Error::Mismatch(format!("pushout needs a common source, got {} and {}", f.src(), g.src())));
    }
    let sum = biproduct(f.dst(), g.dst())?;
    let h = sum.injections[0].compose(f)?.sub(&sum.injections[1].compose(g)?)?;
    let cokernel = cokernel(&h);
    let from_left = cokernel.projection.compose(&sum.injections[0])?;
    let from_right = cokernel.projection.compose(&sum.injections[1])?;
    Ok(Pushout { module: cokernel.module.clone(), from_left, from_right, sum, cokernel })
}

/// `Hom(M, Z/N)`, identified with `M` itself: the generator of `D(Z/d)` is
/// the map sending `1` to `N/d`.
pub fn dual_module(m: &Module) -> Module {
    m.clone()
}

/// `Hom(f, Z/N): D(B) -> D(A)` in the identification of [`dual_module`].
pub fn dualize(f: &Morphism) -> Morphism {
    let (a, b) = (f.src(), f.dst());
    let matrix: Vec<Vec<u64>> = (0..a.rank())
        .map(|j| {
            let d = a.factors()[j];
            (0..b.rank())
                .map(|i| {
                    let e = b.factors()[i];
                    // e divides d * a_ij by well-definedness
                    ((f.entry(i, j) as u128 * d as u128 / e as u128) % d as u128) as u64
                })
                .collect()
        })
        .collect();
    Morphism::new(b.clone(), a.clone(), matrix).expect("dual of a morphism is well-defined")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(r(n), f.to_vec()).unwrap()
    }

    #[test]
    fn kernel_of_doubling() {
        let z4 = m(4, &[4]);
        let k = kernel(&Morphism::scalar(&z4, 2));
        assert_eq!(k.module, m(4, &[2]));
        assert_eq!(k.inclusion.matrix(), &[vec![2]]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let a = m(12, &[2, 6]);
        assert!(kernel(&Morphism::identity(&a)).module.is_zero());
        let k = kernel(&Morphism::zero(&a, &m(12, &[4])));
        assert_eq!(k.module, a);
        assert!(k.inclusion.is_iso());
    }

    #[test]
    fn cokernel_of_inclusion() {
        let inc = Morphism::new(m(4, &[2]), m(4, &[4]), vec![vec![2]]).unwrap();
        let c = cokernel(&inc);
        assert_eq!(c.module, m(4, &[2]));
        assert!(cokernel(&Morphism::identity(&m(4, &[4]))).module.is_zero());
        let z = Module::zero(r(4));
        assert_eq!(cokernel(&Morphism::zero(&z, &m(4, &[2, 4]))).module, m(4, &[2, 4]));
    }

    #[test]
    fn biproduct_identities() {
        let b = biproduct(&m(12, &[2]), &m(12, &[3])).unwrap();
        assert_eq!(b.module, m(12, &[6]));
        for k in 0..2 {
            for l in 0..2 {
                let c = b.projections[k].compose(&b.injections[l]).unwrap();
                if k == l {
                    assert_eq!(c, Morphism::identity(c.src()));
                } else {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn pullback_of_reductions() {
        let red = Morphism::new(m(4, &[4]), m(4, &[2]), vec![vec![1]]).unwrap();
        let p = pullback(&red, &red).unwrap();
        assert_eq!(p.module, m(4, &[2, 4]));
    }

    #[test]
    fn pushout_of_inclusions() {
        let inc = Morphism::new(m(4, &[2]), m(4, &[4]), vec![vec![2]]).unwrap();
        let q = pushout(&inc, &inc).unwrap();
        assert_eq!(q.module.order_u64(), Some(8));
    }

    #[test]
    fn dual_of_inclusion_is_reduction() {
        let inc = Morphism::new(m(4, &[2]), m(4, &[4]), vec![vec![2]]).unwrap();
        let d = dualize(&inc);
        assert_eq!(d.src(), &m(4, &[4]));
        assert_eq!(d.dst(), &m(4, &[2]));
        assert!(d.is_epi());
        assert_eq!(dualize(&d), inc);
    }
}
