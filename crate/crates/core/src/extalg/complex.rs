use super::{ext_group, psi, Extension};
use crate::chaincx::{class_membership, ChainComplex, ChainMap, ChainMapGroup, ComplexClassKind, Membership};
use crate::error::{Error, Result};
use crate::modcat::{biproduct, hom_group, pullback, pushout, HomSpace, Morphism, TestClass};
use std::fmt;

/// A degreewise exact sequence of complexes `0 -> A -> Z -> X -> 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ComplexExtension {
    alpha: ChainMap,
    beta: ChainMap,
}

fn span(cs: &[&ChainComplex]) -> (i64, i64) {
    let lo = cs.iter().map(|c| c.lo()).min().expect("nonempty");
    let hi = cs.iter().map(|c| c.hi()).max().expect("nonempty");
    (lo, hi)
}

fn at(parts: &[Morphism], lo: i64, m: i64, src: &ChainComplex, dst: &ChainComplex) -> Morphism {
    let k = m - lo;
    if k >= 0 && (k as usize) < parts.len() {
        parts[k as usize].clone()
    } else {
        Morphism::zero(&src.component(m), &dst.component(m))
    }
}

impl ComplexExtension {
    /// Checks that `β α = 0` and that every degree is short exact.
    pub fn new(alpha: ChainMap, beta: ChainMap) -> Result<ComplexExtension> {
        if alpha.dst() != beta.src() {
            return Err(Error::Shape("alpha and beta do not compose".into()));
        }
        let e = ComplexExtension { alpha, beta };
        let (lo, hi) = e.span();
        for m in lo..=hi {
            e.degree_extension(m)?;
        }
        Ok(e)
    }

    /// `0 -> A -> A + X -> X -> 0` with the diagonal differential.
    pub fn split(x: &ChainComplex, a: &ChainComplex) -> Result<ComplexExtension> {
        let (lo, hi) = span(&[x, a]);
        let sums = (lo..=hi).map(|m| biproduct(&a.component(m), &x.component(m))).collect::<Result<Vec<_>>>()?;
        let sum = |m: i64| &sums[(m - lo) as usize];
        let diffs = (lo + 1..=hi)
            .map(|m| {
                let (s, t) = (sum(m), sum(m - 1));
                t.injections[0]
                    .compose(&a.diff(m))?
                    .compose(&s.projections[0])?
                    .add(&t.injections[1].compose(&x.diff(m))?.compose(&s.projections[1])?)
            })
            .collect::<Result<Vec<_>>>()?;
        let z = ChainComplex::new(lo, sums.iter().map(|b| b.module.clone()).collect(), diffs)?;
        let alpha = ChainMap::from_fn(a, &z, |m| sum(m).injections[0].clone())?;
        let beta = ChainMap::from_fn(&z, x, |m| sum(m).projections[1].clone())?;
        ComplexExtension::new(alpha, beta)
    }

    pub fn alpha(&self) -> &ChainMap {
        &self.alpha
    }

    pub fn beta(&self) -> &ChainMap {
        &self.beta
    }

    pub fn left(&self) -> &ChainComplex {
        self.alpha.src()
    }

    pub fn middle(&self) -> &ChainComplex {
        self.alpha.dst()
    }

    pub fn right(&self) -> &ChainComplex {
        self.beta.dst()
    }

    /// The smallest interval containing the three supports.
    pub fn span(&self) -> (i64, i64) {
        span(&[self.left(), self.middle(), self.right()])
    }

    /// The short exact sequence of modules in degree `m`.
    pub fn degree_extension(&self, m: i64) -> Result<Extension> {
        Extension::short(self.alpha.component(m), self.beta.component(m))
    }

    /// Split in every degree.
    pub fn is_degreewise_split(&self) -> bool {
        let (lo, hi) = self.span();
        (lo..=hi).all(|m| self.degree_extension(m).map(|e| e.is_split()).unwrap_or(false))
    }

    /// Whether `β` has a chain-map section.
    pub fn is_split(&self) -> Result<bool> {
        let group = ChainMapGroup::new(self.right(), self.middle())?;
        let target = ChainMapGroup::new(self.right(), self.right())?;
        let id = target.encode(&ChainMap::identity(self.right()))?;
        let cols =
            group.generators().iter().map(|s| target.encode(&self.beta.compose(s)?)).collect::<Result<Vec<_>>>()?;
        let m = Morphism::from_columns(group.module().clone(), target.module().clone(), &cols)?;
        Ok(m.hits(&id))
    }

    /// Whether a chain map `u: Z -> Ẑ` exists with `u α = α̂` and `β̂ u = β`.
    pub fn is_related(&self, other: &ComplexExtension) -> Result<bool> {
        if self.left() != other.left() || self.right() != other.right() {
            return Err(Error::Mismatch("complex extensions with different ends".into()));
        }
        let (z, zh) = (self.middle(), other.middle());
        let (a, x) = (self.left(), self.right());
        let (lo, hi) = span(&[a, x, z, zh]);
        let unknowns = HomSpace::new((lo..=hi).map(|m| (z.component(m), zh.component(m))).collect())?;
        let mut pairs = Vec::new();
        for m in lo..=hi + 1 {
            pairs.push((z.component(m), zh.component(m - 1)));
        }
        for m in lo..=hi {
            pairs.push((a.component(m), zh.component(m)));
            pairs.push((z.component(m), x.component(m)));
        }
        let equations = HomSpace::new(pairs)?;
        let sys = unknowns.linear_map(&equations, |u| {
            let u_at = |m: i64| at(u, lo, m, z, zh);
            let mut out = Vec::new();
            for m in lo..=hi + 1 {
                out.push(zh.diff(m).compose(&u_at(m))?.sub(&u_at(m - 1).compose(&z.diff(m))?)?);
            }
            for m in lo..=hi {
                out.push(u_at(m).compose(&self.alpha.component(m))?);
                out.push(other.beta.component(m).compose(&u_at(m))?);
            }
            Ok(out)
        })?;
        let mut rhs = Vec::new();
        for m in lo..=hi + 1 {
            rhs.push(Morphism::zero(&z.component(m), &zh.component(m - 1)));
        }
        for m in lo..=hi {
            rhs.push(other.alpha.component(m));
            rhs.push(self.beta.component(m));
        }
        Ok(sys.hits(&equations.encode(&rhs)?))
    }

    /// Degreewise pushout along a chain map `g: A -> A'`.
    pub fn pushout_along(&self, g: &ChainMap) -> Result<ComplexExtension> {
        if g.src() != self.left() {
            return Err(Error::Mismatch("map does not start at the left end".into()));
        }
        let (a2, z, x) = (g.dst(), self.middle(), self.right());
        let (lo, hi) = span(&[self.left(), a2, z, x]);
        let qs = (lo..=hi).map(|m| pushout(&self.alpha.component(m), &g.component(m))).collect::<Result<Vec<_>>>()?;
        let q = |m: i64| &qs[(m - lo) as usize];
        let diffs = (lo + 1..=hi)
            .map(|m| {
                let t = q(m - 1);
                q(m).factor(&t.from_left.compose(&z.diff(m))?, &t.from_right.compose(&a2.diff(m))?)
            })
            .collect::<Result<Vec<_>>>()?;
        let zq = ChainComplex::new(lo, qs.iter().map(|p| p.module.clone()).collect(), diffs)?;
        let alpha = ChainMap::from_fn(a2, &zq, |m| q(m).from_right.clone())?;
        let betas = (lo..=hi)
            .map(|m| q(m).factor(&self.beta.component(m), &Morphism::zero(&a2.component(m), &x.component(m))))
            .collect::<Result<Vec<_>>>()?;
        let beta = ChainMap::from_fn(&zq, x, |m| betas[(m - lo) as usize].clone())?;
        ComplexExtension::new(alpha, beta)
    }

    /// Degreewise pullback along a chain map `h: X' -> X`.
    pub fn pullback_along(&self, h: &ChainMap) -> Result<ComplexExtension> {
        if h.dst() != self.right() {
            return Err(Error::Mismatch("map does not end at the right end".into()));
        }
        let (x2, z, a) = (h.src(), self.middle(), self.left());
        let (lo, hi) = span(&[a, x2, z, self.right()]);
        let ps = (lo..=hi).map(|m| pullback(&self.beta.component(m), &h.component(m))).collect::<Result<Vec<_>>>()?;
        let p = |m: i64| &ps[(m - lo) as usize];
        let diffs = (lo + 1..=hi)
            .map(|m| {
                let s = p(m);
                p(m - 1).factor(&z.diff(m).compose(&s.to_left)?, &x2.diff(m).compose(&s.to_right)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let zp = ChainComplex::new(lo, ps.iter().map(|q| q.module.clone()).collect(), diffs)?;
        let alphas = (lo..=hi)
            .map(|m| p(m).factor(&self.alpha.component(m), &Morphism::zero(&a.component(m), &x2.component(m))))
            .collect::<Result<Vec<_>>>()?;
        let alpha = ChainMap::from_fn(a, &zp, |m| alphas[(m - lo) as usize].clone())?;
        let beta = ChainMap::from_fn(&zp, x2, |m| p(m).to_right.clone())?;
        ComplexExtension::new(alpha, beta)
    }

    /// `0 -> D(X) -> D(Z) -> D(A) -> 0`.
    pub fn dual(&self) -> ComplexExtension {
        ComplexExtension { alpha: self.beta.dual(), beta: self.alpha.dual() }
    }

    /// `Hom_Ch(T, -)` keeps the sequence exact for every member `T`: each
    /// chain map `T -> X` lifts through `β`.
    pub fn is_left_relative(&self, family: &TestFamily) -> Result<bool> {
        let (lo, hi) = self.span();
        for t in family.members(lo, hi)? {
            if !lifts_through(&t, &self.beta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Hom_Ch(-, T)` keeps the sequence exact for every member `T`, decided
    /// on the dual sequence against the dual members.
    pub fn is_right_relative(&self, family: &TestFamily) -> Result<bool> {
        let (lo, hi) = self.span();
        let dual = self.dual();
        for t in family.members(lo, hi)? {
            if !lifts_through(&t.dual(), &dual.beta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether `Hom_Ch(T, Z) -> Hom_Ch(T, X)`, composition with `β`, is onto.
fn lifts_through(t: &ChainComplex, beta: &ChainMap) -> Result<bool> {
    let gz = ChainMapGroup::new(t, beta.src())?;
    let gx = ChainMapGroup::new(t, beta.dst())?;
    if gx.module().is_zero() {
        return Ok(true);
    }
    let cols = gz.generators().iter().map(|g| gx.encode(&beta.compose(g)?)).collect::<Result<Vec<_>>>()?;
    Ok(Morphism::from_columns(gz.module().clone(), gx.module().clone(), &cols)?.is_epi())
}

impl fmt::Display for ComplexExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0 -> ({}) -> ({}) -> ({}) -> 0", self.left(), self.middle(), self.right())
    }
}

/// Finite families of complexes standing in for a complex class when testing
/// relativity. Members are generated on demand around a degree window.
#[derive(Clone, Debug)]
pub struct TestFamily {
    kind: ComplexClassKind,
    class: TestClass,
}

impl TestFamily {
    /// Degreewise-`F` complexes: spheres, disks, and two-term complexes
    /// `T -> T'` of indecomposables of the class.
    pub fn degreewise(class: &TestClass) -> TestFamily {
        TestFamily { kind: ComplexClassKind::DegreewiseF, class: class.clone() }
    }

    /// Exact complexes with cycles in `F`: disks of indecomposables and the
    /// three-term complexes of nonsplit extensions between them.
    pub fn f_complexes(class: &TestClass) -> TestFamily {
        TestFamily { kind: ComplexClassKind::FComplex, class: class.clone() }
    }

    pub fn kind(&self) -> ComplexClassKind {
        self.kind
    }

    pub fn class(&self) -> &TestClass {
        &self.class
    }

    /// Members meeting the window `[lo, hi]`.
    pub fn members(&self, lo: i64, hi: i64) -> Result<Vec<ChainComplex>> {
        let ind = self.class.indecomposables();
        let mut out = Vec::new();
        for t in &ind {
            for k in lo..=hi + 1 {
                out.push(ChainComplex::disk(t, k));
            }
        }
        match self.kind {
            ComplexClassKind::DegreewiseF | ComplexClassKind::DgF => {
                for t in &ind {
                    for k in lo..=hi {
                        out.push(ChainComplex::sphere(t, k));
                    }
                }
                for s in &ind {
                    for t in &ind {
                        let h = hom_group(s, t)?;
                        for f in h.elements().filter(|f| !f.is_zero()) {
                            for k in lo + 1..=hi {
                                out.push(ChainComplex::new(k - 1, vec![t.clone(), s.clone()], vec![f.clone()])?);
                            }
                        }
                    }
                }
            }
            ComplexClassKind::FComplex => {
                for c in &ind {
                    for d in &ind {
                        let g = ext_group(1, c, d)?;
                        for e in g.elements().into_iter().skip(1) {
                            let s = psi(&e, &g)?;
                            let base = s.to_complex();
                            for k in lo..=hi + 1 {
                                let shifted = ChainComplex::new(k - 1, base.modules().to_vec(), base.diffs().to_vec())?;
                                if class_membership(&shifted, self.kind, &self.class) == Membership::Yes {
                                    out.push(shifted);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
