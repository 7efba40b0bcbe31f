use crate::chaincx::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::extalg::{ComplexExtension, Extension};
use crate::modcat::{pullback, pushout, Module, Morphism};

/// `Some((C, m))` when the complex is `D^m(C)`: two equal modules joined by
/// the identity. Zero complexes are not disks.
pub fn is_disk(x: &ChainComplex) -> Option<(Module, i64)> {
    let t = x.trimmed();
    if t.modules().len() == 2
        && t.modules()[0] == t.modules()[1]
        && t.diff(t.hi()) == Morphism::identity(&t.modules()[0])
    {
        Some((t.modules()[0].clone(), t.hi()))
    } else {
        None
    }
}

fn require_short(s: &Extension) -> Result<()> {
    if s.degree() != 1 {
        return Err(Error::Unsupported("disk maps are implemented for 1-extensions".into()));
    }
    Ok(())
}

/// From `0 -> C -> E -> X_m -> 0` to `0 -> D^{m+1}(C) -> Z̃ -> X -> 0`.
///
/// `Z̃_{m+1}` is the pullback `P` of `β` and `∂^X_{m+1}`, `Z̃_m = E`, and the
/// remaining degrees are those of `X`. The differentials around the modified
/// degrees are `∂_{m+2} = (0, ∂^X_{m+2})` into `P`, `∂_{m+1} = p_E`, and
/// `∂_m = ∂^X_m β`.
pub fn disk_psi(s: &Extension, x: &ChainComplex, m: i64) -> Result<ComplexExtension> {
    require_short(s)?;
    if s.right() != &x.component(m) {
        return Err(Error::Mismatch(format!("the extension does not end at X_{m}")));
    }
    let (alpha, beta) = (s.alpha(), s.beta());
    let c = s.left();
    let e = s.middle();
    let p = pullback(beta, &x.diff(m + 1))?;
    let lo = x.lo().min(m);
    let hi = x.hi().max(m + 1);
    let z_at = |k: i64| -> Module {
        if k == m + 1 {
            p.module.clone()
        } else if k == m {
            e.clone()
        } else {
            x.component(k)
        }
    };
    let mut diffs = Vec::new();
    for k in lo + 1..=hi {
        let d = if k == m + 2 {
            p.factor(&Morphism::zero(&x.component(k), e), &x.diff(k))?
        } else if k == m + 1 {
            p.to_left.clone()
        } else if k == m {
            x.diff(m).compose(beta)?
        } else {
            x.diff(k)
        };
        diffs.push(d);
    }
    let z = ChainComplex::new(lo, (lo..=hi).map(z_at).collect(), diffs)?;
    let disk = ChainComplex::disk(c, m + 1);
    let alpha_top = p.factor(alpha, &Morphism::zero(c, &x.component(m + 1)))?;
    let a = ChainMap::from_fn(&disk, &z, |k| {
        if k == m + 1 {
            alpha_top.clone()
        } else if k == m {
            alpha.clone()
        } else {
            Morphism::zero(&disk.component(k), &z_at(k))
        }
    })?;
    let b = ChainMap::from_fn(&z, x, |k| {
        if k == m + 1 {
            p.to_right.clone()
        } else if k == m {
            beta.clone()
        } else {
            Morphism::identity(&x.component(k))
        }
    })?;
    ComplexExtension::new(a, b)
}

/// Restriction of `0 -> D^{m+1}(C) -> Z -> X -> 0` to degree `m`.
pub fn disk_phi(s: &ComplexExtension) -> Result<Extension> {
    let (_, top) = is_disk(s.left()).ok_or_else(|| Error::Precondition("the left end is not a disk".into()))?;
    s.degree_extension(top - 1)
}

/// From `0 -> Y_m -> E -> C -> 0` to `0 -> Y -> Z̃ -> D^m(C) -> 0`.
///
/// `Z̃_m = E` and `Z̃_{m-1}` is the pushout `Q` of `α` and `∂^Y_m`. The
/// differentials around the modified degrees are `∂_{m+1} = α ∂^Y_{m+1}`,
/// `∂_m = q_E`, and `∂_{m-1} = (0, ∂^Y_{m-1})` out of `Q`.
pub fn source_disk_psi(s: &Extension, y: &ChainComplex, m: i64) -> Result<ComplexExtension> {
    require_short(s)?;
    if s.left() != &y.component(m) {
        return Err(Error::Mismatch(format!("the extension does not start at Y_{m}")));
    }
    let (alpha, beta) = (s.alpha(), s.beta());
    let c = s.right();
    let e = s.middle();
    let q = pushout(alpha, &y.diff(m))?;
    let lo = y.lo().min(m - 1);
    let hi = y.hi().max(m);
    let z_at = |k: i64| -> Module {
        if k == m {
            e.clone()
        } else if k == m - 1 {
            q.module.clone()
        } else {
            y.component(k)
        }
    };
    let mut diffs = Vec::new();
    for k in lo + 1..=hi {
        let d = if k == m + 1 {
            alpha.compose(&y.diff(k))?
        } else if k == m {
            q.from_left.clone()
        } else if k == m - 1 {
            q.factor(&Morphism::zero(e, &y.component(m - 2)), &y.diff(m - 1))?
        } else {
            y.diff(k)
        };
        diffs.push(d);
    }
    let z = ChainComplex::new(lo, (lo..=hi).map(z_at).collect(), diffs)?;
    let disk = ChainComplex::disk(c, m);
    let beta_low = q.factor(beta, &Morphism::zero(&y.component(m - 1), c))?;
    let a = ChainMap::from_fn(y, &z, |k| {
        if k == m {
            alpha.clone()
        } else if k == m - 1 {
            q.from_right.clone()
        } else {
            Morphism::identity(&y.component(k))
        }
    })?;
    let b = ChainMap::from_fn(&z, &disk, |k| {
        if k == m {
            beta.clone()
        } else if k == m - 1 {
            beta_low.clone()
        } else {
            Morphism::zero(&z_at(k), &disk.component(k))
        }
    })?;
    ComplexExtension::new(a, b)
}

/// Restriction of `0 -> Y -> Z -> D^m(C) -> 0` to degree `m`.
pub fn source_disk_phi(s: &ComplexExtension) -> Result<Extension> {
    let (_, top) = is_disk(s.right()).ok_or_else(|| Error::Precondition("the right end is not a disk".into()))?;
    s.degree_extension(top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extalg::{ext_group, phi, psi};
    use crate::modcat::Ring;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    #[test]
    fn disks_are_recognized() {
        let c = m(4, &[2]);
        assert_eq!(is_disk(&ChainComplex::disk(&c, 3)), Some((c.clone(), 3)));
        assert_eq!(is_disk(&ChainComplex::sphere(&c, 3)), None);
        assert_eq!(is_disk(&ChainComplex::disk(&c, 3).widen(0, 5)), Some((c, 3)));
    }

    #[test]
    fn sphere_source_middle_is_four() {
        let z2 = m(4, &[2]);
        let x = ChainComplex::sphere(&z2, 2);
        let g = ext_group(1, &z2, &z2).unwrap();
        let s = psi(&g.element(&[1]), &g).unwrap();
        let t = disk_psi(&s, &x, 2).unwrap();
        assert_eq!(t.middle().component(2), m(4, &[4]));
        assert_eq!(phi(&disk_phi(&t).unwrap(), &g).unwrap().coords, vec![1]);
    }

    #[test]
    fn round_trips_over_small_rings() {
        for n in [4u64, 8] {
            let r = Ring::new(n).unwrap();
            let z = m(n, &[n]);
            let x = ChainComplex::new(
                0,
                vec![m(n, &[2]), z.clone(), z.clone()],
                vec![Morphism::new(z.clone(), m(n, &[2]), vec![vec![1]]).unwrap(), Morphism::scalar(&z, 2)],
            )
            .unwrap();
            for c in r.modules_up_to(4).into_iter().filter(|c| !c.is_zero()) {
                for deg in 0..=2 {
                    let g = ext_group(1, &x.component(deg), &c).unwrap();
                    for e in g.elements() {
                        let s = psi(&e, &g).unwrap();
                        let t = disk_psi(&s, &x, deg).unwrap();
                        assert_eq!(phi(&disk_phi(&t).unwrap(), &g).unwrap().coords, e.coords);
                    }
                    let g = ext_group(1, &c, &x.component(deg)).unwrap();
                    for e in g.elements() {
                        let s = psi(&e, &g).unwrap();
                        let t = source_disk_psi(&s, &x, deg).unwrap();
                        assert_eq!(phi(&source_disk_phi(&t).unwrap(), &g).unwrap().coords, e.coords);
                    }
                }
            }
        }
    }
}
