use crate::chaincx::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::extalg::{ComplexExtension, Extension};
use crate::modcat::{pullback, pushout, Module, Morphism};

fn require_short(s: &Extension) -> Result<()> {
    if s.degree() != 1 {
        return Err(Error::Unsupported("sphere maps are implemented for 1-extensions".into()));
    }
    Ok(())
}

/// From `0 -> C -> E -> Q_m(X) -> 0` to `0 -> S^m(C) -> Z̃ -> X -> 0`.
///
/// `Z̃_m` is the pullback of `β` and `π_m: X_m -> Q_m(X)`; the other degrees
/// are those of `X`. `∂_{m+1} = (0, ∂^X_{m+1})` lands in the pullback since
/// `π_m ∂^X_{m+1} = 0`, and `∂_m = ∂^X_m β̃_m`.
pub fn sphere_lift(s: &Extension, x: &ChainComplex, m: i64) -> Result<ComplexExtension> {
    require_short(s)?;
    let q = x.quotient(m);
    if s.right() != &q.module {
        return Err(Error::Mismatch(format!("the extension does not end at Q_{m}(X)")));
    }
    let (alpha, beta) = (s.alpha(), s.beta());
    let (c, e) = (s.left(), s.middle());
    let p = pullback(beta, &q.projection)?;
    let lo = x.lo().min(m);
    let hi = x.hi().max(m);
    let z_at = |k: i64| if k == m { p.module.clone() } else { x.component(k) };
    let mut diffs = Vec::new();
    for k in lo + 1..=hi {
        let d = if k == m + 1 {
            p.factor(&Morphism::zero(&x.component(k), e), &x.diff(k))?
        } else if k == m {
            x.diff(m).compose(&p.to_right)?
        } else {
            x.diff(k)
        };
        diffs.push(d);
    }
    let z = ChainComplex::new(lo, (lo..=hi).map(z_at).collect(), diffs)?;
    let sphere = ChainComplex::sphere(c, m);
    let alpha_m = p.factor(alpha, &Morphism::zero(c, &x.component(m)))?;
    let a = ChainMap::from_fn(&sphere, &z, |k| {
        if k == m {
            alpha_m.clone()
        } else {
            Morphism::zero(&sphere.component(k), &z_at(k))
        }
    })?;
    let b =
        ChainMap::from_fn(&z, x, |k| if k == m { p.to_right.clone() } else { Morphism::identity(&x.component(k)) })?;
    ComplexExtension::new(a, b)
}

/// `0 -> S^m(C) -> Z -> X -> 0` to `0 -> C -> Q_m(Z) -> Q_m(X) -> 0`.
/// Exactness of the output is checked, and fails in general when `X` is not
/// exact.
pub fn sphere_project(s: &ComplexExtension, m: i64) -> Result<Extension> {
    let (c, top) = sphere_of(s.left())?;
    if top != m {
        return Err(Error::Mismatch(format!("the left end is a sphere in degree {top}, not {m}")));
    }
    let into_quotient = s.left().quotient(m).projection;
    let alpha = s.alpha().quotient_map(m)?.compose(&into_quotient)?;
    let beta = s.beta().quotient_map(m)?;
    debug_assert_eq!(alpha.src(), &c);
    Extension::short(alpha, beta)
}

/// From `0 -> Z_m(Y) -> E -> C -> 0` to `0 -> Y -> Z̃ -> S^m(C) -> 0`.
///
/// `Z̃_m` is the pushout of `α` and the inclusion `Z_m(Y) -> Y_m`. The map
/// `∂_m = (0, ∂^Y_m)` out of the pushout is defined because `∂^Y_m` kills
/// the cycles.
pub fn cycle_lift(s: &Extension, y: &ChainComplex, m: i64) -> Result<ComplexExtension> {
    require_short(s)?;
    let zc = y.cycles(m);
    if s.left() != &zc.module {
        return Err(Error::Mismatch(format!("the extension does not start at Z_{m}(Y)")));
    }
    let (alpha, beta) = (s.alpha(), s.beta());
    let (c, e) = (s.right(), s.middle());
    let q = pushout(alpha, &zc.inclusion)?;
    let lo = y.lo().min(m);
    let hi = y.hi().max(m);
    let z_at = |k: i64| if k == m { q.module.clone() } else { y.component(k) };
    let mut diffs = Vec::new();
    for k in lo + 1..=hi {
        let d = if k == m + 1 {
            q.from_right.compose(&y.diff(k))?
        } else if k == m {
            q.factor(&Morphism::zero(e, &y.component(m - 1)), &y.diff(m))?
        } else {
            y.diff(k)
        };
        diffs.push(d);
    }
    let z = ChainComplex::new(lo, (lo..=hi).map(z_at).collect(), diffs)?;
    let sphere = ChainComplex::sphere(c, m);
    let beta_m = q.factor(beta, &Morphism::zero(&y.component(m), c))?;
    let a =
        ChainMap::from_fn(y, &z, |k| if k == m { q.from_right.clone() } else { Morphism::identity(&y.component(k)) })?;
    let b = ChainMap::from_fn(&z, &sphere, |k| {
        if k == m {
            beta_m.clone()
        } else {
            Morphism::zero(&z_at(k), &sphere.component(k))
        }
    })?;
    ComplexExtension::new(a, b)
}

/// `0 -> Y -> Z -> S^m(C) -> 0` to `0 -> Z_m(Y) -> Z_m(Z) -> C -> 0`.
pub fn cycle_project(s: &ComplexExtension, m: i64) -> Result<Extension> {
    let (_, top) = sphere_of(s.right())?;
    if top != m {
        return Err(Error::Mismatch(format!("the right end is a sphere in degree {top}, not {m}")));
    }
    let out_of_cycles = s.right().cycles(m).inclusion;
    let alpha = s.alpha().cycles_map(m)?;
    let beta = out_of_cycles.compose(&s.beta().cycles_map(m)?)?;
    Extension::short(alpha, beta)
}

/// `(C, m)` for `S^m(C)`, allowing zero padding.
fn sphere_of(x: &ChainComplex) -> Result<(Module, i64)> {
    let t = x.trimmed();
    if t.modules().len() == 1 {
        Ok((t.modules()[0].clone(), t.lo()))
    } else {
        Err(Error::Precondition("the end is not a sphere".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extalg::{ext_group, phi, psi};
    use crate::modcat::Ring;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    fn doubling() -> ChainComplex {
        let z4 = m(4, &[4]);
        ChainComplex::new(0, vec![z4.clone(), z4.clone()], vec![Morphism::scalar(&z4, 2)]).unwrap()
    }

    #[test]
    fn lift_of_top_degree_has_order_eight() {
        // Q_1 of 0 -> Z/4 -> Z/4 -> 0 is Z/4 itself; lifting a nonsplit class
        let x = doubling();
        let c = m(4, &[2]);
        let g = ext_group(1, &x.quotient(1).module, &c).unwrap();
        let s = psi(&g.element(&[1]), &g).unwrap();
        let t = sphere_lift(&s, &x, 1).unwrap();
        assert_eq!(t.middle().component(1).order_u64(), Some(8));
    }

    #[test]
    fn sphere_round_trip_on_a_doubling_complex() {
        let x = doubling();
        for deg in 0..=1 {
            for c in [m(4, &[2]), m(4, &[4]), m(4, &[2, 4])] {
                let g = ext_group(1, &x.quotient(deg).module, &c).unwrap();
                for e in g.elements() {
                    let t = sphere_lift(&psi(&e, &g).unwrap(), &x, deg).unwrap();
                    let back = sphere_project(&t, deg).unwrap();
                    assert_eq!(phi(&back, &g).unwrap().coords, e.coords);
                }
            }
        }
    }

    #[test]
    fn cycle_round_trip() {
        let x = doubling();
        for deg in 0..=1 {
            let c = m(4, &[2]);
            let g = ext_group(1, &c, &x.cycles(deg).module).unwrap();
            for e in g.elements() {
                let t = cycle_lift(&psi(&e, &g).unwrap(), &x, deg).unwrap();
                let back = cycle_project(&t, deg).unwrap();
                assert_eq!(phi(&back, &g).unwrap().coords, e.coords);
            }
        }
    }
}
