//! Brute-force enumeration of extension classes, independent of resolutions
//! where it matters. Meant for desk-scale cross-checks only.

use super::{ext_group, psi, ComplexExtension, Extension};
use crate::chaincx::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::modcat::{hom_group, kernel, HomSpace, Module, Morphism};

/// Representatives of the classes of short exact sequences `0 -> D -> E -> C -> 0`,
/// found by running over every middle `E` of the right order and every pair
/// `(α, β)` of maps.
pub fn module_extension_classes(c: &Module, d: &Module) -> Result<Vec<Extension>> {
    let ring = c.ring();
    let order = c.order_u64().zip(d.order_u64()).map(|(a, b)| a * b);
    let order = order.ok_or_else(|| Error::Unsupported("modules too large to enumerate".into()))?;
    let mut classes: Vec<Extension> = Vec::new();
    for e in ring.modules_up_to(order).into_iter().filter(|e| e.order_u64() == Some(order)) {
        let monos: Vec<Morphism> = hom_group(d, &e)?.elements().filter(Morphism::is_mono).collect();
        let epis: Vec<Morphism> = hom_group(&e, c)?.elements().filter(Morphism::is_epi).collect();
        for a in &monos {
            for b in &epis {
                if !b.compose(a)?.is_zero() {
                    continue;
                }
                // orders force exactness once β α = 0
                let s = Extension::short(a.clone(), b.clone())?;
                let mut known = false;
                for r in classes.iter().filter(|r| r.middle() == &e) {
                    if r.is_related(&s)? {
                        known = true;
                        break;
                    }
                }
                if !known {
                    classes.push(s);
                }
            }
        }
    }
    Ok(classes)
}

/// Representatives of the classes of degreewise exact sequences of complexes
/// `0 -> A -> Z -> X -> 0`. Every degree is one of the realized module classes;
/// the differentials of `Z` run over the affine space making `α` and `β` chain
/// maps, filtered by `∂∂ = 0`.
///
/// Fails with `Unsupported` past `limit` candidate middles.
pub fn complex_extension_classes(x: &ChainComplex, a: &ChainComplex, limit: usize) -> Result<Vec<ComplexExtension>> {
    let lo = x.lo().min(a.lo());
    let hi = x.hi().max(a.hi());
    let mut reps: Vec<Vec<Extension>> = Vec::new();
    for m in lo..=hi {
        let g = ext_group(1, &x.component(m), &a.component(m))?;
        reps.push(g.elements().iter().map(|e| psi(e, &g)).collect::<Result<_>>()?);
    }
    let mut choice = vec![0usize; reps.len()];
    let mut classes: Vec<ComplexExtension> = Vec::new();
    let mut seen = 0usize;
    loop {
        let seq: Vec<&Extension> = choice.iter().zip(&reps).map(|(&i, r)| &r[i]).collect();
        for cand in candidates(x, a, lo, &seq)? {
            seen += 1;
            if seen > limit {
                return Err(Error::Unsupported(format!("more than {limit} candidate complexes")));
            }
            let mut known = false;
            for r in &classes {
                if r.middle().modules() == cand.middle().modules() && r.is_related(&cand)? {
                    known = true;
                    break;
                }
            }
            if !known {
                classes.push(cand);
            }
        }
        // odometer over the degreewise choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(classes);
            }
            choice[k] += 1;
            if choice[k] < reps[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Every complex extension whose degree `lo + k` sequence is `seq[k]`.
fn candidates(x: &ChainComplex, a: &ChainComplex, lo: i64, seq: &[&Extension]) -> Result<Vec<ComplexExtension>> {
    let hi = lo + seq.len() as i64 - 1;
    let s = |m: i64| seq[(m - lo) as usize];
    let middles: Vec<Module> = seq.iter().map(|e| e.middle().clone()).collect();
    let mut diffs_all: Vec<Vec<Morphism>> = Vec::new();
    if lo == hi {
        diffs_all.push(Vec::new());
    } else {
        let unknowns =
            HomSpace::new((lo + 1..=hi).map(|m| (s(m).middle().clone(), s(m - 1).middle().clone())).collect())?;
        let mut pairs = Vec::new();
        for m in lo + 1..=hi {
            pairs.push((a.component(m), s(m - 1).middle().clone()));
            pairs.push((s(m).middle().clone(), x.component(m - 1)));
        }
        let eqs = HomSpace::new(pairs)?;
        let sys = unknowns.linear_map(&eqs, |d| {
            let mut out = Vec::new();
            for (k, m) in (lo + 1..=hi).enumerate() {
                out.push(d[k].compose(s(m).alpha())?);
                out.push(s(m - 1).beta().compose(&d[k])?);
            }
            Ok(out)
        })?;
        let mut rhs = Vec::new();
        for m in lo + 1..=hi {
            rhs.push(s(m - 1).alpha().compose(&a.diff(m))?);
            rhs.push(x.diff(m).compose(s(m).beta())?);
        }
        let Some(p) = sys.preimage(&eqs.encode(&rhs)?) else {
            return Ok(Vec::new());
        };
        let ker = kernel(&sys);
        for kv in ker.module.elements() {
            let v = unknowns.module().add_elements(&p, &ker.inclusion.apply(&kv));
            diffs_all.push(unknowns.decode(&v));
        }
    }
    let mut out = Vec::new();
    for diffs in diffs_all {
        let Ok(z) = ChainComplex::new(lo, middles.clone(), diffs) else {
            continue;
        };
        let alpha = ChainMap::from_fn(a, &z, |m| s(m).alpha().clone())?;
        let beta = ChainMap::from_fn(&z, x, |m| s(m).beta().clone())?;
        out.push(ComplexExtension::new(alpha, beta)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::Ring;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    #[test]
    fn module_classes_match_ext_orders() {
        for (n, c, d) in [(4, vec![2], vec![2]), (8, vec![2], vec![4]), (12, vec![6], vec![2]), (9, vec![3], vec![9])] {
            let (c, d) = (m(n, &c), m(n, &d));
            let count = module_extension_classes(&c, &d).unwrap().len() as u64;
            assert_eq!(count, ext_group(1, &c, &d).unwrap().order_u64(), "{c} {d}");
        }
    }

    #[test]
    fn complex_classes_of_spheres() {
        let z2 = m(4, &[2]);
        // concentrated in one degree: the module classes
        let x = ChainComplex::sphere(&z2, 0);
        assert_eq!(complex_extension_classes(&x, &x, 1000).unwrap().len(), 2);
        // S^1 over S^0: Ext^1 of complexes sees Hom(Z/2, Z/2) through the connecting map
        let x1 = ChainComplex::sphere(&z2, 1);
        assert_eq!(complex_extension_classes(&x1, &x, 1000).unwrap().len(), 2);
    }
}
