use super::VerificationReport;
use crate::chaincx::{ChainComplex, ChainMap, ChainMapGroup};
use crate::error::{Error, Result};
use crate::modcat::{hom_group, Module, Morphism};
use rand::Rng;

/// Enumerate every element when the group is at most this large, otherwise
/// check generators only (all maps involved are additive).
const EXHAUSTIVE: u64 = 256;

/// The complex built from `C` in variant `v`: `D^m`, `D^m`, `S^m`, `S^m`.
fn functor(v: u8, c: &Module, m: i64) -> ChainComplex {
    if v <= 2 {
        ChainComplex::disk(c, m)
    } else {
        ChainComplex::sphere(c, m)
    }
}

fn functor_map(v: u8, g: &Morphism, m: i64) -> Result<ChainMap> {
    ChainMap::from_fn(&functor(v, g.src(), m), &functor(v, g.dst(), m), |_| g.clone())
}

/// Module-side Hom ends for variant `v` on the complex `x` (called `Y` in
/// variants 2 and 4).
fn module_ends(v: u8, x: &ChainComplex, c: &Module, m: i64) -> (Module, Module) {
    match v {
        1 => (x.component(m - 1), c.clone()),
        2 => (c.clone(), x.component(m)),
        3 => (x.quotient(m).module, c.clone()),
        _ => (c.clone(), x.cycles(m).module),
    }
}

fn complex_ends(v: u8, x: &ChainComplex, c: &Module, m: i64) -> (ChainComplex, ChainComplex) {
    let f = functor(v, c, m);
    if v % 2 == 1 {
        (x.clone(), f)
    } else {
        (f, x.clone())
    }
}

fn check_variant(v: u8) -> Result<()> {
    if (1..=4).contains(&v) {
        Ok(())
    } else {
        Err(Error::Malformed(format!("unknown adjunction variant {v}")))
    }
}

/// The module-to-complex direction of adjunction `v`:
/// 1. `f ↦ (f ∂_m, f)` in degrees `m, m-1`;
/// 2. `f ↦ (f, ∂_m f)`;
/// 3. `f ↦ f π_m`;
/// 4. `f ↦ ι_m f`.
pub fn hom_unit(v: u8, x: &ChainComplex, c: &Module, m: i64, f: &Morphism) -> Result<ChainMap> {
    check_variant(v)?;
    let (src, dst) = complex_ends(v, x, c, m);
    let comp: Vec<(i64, Morphism)> = match v {
        1 => vec![(m, f.compose(&x.diff(m))?), (m - 1, f.clone())],
        2 => vec![(m, f.clone()), (m - 1, x.diff(m).compose(f)?)],
        3 => vec![(m, f.compose(&x.quotient(m).projection)?)],
        _ => vec![(m, x.cycles(m).inclusion.compose(f)?)],
    };
    ChainMap::from_fn(&src, &dst, |k| {
        comp.iter()
            .find(|(d, _)| *d == k)
            .map(|(_, g)| g.clone())
            .unwrap_or_else(|| Morphism::zero(&src.component(k), &dst.component(k)))
    })
}

/// The inverse direction: read off a component, factoring through the
/// cokernel or kernel in variants 3 and 4.
pub fn hom_counit(v: u8, x: &ChainComplex, _c: &Module, m: i64, g: &ChainMap) -> Result<Morphism> {
    check_variant(v)?;
    match v {
        1 => Ok(g.component(m - 1)),
        2 => Ok(g.component(m)),
        3 => x.quotient(m).factor(&g.component(m)),
        _ => x.cycles(m).factor(&g.component(m)),
    }
}

fn random_element(m: &Module, rng: &mut impl Rng) -> Vec<u64> {
    match m.order_u64() {
        Some(n) if n > 0 => m.element_at(rng.gen_range(0..n)),
        _ => m.zero_element(),
    }
}

/// Checks adjunction `v` on one instance: the unit is a group isomorphism,
/// the counit inverts it, and both squares of naturality commute for a random
/// module map and a random chain endomorphism.
pub fn verify_hom_adjunction(
    v: u8,
    x: &ChainComplex,
    c: &Module,
    m: i64,
    rng: &mut impl Rng,
) -> Result<VerificationReport> {
    check_variant(v)?;
    let mut report = VerificationReport::new(&format!("1.{v}"), format!("X={x}; C={c}; m={m}"));
    let (a, b) = module_ends(v, x, c, m);
    let (src, dst) = complex_ends(v, x, c, m);
    let hom = hom_group(&a, &b)?;
    let chain = ChainMapGroup::new(&src, &dst)?;
    let hom_module = hom.space().module().clone();
    report.left_order = hom_module.order_u64().unwrap_or(u64::MAX);
    report.right_order = chain.module().order_u64().unwrap_or(u64::MAX);

    let cols = (0..hom_module.rank())
        .map(|j| chain.encode(&hom_unit(v, x, c, m, &hom.from_coordinates(&hom_module.generator(j)))?))
        .collect::<Result<Vec<_>>>()?;
    let unit = Morphism::from_columns(hom_module.clone(), chain.module().clone(), &cols)?;
    report.injective = unit.is_mono();
    report.surjective = Some(unit.is_epi());

    let small = report.left_order <= EXHAUSTIVE;
    let module_side: Vec<Morphism> = if small { hom.elements().collect() } else { hom.generators.clone() };
    let chain_side: Vec<ChainMap> = if small { chain.elements().collect() } else { chain.generators() };
    let mut round_trip = true;
    for f in &module_side {
        if &hom_counit(v, x, c, m, &hom_unit(v, x, c, m, f)?)? != f {
            round_trip = false;
            report.fail(format!("counit(unit(f)) != f for f = {:?}", f.matrix()));
        }
    }
    for g in &chain_side {
        if &hom_unit(v, x, c, m, &hom_counit(v, x, c, m, g)?)? != g {
            round_trip = false;
            report.fail(format!("unit(counit(g)) != g for g = {g}"));
        }
    }
    report.round_trip = Some(round_trip);

    // a random target module C' and maps in the direction each variant needs
    let ring = c.ring();
    let pool = ring.modules_up_to(ring.modulus() * ring.modulus());
    let c2 = pool[rng.gen_range(0..pool.len())].clone();
    let (g_src, g_dst) = if v % 2 == 1 { (c.clone(), c2.clone()) } else { (c2.clone(), c.clone()) };
    let gh = hom_group(&g_src, &g_dst)?;
    let g = gh.from_coordinates(&random_element(gh.space().module(), rng));
    let ends = ChainMapGroup::new(x, x)?;
    let h = ends.decode(&random_element(ends.module(), rng));
    let fg = functor_map(v, &g, m)?;
    let mut natural = true;
    for f in &module_side {
        let unit_f = hom_unit(v, x, c, m, f)?;
        let (lhs, rhs) = match v {
            1 => (
                hom_unit(v, x, &c2, m, &g.compose(f)?.compose(&h.component(m - 1))?)?,
                fg.compose(&unit_f)?.compose(&h)?,
            ),
            2 => (hom_unit(v, x, &c2, m, &h.component(m).compose(f)?.compose(&g)?)?, h.compose(&unit_f)?.compose(&fg)?),
            3 => (
                hom_unit(v, x, &c2, m, &g.compose(f)?.compose(&h.quotient_map(m)?)?)?,
                fg.compose(&unit_f)?.compose(&h)?,
            ),
            _ => {
                (hom_unit(v, x, &c2, m, &h.cycles_map(m)?.compose(f)?.compose(&g)?)?, h.compose(&unit_f)?.compose(&fg)?)
            }
        };
        if lhs != rhs {
            natural = false;
            report.fail(format!("naturality square fails at f = {:?}", f.matrix()));
            break;
        }
    }
    report.natural = Some(natural);
    report.ok = report.witness.is_none() && unit.is_iso() && round_trip && natural;
    if !unit.is_iso() {
        report.fail("unit is not an isomorphism");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::Ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(n: u64, f: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), f.to_vec()).unwrap()
    }

    #[test]
    fn all_variants_on_a_doubling_complex() {
        let z4 = m(4, &[4]);
        let x = ChainComplex::new(
            0,
            vec![z4.clone(), z4.clone(), z4.clone()],
            vec![Morphism::scalar(&z4, 2), Morphism::scalar(&z4, 2)],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for v in 1..=4 {
            for deg in -1..=3 {
                let r = verify_hom_adjunction(v, &x, &m(4, &[2]), deg, &mut rng).unwrap();
                assert!(r.ok, "{r}");
            }
        }
    }

    #[test]
    fn disk_into_sphere_counts() {
        // Hom_Ch(D^m(Z/2), S^m(Z/4)) over Z/8 via variant 2 with Y = S^m(Z/4)
        let y = ChainComplex::sphere(&m(8, &[4]), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = verify_hom_adjunction(2, &y, &m(8, &[2]), 2, &mut rng).unwrap();
        assert!(r.ok);
        assert_eq!((r.left_order, r.right_order), (2, 2));
    }
}
