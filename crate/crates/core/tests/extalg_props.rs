use homext::extalg::{
    baer_sum, ext_group, free_resolution, phi, psi, relative_ext_subgroup, ExtGroup, Extension, Resolution,
};
use homext::fuzz::{instance_rng, random_class, random_element, random_module, random_ring, Bounds};
use homext::modcat::{kernel, Module, Morphism, Ring, TestClass};
use num_integer::Integer;
use proptest::prelude::*;
use rand::Rng;

fn ring(n: u64) -> Ring {
    Ring::new(n).unwrap()
}

fn cyclic(n: u64, d: u64) -> Module {
    Module::cyclic(ring(n), d).unwrap()
}

/// `|Ext^i(Z/a, Z/b)|` over `Z/N` from the periodic resolution
/// `... -> R -a-> R -(N/a)-> R -a-> R -> Z/a`: the cohomology of
/// `Z/b -a-> Z/b -(N/a)-> Z/b`, the same in every positive degree.
fn cyclic_ext_order(n: u64, a: u64, b: u64) -> u64 {
    (n / a).gcd(&b) * a.gcd(&b) / b
}

#[test]
fn ext_orders_match_the_periodic_resolution() {
    for n in [4, 8, 9, 12] {
        let mods = ring(n).modules_up_to(16);
        for c in &mods {
            for d in &mods {
                let want: u64 = c
                    .factors()
                    .iter()
                    .flat_map(|&a| d.factors().iter().map(move |&b| cyclic_ext_order(n, a, b)))
                    .product();
                for i in 1..=3 {
                    assert_eq!(ext_group(i, c, d).unwrap().order_u64(), want, "Ext^{i}({c}, {d}) over Z/{n}");
                }
            }
        }
    }
}

fn split(g: &ExtGroup) -> Extension {
    Extension::split(g.right(), g.left()).unwrap()
}

fn coords_of(s: &Extension, g: &ExtGroup) -> Vec<u64> {
    phi(s, g).unwrap().coords
}

/// Group laws of the Baer sum, read through phi. Small groups are checked on
/// every pair, larger ones on a seeded sample.
#[test]
fn baer_sum_is_a_group_law_matching_cocycle_addition() {
    let mut rng = instance_rng(3, 0);
    for n in [4, 8, 9, 12] {
        let mods = ring(n).modules_up_to(8);
        for c in &mods {
            for d in &mods {
                let g = ext_group(1, c, d).unwrap();
                let elems = g.elements();
                let reps: Vec<Extension> = elems.iter().map(|e| psi(e, &g).unwrap()).collect();
                for (e, s) in elems.iter().zip(&reps) {
                    assert_eq!(coords_of(s, &g), e.coords, "phi after psi over Z/{n}");
                    assert!(baer_sum(&split(&g), s).unwrap().is_related(s).unwrap(), "split is the identity");
                }
                assert!(coords_of(&split(&g), &g).iter().all(|&x| x == 0));
                let k = elems.len();
                let pairs: Vec<(usize, usize)> = if k <= 16 {
                    (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect()
                } else {
                    (0..48).map(|_| (rng.gen_range(0..k), rng.gen_range(0..k))).collect()
                };
                for (a, b) in pairs {
                    let ab = baer_sum(&reps[a], &reps[b]).unwrap();
                    assert_eq!(coords_of(&ab, &g), g.add(&elems[a].coords, &elems[b].coords));
                    assert!(ab.is_related(&baer_sum(&reps[b], &reps[a]).unwrap()).unwrap(), "commutativity");
                    let c3 = rng.gen_range(0..k);
                    let left = baer_sum(&ab, &reps[c3]).unwrap();
                    let right = baer_sum(&reps[a], &baer_sum(&reps[b], &reps[c3]).unwrap()).unwrap();
                    assert!(left.is_related(&right).unwrap(), "associativity");
                }
            }
        }
    }
}

/// A resolution that covers every syzygy with one generator too many.
fn padded_resolution(c: &Module, depth: usize, rng: &mut impl Rng) -> Resolution {
    let r = c.ring();
    let cover = |target: &Morphism, rng: &mut dyn FnMut(&Module) -> Vec<u64>| -> Morphism {
        // `target` is the inclusion of the module to cover
        let m = target.src();
        let mut cols: Vec<Vec<u64>> = (0..m.rank()).map(|j| m.generator(j)).collect();
        cols.push(rng(m));
        let onto = Morphism::from_columns(Module::free(r, cols.len()), m.clone(), &cols).unwrap();
        target.compose(&onto).unwrap()
    };
    let mut pick = |m: &Module| random_element(rng, m);
    let mut maps = vec![cover(&Morphism::identity(c), &mut pick)];
    for _ in 0..depth {
        let k = kernel(maps.last().unwrap());
        maps.push(cover(&k.inclusion, &mut pick));
    }
    Resolution::from_maps(c, maps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Classes computed against two resolutions correspond under the
    /// comparison map.
    #[test]
    fn phi_does_not_depend_on_the_resolution(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let n = random_ring(&mut rng);
        let b = Bounds { max_factors: 2, max_support: 1, max_order: 16 };
        let c = random_module(&mut rng, n, &b);
        let d = random_module(&mut rng, n, &b);
        let standard = ext_group(1, &c, &d).unwrap();
        let padded = padded_resolution(&c, 2, &mut rng);
        prop_assert!(padded.is_exact());
        let cmp = padded.comparison(&free_resolution(&c, 2).unwrap()).unwrap();
        let other = ExtGroup::from_resolution(1, padded, &d).unwrap();
        prop_assert_eq!(other.order_u64(), standard.order_u64());
        for e in standard.elements() {
            let s = psi(&e, &standard).unwrap();
            let pulled = other.element_from_cocycle(&e.cocycle.compose(&cmp[1]).unwrap()).unwrap();
            prop_assert_eq!(phi(&s, &other).unwrap().coords, pulled.coords);
        }
    }
}

#[test]
fn relative_subgroup_over_four() {
    let two = cyclic(4, 2);
    let full = ext_group(1, &two, &two).unwrap();
    assert_eq!(full.order_u64(), 2);
    let sub = relative_ext_subgroup(&two, &two, &TestClass::new(ring(4), vec![two.clone()]).unwrap()).unwrap();
    assert!(sub.is_trivial());
    let free = relative_ext_subgroup(&two, &two, &TestClass::free(ring(4))).unwrap();
    assert_eq!(free.order(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn relative_subgroups_are_subgroups_and_shrink_as_the_class_grows(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let n = random_ring(&mut rng);
        let b = Bounds { max_factors: 2, max_support: 1, max_order: 16 };
        let c = random_module(&mut rng, n, &b);
        let d = random_module(&mut rng, n, &b);
        let class = random_class(&mut rng, n);
        let sub = relative_ext_subgroup(&c, &d, &class).unwrap();
        prop_assert!(sub.is_subgroup());
        for a in &sub.members {
            let s = psi(&sub.group.element(a), &sub.group).unwrap();
            prop_assert!(s.is_left_relative(&class));
            for b in &sub.members {
                let t = psi(&sub.group.element(b), &sub.group).unwrap();
                prop_assert!(baer_sum(&s, &t).unwrap().is_left_relative(&class));
            }
        }
        let orders = n.indecomposable_orders();
        let extra = Module::cyclic(n, orders[rng.gen_range(0..orders.len())]).unwrap();
        let bigger = class.with_generator(extra).unwrap();
        let smaller_sub = relative_ext_subgroup(&c, &d, &bigger).unwrap();
        prop_assert!(smaller_sub.members.iter().all(|m| sub.contains(m)));
    }
}
