//! Proposition ids, instance generation and the parallel verify runner.
//!
//! Every instance is a [`Manifest`] holding the objects and integer
//! parameters the verifier needs, including the seed and index that drive
//! its random naturality checks. A failing instance can therefore be written
//! out and replayed exactly.

use crate::adjunct::{
    disk_psi, source_disk_psi, verify_hom_adjunction, verify_prop_4_2, verify_prop_5, verify_relativedwsd, Prop5Mode,
    VerificationReport,
};
use crate::chaincx::ChainComplex;
use crate::error::{Error, Result};
use crate::extalg::{psi, relative_ext_subgroup};
use crate::fuzz::{
    instance_rng, random_class, random_closed_class, random_complex, random_element, random_exact_complex,
    random_module, random_nonzero_module, random_ring, Bounds,
};
use crate::gorenstein::{verify_dw_eq_dg, verify_gext, verify_isosgorspheres, w_complexes, GorensteinContext};
use crate::modcat::{Module, Ring, TestClass};
use crate::serial::{Manifest, Object};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use std::fmt;

/// Every accepted proposition id.
pub const PROP_IDS: [&str; 20] = [
    "1.1",
    "1.2",
    "1.3",
    "1.4",
    "4.2.1",
    "4.2.2",
    "4.2.3",
    "4.2.4",
    "4.dwsd",
    "5.mono.1",
    "5.mono.2",
    "5.mono.3",
    "5.mono.4",
    "5.iso.1",
    "5.iso.2",
    "5.iso.3",
    "5.iso.4",
    "6.gext",
    "6.dwdg",
    "6.spheres",
];

/// Stream offset separating the verifier's randomness from generation.
const CHECK_STREAM: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop {
    Hom(u8),
    Disk(u8),
    Dwsd,
    Sphere(u8, Prop5Mode),
    Gext,
    DwDg,
    Spheres,
}

impl Prop {
    pub fn parse(id: &str) -> Result<Prop> {
        let variant = |s: &str| -> Result<u8> {
            match s.parse::<u8>() {
                Ok(v @ 1..=4) => Ok(v),
                _ => Err(Error::Malformed(format!("unknown proposition id '{id}'"))),
            }
        };
        let p = match id.split('.').collect::<Vec<_>>().as_slice() {
            ["1", v] => Prop::Hom(variant(v)?),
            ["4", "2", v] => Prop::Disk(variant(v)?),
            ["4", "dwsd"] => Prop::Dwsd,
            ["5", "mono", v] => Prop::Sphere(variant(v)?, Prop5Mode::Mono),
            ["5", "iso", v] => Prop::Sphere(variant(v)?, Prop5Mode::Iso),
            ["6", "gext"] => Prop::Gext,
            ["6", "dwdg"] => Prop::DwDg,
            ["6", "spheres"] => Prop::Spheres,
            _ => return Err(Error::Malformed(format!("unknown proposition id '{id}'"))),
        };
        Ok(p)
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Hom(v) => write!(f, "1.{v}"),
            Prop::Disk(v) => write!(f, "4.2.{v}"),
            Prop::Dwsd => write!(f, "4.dwsd"),
            Prop::Sphere(v, Prop5Mode::Mono) => write!(f, "5.mono.{v}"),
            Prop::Sphere(v, Prop5Mode::Iso) => write!(f, "5.iso.{v}"),
            Prop::Gext => write!(f, "6.gext"),
            Prop::DwDg => write!(f, "6.dwdg"),
            Prop::Spheres => write!(f, "6.spheres"),
        }
    }
}

fn medium() -> Bounds {
    Bounds { max_factors: 2, max_support: 4, max_order: 64 }
}

/// A degree of `x`, usually one where `x` is nonzero.
fn degree_in(rng: &mut impl Rng, x: &ChainComplex) -> i64 {
    let live: Vec<i64> = (x.lo()..=x.hi()).filter(|&d| !x.component(d).is_zero()).collect();
    match live.choose(rng) {
        Some(&d) if rng.gen_bool(0.9) => d,
        _ => rng.gen_range(x.lo()..=x.hi()),
    }
}

/// A random complex, redrawn a few times if it is zero.
fn live_complex(rng: &mut impl Rng, ring: Ring, bounds: &Bounds) -> Result<ChainComplex> {
    let mut x = random_complex(rng, ring, bounds)?;
    for _ in 0..4 {
        if x.modules().iter().any(|m| !m.is_zero()) {
            break;
        }
        x = random_complex(rng, ring, bounds)?;
    }
    Ok(x)
}

/// Instance `index` of a fuzz run. `ring` fixes the modulus; otherwise it
/// is drawn from the fuzz rings.
pub fn generate(prop: Prop, seed: u64, index: u64, ring: Option<Ring>) -> Result<Manifest> {
    let mut rng = instance_rng(seed, index);
    let ring = match ring {
        Some(r) => r,
        None => random_ring(&mut rng),
    };
    let mut man = Manifest::new(ring);
    man.set_param("seed", seed as i64);
    man.set_param("index", index as i64);
    match prop {
        Prop::Hom(_) => {
            let x = random_complex(&mut rng, ring, &Bounds::default())?;
            let c = random_module(&mut rng, ring, &Bounds::default());
            let m = rng.gen_range(x.lo() - 1..=x.hi() + 1);
            man.set_param("m", m);
            man.insert("X", Object::Complex(x))?;
            man.insert("C", Object::Module(c))?;
        }
        Prop::Disk(_) => {
            let x = live_complex(&mut rng, ring, &Bounds::small())?;
            let c = random_nonzero_module(&mut rng, ring, &Bounds::small());
            let m = degree_in(&mut rng, &x);
            // the empty class leaves the whole Ext group relative
            let class =
                if rng.gen_bool(0.25) { TestClass::new(ring, Vec::new())? } else { random_class(&mut rng, ring) };
            man.set_param("m", m);
            man.insert("X", Object::Complex(x))?;
            man.insert("C", Object::Module(c))?;
            man.insert("F", Object::Class(class))?;
        }
        Prop::Dwsd => {
            let v = rng.gen_range(1..=4u8);
            let x = live_complex(&mut rng, ring, &Bounds::small())?;
            let c = random_nonzero_module(&mut rng, ring, &Bounds::small());
            let m = degree_in(&mut rng, &x);
            let class =
                if rng.gen_bool(0.8) { random_closed_class(&mut rng, ring) } else { random_class(&mut rng, ring) };
            let (end, start) = if v <= 2 { (x.component(m), c.clone()) } else { (c.clone(), x.component(m)) };
            let sub = relative_ext_subgroup(&end, &start, &class)?;
            let coords = if rng.gen_bool(0.5) {
                sub.members.choose(&mut rng).cloned().expect("zero is relative")
            } else {
                random_element(&mut rng, sub.group.module())
            };
            let s = psi(&sub.group.element(&coords), &sub.group)?;
            let t = if v <= 2 { disk_psi(&s, &x, m)? } else { source_disk_psi(&s, &x, m)? };
            man.set_param("variant", i64::from(v));
            man.insert("S", Object::ComplexExtension(t))?;
            man.insert("F", Object::Class(class))?;
        }
        Prop::Sphere(_, mode) => {
            let exact = mode == Prop5Mode::Iso && rng.gen_bool(0.75);
            let x = if exact {
                random_exact_complex(&mut rng, ring, &Bounds::small())?
            } else {
                live_complex(&mut rng, ring, &Bounds::small())?
            };
            let c = random_nonzero_module(&mut rng, ring, &Bounds::small());
            let m = degree_in(&mut rng, &x);
            let class = if mode == Prop5Mode::Iso || rng.gen_bool(0.8) {
                random_closed_class(&mut rng, ring)
            } else {
                random_class(&mut rng, ring)
            };
            man.set_param("m", m);
            man.insert("X", Object::Complex(x))?;
            man.insert("C", Object::Module(c))?;
            man.insert("F", Object::Class(class))?;
        }
        Prop::Gext => {
            let b = Bounds { max_factors: 2, max_support: 1, max_order: 16 };
            let mm = random_module(&mut rng, ring, &b);
            let nn = random_module(&mut rng, ring, &b);
            man.set_param("i", rng.gen_range(1..=2));
            man.insert("M", Object::Module(mm))?;
            man.insert("N", Object::Module(nn))?;
        }
        Prop::DwDg => {
            let x = random_complex(&mut rng, ring, &medium())?;
            let ctx = GorensteinContext::new(ring);
            let pool = w_complexes(&ctx, x.lo(), x.hi());
            let b = pool.choose(&mut rng).expect("nonempty").clone();
            man.insert("X", Object::Complex(x))?;
            man.insert("B", Object::Complex(b))?;
        }
        Prop::Spheres => {
            let x = random_exact_complex(&mut rng, ring, &medium())?;
            let mm = random_module(&mut rng, ring, &medium());
            let m = rng.gen_range(x.lo() - 1..=x.hi() + 1);
            man.set_param("m", m);
            man.insert("X", Object::Complex(x))?;
            man.insert("M", Object::Module(mm))?;
        }
    }
    Ok(man)
}

fn variant_of(man: &Manifest) -> Result<u8> {
    match man.param("variant")? {
        v @ 1..=4 => Ok(v as u8),
        v => Err(Error::Malformed(format!("params.variant: {v} is not in 1..=4"))),
    }
}

/// Runs the verifier for `prop` on a manifest instance.
pub fn run_instance(prop: Prop, man: &Manifest) -> Result<VerificationReport> {
    let seed = man.param("seed").unwrap_or(0) as u64;
    let index = man.param("index").unwrap_or(0) as u64;
    let mut rng = instance_rng(seed, CHECK_STREAM + index);
    let ctx = || GorensteinContext::new(man.ring());
    match prop {
        Prop::Hom(v) => verify_hom_adjunction(v, &man.get("X")?, &man.get("C")?, man.param("m")?, &mut rng),
        Prop::Disk(v) => verify_prop_4_2(v, &man.get("X")?, &man.get("C")?, man.param("m")?, &man.get("F")?, &mut rng),
        Prop::Dwsd => verify_relativedwsd(variant_of(man)?, &man.get("S")?, &man.get("F")?),
        Prop::Sphere(v, mode) => {
            let class: TestClass = man.get("F")?;
            verify_prop_5(v, &man.get("X")?, &man.get("C")?, man.param("m")?, &class, mode, &mut rng)
        }
        Prop::Gext => {
            let i = man.param("i")?;
            if i < 1 {
                return Err(Error::Malformed(format!("params.i: {i} is below 1")));
            }
            let (mm, nn): (Module, Module) = (man.get("M")?, man.get("N")?);
            verify_gext(i as usize, &mm, &nn, &ctx())
        }
        Prop::DwDg => verify_dw_eq_dg(&man.get("X")?, &man.get("B")?, &ctx()),
        Prop::Spheres => verify_isosgorspheres(&man.get("X")?, &man.get("M")?, man.param("m")?, &ctx()),
    }
}

/// One instance of a run.
#[derive(Clone, Debug)]
pub struct InstanceOutcome {
    pub index: u64,
    pub manifest: Manifest,
    pub result: std::result::Result<VerificationReport, Error>,
}

impl InstanceOutcome {
    pub fn ok(&self) -> bool {
        matches!(&self.result, Ok(r) if r.ok)
    }
}

/// `HOMEXT_THREADS` if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("HOMEXT_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Generates and verifies `count` instances, in parallel on at most
/// `threads` threads. The outcomes come back in index order.
pub fn run_fuzz(
    prop: Prop,
    seed: u64,
    count: u64,
    ring: Option<Ring>,
    threads: Option<usize>,
) -> Result<Vec<InstanceOutcome>> {
    let work = |index: u64| -> InstanceOutcome {
        match generate(prop, seed, index, ring) {
            Ok(manifest) => {
                let result = run_instance(prop, &manifest);
                InstanceOutcome { index, manifest, result }
            }
            Err(e) => InstanceOutcome {
                index,
                manifest: Manifest::new(ring.unwrap_or_else(|| Ring::new(2).expect("2 > 1"))),
                result: Err(e),
            },
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(work).collect()))
}

/// The text report: one line per instance in index order, a summary line,
/// and a JSON trailer with summed group orders.
pub fn render_run(prop: Prop, outcomes: &[InstanceOutcome]) -> String {
    let mut out = String::new();
    let (mut left, mut right, mut flagged) = (0u64, 0u64, 0usize);
    for o in outcomes {
        match &o.result {
            Ok(r) => {
                left = left.saturating_add(r.left_order);
                right = right.saturating_add(r.right_order);
                flagged += usize::from(!r.flags.is_empty());
                out.push_str(&format!("#{} {r}\n", o.index));
            }
            Err(e) => out.push_str(&format!("#{} {prop} ERROR {e}\n", o.index)),
        }
    }
    let passed = outcomes.iter().filter(|o| o.ok()).count();
    let ok = passed == outcomes.len();
    out.push_str(&format!("{prop}: {passed}/{} pass, {flagged} flagged\n", outcomes.len()));
    let trailer = serde_json::json!({
        "prop": prop.to_string(),
        "ok": ok,
        "left_order": left,
        "right_order": right,
        "passed": passed,
        "instances": outcomes.len(),
    });
    out.push_str(&trailer.to_string());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse_and_print() {
        for id in PROP_IDS {
            assert_eq!(Prop::parse(id).unwrap().to_string(), id);
        }
        for bad in ["1.5", "4.2", "7.1", "5.iso", "", "6.gext.1"] {
            assert!(Prop::parse(bad).unwrap_err().is_malformed(), "{bad}");
        }
    }

    #[test]
    fn every_prop_generates_and_replays() {
        for id in PROP_IDS {
            let prop = Prop::parse(id).unwrap();
            let man = generate(prop, 5, 0, None).unwrap();
            let replay = Manifest::parse(&man.render()).unwrap();
            let a = run_instance(prop, &man).unwrap();
            let b = run_instance(prop, &replay).unwrap();
            assert_eq!(a, b, "{id}");
            assert!(a.ok, "{a}");
        }
    }

    #[test]
    fn report_is_independent_of_threads() {
        let prop = Prop::parse("1.3").unwrap();
        let one = render_run(prop, &run_fuzz(prop, 42, 12, None, Some(1)).unwrap());
        let four = render_run(prop, &run_fuzz(prop, 42, 12, None, Some(4)).unwrap());
        assert_eq!(one, four);
        assert!(one.contains("\"ok\":true"), "{one}");
    }
}
