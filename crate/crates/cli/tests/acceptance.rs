//! The acceptance criteria, one pass/fail line each. Runs as a plain binary
//! so the lines are printed even when every criterion passes.

use homext::adjunct::VerificationReport;
use homext::driver::{run_fuzz, InstanceOutcome, Prop, PROP_IDS};
use homext::extalg::oracle::module_extension_classes;
use homext::extalg::{baer_sum, ext_group, phi, psi, relative_ext_subgroup, Extension};
use homext::fuzz::{instance_rng, random_class, random_module, random_ring, Bounds};
use homext::modcat::{Module, Ring, TestClass};
use rand::Rng;
use std::process::{Command, ExitCode};
use std::time::Instant;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ring(n: u64) -> Ring {
    Ring::new(n).unwrap()
}

fn reports(outcomes: &[InstanceOutcome]) -> Result<Vec<&VerificationReport>, String> {
    outcomes.iter().map(|o| o.result.as_ref().map_err(|e| format!("instance #{} errored: {e}", o.index))).collect()
}

fn first_failure(rs: &[&VerificationReport], pred: impl Fn(&VerificationReport) -> bool) -> Result<(), String> {
    match rs.iter().find(|r| !pred(r)) {
        Some(r) => Err(format!("{r}")),
        None => Ok(()),
    }
}

fn fuzz(prop: &str, seed: u64, count: u64, n: Option<u64>) -> Result<Vec<InstanceOutcome>, String> {
    let p = Prop::parse(prop).map_err(|e| e.to_string())?;
    run_fuzz(p, seed, count, n.map(ring), None).map_err(|e| e.to_string())
}

/// Hom-level adjunctions: 200 instances per variant on each ring.
fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut total = 0;
    for v in 1..=4 {
        for n in [4, 8, 9, 12] {
            let out = fuzz(&format!("1.{v}"), 42, 200, Some(n))?;
            let rs = reports(&out)?;
            first_failure(&rs, |r| r.ok && r.injective && r.surjective == Some(true) && r.natural == Some(true))?;
            total += rs.len();
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("{total} instances took {secs:.1} s"));
    }
    Ok(format!("{total}/{total} bijective and natural in {secs:.1} s"))
}

/// Brute-force middle-object enumeration against the Ext order.
fn criterion_2() -> Verdict {
    let start = Instant::now();
    let two = Module::cyclic(ring(4), 2).unwrap();
    let classes = module_extension_classes(&two, &two).map_err(|e| e.to_string())?;
    if classes.len() != 2 || ext_group(1, &two, &two).unwrap().order_u64() != 2 {
        return Err(format!("Ext^1_Z/4(Z/2, Z/2): {} enumerated classes", classes.len()));
    }
    let mut pairs = 0;
    for n in [4, 8] {
        let mods = ring(n).modules_up_to(4);
        for c in &mods {
            for d in &mods {
                let found = module_extension_classes(c, d).map_err(|e| e.to_string())?.len() as u64;
                let want = ext_group(1, c, d).unwrap().order_u64();
                if found != want {
                    return Err(format!("Ext^1({c}, {d}) over Z/{n}: {found} classes, order {want}"));
                }
                pairs += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 120.0 {
        return Err(format!("enumeration took {secs:.1} s"));
    }
    Ok(format!("Z/4 example has 2 classes; {pairs} pairs agree in {secs:.1} s"))
}

/// phi is a bijective homomorphism from the Baer group, with psi inverse.
fn criterion_3() -> Verdict {
    let mut groups = 0;
    let mut sums = 0;
    for n in [4, 8] {
        let mods = ring(n).modules_up_to(4);
        for c in &mods {
            for d in &mods {
                let g = ext_group(1, c, d).unwrap();
                let reps = module_extension_classes(c, d).map_err(|e| e.to_string())?;
                let coords: Vec<Vec<u64>> = reps
                    .iter()
                    .map(|s| phi(s, &g).map(|e| e.coords))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let mut distinct = coords.clone();
                distinct.sort();
                distinct.dedup();
                if distinct.len() != reps.len() || reps.len() as u64 != g.order_u64() {
                    return Err(format!("phi is not bijective on Ext^1({c}, {d}) over Z/{n}"));
                }
                for (a, sa) in reps.iter().enumerate() {
                    let back: Extension = psi(&g.element(&coords[a]), &g).map_err(|e| e.to_string())?;
                    if !back.is_related(sa).map_err(|e| e.to_string())? {
                        return Err(format!("psi(phi(S)) is not related to S for {sa}"));
                    }
                    for (b, sb) in reps.iter().enumerate() {
                        let sum = baer_sum(sa, sb).map_err(|e| e.to_string())?;
                        if phi(&sum, &g).map_err(|e| e.to_string())?.coords != g.add(&coords[a], &coords[b]) {
                            return Err(format!("phi is not additive on {sa} and {sb}"));
                        }
                        sums += 1;
                    }
                }
                for e in g.elements() {
                    if phi(&psi(&e, &g).map_err(|e| e.to_string())?, &g).map_err(|e| e.to_string())?.coords != e.coords
                    {
                        return Err(format!("phi(psi(e)) differs from e = {:?}", e.coords));
                    }
                }
                groups += 1;
            }
        }
    }
    Ok(format!("{groups} groups, {sums} Baer sums, zero failures"))
}

/// Relative subgroups: the Z/4 example, axioms and monotonicity.
fn criterion_4() -> Verdict {
    let two = Module::cyclic(ring(4), 2).unwrap();
    let class = TestClass::new(ring(4), vec![two.clone()]).unwrap();
    let sub = relative_ext_subgroup(&two, &two, &class).map_err(|e| e.to_string())?;
    if !sub.is_trivial() || sub.group.order_u64() != 2 {
        return Err(format!("Z/4 example: relative order {}, full order {}", sub.order(), sub.group.order_u64()));
    }
    let b = Bounds { max_factors: 2, max_support: 1, max_order: 16 };
    for i in 0..100 {
        let mut rng = instance_rng(42, i);
        let n = random_ring(&mut rng);
        let c = random_module(&mut rng, n, &b);
        let d = random_module(&mut rng, n, &b);
        let f = random_class(&mut rng, n);
        let orders = n.indecomposable_orders();
        let g = f.with_generator(Module::cyclic(n, orders[rng.gen_range(0..orders.len())]).unwrap()).unwrap();
        let small = relative_ext_subgroup(&c, &d, &f).map_err(|e| e.to_string())?;
        let large = relative_ext_subgroup(&c, &d, &g).map_err(|e| e.to_string())?;
        if !small.is_subgroup() || !large.is_subgroup() {
            return Err(format!("triple #{i}: not a subgroup"));
        }
        if !large.members.iter().all(|m| small.contains(m)) {
            return Err(format!("triple #{i}: enlarging {f} to {g} enlarged the subgroup"));
        }
    }
    Ok("Z/4 example trivial inside order 2; 100 triples are subgroups and monotone".into())
}

/// Disk round trips, 50 instances per variant.
fn criterion_5() -> Verdict {
    let mut nontrivial = 0;
    for v in 1..=4 {
        let out = fuzz(&format!("4.2.{v}"), 42, 50, None)?;
        let rs = reports(&out)?;
        first_failure(&rs, |r| {
            r.ok && r.round_trip == Some(true) && (v % 2 == 1 || r.hypothesis("dual_route_ok") == Some(true))
        })?;
        nontrivial += rs.iter().filter(|r| r.left_order > 1).count();
    }
    Ok(format!("200/200 round trips, dual routes agree on variants 2 and 4, {nontrivial} nontrivial groups"))
}

/// Sphere monomorphisms on all instances, isomorphisms under the hypothesis.
fn criterion_6() -> Verdict {
    let mut strict_non_exact: Option<String> = None;
    let mut non_exact = 0;
    for v in 1..=4 {
        let out = fuzz(&format!("5.mono.{v}"), 42, 100, None)?;
        let rs = reports(&out)?;
        first_failure(&rs, |r| r.ok && r.injective)?;
        for r in &rs {
            if r.hypothesis("exact") == Some(false) {
                non_exact += 1;
                if r.has_flag("strict embedding") && strict_non_exact.is_none() {
                    strict_non_exact =
                        Some(format!("{} {} ({} < {})", r.prop, r.instance, r.left_order, r.right_order));
                }
            }
        }
    }
    let Some(strict) = strict_non_exact else {
        return Err("no strict embedding with non-exact X".into());
    };
    let mut held = Vec::new();
    for v in 1..=4 {
        let out = fuzz(&format!("5.iso.{v}"), 42, 100, None)?;
        let rs = reports(&out)?;
        first_failure(&rs, |r| r.ok)?;
        let with: Vec<&&VerificationReport> = rs
            .iter()
            .filter(|r| r.hypothesis("exact") == Some(true) && r.hypothesis("hom_exact") == Some(true))
            .collect();
        if with.len() < 50 {
            return Err(format!("5.iso.{v}: only {} instances meet the hypothesis", with.len()));
        }
        if let Some(r) =
            with.iter().find(|r| !(r.injective && r.surjective == Some(true) && r.round_trip == Some(true)))
        {
            return Err(format!("{r}"));
        }
        first_failure(&rs, |r| {
            r.hypothesis("exact") == Some(true) && r.hypothesis("hom_exact") == Some(true)
                || r.has_flag("hypothesis not met")
        })?;
        held.push(with.len());
    }
    Ok(format!("400/400 injective ({non_exact} non-exact X); strict: {strict}; iso on {:?} hypothesis instances", held))
}

/// relativedwsd on disk-ended extensions.
fn criterion_7() -> Verdict {
    let out = fuzz("4.dwsd", 42, 140, None)?;
    let rs = reports(&out)?;
    let closed: Vec<&&VerificationReport> =
        rs.iter().filter(|r| r.hypothesis("closed_under_extensions") == Some(true)).take(100).collect();
    if closed.len() < 100 {
        return Err(format!("only {} closed instances", closed.len()));
    }
    if let Some(r) = closed.iter().find(|r| !r.ok || r.hypothesis("dw_relative") != r.hypothesis("f_relative")) {
        return Err(format!("{r}"));
    }
    let open: Vec<&&VerificationReport> =
        rs.iter().filter(|r| r.hypothesis("closed_under_extensions") == Some(false)).collect();
    if let Some(r) = open.iter().find(|r| !r.flags.iter().any(|f| f.starts_with("hypothesis violated"))) {
        return Err(format!("unflagged non-closed class: {r}"));
    }
    Ok(format!("100/100 equivalences with closed F; {} non-closed F flagged", open.len()))
}

/// GExt vanishing, three-way agreement and dw = dg.
fn criterion_8() -> Verdict {
    let mut plain_nonzero = 0;
    let mut samples = 0;
    let mut degrees = [0; 2];
    for n in [4, 8, 9] {
        let out = fuzz("6.gext", 42, 100, Some(n))?;
        let rs = reports(&out)?;
        first_failure(&rs, |r| r.ok && r.left_order == 1)?;
        for (o, r) in out.iter().zip(&rs) {
            let i = o.manifest.param("i").unwrap_or(0);
            degrees[(i == 2) as usize] += 1;
            if i == 1 && !(r.injective && r.surjective == Some(true) && r.right_order == 1) {
                return Err(format!("three-way disagreement: {r}"));
            }
            plain_nonzero += r.has_flag("plain ext nonzero") as usize;
        }
        samples += rs.len();
    }
    if plain_nonzero < 10 || degrees.contains(&0) {
        return Err(format!("{plain_nonzero} pairs with nonzero plain Ext, degrees {degrees:?}"));
    }
    let mut maps = 0;
    let mut index_runs = 0;
    while maps < 100 {
        let out = fuzz("6.dwdg", 42 + index_runs, 50, None)?;
        let rs = reports(&out)?;
        first_failure(&rs, |r| r.ok && r.left_order == r.right_order)?;
        maps += rs.iter().map(|r| r.left_order).sum::<u64>();
        index_runs += 1;
    }
    Ok(format!(
        "GExt = 0 on {samples} pairs (i=1: {}, i=2: {}), plain Ext^1 nonzero on {plain_nonzero}; {maps} chain maps nullhomotopic",
        degrees[0], degrees[1]
    ))
}

fn verify_output(id: &str, threads: &str, dir: &std::path::Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_homext"))
        .args(["verify", id, "--fuzz", "42", "100", "--artifacts"])
        .arg(dir)
        .env("HOMEXT_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    Ok(out.stdout)
}

/// Byte-identical reports across runs and thread counts.
fn criterion_9() -> Verdict {
    let dir = std::env::temp_dir().join(format!("homext-acceptance-{}", std::process::id()));
    for id in PROP_IDS {
        let one = verify_output(id, "1", &dir)?;
        let many = verify_output(id, "8", &dir)?;
        if one.is_empty() || one != many {
            return Err(format!("{id}: reports differ between 1 and 8 threads"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} props byte-identical with 1 and 8 threads", PROP_IDS.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("hom adjunctions", criterion_1),
        ("ext enumeration oracle", criterion_2),
        ("phi is a group isomorphism", criterion_3),
        ("relative subgroups", criterion_4),
        ("disk round trips", criterion_5),
        ("sphere mono and iso", criterion_6),
        ("relativedwsd", criterion_7),
        ("gorenstein", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
