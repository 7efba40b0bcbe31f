//! `homext`: exact homological algebra over `Z/N` from the command line.
//!
//! Objects are given inline as JSON, as bare factor lists for modules, or by
//! name from a manifest passed with `--manifest`. Exit codes: 0 on success,
//! 1 on malformed input, an unknown proposition id or a failed verification,
//! 2 when well-formed input violates a precondition.

use clap::{Parser, Subcommand};
use homext::chaincx::{class_membership, ChainComplex, ComplexClassKind, Membership};
use homext::driver::{self, Prop};
use homext::exactlin::{snf, IntMatrix};
use homext::extalg::{baer_sum, ext_group, free_resolution, phi, psi, relative_ext_subgroup, Extension};
use homext::gorenstein::{gext, GorensteinContext};
use homext::modcat::{cokernel, hom_group, kernel, pullback, pushout, Module, Morphism, Ring, TestClass};
use homext::serial::{self, located, parse_module_arg, Canonical, Manifest};
use homext::{Error, Result};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "homext", version, about = "Exact homological algebra over Z/N")]
struct Cli {
    /// Manifest of named objects; its ring is used unless --ring is given.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Modulus N of the ring Z/N.
    #[arg(long, global = true)]
    ring: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix, e.g. "[[2,4],[6,8]]".
    Snf { matrix: String },
    /// Hom(A, B).
    Hom {
        #[arg(short = 'A')]
        a: String,
        #[arg(short = 'B')]
        b: String,
    },
    /// Kernel of a morphism.
    Kernel { map: String },
    /// Cokernel of a morphism.
    Cokernel { map: String },
    /// Pullback of f: A -> C and g: B -> C.
    Pullback { f: String, g: String },
    /// Pushout of f: A -> B and g: A -> C.
    Pushout { f: String, g: String },
    /// Ext^i(C, D), classifying extensions 0 -> D -> ... -> C -> 0.
    Ext {
        #[arg(short = 'C')]
        c: String,
        #[arg(short = 'D')]
        d: String,
        #[arg(short = 'i', default_value_t = 1)]
        i: usize,
    },
    /// GExt^i(M, N) from the Gorenstein-projective resolution.
    Gext {
        #[arg(short = 'M')]
        m: String,
        #[arg(short = 'N')]
        n: String,
        #[arg(short = 'i', default_value_t = 1)]
        i: usize,
    },
    /// Classes of Ext^1(C, D) that stay exact under Hom(F, -).
    Relext {
        #[arg(short = 'C')]
        c: String,
        #[arg(short = 'D')]
        d: String,
        /// A class object, a manifest name, "free" or "all".
        #[arg(short = 'F')]
        class: String,
    },
    /// Baer sum of two 1-extensions with the same ends.
    Baer { first: String, second: String },
    /// Class of an extension in its Ext group.
    Phi { extension: String },
    /// An extension realizing the given coordinates of Ext^i(C, D).
    Psi {
        #[arg(short = 'C')]
        c: String,
        #[arg(short = 'D')]
        d: String,
        #[arg(short = 'i', default_value_t = 1)]
        i: usize,
        /// Coordinates, e.g. "[1]".
        coords: String,
    },
    /// Homology of a complex in every degree of its support.
    Homology { complex: String },
    /// Membership of a complex in the degreewise, exact or dg class of F.
    Membership {
        complex: String,
        #[arg(short = 'F')]
        class: String,
        #[arg(long, value_parser = ["dw", "exact", "dg"], default_value = "dw")]
        kind: String,
    },
    /// Free resolution F_depth -> ... -> F_0 -> M.
    Resolve {
        #[arg(short = 'M')]
        m: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Verify a proposition on a manifest instance or on fuzzed instances.
    Verify {
        prop: String,
        /// Seed and instance count.
        #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
        fuzz: Option<Vec<u64>>,
        /// Directory for manifests of failing instances.
        #[arg(long, default_value = "homext-failures")]
        artifacts: PathBuf,
    },
}

struct Env {
    ring: Ring,
    manifest: Option<Manifest>,
}

impl Env {
    fn load(cli: &Cli) -> Result<Env> {
        let manifest = match &cli.manifest {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Malformed(format!("manifest {}: {e}", p.display())))?;
                Some(Manifest::parse(&text)?)
            }
            None => None,
        };
        let ring = match (cli.ring, &manifest) {
            (Some(n), Some(m)) if n != m.ring().modulus() => {
                return Err(Error::Malformed(format!("--ring {n} disagrees with the manifest ring {}", m.ring())));
            }
            (Some(n), _) => Ring::new(n)?,
            (None, Some(m)) => m.ring(),
            (None, None) => return Err(Error::Malformed("--ring: required without a manifest".into())),
        };
        Ok(Env { ring, manifest })
    }

    /// Errors are prefixed with `field`, the argument they came from.
    fn module(&self, field: &str, arg: &str) -> Result<Module> {
        parse_module_arg(self.ring, arg, self.manifest.as_ref()).map_err(|e| located(field, e))
    }

    fn object<T: Canonical>(&self, field: &str, arg: &str) -> Result<T> {
        let t = arg.trim();
        let result = if t.starts_with('{') {
            serial::parse(self.ring, t)
        } else {
            match &self.manifest {
                Some(m) => m.get(t),
                None => Err(Error::Malformed(format!("'{arg}' is not a JSON object and no manifest was given"))),
            }
        };
        result.map_err(|e| located(field, e))
    }

    fn class(&self, field: &str, arg: &str) -> Result<TestClass> {
        match arg.trim() {
            "free" => Ok(TestClass::free(self.ring)),
            "all" => Ok(TestClass::all(self.ring)),
            _ => self.object(field, arg),
        }
    }
}

fn coords(arg: &str) -> Result<Vec<u64>> {
    serde_json::from_str(arg).map_err(|e| Error::Malformed(format!("coordinates '{arg}': {e}")))
}

/// Prints the canonical JSON line, then the summary.
fn emit(value: serde_json::Value, summary: String) {
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{value}\n{summary}");
}

fn text<T: Canonical>(x: &T) -> serde_json::Value {
    serde_json::to_value(x.to_text()).expect("text types serialize")
}

/// Over the integers, so no ring is needed.
fn smith(matrix: &str) -> Result<()> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(matrix).map_err(|e| Error::Malformed(format!("matrix: {e}")))?;
    let a = IntMatrix::from_rows(&rows)?;
    let d: Vec<String> = snf(&a).diagonal().iter().map(|x| x.to_string()).collect();
    emit(json!({ "diagonal": d }), format!("diagonal: {}", d.join(" ")));
    Ok(())
}

fn compute(env: &Env, command: &Command) -> Result<()> {
    match command {
        Command::Hom { a, b } => {
            let h = hom_group(&env.module("-A", a)?, &env.module("-B", b)?)?;
            let gens: Vec<_> = h.space().generators().iter().map(|g| text(&g[0])).collect();
            let group = h.space().module().clone();
            emit(json!({ "group": text(&group), "generators": gens }), format!("Hom = {group}"));
        }
        Command::Kernel { map } => {
            let k = kernel(&env.object::<Morphism>("map", map)?);
            emit(
                json!({ "module": text(&k.module), "inclusion": text(&k.inclusion) }),
                format!("kernel = {}", k.module),
            );
        }
        Command::Cokernel { map } => {
            let c = cokernel(&env.object::<Morphism>("map", map)?);
            emit(
                json!({ "module": text(&c.module), "projection": text(&c.projection) }),
                format!("cokernel = {}", c.module),
            );
        }
        Command::Pullback { f, g } => {
            let p = pullback(&env.object("f", f)?, &env.object("g", g)?)?;
            emit(
                json!({ "module": text(&p.module), "to_left": text(&p.to_left), "to_right": text(&p.to_right) }),
                format!("pullback = {}", p.module),
            );
        }
        Command::Pushout { f, g } => {
            let p = pushout(&env.object("f", f)?, &env.object("g", g)?)?;
            emit(
                json!({ "module": text(&p.module), "from_left": text(&p.from_left), "from_right": text(&p.from_right) }),
                format!("pushout = {}", p.module),
            );
        }
        Command::Ext { c, d, i } => {
            let g = ext_group(*i, &env.module("-C", c)?, &env.module("-D", d)?)?;
            let gens: Vec<_> =
                (0..g.module().rank()).map(|j| text(&g.element(&g.module().generator(j)).cocycle)).collect();
            emit(
                json!({ "degree": i, "group": text(g.module()), "generator_cocycles": gens }),
                format!("Ext^{i} = {}", g.module()),
            );
        }
        Command::Gext { m, n, i } => {
            let ctx = GorensteinContext::new(env.ring);
            let (mm, nn) = (env.module("-M", m)?, env.module("-N", n)?);
            let g = gext(*i, &mm, &nn, &ctx)?;
            let plain = ext_group(*i, &mm, &nn)?;
            emit(
                json!({ "degree": i, "group": text(g.module()), "plain_ext": text(plain.module()) }),
                format!("GExt^{i} = {} (Ext^{i} = {})", g.module(), plain.module()),
            );
        }
        Command::Relext { c, d, class } => {
            let sub = relative_ext_subgroup(&env.module("-C", c)?, &env.module("-D", d)?, &env.class("-F", class)?)?;
            emit(
                json!({ "group": text(sub.group.module()), "members": sub.members }),
                format!("{} of {} classes are relative", sub.order(), sub.group.order_u64()),
            );
        }
        Command::Baer { first, second } => {
            let (s1, s2): (Extension, Extension) = (env.object("first", first)?, env.object("second", second)?);
            let sum = baer_sum(&s1, &s2)?;
            let g = ext_group(1, sum.right(), sum.left())?;
            let class = phi(&sum, &g)?;
            let summary = if sum.is_split() { "split".to_string() } else { format!("class {:?}", class.coords) };
            emit(json!({ "extension": text(&sum), "class": class.coords }), summary);
        }
        Command::Phi { extension } => {
            let s: Extension = env.object("extension", extension)?;
            let g = ext_group(s.degree(), s.right(), s.left())?;
            let e = phi(&s, &g)?;
            emit(
                json!({ "group": text(g.module()), "class": e.coords }),
                format!("class {:?} in {}", e.coords, g.module()),
            );
        }
        Command::Psi { c, d, i, coords: cs } => {
            let g = ext_group(*i, &env.module("-C", c)?, &env.module("-D", d)?)?;
            let s = psi(&g.element(&coords(cs)?), &g)?;
            emit(text(&s), format!("{s}"));
        }
        Command::Homology { complex } => {
            let x: ChainComplex = env.object("complex", complex)?;
            let h: Vec<_> = x.degrees().map(|m| json!({ "degree": m, "module": text(&x.homology(m)) })).collect();
            let summary = x.degrees().map(|m| format!("H_{m} = {}", x.homology(m))).collect::<Vec<_>>().join(", ");
            emit(json!({ "homology": h, "exact": x.is_exact() }), summary);
        }
        Command::Membership { complex, class, kind } => {
            let x: ChainComplex = env.object("complex", complex)?;
            let k = match kind.as_str() {
                "dw" => ComplexClassKind::DegreewiseF,
                "exact" => ComplexClassKind::FComplex,
                _ => ComplexClassKind::DgF,
            };
            let answer = match class_membership(&x, k, &env.class("-F", class)?) {
                Membership::Yes => "yes",
                Membership::No => "no",
                Membership::Undecidable => "undecidable here",
            };
            emit(json!({ "kind": kind, "member": answer }), format!("{kind} membership: {answer}"));
        }
        Command::Resolve { m, depth } => {
            let res = free_resolution(&env.module("-M", m)?, *depth)?;
            let maps: Vec<_> = (0..=res.depth()).map(|k| text(res.map(k))).collect();
            let frees = (0..=res.depth()).map(|k| res.free(k).to_string()).collect::<Vec<_>>().join(" <- ");
            emit(json!({ "maps": maps, "exact": res.is_exact() }), format!("M <- {frees}"));
        }
        Command::Snf { .. } | Command::Verify { .. } => unreachable!("handled without a ring"),
    }
    Ok(())
}

fn verify(cli: &Cli, prop: &str, fuzz: &Option<Vec<u64>>, artifacts: &PathBuf) -> Result<bool> {
    let p = Prop::parse(prop)?;
    let outcomes = match fuzz {
        Some(v) => {
            let ring = cli.ring.map(Ring::new).transpose()?;
            driver::run_fuzz(p, v[0], v[1], ring, driver::threads_from_env())?
        }
        None => {
            let env = Env::load(cli)?;
            let manifest = env.manifest.ok_or_else(|| Error::Malformed("verify needs --fuzz or --manifest".into()))?;
            let result = driver::run_instance(p, &manifest);
            if let Err(e @ Error::Precondition(_)) = &result {
                return Err(e.clone());
            }
            vec![driver::InstanceOutcome { index: 0, manifest, result }]
        }
    };
    let _ = write!(std::io::stdout(), "{}", driver::render_run(p, &outcomes));
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.ok()).collect();
    if !failed.is_empty() && fuzz.is_some() {
        std::fs::create_dir_all(artifacts)
            .map_err(|e| Error::Malformed(format!("artifacts {}: {e}", artifacts.display())))?;
        for o in &failed {
            let path = artifacts.join(format!("{p}-{}.json", o.index));
            std::fs::write(&path, o.manifest.render())
                .map_err(|e| Error::Malformed(format!("artifacts {}: {e}", path.display())))?;
            eprintln!("replay: homext --manifest {} verify {p}", path.display());
        }
    }
    Ok(failed.is_empty())
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::Precondition(_) | Error::Unsupported(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Verify { prop, fuzz, artifacts } => verify(&cli, prop, fuzz, artifacts),
        Command::Snf { matrix } => smith(matrix).map(|_| true),
        other => Env::load(&cli).and_then(|env| compute(&env, other)).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
