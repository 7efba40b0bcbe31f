use homext::chaincx::ChainComplex;
use homext::modcat::{Module, Morphism, Ring, TestClass};
use homext::serial::{Manifest, Object};
use std::path::PathBuf;
use std::process::{Command, Output};

fn homext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homext")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("homext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const NONSPLIT: &str = r#"{"degree":1,"maps":[{"from":{"factors":[2]},"to":{"factors":[4]},"matrix":[[2]]},{"from":{"factors":[4]},"to":{"factors":[2]},"matrix":[[1]]}]}"#;

#[test]
fn ext_over_four_has_a_generator_cocycle() {
    let o = homext(&["ext", "--ring", "4", "-C", "[2]", "-D", "[2]", "-i", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let json: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(json["group"]["factors"], serde_json::json!([2]));
    assert_eq!(json["generator_cocycles"].as_array().unwrap().len(), 1);
    assert!(out.contains("Z/2"), "{out}");
}

#[test]
fn baer_square_of_the_nonsplit_class_splits() {
    let o = homext(&["baer", "--ring", "4", NONSPLIT, NONSPLIT]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1), Some("split"));
}

#[test]
fn hom_from_two_to_four_over_eight() {
    let o = homext(&["hom", "--ring", "8", "-A", "[2]", "-B", "[4]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Z/2"), "{}", stdout(&o));
}

#[test]
fn snf_needs_no_ring() {
    let o = homext(&["snf", "[[2,4],[6,8]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1), Some("diagonal: 2 4"));
}

#[test]
fn phi_and_psi_are_inverse_on_the_command_line() {
    let o = homext(&["phi", "--ring", "4", NONSPLIT]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"class\":[1]"));
    let o = homext(&["psi", "--ring", "4", "-C", "[2]", "-D", "[2]", "[1]"]);
    assert_eq!(stdout(&o).lines().next(), Some(NONSPLIT));
}

#[test]
fn verify_hom_adjunction_over_eight() {
    let dir = scratch("artifacts-1.1");
    let o = homext(&["verify", "1.1", "--fuzz", "42", "100", "--ring", "8", "--artifacts", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1.1: 100/100 pass"), "{}", stdout(&o));
}

#[test]
fn verify_gext_over_four() {
    let o = homext(&["verify", "6.gext", "--fuzz", "7", "50", "--ring", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("6.gext: 50/50 pass"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with('#') && l.contains("left=1 ")).count(), 50);
}

#[test]
fn iso_on_a_non_exact_complex_is_flagged() {
    let ring = Ring::new(4).unwrap();
    let four = Module::cyclic(ring, 4).unwrap();
    let x = ChainComplex::new(0, vec![four.clone(), four.clone()], vec![Morphism::scalar(&four, 2)]).unwrap();
    assert!(!x.is_exact());
    let mut man = Manifest::new(ring);
    man.set_param("m", 0);
    man.insert("X", Object::Complex(x)).unwrap();
    man.insert("C", Object::Module(Module::cyclic(ring, 2).unwrap())).unwrap();
    man.insert("F", Object::Class(TestClass::free(ring))).unwrap();
    let path = scratch("non-exact.json");
    std::fs::write(&path, man.render()).unwrap();
    let o = homext(&["verify", "5.iso.1", "--manifest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("hypothesis not met"), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    // malformed input names the field
    let o = homext(&["hom", "--ring", "8", "-A", "[3]", "-B", "[4]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("-A"), "{}", stderr(&o));
    let o = homext(&["kernel", "--ring", "4", r#"{"from":{"factors":[2]},"to":{"factors":[4]},"matrix":[[1]]}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("matrix"), "{}", stderr(&o));
    // a non-exact sequence is a precondition violation
    let bad = r#"{"degree":1,"maps":[{"from":{"factors":[2]},"to":{"factors":[4]},"matrix":[[2]]},{"from":{"factors":[4]},"to":{"factors":[2]},"matrix":[[0]]}]}"#;
    assert_eq!(homext(&["phi", "--ring", "4", bad]).status.code(), Some(2));
    assert_eq!(homext(&["ext", "--ring", "4", "-C", "[2]", "-D", "[2]", "-i", "0"]).status.code(), Some(2));
    let o = homext(&["verify", "7.1", "--fuzz", "1", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("7.1"), "{}", stderr(&o));
    assert_eq!(homext(&["hom", "-A", "[2]", "-B", "[4]"]).status.code(), Some(1));
}

#[test]
fn names_resolve_through_a_manifest() {
    let path = scratch("names.json");
    let text = r#"{
  "ring": 4,
  "objects": {
    "A": {"kind": "module", "factors": [2]},
    "S": {"kind": "extension", "degree": 1, "maps": [
      {"from": "A", "to": {"factors": [4]}, "matrix": [[2]]},
      {"from": {"factors": [4]}, "to": "A", "matrix": [[1]]}
    ]}
  }
}"#;
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let o = homext(&["baer", "--manifest", p, "S", "S"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().nth(1), Some("split"));
    let o = homext(&["hom", "--manifest", p, "-A", "A", "-B", "[4]"]);
    assert!(stdout(&o).contains("Z/2"));
    let o = homext(&["hom", "--manifest", p, "-A", "B", "-B", "[4]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("'B'"), "{}", stderr(&o));
}
