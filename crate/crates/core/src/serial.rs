//! The shared JSON text format for every domain object, and manifests of
//! named objects.
//!
//! Output is canonical: factor lists in invariant-factor form, matrix entries
//! reduced modulo the target factors, fields in a fixed order. Parsing then
//! printing canonical text returns the same bytes.
//!
//! Inside a manifest, any nested module, morphism, complex or chain map may
//! be given by name instead of inline.

use crate::chaincx::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::extalg::{ComplexExtension, Extension};
use crate::modcat::{Module, Morphism, Ring, TestClass};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type Matrix = Vec<Vec<u64>>;

/// A nested object, inline or by manifest name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Name(String),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleText {
    pub factors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismText {
    pub from: Ref<ModuleText>,
    pub to: Ref<ModuleText>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexText {
    pub lo: i64,
    pub hi: i64,
    pub modules: Vec<Ref<ModuleText>>,
    /// `diffs[i]` maps degree `lo + i + 1` to `lo + i`.
    pub diffs: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionText {
    pub degree: usize,
    pub maps: Vec<Ref<MorphismText>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassText {
    pub generators: Vec<Ref<ModuleText>>,
}

/// Components over the union of the two supports, from degree `lo` up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapText {
    pub from: Ref<ComplexText>,
    pub to: Ref<ComplexText>,
    pub lo: i64,
    pub components: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexExtensionText {
    pub alpha: Ref<ChainMapText>,
    pub beta: Ref<ChainMapText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectText {
    Module(ModuleText),
    Morphism(MorphismText),
    Complex(ComplexText),
    Extension(ExtensionText),
    Class(ClassText),
    ChainMap(ChainMapText),
    ComplexExtension(ComplexExtensionText),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Module(Module),
    Morphism(Morphism),
    Complex(ChainComplex),
    Extension(Extension),
    Class(TestClass),
    ChainMap(ChainMap),
    ComplexExtension(ComplexExtension),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Module(_) => "module",
            Object::Morphism(_) => "morphism",
            Object::Complex(_) => "complex",
            Object::Extension(_) => "extension",
            Object::Class(_) => "class",
            Object::ChainMap(_) => "chain_map",
            Object::ComplexExtension(_) => "complex_extension",
        }
    }

    pub fn to_text(&self) -> ObjectText {
        match self {
            Object::Module(x) => ObjectText::Module(x.to_text()),
            Object::Morphism(x) => ObjectText::Morphism(x.to_text()),
            Object::Complex(x) => ObjectText::Complex(x.to_text()),
            Object::Extension(x) => ObjectText::Extension(x.to_text()),
            Object::Class(x) => ObjectText::Class(x.to_text()),
            Object::ChainMap(x) => ObjectText::ChainMap(x.to_text()),
            Object::ComplexExtension(x) => ObjectText::ComplexExtension(x.to_text()),
        }
    }
}

/// Prefixes an error message with the field it came from, keeping the kind.
/// Prefixes an error message with the location of the offending field.
pub fn located(path: &str, e: Error) -> Error {
    match e {
        Error::Malformed(s) => Error::Malformed(format!("{path}: {s}")),
        Error::InvalidModule(s) => Error::InvalidModule(format!("{path}: {s}")),
        Error::NotWellDefined(s) => Error::NotWellDefined(format!("{path}: {s}")),
        Error::Shape(s) => Error::Shape(format!("{path}: {s}")),
        Error::RingMismatch(a, b) => Error::Malformed(format!("{path}: ring Z/{a} where Z/{b} was expected")),
        Error::Mismatch(s) => Error::Mismatch(format!("{path}: {s}")),
        Error::Precondition(s) => Error::Precondition(format!("{path}: {s}")),
        Error::Unsupported(s) => Error::Unsupported(format!("{path}: {s}")),
    }
}

/// Resolves names while converting text to objects. Names are looked up
/// among the manifest texts and converted on first use.
pub struct Resolver<'a> {
    ring: Ring,
    texts: &'a BTreeMap<String, ObjectText>,
    done: BTreeMap<String, Object>,
    active: Vec<String>,
}

impl<'a> Resolver<'a> {
    pub fn new(ring: Ring, texts: &'a BTreeMap<String, ObjectText>) -> Resolver<'a> {
        Resolver { ring, texts, done: BTreeMap::new(), active: Vec::new() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn object(&mut self, name: &str) -> Result<Object> {
        if let Some(o) = self.done.get(name) {
            return Ok(o.clone());
        }
        let text = self.texts.get(name).ok_or_else(|| Error::Malformed(format!("unknown name '{name}'")))?;
        if self.active.iter().any(|a| a == name) {
            return Err(Error::Malformed(format!("'{name}' refers to itself")));
        }
        self.active.push(name.to_string());
        let path = format!("objects.{name}");
        let out = match text {
            ObjectText::Module(t) => Module::from_text(t, self).map(Object::Module),
            ObjectText::Morphism(t) => Morphism::from_text(t, self).map(Object::Morphism),
            ObjectText::Complex(t) => ChainComplex::from_text(t, self).map(Object::Complex),
            ObjectText::Extension(t) => Extension::from_text(t, self).map(Object::Extension),
            ObjectText::Class(t) => TestClass::from_text(t, self).map(Object::Class),
            ObjectText::ChainMap(t) => ChainMap::from_text(t, self).map(Object::ChainMap),
            ObjectText::ComplexExtension(t) => ComplexExtension::from_text(t, self).map(Object::ComplexExtension),
        };
        self.active.pop();
        let out = out.map_err(|e| located(&path, e))?;
        self.done.insert(name.to_string(), out.clone());
        Ok(out)
    }

    fn named<T: Canonical>(&mut self, r: &Ref<T::Text>) -> Result<T> {
        match r {
            Ref::Inline(t) => T::from_text(t, self),
            Ref::Name(n) => {
                let o = self.object(n)?;
                T::from_object(o).map_err(|kind| Error::Malformed(format!("'{n}' is a {kind}, not a {}", T::KIND)))
            }
        }
    }
}

/// Types with a canonical text form.
pub trait Canonical: Sized {
    type Text: Serialize + DeserializeOwned;
    const KIND: &'static str;

    fn to_text(&self) -> Self::Text;
    fn from_text(text: &Self::Text, r: &mut Resolver<'_>) -> Result<Self>;
    /// Unwraps a resolved object, or returns its kind.
    fn from_object(o: Object) -> std::result::Result<Self, &'static str>;
}

/// Canonical single-line JSON.
pub fn render<T: Canonical>(x: &T) -> String {
    serde_json::to_string(&x.to_text()).expect("text types serialize")
}

/// Parses a standalone object over the given ring. Names cannot be resolved
/// outside a manifest.
pub fn parse<T: Canonical>(ring: Ring, text: &str) -> Result<T> {
    let t: T::Text = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("{}: {e}", T::KIND)))?;
    let empty = BTreeMap::new();
    T::from_text(&t, &mut Resolver::new(ring, &empty))
}

impl Canonical for Module {
    type Text = ModuleText;
    const KIND: &'static str = "module";

    fn to_text(&self) -> ModuleText {
        ModuleText { factors: self.factors().to_vec() }
    }

    fn from_text(t: &ModuleText, r: &mut Resolver<'_>) -> Result<Module> {
        Module::new(r.ring(), t.factors.clone()).map_err(|e| located("factors", e))
    }

    fn from_object(o: Object) -> std::result::Result<Module, &'static str> {
        match o {
            Object::Module(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

impl Canonical for Morphism {
    type Text = MorphismText;
    const KIND: &'static str = "morphism";

    fn to_text(&self) -> MorphismText {
        MorphismText {
            from: Ref::Inline(self.src().to_text()),
            to: Ref::Inline(self.dst().to_text()),
            matrix: self.matrix().to_vec(),
        }
    }

    fn from_text(t: &MorphismText, r: &mut Resolver<'_>) -> Result<Morphism> {
        let src: Module = r.named(&t.from).map_err(|e| located("from", e))?;
        let dst: Module = r.named(&t.to).map_err(|e| located("to", e))?;
        Morphism::new(src, dst, t.matrix.clone()).map_err(|e| located("matrix", e))
    }

    fn from_object(o: Object) -> std::result::Result<Morphism, &'static str> {
        match o {
            Object::Morphism(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

impl Canonical for ChainComplex {
    type Text = ComplexText;
    const KIND: &'static str = "complex";

    fn to_text(&self) -> ComplexText {
        ComplexText {
            lo: self.lo(),
            hi: self.hi(),
            modules: self.modules().iter().map(|m| Ref::Inline(m.to_text())).collect(),
            diffs: self.diffs().iter().map(|d| d.matrix().to_vec()).collect(),
        }
    }

    fn from_text(t: &ComplexText, r: &mut Resolver<'_>) -> Result<ChainComplex> {
        if t.modules.is_empty() || t.hi - t.lo + 1 != t.modules.len() as i64 {
            return Err(Error::Shape(format!("modules: {} entries for degrees {}..={}", t.modules.len(), t.lo, t.hi)));
        }
        if t.diffs.len() + 1 != t.modules.len() {
            return Err(Error::Shape(format!(
                "diffs: expected {} matrices, found {}",
                t.modules.len() - 1,
                t.diffs.len()
            )));
        }
        let modules = t
            .modules
            .iter()
            .enumerate()
            .map(|(k, m)| r.named::<Module>(m).map_err(|e| located(&format!("modules[{k}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        let diffs = t
            .diffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                Morphism::new(modules[k + 1].clone(), modules[k].clone(), a.clone())
                    .map_err(|e| located(&format!("diffs[{k}]"), e))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(t.lo, modules, diffs)
    }

    fn from_object(o: Object) -> std::result::Result<ChainComplex, &'static str> {
        match o {
            Object::Complex(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

impl Canonical for Extension {
    type Text = ExtensionText;
    const KIND: &'static str = "extension";

    fn to_text(&self) -> ExtensionText {
        ExtensionText { degree: self.degree(), maps: self.maps().iter().map(|f| Ref::Inline(f.to_text())).collect() }
    }

    fn from_text(t: &ExtensionText, r: &mut Resolver<'_>) -> Result<Extension> {
        if t.maps.len() != t.degree + 1 {
            return Err(Error::Shape(format!(
                "maps: a {}-extension has {} maps, found {}",
                t.degree,
                t.degree + 1,
                t.maps.len()
            )));
        }
        let maps = t
            .maps
            .iter()
            .enumerate()
            .map(|(k, f)| r.named::<Morphism>(f).map_err(|e| located(&format!("maps[{k}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        Extension::new(maps)
    }

    fn from_object(o: Object) -> std::result::Result<Extension, &'static str> {
        match o {
            Object::Extension(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

impl Canonical for TestClass {
    type Text = ClassText;
    const KIND: &'static str = "class";

    fn to_text(&self) -> ClassText {
        ClassText { generators: self.generators().iter().map(|m| Ref::Inline(m.to_text())).collect() }
    }

    fn from_text(t: &ClassText, r: &mut Resolver<'_>) -> Result<TestClass> {
        let gens = t
            .generators
            .iter()
            .enumerate()
            .map(|(k, m)| r.named::<Module>(m).map_err(|e| located(&format!("generators[{k}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        TestClass::new(r.ring(), gens)
    }

    fn from_object(o: Object) -> std::result::Result<TestClass, &'static str> {
        match o {
            Object::Class(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

impl Canonical for ChainMap {
    type Text = ChainMapText;
    const KIND: &'static str = "chain_map";

    fn to_text(&self) -> ChainMapText {
        let lo = self.src().lo().min(self.dst().lo());
        let hi = self.src().hi().max(self.dst().hi());
        ChainMapText {
            from: Ref::Inline(self.src().to_text()),
            to: Ref::Inline(self.dst().to_text()),
            lo,
            components: (lo..=hi).map(|m| self.component(m).matrix().to_vec()).collect(),
        }
    }

    fn from_text(t: &ChainMapText, r: &mut Resolver<'_>) -> Result<ChainMap> {
        let src: ChainComplex = r.named(&t.from).map_err(|e| located("from", e))?;
        let dst: ChainComplex = r.named(&t.to).map_err(|e| located("to", e))?;
        let comps = t
            .components
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let m = t.lo + k as i64;
                Morphism::new(src.component(m), dst.component(m), a.clone())
                    .map_err(|e| located(&format!("components[{k}]"), e))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new(&src, &dst, t.lo, comps)
    }

    fn from_object(o: Object) -> std::result::Result<ChainMap, &'static str> {
        match o {
            Object::ChainMap(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

impl Canonical for ComplexExtension {
    type Text = ComplexExtensionText;
    const KIND: &'static str = "complex_extension";

    fn to_text(&self) -> ComplexExtensionText {
        ComplexExtensionText { alpha: Ref::Inline(self.alpha().to_text()), beta: Ref::Inline(self.beta().to_text()) }
    }

    fn from_text(t: &ComplexExtensionText, r: &mut Resolver<'_>) -> Result<ComplexExtension> {
        let alpha: ChainMap = r.named(&t.alpha).map_err(|e| located("alpha", e))?;
        let beta: ChainMap = r.named(&t.beta).map_err(|e| located("beta", e))?;
        ComplexExtension::new(alpha, beta)
    }

    fn from_object(o: Object) -> std::result::Result<ComplexExtension, &'static str> {
        match o {
            Object::ComplexExtension(x) => Ok(x),
            o => Err(o.kind()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestText {
    ring: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, i64>,
    #[serde(default)]
    objects: BTreeMap<String, ObjectText>,
}

/// A ring, integer parameters and named objects. Every name is resolved at
/// load time, so a loaded manifest has no dangling references.
#[derive(Clone, Debug)]
pub struct Manifest {
    text: ManifestText,
    ring: Ring,
    objects: BTreeMap<String, Object>,
}

impl Manifest {
    pub fn new(ring: Ring) -> Manifest {
        Manifest {
            text: ManifestText { ring: ring.modulus(), params: BTreeMap::new(), objects: BTreeMap::new() },
            ring,
            objects: BTreeMap::new(),
        }
    }

    pub fn parse(source: &str) -> Result<Manifest> {
        let text: ManifestText =
            serde_json::from_str(source).map_err(|e| Error::Malformed(format!("manifest: {e}")))?;
        let ring = Ring::new(text.ring).map_err(|e| located("ring", e))?;
        let mut objects = BTreeMap::new();
        {
            let mut r = Resolver::new(ring, &text.objects);
            for name in text.objects.keys() {
                objects.insert(name.clone(), r.object(name)?);
            }
        }
        Ok(Manifest { text, ring, objects })
    }

    /// Canonical pretty-printed JSON, keys sorted.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.text).expect("text types serialize");
        s.push('\n');
        s
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn insert(&mut self, name: &str, object: Object) -> Result<()> {
        if self.objects.contains_key(name) {
            return Err(Error::Malformed(format!("duplicate name '{name}'")));
        }
        self.text.objects.insert(name.to_string(), object.to_text());
        self.objects.insert(name.to_string(), object);
        Ok(())
    }

    pub fn set_param(&mut self, name: &str, value: i64) {
        self.text.params.insert(name.to_string(), value);
    }

    pub fn param(&self, name: &str) -> Result<i64> {
        self.text.params.get(name).copied().ok_or_else(|| Error::Malformed(format!("params.{name}: missing")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.objects.keys().map(String::as_str)
    }

    pub fn object(&self, name: &str) -> Result<&Object> {
        self.objects.get(name).ok_or_else(|| Error::Malformed(format!("no object named '{name}' in the manifest")))
    }

    pub fn get<T: Canonical>(&self, name: &str) -> Result<T> {
        T::from_object(self.object(name)?.clone())
            .map_err(|kind| Error::Malformed(format!("objects.{name}: a {kind}, not a {}", T::KIND)))
    }
}

/// A module from a command-line argument: a bare factor list `[2,4]`, a
/// module object, or the name of a module in the manifest.
pub fn parse_module_arg(ring: Ring, arg: &str, manifest: Option<&Manifest>) -> Result<Module> {
    let trimmed = arg.trim();
    if trimmed.starts_with('[') {
        let factors: Vec<u64> =
            serde_json::from_str(trimmed).map_err(|e| Error::Malformed(format!("factor list '{arg}': {e}")))?;
        return Module::new(ring, factors);
    }
    if trimmed.starts_with('{') {
        return parse(ring, trimmed);
    }
    match manifest {
        Some(m) => m.get(trimmed),
        None => Err(Error::Malformed(format!("'{arg}' is not a factor list and no manifest was given"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    #[test]
    fn module_and_morphism_text() {
        let m: Module = parse(r(8), r#"{"factors":[2,4]}"#).unwrap();
        assert_eq!(render(&m), r#"{"factors":[2,4]}"#);
        let f: Morphism = parse(r(8), r#"{"from":{"factors":[4]},"to":{"factors":[2]},"matrix":[[3]]}"#).unwrap();
        assert_eq!(render(&f), r#"{"from":{"factors":[4]},"to":{"factors":[2]},"matrix":[[1]]}"#);
        let z: Module = parse(r(8), r#"{"factors":[]}"#).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse::<Morphism>(r(4), r#"{"from":{"factors":[2]},"to":{"factors":[4]},"matrix":[[1]]}"#).unwrap_err();
        assert!(e.is_malformed() && e.to_string().contains("matrix"), "{e}");
        let e = parse::<Module>(r(4), r#"{"factors":[3]}"#).unwrap_err();
        assert!(e.to_string().contains("factors"), "{e}");
        let e = parse::<Module>(r(4), r#"{"factor":[2]}"#).unwrap_err();
        assert!(e.is_malformed());
    }

    #[test]
    fn complex_round_trip() {
        let text = r#"{"lo":0,"hi":1,"modules":[{"factors":[4]},{"factors":[4]}],"diffs":[[[2]]]}"#;
        let x: ChainComplex = parse(r(4), text).unwrap();
        assert_eq!(render(&x), text);
    }

    #[test]
    fn manifest_resolves_names() {
        let src = r#"{
  "ring": 4,
  "params": {"m": 1},
  "objects": {
    "Z2": {"kind": "module", "factors": [2]},
    "Z4": {"kind": "module", "factors": [4]},
    "i": {"kind": "morphism", "from": "Z2", "to": "Z4", "matrix": [[2]]},
    "p": {"kind": "morphism", "from": "Z4", "to": "Z2", "matrix": [[1]]},
    "S": {"kind": "extension", "degree": 1, "maps": ["i", "p"]},
    "F": {"kind": "class", "generators": ["Z2"]}
  }
}"#;
        let m = Manifest::parse(src).unwrap();
        let s: Extension = m.get("S").unwrap();
        assert!(!s.is_split());
        assert_eq!(m.param("m").unwrap(), 1);
        assert!(m.get::<Module>("S").is_err());
        let again = Manifest::parse(&m.render()).unwrap();
        assert_eq!(again.render(), m.render());
    }

    #[test]
    fn dangling_and_cyclic_names_are_rejected() {
        let dangling = r#"{"ring":4,"objects":{"f":{"kind":"morphism","from":"A","to":"A","matrix":[]}}}"#;
        let e = Manifest::parse(dangling).unwrap_err();
        assert!(e.to_string().contains("unknown name 'A'"), "{e}");
        let wrong_kind = r#"{"ring":4,"objects":{"A":{"kind":"class","generators":[]},"f":{"kind":"morphism","from":"A","to":"A","matrix":[]}}}"#;
        assert!(Manifest::parse(wrong_kind).is_err());
    }

    #[test]
    fn non_exact_extension_is_a_precondition_error() {
        let src = r#"{"ring":4,"objects":{"S":{"kind":"extension","degree":1,"maps":[
            {"from":{"factors":[2]},"to":{"factors":[4]},"matrix":[[0]]},
            {"from":{"factors":[4]},"to":{"factors":[2]},"matrix":[[1]]}]}}}"#;
        let e = Manifest::parse(src).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)), "{e}");
    }

    #[test]
    fn module_arguments() {
        assert_eq!(parse_module_arg(r(4), "[2]", None).unwrap().factors(), &[2]);
        assert!(parse_module_arg(r(4), "Z2", None).is_err());
    }
}
