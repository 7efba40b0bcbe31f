//! Carrying every class of a module Ext group across to complex extensions
//! and comparing with an independent classification of the complex side.

use crate::chaincx::ChainComplex;
use crate::error::{Error, Result};
use crate::extalg::oracle::complex_extension_classes;
use crate::extalg::{phi, psi, ComplexExtension, ExtGroup, Extension};

pub(crate) type Lift<'a> = &'a dyn Fn(&Extension) -> Result<ComplexExtension>;
pub(crate) type Project<'a> = &'a dyn Fn(&ComplexExtension) -> Result<Extension>;

pub(crate) struct Transport<'a> {
    pub group: &'a ExtGroup,
    pub lift: Lift<'a>,
    pub project: Project<'a>,
    pub module_relative: &'a dyn Fn(&Extension) -> Result<bool>,
    pub complex_relative: &'a dyn Fn(&ComplexExtension) -> Result<bool>,
    /// `X` and `A` in `0 -> A -> Z -> X -> 0`.
    pub right_end: &'a ChainComplex,
    pub left_end: &'a ChainComplex,
    pub oracle_limit: usize,
}

pub(crate) struct Outcome {
    pub realized: Vec<Extension>,
    pub module_rel: Vec<bool>,
    /// Complex classes: from the raw oracle when it fits the budget,
    /// otherwise the distinct lifts.
    pub classes: Vec<ComplexExtension>,
    pub complex_rel: Vec<bool>,
    pub from_oracle: bool,
    /// Class index of each lifted module class.
    pub lift_index: Vec<usize>,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn module_order(&self) -> u64 {
        self.module_rel.iter().filter(|b| **b).count() as u64
    }

    pub fn complex_order(&self) -> u64 {
        self.complex_rel.iter().filter(|b| **b).count() as u64
    }

    /// Distinct module classes land in distinct complex classes.
    pub fn injective(&self) -> bool {
        let mut seen = self.lift_index.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.lift_index.len()
    }

    /// Relative module classes lift to relative complex classes.
    pub fn preserves(&self) -> bool {
        self.lift_index.iter().zip(&self.module_rel).all(|(&j, &r)| !r || self.complex_rel[j])
    }

    /// Every relative complex class is the lift of a relative module class.
    pub fn surjective(&self) -> Option<bool> {
        self.from_oracle.then(|| {
            (0..self.classes.len()).all(|j| {
                !self.complex_rel[j] || self.lift_index.iter().zip(&self.module_rel).any(|(&i, &r)| r && i == j)
            })
        })
    }

    /// Every complex class, relative or not, is hit.
    pub fn surjective_full(&self) -> Option<bool> {
        self.from_oracle.then(|| (0..self.classes.len()).all(|j| self.lift_index.contains(&j)))
    }
}

fn find(classes: &[ComplexExtension], t: &ComplexExtension) -> Result<Option<usize>> {
    for (j, c) in classes.iter().enumerate() {
        if c.is_related(t)? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

impl Transport<'_> {
    pub fn run(&self) -> Result<Outcome> {
        let elements = self.group.elements();
        let realized = elements.iter().map(|e| psi(e, self.group)).collect::<Result<Vec<_>>>()?;
        let module_rel = realized.iter().map(|s| (self.module_relative)(s)).collect::<Result<Vec<_>>>()?;
        let lifts = realized.iter().map(|s| (self.lift)(s)).collect::<Result<Vec<_>>>()?;
        for t in &lifts {
            if t.right() != self.right_end || t.left() != self.left_end {
                return Err(Error::Precondition("a lift has the wrong ends".into()));
            }
        }
        let oracle = match complex_extension_classes(self.right_end, self.left_end, self.oracle_limit) {
            Ok(c) => Some(c),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        let from_oracle = oracle.is_some();
        let mut classes = oracle.unwrap_or_default();
        let mut lift_index = Vec::new();
        let mut witness = None;
        for (i, t) in lifts.iter().enumerate() {
            match find(&classes, t)? {
                Some(j) => lift_index.push(j),
                None if from_oracle => {
                    witness.get_or_insert(format!("lift of class {:?} is missing from the oracle", elements[i].coords));
                    classes.push(t.clone());
                    lift_index.push(classes.len() - 1);
                }
                None => {
                    classes.push(t.clone());
                    lift_index.push(classes.len() - 1);
                }
            }
        }
        let complex_rel = classes.iter().map(|t| (self.complex_relative)(t)).collect::<Result<Vec<_>>>()?;
        Ok(Outcome { realized, module_rel, classes, complex_rel, from_oracle, lift_index, witness })
    }

    /// `project(lift(S)) ~ S` on every module class.
    pub fn module_round_trip(&self, out: &Outcome) -> Result<std::result::Result<(), String>> {
        for (s, &j) in out.realized.iter().zip(&out.lift_index) {
            let want = phi(s, self.group)?;
            let back = match (self.project)(&out.classes[j]) {
                Ok(b) => b,
                Err(e) => return Ok(Err(format!("projection failed: {e}"))),
            };
            if phi(&back, self.group)?.coords != want.coords {
                return Ok(Err(format!("class {:?} does not come back", want.coords)));
            }
        }
        Ok(Ok(()))
    }

    /// `lift(project(T)) ~ T` on every complex class.
    pub fn complex_round_trip(&self, out: &Outcome) -> Result<std::result::Result<(), String>> {
        for (j, t) in out.classes.iter().enumerate() {
            let back = match (self.project)(t).and_then(|s| (self.lift)(&s)) {
                Ok(b) => b,
                Err(e) => return Ok(Err(format!("class {j}: {e}"))),
            };
            if !t.is_related(&back)? {
                return Ok(Err(format!("complex class {j} does not come back: {t}")));
            }
        }
        Ok(Ok(()))
    }
}
