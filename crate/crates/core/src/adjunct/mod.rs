//! The disk and sphere correspondences as executable verifiers.
//!
//! Each verifier builds the explicit maps between module-side and
//! complex-side groups, then checks bijectivity (or injectivity), round trips
//! and naturality on every enumerated class. Hypotheses are computed from the
//! instance, never taken from the caller.

mod disk;
mod hom;
mod sphere;
mod transport;
mod verify;

pub use disk::{disk_phi, disk_psi, is_disk, source_disk_phi, source_disk_psi};
pub use hom::{hom_counit, hom_unit, verify_hom_adjunction};
pub use sphere::{cycle_lift, cycle_project, sphere_lift, sphere_project};
pub use verify::{verify_prop_4_2, verify_prop_5, verify_relativedwsd, Prop5Mode};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of one verifier on one instance.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub prop: String,
    pub instance: String,
    pub left_order: u64,
    pub right_order: u64,
    pub injective: bool,
    /// `None` when not claimed or not checkable on this instance.
    pub surjective: Option<bool>,
    pub round_trip: Option<bool>,
    pub natural: Option<bool>,
    /// Hypothesis predicates evaluated on the instance.
    pub hypotheses: BTreeMap<String, bool>,
    /// Conditions worth reporting that are not failures.
    pub flags: Vec<String>,
    pub witness: Option<String>,
    pub ok: bool,
}

impl VerificationReport {
    pub(crate) fn new(prop: &str, instance: String) -> VerificationReport {
        VerificationReport {
            prop: prop.to_string(),
            instance,
            left_order: 0,
            right_order: 0,
            injective: false,
            surjective: None,
            round_trip: None,
            natural: None,
            hypotheses: BTreeMap::new(),
            flags: Vec::new(),
            witness: None,
            ok: false,
        }
    }

    pub(crate) fn fail(&mut self, why: impl Into<String>) {
        if self.witness.is_none() {
            self.witness = Some(why.into());
        }
        self.ok = false;
    }

    pub fn hypothesis(&self, name: &str) -> Option<bool> {
        self.hypotheses.get(name).copied()
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    /// The machine-readable trailer line.
    pub fn trailer(&self) -> String {
        serde_json::json!({
            "prop": self.prop,
            "ok": self.ok,
            "left_order": self.left_order,
            "right_order": self.right_order,
        })
        .to_string()
    }
}

fn show(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}] left={} right={} inj={} surj={} round_trip={} natural={}",
            self.prop,
            if self.ok { "ok" } else { "FAIL" },
            self.instance,
            self.left_order,
            self.right_order,
            show(Some(self.injective)),
            show(self.surjective),
            show(self.round_trip),
            show(self.natural),
        )?;
        for (k, v) in &self.hypotheses {
            write!(f, " {k}={v}")?;
        }
        for flag in &self.flags {
            write!(f, " !{flag}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}
