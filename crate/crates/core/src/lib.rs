//! Exact homological algebra over the rings `Z/N`.
//!
//! The category of finitely generated `Z/N`-modules is small enough that every
//! Hom group and Ext group is a finite abelian group that can be listed. The
//! crate builds the standard constructions (kernels, pullbacks, Baer sums,
//! free resolutions) on top of exact modular linear algebra and uses them to
//! check the correspondences between extensions of modules and extensions of
//! chain complexes that pass through disk and sphere complexes.
//!
//! Layering, bottom to top:
//!
//! * [`exactlin`]: Smith normal forms and linear systems over `Z` and `Z/N`.
//! * [`modcat`]: modules, morphisms, Hom groups, universal constructions, duality.
//! * [`chaincx`]: bounded chain complexes, chain maps, homotopies, disks and spheres.
//! * [`extalg`]: extensions, Baer sums, resolutions, Ext groups, relative subgroups.
//! * [`adjunct`]: the disk and sphere correspondences as executable verifiers.
//! * [`gorenstein`]: Gorenstein-projective detection and GExt over `Z/N`.
//! * [`serial`]: canonical JSON for every object, and manifests of named objects.
//! * [`fuzz`]: seeded random instances.
//! * [`driver`]: instance generation and parallel fuzz runs for each checked statement.

pub mod adjunct;
pub mod chaincx;
pub mod driver;
pub mod error;
pub mod exactlin;
pub mod extalg;
pub mod fuzz;
pub mod gorenstein;
pub mod modcat;
pub mod serial;

pub use error::{Error, Result};

/// Chapters of the guide in `book/`, compiled as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/extensions.md")]
    mod extensions {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/gorenstein.md")]
    mod gorenstein {}
    #[doc = include_str!("../../../book/src/fuzzing.md")]
    mod fuzzing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
