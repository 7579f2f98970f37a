//! Exact combinatorial invariants of stacks of G-zips.
//!
//! Given a based root datum with Frobenius action and a dominant cocharacter
//! over F_p, this crate computes the derived zip datum, the stratification
//! poset, the effective / Griffiths-Schmid / partial-Hasse cones with exact
//! rational arithmetic, Hilbert bases of the associated monoids, section
//! existence criteria, the full rank-3 unitary example, and a finite-field
//! harness that property-tests the explicit sections against their weights.

pub mod cones;
pub mod error;
pub mod ff;
pub mod linalg;
pub mod root_datum;
pub mod sections;
pub mod u3;
pub mod weyl;
pub mod zip;

pub use cones::RationalCone;
pub use error::{Error, Result};
pub use root_datum::BasedRootDatum;
pub use weyl::WeylGroup;
pub use zip::ZipDatum;

/// Resource guards for enumerations. All defaults are desk scale.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Cap on roots / Weyl elements generated.
    pub enumeration: usize,
    /// Cap on lattice points visited while computing a Hilbert basis.
    pub lattice_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 1_000_000,
            lattice_points: 1_000_000,
        }
    }
}
