//! Entropy of measurement for highly symmetric qubit POVMs.
//!
//! The crate builds the symmetric Bloch-sphere POVMs, evaluates and minimizes
//! their entropy of measurement, and reproduces the Hermite-interpolation
//! certificate that the entropy minimizers are the states antipodal to the
//! POVM elements.

pub mod algebraic;
pub mod bloch;
pub mod catalog;
pub mod certificate;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod groups;
pub mod hermite;
pub mod info;
pub mod interval;
pub mod invariants;
pub mod io;
pub mod scalar;
pub mod sphere;
pub mod sturm;

pub use bloch::{BlochVector, EntropyKernel, ProbabilityVector};
pub use catalog::{make_hs_povm, make_rectangle_povm, DesignReport, Family, HsPovm};
pub use error::{Error, Result};
pub use groups::{generate_group, DoubleCosetProfile, GroupKind, RotationGroup};
