//! Closed geodesics `γ_{p,q}` in a cusped hyperbolic 3-manifold, built from
//! cusp data in the upper half-space model, with tests for when they are
//! simple and certificates that an infinite subfamily is.
//!
//! The pipeline is:
//!
//! 1. [`cusp::CuspData`] holds the cusp lattice `(t_α, t_β)`, the offset
//!    `(x₀, y₀)` of the second bumping-point lift and the constant `c`.
//! 2. [`family::build_record`] forms `g_{p,q} = a^p b^q g`, its axis, the
//!    crossings with the horosphere at height 1 and the short/long arc lifts.
//! 3. [`simplicity::assess`] runs the lattice test on the long arc and the
//!    ball test on the short arc.
//! 4. [`certificate::certify_q0`] scans the one-parameter subfamily and
//!    finds the threshold beyond which every member is simple.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod certificate;
pub mod cusp;
pub mod exact;
pub mod family;
pub mod io;
pub mod moebius;
pub mod oracle;
pub mod plot;
pub mod simplicity;

pub use batch::{evaluate, evaluate_window, Evaluation, Execution, VerdictCounts, Window};
pub use certificate::{certify_q0, verify_certificate, CertificateQ0, CertifyError};
pub use cusp::{CuspData, CuspError, InvalidReason, LatticeCoords};
pub use family::{build_record, FamilyError, FamilyIndex, GeodesicRecord};
pub use moebius::{BoundaryPoint, IsometryClass, MoebiusMap, UpperHalfSpacePoint};
pub use num_complex::Complex64;
pub use simplicity::{assess, CheckOptions, LatticeWitness, SimplicityVerdict};
