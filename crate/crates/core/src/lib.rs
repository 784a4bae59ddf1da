//! Exact computations for simply-laced (ADE) Lie theory.
//!
//! * [`root_system`]: Cartan matrices, root enumeration, lattice pairings.
//! * [`chevalley`]: a Chevalley basis sign table, bracket and adjoint matrices.
//! * [`flag_cohomology`]: Borel-Weil-Bott on `G/B`.
//! * [`cotangent`]: dominance order, `λ*`, `λ⁺`, `Cht(λ)` and vanishing on `T*(G/B)`.
//! * [`obstruction`]: the graded-commutative curvature expansion and its certificates.
//! * [`surface`]: the exceptional-curve lattice of a resolved ADE singularity.

pub mod chevalley;
pub mod cotangent;
pub mod error;
pub mod flag_cohomology;
pub mod obstruction;
pub mod report;
pub mod root_system;
pub mod surface;

pub use error::{Error, Result};
pub use report::Report;
pub use root_system::{Basis, CartanType, Kind, LatticeVector, RootSystem};
