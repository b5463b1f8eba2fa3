//! Floating-point incidence lab for nested affine flags.
//!
//! Counts lines from a direction-separated family that spend length at
//! least `r_j` inside `N_{ρ_j} V_j ∩ B_{r_j}` at every level of a flag, and
//! compares the count against `C · Π(ρ_j/r_j) · R^{(n-1)/2+ε}`. Flags stand
//! in for the general nested varieties; the model is a surrogate and is
//! labelled as such in every report.

pub mod extremal;
pub mod geometry;
pub mod lattice;
pub mod occupancy;
pub mod trial;

pub use extremal::extremal_family;
pub use geometry::{AffineFlag, AffineSubspace, Ball, Line};
pub use lattice::{direction_lattice, sample_directions};
pub use occupancy::{count_satisfying, emulated_chain_bound, line_occupancy, theorem_bound};
pub use trial::{falsification_trial, run_suite, standard_suite, write_json_lines, BaseDistribution, TrialConfig, TrialReport};
