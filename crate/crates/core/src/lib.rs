//! Numerical laboratory for coned polytope tensegrity frameworks.
//!
//! The crate builds frameworks by coning the one-skeleton of a polytope over
//! an apex, computes their infinitesimal flex and equilibrium stress spaces,
//! certifies the block stress `Ω = [[M, α], [αᵗ, b]]` of a convex polytope
//! coned from an interior point, and evaluates the stress-flex condition
//! (vanishing apex row of `Ω·p̂′`) together with prestress stability.
//!
//! Module map:
//!
//! - [`polytope`]: polytopes, OFF ingestion, named and random generators,
//!   coning and sliding.
//! - [`rigidity`]: rigidity matrix, flex and stress spaces, rank policy.
//! - [`stress`]: the certified block stress and Wachspress coordinates.
//! - [`analysis`]: stress-flex residuals, the one-negative-eigenvalue lemma,
//!   stability verdicts, affine/conic diagnostics, projection check, sweeps.

pub mod analysis;
pub mod linalg;
pub mod polytope;
pub mod rigidity;
pub mod rng;
pub mod stress;

mod tolerances;

pub use analysis::{
    affine_flex_test, check_lemma_psd, conic_at_infinity, prestress_energy, projection_check,
    stability_test, stress_flex_residual, sweep_strong_conjecture, AffineFit, ApexStrategy,
    ConditionVerdict, ConicAtInfinity, LemmaReport, ProjectionReport, ResidualReport,
    StabilityKind, StabilityVerdict, SweepReport,
};
pub use linalg::{numerical_rank, RankDecision};
pub use polytope::{
    cone, parse_off, random_simple_polytope, serialize_off, slide, ConedFramework, Edge,
    EdgeLabel, Framework, Labeling, NamedPolytope, Polytope, PolytopeSource,
};
pub use rigidity::{
    flex_space, rigidity_matrix, stress_space, trivial_flex_basis, FlexBasis, RigidityMatrix,
    StressBasis,
};
pub use stress::{
    izmestiev_stress, strictly_proper_check, translate_to_apex_origin, wachspress, Certificate,
    IzmestievStress, StressError,
};
pub use tolerances::Tolerances;
