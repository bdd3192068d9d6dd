//! Locally recoverable codes over finite fields.
//!
//! Codes are evaluation codes of `F(x, y) = Σ a[h][s] g(x)^s y^h` over `l`
//! repair groups of `r + μ - 1` points. The crate builds them under several
//! choices of coefficient subspace, repairs erasures inside a single group
//! from `r` symbols, and checks dimension, locality and minimum distance
//! against brute-force oracles.

pub mod construction;
pub mod gf;
pub mod linalg;
pub mod repair;
pub mod spec_file;
pub mod verify;

pub use construction::{
    build_layout, build_subspace, coeff_h, encode, evaluate_f, generator_matrix, plan_params,
    plan_params_shared, random_subspace_search, table1_preset, CodeInstance, CoefficientGrid,
    ConstructionError, GroupLayout, LrcParams, Strategy, SubspaceBasis,
};
pub use gf::{make_field, ArithKind, Field, FieldElement, FieldSpec, GfError};
pub use linalg::{null_space, rref, solve_interpolation, vandermonde, LinalgError, Matrix, Rref};
pub use repair::{
    repair_all, repair_group, repair_position, simulate_failures, ErasurePattern, RepairError,
    RepairTrace, SimulationStats,
};
pub use verify::{
    bound_and_defect, full_report, locality_audit, min_distance_bounds, min_distance_exact,
    subspace_h, ClaimStatus, ReportOptions, VerificationReport, VerifyError,
};
