//! # ptperm
//!
//! Two-photon quantum correlations in concatenated two-mode linear-optical
//! networks built from passive PT-symmetric couplers, together with a
//! randomized certification engine for the order-invariance of matrix
//! permanents.
//!
//! The crate is organized bottom-up:
//!
//! - [`matrix`]: complex 2×2 and n×n matrices, permanents, the closed-form
//!   2×2 matrix exponential.
//! - [`propagator`]: effective Hamiltonian, coupler propagators, the four
//!   interferometer geometries and piecewise time-ordered evolution.
//! - [`correlations`]: coincidence probabilities and two-photon visibility.
//! - [`invariance`]: randomized checks of the permanent identities and the
//!   three-mode search.
//! - [`sweep`]: visibility landscapes, length curves and feature extraction.
//!
//! ```
//! use ptperm::{compose_geometry, visibility, CouplerParams, Geometry};
//! use std::f64::consts::PI;
//!
//! let p = CouplerParams::new(1.0, 0.0.into(), PI / 8.0).unwrap();
//! let t = compose_geometry(Geometry::MXmtx, &p);
//! let v = visibility(&t).unwrap();
//! assert!((v + 1.0).abs() < 1e-9);
//! ```

pub mod correlations;
pub mod dd;
pub mod error;
pub mod invariance;
pub mod matrix;
pub mod propagator;
pub mod random;
pub mod sweep;

pub use correlations::{
    p11_dist, p11_indist, two_photon, visibility, visibility_deficit, visibility_partial,
    TwoPhotonResult, VISIBILITY_FLOOR,
};
pub use error::{Error, Result};
pub use matrix::{
    expm2, hadamard_abs_square, matmul, perm2, perm_n, perm_n_with_cap, perm_ryser, rel_residual,
    row_col_reverse, Cplx, Mat2, MatN, DEFAULT_PERM_CAP, DEFAULT_TOL,
};
pub use propagator::{
    building_block, compose_geometry, coupler_50_50, geometry_det, h_eff, parity_swap_reverse,
    propagate_piecewise, pt_propagator, CouplerParams, Geometry, Segment,
};
pub use sweep::{
    deficit_curve, extract_features, extract_features_with, visibility_curves, visibility_map,
    AxisRange, CurveSet, Extremum, Features, VisibilityGrid, DEFAULT_KAPPA,
};
