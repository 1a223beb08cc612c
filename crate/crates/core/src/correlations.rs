//! Post-selected two-photon observables of a two-mode transfer matrix.
//!
//! Probabilities are per injected `|1,1⟩` pair and are not renormalized by
//! the survival probability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hadamard_abs_square, perm2, Cplx, Mat2};

/// `P_dist` at or below this value leaves the visibility undefined.
pub const VISIBILITY_FLOOR: f64 = 1e-300;

/// Coincidence statistics of one transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonResult {
    /// `|perm T|²`
    pub p_indist: f64,
    /// `perm |T|²`
    pub p_dist: f64,
    /// `P_indist / P_dist − 1`, `None` when `P_dist` vanishes.
    pub visibility: Option<f64>,
}

/// Coincidence probability for indistinguishable photons.
pub fn p11_indist(t: &Mat2) -> f64 {
    perm2(t).norm_sqr()
}

/// Coincidence probability for distinguishable photons.
pub fn p11_dist(t: &Mat2) -> f64 {
    perm2(&hadamard_abs_square(t)).re
}

pub fn two_photon(t: &Mat2) -> TwoPhotonResult {
    let p_indist = p11_indist(t);
    let p_dist = p11_dist(t);
    TwoPhotonResult {
        p_indist,
        p_dist,
        visibility: (p_dist > VISIBILITY_FLOOR).then(|| p_indist / p_dist - 1.0),
    }
}

/// Two-photon visibility `V = P_indist / P_dist − 1`.
///
/// `V = −1` is a complete HOM dip, `V > 0` is antibunching. Returns `None`
/// when every transmission path vanishes.
pub fn visibility(t: &Mat2) -> Option<f64> {
    two_photon(t).visibility
}

/// Visibility for photons with indistinguishability `x`, modelling the
/// coincidence rate as `x·P_indist + (1 − x)·P_dist`. Equals `x·V`.
pub fn visibility_partial(t: &Mat2, indistinguishability: f64) -> Result<Option<f64>> {
    check_indistinguishability(indistinguishability)?;
    Ok(visibility(t).map(|v| indistinguishability * v))
}

pub(crate) fn check_indistinguishability(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "indistinguishability must lie in [0, 1], got {x}"
        )))
    }
}

/// `1 − V` from a separately known determinant.
///
/// For any 2×2 matrix `|perm T|² + |det T|² = 2·perm|T|²`, so
/// `1 − V = |det T|² / P_dist`. Unlike `1 − V` formed from `V`, this keeps
/// full relative precision when `V` is within rounding of `+1`.
pub fn visibility_deficit(t: &Mat2, det: Cplx) -> Option<f64> {
    let p_dist = p11_dist(t);
    (p_dist > VISIBILITY_FLOOR).then(|| det.norm_sqr() / p_dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::coupler_50_50;

    #[test]
    fn balanced_coupler() {
        let r = coupler_50_50();
        assert!(p11_indist(&r) < 1e-30);
        assert!((p11_dist(&r) - 0.5).abs() < 1e-15);
        assert!((visibility(&r).unwrap() + 1.0).abs() < 1e-15);
        assert!((visibility_partial(&r, 0.96).unwrap().unwrap() + 0.96).abs() < 1e-15);
        assert!((visibility_partial(&r, 1.0).unwrap().unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_has_no_interference() {
        let i = Mat2::identity();
        assert_eq!(p11_indist(&i), 1.0);
        assert_eq!(p11_dist(&i), 1.0);
        assert_eq!(visibility(&i), Some(0.0));
    }

    #[test]
    fn integer_product_example() {
        let t = Mat2::from_real([[10.0, 16.0], [6.0, 10.0]]);
        assert_eq!(p11_indist(&t), 38416.0);
        assert_eq!(p11_dist(&t), 19216.0);
    }

    #[test]
    fn undefined_is_not_zero() {
        assert_eq!(visibility(&Mat2::zero()), None);
        let r = two_photon(&Mat2::zero());
        assert_eq!(r.p_dist, 0.0);
        assert_eq!(r.visibility, None);
        // A single zero path still leaves P_dist > 0.
        let t = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(visibility(&t), None);
        let t = Mat2::from_real([[1.0, 0.0], [0.5, 1.0]]);
        assert_eq!(visibility(&t), Some(0.0));
    }

    #[test]
    fn fully_distinguishable_is_zero() {
        let t = Mat2::from_real([[0.3, 0.9], [-0.2, 0.4]]);
        assert_eq!(visibility_partial(&t, 0.0).unwrap(), Some(0.0));
        assert_eq!(visibility_partial(&Mat2::zero(), 0.5).unwrap(), None);
    }

    #[test]
    fn indistinguishability_range() {
        let r = coupler_50_50();
        assert!(visibility_partial(&r, -0.01).is_err());
        assert!(visibility_partial(&r, 1.01).is_err());
        assert!(visibility_partial(&r, f64::NAN).is_err());
    }

    #[test]
    fn deficit_complements_visibility() {
        let t = Mat2::new(
            Cplx::new(0.3, 0.1),
            Cplx::new(-0.7, 0.2),
            Cplx::new(0.05, 0.4),
            Cplx::new(0.9, -0.3),
        );
        let v = visibility(&t).unwrap();
        let d = visibility_deficit(&t, t.det()).unwrap();
        assert!((v + d - 1.0).abs() < 1e-14);
    }
}
