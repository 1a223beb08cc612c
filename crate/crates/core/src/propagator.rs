//! Physical building blocks: the passive PT coupler, the balanced coupler and
//! the four two-coupler interferometer geometries.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{expm2, row_col_reverse, Cplx, Mat2};

/// Parameters of one passive PT coupler section.
///
/// `kappa` and `gamma` are in inverse length units, `length` in length units.
/// The imaginary part of `gamma` models a detuning of the lossy guide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplerParams {
    kappa: f64,
    gamma: Cplx,
    length: f64,
}

impl CouplerParams {
    /// Validates `kappa > 0`, `length ≥ 0` and `Re(gamma) ≥ 0`.
    pub fn new(kappa: f64, gamma: Cplx, length: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive and finite, got {kappa}"
            )));
        }
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "length must be non-negative and finite, got {length}"
            )));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter("gamma must be finite".into()));
        }
        if gamma.re < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gain is not supported: Re(gamma) = {} < 0",
                gamma.re
            )));
        }
        Ok(Self {
            kappa,
            gamma,
            length,
        })
    }

    /// Dimensionless parameters: `kappa = 1`, `gamma = γ/κ`, `length = κl`.
    pub fn normalized(kl: f64, gamma_over_kappa: Cplx) -> Result<Self> {
        Self::new(1.0, gamma_over_kappa, kl)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> Cplx {
        self.gamma
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(self.kappa, self.gamma, length)
    }
}

/// The four two-coupler arrangements, each written in terms of the building
/// block `M = Ũ·R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Geometry {
    /// `M·(XMᵀX)`: aligned couplers, a single coupler of twice the length.
    #[serde(rename = "m-xmtx")]
    MXmtx,
    /// `M·Mᵀ`: inverted couplers.
    #[serde(rename = "m-mt")]
    MMt,
    /// `Mᵀ·M`: aligned couplers between two balanced couplers.
    #[serde(rename = "mt-m")]
    MtM,
    /// `(XMᵀX)·M`: inverted couplers between two balanced couplers.
    #[serde(rename = "xmtx-m")]
    XmtxM,
}

impl Geometry {
    pub const ALL: [Geometry; 4] = [
        Geometry::MXmtx,
        Geometry::MMt,
        Geometry::MtM,
        Geometry::XmtxM,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::MXmtx => "m-xmtx",
            Geometry::MMt => "m-mt",
            Geometry::MtM => "mt-m",
            Geometry::XmtxM => "xmtx-m",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Geometry::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown geometry '{s}'")))
    }
}

/// Effective Hamiltonian `[[−iγ, κ], [κ, 0]]` of a passive PT coupler.
pub fn h_eff(kappa: f64, gamma: Cplx) -> Result<Mat2> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be positive and finite, got {kappa}"
        )));
    }
    Ok(Mat2::new(
        Cplx::new(0.0, -1.0) * gamma,
        kappa.into(),
        kappa.into(),
        Cplx::new(0.0, 0.0),
    ))
}

fn h_eff_of(p: &CouplerParams) -> Mat2 {
    Mat2::new(
        Cplx::new(0.0, -1.0) * p.gamma,
        p.kappa.into(),
        p.kappa.into(),
        Cplx::new(0.0, 0.0),
    )
}

/// Classical propagator `Ũ = exp(−i·H_eff·l)` of one PT coupler.
pub fn pt_propagator(p: &CouplerParams) -> Mat2 {
    expm2(&h_eff_of(p), p.length)
}

/// Balanced directional coupler `R = (1/√2)·[[1, −i], [−i, 1]]`.
pub fn coupler_50_50() -> Mat2 {
    let s = FRAC_1_SQRT_2;
    Mat2::new(
        Cplx::new(s, 0.0),
        Cplx::new(0.0, -s),
        Cplx::new(0.0, -s),
        Cplx::new(s, 0.0),
    )
}

/// Building block `M = Ũ·R`: a balanced coupler followed by a PT coupler.
pub fn building_block(p: &CouplerParams) -> Mat2 {
    pt_propagator(p) * coupler_50_50()
}

/// Transfer matrix of a geometry, composed as the raw product of its factors
/// with no global-phase normalization.
pub fn compose_geometry(cfg: Geometry, p: &CouplerParams) -> Mat2 {
    let m = building_block(p);
    match cfg {
        Geometry::MXmtx => m * row_col_reverse(&m),
        Geometry::MMt => m * m.transpose(),
        Geometry::MtM => m.transpose() * m,
        Geometry::XmtxM => row_col_reverse(&m) * m,
    }
}

/// Determinant of any geometry's transfer matrix, `e^{−2γl}`.
///
/// `det Ũ = exp(−i·tr(H_eff)·l) = e^{−γl}`, `det R = 1`, and transposition or
/// exchange conjugation leave the determinant unchanged. Evaluated this way it
/// carries full relative precision even when the entries of the product
/// nearly cancel in `t11·t22 − t12·t21`.
pub fn geometry_det(p: &CouplerParams) -> Cplx {
    (p.gamma * (-2.0 * p.length)).exp()
}

/// One piecewise-constant section of a z-dependent Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    hamiltonian: Mat2,
    length: f64,
}

impl Segment {
    pub fn new(hamiltonian: Mat2, length: f64) -> Result<Self> {
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "segment length must be non-negative and finite, got {length}"
            )));
        }
        if !hamiltonian.is_finite() {
            return Err(Error::InvalidParameter(
                "segment Hamiltonian has non-finite entries".into(),
            ));
        }
        Ok(Self {
            hamiltonian,
            length,
        })
    }

    /// Segment for a PT coupler section.
    pub fn from_coupler(p: &CouplerParams) -> Self {
        Self {
            hamiltonian: h_eff_of(p),
            length: p.length,
        }
    }

    pub fn hamiltonian(&self) -> &Mat2 {
        &self.hamiltonian
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn propagator(&self) -> Mat2 {
        expm2(&self.hamiltonian, self.length)
    }
}

/// Time-ordered product: the first segment acts first, so later segments
/// multiply from the left.
pub fn propagate_piecewise(segments: &[Segment]) -> Mat2 {
    segments
        .iter()
        .fold(Mat2::identity(), |acc, s| s.propagator() * acc)
}

/// Reverses the segment order and conjugates each Hamiltonian by `X`.
///
/// For symmetric Hamiltonians the propagator of the result is `X·Πᵀ·X`,
/// where `Π` is the propagator of the input.
pub fn parity_swap_reverse(segments: &[Segment]) -> Vec<Segment> {
    let x = Mat2::exchange();
    segments
        .iter()
        .rev()
        .map(|s| Segment {
            hamiltonian: x * s.hamiltonian * x,
            length: s.length,
        })
        .collect()
}
