//! Visibility landscapes over `(κl, γ/κ)`, visibility-versus-length curves,
//! and extraction of their qualitative features.
//!
//! Grid nodes are independent and evaluated in parallel; results are collected
//! in index order, so the output is bit-identical to a sequential pass.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{check_indistinguishability, visibility, visibility_deficit};
use crate::error::{Error, Result};
use crate::matrix::Cplx;
use crate::propagator::{compose_geometry, geometry_det, CouplerParams, Geometry};

/// Coupling constant of the fabricated couplers, in cm⁻¹.
pub const DEFAULT_KAPPA: f64 = 0.85;

/// Sample differences at or below this size count as flat in
/// [`extract_features`].
pub const DEFAULT_FLAT_TOL: f64 = 1e-12;

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let r = Self { min, max, steps };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::MalformedRange(format!(
                "at least 2 steps required, got {}",
                self.steps
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::MalformedRange("bounds must be finite".into()));
        }
        if self.min >= self.max {
            return Err(Error::MalformedRange(format!(
                "min {} must be below max {}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * (k as f64 / last)
                }
            })
            .collect()
    }
}

/// Visibility over normalized length × normalized loss for one geometry.
///
/// `values[g * kl_axis.len() + k]` holds the node `(kl_axis[k], gok_axis[g])`,
/// so κl runs fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityGrid {
    pub config: Geometry,
    pub kl_axis: Vec<f64>,
    pub gok_axis: Vec<Cplx>,
    pub indistinguishability: f64,
    pub values: Vec<Option<f64>>,
}

impl VisibilityGrid {
    /// All κl samples at one loss value.
    pub fn row(&self, gok_index: usize) -> &[Option<f64>] {
        let n = self.kl_axis.len();
        &self.values[gok_index * n..(gok_index + 1) * n]
    }

    pub fn get(&self, kl_index: usize, gok_index: usize) -> Option<f64> {
        self.values[gok_index * self.kl_axis.len() + kl_index]
    }
}

fn node_visibility(config: Geometry, kl: f64, gok: Cplx, x: f64) -> Result<Option<f64>> {
    let p = CouplerParams::normalized(kl, gok)?;
    Ok(visibility(&compose_geometry(config, &p)).map(|v| x * v))
}

/// Evaluates the visibility on a `κl × γ/κ` grid with `κ = 1`.
pub fn visibility_map(
    config: Geometry,
    kl: AxisRange,
    gok: AxisRange,
    indistinguishability: f64,
) -> Result<VisibilityGrid> {
    kl.validate()?;
    gok.validate()?;
    check_indistinguishability(indistinguishability)?;
    if kl.min < 0.0 {
        return Err(Error::MalformedRange("κl must be non-negative".into()));
    }
    if gok.min < 0.0 {
        return Err(Error::MalformedRange("γ/κ must be non-negative".into()));
    }
    let kl_axis = kl.values();
    let gok_axis: Vec<Cplx> = gok.values().into_iter().map(Cplx::from).collect();
    let n = kl_axis.len();
    let values = (0..n * gok_axis.len())
        .into_par_iter()
        .map(|idx| {
            node_visibility(
                config,
                kl_axis[idx % n],
                gok_axis[idx / n],
                indistinguishability,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VisibilityGrid {
        config,
        kl_axis,
        gok_axis,
        indistinguishability,
        values,
    })
}

/// Visibility-versus-length curves at fixed physical parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    pub configs: Vec<Geometry>,
    pub gamma_over_kappa: Cplx,
    pub kappa: f64,
    pub lengths: Vec<f64>,
    pub indistinguishability: f64,
    /// One list per entry of `configs`, aligned with `lengths`.
    pub values: Vec<Vec<Option<f64>>>,
}

impl CurveSet {
    pub fn curve(&self, config: Geometry) -> Option<&[Option<f64>]> {
        self.configs
            .iter()
            .position(|c| *c == config)
            .map(|i| self.values[i].as_slice())
    }
}

fn check_lengths(lengths: &[f64]) -> Result<()> {
    if lengths.is_empty() {
        return Err(Error::InvalidParameter("no lengths given".into()));
    }
    if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "lengths must be non-negative and finite, got {l}"
        )));
    }
    Ok(())
}

/// Per-geometry visibility over physical lengths with `γ = (γ/κ)·κ`.
pub fn visibility_curves(
    configs: &[Geometry],
    kappa: f64,
    gamma_over_kappa: Cplx,
    lengths: &[f64],
    indistinguishability: f64,
) -> Result<CurveSet> {
    check_indistinguishability(indistinguishability)?;
    check_lengths(lengths)?;
    if configs.is_empty() {
        return Err(Error::InvalidParameter("no geometries given".into()));
    }
    let base = CouplerParams::new(kappa, gamma_over_kappa * kappa, 0.0)?;
    let values = configs
        .iter()
        .map(|&cfg| {
            lengths
                .par_iter()
                .map(|&l| {
                    let p = base.with_length(l)?;
                    Ok(visibility(&compose_geometry(cfg, &p)).map(|v| indistinguishability * v))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSet {
        configs: configs.to_vec(),
        gamma_over_kappa,
        kappa,
        lengths: lengths.to_vec(),
        indistinguishability,
        values,
    })
}

/// `1 − V` along a curve, computed from the exact geometry determinant.
///
/// Resolves the approach of `V` to `+1` in the broken phase, where `V`
/// itself rounds to `1.0`.
pub fn deficit_curve(
    config: Geometry,
    kappa: f64,
    gamma_over_kappa: Cplx,
    lengths: &[f64],
) -> Result<Vec<Option<f64>>> {
    check_lengths(lengths)?;
    let base = CouplerParams::new(kappa, gamma_over_kappa * kappa, 0.0)?;
    lengths
        .par_iter()
        .map(|&l| {
            let p = base.with_length(l)?;
            Ok(visibility_deficit(
                &compose_geometry(config, &p),
                geometry_det(&p),
            ))
        })
        .collect()
}

/// A sub-grid extremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

/// Qualitative structure of a sampled visibility curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Features {
    pub minima: Vec<Extremum>,
    pub maxima: Vec<Extremum>,
    /// Locations where `V` changes sign, by linear interpolation.
    pub zero_crossings: Vec<f64>,
    /// The curve ends in a non-decreasing, positive run covering at least
    /// half of the sampled axis.
    pub monotonic_tail: bool,
}

/// Vertex of the parabola through three points, clamped to `[x0, x2]`.
fn refine(x: [f64; 3], y: [f64; 3]) -> Extremum {
    let d01 = (y[1] - y[0]) / (x[1] - x[0]);
    let d12 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d12 - d01) / (x[2] - x[0]);
    if a == 0.0 || !a.is_finite() {
        return Extremum {
            x: x[1],
            value: y[1],
        };
    }
    let b = d01 - a * (x[0] + x[1]);
    let xv = (-b / (2.0 * a)).clamp(x[0], x[2]);
    // Newton form: y(x) = y0 + d01·(x − x0) + a·(x − x0)·(x − x1)
    let value = y[0] + d01 * (xv - x[0]) + a * (xv - x[0]) * (xv - x[1]);
    Extremum { x: xv, value }
}

/// [`extract_features_with`] using [`DEFAULT_FLAT_TOL`].
pub fn extract_features(xs: &[f64], values: &[Option<f64>]) -> Result<Features> {
    extract_features_with(xs, values, DEFAULT_FLAT_TOL)
}

/// Finds minima, maxima (refined by three-point quadratic interpolation),
/// sign changes and the monotonic-tail flag of a sampled curve.
///
/// Undefined samples split the curve into independent runs. Extrema whose
/// neighbouring differences are all within `flat_tol` are treated as
/// rounding noise, and values within `flat_tol` of zero carry no sign.
pub fn extract_features_with(
    xs: &[f64],
    values: &[Option<f64>],
    flat_tol: f64,
) -> Result<Features> {
    if xs.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "{} abscissae for {} samples",
            xs.len(),
            values.len()
        )));
    }
    if values.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: values.len(),
        });
    }
    if values.iter().all(Option::is_none) {
        return Err(Error::AllUndefined);
    }

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for (i, v) in values.iter().enumerate() {
        match (v, start) {
            (Some(_), None) => start = Some(i),
            (None, Some(s)) => {
                runs.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, values.len()));
    }

    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    let mut zero_crossings = Vec::new();
    for &(s, e) in &runs {
        let v: Vec<f64> = values[s..e]
            .iter()
            .map(|v| v.expect("run is defined"))
            .collect();
        let x = &xs[s..e];
        for i in 1..v.len().saturating_sub(1) {
            let (l, c, r) = (v[i - 1], v[i], v[i + 1]);
            let significant = (l - c).abs() > flat_tol || (r - c).abs() > flat_tol;
            if !significant {
                continue;
            }
            if c < l && c <= r {
                minima.push(refine([x[i - 1], x[i], x[i + 1]], [l, c, r]));
            } else if c > l && c >= r {
                maxima.push(refine([x[i - 1], x[i], x[i + 1]], [l, c, r]));
            }
        }
        let mut last: Option<(f64, f64)> = None;
        for (xi, vi) in x.iter().zip(&v) {
            if vi.abs() <= flat_tol {
                continue;
            }
            if let Some((xl, vl)) = last {
                if vl.signum() != vi.signum() {
                    zero_crossings.push(xl + (xi - xl) * vl / (vl - vi));
                }
            }
            last = Some((*xi, *vi));
        }
    }

    let monotonic_tail = {
        let &(s, e) = runs.last().expect("at least one defined run");
        let v: Vec<f64> = values[s..e]
            .iter()
            .map(|v| v.expect("run is defined"))
            .collect();
        let mut t = v.len() - 1;
        while t > 0 && v[t] >= v[t - 1] - flat_tol {
            t -= 1;
        }
        let span = xs[xs.len() - 1] - xs[0];
        let tail = xs[e - 1] - xs[s + t];
        v[v.len() - 1] > 0.0 && tail >= 0.5 * span
    };

    Ok(Features {
        minima,
        maxima,
        zero_crossings,
        monotonic_tail,
    })
}
