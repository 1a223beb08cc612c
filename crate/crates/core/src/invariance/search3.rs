//! Three-mode order-invariance search.
//!
//! For a random 3×3 `M` and a second matrix `N` built from the same entries,
//! the products `N·M` and `M·N` are compared through their permanent and
//! through the multisets of their 1×1 and 2×2 subpermanents (distinct row and
//! column indices). `N = P·M·P` for a permutation matrix `P` must always pass;
//! any other arrangement that passes is logged.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use std::collections::BTreeMap;

use super::{Counterexample, InvarianceReport};
use crate::dd::{field_residual, CDd, Field};
use crate::error::Result;
use crate::matrix::{Cplx, MatN};
use crate::random::{random_matn, trial_rng};

/// Non-PMP rearrangements drawn per trial by [`search_3mode`].
pub const DEFAULT_REARRANGEMENTS: usize = 10;

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];
const PAIRS3: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

type M3<F> = [[F; 3]; 3];

fn to_m3<F: Field>(m: &MatN) -> M3<F> {
    std::array::from_fn(|i| std::array::from_fn(|j| F::from_cplx(m.get(i, j))))
}

fn from_m3(m: &M3<Cplx>) -> MatN {
    MatN::from_fn(3, |i, j| m[i][j])
}

fn mul3<F: Field>(a: &M3<F>, b: &M3<F>) -> M3<F> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
    })
}

fn perm3<F: Field>(a: &M3<F>) -> F {
    a[0][0] * (a[1][1] * a[2][2] + a[1][2] * a[2][1])
        + a[0][1] * (a[1][0] * a[2][2] + a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] + a[1][1] * a[2][0])
}

/// `P·M·P` with `P[i][σ(i)] = 1`, i.e. `(PMP)_ij = M[σ(i)][σ⁻¹(j)]`.
fn pmp<F: Field>(m: &M3<F>, sigma: &[usize; 3]) -> M3<F> {
    let mut inv = [0usize; 3];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    std::array::from_fn(|i| std::array::from_fn(|j| m[sigma[i]][inv[j]]))
}

/// Subpermanents of order 1, 2 and 3.
fn subpermanents<F: Field>(a: &M3<F>) -> [Vec<F>; 3] {
    let order1 = a.iter().flat_map(|row| row.iter().copied()).collect();
    let mut order2 = Vec::with_capacity(9);
    for r in PAIRS3 {
        for c in PAIRS3 {
            order2.push(a[r[0]][c[0]] * a[r[1]][c[1]] + a[r[0]][c[1]] * a[r[1]][c[0]]);
        }
    }
    [order1, order2, vec![perm3(a)]]
}

/// Bottleneck residual of a greedy nearest-first matching between two
/// equally sized multisets.
fn multiset_residual<F: Field>(a: &[F], b: &[F]) -> f64 {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push((field_residual(*x, *y), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for (r, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(r);
        matched += 1;
        if matched == a.len() {
            break;
        }
    }
    worst
}

/// Worst residual, over orders 1–3, between the subpermanent multisets of
/// `N·M` and `M·N`, evaluated in the field `F`.
fn order_residual<F: Field>(m: &M3<F>, n: &M3<F>) -> [f64; 3] {
    let nm = subpermanents(&mul3(n, m));
    let mn = subpermanents(&mul3(m, n));
    std::array::from_fn(|k| multiset_residual(&nm[k], &mn[k]))
}

/// Order-independence residual of `N·M` versus `M·N` for 3×3 matrices, per
/// subpermanent order `[1, 2, 3]`.
pub fn subpermanent_residual(m: &MatN, n: &MatN) -> [f64; 3] {
    assert!(m.n() == 3 && n.n() == 3, "three-mode matrices required");
    order_residual::<Cplx>(&to_m3(m), &to_m3(n))
}

fn subpermanent_residual_extended(m: &MatN, n: &MatN) -> f64 {
    order_residual::<CDd>(&to_m3(m), &to_m3(n))
        .into_iter()
        .fold(0.0, f64::max)
}

/// A non-PMP rearrangement whose products passed every comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Search3Hit {
    pub seed: u64,
    pub trial: u64,
    pub sample: usize,
    pub m: MatN,
    pub n: MatN,
    pub residual: f64,
    pub extended_residual: f64,
    /// The extended residual also falls below a tenth of the tolerance.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Search3Report {
    /// `N = P·M·P` confirmations over all six permutations; must pass.
    pub pmp: InvarianceReport,
    pub rearrangements_per_trial: usize,
    pub non_pmp_samples: u64,
    /// Closest approach to order independence among non-PMP samples.
    pub non_pmp_min_residual: f64,
    /// Informational log of non-PMP samples that passed.
    pub hits: Vec<Search3Hit>,
}

fn is_pmp<F: Field + PartialEq>(m: &M3<F>, n: &M3<F>) -> bool {
    PERMS3.iter().any(|s| pmp(m, s) == *n)
}

/// Random non-PMP arrangement of the entries of `m`.
fn rearrange<R: Rng + ?Sized>(rng: &mut R, m: &M3<Cplx>) -> Option<M3<Cplx>> {
    let flat: Vec<Cplx> = m.iter().flat_map(|r| r.iter().copied()).collect();
    let mut order: Vec<usize> = (0..9).collect();
    for _ in 0..64 {
        order.shuffle(rng);
        let n: M3<Cplx> = std::array::from_fn(|i| std::array::from_fn(|j| flat[order[3 * i + j]]));
        if !is_pmp(m, &n) {
            return Some(n);
        }
    }
    None
}

struct TrialResult {
    pmp_components: [f64; 3],
    pmp_fail: Option<Counterexample>,
    samples: u64,
    min_residual: f64,
    hits: Vec<Search3Hit>,
}

/// [`search_3mode_with`] using [`DEFAULT_REARRANGEMENTS`].
pub fn search_3mode(trials: u64, seed: u64, tol: f64) -> Result<Search3Report> {
    search_3mode_with(trials, seed, tol, DEFAULT_REARRANGEMENTS)
}

/// Runs `trials` seeded trials. Each draws a random 3×3 `M`, confirms order
/// independence for all six `N = P·M·P`, then draws `rearrangements` random
/// non-PMP arrangements of `M`'s entries and logs any that also pass.
pub fn search_3mode_with(
    trials: u64,
    seed: u64,
    tol: f64,
    rearrangements: usize,
) -> Result<Search3Report> {
    super::check_trials(trials)?;
    super::check_tol(tol)?;

    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let m_mat = random_matn(&mut rng, 3);
            let m: M3<Cplx> = to_m3(&m_mat);

            let mut pmp_components = [0.0f64; 3];
            let mut worst: Option<(f64, M3<Cplx>)> = None;
            for sigma in &PERMS3 {
                let n = pmp(&m, sigma);
                let r = order_residual(&m, &n);
                for (slot, v) in pmp_components.iter_mut().zip(r) {
                    *slot = slot.max(super::sanitize(v));
                }
                let total = r.into_iter().map(super::sanitize).fold(0.0, f64::max);
                if total > tol && worst.as_ref().is_none_or(|(w, _)| total > *w) {
                    worst = Some((total, n));
                }
            }
            let pmp_fail = worst.map(|(residual, n)| {
                let n_mat = from_m3(&n);
                Counterexample {
                    seed,
                    trial: k,
                    extended_residual: subpermanent_residual_extended(&m_mat, &n_mat),
                    matrices: Vec::new(),
                    residual,
                }
            });

            let mut samples = 0;
            let mut min_residual = f64::INFINITY;
            let mut hits = Vec::new();
            for sample in 0..rearrangements {
                let Some(n) = rearrange(&mut rng, &m) else {
                    continue;
                };
                samples += 1;
                let residual = order_residual(&m, &n)
                    .into_iter()
                    .map(super::sanitize)
                    .fold(0.0, f64::max);
                min_residual = min_residual.min(residual);
                if residual <= tol {
                    let n_mat = from_m3(&n);
                    let extended_residual = subpermanent_residual_extended(&m_mat, &n_mat);
                    hits.push(Search3Hit {
                        seed,
                        trial: k,
                        sample,
                        m: m_mat.clone(),
                        n: n_mat,
                        residual,
                        extended_residual,
                        certified: extended_residual <= tol / 10.0,
                    });
                }
            }
            TrialResult {
                pmp_components,
                pmp_fail,
                samples,
                min_residual,
                hits,
            }
        })
        .collect();

    let mut components = BTreeMap::new();
    let mut max_residual: f64 = 0.0;
    let mut counterexamples = Vec::new();
    let mut non_pmp_samples = 0;
    let mut non_pmp_min_residual = f64::INFINITY;
    let mut hits = Vec::new();
    for r in results {
        for (k, v) in r.pmp_components.iter().enumerate() {
            let name = ["order1", "order2", "order3"][k];
            let slot = components.entry(name.to_string()).or_insert(0.0f64);
            *slot = slot.max(*v);
            max_residual = max_residual.max(*v);
        }
        counterexamples.extend(r.pmp_fail);
        non_pmp_samples += r.samples;
        non_pmp_min_residual = non_pmp_min_residual.min(r.min_residual);
        hits.extend(r.hits);
    }
    Ok(Search3Report {
        pmp: InvarianceReport {
            mode: "search3-pmp".to_string(),
            seed,
            trials,
            tolerance: tol,
            max_residual,
            components,
            counterexamples,
        },
        rearrangements_per_trial: rearrangements,
        non_pmp_samples,
        non_pmp_min_residual,
        hits,
    })
}
