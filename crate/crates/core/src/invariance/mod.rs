//! Randomized certification of the permanent order-invariance identities.
//!
//! Single-instance checks return residuals; the `run_*` drivers evaluate
//! seeded trials in parallel and aggregate them into an [`InvarianceReport`]
//! that does not depend on scheduling.
//!
//! A trial whose residual exceeds the tolerance is recorded as a
//! [`Counterexample`] together with a double-double re-evaluation of the same
//! residual, which separates rounding noise from genuine violations.

mod search3;

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dd::{field_residual, CDd, Field};
use crate::error::{Error, Result};
use crate::matrix::{
    hadamard_abs_square, perm2, rel_residual, rel_residual_real, row_col_reverse, Cplx, Mat2,
};
use crate::random::{random_mat2, random_unitary2, trial_rng, unit_disc};

pub use search3::{
    search_3mode, search_3mode_with, subpermanent_residual, Search3Hit, Search3Report,
    DEFAULT_REARRANGEMENTS,
};

/// One factor of a concatenated two-mode sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "matrix", rename_all = "snake_case")]
pub enum SequenceElement {
    /// The base matrix `M`.
    BlockM,
    /// Its row-and-column reversed transpose `XMᵀX`.
    BlockXmtx,
    /// An explicit matrix.
    Custom(Mat2),
}

impl SequenceElement {
    pub fn materialize(&self, base: &Mat2) -> Mat2 {
        match self {
            SequenceElement::BlockM => *base,
            SequenceElement::BlockXmtx => row_col_reverse(base),
            SequenceElement::Custom(m) => *m,
        }
    }
}

/// Residuals of the pair identity for one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    /// `perm((XMᵀX)·M)` against `perm(M·(XMᵀX))`.
    pub permanent: f64,
    /// Both permanents against `(m11m22 + m12m21)² + 4·m11m12m21m22`.
    pub expanded: f64,
    /// `perm|(XMᵀX)·M|²` against `perm|M·(XMᵀX)|²`.
    pub distinguishable: f64,
}

impl PairCheck {
    pub fn max(&self) -> f64 {
        self.permanent.max(self.expanded).max(self.distinguishable)
    }
}

/// Closed-form permanent of `(XMᵀX)·M`.
pub fn pair_permanent_expanded(m: &Mat2) -> Cplx {
    let s = m.m11 * m.m22 + m.m12 * m.m21;
    s * s + 4.0 * m.m11 * m.m12 * m.m21 * m.m22
}

pub fn check_pair_invariance(m: &Mat2) -> PairCheck {
    let r = row_col_reverse(m);
    let left = r * *m;
    let right = *m * r;
    let (pl, pr) = (perm2(&left), perm2(&right));
    let expanded = pair_permanent_expanded(m);
    let dl = perm2(&hadamard_abs_square(&left)).re;
    let dr = perm2(&hadamard_abs_square(&right)).re;
    PairCheck {
        permanent: rel_residual(pl, pr),
        expanded: rel_residual(pl, expanded).max(rel_residual(pr, expanded)),
        distinguishable: rel_residual_real(dl, dr),
    }
}

/// Forward/reverse residuals of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReversalCheck {
    pub indistinguishable: f64,
    pub distinguishable: f64,
}

impl ReversalCheck {
    pub fn max(&self) -> f64 {
        self.indistinguishable.max(self.distinguishable)
    }
}

/// Compares the permanent of the ordered product with that of the product
/// taken in reverse order, for both photon statistics.
pub fn check_sequence_reversal(seq: &[SequenceElement], base: &Mat2) -> Result<ReversalCheck> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mats: Vec<Mat2> = seq.iter().map(|e| e.materialize(base)).collect();
    Ok(reversal_residuals(&mats))
}

fn reversal_residuals(mats: &[Mat2]) -> ReversalCheck {
    let forward = mats.iter().fold(Mat2::identity(), |acc, m| acc * *m);
    let backward = mats.iter().rev().fold(Mat2::identity(), |acc, m| acc * *m);
    ReversalCheck {
        indistinguishable: rel_residual(perm2(&forward), perm2(&backward)),
        distinguishable: rel_residual_real(
            perm2(&hadamard_abs_square(&forward)).re,
            perm2(&hadamard_abs_square(&backward)).re,
        ),
    }
}

/// Residuals of the shared-antidiagonal lemma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub diagonal: f64,
    pub permanent: f64,
}

/// For `a`, `b` with identical antidiagonals, `a·b` and `b·a` share their
/// diagonal and hence their permanent.
pub fn check_antidiagonal_lemma(a: &Mat2, b: &Mat2) -> Result<LemmaCheck> {
    if a.m12 != b.m12 || a.m21 != b.m21 {
        return Err(Error::AntidiagonalMismatch);
    }
    let ab = *a * *b;
    let ba = *b * *a;
    Ok(LemmaCheck {
        diagonal: rel_residual(ab.m11, ba.m11).max(rel_residual(ab.m22, ba.m22)),
        permanent: rel_residual(perm2(&ab), perm2(&ba)),
    })
}

/// Outcome of the external-phase comparison for a unitary `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCheck {
    /// Largest `| |A_ij| − |B_ij| |` for `A = (XMᵀX)·M`, `B = M·(XMᵀX)`.
    pub modulus: f64,
    /// Largest `|A_ij − (D1·B·D2)_ij|` with the recovered phases.
    pub factorization: f64,
    /// Unimodular diagonal of `D1`.
    pub d1: [Cplx; 2],
    /// Unimodular diagonal of `D2`.
    pub d2: [Cplx; 2],
    /// `false` when `B` has a vanishing entry: the phases are then
    /// unconstrained and the factorization holds trivially.
    pub constrained: bool,
}

const ZERO_ENTRY: f64 = 1e-12;

/// For unitary `M`, checks that `(XMᵀX)·M` and `M·(XMᵀX)` differ only by
/// input and output phases, `(XMᵀX)·M = D1·(M·(XMᵀX))·D2`.
pub fn check_unitary_external_phase(m: &Mat2, tol: f64) -> Result<PhaseCheck> {
    let unitarity = (*m * m.dagger()).max_abs_diff(&Mat2::identity());
    if unitarity.is_nan() || unitarity > tol {
        return Err(Error::NotUnitary(unitarity));
    }
    let r = row_col_reverse(m);
    let a = r * *m;
    let b = *m * r;
    let modulus = a
        .entries()
        .iter()
        .zip(b.entries().iter())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max);

    let unit = |z: Cplx| {
        if z.norm() > 0.0 {
            z / z.norm()
        } else {
            Cplx::new(1.0, 0.0)
        }
    };
    // Phase ratio r_ij = arg(A_ij / B_ij), defined where B_ij does not vanish.
    let ratio = |x: Cplx, y: Cplx| {
        if y.norm() > ZERO_ENTRY && x.norm() > ZERO_ENTRY {
            Some(unit(x * y.conj()))
        } else {
            None
        }
    };
    let r11 = ratio(a.m11, b.m11);
    let r12 = ratio(a.m12, b.m12);
    let r21 = ratio(a.m21, b.m21);
    let r22 = ratio(a.m22, b.m22);
    let constrained = r11.is_some() && r12.is_some() && r21.is_some() && r22.is_some();

    // Fix p1 = 1 and walk the bipartite graph of nonzero entries; with at
    // most three edges it has no cycle and every edge can be satisfied.
    let one = Cplx::new(1.0, 0.0);
    let p1 = one;
    let q1 = r11.unwrap_or(one);
    let q2 = r12.unwrap_or_else(|| match (r22, r21) {
        (Some(r22), Some(r21)) => r22 * r21.conj() * q1,
        _ => one,
    });
    let p2 = match (r21, r22) {
        (Some(r21), _) => r21 * q1.conj(),
        (None, Some(r22)) => r22 * q2.conj(),
        (None, None) => one,
    };

    let d1 = [p1, p2];
    let d2 = [q1, q2];
    let rebuilt = Mat2::new(
        d1[0] * b.m11 * d2[0],
        d1[0] * b.m12 * d2[1],
        d1[1] * b.m21 * d2[0],
        d1[1] * b.m22 * d2[1],
    );
    Ok(PhaseCheck {
        modulus,
        factorization: a.max_abs_diff(&rebuilt),
        d1,
        d2,
        constrained,
    })
}

/// A trial that exceeded the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub seed: u64,
    pub trial: u64,
    /// Matrices that reproduce the trial, in sequence order.
    pub matrices: Vec<Mat2>,
    pub residual: f64,
    /// Same residual evaluated in double-double arithmetic.
    pub extended_residual: f64,
}

/// Aggregate of a seeded randomized run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub mode: String,
    pub seed: u64,
    pub trials: u64,
    pub tolerance: f64,
    /// Worst residual over every trial and component.
    pub max_residual: f64,
    /// Worst residual per component.
    pub components: BTreeMap<String, f64>,
    /// Every trial with residual above `tolerance`, ordered by trial index.
    pub counterexamples: Vec<Counterexample>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

struct TrialOutcome {
    components: Vec<(&'static str, f64)>,
    matrices: Vec<Mat2>,
}

fn sanitize(r: f64) -> f64 {
    if r.is_nan() {
        f64::INFINITY
    } else {
        r
    }
}

type Components = Vec<(&'static str, f64)>;

/// Evaluates `trials` independent trials and folds them in trial order.
fn run_trials<F, X>(
    mode: &str,
    trials: u64,
    seed: u64,
    tol: f64,
    trial: F,
    extended: X,
) -> InvarianceReport
where
    F: Fn(&mut ChaCha8Rng) -> TrialOutcome + Sync,
    X: Fn(&[Mat2]) -> f64 + Sync,
{
    let outcomes: Vec<(Components, Option<Counterexample>)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let out = trial(&mut rng);
            let residual = out
                .components
                .iter()
                .map(|(_, r)| sanitize(*r))
                .fold(0.0, f64::max);
            let cx = (residual > tol).then(|| Counterexample {
                seed,
                trial: k,
                extended_residual: extended(&out.matrices),
                matrices: out.matrices,
                residual,
            });
            (out.components, cx)
        })
        .collect();

    let mut components = BTreeMap::new();
    let mut max_residual: f64 = 0.0;
    let mut counterexamples = Vec::new();
    for (comps, cx) in outcomes {
        for (name, r) in comps {
            let r = sanitize(r);
            let slot = components.entry(name.to_string()).or_insert(0.0f64);
            *slot = slot.max(r);
            max_residual = max_residual.max(r);
        }
        counterexamples.extend(cx);
    }
    InvarianceReport {
        mode: mode.to_string(),
        seed,
        trials,
        tolerance: tol,
        max_residual,
        components,
        counterexamples,
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    Ok(())
}

fn check_max_len(max_len: usize) -> Result<()> {
    if max_len == 0 {
        return Err(Error::InvalidParameter(
            "max sequence length must be positive".into(),
        ));
    }
    Ok(())
}

// Extended-precision helpers operate on row-major [F; 4].

fn to_f<F: Field>(m: &Mat2) -> [F; 4] {
    m.entries().map(F::from_cplx)
}

fn mul_f<F: Field>(a: &[F; 4], b: &[F; 4]) -> [F; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn perm_f<F: Field>(a: &[F; 4]) -> F {
    a[0] * a[3] + a[1] * a[2]
}

fn dist_f<F: Field>(a: &[F; 4]) -> F {
    perm_f(&a.map(F::abs_sq))
}

fn product_f<'a, F: Field>(mats: impl Iterator<Item = &'a Mat2>) -> [F; 4] {
    let one = F::from_cplx(Cplx::new(1.0, 0.0));
    mats.fold([one, F::zero(), F::zero(), one], |acc, m| {
        mul_f(&acc, &to_f(m))
    })
}

/// Forward/reverse permanent residual of a product, in double-double.
fn reversal_extended(mats: &[Mat2]) -> f64 {
    let f: [CDd; 4] = product_f(mats.iter());
    let b: [CDd; 4] = product_f(mats.iter().rev());
    field_residual(perm_f(&f), perm_f(&b)).max(field_residual(dist_f(&f), dist_f(&b)))
}

fn pair_extended(mats: &[Mat2]) -> f64 {
    let m = mats[0];
    let seq = [row_col_reverse(&m), m];
    let left: [CDd; 4] = product_f(seq.iter());
    let right: [CDd; 4] = product_f(seq.iter().rev());
    let e = to_f::<CDd>(&m);
    let s = e[0] * e[3] + e[1] * e[2];
    let four = CDd::from_cplx(Cplx::new(4.0, 0.0));
    let expanded = s * s + four * e[0] * e[1] * e[2] * e[3];
    let (pl, pr) = (perm_f(&left), perm_f(&right));
    field_residual(pl, pr)
        .max(field_residual(pl, expanded))
        .max(field_residual(pr, expanded))
        .max(field_residual(dist_f(&left), dist_f(&right)))
}

fn lemma_extended(mats: &[Mat2]) -> f64 {
    let ab: [CDd; 4] = product_f(mats.iter());
    let ba: [CDd; 4] = product_f(mats.iter().rev());
    field_residual(ab[0], ba[0])
        .max(field_residual(ab[3], ba[3]))
        .max(field_residual(perm_f(&ab), perm_f(&ba)))
}

fn phase_extended(mats: &[Mat2]) -> f64 {
    let m = mats[0];
    let seq = [row_col_reverse(&m), m];
    let a: [CDd; 4] = product_f(seq.iter());
    let b: [CDd; 4] = product_f(seq.iter().rev());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let (x, y) = (x.abs_sq().to_cplx().re, y.abs_sq().to_cplx().re);
            (x.sqrt() - y.sqrt()).abs()
        })
        .fold(0.0, f64::max)
}

/// Pair identity, including the closed form and the distinguishable variant,
/// over random matrices with entries in the unit disc.
pub fn run_pair(trials: u64, seed: u64, tol: f64) -> Result<InvarianceReport> {
    check_trials(trials)?;
    check_tol(tol)?;
    Ok(run_trials(
        "pair",
        trials,
        seed,
        tol,
        |rng| {
            let m = random_mat2(rng);
            let c = check_pair_invariance(&m);
            TrialOutcome {
                components: vec![
                    ("permanent", c.permanent),
                    ("expanded", c.expanded),
                    ("distinguishable", c.distinguishable),
                ],
                matrices: vec![m],
            }
        },
        pair_extended,
    ))
}

/// Random sequence over `{M, XMᵀX}` of length `1..=max_len`.
pub fn random_block_sequence<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Vec<SequenceElement> {
    let len = rng.random_range(1..=max_len);
    (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                SequenceElement::BlockM
            } else {
                SequenceElement::BlockXmtx
            }
        })
        .collect()
}

/// Whole-sequence reversal over random `{M, XMᵀX}` sequences.
pub fn run_sequence(trials: u64, max_len: usize, seed: u64, tol: f64) -> Result<InvarianceReport> {
    check_trials(trials)?;
    check_tol(tol)?;
    check_max_len(max_len)?;
    Ok(run_trials(
        "sequence",
        trials,
        seed,
        tol,
        |rng| {
            let base = random_mat2(rng);
            let seq = random_block_sequence(rng, max_len);
            let mats: Vec<Mat2> = seq.iter().map(|e| e.materialize(&base)).collect();
            let c = reversal_residuals(&mats);
            TrialOutcome {
                components: vec![
                    ("indistinguishable", c.indistinguishable),
                    ("distinguishable", c.distinguishable),
                ],
                matrices: mats,
            }
        },
        reversal_extended,
    ))
}

/// Random matrix with the prescribed antidiagonal and unit-disc diagonal.
pub fn with_antidiagonal<R: Rng + ?Sized>(rng: &mut R, m12: Cplx, m21: Cplx) -> Mat2 {
    Mat2::new(unit_disc(rng), m12, m21, unit_disc(rng))
}

/// Shared-antidiagonal lemma over random pairs.
pub fn run_lemma(trials: u64, seed: u64, tol: f64) -> Result<InvarianceReport> {
    check_trials(trials)?;
    check_tol(tol)?;
    Ok(run_trials(
        "lemma",
        trials,
        seed,
        tol,
        |rng| {
            let (b, c) = (unit_disc(rng), unit_disc(rng));
            let x = with_antidiagonal(rng, b, c);
            let y = with_antidiagonal(rng, b, c);
            let l = check_antidiagonal_lemma(&x, &y).expect("antidiagonals are shared");
            TrialOutcome {
                components: vec![("diagonal", l.diagonal), ("permanent", l.permanent)],
                matrices: vec![x, y],
            }
        },
        lemma_extended,
    ))
}

/// External-phase equivalence over Haar-random unitaries.
pub fn run_unitary(trials: u64, seed: u64, tol: f64) -> Result<InvarianceReport> {
    check_trials(trials)?;
    check_tol(tol)?;
    Ok(run_trials(
        "unitary",
        trials,
        seed,
        tol,
        |rng| {
            let u = random_unitary2(rng);
            // Haar samples are unitary to ~1e-15; the check tolerance here
            // only gates the precondition.
            let c = check_unitary_external_phase(&u, 1e-12).expect("Haar sample is unitary");
            TrialOutcome {
                components: vec![("modulus", c.modulus), ("factorization", c.factorization)],
                matrices: vec![u],
            }
        },
        phase_extended,
    ))
}

/// Reversal over sequences of distinct matrices that share one antidiagonal.
pub fn run_antidiagonal_sequence(
    trials: u64,
    max_len: usize,
    seed: u64,
    tol: f64,
) -> Result<InvarianceReport> {
    check_trials(trials)?;
    check_tol(tol)?;
    check_max_len(max_len)?;
    Ok(run_trials(
        "antidiag-seq",
        trials,
        seed,
        tol,
        |rng| {
            let (b, c) = (unit_disc(rng), unit_disc(rng));
            let len = rng.random_range(1..=max_len);
            let mats: Vec<Mat2> = (0..len).map(|_| with_antidiagonal(rng, b, c)).collect();
            let r = reversal_residuals(&mats);
            TrialOutcome {
                components: vec![
                    ("indistinguishable", r.indistinguishable),
                    ("distinguishable", r.distinguishable),
                ],
                matrices: mats,
            }
        },
        reversal_extended,
    ))
}
