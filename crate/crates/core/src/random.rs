//! Seeded random matrix ensembles.
//!
//! Every randomized run is reproducible from `(seed, trial)`. The generator
//! for trial `k` of a run seeded with `s` is `ChaCha8Rng::seed_from_u64(s)`
//! switched to stream `k`; trials therefore draw from independent streams and
//! can be evaluated in any order or in parallel without changing results.
//!
//! Complex entries are drawn as `re + i·im` with `re, im` uniform on
//! `[−1, 1)`, rejecting draws outside the closed unit disc.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{Cplx, Mat2, MatN};

/// Generator for one trial of a seeded run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform sample from the complex unit disc.
pub fn unit_disc<R: Rng + ?Sized>(rng: &mut R) -> Cplx {
    loop {
        let z = Cplx::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

pub fn random_mat2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    Mat2::new(
        unit_disc(rng),
        unit_disc(rng),
        unit_disc(rng),
        unit_disc(rng),
    )
}

pub fn random_matn<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MatN {
    let entries = (0..n * n).map(|_| unit_disc(rng)).collect();
    MatN::new(n, entries).expect("unit-disc entries are finite")
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Cplx {
    Cplx::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-distributed 2×2 unitary: Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let (a1, a2) = (gaussian(rng), gaussian(rng));
    let (b1, b2) = (gaussian(rng), gaussian(rng));
    let n1 = (a1.norm_sqr() + a2.norm_sqr()).sqrt();
    let (q1, q2) = (a1 / n1, a2 / n1);
    let proj = q1.conj() * b1 + q2.conj() * b2;
    let (c1, c2) = (b1 - proj * q1, b2 - proj * q2);
    let n2 = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
    // Columns (q1, q2) and (c1, c2) / n2.
    Mat2::new(q1, c1 / n2, q2, c2 / n2)
}
