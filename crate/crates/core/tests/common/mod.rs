//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the library's numerical kernels: matrices are
//! plain `[[Complex64; N]; N]` arrays and every routine is the textbook
//! definition.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C;

pub type A2 = [[C; 2]; 2];

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn mul2(a: &A2, b: &A2) -> A2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn eye2() -> A2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

fn norm1(a: &A2) -> f64 {
    (0..2)
        .map(|j| a[0][j].norm() + a[1][j].norm())
        .fold(0.0, f64::max)
}

/// `exp(−i·h·t)` by scaling and squaring with a 40-term Taylor series.
pub fn expm_series(h: &A2, t: f64) -> A2 {
    let mut g = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = c(0.0, -t) * h[i][j];
        }
    }
    let norm = norm1(&g);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    for row in g.iter_mut() {
        for z in row.iter_mut() {
            *z *= scale;
        }
    }
    let mut sum = eye2();
    let mut term = eye2();
    for k in 1..=40 {
        term = mul2(&term, &g);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z /= k as f64;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mul2(&sum, &sum);
    }
    sum
}

/// Permanent by summing over all permutations, for small `n`.
pub fn perm_naive(a: &[Vec<C>]) -> C {
    let n = a.len();
    assert!(n <= 8, "naive permanent is for small matrices only");
    let mut idx: Vec<usize> = (0..n).collect();
    let mut total = c(0.0, 0.0);
    permute(&mut idx, 0, &mut |p| {
        let mut prod = c(1.0, 0.0);
        for (i, &j) in p.iter().enumerate() {
            prod *= a[i][j];
        }
        total += prod;
    });
    total
}

fn permute(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, f);
        idx.swap(k, i);
    }
}

/// Largest singular value of a 2×2 matrix from the eigenvalues of `A†A`.
pub fn max_singular_value(a: &A2) -> f64 {
    let mut g = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                g[i][j] += a[k][i].conj() * a[k][j];
            }
        }
    }
    let tr = (g[0][0] + g[1][1]).re;
    let det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 + disc).sqrt()
}

pub fn max_abs_diff(a: &A2, b: &A2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn max_rel_diff(a: &A2, b: &A2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let scale = 1f64.max(a[i][j].norm()).max(b[i][j].norm());
            m = m.max((a[i][j] - b[i][j]).norm() / scale);
        }
    }
    m
}
