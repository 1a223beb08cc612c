use super::{Cplx, MatN};
use crate::error::{Error, Result};

/// Largest dimension [`perm_n`] accepts.
pub const DEFAULT_PERM_CAP: usize = 12;

/// Hard ceiling for the subset enumeration.
const MAX_RYSER_N: usize = 30;

/// Exact permanent with the default dimension cap.
pub fn perm_n(m: &MatN) -> Result<Cplx> {
    perm_n_with_cap(m, DEFAULT_PERM_CAP)
}

/// Exact permanent, rejecting matrices larger than `cap`.
///
/// Dimensions up to 3 are expanded by definition; larger matrices go through
/// [`perm_ryser`].
pub fn perm_n_with_cap(m: &MatN, cap: usize) -> Result<Cplx> {
    let n = m.n();
    if n > cap || n > MAX_RYSER_N {
        return Err(Error::DimensionCap { n, cap });
    }
    let a = |i, j| m.get(i, j);
    Ok(match n {
        1 => a(0, 0),
        2 => a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0),
        3 => {
            a(0, 0) * (a(1, 1) * a(2, 2) + a(1, 2) * a(2, 1))
                + a(0, 1) * (a(1, 0) * a(2, 2) + a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) + a(1, 1) * a(2, 0))
        }
        _ => ryser_gray(m),
    })
}

/// Ryser inclusion–exclusion permanent, `O(2ⁿ·n)`.
///
/// Available for every dimension so it can be cross-checked against the
/// definitional expansion on small matrices.
pub fn perm_ryser(m: &MatN) -> Result<Cplx> {
    if m.n() > MAX_RYSER_N {
        return Err(Error::DimensionCap {
            n: m.n(),
            cap: MAX_RYSER_N,
        });
    }
    Ok(ryser_gray(m))
}

/// perm(A) = (−1)ⁿ Σ_S (−1)^|S| Π_i Σ_{j∈S} a_ij, with subsets visited in
/// Gray-code order so each step adds or removes a single column.
fn ryser_gray(m: &MatN) -> Cplx {
    let n = m.n();
    let mut row_sums = vec![Cplx::new(0.0, 0.0); n];
    let mut total = Cplx::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        let adding = gray & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += m.get(i, col);
            } else {
                *s -= m.get(i, col);
            }
        }
        let prod: Cplx = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}
