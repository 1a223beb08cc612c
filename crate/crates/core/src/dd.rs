//! Double-double arithmetic built from error-free transformations, used to
//! re-evaluate suspicious residuals at roughly twice the working precision.

use std::ops::{Add, Mul, Neg, Sub};

use crate::matrix::Cplx;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl Add for CDd {
    type Output = CDd;

    fn add(self, y: CDd) -> CDd {
        CDd {
            re: self.re + y.re,
            im: self.im + y.im,
        }
    }
}

impl Sub for CDd {
    type Output = CDd;

    fn sub(self, y: CDd) -> CDd {
        CDd {
            re: self.re - y.re,
            im: self.im - y.im,
        }
    }
}

impl Mul for CDd {
    type Output = CDd;

    fn mul(self, y: CDd) -> CDd {
        CDd {
            re: self.re * y.re - self.im * y.im,
            im: self.re * y.im + self.im * y.re,
        }
    }
}

/// Minimal complex field interface so small kernels can run in either
/// working or extended precision.
pub trait Field: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn from_cplx(z: Cplx) -> Self;
    fn to_cplx(self) -> Cplx;
    /// Squared modulus, as a real element of the same field.
    fn abs_sq(self) -> Self;
}

impl Field for Cplx {
    fn zero() -> Self {
        Cplx::new(0.0, 0.0)
    }

    fn from_cplx(z: Cplx) -> Self {
        z
    }

    fn to_cplx(self) -> Cplx {
        self
    }

    fn abs_sq(self) -> Self {
        Cplx::new(self.norm_sqr(), 0.0)
    }
}

impl Field for CDd {
    fn zero() -> Self {
        CDd::default()
    }

    fn from_cplx(z: Cplx) -> Self {
        CDd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    fn to_cplx(self) -> Cplx {
        Cplx::new(self.re.to_f64(), self.im.to_f64())
    }

    fn abs_sq(self) -> Self {
        CDd {
            re: self.re * self.re + self.im * self.im,
            im: Dd::default(),
        }
    }
}

/// Mixed absolute/relative residual with the difference formed in `F`.
pub fn field_residual<F: Field>(a: F, b: F) -> f64 {
    let diff = (a - b).to_cplx().norm();
    diff / 1f64.max(a.to_cplx().norm()).max(b.to_cplx().norm())
}
