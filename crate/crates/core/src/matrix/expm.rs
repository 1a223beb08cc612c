use super::{Cplx, Mat2};

/// Below this `|μt|` the trigonometric factors switch to their Taylor series.
const TAYLOR_THRESHOLD: f64 = 1e-6;

/// Evolution operator `exp(−i·h·t)` of a 2×2 generator.
///
/// Splitting `h = (tr h / 2)·I + A` with `A` traceless gives `A² = μ²·I`,
/// `μ² = −det A`, hence
///
/// ```text
/// exp(−i·h·t) = e^{−i·(tr h/2)·t} · [cos(μt)·I − i·t·sinc(μt)·A]
/// ```
///
/// Both `cos` and `sinc` are even in `μ`, so they are evaluated as functions
/// of `(μt)²` and no branch of the square root has to be chosen. At an
/// exceptional point `A` is nilpotent, `μ = 0`, and the expression reduces
/// continuously to `I − i·t·A`.
pub fn expm2(h: &Mat2, t: f64) -> Mat2 {
    let half_trace = h.trace() * 0.5;
    let a = Mat2::new(h.m11 - half_trace, h.m12, h.m21, h.m22 - half_trace);
    let w = -a.det() * (t * t);
    let (cos, sinc) = cos_sinc_of_square(w);

    let phase = (Cplx::new(0.0, -t) * half_trace).exp();
    let k = Cplx::new(0.0, -t) * sinc;
    Mat2::new(
        phase * (cos + k * a.m11),
        phase * (k * a.m12),
        phase * (k * a.m21),
        phase * (cos + k * a.m22),
    )
}

/// `(cos z, sin z / z)` given `w = z²`.
fn cos_sinc_of_square(w: Cplx) -> (Cplx, Cplx) {
    if w.norm() < TAYLOR_THRESHOLD * TAYLOR_THRESHOLD {
        let w2 = w * w;
        let w3 = w2 * w;
        let cos = 1.0 - w / 2.0 + w2 / 24.0 - w3 / 720.0;
        let sinc = 1.0 - w / 6.0 + w2 / 120.0 - w3 / 5040.0;
        (cos, sinc)
    } else {
        let z = w.sqrt();
        (z.cos(), z.sin() / z)
    }
}
