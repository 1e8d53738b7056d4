//! Exact integrals of the Duhamel kernel against the linear interpolation
//! basis on one step.

use crate::calculus::FracOrder;

/// Below this `|ω h|` the weights use their Taylor series; the closed forms
/// lose about `ε/x²` relative accuracy there.
const SERIES_THRESHOLD: f64 = 0.1;

/// Weights of the left (`w0`, `v0`) and right (`w1`, `v1`) interpolation
/// nodes for the solution (`w`) and its time derivative (`v`).
///
/// ```text
/// w0 = ∫₀ʰ A1(h−s)(1 − s/h) ds    w1 = ∫₀ʰ A1(h−s)(s/h) ds
/// v0 = ∫₀ʰ A0(h−s)(1 − s/h) ds    v1 = ∫₀ʰ A0(h−s)(s/h) ds
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelWeights {
    pub w0: f64,
    pub w1: f64,
    pub v0: f64,
    pub v1: f64,
}

/// `(w0, w1)` for eigenvalue root `lambda` and order `alpha`.
pub fn kernel_weights(h: f64, lambda: f64, alpha: FracOrder) -> (f64, f64) {
    let k = kernel_weights_full(h, alpha.frequency(lambda * lambda));
    (k.w0, k.w1)
}

/// All four weights for oscillator frequency `omega = λ^α`.
pub fn kernel_weights_full(h: f64, omega: f64) -> KernelWeights {
    // moments over τ ∈ [0, h]: I0 = ∫A1, I1 = ∫τA1, J0 = ∫A0, J1 = ∫τA0
    let x = omega * h;
    let (i0, i1, j0, j1) = if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        let h2 = h * h;
        let i0 = h2
            * (0.5
                - x2 * (1.0 / 24.0 - x2 * (1.0 / 720.0 - x2 * (1.0 / 40320.0 - x2 / 3628800.0))));
        let i1 = h2
            * h
            * (1.0 / 3.0
                - x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 * (1.0 / 45360.0 - x2 / 3991680.0))));
        let j0 =
            h * (1.0 - x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5040.0 - x2 / 362880.0))));
        let j1 = h2
            * (0.5 - x2 * (1.0 / 8.0 - x2 * (1.0 / 144.0 - x2 * (1.0 / 5760.0 - x2 / 403200.0))));
        (i0, i1, j0, j1)
    } else {
        let (s, c) = x.sin_cos();
        let w2 = omega * omega;
        let i0 = (1.0 - c) / w2;
        let i1 = (s - x * c) / (w2 * omega);
        let j0 = s / omega;
        let j1 = (x * s + c - 1.0) / w2;
        (i0, i1, j0, j1)
    };
    KernelWeights {
        w0: i1 / h,
        w1: i0 - i1 / h,
        v0: j1 / h,
        v1: j0 - j1 / h,
    }
}
