//! Central finite-difference helpers.
//!
//! All oracles in this crate differentiate numerically with plain central
//! differences. The default step `1e-5` balances truncation against
//! round-off for O(1) double-precision values.

/// Default step for first derivatives and mixed second derivatives.
pub const DEFAULT_STEP: f64 = 1e-5;

/// First derivative by central difference: `(f(x+h) - f(x-h)) / 2h`.
pub fn central1<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Pure second derivative: `(f(x+h) - 2 f(x) + f(x-h)) / h²`.
pub fn central2<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Mixed second derivative `∂²f/∂u∂v` by the four-point stencil.
pub fn central_mixed<F: FnMut(f64, f64) -> f64>(mut f: F, u: f64, v: f64, h: f64, k: f64) -> f64 {
    (f(u + h, v + k) - f(u + h, v - k) - f(u - h, v + k) + f(u - h, v - k)) / (4.0 * h * k)
}

/// Relative deviation `|a - b| / max(1, |b|)` used by the jet-vs-FD checks.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
