//! The complex one-parameter Bryant family.
//!
//! For `-π < p < π` define the complex-valued function
//!
//! ```text
//! Φ(b², s) = (√(e^{ip} + b² − s²) − i s) / (e^{ip} + b²)
//! ```
//!
//! with the principal square root (branch `√1 = 1`, cut along the closed
//! negative real axis). The metric function is `φ = Re Φ`. All partial
//! derivatives of Φ have closed forms, and Φ satisfies three identities
//! used as cross-checks throughout the test suite:
//!
//! * `Φ − sΦ₂ = (e^{ip} + b² − s²)^{-1/2}`
//! * `Φ − sΦ₂ + (b² − s²)Φ₂₂ = e^{ip} (e^{ip} + b² − s²)^{-3/2}`
//! * `Φ₂ + 2sΦ₁ = −iΦ²`

use num_complex::Complex64;

use crate::error::{GabError, Result};
use crate::phi::PhiJet;

/// Value and partial derivatives of Φ at one `(b², s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexJet {
    pub phi: Complex64,
    pub phi1: Complex64,
    pub phi2: Complex64,
    pub phi12: Complex64,
    pub phi22: Complex64,
}

impl ComplexJet {
    /// Real parts, which form the jet of `φ = Re Φ`.
    pub fn real_jet(&self) -> PhiJet {
        PhiJet {
            phi: self.phi.re,
            phi1: self.phi1.re,
            phi2: self.phi2.re,
            phi12: self.phi12.re,
            phi22: self.phi22.re,
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if !p.is_finite() || p.abs() >= std::f64::consts::PI {
        return Err(GabError::Domain(format!(
            "bryant parameter p = {p} outside (-pi, pi)"
        )));
    }
    Ok(())
}

/// Principal square root, rejecting arguments on the closed negative real
/// axis where the branch is discontinuous.
fn branch_sqrt(w: Complex64) -> Result<Complex64> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(GabError::Branch(format!(
            "sqrt argument {w} lies on the closed negative real axis"
        )));
    }
    Ok(w.sqrt())
}

/// Full complex jet of Φ.
pub fn big_phi_jet(p: f64, b2: f64, s: f64) -> Result<ComplexJet> {
    check_p(p)?;
    if s * s > b2 + 1e-12 {
        return Err(GabError::Domain(format!("s² = {} > b² = {b2}", s * s)));
    }
    let eip = Complex64::new(p.cos(), p.sin());
    let w = eip + Complex64::new(b2 - s * s, 0.0);
    let u = branch_sqrt(w)?;
    let d = eip + Complex64::new(b2, 0.0);
    let i = Complex64::i();

    let phi = (u - i * s) / d;
    // ∂u/∂b² = 1/(2u), ∂d/∂b² = 1, ∂u/∂s = -s/u.
    let phi1 = (d / (2.0 * u) - u + i * s) / (d * d);
    let phi2 = (-s / u - i) / d;
    // u² + s² = d collapses both second-order expressions.
    let phi22 = -1.0 / (u * u * u);
    let phi12 = s / (2.0 * u * u * u * d) + (s / u + i) / (d * d);

    Ok(ComplexJet {
        phi,
        phi1,
        phi2,
        phi12,
        phi22,
    })
}

/// Largest `b_o` such that the family stays a Finsler metric for all
/// `|s| ≤ b < b_o`: infinite for `|p| ≤ π/2`, and
/// `√(½·sec(2π/3 − |p|/3))` for `π/2 < |p| < π`.
pub fn bryant_b_o(p: f64) -> Result<f64> {
    check_p(p)?;
    let ap = p.abs();
    if ap <= std::f64::consts::FRAC_PI_2 {
        Ok(f64::INFINITY)
    } else {
        let angle = 2.0 * std::f64::consts::PI / 3.0 - ap / 3.0;
        Ok((0.5 / angle.cos()).sqrt())
    }
}
