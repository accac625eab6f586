//! The φ(b², s) families and their jets.
//!
//! Every family evaluates to a [`PhiJet`]: the value of φ together with the
//! partial derivatives entering the fundamental-tensor and spray formulas.
//! Subscript 1 denotes differentiation with respect to the first variable
//! `b²`, subscript 2 with respect to `s`.

mod bryant;
mod lemma_c;
mod transform;

pub use bryant::{big_phi_jet, bryant_b_o, ComplexJet};
pub use lemma_c::{b_o_squared, lemma_c_jet, CustomProfile, FProfile, GProfile};
pub use transform::{mu_transform_jet, transformed_b_o};

use crate::error::{GabError, Result};

/// Value and partial derivatives of φ at one point of its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiJet {
    /// φ(b², s)
    pub phi: f64,
    /// ∂φ/∂b²
    pub phi1: f64,
    /// ∂φ/∂s
    pub phi2: f64,
    /// ∂²φ/∂b²∂s
    pub phi12: f64,
    /// ∂²φ/∂s²
    pub phi22: f64,
}

/// A φ family with its parameters.
#[derive(Debug, Clone)]
pub enum PhiFamily {
    /// φ ≡ 1; the metric reduces to the Riemannian α.
    Constant,
    /// φ = 1 + s (Randers).
    Randers,
    /// φ = (√(1+b²) + s)²; the b²-aware rewriting of the squared-Randers
    /// metric, which solves the flatness PDE while the plain (1+s)² form
    /// does not.
    BerwaldSquare,
    /// Real part of the complex family, parameter in radians, −π < p < π.
    Bryant { p: f64 },
    /// Integral construction from a one-dimensional profile.
    LemmaC { f: FProfile, g: GProfile },
    /// `T_μ` applied to another family.
    MuTransformed { base: Box<PhiFamily>, mu: f64 },
}

impl PhiFamily {
    /// Short identifier used in reports.
    pub fn name(&self) -> String {
        match self {
            PhiFamily::Constant => "constant".into(),
            PhiFamily::Randers => "randers".into(),
            PhiFamily::BerwaldSquare => "berwald_square".into(),
            PhiFamily::Bryant { p } => format!("bryant(p={p})"),
            PhiFamily::LemmaC { f, g } => format!("lemma_c(f={}, g={})", f.name(), g.name()),
            PhiFamily::MuTransformed { base, mu } => {
                format!("mu_transformed(base={}, mu={mu})", base.name())
            }
        }
    }

    /// Declared regularity bound: the metric is a Finsler metric for
    /// `b < b_o`. For the complex family this is the closed-form bound of
    /// the regularity lemma; for the integral construction it is an
    /// engineering bound read off the profile's singularities, which may
    /// overestimate the true regular range (e.g. the √(1−t) profile is
    /// evaluable up to b = 1 but regular only for b < 1/√2 — the validity
    /// sweep reports the sharp bound).
    pub fn b_o(&self) -> f64 {
        match self {
            PhiFamily::Constant | PhiFamily::BerwaldSquare => f64::INFINITY,
            PhiFamily::Randers => 1.0,
            PhiFamily::Bryant { p } => bryant_b_o(*p).unwrap_or(f64::NAN),
            PhiFamily::LemmaC { f, g } => b_o_squared(f, g).sqrt(),
            PhiFamily::MuTransformed { base, mu } => transformed_b_o(base.b_o(), *mu),
        }
    }

    /// Evaluability bound: `eval_jet` works for `b < b_eval_sup`. This can
    /// exceed [`Self::b_o`] — the complex family stays evaluable past its
    /// regularity bound, which is what lets the validity sweep and the
    /// determinant witness detect the failure numerically.
    pub fn b_eval_sup(&self) -> f64 {
        match self {
            PhiFamily::Constant
            | PhiFamily::Randers
            | PhiFamily::BerwaldSquare
            | PhiFamily::Bryant { .. } => f64::INFINITY,
            PhiFamily::LemmaC { f, g } => b_o_squared(f, g).sqrt(),
            PhiFamily::MuTransformed { base, mu } => transformed_b_o(base.b_eval_sup(), *mu),
        }
    }

    /// Validate constructor parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            PhiFamily::Bryant { p } => {
                if !p.is_finite() || p.abs() >= std::f64::consts::PI {
                    return Err(GabError::Domain(format!(
                        "bryant parameter p = {p} outside (-pi, pi)"
                    )));
                }
            }
            PhiFamily::MuTransformed { base, .. } => base.validate()?,
            _ => {}
        }
        Ok(())
    }

    /// Evaluate the jet at `(b², s)`.
    ///
    /// Requires `b² ≥ 0`, `s² ≤ b²` (round-off slack `1e-12`) and
    /// `b² < b_eval_sup²`; violations raise `Domain` errors, and complex
    /// square roots on the branch cut raise `Branch`.
    pub fn eval_jet(&self, b2: f64, s: f64) -> Result<PhiJet> {
        if !(b2 >= 0.0) {
            return Err(GabError::Domain(format!("b² = {b2} must be nonnegative")));
        }
        let s = clamp_s(b2, s)?;
        let sup = self.b_eval_sup();
        if sup.is_finite() && b2 >= sup * sup {
            return Err(GabError::Domain(format!(
                "b² = {b2} not below the evaluable bound {}² for family {}",
                sup,
                self.name()
            )));
        }
        match self {
            PhiFamily::Constant => Ok(PhiJet {
                phi: 1.0,
                phi1: 0.0,
                phi2: 0.0,
                phi12: 0.0,
                phi22: 0.0,
            }),
            PhiFamily::Randers => Ok(PhiJet {
                phi: 1.0 + s,
                phi1: 0.0,
                phi2: 1.0,
                phi12: 0.0,
                phi22: 0.0,
            }),
            PhiFamily::BerwaldSquare => {
                let root = (1.0 + b2).sqrt();
                let base = root + s;
                Ok(PhiJet {
                    phi: base * base,
                    phi1: base / root,
                    phi2: 2.0 * base,
                    phi12: 1.0 / root,
                    phi22: 2.0,
                })
            }
            PhiFamily::Bryant { p } => Ok(big_phi_jet(*p, b2, s)?.real_jet()),
            PhiFamily::LemmaC { f, g } => lemma_c_jet(f, g, b2, s),
            PhiFamily::MuTransformed { base, mu } => mu_transform_jet(base, *mu, b2, s),
        }
    }

    /// Convenience: just the value φ(b², s).
    pub fn eval(&self, b2: f64, s: f64) -> Result<f64> {
        Ok(self.eval_jet(b2, s)?.phi)
    }
}

/// Enforce `|s| ≤ b`, clamping boundary excursions within `1e-12` (exact
/// Cauchy–Schwarz equality disturbed only by round-off) and rejecting
/// anything larger.
fn clamp_s(b2: f64, s: f64) -> Result<f64> {
    let b = b2.sqrt();
    if s.abs() <= b {
        Ok(s)
    } else if s.abs() - b <= 1e-12 {
        Ok(b.copysign(s))
    } else {
        Err(GabError::Domain(format!("|s| = {} exceeds b = {b}", s.abs())))
    }
}
