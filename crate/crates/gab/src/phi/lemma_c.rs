//! Solution families built from a one-dimensional profile.
//!
//! For any smooth `f` and `g`, the function
//!
//! ```text
//! φ(b², s) = f(t) + 2s ∫₀^s f'(b² − σ²) dσ + g(b²)·s,     t = b² − s²,
//! ```
//!
//! solves the projective-flatness PDE `φ₂₂ = 2(φ₁ − sφ₁₂)`. Its jet follows
//! from the exact reductions `φ − sφ₂ = f(t)` and
//! `φ − sφ₂ + (b² − s²)φ₂₂ = f(t) + 2t f'(t)`:
//!
//! * `φ₂  = 2I + g(b²)` with `I = ∫₀^s f'(b² − σ²) dσ`
//! * `φ₂₂ = 2 f'(t)`
//! * `φ₁  = f'(t) + 2sJ + g'(b²)·s` with `J = ∫₀^s f''(b² − σ²) dσ`
//! * `φ₁₂ = 2J + g'(b²)`
//!
//! The seven shipped profiles carry hard-coded antiderivatives for `I`;
//! custom profiles fall back to 32-node Gauss–Legendre quadrature. `J` is
//! always integrated numerically (the integrand is analytic, so the fixed
//! rule is exact to machine precision at the working scales).

use std::fmt;
use std::sync::Arc;

use crate::error::{GabError, Result};
use crate::phi::PhiJet;
use crate::quad;

/// User-supplied profile: `f`, its first two derivatives, and the least
/// upper bound of its `t`-domain (`+∞` if unbounded).
pub struct CustomProfile {
    pub name: String,
    pub f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub df: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub d2f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub t_max: f64,
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile")
            .field("name", &self.name)
            .field("t_max", &self.t_max)
            .finish()
    }
}

/// The profile `f(t)` of the integral construction.
#[derive(Debug, Clone)]
pub enum FProfile {
    /// `f(t) = 1/√(1−t)`; the resulting metrics are of Randers type.
    InvSqrtOneMinusT,
    /// `f(t) = 1 + t`.
    OnePlusT,
    /// `f(t) = √(1−t)`.
    SqrtOneMinusT,
    /// `f(t) = √(1+t)`.
    SqrtOnePlusT,
    /// `f(t) = ln(2+t)`.
    LnTwoPlusT,
    /// `f(t) = ln(2−t)`.
    LnTwoMinusT,
    /// `f(t) = 1 + arctan t`.
    OnePlusArctanT,
    /// Arbitrary smooth profile; the integral term uses quadrature.
    Custom(Arc<CustomProfile>),
}

/// The linear-in-`s` term `g(b²)·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GProfile {
    /// `g ≡ 0` (the default).
    Zero,
    /// Constant `g`.
    Const(f64),
    /// `g(b²) = 1/(1−b²)`; paired with `InvSqrtOneMinusT` this yields the
    /// Funk metric over Euclidean data.
    Funk,
    /// `g(b²) = −1/(1−b²)`; the navigation representation of Randers
    /// metrics.
    NavigationRanders,
}

impl FProfile {
    pub fn name(&self) -> String {
        match self {
            FProfile::InvSqrtOneMinusT => "inv_sqrt_one_minus_t".into(),
            FProfile::OnePlusT => "one_plus_t".into(),
            FProfile::SqrtOneMinusT => "sqrt_one_minus_t".into(),
            FProfile::SqrtOnePlusT => "sqrt_one_plus_t".into(),
            FProfile::LnTwoPlusT => "ln_two_plus_t".into(),
            FProfile::LnTwoMinusT => "ln_two_minus_t".into(),
            FProfile::OnePlusArctanT => "one_plus_arctan_t".into(),
            FProfile::Custom(c) => c.name.clone(),
        }
    }

    /// All seven shipped profiles.
    pub fn shipped() -> Vec<FProfile> {
        vec![
            FProfile::InvSqrtOneMinusT,
            FProfile::OnePlusT,
            FProfile::SqrtOneMinusT,
            FProfile::SqrtOnePlusT,
            FProfile::LnTwoPlusT,
            FProfile::LnTwoMinusT,
            FProfile::OnePlusArctanT,
        ]
    }

    /// Least upper bound of the admissible `t = b² − s²` range.
    pub fn t_max(&self) -> f64 {
        match self {
            FProfile::InvSqrtOneMinusT | FProfile::SqrtOneMinusT => 1.0,
            FProfile::LnTwoMinusT => 2.0,
            FProfile::Custom(c) => c.t_max,
            _ => f64::INFINITY,
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        match self {
            FProfile::InvSqrtOneMinusT => 1.0 / (1.0 - t).sqrt(),
            FProfile::OnePlusT => 1.0 + t,
            FProfile::SqrtOneMinusT => (1.0 - t).sqrt(),
            FProfile::SqrtOnePlusT => (1.0 + t).sqrt(),
            FProfile::LnTwoPlusT => (2.0 + t).ln(),
            FProfile::LnTwoMinusT => (2.0 - t).ln(),
            FProfile::OnePlusArctanT => 1.0 + t.atan(),
            FProfile::Custom(c) => (c.f)(t),
        }
    }

    pub fn df(&self, t: f64) -> f64 {
        match self {
            FProfile::InvSqrtOneMinusT => 0.5 / (1.0 - t).powf(1.5),
            FProfile::OnePlusT => 1.0,
            FProfile::SqrtOneMinusT => -0.5 / (1.0 - t).sqrt(),
            FProfile::SqrtOnePlusT => 0.5 / (1.0 + t).sqrt(),
            FProfile::LnTwoPlusT => 1.0 / (2.0 + t),
            FProfile::LnTwoMinusT => -1.0 / (2.0 - t),
            FProfile::OnePlusArctanT => 1.0 / (1.0 + t * t),
            FProfile::Custom(c) => (c.df)(t),
        }
    }

    pub fn d2f(&self, t: f64) -> f64 {
        match self {
            FProfile::InvSqrtOneMinusT => 0.75 / (1.0 - t).powf(2.5),
            FProfile::OnePlusT => 0.0,
            FProfile::SqrtOneMinusT => -0.25 / (1.0 - t).powf(1.5),
            FProfile::SqrtOnePlusT => -0.25 / (1.0 + t).powf(1.5),
            FProfile::LnTwoPlusT => -1.0 / (2.0 + t).powi(2),
            FProfile::LnTwoMinusT => -1.0 / (2.0 - t).powi(2),
            FProfile::OnePlusArctanT => -2.0 * t / (1.0 + t * t).powi(2),
            FProfile::Custom(c) => (c.d2f)(t),
        }
    }

    /// `I(b², s) = ∫₀^s f'(b² − σ²) dσ`, closed-form for the shipped
    /// profiles (the integrated forms behind the published φ displays),
    /// quadrature otherwise.
    pub fn integral_df(&self, b2: f64, s: f64) -> f64 {
        let c = b2;
        match self {
            FProfile::InvSqrtOneMinusT => 0.5 * s / ((1.0 - c) * (1.0 - c + s * s).sqrt()),
            FProfile::OnePlusT => s,
            FProfile::SqrtOneMinusT => {
                -0.5 * ((s + (1.0 - c + s * s).sqrt()) / (1.0 - c).sqrt()).ln()
            }
            FProfile::SqrtOnePlusT => 0.5 * (s / (1.0 + c).sqrt()).asin(),
            FProfile::LnTwoPlusT => {
                let a = (2.0 + c).sqrt();
                0.5 / a * ((a + s) / (a - s)).ln()
            }
            FProfile::LnTwoMinusT => {
                let a = (2.0 - c).sqrt();
                -(s / a).atan() / a
            }
            FProfile::OnePlusArctanT => {
                // 1 + (c − σ²)² factors as (σ² + pσ + q)(σ² − pσ + q)
                // with q = √(1+c²), p = √(2q + 2c).
                let q = (1.0 + c * c).sqrt();
                let p = (2.0 * q + 2.0 * c).sqrt();
                let p_conj = (2.0 * q - 2.0 * c).sqrt();
                let log_part =
                    0.5 * (q - c) * ((q + p * s + s * s) / (q - p * s + s * s)).ln();
                let atan_part = (p * s + q + c).atan() + (p * s - q - c).atan();
                (log_part + atan_part) / (2.0 * q * p_conj)
            }
            FProfile::Custom(_) => self.integral_df_quadrature(b2, s),
        }
    }

    /// Quadrature route for `I`; the independent oracle for the closed
    /// forms above.
    pub fn integral_df_quadrature(&self, b2: f64, s: f64) -> f64 {
        quad::integrate(|sigma| self.df(b2 - sigma * sigma), 0.0, s)
    }

    fn integral_d2f(&self, b2: f64, s: f64) -> f64 {
        quad::integrate(|sigma| self.d2f(b2 - sigma * sigma), 0.0, s)
    }
}

impl GProfile {
    pub fn name(&self) -> String {
        match self {
            GProfile::Zero => "zero".into(),
            GProfile::Const(v) => format!("const({v})"),
            GProfile::Funk => "funk".into(),
            GProfile::NavigationRanders => "navigation_randers".into(),
        }
    }

    /// Least upper bound of the admissible `b²` range.
    pub fn b2_max(&self) -> f64 {
        match self {
            GProfile::Funk | GProfile::NavigationRanders => 1.0,
            _ => f64::INFINITY,
        }
    }

    pub fn g(&self, b2: f64) -> f64 {
        match self {
            GProfile::Zero => 0.0,
            GProfile::Const(v) => *v,
            GProfile::Funk => 1.0 / (1.0 - b2),
            GProfile::NavigationRanders => -1.0 / (1.0 - b2),
        }
    }

    pub fn dg(&self, b2: f64) -> f64 {
        match self {
            GProfile::Zero | GProfile::Const(_) => 0.0,
            GProfile::Funk => 1.0 / (1.0 - b2).powi(2),
            GProfile::NavigationRanders => -1.0 / (1.0 - b2).powi(2),
        }
    }
}

/// Squared domain bound `b_o²` of the family built from `(f, g)`: the
/// supremum of admissible `b²` given that `t = b² − s²` sweeps `[0, b²]`.
pub fn b_o_squared(f: &FProfile, g: &GProfile) -> f64 {
    f.t_max().min(g.b2_max())
}

/// Jet of the integral-construction solution at `(b², s)`.
pub fn lemma_c_jet(f: &FProfile, g: &GProfile, b2: f64, s: f64) -> Result<PhiJet> {
    let t = b2 - s * s;
    if t >= f.t_max() || b2 >= b_o_squared(f, g) {
        return Err(GabError::Domain(format!(
            "b² = {b2} outside the domain of profile {}",
            f.name()
        )));
    }
    let ft = f.f(t);
    let dft = f.df(t);
    let i_int = f.integral_df(b2, s);
    let j_int = f.integral_d2f(b2, s);
    let gv = g.g(b2);
    let dgv = g.dg(b2);

    Ok(PhiJet {
        phi: ft + 2.0 * s * i_int + gv * s,
        phi1: dft + 2.0 * s * j_int + dgv * s,
        phi2: 2.0 * i_int + gv,
        phi12: 2.0 * j_int + dgv,
        phi22: 2.0 * dft,
    })
}
