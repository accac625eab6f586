//! The deformation `T_μ` between constant-curvature representations.
//!
//! ```text
//! T_μ(φ)(b², s) = A·φ(B, S),
//!   A = √(1+μ(b²−s²)) / (1+μb²),
//!   B = b² / (1+μb²),
//!   S = s / (√(1+μb²) √(1+μ(b²−s²))).
//! ```
//!
//! `T_μ` maps solutions of the flatness PDE to solutions, `T₀ = id`, and
//! `T_μ ∘ T_ν = T_{μ+ν}`. The jet of the transformed function follows from
//! the chain rule through `(A, B, S)`; `B` depends only on `b²`, so no
//! second `b²`-derivative of the base is ever needed.

use crate::error::{GabError, Result};
use crate::phi::{PhiFamily, PhiJet};

/// Jet of `T_μ(base)` at `(b², s)`.
pub fn mu_transform_jet(base: &PhiFamily, mu: f64, b2: f64, s: f64) -> Result<PhiJet> {
    let c = b2;
    let d = 1.0 + mu * c;
    let e = 1.0 + mu * (c - s * s);
    if d <= 0.0 || e <= 0.0 {
        return Err(GabError::Domain(format!(
            "mu-transform denominators nonpositive: 1+mu*b2 = {d}, 1+mu*(b2-s2) = {e}"
        )));
    }
    let sd = d.sqrt();
    let se = e.sqrt();

    let a = se / d;
    let a1 = mu / (2.0 * se * d) - mu * se / (d * d);
    let a2 = -mu * s / (se * d);
    let a22 = -mu / (se * d) - mu * mu * s * s / (se * e * d);
    let a12 = mu * mu * s / (2.0 * se * e * d) + mu * mu * s / (se * d * d);

    let big_b = c / d;
    let b1 = 1.0 / (d * d);

    let big_s = s / (sd * se);
    let s1 = -0.5 * mu * s * (1.0 / (sd * d * se) + 1.0 / (sd * se * e));
    let s2 = (1.0 / se + mu * s * s / (se * e)) / sd;
    let s22 = (3.0 * mu * s / (se * e) + 3.0 * mu * mu * s * s * s / (se * e * e)) / sd;
    let s12 = -0.5 * mu * (1.0 / (sd * d * se) + 1.0 / (sd * se * e))
        - 0.5 * mu * mu * s * s * (1.0 / (sd * d * se * e) + 3.0 / (sd * se * e * e));

    let base_jet = base.eval_jet(big_b, big_s)?;
    let (p, pb, ps, pbs, pss) = (
        base_jet.phi,
        base_jet.phi1,
        base_jet.phi2,
        base_jet.phi12,
        base_jet.phi22,
    );

    Ok(PhiJet {
        phi: a * p,
        phi1: a1 * p + a * (pb * b1 + ps * s1),
        phi2: a2 * p + a * ps * s2,
        phi12: a12 * p
            + a2 * (pb * b1 + ps * s1)
            + a1 * ps * s2
            + a * ((pbs * b1 + pss * s1) * s2 + ps * s12),
        phi22: a22 * p + 2.0 * a2 * ps * s2 + a * (pss * s2 * s2 + ps * s22),
    })
}

/// Domain bound of the transformed family: the supremum of `b²` keeping
/// both denominators positive and `B` inside the base domain.
pub fn transformed_b_o(base_b_o: f64, mu: f64) -> f64 {
    let beta = base_b_o * base_b_o; // admissible sup of B
    let c_max = if mu > 0.0 {
        if beta >= 1.0 / mu {
            f64::INFINITY
        } else {
            beta / (1.0 - mu * beta)
        }
    } else if mu == 0.0 {
        beta
    } else if beta.is_infinite() {
        -1.0 / mu
    } else {
        beta / (1.0 - mu * beta)
    };
    c_max.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_of_one_is_the_closed_form() {
        // T_μ(1) = √(1+μ(b²−s²)) / (1+μb²).
        let mu = 0.5;
        for &(b2, s) in &[(0.3, 0.1), (0.8, -0.6), (0.05, 0.2)] {
            let jet = mu_transform_jet(&PhiFamily::Constant, mu, b2, s).unwrap();
            let expect = (1.0 + mu * (b2 - s * s)).sqrt() / (1.0 + mu * b2);
            assert!((jet.phi - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_parameter_is_the_identity() {
        let base = PhiFamily::BerwaldSquare;
        for &(b2, s) in &[(0.4, 0.2), (0.9, -0.5)] {
            let tj = mu_transform_jet(&base, 0.0, b2, s).unwrap();
            let bj = base.eval_jet(b2, s).unwrap();
            assert!((tj.phi - bj.phi).abs() < 1e-15);
            assert!((tj.phi1 - bj.phi1).abs() < 1e-15);
            assert!((tj.phi2 - bj.phi2).abs() < 1e-15);
            assert!((tj.phi12 - bj.phi12).abs() < 1e-15);
            assert!((tj.phi22 - bj.phi22).abs() < 1e-15);
        }
    }

    #[test]
    fn composition_adds_parameters() {
        // T_μ(T_ν(φ)) = T_{μ+ν}(φ) pointwise on a 20×20 grid, all jet fields.
        let base = PhiFamily::LemmaC {
            f: crate::phi::FProfile::OnePlusT,
            g: crate::phi::GProfile::Zero,
        };
        let (mu, nu) = (0.3, 0.2);
        let inner = PhiFamily::MuTransformed {
            base: Box::new(base.clone()),
            mu: nu,
        };
        for i in 1..=20 {
            let b = 0.8 * i as f64 / 20.0;
            for j in 0..20 {
                let s = -b + 2.0 * b * j as f64 / 19.0 * 0.999;
                let lhs = mu_transform_jet(&inner, mu, b * b, s).unwrap();
                let rhs = mu_transform_jet(&base, mu + nu, b * b, s).unwrap();
                for (l, r) in [
                    (lhs.phi, rhs.phi),
                    (lhs.phi1, rhs.phi1),
                    (lhs.phi2, rhs.phi2),
                    (lhs.phi12, rhs.phi12),
                    (lhs.phi22, rhs.phi22),
                ] {
                    assert!((l - r).abs() < 1e-12, "b={b} s={s}: {l} vs {r}");
                }
            }
        }
    }

    #[test]
    fn nonpositive_denominator_is_a_domain_error() {
        let err = mu_transform_jet(&PhiFamily::Constant, -2.0, 0.6, 0.0);
        assert!(matches!(err, Err(GabError::Domain(_))));
    }

    #[test]
    fn transformed_domain_bound() {
        // Base bound 1, μ = 0.5: c/(1+0.5c) = 1 at c = 2.
        assert!((transformed_b_o(1.0, 0.5) - 2.0f64.sqrt()).abs() < 1e-14);
        // Negative μ caps the domain at -1/μ even for unbounded bases.
        assert!((transformed_b_o(f64::INFINITY, -0.25) - 2.0).abs() < 1e-14);
        // μ > 0 with base bound at least 1/√μ admits everything.
        assert!(transformed_b_o(f64::INFINITY, 0.3).is_infinite());
    }
}
