//! Spray coefficients `G^i` of a general (α,β)-metric.
//!
//! Three routes are implemented and cross-checked against one another:
//!
//! 1. the closed formula relating `G^i` to the Riemannian `G^i_α` through
//!    the six scalars Q, R, Θ, Ψ, Π, Ω;
//! 2. the specialization to closed, conformal β and PDE-solving φ, where
//!    the spray collapses to `G^i = {θ + cα(φ₂+2sφ₁)/(2φ)}·y^i`;
//! 3. the definition-level finite-difference oracle
//!    `G^i = ¼ g^{il}([F²]_{x^k y^l} y^k − [F²]_{x^l})`.
//!
//! A metric is projectively flat at a point exactly when `G^i = P·y^i`;
//! [`projective_factor`] extracts `P` by least squares and reports the
//! relative residual.

use nalgebra::DVector;

use crate::error::{GabError, Result};
use crate::metric::{validity_quantities, MetricSpec};
use crate::pde;
use crate::phi::PhiJet;
use crate::riemann::BetaSpec;

/// The six scalar coefficients of the spray formula at one `(b², s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprayTerms {
    pub q: f64,
    pub r: f64,
    pub theta: f64,
    pub psi: f64,
    pub pi: f64,
    pub omega: f64,
}

/// Spray coefficients plus the extracted projective factor.
#[derive(Debug, Clone)]
pub struct SprayResult {
    pub g: DVector<f64>,
    /// Least-squares factor in `G ≈ P·y`.
    pub p: f64,
    /// `‖G − P·y‖ / max(‖G‖, ε)`; small iff the spray is projective here.
    pub residual: f64,
}

/// Q, R, Θ, Ψ, Π, Ω from the φ jet:
///
/// ```text
/// Q = φ₂/(φ−sφ₂)                 R = φ₁/(φ−sφ₂)
/// Θ = ((φ−sφ₂)φ₂ − sφφ₂₂) / (2φ·Δ)      Ψ = φ₂₂/(2Δ)
/// Π = ((φ−sφ₂)φ₁₂ − sφ₁φ₂₂) / ((φ−sφ₂)·Δ)
/// Ω = 2φ₁/φ − (sφ + (b²−s²)φ₂)/φ · Π
/// ```
///
/// with `Δ = φ − sφ₂ + (b²−s²)φ₂₂`.
pub fn spray_terms(jet: &PhiJet, b2: f64, s: f64) -> Result<SprayTerms> {
    let (ineq1, ineq2) = validity_quantities(jet, b2, s);
    if ineq1 == 0.0 || ineq2 == 0.0 || jet.phi == 0.0 {
        return Err(GabError::SingularTensor(
            "spray denominators vanish at this (b², s)".into(),
        ));
    }
    let p = jet.phi;
    let pi = (ineq1 * jet.phi12 - s * jet.phi1 * jet.phi22) / (ineq1 * ineq2);
    Ok(SprayTerms {
        q: jet.phi2 / ineq1,
        r: jet.phi1 / ineq1,
        theta: (ineq1 * jet.phi2 - s * p * jet.phi22) / (2.0 * p * ineq2),
        psi: jet.phi22 / (2.0 * ineq2),
        pi,
        omega: 2.0 * jet.phi1 / p - (s * p + (b2 - s * s) * jet.phi2) / p * pi,
    })
}

/// Least-squares extraction of `P` in `G = P·y`, with the relative
/// residual of the fit.
pub fn projective_factor(g: &DVector<f64>, y: &DVector<f64>) -> (f64, f64) {
    let p = g.dot(y) / y.dot(y);
    let res = (g - y * p).norm() / g.norm().max(1e-300);
    (p, res)
}

/// Spray coefficients by the closed formula.
pub fn spray_closed(
    spec: &MetricSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<SprayResult> {
    let eval = spec.eval_point(x, y)?;
    let jet = &eval.ab;
    let t = spray_terms(&eval.phi, jet.b2, eval.s)?;
    let alpha = jet.alpha;

    let g_alpha = spec.ab.spray_riemann(x, y)?;
    // The bracket shared by the y- and b-directed corrections.
    let core = -2.0 * alpha * t.q * jet.s0 + jet.r00 + 2.0 * alpha * alpha * t.r * jet.r;
    let rs0 = jet.r0 + jet.s0;

    let mut g = g_alpha;
    g += &jet.s_up0 * (alpha * t.q);
    g += y * ((t.theta * core + alpha * t.omega * rs0) / alpha);
    g += &jet.b_up * (t.psi * core + alpha * t.pi * rs0);
    g -= (&jet.r_up + &jet.s_up) * (alpha * alpha * t.r);

    let (p, residual) = projective_factor(&g, y);
    Ok(SprayResult { g, p, residual })
}

/// Spray coefficients for closed, conformal β and PDE-solving φ:
/// `G^i = {θ + cα(φ₂ + 2sφ₁)/(2φ)}·y^i`, exactly projective.
///
/// Preconditions are enforced: the φ jet must satisfy the flatness PDE to
/// `1e-6` at this `(b², s)`, β must be closed and conformal (certified by
/// construction for the projective family, measured numerically
/// otherwise), and α's own spray must be projective.
pub fn spray_conformal_closed(
    spec: &MetricSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<SprayResult> {
    let eval = spec.eval_point(x, y)?;
    let jet = &eval.ab;
    let phi = &eval.phi;

    let pde_res = pde::pde_residual_jet(phi, eval.s);
    if pde_res > 1e-6 {
        return Err(GabError::Precondition(format!(
            "phi does not solve the flatness PDE here (residual {pde_res:.3e})"
        )));
    }

    // Conformal factor c with b_{i|j} = c·a_ij.
    let c = match &spec.ab.beta {
        BetaSpec::Thm3 { .. } => spec.ab.conformal_factor(x).unwrap(),
        _ => {
            let scale = jet.bcov.amax().max(1e-30);
            if jet.s_ij.amax() > 1e-8 * scale.max(1.0) {
                return Err(GabError::Precondition(
                    "beta is not closed (s_ij != 0); refusing the conformal specialization"
                        .into(),
                ));
            }
            let n = spec.ab.dim as f64;
            let c = (&jet.a_inv.transpose() * &jet.r_ij).trace() / n;
            let deviation = (&jet.r_ij - &jet.a * c).amax();
            if deviation > 1e-8 * scale.max(1.0) {
                return Err(GabError::Precondition(format!(
                    "beta is not conformal: |r_ij - c a_ij| = {deviation:.3e}"
                )));
            }
            c
        }
    };

    // Projective factor θ of the Riemannian spray.
    let theta = match spec.ab.projective_theta(x, y) {
        Some(t) => t,
        None => {
            let g_alpha = spec.ab.spray_riemann(x, y)?;
            let (t, res) = projective_factor(&g_alpha, y);
            if res > 1e-8 && g_alpha.norm() > 1e-12 {
                return Err(GabError::Precondition(format!(
                    "alpha's spray is not projective (residual {res:.3e})"
                )));
            }
            t
        }
    };

    let p = theta + c * jet.alpha * (phi.phi2 + 2.0 * eval.s * phi.phi1) / (2.0 * phi.phi);
    Ok(SprayResult {
        g: y * p,
        p,
        residual: 0.0,
    })
}

/// Definition-level oracle: assemble `G^i` from central differences of F².
///
/// Derivatives use steps `1e-5` in both x and y; a Richardson consistency
/// check against half the step raises `StepTooLarge` when the two
/// assemblies disagree by more than `1e-3` relative.
pub fn spray_oracle_fd(
    spec: &MetricSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<SprayResult> {
    let h = crate::fd::DEFAULT_STEP;
    let g_h = spray_fd_at_step(spec, x, y, h)?;
    let g_h2 = spray_fd_at_step(spec, x, y, 0.5 * h)?;
    let scale = g_h.norm().max(1.0);
    let disagreement = (&g_h - &g_h2).norm() / scale;
    if disagreement > 1e-3 {
        return Err(GabError::StepTooLarge(format!(
            "finite-difference sprays at h and h/2 differ by {disagreement:.3e} relative"
        )));
    }
    let (p, residual) = projective_factor(&g_h2, y);
    Ok(SprayResult {
        g: g_h2,
        p,
        residual,
    })
}

fn spray_fd_at_step(
    spec: &MetricSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
    h: f64,
) -> Result<DVector<f64>> {
    let n = x.len();
    let f2 = |xx: &DVector<f64>, yy: &DVector<f64>| -> Result<f64> {
        Ok(spec.f(xx, yy)?.powi(2))
    };

    // [F²]_{x^k}
    let mut df_dx = DVector::zeros(n);
    for k in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        df_dx[k] = (f2(&xp, y)? - f2(&xm, y)?) / (2.0 * h);
    }

    // [F²]_{x^k y^l}
    let mut mixed = nalgebra::DMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[l] += h;
            ym[l] -= h;
            mixed[(k, l)] = (f2(&xp, &yp)? - f2(&xp, &ym)? - f2(&xm, &yp)?
                + f2(&xm, &ym)?)
                / (4.0 * h * h);
        }
    }

    let g_inv = spec.inverse_g(x, y)?;
    let mut g = DVector::zeros(n);
    for i in 0..n {
        let mut acc = 0.0;
        for l in 0..n {
            let mut contracted = 0.0;
            for k in 0..n {
                contracted += mixed[(k, l)] * y[k];
            }
            acc += g_inv[(i, l)] * (contracted - df_dx[l]);
        }
        g[i] = 0.25 * acc;
    }
    Ok(g)
}
