//! The metric `F = α·φ(b², β/α)`, its fundamental tensor and validity.
//!
//! The closed forms implemented here:
//!
//! ```text
//! g_ij  = ρ a_ij + ρ₀ b_i b_j + ρ₁(b_i α_{y^j} + b_j α_{y^i}) − sρ₁ α_{y^i} α_{y^j}
//! ρ     = φ(φ − sφ₂),  ρ₀ = φφ₂₂ + φ₂φ₂,  ρ₁ = (φ − sφ₂)φ₂ − sφφ₂₂
//! det g = φ^{n+1} (φ − sφ₂)^{n−2} (φ − sφ₂ + (b²−s²)φ₂₂) det a
//! g^{ij}= ρ^{-1} { a^{ij} + η b^i b^j + η₀ α^{-1}(b^i y^j + b^j y^i) + η₁ α^{-2} y^i y^j }
//! ```
//!
//! `F` is a Finsler metric for every admissible (α, β) iff φ > 0 and
//!
//! ```text
//! φ − sφ₂ > 0   and   φ − sφ₂ + (b²−s²)φ₂₂ > 0      (n ≥ 3)
//! ```
//!
//! (only the second inequality and positivity for n = 2). Note the second
//! inequality does not imply the first for b²-dependent φ, unlike the
//! classical s-only case; the sweep below always reports both.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GabError, Result};
use crate::phi::{PhiFamily, PhiJet};
use crate::riemann::{AlphaBetaJet, AlphaBetaSpec};

/// A complete general (α,β)-metric.
#[derive(Debug, Clone)]
pub struct MetricSpec {
    pub phi: PhiFamily,
    pub ab: AlphaBetaSpec,
}

/// Everything evaluated once at a point `(x, y)`.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub ab: AlphaBetaJet,
    pub phi: PhiJet,
    /// s = β/α, clamped to [−b, b] against round-off.
    pub s: f64,
}

/// Scalar coefficients of the fundamental tensor and its inverse.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FundamentalTensorTerms {
    pub rho: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub eta: f64,
    pub eta0: f64,
    pub eta1: f64,
}

/// Outcome of a Finsler-validity sweep over `(b, s)`.
#[derive(Debug, Clone, Serialize)]
pub struct ValidityReport {
    pub family: String,
    pub dim: usize,
    pub b_max: f64,
    pub grid: usize,
    pub valid: bool,
    pub min_phi: f64,
    pub min_ineq1: f64,
    pub min_ineq2: f64,
    /// Smallest sampled b at which some requirement fails.
    pub first_failure_b: Option<f64>,
}

/// The two validity denominators of a jet.
pub fn validity_quantities(jet: &PhiJet, b2: f64, s: f64) -> (f64, f64) {
    let ineq1 = jet.phi - s * jet.phi2;
    let ineq2 = ineq1 + (b2 - s * s) * jet.phi22;
    (ineq1, ineq2)
}

/// Coefficients ρ, ρ₀, ρ₁ and η, η₀, η₁.
pub fn tensor_terms(jet: &PhiJet, b2: f64, s: f64) -> Result<FundamentalTensorTerms> {
    let (ineq1, ineq2) = validity_quantities(jet, b2, s);
    if jet.phi <= 0.0 || ineq1 <= 0.0 || ineq2 <= 0.0 {
        return Err(GabError::SingularTensor(format!(
            "validity quantities nonpositive: phi = {}, phi - s*phi2 = {ineq1}, \
             phi - s*phi2 + (b2-s2)*phi22 = {ineq2}",
            jet.phi
        )));
    }
    let p = jet.phi;
    let rho = p * ineq1;
    let rho0 = p * jet.phi22 + jet.phi2 * jet.phi2;
    let rho1 = ineq1 * jet.phi2 - s * p * jet.phi22;
    let eta = -jet.phi22 / ineq2;
    let eta0 = -rho1 / (p * ineq2);
    let eta1 = (s * p + (b2 - s * s) * jet.phi2) * rho1 / (p * p * ineq2);
    Ok(FundamentalTensorTerms {
        rho,
        rho0,
        rho1,
        eta,
        eta0,
        eta1,
    })
}

impl MetricSpec {
    pub fn new(phi: PhiFamily, ab: AlphaBetaSpec) -> Result<Self> {
        phi.validate()?;
        Ok(Self { phi, ab })
    }

    /// Evaluate the Riemannian jet, s = β/α and the φ jet at `(x, y)`.
    pub fn eval_point(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<PointEval> {
        let ab = self.ab.jet(x, y)?;
        if ab.alpha <= 0.0 {
            return Err(GabError::DegenerateDirection);
        }
        let s = ab.beta / ab.alpha;
        let phi = self.phi.eval_jet(ab.b2, s)?;
        let b = ab.b2.sqrt();
        let s = if s.abs() > b { b.copysign(s) } else { s };
        Ok(PointEval { ab, phi, s })
    }

    /// F(x, y) = α·φ(b², β/α).
    pub fn f(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let eval = self.eval_point(x, y)?;
        Ok(eval.ab.alpha * eval.phi.phi)
    }

    /// Fundamental tensor g_ij by the closed formula.
    pub fn fundamental_tensor(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        let eval = self.eval_point(x, y)?;
        let terms = tensor_terms_lenient(&eval.phi, eval.ab.b2, eval.s);
        let n = self.ab.dim;
        let alpha = eval.ab.alpha;
        // α_{y^i} = y_i/α with y_i = a_ij y^j.
        let y_low = &eval.ab.a * y;
        let ay = y_low / alpha;
        let b = &eval.ab.b;
        let mut g = eval.ab.a.clone() * terms.rho;
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] += terms.rho0 * b[i] * b[j]
                    + terms.rho1 * (b[i] * ay[j] + b[j] * ay[i])
                    - eval.s * terms.rho1 * ay[i] * ay[j];
            }
        }
        Ok(g)
    }

    /// det(g_ij) by the closed product formula.
    pub fn det_g(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let eval = self.eval_point(x, y)?;
        let n = self.ab.dim as i32;
        let (ineq1, ineq2) = validity_quantities(&eval.phi, eval.ab.b2, eval.s);
        Ok(eval.phi.phi.powi(n + 1)
            * ineq1.powi(n - 2)
            * ineq2
            * eval.ab.a.determinant())
    }

    /// g^{ij} by the closed formula; fails with `SingularTensor` when the
    /// validity inequalities do not hold at this point.
    pub fn inverse_g(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        let eval = self.eval_point(x, y)?;
        let terms = tensor_terms(&eval.phi, eval.ab.b2, eval.s)?;
        let n = self.ab.dim;
        let alpha = eval.ab.alpha;
        let b_up = &eval.ab.b_up;
        let mut g_inv = eval.ab.a_inv.clone();
        for i in 0..n {
            for j in 0..n {
                g_inv[(i, j)] += terms.eta * b_up[i] * b_up[j]
                    + terms.eta0 / alpha * (b_up[i] * y[j] + b_up[j] * y[i])
                    + terms.eta1 / (alpha * alpha) * y[i] * y[j];
            }
        }
        Ok(g_inv / terms.rho)
    }
}

/// Like [`tensor_terms`] but without the positivity gate; used where the
/// sweep itself is the validity check (g_ij is a polynomial expression in
/// the jet, defined regardless).
fn tensor_terms_lenient(jet: &PhiJet, b2: f64, s: f64) -> FundamentalTensorTerms {
    let (ineq1, ineq2) = validity_quantities(jet, b2, s);
    let p = jet.phi;
    let rho1 = ineq1 * jet.phi2 - s * p * jet.phi22;
    FundamentalTensorTerms {
        rho: p * ineq1,
        rho0: p * jet.phi22 + jet.phi2 * jet.phi2,
        rho1,
        eta: -jet.phi22 / ineq2,
        eta0: -rho1 / (p * ineq2),
        eta1: (s * p + (b2 - s * s) * jet.phi2) * rho1 / (p * p * ineq2),
    }
}

/// Sweep `|s| ≤ b ≤ b_max` on a `grid × grid` lattice and report the minima
/// of φ and the two validity quantities.
///
/// For n ≥ 3 all three must stay positive; for n = 2 only φ and the second
/// quantity are required. Nodes where the family is not evaluable count as
/// failures.
pub fn finsler_validity(phi: &PhiFamily, dim: usize, b_max: f64, grid: usize) -> ValidityReport {
    let grid = grid.max(2);
    let mut min_phi = f64::INFINITY;
    let mut min_ineq1 = f64::INFINITY;
    let mut min_ineq2 = f64::INFINITY;
    let mut first_failure_b = None;
    for bi in 0..grid {
        let b = b_max * bi as f64 / (grid - 1) as f64;
        let mut failed = false;
        for si in 0..grid {
            let s = if grid == 1 {
                0.0
            } else {
                -b + 2.0 * b * si as f64 / (grid - 1) as f64
            };
            match phi.eval_jet(b * b, s) {
                Ok(jet) => {
                    let (i1, i2) = validity_quantities(&jet, b * b, s);
                    min_phi = min_phi.min(jet.phi);
                    min_ineq1 = min_ineq1.min(i1);
                    min_ineq2 = min_ineq2.min(i2);
                    let ok = jet.phi > 0.0 && i2 > 0.0 && (dim == 2 || i1 > 0.0);
                    if !ok {
                        failed = true;
                    }
                }
                Err(_) => failed = true,
            }
        }
        if failed && first_failure_b.is_none() {
            first_failure_b = Some(b);
        }
    }
    ValidityReport {
        family: phi.name(),
        dim,
        b_max,
        grid,
        valid: first_failure_b.is_none(),
        min_phi,
        min_ineq1,
        min_ineq2,
        first_failure_b,
    }
}

/// Maximum relative deviation `|F(y) − F(Ay)|/F(y)` over random directions
/// and random block-orthogonal maps fixing the β-axis.
///
/// The metric is re-expressed in an α-orthonormal basis whose last vector
/// is the α-dual of β, so every general (α,β)-metric must be invariant
/// under `O(n−1) ⊕ 1` acting on that basis.
pub fn rotation_invariance_check(
    spec: &MetricSpec,
    x: &DVector<f64>,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let n = spec.ab.dim;
    let basis = adapted_basis(&spec.ab, x)?;
    let f_adapted = |u: &DVector<f64>| -> Result<f64> { spec.f(x, &(&basis * u)) };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    for _ in 0..trials {
        let u = random_direction(&mut rng, n);
        let block = random_orthogonal(&mut rng, n - 1);
        let mut au = DVector::zeros(n);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                au[i] += block[(i, j)] * u[j];
            }
        }
        au[n - 1] = u[n - 1];
        let f0 = f_adapted(&u)?;
        let f1 = f_adapted(&au)?;
        max_dev = max_dev.max((f0 - f1).abs() / f0);
    }
    Ok(max_dev)
}

/// α-orthonormal basis (as matrix columns) with the last column parallel
/// to the α-dual of β.
fn adapted_basis(ab: &AlphaBetaSpec, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = ab.dim;
    let a = ab.a_matrix(x)?;
    let b = ab.b_covector(x)?;
    let a_inv = a
        .clone()
        .try_inverse()
        .ok_or_else(|| GabError::SingularTensor("metric coefficients not invertible".into()))?;
    let b_up = &a_inv * &b;
    let inner = |u: &DVector<f64>, w: &DVector<f64>| u.dot(&(&a * w));

    let mut candidates: Vec<DVector<f64>> = Vec::with_capacity(n + 1);
    let b_norm2 = b.dot(&b_up);
    if b_norm2 > 1e-24 {
        candidates.push(b_up / b_norm2.sqrt());
    }
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        candidates.push(e);
    }

    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n);
    for mut v in candidates {
        for u in &basis {
            let proj = inner(u, &v);
            v -= u * proj;
        }
        let norm = inner(&v, &v).max(0.0).sqrt();
        if norm > 1e-10 {
            basis.push(v / norm);
        }
        if basis.len() == n {
            break;
        }
    }
    if basis.len() != n {
        return Err(GabError::SingularTensor(
            "failed to build an adapted orthonormal basis".into(),
        ));
    }
    // β-direction goes last; it was seeded first when β ≠ 0.
    if b_norm2 > 1e-24 {
        basis.rotate_left(1);
    }
    Ok(DMatrix::from_columns(&basis))
}

fn random_direction<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        if v.norm() > 0.1 {
            return v;
        }
    }
}

/// Random orthogonal matrix: QR of a random square matrix with a random
/// sign flip, so both components of O(k) are reached.
fn random_orthogonal<R: Rng>(rng: &mut R, k: usize) -> DMatrix<f64> {
    if k == 0 {
        return DMatrix::zeros(0, 0);
    }
    let m = DMatrix::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
    let mut q = m.qr().q();
    if rng.random_bool(0.5) {
        for i in 0..k {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}
