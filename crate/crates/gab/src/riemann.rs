//! The Riemannian data (α, β) and its derived quantities.
//!
//! The constant-curvature metric and the companion 1-form of the projective
//! family are
//!
//! ```text
//! α = √((1+μ|x|²)|y|² − μ⟨x,y⟩²) / (1+μ|x|²),
//! β = (λ⟨x,y⟩ + (1+μ|x|²)⟨a,y⟩ − μ⟨a,x⟩⟨x,y⟩) / (1+μ|x|²)^{3/2},
//! ```
//!
//! with λ a constant and `a` a constant vector. For μ < 0 the metric lives
//! on the open ball of radius `r_μ = 1/√(−μ)`. Christoffel symbols, the
//! covariant derivative `b_{i|j}` and every `r/s` contraction used by the
//! spray formula are assembled here, analytically where closed forms exist
//! and by central differences for user-supplied coefficient fields.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{GabError, Result};
use crate::fd;

/// Callable metric coefficients `x ↦ a_ij(x)`.
pub type MatrixField = Arc<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>;
/// Callable 1-form coefficients `x ↦ b_i(x)`.
pub type CovectorField = Arc<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>;

/// The Riemannian metric α.
#[derive(Clone)]
pub enum AlphaSpec {
    /// Constant sectional curvature μ in the projective normal form.
    ConstCurvature { mu: f64 },
    /// User-supplied coefficient field; x-derivatives fall back to central
    /// differences with step 1e-5.
    Explicit { a: MatrixField },
}

/// The 1-form β.
#[derive(Clone)]
pub enum BetaSpec {
    /// The closed, conformal form of the projective family; must pair with
    /// `ConstCurvature` of the same μ.
    Thm3 { mu: f64, lambda: f64, a: DVector<f64> },
    /// `b_i(x) = a_i + m_ij x^j`; a non-symmetric `m` gives a non-closed β.
    Linear { a: DVector<f64>, m: DMatrix<f64> },
    /// User-supplied coefficient field, differentiated numerically.
    Explicit { b: CovectorField },
}

impl fmt::Debug for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::ConstCurvature { mu } => write!(f, "ConstCurvature {{ mu: {mu} }}"),
            AlphaSpec::Explicit { .. } => write!(f, "Explicit {{ .. }}"),
        }
    }
}

impl fmt::Debug for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSpec::Thm3 { mu, lambda, a } => {
                write!(f, "Thm3 {{ mu: {mu}, lambda: {lambda}, a: {a:?} }}")
            }
            BetaSpec::Linear { a, m } => write!(f, "Linear {{ a: {a:?}, m: {m:?} }}"),
            BetaSpec::Explicit { .. } => write!(f, "Explicit {{ .. }}"),
        }
    }
}

/// A complete (α, β) pair on an n-dimensional domain.
#[derive(Debug, Clone)]
pub struct AlphaBetaSpec {
    pub dim: usize,
    pub alpha: AlphaSpec,
    pub beta: BetaSpec,
}

/// Pointwise Riemannian data at `(x, y)`.
#[derive(Debug, Clone)]
pub struct AlphaBetaJet {
    /// a_ij(x)
    pub a: DMatrix<f64>,
    /// a^{ij}(x)
    pub a_inv: DMatrix<f64>,
    /// da[k] = ∂a_ij/∂x^k
    pub da: Vec<DMatrix<f64>>,
    /// gamma[k][(i,j)] = Γ^k_ij
    pub gamma: Vec<DMatrix<f64>>,
    /// b_i(x)
    pub b: DVector<f64>,
    /// b^i = a^{ij} b_j
    pub b_up: DVector<f64>,
    /// b² = ‖β‖²_α
    pub b2: f64,
    /// b_{i|j}
    pub bcov: DMatrix<f64>,
    /// r_ij = (b_{i|j} + b_{j|i})/2
    pub r_ij: DMatrix<f64>,
    /// s_ij = (b_{i|j} − b_{j|i})/2
    pub s_ij: DMatrix<f64>,
    /// α(x, y)
    pub alpha: f64,
    /// β(x, y)
    pub beta: f64,
    /// r₀₀ = r_ij y^i y^j
    pub r00: f64,
    /// r₀ = r_i y^i
    pub r0: f64,
    /// s₀ = s_i y^i
    pub s0: f64,
    /// r = b^i r_i
    pub r: f64,
    /// r_i = b^j r_ji
    pub r_i: DVector<f64>,
    /// s_i = b^j s_ji
    pub s_i: DVector<f64>,
    /// r^i = a^{ij} r_j
    pub r_up: DVector<f64>,
    /// s^i = a^{ij} s_j
    pub s_up: DVector<f64>,
    /// s^i₀ = a^{ij} s_jk y^k
    pub s_up0: DVector<f64>,
}

fn rho2(mu: f64, x: &DVector<f64>) -> f64 {
    1.0 + mu * x.norm_squared()
}

impl AlphaBetaSpec {
    /// Validate dimension and pairing constraints.
    pub fn new(dim: usize, alpha: AlphaSpec, beta: BetaSpec) -> Result<Self> {
        if dim < 2 {
            return Err(GabError::Domain(format!("dimension {dim} must be >= 2")));
        }
        if let BetaSpec::Thm3 { mu: bmu, a, .. } = &beta {
            match &alpha {
                AlphaSpec::ConstCurvature { mu } if *mu == *bmu => {}
                AlphaSpec::ConstCurvature { mu } => {
                    return Err(GabError::Domain(format!(
                        "projective-form beta with mu = {bmu} paired with alpha of mu = {mu}"
                    )));
                }
                AlphaSpec::Explicit { .. } => {
                    return Err(GabError::Domain(
                        "projective-form beta requires the constant-curvature alpha".into(),
                    ));
                }
            }
            if a.len() != dim {
                return Err(GabError::Domain(format!(
                    "constant vector length {} does not match dim {dim}",
                    a.len()
                )));
            }
        }
        Ok(Self { dim, alpha, beta })
    }

    /// Convenience constructor for the projective family (λ, a) over the
    /// curvature-μ background.
    pub fn projective_family(dim: usize, mu: f64, lambda: f64, a: DVector<f64>) -> Result<Self> {
        Self::new(
            dim,
            AlphaSpec::ConstCurvature { mu },
            BetaSpec::Thm3 { mu, lambda, a },
        )
    }

    /// Reject points outside the domain: for μ < 0 the open ball of radius
    /// `r_μ = 1/√(−μ)` with a `1e-9` guard band.
    pub fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim {
            return Err(GabError::Domain(format!(
                "point dimension {} does not match spec dim {}",
                x.len(),
                self.dim
            )));
        }
        if let AlphaSpec::ConstCurvature { mu } = self.alpha {
            if mu < 0.0 {
                let r_mu = 1.0 / (-mu).sqrt();
                if x.norm() >= r_mu - 1e-9 {
                    return Err(GabError::Domain(format!(
                        "|x| = {} not inside the ball of radius {r_mu}",
                        x.norm()
                    )));
                }
            }
            if rho2(mu, x) <= 0.0 {
                return Err(GabError::Domain(format!(
                    "1 + mu|x|^2 = {} must be positive",
                    rho2(mu, x)
                )));
            }
        }
        Ok(())
    }

    /// Metric coefficients a_ij(x).
    pub fn a_matrix(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        Ok(self.a_matrix_unchecked(x))
    }

    fn a_matrix_unchecked(&self, x: &DVector<f64>) -> DMatrix<f64> {
        match &self.alpha {
            AlphaSpec::ConstCurvature { mu } => {
                let n = self.dim;
                let r2 = rho2(*mu, x);
                let mut a = DMatrix::identity(n, n) / r2;
                for i in 0..n {
                    for j in 0..n {
                        a[(i, j)] -= mu * x[i] * x[j] / (r2 * r2);
                    }
                }
                a
            }
            AlphaSpec::Explicit { a } => a(x),
        }
    }

    /// α(x, y) = √(a_ij y^i y^j); zero iff y = 0.
    pub fn alpha_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let a = self.a_matrix(x)?;
        Ok((y.dot(&(&a * y))).max(0.0).sqrt())
    }

    /// 1-form coefficients b_i(x).
    pub fn b_covector(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_point(x)?;
        Ok(self.b_covector_unchecked(x))
    }

    fn b_covector_unchecked(&self, x: &DVector<f64>) -> DVector<f64> {
        match &self.beta {
            BetaSpec::Thm3 { mu, lambda, a } => {
                let r = rho2(*mu, x).sqrt();
                let ax = a.dot(x);
                let r3 = r * r * r;
                x * (lambda / r3) + a / r - x * (mu * ax / r3)
            }
            BetaSpec::Linear { a, m } => a + m * x,
            BetaSpec::Explicit { b } => b(x),
        }
    }

    /// β(x, y) = b_i(x) y^i.
    pub fn beta_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        Ok(self.b_covector(x)?.dot(y))
    }

    /// ∂a_ij/∂x^k for each k; analytic in the constant-curvature case.
    pub fn da_matrices(&self, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        self.check_point(x)?;
        let n = self.dim;
        match &self.alpha {
            AlphaSpec::ConstCurvature { mu } => {
                let r2 = rho2(*mu, x);
                let r4 = r2 * r2;
                let r6 = r4 * r2;
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let mut d = DMatrix::zeros(n, n);
                    for i in 0..n {
                        for j in 0..n {
                            let mut v = -2.0 * mu * x[k] / r4 * if i == j { 1.0 } else { 0.0 };
                            v += 4.0 * mu * mu * x[k] * x[i] * x[j] / r6;
                            v -= mu / r4
                                * ((if i == k { x[j] } else { 0.0 })
                                    + (if j == k { x[i] } else { 0.0 }));
                            d[(i, j)] = v;
                        }
                    }
                    out.push(d);
                }
                Ok(out)
            }
            AlphaSpec::Explicit { a } => {
                let h = fd::DEFAULT_STEP;
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[k] += h;
                    xm[k] -= h;
                    out.push((a(&xp) - a(&xm)) / (2.0 * h));
                }
                Ok(out)
            }
        }
    }

    /// Christoffel symbols Γ^k_ij of α at x; `result[k][(i,j)]`.
    ///
    /// Closed form for constant curvature,
    /// `Γ^k_ij = −μ(x^i δ^k_j + x^j δ^k_i)/(1+μ|x|²)`; the Levi-Civita
    /// formula on differenced coefficients otherwise.
    pub fn christoffel(&self, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        self.check_point(x)?;
        let n = self.dim;
        match &self.alpha {
            AlphaSpec::ConstCurvature { mu } => {
                let r2 = rho2(*mu, x);
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let mut g = DMatrix::zeros(n, n);
                    for i in 0..n {
                        for j in 0..n {
                            let mut v = 0.0;
                            if j == k {
                                v += x[i];
                            }
                            if i == k {
                                v += x[j];
                            }
                            g[(i, j)] = -mu / r2 * v;
                        }
                    }
                    out.push(g);
                }
                Ok(out)
            }
            AlphaSpec::Explicit { .. } => {
                let a = self.a_matrix_unchecked(x);
                let a_inv = invert(&a)?;
                let da = self.da_matrices(x)?;
                Ok(levi_civita(&a_inv, &da))
            }
        }
    }

    /// ∂b_i/∂x^j; `result[(i,j)]`. Analytic for the projective-family and
    /// linear forms, central differences otherwise.
    pub fn db_matrix(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let n = self.dim;
        match &self.beta {
            BetaSpec::Thm3 { mu, lambda, a } => {
                let r = rho2(*mu, x).sqrt();
                let (r3, r5) = (r.powi(3), r.powi(5));
                let ax = a.dot(x);
                let mut out = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        out[(i, j)] = lambda / r3 * delta - 3.0 * mu * lambda / r5 * x[i] * x[j]
                            - mu / r3 * a[i] * x[j]
                            - mu * ax / r3 * delta
                            - mu / r3 * a[j] * x[i]
                            + 3.0 * mu * mu * ax / r5 * x[i] * x[j];
                    }
                }
                Ok(out)
            }
            BetaSpec::Linear { m, .. } => Ok(m.clone()),
            BetaSpec::Explicit { b } => {
                let h = fd::DEFAULT_STEP;
                let mut out = DMatrix::zeros(n, n);
                for j in 0..n {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += h;
                    xm[j] -= h;
                    let col = (b(&xp) - b(&xm)) / (2.0 * h);
                    for i in 0..n {
                        out[(i, j)] = col[i];
                    }
                }
                Ok(out)
            }
        }
    }

    /// Spray coefficients of α: `G^i_α = ½ Γ^i_jk y^j y^k`.
    pub fn spray_riemann(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        let gamma = self.christoffel(x)?;
        let n = self.dim;
        let mut g = DVector::zeros(n);
        for k in 0..n {
            g[k] = 0.5 * y.dot(&(&gamma[k] * y));
        }
        Ok(g)
    }

    /// Projective factor of the constant-curvature spray:
    /// `G^i_α = θ(x,y)·y^i` with `θ = −μ⟨x,y⟩/(1+μ|x|²)`.
    pub fn projective_theta(&self, x: &DVector<f64>, y: &DVector<f64>) -> Option<f64> {
        match self.alpha {
            AlphaSpec::ConstCurvature { mu } => Some(-mu * x.dot(y) / rho2(mu, x)),
            AlphaSpec::Explicit { .. } => None,
        }
    }

    /// Conformal factor c(x) of the projective-family β,
    /// `b_{i|j} = c(x)·a_ij` with `c = (λ − μ⟨a,x⟩)/√(1+μ|x|²)`.
    pub fn conformal_factor(&self, x: &DVector<f64>) -> Option<f64> {
        match &self.beta {
            BetaSpec::Thm3 { mu, lambda, a } => {
                Some((lambda - mu * a.dot(x)) / rho2(*mu, x).sqrt())
            }
            _ => None,
        }
    }

    /// Full pointwise jet: metric, Christoffel, covariant derivative of β
    /// and every contraction needed by the spray formula.
    pub fn jet(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<AlphaBetaJet> {
        self.check_point(x)?;
        if y.iter().all(|v| *v == 0.0) {
            return Err(GabError::DegenerateDirection);
        }
        let n = self.dim;
        let a = self.a_matrix_unchecked(x);
        let a_inv = invert(&a)?;
        let da = self.da_matrices(x)?;
        let gamma = self.christoffel(x)?;
        let b = self.b_covector_unchecked(x);
        let db = self.db_matrix(x)?;

        // b_{i|j} = ∂b_i/∂x^j − b_k Γ^k_ij
        let mut bcov = db;
        for k in 0..n {
            bcov -= &gamma[k] * b[k];
        }
        let r_ij = (&bcov + bcov.transpose()) * 0.5;
        let s_ij = (&bcov - bcov.transpose()) * 0.5;

        let b_up = &a_inv * &b;
        let b2 = b.dot(&b_up);
        let alpha = y.dot(&(&a * y)).max(0.0).sqrt();
        let beta = b.dot(y);

        let r00 = y.dot(&(&r_ij * y));
        // r_i = b^j r_ji, s_i = b^j s_ji (contraction on the first index).
        let r_i = r_ij.transpose() * &b_up;
        let s_i = s_ij.transpose() * &b_up;
        let r0 = r_i.dot(y);
        let s0 = s_i.dot(y);
        let r = b_up.dot(&r_i);
        let r_up = &a_inv * &r_i;
        let s_up = &a_inv * &s_i;
        let s_up0 = &a_inv * (&s_ij * y);

        Ok(AlphaBetaJet {
            a,
            a_inv,
            da,
            gamma,
            b,
            b_up,
            b2,
            bcov,
            r_ij,
            s_ij,
            alpha,
            beta,
            r00,
            r0,
            s0,
            r,
            r_i,
            s_i,
            r_up,
            s_up,
            s_up0,
        })
    }
}

/// Levi-Civita connection from metric coefficients and their derivatives:
/// `Γ^k_ij = ½ a^{kl} (∂_i a_lj + ∂_j a_il − ∂_l a_ij)`.
pub fn levi_civita(a_inv: &DMatrix<f64>, da: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let n = a_inv.nrows();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for l in 0..n {
                    sum += a_inv[(k, l)] * (da[i][(l, j)] + da[j][(i, l)] - da[l][(i, j)]);
                }
                g[(i, j)] = 0.5 * sum;
            }
        }
        out.push(g);
    }
    out
}

fn invert(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    a.clone()
        .try_inverse()
        .ok_or_else(|| GabError::SingularTensor("metric coefficients not invertible".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(parts: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(parts)
    }

    fn cc_spec(dim: usize, mu: f64, lambda: f64, a: &[f64]) -> AlphaBetaSpec {
        AlphaBetaSpec::projective_family(dim, mu, lambda, v(a)).unwrap()
    }

    #[test]
    fn alpha_reduces_to_euclidean_for_flat_mu() {
        let spec = cc_spec(2, 0.0, 1.0, &[0.0, 0.0]);
        let x = v(&[0.4, -0.2]);
        let y = v(&[3.0, 4.0]);
        assert!((spec.alpha_value(&x, &y).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn alpha_at_origin_is_euclidean_norm() {
        let spec = cc_spec(2, -1.0, 1.0, &[0.0, 0.0]);
        let val = spec.alpha_value(&v(&[0.0, 0.0]), &v(&[1.0, 0.0])).unwrap();
        assert!((val - 1.0).abs() < 1e-14);
    }

    #[test]
    fn alpha_positive_curvature_sample() {
        // μ=1, x=(1,0), y=(0,1): √(2·1 − 0)/2 = √2/2.
        let spec = cc_spec(2, 1.0, 1.0, &[0.0, 0.0]);
        let val = spec.alpha_value(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert!((val - 2.0f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn beta_flat_lambda_one_is_inner_product() {
        let spec = cc_spec(2, 0.0, 1.0, &[0.0, 0.0]);
        let x = v(&[0.3, -0.7]);
        let y = v(&[0.2, 0.5]);
        assert!((spec.beta_value(&x, &y).unwrap() - x.dot(&y)).abs() < 1e-14);
    }

    #[test]
    fn beta_constant_vector_only() {
        // λ=0, a=e₁, μ=0: β = ⟨e₁, y⟩.
        let spec = cc_spec(2, 0.0, 0.0, &[1.0, 0.0]);
        let val = spec.beta_value(&v(&[0.9, -0.4]), &v(&[0.3, 0.8])).unwrap();
        assert!((val - 0.3).abs() < 1e-14);
    }

    #[test]
    fn beta_norm_matches_closed_form() {
        // λ=1, a=0: b² = |x|²/(1+μ|x|²) to 1e-12.
        for &mu in &[-0.5, 0.0, 0.7] {
            let spec = cc_spec(3, mu, 1.0, &[0.0, 0.0, 0.0]);
            let x = v(&[0.3, -0.1, 0.2]);
            let jet = spec.jet(&x, &v(&[1.0, 0.0, 0.0])).unwrap();
            let expect = x.norm_squared() / (1.0 + mu * x.norm_squared());
            assert!((jet.b2 - expect).abs() < 1e-12, "mu = {mu}");
        }
    }

    #[test]
    fn christoffel_closed_form_values() {
        let flat = cc_spec(2, 0.0, 1.0, &[0.0, 0.0]);
        let g = flat.christoffel(&v(&[0.3, 0.1])).unwrap();
        assert!(g.iter().all(|m| m.amax() == 0.0));

        let hyp = cc_spec(2, -1.0, 1.0, &[0.0, 0.0]);
        let g0 = hyp.christoffel(&v(&[0.0, 0.0])).unwrap();
        assert!(g0.iter().all(|m| m.amax() == 0.0));

        // μ=1, x=(0.5,0): Γ^1_11 = −(1/1.25)(0.5+0.5) = −0.8.
        let sph = cc_spec(2, 1.0, 1.0, &[0.0, 0.0]);
        let g1 = sph.christoffel(&v(&[0.5, 0.0])).unwrap();
        assert!((g1[0][(0, 0)] + 0.8).abs() < 1e-14);
    }

    #[test]
    fn analytic_christoffel_matches_levi_civita_differences() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &mu in &[-0.5, 0.0, 0.7] {
            let spec = cc_spec(3, mu, 1.0, &[0.0, 0.0, 0.0]);
            for _ in 0..50 {
                let x = v(&[
                    rng.random_range(-0.4..0.4),
                    rng.random_range(-0.4..0.4),
                    rng.random_range(-0.4..0.4),
                ]);
                let analytic = spec.christoffel(&x).unwrap();
                let a_inv = invert(&spec.a_matrix(&x).unwrap()).unwrap();
                let da = spec.da_matrices(&x).unwrap();
                let numeric = levi_civita(&a_inv, &da);
                for k in 0..3 {
                    let diff = (&analytic[k] - &numeric[k]).amax();
                    assert!(diff < 1e-6, "mu={mu} k={k} diff={diff}");
                }
            }
        }
    }

    #[test]
    fn da_matches_finite_differences_of_a() {
        let spec = cc_spec(2, 0.7, 1.0, &[0.0, 0.0]);
        let x = v(&[0.2, -0.3]);
        let da = spec.da_matrices(&x).unwrap();
        for k in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += 1e-6;
            xm[k] -= 1e-6;
            let fd = (spec.a_matrix(&xp).unwrap() - spec.a_matrix(&xm).unwrap()) / 2e-6;
            assert!((&da[k] - fd).amax() < 1e-9);
        }
    }

    #[test]
    fn covariant_derivative_of_projective_beta_is_conformal() {
        // Flat case: r_ij = δ_ij, c = 1, s_ij = 0.
        let spec = cc_spec(2, 0.0, 1.0, &[0.0, 0.0]);
        let jet = spec.jet(&v(&[0.3, 0.4]), &v(&[1.0, 2.0])).unwrap();
        assert!((&jet.r_ij - DMatrix::identity(2, 2)).amax() < 1e-12);
        assert!(jet.s_ij.amax() < 1e-14);

        // Closed β: every s-contraction vanishes.
        assert!(jet.s_up0.amax() < 1e-14);
        assert!(jet.s0.abs() < 1e-14);
        assert!(jet.s_up.amax() < 1e-14);

        // μ=1 at x=(0.3, 0): c = 1/√1.09 and r₀₀/α² = c.
        let spec = cc_spec(2, 1.0, 1.0, &[0.0, 0.0]);
        let x = v(&[0.3, 0.0]);
        let y = v(&[0.4, -1.1]);
        let jet = spec.jet(&x, &y).unwrap();
        let c = 1.0 / 1.09f64.sqrt();
        assert!((jet.r00 / (jet.alpha * jet.alpha) - c).abs() < 1e-10);
        assert!((spec.conformal_factor(&x).unwrap() - c).abs() < 1e-14);
    }

    #[test]
    fn covariant_derivative_matches_published_closed_form() {
        // b_{i|j} = ϱ^{-3}(λ−μ⟨a,x⟩)δ_ij − ϱ^{-5}(λ−μ⟨a,x⟩)μ x_i x_j,
        // assembled here from ∂b − bΓ and compared entry by entry.
        let (mu, lambda) = (0.6, 1.3);
        let a = v(&[0.2, -0.1]);
        let spec = cc_spec(2, mu, lambda, &[0.2, -0.1]);
        let x = v(&[0.25, 0.4]);
        let jet = spec.jet(&x, &v(&[1.0, 1.0])).unwrap();
        let rho = (1.0 + mu * x.norm_squared()).sqrt();
        let factor = lambda - mu * a.dot(&x);
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                let expect = factor * delta / rho.powi(3) - factor * mu * x[i] * x[j] / rho.powi(5);
                assert!((jet.bcov[(i, j)] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn riemann_spray_examples() {
        let flat = cc_spec(2, 0.0, 1.0, &[0.0, 0.0]);
        let g = flat.spray_riemann(&v(&[0.3, 0.2]), &v(&[1.0, -1.0])).unwrap();
        assert!(g.amax() < 1e-15);

        // ⟨x,y⟩ = 0 makes the spray vanish.
        let hyp = cc_spec(2, -1.0, 1.0, &[0.0, 0.0]);
        let g = hyp.spray_riemann(&v(&[0.5, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert!(g.amax() < 1e-15);

        // μ=1, x = 0.2e₁, y = e₁: G = −(0.2/1.04)·y.
        let sph = cc_spec(2, 1.0, 1.0, &[0.0, 0.0]);
        let g = sph.spray_riemann(&v(&[0.2, 0.0]), &v(&[1.0, 0.0])).unwrap();
        assert!((g[0] + 0.2 / 1.04).abs() < 1e-14);
        assert!(g[1].abs() < 1e-15);
    }

    #[test]
    fn riemann_spray_is_projective() {
        // G^i_α − θ y^i = 0 with θ = −μ⟨x,y⟩/(1+μ|x|²).
        for &mu in &[-0.5, 0.0, 0.7] {
            let spec = cc_spec(3, mu, 1.0, &[0.0, 0.0, 0.0]);
            let x = v(&[0.2, -0.3, 0.1]);
            let y = v(&[1.0, 0.4, -0.8]);
            let g = spec.spray_riemann(&x, &y).unwrap();
            let theta = spec.projective_theta(&x, &y).unwrap();
            assert!((g - &y * theta).amax() < 1e-13, "mu = {mu}");
        }
    }

    #[test]
    fn explicit_fields_reproduce_the_analytic_route() {
        // Wrap the μ=0.7 closed forms as callables and check the FD path.
        let mu = 0.7;
        let analytic = cc_spec(2, mu, 1.0, &[0.0, 0.0]);
        let aa = analytic.clone();
        let ab = analytic.clone();
        let spec = AlphaBetaSpec::new(
            2,
            AlphaSpec::Explicit {
                a: Arc::new(move |x| aa.a_matrix(x).unwrap()),
            },
            BetaSpec::Explicit {
                b: Arc::new(move |x| ab.b_covector(x).unwrap()),
            },
        )
        .unwrap();
        let x = v(&[0.15, -0.22]);
        let y = v(&[0.6, 1.0]);
        let ja = analytic.jet(&x, &y).unwrap();
        let je = spec.jet(&x, &y).unwrap();
        assert!((&ja.bcov - &je.bcov).amax() < 1e-6);
        assert!((ja.r00 - je.r00).abs() < 1e-6);
        for k in 0..2 {
            assert!((&ja.gamma[k] - &je.gamma[k]).amax() < 1e-6);
        }
    }

    #[test]
    fn linear_beta_breaks_closedness() {
        let spec = AlphaBetaSpec::new(
            2,
            AlphaSpec::ConstCurvature { mu: 0.0 },
            BetaSpec::Linear {
                a: v(&[0.1, 0.0]),
                m: DMatrix::from_row_slice(2, 2, &[0.0, 0.3, 0.0, 0.0]),
            },
        )
        .unwrap();
        let jet = spec.jet(&v(&[0.2, 0.1]), &v(&[1.0, 0.0])).unwrap();
        assert!((jet.s_ij[(0, 1)] - 0.15).abs() < 1e-14);
        assert!((jet.s_ij[(1, 0)] + 0.15).abs() < 1e-14);
    }

    #[test]
    fn domain_guard_rejects_near_boundary_points() {
        let spec = cc_spec(2, -1.0, 1.0, &[0.0, 0.0]);
        assert!(spec.check_point(&v(&[0.9999999999, 0.0])).is_err());
        assert!(spec.check_point(&v(&[0.99, 0.0])).is_ok());
    }

    #[test]
    fn mismatched_mu_pairing_is_rejected() {
        let err = AlphaBetaSpec::new(
            2,
            AlphaSpec::ConstCurvature { mu: 0.5 },
            BetaSpec::Thm3 {
                mu: 0.3,
                lambda: 1.0,
                a: v(&[0.0, 0.0]),
            },
        );
        assert!(err.is_err());
    }

    #[test]
    fn inverse_metric_identity() {
        let spec = cc_spec(3, 0.7, 1.0, &[0.0, 0.0, 0.0]);
        let x = v(&[0.3, 0.2, -0.1]);
        let jet = spec.jet(&x, &v(&[1.0, 0.0, 0.5])).unwrap();
        let prod = &jet.a_inv * &jet.a;
        assert!((prod - DMatrix::identity(3, 3)).amax() < 1e-12);
    }
}
