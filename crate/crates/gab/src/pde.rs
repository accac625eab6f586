//! The projective-flatness PDE `φ₂₂ = 2(φ₁ − sφ₁₂)` and its solution space.
//!
//! A φ solving this equation over closed, conformal β and projectively
//! flat α yields a projectively flat metric. This module measures the PDE
//! residual on grids, certifies that the deformation `T_μ` maps solutions
//! to solutions and obeys the group laws, and checks the identity relating
//! the curvature-ν representation of a metric to its Euclidean one,
//! `α_ν·φ_μ(b²_ν, β_ν/α_ν) = |y|·φ_{μ+ν}(|x|², ⟨x,y⟩/|y|)`.
//!
//! Residuals are absolute, not relative: every shipped φ is O(1) on the
//! tested grids. The term `g(b²)·s` of the integral construction is
//! annihilated by the PDE operator, so residuals do not depend on g; the
//! tests pin this with nonzero g.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::Result;
use crate::metric::MetricSpec;
use crate::phi::{PhiFamily, PhiJet};
use crate::riemann::AlphaBetaSpec;

/// |φ₂₂ − 2(φ₁ − sφ₁₂)| from an already evaluated jet.
pub fn pde_residual_jet(jet: &PhiJet, s: f64) -> f64 {
    (jet.phi22 - 2.0 * (jet.phi1 - s * jet.phi12)).abs()
}

/// PDE residual of a family at one interior point.
pub fn pde_residual(family: &PhiFamily, b2: f64, s: f64) -> Result<f64> {
    Ok(pde_residual_jet(&family.eval_jet(b2, s)?, s))
}

/// An s-only profile `φ(s)` of the classical (α,β) form. With no b²
/// dependence the PDE residual collapses to `|φ''(s)|`.
pub struct ClassicalPhi {
    pub name: String,
    phi_ss: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl ClassicalPhi {
    /// φ(s) = (1+s)²: the squared-Randers profile, which does not solve
    /// the PDE (its b²-aware rewriting `BerwaldSquare` does).
    pub fn squared_randers() -> Self {
        Self {
            name: "squared_randers".into(),
            phi_ss: Box::new(|_| 2.0),
        }
    }

    /// φ(s) = 1+s: solves the PDE trivially (φ'' = 0).
    pub fn randers() -> Self {
        Self {
            name: "randers".into(),
            phi_ss: Box::new(|_| 0.0),
        }
    }

    /// Residual |φ₂₂ − 2(φ₁ − sφ₁₂)| = |φ''(s)|.
    pub fn pde_residual(&self, s: f64) -> f64 {
        (self.phi_ss)(s).abs()
    }
}

/// Outcome of a PDE-residual sweep.
#[derive(Debug, Clone, Serialize)]
pub struct PdeReport {
    pub family: String,
    pub grid: usize,
    pub b_max: f64,
    pub max_residual: f64,
    /// (b, s) node attaining the maximum.
    pub argmax_node: (f64, f64),
    /// Nodes skipped because the family was not evaluable there.
    pub skipped: usize,
}

/// Interior sample nodes: `grid` values of b in (0, b_max], and for each a
/// `grid`-point s-range shrunk by the relative margin 1e-3 to stay clear
/// of |s| = b.
fn interior_nodes(b_max: f64, grid: usize) -> Vec<(f64, f64)> {
    let margin = 1.0 - 1e-3;
    let mut nodes = Vec::with_capacity(grid * grid);
    for bi in 0..grid {
        let b = b_max * (bi + 1) as f64 / grid as f64;
        for si in 0..grid {
            let s = if grid == 1 {
                0.0
            } else {
                (-b + 2.0 * b * si as f64 / (grid - 1) as f64) * margin
            };
            nodes.push((b, s));
        }
    }
    nodes
}

/// Maximum PDE residual of a family over the interior grid.
pub fn pde_grid_report(family: &PhiFamily, b_max: f64, grid: usize) -> PdeReport {
    let mut max_residual = 0.0f64;
    let mut argmax_node = (0.0, 0.0);
    let mut skipped = 0;
    for (b, s) in interior_nodes(b_max, grid) {
        match pde_residual(family, b * b, s) {
            Ok(res) => {
                if res > max_residual {
                    max_residual = res;
                    argmax_node = (b, s);
                }
            }
            Err(_) => skipped += 1,
        }
    }
    PdeReport {
        family: family.name(),
        grid,
        b_max,
        max_residual,
        argmax_node,
        skipped,
    }
}

/// Default sweep bound for a family: comfortably inside its domain, at
/// most 1.
pub fn default_b_max(family: &PhiFamily) -> f64 {
    (family.b_o() * 0.9).min(1.0)
}

/// Deviations of the transformation-group laws on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct GroupLawReport {
    pub family: String,
    pub mu: f64,
    pub nu: f64,
    /// max |T₀(φ) − φ|
    pub identity_dev: f64,
    /// max |T_μ(T_ν(φ)) − T_{μ+ν}(φ)|
    pub composition_dev: f64,
    pub skipped: usize,
}

/// Measure `T₀ = id` and `T_μ∘T_ν = T_{μ+ν}` for a base family over the
/// interior grid; out-of-domain nodes are skipped and counted.
pub fn verify_group_laws(
    base: &PhiFamily,
    mu: f64,
    nu: f64,
    b_max: f64,
    grid: usize,
) -> GroupLawReport {
    let identity = PhiFamily::MuTransformed {
        base: Box::new(base.clone()),
        mu: 0.0,
    };
    let inner = PhiFamily::MuTransformed {
        base: Box::new(base.clone()),
        mu: nu,
    };
    let two_step = PhiFamily::MuTransformed {
        base: Box::new(inner),
        mu,
    };
    let direct = PhiFamily::MuTransformed {
        base: Box::new(base.clone()),
        mu: mu + nu,
    };

    let mut identity_dev = 0.0f64;
    let mut composition_dev = 0.0f64;
    let mut skipped = 0;
    for (b, s) in interior_nodes(b_max, grid) {
        let b2 = b * b;
        let base_val = match base.eval(b2, s) {
            Ok(v) => v,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        match (identity.eval(b2, s), two_step.eval(b2, s), direct.eval(b2, s)) {
            (Ok(idv), Ok(lhs), Ok(rhs)) => {
                identity_dev = identity_dev.max((idv - base_val).abs());
                composition_dev = composition_dev.max((lhs - rhs).abs());
            }
            _ => skipped += 1,
        }
    }
    GroupLawReport {
        family: base.name(),
        mu,
        nu,
        identity_dev,
        composition_dev,
        skipped,
    }
}

/// Apply `T_μ` to a base family and sweep the PDE residual of the result;
/// small residual certifies that the transform preserves solutions.
pub fn verify_solution_closure(base: &PhiFamily, mu: f64, grid: usize) -> PdeReport {
    let transformed = PhiFamily::MuTransformed {
        base: Box::new(base.clone()),
        mu,
    };
    let b_max = default_b_max(&transformed);
    pde_grid_report(&transformed, b_max, grid)
}

/// Relative deviation between the curvature-ν representation
/// `α_ν·φ_μ(b²_ν, β_ν/α_ν)` and the Euclidean representation
/// `|y|·φ_{μ+ν}(|x|², ⟨x,y⟩/|y|)` at one `(x, y)`.
pub fn equivalence_of_representations(
    phi: &PhiFamily,
    mu: f64,
    nu: f64,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<f64> {
    let n = x.len();
    let lhs_spec = MetricSpec::new(
        PhiFamily::MuTransformed {
            base: Box::new(phi.clone()),
            mu,
        },
        AlphaBetaSpec::projective_family(n, nu, 1.0, DVector::zeros(n))?,
    )?;
    let rhs_spec = MetricSpec::new(
        PhiFamily::MuTransformed {
            base: Box::new(phi.clone()),
            mu: mu + nu,
        },
        AlphaBetaSpec::projective_family(n, 0.0, 1.0, DVector::zeros(n))?,
    )?;
    let lhs = lhs_spec.f(x, y)?;
    let rhs = rhs_spec.f(x, y)?;
    Ok((lhs - rhs).abs() / rhs.abs().max(1e-300))
}
