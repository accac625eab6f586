//! Numerical toolkit for general (α,β)-metrics `F = α·φ(b², β/α)`.
//!
//! A general (α,β)-metric is built from a Riemannian metric `α`, a 1-form
//! `β`, and a positive function `φ(b², s)` of the squared norm `b² = ‖β‖²_α`
//! and the ratio `s = β/α`. This crate evaluates such metrics and their
//! derived objects in closed form and provides the independent
//! finite-difference and geodesic-integration oracles used to cross-check
//! every closed formula:
//!
//! * [`phi`] — the φ families (Randers, Berwald-square, the complex Bryant
//!   family, integral-constructed solution families, and the `T_μ`
//!   deformation between constant-curvature representations);
//! * [`riemann`] — constant-curvature `α_μ`, the 1-form of the projective
//!   family, Christoffel symbols, covariant derivatives `b_{i|j}` and all
//!   `r/s` contraction scalars;
//! * [`metric`] — `F`, the fundamental tensor `g_ij`, its determinant and
//!   closed-form inverse, Finsler-validity sweeps and the adapted-basis
//!   rotation-invariance check;
//! * [`spray`] — spray coefficients `G^i` by the closed formula, by the
//!   conformal/closed specialization, and by a definition-level
//!   finite-difference oracle, plus projective-factor extraction;
//! * [`geodesic`] — RK4 integration of `ẍ = −2G(x, ẋ)` with straight-line
//!   deviation measurement;
//! * [`pde`] — residual checks for the projective-flatness PDE
//!   `φ₂₂ = 2(φ₁ − sφ₁₂)` and the transformation-group laws;
//! * [`config`] — the TOML experiment-manifest schema shared with the CLI.

pub mod config;
pub mod error;
pub mod fd;
pub mod geodesic;
pub mod metric;
pub mod pde;
pub mod phi;
pub mod quad;
pub mod riemann;
pub mod spray;

pub use error::{GabError, Result};
pub use metric::MetricSpec;
pub use phi::{FProfile, GProfile, PhiFamily, PhiJet};
pub use riemann::{AlphaBetaJet, AlphaBetaSpec, AlphaSpec, BetaSpec};
