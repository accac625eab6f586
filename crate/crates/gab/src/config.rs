//! Experiment-manifest schema.
//!
//! A metric is described by one TOML file:
//!
//! ```toml
//! dim = 2
//!
//! [phi]
//! kind = "bryant"        # constant | randers | berwald_square | bryant
//! p = 1.0471975512       #   | lemma_c | mu_transformed
//!
//! [alpha]
//! kind = "const_curvature"
//! mu = -1.0
//!
//! [beta]
//! kind = "thm3"          # thm3 | linear
//! mu = -1.0
//! lambda = 1.0
//! a = [0.0, 0.0]
//! ```
//!
//! `lemma_c` takes `f` (one of `inv_sqrt_one_minus_t`, `one_plus_t`,
//! `sqrt_one_minus_t`, `sqrt_one_plus_t`, `ln_two_plus_t`, `ln_two_minus_t`,
//! `one_plus_arctan_t`) and `g` (`zero`, `const` with `g_value`, `funk`,
//! `navigation_randers`). `mu_transformed` takes `mu` and a nested
//! `[phi.base]` table. `linear` β takes `a` and a row-major matrix `m`.
//! Unknown keys are errors, as are keys irrelevant to the chosen kind.

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{GabError, Result};
use crate::metric::MetricSpec;
use crate::phi::{FProfile, GProfile, PhiFamily};
use crate::riemann::{AlphaBetaSpec, AlphaSpec, BetaSpec};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub dim: usize,
    pub phi: PhiConfig,
    pub alpha: AlphaConfig,
    pub beta: BetaConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiConfig {
    pub kind: String,
    pub p: Option<f64>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub g_value: Option<f64>,
    pub mu: Option<f64>,
    pub base: Option<Box<PhiConfig>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaConfig {
    pub kind: String,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaConfig {
    pub kind: String,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub a: Option<Vec<f64>>,
    pub m: Option<Vec<Vec<f64>>>,
}

fn require<T: Copy>(field: Option<T>, name: &str, kind: &str) -> Result<T> {
    field.ok_or_else(|| GabError::Config(format!("kind \"{kind}\" requires field \"{name}\"")))
}

fn forbid<T>(field: &Option<T>, name: &str, kind: &str) -> Result<()> {
    if field.is_some() {
        return Err(GabError::Config(format!(
            "field \"{name}\" is not allowed for kind \"{kind}\""
        )));
    }
    Ok(())
}

impl PhiConfig {
    pub fn to_family(&self) -> Result<PhiFamily> {
        let kind = self.kind.as_str();
        let fam = match kind {
            "constant" | "randers" | "berwald_square" => {
                forbid(&self.p, "p", kind)?;
                forbid(&self.f, "f", kind)?;
                forbid(&self.g, "g", kind)?;
                forbid(&self.g_value, "g_value", kind)?;
                forbid(&self.mu, "mu", kind)?;
                forbid(&self.base, "base", kind)?;
                match kind {
                    "constant" => PhiFamily::Constant,
                    "randers" => PhiFamily::Randers,
                    _ => PhiFamily::BerwaldSquare,
                }
            }
            "bryant" => {
                forbid(&self.f, "f", kind)?;
                forbid(&self.g, "g", kind)?;
                forbid(&self.g_value, "g_value", kind)?;
                forbid(&self.mu, "mu", kind)?;
                forbid(&self.base, "base", kind)?;
                PhiFamily::Bryant {
                    p: require(self.p, "p", kind)?,
                }
            }
            "lemma_c" => {
                forbid(&self.p, "p", kind)?;
                forbid(&self.mu, "mu", kind)?;
                forbid(&self.base, "base", kind)?;
                let f_name = self
                    .f
                    .as_deref()
                    .ok_or_else(|| GabError::Config("kind \"lemma_c\" requires \"f\"".into()))?;
                let f = parse_f_profile(f_name)?;
                let g = parse_g_profile(self.g.as_deref().unwrap_or("zero"), self.g_value)?;
                PhiFamily::LemmaC { f, g }
            }
            "mu_transformed" => {
                forbid(&self.p, "p", kind)?;
                forbid(&self.f, "f", kind)?;
                forbid(&self.g, "g", kind)?;
                forbid(&self.g_value, "g_value", kind)?;
                let base = self.base.as_ref().ok_or_else(|| {
                    GabError::Config("kind \"mu_transformed\" requires a [phi.base] table".into())
                })?;
                PhiFamily::MuTransformed {
                    base: Box::new(base.to_family()?),
                    mu: require(self.mu, "mu", kind)?,
                }
            }
            other => {
                return Err(GabError::Config(format!("unknown phi kind \"{other}\"")));
            }
        };
        fam.validate()?;
        Ok(fam)
    }
}

fn parse_f_profile(name: &str) -> Result<FProfile> {
    Ok(match name {
        "inv_sqrt_one_minus_t" => FProfile::InvSqrtOneMinusT,
        "one_plus_t" => FProfile::OnePlusT,
        "sqrt_one_minus_t" => FProfile::SqrtOneMinusT,
        "sqrt_one_plus_t" => FProfile::SqrtOnePlusT,
        "ln_two_plus_t" => FProfile::LnTwoPlusT,
        "ln_two_minus_t" => FProfile::LnTwoMinusT,
        "one_plus_arctan_t" => FProfile::OnePlusArctanT,
        other => {
            return Err(GabError::Config(format!("unknown f profile \"{other}\"")));
        }
    })
}

fn parse_g_profile(name: &str, value: Option<f64>) -> Result<GProfile> {
    match name {
        "zero" => Ok(GProfile::Zero),
        "const" => Ok(GProfile::Const(value.ok_or_else(|| {
            GabError::Config("g = \"const\" requires \"g_value\"".into())
        })?)),
        "funk" => Ok(GProfile::Funk),
        "navigation_randers" => Ok(GProfile::NavigationRanders),
        other => Err(GabError::Config(format!("unknown g profile \"{other}\""))),
    }
}

impl MetricConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| GabError::Config(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_metric_spec(&self) -> Result<MetricSpec> {
        let phi = self.phi.to_family()?;
        let alpha = match self.alpha.kind.as_str() {
            "const_curvature" => AlphaSpec::ConstCurvature {
                mu: require(self.alpha.mu, "mu", "const_curvature")?,
            },
            other => {
                return Err(GabError::Config(format!("unknown alpha kind \"{other}\"")));
            }
        };
        let beta = match self.beta.kind.as_str() {
            "thm3" => {
                forbid(&self.beta.m, "m", "thm3")?;
                let a = self
                    .beta
                    .a
                    .clone()
                    .unwrap_or_else(|| vec![0.0; self.dim]);
                BetaSpec::Thm3 {
                    mu: require(self.beta.mu, "mu", "thm3")?,
                    lambda: require(self.beta.lambda, "lambda", "thm3")?,
                    a: DVector::from_vec(a),
                }
            }
            "linear" => {
                forbid(&self.beta.mu, "mu", "linear")?;
                forbid(&self.beta.lambda, "lambda", "linear")?;
                let a = self
                    .beta
                    .a
                    .clone()
                    .ok_or_else(|| GabError::Config("linear beta requires \"a\"".into()))?;
                let rows = self
                    .beta
                    .m
                    .clone()
                    .ok_or_else(|| GabError::Config("linear beta requires \"m\"".into()))?;
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(GabError::Config(format!(
                        "linear beta matrix must be {0}x{0}",
                        self.dim
                    )));
                }
                let flat: Vec<f64> = rows.into_iter().flatten().collect();
                BetaSpec::Linear {
                    a: DVector::from_vec(a),
                    m: DMatrix::from_row_slice(self.dim, self.dim, &flat),
                }
            }
            other => {
                return Err(GabError::Config(format!("unknown beta kind \"{other}\"")));
            }
        };
        let ab = AlphaBetaSpec::new(self.dim, alpha, beta)?;
        MetricSpec::new(phi, ab)
    }
}
