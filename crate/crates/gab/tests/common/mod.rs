//! Shared oracles and fixtures for the integration suites.
//!
//! The oracles here recompute everything from definitions (finite
//! differences of F², dense linear algebra) and never call the closed-form
//! code paths they are used to check.

use gab::metric::MetricSpec;
use gab::phi::{FProfile, GProfile, PhiFamily};
use gab::riemann::AlphaBetaSpec;
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// ½·Hessian_y(F²) by central second differences.
///
/// Step 1e-4: the ε^¼ optimum for second derivatives (at 1e-5 the
/// round-off floor ε/h² would sit at the comparison tolerance itself).
pub fn fd_fundamental_tensor(
    spec: &MetricSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> DMatrix<f64> {
    let n = y.len();
    let h = 1e-4;
    let f2 = |yy: &DVector<f64>| spec.f(x, yy).unwrap().powi(2);
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let val = if i == j {
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[i] += h;
                ym[i] -= h;
                (f2(&yp) - 2.0 * f2(y) + f2(&ym)) / (h * h)
            } else {
                let mut ypp = y.clone();
                let mut ypm = y.clone();
                let mut ymp = y.clone();
                let mut ymm = y.clone();
                ypp[i] += h;
                ypp[j] += h;
                ypm[i] += h;
                ypm[j] -= h;
                ymp[i] -= h;
                ymp[j] += h;
                ymm[i] -= h;
                ymm[j] -= h;
                (f2(&ypp) - f2(&ypm) - f2(&ymp) + f2(&ymm)) / (4.0 * h * h)
            };
            g[(i, j)] = 0.5 * val;
        }
    }
    g
}

/// Every shipped φ family, parameterized the way the sweeps use them.
pub fn shipped_families() -> Vec<PhiFamily> {
    let mut fams = vec![
        PhiFamily::Constant,
        PhiFamily::Randers,
        PhiFamily::BerwaldSquare,
        PhiFamily::Bryant {
            p: std::f64::consts::FRAC_PI_3,
        },
        PhiFamily::MuTransformed {
            base: Box::new(PhiFamily::BerwaldSquare),
            mu: 0.4,
        },
    ];
    for f in FProfile::shipped() {
        fams.push(PhiFamily::LemmaC {
            f,
            g: GProfile::Const(0.2),
        });
    }
    fams.push(PhiFamily::LemmaC {
        f: FProfile::InvSqrtOneMinusT,
        g: GProfile::Funk,
    });
    fams
}

/// The projective-family metric (λ = 1, a = 0) over curvature μ.
pub fn projective_metric(phi: PhiFamily, dim: usize, mu: f64) -> MetricSpec {
    let ab = AlphaBetaSpec::projective_family(dim, mu, 1.0, DVector::zeros(dim)).unwrap();
    MetricSpec::new(phi, ab).unwrap()
}

/// The Funk metric: Euclidean data, Randers-type profile, g = 1/(1−b²).
pub fn funk_metric(dim: usize) -> MetricSpec {
    projective_metric(
        PhiFamily::LemmaC {
            f: FProfile::InvSqrtOneMinusT,
            g: GProfile::Funk,
        },
        dim,
        0.0,
    )
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v * radius;
        }
    }
}

pub fn random_unit<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 0.1 && norm <= 1.0 {
            return v / norm;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
