//! Geodesic integration and straight-line deviation.
//!
//! Geodesics of `F` solve `ẍ = −2G(x, ẋ)`. A metric is projectively flat
//! exactly when all of its geodesics are straight lines, so integrating
//! the ODE and measuring the deviation of the discrete path from the chord
//! through its endpoints is the definition-level verification of
//! projective flatness. `F(x, ẋ)` is constant along geodesics in this
//! parametrization and serves as the integration sanity monitor.

use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GabError, Result};
use crate::metric::MetricSpec;
use crate::spray;

/// Which spray assembly drives the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SprayMethod {
    ClosedForm,
    FdOracle,
}

/// A discretized geodesic.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub points: Vec<DVector<f64>>,
    pub velocities: Vec<DVector<f64>>,
    pub step: f64,
    /// Max perpendicular distance of the points to the chord through the
    /// first and last point, divided by the chord length. Invariant under
    /// the projective reparametrizations a `G = P·y` spray induces.
    pub straightness_residual: f64,
    /// The trajectory left the domain and was cut short.
    pub truncated: bool,
    /// Max relative drift of the monitor `F(x, ẋ)`.
    pub f_drift: f64,
}

/// Aggregate verdict of a randomized flatness probe.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub family: String,
    pub samples: usize,
    pub completed: usize,
    pub truncated: usize,
    /// Samples dropped because of integration errors.
    pub excluded: usize,
    pub max_straightness: f64,
    pub median_straightness: f64,
    pub max_projective_residual: f64,
    pub median_projective_residual: f64,
    /// True iff max straightness residual < 1e-5 over completed paths.
    pub flat: bool,
}

/// Tunables of [`flatness_sweep`].
#[derive(Debug, Clone, Copy)]
pub struct FlatnessOptions {
    pub samples: usize,
    pub seed: u64,
    pub steps: usize,
    pub h: f64,
    /// Radius of the ball initial points are drawn from; `None` picks
    /// 0.25·min(r_μ, 1) for ball domains and 0.3 otherwise.
    pub sample_radius: Option<f64>,
    pub method: SprayMethod,
}

impl Default for FlatnessOptions {
    fn default() -> Self {
        Self {
            samples: 20,
            seed: 42,
            steps: 500,
            h: 1e-3,
            sample_radius: None,
            method: SprayMethod::ClosedForm,
        }
    }
}

fn spray_for(
    spec: &MetricSpec,
    method: SprayMethod,
    x: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    match method {
        SprayMethod::ClosedForm => Ok(spray::spray_closed(spec, x, v)?.g),
        SprayMethod::FdOracle => Ok(spray::spray_oracle_fd(spec, x, v)?.g),
    }
}

/// Classic fourth-order Runge–Kutta on `(x, v) ↦ (v, −2G(x, v))`.
///
/// Leaving the domain mid-trajectory truncates the path (flag, not error);
/// a monitor drift above 10% aborts with `StepInstability`.
pub fn integrate_geodesic(
    spec: &MetricSpec,
    x0: &DVector<f64>,
    y0: &DVector<f64>,
    steps: usize,
    h: f64,
    method: SprayMethod,
) -> Result<GeodesicPath> {
    if y0.iter().all(|v| *v == 0.0) {
        return Err(GabError::DegenerateDirection);
    }
    if h <= 0.0 {
        return Err(GabError::Domain(format!("step h = {h} must be positive")));
    }
    spec.ab.check_point(x0)?;
    let f0 = spec.f(x0, y0)?;

    let mut x = x0.clone();
    let mut v = y0.clone();
    let mut points = vec![x.clone()];
    let mut velocities = vec![v.clone()];
    let mut truncated = false;
    let mut f_drift = 0.0f64;

    'outer: for _ in 0..steps {
        // RK4 stages; any domain failure in a stage stops the trajectory.
        let stage = |xs: &DVector<f64>, vs: &DVector<f64>| -> Result<(DVector<f64>, DVector<f64>)> {
            let g = spray_for(spec, method, xs, vs)?;
            Ok((vs.clone(), -2.0 * g))
        };
        let k1 = match stage(&x, &v) {
            Ok(k) => k,
            Err(_) => {
                truncated = true;
                break 'outer;
            }
        };
        let k2 = match stage(&(&x + &k1.0 * (h / 2.0)), &(&v + &k1.1 * (h / 2.0))) {
            Ok(k) => k,
            Err(_) => {
                truncated = true;
                break 'outer;
            }
        };
        let k3 = match stage(&(&x + &k2.0 * (h / 2.0)), &(&v + &k2.1 * (h / 2.0))) {
            Ok(k) => k,
            Err(_) => {
                truncated = true;
                break 'outer;
            }
        };
        let k4 = match stage(&(&x + &k3.0 * h), &(&v + &k3.1 * h)) {
            Ok(k) => k,
            Err(_) => {
                truncated = true;
                break 'outer;
            }
        };
        let xn = &x + (&k1.0 + &k2.0 * 2.0 + &k3.0 * 2.0 + &k4.0) * (h / 6.0);
        let vn = &v + (&k1.1 + &k2.1 * 2.0 + &k3.1 * 2.0 + &k4.1) * (h / 6.0);
        match spec.f(&xn, &vn) {
            Ok(f) => {
                let drift = (f - f0).abs() / f0;
                f_drift = f_drift.max(drift);
                if drift > 0.1 {
                    return Err(GabError::StepInstability(format!(
                        "monitor F drifted by {:.1}% (> 10%)",
                        drift * 100.0
                    )));
                }
            }
            Err(_) => {
                truncated = true;
                break 'outer;
            }
        }
        x = xn;
        v = vn;
        points.push(x.clone());
        velocities.push(v.clone());
    }

    let straightness_residual = straightness(&points);
    Ok(GeodesicPath {
        points,
        velocities,
        step: h,
        straightness_residual,
        truncated,
        f_drift,
    })
}

/// Max perpendicular distance to the first–last chord over chord length.
pub fn straightness(points: &[DVector<f64>]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let first = &points[0];
    let chord = points.last().unwrap() - first;
    let len = chord.norm();
    if len < 1e-300 {
        return f64::INFINITY;
    }
    let dir = chord / len;
    let mut max_perp = 0.0f64;
    for p in points {
        let d = p - first;
        let perp = (&d - &dir * d.dot(&dir)).norm();
        max_perp = max_perp.max(perp);
    }
    max_perp / len
}

/// Integrate geodesics from random starts and aggregate straightness and
/// projective-factor residuals. Deterministic given the seed.
pub fn flatness_sweep(spec: &MetricSpec, opts: &FlatnessOptions) -> FlatnessReport {
    let n = spec.ab.dim;
    let radius = opts.sample_radius.unwrap_or_else(|| default_radius(spec));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut straight = Vec::new();
    let mut proj = Vec::new();
    let mut truncated = 0;
    let mut excluded = 0;
    let mut completed = 0;

    for _ in 0..opts.samples {
        let x0 = random_in_ball(&mut rng, n, radius);
        let mut y0 = random_unit(&mut rng, n);
        // Normalize to unit Finsler speed so the monitor is comparable.
        match spec.f(&x0, &y0) {
            Ok(f) if f > 0.0 => y0 /= f,
            _ => {
                excluded += 1;
                continue;
            }
        }
        match spray::spray_closed(spec, &x0, &y0) {
            Ok(res) => proj.push(res.residual),
            Err(_) => {}
        }
        match integrate_geodesic(spec, &x0, &y0, opts.steps, opts.h, opts.method) {
            Ok(path) if path.truncated => truncated += 1,
            Ok(path) => {
                completed += 1;
                straight.push(path.straightness_residual);
            }
            Err(_) => excluded += 1,
        }
    }

    let max_straightness = straight.iter().cloned().fold(0.0, f64::max);
    let max_projective_residual = proj.iter().cloned().fold(0.0, f64::max);
    FlatnessReport {
        family: spec.phi.name(),
        samples: opts.samples,
        completed,
        truncated,
        excluded,
        max_straightness,
        median_straightness: median(&mut straight),
        max_projective_residual,
        median_projective_residual: median(&mut proj),
        flat: completed > 0 && max_straightness < 1e-5,
    }
}

fn default_radius(spec: &MetricSpec) -> f64 {
    match spec.ab.alpha {
        crate::riemann::AlphaSpec::ConstCurvature { mu } if mu < 0.0 => {
            0.25 * (1.0 / (-mu).sqrt()).min(1.0)
        }
        _ => 0.3,
    }
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[values.len() / 2]
}

fn random_in_ball<R: Rng>(rng: &mut R, n: usize, radius: f64) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v * radius;
        }
    }
}

fn random_unit<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 0.1 && norm <= 1.0 {
            return v / norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::{FProfile, GProfile, PhiFamily};
    use crate::riemann::{AlphaBetaSpec, AlphaSpec, BetaSpec};
    use nalgebra::DMatrix;

    fn v(parts: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(parts)
    }

    fn projective_metric(phi: PhiFamily, dim: usize, mu: f64) -> MetricSpec {
        let ab = AlphaBetaSpec::projective_family(dim, mu, 1.0, DVector::zeros(dim)).unwrap();
        MetricSpec::new(phi, ab).unwrap()
    }

    fn funk_metric() -> MetricSpec {
        projective_metric(
            PhiFamily::LemmaC {
                f: FProfile::InvSqrtOneMinusT,
                g: GProfile::Funk,
            },
            2,
            0.0,
        )
    }

    fn berwald_metric() -> MetricSpec {
        projective_metric(PhiFamily::BerwaldSquare, 2, -1.0)
    }

    #[test]
    fn euclidean_geodesics_are_exact_lines() {
        let spec = projective_metric(PhiFamily::Constant, 2, 0.0);
        let path = integrate_geodesic(
            &spec,
            &v(&[0.1, 0.2]),
            &v(&[1.0, -0.5]),
            200,
            1e-2,
            SprayMethod::ClosedForm,
        )
        .unwrap();
        assert!(!path.truncated);
        assert!(path.straightness_residual < 1e-12);
        assert!(path.f_drift < 1e-12);
    }

    #[test]
    fn funk_geodesics_are_straight() {
        let path = integrate_geodesic(
            &funk_metric(),
            &v(&[0.1, 0.2]),
            &v(&[1.0, -0.3]),
            500,
            1e-3,
            SprayMethod::ClosedForm,
        )
        .unwrap();
        assert!(!path.truncated);
        assert!(
            path.straightness_residual < 1e-6,
            "residual {}",
            path.straightness_residual
        );
    }

    #[test]
    fn berwald_geodesics_are_straight() {
        let path = integrate_geodesic(
            &berwald_metric(),
            &v(&[0.1, 0.2]),
            &v(&[1.0, -0.3]),
            500,
            1e-3,
            SprayMethod::ClosedForm,
        )
        .unwrap();
        assert!(!path.truncated);
        assert!(path.straightness_residual < 1e-6);
    }

    #[test]
    fn halving_the_step_does_not_worsen_straightness() {
        let spec = funk_metric();
        let x0 = v(&[0.15, -0.1]);
        let y0 = v(&[0.8, 0.4]);
        let coarse =
            integrate_geodesic(&spec, &x0, &y0, 250, 2e-3, SprayMethod::ClosedForm).unwrap();
        let fine =
            integrate_geodesic(&spec, &x0, &y0, 500, 1e-3, SprayMethod::ClosedForm).unwrap();
        assert!(fine.straightness_residual <= coarse.straightness_residual + 1e-9);
    }

    #[test]
    fn closed_and_fd_sprays_trace_the_same_path() {
        let spec = funk_metric();
        let x0 = v(&[0.05, 0.1]);
        let y0 = v(&[0.7, -0.2]);
        let a = integrate_geodesic(&spec, &x0, &y0, 150, 2e-3, SprayMethod::ClosedForm).unwrap();
        let b = integrate_geodesic(&spec, &x0, &y0, 150, 2e-3, SprayMethod::FdOracle).unwrap();
        assert!(!a.truncated && !b.truncated);
        // Arc length of the reference path normalizes the comparison.
        let mut arc = 0.0;
        for k in 1..a.points.len() {
            arc += (&a.points[k] - &a.points[k - 1]).norm();
        }
        let mut max_gap = 0.0f64;
        for (pa, pb) in a.points.iter().zip(&b.points) {
            max_gap = max_gap.max((pa - pb).norm());
        }
        assert!(max_gap / arc.max(1.0) < 1e-4, "gap {max_gap} over arc {arc}");
    }

    #[test]
    fn boundary_exit_truncates_with_flag() {
        // The paper exemplars are forward complete and never exit, so the
        // truncation path is exercised with an explicit metric field that
        // stops being definable outside the unit ball.
        let ab = AlphaBetaSpec::new(
            2,
            AlphaSpec::Explicit {
                a: std::sync::Arc::new(|x: &DVector<f64>| {
                    if x.norm() < 1.0 {
                        DMatrix::identity(2, 2)
                    } else {
                        DMatrix::zeros(2, 2)
                    }
                }),
            },
            BetaSpec::Linear {
                a: v(&[0.0, 0.0]),
                m: DMatrix::zeros(2, 2),
            },
        )
        .unwrap();
        let spec = MetricSpec::new(PhiFamily::Constant, ab).unwrap();
        let path = integrate_geodesic(
            &spec,
            &v(&[0.5, 0.0]),
            &v(&[1.0, 0.0]),
            200,
            1e-2,
            SprayMethod::ClosedForm,
        )
        .unwrap();
        assert!(path.truncated);
        assert!(path.points.len() < 201);
        // The completed prefix is still a straight line.
        assert!(path.straightness_residual < 1e-10);
    }

    #[test]
    fn absurd_step_trips_the_monitor() {
        let spec = projective_metric(PhiFamily::Constant, 2, 1.0);
        let err = integrate_geodesic(
            &spec,
            &v(&[0.5, 0.0]),
            &v(&[1.0, 0.0]),
            50,
            5.0,
            SprayMethod::ClosedForm,
        );
        assert!(matches!(err, Err(GabError::StepInstability(_))));
    }

    #[test]
    fn riemannian_constant_curvature_is_flat() {
        let spec = projective_metric(PhiFamily::Constant, 2, -1.0);
        let report = flatness_sweep(&spec, &FlatnessOptions::default());
        assert!(report.flat, "{report:?}");
    }

    #[test]
    fn projective_family_metric_is_flat() {
        let spec = projective_metric(
            PhiFamily::Bryant {
                p: std::f64::consts::FRAC_PI_4,
            },
            2,
            1.0,
        );
        let report = flatness_sweep(&spec, &FlatnessOptions::default());
        assert!(report.flat, "{report:?}");
        assert!(report.max_projective_residual < 1e-8);
    }

    #[test]
    fn generic_randers_is_not_flat() {
        let ab = AlphaBetaSpec::new(
            2,
            AlphaSpec::ConstCurvature { mu: 0.0 },
            BetaSpec::Linear {
                a: v(&[0.1, 0.0]),
                m: DMatrix::from_row_slice(2, 2, &[0.0, 0.3, 0.0, 0.0]),
            },
        )
        .unwrap();
        let spec = MetricSpec::new(PhiFamily::Randers, ab).unwrap();
        let report = flatness_sweep(&spec, &FlatnessOptions::default());
        assert!(!report.flat, "{report:?}");
        assert!(report.max_straightness > 1e-4, "{report:?}");
    }

    #[test]
    fn sweep_is_deterministic() {
        let spec = funk_metric();
        let a = flatness_sweep(&spec, &FlatnessOptions::default());
        let b = flatness_sweep(&spec, &FlatnessOptions::default());
        assert_eq!(a.max_straightness, b.max_straightness);
        assert_eq!(a.median_projective_residual, b.median_projective_residual);
    }

    #[test]
    fn zero_direction_is_rejected() {
        let spec = funk_metric();
        let err = integrate_geodesic(
            &spec,
            &v(&[0.1, 0.1]),
            &v(&[0.0, 0.0]),
            10,
            1e-3,
            SprayMethod::ClosedForm,
        );
        assert!(matches!(err, Err(GabError::DegenerateDirection)));
    }
}
