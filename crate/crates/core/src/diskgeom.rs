//! Hyperbolic geometry of the unit disk.
//!
//! Conventions: the Poincaré density is `1/(1 - |z|^2)`, of constant
//! curvature -4, and the distance is `atanh` of the pseudo-hyperbolic
//! distance. The Green function of the disk is `log` of the
//! pseudo-hyperbolic distance, which is the same as `log tanh d`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{linear_fractional_series, PowerSeries};

fn check_in_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "point {}{:+}i is not inside the unit disk",
            z.re, z.im
        )));
    }
    Ok(())
}

/// `1 - |z|^2`, computed without cancellation for |z| close to 1.
fn one_minus_norm_sqr(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// Pseudo-hyperbolic distance `|(z2 - z1)/(1 - conj(z1) z2)|`.
pub fn pseudo_hyperbolic(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_in_disk(z1)?;
    check_in_disk(z2)?;
    Ok(((z2 - z1) / (Complex64::new(1.0, 0.0) - z1.conj() * z2)).norm())
}

/// Hyperbolic distance `atanh δ(z1, z2)` for the curvature -4 metric.
pub fn hyperbolic_distance(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_in_disk(z1)?;
    check_in_disk(z2)?;
    let num = (z2 - z1).norm();
    let den = (Complex64::new(1.0, 0.0) - z1.conj() * z2).norm();
    let delta = num / den;
    // 1 - δ² = (1-|z1|²)(1-|z2|²)/|1 - conj(z1) z2|²; using it keeps
    // precision when both points crowd the boundary.
    let one_minus_delta_sqr = one_minus_norm_sqr(z1) * one_minus_norm_sqr(z2) / (den * den);
    let one_minus_delta = one_minus_delta_sqr / (1.0 + delta);
    Ok(0.5 * ((1.0 + delta) / one_minus_delta).ln())
}

/// Green function of the disk with pole `w`. Returns `-inf` when `z == w`.
pub fn green_disk(z: Complex64, w: Complex64) -> Result<f64> {
    let delta = pseudo_hyperbolic(w, z)?;
    if delta == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(delta.ln())
}

/// Poincaré density `1/(1 - |z|^2)`.
pub fn lambda_hyp(z: Complex64) -> f64 {
    1.0 / one_minus_norm_sqr(z)
}

/// Disk automorphism `z -> rotation * (z - center) / (1 - conj(center) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    rotation: Complex64,
    center: Complex64,
}

impl MoebiusMap {
    /// Rotation is rescaled to unit modulus; the center must lie in the disk.
    pub fn new(rotation: Complex64, center: Complex64) -> Result<Self> {
        let r = rotation.norm();
        if !r.is_finite() || r == 0.0 {
            return Err(Error::InvalidMap("rotation must be a nonzero finite complex number".into()));
        }
        if !(center.norm() < 1.0) {
            return Err(Error::InvalidMap(format!(
                "center {}{:+}i is not inside the unit disk",
                center.re, center.im
            )));
        }
        Ok(Self {
            rotation: rotation / r,
            center,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Complex64::new(1.0, 0.0),
            center: Complex64::new(0.0, 0.0),
        }
    }

    /// The automorphism with `γ(0) = a` and `γ'(0) > 0`.
    pub fn sending_origin_to(a: Complex64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), -a)
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.rotation * (z - self.center) / (Complex64::new(1.0, 0.0) - self.center.conj() * z)
    }

    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - self.center.conj() * z;
        self.rotation * one_minus_norm_sqr(self.center) / (d * d)
    }

    pub fn invert(&self) -> Self {
        Self {
            rotation: self.rotation.conj(),
            center: -self.rotation * self.center,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let center = other.invert().apply(self.center);
        let slope = self.derivative_at(other.apply(center)) * other.derivative_at(center);
        let rotation = slope * one_minus_norm_sqr(center);
        Self {
            rotation: rotation / rotation.norm(),
            center,
        }
    }

    /// Taylor series at the origin, in closed form.
    pub fn to_series(&self, order: usize) -> PowerSeries {
        linear_fractional_series(
            self.rotation,
            -self.rotation * self.center,
            -self.center.conj(),
            Complex64::new(1.0, 0.0),
            order,
        )
        .expect("denominator is 1 at the origin")
    }

    /// Series of `self ∘ s` for a series with values in the disk; needs
    /// `|s(0)| < 1` so that the denominator does not vanish at 0.
    pub fn apply_series(&self, s: &PowerSeries) -> Result<PowerSeries> {
        let num = s.add_constant(-self.center).scale(self.rotation);
        let den = s.scale(-self.center.conj()).add_constant(Complex64::new(1.0, 0.0));
        num.div(&den)
    }
}

/// A conformal density `λ(z) |dz|` on the disk `|z| < radius`.
#[derive(Clone)]
pub struct ConformalMetric {
    density: Arc<dyn Fn(Complex64) -> f64 + Send + Sync>,
    radius: f64,
}

impl std::fmt::Debug for ConformalMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConformalMetric")
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl ConformalMetric {
    pub fn new<F>(radius: f64, density: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        Self {
            density: Arc::new(density),
            radius,
        }
    }

    /// The Poincaré density on the unit disk.
    pub fn hyperbolic() -> Self {
        Self::new(1.0, lambda_hyp)
    }

    /// `c * λ`.
    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.density.clone();
        Self::new(self.radius, move |z| c * inner(z))
    }

    pub fn density(&self, z: Complex64) -> f64 {
        (self.density)(z)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Settings of the mean-value Laplacian estimator.
#[derive(Debug, Clone)]
pub struct LaplacianConfig {
    /// Trapezoid points on each circle.
    pub samples: usize,
    /// Decreasing probe radii.
    pub radii: Vec<f64>,
}

impl Default for LaplacianConfig {
    fn default() -> Self {
        let h = 1e-2;
        Self {
            samples: 64,
            radii: vec![h, h / 2.0, h / 4.0],
        }
    }
}

/// `4 (circle mean - centre value) / r^2` for one radius.
pub fn mean_value_quotient<F>(field: F, t: Complex64, r: f64, samples: usize) -> f64
where
    F: Fn(Complex64) -> f64,
{
    let step = std::f64::consts::TAU / samples as f64;
    let mean = (0..samples)
        .map(|k| field(t + Complex64::from_polar(r, step * k as f64)))
        .sum::<f64>()
        / samples as f64;
    4.0 * (mean - field(t)) / (r * r)
}

/// Mean-value quotients at successive radii, Richardson-extrapolated in
/// pairs (the leading error is `O(r^2)`), with the minimum standing in for
/// the liminf. A single radius yields the raw quotient.
fn laplacian_of<F>(field: F, t: Complex64, radii: &[f64], samples: usize) -> f64
where
    F: Fn(Complex64) -> f64,
{
    let q: Vec<f64> = radii
        .iter()
        .map(|&r| mean_value_quotient(&field, t, r, samples))
        .collect();
    if q.len() == 1 {
        return q[0];
    }
    q.windows(2)
        .zip(radii.windows(2))
        .map(|(qq, rr)| {
            let ratio = (rr[0] / rr[1]).powi(2);
            (ratio * qq[1] - qq[0]) / (ratio - 1.0)
        })
        .fold(f64::INFINITY, f64::min)
}

fn check_radii(m: &ConformalMetric, t: Complex64, radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::Domain("no probe radii".into()));
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain("probe radii must be positive and decreasing".into()));
    }
    if !(t.norm() + radii[0] < m.radius) {
        return Err(Error::Domain(format!(
            "point {}{:+}i is within {} of the boundary of the metric's disk",
            t.re, t.im, radii[0]
        )));
    }
    Ok(())
}

/// Generalized Laplacian of the density of `m` at `t`.
pub fn generalized_laplacian(m: &ConformalMetric, t: Complex64, radii: &[f64]) -> Result<f64> {
    generalized_laplacian_with(m, t, radii, LaplacianConfig::default().samples)
}

pub fn generalized_laplacian_with(
    m: &ConformalMetric,
    t: Complex64,
    radii: &[f64],
    samples: usize,
) -> Result<f64> {
    check_radii(m, t, radii)?;
    Ok(laplacian_of(|z| m.density(z), t, radii, samples))
}

/// Laplacian of `log λ`, the quantity entering the curvature.
pub fn log_laplacian(m: &ConformalMetric, t: Complex64, cfg: &LaplacianConfig) -> Result<f64> {
    check_radii(m, t, &cfg.radii)?;
    Ok(laplacian_of(|z| m.density(z).ln(), t, &cfg.radii, cfg.samples))
}

/// Generalized Gaussian curvature `-Δ log λ / λ^2`.
pub fn curvature(m: &ConformalMetric, t: Complex64) -> Result<f64> {
    curvature_with(m, t, &LaplacianConfig::default())
}

pub fn curvature_with(m: &ConformalMetric, t: Complex64, cfg: &LaplacianConfig) -> Result<f64> {
    let lam = m.density(t);
    if !(lam > 0.0) {
        return Err(Error::SingularPoint { re: t.re, im: t.im });
    }
    Ok(-log_laplacian(m, t, cfg)? / (lam * lam))
}

/// Square grid of `resolution × resolution` points on `[-half_width, half_width]^2`.
pub fn square_grid(half_width: f64, resolution: usize) -> Vec<Complex64> {
    let step = if resolution > 1 {
        2.0 * half_width / (resolution - 1) as f64
    } else {
        0.0
    };
    let mut pts = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let x = -half_width + step * j as f64;
            let y = -half_width + step * i as f64;
            pts.push(Complex64::new(x, y));
        }
    }
    pts
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvaturePoint {
    pub point: [f64; 2],
    pub density: f64,
    pub laplacian_est: f64,
    pub curvature_est: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub bound: f64,
    pub points: Vec<CurvaturePoint>,
    pub pass_fraction: f64,
}

impl CurvatureReport {
    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|p| p.pass)
    }

    pub fn all_fail(&self) -> bool {
        self.points.iter().all(|p| !p.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("point_re,point_im,density,laplacian_est,curvature_est\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.point[0], p.point[1], p.density, p.laplacian_est, p.curvature_est
            );
        }
        out
    }
}

/// Relative slack used by [`check_curvature_bound`].
pub const CURVATURE_BOUND_TOL: f64 = 1e-6;

/// Tests `Δ log λ >= K λ^2` pointwise, with a relative slack of
/// [`CURVATURE_BOUND_TOL`] on the right-hand side.
pub fn check_curvature_bound(
    m: &ConformalMetric,
    bound: f64,
    points: &[Complex64],
) -> Result<CurvatureReport> {
    let cfg = LaplacianConfig::default();
    let mut rows = Vec::with_capacity(points.len());
    for &t in points {
        let lam = m.density(t);
        if !(lam > 0.0) {
            return Err(Error::SingularPoint { re: t.re, im: t.im });
        }
        let lap = log_laplacian(m, t, &cfg)?;
        let rhs = bound * lam * lam;
        let pass = lap >= rhs - CURVATURE_BOUND_TOL * rhs.abs().max(1.0);
        rows.push(CurvaturePoint {
            point: [t.re, t.im],
            density: lam,
            laplacian_est: lap,
            curvature_est: -lap / (lam * lam),
            pass,
        });
    }
    let passed = rows.iter().filter(|p| p.pass).count();
    let pass_fraction = if rows.is_empty() {
        1.0
    } else {
        passed as f64 / rows.len() as f64
    };
    Ok(CurvatureReport {
        bound,
        points: rows,
        pass_fraction,
    })
}
