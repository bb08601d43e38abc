//! Zero-free functions in the unit ball of `H^∞` and their lifts through
//! the universal covering map `κ₀(z) = exp((z - 1)/(z + 1))` of the
//! punctured disk.
//!
//! Everything here works on truncated series. Membership is certified on
//! a circle `|z| = r`: the argument principle rules out zeros inside, a
//! floor on the sampled modulus guards against near-zeros, and the sampled
//! sup norm must stay below 1. A certificate at radius `r` speaks about
//! the polynomial on `|z| <= r`, i.e. about its dilation `p(r z)`.
//!
//! The cover of `f` is obtained from `F = σ⁻¹(log f)` with
//! `σ(w) = (w - 1)/(w + 1)`, then normalized by a disk automorphism so
//! that it fixes the origin. Deck transformations of `κ₀` shift the
//! logarithm by `2πik`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::diskgeom::{lambda_hyp, MoebiusMap};
use crate::error::{Error, Result};
use crate::series::{linear_fractional_series, PowerSeries};
use crate::TWO_OVER_E;

/// Default certification radius.
pub const DEFAULT_CERT_RADIUS: f64 = 0.999;
/// Smallest sampled modulus accepted as "zero-free".
pub const MIN_MODULUS_FLOOR: f64 = 1e-12;
/// Circle samples used for certification (raised to `8N` for long series).
pub const CERT_SAMPLES: usize = 4096;
/// Radii tried, largest first, when a constructor needs *some* certificate.
pub const RADIUS_LADDER: [f64; 12] = [
    0.999, 0.99, 0.98, 0.95, 0.92, 0.9, 0.85, 0.8, 0.75, 0.7, 0.6, 0.5,
];
/// Default deck range `k ∈ [-3, 3]`.
pub const DEFAULT_DECK_RANGE: usize = 3;
/// Slack on the Green-domination comparison (absolute, in log units).
pub const GREEN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonvanishingFunction {
    series: PowerSeries,
    certified_radius: f64,
    boundary_norm: f64,
    min_modulus: f64,
}

impl NonvanishingFunction {
    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn certified_radius(&self) -> f64 {
        self.certified_radius
    }

    /// Sampled sup norm on the certified circle.
    pub fn boundary_norm(&self) -> f64 {
        self.boundary_norm
    }

    /// Sampled minimum modulus on the certified circle.
    pub fn min_modulus(&self) -> f64 {
        self.min_modulus
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.series.coeff(k)
    }

    pub fn into_series(self) -> PowerSeries {
        self.series
    }
}

/// Winding number of the sampled closed curve around the origin.
pub fn winding_number(values: &[Complex64]) -> i64 {
    let n = values.len();
    let total: f64 = (0..n)
        .map(|k| (values[(k + 1) % n] / values[k]).arg())
        .sum();
    (total / TAU).round() as i64
}

/// Certifies that `s` is zero-free with modulus below 1 on `|z| <= r`.
pub fn certify_membership(s: &PowerSeries, r: f64) -> Result<NonvanishingFunction> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("certification radius {r} outside (0, 1]")));
    }
    if s.coeff(0).norm() == 0.0 {
        return Err(Error::Degenerate("constant term vanishes".into()));
    }
    let samples = CERT_SAMPLES.max(8 * s.order());
    let values = s.circle_values(r, samples);
    let (min_modulus, sup) = values
        .iter()
        .map(|v| v.norm())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
    if !(min_modulus > MIN_MODULUS_FLOOR) {
        return Err(Error::NotAMember {
            radius: r,
            winding: 0,
            min_modulus,
        });
    }
    let winding = winding_number(&values);
    if winding != 0 {
        return Err(Error::NotAMember {
            radius: r,
            winding,
            min_modulus,
        });
    }
    if !(sup < 1.0) {
        return Err(Error::OutOfBall { radius: r, sup_norm: sup });
    }
    Ok(NonvanishingFunction {
        series: s.clone(),
        certified_radius: r,
        boundary_norm: sup,
        min_modulus,
    })
}

/// Certificate at the largest radius `<= r_max` taken from `r_max` itself
/// and then [`RADIUS_LADDER`]. Fails with the error met at the smallest radius.
pub fn certify_within(s: &PowerSeries, r_max: f64) -> Result<NonvanishingFunction> {
    let mut last = match certify_membership(s, r_max) {
        Ok(f) => return Ok(f),
        Err(e @ Error::Degenerate(_)) | Err(e @ Error::Domain(_)) => return Err(e),
        Err(e) => e,
    };
    for &r in RADIUS_LADDER.iter().filter(|&&r| r < r_max) {
        match certify_membership(s, r) {
            Ok(f) => return Ok(f),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `κ₀(z^n)` to the given order.
pub fn kappa(n: usize, order: usize) -> Result<NonvanishingFunction> {
    certify_within(&kappa_series(n, order)?, DEFAULT_CERT_RADIUS)
}

/// Series of `κ₀(z^n)` without a certificate.
pub fn kappa_series(n: usize, order: usize) -> Result<PowerSeries> {
    if n == 0 {
        return Err(Error::Domain("kappa needs n >= 1".into()));
    }
    let mut log = vec![Complex64::new(0.0, 0.0); order + 1];
    log[0] = Complex64::new(-1.0, 0.0);
    let mut sign = 2.0;
    let mut k = n;
    while k <= order {
        log[k] = Complex64::new(sign, 0.0);
        sign = -sign;
        k += n;
    }
    Ok(PowerSeries::from_coeffs(log)?.exp_series())
}

/// `log f` on the principal branch; maps into the left half-plane.
pub fn log_lift(f: &NonvanishingFunction) -> Result<PowerSeries> {
    f.series.log_series()
}

/// `exp(t log f1 + (1 - t) log f2)`, re-certified.
pub fn convexity_witness(
    f1: &NonvanishingFunction,
    f2: &NonvanishingFunction,
    t: f64,
) -> Result<NonvanishingFunction> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("interpolation parameter {t} outside [0, 1]")));
    }
    let l1 = log_lift(f1)?;
    let l2 = log_lift(f2)?;
    let mixed = l1
        .scale(Complex64::new(t, 0.0))
        .add(&l2.scale(Complex64::new(1.0 - t, 0.0)))?;
    certify_within(
        &mixed.exp_series(),
        f1.certified_radius.min(f2.certified_radius),
    )
}

/// `f_t(z) = f(t z)` for `|t| <= 1`.
///
/// The dilation stays zero-free and below 1 on `|z| <= r/|t|`, so the
/// certificate is re-issued at that (capped) radius.
pub fn homotopy(f: &NonvanishingFunction, t: Complex64) -> Result<NonvanishingFunction> {
    let mag = t.norm();
    if !(mag <= 1.0) {
        return Err(Error::Domain(format!("homotopy parameter |t| = {mag} exceeds 1")));
    }
    let series = f.series.dilate(t);
    let radius = if mag == 0.0 {
        1.0
    } else {
        (f.certified_radius / mag).min(1.0)
    };
    certify_membership(&series, radius).or_else(|_| certify_membership(&series, f.certified_radius))
}

fn check_index(f: &NonvanishingFunction, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("coefficient index must be >= 1".into()));
    }
    if n > f.order() {
        return Err(Error::Shape(format!(
            "index {n} beyond truncation order {}",
            f.order()
        )));
    }
    Ok(())
}

/// `J(f) = |c_n / M_n|^{1/n}`.
pub fn functional_j(f: &NonvanishingFunction, n: usize, m_n: f64) -> Result<f64> {
    check_index(f, n)?;
    if !(m_n > 0.0) {
        return Err(Error::Domain(format!("normalization M_n = {m_n} must be positive")));
    }
    Ok((f.coeff(n).norm() / m_n).powf(1.0 / n as f64))
}

/// `f = (γ*κ₀) ∘ cover`, with `γ*κ₀ = κ₀ ∘ γ` and `cover(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverFactorization {
    pub cover: PowerSeries,
    pub moebius: MoebiusMap,
    pub deck_index: i64,
}

impl CoverFactorization {
    /// Taylor series of `κ₀ ∘ γ`, as `exp` of the linear fractional map `σ ∘ γ`.
    pub fn pullback_series(&self) -> PowerSeries {
        let order = self.cover.order();
        let rot = self.moebius.rotation();
        let c = self.moebius.center();
        let one = Complex64::new(1.0, 0.0);
        // σ(γ(z)) = ((rot + c̄) z - (rot c + 1)) / ((rot - c̄) z + (1 - rot c))
        linear_fractional_series(
            rot + c.conj(),
            -(rot * c + one),
            rot - c.conj(),
            one - rot * c,
            order,
        )
        .expect("|rot c| < 1 keeps the constant term of the denominator nonzero")
        .exp_series()
    }

    /// `(γ*κ₀) ∘ cover`, which should reproduce the factored function.
    pub fn reconstruct(&self) -> Result<PowerSeries> {
        self.pullback_series().compose(&self.cover)
    }

    /// `|(γ*κ₀)'(0)|`.
    pub fn pullback_slope(&self) -> f64 {
        self.pullback_series().coeff(1).norm()
    }
}

/// Factorization through the deck representative `log f + 2πik`, with
/// `Im log c₀ ∈ (-π, π]` for `k = 0`.
pub fn lift_cover_deck(f: &NonvanishingFunction, k: i64) -> Result<CoverFactorization> {
    let c0 = f.coeff(0);
    let base = c0.ln() + Complex64::new(0.0, TAU * k as f64);
    let log = f.series.log_series_with_base(base)?;
    let one = PowerSeries::one(log.order());
    // F = σ⁻¹(log f) = (1 + log f)/(1 - log f); Re log f < 0 keeps |F| < 1.
    let lifted = one.add(&log)?.div(&one.sub(&log)?)?;
    let gamma = MoebiusMap::sending_origin_to(lifted.coeff(0))?;
    let cover = gamma.invert().apply_series(&lifted)?;
    Ok(CoverFactorization {
        cover,
        moebius: gamma,
        deck_index: k,
    })
}

pub fn lift_cover(f: &NonvanishingFunction) -> Result<CoverFactorization> {
    lift_cover_deck(f, 0)
}

/// The `2 k_max + 1` factorizations for `k = -k_max ..= k_max`, in that order.
pub fn enumerate_covers(f: &NonvanishingFunction, k_max: usize) -> Result<Vec<CoverFactorization>> {
    let k_max = k_max as i64;
    (-k_max..=k_max).map(|k| lift_cover_deck(f, k)).collect()
}

/// Distance from `ĉ₀ = cover(0)` to `cover` in the unit ball of `H^∞`:
/// `atanh ‖(f̂ - ĉ₀)/(1 - conj(ĉ₀) f̂)‖_∞`, infinite on boundary contact.
pub fn ball_distance(cover: &PowerSeries) -> Result<f64> {
    let c0 = cover.coeff(0);
    let g = if c0.norm() == 0.0 {
        cover.clone()
    } else {
        MoebiusMap::new(Complex64::new(1.0, 0.0), c0)?.apply_series(cover)?
    };
    let norm = g.sup_norm_circle(1.0);
    Ok(if norm >= 1.0 { f64::INFINITY } else { norm.atanh() })
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub distance: f64,
    pub best_deck: i64,
    pub per_deck: Vec<(i64, f64)>,
    /// Whether the minimizing deck index lies strictly inside the range
    /// (or the minimum is shared by the whole range).
    pub interior_minimum: bool,
}

/// Kobayashi-distance upper bound `d(f, c₀)` through the enumerated covers.
pub fn distance_report(f: &NonvanishingFunction, k_max: usize) -> Result<DistanceReport> {
    let mut per_deck = Vec::with_capacity(2 * k_max + 1);
    for cov in enumerate_covers(f, k_max)? {
        per_deck.push((cov.deck_index, ball_distance(&cov.cover)?));
    }
    let distance = per_deck.iter().map(|d| d.1).fold(f64::INFINITY, f64::min);
    // covers tie up to rounding; prefer the deck index closest to 0
    let best_deck = per_deck
        .iter()
        .filter(|d| d.1 <= distance + 1e-12 * (1.0 + distance))
        .min_by_key(|d| d.0.abs())
        .map_or(0, |d| d.0);
    let k_max = k_max as i64;
    let spread = per_deck.iter().map(|d| d.1).fold(f64::NEG_INFINITY, f64::max) - distance;
    let interior_minimum = best_deck.abs() < k_max || k_max == 0 || spread <= 1e-9 * (1.0 + distance);
    Ok(DistanceReport {
        distance,
        best_deck,
        per_deck,
        interior_minimum,
    })
}

pub fn distance_to_constant(f: &NonvanishingFunction, k_max: usize) -> Result<f64> {
    Ok(distance_report(f, k_max)?.distance)
}

/// Tolerance on vanishing lower coefficients in [`asymptotic_slope`].
pub const SLOPE_SHAPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub error_estimate: f64,
    /// `(t, d(f_t, c₀) / t^m)` for each grid point.
    pub ratios: Vec<(f64, f64)>,
}

/// Limit of `d(f_t, c₀) / t^m` as `t -> 0`, by polynomial (Neville)
/// extrapolation over `t_grid`.
pub fn asymptotic_slope_report(
    f: &NonvanishingFunction,
    m: usize,
    t_grid: &[f64],
) -> Result<SlopeEstimate> {
    check_index(f, m)?;
    for k in 1..m {
        if f.coeff(k).norm() > SLOPE_SHAPE_TOL {
            return Err(Error::Shape(format!(
                "coefficient c_{k} = {:e} does not vanish",
                f.coeff(k).norm()
            )));
        }
    }
    if t_grid.len() < 2 {
        return Err(Error::Shape("slope extrapolation needs at least two grid points".into()));
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t < 1.0)) || t_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Shape("t grid must decrease inside (0, 1)".into()));
    }
    let mut ratios = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let ft = homotopy(f, Complex64::new(t, 0.0))?;
        let d = distance_to_constant(&ft, DEFAULT_DECK_RANGE)?;
        ratios.push((t, d / t.powi(m as i32)));
    }
    let (slope, error_estimate) = neville_at_zero(&ratios);
    Ok(SlopeEstimate {
        slope,
        error_estimate,
        ratios,
    })
}

pub fn asymptotic_slope(f: &NonvanishingFunction, m: usize, t_grid: &[f64]) -> Result<f64> {
    Ok(asymptotic_slope_report(f, m, t_grid)?.slope)
}

/// Value at 0 of the interpolating polynomial through `points`, and the
/// change contributed by the last tableau level.
fn neville_at_zero(points: &[(f64, f64)]) -> (f64, f64) {
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut p: Vec<f64> = points.iter().map(|p| p.1).collect();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    // p[1] still holds the estimate from the last n - 1 points
    let err = if n >= 2 { (p[0] - p[1]).abs() } else { f64::INFINITY };
    (p[0], err)
}

/// Closed-form slope `min_k |ĉ_m|` read off the covers.
pub fn cover_slope(f: &NonvanishingFunction, m: usize, k_max: usize) -> Result<f64> {
    check_index(f, m)?;
    Ok(enumerate_covers(f, k_max)?
        .iter()
        .map(|c| c.cover.coeff(m).norm())
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenVerdict {
    pub function_id: String,
    pub n: usize,
    #[serde(rename = "J")]
    pub j: f64,
    pub distance_upper: f64,
    pub green_upper: f64,
    pub margin: f64,
    pub pass: bool,
    #[serde(skip)]
    pub vacuous: bool,
}

/// Compares `log(|c_n|/M_n) = n log J(f)` with `log tanh d`, where `d`
/// is the cover-based distance upper bound, so `log tanh d` bounds the
/// Green function of the pole `c₀` from above. `margin` is the slack
/// `log tanh d - n log J`; functions with `c_n = 0` pass vacuously.
pub fn green_domination_check(f: &NonvanishingFunction, n: usize, m_n: f64) -> Result<GreenVerdict> {
    let distance_upper = distance_to_constant(f, DEFAULT_DECK_RANGE)?;
    green_verdict_with_distance(f, n, m_n, distance_upper)
}

/// [`green_domination_check`] with a precomputed distance upper bound,
/// for checking several indices against one function.
pub fn green_verdict_with_distance(
    f: &NonvanishingFunction,
    n: usize,
    m_n: f64,
    distance_upper: f64,
) -> Result<GreenVerdict> {
    let j = functional_j(f, n, m_n)?;
    let green_upper = if distance_upper.is_infinite() {
        0.0
    } else {
        distance_upper.tanh().ln()
    };
    let (margin, vacuous) = if j == 0.0 {
        (f64::INFINITY, true)
    } else {
        (green_upper - n as f64 * j.ln(), false)
    };
    Ok(GreenVerdict {
        function_id: String::new(),
        n,
        j,
        distance_upper,
        green_upper,
        margin,
        pass: vacuous || margin >= -GREEN_TOL,
        vacuous,
    })
}

/// The homotopy disk `ζ -> f_ζ` carrying the metric pulled back from the
/// Poincaré density through a branch `g` with `|g| = J ∘ h`.
///
/// Along this disk `c_n(f_ζ) = c_n ζ^n`, so the branch is linear:
/// `g(ζ) = (c_n / M_n)^{1/n} ζ`.
#[derive(Debug, Clone)]
pub struct HomotopyDisk {
    slope: Complex64,
}

impl HomotopyDisk {
    pub fn new(f: &NonvanishingFunction, n: usize, m_n: f64) -> Result<Self> {
        functional_j(f, n, m_n)?;
        let ratio = f.coeff(n) / m_n;
        let slope = if ratio.norm() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            ratio.powf(1.0 / n as f64)
        };
        Ok(Self { slope })
    }

    pub fn branch(&self, zeta: Complex64) -> Complex64 {
        self.slope * zeta
    }

    /// `λ_J(ζ) = |g'(ζ)| / (1 - |g(ζ)|^2)`.
    pub fn lambda_j(&self, zeta: Complex64) -> f64 {
        let g = self.branch(zeta);
        self.slope.norm() / (1.0 - g.norm_sqr())
    }

    /// Hyperbolic length of `[0, r]` under `λ_J`, by composite Simpson.
    pub fn radial_length(&self, r: f64, intervals: usize) -> f64 {
        let n = intervals.max(2) + intervals % 2;
        let h = r / n as f64;
        let f = |t: f64| self.lambda_j(Complex64::new(t, 0.0));
        let mut acc = f(0.0) + f(r);
        for i in 1..n {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricRow {
    pub zeta: [f64; 2],
    pub lambda_j: f64,
    pub lambda_hyp: f64,
    pub dominated: bool,
}

/// `λ_J` against `λ_hyp` on the given points of the homotopy disk.
pub fn metric_scan(
    f: &NonvanishingFunction,
    n: usize,
    m_n: f64,
    points: &[Complex64],
) -> Result<Vec<MetricRow>> {
    let disk = HomotopyDisk::new(f, n, m_n)?;
    Ok(points
        .iter()
        .map(|&z| {
            let lj = disk.lambda_j(z);
            let lh = lambda_hyp(z);
            MetricRow {
                zeta: [z.re, z.im],
                lambda_j: lj,
                lambda_hyp: lh,
                dominated: lj <= lh * (1.0 + 1e-12),
            }
        })
        .collect())
}

pub fn metric_scan_csv(rows: &[MetricRow]) -> String {
    let mut out = String::from("zeta_re,zeta_im,lambda_j,lambda_hyp,dominated\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.zeta[0], r.zeta[1], r.lambda_j, r.lambda_hyp, r.dominated
        );
    }
    out
}

/// Points `r e^{iθ}` on a polar grid strictly inside the unit disk.
pub fn polar_grid(max_radius: f64, rings: usize, spokes: usize) -> Vec<Complex64> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=rings {
        let r = max_radius * i as f64 / rings as f64;
        for j in 0..spokes {
            pts.push(Complex64::from_polar(r, TAU * j as f64 / spokes as f64 + PI / spokes as f64));
        }
    }
    pts
}

/// `|c₁|` bound from the factorization: `|(γ*κ₀)'(0)| · |f̂'(0)|`.
pub fn first_coefficient_bound(f: &NonvanishingFunction) -> Result<(f64, f64)> {
    let cov = lift_cover(f)?;
    Ok((cov.pullback_slope(), cov.cover.coeff(1).norm()))
}

/// Default normalization `M_n = 2/e`.
pub fn default_m_n() -> f64 {
    TWO_OVER_E
}
