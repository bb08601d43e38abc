//! Truncated complex power series.
//!
//! A [`PowerSeries`] of order `N` stores the Taylor coefficients
//! `c_0, ..., c_N`; everything above `z^N` is treated as zero. Binary
//! operations insist on equal orders instead of silently padding, so a
//! mismatch always surfaces as [`Error::OrderMismatch`].
//!
//! The formal operations (`mul`, `exp_series`, `log_series`,
//! `reciprocal`, `compose` with an inner series vanishing at the origin)
//! produce exact Taylor coefficients up to rounding: truncation never
//! contaminates lower coefficients. Pointwise evaluation near the unit
//! circle is a different matter, since the discarded tail is felt there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default order for routine work.
pub const DEFAULT_ORDER: usize = 64;
/// Order used for boundary-norm work.
pub const BOUNDARY_ORDER: usize = 400;
/// Lower bound on circle samples for [`PowerSeries::sup_norm_circle`].
pub const MIN_CIRCLE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    /// Optional on input; checked against the coefficient count when given.
    #[serde(default)]
    order: Option<usize>,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<SeriesRepr> for PowerSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        if repr.coeffs.is_empty() {
            return Err(Error::Shape("a series needs at least one coefficient".into()));
        }
        if let Some(order) = repr.order.filter(|&o| o + 1 != repr.coeffs.len()) {
            return Err(Error::Shape(format!(
                "order {order} needs {} coefficients, got {}",
                order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        Ok(Self { coeffs })
    }
}

impl From<PowerSeries> for SeriesRepr {
    fn from(s: PowerSeries) -> Self {
        SeriesRepr {
            order: Some(s.order()),
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// Cauchy product of two coefficient slices, truncated to `len` terms.
///
/// This is the only multiplication kernel; everything quadratic goes
/// through it.
fn convolve(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

impl PowerSeries {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Shape("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// Builds a series of the given order, zero-padding or truncating `coeffs`.
    pub fn with_order(coeffs: &[Complex64], order: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Self { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Self::with_order(&[], order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        Self::with_order(&[c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// The monomial `z^k` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// The identity series `z`.
    pub fn variable(order: usize) -> Self {
        Self::monomial(1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Adds a constant to the zeroth coefficient.
    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: convolve(&self.coeffs, &other.coeffs, self.coeffs.len()),
        })
    }

    /// Coefficients `c_k t^k`, i.e. the series of `z -> a(t z)`.
    pub fn dilate(&self, t: Complex64) -> Self {
        let mut power = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * power;
                power *= t;
                v
            })
            .collect();
        Self { coeffs }
    }

    /// Taylor expansion of `outer(inner(z))` by Horner's scheme on series.
    ///
    /// Exact (up to rounding) when `inner(0) = 0`. Otherwise the result is
    /// the composition of the truncated polynomial `outer`, which is only
    /// meaningful when `inner(0)` sits well inside outer's disk of
    /// convergence.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        let n = self.order();
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Series exponential from the recurrence `E' = a' E`.
    pub fn exp_series(&self) -> Self {
        let n = self.order();
        let a = &self.coeffs;
        let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
        e[0] = a[0].exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += a[j] * (j as f64) * e[k - j];
            }
            e[k] = acc / (k as f64);
        }
        Self { coeffs: e }
    }

    /// Principal-branch logarithm.
    ///
    /// Fails when `c_0 = 0` or when `c_0` lies on the cut `(-inf, 0]`;
    /// callers rotate by a unimodular constant first in that case.
    pub fn log_series(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(Error::Domain("log of a series with zero constant term".into()));
        }
        if c0.im == 0.0 && c0.re < 0.0 {
            return Err(Error::BranchCut { re: c0.re, im: c0.im });
        }
        self.log_series_with_base(c0.ln())
    }

    /// Logarithm whose constant term is the caller-chosen value `base`
    /// (any logarithm of `c_0`). Higher coefficients do not depend on the
    /// branch.
    pub fn log_series_with_base(&self, base: Complex64) -> Result<Self> {
        let n = self.order();
        let a = &self.coeffs;
        let c0 = a[0];
        if c0.norm() == 0.0 {
            return Err(Error::Domain("log of a series with zero constant term".into()));
        }
        let mut l = vec![Complex64::new(0.0, 0.0); n + 1];
        l[0] = base;
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..k {
                acc += l[j] * (j as f64) * a[k - j];
            }
            l[k] = (a[k] - acc / (k as f64)) / c0;
        }
        Ok(Self { coeffs: l })
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let n = self.order();
        let a = &self.coeffs;
        if a[0].norm() == 0.0 {
            return Err(Error::Domain("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = a[0].inv();
        let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
        r[0] = inv0;
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += a[j] * r[k - j];
            }
            r[k] = -acc * inv0;
        }
        Ok(Self { coeffs: r })
    }

    /// `self / other` as formal series.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.reciprocal()?)
    }

    /// Termwise derivative. The order is kept; the top coefficient becomes 0.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut d = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            d[k - 1] = self.coeffs[k] * (k as f64);
        }
        Self { coeffs: d }
    }

    /// Horner evaluation from the highest coefficient.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Values on `K` equally spaced points of `|z| = r`, starting at `θ = 0`.
    pub fn circle_values(&self, r: f64, samples: usize) -> Vec<Complex64> {
        let step = std::f64::consts::TAU / samples as f64;
        (0..samples)
            .map(|k| self.evaluate(Complex64::from_polar(r, step * k as f64)))
            .collect()
    }

    /// Default sample count `max(4096, 8N)`.
    pub fn default_circle_samples(&self) -> usize {
        MIN_CIRCLE_SAMPLES.max(8 * self.order())
    }

    /// Sampled maximum of `|a|` on `|z| = r` with the default sample count.
    /// A lower bound on the true sup that converges as samples grow.
    pub fn sup_norm_circle(&self, r: f64) -> f64 {
        self.sup_norm_circle_with(r, self.default_circle_samples())
    }

    pub fn sup_norm_circle_with(&self, r: f64, samples: usize) -> f64 {
        self.circle_values(r, samples)
            .into_iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficientwise distance; orders must agree.
    pub fn max_coeff_distance(&self, other: &Self) -> Result<f64> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Same series re-truncated or zero-padded to `order`.
    pub fn resize(&self, order: usize) -> Self {
        Self::with_order(&self.coeffs, order)
    }
}

/// Taylor series of the linear fractional map `(alpha z + beta) / (gamma z + delta)`
/// in closed form; requires `delta != 0`.
pub fn linear_fractional_series(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
    order: usize,
) -> Result<PowerSeries> {
    if delta.norm() == 0.0 {
        return Err(Error::Domain("linear fractional map has a pole at the origin".into()));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = beta / delta;
    let lead = alpha / delta - beta * gamma / (delta * delta);
    let ratio = -gamma / delta;
    let mut p = lead;
    for c in coeffs.iter_mut().skip(1) {
        *c = p;
        p *= ratio;
    }
    Ok(PowerSeries { coeffs })
}
