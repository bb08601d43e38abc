//! Finite Herglotz measures and the functions they realize.
//!
//! A measure with atoms `(t_k, m_k)` and a rotation `β` realizes
//! `f(z) = exp(-iβ - Σ m_k (e^{it_k} + z)/(e^{it_k} - z))`, which is zero-free
//! with modulus below 1. Its logarithm has coefficients
//! `P_0 = -iβ - Σ m_k` and `P_j = -2 Σ m_k e^{-ijt_k}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonvan::{certify_within, NonvanishingFunction, DEFAULT_CERT_RADIUS};
use crate::series::PowerSeries;

/// Extra coefficients kept beyond `n` when only `c_n` is needed.
pub const OBJECTIVE_PADDING: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct HerglotzMeasure {
    beta: f64,
    angles: Vec<f64>,
    masses: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    #[serde(default)]
    beta: f64,
    atoms: Vec<[f64; 2]>,
}

impl TryFrom<MeasureRepr> for HerglotzMeasure {
    type Error = Error;

    fn try_from(r: MeasureRepr) -> Result<Self> {
        let (angles, masses) = r.atoms.iter().map(|a| (a[0], a[1])).unzip();
        HerglotzMeasure::new(angles, masses, r.beta)
    }
}

impl From<HerglotzMeasure> for MeasureRepr {
    fn from(m: HerglotzMeasure) -> Self {
        MeasureRepr {
            beta: m.beta,
            atoms: m.angles.iter().zip(&m.masses).map(|(&t, &w)| [t, w]).collect(),
        }
    }
}

impl HerglotzMeasure {
    /// Angles are reduced to `[0, 2π)` and the atoms sorted by angle.
    pub fn new(angles: Vec<f64>, masses: Vec<f64>, beta: f64) -> Result<Self> {
        if angles.len() != masses.len() {
            return Err(Error::Shape(format!(
                "{} angles but {} masses",
                angles.len(),
                masses.len()
            )));
        }
        if !beta.is_finite() || angles.iter().any(|t| !t.is_finite()) {
            return Err(Error::Domain("non-finite angle or rotation".into()));
        }
        if masses.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::Domain("masses must be finite and non-negative".into()));
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Degenerate("measure has zero total mass".into()));
        }
        let mut atoms: Vec<(f64, f64)> = angles
            .into_iter()
            .map(|t| t.rem_euclid(TAU))
            .map(|t| if t >= TAU { 0.0 } else { t })
            .zip(masses)
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (angles, masses) = atoms.into_iter().unzip();
        Ok(Self { beta, angles, masses })
    }

    /// The measure of `κ₀(e^{iθ} z^n)`-type extremals: `n` equal atoms
    /// `1/n` at `(2πk - θ)/n`. Here only the uniform spacing is built.
    pub fn uniform(n: usize, phase: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("uniform measure needs n >= 1".into()));
        }
        let angles = (0..n).map(|k| phase + TAU * k as f64 / n as f64).collect();
        Self::new(angles, vec![1.0 / n as f64; n], beta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles.iter().copied().zip(self.masses.iter().copied())
    }

    /// Coefficients of `log f`.
    pub fn log_series(&self, order: usize) -> PowerSeries {
        PowerSeries::from_coeffs(log_coefficients(&self.angles, &self.masses, self.beta, order))
            .expect("non-empty coefficient vector")
    }

    /// `exp` of [`Self::log_series`], without certification.
    pub fn realize_series(&self, order: usize) -> PowerSeries {
        self.log_series(order).exp_series()
    }

    /// The realized function, certified at the largest ladder radius that works.
    pub fn realize(&self, order: usize) -> Result<NonvanishingFunction> {
        certify_within(&self.realize_series(order), DEFAULT_CERT_RADIUS)
    }

    /// `|c_n|` computed at order `n + OBJECTIVE_PADDING`.
    pub fn coefficient_objective(&self, n: usize) -> f64 {
        coefficient_and_gradient(&self.angles, &self.masses, self.beta, n).0.norm()
    }

    /// Gradient of `|c_n|^2` in the atom angles, masses and `β`.
    pub fn objective_gradient(&self, n: usize) -> HerglotzGradient {
        let (cn, dm, dt) = coefficient_and_gradient(&self.angles, &self.masses, self.beta, n);
        let d = |dc: Complex64| 2.0 * (cn.conj() * dc).re;
        HerglotzGradient {
            angles: dt.into_iter().map(d).collect(),
            masses: dm.into_iter().map(d).collect(),
            // ∂c_n/∂β = -i c_n, so |c_n|^2 does not depend on β
            beta: d(Complex64::new(0.0, -1.0) * cn),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HerglotzGradient {
    pub angles: Vec<f64>,
    pub masses: Vec<f64>,
    pub beta: f64,
}

pub(crate) fn log_coefficients(angles: &[f64], masses: &[f64], beta: f64, order: usize) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(0.0, 0.0); order + 1];
    p[0] = Complex64::new(-masses.iter().sum::<f64>(), -beta);
    for (&t, &m) in angles.iter().zip(masses) {
        let step = Complex64::from_polar(1.0, -t);
        let mut w = step;
        for pj in p.iter_mut().skip(1) {
            *pj -= 2.0 * m * w;
            w *= step;
        }
    }
    p
}

/// `c_n` of the realized function together with `∂c_n/∂m_k` and `∂c_n/∂t_k`.
///
/// With `P = log f`, `∂c_n/∂P_j = c_{n-j}`, which gives
/// `∂c_n/∂m_k = -c_n - 2 Σ_{j=1}^n c_{n-j} e^{-ijt_k}` and
/// `∂c_n/∂t_k = 2i m_k Σ_{j=1}^n j c_{n-j} e^{-ijt_k}`.
pub(crate) fn coefficient_and_gradient(
    angles: &[f64],
    masses: &[f64],
    beta: f64,
    n: usize,
) -> (Complex64, Vec<Complex64>, Vec<Complex64>) {
    let order = n + OBJECTIVE_PADDING;
    let p = log_coefficients(angles, masses, beta, order);
    let c = PowerSeries::from_coeffs(p)
        .expect("non-empty coefficient vector")
        .exp_series();
    let cs = c.coeffs();
    let cn = cs[n];
    let mut dm = Vec::with_capacity(angles.len());
    let mut dt = Vec::with_capacity(angles.len());
    for (&t, &m) in angles.iter().zip(masses) {
        let step = Complex64::from_polar(1.0, -t);
        let mut w = step;
        let mut s0 = Complex64::new(0.0, 0.0);
        let mut s1 = Complex64::new(0.0, 0.0);
        for j in 1..=n {
            let term = cs[n - j] * w;
            s0 += term;
            s1 += j as f64 * term;
            w *= step;
        }
        dm.push(-cn - 2.0 * s0);
        dt.push(Complex64::new(0.0, 2.0 * m) * s1);
    }
    (cn, dm, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonvan::kappa_series;
    use crate::{INV_E, TWO_OVER_E};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn single_atom_at_pi_gives_kappa() {
        let mu = HerglotzMeasure::new(vec![PI], vec![1.0], 0.0).unwrap();
        let s = mu.realize_series(64);
        assert!(s.max_coeff_distance(&kappa_series(1, 64).unwrap()).unwrap() < 1e-13);
        assert_abs_diff_eq!(mu.coefficient_objective(1), TWO_OVER_E, epsilon = 1e-14);
        assert_abs_diff_eq!(s.coeff(0).re, INV_E, epsilon = 1e-15);
    }

    #[test]
    fn uniform_measures_give_kappa_n() {
        for n in 2..=5 {
            // atoms at (2k+1)π/n realize κ₀(z^n)
            let mu = HerglotzMeasure::uniform(n, PI / n as f64, 0.0).unwrap();
            let s = mu.realize_series(40);
            assert!(s.max_coeff_distance(&kappa_series(n, 40).unwrap()).unwrap() < 1e-12);
            assert_abs_diff_eq!(mu.coefficient_objective(n), TWO_OVER_E, epsilon = 1e-13);
        }
    }

    #[test]
    fn measure_validation() {
        assert!(matches!(
            HerglotzMeasure::new(vec![0.0], vec![0.0], 0.0),
            Err(Error::Degenerate(_))
        ));
        assert!(HerglotzMeasure::new(vec![0.0], vec![-1.0], 0.0).is_err());
        assert!(HerglotzMeasure::new(vec![0.0, 1.0], vec![1.0], 0.0).is_err());
        let mu = HerglotzMeasure::new(vec![7.0, -1.0], vec![0.2, 0.3], 0.5).unwrap();
        assert!(mu.angles().windows(2).all(|w| w[0] <= w[1]));
        assert!(mu.angles().iter().all(|&t| (0.0..TAU).contains(&t)));
        assert_abs_diff_eq!(mu.total_mass(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let mu = HerglotzMeasure::new(vec![0.5, 2.0], vec![0.3, 0.7], -0.2).unwrap();
        let text = serde_json::to_string(&mu).unwrap();
        assert!(text.contains("\"atoms\""));
        let back: HerglotzMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, mu);
        let bad = r#"{"beta":0,"atoms":[[0.0,0.0]]}"#;
        assert!(serde_json::from_str::<HerglotzMeasure>(bad).is_err());
    }

    #[test]
    fn realized_functions_are_members() {
        let mu = HerglotzMeasure::new(vec![0.3, 2.5, 4.0], vec![0.2, 0.1, 0.25], 1.1).unwrap();
        let f = mu.realize(64).unwrap();
        assert!(f.certified_radius() >= 0.9);
        assert!(f.boundary_norm() < 1.0);
        let log = mu.log_series(64);
        assert_abs_diff_eq!(log.coeff(0).re, -0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(log.coeff(0).im, -1.1, epsilon = 1e-15);
    }

    fn finite_difference(mu: &HerglotzMeasure, n: usize) -> (Vec<f64>, Vec<f64>) {
        let h = 1e-6;
        let obj = |a: &[f64], m: &[f64]| {
            coefficient_and_gradient(a, m, mu.beta(), n).0.norm_sqr()
        };
        let a = mu.angles().to_vec();
        let m = mu.masses().to_vec();
        let mut da = Vec::new();
        let mut dm = Vec::new();
        for k in 0..a.len() {
            let (mut ap, mut am) = (a.clone(), a.clone());
            ap[k] += h;
            am[k] -= h;
            da.push((obj(&ap, &m) - obj(&am, &m)) / (2.0 * h));
            let (mut mp, mut mm) = (m.clone(), m.clone());
            mp[k] += h;
            mm[k] -= h;
            dm.push((obj(&a, &mp) - obj(&a, &mm)) / (2.0 * h));
        }
        (da, dm)
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mu = HerglotzMeasure::new(vec![0.4, 1.9, 3.3, 5.0], vec![0.3, 0.15, 0.4, 0.2], 0.7).unwrap();
        for n in 1..=5 {
            let g = mu.objective_gradient(n);
            let (da, dm) = finite_difference(&mu, n);
            for k in 0..4 {
                assert_abs_diff_eq!(g.angles[k], da[k], epsilon = 1e-8);
                assert_abs_diff_eq!(g.masses[k], dm[k], epsilon = 1e-8);
            }
            assert_abs_diff_eq!(g.beta, 0.0, epsilon = 1e-15);
        }
    }
}
