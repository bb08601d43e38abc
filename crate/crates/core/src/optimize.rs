//! Multistart search for `M_n = sup |c_n(f)|` over atomic Herglotz measures.
//!
//! Each restart draws a random measure and climbs `|c_n|^2` in the
//! unconstrained variables `(t_k, s_k)` with `m_k = s_k^2`: quasi-Newton
//! (BFGS) steps with a backtracking line search, followed by a Nelder-Mead
//! polish. Restarts run in parallel and are merged by index.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::herglotz::{coefficient_and_gradient, HerglotzMeasure};
use crate::nonvan::kappa_series;
use crate::sampling::{derive_seed, rng_for};
use crate::series::BOUNDARY_ORDER;
use crate::TWO_OVER_E;

/// Angle tolerance of the extremal-shape diagnostic, radians.
pub const SHAPE_ANGLE_TOL: f64 = 0.05;
/// Mass tolerance of the extremal-shape diagnostic.
pub const SHAPE_MASS_TOL: f64 = 0.02;
/// Atoms lighter than this are ignored by the shape diagnostic.
pub const NEGLIGIBLE_MASS: f64 = 1e-3;
/// Extra orders kept beyond `n` when reporting the best function.
pub const REPORT_PADDING: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub restarts: usize,
    pub atom_count: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl OptimizeConfig {
    pub fn for_index(n: usize) -> Self {
        Self {
            restarts: if n <= 3 { 64 } else { 256 },
            atom_count: (n + 1).max(4),
            seed: 0,
            tol: 1e-10,
            max_iters: 5000,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub index: usize,
    pub seed: u64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeDiagnostic {
    /// `(angle, mass)` of the merged atoms carrying non-negligible mass.
    pub clusters: Vec<(f64, f64)>,
    pub total_mass: f64,
    pub max_angle_error: f64,
    pub max_mass_error: f64,
    /// `n` clusters of mass `1/n` at a rotated uniform configuration.
    pub matches_extremal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub n: usize,
    pub best_value: f64,
    pub best_measure: HerglotzMeasure,
    pub restarts: usize,
    pub per_restart: Vec<RestartOutcome>,
    pub gap_to_conjecture: f64,
    pub lower_coefficients: Vec<f64>,
    pub shape: ShapeDiagnostic,
    pub config: OptimizeConfig,
}

struct Objective {
    n: usize,
    atoms: usize,
}

impl Objective {
    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], Vec<f64>) {
        (&x[..self.atoms], x[self.atoms..].iter().map(|s| s * s).collect())
    }

    /// `-|c_n|^2`, to be minimized.
    fn value(&self, x: &[f64]) -> f64 {
        let (t, m) = self.split(x);
        -coefficient_and_gradient(t, &m, 0.0, self.n).0.norm_sqr()
    }

    fn value_grad(&self, x: &[f64], g: &mut [f64]) -> f64 {
        let (t, m) = self.split(x);
        let (cn, dm, dt) = coefficient_and_gradient(t, &m, 0.0, self.n);
        let d = |dc: num_complex::Complex64| -2.0 * (cn.conj() * dc).re;
        for k in 0..self.atoms {
            g[k] = d(dt[k]);
            g[self.atoms + k] = d(dm[k]) * 2.0 * x[self.atoms + k];
        }
        -cn.norm_sqr()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS with Armijo backtracking. Returns the iteration count and whether
/// the objective change fell below `tol`.
fn bfgs(obj: &Objective, x: &mut [f64], tol: f64, max_iters: usize) -> (usize, bool) {
    let dim = x.len();
    let mut h = identity(dim);
    let mut g = vec![0.0; dim];
    let mut f = obj.value_grad(x, &mut g);
    let mut g_new = vec![0.0; dim];
    let mut x_new = vec![0.0; dim];
    let mut p = vec![0.0; dim];
    for iter in 0..max_iters {
        for i in 0..dim {
            p[i] = -dot(&h[i * dim..(i + 1) * dim], &g);
        }
        let mut slope = dot(&p, &g);
        if !(slope < 0.0) {
            h = identity(dim);
            p.iter_mut().zip(&g).for_each(|(pi, gi)| *pi = -gi);
            slope = -dot(&g, &g);
            if slope == 0.0 {
                return (iter, true);
            }
        }
        let mut step = 1.0;
        let f_new = loop {
            for i in 0..dim {
                x_new[i] = x[i] + step * p[i];
            }
            let f_try = obj.value_grad(&x_new, &mut g_new);
            if f_try <= f + 1e-4 * step * slope || step < 1e-16 {
                break f_try;
            }
            step *= 0.5;
        };
        if f_new > f {
            return (iter, true);
        }
        let s: Vec<f64> = (0..dim).map(|i| x_new[i] - x[i]).collect();
        let y: Vec<f64> = (0..dim).map(|i| g_new[i] - g[i]).collect();
        x.copy_from_slice(&x_new);
        g.copy_from_slice(&g_new);
        let change = f - f_new;
        f = f_new;
        if change.abs() < tol && dot(&g, &g).sqrt() < tol.sqrt() {
            return (iter + 1, true);
        }
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            bfgs_update(&mut h, &s, &y, sy);
        }
    }
    (max_iters, false)
}

fn identity(dim: usize) -> Vec<f64> {
    let mut h = vec![0.0; dim * dim];
    for i in 0..dim {
        h[i * dim + i] = 1.0;
    }
    h
}

/// `H <- (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let dim = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..dim).map(|i| dot(&h[i * dim..(i + 1) * dim], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..dim {
        for j in 0..dim {
            h[i * dim + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

/// Nelder-Mead from `x`, with initial simplex edge `scale`.
fn nelder_mead(obj: &Objective, x: &mut Vec<f64>, scale: f64, tol: f64, max_evals: usize) -> usize {
    let dim = x.len();
    let mut simplex: Vec<Vec<f64>> = vec![x.clone()];
    for i in 0..dim {
        let mut v = x.clone();
        v[i] += scale;
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|v| obj.value(v)).collect();
    let mut evals = dim + 1;
    while evals < max_evals {
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        vals = idx.iter().map(|&i| vals[i]).collect();
        if (vals[dim] - vals[0]).abs() < tol * 1e-3 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |c: f64| -> Vec<f64> {
            (0..dim).map(|j| centroid[j] + c * (simplex[dim][j] - centroid[j])).collect()
        };
        let xr = along(-1.0);
        let fr = obj.value(&xr);
        evals += 1;
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = obj.value(&xe);
            evals += 1;
            if fe < fr {
                simplex[dim] = xe;
                vals[dim] = fe;
            } else {
                simplex[dim] = xr;
                vals[dim] = fr;
            }
        } else if fr < vals[dim - 1] {
            simplex[dim] = xr;
            vals[dim] = fr;
        } else {
            let xc = if fr < vals[dim] { along(-0.5) } else { along(0.5) };
            let fc = obj.value(&xc);
            evals += 1;
            if fc < vals[dim].min(fr) {
                simplex[dim] = xc;
                vals[dim] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=dim {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    vals[i] = obj.value(&simplex[i]);
                }
                evals += dim;
            }
        }
    }
    let best = (0..=dim).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    if vals[best] < obj.value(x) {
        *x = simplex[best].clone();
    }
    evals
}

fn to_measure(x: &[f64], atoms: usize) -> HerglotzMeasure {
    let masses: Vec<f64> = x[atoms..].iter().map(|s| s * s).collect();
    HerglotzMeasure::new(x[..atoms].to_vec(), masses, 0.0)
        .unwrap_or_else(|_| HerglotzMeasure::new(vec![PI], vec![1.0], 0.0).expect("unit atom"))
}

fn run_restart(n: usize, cfg: &OptimizeConfig, index: usize) -> (RestartOutcome, Vec<f64>) {
    let seed = derive_seed(cfg.seed, index as u64);
    let mut rng = rng_for(seed, 0);
    let k = cfg.atom_count.max(1);
    let total = rng.gen_range(0.3..2.0);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let wsum: f64 = weights.iter().sum();
    let mut x: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
    x.extend(weights.iter().map(|w| (w * total / wsum).sqrt()));
    let obj = Objective { n, atoms: k };
    let (iterations, converged) = bfgs(&obj, &mut x, cfg.tol, cfg.max_iters);
    let polish_evals = 200 * x.len();
    nelder_mead(&obj, &mut x, 1e-4, cfg.tol, polish_evals);
    // one more quasi-Newton pass from the polished point
    let (extra, converged2) = bfgs(&obj, &mut x, cfg.tol, cfg.max_iters / 10 + 1);
    let value = (-obj.value(&x)).sqrt();
    (
        RestartOutcome {
            index,
            seed,
            value,
            iterations: iterations + extra,
            converged: converged || converged2,
        },
        x,
    )
}

/// Multistart maximization of `|c_n|`; deterministic for a given config.
pub fn maximize_cn(n: usize, cfg: &OptimizeConfig) -> OptimizationReport {
    assert!(n >= 1, "coefficient index must be >= 1");
    let runs: Vec<(RestartOutcome, Vec<f64>)> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|i| run_restart(n, cfg, i))
        .collect();
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.0.value > runs[b].0.value { i } else { b });
    let best_measure = to_measure(&runs[best].1, cfg.atom_count.max(1));
    let best_value = runs[best].0.value;
    let series = best_measure.realize_series(n + REPORT_PADDING);
    let lower_coefficients = (1..n).map(|k| series.coeff(k).norm()).collect();
    let shape = shape_diagnostic(&best_measure, n);
    OptimizationReport {
        n,
        best_value,
        best_measure,
        restarts: runs.len(),
        per_restart: runs.into_iter().map(|r| r.0).collect(),
        gap_to_conjecture: best_value - TWO_OVER_E,
        lower_coefficients,
        shape,
        config: cfg.clone(),
    }
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Merges atoms closer than [`SHAPE_ANGLE_TOL`], drops negligible ones,
/// and compares with `n` atoms of mass `1/n` at a rotated uniform lattice.
pub fn shape_diagnostic(mu: &HerglotzMeasure, n: usize) -> ShapeDiagnostic {
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for (t, m) in mu.atoms().filter(|a| a.1 > NEGLIGIBLE_MASS) {
        match clusters.iter_mut().find(|c| angle_dist(c.0, t) < SHAPE_ANGLE_TOL) {
            Some(c) => {
                // mass-weighted mean along the short arc
                let shift = (t - c.0 + PI).rem_euclid(TAU) - PI;
                c.0 = (c.0 + shift * m / (c.1 + m)).rem_euclid(TAU);
                c.1 += m;
            }
            None => clusters.push((t, m)),
        }
    }
    clusters.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total_mass = mu.total_mass();
    let nf = n as f64;
    let max_mass_error = clusters
        .iter()
        .map(|c| (c.1 - 1.0 / nf).abs())
        .fold(0.0, f64::max);
    // common phase of n t_k determines the rotation
    let (sx, sy) = clusters
        .iter()
        .fold((0.0, 0.0), |(x, y), c| (x + c.1 * (nf * c.0).cos(), y + c.1 * (nf * c.0).sin()));
    let phase = sy.atan2(sx) / nf;
    let max_angle_error = clusters
        .iter()
        .map(|c| {
            let slot = ((c.0 - phase) / (TAU / nf)).round();
            angle_dist(c.0, phase + slot * TAU / nf)
        })
        .fold(0.0, f64::max);
    let distinct_slots = {
        let mut slots: Vec<i64> = clusters
            .iter()
            .map(|c| (((c.0 - phase) / (TAU / nf)).round() as i64).rem_euclid(n as i64))
            .collect();
        slots.sort_unstable();
        slots.dedup();
        slots.len()
    };
    let matches_extremal = clusters.len() == n
        && distinct_slots == n
        && max_mass_error <= SHAPE_MASS_TOL
        && max_angle_error <= SHAPE_ANGLE_TOL;
    ShapeDiagnostic {
        clusters,
        total_mass,
        max_angle_error,
        max_mass_error,
        matches_extremal,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub max_atoms: usize,
    pub angle_steps: usize,
    pub mass_steps: usize,
    pub max_mass: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            max_atoms: 3,
            angle_steps: 24,
            mass_steps: 20,
            max_mass: 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub measure: HerglotzMeasure,
}

/// Exhaustive search over measures with up to three atoms on a lattice.
/// The first atom sits at `π`; `|c_n|` is rotation invariant.
pub fn brute_force_oracle(n: usize, grid: &GridSpec) -> OracleResult {
    assert!(n >= 1, "coefficient index must be >= 1");
    let angles: Vec<f64> = (0..grid.angle_steps.max(1))
        .map(|i| PI + TAU * i as f64 / grid.angle_steps.max(1) as f64)
        .collect();
    let masses: Vec<f64> = (0..=grid.mass_steps)
        .map(|i| grid.max_mass * i as f64 / grid.mass_steps.max(1) as f64)
        .collect();
    let atoms = grid.max_atoms.clamp(1, 3);
    let mut configs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for &m1 in &masses[1..] {
        configs.push((vec![PI], vec![m1]));
    }
    if atoms >= 2 {
        for &t2 in &angles[1..] {
            for &m1 in &masses[1..] {
                for &m2 in &masses[1..] {
                    configs.push((vec![PI, t2], vec![m1, m2]));
                }
            }
        }
    }
    let third: Vec<(Vec<f64>, Vec<f64>)> = if atoms >= 3 {
        (1..angles.len())
            .flat_map(|i| (i + 1..angles.len()).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                let (angles, masses) = (&angles, &masses);
                masses[1..].iter().flat_map(move |&m1| {
                    masses[1..].iter().flat_map(move |&m2| {
                        masses[1..]
                            .iter()
                            .map(move |&m3| (vec![PI, angles[i], angles[j]], vec![m1, m2, m3]))
                    })
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    let best = configs
        .par_iter()
        .chain(third.par_iter())
        .map(|(t, m)| (coefficient_and_gradient(t, m, 0.0, n).0.norm(), (t, m)))
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("non-empty grid");
    OracleResult {
        value: best.0,
        measure: HerglotzMeasure::new(best.1 .0.clone(), best.1 .1.clone(), 0.0).expect("positive masses"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    KappaN,
    BestForN,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub abs_cn: f64,
    pub bound_2_over_e: f64,
    pub margin: f64,
    /// Running `Σ_{k<=n} |c_k|^2` for the κ₀ table.
    pub parseval_partial: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub kind: TableKind,
    pub rows: Vec<TableRow>,
}

impl CoefficientTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,abs_cn,bound_2_over_e,margin,parseval_partial\n");
        for r in &self.rows {
            let p = r.parseval_partial.map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.n, r.abs_cn, r.bound_2_over_e, r.margin, p);
        }
        out
    }
}

/// Running sums `Σ_{k<=j} |c_k(κ₀)|^2` for `j = 0..=order`.
pub fn parseval_partial_sums(order: usize) -> Vec<f64> {
    let k = kappa_series(1, order).expect("n = 1");
    k.coeffs()
        .iter()
        .scan(0.0, |acc, c| {
            *acc += c.norm_sqr();
            Some(*acc)
        })
        .collect()
}

fn row(n: usize, abs_cn: f64, parseval_partial: Option<f64>) -> TableRow {
    TableRow {
        n,
        abs_cn,
        bound_2_over_e: TWO_OVER_E,
        margin: TWO_OVER_E - abs_cn,
        parseval_partial,
    }
}

/// `KappaN`: `|c_k(κ₀)|` for `k <= n_max`. `BestForN`: optimizer values
/// for `1 <= n <= n_max` with default configs seeded by `seed`.
pub fn coefficient_table(kind: TableKind, n_max: usize, seed: u64) -> CoefficientTable {
    let rows = match kind {
        TableKind::KappaN => {
            let order = n_max.max(BOUNDARY_ORDER);
            let k = kappa_series(1, order).expect("n = 1");
            let sums = parseval_partial_sums(order);
            (0..=n_max)
                .map(|j| row(j, k.coeff(j).norm(), Some(sums[j])))
                .collect()
        }
        TableKind::BestForN => (1..=n_max)
            .map(|n| {
                let cfg = OptimizeConfig::for_index(n).with_seed(seed);
                row(n, maximize_cn(n, &cfg).best_value, None)
            })
            .collect(),
    };
    CoefficientTable { kind, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::INV_E;
    use approx::assert_abs_diff_eq;

    fn quick(n: usize, restarts: usize, seed: u64) -> OptimizeConfig {
        OptimizeConfig {
            restarts,
            ..OptimizeConfig::for_index(n).with_seed(seed)
        }
    }

    #[test]
    fn default_config() {
        let c = OptimizeConfig::for_index(2);
        assert_eq!((c.restarts, c.atom_count, c.max_iters), (64, 4, 5000));
        let c = OptimizeConfig::for_index(6);
        assert_eq!((c.restarts, c.atom_count), (256, 7));
        assert_eq!(c.tol, 1e-10);
    }

    #[test]
    fn n1_finds_single_atom() {
        let r = maximize_cn(1, &quick(1, 16, 3));
        assert!(r.gap_to_conjecture.abs() < 1e-5, "{}", r.best_value);
        assert!(r.shape.matches_extremal, "{:?}", r.shape);
        assert!(r.best_value <= 1.0);
        let top = r.per_restart.iter().map(|p| p.value).fold(0.0, f64::max);
        assert_eq!(top, r.best_value);
    }

    #[test]
    fn n2_vanishing_first_coefficient() {
        let r = maximize_cn(2, &quick(2, 32, 1));
        assert!(r.gap_to_conjecture.abs() < 1e-4, "{}", r.best_value);
        assert!(r.lower_coefficients[0] < 1e-3);
    }

    #[test]
    fn deterministic_and_monotone_in_restarts() {
        let a = maximize_cn(2, &quick(2, 8, 9));
        let b = maximize_cn(2, &quick(2, 8, 9));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = maximize_cn(2, &quick(2, 16, 9));
        assert!(c.best_value >= a.best_value);
        assert_eq!(&c.per_restart[..8], &a.per_restart[..]);
    }

    #[test]
    fn shape_diagnostic_on_known_measures() {
        for n in 1..=4 {
            let mu = HerglotzMeasure::uniform(n, 0.3, 0.0).unwrap();
            let s = shape_diagnostic(&mu, n);
            assert!(s.matches_extremal, "n={n}: {s:?}");
            assert!(s.max_angle_error < 1e-12);
        }
        // a split atom still counts as one cluster
        let mu = HerglotzMeasure::new(vec![1.0, 1.01, 1.0 + PI], vec![0.25, 0.25, 0.5], 0.0).unwrap();
        assert!(shape_diagnostic(&mu, 2).matches_extremal);
        let skew = HerglotzMeasure::new(vec![0.0, 2.0], vec![0.5, 0.5], 0.0).unwrap();
        assert!(!shape_diagnostic(&skew, 2).matches_extremal);
        let heavy = HerglotzMeasure::new(vec![0.0, PI], vec![0.6, 0.4], 0.0).unwrap();
        assert!(!shape_diagnostic(&heavy, 2).matches_extremal);
    }

    #[test]
    fn oracle_examples() {
        let one = brute_force_oracle(1, &GridSpec { max_atoms: 1, ..GridSpec::default() });
        assert!((one.value - TWO_OVER_E).abs() < 1e-3);
        assert_abs_diff_eq!(one.measure.angles()[0], PI, epsilon = 1e-12);
        assert_abs_diff_eq!(one.measure.masses()[0], 1.0, epsilon = 1e-12);
        let two = brute_force_oracle(2, &GridSpec { max_atoms: 2, ..GridSpec::default() });
        assert!(two.value >= 0.7);
        let opt = maximize_cn(2, &quick(2, 16, 0));
        assert!(two.value <= opt.best_value + 1e-10);
    }

    #[test]
    fn stationary_at_single_atom_extremal() {
        let mu = HerglotzMeasure::new(vec![PI], vec![1.0], 0.0).unwrap();
        let g = mu.objective_gradient(1);
        let norm = (g.angles[0].powi(2) + g.masses[0].powi(2)).sqrt();
        assert!(norm < 1e-8, "{norm}");
    }

    #[test]
    fn kappa_table() {
        let t = coefficient_table(TableKind::KappaN, 3, 0);
        let want = [INV_E, TWO_OVER_E, 0.0, 2.0 / (3.0 * std::f64::consts::E)];
        for (r, w) in t.rows.iter().zip(want) {
            assert_abs_diff_eq!(r.abs_cn, w, epsilon = 1e-12);
        }
        assert!(t.to_csv().starts_with("n,abs_cn,bound_2_over_e,margin"));
        let t0 = coefficient_table(TableKind::KappaN, 0, 0);
        assert_eq!(t0.rows.len(), 1);
        let t50 = coefficient_table(TableKind::KappaN, 50, 0);
        assert!(t50.rows[2..].iter().all(|r| r.abs_cn < TWO_OVER_E));
    }

    #[test]
    fn parseval_sums_increase() {
        let s = parseval_partial_sums(400);
        assert!(s.windows(2).all(|w| w[1] >= w[0]));
        assert!(s[400] <= 1.0);
    }
}
