//! Seeded random test populations.
//!
//! Every random draw is keyed by `(master seed, index)`, so populations
//! can be generated in parallel and still come out identical.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::herglotz::HerglotzMeasure;
use crate::nonvan::{certify_membership, homotopy, NonvanishingFunction, DEFAULT_CERT_RADIUS};
use crate::series::PowerSeries;

/// Attempts per member before giving up on a population index.
const MAX_ATTEMPTS: u64 = 64;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent stream seed for item `index` of the stream keyed by `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

/// Measure with `1..=max_atoms` atoms, uniform angles, total mass in
/// `mass_range` split at random, and uniform `β`.
pub fn random_measure<R: Rng>(rng: &mut R, max_atoms: usize, mass_range: (f64, f64)) -> HerglotzMeasure {
    let k = rng.gen_range(1..=max_atoms.max(1));
    let angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total = rng.gen_range(mass_range.0..=mass_range.1);
    let sum: f64 = weights.iter().sum();
    let masses = weights.iter().map(|w| w * total / sum).collect();
    let beta = rng.gen_range(-PI..PI);
    HerglotzMeasure::new(angles, masses, beta).expect("positive weights")
}

/// The measure of `e^{-iβ} κ₀(e^{iθ} z)`: one unit atom at `π - θ`.
pub fn kappa_rotation_measure<R: Rng>(rng: &mut R) -> (HerglotzMeasure, f64) {
    let theta = rng.gen_range(0.0..TAU);
    let beta = rng.gen_range(-PI..PI);
    let mu = HerglotzMeasure::new(vec![PI - theta], vec![1.0], beta).expect("unit mass");
    (mu, theta)
}

/// Series of `e^{-iβ} κ₀(e^{iθ} z)` computed directly, independent of the
/// Herglotz kernel.
pub fn kappa_rotation_series(theta: f64, beta: f64, order: usize) -> Result<PowerSeries> {
    let k = crate::nonvan::kappa_series(1, order)?;
    Ok(k.dilate(Complex64::from_polar(1.0, theta))
        .scale(Complex64::from_polar(1.0, -beta)))
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub id: String,
    pub measure: HerglotzMeasure,
    /// Dilation `ρ` applied to the realized function.
    pub dilation: f64,
    pub function: NonvanishingFunction,
}

/// Population member `index`: a random measure realized at `order` and
/// dilated by `ρ ∈ [0.2, 0.7]`, so that truncation is negligible on the
/// closed disk, then certified at the default radius.
pub fn random_member(master: u64, index: u64, order: usize) -> Sample {
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_for(derive_seed(master, index), attempt);
        let measure = random_measure(&mut rng, 4, (0.2, 2.0));
        let rho = rng.gen_range(0.2..0.7);
        let dilated = measure.realize_series(order).dilate(Complex64::new(rho, 0.0));
        if let Ok(function) = certify_membership(&dilated, DEFAULT_CERT_RADIUS) {
            return Sample {
                id: format!("seed{master}/{index}"),
                measure,
                dilation: rho,
                function,
            };
        }
    }
    panic!("no certified member after {MAX_ATTEMPTS} attempts (index {index})");
}

/// `count` members, generated in parallel and returned in index order.
pub fn random_population(master: u64, count: usize, order: usize) -> Vec<Sample> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| random_member(master, i, order))
        .collect()
}

/// `κ₀(e^{iθ} t z)` up to a unimodular factor, for a random rotation and
/// `t ∈ [0.1, 0.6]`; these sit on complex geodesics.
pub fn geodesic_member(master: u64, index: u64, order: usize) -> Result<Sample> {
    let mut rng = rng_for(master, index);
    let (measure, _) = kappa_rotation_measure(&mut rng);
    let t = rng.gen_range(0.1..0.6);
    let base = measure.realize(order)?;
    let function = homotopy(&base, Complex64::new(t, 0.0))?;
    Ok(Sample {
        id: format!("geodesic{master}/{index}"),
        measure,
        dilation: t,
        function,
    })
}

/// Random points of the disk `|z| < radius`, uniform in area.
pub fn random_disk_points<R: Rng>(rng: &mut R, count: usize, radius: f64) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..TAU))
        })
        .collect()
}
