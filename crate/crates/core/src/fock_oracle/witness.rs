//! Monte-Carlo witness that the vacuum minimizes `Tr f(Φ[ρ])`.
//!
//! Sampling can only ever falsify the claim, so reports are labelled as
//! witnesses. Each trial draws its input from its own ChaCha stream, which
//! keeps results independent of iteration order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{hermitian_eigenvalues, husimi, spectrum_trace_fn, ConcaveFn, FockChannel, FockDensity, FockPure, OracleConfig};
use crate::channels::Variant;
use crate::error::Result;
use crate::structure::OneModeFactor;

/// Samples may undercut the vacuum by at most this much.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub kind: &'static str,
    pub k: f64,
    pub mu: f64,
    pub variant: Variant,
    pub f: ConcaveFn,
    pub trials: usize,
    pub seed: u64,
    pub cutoff: usize,
    pub vacuum_value: f64,
    pub sample_min: f64,
    /// `sample_min - vacuum_value`.
    pub margin: f64,
    pub pass: bool,
    /// Trial that produced `sample_min`.
    pub argmin_trial: Option<usize>,
    /// Largest overlap of the minimizing input with a coherent state.
    pub nearest_coherent_fidelity: Option<f64>,
    pub leak_estimate: f64,
}

/// Best overlap `|⟨z|ψ⟩|²` over coherent states: a coarse grid over the disk
/// that holds the state, then a shrinking pattern search.
pub fn nearest_coherent(psi: &FockPure) -> (Complex64, f64) {
    let rho = FockDensity::from_pure(psi);
    let radius = (psi.cutoff() as f64).sqrt() + 3.0;
    let step = 0.15;
    let steps = (radius / step).ceil() as i64;
    let mut best = (Complex64::new(0.0, 0.0), husimi(&rho, Complex64::new(0.0, 0.0)));
    for i in -steps..=steps {
        for j in -steps..=steps {
            let z = Complex64::new(i as f64 * step, j as f64 * step);
            if z.norm() > radius {
                continue;
            }
            let v = husimi(&rho, z);
            if v > best.1 {
                best = (z, v);
            }
        }
    }
    let mut h = step;
    while h > 1e-6 {
        let mut moved = false;
        for d in [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)] {
            let z = best.0 + d;
            let v = husimi(&rho, z);
            if v > best.1 {
                best = (z, v);
                moved = true;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    best
}

fn output_values(out: &FockDensity, fs: &[ConcaveFn]) -> Vec<f64> {
    let needs_spectrum = fs.iter().any(|f| !matches!(f, ConcaveFn::NegSquare | ConcaveFn::Linear));
    let spectrum = needs_spectrum.then(|| hermitian_eigenvalues(out.matrix()));
    fs.iter()
        .map(|&f| match (f, &spectrum) {
            (ConcaveFn::NegSquare, _) => -out.matrix().norm_squared(),
            (ConcaveFn::Linear, _) => out.trace(),
            (_, Some(s)) => spectrum_trace_fn(s, f),
            (_, None) => unreachable!("spectrum computed whenever a function needs it"),
        })
        .collect()
}

/// Compare the vacuum against `trials` Haar-random pure inputs on levels
/// `0..=cutoff`, for several functions at once.
pub fn optimizer_witness_multi(
    factor: &OneModeFactor,
    fs: &[ConcaveFn],
    trials: usize,
    seed: u64,
    cutoff: usize,
    config: &OracleConfig,
) -> Result<Vec<WitnessReport>> {
    let channel = FockChannel::new(factor, cutoff + 1, config)?;
    let vacuum = FockPure::number_state(0, cutoff)?;
    let vacuum_values = output_values(&channel.apply_pure(&vacuum)?, fs);

    let mut minima: Vec<(f64, Option<usize>)> = vec![(f64::INFINITY, None); fs.len()];
    for trial in 0..trials {
        let psi = trial_state(seed, trial, cutoff);
        let values = output_values(&channel.apply_pure(&psi)?, fs);
        for (slot, v) in minima.iter_mut().zip(values) {
            if v < slot.0 {
                *slot = (v, Some(trial));
            }
        }
    }

    Ok(fs
        .iter()
        .zip(vacuum_values)
        .zip(minima)
        .map(|((&f, vacuum_value), (sample_min, argmin_trial))| {
            let nearest_coherent_fidelity =
                argmin_trial.map(|t| nearest_coherent(&trial_state(seed, t, cutoff)).1);
            let margin = sample_min - vacuum_value;
            WitnessReport {
                kind: "witness",
                k: factor.k,
                mu: factor.mu,
                variant: factor.variant,
                f,
                trials,
                seed,
                cutoff,
                vacuum_value,
                sample_min,
                margin,
                pass: trials == 0 || margin >= -WITNESS_TOL,
                argmin_trial,
                nearest_coherent_fidelity,
                leak_estimate: channel.leak_estimate(),
            }
        })
        .collect())
}

pub fn optimizer_witness(
    factor: &OneModeFactor,
    f: ConcaveFn,
    trials: usize,
    seed: u64,
    cutoff: usize,
    config: &OracleConfig,
) -> Result<WitnessReport> {
    Ok(optimizer_witness_multi(factor, &[f], trials, seed, cutoff, config)?.remove(0))
}

fn trial_state(seed: u64, trial: usize, cutoff: usize) -> FockPure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    FockPure::haar_random(&mut rng, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::FactorRole;
    use approx::assert_abs_diff_eq;

    fn factor(k: f64, mu: f64) -> OneModeFactor {
        OneModeFactor { k, mu, role: FactorRole::Active, variant: Variant::Covariant }
    }

    #[test]
    fn amplifier_witness_holds() {
        let cfg = OracleConfig::default();
        let r = optimizer_witness(&factor(2f64.sqrt(), 0.5), ConcaveFn::NegSquare, 40, 7, 12, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
        assert_abs_diff_eq!(r.vacuum_value, -1.0 / 3.0, epsilon = 1e-9);
        assert!(r.nearest_coherent_fidelity.unwrap() <= 1.0);
    }

    #[test]
    fn attenuator_entropy_witness() {
        let cfg = OracleConfig::default();
        let r = optimizer_witness(&factor(0.6, 0.32), ConcaveFn::NegXLogX, 20, 1, 10, &cfg).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.vacuum_value, 0.0, epsilon = 1e-12);
        assert!(r.sample_min >= 0.0);
    }

    #[test]
    fn composite_factor_witness() {
        let cfg = OracleConfig::default();
        let rs = optimizer_witness_multi(&factor(1.0, 0.5), &[ConcaveFn::NegSquare, ConcaveFn::NegXLogX], 20, 2, 10, &cfg)
            .unwrap();
        assert!(rs.iter().all(|r| r.pass));
    }

    #[test]
    fn trials_are_reproducible() {
        assert_eq!(trial_state(9, 4, 6), trial_state(9, 4, 6));
        assert_ne!(trial_state(9, 4, 6), trial_state(9, 5, 6));
    }

    #[test]
    fn coherent_input_has_unit_fidelity() {
        let psi = super::super::coherent_fock(Complex64::new(0.7, -1.3), 40).unwrap();
        let (z, fid) = nearest_coherent(&psi);
        assert!((fid - 1.0).abs() < 1e-8);
        assert!((z - Complex64::new(0.7, -1.3)).norm() < 1e-3);
    }
}
