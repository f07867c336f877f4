//! Random matrices, channels and states for tests, benchmarks and the
//! Monte-Carlo witnesses. Every sampler takes the caller's RNG so results are
//! reproducible from a seed.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{GaussianChannel, Variant};
use crate::matstack::{c, ComplexMatrix, ComplexVector, HermitianMatrix};
use crate::states::GaussianState;

/// Standard complex normal: real and imaginary parts each with variance ½.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// `R`'s diagonal divided out.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let qr = ginibre(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `G G*` for a Ginibre `G`, scaled by `scale / n`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> HermitianMatrix {
    let g = ginibre(rng, n, n);
    HermitianMatrix::hermitian_part(&(&g * g.adjoint() * c(scale / n as f64)))
}

/// A random `s_A × s_B` gain matrix with singular values drawn from
/// `[0, max_gain)`.
pub fn random_gain<R: Rng + ?Sized>(rng: &mut R, s_a: usize, s_b: usize, max_gain: f64) -> ComplexMatrix {
    let u = haar_unitary(rng, s_a);
    let v = haar_unitary(rng, s_b);
    let mut d = ComplexMatrix::zeros(s_a, s_b);
    for j in 0..s_a.min(s_b) {
        d[(j, j)] = c(rng.random_range(0.0..max_gain));
    }
    u * d * v
}

/// A valid channel with random gains up to `max_gain` and noise
/// `minimal + extra`, where `extra` is a random PSD matrix of size `noise`.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    s_a: usize,
    s_b: usize,
    variant: Variant,
    max_gain: f64,
    noise: f64,
) -> GaussianChannel {
    let k = random_gain(rng, s_a, s_b, max_gain);
    let shell = GaussianChannel::new(variant, k.clone(), HermitianMatrix::zeros(s_b)).expect("shapes agree");
    let mu = &shell.minimal_noise() + &random_psd(rng, s_b, noise);
    GaussianChannel::new(variant, k, mu).expect("shapes agree")
}

/// A valid channel whose `K*K` commutes with `μ`, built from a shared
/// eigenbasis. Noise per mode is the one-mode minimum plus up to `noise`.
pub fn random_commuting_channel<R: Rng + ?Sized>(
    rng: &mut R,
    s_a: usize,
    s_b: usize,
    variant: Variant,
    max_gain: f64,
    noise: f64,
) -> GaussianChannel {
    let v_a = haar_unitary(rng, s_a);
    let w = haar_unitary(rng, s_b);
    let mut k_d = ComplexMatrix::zeros(s_a, s_b);
    let mut mu_d = vec![0.0; s_b];
    for (j, mu_j) in mu_d.iter_mut().enumerate() {
        let k = if j < s_a { rng.random_range(0.0..max_gain) } else { 0.0 };
        if j < s_a {
            k_d[(j, j)] = c(k);
        }
        let floor = match variant {
            Variant::Covariant => 0.5 * (1.0 - k * k).abs(),
            Variant::Contravariant => 0.5 * (1.0 + k * k),
        };
        *mu_j = floor + rng.random_range(0.0..=noise);
    }
    let k = v_a * k_d * w.adjoint();
    let mu = HermitianMatrix::from_real_diagonal(&mu_d).congruence(&w.adjoint());
    GaussianChannel::new(variant, k, mu).expect("shapes agree")
}

/// A Gaussian state with random mean (entries of size ~`mean_scale`) and
/// occupation matrix drawn from [`random_psd`].
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, modes: usize, mean_scale: f64, thermal: f64) -> GaussianState {
    let mean = ComplexVector::from_fn(modes, |_, _| complex_normal(rng) * mean_scale);
    let corr = &HermitianMatrix::scaled_identity(modes, 0.5) + &random_psd(rng, modes, thermal);
    GaussianState::new(mean, corr).expect("dimensions agree")
}
