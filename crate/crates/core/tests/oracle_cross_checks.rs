//! The Gaussian closed forms against the Fock-space simulation.

use bosonic_core::channels::make_amplifier;
use bosonic_core::fock_oracle::{
    apply_one_mode, coherent_fock, complementary_output, gaussian_to_fock, majorizes, FockDensity, OracleConfig,
};
use bosonic_core::structure::complement;
use bosonic_core::{
    Complex64, ComplexMatrix, ComplexVector, FactorRole, GaussianState, HermitianMatrix, OneModeFactor, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn factor(k: f64, mu: f64, variant: Variant) -> OneModeFactor {
    OneModeFactor { k, mu, role: FactorRole::Active, variant }
}

fn one_mode_state(w: Complex64, n: f64) -> GaussianState {
    GaussianState::new(ComplexVector::from_element(1, w), HermitianMatrix::from_real_diagonal(&[0.5 + n])).unwrap()
}

#[test]
fn gaussian_outputs_match_fock_simulation() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..12 {
        let variant = if i % 3 == 2 { Variant::Contravariant } else { Variant::Covariant };
        let k: f64 = rng.random_range(0.2..1.6);
        let floor = match variant {
            Variant::Covariant => 0.5 * (1.0 - k * k).abs(),
            Variant::Contravariant => 0.5 * (1.0 + k * k),
        };
        let f = factor(k, floor + rng.random_range(0.0..0.4), variant);
        let input = one_mode_state(Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), 0.3);

        let gaussian = f.channel().apply(&input).unwrap().spectrum(6).unwrap();
        let rho = gaussian_to_fock(&input, 40, &cfg).unwrap();
        let oracle = apply_one_mode(&f, &rho, &cfg).unwrap().spectrum();
        for (a, b) in gaussian.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-6, "case {i}: {gaussian:?} vs {:?}", &oracle[..6]);
        }
    }
}

#[test]
fn contravariant_output_mean_is_k_conj_w() {
    let cfg = OracleConfig::default();
    let w = Complex64::new(0.7, 0.4);
    let psi = coherent_fock(w, 40).unwrap();
    for k in [0.5, 1.0, 1.7] {
        let f = factor(k, 0.5 * (1.0 + k * k), Variant::Contravariant);
        let out = apply_one_mode(&f, &FockDensity::from_pure(&psi), &cfg).unwrap();
        assert!((out.mean_amplitude() - w.conj() * k).norm() < 1e-8, "k = {k}");
        let gaussian = f.channel().apply(&one_mode_state(w, 0.0)).unwrap();
        assert!((gaussian.mean()[0] - out.mean_amplitude()).norm() < 1e-8);
    }
}

#[test]
fn amplifier_complement_matches_environment_output() {
    let cfg = OracleConfig::default();
    let w = Complex64::new(-0.5, 0.9);
    let psi = coherent_fock(w, 40).unwrap();
    for kappa_sq in [1.5, 2.0, 3.0] {
        let kappa: f64 = f64::sqrt(kappa_sq);
        let amp = make_amplifier(&ComplexMatrix::from_element(1, 1, Complex64::new(kappa, 0.0))).unwrap();
        let env_channel = complement(&amp).unwrap();
        let gaussian = env_channel.apply(&one_mode_state(w, 0.0)).unwrap();

        let f = factor(kappa, 0.5 * (kappa_sq - 1.0), Variant::Covariant);
        let env = complementary_output(&f, &psi, &cfg).unwrap();
        assert!((env.mean_amplitude() - gaussian.mean()[0]).norm() < 1e-8, "kappa^2 = {kappa_sq}");
        let want = gaussian.spectrum(5).unwrap();
        for (a, b) in want.iter().zip(env.spectrum()) {
            assert!((a - b).abs() < 1e-7);
        }
    }
}

#[test]
fn vacuum_output_majorizes_number_state_outputs() {
    let cfg = OracleConfig::default();
    let f = factor(2f64.sqrt(), 0.5, Variant::Covariant);
    let vac = apply_one_mode(&f, &FockDensity::from_pure(&coherent_fock(Complex64::new(0.0, 0.0), 0).unwrap()), &cfg)
        .unwrap();
    for n in 1..4 {
        let number = bosonic_core::fock_oracle::FockPure::number_state(n, n).unwrap();
        let out = apply_one_mode(&f, &FockDensity::from_pure(&number), &cfg).unwrap();
        assert!(majorizes(&vac, &out, 1e-10), "n = {n}");
    }
}
