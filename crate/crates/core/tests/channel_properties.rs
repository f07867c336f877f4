use bosonic_core::channels::{compose, tensor};
use bosonic_core::sampling::{random_channel, random_state};
use bosonic_core::{Complex64, ComplexMatrix, ComplexVector, GaussianChannel, GaussianState, Variant, DEFAULT_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

fn channel_diff(a: &GaussianChannel, b: &GaussianChannel) -> f64 {
    assert_eq!(a.variant(), b.variant());
    max_diff(a.k(), b.k()).max(max_diff(a.mu().as_matrix(), b.mu().as_matrix()))
}

fn state_diff(a: &GaussianState, b: &GaussianState) -> f64 {
    let mean = (a.mean() - b.mean()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    mean.max(max_diff(a.corr().as_matrix(), b.corr().as_matrix()))
}

fn variant(rng: &mut ChaCha8Rng) -> Variant {
    if rng.random_bool(0.5) {
        Variant::Covariant
    } else {
        Variant::Contravariant
    }
}

fn chain(seed: u64) -> (ChaCha8Rng, Vec<GaussianChannel>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: Vec<usize> = (0..4).map(|_| rng.random_range(1..=3)).collect();
    let channels = (0..3)
        .map(|i| {
            let v = variant(&mut rng);
            random_channel(&mut rng, dims[i], dims[i + 1], v, 1.8, 0.6)
        })
        .collect();
    (rng, channels)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let (_, ch) = chain(seed);
        let left = compose(&ch[2], &compose(&ch[1], &ch[0]).unwrap()).unwrap();
        let right = compose(&compose(&ch[2], &ch[1]).unwrap(), &ch[0]).unwrap();
        prop_assert!(channel_diff(&left, &right) < 1e-9);
    }

    #[test]
    fn apply_respects_composition(seed in any::<u64>()) {
        let (mut rng, ch) = chain(seed);
        let state = random_state(&mut rng, ch[0].modes_in(), 1.0, 0.8);
        let direct = compose(&ch[1], &ch[0]).unwrap().apply(&state).unwrap();
        let stepwise = ch[1].apply(&ch[0].apply(&state).unwrap()).unwrap();
        prop_assert!(state_diff(&direct, &stepwise) < 1e-9);
    }

    #[test]
    fn compose_and_tensor_preserve_validity(seed in any::<u64>()) {
        let (mut rng, ch) = chain(seed);
        prop_assert!(compose(&ch[1], &ch[0]).unwrap().is_valid(DEFAULT_TOL));
        let v = ch[0].variant();
        let other = random_channel(&mut rng, 2, 1, v, 1.5, 0.3);
        let t = tensor(&ch[0], &other).unwrap();
        prop_assert!(t.is_valid(DEFAULT_TOL));
        prop_assert_eq!(t.modes_in(), ch[0].modes_in() + 2);
    }

    #[test]
    fn outputs_are_valid_states(seed in any::<u64>()) {
        let (mut rng, ch) = chain(seed);
        let state = random_state(&mut rng, ch[0].modes_in(), 2.0, 1.0);
        prop_assert!(ch[0].apply(&state).unwrap().is_valid(DEFAULT_TOL));
    }

    #[test]
    fn phase_rotations_pass_through(seed in any::<u64>(), theta in 0.0..std::f64::consts::TAU) {
        // Rotating the input by e^{iθ} rotates a covariant output by e^{iθ}
        // and a contravariant one by e^{-iθ}; correlations are unchanged.
        let (mut rng, ch) = chain(seed);
        let state = random_state(&mut rng, ch[0].modes_in(), 1.0, 0.5);
        let phase = Complex64::from_polar(1.0, theta);
        let rotated = GaussianState::new(state.mean() * phase, state.corr().clone()).unwrap();
        let out = ch[0].apply(&state).unwrap();
        let out_rot = ch[0].apply(&rotated).unwrap();
        let expected_phase = if ch[0].variant().is_contravariant() { phase.conj() } else { phase };
        let expected = GaussianState::new(out.mean() * expected_phase, out.corr().clone()).unwrap();
        prop_assert!(state_diff(&out_rot, &expected) < 1e-10);
    }

    #[test]
    fn channel_json_round_trips(seed in any::<u64>()) {
        let (mut rng, ch) = chain(seed);
        for c in &ch {
            let text = serde_json::to_string(c).unwrap();
            let back: GaussianChannel = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, c);
        }
        let state = random_state(&mut rng, 2, 1.0, 1.0);
        let back: GaussianState = serde_json::from_str(&serde_json::to_string(&state).unwrap()).unwrap();
        prop_assert_eq!(back, state);
    }
}

#[test]
fn coherent_means_follow_k_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = ComplexVector::from_vec(vec![Complex64::new(0.3, -1.1), Complex64::new(-0.4, 0.2)]);
    for v in [Variant::Covariant, Variant::Contravariant] {
        let ch = random_channel(&mut rng, 2, 3, v, 1.5, 0.2);
        let out = ch.apply(&GaussianState::coherent(w.clone())).unwrap();
        let input = if v.is_contravariant() { w.conjugate() } else { w.clone() };
        let want = ch.k().adjoint() * input;
        assert!((out.mean() - want).norm() < 1e-12);
    }
}

#[test]
fn mismatched_shapes_are_rejected() {
    let a = GaussianChannel::identity(2);
    let b = GaussianChannel::identity(3);
    assert_eq!(compose(&a, &b).unwrap_err().kind(), "ModeMismatch");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let contra = random_channel(&mut rng, 1, 1, Variant::Contravariant, 1.0, 0.1);
    assert_eq!(tensor(&a, &contra).unwrap_err().kind(), "MixedVariant");
}
