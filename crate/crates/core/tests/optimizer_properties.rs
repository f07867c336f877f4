use bosonic_core::optimizers::{
    capacity, min_output_entropy, min_renyi_entropy, one_to_p_norm, CapacityMethod, EnergyConstraint,
};
use bosonic_core::sampling::{random_channel, random_commuting_channel};
use bosonic_core::Variant;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn capacity_grows_with_energy(seed in any::<u64>(), e in 0.1f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s_a, s_b) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let v = if rng.random_bool(0.5) { Variant::Covariant } else { Variant::Contravariant };
        let ch = random_channel(&mut rng, s_a, s_b, v, 1.5, 0.5);
        let low = capacity(&ch, &EnergyConstraint::photon_number(s_a, e).unwrap(), CapacityMethod::Auto).unwrap();
        let high = capacity(&ch, &EnergyConstraint::photon_number(s_a, 1.5 * e).unwrap(), CapacityMethod::Auto).unwrap();
        prop_assert!(high.capacity_nats >= low.capacity_nats - 1e-9);
        prop_assert!(low.kkt_residual < 1e-8 && high.kkt_residual < 1e-8);
    }

    #[test]
    fn renyi_entropy_tends_to_von_neumann(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = if rng.random_bool(0.5) { Variant::Covariant } else { Variant::Contravariant };
        let ch = random_channel(&mut rng, 2, 2, v, 1.8, 0.5);
        let h = min_output_entropy(&ch).unwrap();
        let near = min_renyi_entropy(&ch, 1.001).unwrap();
        prop_assert!(near <= h + 1e-12);
        prop_assert!(h - near < 5e-3 * (1.0 + h));
        prop_assert!(min_renyi_entropy(&ch, 2.0).unwrap() <= near + 1e-12);
    }

    #[test]
    fn norms_and_renyi_entropies_agree(seed in any::<u64>(), p in 1.1f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(&mut rng, 2, 3, Variant::Covariant, 1.8, 0.5);
        let norm = one_to_p_norm(&ch, p).unwrap();
        prop_assert!(norm > 0.0 && norm <= 1.0 + 1e-12);
        let renyi = min_renyi_entropy(&ch, p).unwrap();
        prop_assert!((renyi - p / (1.0 - p) * norm.ln()).abs() < 1e-10);
    }

    #[test]
    fn capacity_paths_agree_on_commuting_channels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_commuting_channel(&mut rng, 2, 2, Variant::Covariant, 1.6, 0.5);
        // K from the sampler is only normal when its two unitaries coincide,
        // so ask for the general solver and compare against Auto.
        let cons = EnergyConstraint::photon_number(2, 1.3).unwrap();
        let auto = capacity(&ch, &cons, CapacityMethod::Auto).unwrap();
        let general = capacity(&ch, &cons, CapacityMethod::General).unwrap();
        prop_assert!((auto.capacity_nats - general.capacity_nats).abs() < 1e-7);
    }
}

#[test]
fn zero_energy_means_zero_capacity() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let ch = random_channel(&mut rng, 2, 2, Variant::Covariant, 1.5, 0.5);
    let sol = capacity(&ch, &EnergyConstraint::photon_number(2, 0.0).unwrap(), CapacityMethod::Auto).unwrap();
    assert!(sol.capacity_nats.abs() < 1e-12);
    assert!(sol.nu.frobenius_norm() < 1e-12);
}

#[test]
fn contravariant_capacity_is_well_defined() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let ch = random_channel(&mut rng, 2, 2, Variant::Contravariant, 1.5, 0.3);
    let sol = capacity(&ch, &EnergyConstraint::photon_number(2, 2.0).unwrap(), CapacityMethod::General).unwrap();
    assert!(sol.capacity_nats > 0.0);
    assert!(sol.kkt_residual < 1e-8);
}
