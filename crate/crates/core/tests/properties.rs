use cvhnn::cycle::detect_cycle_brent;
use cvhnn::dynamics::{step_parallel, RealNetwork};
use cvhnn::harness::spec::{random_state, sample_network, StructureFamily};
use cvhnn::harness::Histogram;
use cvhnn::oracle::{decode_state, encode_state};
use cvhnn::rng::SeededRng;
use cvhnn::structure::{classify_with_tolerance, SignKind, SymmetryKind, ThresholdMode};
use cvhnn::types::{StateVector, StructureTag};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = StructureFamily> {
    let sym =
        prop_oneof![Just(SymmetryKind::Symmetric), Just(SymmetryKind::Antisymmetric), Just(SymmetryKind::Arbitrary)];
    let sign = prop_oneof![Just(SignKind::Positive), Just(SignKind::Negative), Just(SignKind::Arbitrary)];
    prop_oneof![
        Just(StructureFamily::Hermitian),
        Just(StructureFamily::SkewHermitian),
        Just(StructureFamily::BraidedHermitian),
        Just(StructureFamily::BraidedSkewHermitian),
        (sym.clone(), sign.clone(), sym.clone(), sign)
            .prop_map(|(sym_a, sign_a, sym_b, sign_b)| StructureFamily::RectGrid { sym_a, sign_a, sym_b, sign_b }),
        (sym.clone(), sym).prop_map(|(sym_g, sym_p)| StructureFamily::PolarGrid { sym_g, sym_p }),
    ]
}

fn threshold() -> impl Strategy<Value = ThresholdMode> {
    prop_oneof![Just(ThresholdMode::Zero), Just(ThresholdMode::UniformScaled)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn packing_round_trips(n in 1usize..80, seed: u64) {
        let s = random_state(n, &mut SeededRng::new(seed, 0));
        prop_assert_eq!(StateVector::from_packed(&s.packed(), n).unwrap(), s.clone());
        if n <= 10 {
            prop_assert_eq!(decode_state(encode_state(&s).unwrap(), n).unwrap(), s);
        }
    }

    #[test]
    fn pair_energy_on_diagonal_is_serial_energy(f in family(), t in threshold(), n in 1usize..25, seed: u64) {
        let (net, s) = sample_network(f, t, n, &mut SeededRng::new(seed, 1)).unwrap();
        prop_assert_eq!(net.energy_parallel(&s, &s).unwrap().to_bits(), net.energy_serial(&s).unwrap().to_bits());
    }

    #[test]
    fn generators_carry_their_tags(n in 1usize..20, seed: u64) {
        let mut rng = SeededRng::new(seed, 2);
        let cases = [
            (StructureFamily::Hermitian, StructureTag::Hermitian),
            (StructureFamily::SkewHermitian, StructureTag::SkewHermitian),
            (StructureFamily::BraidedHermitian, StructureTag::BraidedHermitian),
            (StructureFamily::BraidedSkewHermitian, StructureTag::BraidedSkewHermitian),
        ];
        for (f, tag) in cases {
            let (net, _) = sample_network(f, ThresholdMode::Zero, n, &mut rng).unwrap();
            prop_assert!(classify_with_tolerance(net.weights(), 0.0).contains(&tag));
        }
    }

    #[test]
    fn realified_step_matches(f in family(), t in threshold(), n in 1usize..16, seed: u64) {
        let (net, s) = sample_network(f, t, n, &mut SeededRng::new(seed, 3)).unwrap();
        let next = step_parallel(&net, &s).unwrap().stacked();
        let real = RealNetwork::realify(&net).step(&s.stacked()).unwrap();
        prop_assert_eq!(next, real);
    }

    #[test]
    fn hermitian_parallel_period_at_most_two(t in threshold(), n in 1usize..40, seed: u64) {
        let (net, s) = sample_network(StructureFamily::Hermitian, t, n, &mut SeededRng::new(seed, 4)).unwrap();
        let r = detect_cycle_brent(&net, &s, 100_000).unwrap();
        prop_assert!(matches!(r.period, Some(1 | 2)), "{:?}", r);
    }

    #[test]
    fn histogram_conserves_trials(periods in proptest::collection::vec(proptest::option::of(1u64..50), 0..200)) {
        let h = Histogram::from_periods(periods.iter().copied());
        prop_assert_eq!(h.trials(), periods.len() as u64);
        prop_assert_eq!(h.resolved() + h.unresolved, h.trials());
        if let Some(p) = h.mode_period() {
            prop_assert_eq!(h.mode_probability(), h.counts[&p] as f64 / h.trials() as f64);
        }
        let mut split = Histogram::from_periods(periods[..periods.len() / 2].iter().copied());
        split.merge(&Histogram::from_periods(periods[periods.len() / 2..].iter().copied()));
        prop_assert_eq!(split, h);
    }
}
