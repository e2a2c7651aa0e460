use gai_core::{run, RngStream, RunConfig, Scenario, Strategy};
use proptest::prelude::{any, prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};
use proptest::strategy::Strategy as Gen;

fn any_strategy() -> impl Gen<Value = Strategy> {
    prop::sample::select(Strategy::ALL.to_vec())
}

fn bernoulli_scenario() -> impl Gen<Value = Scenario> {
    (prop::collection::vec(0.0f64..=1.0, 1..6), 0.05f64..0.95)
        .prop_map(|(means, xi)| Scenario::bernoulli("random", &means, xi).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn records_are_internally_consistent(
        scenario in bernoulli_scenario(),
        strategy in any_strategy(),
        seed in any::<u64>(),
        budget in 200u64..3_000,
    ) {
        let config = RunConfig::new(0.1).burn_in(2).budget(budget);
        let record = run(&scenario, strategy, &config, &mut RngStream::new(seed, 0)).unwrap();

        prop_assert!(record.rounds <= budget);
        prop_assert_eq!(record.tau.len(), record.outputs.len());
        prop_assert!(record.tau.windows(2).all(|w| w[0] < w[1]));
        let mut distinct = record.outputs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), record.outputs.len());
        prop_assert_eq!(record.censored, record.stop.is_none());
        if let Some(stop) = record.stop {
            prop_assert_eq!(stop, record.rounds);
            prop_assert!(record.tau.last().is_none_or(|&t| t <= stop));
        }
        prop_assert_eq!(
            record.bad_output,
            record.outputs.iter().any(|&a| !scenario.is_good(a))
        );
    }

    #[test]
    fn same_stream_same_record(
        scenario in bernoulli_scenario(),
        strategy in any_strategy(),
        seed in any::<u64>(),
        index in any::<u64>(),
    ) {
        let config = RunConfig::new(0.1).budget(2_000);
        let a = run(&scenario, strategy, &config, &mut RngStream::new(seed, index)).unwrap();
        let b = run(&scenario, strategy, &config, &mut RngStream::new(seed, index)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn max_outputs_truncates_a_full_run(
        scenario in bernoulli_scenario(),
        strategy in any_strategy(),
        seed in any::<u64>(),
        cap in 1usize..3,
    ) {
        let full = RunConfig::new(0.1).budget(5_000);
        let capped = full.max_outputs(Some(cap));
        let a = run(&scenario, strategy, &full, &mut RngStream::new(seed, 1)).unwrap();
        let b = run(&scenario, strategy, &capped, &mut RngStream::new(seed, 1)).unwrap();
        let n = a.tau.len().min(cap);
        prop_assert_eq!(&a.tau[..n], &b.tau[..n]);
        prop_assert_eq!(&a.outputs[..n], &b.outputs[..n]);
    }
}
