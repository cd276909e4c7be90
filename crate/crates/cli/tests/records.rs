use drlift_cli::record::{parse_records, records_to_string, ExperimentRecord, Format};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e12..1e12f64,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(0.0),
        Just(-0.0),
    ]
}

fn record() -> impl Strategy<Value = ExperimentRecord> {
    (
        "[a-zA-Z0-9 ,\"_.-]{0,16}",
        prop_oneof![Just("exact-log"), Just("naive-copies"), Just("refined-eps=1/8")],
        prop_oneof![Just("double-greedy"), Just("brute-force")],
        finite(),
        proptest::option::of(finite()),
        proptest::option::of(finite()),
        any::<u64>(),
        proptest::option::of(0.0..1e6f64),
        proptest::option::of(any::<u64>()),
    )
        .prop_map(
            |(id, mode, solver, value, opt, ratio, calls, wall, seed)| ExperimentRecord {
                instance_id: id,
                mode: mode.into(),
                solver: solver.into(),
                value,
                opt,
                ratio,
                oracle_calls: calls,
                wall_ms: wall,
                seed,
            },
        )
}

proptest! {
    #[test]
    fn records_round_trip(records in proptest::collection::vec(record(), 0..8)) {
        for format in [Format::Csv, Format::Jsonl] {
            let text = records_to_string(&records, format).unwrap();
            let back = parse_records(&text, format).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in back.iter().zip(&records) {
                prop_assert_eq!(&a.instance_id, &b.instance_id);
                prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
                prop_assert_eq!(a.opt.map(f64::to_bits), b.opt.map(f64::to_bits));
                prop_assert_eq!(a.ratio.map(f64::to_bits), b.ratio.map(f64::to_bits));
                prop_assert_eq!(a.wall_ms.map(f64::to_bits), b.wall_ms.map(f64::to_bits));
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn non_finite_values_are_rejected(mut r in record(), bad in prop_oneof![Just(f64::NAN), Just(f64::INFINITY)]) {
        r.value = bad;
        prop_assert!(records_to_string(&[r.clone()], Format::Csv).is_err());
        prop_assert!(records_to_string(&[r], Format::Jsonl).is_err());
    }
}
