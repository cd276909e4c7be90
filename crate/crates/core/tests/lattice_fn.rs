use drlift::lattice_fn::{
    check_dr, check_lattice_submodular, check_monotone, make_concave_linear, make_nonmonotone_dr,
    Counterexample, GroundCoordinates, LatticeFunction, LatticePoint, Shape,
};
use drlift_testkit::{box_points, desk, dr_violation, lattice_violation};
use proptest::prelude::*;

fn table_function(bounds: Vec<u64>, values: Vec<i64>) -> LatticeFunction {
    let n = bounds.len();
    LatticeFunction::from_fn(n, false, true, move |x| {
        let idx = x
            .iter()
            .zip(&bounds)
            .fold(0usize, |acc, (&xi, &b)| acc * (b as usize + 1) + xi as usize);
        values[idx] as f64
    })
}

/// Integer table on a box with at most two coordinates and bounds up to 3,
/// indexed in odometer order.
fn small_tables() -> impl Strategy<Value = (Vec<u64>, Vec<i64>)> {
    proptest::collection::vec(1u64..=3, 1..=2).prop_flat_map(|bounds| {
        let size = bounds.iter().map(|b| b + 1).product::<u64>() as usize;
        (Just(bounds), proptest::collection::vec(-6i64..=6, size))
    })
}

/// Tables built as sums of concave pieces, so they are often DR.
fn concave_tables() -> impl Strategy<Value = (Vec<u64>, Vec<i64>)> {
    (proptest::collection::vec(1u64..=3, 1..=3), any::<u64>()).prop_map(|(bounds, seed)| {
        let pts = box_points(&bounds);
        let mut s = seed | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        let caps: Vec<i64> = bounds.iter().map(|_| (next() % 4) as i64).collect();
        let cross = (next() % 3) as i64;
        let values = pts
            .iter()
            .map(|x| {
                let sep: i64 = x.iter().zip(&caps).map(|(&xi, &c)| (xi as i64).min(c)).sum();
                let total: i64 = x.iter().map(|&v| v as i64).sum();
                sep + cross * total.min(2)
            })
            .collect();
        (bounds, values)
    })
}

proptest! {
    #[test]
    fn dr_check_agrees_with_definition((bounds, values) in small_tables()) {
        let f = table_function(bounds.clone(), values);
        let gc = GroundCoordinates::new(bounds.clone()).unwrap();
        let local = check_dr(&f, &gc).unwrap();
        let reference = dr_violation(|x| f.eval(x), &bounds, 0.0);
        prop_assert_eq!(local.passed, reference.is_none());
        prop_assert_eq!(local.passed, local.counterexample.is_none());
    }

    #[test]
    fn lattice_check_agrees_with_definition((bounds, values) in small_tables()) {
        let f = table_function(bounds.clone(), values);
        let gc = GroundCoordinates::new(bounds.clone()).unwrap();
        let local = check_lattice_submodular(&f, &gc).unwrap();
        prop_assert_eq!(local.passed, lattice_violation(|x| f.eval(x), &bounds, 0.0).is_none());
    }

    #[test]
    fn dr_implies_lattice_submodular((bounds, values) in concave_tables()) {
        let f = table_function(bounds.clone(), values);
        let gc = GroundCoordinates::new(bounds).unwrap();
        if check_dr(&f, &gc).unwrap().passed {
            prop_assert!(check_lattice_submodular(&f, &gc).unwrap().passed);
        }
    }

    #[test]
    fn reported_dr_counterexample_is_real((bounds, values) in small_tables()) {
        let f = table_function(bounds.clone(), values);
        let gc = GroundCoordinates::new(bounds).unwrap();
        if let Some(Counterexample::DiminishingReturns { x, y, coordinate, .. }) = check_dr(&f, &gc).unwrap().counterexample {
            prop_assert!(x.le(&y));
            let dx = f.eval(&x.increment(coordinate)) - f.eval(&x);
            let dy = f.eval(&y.increment(coordinate)) - f.eval(&y);
            prop_assert!(dx < dy);
        }
    }
}

#[test]
fn zoo_instances_are_dr_by_definition() {
    for inst in desk::mixed(11, 16, 3, 4) {
        let v = check_dr(&inst.f, &inst.gc).unwrap();
        assert!(v.passed, "{}: {:?}", inst.name, v.counterexample);
        assert!(
            dr_violation(|x| inst.f.eval(x), inst.gc.bounds(), v.tolerance).is_none(),
            "{}",
            inst.name
        );
        assert!(
            check_lattice_submodular(&inst.f, &inst.gc).unwrap().passed,
            "{}",
            inst.name
        );
        assert_eq!(
            check_monotone(&inst.f, &inst.gc).unwrap().passed,
            inst.f.is_monotone(),
            "{}",
            inst.name
        );
    }
}

#[test]
fn textbook_validator_examples() {
    let gc = GroundCoordinates::new(vec![5]).unwrap();
    let cap = make_concave_linear(vec![1.0], vec![vec![1]], Shape::MinCap(2.0)).unwrap();
    assert!(check_dr(&cap, &gc).unwrap().passed);

    let gc = GroundCoordinates::new(vec![3]).unwrap();
    let square = LatticeFunction::from_fn(1, true, true, |x| (x[0] * x[0]) as f64);
    match check_dr(&square, &gc).unwrap().counterexample {
        Some(Counterexample::DiminishingReturns { x, y, coordinate, .. }) => {
            assert_eq!(
                (x, y, coordinate),
                (LatticePoint(vec![0]), LatticePoint(vec![1]), 0)
            );
        }
        other => panic!("expected a DR counterexample, got {other:?}"),
    }

    let gc = GroundCoordinates::new(vec![2, 2]).unwrap();
    let product = LatticeFunction::from_fn(2, true, true, |x| (x[0] * x[1]) as f64);
    assert!(!check_lattice_submodular(&product, &gc).unwrap().passed);

    let separable =
        LatticeFunction::from_fn(2, true, false, |x| (x[0] as f64).sqrt() + (x[1] as f64).ln_1p());
    assert!(check_lattice_submodular(&separable, &gc).unwrap().passed);
}

#[test]
fn concave_linear_direct_evaluation() {
    let f = make_concave_linear(vec![1.0, 1.0], vec![vec![1, 1], vec![2, 0]], Shape::Sqrt).unwrap();
    assert_eq!(f.eval(&[1, 1]), 2f64.sqrt() + 2f64.sqrt());
    let cap = make_concave_linear(vec![1.0], vec![vec![1, 0]], Shape::MinCap(2.0)).unwrap();
    for x0 in 0..5 {
        assert_eq!(cap.eval(&[x0, 3]), x0.min(2) as f64);
    }
}

#[test]
fn nonmonotone_generator_examples() {
    let gc = GroundCoordinates::new(vec![3, 3]).unwrap();
    let f = make_nonmonotone_dr(1, &gc).unwrap();
    assert!(check_dr(&f, &gc).unwrap().passed);

    let gc = GroundCoordinates::new(vec![2, 2, 2]).unwrap();
    let f = make_nonmonotone_dr(2, &gc).unwrap();
    let tol = check_dr(&f, &gc).unwrap().tolerance;
    assert!(dr_violation(|x| f.eval(x), gc.bounds(), tol).is_none());
    let witness = box_points(gc.bounds()).into_iter().find_map(|x| {
        (0..3).find(|&i| {
            x[i] < 2 && {
                let mut y = x.clone();
                y[i] += 1;
                f.eval(&y) < f.eval(&x)
            }
        })
    });
    assert!(witness.is_some());
    assert!(box_points(gc.bounds()).iter().all(|x| f.eval(x) >= 0.0));
}

#[test]
fn counter_matches_evaluations() {
    let inst = desk::exact_example();
    inst.f.reset_calls();
    let v = check_dr(&inst.f, &inst.gc).unwrap();
    assert_eq!(inst.f.calls() as u128, v.points);
    assert_eq!(v.points, inst.gc.domain_size());
    for k in 1..=10 {
        inst.f.eval(&[0, 0]);
        assert_eq!(inst.f.calls() as u128, v.points + k);
    }
}
