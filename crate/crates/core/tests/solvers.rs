use drlift::lattice_fn::{make_concave_linear, GroundCoordinates, LatticeFunction, Shape};
use drlift::reduction::{BuildMode, Constraint, LiftedConstraint, ReducedInstance};
use drlift::solvers::{
    brute_force, brute_force_lattice, density_greedy, double_greedy_deterministic, double_greedy_randomized,
    lazy_greedy, maximize_cardinality, CardinalityPath, GreedyAlgorithm,
};
use drlift::Error;
use drlift_testkit::{desk, lattice_max};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;

#[test]
fn brute_force_agrees_with_both_enumerations() {
    for inst in desk::mixed(31, 16, 3, 5) {
        let ri = ReducedInstance::build(&inst.f, &inst.gc, BuildMode::Exact).unwrap();
        let lifted = brute_force(&ri, None).unwrap();
        let (_, lattice) = brute_force_lattice(&inst.f, &inst.gc, None).unwrap();
        let reference = lattice_max(|x| inst.f.eval(x), inst.gc.bounds(), |_| true);
        assert_eq!(lifted.value, reference, "{}", inst.name);
        assert_eq!(lattice, reference, "{}", inst.name);
    }
    let gc = GroundCoordinates::new(vec![5]).unwrap();
    let cap = make_concave_linear(vec![1.0], vec![vec![1]], Shape::MinCap(2.0)).unwrap();
    let ri = ReducedInstance::build(&cap, &gc, BuildMode::Exact).unwrap();
    assert_eq!(brute_force(&ri, None).unwrap().value, 2.0);
    let zero = LatticeFunction::from_fn(1, true, true, |_| 0.0);
    let ri = ReducedInstance::build(&zero, &gc, BuildMode::Exact).unwrap();
    assert_eq!(brute_force(&ri, None).unwrap().value, 0.0);
}

#[test]
fn deterministic_double_greedy_third_of_opt() {
    for inst in desk::mixed(41, 30, 3, 6) {
        let ri = ReducedInstance::build(&inst.f, &inst.gc, BuildMode::Exact).unwrap();
        let opt = lattice_max(|x| inst.f.eval(x), inst.gc.bounds(), |_| true);
        let r = double_greedy_deterministic(&ri);
        assert!(
            r.value >= (1.0 / 3.0 - 1e-9) * opt,
            "{}: {} vs {opt}",
            inst.name,
            r.value
        );
        assert!(r.oracle_calls <= 4 * ri.len() as u64);
        assert_eq!(r.oracle_calls, 2 * ri.len() as u64 + 2);
        assert_eq!(r.point, ri.map_back(&r.solution));
        assert_eq!(r.value, ri.eval_g(&r.solution));
    }
}

#[test]
fn randomized_double_greedy_is_reproducible() {
    for inst in desk::nonmonotone(43, 6, 3, 6) {
        let ri = ReducedInstance::build(&inst.f, &inst.gc, BuildMode::Exact).unwrap();
        for seed in 0..5 {
            let a = double_greedy_randomized(&ri, seed);
            let b = double_greedy_randomized(&ri, seed);
            assert_eq!(a, b);
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.seed, Some(seed));
            assert_eq!(a.value, ri.eval_g(&a.solution));
        }
    }
}

#[test]
fn modular_monotone_takes_everything() {
    let f = make_concave_linear(
        vec![1.0, 2.0],
        vec![vec![1, 0], vec![0, 1]],
        Shape::MinCap(1000.0),
    )
    .unwrap();
    let gc = GroundCoordinates::new(vec![6, 3]).unwrap();
    let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
    for r in [double_greedy_deterministic(&ri), double_greedy_randomized(&ri, 3)] {
        assert!(r.solution.iter().all(|&s| s));
        assert_eq!(r.value, f.eval(&[6, 3]));
    }
}

fn cardinality_feasible(k: u64) -> impl Fn(&[u64]) -> bool {
    move |x: &[u64]| x.iter().sum::<u64>() <= k
}

#[test]
fn greedies_meet_the_cardinality_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let eps = Ratio::new(1, 10);
    let mut seen = (false, false);
    for inst in desk::monotone(51, 24, 3, 12) {
        let k = rng.gen_range(1..=20);
        let opt = lattice_max(|x| inst.f.eval(x), inst.gc.bounds(), cardinality_feasible(k));
        for algo in [GreedyAlgorithm::Thresholds, GreedyAlgorithm::Lazy] {
            let (r, path) = maximize_cardinality(&inst.f, &inst.gc, k, eps, algo).unwrap();
            assert!(cardinality_feasible(k)(&r.point), "{}", inst.name);
            assert!(
                r.value >= (ONE_MINUS_INV_E - 0.1) * opt,
                "{} {algo:?}: {} vs {opt}",
                inst.name,
                r.value
            );
            assert_eq!(r.value, inst.f.eval(&r.point));
            match path {
                CardinalityPath::Copies => {
                    assert!(k <= 10);
                    seen.0 = true;
                }
                CardinalityPath::SmallWeights => {
                    assert!(k > 10);
                    seen.1 = true;
                }
            }
        }
    }
    assert!(seen.0 && seen.1, "both paths exercised");
}

#[test]
fn greedies_meet_the_knapsack_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let eps = Ratio::new(1, 4);
    let mut ran = 0;
    for inst in desk::monotone(53, 24, 3, 10) {
        let costs: Vec<f64> = (0..inst.gc.dims()).map(|_| rng.gen_range(1..=3) as f64).collect();
        let budget = rng.gen_range(8..=30) as f64;
        let c = Constraint::Knapsack {
            costs: costs.clone(),
            budget,
        };
        let Some(ri) = ReducedInstance::build_small_weights(&inst.f, &inst.gc, &c, eps).unwrap() else {
            continue;
        };
        ran += 1;
        let lifted = ri.lift_constraint(&c).unwrap();
        let fits = |x: &[u64]| x.iter().zip(&costs).map(|(&xi, c)| xi as f64 * c).sum::<f64>() <= budget;
        let opt = lattice_max(|x| inst.f.eval(x), inst.gc.bounds(), fits);
        for r in [
            density_greedy(&ri, &lifted, 0.25).unwrap(),
            lazy_greedy(&ri, &lifted, 0.25).unwrap(),
        ] {
            assert!(fits(&r.point));
            assert!(
                r.value >= (ONE_MINUS_INV_E - 0.25) * opt,
                "{}: {} vs {opt}",
                inst.name,
                r.value
            );
        }
    }
    assert!(ran >= 12);
}

#[test]
fn greedy_fills_a_loose_budget() {
    let inst = desk::exact_example();
    let ri = ReducedInstance::build(&inst.f, &inst.gc, BuildMode::Exact).unwrap();
    let weights: Vec<f64> = ri.elements().iter().map(|e| e.value as f64).collect();
    let total: f64 = weights.iter().sum::<f64>() * 10.0;
    let lifted = LiftedConstraint::Knapsack {
        weights,
        budget: total,
    };
    for r in [
        density_greedy(&ri, &lifted, 0.1).unwrap(),
        lazy_greedy(&ri, &lifted, 0.1).unwrap(),
    ] {
        assert_eq!(r.value, inst.f.eval(inst.gc.bounds()));
    }
}

#[test]
fn greedy_preconditions() {
    let inst = &desk::nonmonotone(1, 1, 2, 3)[0];
    let ri = ReducedInstance::build(&inst.f, &inst.gc, BuildMode::Exact).unwrap();
    let lifted = ri.lift_constraint(&Constraint::Cardinality(100)).unwrap();
    assert_eq!(density_greedy(&ri, &lifted, 0.1), Err(Error::NotMonotone));
    let mono = desk::exact_example();
    let ri = ReducedInstance::build(&mono.f, &mono.gc, BuildMode::Exact).unwrap();
    let lifted = ri.lift_constraint(&Constraint::Cardinality(3)).unwrap();
    assert!(matches!(
        density_greedy(&ri, &lifted, 0.1),
        Err(Error::WeightsTooLarge { .. })
    ));
    assert!(matches!(
        lazy_greedy(&ri, &lifted, 0.1),
        Err(Error::WeightsTooLarge { .. })
    ));
}
