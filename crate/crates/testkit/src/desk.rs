//! Seeded desk-scale instance suites.

use drlift::continuous::PolymatroidOracle;
use drlift::lattice_fn::{
    make_concave_linear, make_nonmonotone_dr, random_concave_linear, GroundCoordinates, LatticeFunction,
    Shape,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use drlift::reduction::{BuildMode, Constraint, ReducedInstance};

pub struct DeskInstance {
    pub name: String,
    pub f: LatticeFunction,
    pub gc: GroundCoordinates,
}

fn shape_for(rng: &mut ChaCha8Rng) -> Shape {
    match rng.gen_range(0..4) {
        0 => Shape::Sqrt,
        1 => Shape::Log1p,
        2 => Shape::MinCap(rng.gen_range(1..=6) as f64),
        _ => Shape::MinCap(rng.gen_range(1.5..5.5)),
    }
}

fn bounds(rng: &mut ChaCha8Rng, max_dims: usize, max_bound: u64) -> Vec<u64> {
    let dims = rng.gen_range(1..=max_dims);
    (0..dims).map(|_| rng.gen_range(1..=max_bound)).collect()
}

/// Random monotone concave-linear instances.
pub fn monotone(seed: u64, count: usize, max_dims: usize, max_bound: u64) -> Vec<DeskInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let b = bounds(&mut rng, max_dims, max_bound);
            let shape = shape_for(&mut rng);
            let f = random_concave_linear(rng.gen(), b.len(), shape).expect("valid generator input");
            DeskInstance {
                name: format!("monotone-{seed}-{k} {shape} B={b:?}"),
                gc: GroundCoordinates::new(b).expect("nonempty"),
                f,
            }
        })
        .collect()
}

/// Certified non-monotone DR instances.
pub fn nonmonotone(seed: u64, count: usize, max_dims: usize, max_bound: u64) -> Vec<DeskInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let b = bounds(&mut rng, max_dims, max_bound);
            let gc = GroundCoordinates::new(b.clone()).expect("nonempty");
            let f = make_nonmonotone_dr(rng.gen(), &gc).expect("desk domains are small");
            DeskInstance {
                name: format!("nonmonotone-{seed}-{k} B={b:?}"),
                gc,
                f,
            }
        })
        .collect()
}

/// Half monotone, half non-monotone.
pub fn mixed(seed: u64, count: usize, max_dims: usize, max_bound: u64) -> Vec<DeskInstance> {
    let mut out = monotone(seed, count / 2, max_dims, max_bound);
    out.extend(nonmonotone(
        seed.wrapping_add(1),
        count - count / 2,
        max_dims,
        max_bound,
    ));
    out
}

/// Integer-valued instance: `min(x0 + x1, 3) + 2 min(x1, 3)`.
pub fn exact_example() -> DeskInstance {
    let f =
        make_concave_linear(vec![1.0, 2.0], vec![vec![1, 1], vec![0, 1]], Shape::MinCap(3.0)).expect("valid");
    DeskInstance {
        name: "exact-min-cap".into(),
        gc: GroundCoordinates::new(vec![4, 3]).expect("nonempty"),
        f,
    }
}

pub struct PolymatroidCase {
    pub inst: DeskInstance,
    pub p: PolymatroidOracle,
    /// Bounds clipped to singleton ranks.
    pub clipped: GroundCoordinates,
}

/// Alternating monotone and non-monotone instances paired with random polymatroids, keeping those whose
/// clipped exact lift has between 1 and `max_elements` elements.
pub fn polymatroid(seed: u64, count: usize, max_elements: usize) -> Vec<PolymatroidCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count {
        let s = seed.wrapping_add(round);
        let pool = monotone(s, 2 * count, 3, 4)
            .into_iter()
            .zip(nonmonotone(s.wrapping_add(1), 2 * count, 3, 4))
            .flat_map(|(a, b)| [a, b]);
        for inst in pool {
            if out.len() == count {
                break;
            }
            let p = PolymatroidOracle::random(inst.gc.dims(), rng.gen()).expect("small ground set");
            let clipped = Constraint::Polymatroid(p.clone())
                .implied_bounds(&inst.gc)
                .expect("dimensions agree");
            let ri = ReducedInstance::build(&inst.f, &clipped, BuildMode::Exact).expect("valid bounds");
            if ri.is_empty() || ri.len() > max_elements {
                continue;
            }
            drop(ri);
            out.push(PolymatroidCase { inst, p, clipped });
        }
        round += 1000;
    }
    out
}
