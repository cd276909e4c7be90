//! The `run` pipeline: one record per (instance, seed) pair, or the
//! per-budget reduction comparison.

use std::time::Instant;

use drlift::continuous::{maximize_polymatroid, ContinuousGreedyOptions};
use drlift::decomposition::Epsilon;
use drlift::instance::{Instance, InstanceSpec};
use drlift::lattice_fn::{make_concave_linear, GroundCoordinates, LatticeFunction, Shape};
use drlift::reduction::{BuildMode, Constraint, ReducedInstance};
use drlift::solvers::{
    density_greedy, double_greedy_deterministic, double_greedy_randomized, lazy_greedy, maximize_cardinality,
    BruteForce, CardinalityPath, GreedyAlgorithm, SolverResult, DEFAULT_MAX_LATTICE_POINTS,
};
use num_rational::Ratio;

use crate::error::{CliError, CliResult};
use crate::record::ExperimentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Solver {
    DoubleGreedy,
    DoubleGreedyDet,
    DensityGreedy,
    LazyGreedy,
    BruteForce,
    ContinuousGreedy,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::DoubleGreedy => "double-greedy",
            Solver::DoubleGreedyDet => "double-greedy-det",
            Solver::DensityGreedy => "density-greedy",
            Solver::LazyGreedy => "lazy-greedy",
            Solver::BruteForce => "brute-force",
            Solver::ContinuousGreedy => "continuous-greedy",
        }
    }

    pub fn uses_seed(self) -> bool {
        matches!(self, Solver::DoubleGreedy | Solver::ContinuousGreedy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exact,
    Refined,
    Naive,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub solver: Solver,
    pub seeds: Vec<u64>,
    pub epsilon: Option<Epsilon>,
    pub mode: Mode,
    pub steps: usize,
    pub samples: usize,
    pub timing: bool,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            solver: Solver::DoubleGreedy,
            seeds: vec![0],
            epsilon: None,
            mode: Mode::Exact,
            steps: 100,
            samples: 0,
            timing: false,
            jobs: 1,
        }
    }
}

pub const DEFAULT_EPSILON: (u64, u64) = (1, 10);

impl RunOptions {
    fn epsilon_or_default(&self) -> Epsilon {
        self.epsilon
            .unwrap_or_else(|| Ratio::new(DEFAULT_EPSILON.0, DEFAULT_EPSILON.1))
    }

    fn build_mode(&self) -> CliResult<BuildMode> {
        Ok(match self.mode {
            Mode::Exact => BuildMode::Exact,
            Mode::Naive => BuildMode::NaiveCopies,
            Mode::Refined => BuildMode::Refined(
                self.epsilon
                    .ok_or_else(|| CliError::Usage("--mode refined needs --epsilon".into()))?,
            ),
        })
    }
}

fn as_f64(e: Epsilon) -> f64 {
    *e.numer() as f64 / *e.denom() as f64
}

/// Optimum of `f` over the feasible box, when the box is small enough.
pub fn lattice_opt(inst: &Instance) -> CliResult<Option<f64>> {
    if inst.coordinates.domain_size() > DEFAULT_MAX_LATTICE_POINTS {
        return Ok(None);
    }
    let (_, v) =
        BruteForce::default().solve_lattice(&inst.function, &inst.coordinates, inst.constraint.as_ref())?;
    Ok(Some(v))
}

struct Outcome {
    mode: String,
    value: f64,
    oracle_calls: u64,
}

impl From<(String, SolverResult)> for Outcome {
    fn from((mode, r): (String, SolverResult)) -> Self {
        Outcome {
            mode,
            value: r.value,
            oracle_calls: r.oracle_calls,
        }
    }
}

fn solve(inst: &Instance, opts: &RunOptions, seed: u64) -> CliResult<Outcome> {
    let f = &inst.function;
    let gc = &inst.coordinates;
    let constraint = inst.constraint.as_ref();
    match opts.solver {
        Solver::DoubleGreedy | Solver::DoubleGreedyDet => {
            if constraint.is_some() {
                return Err(CliError::Usage(format!(
                    "{} is unconstrained but the instance has a constraint",
                    opts.solver.name()
                )));
            }
            let ri = ReducedInstance::build(f, gc, opts.build_mode()?)?;
            let r = if opts.solver == Solver::DoubleGreedy {
                double_greedy_randomized(&ri, seed)
            } else {
                double_greedy_deterministic(&ri)
            };
            Ok((ri.mode().to_string(), r).into())
        }
        Solver::BruteForce => {
            let clipped = match constraint {
                Some(c) => c.implied_bounds(gc)?,
                None => gc.clone(),
            };
            let ri = ReducedInstance::build(f, &clipped, opts.build_mode()?)?;
            let lifted = constraint.map(|c| ri.lift_constraint(c)).transpose()?;
            let r = BruteForce::default().solve(&ri, lifted.as_ref())?;
            Ok((ri.mode().to_string(), r).into())
        }
        Solver::DensityGreedy | Solver::LazyGreedy => {
            let eps = opts.epsilon_or_default();
            match constraint {
                Some(Constraint::Cardinality(k)) => {
                    let algo = if opts.solver == Solver::LazyGreedy {
                        GreedyAlgorithm::Lazy
                    } else {
                        GreedyAlgorithm::Thresholds
                    };
                    let (r, path) = maximize_cardinality(f, gc, *k, eps, algo)?;
                    let mode = match path {
                        CardinalityPath::Copies => BuildMode::NaiveCopies.label(),
                        CardinalityPath::SmallWeights => BuildMode::Refined(eps).label(),
                    };
                    Ok((mode, r).into())
                }
                Some(c @ Constraint::Knapsack { .. }) => {
                    let ri = ReducedInstance::build_small_weights(f, gc, c, eps)?.ok_or_else(|| {
                        CliError::Usage(format!(
                            "budget too small for a lift with weights at most {eps} of it"
                        ))
                    })?;
                    let lifted = ri.lift_constraint(c)?;
                    let r = if opts.solver == Solver::LazyGreedy {
                        lazy_greedy(&ri, &lifted, as_f64(eps))?
                    } else {
                        density_greedy(&ri, &lifted, as_f64(eps))?
                    };
                    Ok((ri.mode().to_string(), r).into())
                }
                _ => Err(CliError::Usage(format!(
                    "{} needs a cardinality or knapsack constraint",
                    opts.solver.name()
                ))),
            }
        }
        Solver::ContinuousGreedy => {
            let Some(Constraint::Polymatroid(p)) = constraint else {
                return Err(CliError::Usage(
                    "continuous-greedy needs a polymatroid constraint".into(),
                ));
            };
            let copts = ContinuousGreedyOptions {
                steps: opts.steps,
                samples: opts.samples,
                seed,
                keep_history: false,
            };
            let sol = maximize_polymatroid(f, gc, p, &copts)?;
            Ok(Outcome {
                mode: BuildMode::Exact.label(),
                value: sol.value,
                oracle_calls: sol.oracle_calls,
            })
        }
    }
}

/// Builds `spec` afresh (so the call counter is private to this run), solves
/// and attaches the lattice optimum when it is computable.
pub fn run_one(spec: &InstanceSpec, opts: &RunOptions, seed: u64) -> CliResult<ExperimentRecord> {
    let inst = spec.build()?;
    let start = Instant::now();
    let out = solve(&inst, opts, seed)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let opt = lattice_opt(&inst)?;
    Ok(ExperimentRecord {
        instance_id: inst.id.clone(),
        mode: out.mode,
        solver: opts.solver.name().to_string(),
        value: out.value,
        opt: None,
        ratio: None,
        oracle_calls: out.oracle_calls,
        wall_ms: opts.timing.then_some(elapsed),
        seed: opts.solver.uses_seed().then_some(seed),
    }
    .with_opt(opt))
}

/// Runs every (instance, seed) pair, fanning out over `opts.jobs` threads.
/// Records come back in input order whatever the thread count.
pub fn run_all(specs: &[InstanceSpec], opts: &RunOptions) -> CliResult<Vec<ExperimentRecord>> {
    let seeds: Vec<u64> = if opts.solver.uses_seed() {
        opts.seeds.clone()
    } else {
        opts.seeds.iter().copied().take(1).collect()
    };
    let pairs: Vec<(&InstanceSpec, u64)> = specs
        .iter()
        .flat_map(|s| seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let jobs = opts.jobs.max(1).min(pairs.len().max(1));
    if jobs == 1 {
        return pairs.iter().map(|(s, seed)| run_one(s, opts, *seed)).collect();
    }
    let mut slots: Vec<Option<CliResult<ExperimentRecord>>> = (0..pairs.len()).map(|_| None).collect();
    let chunk = pairs.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        for (pair_chunk, slot_chunk) in pairs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for ((s, seed), slot) in pair_chunk.iter().zip(slot_chunk) {
                    *slot = Some(run_one(s, opts, *seed));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every slot is filled"))
        .collect()
}

pub const DEFAULT_BUDGETS: [u64; 13] = [
    1 << 4,
    1 << 5,
    1 << 6,
    1 << 7,
    1 << 8,
    1 << 9,
    1 << 10,
    1 << 11,
    1 << 12,
    1 << 13,
    1 << 14,
    1 << 15,
    1 << 16,
];

/// The fixed scaling objective on four coordinates:
/// `3 sqrt(x0) + sqrt(x1) + 2 sqrt(x2) + sqrt(x3) + 2 sqrt(x0 + x1 + x2 + x3)`.
pub fn default_scaling_objective() -> LatticeFunction {
    let mut directions: Vec<Vec<u64>> = (0..4)
        .map(|i| (0..4).map(|j| u64::from(i == j)).collect())
        .collect();
    directions.push(vec![1; 4]);
    make_concave_linear(vec![3.0, 1.0, 2.0, 1.0, 2.0], directions, Shape::Sqrt)
        .expect("fixed objective is well formed")
}

/// For every budget `B`, runs the unconstrained solver with all bounds set
/// to `B` under the log reduction and under naive copies (plus the refined
/// reduction when an epsilon is given).
pub fn compare_reductions(
    spec: Option<&InstanceSpec>,
    budgets: &[u64],
    opts: &RunOptions,
) -> CliResult<Vec<(u64, ExperimentRecord)>> {
    if !matches!(opts.solver, Solver::DoubleGreedy | Solver::DoubleGreedyDet) {
        return Err(CliError::Usage(
            "--compare-reductions runs double-greedy or double-greedy-det".into(),
        ));
    }
    let mut modes = vec![BuildMode::Exact];
    if let Some(eps) = opts.epsilon {
        modes.push(BuildMode::Refined(eps));
    }
    modes.push(BuildMode::NaiveCopies);
    let seed = opts.seeds.first().copied().unwrap_or(0);
    let mut records = Vec::new();
    for &b in budgets {
        let (f, dims, base_id) = match spec {
            Some(s) => {
                let mut s = s.clone();
                s.bounds = vec![b; s.bounds.len()];
                s.constraint = None;
                let inst = s.build()?;
                (inst.function, inst.coordinates.dims(), inst.id)
            }
            None => (default_scaling_objective(), 4, "scaling".to_string()),
        };
        let gc = GroundCoordinates::new(vec![b; dims])?;
        for &mode in &modes {
            let ri = ReducedInstance::build(&f, &gc, mode)?;
            let start = Instant::now();
            let r = if opts.solver == Solver::DoubleGreedy {
                double_greedy_randomized(&ri, seed)
            } else {
                double_greedy_deterministic(&ri)
            };
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            records.push((
                b,
                ExperimentRecord {
                    instance_id: format!("{base_id}-B{b}"),
                    mode: ri.mode().to_string(),
                    solver: opts.solver.name().to_string(),
                    value: r.value,
                    opt: None,
                    ratio: None,
                    oracle_calls: r.oracle_calls,
                    wall_ms: opts.timing.then_some(elapsed),
                    seed: opts.solver.uses_seed().then_some(seed),
                },
            ));
        }
    }
    Ok(records)
}
