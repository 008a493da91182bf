//! Random instance generation and the three-backend timing harness.
//!
//! One solve drives the cut sequence with the cone backend. Every cut is
//! replayed into a separate state per enabled backend, and only those
//! replays are timed, so all backends solve the same sequence of vertex
//! enumeration problems.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use thiserror::Error;

use crate::benson::{
    default_epsilon, ideal_point, solve_molp_observed, Backend, BensonError, CutEvent,
    MolpInstance, SolveObserver, SolveOptions, VeState, DEFAULT_M, DEFAULT_MAX_CUTS,
};
use crate::polyhedron::ConeDD;

pub const NORMAL_SIGMA: f64 = 10.0;
pub const UNIFORM_MAX: f64 = 10.0;

/// Parameters of one random instance: `d` objectives, `n` variables and
/// `2n` constraints.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(d: usize, n: usize, seed: u64) -> Self {
        Self { d, n, seed }
    }

    pub fn m(&self) -> usize {
        2 * self.n
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Rejected {
    #[error("infeasible")]
    Infeasible,
    #[error("ideal point not finite")]
    Unbounded,
    #[error("invalid: {0}")]
    Invalid(String),
}

/// Draws the raw data of an instance without checking it.
///
/// `C` and `A` entries are `N(0, 100)` rounded half away from zero; `b`
/// entries are uniform on `[0, 10]` rounded to an integer. The generator
/// is ChaCha8 seeded from `spec.seed`; normals come from the ziggurat
/// sampler of `rand_distr`.
pub fn draw_data(spec: &GenSpec) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, NORMAL_SIGMA).expect("valid normal parameters");
    let matrix = |rows: usize, rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..rows)
            .map(|_| (0..spec.n).map(|_| normal.sample(rng).round()).collect())
            .collect()
    };
    let c = matrix(spec.d, &mut rng);
    let a = matrix(spec.m(), &mut rng);
    let b = (0..spec.m())
        .map(|_| rng.random_range(0.0..=UNIFORM_MAX).round())
        .collect();
    (c, a, b)
}

/// Draws an instance and accepts it only if it is feasible with a finite
/// ideal point.
pub fn generate_instance(spec: &GenSpec) -> Result<MolpInstance, Rejected> {
    let (c, a, b) = draw_data(spec);
    let inst = MolpInstance::new(c, a, b).map_err(|e| Rejected::Invalid(e.to_string()))?;
    match ideal_point(&inst) {
        Ok(_) => Ok(inst),
        Err(BensonError::Infeasible) => Err(Rejected::Infeasible),
        Err(BensonError::Unbounded) => Err(Rejected::Unbounded),
        Err(e) => Err(Rejected::Invalid(e.to_string())),
    }
}

/// Accepted instances from consecutive seeds `seed, seed + 1, ..` until
/// `count` are found or `max_attempts` seeds were tried. Each instance is
/// keyed by the seed that produced it.
pub fn sample_instances(
    d: usize,
    n: usize,
    count: usize,
    seed: u64,
    max_attempts: usize,
) -> Vec<(u64, MolpInstance)> {
    let mut out = Vec::with_capacity(count);
    for i in 0..max_attempts as u64 {
        if out.len() == count {
            break;
        }
        let s = seed.wrapping_add(i);
        if let Ok(inst) = generate_instance(&GenSpec::new(d, n, s)) {
            out.push((s, inst));
        }
    }
    out
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BackendKind {
    Offline,
    Box,
    Cone,
}

impl BackendKind {
    pub const ALL: [BackendKind; 3] = [BackendKind::Offline, BackendKind::Box, BackendKind::Cone];

    pub fn name(&self) -> &'static str {
        match self {
            BackendKind::Offline => "offline",
            BackendKind::Box => "box",
            BackendKind::Cone => "cone",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn backend(&self, m: f64) -> Backend {
        match self {
            BackendKind::Offline => Backend::Offline,
            BackendKind::Box => Backend::Box { m },
            BackendKind::Cone => Backend::Cone,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOptions {
    /// Defaults to 0.005 for `d = 2` and 0.05 otherwise.
    pub epsilon: Option<f64>,
    pub m: f64,
    pub backends: Vec<BackendKind>,
    /// Repetitions per timed call; the median is reported.
    pub reps: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub max_cuts: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            epsilon: None,
            m: DEFAULT_M,
            backends: BackendKind::ALL.to_vec(),
            reps: 1,
            threads: None,
            max_cuts: DEFAULT_MAX_CUTS,
        }
    }
}

/// One backend at one iteration of one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub instance: u64,
    pub iteration: usize,
    pub backend: BackendKind,
    pub ve_time_s: f64,
    pub actual: usize,
    /// Only reported by the box backend.
    pub artificial: Option<usize>,
    /// Alpha of the vertex whose cut produced this iteration.
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchOutput {
    pub records: Vec<BenchRecord>,
    /// Instances whose solve failed, with the error message.
    pub excluded: Vec<(u64, String)>,
}

struct Replay<'a> {
    instance: u64,
    cone: &'a ConeDD,
    kinds: &'a [BackendKind],
    m: f64,
    reps: usize,
    states: Vec<VeState>,
    records: Vec<BenchRecord>,
}

fn median(mut ts: Vec<Duration>) -> Duration {
    ts.sort();
    ts[ts.len() / 2]
}

impl Replay<'_> {
    fn record(&mut self, iteration: usize, alpha: Option<f64>, times: &[Duration]) {
        for ((kind, state), t) in self.kinds.iter().zip(&self.states).zip(times) {
            let (actual, artificial) = state.counts();
            self.records.push(BenchRecord {
                instance: self.instance,
                iteration,
                backend: *kind,
                ve_time_s: t.as_secs_f64(),
                actual,
                artificial: (*kind == BackendKind::Box).then_some(artificial),
                alpha,
            });
        }
    }
}

impl SolveObserver for Replay<'_> {
    fn on_init(&mut self, apex: &[f64]) -> Result<(), BensonError> {
        let mut times = Vec::new();
        for kind in self.kinds {
            let backend = kind.backend(self.m);
            let mut ts = Vec::with_capacity(self.reps);
            let mut state = None;
            for _ in 0..self.reps {
                let t = Instant::now();
                let s = VeState::init(backend, apex, self.cone)?;
                ts.push(t.elapsed());
                state = Some(s);
            }
            self.states.push(state.expect("at least one repetition"));
            times.push(median(ts));
        }
        self.record(0, None, &times);
        Ok(())
    }

    fn on_cut(&mut self, event: &CutEvent<'_>) -> Result<(), BensonError> {
        let mut times = Vec::new();
        for state in &mut self.states {
            let mut ts = Vec::with_capacity(self.reps);
            for _ in 1..self.reps {
                let mut scratch = state.clone();
                let t = Instant::now();
                scratch.cut(event.halfspace)?;
                ts.push(t.elapsed());
            }
            let t = Instant::now();
            state.cut(event.halfspace)?;
            ts.push(t.elapsed());
            times.push(median(ts));
        }
        self.record(event.iteration, Some(event.alpha), &times);
        Ok(())
    }
}

/// Solves one instance with the cone backend and replays its cuts into
/// every enabled backend.
pub fn bench_instance(
    id: u64,
    inst: &MolpInstance,
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>, BensonError> {
    let eps = opts.epsilon.unwrap_or_else(|| default_epsilon(inst.dim()));
    let mut solve = SolveOptions::new(eps, Backend::Cone);
    solve.max_cuts = opts.max_cuts;
    let mut replay = Replay {
        instance: id,
        cone: inst.cone(),
        kinds: &opts.backends,
        m: opts.m,
        reps: opts.reps.max(1),
        states: Vec::new(),
        records: Vec::new(),
    };
    solve_molp_observed(inst, &solve, &mut replay)?;
    Ok(replay.records)
}

/// Benchmarks all instances in parallel. Records come back ordered by
/// input position, then iteration, then backend.
pub fn run_benchmark(instances: &[(u64, MolpInstance)], opts: &BenchOptions) -> BenchOutput {
    let run = || {
        instances
            .par_iter()
            .map(|(id, inst)| (*id, bench_instance(*id, inst, opts)))
            .collect::<Vec<_>>()
    };
    let results = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };
    let mut out = BenchOutput::default();
    for (id, r) in results {
        match r {
            Ok(rs) => out.records.extend(rs),
            Err(e) => out.excluded.push((id, e.to_string())),
        }
    }
    out
}

/// Number of cuts per instance, in order of first appearance.
pub fn iteration_counts(records: &[BenchRecord]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for r in records {
        match out.iter_mut().find(|(id, _)| *id == r.instance) {
            Some((_, c)) => *c = (*c).max(r.iteration),
            None => out.push((r.instance, r.iteration)),
        }
    }
    out
}

/// Instances ordered by iteration count (descending, ties by id), keeping
/// the first `select` of them, or all when `select` is `None`.
pub fn select_instances(records: &[BenchRecord], select: Option<usize>) -> Vec<(u64, usize)> {
    let mut counts = iteration_counts(records);
    counts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    if let Some(s) = select {
        counts.truncate(s);
    }
    counts
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub iteration: usize,
    pub backend: BackendKind,
    pub samples: usize,
    pub mean_ve_time_s: f64,
    pub mean_actual: f64,
    pub mean_artificial: Option<f64>,
    pub pct_artificial: Option<f64>,
}

/// Per-iteration averages over the selected sub-sample, truncated to the
/// smallest iteration count within it.
pub fn summarize(records: &[BenchRecord], select: Option<usize>) -> Vec<SummaryRow> {
    let chosen = select_instances(records, select);
    let Some(horizon) = chosen.iter().map(|c| c.1).min() else {
        return Vec::new();
    };
    let ids: Vec<u64> = chosen.iter().map(|c| c.0).collect();
    let mut kinds: Vec<BackendKind> = records.iter().map(|r| r.backend).collect();
    kinds.sort();
    kinds.dedup();
    let mut rows = Vec::new();
    for iteration in 0..=horizon {
        for &backend in &kinds {
            let group: Vec<&BenchRecord> = ids
                .iter()
                .filter_map(|id| {
                    records.iter().find(|r| {
                        r.instance == *id && r.iteration == iteration && r.backend == backend
                    })
                })
                .collect();
            if group.is_empty() {
                continue;
            }
            let n = group.len() as f64;
            let mean =
                |f: &dyn Fn(&BenchRecord) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / n;
            let mean_actual = mean(&|r| r.actual as f64);
            let mean_artificial = group
                .iter()
                .all(|r| r.artificial.is_some())
                .then(|| mean(&|r| r.artificial.unwrap_or(0) as f64));
            rows.push(SummaryRow {
                iteration,
                backend,
                samples: group.len(),
                mean_ve_time_s: mean(&|r| r.ve_time_s),
                mean_actual,
                mean_artificial,
                pct_artificial: mean_artificial.map(|a| percentage(a, mean_actual)),
            });
        }
    }
    rows
}

fn percentage(artificial: f64, actual: f64) -> f64 {
    if artificial + actual == 0.0 {
        0.0
    } else {
        100.0 * artificial / (artificial + actual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArtificialRow {
    pub iteration: usize,
    pub samples: usize,
    pub avg_actual: f64,
    pub avg_artificial: f64,
    pub pct_artificial: f64,
}

/// Box-backend vertex counts averaged over the instances that reach each
/// requested iteration. The share is computed from the averages.
pub fn artificial_vertex_table(
    records: &[BenchRecord],
    iterations: &[usize],
) -> Vec<ArtificialRow> {
    iterations
        .iter()
        .filter_map(|&iteration| {
            let mut group: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.backend == BackendKind::Box && r.iteration == iteration)
                .collect();
            if group.is_empty() {
                return None;
            }
            group.sort_by_key(|r| r.instance);
            let n = group.len() as f64;
            let avg_actual = group.iter().map(|r| r.actual as f64).sum::<f64>() / n;
            let avg_artificial = group
                .iter()
                .map(|r| r.artificial.unwrap_or(0) as f64)
                .sum::<f64>()
                / n;
            Some(ArtificialRow {
                iteration,
                samples: group.len(),
                avg_actual,
                avg_artificial,
                pct_artificial: percentage(avg_artificial, avg_actual),
            })
        })
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `instance,iteration,backend,ve_time_s,actual,artificial,alpha`. Times
/// are left empty when `timing` is false, so output is reproducible.
pub fn write_records<W: Write>(w: W, records: &[BenchRecord], timing: bool) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "instance",
        "iteration",
        "backend",
        "ve_time_s",
        "actual",
        "artificial",
        "alpha",
    ])?;
    for r in records {
        out.write_record([
            r.instance.to_string(),
            r.iteration.to_string(),
            r.backend.name().to_string(),
            opt(timing.then_some(r.ve_time_s)),
            r.actual.to_string(),
            opt(r.artificial),
            opt(r.alpha),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `iteration,backend,samples,mean_ve_time_s,mean_actual,mean_artificial,pct_artificial`.
pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow], timing: bool) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "iteration",
        "backend",
        "samples",
        "mean_ve_time_s",
        "mean_actual",
        "mean_artificial",
        "pct_artificial",
    ])?;
    for r in rows {
        out.write_record([
            r.iteration.to_string(),
            r.backend.name().to_string(),
            r.samples.to_string(),
            opt(timing.then_some(r.mean_ve_time_s)),
            r.mean_actual.to_string(),
            opt(r.mean_artificial),
            opt(r.pct_artificial),
        ])?;
    }
    out.flush()?;
    Ok(())
}
