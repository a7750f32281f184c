//! The parallel portfolio: presolve once, run one heuristic pipeline per
//! worker thread, and funnel every feasible find into a shared incumbent that
//! is mirrored to a `.sol` file.
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bnb::{solve_bnb, BnbBudget, BnbOptions, BnbStatus, IncumbentSink};
use crate::deadline::Deadline;
use crate::diving::{dive_with_trace, DiveRule, DEFAULT_MAX_DIVES};
use crate::error::{Error, Result};
use crate::fpump::{run_fp, FpConfig, FpOutcome};
use crate::model::{evaluate, ProblemInstance, Solution};
use crate::presolve::{presolve, uncrush, PresolveRecord};
use crate::rlb::{run_rlb, RlbConfig};
use crate::rounding::complete_assignment;
use crate::sol::{reported_objective, write_atomically, write_sol};

/// Integer ranges are capped to this magnitude when sampling.
pub const SAMPLE_RANGE_CAP: f64 = 1e6;
/// Improvements must beat the incumbent by more than this.
pub const IMPROVEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Stage {
    Dive { rule: DiveRule },
    Fp(FpConfig),
    Rlb(RlbConfig),
    RandomInstantiation { seed: u64 },
    Bnb,
}

impl Stage {
    fn name(&self) -> String {
        match self {
            Stage::Dive { rule: DiveRule::Dive1 } => "dive1".into(),
            Stage::Dive { rule: DiveRule::Dive2 } => "dive2".into(),
            Stage::Dive {
                rule: DiveRule::Dive3 { seed },
            } => format!("dive3({seed})"),
            Stage::Fp(c) => format!("fp({}:{}:{})", c.iterations, c.period, c.alpha),
            Stage::Rlb(c) => format!("rlb({})", c.k),
            Stage::RandomInstantiation { seed } => format!("random({seed})"),
            Stage::Bnb => "bnb".into(),
        }
    }

    fn seeds_repair(&self) -> bool {
        matches!(self, Stage::Dive { .. } | Stage::Fp(_))
    }

    /// The same stage with `offset` added to its random seed.
    fn reseeded(&self, offset: u64) -> Stage {
        match self.clone() {
            Stage::Dive {
                rule: DiveRule::Dive3 { seed },
            } => Stage::Dive {
                rule: DiveRule::Dive3 {
                    seed: seed.wrapping_add(offset),
                },
            },
            Stage::Fp(mut c) => {
                c.seed = c.seed.wrapping_add(offset);
                Stage::Fp(c)
            }
            Stage::RandomInstantiation { seed } => Stage::RandomInstantiation {
                seed: seed.wrapping_add(offset),
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerConfig {
    #[serde(default)]
    pub id: usize,
    pub stages: Vec<Stage>,
}

impl WorkerConfig {
    pub fn new(id: usize, stages: Vec<Stage>) -> Self {
        WorkerConfig { id, stages }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::InvalidConfig(format!("worker {}: {msg}", self.id)));
        if self.stages.is_empty() {
            return invalid("no stages");
        }
        for (k, stage) in self.stages.iter().enumerate() {
            match stage {
                Stage::Bnb if k + 1 != self.stages.len() => return invalid("bnb must be the last stage"),
                Stage::Rlb(_) if !self.stages[..k].iter().any(Stage::seeds_repair) => {
                    return invalid("rlb needs an earlier dive or fp stage")
                }
                Stage::Fp(c) => c.validate()?,
                _ => {}
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        self.stages.iter().map(Stage::name).collect::<Vec<_>>().join("+")
    }
}

fn fp(alpha: f64, seed: u64) -> Stage {
    Stage::Fp(FpConfig {
        alpha,
        iterations: 10,
        period: 20,
        seed,
    })
}

/// The eight-thread configuration; fewer threads take a prefix, more cycle.
pub fn default_portfolio(thread_count: usize) -> Result<Vec<WorkerConfig>> {
    if thread_count == 0 {
        return Err(Error::InvalidConfig("at least one thread is required".into()));
    }
    let dive = |rule| Stage::Dive { rule };
    let rlb = || Stage::Rlb(RlbConfig::default());
    let base = [
        vec![dive(DiveRule::Dive1), Stage::Bnb],
        vec![dive(DiveRule::Dive2), Stage::Bnb],
        vec![dive(DiveRule::Dive3 { seed: 100 }), rlb(), Stage::Bnb],
        vec![dive(DiveRule::Dive3 { seed: 200 }), Stage::Bnb],
        vec![fp(0.4, 0), Stage::Bnb],
        vec![fp(0.9, 0), rlb(), Stage::Bnb],
        vec![fp(0.4, 0), rlb(), Stage::Bnb],
        vec![Stage::RandomInstantiation { seed: 0 }],
    ];
    Ok((0..thread_count)
        .map(|i| WorkerConfig::new(i, base[i % base.len()].clone()))
        .collect())
}

/// A portfolio from JSON: an array of `{"stages": [...]}` objects.
pub fn portfolio_from_json(text: &str) -> Result<Vec<WorkerConfig>> {
    let mut workers: Vec<WorkerConfig> = serde_json::from_str(text)?;
    if workers.is_empty() {
        return Err(Error::InvalidConfig("empty portfolio".into()));
    }
    for (i, w) in workers.iter_mut().enumerate() {
        w.id = i;
        w.validate()?;
    }
    Ok(workers)
}

/// Samples integer values uniformly, completes the continuous part by LP and
/// keeps the first feasible result.
pub fn random_instantiation(instance: &ProblemInstance, rng: &mut ChaCha8Rng, deadline: &Deadline, max_samples: u64) -> Option<Solution> {
    let integers = instance.integer_indices();
    let ranges: Vec<(i64, i64)> = integers
        .iter()
        .map(|&j| {
            let lo = instance.lower[j].max(-SAMPLE_RANGE_CAP).ceil() as i64;
            let hi = instance.upper[j].min(SAMPLE_RANGE_CAP).floor() as i64;
            (lo, hi)
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return None;
    }
    let mut values = vec![0.0; instance.num_vars()];
    for _ in 0..max_samples {
        if deadline.expired() {
            break;
        }
        for (&j, &(lo, hi)) in integers.iter().zip(&ranges) {
            values[j] = rng.gen_range(lo..=hi) as f64;
        }
        if let Some(sol) = complete_assignment(instance, &values, deadline) {
            return Some(sol);
        }
    }
    None
}

/// Timestamped CSV event lines `time_s,worker,event,objective`. Times are
/// whole seconds since the run started.
#[derive(Debug)]
pub struct EventLog {
    start: Instant,
    lines: Mutex<Vec<String>>,
    file: Mutex<Option<BufWriter<File>>>,
}

impl EventLog {
    pub const HEADER: &'static str = "time_s,worker,event,objective";

    pub fn in_memory() -> Self {
        EventLog {
            start: Instant::now(),
            lines: Mutex::new(Vec::new()),
            file: Mutex::new(None),
        }
    }

    pub fn to_file(path: &Path) -> Result<Self> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "{}", Self::HEADER)?;
        w.flush()?;
        Ok(EventLog {
            file: Mutex::new(Some(w)),
            ..Self::in_memory()
        })
    }

    pub fn record(&self, worker: Option<usize>, event: &str, objective: Option<f64>) {
        let mut line = String::new();
        let _ = write!(line, "{},", self.start.elapsed().as_secs());
        if let Some(w) = worker {
            let _ = write!(line, "{w}");
        }
        let _ = write!(line, ",{event},");
        if let Some(z) = objective {
            let _ = write!(line, "{z}");
        }
        if let Some(w) = self.file.lock().unwrap().as_mut() {
            let _ = writeln!(w, "{line}").and_then(|_| w.flush());
        }
        self.lines.lock().unwrap().push(line);
    }

    pub fn lines(&self) -> Vec<String> {
        self.lines.lock().unwrap().clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    pub elapsed: Duration,
    pub worker: usize,
    /// Minimization-form objective in the original space.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UpdateOutcome {
    Accepted,
    NotBetter,
    /// The candidate is not feasible for the original instance.
    Rejected(String),
}

#[derive(Debug, Default)]
struct StoreState {
    best: Option<Solution>,
    log: Vec<Improvement>,
}

/// The shared incumbent, always feasible for the original instance.
#[derive(Debug)]
pub struct IncumbentStore {
    state: Mutex<StoreState>,
    sol_path: Option<PathBuf>,
    events: Arc<EventLog>,
    start: Instant,
}

impl IncumbentStore {
    pub fn new(sol_path: Option<PathBuf>) -> Self {
        Self::with_events(sol_path, Arc::new(EventLog::in_memory()))
    }

    pub fn with_events(sol_path: Option<PathBuf>, events: Arc<EventLog>) -> Self {
        IncumbentStore {
            state: Mutex::new(StoreState::default()),
            sol_path,
            events,
            start: Instant::now(),
        }
    }

    pub fn best(&self) -> Option<Solution> {
        self.state.lock().unwrap().best.clone()
    }

    pub fn best_objective(&self) -> Option<f64> {
        self.state.lock().unwrap().best.as_ref().map(|s| s.objective)
    }

    pub fn improvements(&self) -> Vec<Improvement> {
        self.state.lock().unwrap().log.clone()
    }

    /// Maps a reduced-space candidate to the original space and installs it
    /// if it beats the incumbent by more than [`IMPROVEMENT_TOL`]. Accepted
    /// solutions are written to the `.sol` target before the lock is released.
    pub fn try_update(&self, worker: usize, candidate: &Solution, record: &PresolveRecord, original: &ProblemInstance) -> UpdateOutcome {
        let full = match uncrush(candidate, record, original) {
            Ok(s) if s.is_feasible() => s,
            Ok(s) => {
                let msg = format!("violation {}", s.max_violation);
                self.events.record(Some(worker), "rejected", None);
                return UpdateOutcome::Rejected(msg);
            }
            Err(e) => {
                self.events.record(Some(worker), "rejected", None);
                return UpdateOutcome::Rejected(e.to_string());
            }
        };
        let mut state = self.state.lock().unwrap();
        if let Some(best) = &state.best {
            if full.objective >= best.objective - IMPROVEMENT_TOL {
                return UpdateOutcome::NotBetter;
            }
        }
        if let Some(path) = &self.sol_path {
            if write_atomically(path, &write_sol(&full, original)).is_err() {
                self.events.record(Some(worker), "sol_write_failed", None);
            }
        }
        self.events
            .record(Some(worker), "incumbent", Some(reported_objective(original, full.objective)));
        state.log.push(Improvement {
            elapsed: self.start.elapsed(),
            worker,
            objective: full.objective,
        });
        state.best = Some(full);
        UpdateOutcome::Accepted
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkerReport {
    pub id: usize,
    pub description: String,
    pub found: bool,
    pub bnb_status: Option<BnbStatus>,
    pub bnb_nodes: u64,
    /// Lower bound from this worker's tree search, in the original space.
    pub lower_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Optimal,
    Feasible,
    NoSolution,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: RunStatus,
    /// Original-space incumbent.
    pub best: Option<Solution>,
    /// Valid lower bound on the minimization-form objective.
    pub best_bound: f64,
    pub workers: Vec<WorkerReport>,
    pub improvements: Vec<Improvement>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Added to every stage seed.
    pub seed: u64,
    pub sol_path: Option<PathBuf>,
    pub log_path: Option<PathBuf>,
}

struct Shared<'a> {
    original: &'a ProblemInstance,
    reduced: &'a ProblemInstance,
    record: &'a PresolveRecord,
    store: &'a IncumbentStore,
    events: &'a EventLog,
    deadline: Deadline,
    stop: &'a AtomicBool,
    seed: u64,
}

impl Shared<'_> {
    fn submit(&self, worker: usize, sol: &Solution) {
        self.store.try_update(worker, sol, self.record, self.original);
    }

    fn global_incumbent(&self) -> Option<Solution> {
        let best = self.store.best()?;
        let crushed = self.record.crush(&best.values).ok()?;
        evaluate(self.reduced, &crushed).ok().filter(Solution::is_feasible)
    }
}

struct WorkerSink<'a, 'b> {
    shared: &'a Shared<'b>,
    worker: usize,
}

impl IncumbentSink for WorkerSink<'_, '_> {
    fn improved(&mut self, solution: &Solution) {
        self.shared.submit(self.worker, solution);
    }
}

fn run_worker(shared: &Shared<'_>, config: &WorkerConfig) -> WorkerReport {
    let id = config.id;
    let mut report = WorkerReport {
        id,
        description: config.describe(),
        found: false,
        bnb_status: None,
        bnb_nodes: 0,
        lower_bound: f64::NEG_INFINITY,
    };
    let reduced = shared.reduced;
    let mut own: Option<Solution> = None;
    let mut repair_seed: Option<Vec<f64>> = None;
    for (k, stage) in config.stages.iter().enumerate() {
        if shared.deadline.expired() {
            break;
        }
        let stage = stage.reseeded(shared.seed);
        let last = k + 1 == config.stages.len();
        let deadline = if last { shared.deadline.clone() } else { shared.deadline.share(0.5) };
        shared.events.record(Some(id), &format!("start:{}", stage.name()), None);
        let found = match &stage {
            Stage::Dive { rule } => {
                let out = dive_with_trace(reduced, *rule, DEFAULT_MAX_DIVES, &deadline);
                repair_seed = out.seed_point;
                out.solution
            }
            Stage::Fp(cfg) => match run_fp(reduced, cfg, &deadline) {
                FpOutcome::Feasible(sol) => Some(sol),
                FpOutcome::Exhausted { x_tilde, .. } => {
                    repair_seed = Some(x_tilde);
                    None
                }
                FpOutcome::NoPoint => None,
            },
            Stage::Rlb(cfg) => match (&own, &repair_seed) {
                (None, Some(seed)) => run_rlb(reduced, seed, cfg, &deadline),
                _ => None,
            },
            Stage::RandomInstantiation { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                random_instantiation(reduced, &mut rng, &deadline, u64::MAX)
            }
            Stage::Bnb => {
                let warm = own.clone().or_else(|| shared.global_incumbent());
                let options = BnbOptions {
                    seed: shared.seed.wrapping_add(id as u64),
                    ..BnbOptions::default()
                };
                let mut sink = WorkerSink { shared, worker: id };
                let res = solve_bnb(reduced, warm.as_ref(), &BnbBudget::until(deadline), &options, &mut sink);
                report.bnb_status = Some(res.status);
                report.bnb_nodes = res.nodes;
                report.lower_bound = res.lower_bound;
                let status = format!("bnb_done:{:?}", res.status).to_lowercase();
                shared.events.record(Some(id), &status, None);
                if matches!(res.status, BnbStatus::Optimal | BnbStatus::Infeasible) {
                    shared.stop.store(true, Ordering::Relaxed);
                }
                None
            }
        };
        if let Some(sol) = found {
            shared
                .events
                .record(Some(id), &format!("found:{}", stage.name()), Some(reported_objective(shared.original, sol.objective)));
            shared.submit(id, &sol);
            report.found = true;
            if own.as_ref().is_none_or(|o| sol.objective < o.objective) {
                own = Some(sol);
            }
        }
    }
    shared.events.record(Some(id), "done", None);
    report
}

/// Runs the portfolio on `original` for at most `time_limit`.
pub fn run_poutine(original: &ProblemInstance, portfolio: &[WorkerConfig], time_limit: Duration, options: &RunOptions) -> Result<RunReport> {
    if time_limit.is_zero() {
        return Err(Error::InvalidConfig("time limit must be positive".into()));
    }
    if portfolio.is_empty() {
        return Err(Error::InvalidConfig("empty portfolio".into()));
    }
    for w in portfolio {
        w.validate()?;
    }
    original.validate()?;
    let started = Instant::now();
    let events = Arc::new(match &options.log_path {
        Some(p) => EventLog::to_file(p)?,
        None => EventLog::in_memory(),
    });
    let store = IncumbentStore::with_events(options.sol_path.clone(), events.clone());

    let (reduced, record) = match presolve(original) {
        Ok(r) => r,
        Err(Error::ProvenInfeasible(_)) => {
            events.record(None, "infeasible:presolve", None);
            return Ok(RunReport {
                status: RunStatus::Infeasible,
                best: None,
                best_bound: f64::INFINITY,
                workers: Vec::new(),
                improvements: Vec::new(),
                elapsed: started.elapsed(),
            });
        }
        Err(e) => return Err(e),
    };
    events.record(None, &format!("presolved:{}x{}", reduced.num_vars(), reduced.num_rows()), None);

    let stop = Arc::new(AtomicBool::new(false));
    let deadline = Deadline::after(time_limit).with_stop(stop.clone());
    let shared = Shared {
        original,
        reduced: &reduced,
        record: &record,
        store: &store,
        events: &events,
        deadline,
        stop: &stop,
        seed: options.seed,
    };
    let workers: Vec<WorkerReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = portfolio
            .iter()
            .map(|cfg| {
                let shared = &shared;
                scope.spawn(move || run_worker(shared, cfg))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let best = store.best();
    let proven_infeasible = workers.iter().any(|w| w.bnb_status == Some(BnbStatus::Infeasible));
    let proven_optimal = workers.iter().any(|w| w.bnb_status == Some(BnbStatus::Optimal));
    let status = match (&best, proven_optimal, proven_infeasible) {
        (Some(_), true, _) => RunStatus::Optimal,
        (Some(_), false, _) => RunStatus::Feasible,
        (None, _, true) => RunStatus::Infeasible,
        (None, _, false) => RunStatus::NoSolution,
    };
    let bound = workers.iter().map(|w| w.lower_bound).fold(f64::NEG_INFINITY, f64::max);
    let best_bound = match (&best, status) {
        (Some(b), RunStatus::Optimal) => b.objective,
        (Some(b), _) => bound.min(b.objective),
        (None, RunStatus::Infeasible) => f64::INFINITY,
        (None, _) => bound,
    };
    events.record(None, &format!("finish:{status:?}").to_lowercase(), best.as_ref().map(|b| reported_objective(original, b.objective)));
    Ok(RunReport {
        status,
        best,
        best_bound,
        workers,
        improvements: store.improvements(),
        elapsed: started.elapsed(),
    })
}
