//! The cutting-plane driver: solve, separate, add rows, repeat, stage by stage.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::{FactorGraph, Labeling, Mode};
use crate::reduction::{build_multicut, ConstraintRow, MulticutInstance, RowClass};
use crate::rounding::{
    derandomized_thresholds, kappa_sweep, labeling_cost, pseudo_thresholds, round_components_best,
    round_derandomized, round_nearest,
};
use crate::separation::{run_procedures, CycleOptions, Procedure, Schedule, SeparationReport, Stage};
use crate::simplex::{
    branch_and_bound, write_lp_format, IlpOptions, LinearProgram, LpSolver, LpStatus, Row, RowCallback,
};

/// Gap below which a solution counts as verified optimal.
pub const OPTIMALITY_GAP: f64 = 1e-6;

/// Default separation rounds per branch-and-bound node.
pub const NODE_CUT_ROUNDS: usize = 3;

/// Hard cap on solve-separate rounds per solve.
pub const MAX_ROUNDS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Rounding {
    Nearest,
    /// Thresholds at every distinct terminal edge value.
    Derandomized,
    /// The 101 thresholds `0, 0.01, ..., 1`.
    Pseudo,
    Thresholds(Vec<f64>),
    /// Components of `{y <= kappa}`.
    Components(f64),
    /// Best component rounding over `kappa = 0, 0.05, ..., 0.5`.
    ComponentSweep,
}

impl Rounding {
    pub fn default_for(mode: Mode) -> Self {
        match mode {
            Mode::Supervised => Rounding::Pseudo,
            Mode::Unsupervised => Rounding::ComponentSweep,
        }
    }

    /// Labeling and its cost for edge values `y`.
    pub fn apply(&self, inst: &MulticutInstance, y: &[f64]) -> Result<(Labeling, f64)> {
        let with_cost = |x: Labeling| {
            let c = labeling_cost(inst, &x);
            (x, c)
        };
        match self {
            Rounding::Nearest => Ok(with_cost(round_nearest(inst, y)?)),
            Rounding::Derandomized => round_derandomized(inst, y, &derandomized_thresholds(inst, y)),
            Rounding::Pseudo => round_derandomized(inst, y, &pseudo_thresholds()),
            Rounding::Thresholds(t) => round_derandomized(inst, y, t),
            Rounding::Components(k) => round_components_best(inst, y, &[*k]),
            Rounding::ComponentSweep => round_components_best(inst, y, &kappa_sweep()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// `None` picks the mode default.
    pub rounding: Option<Rounding>,
    /// Soft limit, checked between LP solves.
    pub time_limit: Option<Duration>,
    /// Integer phases hand separation to branch-and-bound as a lazy-row
    /// callback instead of re-solving the integer program after each round.
    pub lazy_callback: bool,
    /// Separation rounds on fractional branch-and-bound nodes.
    pub node_cut_rounds: usize,
    /// Writes the final program in LP format.
    pub export_lp: Option<PathBuf>,
    pub max_rounds: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rounding: None,
            time_limit: None,
            lazy_callback: false,
            node_cut_rounds: NODE_CUT_ROUNDS,
            export_lp: None,
            max_rounds: MAX_ROUNDS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    VerifiedOptimal,
    Feasible,
    /// No labeling was produced, only a bound.
    BoundOnly,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::VerifiedOptimal => "verified-optimal",
            Status::Feasible => "feasible",
            Status::BoundOnly => "bound-only",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StageStats {
    pub token: String,
    pub rows_added: BTreeMap<RowClass, usize>,
    pub lp_solves: usize,
    pub time: Duration,
    /// Bound and best value at the end of the stage.
    pub bound: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: f64,
    pub bound: f64,
    pub labeling: Labeling,
    /// Clamped edge values of the last relaxation.
    pub y: Vec<f64>,
    pub status: Status,
    pub stage_stats: Vec<StageStats>,
    pub constant_offset: f64,
    pub runtime: Duration,
    /// Whether the time limit cut the run short.
    pub timed_out: bool,
}

impl SolveResult {
    pub fn gap(&self) -> f64 {
        self.value - self.bound
    }
}

/// `(bound, value)` of a finished solve.
pub fn lower_and_upper(result: &SolveResult) -> (f64, f64) {
    (result.bound, result.value)
}

/// The multicut LP with the instance's fixed rows.
pub fn initial_program(inst: &MulticutInstance) -> LinearProgram {
    let mut objective: Vec<f64> = inst.edges.iter().map(|e| e.weight).collect();
    objective.extend(inst.aux.iter().map(|a| a.objective));
    let mut lp = LinearProgram::unit_box(objective);
    lp.constant = inst.constant_offset;
    for r in &inst.fixed_rows {
        lp.push_row(r.to_lp(inst.num_edges()));
    }
    lp
}

/// Columns that are integral in integer phases.
pub fn integer_columns(inst: &MulticutInstance) -> Vec<usize> {
    let m = inst.num_edges();
    (0..m)
        .chain(inst.aux.iter().enumerate().filter(|(_, a)| a.integral).map(|(k, _)| m + k))
        .collect()
}

fn clamp01(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.clamp(0.0, 1.0)).collect()
}

struct Driver<'a> {
    inst: &'a MulticutInstance,
    solver: LpSolver,
    lp: LinearProgram,
    int_cols: Vec<usize>,
    deadline: Option<Instant>,
    rounds: usize,
    max_rounds: usize,
    bound: f64,
    y: Vec<f64>,
    timed_out: bool,
}

impl Driver<'_> {
    fn out_of_time(&mut self) -> bool {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn add(&mut self, rows: &[ConstraintRow]) -> Result<()> {
        let m = self.inst.num_edges();
        let lp_rows: Vec<Row> = rows.iter().map(|r| r.to_lp(m)).collect();
        self.solver.add_rows(&lp_rows)?;
        for r in lp_rows {
            self.lp.push_row(r);
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<()> {
        self.rounds += 1;
        if self.rounds > self.max_rounds {
            return Err(Error::Internal(format!(
                "cutting-plane loop exceeded {} rounds without converging",
                self.max_rounds
            )));
        }
        Ok(())
    }

    /// Solves the relaxation; returns false when interrupted by the time limit.
    fn solve_lp(&mut self) -> Result<bool> {
        match self.solver.solve()? {
            LpStatus::Optimal => {
                self.bound = self.bound.max(self.solver.objective());
                self.y = clamp01(&self.solver.values()[..self.inst.num_edges()]);
                Ok(true)
            }
            LpStatus::Infeasible => Err(Error::Internal("multicut relaxation is infeasible".into())),
            LpStatus::Interrupted => Ok(false),
        }
    }

    /// Solves the integer program, optionally separating lazily; returns false when interrupted.
    fn solve_ilp(
        &mut self,
        procs: &[Procedure],
        lazy: bool,
        node_cut_rounds: usize,
        counts: &mut BTreeMap<RowClass, usize>,
    ) -> Result<(bool, usize)> {
        let opts = IlpOptions {
            deadline: self.deadline,
            node_cut_rounds,
            ..IlpOptions::default()
        };
        let inst = self.inst;
        let m = inst.num_edges();
        // fractional points get the shortest-path variants of the cycle search
        let relaxed: Vec<Procedure> = procs
            .iter()
            .map(|&p| match p {
                Procedure::Cycles(o) => Procedure::Cycles(CycleOptions { integer: false, ..o }),
                other => other,
            })
            .collect();
        let mut added: Vec<ConstraintRow> = Vec::new();
        let mut failure: Option<Error> = None;
        let mut cb = |x: &[f64], integral: bool| -> Vec<Row> {
            if integral && !lazy {
                return Vec::new();
            }
            let y = clamp01(&x[..m]);
            match run_procedures(inst, &y, if integral { procs } else { &relaxed }) {
                Ok(r) => {
                    let rows: Vec<Row> = r.rows.iter().map(|c| c.to_lp(m)).collect();
                    added.extend(r.rows);
                    rows
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    Vec::new()
                }
            }
        };
        let use_cb = lazy || node_cut_rounds > 0;
        let out = branch_and_bound(&mut self.solver, &self.int_cols, use_cb.then_some(&mut cb as RowCallback), &opts)?;
        if let Some(e) = failure {
            return Err(e);
        }
        for r in &added {
            *counts.entry(r.class).or_default() += 1;
            self.lp.push_row(r.to_lp(m));
        }
        let solves = out.lp_solves;
        match out.solution.status {
            LpStatus::Optimal => {
                self.bound = self.bound.max(out.bound);
                self.y = clamp01(&out.solution.values[..m]);
                Ok((true, solves))
            }
            LpStatus::Infeasible => Err(Error::Internal("integer multicut program is infeasible".into())),
            LpStatus::Interrupted => {
                self.bound = self.bound.max(out.bound);
                if out.solution.objective_value.is_finite() {
                    self.y = clamp01(&out.solution.values[..m]);
                }
                self.timed_out = true;
                Ok((false, solves))
            }
        }
    }
}

fn merge_counts(into: &mut BTreeMap<RowClass, usize>, report: &SeparationReport) {
    for (&c, &k) in &report.counts {
        *into.entry(c).or_default() += k;
    }
}

/// Runs the cutting-plane schedule on a model.
pub fn solve(fg: &FactorGraph, schedule: &Schedule, options: &SolveOptions) -> Result<SolveResult> {
    let start = Instant::now();
    if schedule.needs_terminals() && fg.mode() != Mode::Supervised {
        return Err(Error::Usage(format!(
            "schedule {schedule} uses terminal separation, which needs a supervised model"
        )));
    }
    let rounding = options.rounding.clone().unwrap_or_else(|| Rounding::default_for(fg.mode()));
    match (&rounding, fg.mode()) {
        (Rounding::Components(_) | Rounding::ComponentSweep, Mode::Supervised) => {
            return Err(Error::Usage("component rounding needs an unsupervised model".into()))
        }
        (Rounding::Components(_) | Rounding::ComponentSweep, Mode::Unsupervised) => {}
        (_, Mode::Unsupervised) => {
            return Err(Error::Usage("label rounding needs a supervised model".into()))
        }
        _ => {}
    }
    if let Rounding::Components(k) = rounding {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Usage(format!("kappa must lie in [0, 1), got {k}")));
        }
    }

    let inst = build_multicut(fg)?;
    let lp = initial_program(&inst);
    let solver = LpSolver::new(&lp)?;
    let mut d = Driver {
        inst: &inst,
        solver,
        lp,
        int_cols: integer_columns(&inst),
        deadline: options.time_limit.map(|t| start + t),
        rounds: 0,
        max_rounds: options.max_rounds,
        bound: f64::NEG_INFINITY,
        y: Vec::new(),
        timed_out: false,
    };

    let mut best: Option<(Labeling, f64)> = None;
    let mut stats = Vec::new();
    let last = schedule.stages().len() - 1;
    for (i, stage) in schedule.stages().iter().enumerate() {
        let t0 = Instant::now();
        let mut counts = BTreeMap::new();
        let mut lp_solves = 0;
        let integer = schedule.integer_at(i);
        // a switch stage only takes effect through later stages, unless it is the last one
        let active = !(matches!(stage, Stage::IntegerSwitch) && i != last);
        if active && !d.out_of_time() {
            let procs = schedule.cumulative(i);
            loop {
                d.tick()?;
                let finished = if integer {
                    let (ok, solves) = d.solve_ilp(&procs, options.lazy_callback, options.node_cut_rounds, &mut counts)?;
                    lp_solves += solves;
                    ok
                } else {
                    lp_solves += 1;
                    d.solve_lp()?
                };
                if !finished {
                    break;
                }
                let report = run_procedures(&inst, &d.y, &procs)?;
                if report.is_empty() {
                    break;
                }
                merge_counts(&mut counts, &report);
                d.add(&report.rows)?;
                if d.out_of_time() {
                    break;
                }
            }
            if !d.y.is_empty() {
                let cand = rounding.apply(&inst, &d.y)?;
                if best.as_ref().is_none_or(|b| cand.1 < b.1) {
                    best = Some(cand);
                }
            }
        }
        stats.push(StageStats {
            token: schedule.token(i).to_string(),
            rows_added: counts,
            lp_solves,
            time: t0.elapsed(),
            bound: d.bound,
            value: best.as_ref().map_or(f64::INFINITY, |b| b.1),
        });
        if d.timed_out {
            break;
        }
    }

    if let Some(path) = &options.export_lp {
        let ints = if schedule.ends_integer() { d.int_cols.clone() } else { Vec::new() };
        let file = std::fs::File::create(path)?;
        write_lp_format(&d.lp, &ints, std::io::BufWriter::new(file))?;
    }

    let (labeling, value, status) = match best {
        Some((x, _)) => {
            // report the model's own energy, not the instance cost it was ranked by
            let v = fg.eval_energy(&x)?;
            let status = if v - d.bound < OPTIMALITY_GAP {
                Status::VerifiedOptimal
            } else {
                Status::Feasible
            };
            (x, v, status)
        }
        None => (Labeling(Vec::new()), f64::INFINITY, Status::BoundOnly),
    };
    Ok(SolveResult {
        value,
        bound: d.bound,
        labeling,
        y: d.y,
        status,
        stage_stats: stats,
        constant_offset: inst.constant_offset,
        runtime: start.elapsed(),
        timed_out: d.timed_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Factor;
    use crate::separation::parse_schedule;

    fn triangle() -> FactorGraph {
        FactorGraph::unsupervised(3)
            .with_factor(Factor::potts(0, 1, 0.0, -1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(1, 2, 0.0, -1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(0, 2, 0.0, 2.0).unwrap())
            .unwrap()
    }

    #[test]
    fn triangle_is_verified_optimal() {
        let r = solve(&triangle(), &parse_schedule("MC-C").unwrap(), &SolveOptions::default()).unwrap();
        assert_eq!(r.status, Status::VerifiedOptimal);
        assert!((r.value + 2.0).abs() < 1e-9);
        assert!((r.bound + 2.0).abs() < 1e-9);
        assert_eq!(r.y, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn terminal_schedule_on_unsupervised_model_is_rejected() {
        let err = solve(&triangle(), &parse_schedule("MC-T").unwrap(), &SolveOptions::default());
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn integer_phase_with_callback_matches_repeated_solves() {
        let fg = triangle();
        let s = parse_schedule("MC-I-CI").unwrap();
        let a = solve(&fg, &s, &SolveOptions::default()).unwrap();
        let b = solve(&fg, &s, &SolveOptions { lazy_callback: true, ..Default::default() }).unwrap();
        assert_eq!(a.status, Status::VerifiedOptimal);
        assert!((a.value - b.value).abs() < 1e-9 && (a.bound - b.bound).abs() < 1e-9);
    }

    #[test]
    fn lp_export_writes_a_file() {
        let dir = std::env::temp_dir().join(format!("mc-export-{}", std::process::id()));
        let opts = SolveOptions { export_lp: Some(dir.clone()), ..Default::default() };
        solve(&triangle(), &parse_schedule("MC-C-I").unwrap(), &opts).unwrap();
        let text = std::fs::read_to_string(&dir).unwrap();
        std::fs::remove_file(&dir).ok();
        assert!(text.contains("Minimize") || text.contains("minimize"));
    }
}
