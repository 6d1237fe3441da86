//! Separation of violated multicut inequalities and the schedule grammar.

mod cycles;
mod oddwheel;
mod schedule;
mod terminal;

use std::collections::BTreeMap;

pub use cycles::separate_cycles;
pub use oddwheel::{separate_odd_wheels, MAX_RIM};
pub use schedule::{parse_schedule, CycleOptions, Procedure, Schedule, Stage};
pub use terminal::{separate_multiterminal, separate_terminal_triangles};

use crate::error::Result;
use crate::reduction::{ConstraintRow, MulticutInstance, RowClass};

/// Rows are emitted only when violated by more than this.
pub const EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Default)]
pub struct SeparationReport {
    pub rows: Vec<ConstraintRow>,
    pub counts: BTreeMap<RowClass, usize>,
    pub max_violation: f64,
}

impl SeparationReport {
    fn push(&mut self, row: ConstraintRow, violation: f64) {
        *self.counts.entry(row.class).or_default() += 1;
        self.max_violation = self.max_violation.max(violation);
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn merge(&mut self, other: SeparationReport) {
        for (c, k) in other.counts {
            *self.counts.entry(c).or_default() += k;
        }
        self.max_violation = self.max_violation.max(other.max_violation);
        self.rows.extend(other.rows);
    }

    /// Orders rows by class and then by edge support.
    fn sort(&mut self) {
        self.rows.sort_by_cached_key(|r| (r.class, r.edges()));
    }
}

/// Adjacency over the internal nodes, restricted to internal edges.
pub(crate) struct Graph {
    pub adj: Vec<Vec<(usize, usize)>>,
    /// `(edge, u, v)` for every internal edge.
    pub edges: Vec<(usize, usize, usize)>,
}

impl Graph {
    pub fn internal(inst: &MulticutInstance) -> Self {
        let n = inst.num_internal;
        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for (e, ed) in inst.edges.iter().enumerate() {
            if ed.u < n && ed.v < n {
                adj[ed.u].push((ed.v, e));
                adj[ed.v].push((ed.u, e));
                edges.push((e, ed.u, ed.v));
            }
        }
        Graph { adj, edges }
    }

    /// Component ids of the subgraph whose edges satisfy `keep`.
    pub fn components(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let n = self.adj.len();
        let mut comp = vec![usize::MAX; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = s;
            stack.push(s);
            while let Some(a) = stack.pop() {
                for &(b, e) in &self.adj[a] {
                    if comp[b] == usize::MAX && keep(e) {
                        comp[b] = s;
                        stack.push(b);
                    }
                }
            }
        }
        comp
    }
}

/// Runs one separation procedure on the edge values `y`.
pub fn run_procedure(inst: &MulticutInstance, y: &[f64], proc: Procedure) -> Result<SeparationReport> {
    let mut report = match proc {
        Procedure::Cycles(opts) => separate_cycles(inst, y, opts),
        Procedure::Terminal { .. } => separate_terminal_triangles(inst, y)?,
        Procedure::MultiTerminal => separate_multiterminal(inst, y)?,
        Procedure::OddWheel => separate_odd_wheels(inst, y),
    };
    report.sort();
    Ok(report)
}

/// Runs a set of procedures and drops rows that an earlier procedure already produced.
pub fn run_procedures(inst: &MulticutInstance, y: &[f64], procs: &[Procedure]) -> Result<SeparationReport> {
    let mut all = SeparationReport::default();
    let mut seen = std::collections::HashSet::new();
    for &p in procs {
        let r = run_procedure(inst, y, p)?;
        for row in r.rows {
            let key = (row.class, row.edges(), row.terms.iter().map(|t| t.1.to_bits()).collect::<Vec<_>>());
            if seen.insert(key) {
                let v = row.violation(y, &[]);
                all.push(row, v);
            }
        }
    }
    Ok(all)
}
