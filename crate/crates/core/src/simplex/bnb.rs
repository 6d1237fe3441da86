//! Best-first branch-and-bound on top of the dual simplex.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::{LpSolution, LpSolver, LpStatus, Row};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct IlpOptions {
    /// Nodes whose bound is within this of the incumbent are pruned.
    pub gap: f64,
    pub integrality_tol: f64,
    pub max_nodes: usize,
    pub deadline: Option<Instant>,
    /// Separation rounds on fractional node solutions (0 keeps the callback
    /// to integral candidates only).
    pub node_cut_rounds: usize,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions {
            gap: 1e-9,
            integrality_tol: 1e-6,
            max_nodes: usize::MAX,
            deadline: None,
            node_cut_rounds: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IlpOutcome {
    pub solution: LpSolution,
    /// Best proven lower bound.
    pub bound: f64,
    pub nodes: usize,
    pub lp_solves: usize,
    pub lazy_rows: usize,
}

struct Node {
    bound: f64,
    seq: usize,
    fixings: Vec<(usize, f64, f64)>,
    /// Branching that created the node: variable, up-branch flag and the
    /// distance the variable was pushed.
    origin: Option<(usize, bool, f64)>,
}

/// Average objective change per unit of rounding, per variable and direction.
struct Pseudocosts {
    sum: Vec<[f64; 2]>,
    count: Vec<[u32; 2]>,
    total: [f64; 2],
    total_count: [u32; 2],
}

impl Pseudocosts {
    fn new(n: usize) -> Self {
        Pseudocosts {
            sum: vec![[0.0; 2]; n],
            count: vec![[0; 2]; n],
            total: [0.0; 2],
            total_count: [0; 2],
        }
    }

    fn record(&mut self, j: usize, up: bool, gain: f64) {
        let d = usize::from(up);
        self.sum[j][d] += gain;
        self.count[j][d] += 1;
        self.total[d] += gain;
        self.total_count[d] += 1;
    }

    fn estimate(&self, j: usize, up: bool) -> f64 {
        let d = usize::from(up);
        if self.count[j][d] > 0 {
            self.sum[j][d] / self.count[j][d] as f64
        } else if self.total_count[d] > 0 {
            self.total[d] / self.total_count[d] as f64
        } else {
            1.0
        }
    }

    /// Product score of rounding `x` down and up.
    fn score(&self, j: usize, x: f64) -> f64 {
        let f = x - x.floor();
        let down = self.estimate(j, false) * f;
        let up = self.estimate(j, true) * (1.0 - f);
        down.max(1e-6) * up.max(1e-6)
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // max-heap: smallest bound first, newest first among equals
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.seq.cmp(&other.seq))
    }
}

/// Separation callback: receives a node solution and whether it is integral,
/// returns rows it violates. Rows must be valid for every integer solution.
pub type RowCallback<'a> = &'a mut dyn FnMut(&[f64], bool) -> Vec<Row>;

/// Runs branch-and-bound. Rows supplied by `callback` are added to `solver`
/// permanently. On return all integer bounds are restored.
pub fn branch_and_bound(
    solver: &mut LpSolver,
    integer_vars: &[usize],
    mut callback: Option<RowCallback<'_>>,
    opts: &IlpOptions,
) -> Result<IlpOutcome> {
    let root: Vec<(usize, f64, f64)> = integer_vars
        .iter()
        .map(|&j| {
            let (l, h) = solver.bounds(j);
            (j, l, h)
        })
        .collect();
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        seq,
        fixings: Vec::new(),
        origin: None,
    });
    let mut pc = Pseudocosts::new(solver.num_vars());
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut nodes = 0usize;
    let mut lp_solves = 0usize;
    let mut lazy_rows = 0usize;
    let mut applied: Vec<usize> = Vec::new();
    let mut interrupted = false;

    while let Some(node) = heap.pop() {
        let inc_val = incumbent.as_ref().map_or(f64::INFINITY, |i| i.0);
        if node.bound >= inc_val - opts.gap {
            continue;
        }
        if nodes >= opts.max_nodes || opts.deadline.is_some_and(|d| Instant::now() >= d) {
            heap.push(node);
            interrupted = true;
            break;
        }
        nodes += 1;
        for &j in &applied {
            let &(_, l, h) = root.iter().find(|r| r.0 == j).expect("root bound");
            solver.set_bounds(j, l, h);
        }
        applied.clear();
        for &(j, l, h) in &node.fixings {
            solver.set_bounds(j, l, h);
            applied.push(j);
        }
        let mut cut_rounds = 0;
        let mut origin = node.origin;
        loop {
            lp_solves += 1;
            if solver.solve()? == LpStatus::Infeasible {
                break;
            }
            let obj = solver.objective();
            if let Some((j, up, dist)) = origin.take() {
                if node.bound.is_finite() {
                    pc.record(j, up, (obj - node.bound).max(0.0) / dist);
                }
            }
            let inc_val = incumbent.as_ref().map_or(f64::INFINITY, |i| i.0);
            if obj >= inc_val - opts.gap {
                break;
            }
            let x = solver.values();
            let mut branch: Option<(usize, f64)> = None;
            let mut best = (f64::NEG_INFINITY, 0.0);
            for &j in integer_vars {
                let f = (x[j] - x[j].round()).abs();
                if f > opts.integrality_tol {
                    let key = (pc.score(j, x[j]), f);
                    if key.0 > best.0 || (key.0 == best.0 && key.1 > best.1) {
                        best = key;
                        branch = Some((j, x[j]));
                    }
                }
            }
            match branch {
                None => {
                    if let Some(cb) = callback.as_mut() {
                        let mut xi = x.clone();
                        for &j in integer_vars {
                            xi[j] = xi[j].round();
                        }
                        let rows = cb(&xi, true);
                        if !rows.is_empty() {
                            lazy_rows += rows.len();
                            solver.add_rows(&rows)?;
                            continue;
                        }
                    }
                    let mut xi = x;
                    for &j in integer_vars {
                        xi[j] = xi[j].round();
                    }
                    incumbent = Some((obj, xi));
                    break;
                }
                Some((j, v)) => {
                    if cut_rounds < opts.node_cut_rounds {
                        if let Some(cb) = callback.as_mut() {
                            cut_rounds += 1;
                            let rows = cb(&x, false);
                            if !rows.is_empty() {
                                lazy_rows += rows.len();
                                solver.add_rows(&rows)?;
                                continue;
                            }
                        }
                    }
                    let (l, h) = solver.bounds(j);
                    let frac = v - v.floor();
                    let down = {
                        let mut f = node.fixings.clone();
                        f.push((j, l, v.floor()));
                        (f, (j, false, frac))
                    };
                    let up = {
                        let mut f = node.fixings.clone();
                        f.push((j, v.ceil(), h));
                        (f, (j, true, 1.0 - frac))
                    };
                    // the child nearer the fractional value is explored first
                    let (first, second) = if frac < 0.5 { (up, down) } else { (down, up) };
                    for (fixings, origin) in [first, second] {
                        seq += 1;
                        heap.push(Node {
                            bound: obj,
                            seq,
                            fixings,
                            origin: Some(origin),
                        });
                    }
                    break;
                }
            }
        }
    }

    for &j in &applied {
        let &(_, l, h) = root.iter().find(|r| r.0 == j).expect("root bound");
        solver.set_bounds(j, l, h);
    }

    let open_bound = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    let solution = match incumbent {
        Some((obj, values)) => LpSolution {
            status: if interrupted {
                LpStatus::Interrupted
            } else {
                LpStatus::Optimal
            },
            values,
            objective_value: obj,
            basis: solver.basis(),
        },
        None => LpSolution {
            status: if interrupted {
                LpStatus::Interrupted
            } else {
                LpStatus::Infeasible
            },
            values: solver.values(),
            objective_value: f64::INFINITY,
            basis: solver.basis(),
        },
    };
    let bound = if interrupted {
        open_bound.min(solution.objective_value)
    } else {
        solution.objective_value
    };
    Ok(IlpOutcome {
        solution,
        bound,
        nodes,
        lp_solves,
        lazy_rows,
    })
}
