//! Odd-wheel inequalities via shortest odd cycles in center neighbourhoods.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::{Graph, SeparationReport, EPSILON};
use crate::reduction::{ConstraintRow, MulticutInstance, RowClass, Var};
use crate::simplex::Sense;

/// Longest rim considered.
pub const MAX_RIM: usize = 25;

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Cheapest odd closed walk through local node `s` with cost below `limit`,
/// as a node sequence starting and ending at `s`.
fn odd_walk(adj: &[Vec<(usize, f64)>], s: usize, limit: f64) -> Option<Vec<usize>> {
    let m = adj.len();
    let mut dist = vec![f64::INFINITY; 2 * m];
    let mut pred = vec![usize::MAX; 2 * m];
    let mut heap = BinaryHeap::new();
    let start = 2 * s;
    let goal = 2 * s + 1;
    dist[start] = 0.0;
    heap.push(Reverse((Key(0.0), start)));
    while let Some(Reverse((Key(d), x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if d >= limit {
            return None;
        }
        if x == goal {
            let mut walk = vec![x / 2];
            let mut k = x;
            while k != start {
                k = pred[k];
                walk.push(k / 2);
            }
            walk.reverse();
            return Some(walk);
        }
        let (a, par) = (x / 2, x % 2);
        for &(b, c) in &adj[a] {
            let z = 2 * b + (1 - par);
            let nd = d + c;
            if nd < dist[z] {
                dist[z] = nd;
                pred[z] = x;
                heap.push(Reverse((Key(nd), z)));
            }
        }
    }
    None
}

/// Extracts a simple odd cycle from an odd closed walk by cutting out loops;
/// even loops are discarded and the first odd loop is returned.
fn odd_cycle(walk: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for &x in walk {
        if let Some(&p) = pos.get(&x) {
            let loop_len = stack.len() - p;
            if loop_len % 2 == 1 {
                return stack[p..].to_vec();
            }
            for y in stack.drain(p + 1..) {
                pos.remove(&y);
            }
        } else {
            pos.insert(x, stack.len());
            stack.push(x);
        }
    }
    unreachable!("an odd closed walk contains an odd cycle")
}

/// Violated odd-wheel rows `sum_rim y - sum_spokes y <= (q - 1) / 2` centred at
/// internal nodes of degree at least three. Meaningful once cycle
/// inequalities hold at `y`; neighbourhood costs are clamped at zero otherwise.
pub fn separate_odd_wheels(inst: &MulticutInstance, y: &[f64]) -> SeparationReport {
    let g = Graph::internal(inst);
    let mut report = SeparationReport::default();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    for c in 0..g.adj.len() {
        let nbrs = &g.adj[c];
        if nbrs.len() < 3 {
            continue;
        }
        let local: HashMap<usize, usize> = nbrs.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nbrs.len()];
        let mut rim_edge: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, &(u, cu)) in nbrs.iter().enumerate() {
            for &(v, uv) in &g.adj[u] {
                if let Some(&j) = local.get(&v) {
                    if i < j {
                        let cv = nbrs[j].1;
                        let a = (0.5 + 0.5 * (y[cu] + y[cv]) - y[uv]).max(0.0);
                        adj[i].push((j, a));
                        adj[j].push((i, a));
                        rim_edge.insert((i, j), uv);
                    }
                }
            }
        }
        for s in 0..nbrs.len() {
            let Some(walk) = odd_walk(&adj, s, 0.5 - EPSILON) else { continue };
            let cyc = odd_cycle(&walk);
            let q = cyc.len();
            if !(3..=MAX_RIM).contains(&q) {
                continue;
            }
            let mut terms = Vec::with_capacity(2 * q);
            let mut rim = Vec::with_capacity(q);
            for k in 0..q {
                let (i, j) = (cyc[k], cyc[(k + 1) % q]);
                let e = rim_edge[&(i.min(j), i.max(j))];
                rim.push(e);
                terms.push((Var::Edge(e), 1.0));
                terms.push((Var::Edge(nbrs[i].1), -1.0));
            }
            let row = ConstraintRow::new(terms, Sense::Le, ((q - 1) / 2) as f64, RowClass::OddWheel);
            let viol = row.violation(y, &[]);
            rim.sort_unstable();
            if viol > EPSILON && seen.insert((c, rim)) {
                report.push(row, viol);
            }
        }
    }
    report
}
