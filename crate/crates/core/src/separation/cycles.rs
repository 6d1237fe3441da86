//! Cycle inequalities on the internal graph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use super::{Graph, SeparationReport, EPSILON};
use crate::reduction::{ConstraintRow, MulticutInstance, RowClass};
use crate::separation::schedule::CycleOptions;

#[derive(Clone, Copy)]
struct Dist(f64);
impl PartialEq for Dist {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for Dist {}
impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Reusable search state over the internal nodes.
struct Search {
    dist: Vec<f64>,
    pred: Vec<(usize, usize)>,
    settled: Vec<bool>,
    mark: Vec<usize>,
    stamp: usize,
    touched: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Search {
    fn new(n: usize) -> Self {
        Search {
            dist: vec![f64::INFINITY; n],
            pred: vec![(NONE, NONE); n],
            settled: vec![false; n],
            mark: vec![0; n],
            stamp: 0,
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &i in &self.touched {
            self.dist[i] = f64::INFINITY;
            self.pred[i] = (NONE, NONE);
            self.settled[i] = false;
        }
        self.touched.clear();
    }

    fn visit(&mut self, i: usize) {
        if self.dist[i].is_infinite() && !self.settled[i] {
            self.touched.push(i);
        }
    }

    /// Marks the nodes on the search-tree path ending at `a`.
    fn mark_path(&mut self, a: usize) {
        self.stamp += 1;
        let mut x = a;
        loop {
            self.mark[x] = self.stamp;
            let (p, _) = self.pred[x];
            if p == NONE {
                break;
            }
            x = p;
        }
    }

    /// Whether appending `b` after `a` keeps the path chordless. `closing`
    /// names the one allowed extra neighbour (the source when `b` is the target).
    fn chordless_step(&self, g: &Graph, a: usize, b: usize, closing: Option<usize>) -> bool {
        g.adj[b]
            .iter()
            .all(|&(p, _)| p == a || self.mark[p] != self.stamp || Some(p) == closing)
    }

    /// Edges of the tree path from the source to `v`, source end first.
    fn path_edges(&self, v: usize) -> (Vec<usize>, Vec<usize>) {
        let mut nodes = vec![v];
        let mut edges = Vec::new();
        let mut x = v;
        while self.pred[x].0 != NONE {
            edges.push(self.pred[x].1);
            x = self.pred[x].0;
            nodes.push(x);
        }
        nodes.reverse();
        edges.reverse();
        (nodes, edges)
    }

    /// Shortest path from `u` to `v` avoiding edge `f`, shorter than `limit`.
    /// Edge lengths come from `y`; in facet mode partial paths must stay chordless.
    #[allow(clippy::too_many_arguments)]
    fn dijkstra(
        &mut self,
        g: &Graph,
        y: &[f64],
        u: usize,
        v: usize,
        f: usize,
        limit: f64,
        facet: bool,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        self.reset();
        let mut heap = BinaryHeap::new();
        self.visit(u);
        self.dist[u] = 0.0;
        heap.push(Reverse((Dist(0.0), u)));
        let mut found = false;
        while let Some(Reverse((Dist(d), a))) = heap.pop() {
            if self.settled[a] || d > self.dist[a] {
                continue;
            }
            if d >= limit {
                break;
            }
            self.settled[a] = true;
            if a == v {
                found = true;
                break;
            }
            if facet {
                self.mark_path(a);
            }
            for &(b, e) in &g.adj[a] {
                if e == f || self.settled[b] {
                    continue;
                }
                let nd = d + y[e];
                if nd >= limit || nd >= self.dist[b] {
                    continue;
                }
                if facet && !self.chordless_step(g, a, b, (b == v).then_some(u)) {
                    continue;
                }
                self.visit(b);
                self.dist[b] = nd;
                self.pred[b] = (a, e);
                heap.push(Reverse((Dist(nd), b)));
            }
        }
        found.then(|| self.path_edges(v))
    }

    /// Fewest-edge path from `u` to `v` through edges with `y < 1/2`.
    fn bfs_zero(
        &mut self,
        g: &Graph,
        y: &[f64],
        u: usize,
        v: usize,
        f: usize,
        facet: bool,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        self.reset();
        let mut queue = VecDeque::new();
        self.visit(u);
        self.dist[u] = 0.0;
        queue.push_back(u);
        while let Some(a) = queue.pop_front() {
            if self.settled[a] {
                continue;
            }
            self.settled[a] = true;
            if a == v {
                return Some(self.path_edges(v));
            }
            if facet {
                self.mark_path(a);
            }
            for &(b, e) in &g.adj[a] {
                if e == f || y[e] >= 0.5 || !self.dist[b].is_infinite() {
                    continue;
                }
                if facet && !self.chordless_step(g, a, b, (b == v).then_some(u)) {
                    continue;
                }
                self.visit(b);
                self.dist[b] = self.dist[a] + 1.0;
                self.pred[b] = (a, e);
                queue.push_back(b);
            }
        }
        None
    }
}

/// Splits a violated cycle along chords until it is chordless, keeping the
/// more violated half each time. The cycle is `nodes` in order, closed by
/// edge `f` from the last node back to the first. Returns `(path, chord)`
/// with the largest edge of the final cycle as chord.
pub(crate) fn chordless_part(
    g: &Graph,
    y: &[f64],
    nodes: &[usize],
    path: &[usize],
    f: usize,
) -> (Vec<usize>, usize) {
    // edge k joins ring[k] and ring[k + 1], the last one closes the ring
    let mut ring: Vec<usize> = nodes.to_vec();
    let mut ering: Vec<usize> = path.to_vec();
    ering.push(f);
    let viol = |edges: &[usize]| -> f64 {
        let total: f64 = edges.iter().map(|&e| y[e]).sum();
        let top = edges.iter().map(|&e| y[e]).fold(f64::NEG_INFINITY, f64::max);
        2.0 * top - total
    };
    while ring.len() > 3 {
        let len = ring.len();
        let pos: HashMap<usize, usize> = ring.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let chord = ring.iter().enumerate().find_map(|(i, &a)| {
            g.adj[a].iter().find_map(|&(b, e)| {
                let &j = pos.get(&b)?;
                (j > i + 1 && !(i == 0 && j == len - 1)).then_some((i, j, e))
            })
        });
        let Some((i, j, c)) = chord else { break };
        let mut a_edges = ering[i..j].to_vec();
        a_edges.push(c);
        let mut b_edges = ering[j..].to_vec();
        b_edges.extend_from_slice(&ering[..i]);
        b_edges.push(c);
        if viol(&a_edges) >= viol(&b_edges) {
            ring = ring[i..=j].to_vec();
            ering = a_edges;
        } else {
            let mut b_nodes = ring[j..].to_vec();
            b_nodes.extend_from_slice(&ring[..=i]);
            ring = b_nodes;
            ering = b_edges;
        }
    }
    let top = (0..ering.len())
        .max_by(|&a, &b| y[ering[a]].total_cmp(&y[ering[b]]).then(b.cmp(&a)))
        .expect("non-empty cycle");
    let chord = ering.remove(top);
    (ering, chord)
}

fn emit(
    report: &mut SeparationReport,
    seen: &mut HashSet<(Vec<usize>, usize)>,
    y: &[f64],
    path: Vec<usize>,
    f: usize,
) {
    let len: f64 = path.iter().map(|&e| y[e]).sum();
    let viol = y[f] - len;
    if viol <= EPSILON {
        return;
    }
    let mut key = path.clone();
    key.sort_unstable();
    if seen.insert((key, f)) {
        report.push(ConstraintRow::cycle(&path, f, RowClass::Cycle), viol);
    }
}

/// Violated cycle inequalities `sum_{e in P} y_e >= y_uv` on the internal graph.
///
/// In supervised instances cycles through terminals are chordless only as
/// triangles, which are checked directly.
pub fn separate_cycles(inst: &MulticutInstance, y: &[f64], opts: CycleOptions) -> SeparationReport {
    let g = Graph::internal(inst);
    let mut report = SeparationReport::default();
    let mut seen = HashSet::new();
    let mut search = Search::new(g.adj.len());

    let comp = if opts.integer {
        Some(g.components(|e| y[e] < 0.5))
    } else if opts.bounded {
        Some(g.components(|e| y[e] < 1.0))
    } else {
        None
    };

    for &(f, u, v) in &g.edges {
        let yf = y[f];
        if yf <= EPSILON {
            continue;
        }
        if let Some(c) = &comp {
            if c[u] != c[v] {
                continue;
            }
        }
        if opts.integer {
            if yf < 0.5 {
                continue;
            }
            if opts.facet {
                if let Some((_, path)) = search.bfs_zero(&g, y, u, v, f, true) {
                    emit(&mut report, &mut seen, y, path, f);
                    continue;
                }
            }
            if let Some((nodes, path)) = search.bfs_zero(&g, y, u, v, f, false) {
                let (path, f2) = if opts.facet {
                    chordless_part(&g, y, &nodes, &path, f)
                } else {
                    (path, f)
                };
                emit(&mut report, &mut seen, y, path, f2);
            }
        } else {
            let limit = yf - EPSILON;
            if opts.facet {
                if let Some((_, path)) = search.dijkstra(&g, y, u, v, f, limit, true) {
                    emit(&mut report, &mut seen, y, path, f);
                    continue;
                }
            }
            if let Some((nodes, path)) = search.dijkstra(&g, y, u, v, f, limit, false) {
                let (path, f2) = if opts.facet {
                    chordless_part(&g, y, &nodes, &path, f)
                } else {
                    (path, f)
                };
                emit(&mut report, &mut seen, y, path, f2);
            }
        }
    }
    if !inst.terminals.is_empty() {
        super::terminal::triangles_into(inst, y, &mut report);
    }
    report
}
