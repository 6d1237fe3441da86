//! From factor graphs to multicut instances.
//!
//! Internal nodes are the model variables `0..n`; in supervised mode terminal
//! `l` is node `n + l`. LP columns are laid out as all edges first, then all
//! auxiliary variables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{
    bell, canonical_rgs, enumerate_partitions, junction_to_lpi, partition_index, Factor,
    FactorGraph, FactorKind, Labeling, Mode, MAX_PARTITION_ORDER,
};
use crate::simplex::{Row, Sense};

/// Variable of a multicut row: an edge indicator or an auxiliary product variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Edge(usize),
    Aux(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowClass {
    Initial,
    TerminalFixed,
    Cycle,
    TerminalTriangle,
    MultiTerminal,
    OddWheel,
    ReductionA,
    ReductionB,
    SumToOne,
}

impl RowClass {
    pub const ALL: [RowClass; 9] = [
        RowClass::Initial,
        RowClass::TerminalFixed,
        RowClass::Cycle,
        RowClass::TerminalTriangle,
        RowClass::MultiTerminal,
        RowClass::OddWheel,
        RowClass::ReductionA,
        RowClass::ReductionB,
        RowClass::SumToOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RowClass::Initial => "initial",
            RowClass::TerminalFixed => "terminal-fixed",
            RowClass::Cycle => "cycle",
            RowClass::TerminalTriangle => "terminal-triangle",
            RowClass::MultiTerminal => "multi-terminal",
            RowClass::OddWheel => "odd-wheel",
            RowClass::ReductionA => "reduction-a",
            RowClass::ReductionB => "reduction-b",
            RowClass::SumToOne => "sum-to-one",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub terms: Vec<(Var, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub class: RowClass,
}

impl ConstraintRow {
    pub fn new(terms: Vec<(Var, f64)>, sense: Sense, rhs: f64, class: RowClass) -> Self {
        let terms = terms.into_iter().filter(|t| t.1 != 0.0).collect();
        ConstraintRow {
            terms,
            sense,
            rhs,
            class,
        }
    }

    /// `sum_{e in path} y_e - y_uv >= 0`.
    pub fn cycle(path: &[usize], chord: usize, class: RowClass) -> Self {
        let mut terms: Vec<(Var, f64)> = path.iter().map(|&e| (Var::Edge(e), 1.0)).collect();
        terms.push((Var::Edge(chord), -1.0));
        ConstraintRow::new(terms, Sense::Ge, 0.0, class)
    }

    /// Converts to a simplex row with edges in columns `0..num_edges` and aux after.
    pub fn to_lp(&self, num_edges: usize) -> Row {
        Row::new(
            self.terms
                .iter()
                .map(|&(v, a)| {
                    let col = match v {
                        Var::Edge(e) => e,
                        Var::Aux(k) => num_edges + k,
                    };
                    (col, a)
                })
                .collect(),
            self.sense,
            self.rhs,
        )
    }

    pub fn activity(&self, y: &[f64], s: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(v, a)| {
                a * match v {
                    Var::Edge(e) => y[e],
                    Var::Aux(k) => s[k],
                }
            })
            .sum()
    }

    /// Amount by which `(y, s)` violates the row; non-positive when satisfied.
    pub fn violation(&self, y: &[f64], s: &[f64]) -> f64 {
        let act = self.activity(y, s);
        match self.sense {
            Sense::Le => act - self.rhs,
            Sense::Ge => self.rhs - act,
            Sense::Eq => (act - self.rhs).abs(),
        }
    }

    /// Edge support of the row, sorted.
    pub fn edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self
            .terms
            .iter()
            .filter_map(|t| match t.0 {
                Var::Edge(e) => Some(e),
                Var::Aux(_) => None,
            })
            .collect();
        e.sort_unstable();
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Auxiliary variable standing for a product of edge literals.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxVar {
    pub objective: f64,
    /// Edges entering the product as `y_e`.
    pub pos: Vec<usize>,
    /// Edges entering the product as `1 - y_e`.
    pub neg: Vec<usize>,
    /// Whether the variable must be declared integral in integer phases.
    pub integral: bool,
}

impl AuxVar {
    /// Product value at integral edge values.
    pub fn product(&self, y: &[f64]) -> f64 {
        let p: f64 = self.pos.iter().map(|&e| y[e]).product();
        let n: f64 = self.neg.iter().map(|&e| 1.0 - y[e]).product();
        p * n
    }
}

/// Which row families of the product reduction to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionForm {
    /// Two aggregated rows; needs `s` integral.
    Aggregated,
    /// One row per literal plus the lower row; integral for integral literals.
    PerLiteral,
    /// Both families.
    Both,
}

/// Rows forcing `s = prod_{pos} z * prod_{neg} (1 - z)` for literal variables `pos`/`neg`.
pub fn product_rows(pos: &[Var], neg: &[Var], s: Var, form: ReductionForm) -> Result<Vec<ConstraintRow>> {
    let m = pos.len() + neg.len();
    if m == 0 {
        return Err(Error::Input("product term over no literals".into()));
    }
    if pos.iter().any(|p| neg.contains(p)) {
        return Err(Error::Input("literal appears both plain and negated".into()));
    }
    let mf = m as f64;
    let nneg = neg.len() as f64;
    // sum of literals = sum_pos z - sum_neg z + |neg|
    let lits = |scale: f64| -> Vec<(Var, f64)> {
        pos.iter()
            .map(|&v| (v, scale))
            .chain(neg.iter().map(|&v| (v, -scale)))
            .collect()
    };
    let mut rows = Vec::with_capacity(m + 2);
    let lower = {
        let mut t = vec![(s, 1.0)];
        t.extend(lits(-1.0));
        ConstraintRow::new(t, Sense::Ge, 1.0 - mf + nneg, RowClass::ReductionA)
    };
    if matches!(form, ReductionForm::Aggregated | ReductionForm::Both) {
        let mut t = vec![(s, mf)];
        t.extend(lits(-1.0));
        rows.push(ConstraintRow::new(t, Sense::Le, nneg, RowClass::ReductionA));
    }
    rows.push(lower);
    if matches!(form, ReductionForm::PerLiteral | ReductionForm::Both) {
        for &p in pos {
            rows.push(ConstraintRow::new(
                vec![(s, 1.0), (p, -1.0)],
                Sense::Le,
                0.0,
                RowClass::ReductionB,
            ));
        }
        for &q in neg {
            rows.push(ConstraintRow::new(
                vec![(s, 1.0), (q, 1.0)],
                Sense::Le,
                1.0,
                RowClass::ReductionB,
            ));
        }
    }
    Ok(rows)
}

/// Terminal edge weights `u` with `sum_{l != k} u_l = g_k` for every label `k`.
pub fn terminal_weights(g: &[f64]) -> Result<Vec<f64>> {
    let l = g.len();
    if l < 2 {
        return Err(Error::Input(format!("terminal weights need at least 2 labels, got {l}")));
    }
    let total: f64 = g.iter().sum();
    let share = total / (l - 1) as f64;
    Ok(g.iter().map(|&gl| share - gl).collect())
}

#[derive(Debug, Clone)]
pub struct MulticutInstance {
    pub mode: Mode,
    pub num_internal: usize,
    /// Terminal node ids, one per label (empty when unsupervised).
    pub terminals: Vec<usize>,
    pub edges: Vec<Edge>,
    pub aux: Vec<AuxVar>,
    pub fixed_rows: Vec<ConstraintRow>,
    pub constant_offset: f64,
    index: HashMap<(usize, usize), usize>,
}

impl MulticutInstance {
    /// An instance with internal nodes only.
    pub fn new(num_internal: usize) -> Self {
        MulticutInstance {
            mode: Mode::Unsupervised,
            num_internal,
            terminals: Vec::new(),
            edges: Vec::new(),
            aux: Vec::new(),
            fixed_rows: Vec::new(),
            constant_offset: 0.0,
            index: HashMap::new(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_internal + self.terminals.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// LP column count: edges plus auxiliaries.
    pub fn num_columns(&self) -> usize {
        self.edges.len() + self.aux.len()
    }

    pub fn is_terminal(&self, node: usize) -> bool {
        node >= self.num_internal
    }

    pub fn terminal_node(&self, label: usize) -> usize {
        self.terminals[label]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.index.get(&key).copied()
    }

    /// Returns the edge `ab`, creating it with weight 0 if absent.
    pub fn ensure_edge(&mut self, a: usize, b: usize) -> usize {
        assert_ne!(a, b, "self-loop");
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&e) = self.index.get(&key) {
            return e;
        }
        let e = self.edges.len();
        self.edges.push(Edge {
            u: key.0,
            v: key.1,
            weight: 0.0,
        });
        self.index.insert(key, e);
        e
    }

    pub fn add_weight(&mut self, a: usize, b: usize, w: f64) -> usize {
        let e = self.ensure_edge(a, b);
        self.edges[e].weight += w;
        e
    }

    /// Whether an edge joins two internal nodes.
    pub fn is_internal_edge(&self, e: usize) -> bool {
        let ed = &self.edges[e];
        !self.is_terminal(ed.u) && !self.is_terminal(ed.v)
    }

    /// Adds an auxiliary variable for a product over edge literals together
    /// with its reduction rows. Returns the aux index.
    pub fn reduce_product_term(&mut self, pos: &[usize], neg: &[usize], objective: f64) -> Result<usize> {
        let k = self.aux.len();
        let pv: Vec<Var> = pos.iter().map(|&e| Var::Edge(e)).collect();
        let nv: Vec<Var> = neg.iter().map(|&e| Var::Edge(e)).collect();
        let rows = product_rows(&pv, &nv, Var::Aux(k), ReductionForm::Both)?;
        self.aux.push(AuxVar {
            objective,
            pos: pos.to_vec(),
            neg: neg.to_vec(),
            integral: false,
        });
        self.fixed_rows.extend(rows);
        Ok(k)
    }

    /// Attaches an LPI factor over internal nodes `vars` with weights in canonical order.
    pub fn attach_lpi_factor(&mut self, vars: &[usize], weights: &[f64]) -> Result<()> {
        let n = vars.len();
        if n > MAX_PARTITION_ORDER {
            return Err(Error::Unsupported(format!(
                "LPI factor of order {n} exceeds {MAX_PARTITION_ORDER}"
            )));
        }
        if n < 2 {
            return Err(Error::Model("LPI attachment needs at least 2 variables".into()));
        }
        if weights.len() as u64 != bell(n) {
            return Err(Error::Model(format!(
                "LPI factor of order {n} needs {} weights",
                bell(n)
            )));
        }
        let mut pair_edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pair_edges.push(self.ensure_edge(vars[i], vars[j]));
            }
        }
        let first = self.aux.len();
        for (p, &beta) in enumerate_partitions(n)?.iter().zip(weights) {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for (k, &cut) in p.chi.iter().enumerate() {
                if cut {
                    pos.push(pair_edges[k]);
                } else {
                    neg.push(pair_edges[k]);
                }
            }
            self.reduce_product_term(&pos, &neg, beta)?;
        }
        let terms = (first..self.aux.len()).map(|k| (Var::Aux(k), 1.0)).collect();
        self.fixed_rows
            .push(ConstraintRow::new(terms, Sense::Eq, 1.0, RowClass::SumToOne));
        Ok(())
    }

    /// Attaches a higher-order Potts factor over internal nodes `vars`.
    ///
    /// The product runs over all intra-scope edges present, plus weight-0
    /// edges added only where needed to connect the scope.
    pub fn attach_hopotts_factor(&mut self, vars: &[usize], equal: f64, unequal: f64) -> Result<()> {
        let n = vars.len();
        if n < 2 {
            return Err(Error::Model("HO-Potts attachment needs at least 2 variables".into()));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut scope_edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if let Some(e) = self.edge_between(vars[i], vars[j]) {
                    scope_edges.push(e);
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        for i in 1..n {
            let (a, b) = (find(&mut parent, i - 1), find(&mut parent, i));
            if a != b {
                scope_edges.push(self.ensure_edge(vars[i - 1], vars[i]));
                parent[a] = b;
            }
        }
        scope_edges.sort_unstable();
        self.reduce_product_term(&[], &scope_edges, equal - unequal)?;
        self.constant_offset += unequal;
        Ok(())
    }

    /// `<w, y> + <c, s> + offset`.
    pub fn multicut_cost(&self, y: &[f64], s: &[f64]) -> f64 {
        let a: f64 = self.edges.iter().zip(y).map(|(e, v)| e.weight * v).sum();
        let b: f64 = self.aux.iter().zip(s).map(|(x, v)| x.objective * v).sum();
        a + b + self.constant_offset
    }

    /// Edge and aux values induced by a labeling of the internal nodes.
    pub fn induced_point(&self, x: &Labeling) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(x.len(), self.num_internal);
        let label_of = |node: usize| -> usize {
            if node < self.num_internal {
                x.0[node]
            } else {
                node - self.num_internal
            }
        };
        let y: Vec<f64> = self
            .edges
            .iter()
            .map(|e| if label_of(e.u) == label_of(e.v) { 0.0 } else { 1.0 })
            .collect();
        let s = self.aux.iter().map(|a| a.product(&y)).collect();
        (y, s)
    }

    /// Aux values implied by integral edge values.
    pub fn aux_products(&self, y: &[f64]) -> Vec<f64> {
        self.aux.iter().map(|a| a.product(y)).collect()
    }
}

/// Whether a table over `order` variables with `labels` labels depends only on
/// the induced partition; returns the LPI weights if so.
fn table_as_lpi(values: &[f64], order: usize, labels: usize) -> Option<Vec<f64>> {
    if order > MAX_PARTITION_ORDER {
        return None;
    }
    let parts = enumerate_partitions(order).ok()?;
    let mut weights: Vec<Option<f64>> = vec![None; parts.len()];
    let mut tuple = vec![0usize; order];
    for &v in values {
        let idx = partition_index(&tuple).ok()?;
        match weights[idx] {
            None => weights[idx] = Some(v),
            Some(w) if w == v => {}
            Some(_) => return None,
        }
        // next tuple, last variable fastest
        for k in (0..order).rev() {
            tuple[k] += 1;
            if tuple[k] < labels {
                break;
            }
            tuple[k] = 0;
        }
    }
    // partitions with more blocks than labels never occur; their weight is irrelevant
    Some(weights.into_iter().map(|w| w.unwrap_or(0.0)).collect())
}

/// Builds the multicut instance of a factor graph.
pub fn build_multicut(fg: &FactorGraph) -> Result<MulticutInstance> {
    let n = fg.num_variables();
    let mut inst = MulticutInstance::new(n);
    inst.mode = fg.mode();
    inst.constant_offset = fg.constant();
    let labels = fg.num_labels();

    // Pairwise scopes first so higher-order attachments see them.
    let mut unaries: Vec<Vec<f64>> = Vec::new();
    let mut higher: Vec<&Factor> = Vec::new();
    for f in fg.factors() {
        match (f.kind(), f.order()) {
            (FactorKind::Table(values), 1) => {
                if fg.mode() == Mode::Unsupervised {
                    return Err(Error::Model("unsupervised models cannot contain first-order factors".into()));
                }
                if unaries.is_empty() {
                    unaries = vec![vec![0.0; labels]; n];
                }
                for (g, v) in unaries[f.vars()[0]].iter_mut().zip(values) {
                    *g += v;
                }
            }
            (FactorKind::Potts { equal, unequal }, 2) => {
                inst.add_weight(f.vars()[0], f.vars()[1], unequal - equal);
                inst.constant_offset += equal;
            }
            (FactorKind::Table(values), 2) => {
                let w = table_as_lpi(values, 2, labels).ok_or_else(|| {
                    Error::Unsupported(format!(
                        "pairwise table over {:?} is not label-permutation invariant",
                        f.vars()
                    ))
                })?;
                inst.add_weight(f.vars()[0], f.vars()[1], w[1] - w[0]);
                inst.constant_offset += w[0];
            }
            _ => higher.push(f),
        }
    }
    for f in higher {
        match f.kind() {
            FactorKind::Lpi(w) => {
                if w.iter().any(|&v| v != 0.0) {
                    inst.attach_lpi_factor(f.vars(), w)?;
                }
            }
            FactorKind::Junction { lambda } => {
                if *lambda != 0.0 {
                    inst.attach_lpi_factor(f.vars(), &junction_to_lpi(*lambda))?;
                }
            }
            FactorKind::HoPotts { equal, unequal } => {
                inst.attach_hopotts_factor(f.vars(), *equal, *unequal)?;
            }
            FactorKind::Table(values) => {
                let w = table_as_lpi(values, f.order(), labels).ok_or_else(|| {
                    Error::Unsupported(format!(
                        "table factor over {:?} is not label-permutation invariant",
                        f.vars()
                    ))
                })?;
                inst.attach_lpi_factor(f.vars(), &w)?;
            }
            FactorKind::Potts { .. } => unreachable!("Potts factors are pairwise"),
        }
    }

    if fg.mode() == Mode::Supervised {
        inst.terminals = (0..labels).map(|l| n + l).collect();
        let zero = vec![0.0; labels];
        for v in 0..n {
            let g = unaries.get(v).unwrap_or(&zero);
            let u = terminal_weights(g)?;
            let mut terms = Vec::with_capacity(labels);
            for (l, &ul) in u.iter().enumerate() {
                let e = inst.add_weight(n + l, v, ul);
                terms.push((Var::Edge(e), 1.0));
            }
            inst.fixed_rows.push(ConstraintRow::new(
                terms,
                Sense::Eq,
                (labels - 1) as f64,
                RowClass::Initial,
            ));
        }
        for a in 0..labels {
            for b in a + 1..labels {
                let e = inst.ensure_edge(n + a, n + b);
                inst.fixed_rows.push(ConstraintRow::new(
                    vec![(Var::Edge(e), 1.0)],
                    Sense::Eq,
                    1.0,
                    RowClass::TerminalFixed,
                ));
            }
        }
    }
    Ok(inst)
}

/// Canonical labeling of a partition given as arbitrary block ids.
pub fn canonical_labels(blocks: &[usize]) -> Labeling {
    Labeling(canonical_rgs(blocks).into_iter().map(usize::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FactorGraph;

    #[test]
    fn terminal_weight_examples() {
        assert_eq!(terminal_weights(&[3.0, 5.0]).unwrap(), vec![5.0, 3.0]);
        assert_eq!(terminal_weights(&[1.0, 2.0, 3.0]).unwrap(), vec![2.0, 1.0, 0.0]);
        assert_eq!(terminal_weights(&[0.0; 4]).unwrap(), vec![0.0; 4]);
        let u = terminal_weights(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(u[0] + u[1], 3.0);
        assert!(terminal_weights(&[1.0]).is_err());
    }

    #[test]
    fn triangle_instance() {
        let fg = FactorGraph::unsupervised(3)
            .with_factor(Factor::potts(0, 1, 0.0, -1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(1, 2, 0.0, -1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(0, 2, 0.0, 2.0).unwrap())
            .unwrap();
        let inst = build_multicut(&fg).unwrap();
        let w: Vec<f64> = inst.edges.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![-1.0, -1.0, 2.0]);
        assert_eq!(inst.constant_offset, 0.0);
        assert_eq!(inst.multicut_cost(&[1.0, 1.0, 0.0], &[]), -2.0);
    }

    #[test]
    fn supervised_two_variable_counts() {
        let fg = FactorGraph::supervised(2, 2)
            .unwrap()
            .with_factor(Factor::potts(0, 1, 0.0, 1.0).unwrap())
            .unwrap();
        let inst = build_multicut(&fg).unwrap();
        assert_eq!(inst.num_nodes(), 4);
        assert_eq!(inst.num_edges(), 6);
        assert_eq!(inst.fixed_rows.len(), 3);
    }

    #[test]
    fn product_row_examples() {
        let z = [Var::Edge(0), Var::Edge(1)];
        let rows = product_rows(&z, &[], Var::Aux(0), ReductionForm::Both).unwrap();
        assert_eq!(rows.len(), 4);
        // z = (0.1, 0.3): aggregated upper row gives s <= 0.2, per-literal s <= 0.1
        let y = [0.1, 0.3];
        let upper = |row: &ConstraintRow| {
            // largest s satisfying the row
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if row.violation(&y, &[mid]) <= 1e-12 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        assert!((upper(&rows[0]) - 0.2).abs() < 1e-9);
        assert!((upper(&rows[2]) - 0.1).abs() < 1e-9);
        // B- = {1}, z = 1 forces s = 0
        let rows = product_rows(&[], &[Var::Edge(0)], Var::Aux(0), ReductionForm::Both).unwrap();
        for r in &rows {
            if r.sense == Sense::Le {
                assert!(r.violation(&[1.0], &[0.5]) > 0.0);
            }
        }
        assert!(product_rows(&[], &[], Var::Aux(0), ReductionForm::Both).is_err());
    }

    #[test]
    fn lpi_attachment_counts() {
        let mut inst = MulticutInstance::new(3);
        inst.add_weight(0, 1, 1.0);
        inst.add_weight(1, 2, 1.0);
        inst.attach_lpi_factor(&[0, 1, 2], &[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(inst.aux.len(), 5);
        assert_eq!(inst.num_edges(), 3);
        assert_eq!(inst.fixed_rows.len(), 26);
    }

    #[test]
    fn hopotts_attachment_on_four_cycle() {
        let mut inst = MulticutInstance::new(4);
        for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            inst.add_weight(a, b, 0.5);
        }
        inst.attach_hopotts_factor(&[0, 1, 2, 3], 0.0, 1.0).unwrap();
        assert_eq!(inst.aux.len(), 1);
        assert_eq!(inst.fixed_rows.len(), 6);
        assert_eq!(inst.aux[0].objective, -1.0);
        let same = Labeling(vec![2, 2, 2, 2]);
        let (y, s) = inst.induced_point(&same);
        assert_eq!(s, vec![1.0]);
        assert_eq!(inst.multicut_cost(&y, &s), 0.0);
        let split = Labeling(vec![0, 0, 1, 1]);
        let (y, s) = inst.induced_point(&split);
        assert_eq!(s, vec![0.0]);
        assert_eq!(inst.multicut_cost(&y, &s), 1.0 + 0.5 * 2.0);
    }

    #[test]
    fn hopotts_scope_without_edges_is_connected() {
        let mut inst = MulticutInstance::new(5);
        inst.attach_hopotts_factor(&[0, 2, 4], 1.0, 3.0).unwrap();
        assert_eq!(inst.num_edges(), 2);
        assert_eq!(inst.aux[0].neg.len(), 2);
    }

    #[test]
    fn non_invariant_tables_are_rejected() {
        let fg = FactorGraph::supervised(2, 2)
            .unwrap()
            .with_factor(Factor::new(vec![0, 1], FactorKind::Table(vec![0.0, 1.0, 2.0, 0.0])).unwrap())
            .unwrap();
        assert!(matches!(build_multicut(&fg), Err(Error::Unsupported(_))));
        let fg = FactorGraph::supervised(2, 2)
            .unwrap()
            .with_factor(Factor::new(vec![0, 1], FactorKind::Table(vec![0.5, 1.0, 1.0, 0.5])).unwrap())
            .unwrap();
        let inst = build_multicut(&fg).unwrap();
        assert_eq!(inst.edge_between(0, 1).map(|e| inst.edges[e].weight), Some(0.5));
    }
}
