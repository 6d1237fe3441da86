//! Factor graphs over discrete labels and their energy.

mod partition;

pub use partition::{
    bell, canonical_rgs, enumerate_partitions, pair_count, pair_index, partition_index, tau,
    Partition, MAX_PARTITION_ORDER,
};

use crate::error::{Error, Result};

/// Whether labels carry meaning (supervised, terminals per label) or only the
/// induced partition matters (unsupervised, correlation clustering).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Supervised,
    Unsupervised,
}

/// The function attached to a factor.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorKind {
    /// Explicit table, first variable slowest.
    Table(Vec<f64>),
    /// Pairwise Potts: `equal` when both labels agree, `unequal` otherwise.
    Potts { equal: f64, unequal: f64 },
    /// Higher-order Potts: `equal` when all members agree, `unequal` otherwise.
    HoPotts { equal: f64, unequal: f64 },
    /// Label-permutation-invariant function, one weight per partition in canonical order.
    Lpi(Vec<f64>),
    /// Four-variable junction penalty: `lambda` when more than two distinct labels meet.
    Junction { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    vars: Vec<usize>,
    kind: FactorKind,
}

impl Factor {
    /// Builds a factor, checking arity against the kind. Variables must be
    /// distinct and ascending.
    pub fn new(vars: Vec<usize>, kind: FactorKind) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Model("factor without variables".into()));
        }
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Model(format!(
                "factor variables {vars:?} must be distinct and ascending"
            )));
        }
        let n = vars.len();
        match &kind {
            FactorKind::Potts { .. } if n != 2 => {
                return Err(Error::Model(format!("Potts factor needs 2 variables, got {n}")))
            }
            FactorKind::Junction { lambda } => {
                if n != 4 {
                    return Err(Error::Model(format!(
                        "junction factor needs 4 variables, got {n}"
                    )));
                }
                if !(*lambda >= 0.0) {
                    return Err(Error::Model("junction weight must be non-negative".into()));
                }
            }
            FactorKind::Lpi(w) => {
                if n > MAX_PARTITION_ORDER {
                    return Err(Error::Unsupported(format!(
                        "LPI factor of order {n} exceeds {MAX_PARTITION_ORDER}"
                    )));
                }
                if w.len() as u64 != bell(n) {
                    return Err(Error::Model(format!(
                        "LPI factor of order {n} needs {} weights, got {}",
                        bell(n),
                        w.len()
                    )));
                }
            }
            FactorKind::HoPotts { .. } if n < 2 => {
                return Err(Error::Model("HO-Potts factor needs at least 2 variables".into()))
            }
            _ => {}
        }
        Ok(Factor { vars, kind })
    }

    pub fn potts(a: usize, b: usize, equal: f64, unequal: f64) -> Result<Self> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Factor::new(vec![a, b], FactorKind::Potts { equal, unequal })
    }

    pub fn unary(v: usize, values: Vec<f64>) -> Result<Self> {
        Factor::new(vec![v], FactorKind::Table(values))
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn kind(&self) -> &FactorKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.vars.len()
    }

    /// Value of the factor for the labels of its variables, in `vars` order.
    ///
    /// `num_labels` is the per-variable label count (needed for table layout).
    pub fn eval(&self, labels: &[usize], num_labels: usize) -> Result<f64> {
        debug_assert_eq!(labels.len(), self.vars.len());
        Ok(match &self.kind {
            FactorKind::Table(values) => {
                let mut idx = 0usize;
                for &l in labels {
                    idx = idx * num_labels + l;
                }
                values[idx]
            }
            FactorKind::Potts { equal, unequal } => {
                if labels[0] == labels[1] {
                    *equal
                } else {
                    *unequal
                }
            }
            FactorKind::HoPotts { equal, unequal } => {
                if labels.iter().all(|&l| l == labels[0]) {
                    *equal
                } else {
                    *unequal
                }
            }
            FactorKind::Lpi(weights) => weights[partition_index(labels)?],
            FactorKind::Junction { lambda } => {
                if distinct_count(labels) > 2 {
                    *lambda
                } else {
                    0.0
                }
            }
        })
    }
}

fn distinct_count(labels: &[usize]) -> usize {
    let mut seen: Vec<usize> = Vec::with_capacity(labels.len());
    for &l in labels {
        if !seen.contains(&l) {
            seen.push(l);
        }
    }
    seen.len()
}

/// LPI weights equivalent to a junction factor with weight `lambda`.
pub fn junction_to_lpi(lambda: f64) -> Vec<f64> {
    enumerate_partitions(4)
        .expect("order 4 is within the cap")
        .iter()
        .map(|p| if p.blocks >= 3 { lambda } else { 0.0 })
        .collect()
}

/// A labeling: one 0-based label per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling(pub Vec<usize>);

impl Labeling {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Labeling {
    fn from(v: Vec<usize>) -> Self {
        Labeling(v)
    }
}

/// A discrete energy model: variables with a shared label count plus typed factors.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    num_variables: usize,
    num_labels: usize,
    mode: Mode,
    factors: Vec<Factor>,
    constant: f64,
}

impl FactorGraph {
    /// Supervised model with `num_labels >= 2` labels per variable.
    pub fn supervised(num_variables: usize, num_labels: usize) -> Result<Self> {
        if num_labels < 2 {
            return Err(Error::Model(format!(
                "supervised models need at least 2 labels, got {num_labels}"
            )));
        }
        Ok(FactorGraph {
            num_variables,
            num_labels,
            mode: Mode::Supervised,
            factors: Vec::new(),
            constant: 0.0,
        })
    }

    /// Unsupervised model: every variable ranges over `num_variables` labels.
    pub fn unsupervised(num_variables: usize) -> Self {
        FactorGraph {
            num_variables,
            num_labels: num_variables,
            mode: Mode::Unsupervised,
            factors: Vec::new(),
            constant: 0.0,
        }
    }

    /// Adds a factor after checking it against the model.
    pub fn add_factor(&mut self, factor: Factor) -> Result<()> {
        if let Some(&v) = factor.vars.last() {
            if v >= self.num_variables {
                return Err(Error::Model(format!(
                    "factor variable {v} out of range (model has {})",
                    self.num_variables
                )));
            }
        }
        if self.mode == Mode::Unsupervised && factor.order() == 1 {
            return Err(Error::Model(
                "unsupervised models cannot contain first-order factors".into(),
            ));
        }
        if let FactorKind::Table(values) = &factor.kind {
            let expected = (self.num_labels as u128).checked_pow(factor.order() as u32);
            if expected != Some(values.len() as u128) {
                return Err(Error::Model(format!(
                    "table over {} variables with {} labels needs {} entries, got {}",
                    factor.order(),
                    self.num_labels,
                    expected.map_or("too many".to_string(), |e| e.to_string()),
                    values.len()
                )));
            }
        }
        self.factors.push(factor);
        Ok(())
    }

    pub fn with_factor(mut self, factor: Factor) -> Result<Self> {
        self.add_factor(factor)?;
        Ok(self)
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Energy term independent of the labeling.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn set_constant(&mut self, c: f64) {
        self.constant = c;
    }

    pub fn max_order(&self) -> usize {
        self.factors.iter().map(Factor::order).max().unwrap_or(0)
    }

    /// Checks that `x` assigns a valid label to every variable.
    pub fn check_labeling(&self, x: &Labeling) -> Result<()> {
        if x.len() != self.num_variables {
            return Err(Error::Input(format!(
                "labeling has {} entries, model has {} variables",
                x.len(),
                self.num_variables
            )));
        }
        if let Some((v, &l)) = x.0.iter().enumerate().find(|(_, &l)| l >= self.num_labels) {
            return Err(Error::Input(format!(
                "label {l} of variable {v} out of range 0..{}",
                self.num_labels
            )));
        }
        Ok(())
    }

    /// Total energy `sum_f phi_f(x_f)`.
    pub fn eval_energy(&self, x: &Labeling) -> Result<f64> {
        self.check_labeling(x)?;
        let mut buf = Vec::new();
        let mut total = self.constant;
        for f in &self.factors {
            buf.clear();
            buf.extend(f.vars.iter().map(|&v| x.0[v]));
            total += f.eval(&buf, self.num_labels)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potts_equal_labels_cost_equal_weight() {
        let fg = FactorGraph::supervised(2, 2)
            .unwrap()
            .with_factor(Factor::potts(0, 1, 0.0, 3.0).unwrap())
            .unwrap();
        assert_eq!(fg.eval_energy(&Labeling(vec![0, 0])).unwrap(), 0.0);
        assert_eq!(fg.eval_energy(&Labeling(vec![0, 1])).unwrap(), 3.0);
    }

    #[test]
    fn lpi_reads_weight_of_induced_partition() {
        let w = vec![10.0, 11.0, 12.0, 13.0, 14.0];
        let fg = FactorGraph::supervised(3, 3)
            .unwrap()
            .with_factor(Factor::new(vec![0, 1, 2], FactorKind::Lpi(w)).unwrap())
            .unwrap();
        // {12|3} is rgs 001
        assert_eq!(fg.eval_energy(&Labeling(vec![0, 0, 1])).unwrap(), 11.0);
        assert_eq!(fg.eval_energy(&Labeling(vec![2, 2, 0])).unwrap(), 11.0);
        assert_eq!(fg.eval_energy(&Labeling(vec![1, 0, 2])).unwrap(), 14.0);
    }

    #[test]
    fn junction_penalizes_three_way_meetings() {
        let fg = FactorGraph::supervised(4, 3)
            .unwrap()
            .with_factor(Factor::new(vec![0, 1, 2, 3], FactorKind::Junction { lambda: 2.0 }).unwrap())
            .unwrap();
        assert_eq!(fg.eval_energy(&Labeling(vec![0, 0, 1, 2])).unwrap(), 2.0);
        assert_eq!(fg.eval_energy(&Labeling(vec![0, 0, 1, 1])).unwrap(), 0.0);
    }

    #[test]
    fn junction_expansion_weights() {
        assert!(junction_to_lpi(0.0).iter().all(|&w| w == 0.0));
        let w = junction_to_lpi(1.0);
        assert_eq!(w.len(), 15);
        assert_eq!(w.iter().filter(|&&v| v == 1.0).count(), 7);
        assert_eq!(w.iter().filter(|&&v| v == 0.0).count(), 8);
    }

    #[test]
    fn junction_and_expanded_lpi_agree_on_all_tuples() {
        let junction = Factor::new(vec![0, 1, 2, 3], FactorKind::Junction { lambda: 1.7 }).unwrap();
        let lpi = Factor::new(vec![0, 1, 2, 3], FactorKind::Lpi(junction_to_lpi(1.7))).unwrap();
        for code in 0..81 {
            let x: Vec<usize> = (0..4).map(|k| (code / 3usize.pow(k)) % 3).collect();
            assert_eq!(junction.eval(&x, 3).unwrap(), lpi.eval(&x, 3).unwrap());
        }
    }

    #[test]
    fn table_layout_first_variable_slowest() {
        let f = Factor::new(vec![0, 1], FactorKind::Table(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]))
            .unwrap();
        // 2 labels for var 0, 3 for var 1 is not allowed (shared count); use 3x... check index math
        assert_eq!(f.eval(&[1, 0], 3).unwrap(), 3.0);
        assert_eq!(f.eval(&[0, 2], 3).unwrap(), 2.0);
    }

    #[test]
    fn out_of_range_label_is_rejected() {
        let fg = FactorGraph::supervised(2, 2).unwrap();
        assert!(matches!(
            fg.eval_energy(&Labeling(vec![0, 2])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn structural_checks() {
        assert!(Factor::new(vec![1, 0], FactorKind::Potts { equal: 0.0, unequal: 1.0 }).is_err());
        assert!(Factor::new(vec![0, 1, 2], FactorKind::Potts { equal: 0.0, unequal: 1.0 }).is_err());
        assert!(Factor::new(vec![0, 1, 2], FactorKind::Lpi(vec![0.0; 4])).is_err());
        assert!(Factor::new(vec![0, 1, 2], FactorKind::Junction { lambda: 1.0 }).is_err());
        let mut fg = FactorGraph::unsupervised(3);
        assert!(fg.add_factor(Factor::unary(0, vec![0.0; 3]).unwrap()).is_err());
        assert!(fg.add_factor(Factor::potts(0, 5, 0.0, 1.0).unwrap()).is_err());
        assert!(FactorGraph::supervised(3, 1).is_err());
    }

    #[test]
    fn energy_is_additive_over_factor_sets() {
        let f1 = Factor::potts(0, 1, 0.5, -1.0).unwrap();
        let f2 = Factor::new(vec![0, 1, 2], FactorKind::HoPotts { equal: 2.0, unequal: -0.5 }).unwrap();
        let f3 = Factor::unary(2, vec![0.1, 0.2, 0.3]).unwrap();
        let mk = |fs: &[&Factor]| {
            let mut fg = FactorGraph::supervised(3, 3).unwrap();
            for f in fs {
                fg.add_factor((*f).clone()).unwrap();
            }
            fg
        };
        let all = mk(&[&f1, &f2, &f3]);
        let a = mk(&[&f1]);
        let b = mk(&[&f2, &f3]);
        for code in 0..27 {
            let x = Labeling((0..3).map(|k| (code / 3usize.pow(k)) % 3).collect());
            let lhs = all.eval_energy(&x).unwrap();
            let rhs = a.eval_energy(&x).unwrap() + b.eval_energy(&x).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn non_table_factors_are_label_permutation_invariant() {
        let kinds = vec![
            Factor::potts(0, 1, 0.3, 1.1).unwrap(),
            Factor::new(vec![0, 1, 2], FactorKind::HoPotts { equal: -1.0, unequal: 0.7 }).unwrap(),
            Factor::new(vec![0, 1, 2], FactorKind::Lpi(vec![1.0, 2.0, 3.0, 4.0, 5.0])).unwrap(),
            Factor::new(vec![0, 1, 2, 3], FactorKind::Junction { lambda: 4.0 }).unwrap(),
        ];
        for f in kinds {
            let n = f.order();
            let total = 4usize.pow(n as u32);
            for a in 0..total {
                let x: Vec<usize> = (0..n).map(|k| (a / 4usize.pow(k as u32)) % 4).collect();
                for b in 0..total {
                    let y: Vec<usize> = (0..n).map(|k| (b / 4usize.pow(k as u32)) % 4).collect();
                    if tau(&x) == tau(&y) {
                        assert_eq!(f.eval(&x, 4).unwrap(), f.eval(&y, 4).unwrap());
                    }
                }
            }
        }
    }
}
