//! Mapping relaxed edge values to labelings.

use crate::error::{Error, Result};
use crate::model::{Labeling, Mode};
use crate::reduction::{canonical_labels, MulticutInstance};

fn require_supervised(inst: &MulticutInstance) -> Result<()> {
    if inst.mode != Mode::Supervised {
        return Err(Error::Usage("label rounding needs a supervised instance".into()));
    }
    Ok(())
}

/// Terminal edge values `y_tv` of node `v`, one per label.
fn terminal_values<'a>(inst: &'a MulticutInstance, y: &'a [f64], v: usize) -> impl Iterator<Item = f64> + 'a {
    inst.terminals
        .iter()
        .map(move |&t| y[inst.edge_between(t, v).expect("terminal edge")])
}

/// Each node takes the label whose terminal edge is smallest; ties go to the lower label.
pub fn round_nearest(inst: &MulticutInstance, y: &[f64]) -> Result<Labeling> {
    require_supervised(inst)?;
    Ok(Labeling(
        (0..inst.num_internal)
            .map(|v| {
                terminal_values(inst, y, v)
                    .enumerate()
                    .fold((0, f64::INFINITY), |best, (l, val)| if val < best.1 { (l, val) } else { best })
                    .0
            })
            .collect(),
    ))
}

/// Threshold labeling: first label with `y_tv <= rho`, else the last label.
fn threshold_labeling(inst: &MulticutInstance, y: &[f64], rho: f64) -> Labeling {
    let last = inst.terminals.len() - 1;
    Labeling(
        (0..inst.num_internal)
            .map(|v| terminal_values(inst, y, v).position(|val| val <= rho).unwrap_or(last))
            .collect(),
    )
}

/// Energy of a labeling through the instance's own cost function.
pub fn labeling_cost(inst: &MulticutInstance, x: &Labeling) -> f64 {
    let (yy, s) = inst.induced_point(x);
    inst.multicut_cost(&yy, &s)
}

/// Best threshold labeling over `thresholds`, with its cost. The first
/// threshold wins ties.
pub fn round_derandomized(inst: &MulticutInstance, y: &[f64], thresholds: &[f64]) -> Result<(Labeling, f64)> {
    require_supervised(inst)?;
    if thresholds.is_empty() {
        return Err(Error::Input("threshold list is empty".into()));
    }
    let mut best: Option<(Labeling, f64)> = None;
    for &rho in thresholds {
        let x = threshold_labeling(inst, y, rho);
        let c = labeling_cost(inst, &x);
        if best.as_ref().is_none_or(|b| c < b.1) {
            best = Some((x, c));
        }
    }
    Ok(best.expect("non-empty thresholds"))
}

/// Every distinct terminal edge value plus `0`, ascending. Any threshold in
/// `[0, 1]` yields the same labeling as one of these.
pub fn derandomized_thresholds(inst: &MulticutInstance, y: &[f64]) -> Vec<f64> {
    let mut t: Vec<f64> = (0..inst.num_internal)
        .flat_map(|v| terminal_values(inst, y, v).collect::<Vec<_>>())
        .collect();
    t.push(0.0);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// `0, 0.01, ..., 1`.
pub fn pseudo_thresholds() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

/// Shores are the components of `{e : y_e <= kappa}`. Returns the projected
/// edge values and the canonical component labeling.
pub fn round_components(inst: &MulticutInstance, y: &[f64], kappa: f64) -> Result<(Vec<f64>, Labeling)> {
    if inst.mode != Mode::Unsupervised {
        return Err(Error::Usage("component rounding needs an unsupervised instance".into()));
    }
    let n = inst.num_internal;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (e, ed) in inst.edges.iter().enumerate() {
        if y[e] <= kappa {
            let (a, b) = (find(&mut parent, ed.u), find(&mut parent, ed.v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let x = canonical_labels(&roots);
    let (yy, _) = inst.induced_point(&x);
    Ok((yy, x))
}

/// `0, 0.05, ..., 0.5`.
pub fn kappa_sweep() -> Vec<f64> {
    (0..=10).map(|k| k as f64 * 0.05).collect()
}

/// Best component rounding over several `kappa`, with its cost.
pub fn round_components_best(inst: &MulticutInstance, y: &[f64], kappas: &[f64]) -> Result<(Labeling, f64)> {
    if kappas.is_empty() {
        return Err(Error::Input("kappa list is empty".into()));
    }
    let mut best: Option<(Labeling, f64)> = None;
    for &k in kappas {
        let (_, x) = round_components(inst, y, k)?;
        let c = labeling_cost(inst, &x);
        if best.as_ref().is_none_or(|b| c < b.1) {
            best = Some((x, c));
        }
    }
    Ok(best.expect("non-empty kappas"))
}
