//! Triangle and multi-terminal inequalities for supervised instances.

use super::{Graph, SeparationReport, EPSILON};
use crate::error::{Error, Result};
use crate::model::Mode;
use crate::reduction::{ConstraintRow, MulticutInstance, RowClass, Var};
use crate::simplex::Sense;

fn require_terminals(inst: &MulticutInstance, what: &str) -> Result<()> {
    if inst.mode != Mode::Supervised || inst.terminals.is_empty() {
        return Err(Error::Usage(format!("{what} needs a supervised instance")));
    }
    Ok(())
}

/// Terminal edge ids `tv` for each terminal, per internal node.
fn terminal_edges(inst: &MulticutInstance) -> Vec<Vec<usize>> {
    (0..inst.num_internal)
        .map(|v| {
            inst.terminals
                .iter()
                .map(|&t| inst.edge_between(t, v).expect("terminal edges exist"))
                .collect()
        })
        .collect()
}

pub(crate) fn triangles_into(inst: &MulticutInstance, y: &[f64], report: &mut SeparationReport) {
    let te = terminal_edges(inst);
    let g = Graph::internal(inst);
    for &(uv, u, v) in &g.edges {
        for (tu, tv) in te[u].iter().copied().zip(te[v].iter().copied()) {
            // the larger side of each triangle must not exceed the other two
            for (big, a, b) in [(uv, tu, tv), (tu, tv, uv), (tv, tu, uv)] {
                let viol = y[big] - y[a] - y[b];
                if viol > EPSILON {
                    let row = ConstraintRow::new(
                        vec![(Var::Edge(a), 1.0), (Var::Edge(b), 1.0), (Var::Edge(big), -1.0)],
                        Sense::Ge,
                        0.0,
                        RowClass::TerminalTriangle,
                    );
                    report.push(row, viol);
                    // two sides of a triangle cannot both be violated
                    break;
                }
            }
        }
    }
}

/// Violated triangles through one terminal and one internal edge.
pub fn separate_terminal_triangles(inst: &MulticutInstance, y: &[f64]) -> Result<SeparationReport> {
    require_terminals(inst, "terminal triangle separation")?;
    let mut report = SeparationReport::default();
    triangles_into(inst, y, &mut report);
    Ok(report)
}

/// Multi-terminal rows `y_uv >= sum_{t in S} (y_tu - y_tv)` with the
/// maximizing subset `S = {t : y_tu > y_tv}`, in both orientations.
pub fn separate_multiterminal(inst: &MulticutInstance, y: &[f64]) -> Result<SeparationReport> {
    require_terminals(inst, "multi-terminal separation")?;
    let te = terminal_edges(inst);
    let g = Graph::internal(inst);
    let mut report = SeparationReport::default();
    for &(uv, u, v) in &g.edges {
        let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
        for (a, b) in [(u, v), (v, u)] {
            let subset: Vec<(usize, usize)> = te[a]
                .iter()
                .zip(&te[b])
                .filter(|(&ta, &tb)| y[ta] > y[tb])
                .map(|(&ta, &tb)| (ta, tb))
                .collect();
            let sum: f64 = subset.iter().map(|&(ta, tb)| y[ta] - y[tb]).sum();
            let viol = sum - y[uv];
            if viol > EPSILON && best.as_ref().is_none_or(|b| viol > b.0) {
                best = Some((viol, subset));
            }
        }
        if let Some((viol, subset)) = best {
            let mut terms = vec![(Var::Edge(uv), 1.0)];
            for (ta, tb) in subset {
                terms.push((Var::Edge(ta), -1.0));
                terms.push((Var::Edge(tb), 1.0));
            }
            report.push(ConstraintRow::new(terms, Sense::Ge, 0.0, RowClass::MultiTerminal), viol);
        }
    }
    Ok(report)
}
