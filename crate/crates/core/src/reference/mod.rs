//! Verification oracles: exhaustive minimization and the local-polytope LP.
//! Neither is used on the main solve path.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{bell, enumerate_partitions, FactorGraph, FactorKind, Labeling, Mode, MAX_PARTITION_ORDER};
use crate::simplex::{solve_lp, LinearProgram, LpStatus, Row, Sense};

/// Largest number of labelings (or partitions) the exhaustive oracle visits.
pub const BRUTE_FORCE_CAP: f64 = 1e7;

/// Global minimizer by enumeration; ties go to the lexicographically smallest
/// labeling. Unsupervised models enumerate partitions in canonical form.
pub fn brute_force_min(fg: &FactorGraph) -> Result<(Labeling, f64)> {
    let n = fg.num_variables();
    match fg.mode() {
        Mode::Supervised => {
            let l = fg.num_labels();
            let size = (l as f64).powi(n as i32);
            if size > BRUTE_FORCE_CAP {
                return Err(Error::TooLarge { size, cap: BRUTE_FORCE_CAP });
            }
            let mut x = Labeling(vec![0; n]);
            let mut best = (x.clone(), fg.eval_energy(&x)?);
            loop {
                // odometer, last variable fastest, so visits are lexicographic
                let mut k = n;
                loop {
                    if k == 0 {
                        return Ok(best);
                    }
                    k -= 1;
                    x.0[k] += 1;
                    if x.0[k] < l {
                        break;
                    }
                    x.0[k] = 0;
                }
                let e = fg.eval_energy(&x)?;
                if e < best.1 {
                    best = (x.clone(), e);
                }
            }
        }
        Mode::Unsupervised => {
            if n == 0 {
                return Ok((Labeling(Vec::new()), fg.eval_energy(&Labeling(Vec::new()))?));
            }
            let size = if n <= 25 { bell(n) as f64 } else { f64::INFINITY };
            if n > MAX_PARTITION_ORDER || size > BRUTE_FORCE_CAP {
                return Err(Error::TooLarge { size, cap: BRUTE_FORCE_CAP });
            }
            let mut best: Option<(Labeling, f64)> = None;
            for p in enumerate_partitions(n)? {
                let x = Labeling(p.rgs.iter().map(|&b| b as usize).collect());
                let e = fg.eval_energy(&x)?;
                if best.as_ref().is_none_or(|b| e < b.1) {
                    best = Some((x, e));
                }
            }
            Ok(best.expect("at least one partition"))
        }
    }
}

/// Optimum of the local-polytope relaxation of a supervised second-order model.
pub fn local_polytope_lp(fg: &FactorGraph) -> Result<f64> {
    if fg.mode() != Mode::Supervised {
        return Err(Error::Unsupported("local polytope LP needs a supervised model".into()));
    }
    let n = fg.num_variables();
    let l = fg.num_labels();
    let mut unary = vec![0.0; n * l];
    let mut pairs: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for f in fg.factors() {
        let vars = f.vars();
        match (f.kind(), vars.len()) {
            (FactorKind::Table(v), 1) => {
                for (k, &val) in v.iter().enumerate() {
                    unary[vars[0] * l + k] += val;
                }
            }
            (kind, 2) => {
                let theta = pairs.entry((vars[0], vars[1])).or_insert_with(|| vec![0.0; l * l]);
                for a in 0..l {
                    for b in 0..l {
                        let val = match kind {
                            FactorKind::Table(v) => v[a * l + b],
                            _ => f.eval(&[a, b], l)?,
                        };
                        theta[a * l + b] += val;
                    }
                }
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "local polytope LP supports factors of order <= 2, found order {}",
                    vars.len()
                )))
            }
        }
    }
    let mut objective = unary;
    let pair_base: Vec<usize> = pairs
        .values()
        .scan(n * l, |off, theta| {
            let base = *off;
            *off += theta.len();
            Some(base)
        })
        .collect();
    for theta in pairs.values() {
        objective.extend_from_slice(theta);
    }
    let mut lp = LinearProgram::unit_box(objective);
    for i in 0..n {
        lp.push_row(Row::new((0..l).map(|a| (i * l + a, 1.0)).collect(), Sense::Eq, 1.0));
    }
    for (((i, j), _), &base) in pairs.iter().zip(&pair_base) {
        for a in 0..l {
            let mut terms: Vec<(usize, f64)> = (0..l).map(|b| (base + a * l + b, 1.0)).collect();
            terms.push((i * l + a, -1.0));
            lp.push_row(Row::new(terms, Sense::Eq, 0.0));
        }
        for b in 0..l {
            let mut terms: Vec<(usize, f64)> = (0..l).map(|a| (base + a * l + b, 1.0)).collect();
            terms.push((j * l + b, -1.0));
            lp.push_row(Row::new(terms, Sense::Eq, 0.0));
        }
    }
    let sol = solve_lp(&lp, None)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Internal("local polytope LP not solved to optimality".into()));
    }
    Ok(sol.objective_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Factor;

    #[test]
    fn single_variable() {
        let fg = FactorGraph::supervised(1, 3)
            .unwrap()
            .with_factor(Factor::unary(0, vec![3.0, 1.0, 2.0]).unwrap())
            .unwrap();
        let (x, v) = brute_force_min(&fg).unwrap();
        assert_eq!(x.0, vec![1]);
        assert_eq!(v, 1.0);
        assert_eq!(local_polytope_lp(&fg).unwrap(), 1.0);
    }

    #[test]
    fn triangle_correlation_clustering() {
        let fg = FactorGraph::unsupervised(3)
            .with_factor(Factor::potts(0, 1, 0.0, -1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(1, 2, 0.0, -1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(0, 2, 0.0, 2.0).unwrap())
            .unwrap();
        let (x, v) = brute_force_min(&fg).unwrap();
        assert_eq!(x.0, vec![0, 1, 0]);
        assert_eq!(v, -2.0);
    }

    #[test]
    fn tie_goes_to_smallest_labeling() {
        let fg = FactorGraph::supervised(2, 2)
            .unwrap()
            .with_factor(Factor::unary(0, vec![0.0, 1.0]).unwrap())
            .unwrap()
            .with_factor(Factor::unary(1, vec![1.0, 0.0]).unwrap())
            .unwrap()
            .with_factor(Factor::potts(0, 1, 0.0, 1.0).unwrap())
            .unwrap();
        let (x, v) = brute_force_min(&fg).unwrap();
        assert_eq!(x.0, vec![0, 0]);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn strong_coupling_lp_is_integral() {
        let fg = FactorGraph::supervised(2, 2)
            .unwrap()
            .with_factor(Factor::unary(0, vec![0.0, 1.0]).unwrap())
            .unwrap()
            .with_factor(Factor::unary(1, vec![1.0, 0.0]).unwrap())
            .unwrap()
            .with_factor(Factor::potts(0, 1, 0.0, 10.0).unwrap())
            .unwrap();
        assert!((local_polytope_lp(&fg).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn caps_and_unsupported_orders() {
        let fg = FactorGraph::supervised(30, 2).unwrap();
        assert!(matches!(brute_force_min(&fg), Err(Error::TooLarge { .. })));
        let fg = FactorGraph::supervised(3, 2)
            .unwrap()
            .with_factor(Factor::new(vec![0, 1, 2], FactorKind::HoPotts { equal: 0.0, unequal: 1.0 }).unwrap())
            .unwrap();
        assert!(matches!(local_polytope_lp(&fg), Err(Error::Unsupported(_))));
    }
}
