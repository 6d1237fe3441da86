//! Local-search baselines: ICM, a depth-one lazy flipper and multi-shore Kernighan-Lin.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{FactorGraph, FactorKind, Labeling, Mode};
use crate::reduction::canonical_labels;

/// Strict improvement needed before a move is taken.
const MIN_GAIN: f64 = 1e-12;

/// Factor ids touching each variable.
fn incidence(fg: &FactorGraph) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); fg.num_variables()];
    for (k, f) in fg.factors().iter().enumerate() {
        for &v in f.vars() {
            if inc[v].last() != Some(&k) {
                inc[v].push(k);
            }
        }
    }
    inc
}

/// Energy of the factors around `v` with `v` set to `label`.
fn local_energy(fg: &FactorGraph, inc: &[Vec<usize>], x: &mut Labeling, v: usize, label: usize) -> Result<f64> {
    let old = x.0[v];
    x.0[v] = label;
    let mut e = 0.0;
    let mut buf = Vec::new();
    for &k in &inc[v] {
        let f = &fg.factors()[k];
        buf.clear();
        buf.extend(f.vars().iter().map(|&u| x.0[u]));
        e += f.eval(&buf, fg.num_labels())?;
    }
    x.0[v] = old;
    Ok(e)
}

/// Labels worth trying for one variable: all labels when supervised, else
/// the shores in use plus one empty shore.
fn candidates(fg: &FactorGraph, x: &Labeling) -> Vec<usize> {
    match fg.mode() {
        Mode::Supervised => (0..fg.num_labels()).collect(),
        Mode::Unsupervised => {
            let used: BTreeSet<usize> = x.0.iter().copied().collect();
            let fresh = (0..).find(|l| !used.contains(l)).expect("unbounded");
            let mut c: Vec<usize> = used.into_iter().collect();
            if fresh < fg.num_labels() {
                c.push(fresh);
            }
            c
        }
    }
}

/// Moves `v` to its best label if that strictly lowers the energy.
fn improve(fg: &FactorGraph, inc: &[Vec<usize>], x: &mut Labeling, v: usize) -> Result<bool> {
    let current = local_energy(fg, inc, x, v, x.0[v])?;
    let mut best = (x.0[v], current);
    for l in candidates(fg, x) {
        let e = local_energy(fg, inc, x, v, l)?;
        if e < best.1 - MIN_GAIN {
            best = (l, e);
        }
    }
    if best.0 != x.0[v] {
        x.0[v] = best.0;
        return Ok(true);
    }
    Ok(false)
}

/// Unary argmin per variable when supervised, one shore otherwise.
pub fn default_init(fg: &FactorGraph) -> Labeling {
    let n = fg.num_variables();
    if fg.mode() == Mode::Unsupervised {
        return Labeling(vec![0; n]);
    }
    let mut unary = vec![vec![0.0; fg.num_labels()]; n];
    for f in fg.factors() {
        if let (FactorKind::Table(t), [v]) = (f.kind(), f.vars()) {
            for (a, b) in unary[*v].iter_mut().zip(t) {
                *a += b;
            }
        }
    }
    Labeling(
        unary
            .iter()
            .map(|u| u.iter().enumerate().fold((0, f64::INFINITY), |b, (l, &e)| if e < b.1 { (l, e) } else { b }).0)
            .collect(),
    )
}

/// Iterated conditional modes: ascending sweeps until nothing changes.
pub fn icm(fg: &FactorGraph, init: &Labeling) -> Result<Labeling> {
    fg.check_labeling(init)?;
    let inc = incidence(fg);
    let mut x = init.clone();
    loop {
        let mut changed = false;
        for v in 0..fg.num_variables() {
            changed |= improve(fg, &inc, &mut x, v)?;
        }
        if !changed {
            return Ok(x);
        }
    }
}

/// Single-variable flips driven by a queue of variables whose neighbourhood changed.
pub fn lazy_flipper(fg: &FactorGraph, init: &Labeling, depth: usize) -> Result<Labeling> {
    if depth != 1 {
        return Err(Error::Unsupported(format!("lazy flipper depth {depth}; only depth 1 is implemented")));
    }
    fg.check_labeling(init)?;
    let inc = incidence(fg);
    let n = fg.num_variables();
    let mut x = init.clone();
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        if improve(fg, &inc, &mut x, v)? {
            for &k in &inc[v] {
                for &u in fg.factors()[k].vars() {
                    if !queued[u] {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    Ok(x)
}

/// Cut weights `unequal - equal` of a second-order unsupervised model.
fn cut_graph(fg: &FactorGraph) -> Result<Vec<Vec<(usize, f64)>>> {
    if fg.mode() != Mode::Unsupervised {
        return Err(Error::Usage("Kernighan-Lin needs an unsupervised model".into()));
    }
    let mut adj = vec![Vec::new(); fg.num_variables()];
    for f in fg.factors() {
        let w = match (f.kind(), f.vars()) {
            (FactorKind::Potts { equal, unequal }, _) => unequal - equal,
            (_, [_, _]) => f.eval(&[0, 1], fg.num_labels())? - f.eval(&[0, 0], fg.num_labels())?,
            _ => return Err(Error::Usage("Kernighan-Lin needs a second-order model".into())),
        };
        let (a, b) = (f.vars()[0], f.vars()[1]);
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    Ok(adj)
}

/// Multi-shore Kernighan-Lin from a single shore. Each pass moves every node
/// once, greedily, and keeps the best prefix of moves.
pub fn kernighan_lin(fg: &FactorGraph) -> Result<Labeling> {
    let adj = cut_graph(fg)?;
    let n = fg.num_variables();
    let mut shore = vec![0usize; n];
    loop {
        let mut locked = vec![false; n];
        let mut size = vec![0usize; n + 1];
        for &s in &shore {
            size[s] += 1;
        }
        let mut moves: Vec<(usize, usize)> = Vec::new();
        let mut gains = Vec::new();
        for _ in 0..n {
            let fresh = (0..=n).find(|&s| size[s] == 0).expect("n + 1 shores");
            let mut best: Option<(f64, usize, usize)> = None;
            for v in (0..n).filter(|&v| !locked[v]) {
                let mut targets: BTreeSet<usize> = adj[v].iter().map(|&(u, _)| shore[u]).collect();
                targets.remove(&shore[v]);
                if size[shore[v]] > 1 {
                    targets.insert(fresh);
                }
                for t in targets {
                    // cut weight removed toward `t` minus cut weight added toward the old shore
                    let gain: f64 = adj[v]
                        .iter()
                        .map(|&(u, w)| {
                            if shore[u] == t {
                                w
                            } else if shore[u] == shore[v] {
                                -w
                            } else {
                                0.0
                            }
                        })
                        .sum();
                    if best.is_none_or(|b| gain > b.0 + MIN_GAIN) {
                        best = Some((gain, v, t));
                    }
                }
            }
            let Some((gain, v, t)) = best else { break };
            moves.push((v, shore[v]));
            gains.push(gain);
            size[shore[v]] -= 1;
            size[t] += 1;
            shore[v] = t;
            locked[v] = true;
        }
        let mut acc = 0.0;
        let mut best = (0.0, 0usize);
        for (k, g) in gains.iter().enumerate() {
            acc += g;
            if acc > best.0 + MIN_GAIN {
                best = (acc, k + 1);
            }
        }
        for &(v, old) in moves[best.1..].iter().rev() {
            shore[v] = old;
        }
        if best.1 == 0 {
            return Ok(canonical_labels(&shore));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Factor;

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
    fn kl_solves_the_triangle() {
        let fg = triangle();
        let x = kernighan_lin(&fg).unwrap();
        assert_eq!(fg.eval_energy(&x).unwrap(), -2.0);
    }

    #[test]
    fn kl_keeps_one_shore_for_attractive_weights() {
        let fg = FactorGraph::unsupervised(3)
            .with_factor(Factor::potts(0, 1, 0.0, 1.0).unwrap())
            .unwrap()
            .with_factor(Factor::potts(1, 2, 0.0, 2.0).unwrap())
            .unwrap();
        let x = kernighan_lin(&fg).unwrap();
        assert_eq!(x.0, vec![0, 0, 0]);
        assert_eq!(fg.eval_energy(&x).unwrap(), 0.0);
    }

    #[test]
    fn kl_rejects_supervised_models() {
        let fg = FactorGraph::supervised(2, 2).unwrap();
        assert!(matches!(kernighan_lin(&fg), Err(Error::Usage(_))));
    }

    #[test]
    fn single_variable_reaches_the_optimum() {
        let fg = FactorGraph::supervised(1, 3)
            .unwrap()
            .with_factor(Factor::unary(0, vec![2.0, 0.5, 1.0]).unwrap())
            .unwrap();
        let start = Labeling(vec![0]);
        assert_eq!(icm(&fg, &start).unwrap().0, vec![1]);
        assert_eq!(lazy_flipper(&fg, &start, 1).unwrap().0, vec![1]);
        assert!(matches!(lazy_flipper(&fg, &start, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn local_optimum_is_kept() {
        let fg = triangle();
        let x = Labeling(vec![0, 1, 0]);
        assert_eq!(icm(&fg, &x).unwrap(), x);
        assert_eq!(lazy_flipper(&fg, &x, 1).unwrap(), x);
    }
}
