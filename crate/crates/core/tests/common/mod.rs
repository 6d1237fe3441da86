#![allow(dead_code)]

use multicut::cli::gen_synth_potts;
use multicut::model::{enumerate_partitions, Factor, FactorGraph, FactorKind};
use multicut::rng::SplitMix64;

/// `k` distinct sorted indices below `n`.
pub fn pick(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// The four pixels of the 2x2 block with top-left corner `(r, c)`.
pub fn block(width: usize, r: usize, c: usize) -> Vec<usize> {
    let v = r * width + c;
    vec![v, v + 1, v + width, v + width + 1]
}

/// Random unsupervised graph: each pair is coupled with probability `p`,
/// couplings uniform in `[-1, 1]`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> FactorGraph {
    let mut rng = SplitMix64::new(seed);
    let mut fg = FactorGraph::unsupervised(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.next_f64() < p {
                let w = rng.uniform(-1.0, 1.0);
                fg.add_factor(Factor::potts(a, b, 0.0, w).unwrap()).unwrap();
            }
        }
    }
    fg
}

/// Unsupervised grid with random couplings.
pub fn random_grid(width: usize, height: usize, seed: u64) -> FactorGraph {
    let mut rng = SplitMix64::new(seed);
    let mut fg = FactorGraph::unsupervised(width * height);
    for r in 0..height {
        for c in 0..width {
            let v = r * width + c;
            if c + 1 < width {
                fg.add_factor(Factor::potts(v, v + 1, 0.0, rng.uniform(-1.0, 1.0)).unwrap()).unwrap();
            }
            if r + 1 < height {
                fg.add_factor(Factor::potts(v, v + width, 0.0, rng.uniform(-1.0, 1.0)).unwrap()).unwrap();
            }
        }
    }
    fg
}

/// Adds one random order-3 LPI, one order-4 HO-Potts and one order-4
/// junction factor on random scopes.
pub fn mix_in_higher_order(fg: &mut FactorGraph, rng: &mut SplitMix64) {
    let n = fg.num_variables();
    let weights: Vec<f64> = (0..5).map(|_| rng.uniform(-1.0, 1.0)).collect();
    fg.add_factor(Factor::new(pick(rng, n, 3), FactorKind::Lpi(weights)).unwrap()).unwrap();
    let (equal, unequal) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    fg.add_factor(Factor::new(pick(rng, n, 4), FactorKind::HoPotts { equal, unequal }).unwrap()).unwrap();
    let lambda = rng.next_f64();
    fg.add_factor(Factor::new(pick(rng, n, 4), FactorKind::Junction { lambda }).unwrap()).unwrap();
}

/// Supervised 3x3 grid with random unaries and couplings and mixed higher-order factors.
pub fn mixed_supervised(labels: usize, seed: u64) -> FactorGraph {
    let mut fg = gen_synth_potts(3, 3, labels, seed).unwrap();
    mix_in_higher_order(&mut fg, &mut SplitMix64::new(seed ^ 0xabcdef));
    fg
}

/// Random unsupervised graph with mixed higher-order factors.
pub fn mixed_unsupervised(n: usize, seed: u64) -> FactorGraph {
    let mut fg = random_graph(n, 0.5, seed);
    mix_in_higher_order(&mut fg, &mut SplitMix64::new(seed ^ 0x123456));
    fg
}

/// LPI weights equal to a HO-Potts function of order `n`.
pub fn hopotts_as_lpi(n: usize, equal: f64, unequal: f64) -> Vec<f64> {
    enumerate_partitions(n)
        .unwrap()
        .iter()
        .map(|p| if p.blocks == 1 { equal } else { unequal })
        .collect()
}
