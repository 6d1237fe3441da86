//! Seeded synthetic models and the modularity edge-list loader.

use crate::error::{Error, Result};
use crate::model::{Factor, FactorGraph, FactorKind};
use crate::rng::SplitMix64;

/// Grid Potts model: unaries uniform in `[0, 1]`, couplings uniform in
/// `[-1, 1]` on the 4-neighbourhood. Variables are row-major; all unaries
/// are drawn first, then for each pixel its right and lower coupling.
pub fn gen_synth_potts(width: usize, height: usize, labels: usize, seed: u64) -> Result<FactorGraph> {
    if width == 0 || height == 0 {
        return Err(Error::Input("grid dimensions must be positive".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut fg = FactorGraph::supervised(width * height, labels)?;
    for v in 0..width * height {
        let u: Vec<f64> = (0..labels).map(|_| rng.next_f64()).collect();
        fg.add_factor(Factor::unary(v, u)?)?;
    }
    for (a, b) in grid_pairs(width, height) {
        let beta = rng.uniform(-1.0, 1.0);
        fg.add_factor(Factor::potts(a, b, 0.0, beta)?)?;
    }
    Ok(fg)
}

fn grid_pairs(width: usize, height: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..height {
        for c in 0..width {
            let v = r * width + c;
            if c + 1 < width {
                out.push((v, v + 1));
            }
            if r + 1 < height {
                out.push((v, v + width));
            }
        }
    }
    out
}

/// Pairwise coupling of the inclusion model.
pub const INCLUSION_COUPLING: f64 = 0.25;

/// Label of pixel `(r, c)` in the nested-rectangle template: ring depth,
/// spread over the labels and capped at the last one.
pub fn inclusion_template(width: usize, height: usize, labels: usize, r: usize, c: usize) -> usize {
    let depth = r.min(c).min(height - 1 - r).min(width - 1 - c);
    let rings = width.min(height).div_ceil(2);
    let thickness = rings.div_ceil(labels).max(1);
    (depth / thickness).min(labels - 1)
}

/// Segmentation model with a junction prior: L1 unaries to a noisy
/// nested-rectangle image, Potts pairs, and one junction factor per 2x2
/// block (omitted when `lambda` is zero).
pub fn gen_synth_inclusion(
    width: usize,
    height: usize,
    labels: usize,
    lambda: f64,
    noise: f64,
    seed: u64,
) -> Result<FactorGraph> {
    if width < 2 || height < 2 {
        return Err(Error::Input("inclusion images need at least 2x2 pixels".into()));
    }
    if lambda < 0.0 {
        return Err(Error::Input(format!("junction weight must be non-negative, got {lambda}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut fg = FactorGraph::supervised(width * height, labels)?;
    let level = |l: usize| l as f64 / (labels - 1) as f64;
    for r in 0..height {
        for c in 0..width {
            let t = inclusion_template(width, height, labels, r, c);
            let obs = level(t) + noise * rng.uniform(-1.0, 1.0);
            let u: Vec<f64> = (0..labels).map(|l| (obs - level(l)).abs()).collect();
            fg.add_factor(Factor::unary(r * width + c, u)?)?;
        }
    }
    for (a, b) in grid_pairs(width, height) {
        fg.add_factor(Factor::potts(a, b, 0.0, INCLUSION_COUPLING)?)?;
    }
    if lambda > 0.0 {
        for r in 0..height - 1 {
            for c in 0..width - 1 {
                let v = r * width + c;
                let vars = vec![v, v + 1, v + width, v + width + 1];
                fg.add_factor(Factor::new(vars, FactorKind::Junction { lambda })?)?;
            }
        }
    }
    Ok(fg)
}

/// Parses a whitespace edge list (`u v` per line, `#` comments, 0-based ids).
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut n = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let ids: Vec<&str> = line.split_whitespace().collect();
        if ids.len() != 2 {
            return Err(err(format!("expected two node ids, found `{line}`")));
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|_| err(format!("`{s}` is not a node id")));
        let (u, v) = (parse(ids[0])?, parse(ids[1])?);
        if u == v {
            return Err(err(format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Ok((n, edges))
}

/// Fully connected correlation-clustering model whose energy is the
/// negated modularity of the partition.
pub fn load_modularity(text: &str) -> Result<FactorGraph> {
    let (n, edges) = parse_edge_list(text)?;
    if edges.is_empty() {
        return Err(Error::Input("edge list has no edges".into()));
    }
    let m = edges.len() as f64;
    let mut deg = vec![0.0; n];
    let mut adj = std::collections::HashSet::new();
    for &(u, v) in &edges {
        deg[u] += 1.0;
        deg[v] += 1.0;
        adj.insert((u.min(v), u.max(v)));
    }
    let mut fg = FactorGraph::unsupervised(n);
    for u in 0..n {
        for v in u + 1..n {
            let a = if adj.contains(&(u, v)) { 1.0 } else { 0.0 };
            let q = (a - deg[u] * deg[v] / (2.0 * m)) / m;
            fg.add_factor(Factor::potts(u, v, -q, 0.0)?)?;
        }
    }
    fg.set_constant(deg.iter().map(|d| d * d).sum::<f64>() / (4.0 * m * m));
    Ok(fg)
}

/// Modularity of a partition, computed directly from the edge list.
pub fn modularity(n: usize, edges: &[(usize, usize)], blocks: &[usize]) -> f64 {
    let m = edges.len() as f64;
    let mut deg = vec![0.0; n];
    let mut inside = 0.0;
    for &(u, v) in edges {
        deg[u] += 1.0;
        deg[v] += 1.0;
        if blocks[u] == blocks[v] {
            inside += 1.0;
        }
    }
    let mut tot: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
    for (v, &d) in deg.iter().enumerate() {
        *tot.entry(blocks[v]).or_default() += d;
    }
    inside / m - tot.values().map(|t| t * t).sum::<f64>() / (4.0 * m * m)
}

/// The bundled karate-club network.
pub const KARATE_EDGES: &str = include_str!("../../data/karate.txt");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Labeling;

    #[test]
    fn potts_grid_counts_and_determinism() {
        let fg = gen_synth_potts(32, 32, 10, 7).unwrap();
        assert_eq!(fg.num_variables(), 1024);
        let pairs = fg.factors().iter().filter(|f| f.order() == 2).count();
        assert_eq!(pairs, 1984);
        let again = gen_synth_potts(32, 32, 10, 7).unwrap();
        assert_eq!(fg.factors(), again.factors());
        let single = gen_synth_potts(1, 1, 3, 0).unwrap();
        assert_eq!(single.factors().len(), 1);
    }

    #[test]
    fn inclusion_factor_counts() {
        let fg = gen_synth_inclusion(2, 2, 3, 1.0, 0.1, 1).unwrap();
        assert_eq!(fg.factors().iter().filter(|f| f.order() == 4).count(), 1);
        let fg = gen_synth_inclusion(5, 4, 3, 0.0, 0.1, 1).unwrap();
        assert_eq!(fg.max_order(), 2);
    }

    #[test]
    fn junction_adds_lambda_per_junction() {
        let with = gen_synth_inclusion(2, 2, 3, 1.5, 0.2, 3).unwrap();
        let without = gen_synth_inclusion(2, 2, 3, 0.0, 0.2, 3).unwrap();
        let x = Labeling(vec![0, 1, 2, 0]);
        let d = with.eval_energy(&x).unwrap() - without.eval_energy(&x).unwrap();
        assert!((d - 1.5).abs() < 1e-12);
        let y = Labeling(vec![0, 1, 1, 0]);
        assert_eq!(with.eval_energy(&y).unwrap(), without.eval_energy(&y).unwrap());
    }

    #[test]
    fn template_rings_nest() {
        assert_eq!(inclusion_template(8, 8, 4, 0, 0), 0);
        assert_eq!(inclusion_template(8, 8, 4, 3, 3), 3);
        assert_eq!(inclusion_template(8, 8, 2, 3, 3), 1);
    }

    #[test]
    fn single_edge_modularity() {
        let fg = load_modularity("0 1\n").unwrap();
        // one shore: Q = 1 - (2^2) / 4 = 0
        assert!((fg.eval_energy(&Labeling(vec![0, 0])).unwrap() - 0.0).abs() < 1e-12);
        // split: Q = 0 - (1 + 1) / 4 = -0.5
        assert!((fg.eval_energy(&Labeling(vec![0, 1])).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn energy_is_negated_modularity() {
        let (n, edges) = parse_edge_list(KARATE_EDGES).unwrap();
        assert_eq!((n, edges.len()), (34, 78));
        let fg = load_modularity(KARATE_EDGES).unwrap();
        let blocks: Vec<usize> = (0..n).map(|v| v % 3).collect();
        let e = fg.eval_energy(&Labeling(blocks.clone())).unwrap();
        assert!((e + modularity(n, &edges, &blocks)).abs() < 1e-12);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        match parse_edge_list("# c\n0 1\n2 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_edge_list("0 1\n1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("0 x\n"), Err(Error::Parse { line: 1, .. })));
    }
}
