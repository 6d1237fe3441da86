//! Exact modularity clustering of the bundled karate-club network.

use multicut::cli::{load_modularity, modularity, parse_edge_list, KARATE_EDGES};
use multicut::engine::{solve, SolveOptions};
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let fg = load_modularity(KARATE_EDGES)?;
    let r = solve(&fg, &parse_schedule("MC-CFB-I-CIF")?, &SolveOptions::default())?;
    let (n, edges) = parse_edge_list(KARATE_EDGES)?;
    let q = modularity(n, &edges, &r.labeling.0);
    println!("{} in {:.2?}: modularity {q:.6} (value {:.6}, bound {:.6})", r.status.name(), r.runtime, r.value, r.bound);
    let clusters = r.labeling.0.iter().max().map_or(0, |m| m + 1);
    for c in 0..clusters {
        let members: Vec<usize> = (0..n).filter(|&v| r.labeling.0[v] == c).collect();
        println!("  cluster {c}: {members:?}");
    }
    Ok(())
}
