//! Correlation clustering on a triangle: two attractive pairs and one
//! repulsive pair. The optimum separates the middle node.

use multicut::engine::{solve, SolveOptions};
use multicut::model::{Factor, FactorGraph};
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let fg = FactorGraph::unsupervised(3)
        .with_factor(Factor::potts(0, 1, 0.0, -1.0)?)?
        .with_factor(Factor::potts(1, 2, 0.0, -1.0)?)?
        .with_factor(Factor::potts(0, 2, 0.0, 2.0)?)?;
    let r = solve(&fg, &parse_schedule("MC-CFB-I-CIF")?, &SolveOptions::default())?;
    println!("status   {}", r.status.name());
    println!("value    {}", r.value);
    println!("bound    {}", r.bound);
    println!("labeling {:?}", r.labeling.0);
    Ok(())
}
