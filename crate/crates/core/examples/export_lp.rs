//! Writes the final program of a solve in LP format, for inspection or for
//! cross-checking with an external solver.

use multicut::engine::{solve, SolveOptions};
use multicut::model::{Factor, FactorGraph};
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let fg = FactorGraph::supervised(3, 3)?
        .with_factor(Factor::unary(0, vec![0.0, 1.0, 1.0])?)?
        .with_factor(Factor::unary(2, vec![1.0, 1.0, 0.0])?)?
        .with_factor(Factor::potts(0, 1, 0.0, 0.6)?)?
        .with_factor(Factor::potts(1, 2, 0.0, 0.6)?)?;
    let path = std::env::temp_dir().join("multicut_example.lp");
    let options = SolveOptions { export_lp: Some(path.clone()), ..SolveOptions::default() };
    let r = solve(&fg, &parse_schedule("MC-T-MT-CFB-I-TI")?, &options)?;
    println!("{} value {} labeling {:?}", r.status.name(), r.value, r.labeling.0);
    println!("--- {}", path.display());
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(())
}
