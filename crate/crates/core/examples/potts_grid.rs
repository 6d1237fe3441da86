//! Supervised Potts grid with mixed-sign couplings, solved to certified
//! optimality. Pass `width height labels seed` to change the instance.

use multicut::cli::gen_synth_potts;
use multicut::engine::{solve, SolveOptions};
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let get = |i: usize, d: usize| args.get(i).copied().unwrap_or(d);
    let (w, h, labels, seed) = (get(0, 12), get(1, 12), get(2, 5), get(3, 0));
    let fg = gen_synth_potts(w, h, labels, seed as u64)?;
    let r = solve(&fg, &parse_schedule("MC-T-MT-CFB-I-TI")?, &SolveOptions::default())?;
    println!("{w}x{h}, {labels} labels, seed {seed}");
    for s in &r.stage_stats {
        let rows: usize = s.rows_added.values().sum();
        println!("  {:<4} rows {:>5}  lp solves {:>4}  bound {:.6}", s.token, rows, s.lp_solves, s.bound);
    }
    println!("{} value {:.6} gap {:.2e} in {:.2?}", r.status.name(), r.value, r.gap(), r.runtime);
    for row in r.labeling.0.chunks(w) {
        println!("  {}", row.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}
