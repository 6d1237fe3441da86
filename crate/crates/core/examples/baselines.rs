//! Local search baselines next to the exact solver.

use multicut::baselines::{default_init, icm, kernighan_lin, lazy_flipper};
use multicut::cli::{gen_synth_potts, load_modularity, KARATE_EDGES};
use multicut::engine::{solve, SolveOptions};
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let grid = gen_synth_potts(16, 16, 5, 9)?;
    let init = default_init(&grid);
    println!("potts grid 16x16, 5 labels");
    println!("  init          {:.4}", grid.eval_energy(&init)?);
    println!("  icm           {:.4}", grid.eval_energy(&icm(&grid, &init)?)?);
    println!("  lazy flipper  {:.4}", grid.eval_energy(&lazy_flipper(&grid, &init, 1)?)?);
    let exact = solve(&grid, &parse_schedule("MC-T-MT-CFB-I-TI")?, &SolveOptions::default())?;
    println!("  exact         {:.4} ({})", exact.value, exact.status.name());

    let karate = load_modularity(KARATE_EDGES)?;
    println!("karate modularity");
    println!("  kernighan-lin {:.6}", karate.eval_energy(&kernighan_lin(&karate)?)?);
    let exact = solve(&karate, &parse_schedule("MC-CFB-I-CIF")?, &SolveOptions::default())?;
    println!("  exact         {:.6} ({})", exact.value, exact.status.name());
    Ok(())
}
