//! Turning a fractional relaxation into labelings. Solves only the LP
//! relaxation, then compares the rounding schemes against its bound.

use multicut::cli::gen_synth_potts;
use multicut::engine::{solve, Rounding, SolveOptions};
use multicut::model::{Factor, FactorGraph};
use multicut::reduction::build_multicut;
use multicut::rng::SplitMix64;
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let fg = gen_synth_potts(16, 16, 8, 2)?;
    let inst = build_multicut(&fg)?;
    let r = solve(&fg, &parse_schedule("MC-T")?, &SolveOptions::default())?;
    let fractional = r.y.iter().filter(|&&v| v > 1e-6 && v < 1.0 - 1e-6).count();
    println!("supervised LP bound {:.4}, {fractional} fractional edges", r.bound);
    let schemes = [
        ("nearest", Rounding::Nearest),
        ("derandomized", Rounding::Derandomized),
        ("pseudo (101 thresholds)", Rounding::Pseudo),
        ("thresholds 0.25, 0.5", Rounding::Thresholds(vec![0.25, 0.5])),
    ];
    for (name, rounding) in schemes {
        let (_, e) = rounding.apply(&inst, &r.y)?;
        println!("  {name:<24} energy {e:.4}  gap {:.4}", e - r.bound);
    }

    let mut rng = SplitMix64::new(5);
    let mut cc = FactorGraph::unsupervised(25);
    for a in 0..25 {
        for b in a + 1..25 {
            if rng.next_f64() < 0.8 {
                cc.add_factor(Factor::potts(a, b, 0.0, rng.uniform(-1.0, 1.0))?)?;
            }
        }
    }
    let inst = build_multicut(&cc)?;
    let r = solve(&cc, &parse_schedule("MC-C")?, &SolveOptions::default())?;
    println!("unsupervised cycle bound {:.4}", r.bound);
    for kappa in [0.0, 0.2, 0.4] {
        let (_, e) = Rounding::Components(kappa).apply(&inst, &r.y)?;
        println!("  components kappa {kappa:<4} energy {e:.4}");
    }
    let (_, e) = Rounding::ComponentSweep.apply(&inst, &r.y)?;
    println!("  best over kappa sweep    energy {e:.4}");
    Ok(())
}
