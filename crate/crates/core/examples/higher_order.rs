//! Higher-order factors: a HO-Potts factor, the same function written as a
//! general LPI factor, and a junction factor. The two encodings of the
//! HO-Potts function give the same optimum with very different program sizes.

use multicut::engine::{solve, SolveOptions};
use multicut::model::{enumerate_partitions, Factor, FactorKind};
use multicut::reduction::build_multicut;
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let base = multicut::cli::gen_synth_potts(3, 3, 3, 1)?;
    let scope = vec![0, 1, 3, 4];
    let (equal, unequal) = (-0.8, 0.4);
    let weights: Vec<f64> = enumerate_partitions(4)?
        .iter()
        .map(|p| if p.blocks == 1 { equal } else { unequal })
        .collect();
    let ho = base.clone().with_factor(Factor::new(scope.clone(), FactorKind::HoPotts { equal, unequal })?)?;
    let lpi = base.clone().with_factor(Factor::new(scope, FactorKind::Lpi(weights))?)?;
    let junction = base.with_factor(Factor::new(vec![4, 5, 7, 8], FactorKind::Junction { lambda: 2.0 })?)?;

    let schedule = parse_schedule("MC-T-MT-CFB-I-TI")?;
    for (name, fg) in [("ho-potts", &ho), ("lpi", &lpi), ("junction", &junction)] {
        let inst = build_multicut(fg)?;
        let r = solve(fg, &schedule, &SolveOptions::default())?;
        println!(
            "{name:<9} aux vars {:>2}  fixed rows {:>3}  {} value {:.6}  labeling {:?}",
            inst.aux.len(),
            inst.fixed_rows.len(),
            r.status.name(),
            r.value,
            r.labeling.0
        );
    }
    Ok(())
}
