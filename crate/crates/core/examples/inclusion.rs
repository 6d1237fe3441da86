//! Segmentation of a noisy nested-rectangle image, with and without the
//! junction prior that penalizes points where three or more regions meet.

use multicut::cli::{gen_synth_inclusion, generate::inclusion_template};
use multicut::engine::{solve, SolveOptions};
use multicut::metrics::pixel_accuracy;
use multicut::model::Labeling;
use multicut::separation::parse_schedule;

fn main() -> multicut::Result<()> {
    let (w, h, labels) = (12, 12, 3);
    let truth = Labeling(
        (0..h).flat_map(|r| (0..w).map(move |c| inclusion_template(w, h, labels, r, c))).collect(),
    );
    let schedule = parse_schedule("MC-T-MT-CFB-I-TI")?;
    for lambda in [0.0, 1.0] {
        let fg = gen_synth_inclusion(w, h, labels, lambda, 0.6, 3)?;
        let r = solve(&fg, &schedule, &SolveOptions::default())?;
        let solves = r.stage_stats.iter().map(|s| s.lp_solves).sum::<usize>();
        println!(
            "lambda {lambda}: {} value {:.4}, pixel accuracy {:.3}, {solves} LP solves",
            r.status.name(),
            r.value,
            pixel_accuracy(&r.labeling, &truth)?
        );
        for row in r.labeling.0.chunks(w) {
            println!("  {}", row.iter().map(|l| l.to_string()).collect::<String>());
        }
    }
    Ok(())
}
