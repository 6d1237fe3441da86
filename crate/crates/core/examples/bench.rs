//! Generates a small corpus, saves it as model files and benchmarks two
//! schedules over it, as `multicut bench` does.

use multicut::cli::{bench_command, gen_synth_potts, save_model};
use multicut::engine::SolveOptions;

fn main() -> multicut::Result<()> {
    let dir = std::env::temp_dir().join("multicut_bench_example");
    std::fs::create_dir_all(&dir)?;
    for seed in 0..4 {
        save_model(&gen_synth_potts(8, 8, 4, seed)?, &dir.join(format!("potts_{seed}.json")))?;
    }
    let csv = dir.join("results.csv");
    let schedules = ["MC-T-MT".to_string(), "MC-T-MT-CFB-I-TI".to_string()];
    bench_command(&dir, &schedules, &SolveOptions::default(), &csv)?;
    for line in std::fs::read_to_string(&csv)?.lines() {
        let cols: Vec<&str> = line.split(',').collect();
        println!("{}", cols[..6].join("\t"));
    }
    Ok(())
}
