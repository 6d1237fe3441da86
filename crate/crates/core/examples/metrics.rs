//! Comparing segmentations: variation of information and Rand index look
//! at partitions only, pixel accuracy at labels.

use multicut::metrics::{pixel_accuracy, rand_index, variation_of_information};
use multicut::model::Labeling;

fn main() -> multicut::Result<()> {
    let truth = Labeling(vec![0, 0, 0, 1, 1, 1, 2, 2]);
    let cases = [
        ("identical", vec![0, 0, 0, 1, 1, 1, 2, 2]),
        ("relabeled", vec![2, 2, 2, 0, 0, 0, 1, 1]),
        ("one pixel moved", vec![0, 0, 1, 1, 1, 1, 2, 2]),
        ("merged", vec![0, 0, 0, 0, 0, 0, 2, 2]),
        ("all singletons", vec![0, 1, 2, 3, 4, 5, 6, 7]),
    ];
    println!("{:<16} {:>8} {:>8} {:>8}", "", "VI", "RI", "PA");
    for (name, x) in cases {
        let x = Labeling(x);
        println!(
            "{name:<16} {:>8.4} {:>8.4} {:>8.4}",
            variation_of_information(&x, &truth)?,
            rand_index(&x, &truth)?,
            pixel_accuracy(&x, &truth)?
        );
    }
    Ok(())
}
