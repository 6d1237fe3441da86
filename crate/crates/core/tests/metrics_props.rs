use multicut::metrics::{pixel_accuracy, rand_index, variation_of_information};
use multicut::model::Labeling;
use multicut::reduction::canonical_labels;
use proptest::prelude::*;

fn labeling(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..max, 2..30)
}

proptest! {
    #[test]
    fn vi_is_a_partition_metric(a in labeling(5), b in labeling(5), perm in Just([3usize, 0, 4, 1, 2])) {
        let n = a.len().min(b.len());
        let (p, q) = (Labeling(a[..n].to_vec()), Labeling(b[..n].to_vec()));
        let pq = variation_of_information(&p, &q).unwrap();
        prop_assert!(pq >= -1e-12);
        prop_assert!((pq - variation_of_information(&q, &p).unwrap()).abs() < 1e-12);
        let renamed = Labeling(p.0.iter().map(|&l| perm[l]).collect());
        prop_assert!(variation_of_information(&p, &renamed).unwrap().abs() < 1e-12);
        prop_assert!((variation_of_information(&renamed, &q).unwrap() - pq).abs() < 1e-9);
        let same = canonical_labels(&p.0) == canonical_labels(&q.0);
        prop_assert_eq!(pq.abs() < 1e-12, same);
        prop_assert!(pq <= (n as f64).ln() * 2.0 + 1e-9);
    }

    #[test]
    fn rand_index_counts_agreeing_pairs(a in labeling(4), b in labeling(4)) {
        let n = a.len().min(b.len());
        let (p, q) = (Labeling(a[..n].to_vec()), Labeling(b[..n].to_vec()));
        let ri = rand_index(&p, &q).unwrap();
        let mut agree = 0;
        let mut pairs = 0;
        for i in 0..n {
            for j in i + 1..n {
                pairs += 1;
                agree += usize::from((p.0[i] == p.0[j]) == (q.0[i] == q.0[j]));
            }
        }
        let expected = agree as f64 / pairs as f64;
        prop_assert!((ri - expected).abs() < 1e-12);
    }

    #[test]
    fn pixel_accuracy_is_a_fraction(a in labeling(3), b in labeling(3)) {
        let n = a.len().min(b.len());
        let (p, q) = (Labeling(a[..n].to_vec()), Labeling(b[..n].to_vec()));
        let pa = pixel_accuracy(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&pa));
        prop_assert_eq!(pixel_accuracy(&p, &p).unwrap(), 1.0);
    }
}

#[test]
fn two_blocks_against_one() {
    let p = Labeling(vec![0, 0, 1, 1]);
    let q = Labeling(vec![0, 0, 0, 0]);
    assert!((variation_of_information(&p, &q).unwrap() - 2f64.ln()).abs() < 1e-12);
    assert!((rand_index(&p, &q).unwrap() - 2.0 / 6.0).abs() < 1e-12);
    assert_eq!(pixel_accuracy(&p, &q).unwrap(), 0.5);
    assert!(rand_index(&p, &Labeling(vec![0])).is_err());
}
