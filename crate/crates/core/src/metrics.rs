//! Partition and labeling comparison measures.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Labeling;

fn same_len(p: &Labeling, q: &Labeling) -> Result<usize> {
    if p.len() != q.len() {
        return Err(Error::Input(format!("labelings differ in length: {} vs {}", p.len(), q.len())));
    }
    Ok(p.len())
}

fn entropy<'a>(counts: impl Iterator<Item = &'a usize>, n: f64) -> f64 {
    counts
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `H(P) + H(Q) - 2 I(P; Q)` in nats.
pub fn variation_of_information(p: &Labeling, q: &Labeling) -> Result<f64> {
    let n = same_len(p, q)?;
    if n == 0 {
        return Ok(0.0);
    }
    let mut cp: HashMap<usize, usize> = HashMap::new();
    let mut cq: HashMap<usize, usize> = HashMap::new();
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&a, &b) in p.0.iter().zip(&q.0) {
        *cp.entry(a).or_default() += 1;
        *cq.entry(b).or_default() += 1;
        *joint.entry((a, b)).or_default() += 1;
    }
    let nf = n as f64;
    // VI = 2 H(P,Q) - H(P) - H(Q)
    let vi = 2.0 * entropy(joint.values(), nf) - entropy(cp.values(), nf) - entropy(cq.values(), nf);
    Ok(vi.max(0.0))
}

/// Fraction of element pairs on which both partitions agree.
pub fn rand_index(p: &Labeling, q: &Labeling) -> Result<f64> {
    let n = same_len(p, q)?;
    if n < 2 {
        return Err(Error::Input("rand index needs at least two elements".into()));
    }
    let mut agree = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if (p.0[i] == p.0[j]) == (q.0[i] == q.0[j]) {
                agree += 1;
            }
        }
    }
    Ok(agree as f64 / (n * (n - 1) / 2) as f64)
}

/// Fraction of positions with identical labels.
pub fn pixel_accuracy(p: &Labeling, q: &Labeling) -> Result<f64> {
    let n = same_len(p, q)?;
    if n == 0 {
        return Ok(1.0);
    }
    let hits = p.0.iter().zip(&q.0).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: &[usize]) -> Labeling {
        Labeling(v.to_vec())
    }

    #[test]
    fn vi_examples() {
        let p = l(&[0, 0, 1, 1]);
        let q = l(&[0, 1, 2, 3]);
        assert!((variation_of_information(&p, &q).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((variation_of_information(&q, &p).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(variation_of_information(&p, &l(&[5, 5, 3, 3])).unwrap(), 0.0);
    }

    #[test]
    fn ri_examples() {
        let p = l(&[1, 1, 2, 2]);
        assert!((rand_index(&p, &l(&[1, 1, 1, 1])).unwrap() - 2.0 / 6.0).abs() < 1e-12);
        assert_eq!(rand_index(&p, &l(&[7, 7, 0, 0])).unwrap(), 1.0);
    }

    #[test]
    fn pa_examples() {
        assert_eq!(pixel_accuracy(&l(&[0, 1]), &l(&[0, 1])).unwrap(), 1.0);
        assert_eq!(pixel_accuracy(&l(&[0, 1]), &l(&[1, 0])).unwrap(), 0.0);
        assert_eq!(pixel_accuracy(&l(&[0, 1]), &l(&[0, 0])).unwrap(), 0.5);
    }

    #[test]
    fn length_mismatch() {
        assert!(variation_of_information(&l(&[0]), &l(&[0, 1])).is_err());
        assert!(rand_index(&l(&[0]), &l(&[0, 1])).is_err());
        assert!(pixel_accuracy(&l(&[0]), &l(&[0, 1])).is_err());
    }
}
