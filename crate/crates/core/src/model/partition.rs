//! Set partitions of small index sets in restricted-growth-string order.
//!
//! The order produced here is the canonical order of LPI weight vectors: a
//! partition of `N` elements is encoded as `a_1..a_N` with `a_1 = 0` and
//! `a_{i+1} <= 1 + max(a_1..a_i)`, and partitions are listed in ascending
//! lexicographic order of that string.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest order for which partitions are enumerated.
pub const MAX_PARTITION_ORDER: usize = 10;

/// One set partition of `{0, .., N-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Restricted-growth string; `rgs[i]` is the block of element `i`.
    pub rgs: Vec<u8>,
    /// Pairwise cut indicator in lexicographic pair order `(0,1), (0,2), .., (N-2,N-1)`.
    pub chi: Vec<bool>,
    /// Number of blocks.
    pub blocks: usize,
}

/// Number of unordered pairs over `n` elements.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j < n`, in lexicographic pair order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Bell number `B(n)`, exact for `n <= 25`.
pub fn bell(n: usize) -> u64 {
    // Bell triangle.
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Pair cut indicator of a label tuple: entry `(i,j)` is set iff `x_i != x_j`.
pub fn tau<T: PartialEq>(labels: &[T]) -> Vec<bool> {
    let n = labels.len();
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push(labels[i] != labels[j]);
        }
    }
    out
}

/// Canonical restricted-growth string of a label tuple (blocks numbered by first occurrence).
pub fn canonical_rgs(labels: &[usize]) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(p) => p as u8,
            None => {
                seen.push(*l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

fn generate(n: usize) -> Vec<Partition> {
    let mut out = Vec::with_capacity(bell(n) as usize);
    let mut rgs = vec![0u8; n];
    // prefix maxima
    fn rec(pos: usize, max: u8, rgs: &mut Vec<u8>, out: &mut Vec<Partition>) {
        let n = rgs.len();
        if pos == n {
            out.push(Partition {
                rgs: rgs.clone(),
                chi: tau(rgs),
                blocks: if n == 0 { 0 } else { max as usize + 1 },
            });
            return;
        }
        for a in 0..=max + 1 {
            rgs[pos] = a;
            rec(pos + 1, max.max(a), rgs, out);
        }
    }
    if n == 0 {
        return out;
    }
    rgs[0] = 0;
    rec(1, 0, &mut rgs, &mut out);
    out
}

static CACHE: [OnceLock<Vec<Partition>>; MAX_PARTITION_ORDER + 1] =
    [const { OnceLock::new() }; MAX_PARTITION_ORDER + 1];

/// All partitions of `n` elements in canonical order, `1 <= n <= 10`.
pub fn enumerate_partitions(n: usize) -> Result<&'static [Partition]> {
    if n == 0 || n > MAX_PARTITION_ORDER {
        return Err(Error::Input(format!(
            "partition order {n} outside 1..={MAX_PARTITION_ORDER}"
        )));
    }
    Ok(CACHE[n].get_or_init(|| generate(n)))
}

/// Canonical index of the partition induced by `labels`.
pub fn partition_index(labels: &[usize]) -> Result<usize> {
    let parts = enumerate_partitions(labels.len())?;
    let rgs = canonical_rgs(labels);
    parts
        .binary_search_by(|p| p.rgs.as_slice().cmp(&rgs))
        .map_err(|_| Error::Internal("restricted-growth string not found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_lists_five_partitions() {
        let parts = enumerate_partitions(3).unwrap();
        let rgs: Vec<_> = parts.iter().map(|p| p.rgs.clone()).collect();
        assert_eq!(
            rgs,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(enumerate_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
    }

    #[test]
    fn bell_counts_match_enumeration() {
        let expected = [1usize, 2, 5, 15, 52, 203, 877, 4140];
        for (i, &b) in expected.iter().enumerate() {
            let n = i + 1;
            assert_eq!(enumerate_partitions(n).unwrap().len(), b);
            assert_eq!(bell(n) as usize, b);
        }
        assert_eq!(bell(10), 115_975);
    }

    #[test]
    fn chi_vectors_are_distinct_and_cover_tau_images() {
        for n in 1..=6 {
            let parts = enumerate_partitions(n).unwrap();
            let mut chis: Vec<_> = parts.iter().map(|p| p.chi.clone()).collect();
            chis.sort();
            chis.dedup();
            assert_eq!(chis.len(), parts.len());
            // every labeling over n labels maps to exactly one chi
            let total = n.pow(n as u32);
            for code in 0..total {
                let mut x = vec![0usize; n];
                let mut c = code;
                for v in x.iter_mut() {
                    *v = c % n;
                    c /= n;
                }
                let t = tau(&x);
                assert_eq!(parts.iter().filter(|p| p.chi == t).count(), 1);
                let idx = partition_index(&x).unwrap();
                assert_eq!(parts[idx].chi, t);
            }
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&[1, 1, 2]), vec![false, true, true]);
        assert_eq!(tau(&[5, 5, 5]), vec![false, false, false]);
        assert_eq!(tau(&[2, 7, 2]), vec![true, false, true]);
        assert_eq!(tau(&[2, 7, 2]), tau(&[9, 3, 9]));
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 5;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), k);
                k += 1;
            }
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(11).is_err());
    }
}
