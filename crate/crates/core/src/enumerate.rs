//! Minimum-weight search over the GF(2) span of packed vectors.
//!
//! The top bits of the message index select a chunk; each chunk walks its low
//! bits in Gray-code order so that every step costs one vector XOR. Chunks run
//! through [`crate::par`], and the winner is the smallest (weight, words)
//! pair, so the result does not depend on scheduling.

use crate::par::{self, Exec};

const PREFIX_BITS: usize = 6;

/// Lowest nonzero weight in the span of `vectors` (each `words` long) with the
/// lexicographically smallest vector attaining it. `None` when every
/// combination is zero.
pub(crate) fn min_weight(vectors: &[Vec<u64>], words: usize, exec: Exec) -> Option<(u32, Vec<u64>)> {
    macro_rules! dispatch {
        ($($w:literal)*) => {
            match words {
                $($w => run::<$w>(vectors, exec),)*
                _ => run_dyn(vectors, words, exec),
            }
        };
    }
    dispatch!(1 2 3 4 5 6 7 8)
}

fn better(w: u32, v: &[u64], best: &Option<(u32, Vec<u64>)>) -> bool {
    match best {
        None => true,
        Some((bw, bv)) => w < *bw || (w == *bw && v < bv.as_slice()),
    }
}

fn merge(parts: Vec<Option<(u32, Vec<u64>)>>) -> Option<(u32, Vec<u64>)> {
    let mut best = None;
    for (w, v) in parts.into_iter().flatten() {
        if better(w, &v, &best) {
            best = Some((w, v));
        }
    }
    best
}

fn split(k: usize) -> (usize, usize) {
    let prefix = k.min(PREFIX_BITS);
    (prefix, k - prefix)
}

fn run<const W: usize>(vectors: &[Vec<u64>], exec: Exec) -> Option<(u32, Vec<u64>)> {
    let rows: Vec<[u64; W]> = vectors
        .iter()
        .map(|v| {
            let mut a = [0u64; W];
            a.copy_from_slice(&v[..W]);
            a
        })
        .collect();
    let (prefix, low) = split(rows.len());
    let parts = par::map_indexed(exec, 1 << prefix, |chunk| {
        let mut acc = [0u64; W];
        for (j, row) in rows[low..].iter().enumerate() {
            if (chunk >> j) & 1 == 1 {
                for w in 0..W {
                    acc[w] ^= row[w];
                }
            }
        }
        let mut best_w = u32::MAX;
        let mut best_v = [0u64; W];
        let weight = |a: &[u64; W]| a.iter().map(|x| x.count_ones()).sum::<u32>();
        if chunk != 0 {
            best_w = weight(&acc);
            best_v = acc;
        }
        for i in 1u64..(1u64 << low) {
            let row = &rows[i.trailing_zeros() as usize];
            for w in 0..W {
                acc[w] ^= row[w];
            }
            let wt = weight(&acc);
            if wt < best_w || (wt == best_w && acc < best_v) {
                best_w = wt;
                best_v = acc;
            }
        }
        (best_w != u32::MAX && best_w > 0).then(|| (best_w, best_v.to_vec()))
    });
    merge(parts)
}

fn run_dyn(vectors: &[Vec<u64>], words: usize, exec: Exec) -> Option<(u32, Vec<u64>)> {
    let (prefix, low) = split(vectors.len());
    let parts = par::map_indexed(exec, 1 << prefix, |chunk| {
        let mut acc = vec![0u64; words];
        for (j, row) in vectors[low..].iter().enumerate() {
            if (chunk >> j) & 1 == 1 {
                acc.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
            }
        }
        let mut best: Option<(u32, Vec<u64>)> = None;
        let weight = |a: &[u64]| a.iter().map(|x| x.count_ones()).sum::<u32>();
        if chunk != 0 && weight(&acc) > 0 {
            best = Some((weight(&acc), acc.clone()));
        }
        for i in 1u64..(1u64 << low) {
            let row = &vectors[i.trailing_zeros() as usize];
            acc.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
            let wt = weight(&acc);
            if wt > 0 && better(wt, &acc, &best) {
                best = Some((wt, acc.clone()));
            }
        }
        best
    });
    merge(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(vectors: &[Vec<u64>]) -> Option<u32> {
        let words = vectors.first().map_or(0, Vec::len);
        (1u64..(1 << vectors.len()))
            .map(|m| {
                let mut acc = vec![0u64; words];
                for (j, v) in vectors.iter().enumerate() {
                    if (m >> j) & 1 == 1 {
                        acc.iter_mut().zip(v).for_each(|(a, b)| *a ^= b);
                    }
                }
                acc.iter().map(|x| x.count_ones()).sum::<u32>()
            })
            .filter(|&w| w > 0)
            .min()
    }

    #[test]
    fn agrees_with_brute_force() {
        let vs: Vec<Vec<u64>> = (0..10u64)
            .map(|i| vec![i.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(i as u32) & 0xFFFF_FFFF, i * 3 + 1])
            .collect();
        let (w, v) = min_weight(&vs, 2, Exec::Parallel).unwrap();
        assert_eq!(Some(w), brute(&vs));
        assert_eq!(v.iter().map(|x| x.count_ones()).sum::<u32>(), w);
        assert_eq!(min_weight(&vs, 2, Exec::Sequential).unwrap().0, w);
    }

    #[test]
    fn wide_vectors_use_the_dynamic_path() {
        let vs: Vec<Vec<u64>> = (0..5).map(|i| (0..9).map(|j| 1u64 << ((i * 7 + j) % 64)).collect()).collect();
        assert_eq!(min_weight(&vs, 9, Exec::Parallel).map(|x| x.0), brute(&vs));
    }

    #[test]
    fn dependent_vectors_only_zero() {
        let vs = vec![vec![5u64], vec![5u64]];
        assert_eq!(min_weight(&vs, 1, Exec::Parallel).unwrap().0, 2);
        assert_eq!(min_weight(&[vec![0u64]], 1, Exec::Parallel), None);
    }
}
