//! Canonical form of a matrix under independent row and column permutations.
//!
//! The matrix is read as a bipartite graph (rows, columns, entries as colored
//! edges). Colour refinement plus individualization explores every labeling
//! compatible with the refined partitions and keeps the lexicographically
//! smallest relabeled matrix. No automorphism pruning, so a leaf budget guards
//! against highly symmetric inputs.

use super::matrix::BinaryMatrix;
use super::poly::BinaryPoly;
use super::polymatrix::PolyMatrix;
use crate::error::{Error, Result};

const LEAF_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub rows: usize,
    pub cols: usize,
    /// Distinct nonzero entries, sorted; cells index into it (0 = zero entry).
    pub palette: Vec<BinaryPoly>,
    pub cells: Vec<u32>,
}

impl CanonicalForm {
    /// The canonical matrix itself.
    pub fn to_poly_matrix(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.cells[r * self.cols + c];
                if v > 0 {
                    m.set(r, c, self.palette[v as usize - 1].clone());
                }
            }
        }
        m
    }
}

struct Graph {
    rows: usize,
    cols: usize,
    cells: Vec<u32>,
    adj: Vec<Vec<(usize, u32)>>,
}

impl Graph {
    fn n(&self) -> usize {
        self.rows + self.cols
    }

    fn refine(&self, colors: &mut Vec<u32>) {
        let n = self.n();
        let mut count = distinct(colors);
        loop {
            let mut sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
                .map(|v| {
                    let mut s: Vec<(u32, u32)> = self.adj[v].iter().map(|&(u, e)| (e, colors[u])).collect();
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let mut sorted: Vec<&(u32, Vec<(u32, u32)>)> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            if sorted.len() == count {
                return;
            }
            let ranks: Vec<u32> = sigs
                .iter()
                .map(|s| sorted.binary_search(&s).expect("present") as u32)
                .collect();
            count = sorted.len();
            *colors = ranks;
            sigs.clear();
        }
    }

    fn certificate(&self, colors: &[u32]) -> Vec<u32> {
        let mut row_at = vec![0usize; self.rows];
        let mut col_at = vec![0usize; self.cols];
        for v in 0..self.rows {
            row_at[colors[v] as usize] = v;
        }
        for v in 0..self.cols {
            col_at[colors[self.rows + v] as usize - self.rows] = v;
        }
        let mut cert = Vec::with_capacity(self.rows * self.cols);
        for &r in &row_at {
            for &c in &col_at {
                cert.push(self.cells[r * self.cols + c]);
            }
        }
        cert
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<Vec<u32>>, leaves: &mut usize) -> Result<()> {
        let n = self.n();
        if distinct(&colors) == n {
            *leaves += 1;
            if *leaves > LEAF_BUDGET {
                return Err(Error::Precondition("canonical form search exceeded its leaf budget".into()));
            }
            let cert = self.certificate(&colors);
            if best.as_ref().is_none_or(|b| cert < *b) {
                *best = Some(cert);
            }
            return Ok(());
        }
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..n).find(|&c| sizes[c] > 1).expect("non-discrete partition") as u32;
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        for &v in &members {
            let mut next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + u32::from(c == target && u != v))
                .collect();
            compress(&mut next);
            self.refine(&mut next);
            self.search(next, best, leaves)?;
        }
        Ok(())
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn compress(colors: &mut [u32]) {
    let mut keys = colors.to_vec();
    keys.sort_unstable();
    keys.dedup();
    for c in colors.iter_mut() {
        *c = keys.binary_search(c).expect("present") as u32;
    }
}

/// Canonical form of a polynomial matrix under row and column permutations.
pub fn canonical_form_poly(m: &PolyMatrix) -> Result<CanonicalForm> {
    let mut palette: Vec<BinaryPoly> = m.entries().iter().filter(|p| !p.is_zero()).cloned().collect();
    palette.sort();
    palette.dedup();
    let (rows, cols) = (m.rows(), m.cols());
    let cells: Vec<u32> = m
        .entries()
        .iter()
        .map(|p| if p.is_zero() { 0 } else { palette.binary_search(p).expect("present") as u32 + 1 })
        .collect();
    let mut adj = vec![Vec::new(); rows + cols];
    for r in 0..rows {
        for c in 0..cols {
            let e = cells[r * cols + c];
            if e > 0 {
                adj[r].push((rows + c, e));
                adj[rows + c].push((r, e));
            }
        }
    }
    let g = Graph { rows, cols, cells, adj };
    let mut colors: Vec<u32> = (0..rows + cols).map(|v| u32::from(v >= rows)).collect();
    if rows == 0 || cols == 0 {
        return Ok(CanonicalForm { rows, cols, palette, cells: Vec::new() });
    }
    g.refine(&mut colors);
    let mut best = None;
    let mut leaves = 0;
    g.search(colors, &mut best, &mut leaves)?;
    Ok(CanonicalForm { rows, cols, palette, cells: best.expect("at least one leaf") })
}

/// Canonical form of a binary matrix under row and column permutations.
pub fn canonical_form(m: &BinaryMatrix) -> Result<CanonicalForm> {
    canonical_form_poly(&PolyMatrix::from_binary(m))
}

/// True when `b` is obtained from `a` by permuting rows and columns.
pub fn permutation_equivalent(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<bool> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permuted_copies_share_a_form() {
        let a = BinaryMatrix::from_bit_strings(&["1100", "0110", "0011", "1001"]).unwrap();
        let b = a.permuted(&[2, 0, 3, 1], &[1, 3, 0, 2]);
        assert!(permutation_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn different_weights_differ() {
        let a = BinaryMatrix::from_bit_strings(&["110", "011"]).unwrap();
        let b = BinaryMatrix::from_bit_strings(&["111", "011"]).unwrap();
        assert!(!permutation_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn form_is_a_permutation_of_the_input() {
        let a = BinaryMatrix::from_bit_strings(&["1010", "0111", "1100"]).unwrap();
        let f = canonical_form(&a).unwrap();
        let mut got: Vec<u32> = f.cells.clone();
        got.sort();
        let mut want: Vec<u32> = (0..3).flat_map(|r| a.row_bits(r)).map(u32::from).collect();
        want.sort();
        assert_eq!(got, want);
    }
}
