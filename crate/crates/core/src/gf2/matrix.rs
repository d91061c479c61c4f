use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dense bit-packed matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.put(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 strings, one per row.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().trim().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref().trim();
            if r.len() != cols {
                return Err(Error::Parse(format!("row {i} has {} bits, expected {cols}", r.len())));
            }
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.put(i, j, true),
                    _ => return Err(Error::Parse(format!("bad bit '{ch}' in row {i}"))),
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from packed row words; bits beyond `cols` must be clear.
    pub fn from_row_words(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        let stride = words_for(cols);
        if data.len() != rows * stride {
            return Err(Error::Dimension(format!(
                "{} words for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let m = Self { rows, cols, stride, data };
        if (0..rows).any(|r| m.row(r).last().is_some_and(|&w| w & !m.tail_mask() != 0)) {
            return Err(Error::Dimension("bits set beyond the last column".into()));
        }
        Ok(m)
    }

    fn tail_mask(&self) -> u64 {
        match self.cols % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Words per row.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn get(&self, r: usize, c: usize) -> Result<bool> {
        self.check(r, c)?;
        Ok(self.bit(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) -> Result<()> {
        self.check(r, c)?;
        self.put(r, c, value);
        Ok(())
    }

    fn check(&self, r: usize, c: usize) -> Result<()> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::OutOfRange { row: r, col: c, rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Unchecked-in-release bit read; panics on out-of-range in debug builds.
    #[inline]
    pub fn bit(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn put(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] ^= 1u64 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_weight(&self, r: usize) -> u32 {
        self.row(r).iter().map(|w| w.count_ones()).sum()
    }

    pub fn col_weight(&self, c: usize) -> u32 {
        (0..self.rows).filter(|&r| self.bit(r, c)).count() as u32
    }

    pub fn row_bits(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.bit(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// `rows[dst] ^= rows[src]`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        if src == dst {
            self.row_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, w) in b.iter_mut().zip(a) {
            *d ^= w;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                t.put(c, r, true);
            }
        }
        t
    }

    /// Column indices of the ones in row `r`.
    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * 64 + t)
            })
        })
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row_ones(r) {
                for (d, w) in out.data[r * out.stride..(r + 1) * out.stride]
                    .iter_mut()
                    .zip(other.row(k))
                {
                    *d ^= w;
                }
            }
        }
        Ok(out)
    }

    /// Syndrome `M·vᵀ` of a packed vector of length `cols`, as packed bits.
    pub fn syndrome(&self, v: &[u64]) -> Vec<u64> {
        let mut s = vec![0u64; words_for(self.rows)];
        for r in 0..self.rows {
            let parity = self.row(r).iter().zip(v).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                s[r / 64] |= 1 << (r % 64);
            }
        }
        s
    }

    /// True when `M·vᵀ = 0`.
    pub fn annihilates(&self, v: &[u64]) -> bool {
        self.syndrome(v).iter().all(|&w| w == 0)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    ///
    /// Pivots are chosen as the first row holding a one in the current column,
    /// so the result is deterministic.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.bit(r, c)) else { continue };
            self.swap_rows(lead, p);
            for r in 0..self.rows {
                if r != lead && self.bit(r, c) {
                    self.xor_row_into(lead, r);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of `{v : M vᵀ = 0}`, one vector per free column in increasing order.
    pub fn nullspace_basis(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.put(i, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if m.bit(r, f) {
                    basis.put(i, p, true);
                }
            }
        }
        basis
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.bit(r, c) {
                    out.put(r, j, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_mut(i).copy_from_slice(self.row(r));
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack {} vs {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, data })
    }

    /// Appends a packed row.
    pub fn push_row(&mut self, words: &[u64]) {
        assert_eq!(words.len(), self.stride, "row width mismatch");
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    /// Reorders rows and columns: entry (i, j) of the result is
    /// `self[row_order[i], col_order[j]]`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        self.select_rows(row_order).select_columns(col_order)
    }

    /// Parses the text format: "rows cols" then one 0/1 string per row.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header '{header}'"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("header must be 'rows cols', got '{header}'")));
        };
        let body: Vec<&str> = lines.collect();
        if body.len() != rows {
            return Err(Error::Parse(format!("expected {rows} rows, found {}", body.len())));
        }
        let m = if rows == 0 { Self::zeros(0, cols) } else { Self::from_bit_strings(&body)? };
        if m.cols != cols {
            return Err(Error::Parse(format!("expected {cols} columns, found {}", m.cols)));
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            s.extend((0..self.cols).map(|c| if self.bit(r, c) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix {}", self.to_text())
    }
}

/// GF(2) row rank.
pub fn rank(m: &BinaryMatrix) -> usize {
    m.rank()
}

/// Rows form a basis of the right nullspace of `m`.
pub fn nullspace_basis(m: &BinaryMatrix) -> BinaryMatrix {
    m.nullspace_basis()
}
