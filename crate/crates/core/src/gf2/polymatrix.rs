use std::fmt;
use std::str::FromStr;

use super::matrix::{words_for, BinaryMatrix};
use super::poly::BinaryPoly;
use crate::error::{Error, Result};

/// Matrix over GF(2)[D].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BinaryPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BinaryPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BinaryPoly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BinaryPoly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged polynomial matrix rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    /// Shorthand for small literal matrices: each entry given by its exponent list.
    pub fn from_exponents(rows: &[&[&[usize]]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|e| BinaryPoly::from_exponents(e)).collect())
                .collect(),
        )
    }

    /// Degree-0 matrix with the given binary entries.
    pub fn from_binary(m: &BinaryMatrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in m.row_ones(r) {
                out.set(r, c, BinaryPoly::one());
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BinaryPoly {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: BinaryPoly) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        self.entries[r * self.cols + c] = p;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut BinaryPoly {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BinaryPoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BinaryPoly> {
        self.row(r).to_vec()
    }

    pub fn entries(&self) -> &[BinaryPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BinaryPoly::is_zero)
    }

    /// Maximum entry degree of a row; `None` for a zero row.
    pub fn row_degree(&self, r: usize) -> Option<usize> {
        self.row(r).iter().filter_map(BinaryPoly::degree).max()
    }

    /// Row degrees with zero rows counted as 0.
    pub fn row_degrees(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_degree(r).unwrap_or(0)).collect()
    }

    /// Memory `m`: the largest entry degree.
    pub fn memory(&self) -> usize {
        self.entries.iter().filter_map(BinaryPoly::degree).max().unwrap_or(0)
    }

    /// Overall constraint length `ν`: sum of row degrees.
    pub fn nu(&self) -> usize {
        self.row_degrees().iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        *out.entry_mut(r, c) += &a.mul(b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `M · vᵀ` for a polynomial vector `v` of length `cols`.
    pub fn syndrome(&self, v: &[BinaryPoly]) -> Vec<BinaryPoly> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = BinaryPoly::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &a.mul(b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `u · M` for a polynomial row vector `u` of length `rows`.
    pub fn encode(&self, u: &[BinaryPoly]) -> Vec<BinaryPoly> {
        assert_eq!(u.len(), self.rows, "information vector length mismatch");
        let mut out = vec![BinaryPoly::zero(); self.cols];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (o, g) in out.iter_mut().zip(self.row(i)) {
                if !g.is_zero() {
                    *o += &ui.mul(g);
                }
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Binary matrix of the `D^t` coefficients.
    pub fn coefficient_matrix(&self, t: usize) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c).coeff(t) {
                    out.put(r, c, true);
                }
            }
        }
        out
    }

    /// High-order coefficient matrix: row `i` holds the `D^{ν_i}` coefficients.
    pub fn high_order_matrix(&self) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            let Some(d) = self.row_degree(r) else { continue };
            for c in 0..self.cols {
                if self.get(r, c).coeff(d) {
                    out.put(r, c, true);
                }
            }
        }
        out
    }

    /// True when the high-order coefficient matrix has full row rank.
    pub fn is_reduced(&self) -> bool {
        self.high_order_matrix().rank() == self.rows
    }

    /// Rank over GF(2)(D) by fraction-free elimination.
    ///
    /// Rows are combined as `p·row_j + a·row_i` (no division), then divided
    /// by the gcd of their entries to keep degrees small.
    pub fn rank_over_rational_field(&self) -> usize {
        let mut rows: Vec<Vec<BinaryPoly>> = (0..self.rows).map(|r| self.row_vec(r)).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            let piv = pivot_row[c].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                let a = row[c].clone();
                if a.is_zero() {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    let mut v = piv.mul(x);
                    v += &a.mul(y);
                    *x = v;
                }
                let g = row.iter().fold(BinaryPoly::zero(), |g, x| g.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    for x in row.iter_mut() {
                        *x = x.div_rem(&g).expect("nonzero gcd").0;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Block-circulant expansion: the `D^t` coefficient of entry (i, j) goes to
    /// block row `s`, block column `(s + t) mod L`, for every level `s`.
    /// Coefficients that wrap onto the same position accumulate by XOR.
    pub fn tailbite(&self, l: usize) -> Result<BinaryMatrix> {
        self.expand_cyclic(l, |s, t| (s + t) % l)
    }

    /// Generator-side expansion matching [`PolyMatrix::tailbite`]: the `D^t`
    /// coefficient of row block `s` goes to block column `(s - t) mod L`.
    pub fn tailbite_generator(&self, l: usize) -> Result<BinaryMatrix> {
        self.expand_cyclic(l, |s, t| (s + l - t % l) % l)
    }

    fn expand_cyclic(&self, l: usize, place: impl Fn(usize, usize) -> usize) -> Result<BinaryMatrix> {
        if l == 0 {
            return Err(Error::InvalidArgument("tailbiting length must be at least 1".into()));
        }
        let mut out = BinaryMatrix::zeros(self.rows * l, self.cols * l);
        for s in 0..l {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    for t in self.get(i, j).exponents() {
                        out.flip(s * self.rows + i, place(s, t) * self.cols + j);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Zero-tail expansion of a generator with `l` information levels: the
    /// `D^t` coefficient of row block `s` goes to block column `s + t`.
    pub fn zero_tail_generator(&self, l: usize) -> BinaryMatrix {
        let m = self.memory();
        let mut out = BinaryMatrix::zeros(self.rows * l, self.cols * (l + m));
        for s in 0..l {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    for t in self.get(i, j).exponents() {
                        out.flip(s * self.rows + i, (s + t) * self.cols + j);
                    }
                }
            }
        }
        out
    }

    /// Minimal polynomial basis of the right kernel `{v : M vᵀ = 0}`.
    ///
    /// Built degree by degree: at degree `d` the vectors of degree ≤ d in the
    /// kernel are the GF(2) nullspace of a block-Toeplitz matrix, and new
    /// basis vectors are those not spanned by D-shifts of earlier ones.
    /// The result is sorted by degree, reduced and basic.
    pub fn right_kernel(&self) -> Result<Self> {
        let n = self.cols;
        let target = n - self.rank_over_rational_field();
        let limit = self.nu() + 1;
        let m = self.memory();
        let mut basis: Vec<(usize, Vec<BinaryPoly>)> = Vec::new();
        let mut d = 0;
        while basis.len() < target {
            if d > limit {
                return Err(Error::Precondition(format!(
                    "kernel basis incomplete at degree {d} ({} of {target} vectors)",
                    basis.len()
                )));
            }
            let nbits = (d + 1) * n;
            let mut toeplitz = BinaryMatrix::zeros((m + d + 1) * self.rows, nbits);
            for i in 0..self.rows {
                for j in 0..n {
                    for k in self.get(i, j).exponents() {
                        for t in 0..=d {
                            toeplitz.flip((k + t) * self.rows + i, t * n + j);
                        }
                    }
                }
            }
            let null = toeplitz.nullspace_basis();
            let mut span = XorBasis::new(nbits);
            for (deg, v) in &basis {
                for s in 0..=(d - deg) {
                    span.insert(pack_vector(v, s, n, nbits));
                }
            }
            for r in 0..null.rows() {
                if basis.len() == target {
                    break;
                }
                if span.insert(null.row(r).to_vec()) {
                    basis.push((d, unpack_vector(null.row(r), n, d)));
                }
            }
            d += 1;
        }
        Self::from_rows_or_empty(basis.into_iter().map(|(_, v)| v).collect(), n)
    }

    fn from_rows_or_empty(rows: Vec<Vec<BinaryPoly>>, cols: usize) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self::zeros(0, cols));
        }
        Self::from_rows(rows)
    }

    /// Minimal-basic generator for the same rational row space.
    ///
    /// Computed as the minimal basis of the kernel of the right kernel. An
    /// input that is already reduced and of minimal `ν` is returned as is.
    pub fn minimal_basic(&self) -> Result<Self> {
        let rank = self.rank_over_rational_field();
        if rank < self.rows {
            return Err(Error::RankDeficient { rank, rows: self.rows });
        }
        let dual = self.right_kernel()?;
        let basis = dual.right_kernel()?;
        if self.is_reduced() && self.nu() == basis.nu() {
            return Ok(self.clone());
        }
        Ok(basis)
    }

    /// Classical high-order reduction: while the high-order coefficient
    /// matrix is row-rank-deficient, cancel the leading terms of the
    /// highest-degree row in a dependency using D-shifted lower rows.
    /// Reduces `ν` but does not make the matrix basic.
    pub fn reduce_high_order(&self) -> Result<Self> {
        let rank = self.rank_over_rational_field();
        if rank < self.rows {
            return Err(Error::RankDeficient { rank, rows: self.rows });
        }
        let mut g = self.clone();
        loop {
            let hi = g.high_order_matrix();
            let dep = hi.transpose().nullspace_basis();
            if dep.rows() == 0 {
                return Ok(g);
            }
            let degs = g.row_degrees();
            let support: Vec<usize> = dep.row_ones(0).collect();
            let top = *support
                .iter()
                .max_by_key(|&&i| (degs[i], std::cmp::Reverse(i)))
                .expect("nonempty dependency");
            let mut new_row = g.row_vec(top);
            for &i in support.iter().filter(|&&i| i != top) {
                let shift = degs[top] - degs[i];
                for (x, y) in new_row.iter_mut().zip(g.row(i)) {
                    x.add_shifted(y, shift);
                }
            }
            for (c, p) in new_row.into_iter().enumerate() {
                g.set(top, c, p);
            }
        }
    }

    /// True when both matrices have the same row space over GF(2)(D).
    pub fn same_rational_row_space(&self, other: &Self) -> bool {
        let r = self.rank_over_rational_field();
        r == other.rank_over_rational_field()
            && self
                .vstack(other)
                .map(|m| m.rank_over_rational_field() == r)
                .unwrap_or(false)
    }

    /// Parses the text format: "rows cols" then one coefficient string per entry.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .flat_map(str::split_whitespace);
        let mut dim = || -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse("missing header".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad header".into()))
        };
        let (rows, cols) = (dim()?, dim()?);
        let entries: Vec<BinaryPoly> = tokens.map(BinaryPoly::parse).collect::<Result<_>>()?;
        if entries.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for p in &self.entries {
            s.push_str(&p.to_coeff_string());
            s.push('\n');
        }
        s
    }
}

/// Packs `D^shift · v` with layout index `t·n + j`.
fn pack_vector(v: &[BinaryPoly], shift: usize, n: usize, nbits: usize) -> Vec<u64> {
    let mut out = vec![0u64; words_for(nbits)];
    for (j, p) in v.iter().enumerate() {
        for t in p.exponents() {
            let idx = (t + shift) * n + j;
            out[idx / 64] |= 1 << (idx % 64);
        }
    }
    out
}

fn unpack_vector(words: &[u64], n: usize, d: usize) -> Vec<BinaryPoly> {
    let mut v = vec![BinaryPoly::zero(); n];
    for t in 0..=d {
        for (j, p) in v.iter_mut().enumerate() {
            let idx = t * n + j;
            if (words[idx / 64] >> (idx % 64)) & 1 == 1 {
                p.flip_coeff(t);
            }
        }
    }
    v
}

/// Incremental GF(2) span keyed by leading bit.
struct XorBasis {
    rows: Vec<Option<Vec<u64>>>,
}

impl XorBasis {
    fn new(nbits: usize) -> Self {
        Self { rows: vec![None; nbits] }
    }

    fn leading(v: &[u64]) -> Option<usize> {
        v.iter()
            .rposition(|&w| w != 0)
            .map(|i| i * 64 + 63 - v[i].leading_zeros() as usize)
    }

    /// Adds `v` to the span; returns false when it was already spanned.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        while let Some(p) = Self::leading(&v) {
            match &self.rows[p] {
                Some(row) => {
                    for (a, b) in v.iter_mut().zip(row) {
                        *a ^= b;
                    }
                }
                None => {
                    self.rows[p] = Some(v);
                    return true;
                }
            }
        }
        false
    }
}

impl FromStr for PolyMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank over GF(2)(D).
pub fn rank_over_rational_field(m: &PolyMatrix) -> usize {
    m.rank_over_rational_field()
}

/// See [`PolyMatrix::tailbite`].
pub fn tailbite(h: &PolyMatrix, l: usize) -> Result<BinaryMatrix> {
    h.tailbite(l)
}

/// See [`PolyMatrix::minimal_basic`].
pub fn minimal_basic(g: &PolyMatrix) -> Result<PolyMatrix> {
    g.minimal_basic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: &[usize]) -> BinaryPoly {
        BinaryPoly::from_exponents(e)
    }

    #[test]
    fn proportional_rows_have_rank_one() {
        let m = PolyMatrix::from_exponents(&[&[&[0], &[1]], &[&[1], &[2]]]).unwrap();
        assert_eq!(m.rank_over_rational_field(), 1);
    }

    #[test]
    fn constant_tailbite_at_one_is_identity_map() {
        let m = PolyMatrix::from_exponents(&[&[&[0], &[], &[0]]]).unwrap();
        let t = m.tailbite(1).unwrap();
        assert_eq!(t, BinaryMatrix::from_bit_strings(&["101"]).unwrap());
        assert!(m.tailbite(0).is_err());
    }

    #[test]
    fn short_tailbite_wraps_by_xor() {
        // 1 + D^2 at L = 2 wraps onto the same block: coefficient cancels
        let m = PolyMatrix::from_rows(vec![vec![p(&[0, 2])]]).unwrap();
        assert!(m.tailbite(2).unwrap().is_zero());
        let m = PolyMatrix::from_rows(vec![vec![p(&[0, 1])]]).unwrap();
        assert_eq!(m.tailbite(2).unwrap(), BinaryMatrix::from_bit_strings(&["11", "11"]).unwrap());
    }

    #[test]
    fn kernel_of_rate_one_third_check() {
        let h = PolyMatrix::from_rows(vec![vec![p(&[0, 1, 4]), p(&[0, 1, 3, 4, 5]), p(&[0, 2, 3, 4, 5])]])
            .unwrap();
        let g = h.right_kernel().unwrap();
        assert_eq!(g.rows(), 2);
        assert_eq!(g.nu(), 5);
        assert!(g.mul(&h.transpose()).unwrap().is_zero());
        assert!(g.is_reduced());
    }

    #[test]
    fn high_order_reduction_fixed_point() {
        let g = PolyMatrix::from_exponents(&[&[&[0, 1], &[0, 1]], &[&[0], &[1]]]).unwrap();
        assert_eq!(g.reduce_high_order().unwrap(), g);
        // not basic: the minimal-basic encoder of the full space is constant
        assert_eq!(g.minimal_basic().unwrap().nu(), 0);
    }

    #[test]
    fn rank_deficient_input_rejected() {
        let g = PolyMatrix::from_exponents(&[&[&[0], &[1]], &[&[1], &[2]]]).unwrap();
        assert!(matches!(g.minimal_basic(), Err(Error::RankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn text_format() {
        let m = PolyMatrix::parse("1 3\n11001\n111011\n0\n").unwrap();
        assert_eq!(m.get(0, 0), &p(&[0, 1, 4]));
        assert!(m.get(0, 2).is_zero());
        assert_eq!(PolyMatrix::parse(&m.to_text()).unwrap(), m);
        assert!(PolyMatrix::parse("1 2\n1\n").is_err());
    }
}
