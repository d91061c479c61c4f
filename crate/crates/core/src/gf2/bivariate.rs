use std::collections::BTreeMap;
use std::fmt;

use super::poly::BinaryPoly;
use super::polymatrix::PolyMatrix;
use crate::error::{Error, Result};

/// Finite sum `Σ_k p_k(D) Z^k`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    terms: BTreeMap<usize, BinaryPoly>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `p(D) · Z^k`.
    pub fn term(p: BinaryPoly, k: usize) -> Self {
        let mut out = Self::zero();
        out.add_term(&p, k);
        out
    }

    pub fn add_term(&mut self, p: &BinaryPoly, k: usize) {
        let e = self.terms.entry(k).or_default();
        *e += p;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(Z-exponent, D-polynomial)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BinaryPoly)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    pub fn z_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in other.terms() {
            out.add_term(p, k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(&a.mul(b), i + j);
            }
        }
        out
    }

    /// Reduction modulo `Z^L - 1`.
    pub fn mod_z(&self, l: usize) -> Self {
        let mut out = Self::zero();
        for (k, p) in self.terms() {
            out.add_term(p, k % l);
        }
        out
    }

    /// Evaluation at `Z = 1`.
    pub fn at_z_one(&self) -> BinaryPoly {
        let mut out = BinaryPoly::zero();
        for p in self.terms.values() {
            out += p;
        }
        out
    }

    /// Evaluation at `D = 1`, leaving a polynomial in `Z` (as a `BinaryPoly` in the variable Z).
    pub fn at_d_one(&self) -> BinaryPoly {
        let mut out = BinaryPoly::zero();
        for (k, p) in self.terms() {
            if p.weight() % 2 == 1 {
                out.flip_coeff(k);
            }
        }
        out
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, p)| match k {
                0 => format!("({p})"),
                1 => format!("({p})Z"),
                _ => format!("({p})Z^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which side of the code a Z-direction tailbite expands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `Z^j` term of row block `k` lands in column block `(k + j) mod L`.
    Parity,
    /// `Z^j` term of row block `k` lands in column block `(k + a - j) mod L`,
    /// with `a` the largest Z exponent of the matrix.
    Generator,
}

/// Matrix over GF(2)[D, Z].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivariatePolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BivariatePoly>,
}

impl BivariatePolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BivariatePoly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BivariatePoly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged bivariate matrix rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BivariatePoly {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn z_degree(&self) -> usize {
        self.entries.iter().filter_map(BivariatePoly::z_degree).max().unwrap_or(0)
    }

    /// `self · otherᵀ` reduced modulo `Z^L - 1`.
    pub fn mul_transpose_mod(&self, other: &Self, l: usize) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("column mismatch in M·Nᵀ".into()));
        }
        let mut out = Self::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let mut acc = BivariatePoly::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(j, k)));
                }
                out.entries[i * other.rows + j] = acc.mod_z(l);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BivariatePoly::is_zero)
    }

    /// Evaluation at `Z = 1`.
    pub fn at_z_one(&self) -> PolyMatrix {
        let rows = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).at_z_one()).collect())
            .collect();
        PolyMatrix::from_rows(rows).expect("rectangular")
    }

    /// Expands the Z direction cyclically at length `l`, giving an
    /// `(rows·l)×(cols·l)` matrix over GF(2)[D].
    pub fn tailbite_z(&self, l: usize, side: Side) -> Result<PolyMatrix> {
        if l == 0 {
            return Err(Error::InvalidArgument("tailbiting length must be at least 1".into()));
        }
        let a = self.z_degree();
        let mut out = PolyMatrix::zeros(self.rows * l, self.cols * l);
        for k in 0..l {
            for i in 0..self.rows {
                for c in 0..self.cols {
                    for (j, p) in self.get(i, c).terms() {
                        let block = match side {
                            Side::Parity => (k + j) % l,
                            Side::Generator => (k + a + l - j % l) % l,
                        };
                        *out.entry_mut(k * self.rows + i, block * self.cols + c) += p;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BivariatePolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BivariatePolyMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_reduction_wraps_exponents() {
        let a = BivariatePoly::term(BinaryPoly::one(), 5);
        let b = BivariatePoly::term(BinaryPoly::one(), 4);
        assert_eq!(a.mul(&b).mod_z(7), BivariatePoly::term(BinaryPoly::one(), 2));
        let sum = a.add(&BivariatePoly::term(BinaryPoly::one(), 5));
        assert!(sum.is_zero());
    }

    #[test]
    fn evaluation_at_one() {
        let mut x = BivariatePoly::term(BinaryPoly::from_u64(0b11), 0);
        x.add_term(&BinaryPoly::from_u64(0b101), 3);
        assert_eq!(x.at_z_one(), BinaryPoly::from_u64(0b110));
        assert_eq!(x.at_d_one(), BinaryPoly::zero());
    }
}
