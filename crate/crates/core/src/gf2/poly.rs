use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Polynomial in `D` over GF(2), packed LSB = degree 0.
///
/// Trailing zero words are never stored, so the zero polynomial has no words
/// and equality is plain word equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BinaryPoly {
    words: Vec<u64>,
}

impl BinaryPoly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    /// `D^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_coeff(k, true);
        p
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Self { words: vec![bits] };
        p.normalize();
        p
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.normalize();
        p
    }

    /// Builds a polynomial from the degrees of its nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip_coeff(e);
        }
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Value as a single word; `None` when the degree exceeds 63.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Degree, with `None` standing for minus infinity (the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, k: usize, value: bool) {
        if self.coeff(k) != value {
            self.flip_coeff(k);
        }
    }

    pub fn flip_coeff(&mut self, k: usize) {
        let w = k / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (k % 64);
        self.normalize();
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// `self · D^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut out = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            out[i + ws] ^= w << bs;
            if bs != 0 {
                out[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Self::from_words(out)
    }

    /// Drops the `k` lowest coefficients (division by `D^k`, truncating).
    pub fn shr(&self, k: usize) -> Self {
        let (ws, bs) = (k / 64, k % 64);
        if ws >= self.words.len() {
            return Self::zero();
        }
        let src = &self.words[ws..];
        let out = (0..src.len())
            .map(|i| {
                let lo = src[i] >> bs;
                let hi = if bs != 0 { src.get(i + 1).map_or(0, |w| w << (64 - bs)) } else { 0 };
                lo | hi
            })
            .collect();
        Self::from_words(out)
    }

    /// XORs `other · D^k` into `self`.
    pub fn add_shifted(&mut self, other: &Self, k: usize) {
        if other.is_zero() {
            return;
        }
        let (ws, bs) = (k / 64, k % 64);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = if self.weight() <= other.weight() { (self, other) } else { (other, self) };
        let mut out = Self::zero();
        for (wi, &w) in a.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out.add_shifted(b, wi * 64 + t);
            }
        }
        out
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            quot.flip_coeff(rd - dd);
            rem.add_shifted(divisor, rd - dd);
        }
        Some((quot, rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// Reciprocal polynomial `D^deg · p(1/D)`.
    pub fn reverse(&self) -> Self {
        let Some(d) = self.degree() else { return Self::zero() };
        let mut out = Self::zero();
        for k in self.exponents() {
            out.flip_coeff(d - k);
        }
        out
    }

    /// Reduction modulo `D^l - 1`.
    pub fn mod_cyclic(&self, l: usize) -> Self {
        assert!(l > 0, "cyclic length must be positive");
        let mut out = Self::zero();
        for k in self.exponents() {
            out.flip_coeff(k % l);
        }
        out
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
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

    /// Coefficient string, lowest degree first; `"0"` for zero.
    pub fn to_coeff_string(&self) -> String {
        match self.degree() {
            None => "0".to_string(),
            Some(d) => (0..=d).map(|k| if self.coeff(k) { '1' } else { '0' }).collect(),
        }
    }

    /// Parses either a 0/1 coefficient string (lowest degree first) or the
    /// `0o` octal shorthand, whose binary expansion read left to right lists
    /// the coefficients from `D^0` upward.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(oct) = t.strip_prefix("0o") {
            let mut p = Self::zero();
            if oct.is_empty() {
                return Err(Error::Parse(format!("empty octal polynomial '{t}'")));
            }
            for (i, ch) in oct.chars().enumerate() {
                let digit = ch
                    .to_digit(8)
                    .ok_or_else(|| Error::Parse(format!("bad octal digit '{ch}' in '{t}'")))?;
                for j in 0..3 {
                    if (digit >> (2 - j)) & 1 == 1 {
                        p.flip_coeff(3 * i + j);
                    }
                }
            }
            return Ok(p);
        }
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Self::zero();
        for (k, ch) in t.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => p.flip_coeff(k),
                _ => return Err(Error::Parse(format!("bad coefficient '{ch}' in '{t}'"))),
            }
        }
        Ok(p)
    }

    /// Octal shorthand matching [`BinaryPoly::parse`].
    pub fn to_octal(&self) -> String {
        let Some(d) = self.degree() else { return "0o0".into() };
        let digits = d / 3 + 1;
        let mut s = String::from("0o");
        for i in 0..digits {
            let mut v = 0;
            for j in 0..3 {
                if self.coeff(3 * i + j) {
                    v |= 1 << (2 - j);
                }
            }
            s.push(char::from_digit(v, 8).unwrap());
        }
        s
    }
}

impl Ord for BinaryPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BinaryPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&BinaryPoly> for BinaryPoly {
    fn add_assign(&mut self, rhs: &BinaryPoly) {
        self.add_shifted(rhs, 0);
    }
}

impl Add for &BinaryPoly {
    type Output = BinaryPoly;
    fn add(self, rhs: &BinaryPoly) -> BinaryPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &BinaryPoly {
    type Output = BinaryPoly;
    fn mul(self, rhs: &BinaryPoly) -> BinaryPoly {
        BinaryPoly::mul(self, rhs)
    }
}

impl FromStr for BinaryPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BinaryPoly {
    /// Human form such as `1+D+D^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPoly({self})")
    }
}

/// Carry-less product of two polynomials.
pub fn poly_mul(a: &BinaryPoly, b: &BinaryPoly) -> BinaryPoly {
    a.mul(b)
}
