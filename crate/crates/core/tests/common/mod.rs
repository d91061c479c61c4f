#![allow(dead_code)]

use wgc_core::gf2::{BinaryPoly, PolyMatrix};

/// Carry-less product of two small polynomials, written out bit by bit.
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut r = 0;
    for i in 0..32 {
        if (b >> i) & 1 == 1 {
            r ^= a << i;
        }
    }
    r
}

/// Incidence matrix of the Heawood graph.
pub const HEAWOOD_INCIDENCE: [&str; 14] = [
    "111000000000000000000",
    "000111000000000000000",
    "000000111000000000000",
    "000000000111000000000",
    "000000000000111000000",
    "000000000000000111000",
    "000000000000000000111",
    "100010000001000000000",
    "000100010000001000000",
    "000000100010000001000",
    "000000000100010000001",
    "001000000000100010000",
    "000001000000000100010",
    "010000001000000000100",
];

/// Incidence matrix of the 3-partite hypergraph example.
pub const THREE_PARTITE_INCIDENCE: [&str; 12] = [
    "1111000000000000",
    "0000111100000000",
    "0000000011110000",
    "0000000000001111",
    "1000010000100001",
    "0100001000011000",
    "0010000110000100",
    "0001100001000010",
    "1000100010001000",
    "0100010001000100",
    "0010001000010001",
    "0001000100100010",
];

pub fn p(bits: u64) -> BinaryPoly {
    BinaryPoly::from_u64(bits)
}

pub const H1: u64 = 0b10011; // 1+D+D^4
pub const H2: u64 = 0b111011; // 1+D+D^3+D^4+D^5
pub const H3: u64 = 0b111101; // 1+D^2+D^3+D^4+D^5

pub fn hc() -> PolyMatrix {
    PolyMatrix::from_rows(vec![vec![p(H1), p(H2), p(H3)]]).unwrap()
}

pub fn gc() -> PolyMatrix {
    PolyMatrix::from_rows(vec![vec![p(0b101), p(0b100), p(0b111)], vec![p(0b1110), p(0b1), p(0b101)]]).unwrap()
}

pub fn spc3() -> PolyMatrix {
    PolyMatrix::from_rows(vec![vec![p(1), p(1), p(1)]]).unwrap()
}

/// Best ordering (t1, t2, t3) = (h1, h3, h2).
pub const BEST: [usize; 3] = [0, 2, 1];

pub fn weight(v: &[BinaryPoly]) -> u32 {
    v.iter().map(BinaryPoly::weight).sum()
}

/// `v(D^{-1}) mod D^L - 1` flattened time-major (bit `τ·n + j` holds entry `j`
/// at time `τ`), the orientation in which `tailbite(H, L)` checks codewords.
pub fn flatten_reversed(v: &[BinaryPoly], frames: usize) -> Vec<u64> {
    let n = v.len();
    let mut out = vec![0u64; (n * frames).div_ceil(64)];
    for (j, x) in v.iter().enumerate() {
        for t in x.exponents() {
            let bit = ((frames - t % frames) % frames) * n + j;
            out[bit / 64] ^= 1 << (bit % 64);
        }
    }
    out
}

pub fn pack(bits: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}
