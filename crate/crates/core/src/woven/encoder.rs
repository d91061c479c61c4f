//! Ring-of-registers encoder for the Z-tailbitten woven code.
//!
//! One register bank per left vertex holds that vertex's input stream over the
//! window `τ .. τ + m`. Column block `b` reads the bank `b - a + j (mod n)`
//! through the taps of each `Z^j` term of `G(D,Z)`, so moving one block to the
//! right is the same as rotating the bank contents by one position. The frame
//! wraps in D as well: the code bits at time `τ` use the inputs at times
//! `τ + t (mod L)`, which is the tailbitten generator of the woven code.

use super::{two_dim_forms, WovenConvCode};
use crate::error::{Error, Result};

/// `info[τ·n + k]` is input `k` at time `τ`; the result holds `n·c` code bits
/// per time instant, column block by column block. A frame whose length is not
/// a multiple of `n` is rejected unless `pad` appends zeros.
pub fn encode_stream(code: &WovenConvCode, info: &[bool], pad: bool) -> Result<Vec<bool>> {
    let forms = two_dim_forms(code)?;
    let (n, c) = (forms.length, forms.g.cols());
    let a = forms.g.z_degree();
    let mut u = info.to_vec();
    if u.len() % n != 0 {
        if !pad {
            return Err(Error::InvalidArgument(format!(
                "{} information bits is not a multiple of {n}; pass the pad flag to zero-fill",
                u.len()
            )));
        }
        u.resize(u.len().div_ceil(n) * n, false);
    }
    let frames = u.len() / n;
    if frames == 0 {
        return Ok(Vec::new());
    }
    // taps[col] = (mask of D coefficients, Z exponent)
    let mut taps: Vec<Vec<(u128, usize)>> = vec![Vec::new(); c];
    let mut m = 0;
    for (col, t) in taps.iter_mut().enumerate() {
        for (j, p) in forms.g.get(0, col).terms() {
            let d = p.degree().unwrap_or(0);
            if d >= 128 {
                return Err(Error::InvalidArgument(format!("generator degree {d} exceeds the register width")));
            }
            m = m.max(d);
            t.push((p.exponents().fold(0u128, |acc, e| acc | 1 << e), j));
        }
    }
    let bit = |k: usize, tau: usize| u[(tau % frames) * n + k];
    let mut banks: Vec<u128> =
        (0..n).map(|k| (0..=m).filter(|&t| bit(k, t)).fold(0u128, |acc, t| acc | 1 << t)).collect();
    let mut out = Vec::with_capacity(frames * n * c);
    for tau in 0..frames {
        for b in 0..n {
            for t in &taps {
                let v = t.iter().fold(0u32, |acc, &(mask, j)| acc ^ (banks[(b + n + j - a % n) % n] & mask).count_ones());
                out.push(v & 1 == 1);
            }
        }
        for (k, bank) in banks.iter_mut().enumerate() {
            *bank >>= 1;
            if bit(k, tau + 1 + m) {
                *bank |= 1 << m;
            }
        }
    }
    Ok(out)
}
