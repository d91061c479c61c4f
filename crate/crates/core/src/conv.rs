//! Convolutional codes in polynomial form.

use std::collections::HashMap;

use crate::block::LinearBlockCode;
use crate::error::{Error, Result};
use crate::gf2::{BinaryPoly, PolyMatrix};

/// Rate `b/c` convolutional code held with both a generator and a parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCode {
    g: PolyMatrix,
    h: PolyMatrix,
}

impl ConvCode {
    /// Parity-check side from the minimal basis of the right kernel of `g`.
    pub fn from_generator(g: PolyMatrix) -> Result<Self> {
        let rank = g.rank_over_rational_field();
        if rank < g.rows() {
            return Err(Error::RankDeficient { rank, rows: g.rows() });
        }
        let h = g.right_kernel()?;
        Ok(Self { g, h })
    }

    /// Generator side from the minimal basis of the right kernel of `h`.
    pub fn from_parity_check(h: PolyMatrix) -> Result<Self> {
        let rank = h.rank_over_rational_field();
        if rank < h.rows() {
            return Err(Error::RankDeficient { rank, rows: h.rows() });
        }
        let g = h.right_kernel()?;
        Ok(Self { g, h })
    }

    /// Both matrices given; checked for `G·Hᵀ = 0` and complementary ranks.
    pub fn from_pair(g: PolyMatrix, h: PolyMatrix) -> Result<Self> {
        if g.cols() != h.cols() {
            return Err(Error::Dimension("generator and parity-check widths differ".into()));
        }
        if !g.mul(&h.transpose())?.is_zero() {
            return Err(Error::Precondition("G·Hᵀ is not zero".into()));
        }
        if g.rank_over_rational_field() + h.rank_over_rational_field() != g.cols() || g.rows() + h.rows() != g.cols() {
            return Err(Error::Precondition("generator and parity-check ranks do not add up to c".into()));
        }
        Ok(Self { g, h })
    }

    pub fn g(&self) -> &PolyMatrix {
        &self.g
    }

    pub fn h(&self) -> &PolyMatrix {
        &self.h
    }

    pub fn b(&self) -> usize {
        self.g.rows()
    }

    pub fn c(&self) -> usize {
        self.g.cols()
    }

    /// Memory of the generator.
    pub fn m(&self) -> usize {
        self.g.memory()
    }

    /// Overall constraint length of the generator.
    pub fn nu(&self) -> usize {
        self.g.nu()
    }

    /// Codeword for a polynomial information vector.
    pub fn encode(&self, u: &[BinaryPoly]) -> Vec<BinaryPoly> {
        self.g.encode(u)
    }

    pub fn is_codeword(&self, v: &[BinaryPoly]) -> bool {
        self.h.syndrome(v).iter().all(BinaryPoly::is_zero)
    }
}

/// Controller-form trellis of a polynomial generator.
///
/// Row `i` of the generator owns `ν_i` state bits starting at `offset[i]`;
/// bit `offset[i] + k` holds the input of row `i` from `k + 1` steps ago.
#[derive(Clone, Debug)]
pub struct Trellis {
    b: usize,
    nu: usize,
    offsets: Vec<usize>,
    degrees: Vec<usize>,
    input_out: Vec<u64>,
    state_out: Vec<[u64; 256]>,
    keep: u128,
    insert: Vec<u128>,
}

/// Largest overall constraint length the trellis packs.
pub const MAX_TRELLIS_NU: usize = 128;

impl Trellis {
    pub fn new(g: &PolyMatrix) -> Result<Self> {
        let (b, c) = (g.rows(), g.cols());
        if c > 64 {
            return Err(Error::InvalidArgument(format!("{c} output bits per branch exceeds 64")));
        }
        if b > 16 {
            return Err(Error::InvalidArgument(format!("{b} inputs per branch exceeds 16")));
        }
        let degrees = g.row_degrees();
        let nu: usize = degrees.iter().sum();
        if nu > MAX_TRELLIS_NU {
            return Err(Error::StateSpaceTooLarge { nu, limit: MAX_TRELLIS_NU });
        }
        let mut offsets = Vec::with_capacity(b);
        let mut acc = 0;
        for &d in &degrees {
            offsets.push(acc);
            acc += d;
        }
        let coef = |i: usize, k: usize| -> u64 {
            (0..c).filter(|&j| g.get(i, j).coeff(k)).fold(0, |m, j| m | 1 << j)
        };
        let input_out = (0..1usize << b)
            .map(|x| (0..b).filter(|&i| (x >> i) & 1 == 1).fold(0, |m, i| m ^ coef(i, 0)))
            .collect();
        let mut bit_out = vec![0u64; nu];
        for i in 0..b {
            for k in 0..degrees[i] {
                bit_out[offsets[i] + k] = coef(i, k + 1);
            }
        }
        let bytes = nu.div_ceil(8);
        let state_out = (0..bytes)
            .map(|byte| {
                let mut t = [0u64; 256];
                for (v, slot) in t.iter_mut().enumerate() {
                    for bit in 0..8 {
                        let idx = byte * 8 + bit;
                        if (v >> bit) & 1 == 1 && idx < nu {
                            *slot ^= bit_out[idx];
                        }
                    }
                }
                t
            })
            .collect();
        let mut keep = 0u128;
        for i in 0..b {
            for k in 1..degrees[i] {
                keep |= 1 << (offsets[i] + k);
            }
        }
        let insert = (0..1usize << b)
            .map(|x| {
                (0..b)
                    .filter(|&i| (x >> i) & 1 == 1 && degrees[i] > 0)
                    .fold(0u128, |m, i| m | 1 << offsets[i])
            })
            .collect();
        Ok(Self { b, nu, offsets, degrees, input_out, state_out, keep, insert })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn inputs(&self) -> usize {
        1 << self.b
    }

    /// Branch output bits for `state` and input `x`.
    #[inline]
    pub fn output(&self, state: u128, x: usize) -> u64 {
        self.input_out[x] ^ self.state_output(state)
    }

    /// Part of the branch output contributed by the register contents.
    #[inline]
    pub fn state_output(&self, state: u128) -> u64 {
        let mut o = 0;
        let mut s = state;
        let mut byte = 0;
        while s != 0 {
            o ^= self.state_out[byte][(s & 0xFF) as usize];
            s >>= 8;
            byte += 1;
        }
        o
    }

    /// Part of the branch output contributed by the current input.
    #[inline]
    pub fn input_output(&self, x: usize) -> u64 {
        self.input_out[x]
    }

    #[inline]
    pub fn next(&self, state: u128, x: usize) -> u128 {
        ((state << 1) & self.keep) | self.insert[x]
    }

    /// Predecessors `(state, input)` of `next`.
    pub fn predecessors(&self, next: u128) -> Vec<(u128, usize)> {
        let mut forced = 0usize;
        let mut free_inputs = Vec::new();
        let mut oldest = Vec::new();
        let mut base = 0u128;
        for i in 0..self.b {
            let (off, d) = (self.offsets[i], self.degrees[i]);
            if d == 0 {
                free_inputs.push(i);
                continue;
            }
            if (next >> off) & 1 == 1 {
                forced |= 1 << i;
            }
            for k in 0..d - 1 {
                if (next >> (off + k + 1)) & 1 == 1 {
                    base |= 1 << (off + k);
                }
            }
            oldest.push(off + d - 1);
        }
        let choices = free_inputs.len() + oldest.len();
        let mut out = Vec::with_capacity(1 << choices);
        for mask in 0..1usize << choices {
            let mut x = forced;
            for (j, &i) in free_inputs.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    x |= 1 << i;
                }
            }
            let mut s = base;
            for (j, &bit) in oldest.iter().enumerate() {
                if (mask >> (free_inputs.len() + j)) & 1 == 1 {
                    s |= 1 << bit;
                }
            }
            out.push((s, x));
        }
        out
    }

    /// Input bits of row `i` carried by `state`, newest first.
    pub fn row_history(&self, state: u128, i: usize) -> u128 {
        (state >> self.offsets[i]) & ((1u128 << self.degrees[i]) - 1)
    }
}

/// Bound on the exact trellis searches.
#[derive(Clone, Copy, Debug)]
pub struct FreeDistanceLimit {
    pub max_nu: usize,
}

impl Default for FreeDistanceLimit {
    fn default() -> Self {
        Self { max_nu: 24 }
    }
}

fn exact_trellis(code: &ConvCode, limit: FreeDistanceLimit) -> Result<Trellis> {
    let nu = code.nu();
    if nu > limit.max_nu {
        return Err(Error::StateSpaceTooLarge { nu, limit: limit.max_nu });
    }
    let t = Trellis::new(code.g())?;
    if has_zero_weight_cycle(&t) {
        return Err(Error::Catastrophic);
    }
    Ok(t)
}

/// Kahn elimination on the zero-output edges between nonzero states.
fn has_zero_weight_cycle(t: &Trellis) -> bool {
    let states = 1usize << t.nu();
    let succ = |s: usize| {
        (0..t.inputs()).filter_map(move |x| {
            let n = t.next(s as u128, x) as usize;
            (n != 0 && t.output(s as u128, x) == 0).then_some(n)
        })
    };
    let mut indeg = vec![0u32; states];
    for s in 1..states {
        for n in succ(s) {
            indeg[n] += 1;
        }
    }
    let mut stack: Vec<usize> = (1..states).filter(|&s| indeg[s] == 0).collect();
    let mut removed = 0;
    while let Some(s) = stack.pop() {
        removed += 1;
        for n in succ(s) {
            indeg[n] -= 1;
            if indeg[n] == 0 {
                stack.push(n);
            }
        }
    }
    removed < states - 1
}

/// Minimum weight over nonzero paths leaving and re-entering the zero state.
pub fn free_distance(code: &ConvCode, limit: FreeDistanceLimit) -> Result<u32> {
    let t = exact_trellis(code, limit)?;
    let states = 1usize << t.nu();
    let mut dist = vec![u32::MAX; states];
    let mut buckets: Vec<Vec<u32>> = Vec::new();
    let mut best = u32::MAX;
    let push = |buckets: &mut Vec<Vec<u32>>, w: u32, s: usize| {
        if buckets.len() <= w as usize {
            buckets.resize(w as usize + 1, Vec::new());
        }
        buckets[w as usize].push(s as u32);
    };
    for x in 1..t.inputs() {
        let w = t.output(0, x).count_ones();
        let n = t.next(0, x) as usize;
        if n == 0 {
            best = best.min(w);
        } else if w < dist[n] {
            dist[n] = w;
            push(&mut buckets, w, n);
        }
    }
    let mut w = 0usize;
    while w < buckets.len() && (w as u32) < best {
        while let Some(s) = buckets[w].pop() {
            let s = s as usize;
            if dist[s] != w as u32 {
                continue;
            }
            for x in 0..t.inputs() {
                let nw = w as u32 + t.output(s as u128, x).count_ones();
                let n = t.next(s as u128, x) as usize;
                if n == 0 {
                    best = best.min(nw);
                } else if nw < dist[n] && nw < best {
                    dist[n] = nw;
                    push(&mut buckets, nw, n);
                }
            }
        }
        w += 1;
    }
    Ok(best)
}

/// First-event path counts by weight, `d_free ..= d_free + depth`.
pub fn spectrum(code: &ConvCode, depth: u32, limit: FreeDistanceLimit) -> Result<Vec<(u32, u64)>> {
    let dfree = free_distance(code, limit)?;
    let t = exact_trellis(code, limit)?;
    let max_w = dfree + depth;
    let mut counts = vec![0u64; max_w as usize + 1];
    let mut layer: HashMap<u128, Vec<u64>> = HashMap::new();
    let add = |map: &mut HashMap<u128, Vec<u64>>, s: u128, w: u32, c: u64| {
        map.entry(s).or_insert_with(|| vec![0; max_w as usize + 1])[w as usize] += c;
    };
    for x in 1..t.inputs() {
        let w = t.output(0, x).count_ones();
        if w > max_w {
            continue;
        }
        match t.next(0, x) {
            0 => counts[w as usize] += 1,
            n => add(&mut layer, n, w, 1),
        }
    }
    while !layer.is_empty() {
        let mut next: HashMap<u128, Vec<u64>> = HashMap::new();
        for (s, ws) in &layer {
            for (w0, &c) in ws.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for x in 0..t.inputs() {
                    let w = w0 as u32 + t.output(*s, x).count_ones();
                    if w > max_w {
                        continue;
                    }
                    match t.next(*s, x) {
                        0 => counts[w as usize] += c,
                        n => add(&mut next, n, w, c),
                    }
                }
            }
        }
        layer = next;
    }
    Ok((dfree..=max_w).map(|w| (w, counts[w as usize])).collect())
}

/// Fewest nonzero coordinate series in a nonzero codeword: the smallest
/// coordinate set whose columns of `H` are dependent over GF(2)(D).
pub fn block_distance_conv(code: &ConvCode) -> usize {
    let h = code.h();
    let c = h.cols();
    for size in 1..=c {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if h.select_columns(&idx).rank_over_rational_field() < size {
                return size;
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] != i + c - size) else { break };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    c
}

/// Rate-1/2 subcode living on two coordinates of a rate-2/3 code.
#[derive(Clone, Debug)]
pub struct Subcode {
    pub coords: (usize, usize),
    pub code: ConvCode,
}

impl Subcode {
    /// Generator row padded back to the parent's three coordinates.
    pub fn embedded_generator(&self, c: usize) -> Vec<BinaryPoly> {
        let mut row = vec![BinaryPoly::zero(); c];
        row[self.coords.0] = self.code.g().get(0, 0).clone();
        row[self.coords.1] = self.code.g().get(0, 1).clone();
        row
    }
}

/// For each coordinate pair `(i, j)` of a code with `H = (h_1 h_2 h_3)`, the
/// subcode with generator `(h_j, h_i) / gcd(h_i, h_j)` on those coordinates.
pub fn rate_half_subcodes(code: &ConvCode) -> Result<Vec<Subcode>> {
    let h = code.h();
    if code.c() != 3 || h.rows() != 1 {
        return Err(Error::InvalidArgument("subcodes need c = 3 and a single parity-check row".into()));
    }
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (hi, hj) = (h.get(0, i), h.get(0, j));
        let gcd = hi.gcd(hj);
        if gcd.is_zero() {
            return Err(Error::Precondition("both parity-check entries vanish".into()));
        }
        let a = hj.div_rem(&gcd).expect("nonzero").0;
        let b = hi.div_rem(&gcd).expect("nonzero").0;
        let g = PolyMatrix::from_rows(vec![vec![a, b]])?;
        out.push(Subcode { coords: (i, j), code: ConvCode::from_generator(g)? });
    }
    Ok(out)
}

/// Zero-tail termination: `l` information levels followed by `m` flush levels.
pub fn zt_block_code(code: &ConvCode, l: usize) -> LinearBlockCode {
    LinearBlockCode::from_generator(&code.g().zero_tail_generator(l))
}

/// Tailbiting code of length `L·c`, spanned by the tailbitten generator.
pub fn tb_block_code(code: &ConvCode, l: usize) -> Result<LinearBlockCode> {
    Ok(LinearBlockCode::from_generator(&code.g().tailbite_generator(l)?))
}

/// Code whose parity checks are `tailbite(H, L)`; contains [`tb_block_code`].
pub fn tb_parity_code(code: &ConvCode, l: usize) -> Result<LinearBlockCode> {
    Ok(LinearBlockCode::from_parity_check(code.h().tailbite(l)?))
}

/// Named constituents:
/// - `heawood`: the rate-2/3, ν = 5 code with `H = (1+D+D⁴, 1+D+D³+D⁴+D⁵, 1+D²+D³+D⁴+D⁵)`
/// - `tb-parent`: the rate-1/3 code with `H = ((1,1,1),(1,D,D³))`, `G = (D+D², 1+D+D², 1)`
/// - `spc3`: the memoryless single parity check `H = (1,1,1)`
pub fn builtin_constituent(name: &str) -> Option<ConvCode> {
    let (g, h): (&[&[&[usize]]], &[&[&[usize]]]) = match name {
        "heawood" => (
            &[&[&[0, 2], &[2], &[0, 1, 2]], &[&[1, 2, 3], &[0], &[0, 2]]],
            &[&[&[0, 1, 4], &[0, 1, 3, 4, 5], &[0, 2, 3, 4, 5]]],
        ),
        "tb-parent" => (&[&[&[1, 2], &[0, 1, 2], &[0]]], &[&[&[0], &[0], &[0]], &[&[0], &[1], &[3]]]),
        "spc3" => (&[&[&[0], &[0], &[]], &[&[], &[0], &[0]]], &[&[&[0], &[0], &[0]]]),
        _ => return None,
    };
    let pair = ConvCode::from_pair(PolyMatrix::from_exponents(g).ok()?, PolyMatrix::from_exponents(h).ok()?);
    Some(pair.expect("valid built-in code"))
}
