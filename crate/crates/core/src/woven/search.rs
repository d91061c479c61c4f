//! Low-weight codewords of the expanded woven generator.
//!
//! Stage one enumerates every information vector with `deg u_i <= E - ν_i`
//! over the minimal-basic generator; by the predictable degree property these
//! are exactly the codewords of degree at most `E`. Stage two looks for
//! anything lighter with a bidirectional trellis search: every state reachable
//! from zero with weight at most `W_f`, every state that returns to zero with
//! weight at most `W_b`, joined by one branch. A path of weight
//! `W <= W_f + W_b + 1` always splits that way, so when both passes finish
//! inside the node budget the result is the free distance.

use rustc_hash::FxHashMap;

use super::WovenConvCode;
use crate::conv::Trellis;
use crate::enumerate;
use crate::error::{Error, Result};
use crate::gf2::{words_for, BinaryPoly, PolyMatrix};
use crate::par::Exec;

#[derive(Clone, Copy, Debug)]
pub struct WitnessBudget {
    /// Largest codeword degree enumerated.
    pub max_degree: usize,
    /// Cap on the enumerated dimension; the degree shrinks to fit.
    pub max_bits: usize,
    /// States kept per direction in the trellis pass; 0 skips it.
    pub node_budget: usize,
    pub exec: Exec,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        Self { max_degree: 12, max_bits: 28, node_budget: 10_000_000, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub weight: u32,
    pub codeword: Vec<BinaryPoly>,
    /// Degree bound used by the enumeration.
    pub degree: usize,
    /// Both trellis passes finished: `weight` is the free distance.
    pub exhaustive: bool,
}

/// Lightest codeword found under `budget`. With a `target`, a best weight
/// above it is reported as [`Error::BudgetExhausted`].
pub fn witness_search(code: &WovenConvCode, target: Option<u32>, budget: &WitnessBudget) -> Result<Witness> {
    let g = &code.expanded()?.minimal;
    let degree = pick_degree(&g.row_degrees(), budget.max_degree, budget.max_bits);
    let (mut weight, mut codeword) = enumerate_span(g, degree, budget.exec)?;
    let mut exhaustive = false;
    if budget.node_budget > 0 && weight > 1 {
        let trellis = Trellis::new(g)?;
        let outcome = bidirectional(&trellis, weight - 1, budget.node_budget);
        if let Some(inputs) = outcome.path {
            let info = inputs_to_info(&inputs, g.rows());
            codeword = g.encode(&info);
            weight = codeword.iter().map(BinaryPoly::weight).sum();
        }
        exhaustive = outcome.complete;
    }
    if target.is_some_and(|t| weight > t) {
        return Err(Error::BudgetExhausted { best: Some(weight) });
    }
    Ok(Witness { weight, codeword, degree, exhaustive })
}

fn span_bits(degrees: &[usize], e: usize) -> usize {
    degrees.iter().filter(|&&d| d <= e).map(|&d| e - d + 1).sum()
}

fn pick_degree(degrees: &[usize], max_degree: usize, max_bits: usize) -> usize {
    let lowest = degrees.iter().copied().min().unwrap_or(0);
    (lowest..=max_degree.max(lowest)).rev().find(|&e| span_bits(degrees, e) <= max_bits).unwrap_or(lowest)
}

fn enumerate_span(g: &PolyMatrix, e: usize, exec: Exec) -> Result<(u32, Vec<BinaryPoly>)> {
    let slots = e + 1;
    let words = words_for(g.cols() * slots);
    let mut vectors = Vec::new();
    for (i, &d) in g.row_degrees().iter().enumerate() {
        for shift in 0..slots.saturating_sub(d) {
            let mut v = vec![0u64; words];
            for (col, p) in g.row(i).iter().enumerate() {
                for t in p.exponents() {
                    let bit = col * slots + t + shift;
                    v[bit / 64] |= 1 << (bit % 64);
                }
            }
            vectors.push(v);
        }
    }
    let (weight, packed) = enumerate::min_weight(&vectors, words, exec)
        .ok_or_else(|| Error::BudgetExhausted { best: None })?;
    let codeword = (0..g.cols())
        .map(|col| {
            let exps: Vec<usize> =
                (0..slots).filter(|t| (packed[(col * slots + t) / 64] >> ((col * slots + t) % 64)) & 1 == 1).collect();
            BinaryPoly::from_exponents(&exps)
        })
        .collect();
    Ok((weight, codeword))
}

fn inputs_to_info(inputs: &[usize], b: usize) -> Vec<BinaryPoly> {
    (0..b)
        .map(|i| {
            let exps: Vec<usize> = (0..inputs.len()).filter(|&t| (inputs[t] >> i) & 1 == 1).collect();
            BinaryPoly::from_exponents(&exps)
        })
        .collect()
}

struct Outcome {
    complete: bool,
    /// Inputs of the lightest path of weight at most the bound, if any.
    path: Option<Vec<usize>>,
}

type Dist = FxHashMap<u128, u32>;

fn push(buckets: &mut [Vec<u128>], dist: &mut Dist, s: u128, w: u32) {
    let slot = dist.entry(s).or_insert(u32::MAX);
    if w < *slot {
        *slot = w;
        buckets[w as usize].push(s);
    }
}

/// Nonzero states reachable from zero with weight at most `limit`.
fn forward(t: &Trellis, limit: u32, budget: usize) -> (Dist, bool) {
    let mut dist = Dist::default();
    let mut buckets = vec![Vec::new(); limit as usize + 1];
    for x in 1..t.inputs() {
        let (n, w) = (t.next(0, x), t.output(0, x).count_ones());
        if n != 0 && w <= limit {
            push(&mut buckets, &mut dist, n, w);
        }
    }
    for w in 0..=limit {
        while let Some(s) = buckets[w as usize].pop() {
            if dist[&s] != w {
                continue;
            }
            let so = t.state_output(s);
            for x in 0..t.inputs() {
                let n = t.next(s, x);
                let nw = w + (so ^ t.input_output(x)).count_ones();
                if n != 0 && nw <= limit {
                    push(&mut buckets, &mut dist, n, nw);
                    if dist.len() > budget {
                        return (dist, false);
                    }
                }
            }
        }
    }
    (dist, true)
}

/// Nonzero states that reach zero with weight at most `limit`.
fn backward(t: &Trellis, limit: u32, budget: usize) -> (Dist, bool) {
    let mut dist = Dist::default();
    let mut buckets = vec![Vec::new(); limit as usize + 1];
    for (p, x) in t.predecessors(0) {
        let w = t.output(p, x).count_ones();
        if p != 0 && w <= limit {
            push(&mut buckets, &mut dist, p, w);
        }
    }
    for w in 0..=limit {
        while let Some(s) = buckets[w as usize].pop() {
            if dist[&s] != w {
                continue;
            }
            for (p, x) in t.predecessors(s) {
                let nw = w + t.output(p, x).count_ones();
                if p != 0 && nw <= limit {
                    push(&mut buckets, &mut dist, p, nw);
                    if dist.len() > budget {
                        return (dist, false);
                    }
                }
            }
        }
    }
    (dist, true)
}

/// Lightest first-event path of weight at most `bound`.
fn bidirectional(t: &Trellis, bound: u32, budget: usize) -> Outcome {
    let wf = bound.saturating_sub(1).div_ceil(2);
    let wb = bound.saturating_sub(1) - wf;
    let (fwd, fwd_done) = forward(t, wf, budget);
    let (bwd, bwd_done) = backward(t, wb, budget);
    let complete = fwd_done && bwd_done;
    // (weight, from, input) with the smallest key wins, so ties do not depend
    // on hash order.
    let mut best: Option<(u32, u128, usize)> = None;
    let starts = std::iter::once((0u128, 0u32)).chain(fwd.iter().map(|(&s, &w)| (s, w)));
    for (f, df) in starts {
        let so = t.state_output(f);
        for x in usize::from(f == 0)..t.inputs() {
            let n = t.next(f, x);
            let w = df + (so ^ t.input_output(x)).count_ones();
            let total = if n == 0 {
                w
            } else if let Some(&db) = bwd.get(&n) {
                w + db
            } else {
                continue;
            };
            if total <= bound && best.is_none_or(|b| (total, f, x) < b) {
                best = Some((total, f, x));
            }
        }
    }
    let path = best.map(|(_, f, x)| {
        let mut inputs = trace_forward(t, &fwd, f);
        inputs.push(x);
        inputs.extend(trace_backward(t, &bwd, t.next(f, x)));
        inputs
    });
    Outcome { complete, path }
}

fn trace_forward(t: &Trellis, fwd: &Dist, mut s: u128) -> Vec<usize> {
    let mut rev = Vec::new();
    while s != 0 {
        let ds = fwd[&s];
        let (p, x) = t
            .predecessors(s)
            .into_iter()
            .find(|&(p, x)| {
                let dp = if p == 0 { Some(0) } else { fwd.get(&p).copied() };
                dp.is_some_and(|dp| dp + t.output(p, x).count_ones() == ds)
            })
            .expect("forward distances are consistent");
        rev.push(x);
        s = p;
    }
    rev.reverse();
    rev
}

fn trace_backward(t: &Trellis, bwd: &Dist, mut s: u128) -> Vec<usize> {
    let mut out = Vec::new();
    while s != 0 {
        let ds = bwd[&s];
        let x = (0..t.inputs())
            .find(|&x| {
                let n = t.next(s, x);
                let dn = if n == 0 { Some(0) } else { bwd.get(&n).copied() };
                dn.is_some_and(|dn| dn + t.output(s, x).count_ones() == ds)
            })
            .expect("backward distances are consistent");
        out.push(x);
        s = t.next(s, x);
    }
    out
}
