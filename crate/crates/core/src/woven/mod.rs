//! Woven graph codes with convolutional constituents.
//!
//! Every vertex of partition 0 carries the constituent's parity-check rows in
//! natural column order (`h_1 .. h_c` on its incident edges by label). A
//! vertex of any other partition orders its incident edges by their position
//! inside the partition-0 vertex (ties by label) and gives the `q`-th of them
//! the column `t_q = h_{perm[q]}`.

mod encoder;
mod search;
mod sweep;

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::conv::{self, ConvCode, FreeDistanceLimit};
use crate::error::{Error, Result};
use crate::gf2::{BinaryPoly, BivariatePoly, BivariatePolyMatrix, PolyMatrix, Side};
use crate::hypergraph::Hypergraph;

pub use encoder::encode_stream;
pub use search::{witness_search, Witness, WitnessBudget};
pub use sweep::{permutation_sweep, sweep_csv, SweepRow};

#[derive(Clone, Debug)]
pub struct WovenConvCode {
    graph: Hypergraph,
    constituent: ConvCode,
    perm: Vec<usize>,
    h_wg: PolyMatrix,
    expanded: OnceLock<Result<ExpandedGenerator>>,
}

impl WovenConvCode {
    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn constituent(&self) -> &ConvCode {
        &self.constituent
    }

    /// `perm[q]` is the constituent column used as `t_q`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn h_wg(&self) -> &PolyMatrix {
        &self.h_wg
    }

    pub fn n(&self) -> usize {
        self.h_wg.cols()
    }

    /// `(N - rank H_wg) / N` over GF(2)(D).
    pub fn rate(&self) -> Ratio<i64> {
        let n = self.h_wg.cols() as i64;
        Ratio::new(n - self.h_wg.rank_over_rational_field() as i64, n)
    }

    /// Cached [`expanded_generator`].
    pub fn expanded(&self) -> Result<&ExpandedGenerator> {
        self.expanded.get_or_init(|| expand(self)).as_ref().map_err(Clone::clone)
    }

    pub fn is_codeword(&self, v: &[BinaryPoly]) -> bool {
        v.len() == self.n() && self.h_wg.syndrome(v).iter().all(BinaryPoly::is_zero)
    }
}

fn check_perm(perm: &[usize], c: usize) -> Result<()> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..c).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{c}")));
    }
    Ok(())
}

/// Edges of vertex `v` of partition `p` in the order that receives `t_1, t_2, ...`.
fn ordered_edges(g: &Hypergraph, p: usize, v: usize) -> Vec<usize> {
    let mut edges = g.incident_edges(p, v).to_vec();
    if p > 0 {
        edges.sort_by_key(|&e| (g.position_in_vertex(0, e), e));
    }
    edges
}

pub fn build_woven_conv(g: &Hypergraph, hc: &PolyMatrix, perm: &[usize]) -> Result<WovenConvCode> {
    if hc.cols() != g.c() {
        return Err(Error::Dimension(format!("H^c has {} columns, the graph has degree {}", hc.cols(), g.c())));
    }
    check_perm(perm, g.c())?;
    let constituent = ConvCode::from_parity_check(hc.clone())?;
    let (n, r) = (g.n(), hc.rows());
    let mut h = PolyMatrix::zeros(g.s() * n * r, g.num_edges());
    for p in 0..g.s() {
        for v in 0..n {
            for (q, e) in ordered_edges(g, p, v).into_iter().enumerate() {
                let col = if p == 0 { q } else { perm[q] };
                for i in 0..r {
                    h.set((p * n + v) * r + i, e, hc.get(i, col).clone());
                }
            }
        }
    }
    Ok(WovenConvCode { graph: g.clone(), constituent, perm: perm.to_vec(), h_wg: h, expanded: OnceLock::new() })
}

/// `H(D,Z)`, `G(D,Z)` and the Z exponents `a_q` of the second parity-check row.
#[derive(Clone, Debug)]
pub struct TwoDimForms {
    pub h: BivariatePolyMatrix,
    pub g: BivariatePolyMatrix,
    pub shifts: Vec<usize>,
    /// Length of the Z cycle (vertices per partition).
    pub length: usize,
}

/// Requires a bipartite graph whose edge `e` is the `(e mod c)`-th edge of
/// left vertex `e / c` and whose right vertex `k` meets left vertex
/// `k + a_q (mod n)` at position `q`, with `a_q` independent of `k`.
pub fn two_dim_forms(code: &WovenConvCode) -> Result<TwoDimForms> {
    let g = &code.graph;
    let hc = code.constituent.h();
    if !g.is_bipartite() {
        return Err(Error::Precondition("two-dimensional forms need a bipartite graph".into()));
    }
    if hc.rows() != 1 || hc.cols() != 3 {
        return Err(Error::Precondition("two-dimensional forms need a 1x3 constituent parity check".into()));
    }
    let (n, c) = (g.n(), g.c());
    for e in 0..g.num_edges() {
        if g.edge(e)[0] != e / c || g.position_in_vertex(0, e) != e % c {
            return Err(Error::NotCirculant);
        }
    }
    let mut shifts: Option<Vec<usize>> = None;
    for k in 0..n {
        let edges = ordered_edges(g, 1, k);
        let mut a = Vec::with_capacity(c);
        for (q, &e) in edges.iter().enumerate() {
            if g.position_in_vertex(0, e) != q {
                return Err(Error::NotCirculant);
            }
            a.push((g.edge(e)[0] + n - k) % n);
        }
        match &shifts {
            None => shifts = Some(a),
            Some(prev) if *prev != a => return Err(Error::NotCirculant),
            Some(_) => {}
        }
    }
    let shifts = shifts.ok_or(Error::NotCirculant)?;
    let top: Vec<BivariatePoly> = (0..c).map(|q| BivariatePoly::term(hc.get(0, q).clone(), 0)).collect();
    let bottom: Vec<BivariatePoly> =
        (0..c).map(|q| BivariatePoly::term(hc.get(0, code.perm[q]).clone(), shifts[q])).collect();
    let cross = |i: usize, j: usize| top[i].mul(&bottom[j]).add(&top[j].mul(&bottom[i])).mod_z(n);
    let gz = vec![cross(1, 2), cross(2, 0), cross(0, 1)];
    Ok(TwoDimForms {
        h: BivariatePolyMatrix::from_rows(vec![top, bottom])?,
        g: BivariatePolyMatrix::from_rows(vec![gz])?,
        shifts,
        length: n,
    })
}

/// Generator of the woven code tailbitten over Z, before and after reduction.
#[derive(Clone, Debug)]
pub struct ExpandedGenerator {
    pub raw: PolyMatrix,
    pub minimal: PolyMatrix,
    /// Sum of the raw rows divided by the gcd of its entries.
    pub replacement_row: Vec<BinaryPoly>,
    /// `raw` generates the whole code. When it does not (the two rows of
    /// `H(D,Z)` become dependent at some root of `Z^n - 1`), `minimal` is the
    /// minimal basis of the right kernel of `H_wg(D)` instead.
    pub spans_code: bool,
}

impl ExpandedGenerator {
    pub fn nu_raw(&self) -> usize {
        self.raw.nu()
    }

    pub fn nu_min(&self) -> usize {
        self.minimal.nu()
    }

    /// Raw generator with row `i` swapped for the replacement row.
    pub fn with_replacement(&self, i: usize) -> PolyMatrix {
        let mut m = self.raw.clone();
        for (j, p) in self.replacement_row.iter().enumerate() {
            m.set(i, j, p.clone());
        }
        m
    }
}

pub fn expanded_generator(code: &WovenConvCode) -> Result<ExpandedGenerator> {
    code.expanded().cloned()
}

fn expand(code: &WovenConvCode) -> Result<ExpandedGenerator> {
    let forms = two_dim_forms(code)?;
    let raw = forms.g.tailbite_z(forms.length, Side::Generator)?;
    let dim = code.h_wg.cols() - code.h_wg.rank_over_rational_field();
    let spans_code = raw.rank_over_rational_field() == dim;
    let minimal = if spans_code { raw.minimal_basic()? } else { code.h_wg.right_kernel()? };
    let replacement_row = replacement_row(&raw);
    Ok(ExpandedGenerator { raw, minimal, replacement_row, spans_code })
}

fn replacement_row(g: &PolyMatrix) -> Vec<BinaryPoly> {
    let mut sum = vec![BinaryPoly::zero(); g.cols()];
    for r in 0..g.rows() {
        for (s, p) in sum.iter_mut().zip(g.row(r)) {
            *s += p;
        }
    }
    let gcd = sum.iter().fold(BinaryPoly::zero(), |acc, p| acc.gcd(p));
    if gcd.is_zero() {
        return sum;
    }
    sum.iter().map(|p| p.div_rem(&gcd).expect("nonzero gcd").0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub product_bound: u32,
    pub improved_bound: Option<u32>,
    pub witness_weight: Option<u32>,
    pub witness_codeword: Option<Vec<BinaryPoly>>,
    pub exhaustive: bool,
}

/// Lower bounds on the free distance from the graph and the constituent.
///
/// The product bound multiplies `d_free^c` by `max(g/2, 2)` on bipartite
/// graphs and by `max(⌈g_{s,d_block}/c⌉, s)` otherwise. The improved bound
/// takes that same count of active constituents: either all of them carry
/// block-weight-2 words, which live in the rate-1/2 subcodes, or one more
/// constituent is active.
pub fn distance_bounds(code: &WovenConvCode) -> Result<DistanceReport> {
    let constituent = &code.constituent;
    let d_block = conv::block_distance_conv(constituent);
    if d_block < 2 {
        return Err(Error::Precondition(format!("constituent block distance is {d_block}; the bounds need at least 2")));
    }
    let dfree = conv::free_distance(constituent, FreeDistanceLimit::default())?;
    let g = &code.graph;
    let count = if g.is_bipartite() {
        let girth = g.girth().ok_or_else(|| Error::Precondition("graph has no cycles".into()))?;
        (girth / 2).max(2)
    } else {
        let gsd = g
            .sd_girth(d_block)?
            .ok_or_else(|| Error::Precondition(format!("graph has no compact (>= {d_block})-connected subgraph")))?;
        gsd.div_ceil(g.c()).max(g.s())
    } as u32;
    let improved_bound = match conv::rate_half_subcodes(constituent) {
        Ok(subs) => {
            let mut d_sub = u32::MAX;
            for s in &subs {
                d_sub = d_sub.min(conv::free_distance(&s.code, FreeDistanceLimit::default())?);
            }
            Some((count * d_sub).min((count + 1) * dfree))
        }
        Err(_) => None,
    };
    Ok(DistanceReport {
        product_bound: count * dfree,
        improved_bound,
        witness_weight: None,
        witness_codeword: None,
        exhaustive: false,
    })
}

/// Number of distinct codewords among the cyclic Z-shifts of `v` (one vertex
/// step moves every coordinate by `c` positions).
pub fn orbit_multiplicity(code: &WovenConvCode, v: &[BinaryPoly]) -> Result<usize> {
    let forms = two_dim_forms(code)?;
    if !code.is_codeword(v) {
        return Err(Error::NotCodeword);
    }
    if v.iter().all(BinaryPoly::is_zero) {
        return Err(Error::TrivialCodeword);
    }
    let (n, c) = (forms.length, code.graph.c());
    let mut seen: Vec<Vec<BinaryPoly>> = Vec::with_capacity(n);
    for step in 0..n {
        let shifted = z_shift(v, c, step);
        if !code.is_codeword(&shifted) {
            return Err(Error::NotCodeword);
        }
        if !seen.contains(&shifted) {
            seen.push(shifted);
        }
    }
    Ok(seen.len())
}

/// Cyclic Z-shift of a codeword by `step` vertices.
pub fn z_shift(v: &[BinaryPoly], c: usize, step: usize) -> Vec<BinaryPoly> {
    let len = v.len();
    let n = len / c;
    (0..len).map(|i| v[(i + (n - step % n) * c) % len].clone()).collect()
}
