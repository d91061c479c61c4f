//! Linear block codes in parity-check form, graph codes and woven graph codes
//! with block constituents.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::enumerate;
use crate::error::{Error, Result};
use crate::gf2::{words_for, BinaryMatrix};
use crate::hypergraph::Hypergraph;
use crate::par::Exec;

/// Binary linear code `{v : H vᵀ = 0}`; dependent checks are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBlockCode {
    h: BinaryMatrix,
    k: usize,
}

impl LinearBlockCode {
    pub fn from_parity_check(h: BinaryMatrix) -> Self {
        let k = h.cols() - h.rank();
        Self { h, k }
    }

    /// Code spanned by the rows of `g`.
    pub fn from_generator(g: &BinaryMatrix) -> Self {
        Self::from_parity_check(g.nullspace_basis())
    }

    pub fn h(&self) -> &BinaryMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> Ratio<i64> {
        Ratio::new(self.k as i64, self.n() as i64)
    }

    /// Basis of the code, one row per dimension.
    pub fn generator(&self) -> BinaryMatrix {
        self.h.nullspace_basis()
    }

    pub fn is_codeword(&self, v: &[u64]) -> bool {
        self.h.annihilates(v)
    }
}

/// Codeword split into `c` sub-blocks of length `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    pub l: usize,
    pub c: usize,
}

impl BlockStructure {
    pub fn new(l: usize, c: usize) -> Result<Self> {
        if l == 0 || c == 0 {
            return Err(Error::InvalidArgument("block length and count must be positive".into()));
        }
        Ok(Self { l, c })
    }

    pub fn n(&self) -> usize {
        self.l * self.c
    }
}

/// How [`min_distance`] may spend its effort.
#[derive(Clone, Copy, Debug)]
pub struct DistanceBudget {
    /// Largest dimension enumerated in full.
    pub max_enum_dim: usize,
    /// Cap on codewords generated by the information-set search.
    pub max_candidates: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        Self { max_enum_dim: 26, max_candidates: 200_000_000, seed: 0, exec: Exec::default() }
    }
}

/// Minimum distance, exact or bracketed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDistance {
    /// Weight of the best codeword found.
    pub upper: u32,
    /// Certified lower bound; equals `upper` when exact.
    pub lower: u32,
    pub exact: bool,
    /// A codeword of weight `upper`, packed.
    pub witness: Vec<u64>,
}

impl MinDistance {
    /// The exact value, if certified.
    pub fn value(&self) -> Option<u32> {
        self.exact.then_some(self.upper)
    }
}

/// Minimum Hamming weight of a nonzero codeword.
pub fn min_distance(code: &LinearBlockCode, budget: &DistanceBudget) -> Result<MinDistance> {
    if code.k() == 0 {
        return Err(Error::ZeroDimension);
    }
    let g = code.generator();
    if code.k() <= budget.max_enum_dim {
        let rows: Vec<Vec<u64>> = (0..g.rows()).map(|r| g.row(r).to_vec()).collect();
        let (w, v) = enumerate::min_weight(&rows, g.stride(), budget.exec).expect("nonzero code");
        return Ok(MinDistance { upper: w, lower: w, exact: true, witness: v });
    }
    Ok(information_set_search(&g, budget))
}

/// Systematic generator for one information set.
struct InfoSet {
    rows: Vec<Vec<u64>>,
    /// Columns of this information set that no earlier set used.
    fresh: usize,
}

/// Brouwer–Zimmermann style search: enumerate low information weights over
/// several systematic generators whose information sets are as disjoint as
/// possible; after weight `w` in every set, unseen codewords have weight at
/// least `Σ_j max(0, w + 1 - (k - fresh_j))`.
fn information_set_search(g: &BinaryMatrix, budget: &DistanceBudget) -> MinDistance {
    let (k, n) = (g.rows(), g.cols());
    let mut used = vec![false; n];
    let mut sets: Vec<InfoSet> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    loop {
        let mut order: Vec<usize> = (0..n).filter(|&c| !used[c]).collect();
        let fresh_cols = order.len();
        order.shuffle(&mut rng);
        let mut rest: Vec<usize> = (0..n).filter(|&c| used[c]).collect();
        rest.shuffle(&mut rng);
        order.extend(rest);
        let mut m = g.select_columns(&order);
        let pivots = m.rref_in_place();
        let fresh = pivots.iter().filter(|&&p| p < fresh_cols).count();
        if fresh == 0 {
            break;
        }
        for &p in &pivots {
            used[order[p]] = true;
        }
        let mut inverse = vec![0; n];
        for (i, &c) in order.iter().enumerate() {
            inverse[c] = i;
        }
        let rows = (0..k)
            .map(|r| {
                let mut v = vec![0u64; words_for(n)];
                for c in 0..n {
                    if m.bit(r, inverse[c]) {
                        v[c / 64] |= 1 << (c % 64);
                    }
                }
                v
            })
            .collect();
        sets.push(InfoSet { rows, fresh });
    }
    let weight = |v: &[u64]| v.iter().map(|x| x.count_ones()).sum::<u32>();
    let mut upper = u32::MAX;
    let mut witness = Vec::new();
    let mut lower = 1u32;
    let mut spent = 0u64;
    for w in 1..=k {
        let combos = binomial(k, w).saturating_mul(sets.len() as u64);
        if spent.saturating_add(combos) > budget.max_candidates {
            break;
        }
        spent += combos;
        for set in &sets {
            for_each_combination(k, w, |idx| {
                let mut acc = vec![0u64; words_for(n)];
                for &i in idx {
                    acc.iter_mut().zip(&set.rows[i]).for_each(|(a, b)| *a ^= b);
                }
                let wt = weight(&acc);
                if wt < upper || (wt == upper && acc < witness) {
                    upper = wt;
                    witness = acc;
                }
            });
        }
        let bound: u32 = sets
            .iter()
            .map(|s| (w + 1).saturating_sub(k - s.fresh) as u32)
            .sum();
        lower = lower.max(bound);
        if lower >= upper {
            break;
        }
    }
    let lower = lower.min(upper);
    MinDistance { upper, lower, exact: lower == upper, witness }
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k.min(n - k) {
        r = r.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    r
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Fewest nonzero sub-blocks in a nonzero codeword: the smallest block set
/// `S` whose columns of `H` have rank below `|S|·l`.
pub fn block_distance(code: &LinearBlockCode, bs: BlockStructure) -> Result<usize> {
    if code.n() != bs.n() {
        return Err(Error::Dimension(format!("code length {} is not {}·{}", code.n(), bs.l, bs.c)));
    }
    if code.k() == 0 {
        return Err(Error::ZeroDimension);
    }
    for size in 1..=bs.c {
        let mut found = false;
        for_each_combination(bs.c, size, |blocks| {
            if found {
                return;
            }
            let cols: Vec<usize> = blocks.iter().flat_map(|&b| b * bs.l..(b + 1) * bs.l).collect();
            if code.h().select_columns(&cols).rank() < cols.len() {
                found = true;
            }
        });
        if found {
            return Ok(size);
        }
    }
    unreachable!("a nonzero code has a codeword on all blocks")
}

/// Graph code with constituent parity checks `hc` at every vertex: column
/// `q` of `hc` acts on the `q`-th incident hyperedge (by label).
pub fn build_graph_code(g: &Hypergraph, hc: &BinaryMatrix) -> Result<LinearBlockCode> {
    if hc.cols() != g.c() {
        return Err(Error::Dimension(format!("constituent has {} columns, graph degree is {}", hc.cols(), g.c())));
    }
    let identity: Vec<usize> = (0..g.c()).collect();
    let assignment = Assignment::uniform(g, &identity);
    Ok(LinearBlockCode::from_parity_check(expand(g, hc, BlockStructure { l: 1, c: g.c() }, &assignment)))
}

/// Per-partition, per-vertex ordering of the constituent's column blocks:
/// `order[p][v][q]` is the block placed on the `q`-th incident hyperedge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub order: Vec<Vec<Vec<usize>>>,
}

impl Assignment {
    /// Same block order on every vertex.
    pub fn uniform(g: &Hypergraph, perm: &[usize]) -> Self {
        Self { order: vec![vec![perm.to_vec(); g.n()]; g.s()] }
    }

    fn validate(&self, g: &Hypergraph) -> Result<()> {
        if self.order.len() != g.s() || self.order.iter().any(|p| p.len() != g.n()) {
            return Err(Error::Dimension("assignment shape does not match the graph".into()));
        }
        for perm in self.order.iter().flatten() {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..g.c()).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{}", g.c())));
            }
        }
        Ok(())
    }
}

fn expand(g: &Hypergraph, hc: &BinaryMatrix, bs: BlockStructure, a: &Assignment) -> BinaryMatrix {
    let (r, l) = (hc.rows(), bs.l);
    let mut h = BinaryMatrix::zeros(g.s() * g.n() * r, g.num_edges() * l);
    for p in 0..g.s() {
        for v in 0..g.n() {
            for (q, &e) in g.incident_edges(p, v).iter().enumerate() {
                let block = a.order[p][v][q];
                for i in 0..r {
                    for x in 0..l {
                        if hc.bit(i, block * l + x) {
                            h.put((p * g.n() + v) * r + i, e * l + x, true);
                        }
                    }
                }
            }
        }
    }
    h
}

/// Woven graph code with a block constituent.
#[derive(Clone, Debug)]
pub struct WovenBlockCode {
    pub graph: Hypergraph,
    pub constituent: LinearBlockCode,
    pub structure: BlockStructure,
    pub assignment: Assignment,
    pub code: LinearBlockCode,
}

impl WovenBlockCode {
    pub fn h_wg(&self) -> &BinaryMatrix {
        self.code.h()
    }
}

pub fn build_woven_block(
    g: &Hypergraph,
    constituent: &LinearBlockCode,
    bs: BlockStructure,
    assignment: &Assignment,
) -> Result<WovenBlockCode> {
    if bs.c != g.c() || constituent.n() != bs.n() {
        return Err(Error::Dimension(format!(
            "constituent of length {} with {} blocks does not fit a degree-{} graph",
            constituent.n(),
            bs.c,
            g.c()
        )));
    }
    assignment.validate(g)?;
    let h = expand(g, constituent.h(), bs, assignment);
    Ok(WovenBlockCode {
        graph: g.clone(),
        constituent: constituent.clone(),
        structure: bs,
        assignment: assignment.clone(),
        code: LinearBlockCode::from_parity_check(h),
    })
}

/// Predicted `sd_girth(g, d_min^c)` against the measured distance of the graph code.
pub fn theorem1_check(g: &Hypergraph, hc: &BinaryMatrix) -> Result<(Option<usize>, u32)> {
    let constituent = LinearBlockCode::from_parity_check(hc.clone());
    let dc = min_distance(&constituent, &DistanceBudget::default())?
        .value()
        .ok_or_else(|| Error::Precondition("constituent distance not exact".into()))?;
    if dc < 2 {
        return Err(Error::Precondition(format!("constituent distance {dc} < 2")));
    }
    let predicted = g.sd_girth(dc as usize)?;
    let code = build_graph_code(g, hc)?;
    let actual = min_distance(&code, &DistanceBudget::default())?;
    let actual = actual.value().ok_or_else(|| Error::Precondition("graph code distance not exact".into()))?;
    Ok((predicted, actual))
}

/// `max(⌈g_{s,d_block}/c⌉, s) · d_min^c`.
pub fn theorem2_bound(g: &Hypergraph, constituent: &LinearBlockCode, bs: BlockStructure) -> Result<u32> {
    let d_block = block_distance(constituent, bs)?;
    if d_block < 2 {
        return Err(Error::Precondition(format!(
            "constituent block distance is {d_block}; the bound needs at least 2"
        )));
    }
    let gsd = g
        .sd_girth(d_block)?
        .ok_or_else(|| Error::Precondition(format!("graph has no compact (>= {d_block})-connected subgraph")))?;
    let dc = min_distance(constituent, &DistanceBudget::default())?
        .value()
        .ok_or_else(|| Error::Precondition("constituent distance not exact".into()))?;
    let factor = gsd.div_ceil(g.c()).max(g.s());
    Ok(factor as u32 * dc)
}

/// `s(R^c - 1) + 1`; may be nonpositive.
pub fn rate_bound(s: usize, rc: Ratio<i64>) -> Ratio<i64> {
    Ratio::from_integer(s as i64) * (rc - 1) + 1
}

/// Named constituents: `spc3` (the single parity check of length 3) and
/// `utility` (the 4x12 check matrix with three 4-column blocks used on the
/// utility graph).
pub fn builtin_constituent(name: &str) -> Option<(BinaryMatrix, BlockStructure)> {
    let (rows, l): (&[&str], usize) = match name {
        "spc3" => (&["111"], 1),
        "utility" => (
            &["100011101100", "010001110110", "001010110011", "000111011001"],
            4,
        ),
        _ => return None,
    };
    let h = BinaryMatrix::from_bit_strings(rows).expect("valid built-in matrix");
    Some((h, BlockStructure { l, c: 3 }))
}
