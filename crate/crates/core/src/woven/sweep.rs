//! All orderings of the constituent columns on the right-hand partition.

use std::fmt::Write as _;

use super::{build_woven_conv, distance_bounds, orbit_multiplicity, witness_search, WitnessBudget};
use crate::error::Result;
use crate::gf2::{canonical_form_poly, CanonicalForm, PolyMatrix};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub perm: Vec<usize>,
    pub nu_raw: usize,
    pub nu_min: usize,
    pub product_bound: Option<u32>,
    pub improved_bound: Option<u32>,
    pub witness: Option<u32>,
    pub exhaustive: bool,
    pub orbit: Option<usize>,
    /// Earlier row whose H_wg(D) is the same up to row and column permutations.
    pub equivalent_to: Option<usize>,
}

fn permutations(c: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..c).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..c).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..c).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// One row per permutation, in lexicographic order. Each row's witness runs
/// under the same `budget`.
pub fn permutation_sweep(g: &Hypergraph, hc: &PolyMatrix, budget: &WitnessBudget) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let mut forms: Vec<Option<CanonicalForm>> = Vec::new();
    for perm in permutations(hc.cols()) {
        let code = build_woven_conv(g, hc, &perm)?;
        let expanded = code.expanded()?;
        let bounds = distance_bounds(&code).ok();
        let witness = witness_search(&code, None, budget).ok();
        let orbit = witness.as_ref().and_then(|w| orbit_multiplicity(&code, &w.codeword).ok());
        let form = canonical_form_poly(code.h_wg()).ok();
        let equivalent_to = form.as_ref().and_then(|f| forms.iter().position(|o| o.as_ref() == Some(f)));
        forms.push(form);
        rows.push(SweepRow {
            perm,
            nu_raw: expanded.nu_raw(),
            nu_min: expanded.nu_min(),
            product_bound: bounds.as_ref().map(|b| b.product_bound),
            improved_bound: bounds.as_ref().and_then(|b| b.improved_bound),
            witness: witness.as_ref().map(|w| w.weight),
            exhaustive: witness.as_ref().is_some_and(|w| w.exhaustive),
            orbit,
            equivalent_to,
        });
    }
    Ok(rows)
}

fn perm_label(perm: &[usize]) -> String {
    perm.iter().map(|p| format!("h{}", p + 1)).collect::<Vec<_>>().join(" ")
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |x: Option<String>| x.unwrap_or_default();
    let mut s = String::from("perm,nu_raw,nu_min,product_bound,improved_bound,witness,orbit,equivalent_to\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            perm_label(&r.perm),
            r.nu_raw,
            r.nu_min,
            opt(r.product_bound.map(|x| x.to_string())),
            opt(r.improved_bound.map(|x| x.to_string())),
            opt(r.witness.map(|x| if r.exhaustive { x.to_string() } else { format!("<={x}") })),
            opt(r.orbit.map(|x| x.to_string())),
            opt(r.equivalent_to.map(|i| perm_label(&rows[i].perm))),
        );
    }
    s
}
