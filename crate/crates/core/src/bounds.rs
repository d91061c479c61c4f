//! Asymptotic distance bounds: the VG-type bound for woven graph codes, the
//! Costello-type free-distance bound, and the finite counterexample to
//! independence of the constituent parity checks.
//!
//! Roots are found by bisection on verified brackets. `F̂(δ)` is the maximum
//! over `γ ∈ (δ, 1]` of
//! `(1-s)h(δ) - (1-R)γ + sγ·h(δ/γ)`, attained at `γ = min{1, δ/δ*}` with
//! `δ* = 1 - 2^{(R-1)/s}`; so the plain VG exponent `h(δ)+R-1` applies for
//! `δ ≥ δ*` and the graph-limited branch below it.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::par::{self, Exec};

const BISECTION_STEPS: usize = 200;

/// Acceptance thresholds for a bisection root.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub value: f64,
    pub arg: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { value: 1e-12, arg: 1e-10 }
    }
}

fn domain(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(what()))
    }
}

fn check_rate(r: f64) -> Result<()> {
    domain(r > 0.0 && r < 1.0, || format!("rate {r} outside (0, 1)"))
}

fn check_s(s: usize) -> Result<()> {
    domain(s >= 2, || format!("s = {s}; need at least 2 partitions"))
}

pub fn binary_entropy(x: f64) -> Result<f64> {
    domain((0.0..=1.0).contains(&x), || format!("entropy argument {x} outside [0, 1]"))?;
    Ok(entropy(x))
}

fn entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

/// Root of an increasing-through-zero `f` on `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: Tolerance) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Bracketing(format!("f({lo}) = {flo}, f({hi}) = {fhi}")));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let v = f(root);
    if v.abs() > tol.value && hi - lo > tol.arg {
        return Err(Error::Bracketing(format!("bisection stalled at {root} with f = {v}")));
    }
    Ok(root)
}

/// Solution of `h(δ) = 1 - R` in `(0, 1/2]`; `R = 0` gives `1/2`.
pub fn vg_delta(r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.5);
    }
    check_rate(r)?;
    bisect(|d| entropy(d) + r - 1.0, f64::MIN_POSITIVE, 0.5, Tolerance::default())
}

/// `1 - 2^{(R-1)/s}`, where the optimal `γ` reaches 1.
pub fn delta_star(r: f64, s: usize) -> f64 {
    1.0 - ((r - 1.0) / s as f64).exp2()
}

pub fn fhat_vg_branch(delta: f64, r: f64) -> f64 {
    entropy(delta) + r - 1.0
}

pub fn fhat_graph_branch(delta: f64, r: f64, s: usize) -> f64 {
    let s = s as f64;
    (1.0 - s) * entropy(delta) - delta * s * (((1.0 - r) / s).exp2() - 1.0).log2()
}

/// Optimal `γ` of the VG-type exponent.
pub fn gamma_opt(delta: f64, r: f64, s: usize) -> f64 {
    (delta / delta_star(r, s)).min(1.0)
}

pub fn fhat(delta: f64, r: f64, s: usize) -> Result<f64> {
    domain(delta > 0.0 && delta < 1.0, || format!("delta {delta} outside (0, 1)"))?;
    check_rate(r)?;
    check_s(s)?;
    Ok(if delta >= delta_star(r, s) { fhat_vg_branch(delta, r) } else { fhat_graph_branch(delta, r, s) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Vg,
    GraphLimited,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Vg => "vg",
            Regime::GraphLimited => "graph-limited",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPoint {
    pub rate: f64,
    pub s: usize,
    pub delta: f64,
    pub regime: Regime,
}

/// Relative distance guaranteed for woven graph codes of rate `R` over `s`
/// partitions. The VG regime holds when `R ≥ 1 + s·log₂(1 - δ_VG(R))`
/// (equality included).
pub fn woven_vg_bound(r: f64, s: usize) -> Result<BoundPoint> {
    woven_vg_bound_with(r, s, Tolerance::default())
}

pub fn woven_vg_bound_with(r: f64, s: usize, tol: Tolerance) -> Result<BoundPoint> {
    check_rate(r)?;
    check_s(s)?;
    let dv = vg_delta(r)?;
    let threshold = 1.0 + s as f64 * (1.0 - dv).log2();
    if r >= threshold - tol.value {
        return Ok(BoundPoint { rate: r, s, delta: dv, regime: Regime::Vg });
    }
    let delta = bisect(|d| fhat_graph_branch(d, r, s), f64::MIN_POSITIVE, delta_star(r, s), tol)?;
    Ok(BoundPoint { rate: r, s, delta, regime: Regime::GraphLimited })
}

/// `-R / log₂(2^{1-R} - 1)`; tends to 1/2 as `R → 0`.
pub fn costello_delta(r: f64) -> Result<f64> {
    check_rate(r)?;
    Ok(-r / ((1.0 - r).exp2() - 1.0).log2())
}

/// `(1+μ)h(δ/(1+μ)) - 1 - μ + μR`.
pub fn costello_exponent(delta: f64, mu: f64, r: f64) -> f64 {
    (1.0 + mu) * entropy(delta / (1.0 + mu)) - 1.0 - mu + mu * r
}

/// `(γ_opt, μ_opt)` of the free-distance derivation.
pub fn mu_gamma_optimizers(delta: f64, r: f64, s: usize) -> Result<(f64, f64)> {
    domain(delta > 0.0 && delta < 1.0, || format!("delta {delta} outside (0, 1)"))?;
    check_rate(r)?;
    check_s(s)?;
    let mu = delta / (1.0 - (r - 1.0).exp2()) - 1.0;
    if mu < 0.0 {
        return Err(Error::Domain(format!("mu_opt = {mu} < 0: delta {delta} is below 1 - 2^(R-1)")));
    }
    let x = (1.0 + mu * (1.0 - r)) / (s as f64 * (1.0 + mu));
    let gamma = (delta / ((1.0 + mu) * (1.0 - (-x).exp2()))).min(1.0);
    Ok((gamma, mu))
}

/// `R_VG(δ) - R_wg(δ)`: how much rate the woven bound gives up at distance `δ`.
pub fn rate_gap(delta: f64, s: usize) -> Result<f64> {
    domain(delta > 0.0 && delta < 0.5, || format!("delta {delta} outside (0, 1/2)"))?;
    check_s(s)?;
    let r_vg = 1.0 - entropy(delta);
    let f = |r: f64| delta - woven_vg_bound(r, s).map(|p| p.delta).unwrap_or(f64::NAN);
    // f ≥ 0 at R_VG(δ), with equality when that rate is in the VG regime
    let r_wg = if f(r_vg) <= Tolerance::default().value { r_vg } else { bisect(f, 1e-12, r_vg, Tolerance::default())? };
    Ok(r_vg - r_wg)
}

fn weight_one_checks(rows: [[bool; 2]; 2], x: [bool; 2]) -> bool {
    rows.iter().all(|h| (h[0] & x[0]) ^ (h[1] & x[1]) == false)
}

fn permute(h: [bool; 2], swap: bool) -> [bool; 2] {
    if swap {
        [h[1], h[0]]
    } else {
        h
    }
}

/// `P(x·H_wgᵀ = 0)` for a single constituent (`n = 1`, `c = 2`, one check)
/// whose two partitions use the same random row (with a random column
/// permutation on the second) or two independent permuted rows.
pub fn remark_probability(x: [bool; 2], identical: bool) -> Ratio<i64> {
    let rows: Vec<[bool; 2]> = (0..4).map(|m| [m & 1 == 1, m & 2 == 2]).collect();
    let (mut hits, mut total) = (0i64, 0i64);
    if identical {
        for &h in &rows {
            for swap in [false, true] {
                total += 1;
                hits += i64::from(weight_one_checks([h, permute(h, swap)], x));
            }
        }
    } else {
        for &h1 in &rows {
            for s1 in [false, true] {
                for &h2 in &rows {
                    for s2 in [false, true] {
                        total += 1;
                        hits += i64::from(weight_one_checks([permute(h1, s1), permute(h2, s2)], x));
                    }
                }
            }
        }
    }
    Ratio::new(hits, total)
}

/// Weight-1 probabilities `(identical, independent)`, averaged over both
/// weight-1 vectors.
pub fn remark_counterexample() -> (Ratio<i64>, Ratio<i64>) {
    let avg = |identical| {
        (remark_probability([true, false], identical) + remark_probability([false, true], identical)) / 2
    };
    (avg(true), avg(false))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Vg,
    Costello,
}

/// Decimal with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn grid(step: f64) -> Vec<f64> {
    (1..).map(|k| k as f64 * step).take_while(|&r| r < 1.0 - 1e-12).collect()
}

/// CSV of the bound curves. Point failures become rows with an `error:`
/// field; the sweep never aborts on them.
pub fn emit_curves(s_list: &[usize], step: f64, kind: CurveKind) -> Result<String> {
    domain(step > 0.0 && step < 1.0, || format!("grid step {step} outside (0, 1)"))?;
    let rates = grid(step);
    let mut out = String::new();
    match kind {
        CurveKind::Vg => {
            out.push_str("s,R,delta,regime\n");
            let points: Vec<(usize, f64)> = s_list.iter().flat_map(|&s| rates.iter().map(move |&r| (s, r))).collect();
            let rows = par::map_slice(Exec::default(), &points, |&(s, r)| match woven_vg_bound(r, s) {
                Ok(p) => format!("{s},{},{},{}", sig10(r), sig10(p.delta), p.regime.as_str()),
                Err(e) => format!("{s},{},,error: {e}", sig10(r)),
            });
            for row in rows {
                let _ = writeln!(out, "{row}");
            }
        }
        CurveKind::Costello => {
            out.push_str("R,delta\n");
            for r in rates {
                match costello_delta(r) {
                    Ok(d) => writeln!(out, "{},{}", sig10(r), sig10(d)),
                    Err(e) => writeln!(out, "{},error: {e}", sig10(r)),
                }
                .expect("writing to a string");
            }
        }
    }
    Ok(out)
}
