//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{flatten_reversed, hc, pack, spc3, HEAWOOD_INCIDENCE, THREE_PARTITE_INCIDENCE};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgc_core::block::{
    build_graph_code, build_woven_block, builtin_constituent, block_distance, theorem2_bound, rate_bound, Assignment,
    LinearBlockCode,
};
use wgc_core::bounds::{costello_delta, fhat, rate_gap, remark_counterexample, vg_delta, woven_vg_bound};
use wgc_core::conv::{self, block_distance_conv, free_distance, rate_half_subcodes, tb_block_code, FreeDistanceLimit};
use wgc_core::gf2::{canonical_form_poly, permutation_equivalent, BinaryMatrix, PolyMatrix};
use wgc_core::hypergraph::{build_3partite_example, build_heawood, build_utility};
use wgc_core::woven::{
    build_woven_conv, distance_bounds, encode_stream, orbit_multiplicity, witness_search, WitnessBudget,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn masks(m: &BinaryMatrix) -> Vec<u64> {
    (0..m.rows()).map(|r| m.row_ones(r).fold(0u64, |a, c| a | 1 << c)).collect()
}

/// (dimension, minimum nonzero weight) over all `2^n` words.
fn brute(h: &BinaryMatrix) -> (usize, u32) {
    let rows = masks(h);
    let (mut count, mut best) = (0usize, u32::MAX);
    for v in 1u64..1 << h.cols() {
        if rows.iter().all(|r| (r & v).count_ones() % 2 == 0) {
            count += 1;
            best = best.min(v.count_ones());
        }
    }
    ((count + 1).trailing_zeros() as usize, best)
}

/// Kernel basis of check masks by elimination.
fn kernel(rows: &[u64], n: usize) -> Vec<u64> {
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    for col in 0..n {
        let r = pivots.len();
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> col & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        pivots.push(col);
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| pivots.iter().enumerate().fold(1u64 << f, |v, (i, &p)| v | ((rows[i] >> f & 1) << p)))
        .collect()
}

fn span_min(basis: &[u64]) -> u32 {
    let (mut x, mut best) = (0u64, u32::MAX);
    for i in 1u64..1 << basis.len() {
        x ^= basis[i.trailing_zeros() as usize];
        best = best.min(x.count_ones());
    }
    best
}

fn heawood_structure() -> Outcome {
    let g = build_heawood();
    let h = g.incidence_matrix();
    ensure(h == BinaryMatrix::from_bit_strings(&HEAWOOD_INCIDENCE).unwrap(), || "incidence differs from the printed matrix".into())?;
    ensure(g.girth() == Some(6), || format!("girth {:?}", g.girth()))?;
    ensure(h.rank() == 13, || format!("rank {}", h.rank()))?;
    let code = build_graph_code(&g, &spc3_matrix()).map_err(|e| e.to_string())?;
    let (k, d) = brute(code.h());
    ensure((code.n(), code.k(), k, d) == (21, 8, 8, 6), || format!("({}, {}) brute k {k} d {d}", code.n(), code.k()))?;
    Ok("(21,8), girth 6, rank 13, d_min 6".into())
}

fn spc3_matrix() -> BinaryMatrix {
    BinaryMatrix::from_bit_strings(&["111"]).unwrap()
}

fn hypergraph_example() -> Outcome {
    let g = build_3partite_example();
    ensure(g.incidence_matrix() == BinaryMatrix::from_bit_strings(&THREE_PARTITE_INCIDENCE).unwrap(), || "incidence differs".into())?;
    ensure(g.girth() == Some(2), || format!("girth {:?}", g.girth()))?;
    let sd = g.sd_girth(2).map_err(|e| e.to_string())?;
    ensure(sd == Some(6), || format!("(3,2)-girth {sd:?}"))?;
    let spc4 = BinaryMatrix::from_bit_strings(&["1111"]).unwrap();
    let code = build_graph_code(&g, &spc4).map_err(|e| e.to_string())?;
    let (k, d) = brute(code.h());
    ensure((code.n(), code.k(), k, d) == (16, 6, 6, 6), || format!("({}, {}) d {d}", code.n(), code.k()))?;
    let bound = rate_bound(3, Ratio::new(3, 4));
    ensure(code.rate() == Ratio::new(3, 8) && bound == Ratio::new(1, 4), || format!("rate {} bound {bound}", code.rate()))?;
    Ok("(16,6), girth 2, (3,2)-girth 6, d_min 6, rate 3/8 >= 1/4".into())
}

fn woven_block_example() -> Outcome {
    let g = build_utility();
    let (hc, bs) = builtin_constituent("utility").unwrap();
    let c = LinearBlockCode::from_parity_check(hc.clone());
    let mut a = Assignment::uniform(&g, &[0, 1, 2]);
    a.order[1] = vec![vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]];
    let woven = build_woven_block(&g, &c, bs, &a).map_err(|e| e.to_string())?;
    // printed layout: (row block, column block, constituent block)
    let layout = [
        (0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 3, 0), (1, 4, 1), (1, 5, 2), (2, 6, 0), (2, 7, 1), (2, 8, 2),
        (3, 0, 1), (3, 4, 2), (3, 8, 0), (4, 2, 0), (4, 3, 1), (4, 7, 2), (5, 1, 2), (5, 5, 0), (5, 6, 1),
    ];
    let mut printed = BinaryMatrix::zeros(24, 36);
    for (rb, cb, k) in layout {
        for i in 0..4 {
            for x in 0..4 {
                printed.put(rb * 4 + i, cb * 4 + x, hc.bit(i, k * 4 + x));
            }
        }
    }
    ensure(woven.h_wg() == &printed, || "H_wg differs from the printed matrix".into())?;
    let basis = kernel(&masks(woven.h_wg()), 36);
    let d = span_min(&basis);
    ensure((woven.code.n(), woven.code.k(), basis.len(), d) == (36, 12, 12, 10), || {
        format!("({}, {}) d {d}", woven.code.n(), woven.code.k())
    })?;
    let d_block = block_distance(&c, bs).map_err(|e| e.to_string())?;
    match theorem2_bound(&g, &c, bs) {
        Ok(9) => Ok("(36,12), d_min 10, bound 9".into()),
        Ok(b) => Err(format!("(36,12), d_min 10 hold; bound {b}, expected 9")),
        Err(e) => Err(format!("(36,12), d_min 10 hold; bound 9 unavailable (constituent d_block = {d_block}): {e}")),
    }
}

fn tb_bridge() -> Outcome {
    let parent = conv::builtin_constituent("tb-parent").unwrap();
    let h = parent.h().tailbite(7).map_err(|e| e.to_string())?;
    let printed = BinaryMatrix::from_bit_strings(&HEAWOOD_INCIDENCE).unwrap();
    ensure(permutation_equivalent(&h, &printed).map_err(|e| e.to_string())?, || "not permutation-equivalent".into())?;
    let tb = tb_block_code(&parent, 7).map_err(|e| e.to_string())?;
    let d = span_min(&masks(&tb.generator()));
    ensure((tb.n(), tb.k(), d) == (21, 7, 6), || format!("({}, {}) d {d}", tb.n(), tb.k()))?;
    Ok("canonical forms equal, (21,7) d_min 6".into())
}

fn constituent() -> Outcome {
    let c = conv::builtin_constituent("heawood").unwrap();
    ensure(c.g().mul(&c.h().transpose()).map_err(|e| e.to_string())?.is_zero(), || "G·Hᵀ ≠ 0".into())?;
    let d = free_distance(&c, FreeDistanceLimit::default()).map_err(|e| e.to_string())?;
    let db = block_distance_conv(&c);
    ensure((c.nu(), d, db) == (5, 6, 2), || format!("nu {} d_free {d} d_block {db}", c.nu()))?;
    let subs = rate_half_subcodes(&c).map_err(|e| e.to_string())?;
    let ds: Vec<u32> = subs.iter().map(|s| free_distance(&s.code, FreeDistanceLimit::default()).unwrap()).collect();
    ensure(ds.iter().min() == Some(&8), || format!("subcode free distances {ds:?}"))?;
    Ok(format!("nu 5, d_free 6, d_block 2, subcodes {ds:?}"))
}

fn woven_pipeline() -> Outcome {
    let g = build_heawood();
    let mut seen = Vec::new();
    for (perm, raw, min) in [([0, 2, 1], Some(70), 64), ([1, 0, 2], None, 65), ([1, 2, 0], None, 66)] {
        let code = build_woven_conv(&g, &hc(), &perm).map_err(|e| e.to_string())?;
        let ex = code.expanded().map_err(|e| e.to_string())?;
        ensure(raw.map_or(true, |r| ex.nu_raw() == r) && ex.nu_min() == min, || {
            format!("{perm:?}: nu raw {} min {}", ex.nu_raw(), ex.nu_min())
        })?;
        seen.push(ex.nu_min());
    }
    let best = build_woven_conv(&g, &hc(), &[0, 2, 1]).unwrap();
    let r = distance_bounds(&best).map_err(|e| e.to_string())?;
    ensure((r.product_bound, r.improved_bound) == (18, Some(24)), || format!("bounds {} {:?}", r.product_bound, r.improved_bound))?;
    Ok(format!("nu raw 70, minimal {seen:?}, bounds 18/24"))
}

fn witnesses() -> Outcome {
    let g = build_heawood();
    let budget = WitnessBudget::default();
    let mut out = Vec::new();
    for (perm, target) in [([0, 2, 1], 32), ([1, 2, 0], 30)] {
        let code = build_woven_conv(&g, &hc(), &perm).map_err(|e| e.to_string())?;
        let w = witness_search(&code, Some(target), &budget).map_err(|e| format!("{perm:?}: {e}"))?;
        ensure(w.weight == target && code.is_codeword(&w.codeword), || format!("{perm:?}: weight {}", w.weight))?;
        let orbit = orbit_multiplicity(&code, &w.codeword).map_err(|e| e.to_string())?;
        ensure(orbit == 7, || format!("{perm:?}: orbit {orbit}"))?;
        out.push(format!("{perm:?} weight {} orbit {orbit}{}", w.weight, if w.exhaustive { " (exact)" } else { "" }));
    }
    Ok(out.join(", "))
}

fn encoder() -> Outcome {
    let code = build_woven_conv(&build_heawood(), &hc(), &[0, 2, 1]).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checks: HashMap<usize, BinaryMatrix> = HashMap::new();
    for trial in 0..1000 {
        let frames = rng.gen_range(1..=20);
        let info: Vec<bool> = (0..7 * frames).map(|_| rng.gen()).collect();
        let v = encode_stream(&code, &info, false).map_err(|e| e.to_string())?;
        let tb = checks.entry(frames).or_insert_with(|| code.h_wg().tailbite(frames).unwrap());
        ensure(tb.annihilates(&pack(&v)), || format!("trial {trial}: nonzero syndrome at L = {frames}"))?;
    }
    let raw = &code.expanded().map_err(|e| e.to_string())?.raw;
    let frames = 16;
    for i in 0..7 {
        let mut info = vec![false; 7 * frames];
        info[i] = true;
        let v = encode_stream(&code, &info, false).map_err(|e| e.to_string())?;
        ensure(pack(&v) == flatten_reversed(&raw.row_vec(i), frames), || format!("impulse response {i} differs"))?;
    }
    for _ in 0..100 {
        let a: Vec<bool> = (0..70).map(|_| rng.gen()).collect();
        let b: Vec<bool> = (0..70).map(|_| rng.gen()).collect();
        let ab: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let (va, vb, vab) =
            (encode_stream(&code, &a, false).unwrap(), encode_stream(&code, &b, false).unwrap(), encode_stream(&code, &ab, false).unwrap());
        ensure(va.iter().zip(&vb).zip(&vab).all(|((x, y), z)| (x ^ y) == *z), || "not linear".into())?;
    }
    Ok("1000 frames in the code, 7 impulse responses, linear".into())
}

fn vg_oracle(r: f64) -> f64 {
    let h = |x: f64| -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
    let (mut lo, mut hi) = (1e-15, 0.5);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if h(m) < 1.0 - r {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Root of `-δ·log₂(2^{1-R} - 1) = R` by bisection.
fn costello_oracle(r: f64) -> f64 {
    let f = |d: f64| -d * ((1.0 - r).exp2() - 1.0).log2() - r;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

fn bounds() -> Outcome {
    let close = |x: f64, oracle: f64, printed: f64| (x - oracle).abs() < 1e-9 && (x - printed).abs() < 1e-3;
    let vg = vg_delta(1.0 / 3.0).map_err(|e| e.to_string())?;
    let c3 = costello_delta(1.0 / 3.0).map_err(|e| e.to_string())?;
    let c2 = costello_delta(0.5).map_err(|e| e.to_string())?;
    ensure(close(vg, vg_oracle(1.0 / 3.0), 0.1740), || format!("vg(1/3) = {vg}"))?;
    ensure(close(c3, costello_oracle(1.0 / 3.0), 0.4343), || format!("costello(1/3) = {c3}"))?;
    ensure(close(c2, costello_oracle(0.5), 0.3932), || format!("costello(1/2) = {c2}"))?;
    let s_list = [2, 3, 4, 10];
    let mut worst: f64 = 0.0;
    for s in s_list {
        for k in 1..100 {
            let r = k as f64 * 0.01;
            let p = woven_vg_bound(r, s).map_err(|e| e.to_string())?;
            worst = worst.max(fhat(p.delta, r, s).map_err(|e| e.to_string())?.abs());
        }
    }
    ensure(worst < 1e-9, || format!("max |F̂| = {worst:e}"))?;
    for k in 1..45 {
        let delta = k as f64 * 0.01;
        let gaps: Vec<f64> = s_list.iter().map(|&s| rate_gap(delta, s).unwrap()).collect();
        ensure(gaps.windows(2).all(|w| w[0] >= w[1] - 1e-9), || format!("gap not monotone at {delta}: {gaps:?}"))?;
    }
    Ok(format!("vg {vg:.4}, costello {c3:.4}/{c2:.4}, max |F̂| {worst:.1e}"))
}

fn remark() -> Outcome {
    let (same, indep) = remark_counterexample();
    ensure((same, indep) == (Ratio::new(3, 8), Ratio::new(1, 4)), || format!("{same} and {indep}"))?;
    Ok("3/8 identical, 1/4 independent".into())
}

fn specialization() -> Outcome {
    for (name, g) in [("heawood", build_heawood()), ("utility", build_utility())] {
        let woven = build_woven_conv(&g, &spc3(), &[0, 1, 2]).map_err(|e| e.to_string())?;
        let plain = build_graph_code(&g, &spc3_matrix()).map_err(|e| e.to_string())?;
        let a = canonical_form_poly(woven.h_wg()).map_err(|e| e.to_string())?;
        let b = canonical_form_poly(&PolyMatrix::from_binary(plain.h())).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name}: canonical forms differ"))?;
    }
    Ok("heawood and utility reduce to their graph codes".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("heawood structure", heawood_structure),
        ("hypergraph example", hypergraph_example),
        ("woven block example", woven_block_example),
        ("tailbiting bridge", tb_bridge),
        ("constituent code", constituent),
        ("woven convolutional pipeline", woven_pipeline),
        ("distance witnesses", witnesses),
        ("encoder", encoder),
        ("bounds", bounds),
        ("remark probabilities", remark),
        ("degree-zero specialization", specialization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = fmt(start.elapsed());
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{t}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{t}]: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn fmt(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
