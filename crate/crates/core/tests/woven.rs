mod common;

use common::*;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgc_core::block::build_graph_code;
use wgc_core::gf2::{canonical_form_poly, BinaryMatrix, BinaryPoly, BivariatePoly, PolyMatrix};
use wgc_core::hypergraph::{build_heawood, build_utility};
use wgc_core::woven::*;
use wgc_core::Error;

fn best() -> WovenConvCode {
    build_woven_conv(&build_heawood(), &hc(), &BEST).unwrap()
}

fn hs() -> [u64; 3] {
    [H1, H2, H3]
}

#[test]
fn h_wg_layout_on_heawood() {
    let code = best();
    let h = code.h_wg();
    assert_eq!((h.rows(), h.cols()), (14, 21));
    let t = [H1, H3, H2];
    let a = [0, 1, 3];
    for v in 0..7 {
        for col in 0..21 {
            let want = if col / 3 == v { p(hs()[col % 3]) } else { BinaryPoly::zero() };
            assert_eq!(h.get(v, col), &want, "top row {v} col {col}");
        }
    }
    for k in 0..7 {
        for col in 0..21 {
            let q = col % 3;
            let want = if col / 3 == (k + a[q]) % 7 { p(t[q]) } else { BinaryPoly::zero() };
            assert_eq!(h.get(7 + k, col), &want, "bottom row {k} col {col}");
        }
    }
    assert_eq!(code.rate(), Ratio::new(1, 3));
}

#[test]
fn utility_assembly_has_the_right_shape() {
    let code = build_woven_conv(&build_utility(), &hc(), &[0, 1, 2]).unwrap();
    let h = code.h_wg();
    assert_eq!((h.rows(), h.cols()), (6, 9));
    for r in 0..6 {
        let mut entries: Vec<u64> = h.row(r).iter().filter(|x| !x.is_zero()).map(|x| x.as_u64().unwrap()).collect();
        entries.sort_unstable();
        let mut want = hs().to_vec();
        want.sort_unstable();
        assert_eq!(entries, want, "row {r}");
    }
    for c in 0..9 {
        assert_eq!((0..3).filter(|&r| !h.get(r, c).is_zero()).count(), 1);
        assert_eq!((3..6).filter(|&r| !h.get(r, c).is_zero()).count(), 1);
    }
}

#[test]
fn bad_orderings_are_rejected() {
    assert!(build_woven_conv(&build_heawood(), &hc(), &[0, 0, 1]).is_err());
    assert!(build_woven_conv(&build_heawood(), &hc(), &[0, 1]).is_err());
}

#[test]
fn two_dimensional_parity_check() {
    let forms = two_dim_forms(&best()).unwrap();
    let row0: Vec<BivariatePoly> = hs().iter().map(|&x| BivariatePoly::term(p(x), 0)).collect();
    let row1 = vec![
        BivariatePoly::term(p(H1), 0),
        BivariatePoly::term(p(H3), 1),
        BivariatePoly::term(p(H2), 3),
    ];
    for j in 0..3 {
        assert_eq!(forms.h.get(0, j), &row0[j]);
        assert_eq!(forms.h.get(1, j), &row1[j]);
    }
}

#[test]
fn two_dimensional_generator_products() {
    let t = [H1, H3, H2];
    let ga = clmul(H3, t[0]);
    let gb = clmul(H2, t[0]);
    let gc = clmul(H2, t[2]);
    let gd = clmul(H1, t[2]);
    let ge = clmul(H3, t[1]);
    let gf = clmul(H1, t[1]);
    let two = |x: (u64, usize), y: (u64, usize)| {
        let mut b = BivariatePoly::term(p(x.0), x.1);
        b.add_term(&p(y.0), y.1);
        b
    };
    let want = [two((ge, 1), (gc, 3)), two((ga, 0), (gd, 3)), two((gb, 0), (gf, 1))];
    let forms = two_dim_forms(&best()).unwrap();
    for j in 0..3 {
        assert_eq!(forms.g.get(0, j), &want[j], "column {j}");
    }
}

#[test]
fn generator_annihilates_parity_check_mod_z7() {
    // Direct bivariate expansion: every coefficient of Σ_j G_j·H_ij mod Z^7 - 1.
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let code = build_woven_conv(&build_heawood(), &hc(), &perm).unwrap();
        let f = two_dim_forms(&code).unwrap();
        for i in 0..2 {
            let mut acc = [0u64; 7];
            for j in 0..3 {
                for (zg, pg) in f.g.get(0, j).terms() {
                    for (zh, ph) in f.h.get(i, j).terms() {
                        acc[(zg + zh) % 7] ^= clmul(pg.as_u64().unwrap(), ph.as_u64().unwrap());
                    }
                }
            }
            assert_eq!(acc, [0; 7], "perm {perm:?} row {i}");
        }
    }
}

#[test]
fn constant_constituent_gives_the_plain_tailbiting_check() {
    let code = build_woven_conv(&build_heawood(), &spc3(), &[0, 1, 2]).unwrap();
    let f = two_dim_forms(&code).unwrap();
    let one = BinaryPoly::one();
    let want = [
        [BivariatePoly::term(one.clone(), 0), BivariatePoly::term(one.clone(), 0), BivariatePoly::term(one.clone(), 0)],
        [BivariatePoly::term(one.clone(), 0), BivariatePoly::term(one.clone(), 1), BivariatePoly::term(one, 3)],
    ];
    for i in 0..2 {
        for j in 0..3 {
            assert_eq!(f.h.get(i, j), &want[i][j]);
        }
    }
}

#[test]
fn z_equal_one_recovers_block_column_sums() {
    let code = best();
    let h = code.h_wg();
    let at_one = two_dim_forms(&code).unwrap().h.at_z_one();
    for (half, rows) in [(0usize, 0..7), (1, 7..14)] {
        for b in 0..7 {
            for q in 0..3 {
                let mut sum = BinaryPoly::zero();
                for r in rows.clone() {
                    sum += h.get(r, 3 * b + q);
                }
                assert_eq!(&sum, at_one.get(half, q));
            }
        }
    }
}

#[test]
fn non_bipartite_graphs_have_no_two_dimensional_form() {
    let g = wgc_core::hypergraph::build_3partite_example();
    let hc4 = PolyMatrix::from_rows(vec![vec![p(1), p(1), p(1), p(1)]]).unwrap();
    let code = build_woven_conv(&g, &hc4, &[0, 1, 2, 3]).unwrap();
    assert_eq!(code.h_wg().rows(), 12);
    assert!(matches!(two_dim_forms(&code), Err(Error::Precondition(_))));
}

#[test]
fn constraint_lengths_per_ordering() {
    let want = [([0, 2, 1], 64), ([1, 0, 2], 65), ([1, 2, 0], 66)];
    for (perm, nu) in want {
        let code = build_woven_conv(&build_heawood(), &hc(), &perm).unwrap();
        let e = expanded_generator(&code).unwrap();
        assert_eq!(e.nu_raw(), 70, "{perm:?}");
        assert_eq!(e.nu_min(), nu, "{perm:?}");
        assert!(e.spans_code);
        assert!(e.minimal.same_rational_row_space(&e.raw));
    }
}

#[test]
fn identity_ordering_falls_back_to_the_kernel_basis() {
    let code = build_woven_conv(&build_heawood(), &hc(), &[0, 1, 2]).unwrap();
    assert_eq!(code.rate(), Ratio::new(8, 21));
    let e = expanded_generator(&code).unwrap();
    assert!(!e.spans_code);
    assert_eq!(e.raw.rank_over_rational_field(), 6);
    assert_eq!(e.minimal.rows(), 8);
    assert!(e.minimal.mul(&code.h_wg().transpose()).unwrap().is_zero());
    let mut degrees = e.minimal.row_degrees();
    degrees.sort_unstable();
    assert_eq!(degrees, vec![2, 3, 10, 10, 10, 10, 10, 10]);
}

#[test]
fn expanded_generator_rows_are_codewords() {
    let code = best();
    let e = expanded_generator(&code).unwrap();
    assert_eq!((e.raw.rows(), e.raw.cols()), (7, 21));
    for g in [&e.raw, &e.minimal] {
        assert!(g.mul(&code.h_wg().transpose()).unwrap().is_zero());
        for frames in [7, 14, 21, 28] {
            let tb = code.h_wg().tailbite(frames).unwrap();
            let gtb = g.tailbite_generator(frames).unwrap();
            for r in 0..gtb.rows() {
                assert!(tb.annihilates(gtb.row(r)), "L = {frames}, row {r}");
            }
        }
    }
}

#[test]
fn replacement_row_matches_the_closed_form() {
    let e = expanded_generator(&best()).unwrap();
    let g0 = [0b110, H1, H1];
    for (j, x) in e.replacement_row.iter().enumerate() {
        assert_eq!(x, &p(g0[j % 3]), "column {j}");
    }
    for i in 0..7 {
        let m = e.with_replacement(i);
        assert_eq!(m.nu(), 64);
        assert!(m.same_rational_row_space(&e.raw));
    }
}

#[test]
fn bounds_on_heawood_and_utility() {
    let r = distance_bounds(&best()).unwrap();
    assert_eq!(r.product_bound, 18);
    assert_eq!(r.improved_bound, Some(24));
    let u = build_woven_conv(&build_utility(), &hc(), &[0, 1, 2]).unwrap();
    assert_eq!(distance_bounds(&u).unwrap().product_bound, 12);
}

fn enumeration_only() -> WitnessBudget {
    WitnessBudget { node_budget: 0, ..WitnessBudget::default() }
}

#[test]
fn witness_for_the_best_ordering() {
    let code = best();
    let w = witness_search(&code, Some(32), &enumeration_only()).unwrap();
    assert_eq!(w.weight, 32);
    assert_eq!(weight(&w.codeword), 32);
    assert!(code.is_codeword(&w.codeword));
    assert!(!w.exhaustive);
    assert_eq!(orbit_multiplicity(&code, &w.codeword).unwrap(), 7);
    let bounds = distance_bounds(&code).unwrap();
    assert!(bounds.product_bound <= bounds.improved_bound.unwrap());
    assert!(bounds.improved_bound.unwrap() <= w.weight);
}

#[test]
fn witness_for_h2_h3_h1() {
    let code = build_woven_conv(&build_heawood(), &hc(), &[1, 2, 0]).unwrap();
    let w = witness_search(&code, Some(30), &enumeration_only()).unwrap();
    assert_eq!(w.weight, 30);
    assert!(code.is_codeword(&w.codeword));
    assert_eq!(orbit_multiplicity(&code, &w.codeword).unwrap(), 7);
}

#[test]
fn unmet_target_reports_best_so_far() {
    let code = best();
    let small = WitnessBudget { max_degree: 8, max_bits: 20, node_budget: 0, ..WitnessBudget::default() };
    match witness_search(&code, Some(1), &small) {
        Err(Error::BudgetExhausted { best: Some(b) }) => assert!(b >= 24),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn trellis_pass_under_a_small_budget_is_not_exhaustive() {
    let code = best();
    let b = WitnessBudget { max_degree: 10, max_bits: 22, node_budget: 20_000, ..WitnessBudget::default() };
    let w = witness_search(&code, None, &b).unwrap();
    assert!(!w.exhaustive);
    assert!(code.is_codeword(&w.codeword));
    assert_eq!(weight(&w.codeword), w.weight);
    assert!(w.weight >= 24);
}

#[test]
fn orbit_rules() {
    let code = best();
    let e = expanded_generator(&code).unwrap();
    let row = e.raw.row_vec(0);
    let n = orbit_multiplicity(&code, &row).unwrap();
    assert_eq!(n, 7);
    assert_eq!(orbit_multiplicity(&code, &z_shift(&row, 3, 2)).unwrap(), n);
    // the Z-constant sum of all rows is its own shift
    let sum: Vec<BinaryPoly> = (0..21)
        .map(|j| {
            let mut s = BinaryPoly::zero();
            for r in 0..7 {
                s += e.raw.get(r, j);
            }
            s
        })
        .collect();
    assert_eq!(orbit_multiplicity(&code, &sum).unwrap(), 1);
    let mut bad = row.clone();
    bad[0] += &BinaryPoly::one();
    assert_eq!(orbit_multiplicity(&code, &bad), Err(Error::NotCodeword));
    assert_eq!(orbit_multiplicity(&code, &vec![BinaryPoly::zero(); 21]), Err(Error::TrivialCodeword));
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

#[test]
fn encoded_frames_satisfy_the_tailbitten_checks() {
    let code = best();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for frames in [1usize, 3, 7, 12, 20] {
        let tb = code.h_wg().tailbite(frames).unwrap();
        for _ in 0..5 {
            let v = encode_stream(&code, &random_bits(&mut rng, 7 * frames), false).unwrap();
            assert_eq!(v.len(), 21 * frames);
            assert!(tb.annihilates(&pack(&v)), "L = {frames}");
        }
    }
}

#[test]
fn impulse_response_is_the_first_generator_row() {
    let code = best();
    let raw = expanded_generator(&code).unwrap().raw;
    for frames in [11usize, 16] {
        let mut info = vec![false; 7 * frames];
        info[0] = true;
        let v = encode_stream(&code, &info, false).unwrap();
        let tbg = raw.tailbite_generator(frames).unwrap();
        let got = pack(&v);
        assert_eq!(got.as_slice(), tbg.row(0), "L = {frames}");
        // read backwards in time: the code bits at time -t carry the D^t coefficients
        for t in 0..frames {
            for j in 0..21 {
                let bit = v[((frames - t) % frames) * 21 + j];
                assert_eq!(bit, raw.get(0, j).coeff(t), "t = {t}, column {j}");
            }
        }
    }
}

#[test]
fn encoder_is_linear() {
    let code = best();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let a = random_bits(&mut rng, 70);
        let b = random_bits(&mut rng, 70);
        let ab: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let (va, vb, vab) = (
            encode_stream(&code, &a, false).unwrap(),
            encode_stream(&code, &b, false).unwrap(),
            encode_stream(&code, &ab, false).unwrap(),
        );
        assert!(va.iter().zip(&vb).zip(&vab).all(|((x, y), z)| (x ^ y) == *z));
    }
}

#[test]
fn encoder_frame_rules() {
    let code = best();
    assert_eq!(encode_stream(&code, &[false; 21], false).unwrap(), vec![false; 63]);
    assert!(encode_stream(&code, &[], false).unwrap().is_empty());
    assert!(matches!(encode_stream(&code, &[true; 10], false), Err(Error::InvalidArgument(_))));
    let padded = encode_stream(&code, &[true; 10], true).unwrap();
    let mut explicit = vec![true; 10];
    explicit.resize(14, false);
    assert_eq!(padded, encode_stream(&code, &explicit, false).unwrap());
}

#[test]
fn degree_zero_constituent_is_the_graph_code() {
    let spc = BinaryMatrix::from_bit_strings(&["111"]).unwrap();
    for g in [build_heawood(), build_utility()] {
        let woven = build_woven_conv(&g, &spc3(), &[0, 1, 2]).unwrap();
        let plain = build_graph_code(&g, &spc).unwrap();
        let a = canonical_form_poly(woven.h_wg()).unwrap();
        let b = canonical_form_poly(&PolyMatrix::from_binary(plain.h())).unwrap();
        assert_eq!(a, b);
    }
}
