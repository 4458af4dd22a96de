use metice::crystal::*;
use metice::lattice::{boundary_from_partition, enumerate_states, lambda_plus_rho, sample_state};
use metice::metaplectic::{covers_mod, lattice_and_cosets, CoverParams};
use metice::scalar::gauss_eval;
use metice::Scalar;

const NORMALIZED: Normalization = Normalization::Normalized;

/// All GT patterns with the given top row, counted row by row without the
/// library's enumerator.
fn count_patterns(top: &[i64], strict: bool) -> usize {
    if top.len() <= 1 {
        return 1;
    }
    let mut total = 0;
    let mut row = vec![0i64; top.len() - 1];
    fn fill(top: &[i64], row: &mut Vec<i64>, k: usize, strict: bool, total: &mut usize) {
        if k == row.len() {
            if !strict || row.windows(2).all(|w| w[0] > w[1]) {
                *total += count_patterns(row, strict);
            }
            return;
        }
        for x in top[k + 1]..=top[k] {
            row[k] = x;
            fill(top, row, k + 1, strict, total);
        }
    }
    fill(top, &mut row, 0, strict, &mut total);
    total
}

fn example_node() -> CrystalNode {
    CrystalNode { r: 3, m: vec![0, 2, 1] }
}

fn example_pattern() -> GtPattern {
    GtPattern::new(vec![vec![4, 3, 0], vec![4, 2], vec![2]]).unwrap()
}

#[test]
fn example_node_is_enumerated() {
    let nodes = crystal_enumerate(&[2, 2, 0], 3).unwrap();
    assert!(nodes.contains(&example_node()));
    assert_eq!(long_word(3), vec![2, 1, 2]);
    assert_eq!(positive_roots(3), vec![(1, 2), (1, 3), (2, 3)]);
}

#[test]
fn rank_two_zero_weight_nodes() {
    let nodes = crystal_enumerate(&[0, 0], 2).unwrap();
    let m: Vec<Vec<i64>> = nodes.iter().map(|n| n.m.clone()).collect();
    assert_eq!(m, vec![vec![0], vec![1]]);
}

#[test]
fn node_counts_match_pattern_counts() {
    for lambda in [vec![0, 0], vec![3, 1], vec![2, 2, 0], vec![3, 1, 0], vec![2, 1, 1, 0]] {
        let r = lambda.len();
        let top = lambda_plus_rho(&lambda);
        let nodes = crystal_enumerate(&lambda, r).unwrap();
        assert_eq!(nodes.len(), count_patterns(&top, false), "{lambda:?}");
        let nonvanishing = nodes
            .iter()
            .filter(|n| !node_weight(n, &lambda, 1, NORMALIZED).is_zero())
            .count();
        assert_eq!(nonvanishing, count_patterns(&top, true), "{lambda:?}");
    }
}

#[test]
fn example_node_weight_and_exponent() {
    let node = example_node();
    let lambda = [2, 2, 0];
    for nq in 1..=4 {
        let want = gauss_eval(3, -1, nq) * gauss_eval(2, 0, nq);
        assert_eq!(node_weight(&node, &lambda, nq, NORMALIZED), want.with_nq(nq));
    }
    assert_eq!(
        node_weight(&node, &lambda, 2, NORMALIZED),
        Scalar::gauss(1, 2) * Scalar::one_minus_v()
    );
    assert!(node_weight(&node, &lambda, 3, NORMALIZED).is_zero());
    assert_eq!(node.z_exponent(), vec![2, 1, -3]);
}

#[test]
fn example_term_lands_in_its_coset() {
    let lambda = [2, 2, 0];
    let params = CoverParams::dot(2, 3);
    let cosets = lattice_and_cosets(params);
    let i = i_lambda(&lambda, 3, 2, NORMALIZED).unwrap();
    let piece = coset_piece(&i, &[4, 3, 1], &lambda, &cosets);
    let has = piece.terms().any(|(k, _)| (0..3).map(|j| k.z_exp(j) as i64).collect::<Vec<_>>() == vec![2, 1, -3]);
    assert!(has);
    let (p, value) = whittaker_value(&lambda, &[4, 3, 1], &params, NORMALIZED).unwrap();
    assert_eq!(p, piece);
    assert_eq!(value, (Scalar::z_monomial(&[0, 2, 2]) * piece).with_nq(2));
}

#[test]
fn zero_node_and_vanishing_decorations() {
    for lambda in [vec![2, 2, 0], vec![0, 0, 0], vec![1, 0]] {
        let r = lambda.len();
        let zero = CrystalNode { r, m: vec![0; r * (r - 1) / 2] };
        let w = node_weight(&zero, &lambda, 2, NORMALIZED);
        assert!(w.is_one() || w.is_zero());
        for node in crystal_enumerate(&lambda, r).unwrap() {
            let killed = positive_roots(r).iter().any(|&(i, j)| {
                let d = decoration(&node, i, j, &lambda);
                d.boxed && d.circled
            });
            if killed {
                assert!(node_weight(&node, &lambda, 2, NORMALIZED).is_zero());
            }
        }
    }
    let zero = CrystalNode { r: 2, m: vec![0] };
    assert!(decoration(&zero, 1, 2, &[0, 0]).circled);
}

#[test]
fn rank_one_sum_is_one() {
    assert!(i_lambda(&[0], 1, 3, NORMALIZED).unwrap().is_one());
}

#[test]
fn coset_pieces_partition_the_sum() {
    for (lambda, params) in [
        (vec![2, 2, 0], CoverParams::dot(2, 3)),
        (vec![3, 1, 0], CoverParams::new(3, 2, 1, 3).unwrap()),
        (vec![1, 0], CoverParams::dot(3, 2)),
    ] {
        let nq = params.nq();
        let cosets = lattice_and_cosets(params);
        let i = i_lambda(&lambda, lambda.len(), nq, NORMALIZED).unwrap();
        let total: Scalar = cosets
            .gamma
            .iter()
            .map(|g| coset_piece(&i, g, &lambda, &cosets))
            .sum();
        assert_eq!(total.with_nq(nq), i);
    }
}

#[test]
fn cosets_off_the_sum_zero_classes_are_empty() {
    let lambda = [1, 0];
    let cosets = lattice_and_cosets(CoverParams::dot(2, 2));
    let i = i_lambda(&lambda, 2, 2, NORMALIZED).unwrap();
    // γ - w_0 λ = (1, -1) + (0, 1) has odd coordinate sum, Λ = 2ℤ²
    assert!(coset_piece(&i, &[1, 1], &lambda, &cosets).is_zero());
    assert!(coset_piece(&i, &[0, 0], &lambda, &cosets).is_zero());
}

#[test]
fn pattern_weight_matches_node_weight() {
    for lambda in [vec![2, 2, 0], vec![3, 1, 0], vec![1, 1, 0, 0]] {
        for t in gt_enumerate(&lambda_plus_rho(&lambda)) {
            for nq in 1..=3 {
                for norm in [Normalization::Normalized, Normalization::AsPrinted] {
                    let node = node_from_gt(&t);
                    assert_eq!(gt_weight(&t, nq, norm), node_weight(&node, &lambda, nq, norm), "{t:?}");
                }
            }
        }
    }
}

#[test]
fn pattern_with_equal_neighbours_vanishes() {
    let t = GtPattern::new(vec![vec![4, 3, 0], vec![3, 3], vec![3]]).unwrap();
    assert!(!t.is_strict());
    assert!(gt_weight(&t, 2, NORMALIZED).is_zero());
}

#[test]
fn interleaving_is_enforced() {
    assert!(GtPattern::new(vec![vec![4, 3, 0], vec![5, 2], vec![2]]).is_err());
    assert!(GtPattern::strict(vec![vec![4, 3, 0], vec![3, 3], vec![3]]).is_err());
}

#[test]
fn example_charges() {
    assert_eq!(charge_from_gt(&example_pattern(), 5), vec![3, 1, 4]);
    let t = GtPattern::new(vec![vec![0]]).unwrap();
    assert_eq!(charge_from_gt(&t, 1), vec![1]);
}

#[test]
fn example_pattern_node_and_state_correspond() {
    let t = example_pattern();
    assert_eq!(node_from_gt(&t), example_node());
    assert_eq!(gt_from_node(&example_node(), &[2, 2, 0]), t);
    assert_eq!(gt_from_ice(&sample_state()).unwrap(), t);
    assert_eq!(ice_from_gt(&t, 5).unwrap(), sample_state());
}

#[test]
fn rank_one_pattern_is_the_single_state() {
    let states = enumerate_states(&boundary_from_partition(&[0], 1, 1, 1).unwrap());
    assert_eq!(states.len(), 1);
    assert_eq!(gt_from_ice(&states[0]).unwrap().rows, vec![vec![0]]);
}

#[test]
fn charges_and_weights_agree_state_by_state() {
    let lambda = [2, 2, 0];
    let (r, columns) = (3usize, 5usize);
    for nq in 1..=3 {
        let sys = boundary_from_partition(&lambda, r, columns, nq).unwrap();
        for s in enumerate_states(&sys) {
            let t = gt_from_ice(&s).unwrap();
            assert_eq!(charge_from_gt(&t, columns as i64), s.left_charges_unreduced());
            let w = s.weight(nq);
            let g = gt_weight(&t, nq, NORMALIZED);
            // same coefficient once z is forgotten
            assert_eq!(w.map_z(|z| vec![0; z.len()]), g, "{t:?}");
            // and the z part is the shift of the crystal exponent
            let c = s.left_charges(nq);
            let p = node_from_gt(&t).z_exponent();
            let shift: Vec<i64> = (0..r)
                .map(|k| -(columns as i64) + k as i64 + c[k] as i64 + lambda[r - 1 - k] + p[k])
                .collect();
            assert_eq!(w, (g * Scalar::z_monomial(&shift)).with_nq(nq), "{t:?}");
        }
    }
}

#[test]
fn partition_functions_equal_crystal_pieces() {
    for p in [1, 2, 3].map(|n| CoverParams::dot(n, 3)) {
        let rep = verify_whittaker_ice(&[2, 2, 0], 5, &p, NORMALIZED).unwrap();
        assert!(rep.holds, "{p:?}");
        assert!(rep.unmatched_charges.is_empty());
    }
    for p in covers_mod(3, 2) {
        assert!(verify_whittaker_ice(&[1, 0], 3, &p, NORMALIZED).unwrap().holds, "{p:?}");
    }
    let trivial = verify_whittaker_ice(&[2, 2, 0], 5, &CoverParams::dot(1, 3), NORMALIZED).unwrap();
    assert_eq!(trivial.cases.len(), 1);
    assert_eq!(trivial.cases[0].charges, vec![1, 1, 1]);
}

#[test]
fn printed_circle_weight_breaks_the_identity() {
    let failing = covers_mod(2, 3)
        .into_iter()
        .filter(|p| !verify_whittaker_ice(&[2, 2, 0], 5, p, Normalization::AsPrinted).unwrap().holds)
        .count();
    assert!(failing > 0);
}

#[test]
fn bijections_on_small_partitions() {
    for lambda in [vec![0], vec![1, 0], vec![2, 2, 0], vec![3, 1, 0], vec![1, 1, 0, 0]] {
        let (counts, ok) = bijection_suite(&lambda).unwrap();
        assert!(ok, "{lambda:?}");
        let top = lambda_plus_rho(&lambda);
        assert_eq!(counts.patterns, count_patterns(&top, false));
        assert_eq!(counts.ice_states, count_patterns(&top, true));
    }
    let (counts, _) = bijection_suite(&[2, 2, 0]).unwrap();
    assert_eq!((counts.nodes, counts.strict_patterns), (24, 23));
}

#[test]
fn node_json_lists_long_word() {
    let j = example_node().to_json();
    assert_eq!(j["longWord"], serde_json::json!([2, 1, 2]));
    assert_eq!(j["m"]["13"], 2);
}
