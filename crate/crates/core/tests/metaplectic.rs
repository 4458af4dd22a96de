use std::collections::BTreeSet;

use metice::metaplectic::*;
use metice::scalar::frac_eq;
use metice::{Frac, Scalar};
use proptest::prelude::*;

/// Number of lattice points of `{x : Bx ≡ 0 mod n}` in `[0, n)^r`, by
/// evaluating the form entrywise.
fn box_hits(n: u32, b: i64, c: i64, r: usize) -> u64 {
    let n = n as i64;
    let mut hits = 0;
    let total = n.pow(r as u32);
    for code in 0..total {
        let x: Vec<i64> = (0..r).map(|k| (code / n.pow(k as u32)) % n).collect();
        let ok = (0..r).all(|i| {
            let s: i64 = (0..r).map(|j| if i == j { c * x[j] } else { (c - b) * x[j] }).sum();
            s.rem_euclid(n) == 0
        });
        hits += ok as u64;
    }
    hits
}

#[test]
fn dot_product_lattice_is_scaled_standard() {
    for n in 1..=4 {
        for r in 1..=3 {
            let d = lattice_and_cosets(CoverParams::dot(n, r));
            assert_eq!(d.index, (n as u64).pow(r as u32));
            assert_eq!(d.steps(), vec![n as i64; r]);
            assert_eq!(d.gamma.len() as u64, d.index);
        }
    }
}

#[test]
fn trivial_cover_has_one_coset() {
    for r in 1..=3 {
        let d = lattice_and_cosets(CoverParams::new(1, 1, 1, r).unwrap());
        assert_eq!(d.index, 1);
        assert_eq!(d.gamma, vec![vec![0; r]]);
    }
}

#[test]
fn degenerate_form_index_matches_scan() {
    let p = CoverParams::new(2, 2, 2, 2).unwrap();
    let d = lattice_and_cosets(p);
    assert_eq!(d.index, 4 / box_hits(2, 2, 2, 2));
    assert_eq!(d.index, brute_force_index(p));
    for v in &d.basis {
        assert!(p.form().in_lattice(v, 2));
    }
}

#[test]
fn lattice_index_matches_scan_for_small_covers() {
    for n in 1..=4u32 {
        for b in 0..n as i64 {
            for c in 0..2 * n as i64 {
                for r in 1..=3 {
                    let p = CoverParams::new(n, b, c, r).unwrap();
                    let d = lattice_and_cosets(p);
                    let want = (n as u64).pow(r as u32) / box_hits(n, b, c, r);
                    assert_eq!(d.index, want, "{p:?}");
                    assert_eq!(d.gamma.len() as u64, want, "{p:?}");
                    let distinct: BTreeSet<_> = d.gamma.iter().map(|g| d.reduce(g)).collect();
                    assert_eq!(distinct.len() as u64, want, "{p:?}");
                }
            }
        }
    }
}

#[test]
fn sl_coset_count_examples() {
    assert_eq!(sl_coset_count(2, 1, 3), Ok(4));
    for n in 1..=6 {
        for r in 2..=4 {
            assert_eq!(sl_coset_count(n, n as i64, r), Ok(1));
        }
    }
    for b in 0..3 {
        assert_eq!(sl_coset_count(1, b, 3), Ok(1));
    }
    assert!(sl_coset_count(3, 1, 1).is_err());
}

/// `|Y / Λ_Y|` for the sum-zero coweights `Y`, spanned by the simple
/// coroots, with `Λ_Y = {x ∈ Y : B(x, y) ∈ nℤ for all y ∈ Y}`; counted by
/// scanning coroot coordinates in `[0, n)^{r-1}`.
fn sl_index(n: u32, b: i64, r: usize) -> u64 {
    let f = bilinear_form(b, b, r);
    let roots: Vec<Vec<i64>> = (1..r).map(|i| simple_coroot(i, r)).collect();
    let n = n as i64;
    let total = n.pow(r as u32 - 1);
    let mut hits = 0;
    for code in 0..total {
        let mut x = vec![0i64; r];
        for (k, a) in roots.iter().enumerate() {
            let t = (code / n.pow(k as u32)) % n;
            for (xi, ai) in x.iter_mut().zip(a) {
                *xi += t * ai;
            }
        }
        hits += roots.iter().all(|a| f.eval(&x, a).rem_euclid(n) == 0) as i64;
    }
    (total / hits) as u64
}

#[test]
fn sl_coset_count_matches_scan() {
    for n in 1..=6u32 {
        for b in 1..=n as i64 {
            for r in 2..=4 {
                assert_eq!(sl_coset_count(n, b, r), Ok(sl_index(n, b, r)), "n={n} b={b} r={r}");
            }
        }
    }
}

#[test]
fn n_q_divides_n() {
    for n in 1..=12u32 {
        assert_eq!(n_q(n, 1), n);
        assert_eq!(n_q(n, n as i64), 1);
        assert_eq!(n_q(n, 0), 1);
        for b in -12..=12 {
            assert_eq!(n % n_q(n, b), 0);
        }
    }
}

#[test]
fn form_is_symmetric_and_permutation_invariant() {
    let f = bilinear_form(3, 5, 4);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(f.matrix[i][j], f.matrix[j][i]);
        }
    }
    let x = [1, -2, 0, 3];
    let y = [4, 1, -1, 2];
    let px = [x[2], x[0], x[3], x[1]];
    let py = [y[2], y[0], y[3], y[1]];
    assert_eq!(f.eval(&x, &y), f.eval(&px, &py));
    assert_eq!(f.eval(&simple_coroot(1, 4), &simple_coroot(1, 4)), 2 * 3);
}

#[test]
fn distinguishability_predicate() {
    let a = CoverParams::new(4, 1, 1, 2).unwrap();
    let b = CoverParams::new(4, 1, 3, 2).unwrap();
    let c = CoverParams::new(4, 1, 5, 2).unwrap();
    // 2(1 - 3) = -4 vanishes mod 4
    assert!(!covers_distinguishable(&a, &b));
    assert!(!covers_distinguishable(&a, &c));
    assert!(covers_distinguishable(&a, &CoverParams::new(4, 2, 1, 2).unwrap()));
}

fn x_of(nq: u32) -> Scalar {
    Scalar::root_power(0, 1, nq)
}

fn den(nq: u32) -> Scalar {
    Scalar::one() - Scalar::v() * x_of(nq)
}

#[test]
fn tau_at_equal_coordinates() {
    for n in 1..=4 {
        let p = CoverParams::dot(n, 2);
        let nq = p.nq();
        let t = tau(&[3, 3], 1, &p).unwrap();
        assert!(frac_eq(&t.tau1, &Frac::new(Scalar::one_minus_v(), den(nq))));
        let want = Frac::new(Scalar::gauss(1, nq) * (Scalar::one() - x_of(nq)), den(nq)) * z_neg(&[1, -1]);
        assert!(frac_eq(&t.tau2, &want), "n={n}: {}", t.tau2);
        assert_eq!(t.tau2_source, vec![4, 2]);
    }
}

#[test]
fn tau_sum_at_equal_residues() {
    for n in 1..=4u32 {
        let p = CoverParams::dot(n, 2);
        let nq = p.nq();
        for c in 1..=nq as i64 {
            let mu = vec![1 - c, -c];
            let t = tau(&mu, 1, &p).unwrap();
            let want = z_neg(&[1, -1]) * Frac::new(x_of(nq) - Scalar::v(), den(nq));
            assert!(frac_eq(&(t.tau1.clone() + t.tau2.clone()), &want), "n={n} c={c}");
        }
    }
}

#[test]
fn tau_at_trivial_cover_has_integral_shift() {
    let p = CoverParams::dot(1, 2);
    for d in -3..=3 {
        let t = tau(&[d, 0], 1, &p).unwrap();
        // ceil(d/1) = d, so the shift vanishes
        assert!(frac_eq(&t.tau1, &Frac::new(Scalar::one_minus_v(), den(1))));
    }
}

#[test]
fn tau_rejects_degenerate_cover() {
    let p = CoverParams::new(3, 0, 1, 2).unwrap();
    assert!(matches!(tau(&[1, 0], 1, &p), Err(CoverError::Degenerate { .. })));
    assert!(matches!(tau(&[1, 0], 2, &CoverParams::dot(2, 2)), Err(CoverError::SimpleIndex { .. })));
}

#[test]
fn scattering_exhaustive_small_moduli() {
    for nq in 1..=4 {
        let p = CoverParams::dot(nq, 2);
        for ci in 1..=nq {
            for cj in 1..=nq {
                let v = scattering_check(ci, cj, &p).unwrap();
                assert!(v.holds, "nq={nq} ({ci},{cj}): {:?}", v.identities);
                let expect = if ci == cj { 1 } else { 2 };
                assert_eq!(v.identities.len(), expect);
            }
        }
    }
}

#[test]
fn intertwiner_square_rank_two_and_three() {
    for p in covers_up_to(4, 2) {
        for c in charge_vectors(p.nq(), 2) {
            let v = intertwiner_square(&p, &c, 1).unwrap();
            assert!(v.holds, "{p:?} {c:?}");
        }
    }
    for p in covers_up_to(2, 3) {
        for c in charge_vectors(p.nq(), 3) {
            for i in 1..3 {
                assert!(intertwiner_square(&p, &c, i).unwrap().holds, "{p:?} {c:?} {i}");
            }
        }
    }
}

#[test]
fn scattering_squares_to_identity() {
    for p in covers_up_to(3, 2) {
        for c in charge_vectors(p.nq(), 2) {
            assert_eq!(check_tau_involution(&p, &c, 1), Ok(true), "{p:?} {c:?}");
        }
    }
}

#[test]
fn json_dump_lists_form_and_cosets() {
    let d = lattice_and_cosets(CoverParams::new(4, 2, 1, 2).unwrap());
    let j = d.to_json();
    assert_eq!(j["B"], serde_json::json!([[1, -1], [-1, 1]]));
    assert_eq!(j["n_Q"], 2);
    assert_eq!(j["gamma"].as_array().unwrap().len() as u64, d.index);
    let t = tau_table(&CoverParams::dot(2, 2), 1).unwrap();
    assert!(t.is_object() || t.is_array());
}

proptest! {
    #[test]
    fn reduce_is_a_canonical_form(
        n in 1u32..6, b in 0i64..6, c in 0i64..12, r in 1usize..4,
        x in prop::collection::vec(-20i64..20, 3),
    ) {
        let p = CoverParams::new(n, b % n as i64, c % (2 * n as i64), r).unwrap();
        let d = lattice_and_cosets(p);
        let x = &x[..r];
        let red = d.reduce(x);
        prop_assert_eq!(d.reduce(&red), red.clone());
        let diff: Vec<i64> = x.iter().zip(&red).map(|(a, b)| a - b).collect();
        prop_assert!(p.form().in_lattice(&diff, n));
        prop_assert!(d.gamma.contains(&red));
    }
}
