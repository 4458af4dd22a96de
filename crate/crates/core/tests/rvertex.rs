use metice::appendix::appendix_regression;
use metice::lattice::System;
use metice::metaplectic::charge_vectors;
use metice::rvertex::*;
use metice::scalar::{frac_eq, DEFAULT_PRIME};
use metice::{Frac, Scalar, Spin};

fn x(nq: u32) -> Scalar {
    Scalar::root_power(0, 1, nq)
}

fn over_den(num: Scalar, nq: u32) -> Frac {
    Frac::new(num, r_denominator(0, 1, nq))
}

#[test]
fn weight_table_entries() {
    use Spin::*;
    for nq in 1..=4 {
        let all = |s| RConfig { ll: s, ul: s, ur: s, lr: s };
        assert!(frac_eq(&r_weight(all(Minus), 0, 1, nq), &Frac::one()));
        for a in 1..=nq {
            let w = r_weight(all(Plus(a)), 0, 1, nq);
            assert!(frac_eq(&w, &over_den(x(nq) - Scalar::v(), nq)));
            let b1 = r_weight(RConfig { ll: Plus(a), ul: Minus, ur: Plus(a), lr: Minus }, 0, 1, nq);
            assert!(frac_eq(&b1, &over_den(Scalar::v() * (Scalar::one() - x(nq)), nq)));
            for b in 1..=nq {
                if a == b {
                    continue;
                }
                let swap = r_weight(RConfig { ll: Plus(b), ul: Plus(a), ur: Plus(a), lr: Plus(b) }, 0, 1, nq);
                let num = if a > b { Scalar::one_minus_v() * x(nq) } else { Scalar::one_minus_v() };
                assert!(frac_eq(&swap, &over_den(num, nq)));
                let keep = r_weight(RConfig { ll: Plus(b), ul: Plus(a), ur: Plus(b), lr: Plus(a) }, 0, 1, nq);
                let num = Scalar::gauss(a as i64 - b as i64, nq) * (Scalar::one() - x(nq));
                assert!(frac_eq(&keep, &over_den(num, nq)));
            }
        }
    }
}

#[test]
fn weights_outside_support_vanish() {
    for nq in 1..=3 {
        let support = support(nq);
        for ll in Spin::all(nq) {
            for ul in Spin::all(nq) {
                for ur in Spin::all(nq) {
                    for lr in Spin::all(nq) {
                        let cfg = RConfig { ll, ul, ur, lr };
                        assert_eq!(support.contains(&cfg), !r_weight(cfg, 0, 1, nq).is_zero(), "{cfg:?}");
                    }
                }
            }
        }
    }
}

fn boundary(sigma: Spin, tau: Spin, beta: bool, theta: Spin, rho: Spin, alpha: bool) -> RttBoundary {
    RttBoundary { sigma, tau, beta, theta, rho, alpha }
}

#[test]
fn rtt_named_boundaries() {
    use Spin::*;
    let nq = 3;
    // two charged spins entering with nothing leaving: no states on either side
    let empty = check_rtt(boundary(Plus(1), Plus(2), true, Minus, Minus, true), nq);
    assert!(empty.holds && empty.lhs_states.is_empty() && empty.rhs_states.is_empty());
    // two left states against one right state
    let two = check_rtt(boundary(Plus(1), Minus, false, Minus, Minus, true), nq);
    assert!(two.holds);
    assert_eq!((two.lhs_states.len(), two.rhs_states.len()), (2, 1));
    // a single left state against a two-state sum
    let sum = check_rtt(boundary(Plus(1), Plus(1), false, Plus(3), Minus, true), nq);
    assert!(sum.holds);
    assert_eq!((sum.lhs_states.len(), sum.rhs_states.len()), (1, 2));
    for k in 1..nq {
        let v = check_rtt(boundary(Plus(1), Plus(k + 1), false, Plus(k), Minus, true), nq);
        assert!(v.holds, "k={k}");
        let want = over_den(Scalar::gauss(k as i64, nq) * Scalar::one_minus_v() * x(nq), nq);
        assert!(frac_eq(&v.rhs, &want), "k={k}: {}", v.rhs);
    }
}

#[test]
fn rtt_exhaustive_small_moduli() {
    for nq in 1..=3 {
        for b in all_rtt_boundaries(nq) {
            assert!(check_rtt(b, nq).holds, "nq={nq} {b:?}");
        }
    }
}

#[test]
fn appendix_cases_reproduce() {
    for nq in 1..=4 {
        let report = appendix_regression(nq);
        assert_eq!(report.cases, 32);
        assert!(report.all_pass, "nq={nq}");
        for o in report.outcomes.iter().filter(|o| o.case == "31") {
            assert_eq!((o.lhs.as_str(), o.rhs.as_str()), ("0", "0"));
        }
        assert!(report.outcomes.iter().any(|o| o.case == "12" && o.passed()));
        assert!(report.outcomes.iter().any(|o| o.case == "1a" && o.passed()));
    }
}

#[test]
fn appendix_errata_are_real() {
    // each corrected line disagrees with the computation as printed for at
    // least one instantiation
    let report = appendix_regression(3);
    for e in &report.errata {
        let differs = report
            .outcomes
            .iter()
            .filter(|o| o.case == e.case)
            .any(|o| o.printed_differs == Some(true));
        assert!(differs, "{}", e.case);
    }
}

#[test]
fn rrr_symbolic_at_trivial_modulus() {
    let spins = Spin::all(1);
    for &a in &spins {
        for &b in &spins {
            for &c in &spins {
                assert!(check_rrr_all_outputs([a, b, c], (0, 1, 2), 1).is_empty());
            }
        }
    }
    let m = Spin::Minus;
    let v = check_rrr([m, m, m], [m, m, m], (0, 1, 2), 1);
    assert!(v.holds && frac_eq(&v.lhs, &Frac::one()));
}

#[test]
fn unitarity_examples() {
    let nq = 3;
    let m = Spin::Minus;
    assert!(frac_eq(&check_unitarity(m, m, m, m, (0, 1), nq).lhs, &Frac::one()));
    let a = Spin::Plus(2);
    assert!(frac_eq(&check_unitarity(a, a, a, a, (0, 1), nq).lhs, &Frac::one()));
    for beta in Spin::all(nq) {
        let v = check_unitarity(Spin::Plus(1), beta, Spin::Plus(2), beta, (0, 1), nq);
        assert!(v.holds && v.lhs.is_zero());
    }
}

#[test]
fn modular_and_symbolic_agree() {
    // n_Q = 1 and 2: both modes run and both pass
    for nq in 1..=2 {
        let rep = check_rrr_modular(nq, 20, DEFAULT_PRIME, 5);
        assert!(rep.failures.is_empty());
        assert!(rep.log2_failure_bound < -40.0);
        let rep = check_unitarity_modular(nq, 20, DEFAULT_PRIME, 5);
        assert!(rep.failures.is_empty());
    }
    for inputs in [[Spin::Plus(1), Spin::Plus(2), Spin::Minus], [Spin::Plus(2); 3]] {
        assert!(check_rrr_all_outputs(inputs, (0, 1, 2), 2).is_empty());
    }
}

#[test]
fn modular_report_is_reproducible() {
    let a = check_rrr_modular(2, 20, DEFAULT_PRIME, 9);
    let b = check_rrr_modular(2, 20, DEFAULT_PRIME, 9);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn scattering_matrix_is_an_involution() {
    for nq in 1..=4 {
        assert!(check_scattering_involution(0, 1, nq).is_empty(), "nq={nq}");
    }
}

#[test]
fn functional_equation_small_cases() {
    for lambda in [vec![1, 0], vec![2, 0], vec![2, 2, 0]] {
        for nq in 1..=3 {
            let sys = System::minimal(&lambda, nq).unwrap();
            for c in charge_vectors(nq, lambda.len()) {
                for i in 1..lambda.len() {
                    let v = train_functional_equation(&sys, &c, i).unwrap();
                    assert!(v.holds, "{lambda:?} nq={nq} c={c:?} i={i}");
                }
            }
        }
    }
}
