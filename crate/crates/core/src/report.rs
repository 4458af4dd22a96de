//! Verification suites and their JSON records.
//!
//! Every suite returns one [`Record`] per case, in a fixed order. Cases run
//! on a rayon pool whose size is read from `METICE_WORKERS` (default: one
//! thread per core); collection preserves input order, so reports do not
//! depend on scheduling.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::appendix::appendix_regression;
use crate::crystal::{bijection_suite, i_lambda, verify_whittaker_ice, Normalization};
use crate::lattice::{boundary_from_partition, enumerate_states, sample_state, System};
use crate::metaplectic::{
    charge_vectors, check_tau_involution, covers_mod, covers_up_to, scattering_check, intertwiner_square, CoverParams,
};
use crate::qgroup::{check_graded_ybe, check_graded_ybe_modular, compare_to_ice_r};
use crate::rvertex::{
    all_rtt_boundaries, check_rrr_all_outputs, check_rrr_modular, check_rtt, check_scattering_involution,
    check_unitarity, check_unitarity_modular, train_functional_equation,
};
use crate::scalar::Scalar;
use crate::spin::Spin;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "METICE_WORKERS";

/// One verified case.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub suite: String,
    pub case: String,
    pub params: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub verdict: bool,
    /// Wall time in milliseconds; `None` when timing is disabled so that
    /// reports are byte-identical across runs.
    pub elapsed: Option<f64>,
}

/// The records of one suite plus free-form notes (failure bounds, counts).
#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub suite: String,
    pub records: Vec<Record>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl Suite {
    fn new(name: &str, records: Vec<Record>, notes: Vec<String>) -> Suite {
        let pass = records.iter().all(|r| r.verdict);
        Suite {
            suite: name.to_string(),
            records,
            notes,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.verdict)
    }

    /// Drop timings.
    pub fn without_timing(mut self) -> Suite {
        for r in &mut self.records {
            r.elapsed = None;
        }
        self
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{}: {} cases, {} failed",
            self.suite,
            self.records.len(),
            failed
        )
    }

    /// One CSV line per record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,case,verdict,elapsed_ms\n");
        for r in &self.records {
            let t = r.elapsed.map(|x| format!("{x:.3}")).unwrap_or_default();
            out.push_str(&format!("{},\"{}\",{},{}\n", r.suite, r.case.replace('"', "'"), r.verdict, t));
        }
        out
    }
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn worker_count() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

/// Map `f` over `items` on the worker pool, keeping input order.
pub fn fan_out<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Run `f` and package its verdict as a record.
fn timed<F>(suite: &str, case: String, params: Value, timing: bool, f: F) -> Record
where
    F: FnOnce() -> (Value, Value, bool),
{
    let start = Instant::now();
    let (lhs, rhs, verdict) = f();
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Record {
        suite: suite.to_string(),
        case,
        params,
        lhs,
        rhs,
        verdict,
        elapsed: timing.then_some(ms),
    }
}

fn text<T: std::fmt::Display>(x: &T) -> Value {
    Value::String(x.to_string())
}

/// Every appendix case and instantiation at modulus `nq`.
pub fn suite_appendix(nq: u32, timing: bool) -> Suite {
    let start = Instant::now();
    let report = appendix_regression(nq);
    let ms = start.elapsed().as_secs_f64() * 1e3 / report.outcomes.len().max(1) as f64;
    let records = report
        .outcomes
        .iter()
        .map(|o| Record {
            suite: "appendix".into(),
            case: format!("{} {:?}", o.case, o.instantiation),
            params: json!({ "nq": nq, "instantiation": o.instantiation }),
            lhs: Value::String(o.lhs.clone()),
            rhs: Value::String(o.rhs.clone()),
            verdict: o.passed(),
            elapsed: timing.then_some(ms),
        })
        .collect();
    let notes = vec![format!(
        "{} cases, {} errata applied",
        report.cases,
        report.errata.len()
    )];
    Suite::new("appendix", records, notes)
}

/// RTT relation for every decorated boundary.
pub fn suite_rtt(nq: u32, timing: bool) -> Suite {
    let boundaries = all_rtt_boundaries(nq);
    let records = fan_out(&boundaries, |b| {
        timed("rtt", format!("{b:?}"), json!({ "nq": nq }), timing, || {
            let v = check_rtt(*b, nq);
            (json!(v.lhs), json!(v.rhs), v.holds)
        })
    });
    Suite::new("rtt", records, vec![])
}

/// RRR and unitarity, symbolically, for every input column.
pub fn suite_rrr_symbolic(nq: u32, timing: bool) -> Suite {
    let spins = Spin::all(nq);
    let mut inputs = Vec::new();
    for &a in &spins {
        for &b in &spins {
            for &c in &spins {
                inputs.push([a, b, c]);
            }
        }
    }
    let mut records = fan_out(&inputs, |inp| {
        timed("rrr", format!("inputs {inp:?}"), json!({ "nq": nq }), timing, || {
            let bad = check_rrr_all_outputs(*inp, (0, 1, 2), nq);
            let failing: Vec<String> = bad.iter().map(|o| format!("{o:?}")).collect();
            (json!(failing), json!([]), bad.is_empty())
        })
    });
    let mut pairs = Vec::new();
    for &a in &spins {
        for &b in &spins {
            for &c in &spins {
                for &d in &spins {
                    pairs.push([a, b, c, d]);
                }
            }
        }
    }
    records.extend(fan_out(&pairs, |p| {
        timed("unitarity", format!("{p:?}"), json!({ "nq": nq }), timing, || {
            let v = check_unitarity(p[0], p[1], p[2], p[3], (0, 1), nq);
            (json!(v.lhs), json!(v.rhs), v.holds)
        })
    }));
    Suite::new("rrr", records, vec![])
}

/// RRR and unitarity at random points of `F_p`.
pub fn suite_rrr_modular(nq: u32, points: u32, prime: u64, seed: u64, timing: bool) -> Suite {
    let params = json!({ "nq": nq, "points": points, "prime": prime, "seed": seed });
    let mut notes = Vec::new();
    let mut records = Vec::new();
    for (name, f) in [
        ("rrr", check_rrr_modular as fn(u32, u32, u64, u64) -> _),
        ("unitarity", check_unitarity_modular),
    ] {
        records.push(timed(name, format!("{name} modular"), params.clone(), timing, || {
            let rep = f(nq, points, prime, seed);
            notes.push(format!(
                "{name}: degree {}, {} boundaries, failure probability <= 2^{:.1}",
                rep.degree, rep.boundaries, rep.log2_failure_bound
            ));
            (json!(rep.failures), json!([]), rep.failures.is_empty())
        }));
    }
    Suite::new("rrr-modular", records, notes)
}

/// Twisted super R-matrix against the R-vertex weights.
pub fn suite_twist(nq: u32, timing: bool) -> Suite {
    let rec = timed("twist", format!("nq {nq}"), json!({ "nq": nq }), timing, || {
        let rep = compare_to_ice_r(nq);
        (
            json!({
                "entries_checked": rep.entries_checked,
                "ff21_identity": rep.ff21_identity,
                "braid_relation": rep.braid_relation,
                "integral": rep.integral,
                "untwisted_agreement": rep.untwisted_agreement,
            }),
            json!(rep.mismatches),
            rep.holds,
        )
    });
    Suite::new("twist", vec![rec], vec![])
}

/// Graded Yang–Baxter equation and unitarity of the untwisted super
/// R-matrix, symbolically.
pub fn suite_graded_ybe(nq: u32, timing: bool) -> Suite {
    let rec = timed("graded-ybe", format!("nq {nq}"), json!({ "nq": nq }), timing, || {
        let rep = check_graded_ybe(nq);
        (json!({ "ybe": rep.ybe, "unitarity": rep.unitarity }), json!({ "ybe": true, "unitarity": true }), rep.holds)
    });
    Suite::new("graded-ybe", vec![rec], vec![])
}

/// Graded Yang–Baxter equation at random points of `F_p`.
pub fn suite_graded_ybe_modular(nq: u32, points: u32, prime: u64, seed: u64, timing: bool) -> Suite {
    let params = json!({ "nq": nq, "points": points, "prime": prime, "seed": seed });
    let mut notes = Vec::new();
    let rec = timed("graded-ybe", format!("nq {nq} modular"), params, timing, || {
        let rep = check_graded_ybe_modular(nq, points, prime, seed);
        notes.push(format!(
            "graded-ybe: degree {}, failure probability <= 2^{:.1}",
            rep.degree, rep.log2_failure_bound
        ));
        (json!(rep.failures), json!([]), rep.failures.is_empty())
    });
    Suite::new("graded-ybe-modular", vec![rec], notes)
}

/// Scattering coefficients against R-vertex weights for every charge pair.
pub fn suite_scattering(nq: u32, timing: bool) -> Suite {
    let params = CoverParams::dot(nq, 2);
    let pairs = charge_vectors(nq, 2);
    let records = fan_out(&pairs, |c| {
        timed("scattering", format!("charges {c:?}"), json!(params), timing, || {
            match scattering_check(c[0], c[1], &params) {
                Ok(v) => {
                    let lhs: Vec<Value> = v.identities.iter().map(|x| text(&x.lhs)).collect();
                    let rhs: Vec<Value> = v.identities.iter().map(|x| text(&x.rhs)).collect();
                    (json!(lhs), json!(rhs), v.holds)
                }
                Err(e) => (text(&e), Value::Null, false),
            }
        })
    });
    Suite::new("scattering", records, vec![])
}

/// The intertwiner/R-vertex square for all covers with `n <= max_n`, every
/// charge vector and every simple reflection.
pub fn suite_intertwiner_square(max_n: u32, r: usize, timing: bool) -> Suite {
    suite_intertwiner_square_covers(&covers_up_to(max_n, r), timing)
}

pub fn suite_intertwiner_square_covers(covers: &[CoverParams], timing: bool) -> Suite {
    let mut cases = Vec::new();
    for p in covers {
        for c in charge_vectors(p.nq(), p.r) {
            for i in 1..p.r {
                cases.push((*p, c.clone(), i));
            }
        }
    }
    let records = fan_out(&cases, |(p, c, i)| {
        timed("intertwiner-square", format!("{p:?} c={c:?} i={i}"), json!(p), timing, || {
            let diagram = intertwiner_square(p, c, *i);
            let involution = check_tau_involution(p, c, *i);
            match (diagram, involution) {
                (Ok(d), Ok(inv)) => {
                    let lhs: Vec<Value> = d.identities.iter().map(|x| text(&x.lhs)).collect();
                    let rhs: Vec<Value> = d.identities.iter().map(|x| text(&x.rhs)).collect();
                    (json!({ "terms": lhs, "involution": inv }), json!(rhs), d.holds && inv)
                }
                (Err(e), _) | (_, Err(e)) => (text(&e), Value::Null, false),
            }
        })
    });
    Suite::new("intertwiner-square", records, vec![])
}

/// Partition functions against crystal sums for every cover with
/// `n <= max_n`.
pub fn suite_whittaker(lambda: &[i64], columns: usize, max_n: u32, norm: Normalization, timing: bool) -> Suite {
    suite_whittaker_covers(lambda, columns, &covers_mod(max_n, lambda.len()), norm, timing)
}

pub fn suite_whittaker_covers(
    lambda: &[i64],
    columns: usize,
    covers: &[CoverParams],
    norm: Normalization,
    timing: bool,
) -> Suite {
    let records = fan_out(covers, |p| {
        timed(
            "whittaker-ice",
            format!("lambda={lambda:?} N={columns} {p:?}"),
            json!({ "cover": p, "lambda": lambda, "columns": columns, "normalization": norm }),
            timing,
            || match verify_whittaker_ice(lambda, columns, p, norm) {
                Ok(rep) => {
                    let lhs: Vec<Value> = rep
                        .cases
                        .iter()
                        .map(|c| json!({ "gamma": c.gamma, "charges": c.charges, "Z": text(&c.lhs) }))
                        .collect();
                    let rhs: Vec<Value> = rep
                        .cases
                        .iter()
                        .map(|c| json!({ "gamma": c.gamma, "normalized": text(&c.rhs) }))
                        .collect();
                    let extra = json!({
                        "unmatched_charges": rep.unmatched_charges,
                        "repeated_charges": rep.repeated_charges,
                    });
                    (json!({ "cases": lhs, "coverage": extra }), json!(rhs), rep.holds)
                }
                Err(e) => (text(&e), Value::Null, false),
            },
        )
    });
    Suite::new("whittaker-ice", records, vec![])
}

/// The sample state: charges, admissibility and weight.
pub fn suite_sample_state(timing: bool) -> Suite {
    let state = sample_state();
    let printed_charges: Vec<Vec<i64>> = vec![vec![3, 2, 1, 0, 0, 0], vec![1, 0, 0, 0, 0, 0], vec![4, 3, 2, 2, 1, 0]];
    let mut records = Vec::new();
    for nq in 1..=3u32 {
        let state = state.clone();
        let printed_charges = printed_charges.clone();
        records.push(timed("sample", format!("nq {nq}"), json!({ "nq": nq }), timing, move || {
            let sys = boundary_from_partition(&[2, 2, 0], 3, 5, nq).expect("valid boundary");
            let present = enumerate_states(&sys).contains(&state);
            let charges_ok = state.charges() == printed_charges;
            let expected_present = nq <= 2;
            let weight_ok = if present {
                let product: Scalar = state.row_weights(nq).into_iter().product::<Scalar>().with_nq(nq);
                product == state.weight(nq)
            } else {
                true
            };
            let lhs = json!({
                "enumerated": present,
                "charges": state.charges(),
                "weight": if present { text(&state.weight(nq)) } else { Value::Null },
            });
            let rhs = json!({ "enumerated": expected_present, "charges": printed_charges });
            (lhs, rhs, present == expected_present && charges_ok && weight_ok)
        }));
    }
    Suite::new(
        "sample",
        records,
        vec!["printed total weight at n_Q = 2 carries an extra minus sign; the per-vertex product is used".into()],
    )
}

/// Round trips and counts of node, pattern and ice enumerations.
pub fn suite_bijection(lambdas: &[Vec<i64>], timing: bool) -> Suite {
    let records = fan_out(lambdas, |l| {
        timed("bijection", format!("lambda={l:?}"), json!({ "lambda": l }), timing, || {
            match bijection_suite(l) {
                Ok((counts, ok)) => (json!(counts), Value::Null, ok),
                Err(e) => (text(&e), Value::Null, false),
            }
        })
    });
    Suite::new("bijection", records, vec![])
}

/// Partitions with `r` parts and `λ_1 + r <= bound`.
pub fn partitions_bounded(r: usize, bound: i64) -> Vec<Vec<i64>> {
    fn go(prefix: &mut Vec<i64>, r: usize, max: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == r {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=max {
            prefix.push(x);
            go(prefix, r, x, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if (r as i64) <= bound {
        go(&mut Vec::new(), r, bound - r as i64, &mut out);
    }
    out.iter_mut().for_each(|p| p.sort_by(|a, b| b.cmp(a)));
    out.sort();
    out.dedup();
    out
}

/// The functional equation from pushing an R-vertex through the lattice.
pub fn suite_train(lambda: &[i64], nq: u32, timing: bool) -> Suite {
    let r = lambda.len();
    let sys: System = match System::minimal(lambda, nq) {
        Ok(s) => s,
        Err(e) => {
            let rec = timed("train", format!("lambda={lambda:?}"), Value::Null, timing, || (text(&e), Value::Null, false));
            return Suite::new("train", vec![rec], vec![]);
        }
    };
    let mut cases = Vec::new();
    for c in charge_vectors(nq, r) {
        for i in 1..r {
            cases.push((c.clone(), i));
        }
    }
    let records = fan_out(&cases, |(c, i)| {
        timed(
            "train",
            format!("lambda={lambda:?} nq={nq} c={c:?} i={i}"),
            json!({ "lambda": lambda, "nq": nq, "charges": c, "i": i }),
            timing,
            || match train_functional_equation(&sys, c, *i) {
                Ok(v) => (text(&v.lhs), text(&v.rhs), v.holds),
                Err(e) => (text(&e), Value::Null, false),
            },
        )
    });
    Suite::new("train", records, vec![])
}

/// At `n_Q = 1`: no formal Gauss symbols survive, every state is
/// admissible, and the scattering matrices are involutions.
pub fn suite_degeneration(timing: bool) -> Suite {
    let mut records = Vec::new();
    for lambda in [vec![1, 0], vec![2, 2, 0], vec![3, 1, 0]] {
        let l = lambda.clone();
        records.push(timed("degeneration", format!("gauss-free lambda={l:?}"), json!({ "lambda": l }), timing, move || {
            let r = lambda.len();
            let crystal = i_lambda(&lambda, r, 1, Normalization::Normalized).map(|s| s.is_gauss_free());
            let sys = System::minimal(&lambda, 1).expect("valid boundary");
            let states = enumerate_states(&sys);
            let ice_free = states.iter().all(|s| s.weight(1).is_gauss_free());
            let all_admissible = states.iter().all(|s| s.is_admissible(1));
            let ok = crystal == Ok(true) && ice_free && all_admissible;
            (
                json!({ "crystal_gauss_free": crystal.ok(), "ice_gauss_free": ice_free, "all_admissible": all_admissible }),
                Value::Null,
                ok,
            )
        }));
    }
    records.push(timed("degeneration", "R-vertex involution".into(), json!({ "nq": 1 }), timing, || {
        let bad = check_scattering_involution(0, 1, 1);
        (json!(bad.len()), json!(0), bad.is_empty())
    }));
    records.push(timed("degeneration", "scattering involution".into(), json!({ "n": 1 }), timing, || {
        let p = CoverParams::dot(1, 3);
        let ok = (1..3).all(|i| check_tau_involution(&p, &[1, 1, 1], i) == Ok(true));
        (json!(ok), json!(true), ok)
    }));
    Suite::new("degeneration", records, vec![])
}
