//! The R-vertex and the Yang–Baxter equations of the lattice model.
//!
//! An R-vertex crosses two strands. Its edges are named by position:
//! lower-left (`ll`), upper-left (`ul`), upper-right (`ur`) and lower-right
//! (`lr`). For `R_{z_i, z_j}` the strand of row `i` enters at `ul` and
//! leaves at `lr`, the strand of row `j` enters at `ll` and leaves at `ur`.
//! All weights share the denominator `1 - v X` with `X = (z_i / z_j)^{n_Q}`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lattice::{partition_function, vertex_type, vertex_weight, LatticeError, System};
use crate::scalar::{
    eval_frac_mod_p, field, schwartz_zippel_log2_bound, Assignment, EvalError, ExponentBox, Frac,
    Scalar,
};
use crate::spin::{rep, Spin};

/// The four decorated spins around an R-vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RConfig {
    pub ll: Spin,
    pub ul: Spin,
    pub ur: Spin,
    pub lr: Spin,
}

/// `1 - v (z_i/z_j)^{n_Q}`.
pub fn r_denominator(i: usize, j: usize, nq: u32) -> Scalar {
    Scalar::one() - Scalar::v() * Scalar::root_power(i, j, nq)
}

/// Numerator of the R-vertex weight over [`r_denominator`].
pub fn r_numerator(cfg: RConfig, i: usize, j: usize, nq: u32) -> Scalar {
    use Spin::*;
    let x = || Scalar::root_power(i, j, nq);
    let one_minus_x = || Scalar::one() - x();
    match (cfg.ll, cfg.ul, cfg.ur, cfg.lr) {
        (Minus, Minus, Minus, Minus) => r_denominator(i, j, nq),
        (Plus(b), Plus(a), Plus(c), Plus(d)) => {
            if a == b && c == a && d == a {
                x() - Scalar::v()
            } else if a != b && c == b && d == a {
                Scalar::gauss(a as i64 - b as i64, nq) * one_minus_x()
            } else if a != b && c == a && d == b {
                if a > b {
                    Scalar::one_minus_v() * x()
                } else {
                    Scalar::one_minus_v()
                }
            } else {
                Scalar::zero()
            }
        }
        (Plus(a), Minus, Plus(c), Minus) if a == c => Scalar::v() * one_minus_x(),
        (Minus, Plus(a), Minus, Plus(c)) if a == c => one_minus_x(),
        (Minus, Plus(a), Plus(c), Minus) if a == c => Scalar::one_minus_v() * x(),
        (Plus(a), Minus, Minus, Plus(c)) if a == c => Scalar::one_minus_v(),
        _ => Scalar::zero(),
    }
}

/// The R-vertex weight `R_{z_i, z_j}` of a configuration.
pub fn r_weight(cfg: RConfig, i: usize, j: usize, nq: u32) -> Frac {
    Frac::new(
        r_numerator(cfg, i, j, nq).with_nq(nq),
        r_denominator(i, j, nq),
    )
}

/// All configurations with a nonzero weight.
pub fn support(nq: u32) -> Vec<RConfig> {
    let spins = Spin::all(nq);
    let mut out = Vec::new();
    for &ll in &spins {
        for &ul in &spins {
            for &ur in &spins {
                for &lr in &spins {
                    let cfg = RConfig { ll, ul, ur, lr };
                    if !r_numerator(cfg, 0, 1, nq).is_zero() {
                        out.push(cfg);
                    }
                }
            }
        }
    }
    out
}

/// Weight of a lattice vertex whose horizontal edges carry decorated spins.
///
/// Zero unless the spins form an admissible vertex and the west charge is
/// the east charge plus one for a `+` west edge (plus zero otherwise).
pub fn decorated_vertex_weight(
    west: Spin,
    north: bool,
    east: Spin,
    south: bool,
    row: usize,
    nq: u32,
) -> Scalar {
    let Some(t) = vertex_type(west.is_plus(), north, east.is_plus(), south) else {
        return Scalar::zero();
    };
    let west_charge = east.charge() as i64 + i64::from(west.is_plus());
    let consistent = match west {
        Spin::Plus(c) => rep(west_charge, nq) == c,
        Spin::Minus => west_charge % nq as i64 == 0,
    };
    if !consistent {
        return Scalar::zero();
    }
    vertex_weight(t, east.charge() as i64, row, nq)
}

/// Boundary of the two diagrams of the RTT relation: `sigma` (lower left),
/// `tau` (upper left), `beta` (top), `theta` (upper right), `rho` (lower
/// right) and `alpha` (bottom).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RttBoundary {
    pub sigma: Spin,
    pub tau: Spin,
    pub beta: bool,
    pub theta: Spin,
    pub rho: Spin,
    pub alpha: bool,
}

/// Interior edges of one RTT diagram: the two horizontal edges between the
/// R-vertex and the lattice vertices (upper first) and the vertical edge
/// between the two lattice vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RttInterior {
    pub upper: Spin,
    pub lower: Spin,
    pub vertical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RttVerdict {
    pub lhs: Frac,
    pub rhs: Frac,
    pub lhs_states: Vec<(RttInterior, Frac)>,
    pub rhs_states: Vec<(RttInterior, Frac)>,
    pub holds: bool,
}

/// Row indices used by the RTT diagrams: strand `i` is `z_1`, strand `j`
/// is `z_2`.
pub const RTT_ROW_I: usize = 0;
pub const RTT_ROW_J: usize = 1;

/// Both sides of the RTT relation for one boundary.
///
/// Left diagram: the R-vertex `R_{z_i,z_j}` sits to the left of a column
/// with row `j` on top and row `i` below. Right diagram: the column has row
/// `i` on top and row `j` below, and the R-vertex sits to its right.
pub fn check_rtt(b: RttBoundary, nq: u32) -> RttVerdict {
    let (i, j) = (RTT_ROW_I, RTT_ROW_J);
    let den = r_denominator(i, j, nq);
    let spins = Spin::all(nq);
    let mut lhs_states = Vec::new();
    let mut rhs_states = Vec::new();
    for &upper in &spins {
        for &lower in &spins {
            for vertical in [false, true] {
                let interior = RttInterior {
                    upper,
                    lower,
                    vertical,
                };
                // left diagram: nu = upper, mu = lower, gamma = vertical
                let r = r_numerator(
                    RConfig {
                        ll: b.sigma,
                        ul: b.tau,
                        ur: upper,
                        lr: lower,
                    },
                    i,
                    j,
                    nq,
                );
                if !r.is_zero() {
                    let top = decorated_vertex_weight(upper, b.beta, b.theta, vertical, j, nq);
                    let bottom = decorated_vertex_weight(lower, vertical, b.rho, b.alpha, i, nq);
                    let w = r * top * bottom;
                    if !w.is_zero() {
                        lhs_states.push((interior, Frac::new(w.with_nq(nq), den.clone())));
                    }
                }
                // right diagram: phi = upper, psi = lower, delta = vertical
                let top = decorated_vertex_weight(b.tau, b.beta, upper, vertical, i, nq);
                if top.is_zero() {
                    continue;
                }
                let bottom = decorated_vertex_weight(b.sigma, vertical, lower, b.alpha, j, nq);
                if bottom.is_zero() {
                    continue;
                }
                let r = r_numerator(
                    RConfig {
                        ll: lower,
                        ul: upper,
                        ur: b.theta,
                        lr: b.rho,
                    },
                    i,
                    j,
                    nq,
                );
                let w = r * top * bottom;
                if !w.is_zero() {
                    rhs_states.push((interior, Frac::new(w.with_nq(nq), den.clone())));
                }
            }
        }
    }
    let sum = |v: &Vec<(RttInterior, Frac)>| {
        let num = v
            .iter()
            .map(|(_, f)| f.num.clone())
            .sum::<Scalar>()
            .with_nq(nq);
        Frac::new(num, den.clone())
    };
    let lhs = sum(&lhs_states);
    let rhs = sum(&rhs_states);
    let holds = lhs.num == rhs.num;
    RttVerdict {
        lhs,
        rhs,
        lhs_states,
        rhs_states,
        holds,
    }
}

/// Every decorated boundary of the RTT relation at modulus `nq`.
pub fn all_rtt_boundaries(nq: u32) -> Vec<RttBoundary> {
    let spins = Spin::all(nq);
    let mut out = Vec::new();
    for &sigma in &spins {
        for &tau in &spins {
            for beta in [false, true] {
                for &theta in &spins {
                    for &rho in &spins {
                        for alpha in [false, true] {
                            out.push(RttBoundary {
                                sigma,
                                tau,
                                beta,
                                theta,
                                rho,
                                alpha,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// A crossing of the strands at positions `pos` and `pos + 1` (position 0
/// is the top); `upper` and `lower` name the spectral parameters of the
/// strands entering from the upper and lower left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub pos: usize,
    pub upper: usize,
    pub lower: usize,
}

/// Propagate a column of decorated spins through a sequence of crossings.
///
/// Returns the weight of every output column reachable from `inputs`.
pub fn braid_transfer(inputs: &[Spin], crossings: &[Crossing], nq: u32) -> BTreeMap<Vec<Spin>, Frac> {
    let spins = Spin::all(nq);
    let mut cur: BTreeMap<Vec<Spin>, Frac> = BTreeMap::new();
    cur.insert(inputs.to_vec(), Frac::one());
    for c in crossings {
        let den = r_denominator(c.upper, c.lower, nq);
        let mut next: BTreeMap<Vec<Spin>, Scalar> = BTreeMap::new();
        let mut next_den = None;
        for (state, w) in &cur {
            for &ur in &spins {
                for &lr in &spins {
                    let cfg = RConfig {
                        ll: state[c.pos + 1],
                        ul: state[c.pos],
                        ur,
                        lr,
                    };
                    let r = r_numerator(cfg, c.upper, c.lower, nq);
                    if r.is_zero() {
                        continue;
                    }
                    let mut s = state.clone();
                    s[c.pos] = ur;
                    s[c.pos + 1] = lr;
                    let e = next
                        .entry(s)
                        .or_insert_with(|| Scalar::zero().with_nq(nq));
                    *e += &w.num * &r;
                    next_den.get_or_insert_with(|| &w.den * &den);
                }
            }
        }
        let d = next_den.unwrap_or_else(|| den.clone());
        cur = next
            .into_iter()
            .filter(|(_, n)| !n.is_zero())
            .map(|(s, n)| (s, Frac::new(n, d.clone())))
            .collect();
    }
    cur
}

/// Left side of the RRR relation for strands `(i, j, k)` entering from the
/// top: `R_{ij}` at positions (0,1), `R_{ik}` at (1,2), `R_{jk}` at (0,1).
pub fn rrr_left(rows: (usize, usize, usize)) -> [Crossing; 3] {
    let (i, j, k) = rows;
    [
        Crossing { pos: 0, upper: i, lower: j },
        Crossing { pos: 1, upper: i, lower: k },
        Crossing { pos: 0, upper: j, lower: k },
    ]
}

/// Right side: `R_{jk}` at (1,2), `R_{ik}` at (0,1), `R_{ij}` at (1,2).
pub fn rrr_right(rows: (usize, usize, usize)) -> [Crossing; 3] {
    let (i, j, k) = rows;
    [
        Crossing { pos: 1, upper: j, lower: k },
        Crossing { pos: 0, upper: i, lower: k },
        Crossing { pos: 1, upper: i, lower: j },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub lhs: Frac,
    pub rhs: Frac,
    pub holds: bool,
}

/// Compare the two triple-crossing partition functions for one boundary.
pub fn check_rrr(
    inputs: [Spin; 3],
    outputs: [Spin; 3],
    rows: (usize, usize, usize),
    nq: u32,
) -> Verdict {
    let l = braid_transfer(&inputs, &rrr_left(rows), nq);
    let r = braid_transfer(&inputs, &rrr_right(rows), nq);
    let get = |m: &BTreeMap<Vec<Spin>, Frac>| m.get(&outputs.to_vec()).cloned().unwrap_or_else(Frac::zero);
    let lhs = get(&l);
    let rhs = get(&r);
    let holds = lhs == rhs;
    Verdict { lhs, rhs, holds }
}

/// Check the RRR relation for every output of one input column; returns
/// the outputs where it fails.
pub fn check_rrr_all_outputs(inputs: [Spin; 3], rows: (usize, usize, usize), nq: u32) -> Vec<Vec<Spin>> {
    let l = braid_transfer(&inputs, &rrr_left(rows), nq);
    let r = braid_transfer(&inputs, &rrr_right(rows), nq);
    let mut bad = Vec::new();
    for key in l.keys().chain(r.keys()) {
        let a = l.get(key).cloned().unwrap_or_else(Frac::zero);
        let b = r.get(key).cloned().unwrap_or_else(Frac::zero);
        if a != b && !bad.contains(key) {
            bad.push(key.clone());
        }
    }
    bad
}

/// `R_{ij}` followed by `R_{ji}` on two strands.
pub fn unitarity_chain(rows: (usize, usize)) -> [Crossing; 2] {
    let (i, j) = rows;
    [
        Crossing { pos: 0, upper: i, lower: j },
        Crossing { pos: 0, upper: j, lower: i },
    ]
}

/// The composite of two R-vertices with inputs `(alpha, beta)` and outputs
/// `(gamma, delta)` (upper first); it must be the Kronecker pattern.
pub fn check_unitarity(
    alpha: Spin,
    beta: Spin,
    gamma: Spin,
    delta: Spin,
    rows: (usize, usize),
    nq: u32,
) -> Verdict {
    let m = braid_transfer(&[alpha, beta], &unitarity_chain(rows), nq);
    let lhs = m
        .get(&vec![gamma, delta])
        .cloned()
        .unwrap_or_else(Frac::zero);
    let rhs = if alpha == gamma && beta == delta {
        Frac::one()
    } else {
        Frac::zero()
    };
    let holds = lhs == rhs;
    Verdict { lhs, rhs, holds }
}

/// Matrix of the R-vertex restricted to pairs of `+` spins, indexed by
/// `(upper, lower)` input and output charges.
pub fn scattering_matrix(i: usize, j: usize, nq: u32) -> BTreeMap<((u32, u32), (u32, u32)), Frac> {
    let mut m = BTreeMap::new();
    for a in 1..=nq {
        for b in 1..=nq {
            for c in 1..=nq {
                for d in 1..=nq {
                    let cfg = RConfig {
                        ll: Spin::Plus(b),
                        ul: Spin::Plus(a),
                        ur: Spin::Plus(c),
                        lr: Spin::Plus(d),
                    };
                    let w = r_weight(cfg, i, j, nq);
                    if !w.is_zero() {
                        // the upper output edge belongs to the strand entering lower
                        m.insert(((a, b), (c, d)), w);
                    }
                }
            }
        }
    }
    m
}

/// `M(s_i z) M(z) = 1` on pairs of `+` spins, where `s_i` exchanges the
/// spectral parameters of the two strands. Returns the failing entries.
pub fn check_scattering_involution(i: usize, j: usize, nq: u32) -> Vec<((u32, u32), (u32, u32))> {
    let m = scattering_matrix(i, j, nq);
    let ms = scattering_matrix(j, i, nq);
    let mut bad = Vec::new();
    for a in 1..=nq {
        for b in 1..=nq {
            for c in 1..=nq {
                for d in 1..=nq {
                    let mut acc = Frac::zero();
                    for x in 1..=nq {
                        for y in 1..=nq {
                            if let (Some(f), Some(g)) = (m.get(&((a, b), (x, y))), ms.get(&((x, y), (c, d)))) {
                                acc += f * g;
                            }
                        }
                    }
                    let want = if (a, b) == (c, d) { Frac::one() } else { Frac::zero() };
                    if acc != want {
                        bad.push(((a, b), (c, d)));
                    }
                }
            }
        }
    }
    bad
}

/// Outcome of a randomized check.
#[derive(Clone, Debug, Serialize)]
pub struct ModularReport {
    pub boundaries: usize,
    pub points: u32,
    pub prime: u64,
    pub degree: u64,
    /// `log2` of the failure probability bound, summed over boundaries.
    pub log2_failure_bound: f64,
    pub failures: Vec<String>,
}

fn numerator_box(i: usize, j: usize, nq: u32) -> ExponentBox {
    support(nq)
        .into_iter()
        .map(|c| r_numerator(c, i, j, nq).exponent_box(nq))
        .fold(ExponentBox::default(), |acc, b| acc.hull(&b))
}

fn eval_transfer(
    inputs: &[Spin],
    crossings: &[Crossing],
    tables: &BTreeMap<(usize, usize), BTreeMap<RConfig, u64>>,
    p: u64,
) -> BTreeMap<Vec<Spin>, u64> {
    let mut cur: BTreeMap<Vec<Spin>, u64> = BTreeMap::from([(inputs.to_vec(), 1)]);
    for c in crossings {
        let table = &tables[&(c.upper, c.lower)];
        let mut next: BTreeMap<Vec<Spin>, u64> = BTreeMap::new();
        for (state, w) in &cur {
            for (cfg, r) in table {
                if cfg.ul != state[c.pos] || cfg.ll != state[c.pos + 1] {
                    continue;
                }
                let mut s = state.clone();
                s[c.pos] = cfg.ur;
                s[c.pos + 1] = cfg.lr;
                let e = next.entry(s).or_insert(0);
                *e = field::add(*e, field::mul(*w, *r, p), p);
            }
        }
        cur = next;
    }
    cur.retain(|_, v| *v != 0);
    cur
}

fn modular_tables(
    pairs: &[(usize, usize)],
    nq: u32,
    r: usize,
    p: u64,
    rng: &mut ChaCha8Rng,
) -> BTreeMap<(usize, usize), BTreeMap<RConfig, u64>> {
    let symbolic: Vec<((usize, usize), Vec<(RConfig, Frac)>)> = pairs
        .iter()
        .map(|&(i, j)| {
            let w = support(nq)
                .into_iter()
                .map(|c| (c, r_weight(c, i, j, nq)))
                .collect();
            ((i, j), w)
        })
        .collect();
    loop {
        let asg = Assignment::random(nq, r, p, rng);
        let mut out = BTreeMap::new();
        let mut ok = true;
        for ((i, j), ws) in &symbolic {
            let mut t = BTreeMap::new();
            for (c, f) in ws {
                match eval_frac_mod_p(f, &asg) {
                    Ok(x) => {
                        t.insert(*c, x);
                    }
                    Err(EvalError::ZeroDenominator) => ok = false,
                    Err(e) => panic!("invalid assignment: {e}"),
                }
            }
            out.insert((*i, *j), t);
        }
        if ok {
            return out;
        }
    }
}

/// RRR relation at random points of `F_p` for every input and output
/// column at modulus `nq`.
pub fn check_rrr_modular(nq: u32, points: u32, p: u64, seed: u64) -> ModularReport {
    let rows = (0, 1, 2);
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let degree = pairs
        .iter()
        .map(|&(i, j)| numerator_box(i, j, nq))
        .fold(ExponentBox::default(), |acc, b| acc.product(&b))
        .degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spins = Spin::all(nq);
    let mut inputs: Vec<[Spin; 3]> = Vec::new();
    for &a in &spins {
        for &b in &spins {
            for &c in &spins {
                inputs.push([a, b, c]);
            }
        }
    }
    let mut failures = Vec::new();
    for _ in 0..points {
        let tables = modular_tables(&pairs, nq, 3, p, &mut rng);
        for inp in &inputs {
            let l = eval_transfer(inp, &rrr_left(rows), &tables, p);
            let r = eval_transfer(inp, &rrr_right(rows), &tables, p);
            if l != r {
                failures.push(format!("inputs {inp:?}"));
            }
        }
    }
    let boundaries = inputs.len() * inputs.len();
    let log2 = schwartz_zippel_log2_bound(degree, p, points) + (boundaries as f64).log2();
    failures.sort();
    failures.dedup();
    ModularReport {
        boundaries,
        points,
        prime: p,
        degree,
        log2_failure_bound: log2,
        failures,
    }
}

/// Unitarity at random points of `F_p` for every boundary.
pub fn check_unitarity_modular(nq: u32, points: u32, p: u64, seed: u64) -> ModularReport {
    let pairs = [(0, 1), (1, 0)];
    let den_box = r_denominator(0, 1, nq)
        .exponent_box(nq)
        .product(&r_denominator(1, 0, nq).exponent_box(nq));
    let degree = numerator_box(0, 1, nq)
        .product(&numerator_box(1, 0, nq))
        .hull(&den_box)
        .degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spins = Spin::all(nq);
    let mut failures = Vec::new();
    for _ in 0..points {
        let tables = modular_tables(&pairs, nq, 2, p, &mut rng);
        for &a in &spins {
            for &b in &spins {
                let m = eval_transfer(&[a, b], &unitarity_chain((0, 1)), &tables, p);
                let want: BTreeMap<Vec<Spin>, u64> = BTreeMap::from([(vec![a, b], 1)]);
                if m != want {
                    failures.push(format!("inputs {a} {b}"));
                }
            }
        }
    }
    let boundaries = spins.len().pow(4);
    let log2 = schwartz_zippel_log2_bound(degree, p, points) + (boundaries as f64).log2();
    failures.sort();
    failures.dedup();
    ModularReport {
        boundaries,
        points,
        prime: p,
        degree,
        log2_failure_bound: log2,
        failures,
    }
}

/// Both sides of the functional equation obtained by pushing an R-vertex
/// through rows `i` and `i+1` (1-based simple reflection index).
#[derive(Clone, Debug, Serialize)]
pub struct TrainVerdict {
    /// `Z(S_{s_i z}; c)`.
    pub lhs: Frac,
    /// Weighted sum of `Z(S_z; c)` and `Z(S_z; s_i c)`.
    pub rhs: Frac,
    /// Weight multiplying `Z(S_z; c)`: the R-vertex keeping each charge in
    /// its row.
    pub keep_weight: Frac,
    /// Weight multiplying `Z(S_z; s_i c)`: the R-vertex exchanging charges.
    pub exchange_weight: Frac,
    pub holds: bool,
}

/// `Z(S_{s_i z}; c) = wt_keep · Z(S_z; c) + wt_exchange · Z(S_z; s_i c)`.
///
/// Both weights are R-vertex weights with `X = (z_i / z_{i+1})^{n_Q}` and
/// left edges `+c_i` (lower) and `+c_{i+1}` (upper). When `c_i = c_{i+1}`
/// the two terms merge into the equal-charge weight.
pub fn train_functional_equation(sys: &System, c: &[u32], i: usize) -> Result<TrainVerdict, LatticeError> {
    assert!(i >= 1 && i < sys.r, "simple reflection index out of range");
    let nq = sys.nq;
    let (lo, hi) = (i - 1, i);
    let z = |c: &[u32]| partition_function(sys, Some(c));
    let lhs = Frac::from_scalar(z(c)?.swap_z(lo, hi));
    let mut swapped = c.to_vec();
    swapped.swap(lo, hi);
    let left = |ur: u32, lr: u32| {
        r_weight(
            RConfig {
                ll: Spin::Plus(c[lo]),
                ul: Spin::Plus(c[hi]),
                ur: Spin::Plus(ur),
                lr: Spin::Plus(lr),
            },
            lo,
            hi,
            nq,
        )
    };
    let keep_weight = left(c[hi], c[lo]);
    let exchange_weight = if c[lo] == c[hi] {
        Frac::zero()
    } else {
        left(c[lo], c[hi])
    };
    let mut rhs = &keep_weight * &z(c)?;
    if !exchange_weight.is_zero() {
        rhs = &rhs + &(&exchange_weight * &z(&swapped)?);
    }
    let holds = lhs == rhs;
    Ok(TrainVerdict {
        lhs,
        rhs,
        keep_weight,
        exchange_weight,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(nq: u32) -> Scalar {
        Scalar::root_power(0, 1, nq)
    }

    #[test]
    fn table_examples() {
        for nq in 1..=3 {
            let d = r_denominator(0, 1, nq);
            let m = Spin::Minus;
            let a2 = r_weight(RConfig { ll: m, ul: m, ur: m, lr: m }, 0, 1, nq);
            assert_eq!(a2, Frac::one());
            let p = Spin::Plus(1);
            let a1 = r_weight(RConfig { ll: p, ul: p, ur: p, lr: p }, 0, 1, nq);
            assert_eq!(a1, Frac::new(x(nq) - Scalar::v(), d.clone()));
            let b1 = r_weight(RConfig { ll: p, ul: m, ur: p, lr: m }, 0, 1, nq);
            assert_eq!(b1, Frac::new(Scalar::v() * (Scalar::one() - x(nq)), d.clone()));
            let bad = r_weight(RConfig { ll: p, ul: m, ur: m, lr: m }, 0, 1, nq);
            assert!(bad.is_zero());
        }
    }

    #[test]
    fn rtt_small_cases() {
        // all minus except bottom and left lower: a quick sanity check
        let nq = 2;
        for b in all_rtt_boundaries(nq) {
            let v = check_rtt(b, nq);
            assert!(v.holds, "{b:?}: {} vs {}", v.lhs, v.rhs);
        }
    }

    #[test]
    fn unitarity_examples() {
        let nq = 2;
        let m = Spin::Minus;
        assert!(check_unitarity(m, m, m, m, (0, 1), nq).holds);
        let a = Spin::Plus(1);
        let b = Spin::Plus(2);
        assert!(check_unitarity(a, a, a, a, (0, 1), nq).holds);
        let v = check_unitarity(a, b, b, a, (0, 1), nq);
        assert!(v.holds && v.lhs.is_zero());
    }

    #[test]
    fn rrr_all_minus() {
        let m = Spin::Minus;
        let v = check_rrr([m, m, m], [m, m, m], (0, 1, 2), 2);
        assert!(v.holds);
        assert_eq!(v.lhs, Frac::one());
    }
}
