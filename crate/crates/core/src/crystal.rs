//! Crystal nodes, Gelfand–Tsetlin patterns and Whittaker values.
//!
//! The long word is fixed to `w_0 = s_{r-1} (s_{r-2} s_{r-1}) ⋯ (s_1 ⋯ s_{r-1})`, so a
//! node of `B(λ+ρ)` is a family `m_{i,j} >= 0` indexed by positive roots
//! `(i, j)`, `1 <= i < j <= r`, ordered lexicographically. Gauss sums are
//! taken at modulus `n_Q`; `q^e` is written `v^{-e}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{
    boundary_from_partition, check_partition, enumerate_states, lambda_plus_rho, partition_functions_by_charge,
    IceState, LatticeError,
};
use crate::metaplectic::{lattice_and_cosets, CosetData, CoverParams};
use crate::scalar::{gauss_eval, Scalar};
use crate::spin::rep;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrystalError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("pattern rows have the wrong shape")]
    Shape,
    #[error("pattern violates interleaving at row {row}, entry {col}")]
    Interleaving { row: usize, col: usize },
    #[error("pattern is not strict at row {row}")]
    NotStrict { row: usize },
    #[error("state does not match the boundary of the partition")]
    Boundary,
    #[error("columns {columns} too few for the pattern (need {needed})")]
    Columns { columns: usize, needed: usize },
}

/// Positive roots `(i, j)` in the order fixed by the long word.
pub fn positive_roots(r: usize) -> Vec<(usize, usize)> {
    (1..=r)
        .flat_map(|i| (i + 1..=r).map(move |j| (i, j)))
        .collect()
}

/// The reduced word `s_{r-1} (s_{r-2} s_{r-1}) ⋯ (s_1 ⋯ s_{r-1})` as a list
/// of simple indices; for `r = 3` this is `(2, 1, 2)`.
pub fn long_word(r: usize) -> Vec<usize> {
    (1..r).rev().flat_map(|k| k..r).collect()
}

/// A node of `B(λ+ρ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrystalNode {
    pub r: usize,
    /// `m_{i,j}` in root order.
    pub m: Vec<i64>,
}

impl CrystalNode {
    fn slot(r: usize, i: usize, j: usize) -> usize {
        // Roots (1,2..r), (2,3..r), … laid out consecutively.
        (1..i).map(|k| r - k).sum::<usize>() + (j - i - 1)
    }

    /// `m_{i,j}`; zero outside the positive roots.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        if i >= 1 && i < j && j <= self.r {
            self.m[Self::slot(self.r, i, j)]
        } else {
            0
        }
    }

    /// `Σ_{k=j}^r m_{i,k}`.
    fn tail(&self, i: usize, j: usize) -> i64 {
        (j..=self.r).map(|k| self.get(i, k)).sum()
    }

    /// `r_{i,j} = Σ_{k<=i} m_{k,j}`.
    pub fn r_value(&self, i: usize, j: usize) -> i64 {
        (1..=i).map(|k| self.get(k, j)).sum()
    }

    /// `s_{i,j}`; equality in the membership inequality is `s = -1`.
    pub fn s_value(&self, i: usize, j: usize, lambda: &[i64]) -> i64 {
        gap(lambda, i) + self.tail(i + 1, j + 1) - self.tail(i, j)
    }

    /// Exponent `p` of `z` in `Π x_α^{m_α}` with `x_α = z^α`.
    pub fn z_exponent(&self) -> Vec<i64> {
        (1..=self.r)
            .map(|i| {
                (i + 1..=self.r).map(|j| self.get(i, j)).sum::<i64>()
                    - (1..i).map(|k| self.get(k, i)).sum::<i64>()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: BTreeMap<String, i64> = positive_roots(self.r)
            .into_iter()
            .map(|(i, j)| (format!("{i}{j}"), self.get(i, j)))
            .collect();
        serde_json::json!({ "longWord": long_word(self.r), "m": m })
    }
}

/// `λ_{r-i} - λ_{r-i+1}` (1-based parts).
fn gap(lambda: &[i64], i: usize) -> i64 {
    let r = lambda.len();
    lambda[r - i - 1] - lambda[r - i]
}

/// All nodes of `B(λ+ρ)`, in lexicographic order of `m`.
pub fn crystal_enumerate(lambda: &[i64], r: usize) -> Result<Vec<CrystalNode>, CrystalError> {
    check_partition(lambda, r)?;
    let roots = positive_roots(r);
    let mut out = Vec::new();
    let mut node = CrystalNode {
        r,
        m: vec![0; roots.len()],
    };
    // Row i of m depends on row i+1, so fill from the last row up.
    fn fill(node: &mut CrystalNode, lambda: &[i64], i: usize, j: usize, out: &mut Vec<CrystalNode>) {
        let r = node.r;
        if i == 0 {
            out.push(node.clone());
            return;
        }
        if j <= i {
            fill(node, lambda, i - 1, r, out);
            return;
        }
        let bound = gap(lambda, i) + 1 + node.tail(i + 1, j + 1) - node.tail(i, j + 1);
        let slot = CrystalNode::slot(r, i, j);
        for x in 0..=bound.max(-1) {
            node.m[slot] = x;
            fill(node, lambda, i, j - 1, out);
        }
        node.m[slot] = 0;
    }
    if r >= 2 {
        fill(&mut node, lambda, r - 1, r, &mut out);
    } else {
        out.push(node);
    }
    out.sort();
    Ok(out)
}

/// Box and circle flags of one root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Decoration {
    pub boxed: bool,
    pub circled: bool,
}

pub fn decoration(node: &CrystalNode, i: usize, j: usize, lambda: &[i64]) -> Decoration {
    Decoration {
        boxed: node.s_value(i, j, lambda) == -1,
        circled: node.get(i, j) == 0,
    }
}

/// How the weight of a circled root (a right-leaning pattern entry) is
/// normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum Normalization {
    /// `q^{r_α}`, as displayed next to Gauss sums that already carry the
    /// factor `1/q`.
    AsPrinted,
    /// `q^{r_α} · q^{-r_α} = 1`: every factor divided by the same power of
    /// `q` as the normalized Gauss sums. This is the weight the ice model
    /// reproduces.
    #[default]
    Normalized,
}

impl Normalization {
    fn circled(self, r: i64) -> Scalar {
        match self {
            Normalization::AsPrinted => Scalar::v_pow(-r),
            Normalization::Normalized => Scalar::one(),
        }
    }
}

/// `Π_α w(m, α)`.
pub fn node_weight(node: &CrystalNode, lambda: &[i64], nq: u32, norm: Normalization) -> Scalar {
    let mut w = Scalar::one().with_nq(nq);
    for (i, j) in positive_roots(node.r) {
        let d = decoration(node, i, j, lambda);
        let r_a = node.r_value(i, j);
        let f = match (d.circled, d.boxed) {
            (true, true) => return Scalar::zero().with_nq(nq),
            (true, false) => norm.circled(r_a),
            (false, _) => gauss_eval(r_a, node.s_value(i, j, lambda), nq),
        };
        w = w * f;
    }
    w.with_nq(nq)
}

/// `I_λ = Σ_node G(node) z^{p(node)}`.
pub fn i_lambda(lambda: &[i64], r: usize, nq: u32, norm: Normalization) -> Result<Scalar, CrystalError> {
    Ok(crystal_enumerate(lambda, r)?
        .iter()
        .map(|n| node_weight(n, lambda, nq, norm) * Scalar::z_monomial(&n.z_exponent()))
        .sum::<Scalar>()
        .with_nq(nq))
}

/// `w_0 x`: reverse the coordinates.
pub fn w0(x: &[i64]) -> Vec<i64> {
    x.iter().rev().copied().collect()
}

fn z_vector(key: &crate::scalar::MonomialKey, r: usize) -> Vec<i64> {
    (0..r).map(|k| key.z_exp(k) as i64).collect()
}

/// `I_{γ,λ}`: the monomials of `I` whose `z` exponent lies in
/// `γ - w_0 λ + Λ`.
pub fn coset_piece(i: &Scalar, gamma: &[i64], lambda: &[i64], cosets: &CosetData) -> Scalar {
    let r = lambda.len();
    let shift: Vec<i64> = gamma.iter().zip(w0(lambda)).map(|(g, l)| g - l).collect();
    let target = cosets.reduce(&shift);
    i.filter_terms(|k| cosets.reduce(&z_vector(k, r)) == target)
}

/// A Gelfand–Tsetlin pattern; `rows[k][l]` is `a_{k, k+l}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GtPattern {
    pub rows: Vec<Vec<i64>>,
}

impl GtPattern {
    /// Check shape and interleaving `a_{k,l} <= a_{k+1,l} <= a_{k,l-1}`.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, CrystalError> {
        let r = rows.len();
        if rows.iter().enumerate().any(|(k, row)| row.len() != r - k) {
            return Err(CrystalError::Shape);
        }
        let t = GtPattern { rows };
        for k in 1..r {
            for l in k..r {
                if !(t.a(k - 1, l) <= t.a(k, l) && t.a(k, l) <= t.a(k - 1, l - 1)) {
                    return Err(CrystalError::Interleaving { row: k, col: l });
                }
            }
        }
        Ok(t)
    }

    /// Like [`GtPattern::new`] and additionally strictly decreasing rows.
    pub fn strict(rows: Vec<Vec<i64>>) -> Result<Self, CrystalError> {
        let t = Self::new(rows)?;
        if let Some(row) = (0..t.r()).find(|&k| t.rows[k].windows(2).any(|w| w[0] <= w[1])) {
            return Err(CrystalError::NotStrict { row });
        }
        Ok(t)
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn a(&self, k: usize, l: usize) -> i64 {
        self.rows[k][l - k]
    }

    pub fn is_strict(&self) -> bool {
        self.rows.iter().all(|row| row.windows(2).all(|w| w[0] > w[1]))
    }

    /// `e_{i,j} = Σ_{k=j}^{r-1} (a_{i,k} - a_{i-1,k})`.
    pub fn e_value(&self, i: usize, j: usize) -> i64 {
        (j..self.r()).map(|k| self.a(i, k) - self.a(i - 1, k)).sum()
    }
}

/// All patterns (strict or not) with the given top row.
pub fn gt_enumerate(top: &[i64]) -> Vec<GtPattern> {
    fn below(row: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for w in row.windows(2) {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (w[1]..=w[0]).map(move |x| {
                        let mut p = p.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out
    }
    fn grow(rows: Vec<Vec<i64>>, out: &mut Vec<GtPattern>) {
        let last = rows.last().expect("top row").clone();
        if last.len() <= 1 {
            out.push(GtPattern { rows });
            return;
        }
        for next in below(&last) {
            let mut rows = rows.clone();
            rows.push(next);
            grow(rows, out);
        }
    }
    let mut out = Vec::new();
    if top.is_empty() {
        return out;
    }
    grow(vec![top.to_vec()], &mut out);
    out.sort();
    out
}

/// Pattern of a node: top row `λ+ρ` and `a_{k,l} = a_{k-1,l} + m_{r-l, r-k+1}`.
pub fn gt_from_node(node: &CrystalNode, lambda: &[i64]) -> GtPattern {
    let r = node.r;
    let mut rows = vec![lambda_plus_rho(lambda)];
    for k in 1..r {
        let row = (k..r)
            .map(|l| rows[k - 1][l - (k - 1)] + node.get(r - l, r - k + 1))
            .collect();
        rows.push(row);
    }
    GtPattern { rows }
}

/// Node of a pattern: `m_{i,j} = a_{r-j+1, r-i} - a_{r-j, r-i}`.
pub fn node_from_gt(t: &GtPattern) -> CrystalNode {
    let r = t.r();
    let m = positive_roots(r)
        .into_iter()
        .map(|(i, j)| t.a(r - j + 1, r - i) - t.a(r - j, r - i))
        .collect();
    CrystalNode { r, m }
}

/// Pattern of an ice state: the `-` columns of each row of vertical edges,
/// read from the top boundary down.
pub fn gt_from_ice(state: &IceState) -> Result<GtPattern, CrystalError> {
    let r = state.rows();
    let rows = (0..r).map(|k| state.minus_columns(r - k)).collect();
    GtPattern::strict(rows)
}

/// The ice state with `columns` columns whose `-` vertical spins are given
/// by a strict pattern.
pub fn ice_from_gt(t: &GtPattern, columns: usize) -> Result<IceState, CrystalError> {
    let r = t.r();
    if !t.is_strict() {
        return Err(CrystalError::NotStrict { row: 0 });
    }
    let needed = t.rows.first().and_then(|x| x.first()).map(|a| *a as usize + 1).unwrap_or(0);
    if columns < needed {
        return Err(CrystalError::Columns { columns, needed });
    }
    let mut vertical = vec![vec![true; columns]];
    for v in 1..=r {
        let mut row = vec![true; columns];
        for &a in &t.rows[r - v] {
            row[columns - 1 - a as usize] = false;
        }
        vertical.push(row);
    }
    IceState::from_vertical(vertical).ok_or(CrystalError::Boundary)
}

/// `Π γ(a_{i,j})` over `1 <= i <= j <= r-1`.
pub fn gt_weight(t: &GtPattern, nq: u32, norm: Normalization) -> Scalar {
    let r = t.r();
    let mut w = Scalar::one().with_nq(nq);
    for i in 1..r {
        for j in i..r {
            let (up_left, up_right, here) = (t.a(i - 1, j - 1), t.a(i - 1, j), t.a(i, j));
            let e = t.e_value(i, j);
            let f = match (up_left == here, here == up_right) {
                (true, true) => return Scalar::zero().with_nq(nq),
                (false, true) => norm.circled(e),
                (false, false) => gauss_eval(e, 0, nq),
                (true, false) => gauss_eval(e, -1, nq),
            };
            w = w * f;
        }
    }
    w.with_nq(nq)
}

/// Unreduced left charges `c'` of the ice state matching `t` in a grid
/// with `columns` columns, bottom row first.
pub fn charge_from_gt(t: &GtPattern, columns: i64) -> Vec<i64> {
    let r = t.r();
    (1..=r)
        .map(|i| {
            let k = r - i;
            let inner: i64 = if k + 1 < r {
                (k + 1..r).map(|j| t.a(k + 1, j) - t.a(k, j)).sum()
            } else {
                0
            };
            columns - t.a(k, k) + inner
        })
        .collect()
}

/// One coset class checked in [`verify_whittaker_ice`].
#[derive(Clone, Debug, Serialize)]
pub struct WhittakerCase {
    /// Canonical representative of the coset.
    pub gamma: Vec<i64>,
    /// Representative of the same coset with `|γ| = |λ|`, so that
    /// `γ - w_0 λ` is an `SL_r` coweight.
    pub gamma_sl: Vec<i64>,
    /// `[N̄ - γ - w_0 ρ]` computed from `gamma_sl`.
    pub charges: Vec<u32>,
    /// The same formula applied to the canonical representative; differs
    /// from `charges` when `Λ` is not contained in `n_Q ℤ^r`.
    pub canonical_charges: Vec<u32>,
    /// `Z(S_λ; c)`.
    pub lhs: Scalar,
    /// `z^{-N̄ + w_0 ρ + c} z^{w_0 λ} I_{γ,λ}`.
    pub rhs: Scalar,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WhittakerReport {
    pub lambda: Vec<i64>,
    pub columns: usize,
    pub params: CoverParams,
    pub nq: u32,
    pub normalization: Normalization,
    pub cases: Vec<WhittakerCase>,
    /// Charge classes with a nonzero partition function that no coset
    /// produced.
    pub unmatched_charges: Vec<Vec<u32>>,
    /// Charge classes produced by more than one coset.
    pub repeated_charges: Vec<Vec<u32>>,
    pub holds: bool,
}

/// `c = [N̄ - γ - w_0 ρ]` with representatives in `1..=n_Q`.
pub fn charge_of_coset(gamma: &[i64], columns: usize, nq: u32) -> Vec<u32> {
    gamma
        .iter()
        .enumerate()
        .map(|(k, g)| rep(columns as i64 - g - k as i64, nq))
        .collect()
}

/// Partition functions against normalized crystal sums, coset by coset.
///
/// The ice side enumerates admissible states; the crystal side sums node
/// weights over `B(λ+ρ)` and projects onto the cosets of `Λ`.
pub fn verify_whittaker_ice(
    lambda: &[i64],
    columns: usize,
    params: &CoverParams,
    norm: Normalization,
) -> Result<WhittakerReport, CrystalError> {
    let r = lambda.len();
    let nq = params.nq();
    let sys = boundary_from_partition(lambda, r, columns, nq)?;
    let ice = partition_functions_by_charge(&sys);
    let params = CoverParams { r, ..*params };
    let cosets = lattice_and_cosets(params);
    let total = i_lambda(lambda, r, nq, norm)?;
    let w0_rho: Vec<i64> = (0..r as i64).collect();
    let w0_lambda = w0(lambda);
    let mut cases = Vec::new();
    let mut seen: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for gamma in &cosets.gamma {
        let piece = coset_piece(&total, gamma, lambda, &cosets);
        let Some((key, _)) = piece.terms().next() else {
            continue;
        };
        let gamma_sl: Vec<i64> = z_vector(key, r)
            .iter()
            .zip(&w0_lambda)
            .map(|(p, l)| p + l)
            .collect();
        debug_assert!(cosets.same_coset(&gamma_sl, gamma));
        let charges = charge_of_coset(&gamma_sl, columns, nq);
        *seen.entry(charges.clone()).or_default() += 1;
        let shift: Vec<i64> = (0..r)
            .map(|k| -(columns as i64) + w0_rho[k] + charges[k] as i64 + w0_lambda[k])
            .collect();
        let rhs = (Scalar::z_monomial(&shift) * piece).with_nq(nq);
        let lhs = ice
            .get(&charges)
            .cloned()
            .unwrap_or_else(|| Scalar::zero().with_nq(nq));
        let holds = lhs == rhs;
        cases.push(WhittakerCase {
            gamma: gamma.clone(),
            canonical_charges: charge_of_coset(gamma, columns, nq),
            gamma_sl,
            charges,
            lhs,
            rhs,
            holds,
        });
    }
    let unmatched_charges: Vec<Vec<u32>> = ice
        .iter()
        .filter(|(c, z)| !z.is_zero() && !seen.contains_key(*c))
        .map(|(c, _)| c.clone())
        .collect();
    let repeated_charges: Vec<Vec<u32>> = seen
        .iter()
        .filter(|(_, n)| **n > 1)
        .map(|(c, _)| c.clone())
        .collect();
    let holds = cases.iter().all(|c| c.holds) && unmatched_charges.is_empty() && repeated_charges.is_empty();
    Ok(WhittakerReport {
        lambda: lambda.to_vec(),
        columns,
        params,
        nq,
        normalization: norm,
        cases,
        unmatched_charges,
        repeated_charges,
        holds,
    })
}

/// `(I_{γ,λ}, z^{w_0 λ} I_{γ,λ})`; the second is the Whittaker value up to
/// `δ^{1/2}`.
pub fn whittaker_value(
    lambda: &[i64],
    gamma: &[i64],
    params: &CoverParams,
    norm: Normalization,
) -> Result<(Scalar, Scalar), CrystalError> {
    let r = lambda.len();
    let nq = params.nq();
    let cosets = lattice_and_cosets(CoverParams { r, ..*params });
    let piece = coset_piece(&i_lambda(lambda, r, nq, norm)?, gamma, lambda, &cosets);
    let value = (Scalar::z_monomial(&w0(lambda)) * piece.clone()).with_nq(nq);
    Ok((piece, value))
}

/// Counts of the three index sets for one partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionCounts {
    pub nodes: usize,
    /// Nodes with no root both boxed and circled.
    pub nodes_nonvanishing: usize,
    pub patterns: usize,
    pub strict_patterns: usize,
    pub ice_states: usize,
}

/// Round trips node → pattern → node, pattern → ice → pattern and
/// ice → pattern → ice over full enumerations, plus the counts.
pub fn bijection_suite(lambda: &[i64]) -> Result<(BijectionCounts, bool), CrystalError> {
    let r = lambda.len();
    let top = lambda_plus_rho(lambda);
    let columns = lambda.first().map(|l| *l as usize + r).unwrap_or(0);
    let nodes = crystal_enumerate(lambda, r)?;
    let patterns = gt_enumerate(&top);
    let states = enumerate_states(&boundary_from_partition(lambda, r, columns, 1)?);
    let mut from_nodes: Vec<GtPattern> = nodes.par_iter().map(|n| gt_from_node(n, lambda)).collect();
    let mut ok = from_nodes
        .par_iter()
        .zip(nodes.par_iter())
        .all(|(t, n)| GtPattern::new(t.rows.clone()).is_ok() && node_from_gt(t) == *n);
    from_nodes.par_sort();
    ok &= from_nodes == patterns;
    let strict: Vec<&GtPattern> = patterns.iter().filter(|t| t.is_strict()).collect();
    ok &= strict.par_iter().all(|t| match ice_from_gt(t, columns) {
        Ok(s) => gt_from_ice(&s).as_ref() == Ok(*t),
        Err(_) => false,
    });
    ok &= states.par_iter().all(|s| match gt_from_ice(s).and_then(|t| ice_from_gt(&t, columns)) {
        Ok(back) => back == *s,
        Err(_) => false,
    });
    let nonvanishing = nodes
        .par_iter()
        .filter(|n| {
            positive_roots(r).iter().all(|&(i, j)| {
                let d = decoration(n, i, j, lambda);
                !(d.boxed && d.circled)
            })
        })
        .count();
    let counts = BijectionCounts {
        nodes: nodes.len(),
        nodes_nonvanishing: nonvanishing,
        patterns: patterns.len(),
        strict_patterns: strict.len(),
        ice_states: states.len(),
    };
    ok &= counts.nodes == counts.patterns
        && counts.nodes_nonvanishing == counts.strict_patterns
        && counts.strict_patterns == counts.ice_states;
    Ok((counts, ok))
}
