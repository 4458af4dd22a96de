//! The super R-matrix of the evaluation module with basis `v_0 .. v_{n_Q}`,
//! its Drinfeld twist, and the comparison with the R-vertex weights.
//!
//! Basis index 0 is `v_0` (the spin `-`, odd); index `a >= 1` is `v_a`
//! (the spin `+a`, even), so `+n_Q` is the largest positive index. The
//! matrix parameter `z` is `(z_i / z_j)^{n_Q}` for the two strands the
//! matrix acts on, and the super R-matrix's deformation parameter is `v^{1/2}`.
//!
//! A two-leg matrix is stored with rows indexed by the output pair and
//! columns by the input pair. R-vertex weights correspond to entries
//! through `R[(ul, ll), (lr, ur)]`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rvertex::{r_weight, RConfig};
use crate::scalar::{
    eval_frac_mod_p, field, schwartz_zippel_log2_bound, Assignment, EvalError, Frac, Scalar,
};
use crate::spin::Spin;

/// Basis index of a decorated spin.
pub fn index_of(s: Spin) -> usize {
    s.charge() as usize
}

pub fn spin_of(idx: usize) -> Spin {
    if idx == 0 {
        Spin::Minus
    } else {
        Spin::Plus(idx as u32)
    }
}

/// Parity of a basis vector: `v_0` is odd.
pub fn parity(idx: usize) -> u8 {
    u8::from(idx == 0)
}

/// A sparse matrix on `legs` tensor factors of the `(n_Q + 1)`-dimensional
/// module.
#[derive(Clone, Debug)]
pub struct TensorMatrix {
    pub nq: u32,
    pub legs: usize,
    pub entries: BTreeMap<(usize, usize), Frac>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("twist element is not a monomial matrix")]
    NotInvertible,
    #[error("entry {row:?},{col:?} keeps a fractional exponent: {value}")]
    NonIntegral {
        row: Vec<usize>,
        col: Vec<usize>,
        value: String,
    },
}

impl TensorMatrix {
    pub fn zero(nq: u32, legs: usize) -> Self {
        TensorMatrix {
            nq,
            legs,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(nq: u32, legs: usize) -> Self {
        let mut m = Self::zero(nq, legs);
        for i in 0..m.dim() {
            m.entries.insert((i, i), Frac::one());
        }
        m
    }

    pub fn base(&self) -> usize {
        self.nq as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.base().pow(self.legs as u32)
    }

    /// Basis indices of each leg, first leg first.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let b = self.base();
        let mut out = vec![0; self.legs];
        for k in (0..self.legs).rev() {
            out[k] = idx % b;
            idx /= b;
        }
        out
    }

    pub fn join(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, d| acc * self.base() + d)
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> Frac {
        self.entries
            .get(&(self.join(row), self.join(col)))
            .cloned()
            .unwrap_or_else(Frac::zero)
    }

    pub fn set(&mut self, row: &[usize], col: &[usize], value: Frac) {
        let key = (self.join(row), self.join(col));
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn mul(&self, other: &TensorMatrix) -> TensorMatrix {
        assert_eq!((self.nq, self.legs), (other.nq, other.legs));
        let mut by_row: BTreeMap<usize, Vec<(usize, &Frac)>> = BTreeMap::new();
        for ((r, c), f) in &other.entries {
            by_row.entry(*r).or_default().push((*c, f));
        }
        let mut acc: BTreeMap<(usize, usize), Frac> = BTreeMap::new();
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    let p = a * *b;
                    match acc.get_mut(&(*r, *c)) {
                        Some(x) => *x = &*x + &p,
                        None => {
                            acc.insert((*r, *c), p);
                        }
                    }
                }
            }
        }
        acc.retain(|_, f| !f.is_zero());
        TensorMatrix {
            nq: self.nq,
            legs: self.legs,
            entries: acc,
        }
    }

    /// Entrywise equality by cross-multiplication.
    pub fn equals(&self, other: &TensorMatrix) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.entries.get(k).cloned().unwrap_or_else(Frac::zero);
            let b = other.entries.get(k).cloned().unwrap_or_else(Frac::zero);
            a == b
        })
    }

    pub fn is_identity(&self) -> bool {
        self.equals(&Self::identity(self.nq, self.legs))
    }

    /// Exchange the two legs of a two-leg matrix; with `graded`, the flip
    /// carries the sign `(-1)^{[x][y]}` on both sides.
    pub fn flip(&self, graded: bool) -> TensorMatrix {
        assert_eq!(self.legs, 2);
        let mut out = Self::zero(self.nq, 2);
        for ((r, c), f) in &self.entries {
            let (rd, cd) = (self.digits(*r), self.digits(*c));
            let sign = if graded {
                (parity(rd[0]) * parity(rd[1]) + parity(cd[0]) * parity(cd[1])) % 2
            } else {
                0
            };
            let v = if sign == 1 { -f.clone() } else { f.clone() };
            out.set(&[rd[1], rd[0]], &[cd[1], cd[0]], v);
        }
        out
    }

    /// Inverse of a matrix with exactly one monomial entry in each row and
    /// column.
    pub fn monomial_inverse(&self) -> Option<TensorMatrix> {
        let mut out = Self::zero(self.nq, self.legs);
        let mut seen_cols = std::collections::BTreeSet::new();
        let mut rows = std::collections::BTreeSet::new();
        for ((r, c), f) in &self.entries {
            if !rows.insert(*r) || !seen_cols.insert(*c) {
                return None;
            }
            let num = f.num.inv_monomial()?;
            let inv = Frac::new(&num * &f.den, Scalar::one());
            out.entries.insert((*c, *r), inv);
        }
        (rows.len() == self.dim()).then_some(out)
    }

    /// Embed a two-leg matrix acting on legs `p < q` of a `total`-leg
    /// space. With `graded`, the second leg is carried past the legs in
    /// between by graded flips, which contributes the sign
    /// `(-1)^{|B| (sum of parities strictly between p and q)}` for the
    /// second-leg factor `B`.
    pub fn embed(&self, p: usize, q: usize, total: usize, graded: bool) -> TensorMatrix {
        assert!(self.legs == 2 && p < q && q < total);
        let mut out = Self::zero(self.nq, total);
        let b = self.base();
        let others: Vec<usize> = (0..total).filter(|k| *k != p && *k != q).collect();
        let n_other = b.pow(others.len() as u32);
        for ((r, c), f) in &self.entries {
            let (rd, cd) = (self.digits(*r), self.digits(*c));
            let deg_b = (parity(rd[1]) + parity(cd[1])) as usize;
            for o in 0..n_other {
                let mut rest = o;
                let mut x = vec![0usize; total];
                for k in others.iter().rev() {
                    x[*k] = rest % b;
                    rest /= b;
                }
                let mut input = x.clone();
                input[p] = cd[0];
                input[q] = cd[1];
                let mut output = x;
                output[p] = rd[0];
                output[q] = rd[1];
                let mut sign = 0usize;
                if graded {
                    let between: usize =
                        input[p + 1..q].iter().map(|i| parity(*i) as usize).sum();
                    sign = (deg_b * between) % 2;
                }
                let v = if sign == 1 { -f.clone() } else { f.clone() };
                out.set(&output, &input, v);
            }
        }
        out
    }

    /// Every entry has integral `v` and Gauss exponents.
    pub fn check_integral(&self) -> Result<(), TwistError> {
        for ((r, c), f) in &self.entries {
            if !f.is_integral() {
                return Err(TwistError::NonIntegral {
                    row: self.digits(*r),
                    col: self.digits(*c),
                    value: f.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Sparse triplets `{row, col, value}` with row and column as basis
    /// index lists.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((r, c), f)| {
                serde_json::json!({
                    "row": self.digits(*r),
                    "col": self.digits(*c),
                    "value": f,
                })
            })
            .collect();
        serde_json::json!({ "nq": self.nq, "legs": self.legs, "entries": entries })
    }
}

/// `v^{1/2}`, the deformation parameter of the super R-matrix.
fn half_v() -> Scalar {
    Scalar::v_quarter_pow(2)
}

/// The super R-matrix on strands `(i, j)` with `z = (z_i/z_j)^{n_Q}`.
pub fn kojima_r(i: usize, j: usize, nq: u32) -> TensorMatrix {
    let z = Scalar::root_power(i, j, nq);
    let q = half_v();
    let q2 = Scalar::v();
    let den = Scalar::one() - &q2 * &z;
    let frac = |num: Scalar| Frac::new(num, den.clone());
    let mut m = TensorMatrix::zero(nq, 2);
    let n = nq as usize;
    m.set(&[0, 0], &[0, 0], Frac::from_scalar(Scalar::int(-1)));
    for a in 1..=n {
        m.set(&[a, a], &[a, a], frac(&z - &q2));
    }
    for a in 0..=n {
        for b in 0..=n {
            if a != b {
                m.set(&[a, b], &[a, b], frac(&q * &(Scalar::one() - z.clone())));
            }
            if a < b {
                m.set(&[a, b], &[b, a], frac(Scalar::one() - q2.clone()));
                m.set(&[b, a], &[a, b], frac(&(Scalar::one() - q2.clone()) * &z));
            }
        }
    }
    m
}

/// The twist element: diagonal, `F = sum f_{a,b} e_{a,a} (x) e_{b,b}` with
/// `f_{a,a} = 1`, `f_{a,0} = v^{1/4}`, `f_{0,a} = v^{-1/4}` and, for
/// `0 < a < b`, `f_{b,a} = (v^{-1/2} g(a - b))^{1/2}`, `f_{a,b} = f_{b,a}^{-1}`.
pub fn twist_f(nq: u32) -> TensorMatrix {
    let n = nq as usize;
    let mut m = TensorMatrix::zero(nq, 2);
    let mono = |vq: i64, gauss: &[(i64, i64)]| {
        Frac::from_scalar(Scalar::monomial(1.into(), vq, &[], gauss, nq))
    };
    for a in 0..=n {
        m.set(&[a, a], &[a, a], Frac::one());
    }
    for a in 1..=n {
        m.set(&[a, 0], &[a, 0], mono(1, &[]));
        m.set(&[0, a], &[0, a], mono(-1, &[]));
        for b in a + 1..=n {
            let d = a as i64 - b as i64;
            m.set(&[b, a], &[b, a], mono(-1, &[(d, 1)]));
            m.set(&[a, b], &[a, b], mono(1, &[(d, -1)]));
        }
    }
    m
}

/// `F_21 R F^{-1}`, asserting that every fractional exponent cancels.
pub fn drinfeld_twist(r: &TensorMatrix, f: &TensorMatrix) -> Result<TensorMatrix, TwistError> {
    let inv = f.monomial_inverse().ok_or(TwistError::NotInvertible)?;
    let out = f.flip(false).mul(r).mul(&inv);
    out.check_integral()?;
    Ok(out)
}

/// Multiply each entry in row `(k1, k2)` by `(-1)^{[k1][k2]}`.
pub fn signature_adjust(r: &TensorMatrix) -> TensorMatrix {
    let mut out = r.clone();
    for ((row, _), f) in out.entries.iter_mut() {
        let d = r.digits(*row);
        if parity(d[0]) * parity(d[1]) == 1 {
            *f = -f.clone();
        }
    }
    out
}

/// The R-vertex weights on strands `(i, j)` as a two-leg matrix.
pub fn ice_r_matrix(i: usize, j: usize, nq: u32) -> TensorMatrix {
    let mut m = TensorMatrix::zero(nq, 2);
    for ll in Spin::all(nq) {
        for ul in Spin::all(nq) {
            for ur in Spin::all(nq) {
                for lr in Spin::all(nq) {
                    let w = r_weight(RConfig { ll, ul, ur, lr }, i, j, nq);
                    m.set(
                        &[index_of(ul), index_of(ll)],
                        &[index_of(lr), index_of(ur)],
                        w,
                    );
                }
            }
        }
    }
    m
}

/// The twisted, sign-adjusted super R-matrix on strands `(i, j)`.
pub fn twisted_r(i: usize, j: usize, nq: u32) -> Result<TensorMatrix, TwistError> {
    Ok(signature_adjust(&drinfeld_twist(&kojima_r(i, j, nq), &twist_f(nq))?))
}

/// Weight family of a nonzero two-leg entry: `I`-`III` are the three `a1`
/// variants, then `a2`, `b1`, `b2`, `c1`, `c2`.
pub fn family(row: [usize; 2], col: [usize; 2]) -> Option<&'static str> {
    let [a, b] = row;
    if row == col {
        Some(match (a, b) {
            (0, 0) => "IV",
            (0, _) => "V",
            (_, 0) => "VI",
            _ if a == b => "I",
            _ => "II",
        })
    } else if col == [b, a] {
        Some(match (a, b) {
            (0, _) => "VIII",
            (_, 0) => "VII",
            _ => "III",
        })
    } else {
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub nq: u32,
    pub entries_checked: usize,
    /// Per weight family: whether the untwisted super R-matrix already
    /// equals the R-vertex weights.
    pub untwisted_agreement: BTreeMap<String, bool>,
    pub ff21_identity: bool,
    pub braid_relation: bool,
    pub integral: bool,
    pub mismatches: Vec<String>,
    pub holds: bool,
}

/// Compare the twisted super R-matrix with the R-vertex weights entry by
/// entry, and check the matrix conditions on the twist.
pub fn compare_to_ice_r(nq: u32) -> TwistReport {
    let ice = ice_r_matrix(0, 1, nq);
    let kojima = kojima_r(0, 1, nq);
    let (twisted, integral, mut mismatches) = match twisted_r(0, 1, nq) {
        Ok(t) => (t, true, Vec::new()),
        Err(e) => (TensorMatrix::zero(nq, 2), false, vec![e.to_string()]),
    };
    let n = nq as usize + 1;
    let mut checked = 0;
    let mut untwisted_agreement: BTreeMap<String, bool> = BTreeMap::new();
    for r in 0..n * n {
        for c in 0..n * n {
            let (rd, cd) = (ice.digits(r), ice.digits(c));
            let want = ice.get(&rd, &cd);
            let got = twisted.get(&rd, &cd);
            checked += 1;
            if want != got {
                mismatches.push(format!(
                    "row {rd:?} col {cd:?}: twisted {got}, R-vertex {want}"
                ));
            }
            if let Some(fam) = family([rd[0], rd[1]], [cd[0], cd[1]]) {
                let same = kojima.get(&rd, &cd) == want;
                *untwisted_agreement.entry(fam.to_string()).or_insert(true) &= same;
            }
        }
    }
    let (ff21_identity, braid_relation) = twist_conditions(nq);
    let holds = mismatches.is_empty() && integral && ff21_identity && braid_relation;
    TwistReport {
        nq,
        entries_checked: checked,
        untwisted_agreement,
        ff21_identity,
        braid_relation,
        integral,
        mismatches,
        holds,
    }
}

/// `F F_21 = 1` and `F_12 F_13 F_23 = F_23 F_13 F_12`.
pub fn twist_conditions(nq: u32) -> (bool, bool) {
    let f = twist_f(nq);
    let ff21 = f.mul(&f.flip(false)).is_identity();
    let f12 = f.embed(0, 1, 3, false);
    let f13 = f.embed(0, 2, 3, false);
    let f23 = f.embed(1, 2, 3, false);
    let braid = f12.mul(&f13).mul(&f23).equals(&f23.mul(&f13).mul(&f12));
    (ff21, braid)
}

#[derive(Clone, Debug, Serialize)]
pub struct YbeReport {
    pub nq: u32,
    pub graded: bool,
    pub ybe: bool,
    pub unitarity: bool,
    pub holds: bool,
}

/// Yang–Baxter equation `R_12 R_13 R_23 = R_23 R_13 R_12` and unitarity
/// `R_ij(z) R_ji(1/z) = 1` for a family of two-leg matrices indexed by
/// strand pairs, with or without Koszul signs.
pub fn check_ybe<F>(build: F, nq: u32, graded: bool) -> YbeReport
where
    F: Fn(usize, usize) -> TensorMatrix,
{
    let r12 = build(0, 1).embed(0, 1, 3, graded);
    let r13 = build(0, 2).embed(0, 2, 3, graded);
    let r23 = build(1, 2).embed(1, 2, 3, graded);
    let ybe = r12.mul(&r13).mul(&r23).equals(&r23.mul(&r13).mul(&r12));
    let unitarity = build(0, 1).mul(&build(1, 0).flip(graded)).is_identity();
    YbeReport {
        nq,
        graded,
        ybe,
        unitarity,
        holds: ybe && unitarity,
    }
}

/// Graded Yang–Baxter equation and unitarity of the untwisted super
/// R-matrix.
pub fn check_graded_ybe(nq: u32) -> YbeReport {
    check_ybe(|i, j| kojima_r(i, j, nq), nq, true)
}

fn eval_matrix(m: &TensorMatrix, asg: &Assignment) -> Result<BTreeMap<(usize, usize), u64>, EvalError> {
    let mut out = BTreeMap::new();
    for (k, f) in &m.entries {
        let x = eval_frac_mod_p(f, asg)?;
        if x != 0 {
            out.insert(*k, x);
        }
    }
    Ok(out)
}

fn field_mul(
    a: &BTreeMap<(usize, usize), u64>,
    b: &BTreeMap<(usize, usize), u64>,
    p: u64,
) -> BTreeMap<(usize, usize), u64> {
    let mut by_row: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for ((r, c), x) in b {
        by_row.entry(*r).or_default().push((*c, *x));
    }
    let mut out: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for ((r, k), x) in a {
        for (c, y) in by_row.get(k).into_iter().flatten() {
            let e = out.entry((*r, *c)).or_insert(0);
            *e = field::add(*e, field::mul(*x, *y, p), p);
        }
    }
    out.retain(|_, x| *x != 0);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularYbeReport {
    pub nq: u32,
    pub points: u32,
    pub prime: u64,
    pub degree: u64,
    pub log2_failure_bound: f64,
    pub failures: Vec<String>,
}

/// Graded Yang–Baxter equation of the untwisted super R-matrix at random
/// points of `F_p`. Over the common denominator of the three factors, each
/// entry of the difference of the two sides is a sum of products of one
/// numerator from each factor, so its degree is at most the sum of the
/// factors' largest numerator degrees.
pub fn check_graded_ybe_modular(nq: u32, points: u32, p: u64, seed: u64) -> ModularYbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = [
        kojima_r(0, 1, nq).embed(0, 1, 3, true),
        kojima_r(0, 2, nq).embed(0, 2, 3, true),
        kojima_r(1, 2, nq).embed(1, 2, 3, true),
    ];
    let mut failures = Vec::new();
    let mut done = 0;
    while done < points {
        let asg = Assignment::random(nq, 3, p, &mut rng);
        let evals: Result<Vec<_>, _> = mats.iter().map(|m| eval_matrix(m, &asg)).collect();
        let Ok(e) = evals else { continue };
        let lhs = field_mul(&field_mul(&e[0], &e[1], p), &e[2], p);
        let rhs = field_mul(&field_mul(&e[2], &e[1], p), &e[0], p);
        if lhs != rhs {
            failures.push(format!("point {done}: sides differ"));
        }
        done += 1;
    }
    let degree = mats
        .iter()
        .map(|m| {
            m.entries
                .values()
                .map(|f| f.num.exponent_box(nq).degree())
                .max()
                .unwrap_or(0)
        })
        .sum();
    ModularYbeReport {
        nq,
        points,
        prime: p,
        degree,
        log2_failure_bound: schwartz_zippel_log2_bound(degree, p, points),
        failures,
    }
}
