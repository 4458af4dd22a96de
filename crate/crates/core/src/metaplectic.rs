//! Combinatorics of a metaplectic cover of `GL_r` given by `(n, b, c)`.
//!
//! The cover is described by the symmetric form `B_{b,c}` with `c` on the
//! diagonal and `c - b` off it, so `Q(α∨) = b` for every simple coroot and
//! `n_Q = n / gcd(n, b)`. This module computes the lattice
//! `Λ = {x : B x ≡ 0 mod n}`, canonical representatives of `ℤ^r / Λ`, the
//! scattering coefficients of the normalized intertwiner on Whittaker
//! functions, and checks them against the R-vertex weights.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::rvertex::{r_weight, RConfig};
use crate::scalar::{Frac, Scalar};
use crate::spin::Spin;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("rank must be at least {min}, got {r}")]
    Rank { r: usize, min: usize },
    #[error("simple index {i} out of range for rank {r}")]
    SimpleIndex { i: usize, r: usize },
    #[error("coweight has length {len}, expected {r}")]
    Length { len: usize, r: usize },
    #[error("Q(α∨) = 0 with B(α∨, μ) = {b_mu} != 0")]
    Degenerate { b_mu: i64 },
    #[error("coset count {num}/{den} is not an integer")]
    NonIntegral { num: u64, den: u64 },
}

/// Parameters `(n, b, c)` of the cover and the rank `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CoverParams {
    pub n: u32,
    pub b: i64,
    pub c: i64,
    pub r: usize,
}

impl CoverParams {
    pub fn new(n: u32, b: i64, c: i64, r: usize) -> Result<Self, CoverError> {
        if n == 0 {
            return Err(CoverError::ZeroDegree);
        }
        if r == 0 {
            return Err(CoverError::Rank { r, min: 1 });
        }
        Ok(CoverParams { n, b, c, r })
    }

    /// The dot-product cover `b = c = 1`.
    pub fn dot(n: u32, r: usize) -> Self {
        CoverParams { n, b: 1, c: 1, r }
    }

    /// `n_Q = n / gcd(n, b)`, with `gcd(n, 0) = n`.
    pub fn nq(&self) -> u32 {
        n_q(self.n, self.b)
    }

    /// `Q(α∨)` for a simple coroot.
    pub fn q_simple(&self) -> i64 {
        self.b
    }

    pub fn form(&self) -> BilinearForm {
        bilinear_form(self.b, self.c, self.r)
    }
}

/// `n / gcd(n, b)`.
pub fn n_q(n: u32, b: i64) -> u32 {
    let g = (n as i64).gcd(&b);
    (n as i64 / g) as u32
}

/// Whether two covers of the same degree give inequivalent extensions:
/// `2(c_1 - c_2) ≢ 0` or `b_1 ≢ b_2` modulo `n`.
pub fn covers_distinguishable(x: &CoverParams, y: &CoverParams) -> bool {
    assert_eq!(x.n, y.n, "covers of different degree");
    let n = x.n as i64;
    (2 * (x.c - y.c)).rem_euclid(n) != 0 || (x.b - y.b).rem_euclid(n) != 0
}

/// The matrix of `B_{b,c}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinearForm {
    pub matrix: Vec<Vec<i64>>,
}

pub fn bilinear_form(b: i64, c: i64, r: usize) -> BilinearForm {
    let matrix = (0..r)
        .map(|i| (0..r).map(|j| if i == j { c } else { c - b }).collect())
        .collect();
    BilinearForm { matrix }
}

impl BilinearForm {
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn eval(&self, x: &[i64], y: &[i64]) -> i64 {
        self.apply(x).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// True when `B(x, y) ∈ nℤ` for every `y`.
    pub fn in_lattice(&self, x: &[i64], n: u32) -> bool {
        self.apply(x).iter().all(|v| v.rem_euclid(n as i64) == 0)
    }
}

/// `Λ`, its canonical basis, and the representatives `Γ` of `ℤ^r / Λ`.
#[derive(Clone, Debug, Serialize)]
pub struct CosetData {
    pub params: CoverParams,
    /// Columns of a lower triangular basis of `Λ` (stored as a list of
    /// basis vectors); vector `k` vanishes in coordinates `< k`.
    pub basis: Vec<Vec<i64>>,
    pub gamma: Vec<Vec<i64>>,
    pub index: u64,
}

impl CosetData {
    /// Diagonal entries of the triangular basis.
    pub fn steps(&self) -> Vec<i64> {
        (0..self.basis.len()).map(|k| self.basis[k][k]).collect()
    }

    /// The representative of `x + Λ` in the box `0 <= x_k < steps[k]`.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        let mut x = x.to_vec();
        for (k, col) in self.basis.iter().enumerate() {
            let q = x[k].div_euclid(col[k]);
            if q != 0 {
                for (xi, ci) in x.iter_mut().zip(col) {
                    *xi -= q * ci;
                }
            }
        }
        x
    }

    pub fn same_coset(&self, x: &[i64], y: &[i64]) -> bool {
        self.reduce(x) == self.reduce(y)
    }

    /// Whether reducing the representatives modulo `n_Q` keeps them
    /// distinct.
    pub fn injective_mod_nq(&self) -> bool {
        let nq = self.params.nq() as i64;
        let mut seen: Vec<Vec<i64>> = self
            .gamma
            .iter()
            .map(|g| g.iter().map(|x| x.rem_euclid(nq)).collect())
            .collect();
        seen.sort();
        seen.dedup();
        seen.len() == self.gamma.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "B": self.params.form().matrix,
            "n_Q": self.params.nq(),
            "lambda_basis": self.basis,
            "gamma": self.gamma,
            "index": self.index,
        })
    }
}

/// Diagonalize `a` by row and column operations, returning the diagonal and
/// the accumulated column transform `v` (so `U a v = diag` for some
/// unimodular `U`).
fn diagonalize(a: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let r = a.len();
    let mut a = a.to_vec();
    let mut v: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| (i == j) as i64).collect())
        .collect();
    for t in 0..r {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..r).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            a.swap(t, pi);
            for row in a.iter_mut().chain(v.iter_mut()) {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t].div_euclid(p);
                for j in 0..r {
                    a[i][j] -= q * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..r {
                let q = a[t][j].div_euclid(p);
                for row in a.iter_mut().chain(v.iter_mut()) {
                    row[j] -= q * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    ((0..r).map(|k| a[k][k]).collect(), v)
}

/// Column Hermite form: lower triangular with positive diagonal and the
/// entries left of the diagonal reduced into `[0, diagonal)`.
fn hermite_columns(cols: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let r = cols.len();
    let mut c = cols;
    for k in 0..r {
        loop {
            let nz: Vec<usize> = (k..r).filter(|&j| c[j][k] != 0).collect();
            let Some(&m) = nz.iter().min_by_key(|&&j| c[j][k].abs()) else {
                panic!("lattice basis is not full rank");
            };
            c.swap(k, m);
            if nz.len() == 1 {
                break;
            }
            for j in k + 1..r {
                let q = c[j][k].div_euclid(c[k][k]);
                if q != 0 {
                    let pivot = c[k].clone();
                    for (x, p) in c[j].iter_mut().zip(&pivot) {
                        *x -= q * p;
                    }
                }
            }
        }
        if c[k][k] < 0 {
            for x in c[k].iter_mut() {
                *x = -*x;
            }
        }
        for j in 0..k {
            let q = c[j][k].div_euclid(c[k][k]);
            if q != 0 {
                let pivot = c[k].clone();
                for (x, p) in c[j].iter_mut().zip(&pivot) {
                    *x -= q * p;
                }
            }
        }
    }
    c
}

/// The kernel lattice of `x ↦ B x mod n` and its coset representatives.
pub fn lattice_and_cosets(params: CoverParams) -> CosetData {
    let r = params.r;
    let n = params.n as i64;
    let (diag, v) = diagonalize(&params.form().matrix);
    let cols: Vec<Vec<i64>> = (0..r)
        .map(|k| {
            let m = n / diag[k].gcd(&n);
            (0..r).map(|i| v[i][k] * m).collect()
        })
        .collect();
    let basis = hermite_columns(cols);
    let steps: Vec<i64> = (0..r).map(|k| basis[k][k]).collect();
    let mut gamma = vec![vec![]];
    for &s in &steps {
        gamma = gamma
            .into_iter()
            .flat_map(|g: Vec<i64>| {
                (0..s).map(move |x| {
                    let mut g = g.clone();
                    g.push(x);
                    g
                })
            })
            .collect();
    }
    let index = steps.iter().product::<i64>() as u64;
    CosetData {
        params,
        basis,
        gamma,
        index,
    }
}

/// `|ℤ^r / Λ|` by scanning `[0, n)^r`; `Λ` contains `nℤ^r`, so the index is
/// `n^r` divided by the number of lattice points in the box.
pub fn brute_force_index(params: CoverParams) -> u64 {
    let n = params.n as i64;
    let form = params.form();
    let total = (params.n as u64).pow(params.r as u32);
    let mut hits = 0u64;
    let mut x = vec![0i64; params.r];
    for mut code in 0..total {
        for xi in x.iter_mut() {
            *xi = (code % params.n as u64) as i64;
            code /= params.n as u64;
        }
        hits += form.in_lattice(&x, n as u32) as u64;
    }
    total / hits
}

/// `n^{r-1} / (gcd(b r, n) gcd(b, n)^{r-2})`.
pub fn sl_coset_count(n: u32, b: i64, r: usize) -> Result<u64, CoverError> {
    if r < 2 {
        return Err(CoverError::Rank { r, min: 2 });
    }
    if n == 0 {
        return Err(CoverError::ZeroDegree);
    }
    let n64 = n as i64;
    let num = (n as u64).pow(r as u32 - 1);
    let den = (b * r as i64).gcd(&n64) as u64 * (b.gcd(&n64) as u64).pow(r as u32 - 2);
    if num % den != 0 {
        return Err(CoverError::NonIntegral { num, den });
    }
    Ok(num / den)
}

/// `α_i∨ = e_i - e_{i+1}` for a 1-based simple index.
pub fn simple_coroot(i: usize, r: usize) -> Vec<i64> {
    let mut a = vec![0; r];
    a[i - 1] = 1;
    a[i] = -1;
    a
}

/// `s_i μ`: swap coordinates `i` and `i+1`.
pub fn reflect(mu: &[i64], i: usize) -> Vec<i64> {
    let mut m = mu.to_vec();
    m.swap(i - 1, i);
    m
}

/// `s_i μ + α_i∨`.
pub fn shifted_reflect(mu: &[i64], i: usize) -> Vec<i64> {
    let a = simple_coroot(i, mu.len());
    reflect(mu, i).iter().zip(&a).map(|(x, y)| x + y).collect()
}

/// `ρ = (r-1, r-2, ..., 0)`.
pub fn rho(r: usize) -> Vec<i64> {
    (0..r).map(|k| (r - 1 - k) as i64).collect()
}

fn scaled(v: &[i64], k: i64) -> Vec<i64> {
    v.iter().map(|x| x * k).collect()
}

fn mono(exps: &[i64]) -> Frac {
    Frac::from_scalar(Scalar::z_monomial(exps))
}

/// `z^{-μ}`.
pub fn z_neg(mu: &[i64]) -> Frac {
    mono(&scaled(mu, -1))
}

/// The two pieces of the scattering coefficient attached to `(μ, i)`.
#[derive(Clone, Debug, Serialize)]
pub struct TauPair {
    pub mu: Vec<i64>,
    pub i: usize,
    /// `τ¹_{μ,μ}`.
    pub tau1: Frac,
    /// `τ²_{s_i μ + α∨, μ}`.
    pub tau2: Frac,
    /// The first index of `τ²`, namely `s_i μ + α∨`.
    pub tau2_source: Vec<i64>,
}

/// The scattering coefficients `τ¹_{μ,μ}` and `τ²_{s_i μ+α∨, μ}`.
pub fn tau(mu: &[i64], i: usize, params: &CoverParams) -> Result<TauPair, CoverError> {
    let r = params.r;
    if mu.len() != r {
        return Err(CoverError::Length { len: mu.len(), r });
    }
    if i == 0 || i >= r {
        return Err(CoverError::SimpleIndex { i, r });
    }
    let alpha = simple_coroot(i, r);
    let form = params.form();
    let b_mu = form.eval(&alpha, mu);
    let q = params.q_simple();
    if q == 0 {
        if b_mu != 0 {
            return Err(CoverError::Degenerate { b_mu });
        }
        // Q = 0 and B = 0 still leaves the ratio undefined.
        return Err(CoverError::Degenerate { b_mu });
    }
    let nq = params.nq();
    // B(α∨, μ) / Q(α∨) is always an integer: B(α∨, μ) = b (μ_i - μ_{i+1}).
    let d = b_mu / q;
    let ceil = -((-d).div_euclid(nq as i64));
    let x = Scalar::root_power(i - 1, i, nq);
    let den = Scalar::one() - Scalar::v() * x.clone();
    let tau1 = Frac::new(
        Scalar::one_minus_v() * Scalar::z_monomial(&scaled(&alpha, nq as i64 * ceil - d)),
        den.clone(),
    );
    // g(-B(α∨, μ) + Q(α∨)) = g(b (1 - d)) = g_Q(1 - d).
    let tau2 = Frac::new(
        (Scalar::gauss(1 - d, nq) * Scalar::z_monomial(&scaled(&alpha, -1)) * (Scalar::one() - x))
            .with_nq(nq),
        den,
    );
    Ok(TauPair {
        mu: mu.to_vec(),
        i,
        tau1,
        tau2,
        tau2_source: shifted_reflect(mu, i),
    })
}

fn plus(c: u32) -> Spin {
    Spin::Plus(c)
}

/// R-vertex weight on rows `i`, `i+1` with left edges `+c_i` (lower) and
/// `+c_{i+1}` (upper) and right edges `ur`, `lr`.
fn crossing(c_lo: u32, c_hi: u32, ur: u32, lr: u32, i: usize, nq: u32) -> Frac {
    r_weight(
        RConfig {
            ll: plus(c_lo),
            ul: plus(c_hi),
            ur: plus(ur),
            lr: plus(lr),
        },
        i - 1,
        i,
        nq,
    )
}

/// One coefficient identity with both sides.
#[derive(Clone, Debug, Serialize)]
pub struct Identity {
    pub label: String,
    pub lhs: Frac,
    pub rhs: Frac,
    pub holds: bool,
}

impl Identity {
    fn new(label: impl Into<String>, lhs: Frac, rhs: Frac) -> Self {
        let holds = lhs == rhs;
        Identity {
            label: label.into(),
            lhs,
            rhs,
            holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatteringVerdict {
    pub params: CoverParams,
    pub residues: (u32, u32),
    pub identities: Vec<Identity>,
    pub holds: bool,
}

/// The coweight `ν = ρ - c`, padding a pair of residues into rank 2.
fn nu_of(c: &[u32]) -> Vec<i64> {
    rho(c.len())
        .iter()
        .zip(c)
        .map(|(p, x)| p - *x as i64)
        .collect()
}

/// Scattering coefficients as normalized R-vertex weights, for the charge
/// pair `(c_i, c_{i+1})` in `(0, n_Q]`, checked on rank 2 with `i = 1`.
///
/// Unequal charges: `τ¹ = z^{(c_i - c_{i+1} - 1)α∨} wt(keep)` and
/// `τ² = z^{-α∨} wt(exchange)`; equal charges: `τ¹ + τ² = z^{-α∨} wt(equal)`.
pub fn scattering_check(ci: u32, cj: u32, params: &CoverParams) -> Result<ScatteringVerdict, CoverError> {
    let nq = params.nq();
    assert!(
        (1..=nq).contains(&ci) && (1..=nq).contains(&cj),
        "charges must lie in 1..=n_Q"
    );
    let rank2 = CoverParams { r: 2, ..*params };
    let nu = nu_of(&[ci, cj]);
    let alpha = simple_coroot(1, 2);
    let t_nu = tau(&nu, 1, &rank2)?;
    let mu = shifted_reflect(&nu, 1);
    let t_mu = tau(&mu, 1, &rank2)?;
    let mut identities = Vec::new();
    if ci != cj {
        let shift = ci as i64 - cj as i64 - 1;
        identities.push(Identity::new(
            "tau1",
            t_nu.tau1.clone(),
            &mono(&scaled(&alpha, shift)) * &crossing(ci, cj, cj, ci, 1, nq),
        ));
        identities.push(Identity::new(
            "tau2",
            t_mu.tau2.clone(),
            &mono(&scaled(&alpha, -1)) * &crossing(ci, cj, ci, cj, 1, nq),
        ));
    } else {
        identities.push(Identity::new(
            "tau1+tau2",
            &t_nu.tau1 + &t_mu.tau2,
            &mono(&scaled(&alpha, -1)) * &crossing(ci, ci, ci, ci, 1, nq),
        ));
    }
    let holds = identities.iter().all(|x| x.holds);
    Ok(ScatteringVerdict {
        params: *params,
        residues: (ci, cj),
        identities,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramVerdict {
    pub params: CoverParams,
    pub charges: Vec<u32>,
    pub i: usize,
    /// One identity per output basis vector `v_{c'}`.
    pub identities: Vec<Identity>,
    pub holds: bool,
}

/// Both paths of the square relating the intertwiner on Whittaker functions
/// to the R-vertex, applied to `W_ν` with `ν = ρ - c`.
///
/// Path one applies the intertwiner and then `θ_{s_i z}`; path two applies
/// `θ_z` and then the R-vertex on rows `i, i+1`. Charges must lie in
/// `(0, n_Q]`.
pub fn intertwiner_square(params: &CoverParams, c: &[u32], i: usize) -> Result<DiagramVerdict, CoverError> {
    let r = params.r;
    let nq = params.nq();
    if c.len() != r {
        return Err(CoverError::Length { len: c.len(), r });
    }
    assert!(c.iter().all(|x| (1..=nq).contains(x)), "charges must lie in 1..=n_Q");
    let nu = nu_of(c);
    let mu = shifted_reflect(&nu, i);
    let (lo, hi) = (c[i - 1], c[i]);
    let t_nu = tau(&nu, i, params)?;
    let t_mu = tau(&mu, i, params)?;
    let swap = |f: &Frac| f.swap_z(i - 1, i);
    // θ_{s_i z}(W_κ) = (s_i z)^{-κ} v_{ρ-κ}.
    let theta_s = |kappa: &[i64]| swap(&z_neg(kappa));
    let side1_keep = &theta_s(&nu) * &t_nu.tau1;
    let side1_exchange = &theta_s(&mu) * &t_mu.tau2;
    let zn = z_neg(&nu);
    let mut identities = Vec::new();
    if lo != hi {
        let mut exchanged = c.to_vec();
        exchanged.swap(i - 1, i);
        identities.push(Identity::new(
            format!("v{:?}", c),
            side1_keep,
            &zn * &crossing(lo, hi, hi, lo, i, nq),
        ));
        identities.push(Identity::new(
            format!("v{:?}", exchanged),
            side1_exchange,
            &zn * &crossing(lo, hi, lo, hi, i, nq),
        ));
    } else {
        identities.push(Identity::new(
            format!("v{:?}", c),
            &side1_keep + &side1_exchange,
            &zn * &crossing(lo, lo, lo, lo, i, nq),
        ));
    }
    let holds = identities.iter().all(|x| x.holds);
    Ok(DiagramVerdict {
        params: *params,
        charges: c.to_vec(),
        i,
        identities,
        holds,
    })
}

/// All charge vectors in `(0, n_Q]^r`.
pub fn charge_vectors(nq: u32, r: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (1..=nq).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Cover parameters with `n <= max_n`, `b` in `1..=n` (the class of 0 is
/// represented by `n`, which keeps `Q(α∨) != 0`) and `c` in `0..2n`.
pub fn covers_up_to(max_n: u32, r: usize) -> Vec<CoverParams> {
    (1..=max_n)
        .flat_map(|n| {
            (1..=n as i64).flat_map(move |b| (0..2 * n as i64).map(move |c| CoverParams { n, b, c, r }))
        })
        .collect()
}

/// The matrix of scattering coefficients on the span of `W_ν` and
/// `W_{s_i ν + α∨}` for `ν = ρ - c`: a scalar when the two labels agree.
pub fn scattering_block(params: &CoverParams, c: &[u32], i: usize) -> Result<Vec<Vec<Frac>>, CoverError> {
    let nu = nu_of(c);
    let mu = shifted_reflect(&nu, i);
    let t_nu = tau(&nu, i, params)?;
    let t_mu = tau(&mu, i, params)?;
    if nu == mu {
        return Ok(vec![vec![&t_nu.tau1 + &t_nu.tau2]]);
    }
    Ok(vec![
        vec![t_nu.tau1, t_mu.tau2],
        vec![t_nu.tau2, t_mu.tau1],
    ])
}

/// `T(s_i z) T(z) = 1` for the block of [`scattering_block`].
pub fn check_tau_involution(params: &CoverParams, c: &[u32], i: usize) -> Result<bool, CoverError> {
    let t = scattering_block(params, c, i)?;
    let ts: Vec<Vec<Frac>> = t
        .iter()
        .map(|row| row.iter().map(|f| f.swap_z(i - 1, i)).collect())
        .collect();
    let k = t.len();
    for a in 0..k {
        for b in 0..k {
            let entry: Frac = (0..k).map(|m| &ts[a][m] * &t[m][b]).sum();
            let expect = if a == b { Frac::one() } else { Frac::zero() };
            if entry != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// JSON table of `τ¹`, `τ²` over `ν = ρ - c` for every charge vector.
pub fn tau_table(params: &CoverParams, i: usize) -> Result<serde_json::Value, CoverError> {
    let rows = charge_vectors(params.nq(), params.r)
        .into_iter()
        .map(|c| {
            let t = tau(&nu_of(&c), i, params)?;
            Ok(serde_json::json!({
                "charges": c,
                "mu": t.mu,
                "tau1": t.tau1,
                "tau2_source": t.tau2_source,
                "tau2": t.tau2,
            }))
        })
        .collect::<Result<Vec<_>, CoverError>>()?;
    Ok(serde_json::Value::Array(rows))
}

/// Cover parameters with `n <= max_n`, `b` in `0..n` and `c` in `0..2n`.
pub fn covers_mod(max_n: u32, r: usize) -> Vec<CoverParams> {
    (1..=max_n)
        .flat_map(|n| (0..n as i64).flat_map(move |b| (0..2 * n as i64).map(move |c| CoverParams { n, b, c, r })))
        .collect()
}
