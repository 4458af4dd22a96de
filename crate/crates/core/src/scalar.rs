//! The coefficient ring of all Boltzmann weights.
//!
//! Elements are Laurent polynomials in `v` and `z_1..z_r` over arbitrary
//! precision integers, extended by formal Gauss sum symbols `g(a)` for
//! residues `a` modulo `n_Q`. The symbols obey
//!
//! * `g(0) = -v`,
//! * `g(a) g(n_Q - a) = v`,
//! * `g(n_Q/2)^2 = v` when `n_Q` is even,
//!
//! and every stored monomial is kept in the normal form where each pair
//! `{a, n_Q - a}` contributes at most one symbol.
//!
//! Exponents of `v` are stored in quarter units and Gauss exponents in half
//! units so that the twist element of [`crate::qgroup`] can be expressed;
//! everything else works with integral exponents and checks
//! [`Scalar::is_integral`] at its boundary.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Exponents of the Gauss symbols of one monomial, in half units.
///
/// Entries are sorted by residue and never zero. In normal form every
/// pair `{a, n_Q - a}` has at most one entry and the self-paired residue
/// `n_Q/2` has exponent below 2 (four half units).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussExponent {
    entries: Vec<(u32, i32)>,
}

impl GaussExponent {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exponent of `g(a)` in half units.
    pub fn halves(&self, a: u32) -> i32 {
        self.entries
            .iter()
            .find(|(r, _)| *r == a)
            .map(|(_, h)| *h)
            .unwrap_or(0)
    }

    /// Exponent of `g(a)` when it is integral.
    pub fn get(&self, a: u32) -> Option<i32> {
        let h = self.halves(a);
        (h % 2 == 0).then_some(h / 2)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|(_, h)| h % 2 == 0)
    }

    fn from_map(map: BTreeMap<u32, i32>) -> Self {
        GaussExponent {
            entries: map.into_iter().filter(|(_, h)| *h != 0).collect(),
        }
    }
}

struct Normalized {
    /// Extracted power of `v` in quarter units.
    vq: i64,
    negate: bool,
    normal: GaussExponent,
}

/// Normal form of a product of Gauss symbols given in half units.
fn normalize_halves<I>(raw: I, nq: u32) -> Normalized
where
    I: IntoIterator<Item = (i64, i64)>,
{
    assert!(nq >= 1, "modulus must be positive");
    let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
    for (a, h) in raw {
        if h != 0 {
            *acc.entry(a.rem_euclid(nq as i64) as u32).or_insert(0) += h;
        }
    }
    let mut vq = 0i64;
    let mut negate = false;
    let mut out: BTreeMap<u32, i32> = BTreeMap::new();
    if let Some(h0) = acc.get(&0).copied() {
        assert!(h0 % 2 == 0, "fractional power of g(0) = -v is not representable");
        let e = h0 / 2;
        vq += 4 * e;
        negate = e.rem_euclid(2) == 1;
    }
    for a in 1..nq {
        let b = nq - a;
        match a.cmp(&b) {
            Ordering::Less => {
                let ha = acc.get(&a).copied().unwrap_or(0);
                let hb = acc.get(&b).copied().unwrap_or(0);
                // g(b)^{hb/2} = v^{hb/2} g(a)^{-hb/2}
                vq += 2 * hb;
                let net = ha - hb;
                if net >= 0 {
                    out.insert(a, net as i32);
                } else {
                    vq += 2 * net;
                    out.insert(b, (-net) as i32);
                }
            }
            Ordering::Equal => {
                let h = acc.get(&a).copied().unwrap_or(0);
                // g(a)^2 = v, i.e. four half units of g are one v
                let k = h.div_euclid(4);
                vq += 4 * k;
                out.insert(a, h.rem_euclid(4) as i32);
            }
            Ordering::Greater => {}
        }
    }
    Normalized {
        vq,
        negate,
        normal: GaussExponent::from_map(out),
    }
}

/// Reduce a product of Gauss symbols with integral exponents.
///
/// Returns the extracted power of `v` and the normal form. Occurrences of
/// `g(0)` contribute `v` each to the power; their sign `(-1)^e` is left to
/// the caller. Negative exponents are allowed and use `g(a)^{-1} = g(-a)/v`.
pub fn gauss_normalize(raw: &BTreeMap<i64, i64>, nq: u32) -> (i64, GaussExponent) {
    let n = normalize_halves(raw.iter().map(|(a, e)| (*a, 2 * *e)), nq);
    (n.vq / 4, n.normal)
}

/// The key of a monomial: powers of `v`, `z` and the Gauss symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialKey {
    vq: i32,
    z: Vec<i32>,
    gauss: GaussExponent,
}

impl MonomialKey {
    fn one() -> Self {
        MonomialKey {
            vq: 0,
            z: Vec::new(),
            gauss: GaussExponent::new(),
        }
    }

    /// Exponent of `v` in quarter units.
    pub fn v_quarters(&self) -> i32 {
        self.vq
    }

    /// Exponent of `v` when integral.
    pub fn v_exp(&self) -> Option<i32> {
        (self.vq % 4 == 0).then_some(self.vq / 4)
    }

    /// Exponent of `z_{i+1}` (zero based index).
    pub fn z_exp(&self, i: usize) -> i32 {
        self.z.get(i).copied().unwrap_or(0)
    }

    /// The stored `z` exponents with trailing zeros removed.
    pub fn z_exps(&self) -> &[i32] {
        &self.z
    }

    pub fn gauss(&self) -> &GaussExponent {
        &self.gauss
    }

    fn trim(mut self) -> Self {
        while self.z.last() == Some(&0) {
            self.z.pop();
        }
        self
    }
}

fn cmp_padded(a: &[i32], b: &[i32]) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl Ord for MonomialKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vq
            .cmp(&other.vq)
            .then_with(|| cmp_padded(&self.z, &other.z))
            .then_with(|| self.gauss.cmp(&other.gauss))
    }
}

impl PartialOrd for MonomialKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the coefficient ring.
///
/// `nq` records the modulus of the Gauss symbols; `0` marks an element that
/// does not depend on it (no symbols), which combines with any modulus.
#[derive(Clone, Debug)]
pub struct Scalar {
    nq: u32,
    terms: BTreeMap<MonomialKey, BigInt>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Scalar {}

fn join_nq(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, x) | (x, 0) => x,
        (x, y) if x == y => x,
        (x, y) => panic!("mixing Gauss symbols of moduli {x} and {y}"),
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            nq: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(c: i64) -> Self {
        Self::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MonomialKey::one(), c);
        }
        Scalar { nq: 0, terms }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::v_quarter_pow(4 * e)
    }

    /// `v^{q/4}`.
    pub fn v_quarter_pow(q: i64) -> Self {
        let key = MonomialKey {
            vq: q as i32,
            ..MonomialKey::one()
        };
        Scalar {
            nq: 0,
            terms: BTreeMap::from([(key, BigInt::one())]),
        }
    }

    pub fn v() -> Self {
        Self::v_pow(1)
    }

    /// `1 - v`.
    pub fn one_minus_v() -> Self {
        Self::one() - Self::v()
    }

    /// `z_{i+1}^e` for a zero based index `i`.
    pub fn z_pow(i: usize, e: i64) -> Self {
        let mut z = vec![0; i + 1];
        z[i] = e as i32;
        let key = MonomialKey {
            z,
            ..MonomialKey::one()
        }
        .trim();
        Scalar {
            nq: 0,
            terms: BTreeMap::from([(key, BigInt::one())]),
        }
    }

    /// `z^e` for a whole exponent vector.
    pub fn z_monomial(exps: &[i64]) -> Self {
        let key = MonomialKey {
            z: exps.iter().map(|e| *e as i32).collect(),
            ..MonomialKey::one()
        }
        .trim();
        Scalar {
            nq: 0,
            terms: BTreeMap::from([(key, BigInt::one())]),
        }
    }

    /// The Gauss symbol `g(a)` at modulus `nq`, with `g(0) = -v`.
    pub fn gauss(a: i64, nq: u32) -> Self {
        Self::gauss_halves(a, 2, nq)
    }

    /// `g(a)^{halves/2}` at modulus `nq`.
    pub fn gauss_halves(a: i64, halves: i64, nq: u32) -> Self {
        Self::monomial(BigInt::one(), 0, &[], &[(a, halves)], nq)
    }

    /// General normalizing constructor. `gauss` lists (residue, half units).
    pub fn monomial(coef: BigInt, vq: i64, z: &[i64], gauss: &[(i64, i64)], nq: u32) -> Self {
        if coef.is_zero() {
            return Self::zero();
        }
        let n = normalize_halves(gauss.iter().copied(), nq);
        let key = MonomialKey {
            vq: (vq + n.vq) as i32,
            z: z.iter().map(|e| *e as i32).collect(),
            gauss: n.normal,
        }
        .trim();
        let coef = if n.negate { -coef } else { coef };
        let nq_tag = if key.gauss.is_empty() { 0 } else { nq };
        Scalar {
            nq: nq_tag,
            terms: BTreeMap::from([(key, coef)]),
        }
    }

    /// `(z_i / z_j)^{nq}`, the variable `z^{n_Q α∨}` of an R-vertex.
    pub fn root_power(i: usize, j: usize, nq: u32) -> Self {
        Self::z_pow(i, nq as i64) * Self::z_pow(j, -(nq as i64))
    }

    /// The modulus tag (0 when no Gauss symbol occurs).
    pub fn nq(&self) -> u32 {
        self.nq
    }

    /// Fix the modulus used when multiplying by Gauss symbols later.
    pub fn with_nq(mut self, nq: u32) -> Self {
        self.nq = join_nq(self.nq, nq);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(k, c)| *k == MonomialKey::one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &BigInt)> {
        self.terms.iter()
    }

    /// True when all exponents of `v` and of the Gauss symbols are integers.
    pub fn is_integral(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.vq % 4 == 0 && k.gauss.is_integral())
    }

    /// True when no Gauss symbol appears.
    pub fn is_gauss_free(&self) -> bool {
        self.terms.keys().all(|k| k.gauss.is_empty())
    }

    /// The single term when the element is a monomial.
    pub fn as_monomial(&self) -> Option<(&MonomialKey, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn from_terms(nq: u32, terms: BTreeMap<MonomialKey, BigInt>) -> Self {
        let nq = if terms.keys().all(|k| k.gauss.is_empty()) {
            nq
        } else {
            assert!(nq > 0, "Gauss symbols without a modulus");
            nq
        };
        Scalar { nq, terms }
    }

    fn add_term(terms: &mut BTreeMap<MonomialKey, BigInt>, key: MonomialKey, coef: BigInt) {
        use std::collections::btree_map::Entry;
        match terms.entry(key) {
            Entry::Vacant(e) => {
                if !coef.is_zero() {
                    e.insert(coef);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn mul_keys(a: &MonomialKey, b: &MonomialKey, nq: u32) -> (MonomialKey, bool) {
        let n = a.z.len().max(b.z.len());
        let z: Vec<i32> = (0..n)
            .map(|i| a.z.get(i).copied().unwrap_or(0) + b.z.get(i).copied().unwrap_or(0))
            .collect();
        if a.gauss.is_empty() || b.gauss.is_empty() {
            let gauss = if a.gauss.is_empty() {
                b.gauss.clone()
            } else {
                a.gauss.clone()
            };
            let key = MonomialKey {
                vq: a.vq + b.vq,
                z,
                gauss,
            }
            .trim();
            return (key, false);
        }
        let raw = a
            .gauss
            .iter()
            .chain(b.gauss.iter())
            .map(|(r, h)| (r as i64, h as i64));
        let n = normalize_halves(raw, nq);
        let key = MonomialKey {
            vq: a.vq + b.vq + n.vq as i32,
            z,
            gauss: n.normal,
        }
        .trim();
        (key, n.negate)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Scalar::one().with_nq(self.nq);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Inverse of a monomial with coefficient `±1`.
    pub fn inv_monomial(&self) -> Option<Self> {
        let (k, c) = self.as_monomial()?;
        if !(c.is_one() || (-c).is_one()) {
            return None;
        }
        let raw: Vec<(i64, i64)> = k.gauss.iter().map(|(r, h)| (r as i64, -(h as i64))).collect();
        let z: Vec<i64> = k.z.iter().map(|e| -(*e as i64)).collect();
        Some(Scalar::monomial(c.clone(), -(k.vq as i64), &z, &raw, self.nq.max(1)).with_nq(self.nq))
    }

    /// Apply a permutation or other map to the `z` exponent vectors.
    pub fn map_z<F>(&self, f: F) -> Self
    where
        F: Fn(&[i32]) -> Vec<i32>,
    {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let key = MonomialKey {
                vq: k.vq,
                z: f(&k.z),
                gauss: k.gauss.clone(),
            }
            .trim();
            Self::add_term(&mut terms, key, c.clone());
        }
        Scalar::from_terms(self.nq, terms)
    }

    /// Swap the spectral parameters `z_{i+1}` and `z_{j+1}`.
    pub fn swap_z(&self, i: usize, j: usize) -> Self {
        self.map_z(|z| {
            let n = z.len().max(i + 1).max(j + 1);
            let mut w: Vec<i32> = (0..n).map(|k| z.get(k).copied().unwrap_or(0)).collect();
            w.swap(i, j);
            w
        })
    }

    /// Keep only the monomials satisfying a predicate.
    pub fn filter_terms<F>(&self, keep: F) -> Self
    where
        F: Fn(&MonomialKey) -> bool,
    {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Scalar::from_terms(self.nq, terms)
    }

    /// Substitute a value for each Gauss symbol; used when `n_Q = 1` style
    /// evaluations or numerical spot checks need a symbol free element.
    pub fn substitute_gauss<F>(&self, f: F) -> Self
    where
        F: Fn(u32) -> Scalar,
    {
        let mut out = Scalar::zero();
        for (k, c) in &self.terms {
            let mut t = Scalar::monomial(
                c.clone(),
                k.vq as i64,
                &k.z.iter().map(|e| *e as i64).collect::<Vec<_>>(),
                &[],
                1,
            );
            for (a, h) in k.gauss.iter() {
                assert!(h % 2 == 0 && h > 0, "substitution needs positive integral exponents");
                t = t * f(a).pow((h / 2) as u32);
            }
            out += t;
        }
        out
    }

    /// Per-variable exponent ranges after the substitution used by
    /// [`eval_mod_p`]; their total width bounds the degree of the element.
    pub fn exponent_box(&self, nq: u32) -> ExponentBox {
        let mut b = ExponentBox::default();
        for k in self.terms.keys() {
            b.absorb(&monomial_exponents(k, nq));
        }
        b
    }
}

/// A variable of the polynomial ring used by the modular oracle: the fourth
/// root `t` of `v`, a square root `h_a` of `g(a)` for `a < n_Q - a`, or `z_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OracleVar {
    T,
    H(u32),
    Z(usize),
}

fn monomial_exponents(k: &MonomialKey, nq: u32) -> BTreeMap<OracleVar, i64> {
    let mut m: BTreeMap<OracleVar, i64> = BTreeMap::new();
    let mut t = k.vq as i64;
    for (a, h) in k.gauss.iter() {
        let h = h as i64;
        let b = nq - a;
        match a.cmp(&b) {
            Ordering::Less => *m.entry(OracleVar::H(a)).or_insert(0) += h,
            Ordering::Equal => t += h,
            Ordering::Greater => {
                t += 2 * h;
                *m.entry(OracleVar::H(b)).or_insert(0) -= h;
            }
        }
    }
    m.insert(OracleVar::T, t);
    for (i, e) in k.z.iter().enumerate() {
        m.insert(OracleVar::Z(i), *e as i64);
    }
    m
}

/// Exponent ranges of a Laurent polynomial, one interval per variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentBox {
    ranges: BTreeMap<OracleVar, (i64, i64)>,
    seen: bool,
}

impl ExponentBox {
    fn absorb(&mut self, exps: &BTreeMap<OracleVar, i64>) {
        let first = !self.seen;
        self.seen = true;
        if first {
            self.ranges = exps.iter().map(|(v, e)| (*v, (*e, *e))).collect();
            return;
        }
        for (v, r) in self.ranges.iter_mut() {
            let e = exps.get(v).copied().unwrap_or(0);
            r.0 = r.0.min(e);
            r.1 = r.1.max(e);
        }
        for (v, e) in exps {
            self.ranges.entry(*v).or_insert((0.min(*e), 0.max(*e)));
        }
    }

    /// The box containing the exponents of any product of elements taken
    /// from the two boxes.
    pub fn product(&self, other: &ExponentBox) -> ExponentBox {
        if !self.seen {
            return other.clone();
        }
        if !other.seen {
            return self.clone();
        }
        let mut ranges = self.ranges.clone();
        for (v, r) in ranges.iter_mut() {
            let o = other.ranges.get(v).copied().unwrap_or((0, 0));
            r.0 += o.0;
            r.1 += o.1;
        }
        for (v, o) in &other.ranges {
            ranges.entry(*v).or_insert(*o);
        }
        ExponentBox { ranges, seen: true }
    }

    /// The box containing the exponents of any sum of elements of the two.
    pub fn hull(&self, other: &ExponentBox) -> ExponentBox {
        if !self.seen {
            return other.clone();
        }
        if !other.seen {
            return self.clone();
        }
        let mut ranges = self.ranges.clone();
        for (v, r) in ranges.iter_mut() {
            let o = other.ranges.get(v).copied().unwrap_or((0, 0));
            r.0 = r.0.min(o.0);
            r.1 = r.1.max(o.1);
        }
        for (v, o) in &other.ranges {
            ranges.entry(*v).or_insert((o.0.min(0), o.1.max(0)));
        }
        ExponentBox { ranges, seen: true }
    }

    /// Bound on the total degree after clearing negative exponents.
    pub fn degree(&self) -> u64 {
        self.ranges.values().map(|(lo, hi)| (hi - lo) as u64).sum()
    }
}

/// Two-argument Gauss sum `g(a, b)` at modulus `nq`.
///
/// `b < -1` gives 0; `b >= 0` gives `1 - v` when `a ≡ 0` and 0 otherwise;
/// `b = -1` gives the symbol `g(a)`.
pub fn gauss_eval(a: i64, b: i64, nq: u32) -> Scalar {
    if b < -1 {
        Scalar::zero()
    } else if b >= 0 {
        if a.rem_euclid(nq as i64) == 0 {
            Scalar::one_minus_v()
        } else {
            Scalar::zero()
        }
    } else {
        Scalar::gauss(a, nq)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &'a Scalar) {
        self.nq = join_nq(self.nq, rhs.nq);
        for (k, c) in &rhs.terms {
            Scalar::add_term(&mut self.terms, k.clone(), c.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.nq = join_nq(self.nq, rhs.nq);
        for (k, c) in rhs.terms {
            Scalar::add_term(&mut self.terms, k, c);
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += rhs;
        self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &'a Scalar) {
        self.nq = join_nq(self.nq, rhs.nq);
        for (k, c) in &rhs.terms {
            Scalar::add_term(&mut self.terms, k.clone(), -c.clone());
        }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let nq = join_nq(self.nq, rhs.nq);
        let mut terms = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let (key, negate) = Scalar::mul_keys(ka, kb, nq);
                let c = ca * cb;
                Scalar::add_term(&mut terms, key, if negate { -c } else { c });
            }
        }
        Scalar::from_terms(nq, terms)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::one();
        for x in iter {
            acc = acc * x;
        }
        acc
    }
}

fn fmt_quarters(q: i32) -> String {
    if q % 4 == 0 {
        (q / 4).to_string()
    } else {
        let g = q.gcd(&4);
        format!("{}/{}", q / g, 4 / g)
    }
}

fn fmt_halves(h: i32) -> String {
    if h % 2 == 0 {
        (h / 2).to_string()
    } else {
        format!("{h}/2")
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.vq != 0 {
            if self.vq == 4 {
                parts.push("v".to_string());
            } else {
                parts.push(format!("v^{}", fmt_quarters(self.vq)));
            }
        }
        for (i, e) in self.z.iter().enumerate() {
            match *e {
                0 => {}
                1 => parts.push(format!("z{}", i + 1)),
                e => parts.push(format!("z{}^{}", i + 1, e)),
            }
        }
        for (a, h) in self.gauss.iter() {
            if h == 2 {
                parts.push(format!("g({a})"));
            } else {
                parts.push(format!("g({a})^{}", fmt_halves(h)));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            let body = k.to_string();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if body.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}

struct TermJson<'a>(&'a MonomialKey, &'a BigInt);

fn json_quarters(q: i32) -> serde_json::Value {
    if q % 4 == 0 {
        serde_json::Value::from(q / 4)
    } else {
        serde_json::Value::from(fmt_quarters(q))
    }
}

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        match self.1.to_i64() {
            Some(c) => m.serialize_entry("coef", &c)?,
            None => m.serialize_entry("coef", &self.1.to_string())?,
        }
        m.serialize_entry("vexp", &json_quarters(self.0.vq))?;
        m.serialize_entry("zexp", &self.0.z)?;
        let gauss: BTreeMap<String, serde_json::Value> = self
            .0
            .gauss
            .iter()
            .map(|(a, h)| {
                let v = if h % 2 == 0 {
                    serde_json::Value::from(h / 2)
                } else {
                    serde_json::Value::from(fmt_halves(h))
                };
                (a.to_string(), v)
            })
            .collect();
        m.serialize_entry("gauss", &gauss)?;
        m.end()
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&TermJson(k, c))?;
        }
        seq.end()
    }
}

/// Errors when reading a serialized element back.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed term: {0}")]
    Term(String),
}

fn parse_fraction(v: &serde_json::Value, den: i64) -> Result<i64, ParseError> {
    if let Some(i) = v.as_i64() {
        return Ok(i * den);
    }
    let s = v
        .as_str()
        .ok_or_else(|| ParseError::Term(format!("bad exponent {v}")))?;
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| ParseError::Term(format!("bad exponent {s}")))?;
    let p: i64 = p.trim().parse().map_err(|_| ParseError::Term(s.into()))?;
    let q: i64 = q.trim().parse().map_err(|_| ParseError::Term(s.into()))?;
    if q == 0 || den % q != 0 {
        return Err(ParseError::Term(s.into()));
    }
    Ok(p * (den / q))
}

impl Scalar {
    /// Read back the JSON term list produced by serialization.
    pub fn from_json(v: &serde_json::Value, nq: u32) -> Result<Scalar, ParseError> {
        let arr = v
            .as_array()
            .ok_or_else(|| ParseError::Term("expected a list of terms".into()))?;
        let mut out = Scalar::zero().with_nq(nq);
        for t in arr {
            let coef = match &t["coef"] {
                serde_json::Value::Number(n) => BigInt::from(
                    n.as_i64()
                        .ok_or_else(|| ParseError::Term(format!("bad coefficient {n}")))?,
                ),
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| ParseError::Term(format!("bad coefficient {s}")))?,
                other => return Err(ParseError::Term(format!("bad coefficient {other}"))),
            };
            let vq = parse_fraction(&t["vexp"], 4)?;
            let z: Vec<i64> = t["zexp"]
                .as_array()
                .ok_or_else(|| ParseError::Term("missing zexp".into()))?
                .iter()
                .map(|e| e.as_i64().ok_or_else(|| ParseError::Term("bad zexp".into())))
                .collect::<Result<_, _>>()?;
            let mut gauss = Vec::new();
            if let Some(obj) = t["gauss"].as_object() {
                for (a, e) in obj {
                    let a: i64 = a.parse().map_err(|_| ParseError::Term(a.clone()))?;
                    gauss.push((a, parse_fraction(e, 2)?));
                }
            }
            out += Scalar::monomial(coef, vq, &z, &gauss, nq.max(1));
        }
        Ok(out)
    }
}

/// A quotient of two ring elements; equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: Scalar,
    pub den: Scalar,
}

impl Frac {
    pub fn new(num: Scalar, den: Scalar) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Frac { num, den }
    }

    pub fn from_scalar(num: Scalar) -> Self {
        Frac {
            num,
            den: Scalar::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_scalar(Scalar::zero())
    }

    pub fn one() -> Self {
        Self::from_scalar(Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.num.is_integral() && self.den.is_integral()
    }

    /// Divide by a nonzero fraction.
    pub fn div(&self, other: &Frac) -> Frac {
        assert!(!other.num.is_zero(), "division by zero");
        Frac::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn swap_z(&self, i: usize, j: usize) -> Frac {
        Frac {
            num: self.num.swap_z(i, j),
            den: self.den.swap_z(i, j),
        }
    }

    pub fn map_scalars<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Frac {
        Frac::new(f(&self.num), f(&self.den))
    }
}

/// True iff `x.num * y.den - y.num * x.den` is zero.
pub fn frac_eq(x: &Frac, y: &Frac) -> bool {
    if x.den == y.den {
        return x.num == y.num;
    }
    (&x.num * &y.den - &y.num * &x.den).is_zero()
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        frac_eq(self, other)
    }
}

impl<'a> Add<&'a Frac> for &'a Frac {
    type Output = Frac;
    fn add(self, rhs: &'a Frac) -> Frac {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Frac::new(&self.num + &rhs.num, self.den.clone());
        }
        Frac::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        &self + &rhs
    }
}

impl AddAssign for Frac {
    fn add_assign(&mut self, rhs: Frac) {
        *self = &*self + &rhs;
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<'a> Sub<&'a Frac> for &'a Frac {
    type Output = Frac;
    fn sub(self, rhs: &'a Frac) -> Frac {
        self + &(-rhs.clone())
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, rhs: Frac) -> Frac {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Frac> for &'a Frac {
    type Output = Frac;
    fn mul(self, rhs: &'a Frac) -> Frac {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Frac::zero();
        }
        let den = if self.den.is_one() {
            rhs.den.clone()
        } else if rhs.den.is_one() {
            self.den.clone()
        } else {
            &self.den * &rhs.den
        };
        Frac::new(&self.num * &rhs.num, den)
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, rhs: Frac) -> Frac {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Frac {
    type Output = Frac;
    fn mul(self, rhs: &'a Scalar) -> Frac {
        Frac::new(&self.num * rhs, self.den.clone())
    }
}

impl std::iter::Sum for Frac {
    fn sum<I: Iterator<Item = Frac>>(iter: I) -> Frac {
        let mut acc = Frac::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("num", &self.num)?;
        m.serialize_entry("den", &self.den)?;
        m.end()
    }
}

/// The Mersenne prime `2^61 - 1`, the default field for modular checks.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Errors raised by the modular oracle.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("assignment violates the Gauss relations: {0}")]
    Relations(String),
    #[error("assignment has a zero value for {0}")]
    ZeroValue(String),
    #[error("denominator vanishes at the chosen point")]
    ZeroDenominator,
    #[error("no value for z{0}")]
    MissingZ(usize),
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_signed(a: u64, e: i64, p: u64) -> u64 {
    if e >= 0 {
        pow_mod(a, e as u64, p)
    } else {
        inv_mod(pow_mod(a, (-e) as u64, p), p)
    }
}

/// A point of the prime field at which ring elements are evaluated.
///
/// The point is described by `t` with `v = t^4`, square roots `h_a` of the
/// Gauss symbols (`g(a) = h_a^2`), and values of `z_1..z_r`. The relations
/// required are `h_a h_{n_Q-a} = t^2` and `h_{n_Q/2}^2 = t^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub p: u64,
    pub nq: u32,
    pub t: u64,
    pub half_gauss: Vec<u64>,
    pub z: Vec<u64>,
}

impl Assignment {
    /// A uniformly random valid point.
    pub fn random<R: Rng>(nq: u32, r: usize, p: u64, rng: &mut R) -> Assignment {
        let mut nonzero = || rng.gen_range(1..p);
        let t = nonzero();
        let mut half_gauss = vec![0u64; nq as usize];
        let t2 = mul_mod(t, t, p);
        for a in 1..nq {
            let b = nq - a;
            if a < b {
                let h = nonzero();
                half_gauss[a as usize] = h;
                half_gauss[b as usize] = mul_mod(t2, inv_mod(h, p), p);
            } else if a == b {
                half_gauss[a as usize] = t;
            }
        }
        let z = (0..r).map(|_| nonzero()).collect();
        Assignment {
            p,
            nq,
            t,
            half_gauss,
            z,
        }
    }

    pub fn v(&self) -> u64 {
        pow_mod(self.t, 4, self.p)
    }

    /// The value assigned to `g(a)`.
    pub fn g(&self, a: i64) -> u64 {
        let a = a.rem_euclid(self.nq as i64) as usize;
        if a == 0 {
            (self.p - self.v()) % self.p
        } else {
            mul_mod(self.half_gauss[a], self.half_gauss[a], self.p)
        }
    }

    /// Check the Gauss relations and nonvanishing of all values.
    pub fn validate(&self) -> Result<(), EvalError> {
        let p = self.p;
        if self.t % p == 0 {
            return Err(EvalError::ZeroValue("v".into()));
        }
        for (i, z) in self.z.iter().enumerate() {
            if z % p == 0 {
                return Err(EvalError::ZeroValue(format!("z{}", i + 1)));
            }
        }
        let t2 = mul_mod(self.t, self.t, p);
        for a in 1..self.nq {
            let b = self.nq - a;
            let ha = self.half_gauss[a as usize];
            if ha % p == 0 {
                return Err(EvalError::ZeroValue(format!("g({a})")));
            }
            let hb = self.half_gauss[b as usize];
            if mul_mod(ha, hb, p) != t2 {
                return Err(EvalError::Relations(format!("g({a}) g({b}) != v")));
            }
        }
        Ok(())
    }
}

/// Image of `x` under the evaluation homomorphism at `asg`.
pub fn eval_mod_p(x: &Scalar, asg: &Assignment) -> Result<u64, EvalError> {
    asg.validate()?;
    Ok(eval_unchecked(x, asg))
}

fn eval_unchecked(x: &Scalar, asg: &Assignment) -> u64 {
    let p = asg.p;
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    for (k, c) in x.terms() {
        let mut term = c.mod_floor(&pb).to_u64().expect("reduced coefficient");
        term = mul_mod(term, pow_signed(asg.t, k.vq as i64, p), p);
        for (i, e) in k.z.iter().enumerate() {
            let zi = *asg.z.get(i).unwrap_or_else(|| panic!("no value for z{}", i + 1));
            term = mul_mod(term, pow_signed(zi, *e as i64, p), p);
        }
        for (a, h) in k.gauss.iter() {
            term = mul_mod(term, pow_signed(asg.half_gauss[a as usize], h as i64, p), p);
        }
        acc = (acc + term) % p;
    }
    acc
}

/// Evaluate a fraction; fails when the denominator vanishes.
pub fn eval_frac_mod_p(x: &Frac, asg: &Assignment) -> Result<u64, EvalError> {
    asg.validate()?;
    let d = eval_unchecked(&x.den, asg);
    if d == 0 {
        return Err(EvalError::ZeroDenominator);
    }
    Ok(mul_mod(eval_unchecked(&x.num, asg), inv_mod(d, asg.p), asg.p))
}

/// Field arithmetic helpers for callers combining evaluated values.
pub mod field {
    pub fn add(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 + b as u128) % p as u128) as u64
    }

    pub fn sub(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 + p as u128 - (b % p) as u128) % p as u128) as u64
    }

    pub fn mul(a: u64, b: u64, p: u64) -> u64 {
        super::mul_mod(a, b, p)
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        super::inv_mod(a, p)
    }
}

/// Schwartz–Zippel bound for `points` independent evaluations of a nonzero
/// polynomial of the given degree over the nonzero elements of `F_p`,
/// expressed as `log2` of the failure probability.
pub fn schwartz_zippel_log2_bound(degree: u64, p: u64, points: u32) -> f64 {
    if degree == 0 {
        return f64::NEG_INFINITY;
    }
    points as f64 * ((degree as f64).log2() - ((p - 1) as f64).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rewrite_by_hand(raw: &BTreeMap<i64, i64>, nq: u32) -> (i64, BTreeMap<u32, i64>) {
        // apply g(a) g(n-a) -> v and g(n/2)^2 -> v one step at a time
        let mut m: BTreeMap<u32, i64> = raw
            .iter()
            .map(|(a, e)| (a.rem_euclid(nq as i64) as u32, *e))
            .fold(BTreeMap::new(), |mut acc, (a, e)| {
                *acc.entry(a).or_insert(0) += e;
                acc
            });
        let mut vp = 0;
        loop {
            let mut changed = false;
            for a in 1..nq {
                let b = nq - a;
                let ea = m.get(&a).copied().unwrap_or(0);
                let eb = m.get(&b).copied().unwrap_or(0);
                if a < b && ea > 0 && eb > 0 {
                    m.insert(a, ea - 1);
                    m.insert(b, eb - 1);
                    vp += 1;
                    changed = true;
                } else if a == b && ea >= 2 {
                    m.insert(a, ea - 2);
                    vp += 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        m.retain(|_, e| *e != 0);
        (vp, m)
    }

    #[test]
    fn normalize_examples() {
        let (vp, g) = gauss_normalize(&BTreeMap::from([(1, 1), (2, 1)]), 3);
        assert_eq!(vp, 1);
        assert!(g.is_empty());
        let (vp, g) = gauss_normalize(&BTreeMap::from([(2, 1)]), 5);
        assert_eq!(vp, 0);
        assert_eq!(g.get(2), Some(1));
        let (vp, g) = gauss_normalize(&BTreeMap::from([(2, 3)]), 4);
        assert_eq!(vp, 1);
        assert_eq!(g.get(2), Some(1));
    }

    #[test]
    fn normalize_matches_stepwise_rewriting() {
        for nq in 1..=6u32 {
            for e1 in 0..4 {
                for e2 in 0..4 {
                    for e3 in 0..4 {
                        let raw = BTreeMap::from([(1, e1), (2, e2), ((nq as i64) - 1, e3)]);
                        let (vp, g) = gauss_normalize(&raw, nq);
                        let (vp2, m) = rewrite_by_hand(&raw, nq);
                        let m: BTreeMap<u32, i64> = m.into_iter().filter(|(a, _)| *a != 0).collect();
                        let v0 = raw
                            .iter()
                            .filter(|(a, _)| a.rem_euclid(nq as i64) == 0)
                            .map(|(_, e)| *e)
                            .sum::<i64>();
                        assert_eq!(vp, vp2 + v0, "nq={nq} raw={raw:?}");
                        let got: BTreeMap<u32, i64> =
                            g.iter().map(|(a, h)| (a, (h / 2) as i64)).collect();
                        assert_eq!(got, m, "nq={nq} raw={raw:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_eval_examples() {
        assert!(gauss_eval(7, -3, 3).is_zero());
        assert_eq!(gauss_eval(0, 4, 3), Scalar::one_minus_v());
        assert_eq!(gauss_eval(0, -1, 2), -Scalar::v());
        assert!(gauss_eval(1, 0, 3).is_zero());
        assert_eq!(gauss_eval(4, -1, 3), Scalar::gauss(1, 3));
    }

    #[test]
    fn frac_eq_examples() {
        let one_v = Scalar::one_minus_v();
        assert!(frac_eq(&Frac::new(one_v.clone(), one_v.clone()), &Frac::one()));
        let x = Scalar::root_power(0, 1, 1);
        let a = Scalar::one() - x.clone();
        let d = Scalar::one() - Scalar::v() * x.clone();
        let lhs = Frac::new(&one_v * &a, &one_v * &d);
        let rhs = Frac::new(a.clone(), d.clone());
        assert!(frac_eq(&lhs, &rhs));
        for nq in 1..=5u32 {
            let x = Scalar::root_power(0, 1, nq);
            let a = Scalar::one() - x.clone();
            let d = Scalar::one() - Scalar::v() * x;
            for k in 0..nq as i64 {
                let gg = Scalar::gauss(-k, nq) * Scalar::gauss(k, nq);
                let lhs = Frac::new(gg * a.clone(), d.clone());
                let rhs = Frac::new(Scalar::v() * a.clone(), d.clone());
                // g(0)^2 = v^2, so the identity holds exactly for k ≢ 0
                assert_eq!(frac_eq(&lhs, &rhs), k != 0, "nq={nq} k={k}");
            }
        }
    }

    #[test]
    fn gauss_pair_product_is_v() {
        for nq in 1..=7u32 {
            for a in 1..nq as i64 {
                let p = Scalar::gauss(a, nq) * Scalar::gauss(nq as i64 - a, nq);
                assert_eq!(p, Scalar::v(), "nq={nq} a={a}");
            }
            assert_eq!(Scalar::gauss(0, nq), -Scalar::v());
        }
        assert_eq!(Scalar::gauss(2, 4).pow(2), Scalar::v());
    }

    #[test]
    fn half_powers_recombine() {
        let nq = 5;
        let h = Scalar::gauss_halves(2, 1, nq) * Scalar::v_quarter_pow(1);
        let back = h.pow(2);
        assert_eq!(back, Scalar::gauss(2, nq) * Scalar::v_quarter_pow(2));
        let pair = Scalar::gauss_halves(2, 1, nq) * Scalar::gauss_halves(3, 1, nq);
        assert_eq!(pair, Scalar::v_quarter_pow(2));
        assert!(!pair.is_integral());
        assert!(pair.pow(2).is_integral());
    }

    #[test]
    fn inverse_of_monomial() {
        let nq = 3;
        let m = -(Scalar::gauss(1, nq) * Scalar::z_pow(1, 2) * Scalar::v_pow(-1));
        let inv = m.inv_monomial().unwrap();
        assert!((m * inv).is_one());
    }

    #[test]
    fn oracle_forced_by_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = Scalar::v() * Scalar::gauss(1, 3) * Scalar::gauss(2, 3);
        for _ in 0..5 {
            let asg = Assignment::random(3, 2, DEFAULT_PRIME, &mut rng);
            let v = asg.v();
            assert_eq!(eval_mod_p(&x, &asg).unwrap(), mul_mod(v, v, asg.p));
            assert_eq!(eval_mod_p(&Scalar::zero(), &asg).unwrap(), 0);
            assert_eq!(eval_mod_p(&Scalar::gauss(0, 3), &asg).unwrap(), asg.g(0));
        }
    }

    #[test]
    fn oracle_rejects_bad_assignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut asg = Assignment::random(3, 1, DEFAULT_PRIME, &mut rng);
        asg.half_gauss[2] = (asg.half_gauss[2] + 1) % asg.p;
        assert!(matches!(
            eval_mod_p(&Scalar::one(), &asg),
            Err(EvalError::Relations(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let nq = 4;
        let x = Scalar::gauss(1, nq) * Scalar::z_pow(2, -3) - Scalar::int(5) * Scalar::v_pow(2)
            + Scalar::gauss(2, nq) * Scalar::v_quarter_pow(3);
        let j = serde_json::to_value(&x).unwrap();
        let back = Scalar::from_json(&j, nq).unwrap();
        assert_eq!(back, x);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn display_is_readable() {
        let x = Scalar::one() - Scalar::v() * Scalar::z_pow(0, 2) * Scalar::z_pow(1, -2);
        assert_eq!(x.to_string(), "1 - v*z1^2*z2^-2");
    }
}
