//! Decorated spins on horizontal edges.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A spin with its charge class.
///
/// A `+` spin carries a charge representative in `1..=n_Q` (the class of 0
/// is written `n_Q`); a `-` spin always has charge 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Minus,
    Plus(u32),
}

impl Spin {
    /// A `+` spin whose charge is the class of `charge` modulo `nq`.
    pub fn plus(charge: i64, nq: u32) -> Spin {
        Spin::Plus(rep(charge, nq))
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Spin::Plus(_))
    }

    /// Charge representative (0 for `-`).
    pub fn charge(self) -> u32 {
        match self {
            Spin::Minus => 0,
            Spin::Plus(c) => c,
        }
    }

    /// All decorated spins at modulus `nq`: `-` first, then `+1..+nq`.
    pub fn all(nq: u32) -> Vec<Spin> {
        std::iter::once(Spin::Minus)
            .chain((1..=nq).map(Spin::Plus))
            .collect()
    }
}

/// Representative of `x` modulo `nq` in `1..=nq`.
pub fn rep(x: i64, nq: u32) -> u32 {
    let r = x.rem_euclid(nq as i64) as u32;
    if r == 0 {
        nq
    } else {
        r
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Minus => write!(f, "-"),
            Spin::Plus(c) => write!(f, "+{c}"),
        }
    }
}
