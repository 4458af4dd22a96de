//! Six-vertex lattice models with charged horizontal edges.
//!
//! A system has `r` rows, numbered bottom to top and carrying the spectral
//! parameters `z_1..z_r`, and `N` columns labelled `N-1, …, 0` from left to
//! right. The top boundary has `-` spins exactly in the columns `(λ+ρ)_i`,
//! the left and bottom boundaries are `+` and the right boundary is `-`.
//!
//! The charge of a horizontal edge is the number of `+` horizontal edges on
//! or to the right of it in its row. A state is `n_Q`-admissible when every
//! `-` horizontal edge has charge divisible by `n_Q`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::spin::rep;

/// The six admissible vertex configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexType {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VertexType::A1 => "a1",
            VertexType::A2 => "a2",
            VertexType::B1 => "b1",
            VertexType::B2 => "b2",
            VertexType::C1 => "c1",
            VertexType::C2 => "c2",
        };
        write!(f, "{s}")
    }
}

/// Classify the spins around a vertex (`true` is `+`).
pub fn vertex_type(west: bool, north: bool, east: bool, south: bool) -> Option<VertexType> {
    use VertexType::*;
    match (west, north, east, south) {
        (true, true, true, true) => Some(A1),
        (false, false, false, false) => Some(A2),
        (true, false, true, false) => Some(B1),
        (false, true, false, true) => Some(B2),
        (false, true, true, false) => Some(C1),
        (true, false, false, true) => Some(C2),
        _ => None,
    }
}

/// Weight of a vertex in the row with spectral parameter `z_{row+1}`,
/// given the charge of its east edge.
pub fn vertex_weight(t: VertexType, east_charge: i64, row: usize, nq: u32) -> Scalar {
    let divisible = east_charge.rem_euclid(nq as i64) == 0;
    let zpow = |divides: bool| {
        if divides {
            Scalar::z_pow(row, -(nq as i64))
        } else {
            Scalar::one()
        }
    };
    match t {
        VertexType::A1 => zpow(divisible),
        VertexType::B1 => Scalar::gauss(east_charge, nq) * zpow(divisible),
        VertexType::C1 => Scalar::one_minus_v() * zpow(true),
        VertexType::A2 | VertexType::B2 | VertexType::C2 => Scalar::one(),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lambda must be weakly decreasing and nonnegative, got {0:?}")]
    NotPartition(Vec<i64>),
    #[error("lambda has {got} parts but the system has {r} rows")]
    WrongLength { got: usize, r: usize },
    #[error("{columns} columns cannot hold lambda+rho, need at least {needed}")]
    TooFewColumns { columns: usize, needed: usize },
    #[error("left charges must be {r} residues in 1..={nq}, got {got:?}")]
    BadCharges { got: Vec<u32>, r: usize, nq: u32 },
    #[error("modulus must be positive")]
    BadModulus,
}

/// Boundary data of a lattice model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct System {
    pub r: usize,
    pub columns: usize,
    pub lambda: Vec<i64>,
    pub nq: u32,
    pub left_charges: Option<Vec<u32>>,
}

/// Check that `lambda` is a partition with `r` parts.
pub fn check_partition(lambda: &[i64], r: usize) -> Result<(), LatticeError> {
    if lambda.len() != r {
        return Err(LatticeError::WrongLength {
            got: lambda.len(),
            r,
        });
    }
    if lambda.iter().any(|x| *x < 0) || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(LatticeError::NotPartition(lambda.to_vec()));
    }
    Ok(())
}

/// `λ + ρ` with `ρ = (r-1, …, 1, 0)`.
pub fn lambda_plus_rho(lambda: &[i64]) -> Vec<i64> {
    let r = lambda.len();
    lambda
        .iter()
        .enumerate()
        .map(|(i, l)| l + (r - 1 - i) as i64)
        .collect()
}

/// Build the system with the boundary determined by `lambda`.
pub fn boundary_from_partition(
    lambda: &[i64],
    r: usize,
    columns: usize,
    nq: u32,
) -> Result<System, LatticeError> {
    check_partition(lambda, r)?;
    if nq == 0 {
        return Err(LatticeError::BadModulus);
    }
    let needed = lambda.first().map(|l| *l as usize + r).unwrap_or(0);
    if columns < needed {
        return Err(LatticeError::TooFewColumns { columns, needed });
    }
    Ok(System {
        r,
        columns,
        lambda: lambda.to_vec(),
        nq,
        left_charges: None,
    })
}

impl System {
    /// The smallest legal grid, `N = λ_1 + r`.
    pub fn minimal(lambda: &[i64], nq: u32) -> Result<System, LatticeError> {
        let r = lambda.len();
        let n = lambda.first().map(|l| *l as usize + r).unwrap_or(0);
        boundary_from_partition(lambda, r, n, nq)
    }

    /// Restrict to states whose left-boundary charges (bottom to top,
    /// representatives in `1..=n_Q`) equal `c`.
    pub fn with_left_charges(mut self, c: &[u32]) -> Result<System, LatticeError> {
        if c.len() != self.r || c.iter().any(|x| *x == 0 || *x > self.nq) {
            return Err(LatticeError::BadCharges {
                got: c.to_vec(),
                r: self.r,
                nq: self.nq,
            });
        }
        self.left_charges = Some(c.to_vec());
        Ok(self)
    }

    /// Column labels carrying a `-` spin on the top boundary.
    pub fn top_minus_columns(&self) -> Vec<usize> {
        lambda_plus_rho(&self.lambda)
            .into_iter()
            .map(|x| x as usize)
            .collect()
    }

    /// Top boundary spins, left to right (`true` is `+`).
    pub fn top_boundary(&self) -> Vec<bool> {
        let minus = self.top_minus_columns();
        (0..self.columns)
            .map(|p| !minus.contains(&(self.columns - 1 - p)))
            .collect()
    }
}

/// A full assignment of spins to the edges of a system.
///
/// `vertical[k]` is the row of vertical edges below lattice row `k`, so
/// `vertical[0]` is the bottom boundary and `vertical[r]` the top boundary.
/// `horizontal[t]` lists the `N+1` horizontal edges of row `t` (spectral
/// parameter `z_{t+1}`) from left to right. Position `p` in a row of
/// vertical edges is column label `N-1-p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IceState {
    pub vertical: Vec<Vec<bool>>,
    pub horizontal: Vec<Vec<bool>>,
}

impl IceState {
    pub fn rows(&self) -> usize {
        self.horizontal.len()
    }

    pub fn columns(&self) -> usize {
        self.vertical[0].len()
    }

    /// Unreduced charges of every horizontal edge.
    pub fn charges(&self) -> Vec<Vec<i64>> {
        self.horizontal
            .iter()
            .map(|row| {
                let mut c = vec![0i64; row.len()];
                for p in (0..row.len()).rev() {
                    let east = if p + 1 < row.len() { c[p + 1] } else { 0 };
                    c[p] = east + i64::from(row[p] && p + 1 < row.len());
                }
                c
            })
            .collect()
    }

    /// Vertex types, row by row, left to right.
    pub fn vertex_types(&self) -> Option<Vec<Vec<VertexType>>> {
        (0..self.rows())
            .map(|t| {
                (0..self.columns())
                    .map(|p| {
                        vertex_type(
                            self.horizontal[t][p],
                            self.vertical[t + 1][p],
                            self.horizontal[t][p + 1],
                            self.vertical[t][p],
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// Left-boundary charges, bottom to top, as representatives in `1..=nq`.
    pub fn left_charges(&self, nq: u32) -> Vec<u32> {
        self.charges().iter().map(|c| rep(c[0], nq)).collect()
    }

    /// Unreduced left-boundary charges, bottom to top.
    pub fn left_charges_unreduced(&self) -> Vec<i64> {
        self.charges().iter().map(|c| c[0]).collect()
    }

    /// True when every `-` horizontal edge has charge divisible by `nq`.
    pub fn is_admissible(&self, nq: u32) -> bool {
        self.vertex_types().is_some()
            && self
                .charges()
                .iter()
                .zip(&self.horizontal)
                .all(|(c, h)| h.iter().zip(c).all(|(s, x)| *s || x % nq as i64 == 0))
    }

    /// Column labels of the `-` spins in the row of vertical edges `k`.
    pub fn minus_columns(&self, k: usize) -> Vec<i64> {
        let n = self.columns();
        self.vertical[k]
            .iter()
            .enumerate()
            .filter(|(_, s)| !**s)
            .map(|(p, _)| (n - 1 - p) as i64)
            .collect()
    }

    /// Build a state from its rows of vertical edges (bottom to top),
    /// recovering the horizontal edges by conservation.
    pub fn from_vertical(vertical: Vec<Vec<bool>>) -> Option<IceState> {
        let r = vertical.len().checked_sub(1)?;
        let n = vertical[0].len();
        let mut horizontal = Vec::with_capacity(r);
        for t in 0..r {
            let mut row = vec![false; n + 1];
            for p in (0..n).rev() {
                // [W] + [N] = [E] + [S]
                let w = i32::from(row[p + 1]) + i32::from(vertical[t][p])
                    - i32::from(vertical[t + 1][p]);
                if !(0..=1).contains(&w) {
                    return None;
                }
                row[p] = w == 1;
            }
            horizontal.push(row);
        }
        let s = IceState {
            vertical,
            horizontal,
        };
        s.vertex_types()?;
        Some(s)
    }

    /// Product of the vertex weights.
    pub fn weight(&self, nq: u32) -> Scalar {
        let charges = self.charges();
        let types = self.vertex_types().expect("admissible state");
        let mut w = Scalar::one().with_nq(nq);
        for (t, row) in types.iter().enumerate() {
            for (p, ty) in row.iter().enumerate() {
                let f = vertex_weight(*ty, charges[t][p + 1], t, nq);
                if !f.is_one() {
                    w = w * f;
                }
            }
        }
        w
    }

    /// Weight of each row separately, bottom to top.
    pub fn row_weights(&self, nq: u32) -> Vec<Scalar> {
        let charges = self.charges();
        let types = self.vertex_types().expect("admissible state");
        types
            .iter()
            .enumerate()
            .map(|(t, row)| {
                row.iter()
                    .enumerate()
                    .map(|(p, ty)| vertex_weight(*ty, charges[t][p + 1], t, nq))
                    .product::<Scalar>()
                    .with_nq(nq)
            })
            .collect()
    }

    /// JSON description of the state and its weight.
    pub fn to_json(&self, nq: u32) -> serde_json::Value {
        let spins = |v: &Vec<bool>| -> String { v.iter().map(|s| if *s { '+' } else { '-' }).collect() };
        let types = self.vertex_types().unwrap_or_default();
        json!({
            "vertical_top_to_bottom": self.vertical.iter().rev().map(spins).collect::<Vec<_>>(),
            "horizontal_top_to_bottom": self.horizontal.iter().rev().map(spins).collect::<Vec<_>>(),
            "charges_top_to_bottom": self.charges().into_iter().rev().collect::<Vec<_>>(),
            "vertex_types_top_to_bottom": types.iter().rev()
                .map(|r| r.iter().map(|t| t.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "left_charges": self.left_charges(nq),
            "weight": self.weight(nq),
            "weight_text": self.weight(nq).to_string(),
        })
    }
}

/// Enumerate the `n_Q`-admissible states of a system.
///
/// Rows are filled from the top down; inside a row the horizontal edges are
/// chosen right to left so that charges are known as soon as an edge is
/// fixed. The result is sorted by the vertical spins, top row first.
pub fn enumerate_states(sys: &System) -> Vec<IceState> {
    let mut out = Vec::new();
    let mut vertical = vec![Vec::new(); sys.r + 1];
    vertical[sys.r] = sys.top_boundary();
    let mut horizontal = vec![Vec::new(); sys.r];
    fill_rows(sys, sys.r, &mut vertical, &mut horizontal, &mut out);
    out.sort_by(|a, b| {
        a.vertical
            .iter()
            .rev()
            .cmp(b.vertical.iter().rev())
    });
    out
}

fn fill_rows(
    sys: &System,
    t_plus_1: usize,
    vertical: &mut Vec<Vec<bool>>,
    horizontal: &mut Vec<Vec<bool>>,
    out: &mut Vec<IceState>,
) {
    if t_plus_1 == 0 {
        if vertical[0].iter().all(|s| *s) {
            out.push(IceState {
                vertical: vertical.clone(),
                horizontal: horizontal.clone(),
            });
        }
        return;
    }
    let t = t_plus_1 - 1;
    let n = sys.columns;
    let north = vertical[t + 1].clone();
    let mut row = vec![false; n + 1];
    let mut south = vec![false; n];
    let mut rows_found = Vec::new();
    fill_row(sys, t, &north, n, 0, &mut row, &mut south, &mut rows_found);
    for (h, s) in rows_found {
        horizontal[t] = h;
        vertical[t] = s;
        fill_rows(sys, t, vertical, horizontal, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    sys: &System,
    t: usize,
    north: &[bool],
    p_plus_1: usize,
    east_charge: i64,
    row: &mut Vec<bool>,
    south: &mut Vec<bool>,
    found: &mut Vec<(Vec<bool>, Vec<bool>)>,
) {
    let nq = sys.nq as i64;
    if p_plus_1 == 0 {
        if !row[0] {
            return;
        }
        if let Some(c) = &sys.left_charges {
            if rep(east_charge, sys.nq) != c[t] {
                return;
            }
        }
        found.push((row.clone(), south.clone()));
        return;
    }
    let p = p_plus_1 - 1;
    let east = row[p + 1];
    let n = north[p];
    for west in [false, true] {
        let s = i32::from(west) + i32::from(n) - i32::from(east);
        if !(0..=1).contains(&s) {
            continue;
        }
        let s = s == 1;
        if vertex_type(west, n, east, s).is_none() {
            continue;
        }
        let charge = east_charge + i64::from(west);
        if !west && charge % nq != 0 {
            continue;
        }
        row[p] = west;
        south[p] = s;
        fill_row(sys, t, north, p, charge, row, south, found);
    }
}

/// `Z(S; c)`: the sum of the weights of the admissible states whose left
/// charges equal `c` (all states when `c` is `None`).
pub fn partition_function(sys: &System, c: Option<&[u32]>) -> Result<Scalar, LatticeError> {
    let sys = match c {
        Some(c) => sys.clone().with_left_charges(c)?,
        None => sys.clone(),
    };
    Ok(enumerate_states(&sys)
        .iter()
        .map(|s| s.weight(sys.nq))
        .sum::<Scalar>()
        .with_nq(sys.nq))
}

/// Partition functions of all charge classes that occur.
pub fn partition_functions_by_charge(sys: &System) -> BTreeMap<Vec<u32>, Scalar> {
    let mut out: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
    for s in enumerate_states(sys) {
        let w = s.weight(sys.nq);
        let e = out
            .entry(s.left_charges(sys.nq))
            .or_insert_with(|| Scalar::zero().with_nq(sys.nq));
        *e += w;
    }
    out
}

/// CSV summary: one line per charge class with its state count and total.
pub fn csv_summary(sys: &System) -> String {
    let mut counts: BTreeMap<Vec<u32>, (usize, Scalar)> = BTreeMap::new();
    for s in enumerate_states(sys) {
        let e = counts
            .entry(s.left_charges(sys.nq))
            .or_insert_with(|| (0, Scalar::zero()));
        e.0 += 1;
        e.1 += s.weight(sys.nq);
    }
    let mut out = String::from("charges,states,total\n");
    for (c, (n, z)) in counts {
        let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("\"{}\",{},\"{}\"\n", c.join(","), n, z));
    }
    out
}

/// A state of the `λ = (2,2,0)` system on five columns (top row `λ+ρ =
/// (4,3,0)`), admissible for `n_Q ∈ {1, 2}` only. Rows of vertical edges,
/// bottom to top, read left to right from column 4.
pub fn sample_state() -> IceState {
    let parse = |s: &str| s.chars().map(|c| c == '+').collect::<Vec<bool>>();
    let vertical = vec![
        parse("+++++"),
        parse("++-++"),
        parse("-+-++"),
        parse("--++-"),
    ];
    IceState::from_vertical(vertical).expect("valid state")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_examples() {
        let s = boundary_from_partition(&[2, 2, 0], 3, 5, 1).unwrap();
        assert_eq!(s.top_minus_columns(), vec![4, 3, 0]);
        let s = boundary_from_partition(&[0], 1, 1, 1).unwrap();
        assert_eq!(s.top_minus_columns(), vec![0]);
        let s = boundary_from_partition(&[1, 0], 2, 3, 1).unwrap();
        assert_eq!(s.top_minus_columns(), vec![2, 0]);
        assert!(matches!(
            boundary_from_partition(&[2, 2, 0], 3, 4, 1),
            Err(LatticeError::TooFewColumns { .. })
        ));
        assert!(matches!(
            boundary_from_partition(&[0, 1], 2, 4, 1),
            Err(LatticeError::NotPartition(_))
        ));
    }

    #[test]
    fn sample_state_charges_and_types() {
        let s = sample_state();
        let c = s.charges();
        assert_eq!(c[2], vec![4, 3, 2, 2, 1, 0]);
        assert_eq!(c[1], vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(c[0], vec![3, 2, 1, 0, 0, 0]);
        use VertexType::*;
        let t = s.vertex_types().unwrap();
        assert_eq!(t[2], vec![B1, C2, C1, A1, C2]);
        assert_eq!(t[1], vec![C2, B2, A2, B2, B2]);
        assert_eq!(t[0], vec![A1, A1, C2, B2, B2]);
        assert!(s.is_admissible(1));
        assert!(s.is_admissible(2));
        assert!(!s.is_admissible(3));
    }

    #[test]
    fn single_row_single_state() {
        let s = boundary_from_partition(&[0], 1, 1, 1).unwrap();
        let states = enumerate_states(&s);
        assert_eq!(states.len(), 1);
        assert!(states[0].weight(1).is_one() || !states[0].weight(1).is_zero());
    }

    #[test]
    fn all_plus_row_has_leftmost_charge_n() {
        let state = IceState {
            vertical: vec![vec![true; 3], vec![true; 3]],
            horizontal: vec![vec![true, true, true, false]],
        };
        assert_eq!(state.charges()[0][0], 3);
    }
}
