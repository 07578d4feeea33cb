//! Robot-to-slot assignment: squared-distance cost matrices for the leader and
//! center control modes, the Hungarian solve, and the leader enumeration.

mod hungarian;

pub use hungarian::{solve_square, Cost};

use crate::error::{invalid_input, Result};
use crate::formation::{Assignment, Formation};
use crate::formations::leading_slot;
use crate::geometry::Vec2;
use crate::scalar::Scalar;

/// Which control mode produced a cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixMode<C> {
    /// Plain matrix with no geometric origin.
    Plain,
    /// Rows are the non-leader robots, columns the non-leader slots, both in
    /// ascending order with the excluded index skipped.
    Leader {
        leader: usize,
        leader_slot: usize,
    },
    Center(Vec2<C>),
}

/// Square non-negative cost matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<C> {
    entries: Vec<C>,
    n: usize,
    mode: MatrixMode<C>,
}

impl<C: Cost> CostMatrix<C> {
    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid_input("cost matrix is not square"));
        }
        Self::from_entries(rows.into_iter().flatten().collect(), n, MatrixMode::Plain)
    }

    fn from_entries(entries: Vec<C>, n: usize, mode: MatrixMode<C>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(invalid_input("cost matrix is not square"));
        }
        if let Some(bad) = entries.iter().find(|&&e| !e.is_finite_cost() || e < C::zero()) {
            return Err(invalid_input(format!("cost entries must be finite and non-negative, got {bad:?}")));
        }
        Ok(CostMatrix { entries, n, mode })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.entries[row * self.n + col]
    }

    pub fn mode(&self) -> &MatrixMode<C> {
        &self.mode
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    /// Robot index behind matrix row `row`.
    pub fn row_robot(&self, row: usize) -> usize {
        match self.mode {
            MatrixMode::Leader { leader, .. } => skip_index(row, leader),
            _ => row,
        }
    }

    /// Slot index behind matrix column `col`.
    pub fn col_slot(&self, col: usize) -> usize {
        match self.mode {
            MatrixMode::Leader { leader_slot, .. } => skip_index(col, leader_slot),
            _ => col,
        }
    }
}

fn skip_index(dense: usize, skipped: usize) -> usize {
    if dense >= skipped {
        dense + 1
    } else {
        dense
    }
}

/// A solved arrangement and its total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult<C> {
    pub assignment: Assignment,
    pub total_cost: C,
}

/// Leader-mode matrix: `a_ij = |(x_i - f_j) - (x_lead - f_lead_slot)|^2` over
/// the non-leader robots and slots.
pub fn leader_cost_matrix<T: Scalar + Cost>(
    initial: &[Vec2<T>],
    f: &Formation<T>,
    leader: usize,
    leader_slot: usize,
) -> Result<CostMatrix<T>> {
    check_sizes(initial, f)?;
    let n = initial.len();
    if leader >= n || leader_slot >= n {
        return Err(invalid_input(format!("leader {leader} or leader slot {leader_slot} out of range for {n} robots")));
    }
    let anchor = initial[leader] - f.slot(leader_slot);
    let mut entries = Vec::with_capacity((n - 1) * (n - 1));
    for i in (0..n).filter(|&i| i != leader) {
        for j in (0..n).filter(|&j| j != leader_slot) {
            entries.push(((initial[i] - f.slot(j)) - anchor).norm_squared());
        }
    }
    CostMatrix::from_entries(entries, n - 1, MatrixMode::Leader { leader, leader_slot })
}

/// Center-mode matrix: `a_ij = |(x_i - f_j) - c|^2`.
pub fn center_cost_matrix<T: Scalar + Cost>(
    initial: &[Vec2<T>],
    f: &Formation<T>,
    center: Vec2<T>,
) -> Result<CostMatrix<T>> {
    check_sizes(initial, f)?;
    let n = initial.len();
    let mut entries = Vec::with_capacity(n * n);
    for &x in initial {
        for &s in f.slots() {
            entries.push(((x - s) - center).norm_squared());
        }
    }
    CostMatrix::from_entries(entries, n, MatrixMode::Center(center))
}

fn check_sizes<T: Scalar>(initial: &[Vec2<T>], f: &Formation<T>) -> Result<()> {
    if initial.len() != f.len() {
        return Err(invalid_input(format!("{} robots for a formation of {} slots", initial.len(), f.len())));
    }
    if initial.iter().any(|p| !p.is_finite()) {
        return Err(invalid_input("non-finite robot position"));
    }
    Ok(())
}

/// Minimum-cost permutation of `m`. In leader mode the returned mapping covers
/// all robots, with the leader pinned to the leader slot at zero cost.
pub fn hungarian_solve<C: Cost>(m: &CostMatrix<C>) -> Result<AssignmentResult<C>> {
    let k = m.size();
    let (cols, total_cost) = if k == 0 {
        (Vec::new(), C::zero())
    } else {
        let cols = solve_square(&m.entries, k)?;
        let total = cols.iter().enumerate().fold(C::zero(), |acc, (r, &c)| acc + m.get(r, c));
        (cols, total)
    };
    let assignment = match m.mode {
        MatrixMode::Leader { leader, leader_slot } => {
            let mut mapping = vec![0; k + 1];
            mapping[leader] = leader_slot;
            for (r, &c) in cols.iter().enumerate() {
                mapping[m.row_robot(r)] = m.col_slot(c);
            }
            Assignment::with_leader(mapping, leader)?
        }
        _ => {
            if k == 0 {
                return Err(invalid_input("empty cost matrix"));
            }
            Assignment::new(cols)?
        }
    };
    Ok(AssignmentResult { assignment, total_cost })
}

/// Best arrangement with a fixed leader standing on `leader_slot`.
pub fn assign_with_fixed_leader<T: Scalar + Cost>(
    initial: &[Vec2<T>],
    f: &Formation<T>,
    leader: usize,
    leader_slot: usize,
) -> Result<AssignmentResult<T>> {
    hungarian_solve(&leader_cost_matrix(initial, f, leader, leader_slot)?)
}

/// Try every robot as the leader on the formation's leading slot and keep the
/// cheapest arrangement; equal costs go to the lowest leader index.
pub fn assign_with_leader<T: Scalar + Cost>(initial: &[Vec2<T>], f: &Formation<T>) -> Result<AssignmentResult<T>> {
    let n = initial.len();
    if n < 2 {
        return Err(invalid_input(format!("leader mode needs at least 2 robots, got {n}")));
    }
    check_sizes(initial, f)?;
    let slot = leading_slot(f);
    let mut best: Option<AssignmentResult<T>> = None;
    for leader in 0..n {
        let cand = assign_with_fixed_leader(initial, f, leader, slot)?;
        if best.as_ref().is_none_or(|b| cand.total_cost < b.total_cost) {
            best = Some(cand);
        }
    }
    Ok(best.expect("n >= 2 candidates"))
}

/// Best arrangement around a given center.
pub fn assign_with_center<T: Scalar + Cost>(
    initial: &[Vec2<T>],
    f: &Formation<T>,
    center: Vec2<T>,
) -> Result<AssignmentResult<T>> {
    hungarian_solve(&center_cost_matrix(initial, f, center)?)
}

/// Straight-line squared travel of an arbitrary leader-mode arrangement.
pub fn leader_mode_cost<T: Scalar>(initial: &[Vec2<T>], f: &Formation<T>, a: &Assignment) -> Result<T> {
    let leader = a.leader().ok_or_else(|| invalid_input("leader-mode cost needs a leader"))?;
    if initial.len() != f.len() || a.len() != f.len() {
        return Err(invalid_input("size mismatch between robots, formation and arrangement"));
    }
    let anchor = initial[leader] - f.slot(a.slot_of(leader));
    Ok((0..initial.len())
        .filter(|&i| i != leader)
        .fold(T::zero(), |acc, i| acc + ((initial[i] - f.slot(a.slot_of(i))) - anchor).norm_squared()))
}

/// Straight-line squared travel of an arbitrary center-mode arrangement.
pub fn center_mode_cost<T: Scalar>(
    initial: &[Vec2<T>],
    f: &Formation<T>,
    a: &Assignment,
    center: Vec2<T>,
) -> Result<T> {
    if initial.len() != f.len() || a.len() != f.len() {
        return Err(invalid_input("size mismatch between robots, formation and arrangement"));
    }
    Ok(initial
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &x)| acc + ((x - f.slot(a.slot_of(i))) - center).norm_squared()))
}
