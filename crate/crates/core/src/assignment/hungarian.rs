//! Hungarian method in its original reduction form.
//!
//! Rows and columns are first reduced by their minima. The zero cells then
//! form a bipartite graph; a maximum matching on it is grown with augmenting
//! paths. While the matching is imperfect, the minimum line cover of the zeros
//! is read off the alternating-path reachability sets (König), the smallest
//! uncovered entry is subtracted from every uncovered row and added to every
//! covered column, and matching resumes. Row/column shifts never change the
//! optimal permutation, and matched zeros stay zero across a shift, so the
//! matching is kept between rounds.

use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::{invalid_input, Result};

/// Entry type of a cost matrix.
pub trait Cost: Copy + PartialOrd + Debug + Add<Output = Self> + Sub<Output = Self> + Zero + Send + Sync {
    /// Largest magnitude treated as zero once the matrix has been shifted,
    /// given the largest original entry.
    fn zero_tolerance(max_entry: Self) -> Self;

    fn is_finite_cost(self) -> bool;
}

macro_rules! float_cost {
    ($t:ty) => {
        impl Cost for $t {
            fn zero_tolerance(max_entry: Self) -> Self {
                (1e-9 as $t).max(<$t>::EPSILON * 64.0 * max_entry)
            }
            fn is_finite_cost(self) -> bool {
                self.is_finite()
            }
        }
    };
}

macro_rules! int_cost {
    ($t:ty) => {
        impl Cost for $t {
            fn zero_tolerance(_: Self) -> Self {
                0
            }
            fn is_finite_cost(self) -> bool {
                true
            }
        }
    };
}

float_cost!(f32);
float_cost!(f64);
int_cost!(i32);
int_cost!(i64);

const NONE: usize = usize::MAX;

/// Optimal row-to-column permutation of a square, non-negative matrix stored
/// row-major. Returns `cols[row]`.
pub fn solve_square<C: Cost>(entries: &[C], n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(invalid_input("empty cost matrix"));
    }
    if entries.len() != n * n {
        return Err(invalid_input(format!("cost matrix is not square: {} entries for {n} rows", entries.len())));
    }
    let mut max_entry = C::zero();
    for &e in entries {
        if !e.is_finite_cost() {
            return Err(invalid_input("non-finite cost entry"));
        }
        if e < C::zero() {
            return Err(invalid_input(format!("negative cost entry {e:?}")));
        }
        if e > max_entry {
            max_entry = e;
        }
    }
    let tol = C::zero_tolerance(max_entry);
    let mut a = entries.to_vec();

    for i in 0..n {
        let row = &mut a[i * n..(i + 1) * n];
        let m = row.iter().copied().fold(row[0], |m, v| if v < m { v } else { m });
        row.iter_mut().for_each(|v| *v = *v - m);
    }
    for j in 0..n {
        let m = (0..n).map(|i| a[i * n + j]).fold(a[j], |m, v| if v < m { v } else { m });
        (0..n).for_each(|i| a[i * n + j] = a[i * n + j] - m);
    }

    let mut solver = ZeroMatching::new(n);
    loop {
        let is_zero = |i: usize, j: usize, a: &[C]| a[i * n + j] <= tol;
        solver.grow(|i, j| is_zero(i, j, &a));
        if solver.size == n {
            break;
        }

        let (row_reach, col_reach) = solver.reachable(|i, j| is_zero(i, j, &a));
        // smallest entry not covered by (unreached rows) + (reached columns)
        let mut delta: Option<C> = None;
        for i in (0..n).filter(|&i| row_reach[i]) {
            for j in (0..n).filter(|&j| !col_reach[j]) {
                let v = a[i * n + j];
                if delta.is_none_or(|d| v < d) {
                    delta = Some(v);
                }
            }
        }
        let delta = delta.expect("an imperfect matching leaves an uncovered cell");
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                match (row_reach[i], col_reach[j]) {
                    (true, false) => a[idx] = a[idx] - delta,
                    (false, true) => a[idx] = a[idx] + delta,
                    _ => {}
                }
            }
        }
    }
    Ok(solver.row_to_col)
}

/// Maximum matching on the zero cells, grown incrementally.
struct ZeroMatching {
    n: usize,
    row_to_col: Vec<usize>,
    col_to_row: Vec<usize>,
    size: usize,
}

impl ZeroMatching {
    fn new(n: usize) -> Self {
        ZeroMatching { n, row_to_col: vec![NONE; n], col_to_row: vec![NONE; n], size: 0 }
    }

    /// Augment from every free row, lowest index first.
    fn grow(&mut self, zero: impl Fn(usize, usize) -> bool) {
        for r in 0..self.n {
            if self.row_to_col[r] != NONE {
                continue;
            }
            let mut seen = vec![false; self.n];
            if self.augment(r, &zero, &mut seen) {
                self.size += 1;
            }
        }
    }

    fn augment(&mut self, r: usize, zero: &impl Fn(usize, usize) -> bool, seen: &mut [bool]) -> bool {
        for c in 0..self.n {
            if seen[c] || !zero(r, c) {
                continue;
            }
            seen[c] = true;
            let owner = self.col_to_row[c];
            if owner == NONE || self.augment(owner, zero, seen) {
                self.row_to_col[r] = c;
                self.col_to_row[c] = r;
                return true;
            }
        }
        false
    }

    /// Rows and columns reachable from free rows by alternating paths.
    fn reachable(&self, zero: impl Fn(usize, usize) -> bool) -> (Vec<bool>, Vec<bool>) {
        let mut rows = vec![false; self.n];
        let mut cols = vec![false; self.n];
        let mut stack: Vec<usize> = (0..self.n).filter(|&r| self.row_to_col[r] == NONE).collect();
        for &r in &stack {
            rows[r] = true;
        }
        while let Some(r) = stack.pop() {
            for c in 0..self.n {
                if cols[c] || !zero(r, c) {
                    continue;
                }
                cols[c] = true;
                let owner = self.col_to_row[c];
                if owner != NONE && !rows[owner] {
                    rows[owner] = true;
                    stack.push(owner);
                }
            }
        }
        (rows, cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(a: &[i64], n: usize) -> i64 {
        fn rec(a: &[i64], n: usize, row: usize, used: &mut [bool]) -> i64 {
            if row == n {
                return 0;
            }
            let mut best = i64::MAX;
            for c in 0..n {
                if !used[c] {
                    used[c] = true;
                    best = best.min(a[row * n + c] + rec(a, n, row + 1, used));
                    used[c] = false;
                }
            }
            best
        }
        rec(a, n, 0, &mut vec![false; n])
    }

    fn cost(a: &[i64], n: usize, cols: &[usize]) -> i64 {
        cols.iter().enumerate().map(|(r, &c)| a[r * n + c]).sum()
    }

    #[test]
    fn single_entry() {
        assert_eq!(solve_square(&[0i64], 1).unwrap(), vec![0]);
    }

    #[test]
    fn zero_diagonal_is_identity() {
        assert_eq!(solve_square(&[0i64, 1, 1, 0], 2).unwrap(), vec![0, 1]);
        assert_eq!(solve_square(&[0.0, 2.0, 2.0, 0.0], 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn three_by_three_against_enumeration() {
        // all 6 permutations: the minimum is 5 at rows -> cols (1, 0, 2)
        let a = [4i64, 1, 3, 2, 0, 5, 3, 2, 2];
        let cols = solve_square(&a, 3).unwrap();
        assert_eq!(cost(&a, 3, &cols), 5);
        assert_eq!(brute_force(&a, 3), 5);
        assert_eq!(cols, vec![1, 0, 2]);
    }

    #[test]
    fn needs_several_cover_rounds() {
        let a = [
            9i64, 11, 14, 11, 7, //
            6, 15, 13, 13, 10, //
            12, 13, 6, 8, 8, //
            11, 9, 10, 12, 9, //
            7, 12, 14, 10, 14,
        ];
        let cols = solve_square(&a, 5).unwrap();
        assert_eq!(cost(&a, 5, &cols), brute_force(&a, 5));
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(solve_square(&[1i64, 2, 3], 2).is_err());
        assert!(solve_square(&[1i64, -2, 3, 4], 2).is_err());
        assert!(solve_square(&[1.0, f64::NAN, 3.0, 4.0], 2).is_err());
        assert!(solve_square::<f64>(&[], 0).is_err());
    }
}
