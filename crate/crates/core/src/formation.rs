//! Formation slots, robot-to-slot arrangements and follower references.

use crate::error::{invalid_input, FormationError, Result};
use crate::geometry::{centroid, Vec2};
use crate::scalar::Scalar;

/// Per-axis tolerance on the zero-centroid invariant.
pub const CENTROID_TOLERANCE: f64 = 1e-9;

/// Ordered slot coordinates centred on the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Formation<T> {
    slots: Vec<Vec2<T>>,
}

impl<T: Scalar> Formation<T> {
    /// Accept slots that already satisfy the invariants.
    pub fn new(slots: Vec<Vec2<T>>) -> Result<Self> {
        if slots.is_empty() {
            return Err(FormationError::InvalidSpec("formation needs at least one slot".into()));
        }
        if slots.iter().any(|s| !s.is_finite()) {
            return Err(FormationError::InvalidSpec("non-finite slot coordinate".into()));
        }
        let c = centroid(&slots)?;
        // 1e-9 for f64; single precision gets a few ulps of the largest coordinate
        let scale = slots.iter().fold(T::one(), |m, s| m.max(s.x.abs()).max(s.y.abs()));
        let tol = T::lit(CENTROID_TOLERANCE).max(T::epsilon() * T::lit(16.0) * scale);
        if c.x.abs() > tol || c.y.abs() > tol {
            return Err(FormationError::InvalidSpec(format!("slots are not centred on the origin (centroid {:?})", c)));
        }
        for (i, a) in slots.iter().enumerate() {
            if slots[i + 1..].iter().any(|b| a == b) {
                return Err(FormationError::InvalidSpec(format!("slot {i} is duplicated")));
            }
        }
        Ok(Formation { slots })
    }

    /// Shift arbitrary slots so their centroid is the origin.
    pub fn centered(slots: Vec<Vec2<T>>) -> Result<Self> {
        if slots.is_empty() {
            return Err(FormationError::InvalidSpec("formation needs at least one slot".into()));
        }
        let c = centroid(&slots)?;
        Formation::new(slots.into_iter().map(|s| s - c).collect())
    }

    pub fn slots(&self) -> &[Vec2<T>] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, i: usize) -> Vec2<T> {
        self.slots[i]
    }

    /// World coordinates of the formation placed around `center`.
    pub fn placed_at(&self, center: Vec2<T>) -> Vec<Vec2<T>> {
        self.slots.iter().map(|&s| s + center).collect()
    }
}

/// Robot-to-slot permutation with an optional leader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    mapping: Vec<usize>,
    leader: Option<usize>,
}

impl Assignment {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        check_permutation(&mapping)?;
        Ok(Assignment { mapping, leader: None })
    }

    pub fn with_leader(mapping: Vec<usize>, leader: usize) -> Result<Self> {
        check_permutation(&mapping)?;
        if leader >= mapping.len() {
            return Err(invalid_input(format!("leader {leader} out of range")));
        }
        Ok(Assignment { mapping, leader: Some(leader) })
    }

    pub fn identity(n: usize) -> Self {
        Assignment { mapping: (0..n).collect(), leader: None }
    }

    /// Slot index of robot `robot`.
    pub fn slot_of(&self, robot: usize) -> usize {
        self.mapping[robot]
    }

    /// Robot standing at `slot`.
    pub fn robot_at(&self, slot: usize) -> usize {
        self.mapping.iter().position(|&s| s == slot).expect("mapping is a bijection")
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn leader(&self) -> Option<usize> {
        self.leader
    }

    /// Slot held by the leader; present exactly when a leader is.
    pub fn leader_slot(&self) -> Option<usize> {
        self.leader.map(|l| self.mapping[l])
    }

    /// Same permutation, leader designation dropped.
    pub fn without_leader(&self) -> Self {
        Assignment { mapping: self.mapping.clone(), leader: None }
    }
}

fn check_permutation(mapping: &[usize]) -> Result<()> {
    let n = mapping.len();
    let mut seen = vec![false; n];
    for &s in mapping {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(invalid_input(format!("mapping {mapping:?} is not a permutation")));
        }
    }
    Ok(())
}

/// What a robot measures its destination against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Root of the leader tree; it holds its position.
    Leader,
    /// Another robot, by index.
    Robot(usize),
    /// The formation center.
    Center,
}

/// Reference robot and required offset for every robot.
///
/// For a robot reference, `offsets[i] = f[d[ref]] - f[d[i]]`; for a center
/// reference, `offsets[i] = f[d[i]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FollowerGraph<T> {
    pub follows: Vec<Reference>,
    pub offsets: Vec<Vec2<T>>,
}

impl<T: Scalar> FollowerGraph<T> {
    pub fn len(&self) -> usize {
        self.follows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.follows.is_empty()
    }

    /// Number of robot hops from `robot` to the leader, `None` for center references.
    pub fn depth(&self, robot: usize) -> Option<usize> {
        let mut cur = robot;
        let mut depth = 0;
        loop {
            match self.follows[cur] {
                Reference::Leader => return Some(depth),
                Reference::Center => return None,
                Reference::Robot(r) => {
                    depth += 1;
                    if depth > self.follows.len() {
                        return None;
                    }
                    cur = r;
                }
            }
        }
    }

    /// Every robot chain ends at the leader and no chain revisits a robot.
    pub fn is_acyclic(&self) -> bool {
        (0..self.len()).all(|i| match self.follows[i] {
            Reference::Center => true,
            _ => self.depth(i).is_some(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formation_rejects_off_center() {
        let r = Formation::new(vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        assert!(r.is_err());
        let f = Formation::centered(vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        assert_eq!(f.slot(0), Vec2::new(0.5, -0.5));
    }

    #[test]
    fn formation_rejects_duplicates_and_empty() {
        assert!(Formation::<f64>::centered(vec![]).is_err());
        let dup = vec![Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(-2.0, 0.0)];
        assert!(Formation::new(dup).is_err());
    }

    #[test]
    fn assignment_rejects_non_permutations() {
        assert!(Assignment::new(vec![0, 0]).is_err());
        assert!(Assignment::new(vec![0, 2]).is_err());
        assert!(Assignment::with_leader(vec![1, 0], 2).is_err());
        let a = Assignment::with_leader(vec![2, 0, 1], 1).unwrap();
        assert_eq!(a.leader_slot(), Some(0));
        assert_eq!(a.robot_at(1), 2);
    }

    #[test]
    fn depth_detects_cycles() {
        let g = FollowerGraph::<f64> {
            follows: vec![Reference::Robot(1), Reference::Robot(0)],
            offsets: vec![Vec2::zero(); 2],
        };
        assert!(!g.is_acyclic());
        let ok = FollowerGraph::<f64> {
            follows: vec![Reference::Leader, Reference::Robot(0), Reference::Robot(1)],
            offsets: vec![Vec2::zero(); 3],
        };
        assert!(ok.is_acyclic());
        assert_eq!(ok.depth(2), Some(2));
    }
}
