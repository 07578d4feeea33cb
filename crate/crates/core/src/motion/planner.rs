//! Region-stepping policy and claim-based conflict detection.
//!
//! A robot sees its destination through a polar grid centred on that
//! destination: `n_r - 1` rings of equal width and `n_theta - 1` equal
//! sectors. Each slot it tries to drop one ring, keeping its sector; if that
//! would collide it slides one sector counterclockwise, then clockwise, and
//! otherwise waits.

use crate::geometry::Vec2;
use crate::sensing::{quantize_ring, quantize_sector, QuantizerSpec};

/// Ring `h` and sector `j` of the destination-centred grid, both one-based.
///
/// `h = n_r` is used for a robot whose estimated distance exceeds the control
/// radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolarRegion {
    pub h: usize,
    pub j: usize,
}

impl PolarRegion {
    /// Region of a measured `(distance, bearing)` pair.
    pub fn locate(distance: f64, bearing: f64, q: &QuantizerSpec) -> Self {
        let j = quantize_sector(bearing, q);
        if distance > q.radius {
            PolarRegion { h: q.n_r, j }
        } else {
            PolarRegion { h: quantize_ring(distance, q), j }
        }
    }

    pub fn is_outside(&self, q: &QuantizerSpec) -> bool {
        self.h >= q.n_r
    }

    /// Polar midpoint of the region relative to the destination.
    pub fn representative(&self, q: &QuantizerSpec) -> Vec2<f64> {
        Vec2::polar(q.ring_midpoint(self.h), q.sector_midpoint(self.j))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepDecision {
    /// One ring closer, same sector. From the innermost ring this targets the
    /// destination itself.
    Inward(PolarRegion),
    SideCcw(PolarRegion),
    SideCw(PolarRegion),
    Stop,
    Arrived,
}

impl StepDecision {
    pub fn target(&self) -> Option<PolarRegion> {
        match *self {
            StepDecision::Inward(r) | StepDecision::SideCcw(r) | StepDecision::SideCw(r) => Some(r),
            StepDecision::Stop | StepDecision::Arrived => None,
        }
    }

    pub fn is_move(&self) -> bool {
        self.target().is_some()
    }
}

/// Choose the first unblocked action in the order inward, counterclockwise,
/// clockwise, stop. `blocked` reports whether a candidate conflicts with a
/// claim that takes priority.
///
/// In the innermost ring the robot has arrived once its distance estimate is
/// within tolerance; otherwise it heads for the destination point.
pub fn plan_step(
    region: PolarRegion,
    q: &QuantizerSpec,
    within_tolerance: bool,
    mut blocked: impl FnMut(&StepDecision) -> bool,
) -> StepDecision {
    if region.h <= 1 && within_tolerance {
        return StepDecision::Arrived;
    }
    let inward = PolarRegion { h: region.h.saturating_sub(1).max(1), j: region.j };
    let candidates = [
        StepDecision::Inward(inward),
        StepDecision::SideCcw(PolarRegion { h: region.h, j: q.sector_offset(region.j, 1) }),
        StepDecision::SideCw(PolarRegion { h: region.h, j: q.sector_offset(region.j, -1) }),
    ];
    candidates.into_iter().find(|c| !blocked(c)).unwrap_or(StepDecision::Stop)
}

/// What the robot believes its offset from the destination to be, and where
/// `decision` asks it to be, both relative to the destination.
///
/// Inside the control circle both come from the quantized region. Beyond it
/// the raw distance estimate is used and inward means straight at the
/// destination.
pub fn offsets(
    region: PolarRegion,
    distance: f64,
    bearing: f64,
    decision: &StepDecision,
    q: &QuantizerSpec,
) -> (Vec2<f64>, Vec2<f64>) {
    let outside = region.is_outside(q);
    let believed = if outside { Vec2::polar(distance.max(0.0), bearing) } else { region.representative(q) };
    let target = match *decision {
        StepDecision::Stop | StepDecision::Arrived => believed,
        StepDecision::Inward(r) => {
            if outside || region.h == 1 {
                Vec2::zero()
            } else {
                r.representative(q)
            }
        }
        StepDecision::SideCcw(r) | StepDecision::SideCw(r) => {
            if outside {
                let turn = match *decision {
                    StepDecision::SideCcw(_) => q.sector_width(),
                    _ => -q.sector_width(),
                };
                believed.rotated(turn)
            } else {
                r.representative(q)
            }
        }
    };
    (believed, target)
}

/// Next position a robot intends to occupy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Claim {
    pub robot: usize,
    pub point: Vec2<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConflictKind {
    /// Two claimed points too close.
    Claim,
    /// A claimed point too close to another robot's current position.
    Position,
}

/// `robot` must yield to `other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Conflict {
    pub robot: usize,
    pub other: usize,
    pub kind: ConflictKind,
}

fn too_close(a: Vec2<f64>, b: Vec2<f64>, safety_radius: f64) -> bool {
    a.distance(b) <= 2.0 * safety_radius
}

/// Conflicts a candidate point for `robot` would cause against already
/// settled claims and against every other robot's current position.
pub fn blocking_conflicts(
    robot: usize,
    point: Vec2<f64>,
    settled: &[Claim],
    positions: &[Vec2<f64>],
    safety_radius: f64,
) -> Vec<Conflict> {
    let claims = settled
        .iter()
        .filter(|c| c.robot != robot && too_close(point, c.point, safety_radius))
        .map(|c| Conflict { robot, other: c.robot, kind: ConflictKind::Claim });
    let occupied = positions
        .iter()
        .enumerate()
        .filter(|&(k, &p)| k != robot && too_close(point, p, safety_radius))
        .map(|(k, _)| Conflict { robot, other: k, kind: ConflictKind::Position });
    claims.chain(occupied).collect()
}

/// Every pairwise conflict in a set of claims. Between two claims the
/// higher-numbered robot is the one that yields.
pub fn detect_conflicts(claims: &[Claim], positions: &[Vec2<f64>], safety_radius: f64) -> Vec<Conflict> {
    let mut out = Vec::new();
    for (k, a) in claims.iter().enumerate() {
        for b in &claims[k + 1..] {
            if too_close(a.point, b.point, safety_radius) {
                let (lo, hi) = if a.robot < b.robot { (a.robot, b.robot) } else { (b.robot, a.robot) };
                out.push(Conflict { robot: hi, other: lo, kind: ConflictKind::Claim });
            }
        }
        for (p, &pos) in positions.iter().enumerate() {
            if p != a.robot && too_close(a.point, pos, safety_radius) {
                out.push(Conflict { robot: a.robot, other: p, kind: ConflictKind::Position });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuantizerSpec {
        QuantizerSpec::new(10.0, 11, 9, 5.0).unwrap()
    }

    #[test]
    fn innermost_ring_arrives() {
        let d = plan_step(PolarRegion { h: 1, j: 4 }, &q(), true, |_| true);
        assert_eq!(d, StepDecision::Arrived);
    }

    #[test]
    fn free_path_goes_inward() {
        let d = plan_step(PolarRegion { h: 3, j: 2 }, &q(), false, |_| false);
        assert_eq!(d, StepDecision::Inward(PolarRegion { h: 2, j: 2 }));
    }

    #[test]
    fn deviation_order() {
        let r = PolarRegion { h: 3, j: 1 };
        let ccw = plan_step(r, &q(), false, |d| matches!(d, StepDecision::Inward(_)));
        assert_eq!(ccw, StepDecision::SideCcw(PolarRegion { h: 3, j: 2 }));
        let cw = plan_step(r, &q(), false, |d| !matches!(d, StepDecision::SideCw(_)));
        // sector 1 wraps clockwise to the last sector
        assert_eq!(cw, StepDecision::SideCw(PolarRegion { h: 3, j: 8 }));
        assert_eq!(plan_step(r, &q(), false, |_| true), StepDecision::Stop);
    }

    #[test]
    fn locate_marks_outside() {
        let q = q();
        assert_eq!(PolarRegion::locate(12.0, 0.1, &q), PolarRegion { h: 11, j: 1 });
        assert!(PolarRegion::locate(12.0, 0.1, &q).is_outside(&q));
        assert_eq!(PolarRegion::locate(2.5, 0.1, &q), PolarRegion { h: 3, j: 1 });
    }

    #[test]
    fn inward_offset_drops_one_ring() {
        let q = q();
        let r = PolarRegion { h: 3, j: 1 };
        let d = StepDecision::Inward(PolarRegion { h: 2, j: 1 });
        let (believed, target) = offsets(r, 2.4, 0.3, &d, &q);
        assert!((believed.norm() - 2.5).abs() < 1e-12);
        assert!((believed.distance(target) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conflict_examples() {
        let at = |robot, x| Claim { robot, point: Vec2::new(x, 0.0) };
        assert!(detect_conflicts(&[at(0, 0.0), at(1, 5.0)], &[], 1.0).is_empty());
        let same = detect_conflicts(&[at(0, 3.0), at(1, 3.0)], &[], 1.0);
        assert_eq!(same, vec![Conflict { robot: 1, other: 0, kind: ConflictKind::Claim }]);
        // boundary counts as a conflict
        assert_eq!(detect_conflicts(&[at(0, 0.0), at(1, 2.0)], &[], 1.0).len(), 1);
        let near_body = detect_conflicts(&[at(0, 0.0)], &[Vec2::new(9.0, 9.0), Vec2::new(1.5, 0.0)], 1.0);
        assert_eq!(near_body, vec![Conflict { robot: 0, other: 1, kind: ConflictKind::Position }]);
    }
}
