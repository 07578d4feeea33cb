//! Moving an assembled swarm into a new formation.

use crate::assignment::assign_with_center;
use crate::error::{FormationError, Result};
use crate::formation::Assignment;
use crate::formations::{optimal_center, FormationSpec};
use crate::geometry::{centroid, Vec2};
use crate::kinematics::{step_kinematics, SimConfig};
use crate::rng::RngStream;
use crate::sensing::{QuantizerSpec, SensorModel};

use super::sim::{continue_forming, ControlMode, Phase, SwarmState, Trajectory};

/// Centroid distance at which the approach phase hands over to forming,
/// half the control radius.
pub fn default_approach_distance(cfg: &SimConfig) -> f64 {
    cfg.radius / 2.0
}

/// Translate the whole swarm toward `c` at full speed until its centroid is
/// within `d0` of `c`. Returns the states after each slot; the last one is in
/// the forming phase. Empty when the centroid is already close enough.
pub fn approach_center(s: &SwarmState, c: Vec2<f64>, d0: f64, cfg: &SimConfig) -> Result<Vec<SwarmState>> {
    if !(d0 >= 0.0) || !c.is_finite() {
        return Err(FormationError::InvalidInput(format!("bad approach target {c:?} with d0 = {d0}")));
    }
    let mut out: Vec<SwarmState> = Vec::new();
    let mut current = s.clone();
    loop {
        let gap = c - centroid(&current.positions())?;
        if gap.norm() <= d0 {
            break;
        }
        if current.slot >= cfg.max_slots {
            return Ok(out);
        }
        let v = gap * (cfg.u_max / gap.norm());
        let robots = current.robots.iter().map(|r| step_kinematics(r, v, cfg.u_max)).collect::<Result<Vec<_>>>()?;
        current = SwarmState { slot: current.slot + 1, robots, ..current };
        current.phase = Phase::ApproachCenter;
        out.push(current.clone());
    }
    if let Some(last) = out.last_mut() {
        last.phase = Phase::Forming;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CenterChoice {
    Given(Vec2<f64>),
    /// The centroid of the current positions, which minimizes total squared travel.
    Auto,
}

#[derive(Debug, Clone)]
pub struct Conversion {
    pub center: Vec2<f64>,
    pub assignment: Assignment,
    /// Squared straight-line cost from the starting positions.
    pub estimated_cost: f64,
    pub trajectory: Trajectory,
}

/// Form `target` around a center from the positions in `current`.
///
/// A given center farther than `d0` from the swarm's centroid is approached
/// first by rigid translation. Arrangement is center-mode optimal; a rigid
/// translation does not change it, so it is computed once at the start.
#[allow(clippy::too_many_arguments)]
pub fn convert_formation(
    current: &[Vec2<f64>],
    target: &FormationSpec<f64>,
    center: CenterChoice,
    d0: f64,
    cfg: &SimConfig,
    sensor: &SensorModel,
    q: &QuantizerSpec,
    rng: &RngStream,
) -> Result<Conversion> {
    let f = target.build()?;
    let c = match center {
        CenterChoice::Given(c) => c,
        CenterChoice::Auto => optimal_center(current)?,
    };
    let best = assign_with_center(current, &f, c)?;
    let mut state = SwarmState::new(current, &f, &best.assignment, ControlMode::Center(c))?;
    let far = c.distance(centroid(current)?) > d0;
    if far {
        state.phase = Phase::ApproachCenter;
    }
    let mut t = Trajectory::start(state.clone(), cfg.safety_radius);
    if far {
        for s in approach_center(&state, c, d0, cfg)? {
            t.record(s, cfg.safety_radius);
        }
    }
    if t.final_state().phase == Phase::Forming {
        continue_forming(&mut t, cfg, sensor, q, rng)?;
    }
    Ok(Conversion { center: c, assignment: best.assignment, estimated_cost: best.total_cost, trajectory: t })
}
