//! Slot-synchronous swarm simulation.

use crate::error::{FormationError, Result};
use crate::formation::{Assignment, FollowerGraph, Formation, Reference};
use crate::geometry::Vec2;
use crate::kinematics::{step_kinematics, RobotState, SimConfig};
use crate::rng::RngStream;
use crate::sensing::{estimate_distance, formation_bias, sample_distances, sense_bearing, QuantizerSpec, SensorModel};

use super::graph::build_follower_graph;
use super::planner::{blocking_conflicts, offsets, plan_step, Claim, Conflict, PolarRegion, StepDecision};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlMode {
    /// Robots track references down a tree rooted at a stationary leader.
    Leader,
    /// Robots track their slot around a fixed formation center.
    Center(Vec2<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    ApproachCenter,
    Forming,
    Done,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub slot: usize,
    pub robots: Vec<RobotState<f64>>,
    pub assignment: Assignment,
    pub graph: FollowerGraph<f64>,
    /// Formation center in center mode.
    pub center: Option<Vec2<f64>>,
    pub phase: Phase,
}

impl SwarmState {
    pub fn new(initial: &[Vec2<f64>], f: &Formation<f64>, a: &Assignment, mode: ControlMode) -> Result<Self> {
        if initial.len() != f.len() || a.len() != f.len() {
            return Err(FormationError::InvalidInput(format!(
                "{} robots, {} slots, arrangement of {}",
                initial.len(),
                f.len(),
                a.len()
            )));
        }
        if initial.iter().any(|p| !p.is_finite()) {
            return Err(FormationError::InvalidInput("non-finite initial position".into()));
        }
        let (assignment, center) = match mode {
            ControlMode::Leader => {
                if a.leader().is_none() {
                    return Err(FormationError::InvalidInput("leader mode needs an arrangement with a leader".into()));
                }
                (a.clone(), None)
            }
            ControlMode::Center(c) => (a.without_leader(), Some(c)),
        };
        let graph = build_follower_graph(f, &assignment)?;
        let mut robots: Vec<_> = initial.iter().enumerate().map(|(i, &p)| RobotState::at_rest(i, p)).collect();
        if let Some(l) = assignment.leader() {
            robots[l].arrived = true;
        }
        Ok(SwarmState { slot: 0, robots, assignment, graph, center, phase: Phase::Forming })
    }

    pub fn positions(&self) -> Vec<Vec2<f64>> {
        self.robots.iter().map(|r| r.position).collect()
    }

    pub fn destinations(&self) -> Result<Vec<Vec2<f64>>> {
        (0..self.robots.len()).map(|i| current_destination(i, self)).collect()
    }

    fn reference_moved(&self, i: usize) -> bool {
        match self.graph.follows[i] {
            Reference::Robot(h) => self.robots[h].velocity != Vec2::zero(),
            Reference::Leader | Reference::Center => false,
        }
    }
}

/// Where robot `i` should stand given the swarm as it is now.
///
/// Leader mode: the reference's position shifted by the slot difference,
/// `x_ref - p_i` with `p_i = f[d[ref]] - f[d[i]]`. The leader's destination is
/// its own position. Center mode: `c + f[d[i]]`.
pub fn current_destination(i: usize, s: &SwarmState) -> Result<Vec2<f64>> {
    let robot = s.robots.get(i).ok_or_else(|| FormationError::InvalidInput(format!("robot {i} out of range")))?;
    match s.graph.follows[i] {
        Reference::Leader => Ok(robot.position),
        Reference::Robot(h) => Ok(s.robots[h].position - s.graph.offsets[i]),
        Reference::Center => s
            .center
            .map(|c| c + s.graph.offsets[i])
            .ok_or_else(|| FormationError::InvalidState("center mode without a center".into())),
    }
}

/// One robot's plan for one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRecord {
    pub slot: usize,
    pub robot: usize,
    /// `None` when the robot did not sense this slot.
    pub region: Option<PolarRegion>,
    /// The plan the robot would make with nobody around.
    pub preferred: StepDecision,
    pub chosen: StepDecision,
    /// Conflicts that ruled out the candidates tried before `chosen`.
    pub conflicts: Vec<Conflict>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionEvent {
    pub slot: usize,
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct SlotOutcome {
    pub state: SwarmState,
    pub decisions: Vec<DecisionRecord>,
    pub moved: bool,
}

/// Advance the swarm by one slot.
///
/// Every robot that has not arrived measures its destination, locates its
/// region and plans, in ascending id order, against the claims already made.
/// All robots then move at once.
pub fn step_swarm(
    s: &SwarmState,
    cfg: &SimConfig,
    sensor: &SensorModel,
    q: &QuantizerSpec,
    rng: &RngStream,
) -> Result<SlotOutcome> {
    if s.phase != Phase::Forming {
        return Err(FormationError::InvalidState(format!("step_swarm in phase {:?}", s.phase)));
    }
    let n = s.robots.len();
    let positions = s.positions();
    let destinations = s.destinations()?;
    let mut claims: Vec<Claim> = Vec::with_capacity(n);
    let mut commands = Vec::with_capacity(n);
    let mut decisions = Vec::with_capacity(n);

    for (i, robot) in s.robots.iter().enumerate() {
        let is_leader = s.assignment.leader() == Some(i);
        if is_leader || (robot.arrived && !s.reference_moved(i)) {
            claims.push(Claim { robot: i, point: robot.position });
            commands.push(Vec2::zero());
            decisions.push(DecisionRecord {
                slot: s.slot,
                robot: i,
                region: None,
                preferred: StepDecision::Arrived,
                chosen: StepDecision::Arrived,
                conflicts: Vec::new(),
            });
            continue;
        }

        let mut g = rng.for_robot_slot(i, s.slot).rng();
        let rel = robot.position - destinations[i];
        let true_bearing = if rel == Vec2::zero() { 0.0 } else { rel.angle() };
        let distance = estimate_distance(&sample_distances(rel.norm(), sensor, &mut g))?;
        let bearing = sense_bearing(true_bearing, sensor, &mut g);
        let region = PolarRegion::locate(distance, bearing, q);
        let within = distance <= cfg.arrival_tolerance;

        let command_for = |d: &StepDecision| {
            let (believed, target) = offsets(region, distance, bearing, d, q);
            target - believed
        };
        let claim_for = |d: &StepDecision| robot.position + command_for(d).clamp_norm(cfg.u_max);

        let preferred = plan_step(region, q, within, |_| false);
        let mut conflicts = Vec::new();
        let chosen = plan_step(region, q, within, |d| {
            let found = blocking_conflicts(i, claim_for(d), &claims, &positions, cfg.safety_radius);
            let hit = !found.is_empty();
            conflicts.extend(found);
            hit
        });
        let command = if chosen.is_move() { command_for(&chosen) } else { Vec2::zero() };
        claims.push(Claim { robot: i, point: robot.position + command.clamp_norm(cfg.u_max) });
        commands.push(command);
        decisions.push(DecisionRecord { slot: s.slot, robot: i, region: Some(region), preferred, chosen, conflicts });
    }

    let mut robots = Vec::with_capacity(n);
    let mut moved = false;
    for ((robot, command), d) in s.robots.iter().zip(&commands).zip(&decisions) {
        let mut next = step_kinematics(robot, *command, cfg.u_max)?;
        next.arrived = d.chosen == StepDecision::Arrived;
        moved |= next.velocity != Vec2::zero();
        robots.push(next);
    }
    let state = SwarmState { slot: s.slot + 1, robots, ..s.clone() };
    Ok(SlotOutcome { state, decisions, moved })
}

/// Record of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// One snapshot per slot, starting with the initial state.
    pub states: Vec<SwarmState>,
    /// Distance travelled by each robot.
    pub path_lengths: Vec<f64>,
    pub collisions: Vec<CollisionEvent>,
    pub decisions: Vec<DecisionRecord>,
    pub converged: bool,
}

impl Trajectory {
    pub fn start(initial: SwarmState, safety_radius: f64) -> Self {
        let n = initial.robots.len();
        let mut t = Trajectory {
            states: Vec::new(),
            path_lengths: vec![0.0; n],
            collisions: Vec::new(),
            decisions: Vec::new(),
            converged: false,
        };
        t.record(initial, safety_radius);
        t
    }

    /// Append a snapshot, accumulating path length and collisions.
    pub fn record(&mut self, state: SwarmState, safety_radius: f64) {
        if let Some(prev) = self.states.last() {
            for (acc, (a, b)) in self.path_lengths.iter_mut().zip(prev.robots.iter().zip(&state.robots)) {
                *acc += a.position.distance(b.position);
            }
        }
        let r = &state.robots;
        for a in 0..r.len() {
            for b in a + 1..r.len() {
                let distance = r[a].position.distance(r[b].position);
                if distance < safety_radius {
                    self.collisions.push(CollisionEvent { slot: state.slot, a, b, distance });
                }
            }
        }
        self.states.push(state);
    }

    pub fn final_state(&self) -> &SwarmState {
        self.states.last().expect("a trajectory holds its initial state")
    }

    /// Slots simulated.
    pub fn slots(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_positions(&self) -> Vec<Vec2<f64>> {
        self.final_state().positions()
    }

    /// Sum over robots of the squared distance travelled, comparable with the
    /// squared straight-line cost of an arrangement.
    pub fn practical_cost(&self) -> f64 {
        self.path_lengths.iter().map(|l| l * l).sum()
    }

    /// Mean distance between final positions and the destinations they imply.
    pub fn formation_bias(&self) -> Result<f64> {
        let s = self.final_state();
        formation_bias(&s.positions(), &s.destinations()?)
    }
}

fn check_partition(cfg: &SimConfig, q: &QuantizerSpec) -> Result<()> {
    cfg.validate()?;
    q.validate()?;
    if cfg.radius != q.radius || cfg.n_r != q.n_r || cfg.n_theta != q.n_theta {
        return Err(FormationError::InvalidParams(format!(
            "simulation partition (R={}, n_r={}, n_theta={}) differs from quantizer (R={}, n_r={}, n_theta={})",
            cfg.radius, cfg.n_r, cfg.n_theta, q.radius, q.n_r, q.n_theta
        )));
    }
    Ok(())
}

/// Step `t` forward from its last state until the formation holds or the slot
/// budget is spent. Budget is counted from slot 0 of the trajectory.
pub fn continue_forming(
    t: &mut Trajectory,
    cfg: &SimConfig,
    sensor: &SensorModel,
    q: &QuantizerSpec,
    rng: &RngStream,
) -> Result<()> {
    check_partition(cfg, q)?;
    sensor.validate()?;
    while t.slots() < cfg.max_slots {
        let out = step_swarm(t.final_state(), cfg, sensor, q, rng)?;
        let done = !out.moved && out.state.robots.iter().all(|r| r.arrived);
        let mut state = out.state;
        if done {
            state.phase = Phase::Done;
        }
        t.decisions.extend(out.decisions);
        t.record(state, cfg.safety_radius);
        if done {
            t.converged = true;
            return Ok(());
        }
    }
    Ok(())
}

/// Simulate from `initial` until every robot has arrived and nobody moved for
/// a full slot. Running out of slots is reported through `converged`.
#[allow(clippy::too_many_arguments)]
pub fn run_to_formation(
    initial: &[Vec2<f64>],
    f: &Formation<f64>,
    a: &Assignment,
    mode: ControlMode,
    cfg: &SimConfig,
    sensor: &SensorModel,
    q: &QuantizerSpec,
    rng: &RngStream,
) -> Result<Trajectory> {
    let state = SwarmState::new(initial, f, a, mode)?;
    let mut t = Trajectory::start(state, cfg.safety_radius);
    continue_forming(&mut t, cfg, sensor, q, rng)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formations::square_formation;

    fn quiet() -> SensorModel {
        SensorModel::new(1e-9, 1, 0.0).unwrap()
    }

    fn partition(radius: f64, n_r: usize, n_theta: usize) -> (SimConfig, QuantizerSpec) {
        let cfg =
            SimConfig { radius, n_r, n_theta, arrival_tolerance: radius / (n_r as f64 - 1.0), ..SimConfig::default() };
        let q = QuantizerSpec::new(radius, n_r, n_theta, radius / 2.0).unwrap();
        (cfg, q)
    }

    #[test]
    fn destination_examples() {
        let f = Formation::centered(vec![Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0)]).unwrap();
        let s = SwarmState::new(
            &[Vec2::new(0.0, 0.0), Vec2::new(3.0, 3.0)],
            &f,
            &Assignment::identity(2),
            ControlMode::Center(Vec2::new(5.0, 5.0)),
        )
        .unwrap();
        assert_eq!(current_destination(0, &s).unwrap(), Vec2::new(6.0, 5.0));

        // reference at (10, 0), its slot 2 units right of the follower's slot
        let a = Assignment::with_leader(vec![0, 1], 0).unwrap();
        let s = SwarmState::new(&[Vec2::new(10.0, 0.0), Vec2::new(0.0, 0.0)], &f, &a, ControlMode::Leader).unwrap();
        assert_eq!(s.graph.offsets[1], Vec2::new(2.0, 0.0));
        assert_eq!(current_destination(1, &s).unwrap(), Vec2::new(8.0, 0.0));
        assert_eq!(current_destination(0, &s).unwrap(), Vec2::new(10.0, 0.0));
    }

    #[test]
    fn missing_center_is_invalid_state() {
        let f = square_formation(4, 4.0).unwrap();
        let mut s = SwarmState::new(
            &f.placed_at(Vec2::zero()),
            &f,
            &Assignment::identity(4),
            ControlMode::Center(Vec2::zero()),
        )
        .unwrap();
        s.center = None;
        assert!(matches!(current_destination(0, &s), Err(FormationError::InvalidState(_))));
    }

    #[test]
    fn single_robot_three_rings_out() {
        let (cfg, q) = partition(10.0, 11, 9);
        let f = Formation::new(vec![Vec2::zero()]).unwrap();
        let start = Vec2::polar(q.ring_midpoint(3), q.sector_midpoint(2));
        let t = run_to_formation(
            &[start],
            &f,
            &Assignment::identity(1),
            ControlMode::Center(Vec2::zero()),
            &cfg,
            &quiet(),
            &q,
            &RngStream::new(1),
        )
        .unwrap();
        assert!(t.converged);
        let moves: Vec<_> = t.decisions.iter().map(|d| d.chosen).collect();
        assert_eq!(
            moves,
            vec![
                StepDecision::Inward(PolarRegion { h: 2, j: 2 }),
                StepDecision::Inward(PolarRegion { h: 1, j: 2 }),
                StepDecision::Arrived
            ]
        );
        assert!((t.path_lengths[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn robots_on_slots_stay_put() {
        let (cfg, q) = partition(300.0, 128, 129);
        let f = square_formation(8, 28800.0).unwrap();
        let c = Vec2::new(40.0, -7.0);
        let t = run_to_formation(
            &f.placed_at(c),
            &f,
            &Assignment::identity(8),
            ControlMode::Center(c),
            &cfg,
            &SensorModel::new(0.05, 10, 0.0).unwrap(),
            &q,
            &RngStream::new(3),
        )
        .unwrap();
        assert!(t.converged);
        assert!(t.slots() <= 2);
        assert!(t.practical_cost() < 1e-12);
        assert_eq!(t.final_state().phase, Phase::Done);
    }

    #[test]
    fn in_ring_one_only_flags_change() {
        let (cfg, q) = partition(300.0, 128, 129);
        let f = square_formation(4, 100.0).unwrap();
        let c = Vec2::zero();
        let start: Vec<_> = f.placed_at(c).into_iter().map(|p| p + Vec2::new(0.5, 0.0)).collect();
        let s = SwarmState::new(&start, &f, &Assignment::identity(4), ControlMode::Center(c)).unwrap();
        let out = step_swarm(&s, &cfg, &quiet(), &q, &RngStream::new(0)).unwrap();
        assert!(!out.moved);
        assert_eq!(out.state.positions(), start);
        assert!(out.state.robots.iter().all(|r| r.arrived && r.velocity == Vec2::zero()));
    }

    #[test]
    fn rerun_is_identical() {
        let (cfg, q) = partition(300.0, 128, 129);
        let f = square_formation(6, 900.0).unwrap();
        let initial: Vec<_> = (0..6).map(|i| Vec2::new(20.0 * i as f64, 60.0 - 9.0 * i as f64)).collect();
        let sensor = SensorModel::new(1.0, 10, 0.05).unwrap();
        let run = || {
            run_to_formation(
                &initial,
                &f,
                &Assignment::identity(6),
                ControlMode::Center(Vec2::new(10.0, 10.0)),
                &cfg,
                &sensor,
                &q,
                &RngStream::new(99),
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.states, b.states);
        assert_eq!(a.path_lengths, b.path_lengths);
    }
}
