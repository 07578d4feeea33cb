//! Leader-follower region stepping, reference graphs and formation conversion.

mod convert;
mod graph;
mod planner;
mod sim;

pub use convert::{approach_center, convert_formation, default_approach_distance, CenterChoice, Conversion};
pub use graph::{build_follower_graph, DEFAULT_NEIGHBOURS};
pub use planner::{
    blocking_conflicts, detect_conflicts, offsets, plan_step, Claim, Conflict, ConflictKind, PolarRegion, StepDecision,
};
pub use sim::{
    continue_forming, current_destination, run_to_formation, step_swarm, CollisionEvent, ControlMode, DecisionRecord,
    Phase, SlotOutcome, SwarmState, Trajectory,
};
