//! Multi-robot formation control: optimal slot assignment, polar-grid
//! leader-follower motion, formation generation and conversion, and a lower
//! bound on the formation bias of quantized distance sensing.
//!
//! Geometry, formations, assignment and the bound are generic over the float
//! type; the aliases below fix it to `f64` or `f32`. Sensing and the swarm
//! simulation run in `f64`.

// `!(x > 0)` also rejects NaN; matrix code indexes by row and column
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assignment;
pub mod bounds;
pub mod error;
pub mod formation;
pub mod formations;
pub mod geometry;
pub mod kinematics;
pub mod motion;
pub mod rng;
pub mod scalar;
pub mod sensing;

pub use assignment::{
    assign_with_center, assign_with_fixed_leader, assign_with_leader, center_cost_matrix, center_mode_cost,
    hungarian_solve, leader_cost_matrix, leader_mode_cost, AssignmentResult, Cost, CostMatrix, MatrixMode,
};
pub use bounds::{bayes_lower_bound, mi_upper, BoundParams, LogBase};
pub use error::{FormationError, Result};
pub use formation::{Assignment, FollowerGraph, Formation, Reference};
pub use formations::{leading_slot, optimal_center, FormationSpec, Shape};
pub use geometry::{centroid, Vec2};
pub use kinematics::{step_kinematics, RobotState, SimConfig};
pub use rng::RngStream;
pub use scalar::Scalar;
pub use sensing::{QuantizerSpec, SensorModel};

pub type Vec2d = Vec2<f64>;
pub type Vec2f = Vec2<f32>;
pub type FormationD = Formation<f64>;
pub type FormationF = Formation<f32>;
pub type FormationSpecD = FormationSpec<f64>;
pub type FormationSpecF = FormationSpec<f32>;
pub type FollowerGraphD = FollowerGraph<f64>;
pub type BoundParamsD = BoundParams<f64>;
pub type BoundParamsF = BoundParams<f32>;
pub type RobotStateD = RobotState<f64>;
