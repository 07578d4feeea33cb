//! Single-integrator slot model and the simulation configuration.

use crate::error::{invalid_input, FormationError, Result};
use crate::geometry::Vec2;
use crate::scalar::Scalar;

/// Kinematic state of one robot at a time slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState<T> {
    /// Zero-based robot index.
    pub id: usize,
    pub position: Vec2<T>,
    /// Velocity applied during the slot that produced `position`.
    pub velocity: Vec2<T>,
    pub arrived: bool,
}

impl<T: Scalar> RobotState<T> {
    pub fn at_rest(id: usize, position: Vec2<T>) -> Self {
        RobotState { id, position, velocity: Vec2::zero(), arrived: false }
    }
}

/// Advance one slot: `x(k+1) = x(k) + v(k)` with `|v(k)| <= u_max`.
///
/// A commanded velocity longer than `u_max` is rescaled onto the speed limit,
/// keeping its direction.
pub fn step_kinematics<T: Scalar>(state: &RobotState<T>, commanded: Vec2<T>, u_max: T) -> Result<RobotState<T>> {
    if !(u_max > T::zero()) || !u_max.is_finite() {
        return Err(invalid_input(format!("speed limit must be positive and finite, got {u_max}")));
    }
    if !commanded.is_finite() || !state.position.is_finite() {
        return Err(invalid_input("non-finite position or commanded velocity"));
    }
    let velocity = commanded.clamp_norm(u_max);
    Ok(RobotState {
        id: state.id,
        position: state.position + velocity,
        velocity,
        arrived: state.arrived && velocity == Vec2::zero(),
    })
}

/// Simulation constants shared by every robot.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Maximum displacement per slot.
    pub u_max: f64,
    /// Radius of the control circle centred on each robot's destination.
    pub radius: f64,
    /// Number of radial boundaries; the disk holds `n_r - 1` rings.
    pub n_r: usize,
    /// Number of angular boundaries; the disk holds `n_theta - 1` sectors.
    pub n_theta: usize,
    pub safety_radius: f64,
    pub arrival_tolerance: f64,
    pub max_slots: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn ring_width(&self) -> f64 {
        self.radius / (self.n_r as f64 - 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FormationError::InvalidParams(m));
        if !(self.u_max > 0.0 && self.u_max.is_finite()) {
            return bad(format!("u_max must be positive, got {}", self.u_max));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if self.n_r < 2 {
            return bad(format!("n_r must be at least 2, got {}", self.n_r));
        }
        if self.n_theta < 3 {
            return bad(format!("n_theta must be at least 3, got {}", self.n_theta));
        }
        if !(self.safety_radius > 0.0) {
            return bad(format!("safety_radius must be positive, got {}", self.safety_radius));
        }
        if !(self.arrival_tolerance > 0.0) {
            return bad(format!("arrival_tolerance must be positive, got {}", self.arrival_tolerance));
        }
        // the arrival ball has to fit inside the innermost ring
        if self.arrival_tolerance > self.ring_width() * (1.0 + 1e-12) {
            return bad(format!(
                "arrival_tolerance {} exceeds ring width {}",
                self.arrival_tolerance,
                self.ring_width()
            ));
        }
        if self.max_slots == 0 {
            return bad("max_slots must be positive".into());
        }
        Ok(())
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        let radius = 300.0;
        let n_r = 128;
        SimConfig {
            u_max: 5.0,
            radius,
            n_r,
            n_theta: 129,
            safety_radius: 1.0,
            arrival_tolerance: radius / (n_r as f64 - 1.0),
            max_slots: 5000,
            seed: 0x5eed,
        }
    }
}
