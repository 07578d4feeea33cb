//! Scenario files.
//!
//! A scenario is a TOML document: top-level keys plus `[formation]`, `[mode]`,
//! `[sim]`, `[sensor]`, `[quantizer]` and optionally `[convert]` sections.
//! Every key except `robots` and `formation.shape` has a default; see
//! `scenarios/leader_square.toml` for the full list.

use std::path::Path;

use formation_core::{FormationError, FormationSpecD, QuantizerSpec, SensorModel, Shape, SimConfig, Vec2d};
use serde::{Deserialize, Serialize};

/// Environment variable that replaces the scenario seed.
pub const SEED_ENV: &str = "FORMATION_LAB_SEED";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed scenario: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(#[from] FormationError),
    #[error("{SEED_ENV} is not an unsigned 64-bit integer: {0:?}")]
    BadSeed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    pub robots: usize,
    #[serde(default = "defaults::trials")]
    pub trials: usize,
    /// Width and height of the start area, whose lower-left corner is the origin.
    #[serde(default = "defaults::init_box")]
    pub init_box: [f64; 2],
    pub formation: FormationSection,
    #[serde(default)]
    pub mode: ModeSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub sensor: SensorSection,
    #[serde(default)]
    pub quantizer: QuantizerSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convert: Option<FormationSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormationSection {
    pub shape: ShapeName,
    #[serde(default = "defaults::area")]
    pub area: f64,
    /// Robots on the bottom edge of a triangle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<usize>,
    /// Formation center for conversions; omitted means the centroid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeName {
    Square,
    Circle,
    Triangle,
}

impl From<ShapeName> for Shape {
    fn from(s: ShapeName) -> Shape {
        match s {
            ShapeName::Square => Shape::Square,
            ShapeName::Circle => Shape::Circle,
            ShapeName::Triangle => Shape::Triangle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    #[default]
    Leader,
    Center,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSection {
    #[serde(default)]
    pub kind: ModeKind,
    /// Center-mode formation center; omitted means the centroid of the start positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub u_max: f64,
    pub radius: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub safety_radius: f64,
    /// Defaults to one ring width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arrival_tolerance: Option<f64>,
    pub max_slots: usize,
    /// Centroid distance that ends the approach phase; defaults to half the radius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approach_distance: Option<f64>,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            u_max: 5.0,
            radius: 300.0,
            n_r: 128,
            n_theta: 129,
            safety_radius: 1.0,
            arrival_tolerance: None,
            max_slots: 5000,
            approach_distance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensorSection {
    /// Standard deviation of one distance sample.
    pub sigma: f64,
    pub samples: usize,
    /// Standard deviation of the bearing, radians.
    pub sigma_theta: f64,
}

impl Default for SensorSection {
    fn default() -> Self {
        SensorSection { sigma: 1.0, samples: 10, sigma_theta: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantizerSection {
    pub l0: f64,
}

impl Default for QuantizerSection {
    fn default() -> Self {
        QuantizerSection { l0: 120.0 }
    }
}

mod defaults {
    pub fn seed() -> u64 {
        2024
    }
    pub fn trials() -> usize {
        1
    }
    pub fn init_box() -> [f64; 2] {
        [300.0, 300.0]
    }
    pub fn area() -> f64 {
        28800.0
    }
}

fn point(p: [f64; 2]) -> Vec2d {
    Vec2d::new(p[0], p[1])
}

impl FormationSection {
    pub fn new(shape: ShapeName, area: f64) -> Self {
        FormationSection { shape, area, bottom: None, center: None }
    }

    pub fn spec(&self, robots: usize) -> FormationSpecD {
        FormationSpecD {
            triangle_bottom_count: self.bottom,
            ..FormationSpecD::new(self.shape.into(), robots, self.area)
        }
    }

    pub fn center(&self) -> Option<Vec2d> {
        self.center.map(point)
    }
}

impl Scenario {
    /// Fifteen robots forming a square behind a leader, starting in a 300 x 300 area.
    pub fn leader_square() -> Self {
        Scenario {
            seed: defaults::seed(),
            robots: 15,
            trials: 1,
            init_box: defaults::init_box(),
            formation: FormationSection::new(ShapeName::Square, 28800.0),
            mode: ModeSection::default(),
            sim: SimSection::default(),
            sensor: SensorSection::default(),
            quantizer: QuantizerSection::default(),
            convert: None,
        }
    }

    /// Fifteen robots forming a circle around the centroid of their start positions.
    pub fn center_circle() -> Self {
        Scenario {
            formation: FormationSection::new(ShapeName::Circle, 28800.0),
            mode: ModeSection { kind: ModeKind::Center, center: None },
            ..Self::leader_square()
        }
    }

    /// Square around the start centroid, then converted into a circle around
    /// the square's centroid. Robots settle within 0.8 of their slots.
    pub fn square_to_circle() -> Self {
        let mut s = Self::center_circle();
        s.formation = FormationSection::new(ShapeName::Square, 28800.0);
        s.convert = Some(FormationSection::new(ShapeName::Circle, 28800.0));
        s.sim.arrival_tolerance = Some(0.8);
        s
    }

    /// Base point of the bias sweeps: circle around the centroid, radius 200,
    /// 200 boundaries, bearing noise 0.05, 20 trials.
    pub fn bias_base() -> Self {
        let mut s = Self::center_circle();
        s.trials = 20;
        s.sim.radius = 200.0;
        s.sim.n_r = 200;
        s.sensor = SensorSection { sigma: 2.0, samples: 10, sigma_theta: 0.05 };
        s.quantizer.l0 = 120.0;
        s
    }

    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = toml::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Apply the seed override from the environment, if set.
    pub fn with_env_seed(mut self) -> Result<Self, ScenarioError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v.trim().parse().map_err(|_| ScenarioError::BadSeed(v))?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), FormationError> {
        let bad = |m: String| Err(FormationError::InvalidParams(m));
        if self.robots == 0 {
            return bad("robots must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !self.init_box.iter().all(|v| *v > 0.0 && v.is_finite()) {
            return bad(format!("init_box must be positive, got {:?}", self.init_box));
        }
        self.formation_spec().validate()?;
        if let Some(c) = &self.convert {
            c.spec(self.robots).validate()?;
        }
        self.sim_config().validate()?;
        self.sensor_model().validate()?;
        self.quantizer().validate()?;
        Ok(())
    }

    pub fn formation_spec(&self) -> FormationSpecD {
        self.formation.spec(self.robots)
    }

    pub fn sim_config(&self) -> SimConfig {
        let s = &self.sim;
        SimConfig {
            u_max: s.u_max,
            radius: s.radius,
            n_r: s.n_r,
            n_theta: s.n_theta,
            safety_radius: s.safety_radius,
            arrival_tolerance: s.arrival_tolerance.unwrap_or(s.radius / (s.n_r as f64 - 1.0)),
            max_slots: s.max_slots,
            seed: self.seed,
        }
    }

    pub fn sensor_model(&self) -> SensorModel {
        SensorModel { sigma: self.sensor.sigma, n_samples: self.sensor.samples, sigma_theta: self.sensor.sigma_theta }
    }

    pub fn quantizer(&self) -> QuantizerSpec {
        QuantizerSpec { radius: self.sim.radius, n_r: self.sim.n_r, n_theta: self.sim.n_theta, l0: self.quantizer.l0 }
    }

    pub fn approach_distance(&self) -> f64 {
        self.sim.approach_distance.unwrap_or(self.sim.radius / 2.0)
    }

    pub fn given_center(&self) -> Option<Vec2d> {
        self.mode.center.map(point)
    }
}
