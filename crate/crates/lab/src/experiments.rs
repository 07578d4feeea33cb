//! Demo runs, arrangement-strategy comparison and bias sweeps.

use formation_core::bounds::{bayes_lower_bound, BoundParams};
use formation_core::motion::{convert_formation, run_to_formation, CenterChoice, ControlMode, Trajectory};
use formation_core::sensing::quant_bits;
use formation_core::{
    assign_with_center, assign_with_leader, center_mode_cost, centroid, leader_mode_cost, leading_slot, Assignment,
    FormationD, FormationError, Result, RngStream, Vec2d,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scenario::{ModeKind, Scenario};

/// Minimum spacing of random start positions, in safety radii.
pub const START_SEPARATION: f64 = 4.0;

/// One simulated trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub seed: u64,
    pub estimated_cost: f64,
    pub practical_cost: f64,
    pub formation_bias: f64,
    pub slots_to_converge: usize,
    pub collision_count: usize,
    pub converged: bool,
}

/// Seed of trial `trial` under a scenario seed. Each trial's randomness is
/// drawn from `RngStream::new(trial_seed(..))`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    RngStream::new(seed).derive(trial as u64).rng().random()
}

const POSITIONS: u64 = 0;
const MOTION: u64 = 1;
const SHUFFLE: u64 = 2;

/// Uniform start positions in `[0, w] x [0, h]`, at least
/// `START_SEPARATION * safety_radius` apart.
pub fn initial_positions(scn: &Scenario, stream: &RngStream) -> Result<Vec<Vec2d>> {
    let min_gap = START_SEPARATION * scn.sim.safety_radius;
    let [w, h] = scn.init_box;
    let mut rng = stream.derive(POSITIONS).rng();
    let mut out: Vec<Vec2d> = Vec::with_capacity(scn.robots);
    let mut attempts = 0usize;
    while out.len() < scn.robots {
        attempts += 1;
        if attempts > 1000 * scn.robots {
            return Err(FormationError::InvalidParams(format!(
                "cannot place {} robots {min_gap} apart in a {w} x {h} box",
                scn.robots
            )));
        }
        let p = Vec2d::new(rng.random::<f64>() * w, rng.random::<f64>() * h);
        if out.iter().all(|q| q.distance(p) >= min_gap) {
            out.push(p);
        }
    }
    Ok(out)
}

/// A finished trial with its record.
#[derive(Debug, Clone)]
pub struct TrialRun {
    pub initial: Vec<Vec2d>,
    pub formation: FormationD,
    pub assignment: Assignment,
    pub trajectory: Trajectory,
    pub record: ExperimentRecord,
}

fn record(trial: usize, seed: u64, estimated_cost: f64, t: &Trajectory) -> Result<ExperimentRecord> {
    Ok(ExperimentRecord {
        trial,
        seed,
        estimated_cost,
        practical_cost: t.practical_cost(),
        formation_bias: t.formation_bias()?,
        slots_to_converge: t.slots(),
        collision_count: t.collisions.len(),
        converged: t.converged,
    })
}

/// Assign and form from random start positions.
///
/// Leader mode picks the best leader; center mode forms around the given
/// center, approaching it first when it is far, or around the centroid.
pub fn run_trial(scn: &Scenario, trial: usize) -> Result<TrialRun> {
    scn.validate()?;
    let seed = trial_seed(scn.seed, trial);
    let stream = RngStream::new(seed);
    let initial = initial_positions(scn, &stream)?;
    let spec = scn.formation_spec();
    let f = spec.build()?;
    let (cfg, sensor, q) = (scn.sim_config(), scn.sensor_model(), scn.quantizer());
    let motion = stream.derive(MOTION);
    let (assignment, estimated, trajectory) = match scn.mode.kind {
        ModeKind::Leader => {
            let best = assign_with_leader(&initial, &f)?;
            let t = run_to_formation(&initial, &f, &best.assignment, ControlMode::Leader, &cfg, &sensor, &q, &motion)?;
            (best.assignment, best.total_cost, t)
        }
        ModeKind::Center => {
            let choice = scn.given_center().map_or(CenterChoice::Auto, CenterChoice::Given);
            let c = convert_formation(&initial, &spec, choice, scn.approach_distance(), &cfg, &sensor, &q, &motion)?;
            (c.assignment, c.estimated_cost, c.trajectory)
        }
    };
    let record = record(trial, seed, estimated, &trajectory)?;
    Ok(TrialRun { initial, formation: f, assignment, trajectory, record })
}

/// Trial 0 of a scenario.
pub fn run_demo(scn: &Scenario) -> Result<TrialRun> {
    run_trial(scn, 0)
}

/// Every trial of a scenario, in trial order.
pub fn run_trials(scn: &Scenario) -> Result<Vec<ExperimentRecord>> {
    (0..scn.trials).into_par_iter().map(|t| run_trial(scn, t).map(|r| r.record)).collect()
}

/// Result of converting a formed swarm into the scenario's `[convert]` formation.
#[derive(Debug, Clone)]
pub struct ConversionRun {
    pub first: TrialRun,
    pub center: Vec2d,
    pub trajectory: Trajectory,
    pub record: ExperimentRecord,
}

/// Form the scenario's formation, then convert to the `[convert]` one,
/// around its given center or the centroid.
pub fn run_conversion(scn: &Scenario, trial: usize) -> Result<ConversionRun> {
    let target =
        scn.convert.as_ref().ok_or_else(|| FormationError::InvalidInput("scenario has no [convert] section".into()))?;
    let first = run_trial(scn, trial)?;
    let start = first.trajectory.final_positions();
    let choice = target.center().map_or(CenterChoice::Auto, CenterChoice::Given);
    let stream = RngStream::new(first.record.seed).derive(MOTION + 16);
    let (cfg, sensor, q) = (scn.sim_config(), scn.sensor_model(), scn.quantizer());
    let c = convert_formation(
        &start,
        &target.spec(scn.robots),
        choice,
        scn.approach_distance(),
        &cfg,
        &sensor,
        &q,
        &stream,
    )?;
    let record = record(trial, first.record.seed, c.estimated_cost, &c.trajectory)?;
    Ok(ConversionRun { first, center: c.center, trajectory: c.trajectory, record })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    /// Squared straight-line travel of the arrangement.
    Estimated,
    /// Squared simulated path length.
    #[default]
    Practical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub trial: usize,
    pub hungarian: f64,
    pub fixed: f64,
    pub random: f64,
}

/// Candidate arrangements for one start configuration: the optimal one,
/// robot `i` on slot `i`, and a uniformly random permutation. In leader mode
/// the fixed and random arrangements lead with whoever lands on the leading
/// slot.
pub fn strategies(initial: &[Vec2d], f: &FormationD, mode: ControlMode, stream: &RngStream) -> Result<[Assignment; 3]> {
    let n = f.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut stream.derive(SHUFFLE).rng());
    Ok(match mode {
        ControlMode::Leader => {
            let lead = leading_slot(f);
            let with_lead = |m: Vec<usize>| {
                let leader = m.iter().position(|&s| s == lead).expect("permutation covers every slot");
                Assignment::with_leader(m, leader)
            };
            [assign_with_leader(initial, f)?.assignment, with_lead((0..n).collect())?, with_lead(perm)?]
        }
        ControlMode::Center(c) => {
            [assign_with_center(initial, f, c)?.assignment, Assignment::identity(n), Assignment::new(perm)?]
        }
    })
}

fn arrangement_cost(initial: &[Vec2d], f: &FormationD, a: &Assignment, mode: ControlMode) -> Result<f64> {
    match mode {
        ControlMode::Leader => leader_mode_cost(initial, f, a),
        ControlMode::Center(c) => center_mode_cost(initial, f, a, c),
    }
}

/// One paired comparison with the safety record of its three runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTrial {
    pub row: ComparisonRow,
    /// Collision events summed over the simulated runs; zero for estimated costs.
    pub collisions: usize,
    /// Every simulated run converged.
    pub converged: bool,
}

/// Paired comparison of the three arrangement strategies over the scenario's
/// trials: each trial feeds the same start positions and motion stream to all
/// three.
pub fn run_cost_comparison(scn: &Scenario, kind: CostKind) -> Result<Vec<ComparisonRow>> {
    Ok(run_comparison_trials(scn, kind)?.into_iter().map(|t| t.row).collect())
}

pub fn run_comparison_trials(scn: &Scenario, kind: CostKind) -> Result<Vec<ComparisonTrial>> {
    scn.validate()?;
    let f = scn.formation_spec().build()?;
    let (cfg, sensor, q) = (scn.sim_config(), scn.sensor_model(), scn.quantizer());
    (0..scn.trials)
        .into_par_iter()
        .map(|trial| {
            let stream = RngStream::new(trial_seed(scn.seed, trial));
            let initial = initial_positions(scn, &stream)?;
            let mode = match scn.mode.kind {
                ModeKind::Leader => ControlMode::Leader,
                ModeKind::Center => ControlMode::Center(match scn.given_center() {
                    Some(c) => c,
                    None => centroid(&initial)?,
                }),
            };
            let mut costs = [0.0; 3];
            let (mut collisions, mut converged) = (0, true);
            for (cost, a) in costs.iter_mut().zip(strategies(&initial, &f, mode, &stream)?) {
                *cost = match kind {
                    CostKind::Estimated => arrangement_cost(&initial, &f, &a, mode)?,
                    CostKind::Practical => {
                        let motion = stream.derive(MOTION);
                        let t = run_to_formation(&initial, &f, &a, mode, &cfg, &sensor, &q, &motion)?;
                        collisions += t.collisions.len();
                        converged &= t.converged;
                        t.practical_cost()
                    }
                };
            }
            let row = ComparisonRow { trial, hungarian: costs[0], fixed: costs[1], random: costs[2] };
            Ok(ComparisonTrial { row, collisions, converged })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    /// Distance samples per measurement.
    N,
    /// Distance noise standard deviation.
    Sigma,
    /// Quantization rate, via the number of radial boundaries.
    Bits,
}

impl SweepAxis {
    /// Default grid. For `Bits` the values are boundary counts.
    pub fn grid(self) -> Vec<f64> {
        match self {
            SweepAxis::N => vec![1.0, 5.0, 10.0, 20.0, 40.0, 60.0],
            SweepAxis::Sigma => vec![0.1, 0.5, 0.9, 1.3],
            SweepAxis::Bits => vec![50.0, 100.0, 150.0, 200.0],
        }
    }

    /// Base scenario with the axis held at `value`. The bit sweep runs with
    /// near-noiseless distances.
    pub fn apply(self, base: &Scenario, value: f64) -> Scenario {
        let mut s = base.clone();
        match self {
            SweepAxis::N => s.sensor.samples = value as usize,
            SweepAxis::Sigma => s.sensor.sigma = value,
            SweepAxis::Bits => {
                s.sensor.sigma = 0.01;
                s.sim.n_r = value as usize;
            }
        }
        s
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "n" => Ok(SweepAxis::N),
            "sigma" => Ok(SweepAxis::Sigma),
            "bits" | "b" => Ok(SweepAxis::Bits),
            other => Err(format!("unknown sweep axis {other:?}; expected n, sigma or bits")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Samples, noise deviation, or bits.
    pub param: f64,
    pub mean_bias: f64,
    pub std_bias: f64,
    pub bound: f64,
}

/// Lower bound for the sensing parameters of a scenario.
pub fn scenario_bound(scn: &Scenario) -> Result<f64> {
    let p = BoundParams::new(scn.sensor.samples, scn.sensor.sigma, scn.quantizer.l0, quant_bits(scn.sim.n_r))?;
    bayes_lower_bound(&p)
}

/// Mean and sample standard deviation of per-trial formation bias at every
/// grid point, next to the bound for the same parameters.
pub fn run_bias_sweep(base: &Scenario, axis: SweepAxis, grid: &[f64]) -> Result<Vec<SweepRow>> {
    Ok(run_bias_sweep_records(base, axis, grid)?.into_iter().map(|(row, _)| row).collect())
}

/// As [`run_bias_sweep`], keeping the trial records behind each row.
pub fn run_bias_sweep_records(
    base: &Scenario,
    axis: SweepAxis,
    grid: &[f64],
) -> Result<Vec<(SweepRow, Vec<ExperimentRecord>)>> {
    grid.iter()
        .map(|&value| {
            let scn = axis.apply(base, value);
            let records = run_trials(&scn)?;
            let k = records.len() as f64;
            let mean = records.iter().map(|r| r.formation_bias).sum::<f64>() / k;
            let var = if records.len() > 1 {
                records.iter().map(|r| (r.formation_bias - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            let param = match axis {
                SweepAxis::Bits => quant_bits(scn.sim.n_r),
                _ => value,
            };
            let row = SweepRow { param, mean_bias: mean, std_bias: var.sqrt(), bound: scenario_bound(&scn)? };
            Ok((row, records))
        })
        .collect()
}
