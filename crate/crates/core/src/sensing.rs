//! Distance/bearing measurement, polar quantization, and formation-bias metrics.
//!
//! A robot measures the distance to its destination `n_samples` times with
//! independent Gaussian noise, averages the samples, clamps the estimate into
//! `[0, R]` and maps it onto a ring of the control disk. Bearings get a single
//! Gaussian perturbation.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid_input, FormationError, Result};
use crate::geometry::{normalize_angle, Vec2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    /// Standard deviation of one distance sample.
    pub sigma: f64,
    pub n_samples: usize,
    /// Standard deviation of the bearing measurement, radians.
    pub sigma_theta: f64,
}

impl SensorModel {
    pub fn new(sigma: f64, n_samples: usize, sigma_theta: f64) -> Result<Self> {
        let m = SensorModel { sigma, n_samples, sigma_theta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(FormationError::InvalidParams(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.n_samples == 0 {
            return Err(FormationError::InvalidParams("n_samples must be at least 1".into()));
        }
        if !(self.sigma_theta >= 0.0 && self.sigma_theta.is_finite()) {
            return Err(FormationError::InvalidParams(format!(
                "sigma_theta must be non-negative, got {}",
                self.sigma_theta
            )));
        }
        Ok(())
    }
}

/// Polar partition of the control disk plus the prior range `l0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerSpec {
    pub radius: f64,
    /// Radial boundaries `r_1 = 0 .. r_{n_r} = R`; rings are `1..=n_r-1`.
    pub n_r: usize,
    /// Angular boundaries; sectors are `1..=n_theta-1`.
    pub n_theta: usize,
    pub l0: f64,
}

impl QuantizerSpec {
    pub fn new(radius: f64, n_r: usize, n_theta: usize, l0: f64) -> Result<Self> {
        let q = QuantizerSpec { radius, n_r, n_theta, l0 };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FormationError::InvalidParams(m));
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if self.n_r < 2 {
            return bad(format!("n_r must be at least 2, got {}", self.n_r));
        }
        if self.n_theta < 3 {
            return bad(format!("n_theta must be at least 3, got {}", self.n_theta));
        }
        if !(self.l0 > 0.0 && self.l0 < self.radius) {
            return bad(format!("l0 must lie in (0, R), got {} with R = {}", self.l0, self.radius));
        }
        Ok(())
    }

    pub fn rings(&self) -> usize {
        self.n_r - 1
    }

    pub fn sectors(&self) -> usize {
        self.n_theta - 1
    }

    pub fn ring_width(&self) -> f64 {
        self.radius / (self.n_r as f64 - 1.0)
    }

    pub fn sector_width(&self) -> f64 {
        TAU / (self.n_theta as f64 - 1.0)
    }

    /// Inner radius `r_h` of ring `h` (`h` may be `n_r` for the outer edge).
    pub fn ring_boundary(&self, h: usize) -> f64 {
        self.radius / (self.n_r as f64 - 1.0) * (h as f64 - 1.0)
    }

    /// Start angle `theta_j` of sector `j`.
    pub fn sector_boundary(&self, j: usize) -> f64 {
        TAU / (self.n_theta as f64 - 1.0) * (j as f64 - 1.0)
    }

    /// Radial midpoint of ring `h`, the dequantized distance.
    pub fn ring_midpoint(&self, h: usize) -> f64 {
        0.5 * (self.ring_boundary(h) + self.ring_boundary(h + 1))
    }

    pub fn sector_midpoint(&self, j: usize) -> f64 {
        0.5 * (self.sector_boundary(j) + self.sector_boundary(j + 1))
    }

    /// Sector index after stepping `delta` sectors counterclockwise, wrapping.
    pub fn sector_offset(&self, j: usize, delta: isize) -> usize {
        let m = self.sectors() as isize;
        ((j as isize - 1 + delta).rem_euclid(m) + 1) as usize
    }

    /// Quantization rate in bits, `log2(n_r)`.
    pub fn bits(&self) -> f64 {
        quant_bits(self.n_r)
    }
}

/// `n_samples` independent draws from `Normal(true_w, sigma^2)`, unclamped.
pub fn sample_distances<R: Rng + ?Sized>(true_w: f64, model: &SensorModel, rng: &mut R) -> Vec<f64> {
    let normal = Normal::new(true_w, model.sigma).expect("validated sigma");
    (0..model.n_samples).map(|_| normal.sample(rng)).collect()
}

/// Sample mean.
pub fn estimate_distance(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid_input("cannot estimate a distance from zero samples"));
    }
    Ok(samples.iter().sum::<f64>() / samples.len() as f64)
}

/// True bearing plus one Gaussian draw, wrapped into `[0, 2pi)`.
pub fn sense_bearing<R: Rng + ?Sized>(true_theta: f64, model: &SensorModel, rng: &mut R) -> f64 {
    let noisy = if model.sigma_theta > 0.0 {
        let normal = Normal::new(0.0, model.sigma_theta).expect("validated sigma_theta");
        true_theta + normal.sample(rng)
    } else {
        true_theta
    };
    normalize_angle(noisy)
}

/// Ring `h` with `r_h <= r < r_{h+1}` after clamping `r` into `[0, R]`.
/// `r = R` lands in the outermost ring.
pub fn quantize_ring(r: f64, q: &QuantizerSpec) -> usize {
    let rings = q.rings();
    let r = if r.is_nan() { 0.0 } else { r.clamp(0.0, q.radius) };
    let mut h = ((r / q.ring_width()).floor() as usize + 1).clamp(1, rings);
    // settle rounding so that the boundaries map exactly
    while h > 1 && r < q.ring_boundary(h) {
        h -= 1;
    }
    while h < rings && r >= q.ring_boundary(h + 1) {
        h += 1;
    }
    h
}

/// Sector `j` with `theta_j <= theta < theta_{j+1}`; `theta` is wrapped first.
pub fn quantize_sector(theta: f64, q: &QuantizerSpec) -> usize {
    let sectors = q.sectors();
    let t = normalize_angle(theta);
    let mut j = ((t / q.sector_width()).floor() as usize + 1).clamp(1, sectors);
    while j > 1 && t < q.sector_boundary(j) {
        j -= 1;
    }
    while j < sectors && t >= q.sector_boundary(j + 1) {
        j += 1;
    }
    j
}

/// Bits per quantized distance, `log2(n_r)`.
pub fn quant_bits(n_r: usize) -> f64 {
    (n_r as f64).log2()
}

/// Euclidean deviation of one robot from its destination.
pub fn position_bias<T: Scalar>(final_pos: Vec2<T>, destination: Vec2<T>) -> T {
    final_pos.distance(destination)
}

/// Mean per-robot deviation.
pub fn formation_bias<T: Scalar>(finals: &[Vec2<T>], destinations: &[Vec2<T>]) -> Result<T> {
    if finals.len() != destinations.len() {
        return Err(invalid_input(format!("{} final positions for {} destinations", finals.len(), destinations.len())));
    }
    if finals.is_empty() {
        return Err(invalid_input("formation bias of an empty swarm"));
    }
    let sum = finals.iter().zip(destinations).fold(T::zero(), |acc, (&f, &d)| acc + position_bias(f, d));
    Ok(sum / T::from_count(finals.len()))
}

/// Distance to a destination uniformly placed in the disk of radius `l0`
/// (density `2r / l0^2`), by inversion.
pub fn sample_prior_distance<R: Rng + ?Sized>(l0: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    l0 * u.sqrt()
}

/// Sample, average, clamp, quantize and dequantize one distance: the
/// estimator applied by every robot.
pub fn quantized_estimate<R: Rng + ?Sized>(true_w: f64, model: &SensorModel, q: &QuantizerSpec, rng: &mut R) -> f64 {
    let samples = sample_distances(true_w, model, rng);
    let est = estimate_distance(&samples).expect("n_samples >= 1");
    q.ring_midpoint(quantize_ring(est, q))
}
