//! Lower bound on the formation bias of the quantized distance estimator, and
//! each ingredient it is assembled from.
//!
//! The distance `W` to a destination is modelled as uniform over the disk of
//! radius `l0` (radial density `2r/l0^2`), observed through `n` Gaussian
//! samples of deviation `sigma` and quantized with `b` bits. The mutual
//! information between `W` and the quantized message is capped by the smaller
//! of an asymptotic Gaussian-channel term and a contraction term `eta * b`,
//! where `eta <= 1 - alpha` and `alpha` is the smallest likelihood ratio of
//! the sampling channel over `[0, l0]`. The Bayes risk under absolute error is
//! then at least `l0 / (2e) * base^(-I)`.
//!
//! Information quantities are in bits unless the parameters select nats.

use crate::error::{FormationError, Result};
use crate::scalar::Scalar;

/// Unit for information quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    pub fn log<T: Scalar>(self, x: T) -> T {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }

    /// `base^x`.
    pub fn pow<T: Scalar>(self, x: T) -> T {
        match self {
            LogBase::Bits => x.exp2(),
            LogBase::Nats => x.exp(),
        }
    }

    /// Convert an amount of information given in bits.
    pub fn from_bits<T: Scalar>(self, bits: T) -> T {
        match self {
            LogBase::Bits => bits,
            LogBase::Nats => bits * T::LN_2(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams<T> {
    /// Distance samples per measurement.
    pub n: usize,
    pub sigma: T,
    /// Upper end of the distance prior.
    pub l0: T,
    /// Quantization rate in bits.
    pub b: T,
    pub base: LogBase,
}

impl<T: Scalar> BoundParams<T> {
    pub fn new(n: usize, sigma: T, l0: T, b: T) -> Result<Self> {
        let p = BoundParams { n, sigma, l0, b, base: LogBase::Bits };
        p.validate()?;
        Ok(p)
    }

    pub fn in_nats(self) -> Self {
        BoundParams { base: LogBase::Nats, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if self.n == 0 || !positive(self.sigma) || !positive(self.l0) || !positive(self.b) {
            return Err(FormationError::InvalidParams(format!(
                "bound parameters must be positive: n={}, sigma={}, l0={}, b={}",
                self.n, self.sigma, self.l0, self.b
            )));
        }
        Ok(())
    }

    fn n_t(&self) -> T {
        T::from_count(self.n)
    }
}

/// Radial density of a point uniform on the disk of radius `l0`; zero outside `[0, l0]`.
pub fn prior_pdf<T: Scalar>(r: T, l0: T) -> T {
    if r < T::zero() || r > l0 {
        T::zero()
    } else {
        T::two() * r / (l0 * l0)
    }
}

/// Differential entropy of the radial prior: `1/2 - ln(2/l0)` nats, converted to `base`.
pub fn differential_entropy<T: Scalar>(l0: T, base: LogBase) -> T {
    let nats = T::half() - (T::two() / l0).ln();
    match base {
        LogBase::Nats => nats,
        LogBase::Bits => nats / T::LN_2(),
    }
}

/// Fisher information about the mean carried by `n` Gaussian samples.
pub fn fisher_information<T: Scalar>(n: usize, sigma: T) -> T {
    T::from_count(n) / (sigma * sigma)
}

/// Asymptotic mutual information between a scalar parameter and `n` samples:
/// `1/2 log(n / 2 pi e) + h(W) + 1/2 log J`, higher-order term dropped.
pub fn clarke_mutual_information<T: Scalar>(p: &BoundParams<T>) -> T {
    let two_pi_e = T::TAU() * T::E();
    T::half() * p.base.log(p.n_t() / two_pi_e)
        + differential_entropy(p.l0, p.base)
        + T::half() * p.base.log(fisher_information(p.n, p.sigma))
}

/// Gaussian-channel cap on the information: `log(n l0 / 2 sigma) + 1/2 - 1/2 log(2 pi e)`.
pub fn mi_upper_gaussian<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    p.validate()?;
    let arg = p.n_t() * p.l0 / (T::two() * p.sigma);
    if !(arg > T::zero()) || !arg.is_finite() {
        return Err(FormationError::InvalidParams(format!("log argument {arg} is not positive")));
    }
    Ok(p.base.log(arg) + T::half() - T::half() * p.base.log(T::TAU() * T::E()))
}

/// Smallest likelihood ratio between two sampling distributions with means in
/// `[0, l0]`: `exp(-n l0^2 / 2 sigma^2)`.
pub fn sdpi_alpha<T: Scalar>(p: &BoundParams<T>) -> T {
    (-(p.n_t() * p.l0 * p.l0) / (T::two() * p.sigma * p.sigma)).exp()
}

/// Upper bound `1 - alpha` on the contraction coefficient of the backward channel.
pub fn sdpi_eta_upper<T: Scalar>(p: &BoundParams<T>) -> T {
    T::one() - sdpi_alpha(p)
}

/// Cap on the information reaching the estimator.
pub fn mi_upper<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    let gaussian = mi_upper_gaussian(p)?;
    let contracted = sdpi_eta_upper(p) * p.base.from_bits(p.b);
    Ok(gaussian.min(contracted))
}

/// Lower bound on the mean absolute distance error, hence on the formation bias.
pub fn bayes_lower_bound<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    let gaussian = mi_upper_gaussian(p)?;
    let contracted = sdpi_eta_upper(p) * p.base.from_bits(p.b);
    let prefactor = p.l0 / (T::two() * T::E());
    Ok(prefactor * p.base.pow(-gaussian).max(p.base.pow(-contracted)))
}
