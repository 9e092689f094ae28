use rand_core::RngCore;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Exponential,
    Deterministic,
    LogNormal,
}

/// A positive duration distribution given by its mean and, for the
/// log-normal family, its coefficient of variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub family: Family,
    pub mean: f64,
    pub cv: f64,
}

impl DistributionSpec {
    pub fn exponential(mean: f64) -> Self {
        DistributionSpec {
            family: Family::Exponential,
            mean,
            cv: 1.0,
        }
    }

    pub fn deterministic(mean: f64) -> Self {
        DistributionSpec {
            family: Family::Deterministic,
            mean,
            cv: 0.0,
        }
    }

    pub fn lognormal(mean: f64, cv: f64) -> Self {
        DistributionSpec {
            family: Family::LogNormal,
            mean,
            cv,
        }
    }

    /// Exponential with the given rate; `None` for rate 0.
    pub fn from_rate(rate: f64) -> Option<Self> {
        (rate > 0.0).then(|| DistributionSpec::exponential(1.0 / rate))
    }

    pub fn is_valid(&self) -> bool {
        let mean_ok = self.mean.is_finite() && self.mean > 0.0;
        match self.family {
            Family::LogNormal => mean_ok && self.cv.is_finite() && self.cv > 0.0,
            _ => mean_ok,
        }
    }

    /// Inverse CDF at `u ∈ (0, 1]` for the families that have a closed
    /// form. Exponential uses `-mean · ln u` (the survival-function form).
    pub fn inverse_cdf(&self, u: f64) -> Option<f64> {
        match self.family {
            Family::Exponential => Some(-self.mean * libm::log(u)),
            Family::Deterministic => Some(self.mean),
            Family::LogNormal => None,
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.family {
            Family::Exponential => -self.mean * libm::log(open_unit(rng)),
            Family::Deterministic => self.mean,
            Family::LogNormal => {
                let s2 = libm::log1p(self.cv * self.cv);
                let mu = libm::log(self.mean) - 0.5 * s2;
                libm::exp(mu + libm::sqrt(s2) * standard_normal(rng))
            }
        }
    }
}

/// Uniform on `(0, 1]` with 53 random bits.
pub(crate) fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

// Box-Muller, cosine branch only
fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let u1 = open_unit(rng);
    let u2 = open_unit(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}
