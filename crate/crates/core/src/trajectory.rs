//! Joint-space excitation: quintic point-to-point moves and per-DOF sinusoids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{JointState, DOF};
use crate::{Joints, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrajectoryError {
    #[error("duration must be positive and finite, got {0}")]
    BadDuration(f64),
    #[error("sample rate must be positive and finite, got {0}")]
    BadSampleRate(f64),
    #[error("non-finite {field} for DOF {dof}")]
    NonFinite { field: &'static str, dof: usize },
    #[error("time {t} outside [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("span [{t0}, {t1}] is not a whole number of sample periods")]
    RaggedSpan { t0: f64, t1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Quintic,
    Sinusoidal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T: Real> {
    Quintic { start: Joints<T>, end: Joints<T> },
    Sinusoidal { amplitude: Joints<T>, frequency: Joints<T>, phase: Joints<T>, offset: Joints<T> },
}

/// A trajectory plus the span and rate it is sampled at.
///
/// For quintic moves `duration` is the move time shared by every DOF; for
/// sinusoids it only sets the default run length.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpec<T: Real> {
    pub shape: Shape<T>,
    pub duration: T,
    pub sample_rate: T,
}

fn check_all<T: Real>(field: &'static str, v: &Joints<T>) -> Result<(), TrajectoryError> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(k) => Err(TrajectoryError::NonFinite { field, dof: k + 1 }),
        None => Ok(()),
    }
}

impl<T: Real> TrajectorySpec<T> {
    pub fn quintic(start: Joints<T>, end: Joints<T>, duration: T, sample_rate: T) -> Result<Self, TrajectoryError> {
        let s = Self { shape: Shape::Quintic { start, end }, duration, sample_rate };
        s.validate()?;
        Ok(s)
    }

    pub fn sinusoidal(
        amplitude: Joints<T>,
        frequency: Joints<T>,
        phase: Joints<T>,
        offset: Joints<T>,
        duration: T,
        sample_rate: T,
    ) -> Result<Self, TrajectoryError> {
        let s = Self {
            shape: Shape::Sinusoidal { amplitude, frequency, phase, offset },
            duration,
            sample_rate,
        };
        s.validate()?;
        Ok(s)
    }

    /// All seven DOFs swing 0.3 rad at 0.25 Hz, DOF k phased by k·π/7.
    pub fn demo() -> Self {
        let phase = Joints::from_fn(|k, _| T::lit((k + 1) as f64 * std::f64::consts::PI / DOF as f64));
        Self {
            shape: Shape::Sinusoidal {
                amplitude: Joints::repeat(T::lit(0.3)),
                frequency: Joints::repeat(T::lit(0.25)),
                phase,
                offset: Joints::zeros(),
            },
            duration: T::one(),
            sample_rate: T::lit(100.0),
        }
    }

    /// Every angle held at `theta` for `duration`.
    pub fn hold(theta: Joints<T>, duration: T, sample_rate: T) -> Result<Self, TrajectoryError> {
        Self::quintic(theta, theta, duration, sample_rate)
    }

    pub fn kind(&self) -> TrajectoryKind {
        match self.shape {
            Shape::Quintic { .. } => TrajectoryKind::Quintic,
            Shape::Sinusoidal { .. } => TrajectoryKind::Sinusoidal,
        }
    }

    pub fn validate(&self) -> Result<(), TrajectoryError> {
        if !(self.duration > T::zero() && self.duration.is_finite()) {
            return Err(TrajectoryError::BadDuration(self.duration.as_f64()));
        }
        if !(self.sample_rate > T::zero() && self.sample_rate.is_finite()) {
            return Err(TrajectoryError::BadSampleRate(self.sample_rate.as_f64()));
        }
        match &self.shape {
            Shape::Quintic { start, end } => {
                check_all("theta_start", start)?;
                check_all("theta_end", end)
            }
            Shape::Sinusoidal { amplitude, frequency, phase, offset } => {
                check_all("amplitude", amplitude)?;
                check_all("frequency_hz", frequency)?;
                check_all("phase", phase)?;
                check_all("offset", offset)
            }
        }
    }

    fn admits(&self, t: T) -> bool {
        let slack = T::lit(1e-9) * (T::one() + self.duration);
        match self.shape {
            Shape::Quintic { .. } => t >= -slack && t <= self.duration + slack,
            Shape::Sinusoidal { .. } => t >= -slack && t.is_finite(),
        }
    }

    pub fn sample(&self, t: T) -> Result<JointState<T>, TrajectoryError> {
        if !self.admits(t) {
            let hi = match self.shape {
                Shape::Quintic { .. } => self.duration.as_f64(),
                Shape::Sinusoidal { .. } => f64::INFINITY,
            };
            return Err(TrajectoryError::OutOfRange { t: t.as_f64(), lo: 0.0, hi });
        }
        Ok(match &self.shape {
            Shape::Quintic { start, end } => {
                let d = self.duration;
                let s = (t / d).clamp(T::zero(), T::one());
                let (s2, s3) = (s * s, s * s * s);
                let p = s3 * (T::lit(10.0) - T::lit(15.0) * s + T::lit(6.0) * s2);
                let dp = s2 * (T::lit(30.0) - T::lit(60.0) * s + T::lit(30.0) * s2) / d;
                let ddp = s * (T::lit(60.0) - T::lit(180.0) * s + T::lit(120.0) * s2) / (d * d);
                let delta = end - start;
                JointState { theta: start + delta * p, omega: delta * dp, alpha: delta * ddp }
            }
            Shape::Sinusoidal { amplitude, frequency, phase, offset } => {
                let mut st = JointState::zero();
                for k in 0..DOF {
                    let w = T::two_pi() * frequency[k];
                    let (sn, cs) = (w * t + phase[k]).sin_cos();
                    st.theta[k] = amplitude[k] * sn + offset[k];
                    st.omega[k] = amplitude[k] * w * cs;
                    st.alpha[k] = -amplitude[k] * w * w * sn;
                }
                st
            }
        })
    }

    /// Number of samples in `[t0, t1]` at the sample rate, both ends included.
    pub fn sample_count(&self, t0: T, t1: T) -> Result<usize, TrajectoryError> {
        let periods = ((t1 - t0) * self.sample_rate).as_f64();
        let n = periods.round();
        if !(t1 > t0) || (periods - n).abs() > 1e-9 * n.max(1.0) {
            return Err(TrajectoryError::RaggedSpan { t0: t0.as_f64(), t1: t1.as_f64() });
        }
        Ok(n as usize + 1)
    }

    /// Uniform samples `t_i = t0 + i / rate` from `t0` to `t1` inclusive.
    pub fn sample_series(&self, t0: T, t1: T) -> Result<Vec<(T, JointState<T>)>, TrajectoryError> {
        self.validate()?;
        for t in [t0, t1] {
            if !self.admits(t) {
                return Err(TrajectoryError::OutOfRange { t: t.as_f64(), lo: 0.0, hi: self.duration.as_f64() });
            }
        }
        let n = self.sample_count(t0, t1)?;
        (0..n)
            .map(|i| {
                let t = if i + 1 == n { t1 } else { t0 + T::lit(i as f64) / self.sample_rate };
                self.sample(t).map(|s| (t, s))
            })
            .collect()
    }

    /// The whole default run, `[0, duration]`.
    pub fn series(&self) -> Result<Vec<(T, JointState<T>)>, TrajectoryError> {
        self.sample_series(T::zero(), self.duration)
    }
}

fn zeros7() -> [f64; DOF] {
    [0.0; DOF]
}

fn default_duration() -> f64 {
    1.0
}

fn default_rate() -> f64 {
    100.0
}

/// `"trajectory"` block of the JSON config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrajectoryConfig {
    Quintic {
        theta_start: [f64; DOF],
        theta_end: [f64; DOF],
        #[serde(default = "default_duration")]
        duration: f64,
        #[serde(default = "default_rate")]
        sample_rate: f64,
    },
    Sinusoidal {
        amplitude: [f64; DOF],
        frequency_hz: [f64; DOF],
        #[serde(default = "zeros7")]
        phase: [f64; DOF],
        #[serde(default = "zeros7")]
        offset: [f64; DOF],
        #[serde(default = "default_duration")]
        duration: f64,
        #[serde(default = "default_rate")]
        sample_rate: f64,
    },
}

impl TrajectoryConfig {
    pub fn to_spec<T: Real>(&self) -> Result<TrajectorySpec<T>, TrajectoryError> {
        let j = |a: &[f64; DOF]| Joints::<T>::from_fn(|k, _| T::lit(a[k]));
        match self {
            Self::Quintic { theta_start, theta_end, duration, sample_rate } => {
                TrajectorySpec::quintic(j(theta_start), j(theta_end), T::lit(*duration), T::lit(*sample_rate))
            }
            Self::Sinusoidal { amplitude, frequency_hz, phase, offset, duration, sample_rate } => TrajectorySpec::sinusoidal(
                j(amplitude),
                j(frequency_hz),
                j(phase),
                j(offset),
                T::lit(*duration),
                T::lit(*sample_rate),
            ),
        }
    }

    pub fn from_spec(spec: &TrajectorySpec<f64>) -> Self {
        let a = |v: &Joints<f64>| -> [f64; DOF] { v.as_slice().try_into().unwrap() };
        match &spec.shape {
            Shape::Quintic { start, end } => Self::Quintic {
                theta_start: a(start),
                theta_end: a(end),
                duration: spec.duration,
                sample_rate: spec.sample_rate,
            },
            Shape::Sinusoidal { amplitude, frequency, phase, offset } => Self::Sinusoidal {
                amplitude: a(amplitude),
                frequency_hz: a(frequency),
                phase: a(phase),
                offset: a(offset),
                duration: spec.duration,
                sample_rate: spec.sample_rate,
            },
        }
    }
}
