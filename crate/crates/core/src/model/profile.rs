use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{ModelError, LENGTH_COUNT, MOVING_LINKS};
use crate::Real;

/// Base offsets `l1..l15` in metres; the built-in profiles scale this vector.
pub const BASE_LENGTHS: [f64; LENGTH_COUNT] = [
    0.05, 0.10, 0.04, 0.12, 0.03, 0.06, 0.06, 0.08, 0.08, 0.10, 0.03, 0.12, 0.03, 0.08, 0.04,
];

/// `(name, length scale, total moving mass in kg)` of the built-in profiles.
pub const BUILTIN_PROFILES: [(&str, f64, f64); 3] =
    [("small", 0.8, 1.2), ("medium", 1.0, 2.0), ("large", 1.2, 3.0)];

/// Geometric offsets `l1..l15` of the chain, in metres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkLengths<T: Real>(pub [T; LENGTH_COUNT]);

impl<T: Real> LinkLengths<T> {
    /// Length `l_i` with the 1-based index used throughout the model.
    ///
    /// # Panics
    /// If `i` is outside `1..=15`.
    #[inline]
    pub fn l(&self, i: usize) -> T {
        self.0[i - 1]
    }

    pub fn from_f64(values: &[f64; LENGTH_COUNT]) -> Self {
        Self(values.map(T::lit))
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self(self.0.map(|l| l * factor))
    }

    pub fn validate(&self) -> Vec<ModelError> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, l)| !(l.is_finite() && **l > T::zero()))
            .map(|(i, _)| ModelError::NonPositiveLength(i + 1))
            .collect()
    }
}

/// How a moving link's mass is distributed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InertiaModel {
    /// All mass at the distal end point; no rotational inertia.
    PointMassAtDistalEnd,
    /// Uniform rod between the proximal and distal points.
    #[default]
    UniformSlenderRod,
}

/// Mass and mass model of the fourteen moving links.
///
/// Link `i` (for `i` in `2..=15`) is the segment whose geometry is set by
/// `l_i`; `l1` is the grounded base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkInertia<T: Real> {
    pub masses: [T; MOVING_LINKS],
    pub models: [InertiaModel; MOVING_LINKS],
}

impl<T: Real> LinkInertia<T> {
    pub fn uniform_rods(masses: [T; MOVING_LINKS]) -> Self {
        Self {
            masses,
            models: [InertiaModel::UniformSlenderRod; MOVING_LINKS],
        }
    }

    /// Only link `link` (2..=15) carries mass `m`; all others are massless.
    pub fn single(link: usize, m: T, model: InertiaModel) -> Self {
        let mut masses = [T::zero(); MOVING_LINKS];
        masses[link - 2] = m;
        Self {
            masses,
            models: [model; MOVING_LINKS],
        }
    }

    /// Mass of link `i`, `i` in `2..=15`.
    pub fn mass(&self, link: usize) -> T {
        self.masses[link - 2]
    }

    pub fn model(&self, link: usize) -> InertiaModel {
        self.models[link - 2]
    }

    pub fn total_mass(&self) -> T {
        self.masses.iter().fold(T::zero(), |a, &m| a + m)
    }

    /// Distributes `total` over the moving links in proportion to their
    /// lengths `l2..l15`.
    pub fn proportional(lengths: &LinkLengths<T>, total: T) -> Self {
        let sum = (2..=LENGTH_COUNT).fold(T::zero(), |a, i| a + lengths.l(i));
        let mut masses = [T::zero(); MOVING_LINKS];
        for (k, m) in masses.iter_mut().enumerate() {
            *m = total * lengths.l(k + 2) / sum;
        }
        Self::uniform_rods(masses)
    }

    pub fn validate(&self) -> Vec<ModelError> {
        let mut errs: Vec<ModelError> = self
            .masses
            .iter()
            .enumerate()
            .filter(|(_, m)| !(m.is_finite() && **m >= T::zero()))
            .map(|(k, _)| ModelError::NegativeMass(k + 2))
            .collect();
        if errs.is_empty() && self.total_mass() <= T::zero() {
            errs.push(ModelError::ZeroTotalMass);
        }
        errs
    }
}

/// Named size class binding link lengths, link masses and gravity.
#[derive(Clone, Debug, PartialEq)]
pub struct AnthropometricProfile<T: Real> {
    pub name: String,
    pub lengths: LinkLengths<T>,
    pub inertia: LinkInertia<T>,
    /// Gravitational acceleration in the base frame, z up.
    pub gravity: Vector3<T>,
}

impl<T: Real> AnthropometricProfile<T> {
    pub fn new(name: impl Into<String>, lengths: LinkLengths<T>, inertia: LinkInertia<T>) -> Self {
        Self {
            name: name.into(),
            lengths,
            inertia,
            gravity: default_gravity(),
        }
    }

    pub fn with_gravity(mut self, gravity: Vector3<T>) -> Self {
        self.gravity = gravity;
        self
    }
}

pub(crate) fn default_gravity<T: Real>() -> Vector3<T> {
    Vector3::new(T::zero(), T::zero(), T::lit(-9.81))
}

/// Returns the profile unchanged if every invariant holds, otherwise the
/// complete list of violations.
pub fn validate_profile<T: Real>(
    profile: AnthropometricProfile<T>,
) -> Result<AnthropometricProfile<T>, Vec<ModelError>> {
    let mut errs = Vec::new();
    if profile.name.trim().is_empty() {
        errs.push(ModelError::EmptyName);
    }
    errs.extend(profile.lengths.validate());
    errs.extend(profile.inertia.validate());
    if !profile.gravity.iter().all(|g| g.is_finite()) {
        errs.push(ModelError::NonFiniteGravity);
    }
    if errs.is_empty() {
        Ok(profile)
    } else {
        Err(errs)
    }
}

/// One of the built-in `small`, `medium` or `large` profiles.
pub fn builtin_profile<T: Real>(name: &str) -> Result<AnthropometricProfile<T>, ModelError> {
    let (name, scale, mass) = BUILTIN_PROFILES
        .iter()
        .copied()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| ModelError::UnknownProfile(name.to_string()))?;
    let lengths = LinkLengths::from_f64(&BASE_LENGTHS).scaled(T::lit(scale));
    let inertia = LinkInertia::proportional(&lengths, T::lit(mass));
    Ok(AnthropometricProfile::new(name, lengths, inertia))
}
