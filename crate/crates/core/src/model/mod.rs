//! Chain topology, link parameters, anthropometric profiles and
//! configuration ingestion.

mod config;
mod friction;
mod point;
mod profile;
mod state;

use nalgebra::Vector3;
use thiserror::Error;

use crate::Real;

pub use config::{ChainConfig, ConfigError, InitialState, WrenchConfig};
pub use friction::{FrictionParameters, InteractionWrenches};
pub use point::{JointKind, JointPointId};
pub use profile::{
    builtin_profile, validate_profile, AnthropometricProfile, InertiaModel, LinkInertia,
    LinkLengths, BASE_LENGTHS, BUILTIN_PROFILES,
};
pub use state::JointState;

/// Number of actuated joint angles.
pub const DOF: usize = 7;
/// Number of geometric offsets `l1..l15`.
pub const LENGTH_COUNT: usize = 15;
/// Number of moving links; link `i` spans length `l(i)` for `i` in `2..=15`.
pub const MOVING_LINKS: usize = 14;

/// Validation failures for chain parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("link length l{0} must be positive and finite")]
    NonPositiveLength(usize),
    #[error("mass of link l{0} must be non-negative and finite")]
    NegativeMass(usize),
    #[error("total moving mass is zero; dynamics are ill-posed")]
    ZeroTotalMass,
    #[error("friction smoothing epsilon must be positive and finite")]
    BadSmoothingEps,
    #[error("friction coefficient {name}[{dof}] must be non-negative and finite")]
    NegativeFriction { name: &'static str, dof: usize },
    #[error("gravity vector must be finite")]
    NonFiniteGravity,
    #[error("profile name must not be empty")]
    EmptyName,
    #[error("unknown profile `{0}` (expected small, medium or large)")]
    UnknownProfile(String),
    #[error("unknown joint point `{0}`")]
    UnknownPoint(String),
    #[error("DOF index {0} out of range 1..=7")]
    BadIndex(usize),
    #[error("joint state component {name}[{dof}] is not finite")]
    NonFiniteState { name: &'static str, dof: usize },
    #[error("expected {expected} values for `{field}`, got {got}")]
    WrongLength {
        field: &'static str,
        expected: usize,
        got: usize,
    },
}

/// Posture in which every link that gravity can swing hangs straight down
/// (base gravity along −z). DOFs 1 and 6 turn about vertical axes and stay
/// at zero.
pub fn rest_posture<T: Real>() -> crate::Joints<T> {
    let half_pi = T::frac_pi_2();
    crate::Joints::from([T::zero(), -half_pi, T::pi(), -half_pi, T::pi(), T::zero(), -half_pi])
}

/// Rotation axis of DOF `k` (1-based), read off the plane in which the
/// terms governed by `θ_k` move.
pub fn joint_axis<T: Real>(k: usize) -> Result<Vector3<T>, ModelError> {
    match k {
        1 | 6 => Ok(Vector3::z()),
        2 | 7 => Ok(Vector3::x()),
        3..=5 => Ok(Vector3::y()),
        _ => Err(ModelError::BadIndex(k)),
    }
}
