//! Joint-space dynamics: mass matrix, Coriolis, gravity and friction terms,
//! inverse dynamics with a torque breakdown, and RK4 forward dynamics.

pub mod lumped;
mod modular;

use thiserror::Error;

pub use lumped::LumpedModel;
pub use modular::{friction_torque, MassMatrix, ModularChain, TorqueBreakdown};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("dynamics are ill-posed: {0:?}")]
    IllPosed(Vec<ModelError>),
    #[error("mass matrix is singular or badly conditioned (condition number {condition:.3e})")]
    SingularMass { condition: f64 },
    #[error("time step must be positive, got {0}")]
    BadTimeStep(f64),
    #[error(transparent)]
    Kinematics(#[from] crate::kinematics::KinematicsError),
}
