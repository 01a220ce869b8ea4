//! Closed-form forward kinematics of the sixteen joint points.
//!
//! Positions come from the canonical chain table; velocities,
//! accelerations and point Jacobians are exact derivatives of it.

mod compiled;
pub mod ledger;
pub mod table;

use std::collections::BTreeMap;

use nalgebra::{SMatrix, Vector3};
use thiserror::Error;

pub use compiled::ChainKinematics;
pub(crate) use compiled::CompiledBody;
pub use ledger::{correction, Correction, CorrectionState, LEDGER};
pub use table::{point_dofs, Axis, ChainTable, Node, Trig};

use crate::model::{JointPointId, JointState, LinkLengths, DOF};
use crate::{Joints, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KinematicsError {
    #[error("unknown correction `{0}`")]
    UnknownCorrection(String),
    #[error("correction `{0}` is documentation only and cannot be reverted")]
    NotRevertible(&'static str),
    #[error("correction `{0}` does not match any term of the table")]
    PatchTargetMissing(&'static str),
}

/// Position, velocity and acceleration of one joint point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointKinematics<T: Real> {
    pub point: JointPointId,
    pub position: Vector3<T>,
    pub velocity: Vector3<T>,
    pub acceleration: Vector3<T>,
}

/// `∂p/∂θ` of one joint point: a 3×7 matrix whose column `k-1` is
/// `∂p/∂θ_k` (m/rad).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointJacobian<T: Real> {
    pub point: JointPointId,
    pub matrix: SMatrix<T, 3, DOF>,
}

impl<T: Real> PointJacobian<T> {
    /// Column for DOF `k` (1-based).
    pub fn column(&self, k: usize) -> Vector3<T> {
        self.matrix.column(k - 1).into_owned()
    }
}

pub fn canonical_position<T: Real>(point: JointPointId, theta: &Joints<T>, lengths: &LinkLengths<T>) -> Vector3<T> {
    ChainKinematics::new(lengths).position(point, theta)
}

pub fn canonical_velocity<T: Real>(point: JointPointId, state: &JointState<T>, lengths: &LinkLengths<T>) -> Vector3<T> {
    ChainKinematics::new(lengths).velocity(point, &state.theta, &state.omega)
}

pub fn canonical_acceleration<T: Real>(
    point: JointPointId,
    state: &JointState<T>,
    lengths: &LinkLengths<T>,
) -> Vector3<T> {
    ChainKinematics::new(lengths).acceleration(point, &state.theta, &state.omega, &state.alpha)
}

pub fn point_jacobian<T: Real>(point: JointPointId, theta: &Joints<T>, lengths: &LinkLengths<T>) -> PointJacobian<T> {
    PointJacobian {
        point,
        matrix: ChainKinematics::new(lengths).jacobian(point, theta),
    }
}

impl<T: Real> ChainKinematics<T> {
    pub fn point_kinematics(&self, point: JointPointId, state: &JointState<T>) -> PointKinematics<T> {
        PointKinematics {
            point,
            position: self.position(point, &state.theta),
            velocity: self.velocity(point, &state.theta, &state.omega),
            acceleration: self.acceleration(point, &state.theta, &state.omega, &state.alpha),
        }
    }

    pub fn point_jacobian(&self, point: JointPointId, theta: &Joints<T>) -> PointJacobian<T> {
        PointJacobian {
            point,
            matrix: self.jacobian(point, theta),
        }
    }

    pub fn full_pose(&self, state: &JointState<T>) -> BTreeMap<JointPointId, PointKinematics<T>> {
        JointPointId::ALL
            .iter()
            .map(|&p| (p, self.point_kinematics(p, state)))
            .collect()
    }
}

/// Kinematics of all sixteen points in one pass.
pub fn full_pose<T: Real>(state: &JointState<T>, lengths: &LinkLengths<T>) -> BTreeMap<JointPointId, PointKinematics<T>> {
    ChainKinematics::new(lengths).full_pose(state)
}

#[cfg(test)]
mod tests;
