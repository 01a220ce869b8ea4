use nalgebra::Vector3;

use super::{JointPointId, ModelError, DOF};
use crate::{Joints, Real};

/// Joint and skin friction coefficients per DOF.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrictionParameters<T: Real> {
    /// Viscous joint friction `b_k` (N·m·s/rad).
    pub viscous_joint: Joints<T>,
    /// Coulomb joint friction `c_k` (N·m).
    pub coulomb_joint: Joints<T>,
    /// Viscous skin friction `s_k` (N·m·s/rad).
    pub viscous_skin: Joints<T>,
    /// Rate scale of the tanh-smoothed Coulomb term (rad/s).
    pub smoothing_eps: T,
}

impl<T: Real> Default for FrictionParameters<T> {
    fn default() -> Self {
        Self::frictionless()
    }
}

impl<T: Real> FrictionParameters<T> {
    pub fn frictionless() -> Self {
        Self {
            viscous_joint: Joints::zeros(),
            coulomb_joint: Joints::zeros(),
            viscous_skin: Joints::zeros(),
            smoothing_eps: T::lit(1e-3),
        }
    }

    pub fn validate(&self) -> Vec<ModelError> {
        let mut errs = Vec::new();
        for (name, v) in [
            ("viscous_joint", &self.viscous_joint),
            ("coulomb_joint", &self.coulomb_joint),
            ("viscous_skin", &self.viscous_skin),
        ] {
            for k in 0..DOF {
                if !(v[k].is_finite() && v[k] >= T::zero()) {
                    errs.push(ModelError::NegativeFriction { name, dof: k + 1 });
                }
            }
        }
        if !(self.smoothing_eps.is_finite() && self.smoothing_eps > T::zero()) {
            errs.push(ModelError::BadSmoothingEps);
        }
        errs
    }
}

/// Interaction loads on the chain: two cuff forces and a disturbance torque.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionWrenches<T: Real> {
    /// Elbow cuff force (N), applied at `gamma1_point`.
    pub gamma1: Vector3<T>,
    pub gamma1_point: JointPointId,
    /// Wrist cuff force (N), applied at `gamma2_point`.
    pub gamma2: Vector3<T>,
    pub gamma2_point: JointPointId,
    /// Joint-space disturbance torque `λ_u` (N·m).
    pub lambda_u: Joints<T>,
}

impl<T: Real> Default for InteractionWrenches<T> {
    fn default() -> Self {
        Self {
            gamma1: Vector3::zeros(),
            gamma1_point: JointPointId::M,
            gamma2: Vector3::zeros(),
            gamma2_point: JointPointId::T,
            lambda_u: Joints::zeros(),
        }
    }
}
