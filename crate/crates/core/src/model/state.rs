use super::{ModelError, DOF};
use crate::{Joints, Real};

/// Joint angles, rates and accelerations of the seven DOFs. Index `k-1`
/// holds `θ_k`, `ω_k = dθ_k/dt` and `α_k = dω_k/dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointState<T: Real> {
    pub theta: Joints<T>,
    pub omega: Joints<T>,
    pub alpha: Joints<T>,
}

impl<T: Real> JointState<T> {
    /// Builds a state, rejecting non-finite components.
    pub fn new(theta: Joints<T>, omega: Joints<T>, alpha: Joints<T>) -> Result<Self, ModelError> {
        let s = Self {
            theta,
            omega,
            alpha,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn at_rest(theta: Joints<T>) -> Self {
        Self {
            theta,
            omega: Joints::zeros(),
            alpha: Joints::zeros(),
        }
    }

    pub fn zero() -> Self {
        Self::at_rest(Joints::zeros())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [
            ("theta", &self.theta),
            ("omega", &self.omega),
            ("alpha", &self.alpha),
        ] {
            if let Some(dof) = (0..DOF).find(|&i| !v[i].is_finite()) {
                return Err(ModelError::NonFiniteState { name, dof: dof + 1 });
            }
        }
        Ok(())
    }
}
