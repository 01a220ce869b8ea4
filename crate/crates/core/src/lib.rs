//! Kinematics and dynamics engine for a 15-link, 7-DOF modular upper-limb
//! rehabilitation chain.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] owns the chain topology, the link parameters, the built-in
//!   anthropometric profiles and the JSON configuration format.
//! * [`kinematics`] evaluates the closed-form position of every joint point
//!   and derives velocities, accelerations and point Jacobians from it.
//! * [`dynamics`] assembles the joint-space mass matrix, Coriolis, gravity
//!   and friction terms, and provides inverse dynamics with a torque
//!   breakdown plus an RK4 forward simulator.
//! * [`scara`] is an independent SCARA arm that reuses the same dynamics
//!   machinery and carries the grasp statics solver.
//! * [`trajectory`] generates joint-space excitation (quintic and
//!   sinusoidal).
//! * [`oracle`] holds finite-difference and discretisation reference
//!   computations used by the self-check suite.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which is what the CLI uses.

// NaN has to fail validation, which `!(x > 0)` does and `x <= 0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod kinematics;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod scara;
pub mod trajectory;
pub mod verify;

pub use scalar::Real;

pub use dynamics::{
    DynamicsError, LumpedModel, MassMatrix as GenericMassMatrix, ModularChain as GenericModularChain,
    TorqueBreakdown as GenericTorqueBreakdown,
};
pub use kinematics::{
    ChainKinematics as GenericChainKinematics, ChainTable, CorrectionState, KinematicsError,
    PointJacobian as GenericPointJacobian, PointKinematics as GenericPointKinematics,
};
pub use model::{
    AnthropometricProfile as GenericProfile, FrictionParameters as GenericFriction,
    InertiaModel, InteractionWrenches as GenericWrenches, JointKind, JointPointId,
    JointState as GenericJointState, LinkInertia as GenericLinkInertia,
    LinkLengths as GenericLinkLengths, ModelError, DOF, LENGTH_COUNT, MOVING_LINKS,
};
pub use trajectory::{TrajectoryError, TrajectorySpec as GenericTrajectorySpec};

/// Seven-component joint-space vector.
pub type Joints<T = f64> = nalgebra::SVector<T, DOF>;

pub type JointState = model::JointState<f64>;
pub type LinkLengths = model::LinkLengths<f64>;
pub type LinkInertia = model::LinkInertia<f64>;
pub type Profile = model::AnthropometricProfile<f64>;
pub type FrictionParameters = model::FrictionParameters<f64>;
pub type InteractionWrenches = model::InteractionWrenches<f64>;
pub type ChainKinematics = kinematics::ChainKinematics<f64>;
pub type PointKinematics = kinematics::PointKinematics<f64>;
pub type PointJacobian = kinematics::PointJacobian<f64>;
pub type ModularChain = dynamics::ModularChain<f64>;
pub type MassMatrix = dynamics::MassMatrix<f64>;
pub type TorqueBreakdown = dynamics::TorqueBreakdown<f64>;
pub type TrajectorySpec = trajectory::TrajectorySpec<f64>;
pub type ScaraArm = scara::ScaraArm<f64>;
pub type ScaraState = scara::ScaraState<f64>;
pub type GraspLoad = scara::GraspLoad<f64>;
