//! Reference computations used to validate the analytic derivatives.
//!
//! Nothing here calls into the analytic Jacobian or mass-matrix code: each
//! routine only evaluates positions or energies and differentiates them
//! numerically, or replaces a rigid body with a cloud of point masses.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::kinematics::{ChainKinematics, Node};
use crate::model::{AnthropometricProfile, JointPointId, DOF, MOVING_LINKS};
use crate::kinematics::table::link_nodes;
use crate::Joints;

/// Central-difference gradient of a scalar function.
pub fn central_gradient(f: impl Fn(&DVector<f64>) -> f64, x: &DVector<f64>, h: f64) -> DVector<f64> {
    DVector::from_fn(x.len(), |i, _| {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        (f(&xp) - f(&xm)) / (2.0 * h)
    })
}

/// Central difference of a vector-valued function along a direction.
pub fn directional<const R: usize>(
    f: impl Fn(&Joints<f64>) -> nalgebra::SVector<f64, R>,
    x: &Joints<f64>,
    dir: &Joints<f64>,
    h: f64,
) -> nalgebra::SVector<f64, R> {
    (f(&(x + dir * h)) - f(&(x - dir * h))) / (2.0 * h)
}

/// Point velocity as the directional derivative of position along `ω`.
pub fn fd_velocity(kin: &ChainKinematics<f64>, p: JointPointId, theta: &Joints<f64>, omega: &Joints<f64>, h: f64) -> Vector3<f64> {
    directional(|t| kin.position(p, t), theta, omega, h)
}

/// Jacobian column `k` (0-based) by central differences in `θ_k`.
pub fn fd_jacobian_column(kin: &ChainKinematics<f64>, p: JointPointId, theta: &Joints<f64>, k: usize, h: f64) -> Vector3<f64> {
    let mut e = Joints::zeros();
    e[k] = 1.0;
    directional(|t| kin.position(p, t), theta, &e, h)
}

/// Acceleration as the time derivative of the analytic velocity along
/// `θ(t) = θ + ωt + αt²/2`, `ω(t) = ω + αt`, at `t = 0`.
pub fn fd_acceleration_in_time(
    kin: &ChainKinematics<f64>,
    p: JointPointId,
    theta: &Joints<f64>,
    omega: &Joints<f64>,
    alpha: &Joints<f64>,
    h: f64,
) -> Vector3<f64> {
    let v = |t: f64| {
        let th = theta + omega * t + alpha * (0.5 * t * t);
        let w = omega + alpha * t;
        kin.velocity(p, &th, &w)
    };
    (v(h) - v(-h)) / (2.0 * h)
}

fn node_position(kin: &ChainKinematics<f64>, node: Node, theta: &Joints<f64>) -> Vector3<f64> {
    match node {
        Node::Point(p) => kin.position(p, theta),
        Node::RiserTop => kin.riser_top(theta),
    }
}

/// Mass matrix of the chain with every moving link replaced by `samples`
/// equal point masses at the midpoints of equal sub-segments (or a single
/// point at the distal end for point-mass links). Point velocities come
/// from central differences of positions.
pub fn discretized_mass_matrix(
    profile: &AnthropometricProfile<f64>,
    theta: &Joints<f64>,
    samples: usize,
    h: f64,
) -> DMatrix<f64> {
    use crate::model::InertiaModel;
    let kin = ChainKinematics::new(&profile.lengths);
    let mut m = DMatrix::zeros(DOF, DOF);
    for link in 2..2 + MOVING_LINKS {
        let mass = profile.inertia.mass(link);
        if mass == 0.0 {
            continue;
        }
        let (prox, dist) = link_nodes(link);
        let fractions: Vec<f64> = match profile.inertia.model(link) {
            InertiaModel::PointMassAtDistalEnd => vec![1.0],
            InertiaModel::UniformSlenderRod => (0..samples).map(|i| (i as f64 + 0.5) / samples as f64).collect(),
        };
        let dm = mass / fractions.len() as f64;
        for s in fractions {
            let point = |t: &Joints<f64>| {
                let a = node_position(&kin, prox, t);
                let b = node_position(&kin, dist, t);
                a + (b - a) * s
            };
            let cols: Vec<Vector3<f64>> = (0..DOF)
                .map(|k| {
                    let mut e = Joints::zeros();
                    e[k] = 1.0;
                    directional(point, theta, &e, h)
                })
                .collect();
            for i in 0..DOF {
                for j in 0..DOF {
                    m[(i, j)] += dm * cols[i].dot(&cols[j]);
                }
            }
        }
    }
    m
}

/// Generalised force `d/dt ∂T/∂q̇ − ∂T/∂q` from a kinetic-energy function,
/// evaluated by finite differences along `q(t) = q + q̇t + q̈t²/2`.
///
/// `T` must be quadratic in `q̇`, which makes the rate differences exact up
/// to rounding for any `h_rate`.
pub fn lagrangian_force(
    kinetic: impl Fn(&DVector<f64>, &DVector<f64>) -> f64,
    q: &DVector<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
    h_time: f64,
    h_rate: f64,
    h_pos: f64,
) -> DVector<f64> {
    let n = q.len();
    let momentum = |t: f64| {
        let qt = q + qd * t + qdd * (0.5 * t * t);
        let qdt = qd + qdd * t;
        central_gradient(|v| kinetic(&qt, v), &qdt, h_rate)
    };
    let dp_dt = (momentum(h_time) - momentum(-h_time)) / (2.0 * h_time);
    let dt_dq = central_gradient(|x| kinetic(x, qd), q, h_pos);
    debug_assert_eq!(dp_dt.len(), n);
    dp_dt - dt_dq
}

/// Relative error `|a − b| / max(|b|, floor)` (infinity norm).
pub fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.abs()).fold(floor, f64::max);
    diff / scale
}
