//! RRP SCARA arm used as an independent reference chain.
//!
//! Two horizontal links of length `d1`, `d2` turn about vertical axes and a
//! carriage slides along `z`. The tool sits at
//!
//! ```text
//! X = d2 cos(θ1 + θ2) + d1 cos θ1
//! Y = d2 sin(θ1 + θ2) + d1 sin θ1
//! Z = P
//! ```
//!
//! Dynamics go through [`LumpedModel`]: each link is a uniform rod, the
//! carriage a point mass at the tool.

use nalgebra::{DVector, Matrix3, Matrix3xX, Vector3};
use thiserror::Error;

use crate::dynamics::lumped::{self, LumpedModel};
use crate::dynamics::DynamicsError;
use crate::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaraError {
    #[error("link length {name} must be positive, got {value}")]
    NonPositiveLength { name: &'static str, value: f64 },
    #[error("mass {name} must be non-negative, got {value}")]
    NegativeMass { name: &'static str, value: f64 },
    #[error("stroke limit must be positive, got {0}")]
    BadStroke(f64),
    #[error("prismatic extension {p} outside [0, {p_max}]")]
    StrokeExceeded { p: f64, p_max: f64 },
    #[error("non-finite state component {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Joint coordinates `(θ1, θ2, P)` with their rates and accelerations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaraState<T: Real> {
    pub q: Vector3<T>,
    pub qd: Vector3<T>,
    pub qdd: Vector3<T>,
}

impl<T: Real> ScaraState<T> {
    pub fn at_rest(theta1: T, theta2: T, p: T) -> Self {
        Self { q: Vector3::new(theta1, theta2, p), qd: Vector3::zeros(), qdd: Vector3::zeros() }
    }

    pub fn theta1(&self) -> T {
        self.q[0]
    }

    pub fn theta2(&self) -> T {
        self.q[1]
    }

    pub fn p(&self) -> T {
        self.q[2]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaraArm<T: Real> {
    pub d1: T,
    pub d2: T,
    /// Rod masses of link 1 and link 2, then the carriage.
    pub m1: T,
    pub m2: T,
    pub m3: T,
    pub p_max: T,
    pub gravity: Vector3<T>,
}

impl<T: Real> Default for ScaraArm<T> {
    fn default() -> Self {
        Self {
            d1: T::lit(0.3),
            d2: T::lit(0.3),
            m1: T::lit(1.0),
            m2: T::lit(0.8),
            m3: T::lit(0.5),
            p_max: T::lit(0.5),
            gravity: Vector3::new(T::zero(), T::zero(), T::lit(-9.81)),
        }
    }
}

pub fn scara_fk<T: Real>(q: &Vector3<T>, d1: T, d2: T) -> Vector3<T> {
    let (s1, c1) = q[0].sin_cos();
    let (s12, c12) = (q[0] + q[1]).sin_cos();
    Vector3::new(d2 * c12 + d1 * c1, d2 * s12 + d1 * s1, q[2])
}

pub fn scara_jacobian<T: Real>(q: &Vector3<T>, d1: T, d2: T) -> Matrix3<T> {
    let (s1, c1) = q[0].sin_cos();
    let (s12, c12) = (q[0] + q[1]).sin_cos();
    let (o, l) = (T::zero(), T::one());
    Matrix3::new(
        -d2 * s12 - d1 * s1, -d2 * s12, o,
        d2 * c12 + d1 * c1, d2 * c12, o,
        o, o, l,
    )
}

impl<T: Real> ScaraArm<T> {
    pub fn validate(&self) -> Result<(), ScaraError> {
        for (name, v) in [("d1", self.d1), ("d2", self.d2)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(ScaraError::NonPositiveLength { name, value: v.as_f64() });
            }
        }
        for (name, v) in [("m1", self.m1), ("m2", self.m2), ("m3", self.m3)] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(ScaraError::NegativeMass { name, value: v.as_f64() });
            }
        }
        if !(self.p_max > T::zero()) {
            return Err(ScaraError::BadStroke(self.p_max.as_f64()));
        }
        if !self.gravity.iter().all(|g| g.is_finite()) {
            return Err(ScaraError::NonFinite("gravity"));
        }
        Ok(())
    }

    pub fn check_state(&self, s: &ScaraState<T>) -> Result<(), ScaraError> {
        let names = ["theta1", "theta2", "p"];
        for v in [&s.q, &s.qd, &s.qdd] {
            if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                return Err(ScaraError::NonFinite(names[i]));
            }
        }
        if s.p() < T::zero() || s.p() > self.p_max {
            return Err(ScaraError::StrokeExceeded { p: s.p().as_f64(), p_max: self.p_max.as_f64() });
        }
        Ok(())
    }

    pub fn fk(&self, s: &ScaraState<T>) -> Vector3<T> {
        scara_fk(&s.q, self.d1, self.d2)
    }

    pub fn jacobian(&self, s: &ScaraState<T>) -> Matrix3<T> {
        scara_jacobian(&s.q, self.d1, self.d2)
    }

    fn dyn_vec(v: &Vector3<T>) -> DVector<T> {
        DVector::from_column_slice(v.as_slice())
    }

    pub fn mass_matrix(&self, q: &Vector3<T>) -> Matrix3<T> {
        let m = lumped::mass_matrix(self, &Self::dyn_vec(q));
        Matrix3::from_iterator(m.iter().copied())
    }

    pub fn coriolis_vector(&self, q: &Vector3<T>, qd: &Vector3<T>) -> Vector3<T> {
        let c = lumped::coriolis(self, &Self::dyn_vec(q), &Self::dyn_vec(qd));
        Vector3::from_column_slice(c.as_slice())
    }

    pub fn christoffel(&self, q: &Vector3<T>, qd: &Vector3<T>) -> Matrix3<T> {
        let c = lumped::christoffel_matrix(self, &Self::dyn_vec(q), &Self::dyn_vec(qd));
        Matrix3::from_iterator(c.iter().copied())
    }

    pub fn mass_matrix_rate(&self, q: &Vector3<T>, qd: &Vector3<T>) -> Matrix3<T> {
        let parts = lumped::mass_matrix_partials(self, &Self::dyn_vec(q));
        parts
            .iter()
            .zip(qd.iter())
            .fold(Matrix3::zeros(), |acc, (p, &w)| acc + Matrix3::from_iterator(p.iter().copied()) * w)
    }

    pub fn gravity_vector(&self, q: &Vector3<T>) -> Vector3<T> {
        let g = lumped::gravity_torque(self, &Self::dyn_vec(q));
        Vector3::from_column_slice(g.as_slice())
    }

    pub fn kinetic_energy(&self, q: &Vector3<T>, qd: &Vector3<T>) -> T {
        lumped::kinetic_energy(self, &Self::dyn_vec(q), &Self::dyn_vec(qd))
    }

    pub fn potential_energy(&self, q: &Vector3<T>) -> T {
        lumped::potential_energy(self, &Self::dyn_vec(q))
    }

    /// `τ = H q̈ + C q̇ + τ_g + Jᵀ f_ext`.
    pub fn inverse_dynamics(&self, s: &ScaraState<T>, f_ext: &Vector3<T>) -> Result<Vector3<T>, ScaraError> {
        self.validate()?;
        self.check_state(s)?;
        Ok(self.mass_matrix(&s.q) * s.qdd
            + self.coriolis_vector(&s.q, &s.qd)
            + self.gravity_vector(&s.q)
            + self.jacobian(s).transpose() * f_ext)
    }

    pub fn forward_dynamics(&self, s: &ScaraState<T>, tau: &Vector3<T>, f_ext: &Vector3<T>) -> Result<Vector3<T>, ScaraError> {
        let q = Self::dyn_vec(&s.q);
        let force = Self::dyn_vec(&(tau - self.jacobian(s).transpose() * f_ext));
        let a = lumped::accelerations(self, &q, &Self::dyn_vec(&s.qd), &force)?;
        Ok(Vector3::from_column_slice(a.as_slice()))
    }

    /// RK4 step under constant joint effort and no external load.
    pub fn step(&self, q: &Vector3<T>, qd: &Vector3<T>, tau: &Vector3<T>, dt: T) -> Result<(Vector3<T>, Vector3<T>), ScaraError> {
        let force = Self::dyn_vec(tau);
        let (qn, vn) = lumped::rk4_step(T::zero(), &Self::dyn_vec(q), &Self::dyn_vec(qd), dt, |_, q, v| {
            lumped::accelerations(self, q, v, &force)
        })?;
        Ok((Vector3::from_column_slice(qn.as_slice()), Vector3::from_column_slice(vn.as_slice())))
    }
}

pub fn scara_inverse_dynamics<T: Real>(arm: &ScaraArm<T>, s: &ScaraState<T>, f_ext: &Vector3<T>) -> Result<Vector3<T>, ScaraError> {
    arm.inverse_dynamics(s, f_ext)
}

impl<T: Real> LumpedModel<T> for ScaraArm<T> {
    fn dof(&self) -> usize {
        3
    }

    fn body_count(&self) -> usize {
        3
    }

    fn gravity(&self) -> Vector3<T> {
        self.gravity
    }

    fn body_mass(&self, body: usize) -> T {
        [self.m1, self.m2, self.m3][body]
    }

    fn body_spin(&self, body: usize) -> Option<(T, DVector<T>)> {
        let twelfth = T::lit(1.0 / 12.0);
        let (o, l) = (T::zero(), T::one());
        match body {
            0 => Some((self.m1 * self.d1 * self.d1 * twelfth, DVector::from_column_slice(&[l, o, o]))),
            1 => Some((self.m2 * self.d2 * self.d2 * twelfth, DVector::from_column_slice(&[l, l, o]))),
            _ => None,
        }
    }

    fn com_position(&self, body: usize, q: &DVector<T>) -> Vector3<T> {
        let half = T::lit(0.5);
        let (s1, c1) = q[0].sin_cos();
        let (s12, c12) = (q[0] + q[1]).sin_cos();
        match body {
            0 => Vector3::new(self.d1 * half * c1, self.d1 * half * s1, T::zero()),
            1 => Vector3::new(
                self.d1 * c1 + self.d2 * half * c12,
                self.d1 * s1 + self.d2 * half * s12,
                T::zero(),
            ),
            _ => scara_fk(&Vector3::new(q[0], q[1], q[2]), self.d1, self.d2),
        }
    }

    fn com_jacobian(&self, body: usize, q: &DVector<T>) -> Matrix3xX<T> {
        let (a, b) = self.reach(body);
        let (s1, c1) = q[0].sin_cos();
        let (s12, c12) = (q[0] + q[1]).sin_cos();
        let o = T::zero();
        let mut j = Matrix3xX::zeros(3);
        j[(0, 0)] = -a * s1 - b * s12;
        j[(1, 0)] = a * c1 + b * c12;
        j[(0, 1)] = -b * s12;
        j[(1, 1)] = b * c12;
        j[(2, 2)] = if body == 2 { T::one() } else { o };
        j
    }

    fn com_jacobian_partial(&self, body: usize, q: &DVector<T>, k: usize) -> Matrix3xX<T> {
        let (a, b) = self.reach(body);
        let (s1, c1) = q[0].sin_cos();
        let (s12, c12) = (q[0] + q[1]).sin_cos();
        let mut j = Matrix3xX::zeros(3);
        match k {
            0 => {
                j[(0, 0)] = -a * c1 - b * c12;
                j[(1, 0)] = -a * s1 - b * s12;
                j[(0, 1)] = -b * c12;
                j[(1, 1)] = -b * s12;
            }
            1 => {
                j[(0, 0)] = -b * c12;
                j[(1, 0)] = -b * s12;
                j[(0, 1)] = -b * c12;
                j[(1, 1)] = -b * s12;
            }
            _ => {}
        }
        j
    }
}

impl<T: Real> ScaraArm<T> {
    /// Lever lengths of a body's centre along link 1 and link 2.
    fn reach(&self, body: usize) -> (T, T) {
        let half = T::lit(0.5);
        match body {
            0 => (self.d1 * half, T::zero()),
            1 => (self.d1, self.d2 * half),
            _ => (self.d1, self.d2),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraspError {
    #[error("object mass must be non-negative, got {0}")]
    NegativeMass(f64),
    #[error("object weight must be non-negative, got {0}")]
    NegativeWeight(f64),
    #[error("friction range must satisfy 0 < mu_min <= mu_max, got [{mu_min}, {mu_max}]")]
    BadFriction { mu_min: f64, mu_max: f64 },
    #[error("vertical acceleration must be zero (z is held in equilibrium), got {0}")]
    ConstraintViolated(f64),
    #[error("jaw {jaw} would have to pull ({value} N)")]
    NegativeNormal { jaw: &'static str, value: f64 },
    #[error("{0}")]
    Infeasible(String),
}

/// Forces on a jaw-held object: normals of each jaw and the friction
/// components carried by each of the two contact surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspLoad<T: Real> {
    pub m: T,
    pub w: T,
    pub n_l: T,
    pub n_r: T,
    pub f_y: T,
    pub f_z: T,
}

impl<T: Real> GraspLoad<T> {
    /// `(mẍ − (N_L − N_R), mÿ − 2F_y, 2F_z − w)` for the given acceleration.
    pub fn residual(&self, accel: &Vector3<T>) -> Vector3<T> {
        let two = T::lit(2.0);
        Vector3::new(
            self.m * accel[0] - (self.n_l - self.n_r),
            self.m * accel[1] - two * self.f_y,
            two * self.f_z - self.w,
        )
    }

    /// Friction magnitude each surface has to carry.
    pub fn surface_friction(&self) -> T {
        (self.f_y * self.f_y + self.f_z * self.f_z).sqrt()
    }
}

/// What the grasp has to satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspSpec<T: Real> {
    pub mass: T,
    /// Defaults to `mass · 9.81` when absent.
    pub weight: Option<T>,
    /// Worst-case and best-case friction coefficient of the jaw pads.
    pub mu: Option<(T, T)>,
    /// Largest normal force either jaw can apply.
    pub normal_cap: Option<T>,
    /// Fix the right jaw's normal instead of minimising it.
    pub right_normal: Option<T>,
}

impl<T: Real> GraspSpec<T> {
    pub fn new(mass: T) -> Self {
        Self { mass, weight: None, mu: None, normal_cap: None, right_normal: None }
    }
}

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Smallest squeeze that holds the object at `target_accel` (z must be 0).
pub fn grasp_statics<T: Real>(spec: &GraspSpec<T>, target_accel: &Vector3<T>) -> Result<GraspLoad<T>, GraspError> {
    let m = spec.mass;
    if !(m >= T::zero()) {
        return Err(GraspError::NegativeMass(m.as_f64()));
    }
    let w = spec.weight.unwrap_or(m * T::lit(STANDARD_GRAVITY));
    if !(w >= T::zero()) {
        return Err(GraspError::NegativeWeight(w.as_f64()));
    }
    if target_accel[2] != T::zero() {
        return Err(GraspError::ConstraintViolated(target_accel[2].as_f64()));
    }
    if let Some((lo, hi)) = spec.mu {
        if !(lo > T::zero() && hi >= lo) {
            return Err(GraspError::BadFriction { mu_min: lo.as_f64(), mu_max: hi.as_f64() });
        }
    }

    let half = T::lit(0.5);
    let f_y = m * target_accel[1] * half;
    let f_z = w * half;
    let push = m * target_accel[0];
    let friction = (f_y * f_y + f_z * f_z).sqrt();
    let n_min = match spec.mu {
        Some((lo, _)) => friction / lo,
        None => T::zero(),
    };

    // The jaw pushing against the acceleration carries the extra m·ẍ.
    let (n_l, n_r) = match spec.right_normal {
        Some(n) => (n + push, n),
        None if push >= T::zero() => (n_min + push, n_min),
        None => (n_min, n_min - push),
    };
    for (jaw, value) in [("left", n_l), ("right", n_r)] {
        if value < T::zero() {
            return Err(GraspError::NegativeNormal { jaw, value: value.as_f64() });
        }
    }
    if let Some((lo, _)) = spec.mu {
        let weakest = n_l.min(n_r);
        if n_min > weakest {
            return Err(GraspError::Infeasible(format!(
                "surface friction {:.6} N exceeds mu_min * N = {:.6} N",
                friction.as_f64(),
                (lo * weakest).as_f64()
            )));
        }
    }
    if let Some(cap) = spec.normal_cap {
        let needed = n_l.max(n_r);
        if needed > cap {
            return Err(GraspError::Infeasible(format!(
                "required normal force {:.6} N exceeds cap {:.6} N",
                needed.as_f64(),
                cap.as_f64()
            )));
        }
    }
    Ok(GraspLoad { m, w, n_l, n_r, f_y, f_z })
}
