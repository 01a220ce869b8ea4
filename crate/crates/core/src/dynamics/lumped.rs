//! Joint-space dynamics of any chain described as a set of lumped bodies.
//!
//! A body has a mass at a centre of mass `p_c(q)` and, optionally, a
//! rotary inertia `I` about an axis perpendicular to it, spinning at rate
//! `sᵀq̇` for a constant weight vector `s`. Then
//!
//! `M(q) = Σ m J_cᵀ J_c + Σ I s sᵀ`
//!
//! and the Coriolis term follows from the Christoffel symbols of `M`.

use nalgebra::{DMatrix, DVector, Matrix3xX, SymmetricEigen, Vector3};

use super::DynamicsError;
use crate::Real;

/// Condition number above which the mass matrix is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// A chain of lumped bodies driven by `dof()` generalised coordinates.
pub trait LumpedModel<T: Real> {
    fn dof(&self) -> usize;
    fn body_count(&self) -> usize;
    /// Gravitational acceleration in the base frame.
    fn gravity(&self) -> Vector3<T>;
    fn body_mass(&self, body: usize) -> T;
    /// Rotary inertia and spin weights `s` of a body, if it rotates.
    fn body_spin(&self, body: usize) -> Option<(T, DVector<T>)>;
    fn com_position(&self, body: usize, q: &DVector<T>) -> Vector3<T>;
    /// `∂p_c/∂q`, 3 × dof.
    fn com_jacobian(&self, body: usize, q: &DVector<T>) -> Matrix3xX<T>;
    /// `∂J_c/∂q_k`, 3 × dof.
    fn com_jacobian_partial(&self, body: usize, q: &DVector<T>, k: usize) -> Matrix3xX<T>;
}

pub fn mass_matrix<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>) -> DMatrix<T> {
    let n = model.dof();
    let mut m = DMatrix::zeros(n, n);
    for b in 0..model.body_count() {
        let mass = model.body_mass(b);
        if mass == T::zero() {
            continue;
        }
        let j = model.com_jacobian(b, q);
        m += (j.transpose() * &j) * mass;
        if let Some((inertia, s)) = model.body_spin(b) {
            m += (&s * s.transpose()) * inertia;
        }
    }
    m
}

/// Analytic `∂M/∂q_k` for every `k`.
pub fn mass_matrix_partials<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>) -> Vec<DMatrix<T>> {
    let n = model.dof();
    let mut out = vec![DMatrix::zeros(n, n); n];
    for b in 0..model.body_count() {
        let mass = model.body_mass(b);
        if mass == T::zero() {
            continue;
        }
        let j = model.com_jacobian(b, q);
        for (k, dm) in out.iter_mut().enumerate() {
            let dj = model.com_jacobian_partial(b, q, k);
            let cross = dj.transpose() * &j;
            *dm += (&cross + cross.transpose()) * mass;
        }
    }
    out
}

/// `∂M/∂q_k` by central differences of [`mass_matrix`].
pub fn mass_matrix_partials_fd<T: Real, M: LumpedModel<T> + ?Sized>(
    model: &M,
    q: &DVector<T>,
    h: T,
) -> Vec<DMatrix<T>> {
    (0..model.dof())
        .map(|k| {
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[k] += h;
            qm[k] -= h;
            (mass_matrix(model, &qp) - mass_matrix(model, &qm)) / (h + h)
        })
        .collect()
}

/// Christoffel matrix `C(q, q̇)` with `C_ij = Σ_k Γ_ijk q̇_k` and
/// `Γ_ijk = ½(∂_k M_ij + ∂_j M_ik − ∂_i M_jk)`, from precomputed partials.
pub fn christoffel_from_partials<T: Real>(partials: &[DMatrix<T>], qd: &DVector<T>) -> DMatrix<T> {
    let n = qd.len();
    let half = T::lit(0.5);
    DMatrix::from_fn(n, n, |i, j| {
        let mut c = T::zero();
        for k in 0..n {
            let g = partials[k][(i, j)] + partials[j][(i, k)] - partials[i][(j, k)];
            c += half * g * qd[k];
        }
        c
    })
}

pub fn christoffel_matrix<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>, qd: &DVector<T>) -> DMatrix<T> {
    christoffel_from_partials(&mass_matrix_partials(model, q), qd)
}

/// Centrifugal and Coriolis torques `C(q, q̇) q̇`.
pub fn coriolis<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>, qd: &DVector<T>) -> DVector<T> {
    christoffel_matrix(model, q, qd) * qd
}

/// `Σ m J_cᵀ (J̇_c q̇)`: the same vector as [`coriolis`] reached through the
/// bodies' velocity-product accelerations instead of `∂M/∂q`.
pub fn coriolis_from_body_accelerations<T: Real, M: LumpedModel<T> + ?Sized>(
    model: &M,
    q: &DVector<T>,
    qd: &DVector<T>,
) -> DVector<T> {
    let n = model.dof();
    let mut v = DVector::zeros(n);
    for b in 0..model.body_count() {
        let mass = model.body_mass(b);
        if mass == T::zero() {
            continue;
        }
        let j = model.com_jacobian(b, q);
        let mut bias = Vector3::zeros();
        for k in 0..n {
            bias += model.com_jacobian_partial(b, q, k) * qd * qd[k];
        }
        v += j.transpose() * bias * mass;
    }
    v
}

/// `τ_g = ∂U/∂q = −Σ m J_cᵀ g`.
pub fn gravity_torque<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>) -> DVector<T> {
    let g = model.gravity();
    let mut tau = DVector::zeros(model.dof());
    for b in 0..model.body_count() {
        let mass = model.body_mass(b);
        if mass == T::zero() {
            continue;
        }
        tau -= model.com_jacobian(b, q).transpose() * g * mass;
    }
    tau
}

/// `U = −Σ m g·p_c`.
pub fn potential_energy<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>) -> T {
    let g = model.gravity();
    (0..model.body_count()).fold(T::zero(), |u, b| u - g.dot(&model.com_position(b, q)) * model.body_mass(b))
}

/// `T = ½ q̇ᵀ M q̇`.
pub fn kinetic_energy<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>, qd: &DVector<T>) -> T {
    (qd.transpose() * mass_matrix(model, q) * qd)[(0, 0)] * T::lit(0.5)
}

/// Kinetic energy summed body by body, `Σ ½ m |v_c|² + ½ I (sᵀq̇)²`.
pub fn kinetic_energy_by_body<T: Real, M: LumpedModel<T> + ?Sized>(model: &M, q: &DVector<T>, qd: &DVector<T>) -> T {
    let half = T::lit(0.5);
    (0..model.body_count()).fold(T::zero(), |e, b| {
        let v = model.com_jacobian(b, q) * qd;
        let spin = model
            .body_spin(b)
            .map(|(i, s)| {
                let w = s.dot(qd);
                half * i * w * w
            })
            .unwrap_or_else(T::zero);
        e + half * model.body_mass(b) * v.norm_squared() + spin
    })
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn eigen_range<T: Real>(m: &DMatrix<T>) -> (T, T) {
    let eig = SymmetricEigen::new(m.clone());
    let first = eig.eigenvalues[0];
    eig.eigenvalues
        .iter()
        .fold((first, first), |(lo, hi), &e| (lo.min(e), hi.max(e)))
}

/// Solves `M a = f` after checking that `M` is well conditioned.
pub fn solve_mass<T: Real>(m: &DMatrix<T>, f: &DVector<T>) -> Result<DVector<T>, DynamicsError> {
    // DOFs that move no mass at all carry an identically zero row and column.
    // They are left at rest as long as nothing pushes on them.
    let n = m.nrows();
    let active: Vec<usize> = (0..n).filter(|&i| m.row(i).iter().any(|v| *v != T::zero())).collect();
    if active.len() < n {
        if (0..n).any(|i| !active.contains(&i) && f[i] != T::zero()) {
            return Err(DynamicsError::SingularMass { condition: f64::INFINITY });
        }
        if active.is_empty() {
            return Err(DynamicsError::SingularMass { condition: f64::INFINITY });
        }
        let sub = m.select_rows(&active).select_columns(&active);
        let rhs = f.select_rows(&active);
        let x = solve_mass(&sub, &rhs)?;
        let mut out = DVector::zeros(n);
        for (k, &i) in active.iter().enumerate() {
            out[i] = x[k];
        }
        return Ok(out);
    }
    let (lo, hi) = eigen_range(m);
    let condition = if lo > T::zero() { (hi / lo).as_f64() } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(DynamicsError::SingularMass { condition });
    }
    m.clone()
        .cholesky()
        .map(|c| c.solve(f))
        .ok_or(DynamicsError::SingularMass { condition })
}

/// Joint accelerations `M⁻¹(f − C q̇ − τ_g)` for a generalised force `f`.
pub fn accelerations<T: Real, M: LumpedModel<T> + ?Sized>(
    model: &M,
    q: &DVector<T>,
    qd: &DVector<T>,
    force: &DVector<T>,
) -> Result<DVector<T>, DynamicsError> {
    let rhs = force - coriolis(model, q, qd) - gravity_torque(model, q);
    solve_mass(&mass_matrix(model, q), &rhs)
}

/// One classical RK4 step of `q̈ = accel(t, q, q̇)`.
pub fn rk4_step<T: Real>(
    t: T,
    q: &DVector<T>,
    qd: &DVector<T>,
    dt: T,
    mut accel: impl FnMut(T, &DVector<T>, &DVector<T>) -> Result<DVector<T>, DynamicsError>,
) -> Result<(DVector<T>, DVector<T>), DynamicsError> {
    if !(dt > T::zero()) {
        return Err(DynamicsError::BadTimeStep(dt.as_f64()));
    }
    let half = dt * T::lit(0.5);
    let sixth = dt / T::lit(6.0);
    let two = T::lit(2.0);

    let k1q = qd.clone();
    let k1v = accel(t, q, qd)?;
    let q2 = q + &k1q * half;
    let v2 = qd + &k1v * half;
    let k2q = v2.clone();
    let k2v = accel(t + half, &q2, &v2)?;
    let q3 = q + &k2q * half;
    let v3 = qd + &k2v * half;
    let k3q = v3.clone();
    let k3v = accel(t + half, &q3, &v3)?;
    let q4 = q + &k3q * dt;
    let v4 = qd + &k3v * dt;
    let k4v = accel(t + dt, &q4, &v4)?;
    let k4q = v4;

    let q_next = q + (k1q + k2q * two + k3q * two + k4q) * sixth;
    let v_next = qd + (k1v + k2v * two + k3v * two + k4v) * sixth;
    Ok((q_next, v_next))
}
