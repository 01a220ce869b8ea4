use nalgebra::{DMatrix, DVector, Matrix3xX, SMatrix, Vector3};

use super::lumped::{self, LumpedModel};
use super::DynamicsError;
use crate::kinematics::{ChainKinematics, ChainTable, CompiledBody};
use crate::model::{
    joint_axis, validate_profile, AnthropometricProfile, FrictionParameters, InteractionWrenches, JointState, DOF,
};
use crate::{Joints, Real};

/// Joint-space inertia matrix `M(θ)` at a configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassMatrix<T: Real> {
    pub theta: Joints<T>,
    pub matrix: SMatrix<T, DOF, DOF>,
}

impl<T: Real> MassMatrix<T> {
    /// Largest `|M − Mᵀ|` entry.
    pub fn asymmetry(&self) -> T {
        (self.matrix - self.matrix.transpose()).abs().max()
    }

    pub fn eigen_range(&self) -> (T, T) {
        lumped::eigen_range(&DMatrix::from_column_slice(DOF, DOF, self.matrix.as_slice()))
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigen_range().0 > T::zero()
    }
}

/// `(t, θ, ω)` of one simulated step.
pub type Sample<T> = (T, Joints<T>, Joints<T>);

/// Per-DOF torque split into its physical sources.
///
/// `total = inertial + coriolis + gravitational + friction − external − disturbance`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorqueBreakdown<T: Real> {
    pub inertial: Joints<T>,
    pub coriolis: Joints<T>,
    pub gravitational: Joints<T>,
    pub friction: Joints<T>,
    /// `J₁ᵀΓ₁ + J₂ᵀΓ₂`.
    pub external: Joints<T>,
    /// `λ_u`.
    pub disturbance: Joints<T>,
    pub total: Joints<T>,
}

impl<T: Real> TorqueBreakdown<T> {
    fn assemble(
        inertial: Joints<T>,
        coriolis: Joints<T>,
        gravitational: Joints<T>,
        friction: Joints<T>,
        external: Joints<T>,
        disturbance: Joints<T>,
    ) -> Self {
        let total = inertial + coriolis + gravitational + friction - external - disturbance;
        Self {
            inertial,
            coriolis,
            gravitational,
            friction,
            external,
            disturbance,
            total,
        }
    }

    /// Largest deviation from the sum identity, relative to the largest term.
    pub fn identity_residual(&self) -> T {
        let sum = self.inertial + self.coriolis + self.gravitational + self.friction
            - self.external
            - self.disturbance;
        let scale = [
            self.inertial,
            self.coriolis,
            self.gravitational,
            self.friction,
            self.external,
            self.disturbance,
            self.total,
        ]
        .iter()
        .map(|v| v.amax())
        .fold(T::one(), |a, b| a.max(b));
        (self.total - sum).amax() / scale
    }
}

/// Joint plus skin friction, `τ_f = b ω + c tanh(ω/ε) + s ω`.
pub fn friction_torque<T: Real>(omega: &Joints<T>, fp: &FrictionParameters<T>) -> Joints<T> {
    Joints::from_fn(|k, _| {
        let w = omega[k];
        let joint = fp.viscous_joint[k] * w + fp.coulomb_joint[k] * (w / fp.smoothing_eps).tanh();
        let skin = fp.viscous_skin[k] * w;
        joint + skin
    })
}

/// The modular chain with a validated profile, ready for dynamics.
#[derive(Clone, Debug)]
pub struct ModularChain<T: Real> {
    profile: AnthropometricProfile<T>,
    table: ChainTable,
    kin: ChainKinematics<T>,
    bodies: Vec<CompiledBody<T>>,
}

fn dv<T: Real>(j: &Joints<T>) -> DVector<T> {
    DVector::from_column_slice(j.as_slice())
}

fn sv<T: Real>(d: &DVector<T>) -> Joints<T> {
    Joints::from_column_slice(d.as_slice())
}

fn sm<T: Real>(d: &DMatrix<T>) -> SMatrix<T, DOF, DOF> {
    SMatrix::from_column_slice(d.as_slice())
}

impl<T: Real> ModularChain<T> {
    pub fn new(profile: AnthropometricProfile<T>) -> Result<Self, DynamicsError> {
        Self::with_table(profile, ChainTable::canonical().clone())
    }

    /// Uses a (possibly ledger-modified) chain table.
    pub fn with_table(profile: AnthropometricProfile<T>, table: ChainTable) -> Result<Self, DynamicsError> {
        let profile = validate_profile(profile).map_err(DynamicsError::IllPosed)?;
        let kin = ChainKinematics::with_table(&table, &profile.lengths);
        let bodies = kin.bodies(&table, &profile.inertia);
        Ok(Self {
            profile,
            table,
            kin,
            bodies,
        })
    }

    pub fn profile(&self) -> &AnthropometricProfile<T> {
        &self.profile
    }

    pub fn kinematics(&self) -> &ChainKinematics<T> {
        &self.kin
    }

    pub fn table(&self) -> &ChainTable {
        &self.table
    }

    pub fn mass_matrix(&self, theta: &Joints<T>) -> MassMatrix<T> {
        MassMatrix {
            theta: *theta,
            matrix: sm(&lumped::mass_matrix(self, &dv(theta))),
        }
    }

    /// Analytic `∂M/∂θ_k`, `k = 1..7` at index `k-1`.
    pub fn mass_matrix_partials(&self, theta: &Joints<T>) -> Vec<SMatrix<T, DOF, DOF>> {
        lumped::mass_matrix_partials(self, &dv(theta)).iter().map(sm).collect()
    }

    /// Christoffel matrix `C(θ, ω)`, with `V = C ω`.
    pub fn christoffel(&self, theta: &Joints<T>, omega: &Joints<T>) -> SMatrix<T, DOF, DOF> {
        sm(&lumped::christoffel_matrix(self, &dv(theta), &dv(omega)))
    }

    pub fn coriolis_vector(&self, theta: &Joints<T>, omega: &Joints<T>) -> Joints<T> {
        sv(&lumped::coriolis(self, &dv(theta), &dv(omega)))
    }

    pub fn gravity_vector(&self, theta: &Joints<T>) -> Joints<T> {
        sv(&lumped::gravity_torque(self, &dv(theta)))
    }

    pub fn potential_energy(&self, theta: &Joints<T>) -> T {
        lumped::potential_energy(self, &dv(theta))
    }

    pub fn kinetic_energy(&self, theta: &Joints<T>, omega: &Joints<T>) -> T {
        lumped::kinetic_energy(self, &dv(theta), &dv(omega))
    }

    /// Kinetic energy from link velocities: `Σ ½ m |v_c|² + ½ I |ω_link|²`,
    /// where `ω_link` is the spinning DOF's rate about its joint axis.
    pub fn kinetic_energy_from_links(&self, theta: &Joints<T>, omega: &Joints<T>) -> T {
        let half = T::lit(0.5);
        self.bodies.iter().fold(T::zero(), |e, b| {
            let v = b.com.jacobian(theta) * omega;
            let spin = b
                .spin_dof
                .map(|k| {
                    let w: Vector3<T> = joint_axis::<T>(k + 1).expect("dof in range") * omega[k];
                    half * b.rotary_inertia * w.norm_squared()
                })
                .unwrap_or_else(T::zero);
            e + half * b.mass * v.norm_squared() + spin
        })
    }

    /// `J₁ᵀΓ₁ + J₂ᵀΓ₂` for the cuff forces.
    pub fn external_torque(&self, theta: &Joints<T>, w: &InteractionWrenches<T>) -> Joints<T> {
        self.kin.jacobian(w.gamma1_point, theta).transpose() * w.gamma1
            + self.kin.jacobian(w.gamma2_point, theta).transpose() * w.gamma2
    }

    pub fn inverse_dynamics(
        &self,
        state: &JointState<T>,
        fp: &FrictionParameters<T>,
        wrenches: &InteractionWrenches<T>,
    ) -> TorqueBreakdown<T> {
        let q = dv(&state.theta);
        let m = sm(&lumped::mass_matrix(self, &q));
        TorqueBreakdown::assemble(
            m * state.alpha,
            self.coriolis_vector(&state.theta, &state.omega),
            sv(&lumped::gravity_torque(self, &q)),
            friction_torque(&state.omega, fp),
            self.external_torque(&state.theta, wrenches),
            wrenches.lambda_u,
        )
    }

    /// `θ̈ = M⁻¹(τ − V − τ_g − τ_f + λ_u + J₁ᵀΓ₁ + J₂ᵀΓ₂)`.
    pub fn joint_accelerations(
        &self,
        theta: &Joints<T>,
        omega: &Joints<T>,
        tau: &Joints<T>,
        fp: &FrictionParameters<T>,
        wrenches: &InteractionWrenches<T>,
    ) -> Result<Joints<T>, DynamicsError> {
        let force = tau - friction_torque(omega, fp) + wrenches.lambda_u + self.external_torque(theta, wrenches);
        lumped::accelerations(self, &dv(theta), &dv(omega), &dv(&force)).map(|a| sv(&a))
    }

    /// One RK4 step with the applied torque held constant.
    pub fn forward_dynamics_step(
        &self,
        theta: &Joints<T>,
        omega: &Joints<T>,
        tau: &Joints<T>,
        fp: &FrictionParameters<T>,
        wrenches: &InteractionWrenches<T>,
        dt: T,
    ) -> Result<(Joints<T>, Joints<T>), DynamicsError> {
        self.step_with(T::zero(), theta, omega, dt, |_| *tau, fp, wrenches)
    }

    #[allow(clippy::too_many_arguments)]
    fn step_with(
        &self,
        t: T,
        theta: &Joints<T>,
        omega: &Joints<T>,
        dt: T,
        torque: impl Fn(T) -> Joints<T>,
        fp: &FrictionParameters<T>,
        wrenches: &InteractionWrenches<T>,
    ) -> Result<(Joints<T>, Joints<T>), DynamicsError> {
        let (q, v) = lumped::rk4_step(t, &dv(theta), &dv(omega), dt, |t, q, v| {
            self.joint_accelerations(&sv(q), &sv(v), &torque(t), fp, wrenches).map(|a| dv(&a))
        })?;
        Ok((sv(&q), sv(&v)))
    }

    /// Integrates `steps` RK4 steps from `t0` under a time-varying torque.
    /// Returns `steps + 1` states including the initial one.
    #[allow(clippy::too_many_arguments)]
    pub fn simulate(
        &self,
        theta0: &Joints<T>,
        omega0: &Joints<T>,
        t0: T,
        dt: T,
        steps: usize,
        torque: impl Fn(T) -> Joints<T>,
        fp: &FrictionParameters<T>,
        wrenches: &InteractionWrenches<T>,
    ) -> Result<Vec<Sample<T>>, DynamicsError> {
        let mut out = Vec::with_capacity(steps + 1);
        let (mut th, mut w) = (*theta0, *omega0);
        out.push((t0, th, w));
        for i in 0..steps {
            let t = t0 + dt * T::lit(i as f64);
            (th, w) = self.step_with(t, &th, &w, dt, &torque, fp, wrenches)?;
            out.push((t0 + dt * T::lit((i + 1) as f64), th, w));
        }
        Ok(out)
    }
}

impl<T: Real> LumpedModel<T> for ModularChain<T> {
    fn dof(&self) -> usize {
        DOF
    }

    fn body_count(&self) -> usize {
        self.bodies.len()
    }

    fn gravity(&self) -> Vector3<T> {
        self.profile.gravity
    }

    fn body_mass(&self, body: usize) -> T {
        self.bodies[body].mass
    }

    fn body_spin(&self, body: usize) -> Option<(T, DVector<T>)> {
        let b = &self.bodies[body];
        let k = b.spin_dof?;
        if b.rotary_inertia == T::zero() {
            return None;
        }
        let mut s = DVector::zeros(DOF);
        s[k] = T::one();
        Some((b.rotary_inertia, s))
    }

    fn com_position(&self, body: usize, q: &DVector<T>) -> Vector3<T> {
        self.bodies[body].com.position(&sv(q))
    }

    fn com_jacobian(&self, body: usize, q: &DVector<T>) -> Matrix3xX<T> {
        let j = self.bodies[body].com.jacobian(&sv(q));
        Matrix3xX::from_column_slice(j.as_slice())
    }

    fn com_jacobian_partial(&self, body: usize, q: &DVector<T>, k: usize) -> Matrix3xX<T> {
        let h = self.bodies[body].com.curvature(&sv(q));
        let mut out = Matrix3xX::zeros(DOF);
        out.set_column(k, &h.column(k));
        out
    }
}
