//! Self-verification suite: every analytic quantity against an independent
//! numerical reference, over seeded random states.

use nalgebra::{DVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{friction_torque, ModularChain};
use crate::model::{rest_posture, FrictionParameters, InteractionWrenches, JointPointId, JointState, DOF};
use crate::oracle::{self, rel_err};
use crate::scara::{grasp_statics, scara_fk, scara_jacobian, GraspSpec, ScaraArm, ScaraState};
use crate::trajectory::TrajectorySpec;
use crate::Joints;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Smallest reference magnitude used when forming relative errors.
const FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &str, samples: usize, max_error: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), samples, max_error, tolerance, passed: max_error <= tolerance }
    }

    fn exact(name: &str, samples: usize, ok: bool) -> Self {
        Self { name: name.to_string(), samples, max_error: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, passed: ok }
    }
}

/// Angles in (−π, π), rates and accelerations in (−5, 5).
pub fn random_state(rng: &mut impl Rng) -> JointState<f64> {
    let pi = std::f64::consts::PI;
    let mut draw = |lim: f64| Joints::from_fn(|_, _| rng.gen_range(-lim..lim));
    let theta = draw(pi);
    let omega = draw(5.0);
    let alpha = draw(5.0);
    JointState { theta, omega, alpha }
}

pub fn random_states(seed: u64, n: usize) -> Vec<JointState<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_state(&mut rng)).collect()
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub states: usize,
    pub dt: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, states: 100, dt: 1e-3 }
    }
}

fn fold_max(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

pub fn kinematic_checks(chain: &ModularChain<f64>, states: &[JointState<f64>]) -> Vec<CheckOutcome> {
    let kin = chain.kinematics();
    let l = |i| chain.profile().lengths.l(i);
    let n = states.len();
    let (mut vel, mut acc, mut jac, mut coh, mut rig) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut r_is_q = true;
    for s in states {
        for p in JointPointId::ALL {
            let v = kin.velocity(p, &s.theta, &s.omega);
            let v_fd = oracle::fd_velocity(kin, p, &s.theta, &s.omega, 1e-6);
            vel = fold_max([vel, rel_err(v.as_slice(), v_fd.as_slice(), FLOOR)].into_iter());

            let a = kin.acceleration(p, &s.theta, &s.omega, &s.alpha);
            let a_fd = oracle::fd_acceleration_in_time(kin, p, &s.theta, &s.omega, &s.alpha, 1e-6);
            acc = fold_max([acc, rel_err(a.as_slice(), a_fd.as_slice(), FLOOR)].into_iter());

            let j = kin.jacobian(p, &s.theta);
            for k in 0..DOF {
                let col = oracle::fd_jacobian_column(kin, p, &s.theta, k, 1e-6);
                jac = fold_max([jac, rel_err(j.column(k).as_slice(), col.as_slice(), FLOOR)].into_iter());
            }
            let jw = j * s.omega;
            coh = fold_max([coh, rel_err(v.as_slice(), jw.as_slice(), FLOOR)].into_iter());
        }
        let pos = |p| kin.position(p, &s.theta);
        use JointPointId::*;
        let offsets = [
            (pos(C) - pos(B) - Vector3::new(0.0, 0.0, l(3))).amax(),
            (pos(E) - pos(D) - Vector3::new(l(5), 0.0, 0.0)).amax(),
            (pos(P) - pos(N) - Vector3::new(0.0, l(11), 0.0)).amax(),
            (pos(T) - pos(S) - Vector3::new(-l(15), 0.0, 0.0)).amax(),
            ((pos(B) - Vector3::new(l(1), 0.0, 0.0)).norm() - l(2)).abs(),
            ((pos(D) - pos(C)).norm() - l(4)).abs(),
            ((pos(G) - pos(E)).norm() - (l(6) + l(7))).abs(),
            ((pos(M) - pos(G)).norm() - (l(8) + l(9))).abs(),
            ((pos(N) - pos(M)).norm() - l(10)).abs(),
            ((pos(Q) - pos(P)).norm() - l(12)).abs(),
            ((pos(S) - pos(R) - Vector3::new(0.0, 0.0, l(13))).norm() - l(14)).abs(),
        ];
        rig = fold_max(offsets.into_iter().chain([rig]));
        r_is_q &= pos(R) == pos(Q);
    }
    vec![
        CheckOutcome::new("velocity_vs_fd_position", n, vel, 1e-6),
        CheckOutcome::new("acceleration_vs_fd_velocity_in_time", n, acc, 1e-5),
        CheckOutcome::new("jacobian_vs_fd_columns", n, jac, 1e-6),
        CheckOutcome::new("velocity_equals_jacobian_times_rate", n, coh, 1e-12),
        CheckOutcome::new("rigid_link_invariants", n, rig, 1e-12),
        CheckOutcome::exact("r_coincides_with_q", n, r_is_q),
    ]
}

fn dv(j: &Joints<f64>) -> DVector<f64> {
    DVector::from_column_slice(j.as_slice())
}

fn jv(d: &DVector<f64>) -> Joints<f64> {
    Joints::from_column_slice(d.as_slice())
}

pub fn dynamics_checks(
    chain: &ModularChain<f64>,
    states: &[JointState<f64>],
    fp: &FrictionParameters<f64>,
    wrenches: &InteractionWrenches<f64>,
) -> Vec<CheckOutcome> {
    let n = states.len();
    let (mut sym, mut min_eig, mut pass, mut grav, mut ke, mut lag, mut idfd, mut ident) =
        (0.0f64, f64::INFINITY, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for s in states {
        let m = chain.mass_matrix(&s.theta);
        sym = sym.max(m.asymmetry());
        min_eig = min_eig.min(m.eigen_range().0);

        let partials = chain.mass_matrix_partials(&s.theta);
        let mdot = partials.iter().zip(s.omega.iter()).fold(m.matrix * 0.0, |acc, (p, w)| acc + p * *w);
        let c = chain.christoffel(&s.theta, &s.omega);
        let r = (s.omega.transpose() * (mdot - c * 2.0) * s.omega)[(0, 0)];
        pass = pass.max(r.abs() / s.omega.norm_squared().max(f64::MIN_POSITIVE));

        let u_grad = oracle::central_gradient(|x| chain.potential_energy(&jv(x)), &dv(&s.theta), 1e-6);
        grav = grav.max(rel_err(chain.gravity_vector(&s.theta).as_slice(), u_grad.as_slice(), FLOOR));

        let t1 = chain.kinetic_energy(&s.theta, &s.omega);
        let t2 = chain.kinetic_energy_from_links(&s.theta, &s.omega);
        ke = ke.max((t1 - t2).abs() / t2.abs().max(FLOOR));

        let tb = chain.inverse_dynamics(s, fp, wrenches);
        ident = ident.max(tb.identity_residual());
        let lf = oracle::lagrangian_force(
            |q, v| chain.kinetic_energy(&jv(q), &jv(v)),
            &dv(&s.theta),
            &dv(&s.omega),
            &dv(&s.alpha),
            1e-4,
            1e-3,
            1e-6,
        );
        let expect = jv(&lf) + chain.gravity_vector(&s.theta) + friction_torque(&s.omega, fp)
            - chain.external_torque(&s.theta, wrenches)
            - wrenches.lambda_u;
        lag = lag.max(rel_err(tb.total.as_slice(), expect.as_slice(), FLOOR));

        match chain.joint_accelerations(&s.theta, &s.omega, &tb.total, fp, wrenches) {
            Ok(a) => idfd = idfd.max(rel_err(a.as_slice(), s.alpha.as_slice(), FLOOR)),
            Err(_) => idfd = f64::INFINITY,
        }
    }
    let mut pd = CheckOutcome::exact("mass_matrix_positive_definite", n, min_eig > 0.0);
    pd.max_error = (-min_eig).max(0.0);
    vec![
        CheckOutcome::new("mass_matrix_symmetry", n, sym, 1e-12),
        pd,
        CheckOutcome::new("passivity_identity", n, pass, 1e-6),
        CheckOutcome::new("gravity_vs_fd_potential", n, grav, 1e-6),
        CheckOutcome::new("kinetic_energy_two_routes", n, ke, 1e-9),
        CheckOutcome::new("torque_breakdown_identity", n, ident, 1e-12),
        CheckOutcome::new("inverse_dynamics_vs_lagrangian_fd", n, lag, 1e-4),
        CheckOutcome::new("forward_dynamics_inverts_inverse", n, idfd, 1e-10),
    ]
}

/// One-second quintic between two seeded poses within ±0.5 rad of the
/// rest posture, sampled at 1 kHz.
pub fn round_trip_trajectory(seed: u64) -> TrajectorySpec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let rest = rest_posture::<f64>();
    let start = rest + Joints::from_fn(|_, _| rng.gen_range(-0.5..0.5));
    let end = rest + Joints::from_fn(|_, _| rng.gen_range(-0.5..0.5));
    TrajectorySpec::quintic(start, end, 1.0, 1000.0).expect("static spec is valid")
}

/// Replays inverse-dynamics torques through RK4 and reports the largest
/// joint-angle deviation from the source trajectory.
pub fn round_trip_error(
    chain: &ModularChain<f64>,
    spec: &TrajectorySpec<f64>,
    fp: &FrictionParameters<f64>,
    wrenches: &InteractionWrenches<f64>,
    dt: f64,
) -> f64 {
    let steps = (spec.duration / dt).round() as usize;
    let s0 = match spec.sample(0.0) {
        Ok(s) => s,
        Err(_) => return f64::INFINITY,
    };
    let torque = |t: f64| match spec.sample(t.min(spec.duration)) {
        Ok(s) => chain.inverse_dynamics(&s, fp, wrenches).total,
        Err(_) => Joints::repeat(f64::NAN),
    };
    match chain.simulate(&s0.theta, &s0.omega, 0.0, dt, steps, torque, fp, wrenches) {
        Ok(traj) => fold_max(traj.iter().map(|(t, th, _)| match spec.sample(t.min(spec.duration)) {
            Ok(s) => (th - s.theta).amax(),
            Err(_) => f64::INFINITY,
        })),
        Err(_) => f64::INFINITY,
    }
}

/// Largest `|E(t) − E(0)| / |E(0)|` over an unforced, frictionless run,
/// where `E = T + U`.
pub fn energy_drift(chain: &ModularChain<f64>, theta0: &Joints<f64>, omega0: &Joints<f64>, dt: f64, steps: usize) -> f64 {
    let energy = |th: &Joints<f64>, w: &Joints<f64>| chain.kinetic_energy(th, w) + chain.potential_energy(th);
    let e0 = energy(theta0, omega0);
    let fp = FrictionParameters::frictionless();
    match chain.simulate(theta0, omega0, 0.0, dt, steps, |_| Joints::zeros(), &fp, &InteractionWrenches::default()) {
        Ok(traj) => fold_max(traj.iter().map(|(_, th, w)| (energy(th, w) - e0).abs() / e0.abs())),
        Err(_) => f64::INFINITY,
    }
}

/// Seeded initial conditions for the conservation runs: angles within
/// ±0.3 rad of the rest posture, rates in (−5, 5).
pub fn conservation_starts(seed: u64, n: usize) -> Vec<(Joints<f64>, Joints<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xE4E7);
    let rest = rest_posture::<f64>();
    (0..n)
        .map(|_| {
            let th = rest + Joints::from_fn(|_, _| rng.gen_range(-0.3..0.3));
            let w = Joints::from_fn(|_, _| rng.gen_range(-5.0..5.0));
            (th, w)
        })
        .collect()
}

pub fn conservation_checks(chain: &ModularChain<f64>, seed: u64, n: usize, dt: f64) -> Vec<CheckOutcome> {
    let steps = (1.0 / dt).round() as usize;
    let starts = conservation_starts(seed, n);
    let weightless = chain.profile().clone().with_gravity(Vector3::zeros());
    let kinetic = match ModularChain::with_table(weightless, chain.table().clone()) {
        Ok(free) => fold_max(starts.iter().map(|(th, w)| energy_drift(&free, th, w, dt, steps))),
        Err(_) => f64::INFINITY,
    };
    let total = fold_max(starts.iter().map(|(th, w)| energy_drift(chain, th, w, dt, steps)));
    vec![
        CheckOutcome::new("kinetic_energy_drift_without_gravity", n, kinetic, 1e-6),
        CheckOutcome::new("total_energy_drift_near_rest", n, total, 1e-6),
    ]
}

pub fn scara_checks(arm: &ScaraArm<f64>, seed: u64, n: usize) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fk0 = scara_fk(&Vector3::new(0.0, 0.0, 0.1), 0.3, 0.3);
    let fk_ok = (fk0 - Vector3::new(0.6, 0.0, 0.1)).amax() <= 1e-15;
    let (mut jac, mut pass, mut lag) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n {
        let pi = std::f64::consts::PI;
        let q = Vector3::new(
            rng.gen_range(-pi..pi),
            rng.gen_range(-pi..pi),
            rng.gen_range(0.0..arm.p_max),
        );
        let qd = Vector3::from_fn(|_, _| rng.gen_range(-5.0..5.0));
        let qdd = Vector3::from_fn(|_, _| rng.gen_range(-5.0..5.0));
        let j = scara_jacobian(&q, arm.d1, arm.d2);
        for k in 0..3 {
            let mut e = Vector3::zeros();
            e[k] = 1e-6;
            let col = (scara_fk(&(q + e), arm.d1, arm.d2) - scara_fk(&(q - e), arm.d1, arm.d2)) / 2e-6;
            jac = jac.max(rel_err(j.column(k).as_slice(), col.as_slice(), FLOOR));
        }
        let r = (qd.transpose() * (arm.mass_matrix_rate(&q, &qd) - arm.christoffel(&q, &qd) * 2.0) * qd)[(0, 0)];
        pass = pass.max(r.abs() / qd.norm_squared());

        let s = ScaraState { q, qd, qdd };
        let f_ext = Vector3::new(0.3, -0.2, 0.1);
        let tau = arm.inverse_dynamics(&s, &f_ext).unwrap_or(Vector3::repeat(f64::NAN));
        let v3 = |d: &DVector<f64>| Vector3::from_column_slice(d.as_slice());
        let lf = oracle::lagrangian_force(
            |q, v| arm.kinetic_energy(&v3(q), &v3(v)),
            &DVector::from_column_slice(q.as_slice()),
            &DVector::from_column_slice(qd.as_slice()),
            &DVector::from_column_slice(qdd.as_slice()),
            1e-4,
            1e-3,
            1e-6,
        );
        let expect = v3(&lf) + arm.gravity_vector(&q) + j.transpose() * f_ext;
        lag = lag.max(rel_err(tau.as_slice(), expect.as_slice(), FLOOR));
    }
    vec![
        CheckOutcome::exact("scara_fk_example", 1, fk_ok),
        CheckOutcome::new("scara_jacobian_vs_fd", n, jac, 1e-6),
        CheckOutcome::new("scara_passivity_identity", n, pass, 1e-6),
        CheckOutcome::new("scara_inverse_dynamics_vs_lagrangian_fd", n, lag, 1e-4),
    ]
}

pub fn grasp_checks(seed: u64, n: usize) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hold = grasp_statics(&GraspSpec::new(1.0), &Vector3::zeros());
    let hold_ok = matches!(hold, Ok(g) if g.f_z == 4.905 && g.n_l == g.n_r && g.f_y == 0.0);
    let capped = GraspSpec { mu: Some((0.4, 0.4)), normal_cap: Some(10.0), ..GraspSpec::new(1.0) };
    let infeasible_ok = matches!(grasp_statics(&capped, &Vector3::zeros()), Err(crate::scara::GraspError::Infeasible(_)));
    let (mut residual, mut monotone) = (0.0f64, true);
    for _ in 0..n {
        let m = rng.gen_range(0.0..3.0);
        let a = Vector3::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), 0.0);
        let mu = rng.gen_range(0.1..1.0);
        let spec = GraspSpec { mu: Some((mu, 1.0)), ..GraspSpec::new(m) };
        match grasp_statics(&spec, &a) {
            Ok(g) => {
                residual = residual.max(g.residual(&a).amax());
                let looser = GraspSpec { mu: Some((mu * 1.5, 1.5)), ..spec };
                if let Ok(g2) = grasp_statics(&looser, &a) {
                    monotone &= g2.n_l.max(g2.n_r) <= g.n_l.max(g.n_r);
                } else {
                    monotone = false;
                }
            }
            Err(_) => residual = f64::INFINITY,
        }
    }
    vec![
        CheckOutcome::exact("grasp_static_hold", 1, hold_ok),
        CheckOutcome::exact("grasp_infeasible_under_cap", 1, infeasible_ok),
        CheckOutcome::new("grasp_residual", n, residual, 1e-12),
        CheckOutcome::exact("grasp_monotone_in_mu", n, monotone),
    ]
}

/// The full suite for one chain configuration.
pub fn run_suite(
    chain: &ModularChain<f64>,
    fp: &FrictionParameters<f64>,
    wrenches: &InteractionWrenches<f64>,
    opts: &SuiteOptions,
) -> Vec<CheckOutcome> {
    let states = random_states(opts.seed, opts.states);
    let mut out = kinematic_checks(chain, &states);
    out.extend(dynamics_checks(chain, &states, fp, wrenches));
    let spec = round_trip_trajectory(opts.seed);
    out.push(CheckOutcome::new(
        "inverse_forward_round_trip",
        1,
        round_trip_error(chain, &spec, fp, wrenches, opts.dt),
        1e-4,
    ));
    out.extend(conservation_checks(chain, opts.seed, 5, opts.dt));
    out.extend(scara_checks(&ScaraArm::default(), opts.seed, opts.states));
    out.extend(grasp_checks(opts.seed, opts.states));
    out
}
