use std::f64::consts::PI;
use std::sync::LazyLock;

use modukin_core::dynamics::friction_torque;
use modukin_core::model::{builtin_profile, JointPointId};
use modukin_core::scara::{grasp_statics, scara_fk, scara_jacobian, GraspSpec, ScaraArm};
use modukin_core::{
    FrictionParameters, InteractionWrenches, JointState, Joints, ModularChain, TrajectorySpec,
};
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;

static CHAIN: LazyLock<ModularChain> = LazyLock::new(|| ModularChain::new(builtin_profile("medium").unwrap()).unwrap());

fn joints(lim: f64) -> impl Strategy<Value = Joints> {
    proptest::array::uniform7(-lim..lim).prop_map(Joints::from)
}

fn state() -> impl Strategy<Value = JointState> {
    (joints(PI), joints(5.0), joints(5.0)).prop_map(|(theta, omega, alpha)| JointState { theta, omega, alpha })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rigid_links_keep_their_length(th in joints(10.0)) {
        use JointPointId::*;
        let kin = CHAIN.kinematics();
        let l = |i| kin.lengths().l(i);
        let p = |x| kin.position(x, &th);
        prop_assert!(((p(D) - p(C)).norm() - l(4)).abs() < 1e-12);
        prop_assert!(((p(G) - p(E)).norm() - (l(6) + l(7))).abs() < 1e-12);
        prop_assert!(((p(M) - p(G)).norm() - (l(8) + l(9))).abs() < 1e-12);
        prop_assert!(((p(N) - p(M)).norm() - l(10)).abs() < 1e-12);
        prop_assert!(((p(Q) - p(P)).norm() - l(12)).abs() < 1e-12);
        prop_assert!((p(T) - p(S) - Vector3::new(-l(15), 0.0, 0.0)).amax() < 1e-12);
        prop_assert_eq!(p(R), p(Q));
    }

    #[test]
    fn velocity_is_linear_in_rates(th in joints(PI), w in joints(5.0), k in -3.0f64..3.0) {
        let kin = CHAIN.kinematics();
        for p in JointPointId::ALL {
            let v = kin.velocity(p, &th, &w);
            let vk = kin.velocity(p, &th, &(w * k));
            prop_assert!((vk - v * k).amax() <= 1e-12 * (1.0 + v.amax() * k.abs()));
        }
    }

    #[test]
    fn mass_matrix_symmetric_positive_definite(th in joints(10.0)) {
        let m = CHAIN.mass_matrix(&th);
        prop_assert!(m.asymmetry() <= 1e-12);
        prop_assert!(m.eigen_range().0 > 0.0);
    }

    #[test]
    fn passivity(s in state()) {
        let parts = CHAIN.mass_matrix_partials(&s.theta);
        let mdot = parts.iter().zip(s.omega.iter()).fold(parts[0] * 0.0, |acc, (p, w)| acc + p * *w);
        let c = CHAIN.christoffel(&s.theta, &s.omega);
        let r = (s.omega.transpose() * (mdot - c * 2.0) * s.omega)[(0, 0)];
        prop_assert!(r.abs() <= 1e-6 * s.omega.norm_squared());
    }

    #[test]
    fn kinetic_energy_non_negative(s in state()) {
        prop_assert!(CHAIN.kinetic_energy(&s.theta, &s.omega) >= 0.0);
    }

    #[test]
    fn friction_dissipates(w in joints(5.0), b in joints(1.0), c in joints(1.0), sk in joints(1.0)) {
        let fp = FrictionParameters {
            viscous_joint: b.abs(),
            coulomb_joint: c.abs(),
            viscous_skin: sk.abs(),
            smoothing_eps: 1e-3,
        };
        let tau = friction_torque(&w, &fp);
        for k in 0..7 {
            prop_assert!(tau[k] * w[k] >= 0.0);
        }
    }

    #[test]
    fn breakdown_identity(s in state(), g1 in proptest::array::uniform3(-5.0f64..5.0), lu in joints(1.0)) {
        let w = InteractionWrenches { gamma1: Vector3::from(g1), lambda_u: lu, ..Default::default() };
        let mut fp = FrictionParameters::frictionless();
        fp.viscous_joint = Joints::repeat(0.1);
        let tb = CHAIN.inverse_dynamics(&s, &fp, &w);
        prop_assert!(tb.identity_residual() <= 1e-12);
    }

    #[test]
    fn quintic_monotone(a in joints(2.0), b in joints(2.0), n in 50u32..300) {
        let spec = TrajectorySpec::quintic(a, b, n as f64 / 100.0, 100.0).unwrap();
        let series = spec.series().unwrap();
        for k in 0..7 {
            let sign = (b[k] - a[k]).signum();
            for w in series.windows(2) {
                prop_assert!((w[1].1.theta[k] - w[0].1.theta[k]) * sign >= -1e-15);
            }
        }
        prop_assert_eq!(spec.series().unwrap(), series);
    }

    #[test]
    fn sinusoid_rates_match_differences(t in 0.0f64..20.0, amp in joints(1.0), f in proptest::array::uniform7(0.05f64..2.0)) {
        let spec = TrajectorySpec::sinusoidal(amp, Joints::from(f), Joints::zeros(), Joints::zeros(), 1.0, 100.0).unwrap();
        let h = 1e-5;
        let t = t + h;
        let (lo, mid, hi) = (spec.sample(t - h).unwrap(), spec.sample(t).unwrap(), spec.sample(t + h).unwrap());
        let w = (hi.theta - lo.theta) / (2.0 * h);
        let a = (hi.omega - lo.omega) / (2.0 * h);
        let scale = |v: &Joints| v.amax().max(1e-3);
        prop_assert!((w - mid.omega).amax() <= 1e-6 * scale(&mid.omega));
        prop_assert!((a - mid.alpha).amax() <= 1e-6 * scale(&mid.alpha));
    }

    #[test]
    fn scara_jacobian_matches_differences(q in proptest::array::uniform3(-3.0f64..3.0), d1 in 0.1f64..1.0, d2 in 0.1f64..1.0) {
        let q = Vector3::from(q);
        let j = scara_jacobian(&q, d1, d2);
        let fd = Matrix3::from_fn(|r, c| {
            let mut e = Vector3::zeros();
            e[c] = 1e-6;
            (scara_fk(&(q + e), d1, d2)[r] - scara_fk(&(q - e), d1, d2)[r]) / 2e-6
        });
        prop_assert!((j - fd).amax() <= 1e-6 * j.amax());
    }

    #[test]
    fn scara_passivity(q in proptest::array::uniform3(-3.0f64..3.0), qd in proptest::array::uniform3(-5.0f64..5.0)) {
        let arm = ScaraArm::default();
        let (q, qd) = (Vector3::from(q), Vector3::from(qd));
        let r = (qd.transpose() * (arm.mass_matrix_rate(&q, &qd) - arm.christoffel(&q, &qd) * 2.0) * qd)[(0, 0)];
        prop_assert!(r.abs() <= 1e-6 * qd.norm_squared());
        let h = arm.mass_matrix(&q);
        prop_assert!((h - h.transpose()).amax() <= 1e-12);
    }

    #[test]
    fn grasp_solutions_balance(m in 0.0f64..5.0, ax in -5.0f64..5.0, ay in -5.0f64..5.0, mu in 0.05f64..1.0) {
        let a = Vector3::new(ax, ay, 0.0);
        let spec = GraspSpec { mu: Some((mu, 1.0)), ..GraspSpec::new(m) };
        let g = grasp_statics(&spec, &a).unwrap();
        prop_assert!(g.residual(&a).amax() <= 1e-12);
        prop_assert!(g.n_l >= 0.0 && g.n_r >= 0.0);
        prop_assert!(g.surface_friction() <= mu * g.n_l.min(g.n_r) * (1.0 + 1e-12));
        let looser = GraspSpec { mu: Some((mu * 2.0, 2.0)), ..spec };
        let g2 = grasp_statics(&looser, &a).unwrap();
        prop_assert!(g2.n_l <= g.n_l && g2.n_r <= g.n_r);
    }
}
