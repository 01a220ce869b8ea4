use std::f64::consts::FRAC_PI_2;

use approx::assert_relative_eq;

use super::*;
use crate::model::builtin_profile;

fn medium() -> LinkLengths<f64> {
    builtin_profile::<f64>("medium").unwrap().lengths
}

fn theta(v: [f64; 7]) -> Joints<f64> {
    Joints::from(v)
}

#[test]
fn zero_pose_tip_is_offset_sum() {
    let l = medium();
    let p = canonical_position(JointPointId::T, &Joints::zeros(), &l);
    let li = |i| l.l(i);
    let expect = Vector3::new(
        li(1) + li(5) - li(2) + li(8) + li(9) + li(12) - li(15),
        li(4) + li(11) + li(14),
        li(3) + li(6) + li(7) + li(10) + li(13),
    );
    assert_relative_eq!(p, expect, epsilon = 1e-15);
}

#[test]
fn point_a_is_fixed() {
    let l = medium();
    let th = theta([0.3, -1.2, 2.0, 0.1, -0.4, 0.9, 3.0]);
    let kin = ChainKinematics::new(&l);
    assert_eq!(kin.position(JointPointId::A, &th), Vector3::new(l.l(1), 0.0, 0.0));
    assert_eq!(kin.jacobian(JointPointId::A, &th), SMatrix::<f64, 3, 7>::zeros());
}

#[test]
fn point_b_quarter_turn() {
    let l = medium();
    let p = canonical_position(JointPointId::B, &theta([FRAC_PI_2, 0., 0., 0., 0., 0., 0.]), &l);
    assert_relative_eq!(p, Vector3::new(l.l(1), l.l(2), 0.0), epsilon = 1e-15);
}

#[test]
fn point_b_velocity_and_acceleration() {
    let l = medium();
    let (th1, w1, a1) = (0.7, -1.3, 2.1);
    let mut s = JointState::<f64>::zero();
    s.theta[0] = th1;
    s.omega[0] = w1;
    s.alpha[0] = a1;
    let l2 = l.l(2);
    let v = canonical_velocity(JointPointId::B, &s, &l);
    assert_relative_eq!(v, Vector3::new(l2 * w1 * th1.sin(), l2 * w1 * th1.cos(), 0.0), epsilon = 1e-15);
    let a = canonical_acceleration(JointPointId::B, &s, &l);
    let expect = Vector3::new(
        l2 * a1 * th1.sin() + l2 * w1 * w1 * th1.cos(),
        l2 * a1 * th1.cos() - l2 * w1 * w1 * th1.sin(),
        0.0,
    );
    assert_relative_eq!(a, expect, epsilon = 1e-15);
}

#[test]
fn point_b_jacobian_at_zero() {
    let l = medium();
    let j = point_jacobian(JointPointId::B, &Joints::zeros(), &l);
    assert_eq!(j.column(1), Vector3::new(0.0, l.l(2), 0.0));
    for k in 2..=7 {
        assert_eq!(j.column(k), Vector3::zeros());
    }
}

#[test]
fn zero_rates_give_zero_motion() {
    let l = medium();
    let s = JointState::at_rest(theta([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]));
    for (p, pk) in full_pose(&s, &l) {
        assert_eq!(pk.velocity, Vector3::zeros(), "{p}");
        assert_eq!(pk.acceleration, Vector3::zeros(), "{p}");
    }
}

#[test]
fn ground_point_is_zero() {
    let l = medium();
    let s = JointState::new(
        theta([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]),
        theta([1.0; 7]),
        theta([-2.0; 7]),
    )
    .unwrap();
    let pose = full_pose(&s, &l);
    let o = pose[&JointPointId::O];
    assert_eq!(o.position, Vector3::zeros());
    assert_eq!(o.velocity, Vector3::zeros());
    assert_eq!(o.acceleration, Vector3::zeros());
    assert_eq!(pose.len(), 16);
    let kin = ChainKinematics::new(&l);
    for (p, pk) in &pose {
        assert_eq!(*pk, kin.point_kinematics(*p, &s));
    }
}

#[test]
fn jacobian_zero_columns_follow_formula() {
    let l = medium();
    let th = theta([0.4, -0.3, 1.1, 0.9, -2.0, 0.2, 1.5]);
    for p in JointPointId::ALL {
        let j = point_jacobian(p, &th, &l);
        let used = point_dofs(p);
        for k in 0..DOF {
            if !used.contains(&k) {
                assert_eq!(j.matrix.column(k).into_owned(), Vector3::zeros(), "{p} column {}", k + 1);
            }
        }
    }
}

#[test]
fn works_in_single_precision() {
    let l = builtin_profile::<f32>("medium").unwrap().lengths;
    let p = canonical_position(JointPointId::T, &Joints::<f32>::zeros(), &l);
    let p64 = canonical_position(JointPointId::T, &Joints::<f64>::zeros(), &medium());
    for i in 0..3 {
        assert!((p[i] as f64 - p64[i]).abs() < 1e-6);
    }
}
