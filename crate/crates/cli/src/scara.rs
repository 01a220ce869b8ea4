use anyhow::{bail, Result};
use modukin_core::scara::{grasp_statics, GraspError, GraspSpec, ScaraState};
use modukin_core::ScaraArm;
use nalgebra::Vector3;
use serde::Serialize;
use serde_json::Value;

use crate::args::{GraspArgs, ScaraAction, ScaraPose};

fn clean(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Position {
    X: f64,
    Y: f64,
    Z: f64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Grasp {
    N_L: f64,
    N_R: f64,
    F_y: f64,
    F_z: f64,
}

fn arm(pose: &ScaraPose) -> Result<ScaraArm> {
    let arm = ScaraArm { d1: pose.d1, d2: pose.d2, ..ScaraArm::default() };
    arm.validate()?;
    Ok(arm)
}

/// Evaluates one SCARA action as a single JSON value.
pub fn evaluate(action: &ScaraAction) -> Result<Value> {
    let value = match action {
        ScaraAction::Fk(pose) => {
            let arm = arm(pose)?;
            let s = ScaraState::at_rest(pose.theta1, pose.theta2, pose.p);
            arm.check_state(&s)?;
            let x = arm.fk(&s);
            serde_json::to_value(Position { X: clean(x[0]), Y: clean(x[1]), Z: clean(x[2]) })?
        }
        ScaraAction::Jac(pose) => {
            let arm = arm(pose)?;
            let s = ScaraState::at_rest(pose.theta1, pose.theta2, pose.p);
            arm.check_state(&s)?;
            let j = arm.jacobian(&s);
            let rows: Vec<Vec<f64>> = (0..3).map(|r| (0..3).map(|c| clean(j[(r, c)])).collect()).collect();
            serde_json::json!({ "J": rows })
        }
        ScaraAction::Idyn(m) => {
            if m.force.len() != 3 {
                bail!("--force takes three components, got {}", m.force.len());
            }
            let arm = ScaraArm { m1: m.m1, m2: m.m2, m3: m.m3, ..arm(&m.pose)? };
            arm.validate()?;
            let s = ScaraState {
                q: Vector3::new(m.pose.theta1, m.pose.theta2, m.pose.p),
                qd: Vector3::new(m.theta1_dot, m.theta2_dot, m.p_dot),
                qdd: Vector3::new(m.theta1_ddot, m.theta2_ddot, m.p_ddot),
            };
            let tau = arm.inverse_dynamics(&s, &Vector3::from_column_slice(&m.force))?;
            serde_json::json!({ "tau": tau.iter().map(|v| clean(*v)).collect::<Vec<_>>() })
        }
        ScaraAction::Grasp(g) => grasp(g)?,
    };
    Ok(value)
}

fn grasp(g: &GraspArgs) -> Result<Value> {
    let mu = match (g.mu_min, g.mu_max) {
        (None, None) => None,
        (Some(lo), hi) => Some((lo, hi.unwrap_or(lo))),
        (None, Some(_)) => bail!("--mu-max needs --mu-min"),
    };
    let spec = GraspSpec { mass: g.mass, weight: g.weight, mu, normal_cap: g.normal_cap, right_normal: g.right_normal };
    match grasp_statics(&spec, &Vector3::new(g.ax, g.ay, 0.0)) {
        Ok(l) => Ok(serde_json::to_value(Grasp { N_L: clean(l.n_l), N_R: clean(l.n_r), F_y: clean(l.f_y), F_z: clean(l.f_z) })?),
        // A legitimate answer rather than an error.
        Err(GraspError::Infeasible(reason)) => Ok(serde_json::json!({ "infeasible": reason })),
        Err(e) => Err(e.into()),
    }
}
