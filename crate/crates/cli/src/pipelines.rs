use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use modukin_core::model::JointPointId;
use modukin_core::verify::{run_suite, CheckOutcome, SuiteOptions};
use modukin_core::{Joints, DOF};
use serde::Serialize;

use crate::output::{self, Table};
use crate::{Report, RunContext};

fn joint_header() -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for name in ["theta", "omega", "alpha"] {
        h.extend((1..=DOF).map(|k| format!("{name}{k}")));
    }
    h
}

fn point_header() -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for p in JointPointId::ALL {
        h.extend(["x", "y", "z"].iter().map(|c| format!("{p}_{c}")));
    }
    h
}

pub fn fk(ctx: &RunContext, dir: &Path) -> Result<Report> {
    let series = ctx.trajectory.series()?;
    let kin = ctx.chain.kinematics();
    let header = point_header();
    let mut pos = Table::create(&dir.join("points_position.csv"), &header)?;
    let mut vel = Table::create(&dir.join("points_velocity.csv"), &header)?;
    let mut acc = Table::create(&dir.join("points_acceleration.csv"), &header)?;
    let mut joints = Table::create(&dir.join("joints_state.csv"), &joint_header())?;
    for (t, s) in &series {
        let lead = [output::num(*t)];
        let mut p = Vec::with_capacity(48);
        let mut v = Vec::with_capacity(48);
        let mut a = Vec::with_capacity(48);
        for id in JointPointId::ALL {
            p.extend(kin.position(id, &s.theta).iter().copied());
            v.extend(kin.velocity(id, &s.theta, &s.omega).iter().copied());
            a.extend(kin.acceleration(id, &s.theta, &s.omega, &s.alpha).iter().copied());
        }
        pos.row(&lead, p)?;
        vel.row(&lead, v)?;
        acc.row(&lead, a)?;
        joints.row(&lead, s.theta.iter().chain(s.omega.iter()).chain(s.alpha.iter()).copied())?;
    }
    for t in [pos, vel, acc, joints] {
        t.finish()?;
    }
    Ok(Report {
        lines: vec![format!("fk: {} samples written to {}", series.len(), dir.display())],
        failed_checks: 0,
    })
}

/// Per-DOF peak absolute torque of every breakdown column.
#[derive(Debug, Serialize)]
struct TorqueSummary {
    profile: String,
    samples: usize,
    peak_abs: BTreeMap<&'static str, [f64; DOF]>,
    /// Largest `|total|` over all DOFs and samples.
    peak_total: f64,
}

const TORQUE_COLUMNS: [&str; 6] = ["inertial", "coriolis", "gravitational", "friction", "external", "total"];

pub fn idyn(ctx: &RunContext, dir: &Path) -> Result<Report> {
    let series = ctx.trajectory.series()?;
    let mut header = vec!["t", "dof"];
    header.extend(TORQUE_COLUMNS);
    let mut table = Table::create(&dir.join("torques.csv"), &header)?;
    let mut peaks = [[0.0f64; DOF]; 6];
    for (t, s) in &series {
        let tb = ctx.chain.inverse_dynamics(s, &ctx.friction, &ctx.wrenches);
        let external = tb.external + tb.disturbance;
        let cols = [tb.inertial, tb.coriolis, tb.gravitational, tb.friction, external, tb.total];
        for k in 0..DOF {
            let vals: Vec<f64> = cols.iter().map(|c| c[k]).collect();
            ensure!(vals.iter().all(|v| v.is_finite()), "non-finite torque at t = {t}, DOF {}", k + 1);
            for (peak, v) in peaks.iter_mut().zip(&vals) {
                peak[k] = peak[k].max(v.abs());
            }
            table.row(&[output::num(*t), (k + 1).to_string()], vals)?;
        }
    }
    table.finish()?;
    let summary = TorqueSummary {
        profile: ctx.chain.profile().name.clone(),
        samples: series.len(),
        peak_total: peaks[5].iter().copied().fold(0.0, f64::max),
        peak_abs: TORQUE_COLUMNS.iter().copied().zip(peaks).collect(),
    };
    output::write_json(&dir.join("torques_summary.json"), &summary)?;
    Ok(Report {
        lines: vec![format!(
            "idyn: {} samples written to {} (peak |total| {:.4} N m)",
            series.len(),
            dir.display(),
            summary.peak_total
        )],
        failed_checks: 0,
    })
}

/// Applied joint torque as a function of time, from `torques.csv`.
struct TorqueTrack {
    times: Vec<f64>,
    values: Vec<Joints>,
}

impl TorqueTrack {
    fn load(path: &Path) -> Result<Self> {
        let mut rd = csv::Reader::from_path(path).with_context(|| format!("cannot read torques {}", path.display()))?;
        let headers = rd.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name).with_context(|| format!("torque file lacks a `{name}` column"));
        let (it, idof, itotal) = (col("t")?, col("dof")?, col("total")?);
        let mut times: Vec<f64> = Vec::new();
        let mut values: Vec<Joints> = Vec::new();
        let mut filled: Vec<[bool; DOF]> = Vec::new();
        for (line, rec) in rd.records().enumerate() {
            let rec = rec?;
            let row = line + 2;
            let t: f64 = rec[it].parse().with_context(|| format!("row {row}: bad t"))?;
            let dof: usize = rec[idof].parse().with_context(|| format!("row {row}: bad dof"))?;
            let total: f64 = rec[itotal].parse().with_context(|| format!("row {row}: bad total"))?;
            ensure!((1..=DOF).contains(&dof), "row {row}: dof {dof} out of range");
            ensure!(t.is_finite() && total.is_finite(), "row {row}: non-finite value");
            if times.last() != Some(&t) {
                if let Some(&last) = times.last() {
                    ensure!(t > last, "row {row}: time goes backwards");
                }
                times.push(t);
                values.push(Joints::zeros());
                filled.push([false; DOF]);
            }
            let n = times.len() - 1;
            ensure!(!filled[n][dof - 1], "row {row}: DOF {dof} repeated at t = {t}");
            filled[n][dof - 1] = true;
            values[n][dof - 1] = total;
        }
        ensure!(times.len() >= 2, "torque file needs at least two samples");
        if let Some(i) = filled.iter().position(|f| !f.iter().all(|x| *x)) {
            bail!("torque file is missing DOFs at t = {}", times[i]);
        }
        Ok(Self { times, values })
    }

    /// Cubic Hermite interpolation with centred-difference slopes.
    fn at(&self, t: f64) -> Joints {
        let n = self.times.len();
        let t = t.clamp(self.times[0], self.times[n - 1]);
        let i = self.times.partition_point(|x| *x <= t).clamp(1, n - 1) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let slope = |j: usize| {
            let (a, b) = (j.saturating_sub(1), (j + 1).min(n - 1));
            (self.values[b] - self.values[a]) / (self.times[b] - self.times[a])
        };
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.values[i] * h00 + slope(i) * (h10 * h) + self.values[i + 1] * h01 + slope(i + 1) * (h11 * h)
    }
}

pub fn fdyn(ctx: &RunContext, dir: &Path, torques: &str, duration: Option<f64>, dt: f64) -> Result<Report> {
    ensure!(dt > 0.0 && dt.is_finite(), "--dt must be positive, got {dt}");
    let duration = duration.unwrap_or(ctx.trajectory.duration);
    ensure!(duration > 0.0 && duration.is_finite(), "--duration must be positive, got {duration}");
    let steps = (duration / dt).round() as usize;
    ensure!(
        steps > 0 && (steps as f64 * dt - duration).abs() <= 1e-9 * duration,
        "--duration {duration} is not a whole number of --dt {dt} steps"
    );
    let track = match torques {
        "zero" => None,
        path => {
            let track = TorqueTrack::load(Path::new(path))?;
            let (lo, hi) = (track.times[0], track.times[track.times.len() - 1]);
            ensure!(
                lo <= 1e-9 && hi >= duration - 1e-9,
                "torque file covers [{lo}, {hi}] s but the run needs [0, {duration}] s"
            );
            Some(track)
        }
    };
    let torque = |t: f64| track.as_ref().map_or_else(Joints::zeros, |tr| tr.at(t));
    let (theta0, omega0) = match ctx.initial_state {
        Some(s) => (s.theta, s.omega),
        None => {
            let s = ctx.trajectory.sample(0.0)?;
            (s.theta, s.omega)
        }
    };
    let (fp, w) = (&ctx.friction, &ctx.wrenches);
    let run = ctx.chain.simulate(&theta0, &omega0, 0.0, dt, steps, torque, fp, w)?;

    let mut state = Table::create(&dir.join("sim_state.csv"), &joint_header())?;
    let mut energy = Table::create(&dir.join("energy.csv"), &["t", "kinetic", "potential", "total"])?;
    for (t, th, om) in &run {
        let alpha = ctx.chain.joint_accelerations(th, om, &torque(*t), fp, w)?;
        let lead = [output::num(*t)];
        state.row(&lead, th.iter().chain(om.iter()).chain(alpha.iter()).copied())?;
        let (ke, pe) = (ctx.chain.kinetic_energy(th, om), ctx.chain.potential_energy(th));
        energy.row(&lead, [ke, pe, ke + pe])?;
    }
    state.finish()?;
    energy.finish()?;
    Ok(Report {
        lines: vec![format!("fdyn: {} steps of {dt} s written to {}", steps, dir.display())],
        failed_checks: 0,
    })
}

#[derive(Debug, Serialize)]
struct CheckReport<'a> {
    tool_version: &'static str,
    profile: &'a str,
    seed: u64,
    passed: bool,
    failed: usize,
    checks: &'a [CheckOutcome],
}

pub fn check(ctx: &RunContext, dir: &Path) -> Result<Report> {
    let opts = SuiteOptions { seed: ctx.seed, ..SuiteOptions::default() };
    let outcomes = run_suite(&ctx.chain, &ctx.friction, &ctx.wrenches, &opts);
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    let profile = ctx.chain.profile().name.as_str();
    let mut lines: Vec<String> = outcomes
        .iter()
        .map(|c| {
            format!(
                "{} [{profile}] {:<42} max_error={:.3e} tolerance={:.1e} samples={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_error,
                c.tolerance,
                c.samples
            )
        })
        .collect();
    lines.push(format!("check [{profile}]: {} of {} passed", outcomes.len() - failed, outcomes.len()));
    let report = CheckReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        profile,
        seed: ctx.seed,
        passed: failed == 0,
        failed,
        checks: &outcomes,
    };
    output::write_json(&dir.join("check_report.json"), &report)?;
    Ok(Report { lines, failed_checks: failed })
}
