//! Acceptance criteria 1 to 10. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; the process exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use common::*;
use modukin_core::kinematics::canonical_position;
use modukin_core::model::{builtin_profile, rest_posture, ChainConfig, JointPointId, BUILTIN_PROFILES};
use modukin_core::oracle::discretized_mass_matrix;
use modukin_core::scara::{grasp_statics, GraspSpec, STANDARD_GRAVITY};
use modukin_core::verify::{self, CheckOutcome, DEFAULT_SEED};
use modukin_core::{
    FrictionParameters, InertiaModel, InteractionWrenches, Joints, LinkInertia, ModularChain, Profile, ScaraArm,
    TrajectorySpec,
};
use nalgebra::Vector3;

/// One measured quantity inside a criterion.
struct Item {
    label: String,
    ok: bool,
    detail: String,
}

fn bound(label: &str, value: f64, tol: f64) -> Item {
    Item { label: label.into(), ok: value < tol, detail: format!("{value:.2e} < {tol:.0e}") }
}

fn at_most(label: &str, value: f64, tol: f64) -> Item {
    Item { label: label.into(), ok: value <= tol, detail: format!("{value:.2e} <= {tol:.0e}") }
}

fn holds(label: &str, ok: bool) -> Item {
    Item { label: label.into(), ok, detail: if ok { "holds".into() } else { "violated".into() } }
}

fn chains() -> Vec<ModularChain> {
    BUILTIN_PROFILES.iter().map(|(name, ..)| ModularChain::new(builtin_profile(name).unwrap()).unwrap()).collect()
}

fn outcome<'a>(checks: &'a [CheckOutcome], name: &str) -> &'a CheckOutcome {
    checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("suite has no {name}"))
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn c1() -> Vec<Item> {
    let states = verify::random_states(DEFAULT_SEED, 100);
    let mut items = Vec::new();
    let (mut vel, mut acc, mut jac, mut secs) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for chain in chains() {
        let start = Instant::now();
        let checks = verify::kinematic_checks(&chain, &states);
        secs = secs.max(start.elapsed().as_secs_f64());
        vel = vel.max(outcome(&checks, "velocity_vs_fd_position").max_error);
        acc = acc.max(outcome(&checks, "acceleration_vs_fd_velocity_in_time").max_error);
        jac = jac.max(outcome(&checks, "jacobian_vs_fd_columns").max_error);
    }
    items.push(bound("velocity vs FD position", vel, 1e-6));
    items.push(bound("acceleration vs FD velocity", acc, 1e-5));
    items.push(bound("Jacobian vs FD columns", jac, 1e-6));
    items.push(Item { label: "runtime per profile".into(), ok: secs < 10.0, detail: format!("{secs:.2} s < 10 s") });
    items
}

fn c2() -> Vec<Item> {
    let states = verify::random_states(DEFAULT_SEED, 100);
    let mut rig = 0.0f64;
    let mut r_is_q = true;
    for chain in chains() {
        let checks = verify::kinematic_checks(&chain, &states);
        rig = rig.max(outcome(&checks, "rigid_link_invariants").max_error);
        let kin = chain.kinematics();
        r_is_q &= states.iter().all(|s| {
            kin.position(JointPointId::R, &s.theta) == kin.position(JointPointId::Q, &s.theta)
        });
    }
    vec![at_most("link invariants", rig, 1e-12), holds("p_R == p_Q exactly", r_is_q)]
}

fn c3() -> Vec<Item> {
    BUILTIN_PROFILES
        .iter()
        .map(|(name, ..)| {
            let lengths = builtin_profile::<f64>(name).unwrap().lengths;
            let l = |i| lengths.l(i);
            let expect = Vector3::new(
                l(1) + l(5) - l(2) + l(8) + l(9) + l(12) - l(15),
                l(4) + l(11) + l(14),
                l(3) + l(6) + l(7) + l(10) + l(13),
            );
            let got = canonical_position(JointPointId::T, &Joints::zeros(), &lengths);
            holds(&format!("p_T(0) {name}"), got == expect)
        })
        .collect()
}

fn c4() -> Vec<Item> {
    let states = verify::random_states(DEFAULT_SEED, 100);
    let fp = FrictionParameters::frictionless();
    let w = InteractionWrenches::default();
    let (mut sym, mut pd, mut pass, mut grav) = (0.0f64, true, 0.0f64, 0.0f64);
    let mut min_eig = f64::INFINITY;
    for chain in chains() {
        let checks = verify::dynamics_checks(&chain, &states, &fp, &w);
        sym = sym.max(outcome(&checks, "mass_matrix_symmetry").max_error);
        pd &= outcome(&checks, "mass_matrix_positive_definite").passed;
        pass = pass.max(outcome(&checks, "passivity_identity").max_error);
        grav = grav.max(outcome(&checks, "gravity_vs_fd_potential").max_error);
        for s in &states {
            min_eig = min_eig.min(chain.mass_matrix(&s.theta).eigen_range().0);
        }
    }
    vec![
        at_most("M symmetry", sym, 1e-12),
        Item { label: "M positive definite".into(), ok: pd && min_eig > 0.0, detail: format!("min eigenvalue {min_eig:.3e} > 0") },
        bound("passivity / |w|^2", pass, 1e-6),
        bound("gravity vs FD potential", grav, 1e-6),
    ]
}

fn single_link(model: InertiaModel, m: f64) -> ModularChain {
    let base = builtin_profile::<f64>("medium").unwrap();
    ModularChain::new(Profile::new("single", base.lengths, LinkInertia::single(2, m, model))).unwrap()
}

fn c5() -> Vec<Item> {
    let m = 0.7;
    let thetas = [Joints::zeros(), Joints::from([0.3, -1.0, 2.0, 0.5, 0.1, -0.7, 1.4]), Joints::repeat(-2.5)];
    let rod = single_link(InertiaModel::UniformSlenderRod, m);
    let point = single_link(InertiaModel::PointMassAtDistalEnd, m);
    let l2 = rod.profile().lengths.l(2);
    let (mut vs_closed, mut vs_disc) = (0.0f64, 0.0f64);
    for th in &thetas {
        let m11 = rod.mass_matrix(th).matrix[(0, 0)];
        let closed = m * l2 * l2 / 3.0;
        vs_closed = vs_closed.max((m11 - closed).abs() / closed);
        let disc = discretized_mass_matrix(rod.profile(), th, 10_000, 1e-6)[(0, 0)];
        vs_disc = vs_disc.max((m11 - disc).abs() / disc);
    }

    // Bit-exact wherever sin and cos of the swing angle are exact; elsewhere
    // sin² + cos² itself rounds, so allow two ulps.
    let expect = m * (l2 * l2);
    let only_m11 = |th: &Joints| {
        let mut mp = point.mass_matrix(th).matrix;
        let m11 = mp[(0, 0)];
        mp[(0, 0)] = 0.0;
        (m11, mp.amax() == 0.0)
    };
    let mut exact = true;
    for (i, th1) in [0.0, std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2, std::f64::consts::PI].into_iter().enumerate() {
        let mut th = verify::random_states(DEFAULT_SEED + i as u64, 1)[0].theta;
        th[0] = th1;
        let (m11, rest_zero) = only_m11(&th);
        exact &= m11 == expect && rest_zero;
    }
    let mut ulps = 0.0f64;
    let mut zero_elsewhere = true;
    for s in verify::random_states(DEFAULT_SEED, 100) {
        let (m11, rest_zero) = only_m11(&s.theta);
        ulps = ulps.max((m11 - expect).abs() / (expect * f64::EPSILON));
        zero_elsewhere &= rest_zero;
    }
    vec![
        bound("rod M11 vs m l^2/3", vs_closed, 1e-6),
        bound("rod M11 vs 1e4-point oracle", vs_disc, 1e-6),
        holds("point mass M11 == m l^2 bit-exact at th1 in {0, +-pi/2, pi}, rest 0", exact),
        Item {
            label: "point mass M11 at 100 random poses".into(),
            ok: ulps <= 2.0 && zero_elsewhere,
            detail: format!("{ulps:.1} ulp <= 2, rest 0"),
        },
    ]
}

fn c6(dir: &Path) -> Vec<Item> {
    let fp = FrictionParameters::frictionless();
    let w = InteractionWrenches::default();
    let spec = verify::round_trip_trajectory(DEFAULT_SEED);
    let (mut err, mut secs) = (0.0f64, 0.0f64);
    for chain in chains() {
        let start = Instant::now();
        err = err.max(verify::round_trip_error(&chain, &spec, &fp, &w, 1e-3));
        secs = secs.max(start.elapsed().as_secs_f64());
    }
    let mut items = vec![
        bound("library round trip [rad]", err, 1e-4),
        Item { label: "runtime per profile".into(), ok: secs < 5.0, detail: format!("{secs:.2} s < 5 s") },
    ];

    // Same loop through the CLI: idyn at 100 Hz, fdyn replay at 1 kHz.
    let cfg = fixture("round_trip.json");
    let out = dir.join("c6");
    let a = modukin(["idyn", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let torques = out.join("torques.csv");
    let b = modukin([
        "fdyn", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
        "--torques", torques.to_str().unwrap(), "--dt", "1e-3",
    ]);
    let replay = if code(&a) == 0 && code(&b) == 0 {
        let source = ChainConfig::from_path(&cfg).unwrap().trajectory.unwrap().to_spec::<f64>().unwrap();
        let sim = read_csv(&out.join("sim_state.csv")).unwrap();
        worst(sim.rows.iter().map(|r| {
            let s = source.sample(r[0].min(source.duration)).unwrap();
            (0..7).map(|k| (r[1 + k] - s.theta[k]).abs()).fold(0.0, f64::max)
        }))
    } else {
        f64::INFINITY
    };
    items.push(bound("CLI idyn->fdyn replay [rad]", replay, 1e-4));
    items
}

fn c7(dir: &Path) -> Vec<Item> {
    let medium = ModularChain::new(builtin_profile("medium").unwrap()).unwrap();
    let checks = verify::conservation_checks(&medium, DEFAULT_SEED, 5, 1e-3);
    let mut ke = outcome(&checks, "kinetic_energy_drift_without_gravity").max_error;
    let total = outcome(&checks, "total_energy_drift_near_rest").max_error;

    // Weightless runs from anywhere in the angle range.
    let weightless = ModularChain::new(builtin_profile::<f64>("medium").unwrap().with_gravity(Vector3::zeros())).unwrap();
    for s in verify::random_states(DEFAULT_SEED, 5) {
        ke = ke.max(verify::energy_drift(&weightless, &s.theta, &s.omega, 1e-3, 1000));
    }

    let out = dir.join("c7");
    let cfg = fixture("weightless_spin.json");
    let run = modukin(["fdyn", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--duration", "1", "--dt", "1e-3"]);
    let cli = if code(&run) == 0 {
        let e = read_csv(&out.join("energy.csv")).unwrap();
        let k = e.col("kinetic");
        let k0 = e.rows[0][k];
        worst(e.rows.iter().map(|r| (r[k] - k0).abs() / k0))
    } else {
        f64::INFINITY
    };
    vec![
        bound("kinetic drift, no gravity", ke, 1e-6),
        bound("CLI fdyn kinetic drift, no gravity", cli, 1e-6),
        bound("total drift, gravity on", total, 1e-6),
    ]
}

fn c8() -> Vec<Item> {
    let scara = verify::scara_checks(&ScaraArm::default(), DEFAULT_SEED, 100);
    let grasp = verify::grasp_checks(DEFAULT_SEED, 100);
    let hold = grasp_statics(&GraspSpec::new(1.0), &Vector3::zeros()).unwrap();
    let w = STANDARD_GRAVITY;
    let fk = stdout(&modukin(["scara", "fk", "--theta1", "0", "--theta2", "0", "--p", "0.1", "--d1", "0.3", "--d2", "0.3"]));
    let held = modukin(["scara", "grasp", "--mass", "1.0"]);
    let held: serde_json::Value = serde_json::from_str(&stdout(&held)).unwrap_or_default();
    let capped = modukin(["scara", "grasp", "--mass", "1.0", "--mu-min", "0.4", "--normal-cap", "10"]);
    let capped_json: serde_json::Value = serde_json::from_str(&stdout(&capped)).unwrap_or_default();
    vec![
        holds("FK (0,0,0.1) -> (0.6,0,0.1)", outcome(&scara, "scara_fk_example").passed && fk.trim() == r#"{"X":0.6,"Y":0.0,"Z":0.1}"#),
        bound("Jacobian vs FD", outcome(&scara, "scara_jacobian_vs_fd").max_error, 1e-6),
        holds("static hold F_z = w/2, N_L = N_R", hold.f_z == w / 2.0 && hold.n_l == hold.n_r && held["F_z"] == 4.905),
        bound("grasp residual", outcome(&grasp, "grasp_residual").max_error, 1e-12),
        holds(
            "mu-cap infeasible, exit 0",
            outcome(&grasp, "grasp_infeasible_under_cap").passed && code(&capped) == 0 && capped_json.get("infeasible").is_some(),
        ),
    ]
}

/// Torque peaks of the default trajectory, recorded at the first verified
/// run and kept as a regression reference.
const PEAK_TOTAL: [(&str, f64); 3] =
    [("small", 0.8782389429433334), ("medium", 1.8279911479926563), ("large", 3.287372096736063)];

fn audit_torques(path: &Path) -> Result<(usize, f64), String> {
    let t = read_csv(path)?;
    if t.header != expected_header("torques.csv") {
        return Err("torques.csv header".into());
    }
    let c = |n| t.col(n);
    let residual = worst(t.rows.iter().map(|r| {
        (r[c("total")] - (r[c("inertial")] + r[c("coriolis")] + r[c("gravitational")] + r[c("friction")] - r[c("external")])).abs()
    }));
    if t.rows.len() % 7 != 0 || t.rows.chunks(7).any(|s| s.iter().enumerate().any(|(k, r)| r[1] != (k + 1) as f64 || r[0] != s[0][0])) {
        return Err("torques.csv is not 7 rows per sample".into());
    }
    Ok((t.rows.len() / 7, residual))
}

fn c9(dir: &Path) -> Vec<Item> {
    let cfg = fixture("default.json");
    let out = dir.join("c9");
    let mut items = Vec::new();
    let fk = modukin(["fk", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let idyn = modukin(["idyn", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    items.push(holds("fk and idyn exit 0", code(&fk) == 0 && code(&idyn) == 0));

    let mut rows_ok = true;
    let mut o_zero = true;
    for f in ["points_position.csv", "points_velocity.csv", "points_acceleration.csv", "joints_state.csv"] {
        match read_csv(&out.join(f)) {
            Ok(t) => {
                rows_ok &= t.header == expected_header(f) && t.rows.len() == 101;
                if f.starts_with("points") {
                    let cols = ["O_x", "O_y", "O_z"].map(|n| t.col(n));
                    o_zero &= t.rows.iter().all(|r| cols.iter().all(|&c| r[c] == 0.0));
                }
            }
            Err(_) => rows_ok = false,
        }
    }
    let (samples, residual) = audit_torques(&out.join("torques.csv")).unwrap_or((0, f64::INFINITY));
    rows_ok &= samples == 101;
    items.push(holds("schema-valid CSV, 101 rows", rows_ok));
    items.push(bound("breakdown identity per row", residual, 1e-12));
    items.push(holds("O columns identically 0", o_zero));

    let sweep = dir.join("c9-sweep");
    let run = modukin(["idyn", "--config", cfg.to_str().unwrap(), "--out", sweep.to_str().unwrap(), "--profiles", "small,medium,large"]);
    let mut consistent = code(&run) == 0;
    let mut peaks = Vec::new();
    let mut bytes = Vec::new();
    for (name, reference) in PEAK_TOTAL {
        let d = sweep.join(name);
        let summary = read_json(&d.join("torques_summary.json"));
        consistent &= schema_errors("torques_summary.schema.json", &summary).is_empty();
        consistent &= schema_errors("manifest.schema.json", &read_json(&d.join("manifest.json"))).is_empty();
        consistent &= summary["profile"] == name;
        let (n, r) = audit_torques(&d.join("torques.csv")).unwrap_or((0, f64::INFINITY));
        consistent &= n == 101 && r < 1e-12;
        let per_dof: Vec<f64> = summary["peak_abs"]["total"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        let total = summary["peak_total"].as_f64().unwrap();
        consistent &= ((total - reference) / reference).abs() < 1e-9;
        peaks.push((total, per_dof));
        bytes.push(std::fs::read(d.join("torques.csv")).unwrap_or_default());
    }
    let distinct = bytes[0] != bytes[1] && bytes[1] != bytes[2] && bytes[0] != bytes[2];
    let increasing = peaks.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1.iter().zip(&w[1].1).all(|(a, b)| a < b));
    items.push(holds("sweep: 3 distinct, consistent sets", consistent && distinct));
    items.push(Item {
        label: "sweep peaks strictly increasing".into(),
        ok: increasing,
        detail: format!("peak |total| {:.4} < {:.4} < {:.4} N m", peaks[0].0, peaks[1].0, peaks[2].0),
    });
    items
}

/// Runs `args` into `out`, then replays its manifest in place and into a
/// fresh directory. Returns whether all three output sets agree.
fn replay_matches(args: &[&str], out: &Path, fresh: &Path) -> Result<(), String> {
    let run = modukin(args);
    if code(&run) > 1 {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&run.stderr)));
    }
    let first = snapshot(out);
    let manifest = out.join("manifest.json");
    if !schema_errors("manifest.schema.json", &read_json(&manifest)).is_empty() {
        return Err("manifest violates its schema".into());
    }
    let kept = std::fs::read(&manifest).unwrap();
    std::fs::remove_dir_all(out).unwrap();
    std::fs::create_dir_all(out).unwrap();
    let copy = out.with_extension("manifest.json");
    std::fs::write(&copy, &kept).unwrap();
    let again = modukin(["rerun", copy.to_str().unwrap()]);
    if code(&again) != code(&run) || snapshot(out) != first {
        return Err(format!("{} in-place rerun differs", args[0]));
    }
    let moved = modukin(["rerun", copy.to_str().unwrap(), "--out", fresh.to_str().unwrap()]);
    let mut a = first.clone();
    let mut b = snapshot(fresh);
    a.remove(Path::new("manifest.json"));
    b.remove(Path::new("manifest.json"));
    if code(&moved) != code(&run) || a != b {
        return Err(format!("{} relocated rerun differs", args[0]));
    }
    Ok(())
}

fn c10(dir: &Path) -> Vec<Item> {
    let d = |s: &str| dir.join("c10").join(s).to_str().unwrap().to_string();
    let rt = fixture("round_trip.json").to_str().unwrap().to_string();
    let loaded = fixture("loaded.json").to_str().unwrap().to_string();
    let idyn_out = d("idyn");
    let torques = format!("{idyn_out}/torques.csv");
    let runs: Vec<(&str, Vec<String>, String, String)> = vec![
        ("fk", vec!["fk".into(), "--config".into(), loaded.clone(), "--out".into(), d("fk")], d("fk"), d("fk2")),
        ("idyn", vec!["idyn".into(), "--config".into(), rt.clone(), "--out".into(), idyn_out.clone()], idyn_out.clone(), d("idyn2")),
        (
            "fdyn",
            vec!["fdyn".into(), "--config".into(), rt, "--out".into(), d("fdyn"), "--torques".into(), torques, "--dt".into(), "2e-3".into()],
            d("fdyn"),
            d("fdyn2"),
        ),
        ("check", vec!["check".into(), "--config".into(), loaded.clone(), "--out".into(), d("check")], d("check"), d("check2")),
        (
            "scara",
            ["scara", "idyn", "--theta1", "0.4", "--theta2-dot", "-1.5", "--p-ddot", "0.3", "--force", "1,-2,0.5", "--out"]
                .iter()
                .map(|s| s.to_string())
                .chain([d("scara")])
                .collect(),
            d("scara"),
            d("scara2"),
        ),
    ];
    let mut items = Vec::new();
    for (name, args, out, fresh) in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = replay_matches(&args, Path::new(out), Path::new(fresh));
        items.push(Item {
            label: format!("{name} rerun"),
            ok: r.is_ok(),
            detail: r.err().unwrap_or_else(|| "byte-identical".into()),
        });
    }
    let report = read_json(&Path::new(&d("check")).join("check_report.json"));
    items.push(holds("check report matches schema", schema_errors("check_report.schema.json", &report).is_empty()));
    items
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let dir = tmp.path();
    type Criterion<'a> = (u32, &'a str, Box<dyn Fn() -> Vec<Item> + 'a>);
    let criteria: Vec<Criterion> = vec![
        (1, "kinematic FD oracle suite", Box::new(c1)),
        (2, "chain rigidity", Box::new(c2)),
        (3, "zero-pose closed form", Box::new(c3)),
        (4, "dynamics structure", Box::new(c4)),
        (5, "reduced-model oracle", Box::new(c5)),
        (6, "ID/FD round trip", Box::new(|| c6(dir))),
        (7, "conservation", Box::new(|| c7(dir))),
        (8, "SCARA suite", Box::new(c8)),
        (9, "torque-pipeline structure", Box::new(|| c9(dir))),
        (10, "determinism", Box::new(|| c10(dir))),
    ];
    let mut failed = Vec::new();
    let mut notes = BTreeMap::new();
    for (n, title, f) in &criteria {
        let start = Instant::now();
        let items = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(items) => items,
            Err(e) => {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                vec![Item { label: "panicked".into(), ok: false, detail: msg.unwrap_or_default() }]
            }
        };
        let ok = items.iter().all(|i| i.ok);
        let detail: Vec<String> = items
            .iter()
            .map(|i| format!("{}{}: {}", if i.ok { "" } else { "!! " }, i.label, i.detail))
            .collect();
        println!(
            "{} criterion {n:>2} {title} [{:.1} s] {}",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            detail.join("; ")
        );
        if !ok {
            failed.push(*n);
        }
        notes.insert(*n, ok);
    }
    info_lines();
    if failed.is_empty() {
        println!("acceptance: all {} criteria PASS", notes.len());
    } else {
        println!("acceptance: FAILED criteria {failed:?}");
        std::process::exit(1);
    }
}

/// Figures reported for context; they do not gate anything.
fn info_lines() {
    let chain = ModularChain::new(builtin_profile("medium").unwrap()).unwrap();
    let fp = FrictionParameters::frictionless();
    let w = InteractionWrenches::default();
    let upright = TrajectorySpec::quintic(Joints::zeros(), Joints::repeat(0.5), 1.0, 1000.0).unwrap();
    let e = verify::round_trip_error(&chain, &upright, &fp, &w, 1e-3);
    println!("INFO round trip from the upright pose (0 -> 0.5 rad, medium): {e:.2e} rad");
    let drift = worst(
        verify::random_states(DEFAULT_SEED, 5).iter().map(|s| verify::energy_drift(&chain, &s.theta, &s.omega, 1e-3, 1000)),
    );
    println!("INFO total-energy drift, gravity on, full-range random starts: {drift:.2e}");
    let rest = rest_posture::<f64>();
    println!("INFO gravity torque at the rest posture: {:.2e} N m", chain.gravity_vector(&rest).amax());
}
