use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "modukin", version, about = "Kinematics and dynamics of a 7-DOF modular upper-limb rehab chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint-point positions, velocities and accelerations along the trajectory.
    Fk(RunArgs),
    /// Inverse dynamics with the per-source torque breakdown.
    Idyn(RunArgs),
    /// RK4 forward simulation under recorded or zero torques.
    Fdyn {
        #[command(flatten)]
        run: RunArgs,
        /// `torques.csv` from `idyn`, or `zero`.
        #[arg(long, default_value = "zero")]
        torques: String,
        /// Simulated span in seconds; defaults to the trajectory duration.
        #[arg(long, allow_negative_numbers = true)]
        duration: Option<f64>,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        dt: f64,
    },
    /// Runs the self-verification suite.
    Check(RunArgs),
    /// SCARA reference arm and grasp statics; prints one JSON line.
    Scara {
        #[command(subcommand)]
        action: ScaraAction,
        /// Also write the result and a manifest into this directory.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Re-executes a run from its `manifest.json`.
    Rerun {
        manifest: PathBuf,
        /// Write into this directory instead of the recorded one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "modukin-out")]
    pub out: PathBuf,
    /// Comma-separated built-in profiles; each gets its own subdirectory.
    #[arg(long, value_delimiter = ',')]
    pub profiles: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum ScaraAction {
    /// Tool position `(X, Y, Z)`.
    Fk(ScaraPose),
    /// 3x3 Jacobian.
    Jac(ScaraPose),
    /// Joint torques for a given motion and tool force.
    Idyn(ScaraMotion),
    /// Jaw forces holding an object.
    Grasp(GraspArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ScaraPose {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub d1: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ScaraMotion {
    #[command(flatten)]
    #[serde(flatten)]
    pub pose: ScaraPose,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta1_dot: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta2_dot: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p_dot: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta1_ddot: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta2_ddot: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p_ddot: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m1: f64,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub m2: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub m3: f64,
    /// External force at the tool, `fx,fy,fz`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.0, 0.0], allow_negative_numbers = true)]
    pub force: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GraspArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mass: f64,
    /// Defaults to `mass * 9.81`.
    #[arg(long, allow_negative_numbers = true)]
    pub weight: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_min: Option<f64>,
    /// Defaults to `mu_min`.
    #[arg(long, allow_negative_numbers = true)]
    pub mu_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub normal_cap: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub right_normal: Option<f64>,
    /// Object acceleration along x (jaw axis).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ax: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ay: f64,
}
