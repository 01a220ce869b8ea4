use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::ScaraAction;

pub const MANIFEST_FILE: &str = "manifest.json";

/// What was run, minus where and with which chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Job {
    Fk,
    Idyn,
    Fdyn {
        torques: String,
        duration: Option<f64>,
        dt: f64,
    },
    Check,
    Scara {
        action: ScaraAction,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Fk => "fk",
            Job::Idyn => "idyn",
            Job::Fdyn { .. } => "fdyn",
            Job::Check => "check",
            Job::Scara { .. } => "scara",
        }
    }
}

/// Written next to every output set; enough to redo the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    #[serde(flatten)]
    pub job: Job,
    pub config_path: Option<String>,
    pub config_sha256: Option<String>,
    /// Resolved profile name.
    pub profile: Option<String>,
    /// The profile came from `--profiles` rather than the config itself.
    #[serde(default)]
    pub profile_from_sweep: bool,
    pub trajectory_sha256: Option<String>,
    pub output_dir: String,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid manifest {}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::GraspArgs;

    #[test]
    fn round_trips_through_json() {
        let jobs = [
            Job::Fk,
            Job::Fdyn { torques: "zero".into(), duration: None, dt: 1e-3 },
            Job::Scara {
                action: ScaraAction::Grasp(GraspArgs {
                    mass: 1.0,
                    weight: None,
                    mu_min: Some(0.4),
                    mu_max: None,
                    normal_cap: Some(10.0),
                    right_normal: None,
                    ax: 0.0,
                    ay: 0.5,
                }),
            },
        ];
        for job in jobs {
            let m = RunManifest {
                tool_version: "0.1.0".into(),
                job,
                config_path: Some("/tmp/c.json".into()),
                config_sha256: Some(sha256_hex(b"{}")),
                profile: Some("medium".into()),
                profile_from_sweep: true,
                trajectory_sha256: None,
                output_dir: "/tmp/out".into(),
                seed: Some(3),
            };
            let text = serde_json::to_string(&m).unwrap();
            assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
        }
    }

    #[test]
    fn digest_is_hex() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
