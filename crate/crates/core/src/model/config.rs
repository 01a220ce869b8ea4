use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    builtin_profile, validate_profile, AnthropometricProfile, FrictionParameters, InertiaModel,
    InteractionWrenches, JointPointId, JointState, LinkInertia, LinkLengths, ModelError, DOF,
    LENGTH_COUNT, MOVING_LINKS,
};
use crate::kinematics::CorrectionState;
use crate::trajectory::TrajectoryConfig;
use crate::Joints;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config must name a built-in `profile` or give explicit `lengths_m` and `masses_kg`")]
    MissingProfile,
    #[error("invalid chain parameters: {}", list(.0))]
    Invalid(Vec<ModelError>),
}

fn list(errs: &[ModelError]) -> String {
    errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<ModelError> for ConfigError {
    fn from(e: ModelError) -> Self {
        ConfigError::Invalid(vec![e])
    }
}

/// Friction block of the configuration file. Missing arrays default to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrictionConfig {
    #[serde(default)]
    pub viscous_joint: Option<Vec<f64>>,
    #[serde(default)]
    pub coulomb_joint: Option<Vec<f64>>,
    #[serde(default)]
    pub viscous_skin: Option<Vec<f64>>,
    #[serde(default)]
    pub smoothing_eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuffForce {
    pub force: [f64; 3],
    #[serde(default)]
    pub point: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrenchConfig {
    #[serde(default)]
    pub gamma1: Option<CuffForce>,
    #[serde(default)]
    pub gamma2: Option<CuffForce>,
    #[serde(default)]
    pub lambda_u: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub theta: Vec<f64>,
    #[serde(default)]
    pub omega: Option<Vec<f64>>,
}

/// The JSON configuration file.
///
/// Either `"profile"` names a built-in size class, or `"lengths_m"` and
/// `"masses_kg"` describe a custom chain. Every other block is optional and
/// unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths_m: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses_kg: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia_model: Option<InertiaModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gravity_mps2: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub friction: Option<FrictionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wrenches: Option<WrenchConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialState>,
    /// Correction-ledger overrides keyed by entry id.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub corrections: BTreeMap<String, CorrectionState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn fixed<const N: usize>(field: &'static str, v: &[f64]) -> Result<[f64; N], ModelError> {
    v.try_into().map_err(|_| ModelError::WrongLength {
        field,
        expected: N,
        got: v.len(),
    })
}

fn joints(field: &'static str, v: &Option<Vec<f64>>) -> Result<Joints<f64>, ModelError> {
    match v {
        None => Ok(Joints::zeros()),
        Some(v) => Ok(Joints::from(fixed::<DOF>(field, v)?)),
    }
}

impl ChainConfig {
    pub fn from_json_str(s: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    /// Resolves the profile described by this config.
    pub fn profile(&self) -> Result<AnthropometricProfile<f64>, ConfigError> {
        let base = match (&self.profile, &self.lengths_m, &self.masses_kg) {
            (Some(name), _, _) => builtin_profile(name)?,
            (None, Some(_), Some(_)) => builtin_profile::<f64>("medium").map(|mut p| {
                p.name = "custom".into();
                p
            })?,
            _ => return Err(ConfigError::MissingProfile),
        };
        self.apply_overrides(base, true)
    }

    /// The built-in profile `name` with this config's gravity and inertia
    /// model overrides applied. Explicit lengths and masses are ignored,
    /// since the size class defines them.
    pub fn builtin_variant(&self, name: &str) -> Result<AnthropometricProfile<f64>, ConfigError> {
        self.apply_overrides(builtin_profile(name)?, false)
    }

    fn apply_overrides(
        &self,
        mut p: AnthropometricProfile<f64>,
        geometry: bool,
    ) -> Result<AnthropometricProfile<f64>, ConfigError> {
        let mut errs = Vec::new();
        if geometry {
            if let Some(l) = &self.lengths_m {
                match fixed::<LENGTH_COUNT>("lengths_m", l) {
                    Ok(l) => p.lengths = LinkLengths(l),
                    Err(e) => errs.push(e),
                }
            }
            if let Some(m) = &self.masses_kg {
                match fixed::<MOVING_LINKS>("masses_kg", m) {
                    Ok(m) => p.inertia = LinkInertia::uniform_rods(m),
                    Err(e) => errs.push(e),
                }
            }
        }
        if let Some(model) = self.inertia_model {
            p.inertia.models = [model; MOVING_LINKS];
        }
        if let Some(g) = self.gravity_mps2 {
            p.gravity = Vector3::from(g);
        }
        if !errs.is_empty() {
            return Err(ConfigError::Invalid(errs));
        }
        validate_profile(p).map_err(ConfigError::Invalid)
    }

    pub fn friction(&self) -> Result<FrictionParameters<f64>, ConfigError> {
        let Some(f) = &self.friction else {
            return Ok(FrictionParameters::frictionless());
        };
        let fp = FrictionParameters {
            viscous_joint: joints("friction.viscous_joint", &f.viscous_joint)?,
            coulomb_joint: joints("friction.coulomb_joint", &f.coulomb_joint)?,
            viscous_skin: joints("friction.viscous_skin", &f.viscous_skin)?,
            smoothing_eps: f.smoothing_eps.unwrap_or(1e-3),
        };
        let errs = fp.validate();
        if errs.is_empty() {
            Ok(fp)
        } else {
            Err(ConfigError::Invalid(errs))
        }
    }

    pub fn wrenches(&self) -> Result<InteractionWrenches<f64>, ConfigError> {
        let mut w = InteractionWrenches::default();
        let Some(cfg) = &self.wrenches else {
            return Ok(w);
        };
        if let Some(g) = &cfg.gamma1 {
            w.gamma1 = Vector3::from(g.force);
            if let Some(p) = &g.point {
                w.gamma1_point = p.parse::<JointPointId>()?;
            }
        }
        if let Some(g) = &cfg.gamma2 {
            w.gamma2 = Vector3::from(g.force);
            if let Some(p) = &g.point {
                w.gamma2_point = p.parse::<JointPointId>()?;
            }
        }
        w.lambda_u = joints("wrenches.lambda_u", &cfg.lambda_u)?;
        let finite = w.gamma1.iter().chain(w.gamma2.iter()).chain(w.lambda_u.iter());
        if let Some(bad) = finite.clone().position(|v| !v.is_finite()) {
            return Err(ModelError::NonFiniteState {
                name: "wrenches",
                dof: bad + 1,
            }
            .into());
        }
        Ok(w)
    }

    /// Initial `(θ, ω)` if the config pins one.
    pub fn initial_state(&self) -> Result<Option<JointState<f64>>, ConfigError> {
        let Some(s) = &self.initial_state else {
            return Ok(None);
        };
        let theta = Joints::from(fixed::<DOF>("initial_state.theta", &s.theta)?);
        let omega = joints("initial_state.omega", &s.omega)?;
        Ok(Some(JointState::new(theta, omega, Joints::zeros())?))
    }
}
