//! Batch front end for the modular rehab chain: turns a JSON config into
//! plot-ready CSV, JSON summaries and verification reports.
//!
//! Every output directory gets a `manifest.json`; [`rerun`] replays it and
//! reproduces the same bytes.

pub mod args;
pub mod manifest;
mod output;
mod pipelines;
mod scara;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use modukin_core::model::ChainConfig;
use modukin_core::trajectory::TrajectoryConfig;
use modukin_core::verify::DEFAULT_SEED;
use modukin_core::{ChainTable, ModularChain, Profile, TrajectorySpec};

pub use args::{Cli, Command, RunArgs, ScaraAction};
pub use manifest::{Job, RunManifest, MANIFEST_FILE};
pub use output::num as format_number;

/// Result of a command that ran to completion.
#[derive(Debug, Default)]
pub struct Report {
    /// Lines meant for stdout.
    pub lines: Vec<String>,
    pub failed_checks: usize,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.failed_checks > 0 {
            1
        } else {
            0
        }
    }

    fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.failed_checks += other.failed_checks;
    }
}

/// Exit code for an error that stopped a command.
pub const ERROR_EXIT: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
enum ProfileChoice {
    Config,
    Builtin(String),
}

/// One chain pipeline to run into one directory.
struct Target {
    profile: ProfileChoice,
    dir: PathBuf,
}

/// Everything a chain job needs, resolved from the config.
pub(crate) struct RunContext {
    pub chain: ModularChain,
    pub friction: modukin_core::FrictionParameters,
    pub wrenches: modukin_core::InteractionWrenches,
    pub trajectory: TrajectorySpec,
    pub initial_state: Option<modukin_core::JointState>,
    pub seed: u64,
}

pub fn execute(command: Command) -> Result<Report> {
    match command {
        Command::Fk(run) => run_chain(Job::Fk, &run),
        Command::Idyn(run) => run_chain(Job::Idyn, &run),
        Command::Check(run) => run_chain(Job::Check, &run),
        Command::Fdyn { run, torques, duration, dt } => {
            let torques = if torques == "zero" { torques } else { absolute(Path::new(&torques))? };
            run_chain(Job::Fdyn { torques, duration, dt }, &run)
        }
        Command::Scara { action, out } => run_scara(&action, out.as_deref()),
        Command::Rerun { manifest, out } => rerun(&manifest, out.as_deref()),
    }
}

fn absolute(p: &Path) -> Result<String> {
    let abs = std::path::absolute(p).with_context(|| format!("cannot resolve {}", p.display()))?;
    Ok(abs.display().to_string())
}

fn run_chain(job: Job, run: &RunArgs) -> Result<Report> {
    let mut seen = std::collections::BTreeSet::new();
    for p in &run.profiles {
        if !seen.insert(p) {
            bail!("profile {p} listed twice");
        }
    }
    let targets: Vec<Target> = if run.profiles.is_empty() {
        vec![Target { profile: ProfileChoice::Config, dir: run.out.clone() }]
    } else {
        run.profiles
            .iter()
            .map(|p| Target { profile: ProfileChoice::Builtin(p.clone()), dir: run.out.join(p) })
            .collect()
    };
    run_targets(&job, &run.config, &targets, run.seed, None)
}

struct Loaded {
    config: ChainConfig,
    path: String,
    sha: String,
}

fn load_config(path: &Path) -> Result<Loaded> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).context("config is not UTF-8")?;
    let config = ChainConfig::from_json_str(text).with_context(|| format!("invalid config {}", path.display()))?;
    Ok(Loaded { config, path: absolute(path)?, sha: manifest::sha256_hex(&bytes) })
}

fn trajectory_of(config: &ChainConfig) -> Result<TrajectorySpec> {
    match &config.trajectory {
        Some(t) => Ok(t.to_spec()?),
        None => Ok(TrajectorySpec::demo()),
    }
}

fn trajectory_hash(spec: &TrajectorySpec) -> Result<String> {
    let canonical = serde_json::to_string(&TrajectoryConfig::from_spec(spec))?;
    Ok(manifest::sha256_hex(canonical.as_bytes()))
}

fn resolve_profile(config: &ChainConfig, choice: &ProfileChoice) -> Result<Profile> {
    Ok(match choice {
        ProfileChoice::Config => config.profile()?,
        ProfileChoice::Builtin(name) => config.builtin_variant(name)?,
    })
}

/// `expect` carries the hashes recorded in a manifest being replayed.
fn run_targets(
    job: &Job,
    config_path: &Path,
    targets: &[Target],
    seed: Option<u64>,
    expect: Option<&RunManifest>,
) -> Result<Report> {
    let loaded = load_config(config_path)?;
    let config = &loaded.config;
    let trajectory = trajectory_of(config)?;
    let traj_sha = trajectory_hash(&trajectory)?;
    if let Some(m) = expect {
        if m.config_sha256.as_deref() != Some(loaded.sha.as_str()) {
            bail!("config {} changed since the manifest was written", loaded.path);
        }
        if m.trajectory_sha256.as_deref() != Some(traj_sha.as_str()) {
            bail!("trajectory differs from the one recorded in the manifest");
        }
    }
    let seed = seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    let table = ChainTable::build(&config.corrections)?;
    let friction = config.friction()?;
    let wrenches = config.wrenches()?;
    let initial_state = config.initial_state()?;

    let mut contexts = Vec::new();
    for t in targets {
        let profile = resolve_profile(config, &t.profile)?;
        let name = profile.name.clone();
        let chain = ModularChain::with_table(profile, table.clone())?;
        let ctx = RunContext { chain, friction, wrenches, trajectory: trajectory.clone(), initial_state, seed };
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            job: job.clone(),
            config_path: Some(loaded.path.clone()),
            config_sha256: Some(loaded.sha.clone()),
            profile: Some(name),
            profile_from_sweep: matches!(t.profile, ProfileChoice::Builtin(_)),
            trajectory_sha256: Some(traj_sha.clone()),
            output_dir: absolute(&t.dir)?,
            seed: Some(seed),
        };
        contexts.push((ctx, manifest, &t.dir));
    }

    // Profiles are independent pure pipelines writing to disjoint
    // directories; results are collected in the order given.
    let results: Vec<Result<Report>> = std::thread::scope(|s| {
        let handles: Vec<_> = contexts
            .iter()
            .map(|(ctx, manifest, dir)| s.spawn(move || run_one(job, ctx, manifest, dir)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(anyhow::anyhow!("worker panicked"))))
            .collect()
    });
    let mut report = Report::default();
    for r in results {
        report.merge(r?);
    }
    Ok(report)
}

fn run_one(job: &Job, ctx: &RunContext, manifest: &RunManifest, dir: &Path) -> Result<Report> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let report = match job {
        Job::Fk => pipelines::fk(ctx, dir)?,
        Job::Idyn => pipelines::idyn(ctx, dir)?,
        Job::Fdyn { torques, duration, dt } => pipelines::fdyn(ctx, dir, torques, *duration, *dt)?,
        Job::Check => pipelines::check(ctx, dir)?,
        Job::Scara { .. } => unreachable!("scara has no chain"),
    };
    output::write_json(&dir.join(MANIFEST_FILE), manifest)?;
    Ok(report)
}

fn run_scara(action: &ScaraAction, out: Option<&Path>) -> Result<Report> {
    let line = serde_json::to_string(&scara::evaluate(action)?)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        std::fs::write(dir.join("scara.json"), format!("{line}\n"))?;
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            job: Job::Scara { action: action.clone() },
            config_path: None,
            config_sha256: None,
            profile: None,
            profile_from_sweep: false,
            trajectory_sha256: None,
            output_dir: absolute(dir)?,
            seed: None,
        };
        output::write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    }
    Ok(Report { lines: vec![line], failed_checks: 0 })
}

/// Replays the run recorded in `manifest`, into `out` if given.
pub fn rerun(manifest: &Path, out: Option<&Path>) -> Result<Report> {
    let m = RunManifest::load(manifest)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&m.output_dir));
    if let Job::Scara { action } = &m.job {
        return run_scara(action, Some(&dir));
    }
    let config = m.config_path.as_deref().context("manifest has no config path")?;
    let profile = match (&m.profile, m.profile_from_sweep) {
        (Some(name), true) => ProfileChoice::Builtin(name.clone()),
        _ => ProfileChoice::Config,
    };
    run_targets(&m.job, Path::new(config), &[Target { profile, dir }], m.seed, Some(&m))
}
