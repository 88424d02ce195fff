//! Scenario loading: a flat TOML file with the model parameters, an
//! optional simulation block, and command-line overrides on top.

use anyhow::{bail, Context, Result};
use review_game::{Capacity, DynamicPolicy, Population, Technology};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub alpha: Option<f64>,
    pub theta_skilled: Option<f64>,
    pub theta_unskilled: Option<f64>,
    pub sigma: Option<f64>,
    pub n: Option<f64>,
    pub kappa: Option<f64>,
    pub z_bar: Option<f64>,
    pub simulation: Option<SimulationBlock>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationBlock {
    pub population_size: Option<u64>,
    pub seed: Option<u64>,
}

/// Fully resolved scenario after file + flag merging.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub population: Population,
    pub technology: Technology,
    pub capacity: Capacity,
    pub kappa: Option<f64>,
    pub z_bar: Option<f64>,
    pub population_size: u64,
    pub seed: u64,
}

pub const DEFAULT_POPULATION_SIZE: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;

/// Scalar overrides shared by every subcommand.
#[derive(Debug, Clone, Copy, Default, clap::Args)]
pub struct Overrides {
    /// Share of skilled authors, in (0, 1)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Skilled productivity θ₁
    #[arg(long)]
    pub theta_skilled: Option<f64>,
    /// Unskilled productivity θ₀
    #[arg(long)]
    pub theta_unskilled: Option<f64>,
    /// Signal noise standard deviation
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Journal capacity, in (0, 1)
    #[arg(long)]
    pub n: Option<f64>,
    /// Challenge cost
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Evaluation threshold
    #[arg(long)]
    pub z_bar: Option<f64>,
    /// Simulated population size
    #[arg(long)]
    pub population_size: Option<u64>,
    /// Simulation seed
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn load(config: Option<&Path>, overrides: &Overrides) -> Result<Scenario> {
    let file: ScenarioFile = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            toml::from_str(&text)
                .with_context(|| format!("malformed config file {}", path.display()))?
        }
        None => ScenarioFile::default(),
    };
    let sim = file.simulation.unwrap_or_default();

    let require = |flag: Option<f64>, field: Option<f64>, name: &str| -> Result<f64> {
        match flag.or(field) {
            Some(v) => Ok(v),
            None => bail!("missing parameter '{name}': set it in the config file or pass --{}", name.replace('_', "-")),
        }
    };
    let alpha = require(overrides.alpha, file.alpha, "alpha")?;
    let theta_skilled = require(overrides.theta_skilled, file.theta_skilled, "theta_skilled")?;
    let theta_unskilled = require(
        overrides.theta_unskilled,
        file.theta_unskilled,
        "theta_unskilled",
    )?;
    let sigma = require(overrides.sigma, file.sigma, "sigma")?;
    let n = require(overrides.n, file.n, "n")?;

    Ok(Scenario {
        population: Population::new(alpha, theta_skilled, theta_unskilled)?,
        technology: Technology::new(sigma)?,
        capacity: Capacity::new(n)?,
        kappa: overrides.kappa.or(file.kappa),
        z_bar: overrides.z_bar.or(file.z_bar),
        population_size: overrides
            .population_size
            .or(sim.population_size)
            .unwrap_or(DEFAULT_POPULATION_SIZE),
        seed: overrides.seed.or(sim.seed).unwrap_or(DEFAULT_SEED),
    })
}

impl Scenario {
    pub fn sigma(&self) -> f64 {
        self.technology.sigma()
    }

    /// The dynamic policy named by the scenario, requiring kappa and
    /// either an explicit threshold or `solve_z` to produce one.
    pub fn dynamic_policy(&self, z_bar: f64) -> Result<DynamicPolicy> {
        match self.kappa {
            Some(kappa) => Ok(DynamicPolicy::new(z_bar, kappa)?),
            None => bail!("this command needs a challenge cost: set 'kappa' or pass --kappa"),
        }
    }
}
