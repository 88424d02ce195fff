//! Subcommand implementations: each builds a [`Report`] from the solved
//! scenario.

use crate::output::{Report, Value};
use crate::scenario::Scenario;
use anyhow::Result;
use review_game::model::{average_cost, interior_margin, ReviewPolicy};
use review_game::monte_carlo::{EffortSource, SimConfig};
use review_game::sweep::{BaseScenario, SweepParameter, SweepSolver, SweepSpec};
use review_game::{dynamic, first_best, model, monte_carlo, one_shot, sweep};

pub fn first_best(scenario: &Scenario) -> Result<Report> {
    let fb = first_best::first_best_solve(&scenario.population, scenario.capacity)?;
    let accept = first_best::implementing_probability(&scenario.population, scenario.capacity);
    Ok(Report {
        columns: vec![
            "effort_skilled",
            "effort_unskilled",
            "success_skilled",
            "success_unskilled",
            "beta",
            "multiplier",
            "constrained",
            "accept_probability",
        ],
        rows: vec![vec![
            Value::Float(fb.effort_skilled),
            Value::Float(fb.effort_unskilled),
            Value::Float(fb.success_skilled),
            Value::Float(fb.success_unskilled),
            Value::Float(fb.beta),
            Value::Float(fb.multiplier),
            Value::Bool(fb.constrained),
            Value::Float(accept),
        ]],
        summary: vec![(
            "capacity_constraint".into(),
            Value::text(if fb.constrained { "binding" } else { "slack" }),
        )],
    })
}

fn branch_name(branch: one_shot::ThresholdBranch) -> &'static str {
    match branch {
        one_shot::ThresholdBranch::CapacityBound => "capacity_bound",
        one_shot::ThresholdBranch::Unconstrained => "unconstrained",
    }
}

pub fn one_shot(scenario: &Scenario) -> Result<Report> {
    let eq = one_shot::solve_equilibrium(
        &scenario.population,
        scenario.sigma(),
        scenario.capacity,
    )?;
    let out = eq.outcome;
    let gap = out.rate_high - out.rate_low;
    let skilled = one_shot::best_effort(
        scenario.population.theta_skilled(),
        eq.z_bar,
        scenario.sigma(),
    );
    let unskilled = one_shot::best_effort(
        scenario.population.theta_unskilled(),
        eq.z_bar,
        scenario.sigma(),
    );
    Ok(Report {
        columns: vec![
            "z_bar",
            "branch",
            "beta",
            "impact",
            "yield",
            "rate_high",
            "rate_low",
            "rate_gap",
            "effort_skilled",
            "effort_unskilled",
            "success_skilled",
            "success_unskilled",
            "margin_skilled",
            "margin_unskilled",
            "interior_all",
        ],
        rows: vec![vec![
            Value::Float(eq.z_bar),
            Value::text(branch_name(eq.branch)),
            Value::Float(out.beta),
            Value::Float(out.impact),
            Value::Float(out.yield_),
            Value::Float(out.rate_high),
            Value::Float(out.rate_low),
            Value::Float(gap),
            Value::Float(skilled.effort),
            Value::Float(unskilled.effort),
            Value::Float(skilled.success_rate),
            Value::Float(unskilled.success_rate),
            Value::Float(interior_margin(scenario.population.theta_skilled(), gap)),
            Value::Float(interior_margin(scenario.population.theta_unskilled(), gap)),
            Value::Bool(out.interior_all),
        ]],
        summary: vec![(
            "average_cost".into(),
            Value::Float(average_cost(&scenario.population)),
        )],
    })
}

fn dynamic_report(scenario: &Scenario, policy: model::DynamicPolicy) -> Report {
    let out = dynamic::aggregate_dynamic(&scenario.population, policy, scenario.sigma());
    let gap = out.virtual_rate_high - out.virtual_rate_low;
    let skilled = dynamic::author_best_response(
        scenario.population.theta_skilled(),
        policy,
        scenario.sigma(),
    );
    let unskilled = dynamic::author_best_response(
        scenario.population.theta_unskilled(),
        policy,
        scenario.sigma(),
    );
    Report {
        columns: vec![
            "z_bar",
            "kappa",
            "regime",
            "beta_hat",
            "impact_hat",
            "yield_hat",
            "total_rate_high",
            "total_rate_low",
            "virtual_rate_high",
            "virtual_rate_low",
            "tau",
            "delta",
            "effort_skilled",
            "effort_unskilled",
            "challenge_high",
            "challenge_low",
            "margin_skilled",
            "margin_unskilled",
            "interior_all",
        ],
        rows: vec![vec![
            Value::Float(policy.z_bar),
            Value::Float(policy.kappa),
            Value::text(out.regime.to_string()),
            Value::Float(out.beta_hat),
            Value::Float(out.impact_hat),
            Value::Float(out.yield_hat),
            Value::Float(out.total_rate_high),
            Value::Float(out.total_rate_low),
            Value::Float(out.virtual_rate_high),
            Value::Float(out.virtual_rate_low),
            Value::Float(out.tau),
            Value::Float(out.delta),
            Value::Float(skilled.effort),
            Value::Float(unskilled.effort),
            Value::Bool(skilled.challenge_high),
            Value::Bool(skilled.challenge_low),
            Value::Float(interior_margin(scenario.population.theta_skilled(), gap)),
            Value::Float(interior_margin(scenario.population.theta_unskilled(), gap)),
            Value::Bool(out.interior_all),
        ]],
        summary: vec![(
            "average_cost".into(),
            Value::Float(average_cost(&scenario.population)),
        )],
    }
}

pub fn dynamic(scenario: &Scenario) -> Result<Report> {
    // Evaluate at the given threshold, or at the capacity-binding one.
    let z_bar = match scenario.z_bar {
        Some(z) => z,
        None => {
            let policy = scenario.dynamic_policy(0.0)?;
            dynamic::threshold_for_capacity(
                &scenario.population,
                scenario.sigma(),
                scenario.capacity,
                policy.kappa,
            )?
        }
    };
    let policy = scenario.dynamic_policy(z_bar)?;
    Ok(dynamic_report(scenario, policy))
}

pub fn optimize(scenario: &Scenario) -> Result<Report> {
    let (policy, out) = dynamic::optimize_policy(
        &scenario.population,
        scenario.sigma(),
        scenario.capacity,
    )?;
    let one_shot_eq = one_shot::solve_equilibrium(
        &scenario.population,
        scenario.sigma(),
        scenario.capacity,
    )?;
    let mut report = dynamic_report(scenario, policy);
    report.summary = vec![
        ("one_shot_z_bar".into(), Value::Float(one_shot_eq.z_bar)),
        (
            "one_shot_impact".into(),
            Value::Float(one_shot_eq.outcome.impact),
        ),
        (
            "impact_gain".into(),
            Value::Float(out.impact_hat - one_shot_eq.outcome.impact),
        ),
    ];
    Ok(report)
}

pub fn simulate(scenario: &Scenario, grid_oracle: bool) -> Result<Report> {
    let (policy, mode) = match scenario.kappa {
        Some(kappa) => {
            let z_bar = match scenario.z_bar {
                Some(z) => z,
                None => dynamic::threshold_for_capacity(
                    &scenario.population,
                    scenario.sigma(),
                    scenario.capacity,
                    kappa,
                )?,
            };
            (
                ReviewPolicy::Dynamic(model::DynamicPolicy::new(z_bar, kappa)?),
                "dynamic",
            )
        }
        None => {
            let z_bar = match scenario.z_bar {
                Some(z) => z,
                None => one_shot::capacity_threshold(
                    &scenario.population,
                    scenario.sigma(),
                    scenario.capacity,
                )?,
            };
            (
                ReviewPolicy::OneShot(model::OneShotPolicy::new(z_bar)?),
                "one_shot",
            )
        }
    };
    let config = SimConfig {
        population_size: scenario.population_size,
        seed: scenario.seed,
        effort_source: if grid_oracle {
            EffortSource::GridOracle
        } else {
            EffortSource::Analytic
        },
    };
    let est = monte_carlo::simulate(&scenario.population, &policy, scenario.sigma(), &config);
    let (beta, yield_, impact) =
        monte_carlo::analytic_counterparts(&scenario.population, &policy, scenario.sigma());

    let metric_row = |name: &str, analytic: f64, empirical: f64, se: f64| {
        let z_score = if se > 0.0 {
            (empirical - analytic) / se
        } else {
            0.0
        };
        vec![
            Value::text(name),
            Value::Float(analytic),
            Value::Float(empirical),
            Value::Float(se),
            Value::Float(z_score),
        ]
    };
    Ok(Report {
        columns: vec!["metric", "analytic", "empirical", "std_error", "z_score"],
        rows: vec![
            metric_row("beta", beta, est.beta_emp, est.se_beta),
            metric_row("yield", yield_, est.yield_emp, est.se_yield),
            metric_row("impact", impact, est.impact_emp, est.se_impact),
        ],
        summary: vec![
            ("mode".into(), Value::text(mode)),
            ("z_bar".into(), Value::Float(policy.z_bar())),
            (
                "kappa".into(),
                Value::opt_float(scenario.kappa.filter(|_| mode == "dynamic")),
            ),
            (
                "population_size".into(),
                Value::Int(scenario.population_size),
            ),
            ("seed".into(), Value::Int(scenario.seed)),
            (
                "effort_source".into(),
                Value::text(if grid_oracle { "grid_oracle" } else { "analytic" }),
            ),
            (
                "challenges_attempted".into(),
                Value::Int(est.challenges_attempted),
            ),
            ("challenges_won".into(), Value::Int(est.challenges_won)),
            (
                "challenges_attempted_high".into(),
                Value::Int(est.challenges_attempted_high),
            ),
            (
                "challenges_won_high".into(),
                Value::Int(est.challenges_won_high),
            ),
        ],
    })
}

fn regime_cell(regime: Option<dynamic::Regime>) -> Value {
    Value::opt_text(regime.map(|r| r.to_string()))
}

pub fn run_sweep(
    scenario: &Scenario,
    parameter: SweepParameter,
    lo: f64,
    hi: f64,
    steps: usize,
    solver: SweepSolver,
) -> Result<Report> {
    let policy = match scenario.kappa {
        Some(kappa) => Some(model::DynamicPolicy::new(
            scenario.z_bar.unwrap_or(1.0),
            kappa,
        )?),
        None => None,
    };
    let spec = SweepSpec {
        parameter,
        lo,
        hi,
        steps,
        base: BaseScenario {
            population: scenario.population,
            technology: scenario.technology,
            capacity: scenario.capacity,
            policy,
        },
        solver,
    };
    let rows = sweep::run_sweep(&spec)?;
    let feasible = rows.iter().filter(|r| r.feasible).count();
    let table_rows = rows
        .iter()
        .map(|r| {
            vec![
                Value::Float(r.param_value),
                Value::Bool(r.feasible),
                Value::opt_float(r.z_bar),
                Value::opt_float(r.kappa),
                regime_cell(r.regime),
                Value::opt_text(r.branch.map(branch_name)),
                Value::opt_float(r.beta),
                Value::opt_float(r.impact),
                Value::opt_float(r.yield_),
                Value::opt_float(r.rate_high),
                Value::opt_float(r.rate_low),
                Value::opt_float(r.rate_gap),
                Value::opt_float(r.effort_skilled),
                Value::opt_float(r.effort_unskilled),
                Value::opt_float(r.success_skilled),
                Value::opt_float(r.success_unskilled),
                Value::opt_bool(r.interior_all),
                Value::opt_float(r.delta),
                Value::opt_float(r.tau),
                Value::opt_float(r.multiplier),
                Value::opt_bool(r.constrained),
                Value::opt_text(r.note.clone()),
            ]
        })
        .collect();
    Ok(Report {
        columns: vec![
            "param",
            "feasible",
            "z_bar",
            "kappa",
            "regime",
            "branch",
            "beta",
            "impact",
            "yield",
            "rate_high",
            "rate_low",
            "rate_gap",
            "effort_skilled",
            "effort_unskilled",
            "success_skilled",
            "success_unskilled",
            "interior_all",
            "delta",
            "tau",
            "multiplier",
            "constrained",
            "note",
        ],
        rows: table_rows,
        summary: vec![
            ("parameter".into(), Value::text(parameter.as_str())),
            ("feasible_rows".into(), Value::Int(feasible as u64)),
            ("total_rows".into(), Value::Int(rows.len() as u64)),
        ],
    })
}

pub fn foc(scenario: &Scenario, steps: usize) -> Result<Report> {
    anyhow::ensure!(steps >= 2, "need at least 2 scan steps, got {steps}");
    let sigma = scenario.sigma();
    let pop = &scenario.population;
    let lo = -2.0 * sigma;
    let hi = 1.0 + 6.0 * sigma;
    let span = (hi - lo) / (steps - 1) as f64;
    let rows = (0..steps)
        .map(|i| {
            let z = if i == steps - 1 { hi } else { lo + i as f64 * span };
            let out = one_shot::aggregate(pop, z, sigma);
            vec![
                Value::Float(z),
                Value::Float(one_shot::foc_residual(pop, z, sigma)),
                Value::Float(out.impact),
                Value::Float(out.yield_),
            ]
        })
        .collect();
    let mut summary = vec![(
        "average_cost".into(),
        Value::Float(average_cost(pop)),
    )];
    match one_shot::unconstrained_threshold(pop, sigma) {
        Some(z_star) => {
            let out = one_shot::aggregate(pop, z_star, sigma);
            summary.push(("z_star".into(), Value::Float(z_star)));
            summary.push(("impact_at_z_star".into(), Value::Float(out.impact)));
            summary.push((
                "residual_at_z_star".into(),
                Value::Float(one_shot::foc_residual(pop, z_star, sigma)),
            ));
        }
        None => {
            summary.push((
                "z_star".into(),
                Value::text("not found (no interior sign change in the scanned bracket)"),
            ));
        }
    }
    Ok(Report {
        columns: vec!["z_bar", "residual", "impact", "yield"],
        rows,
        summary,
    })
}

