//! Comparative statics: sweep one parameter across a range, solve the
//! selected problem at every grid point, and classify how any output
//! column moves. Infeasible points are kept as flagged rows; the
//! feasibility frontier is itself informative.

use crate::dynamic::{self, Regime};
use crate::error::Error;
use crate::first_best;
use crate::model::{Capacity, DynamicPolicy, Population, Technology};
use crate::one_shot::{self, ThresholdBranch};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which scalar parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    Alpha,
    ThetaSkilled,
    ThetaUnskilled,
    Sigma,
    N,
    Kappa,
    ZBar,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::ThetaSkilled => "theta_skilled",
            SweepParameter::ThetaUnskilled => "theta_unskilled",
            SweepParameter::Sigma => "sigma",
            SweepParameter::N => "n",
            SweepParameter::Kappa => "kappa",
            SweepParameter::ZBar => "z_bar",
        }
    }
}

/// Which problem is solved at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepSolver {
    FirstBest,
    OneShotEquilibrium,
    DynamicEquilibrium,
    /// Evaluate a fixed dynamic policy rather than solving for one.
    DynamicFixedPolicy,
}

/// The scenario every grid point starts from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseScenario {
    pub population: Population,
    pub technology: Technology,
    pub capacity: Capacity,
    /// Required by [`SweepSolver::DynamicFixedPolicy`].
    pub policy: Option<DynamicPolicy>,
}

/// A validated sweep request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub base: BaseScenario,
    pub solver: SweepSolver,
}

/// One grid point of a sweep. Columns not produced by the selected solver
/// stay empty; infeasible points keep their parameter value and a note.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SweepRow {
    pub param_value: f64,
    pub feasible: bool,
    pub note: Option<String>,
    pub z_bar: Option<f64>,
    pub kappa: Option<f64>,
    pub regime: Option<Regime>,
    pub branch: Option<ThresholdBranch>,
    pub beta: Option<f64>,
    pub impact: Option<f64>,
    pub yield_: Option<f64>,
    pub rate_high: Option<f64>,
    pub rate_low: Option<f64>,
    pub rate_gap: Option<f64>,
    pub effort_skilled: Option<f64>,
    pub effort_unskilled: Option<f64>,
    pub success_skilled: Option<f64>,
    pub success_unskilled: Option<f64>,
    pub interior_all: Option<bool>,
    pub delta: Option<f64>,
    pub tau: Option<f64>,
    pub multiplier: Option<f64>,
    pub constrained: Option<bool>,
}

/// Numeric column names understood by [`column_value`] and
/// [`statics_report`], in CSV emission order.
pub const NUMERIC_COLUMNS: &[&str] = &[
    "z_bar",
    "kappa",
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
    "delta",
    "tau",
    "multiplier",
];

/// Look up a numeric column by name.
pub fn column_value(row: &SweepRow, column: &str) -> Option<f64> {
    match column {
        "param" => Some(row.param_value),
        "z_bar" => row.z_bar,
        "kappa" => row.kappa,
        "beta" => row.beta,
        "impact" => row.impact,
        "yield" => row.yield_,
        "rate_high" => row.rate_high,
        "rate_low" => row.rate_low,
        "rate_gap" => row.rate_gap,
        "effort_skilled" => row.effort_skilled,
        "effort_unskilled" => row.effort_unskilled,
        "success_skilled" => row.success_skilled,
        "success_unskilled" => row.success_unskilled,
        "delta" => row.delta,
        "tau" => row.tau,
        "multiplier" => row.multiplier,
        _ => None,
    }
}

fn validate(spec: &SweepSpec) -> Result<(), Error> {
    if !(spec.lo.is_finite() && spec.hi.is_finite()) || spec.lo >= spec.hi {
        return Err(Error::InvalidSweep(format!(
            "range must satisfy lo < hi, got [{}, {}]",
            spec.lo, spec.hi
        )));
    }
    if spec.steps < 2 {
        return Err(Error::InvalidSweep(format!(
            "need at least 2 steps, got {}",
            spec.steps
        )));
    }
    let pop = &spec.base.population;
    let range_err = |what: &str| {
        Err(Error::InvalidSweep(format!(
            "sweep range [{}, {}] violates the invariant of {what}",
            spec.lo, spec.hi
        )))
    };
    match spec.parameter {
        SweepParameter::Alpha => {
            if spec.lo <= 0.0 || spec.hi >= 1.0 {
                return range_err("alpha in (0, 1)");
            }
        }
        SweepParameter::ThetaSkilled => {
            if spec.lo <= pop.theta_unskilled() {
                return range_err("theta_skilled > theta_unskilled");
            }
        }
        SweepParameter::ThetaUnskilled => {
            if spec.lo <= 0.0 || spec.hi >= pop.theta_skilled() {
                return range_err("0 < theta_unskilled < theta_skilled");
            }
        }
        SweepParameter::Sigma => {
            if spec.lo <= 0.0 {
                return range_err("sigma > 0");
            }
        }
        SweepParameter::N => {
            if spec.lo <= 0.0 || spec.hi >= 1.0 {
                return range_err("capacity in (0, 1)");
            }
        }
        SweepParameter::Kappa => {
            if spec.lo < 0.0 {
                return range_err("kappa >= 0");
            }
        }
        SweepParameter::ZBar => {}
    }
    let allowed: &[SweepParameter] = match spec.solver {
        SweepSolver::FirstBest => &[
            SweepParameter::Alpha,
            SweepParameter::ThetaSkilled,
            SweepParameter::ThetaUnskilled,
            SweepParameter::Sigma,
            SweepParameter::N,
        ],
        SweepSolver::OneShotEquilibrium | SweepSolver::DynamicEquilibrium => &[
            SweepParameter::Alpha,
            SweepParameter::ThetaSkilled,
            SweepParameter::ThetaUnskilled,
            SweepParameter::Sigma,
            SweepParameter::N,
        ],
        SweepSolver::DynamicFixedPolicy => &[
            SweepParameter::Alpha,
            SweepParameter::ThetaSkilled,
            SweepParameter::ThetaUnskilled,
            SweepParameter::Sigma,
            SweepParameter::Kappa,
            SweepParameter::ZBar,
        ],
    };
    if !allowed.contains(&spec.parameter) {
        return Err(Error::InvalidSweep(format!(
            "parameter {} is not applicable to solver {:?}",
            spec.parameter.as_str(),
            spec.solver
        )));
    }
    if spec.solver == SweepSolver::DynamicFixedPolicy && spec.base.policy.is_none() {
        return Err(Error::InvalidSweep(
            "dynamic fixed-policy sweeps need a base policy (z_bar, kappa)".into(),
        ));
    }
    Ok(())
}

/// The base scenario with one parameter overridden.
#[derive(Debug, Clone, Copy)]
struct Point {
    population: Population,
    sigma: f64,
    capacity: Capacity,
    policy: Option<DynamicPolicy>,
}

fn scenario_at(spec: &SweepSpec, value: f64) -> Result<Point, Error> {
    let base = &spec.base;
    let pop = base.population;
    let mut point = Point {
        population: pop,
        sigma: base.technology.sigma(),
        capacity: base.capacity,
        policy: base.policy,
    };
    match spec.parameter {
        SweepParameter::Alpha => {
            point.population =
                Population::new(value, pop.theta_skilled(), pop.theta_unskilled())?;
        }
        SweepParameter::ThetaSkilled => {
            point.population = Population::new(pop.alpha(), value, pop.theta_unskilled())?;
        }
        SweepParameter::ThetaUnskilled => {
            point.population = Population::new(pop.alpha(), pop.theta_skilled(), value)?;
        }
        SweepParameter::Sigma => point.sigma = Technology::new(value)?.sigma(),
        SweepParameter::N => point.capacity = Capacity::new(value)?,
        SweepParameter::Kappa => {
            let p = point.policy.expect("validated");
            point.policy = Some(DynamicPolicy::new(p.z_bar, value)?);
        }
        SweepParameter::ZBar => {
            let p = point.policy.expect("validated");
            point.policy = Some(DynamicPolicy::new(value, p.kappa)?);
        }
    }
    Ok(point)
}

fn infeasible_row(value: f64, err: &Error) -> SweepRow {
    SweepRow {
        param_value: value,
        feasible: false,
        note: Some(err.to_string()),
        ..SweepRow::default()
    }
}

fn dynamic_row(value: f64, point: &Point, policy: DynamicPolicy) -> SweepRow {
    let out = dynamic::aggregate_dynamic(&point.population, policy, point.sigma);
    let skilled = dynamic::author_best_response(point.population.theta_skilled(), policy, point.sigma);
    let unskilled =
        dynamic::author_best_response(point.population.theta_unskilled(), policy, point.sigma);
    let rate_high = one_shot::acceptance_rate(crate::model::Quality::High, policy.z_bar, point.sigma);
    let rate_low = one_shot::acceptance_rate(crate::model::Quality::Low, policy.z_bar, point.sigma);
    SweepRow {
        param_value: value,
        feasible: true,
        z_bar: Some(policy.z_bar),
        kappa: Some(policy.kappa),
        regime: Some(out.regime),
        beta: Some(out.beta_hat),
        impact: Some(out.impact_hat),
        yield_: Some(out.yield_hat),
        rate_high: Some(rate_high),
        rate_low: Some(rate_low),
        rate_gap: Some(rate_high - rate_low),
        effort_skilled: Some(skilled.effort),
        effort_unskilled: Some(unskilled.effort),
        success_skilled: Some(skilled.success_rate),
        success_unskilled: Some(unskilled.success_rate),
        interior_all: Some(out.interior_all),
        delta: Some(out.delta),
        tau: Some(out.tau),
        ..SweepRow::default()
    }
}

fn solve_point(spec: &SweepSpec, value: f64) -> SweepRow {
    let point = match scenario_at(spec, value) {
        Ok(p) => p,
        Err(e) => return infeasible_row(value, &e),
    };
    match spec.solver {
        SweepSolver::FirstBest => match first_best::first_best_solve(&point.population, point.capacity) {
            Ok(fb) => SweepRow {
                param_value: value,
                feasible: true,
                beta: Some(fb.beta),
                impact: Some(fb.beta),
                effort_skilled: Some(fb.effort_skilled),
                effort_unskilled: Some(fb.effort_unskilled),
                success_skilled: Some(fb.success_skilled),
                success_unskilled: Some(fb.success_unskilled),
                multiplier: Some(fb.multiplier),
                constrained: Some(fb.constrained),
                ..SweepRow::default()
            },
            Err(e) => infeasible_row(value, &e),
        },
        SweepSolver::OneShotEquilibrium => {
            match one_shot::solve_equilibrium(&point.population, point.sigma, point.capacity) {
                Ok(eq) => {
                    let skilled = one_shot::best_effort(
                        point.population.theta_skilled(),
                        eq.z_bar,
                        point.sigma,
                    );
                    let unskilled = one_shot::best_effort(
                        point.population.theta_unskilled(),
                        eq.z_bar,
                        point.sigma,
                    );
                    SweepRow {
                        param_value: value,
                        feasible: true,
                        z_bar: Some(eq.z_bar),
                        branch: Some(eq.branch),
                        beta: Some(eq.outcome.beta),
                        impact: Some(eq.outcome.impact),
                        yield_: Some(eq.outcome.yield_),
                        rate_high: Some(eq.outcome.rate_high),
                        rate_low: Some(eq.outcome.rate_low),
                        rate_gap: Some(eq.outcome.rate_high - eq.outcome.rate_low),
                        effort_skilled: Some(skilled.effort),
                        effort_unskilled: Some(unskilled.effort),
                        success_skilled: Some(skilled.success_rate),
                        success_unskilled: Some(unskilled.success_rate),
                        interior_all: Some(eq.outcome.interior_all),
                        ..SweepRow::default()
                    }
                }
                Err(e) => infeasible_row(value, &e),
            }
        }
        SweepSolver::DynamicEquilibrium => {
            match dynamic::optimize_policy(&point.population, point.sigma, point.capacity) {
                Ok((policy, _)) => dynamic_row(value, &point, policy),
                Err(e) => infeasible_row(value, &e),
            }
        }
        SweepSolver::DynamicFixedPolicy => {
            let policy = point.policy.expect("validated");
            dynamic_row(value, &point, policy)
        }
    }
}

/// Run the sweep: rows in parameter order, one per grid point, infeasible
/// points flagged rather than dropped. Errors out only when the whole
/// range is infeasible.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, Error> {
    validate(spec)?;
    let step = (spec.hi - spec.lo) / (spec.steps - 1) as f64;
    let rows: Vec<SweepRow> = (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let value = if i == spec.steps - 1 {
                spec.hi
            } else {
                spec.lo + i as f64 * step
            };
            solve_point(spec, value)
        })
        .collect();
    if rows.iter().all(|r| !r.feasible) {
        return Err(Error::InvalidSweep(
            "every grid point in the sweep range is infeasible".into(),
        ));
    }
    Ok(rows)
}

/// Direction of a column over a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

/// Sign summary of a sweep column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticsReport {
    pub column: String,
    pub monotonicity: Monotonicity,
    /// True when every first difference is non-negligible, i.e. the
    /// direction is strict throughout.
    pub strict: bool,
    /// Parameter values at which the first-difference sign flips
    /// (the local extrema of the column).
    pub change_points: Vec<f64>,
    pub valid_rows: usize,
}

/// First differences below this magnitude count as zero; root-finder
/// precision sits well below it.
pub const STATICS_TOLERANCE: f64 = 1e-12;

/// Classify `column` over the feasible rows of a sweep as increasing,
/// decreasing, constant, or non-monotone with the break locations.
pub fn statics_report(rows: &[SweepRow], column: &str) -> Result<StaticsReport, Error> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.feasible)
        .filter_map(|r| column_value(r, column).map(|v| (r.param_value, v)))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "column '{column}' has {} valid rows; need at least 3",
            points.len()
        )));
    }
    let mut any_up = false;
    let mut any_down = false;
    let mut any_flat = false;
    let mut change_points = Vec::new();
    let mut prev_sign = 0i8;
    for window in points.windows(2) {
        let diff = window[1].1 - window[0].1;
        let sign = if diff > STATICS_TOLERANCE {
            1
        } else if diff < -STATICS_TOLERANCE {
            -1
        } else {
            0
        };
        match sign {
            1 => any_up = true,
            -1 => any_down = true,
            _ => any_flat = true,
        }
        if sign != 0 {
            if prev_sign != 0 && sign != prev_sign {
                change_points.push(window[0].0);
            }
            prev_sign = sign;
        }
    }
    let monotonicity = match (any_up, any_down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (true, true) => Monotonicity::NonMonotone,
    };
    Ok(StaticsReport {
        column: column.to_string(),
        monotonicity,
        strict: !any_flat && monotonicity != Monotonicity::Constant,
        change_points,
        valid_rows: points.len(),
    })
}
