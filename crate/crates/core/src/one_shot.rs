//! One-shot review: acceptance rates, author best responses, aggregate
//! impact and yield, the capacity-binding equilibrium threshold, and the
//! journal's unconstrained first-order condition.

use crate::error::Error;
use crate::gaussian::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
use crate::model::{average_cost, Capacity, Population, Quality};
use crate::numeric::{bisect, sign_change_brackets};
use serde::{Deserialize, Serialize};

/// An author's optimal effort against a one-shot threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    /// Optimal research effort a.
    pub effort: f64,
    /// Implied success rate y(a) = 1 - e^{-a}.
    pub success_rate: f64,
    /// True when the marginal benefit at a = 0 is below marginal cost,
    /// forcing zero effort.
    pub corner: bool,
}

/// Population-level equilibrium quantities at a fixed threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    /// Share of high-quality papers produced.
    pub beta: f64,
    /// Mass of published high-quality papers (the journal's objective).
    pub impact: f64,
    /// Total mass of published papers.
    pub yield_: f64,
    /// Acceptance rate for high-quality papers.
    pub rate_high: f64,
    /// Acceptance rate for low-quality papers.
    pub rate_low: f64,
    /// True when both author types have interior effort optima.
    pub interior_all: bool,
}

/// Which branch produced the equilibrium threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdBranch {
    /// Capacity binds: the threshold makes yield equal capacity.
    CapacityBound,
    /// The interior impact maximizer is feasible within capacity.
    Unconstrained,
}

/// Solved one-shot equilibrium: threshold, branch, and aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneShotEquilibrium {
    pub z_bar: f64,
    pub branch: ThresholdBranch,
    pub outcome: Outcome,
}

/// Probability that a paper of quality `q` clears threshold `z_bar` given
/// signal noise `sigma`. Evaluated as the lower-tail CDF of the centered
/// argument so deep-tail rates keep relative precision.
pub fn acceptance_rate(q: Quality, z_bar: f64, sigma: f64) -> f64 {
    debug_assert!(sigma > 0.0 && z_bar.is_finite());
    std_normal_cdf((q.value() - z_bar) / sigma)
}

/// Acceptance-rate gap p₁ - p₀, the marginal value of quality.
pub fn rate_gap(z_bar: f64, sigma: f64) -> f64 {
    acceptance_rate(Quality::High, z_bar, sigma) - acceptance_rate(Quality::Low, z_bar, sigma)
}

/// Success rate y(a) = 1 - e^{-a}.
pub fn success_rate(effort: f64) -> f64 {
    -(-effort).exp_m1()
}

/// Ex-ante payoff of a type-θ author exerting `effort` against the
/// threshold: p₀ + y(a)(p₁ - p₀) - a/θ. Panics on negative effort.
pub fn author_utility(effort: f64, theta: f64, z_bar: f64, sigma: f64) -> f64 {
    assert!(effort >= 0.0, "author_utility: negative effort {effort}");
    debug_assert!(theta > 0.0);
    let p0 = acceptance_rate(Quality::Low, z_bar, sigma);
    p0 + success_rate(effort) * rate_gap(z_bar, sigma) - effort / theta
}

/// Optimal effort of a type-θ author: max(0, ln(θ(p₁ - p₀))), with the
/// corner flagged when θ(p₁ - p₀) < 1.
pub fn best_effort(theta: f64, z_bar: f64, sigma: f64) -> BestResponse {
    best_effort_for_gap(theta, rate_gap(z_bar, sigma))
}

/// Best response given a precomputed acceptance-rate gap. Shared with the
/// dynamic solver, which feeds virtual-rate gaps through the same FOC.
pub(crate) fn best_effort_for_gap(theta: f64, gap: f64) -> BestResponse {
    debug_assert!(theta > 0.0);
    let arg = theta * gap;
    if arg < 1.0 {
        BestResponse {
            effort: 0.0,
            success_rate: 0.0,
            corner: true,
        }
    } else {
        BestResponse {
            effort: arg.ln(),
            success_rate: 1.0 - 1.0 / arg,
            corner: false,
        }
    }
}

/// Aggregate production and publication at a fixed threshold.
pub fn aggregate(pop: &Population, z_bar: f64, sigma: f64) -> Outcome {
    let rate_high = acceptance_rate(Quality::High, z_bar, sigma);
    let rate_low = acceptance_rate(Quality::Low, z_bar, sigma);
    let gap = rate_high - rate_low;
    let skilled = best_effort_for_gap(pop.theta_skilled(), gap);
    let unskilled = best_effort_for_gap(pop.theta_unskilled(), gap);
    let beta =
        pop.alpha() * skilled.success_rate + (1.0 - pop.alpha()) * unskilled.success_rate;
    Outcome {
        beta,
        impact: beta * rate_high,
        yield_: beta * rate_high + (1.0 - beta) * rate_low,
        rate_high,
        rate_low,
        interior_all: !skilled.corner && !unskilled.corner,
    }
}

/// Threshold at which yield exactly meets capacity:
/// z̄ = σ·Φ⁻¹(1 - c̄ - n) + 1. Requires c̄ + n ∈ (0, 1).
pub fn capacity_threshold(pop: &Population, sigma: f64, cap: Capacity) -> Result<f64, Error> {
    debug_assert!(sigma > 0.0);
    let c_bar = average_cost(pop);
    let target = 1.0 - c_bar - cap.n();
    if !(0.0..1.0).contains(&target) || target == 0.0 {
        return Err(Error::InfeasibleCapacity(format!(
            "average cost {c_bar} plus capacity {} must lie strictly inside (0, 1)",
            cap.n()
        )));
    }
    let q = std_normal_quantile(target).map_err(|_| {
        Error::InfeasibleCapacity(format!(
            "capacity target 1 - c̄ - n = {target} is outside the solvable probability band"
        ))
    })?;
    Ok(sigma * q + 1.0)
}

/// Residual of the journal's unconstrained first-order condition at `z_bar`,
/// oriented so a positive value means impact is locally decreasing:
/// (V-U)²·u - c̄·((1-U)v - (1-V)u) with U, V the CDF and u, v the density
/// at the standardized low- and high-quality arguments.
pub fn foc_residual(pop: &Population, z_bar: f64, sigma: f64) -> f64 {
    debug_assert!(sigma > 0.0);
    let c_bar = average_cost(pop);
    let lo = (z_bar - 1.0) / sigma;
    let hi = z_bar / sigma;
    let u_cdf = std_normal_cdf(lo);
    let v_cdf = std_normal_cdf(hi);
    let u_pdf = std_normal_pdf(lo);
    let v_pdf = std_normal_pdf(hi);
    let gap = v_cdf - u_cdf;
    gap * gap * u_pdf - c_bar * ((1.0 - u_cdf) * v_pdf - (1.0 - v_cdf) * u_pdf)
}

const FOC_SCAN_POINTS: usize = 1000;
const FOC_BISECT_TOL: f64 = 1e-13;

/// Interior impact maximizer: the zero of [`foc_residual`] with the highest
/// impact, located by a 10³-point scan of z̄ ∈ [-2σ, 1+6σ] followed by
/// bisection. Only roots inside the validity region count: the residual
/// is derived from the interior closed forms, so its zeros are meaningless
/// where authors sit at corners. Returns `None` when no such root exists.
pub fn unconstrained_threshold(pop: &Population, sigma: f64) -> Option<f64> {
    let lo = -2.0 * sigma;
    let hi = 1.0 + 6.0 * sigma;
    let residual = |z: f64| foc_residual(pop, z, sigma);
    let mut best: Option<(f64, f64)> = None;
    for (a, b) in sign_change_brackets(lo, hi, FOC_SCAN_POINTS, residual) {
        if let Some(root) = bisect(a, b, residual, FOC_BISECT_TOL) {
            let outcome = aggregate(pop, root, sigma);
            if !outcome.interior_all {
                continue;
            }
            let better = match best {
                Some((_, x)) => outcome.impact > x,
                None => true,
            };
            if better {
                best = Some((root, outcome.impact));
            }
        }
    }
    best.map(|(root, _)| root)
}

/// One-shot equilibrium threshold: the interior optimum when it fits the
/// capacity constraint, otherwise the capacity-binding threshold.
pub fn solve_equilibrium(
    pop: &Population,
    sigma: f64,
    cap: Capacity,
) -> Result<OneShotEquilibrium, Error> {
    if let Some(z_star) = unconstrained_threshold(pop, sigma) {
        let outcome = aggregate(pop, z_star, sigma);
        if outcome.yield_ <= cap.n() {
            return Ok(OneShotEquilibrium {
                z_bar: z_star,
                branch: ThresholdBranch::Unconstrained,
                outcome,
            });
        }
    }
    let z_bar = capacity_threshold(pop, sigma, cap)?;
    Ok(OneShotEquilibrium {
        z_bar,
        branch: ThresholdBranch::CapacityBound,
        outcome: aggregate(pop, z_bar, sigma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Technology;
    use proptest::prelude::*;

    fn example_a() -> Population {
        Population::new(0.5, 8.0, 4.0).unwrap()
    }

    /// Population with a prescribed average cost, for tests stated in c̄ terms.
    fn pop_with_cost(c_bar: f64) -> Population {
        // alpha = 0.5 gives c̄ = (1/θ₁ + 1/θ₀)/2; pick θ₀ = 1/(2c̄ - 1/θ₁).
        let theta_skilled = 2.0 / c_bar;
        let theta_unskilled = 1.0 / (2.0 * c_bar - 1.0 / theta_skilled);
        let pop = Population::new(0.5, theta_skilled, theta_unskilled).unwrap();
        assert!((average_cost(&pop) - c_bar).abs() <= 1e-14);
        pop
    }

    #[test]
    fn acceptance_rate_examples() {
        assert_eq!(acceptance_rate(Quality::High, 1.0, 1.0), 0.5);
        assert!(
            (acceptance_rate(Quality::Low, 1.0, 1.0) - 0.158_655_253_931_457_05).abs() <= 1e-12
        );
        assert!(
            (acceptance_rate(Quality::Low, -0.5, 1.0) - 0.691_462_461_274_013_1).abs() <= 1e-12
        );
    }

    #[test]
    fn acceptance_rate_orders_and_decreases() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let z = -3.0 + i as f64 * 0.08;
            let p1 = acceptance_rate(Quality::High, z, 0.7);
            let p0 = acceptance_rate(Quality::Low, z, 0.7);
            assert!(p1 > p0);
            assert!(p1 < prev);
            prev = p1;
        }
    }

    #[test]
    fn author_utility_examples() {
        // Zero effort pays the low-quality acceptance rate exactly.
        assert!((author_utility(0.0, 8.0, 1.0, 1.0) - 0.158_655_253_931_457_05).abs() <= 1e-15);
        // Value at the interior optimum, from the closed-form chain
        // u* = p₀ + g - 1/θ - ln(θg)/θ evaluated in high precision.
        assert!((author_utility(1.00458, 8.0, 1.0, 1.0) - 0.249_427_598_147_779_43).abs() <= 1e-5);
        // Local optimality of the argmax.
        let at_opt = author_utility(1.004_579_214_817_764_5, 8.0, 1.0, 1.0);
        assert!(author_utility(1.00458 + 0.01, 8.0, 1.0, 1.0) < at_opt);
        assert!(author_utility(1.00458 - 0.01, 8.0, 1.0, 1.0) < at_opt);
    }

    #[test]
    #[should_panic(expected = "negative effort")]
    fn author_utility_rejects_negative_effort() {
        author_utility(-0.1, 8.0, 1.0, 1.0);
    }

    #[test]
    fn best_effort_examples() {
        let br = best_effort(8.0, 1.0, 1.0);
        assert!((br.effort - 1.004_579_214_817_764_5).abs() <= 1e-12);
        assert!((br.success_rate - 0.633_801_306_627_114).abs() <= 1e-12);
        assert!(!br.corner);

        let br = best_effort(4.0, 1.0, 1.0);
        assert!((br.effort - 0.311_432_034_257_819_24).abs() <= 1e-12);
        assert!((br.success_rate - 0.267_602_613_254_228).abs() <= 1e-12);

        let br = best_effort(4.0, 5.0, 1.0);
        assert_eq!(br.effort, 0.0);
        assert_eq!(br.success_rate, 0.0);
        assert!(br.corner);
    }

    #[test]
    fn best_effort_success_consistent_with_effort() {
        for theta in [1.5, 4.0, 8.0, 20.0] {
            for z in [-1.0, 0.2, 1.0, 2.0] {
                let br = best_effort(theta, z, 1.0);
                assert!((br.success_rate - success_rate(br.effort)).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn aggregate_example_a() {
        let out = aggregate(&example_a(), 1.0, 1.0);
        assert!((out.beta - 0.450_701_959_940_671).abs() <= 1e-12);
        assert!((out.impact - 0.225_350_979_970_335_48).abs() <= 1e-12);
        assert!((out.yield_ - 0.3125).abs() <= 1e-12);
        assert!(out.interior_all);
    }

    #[test]
    fn aggregate_all_corner() {
        let out = aggregate(&example_a(), 5.0, 1.0);
        assert_eq!(out.beta, 0.0);
        assert_eq!(out.impact, 0.0);
        // Only lucky low-quality papers get published.
        assert!((out.yield_ - 2.866_515_718_791_939e-7).abs() <= 1e-18);
        assert!(!out.interior_all);
    }

    #[test]
    fn capacity_threshold_examples() {
        let pop = example_a(); // c̄ = 0.1875
        let z = capacity_threshold(&pop, 1.0, Capacity::new(0.3125).unwrap()).unwrap();
        assert!((z - 1.0).abs() <= 1e-12);

        let z = capacity_threshold(&pop, 2.0, Capacity::new(0.2).unwrap()).unwrap();
        assert!((z - 1.571_681_749_762_331_2).abs() <= 1e-8);

        let heavy = pop_with_cost(0.6);
        let err = capacity_threshold(&heavy, 1.0, Capacity::new(0.5).unwrap());
        assert!(matches!(err, Err(Error::InfeasibleCapacity(_))));
    }

    #[test]
    fn capacity_threshold_hits_capacity() {
        // Capacities chosen so the implied threshold keeps both types
        // interior (theta_unskilled = 4 needs a rate gap of at least 1/4).
        let pop = example_a();
        for n in [0.25, 0.3125, 0.4, 0.45] {
            let cap = Capacity::new(n).unwrap();
            let z = capacity_threshold(&pop, 1.0, cap).unwrap();
            let out = aggregate(&pop, z, 1.0);
            assert!(out.interior_all);
            assert!((out.yield_ - n).abs() <= 1e-9, "n = {n}");
        }
    }

    #[test]
    fn foc_residual_example() {
        let pop = example_a();
        let r = foc_residual(&pop, 0.5, 1.0);
        assert!((r - 0.026_346_130_414_934_526).abs() <= 1e-12);
        // pdf symmetry about 0.5 makes u = v exactly.
        assert_eq!(std_normal_pdf(-0.5), std_normal_pdf(0.5));
    }

    #[test]
    fn foc_residual_sign_tracks_impact_slope() {
        let pop = example_a();
        let h = 1e-5;
        for z in [-0.5, 0.0, 0.3, 0.5, 1.0, 1.5] {
            let fd = (aggregate(&pop, z + h, 1.0).impact - aggregate(&pop, z - h, 1.0).impact)
                / (2.0 * h);
            let res = foc_residual(&pop, z, 1.0);
            assert!(
                (res > 0.0) == (fd < 0.0),
                "sign mismatch at z = {z}: residual {res}, slope {fd}"
            );
        }
    }

    #[test]
    fn unconstrained_threshold_example() {
        let pop = example_a();
        let z_star = unconstrained_threshold(&pop, 1.0).unwrap();
        assert!(z_star < 0.5);
        assert!((z_star - 0.149_660_479_228_781_35).abs() <= 1e-9);
        assert!(foc_residual(&pop, z_star, 1.0).abs() <= 1e-9);
        // No grid point beats the located optimum.
        let x_star = aggregate(&pop, z_star, 1.0).impact;
        for i in 0..1000 {
            let z = -2.0 + i as f64 * (9.0 / 999.0);
            assert!(aggregate(&pop, z, 1.0).impact <= x_star + 1e-12);
        }
        // Impact is non-increasing to the right of the optimum.
        let mut prev = x_star;
        for i in 1..=200 {
            let x = aggregate(&pop, z_star + i as f64 * 0.02, 1.0).impact;
            assert!(x <= prev + 1e-12);
            prev = x;
        }
    }

    #[test]
    fn equilibrium_branch_selection() {
        let pop = example_a();
        // Tight capacity binds.
        let eq = solve_equilibrium(&pop, 1.0, Capacity::new(0.3125).unwrap()).unwrap();
        assert_eq!(eq.branch, ThresholdBranch::CapacityBound);
        assert!((eq.z_bar - 1.0).abs() <= 1e-12);
        // Generous capacity leaves the interior optimum feasible:
        // Y(z̄*) ≈ 0.615 < 0.7.
        let eq = solve_equilibrium(&pop, 1.0, Capacity::new(0.7).unwrap()).unwrap();
        assert_eq!(eq.branch, ThresholdBranch::Unconstrained);
        assert!(eq.outcome.yield_ <= 0.7);
    }

    #[test]
    fn capacity_threshold_monotone_statics() {
        let pop = example_a();
        // Strictly decreasing in n.
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let n = 0.05 + i as f64 * 0.02;
            let z = capacity_threshold(&pop, 1.0, Capacity::new(n).unwrap()).unwrap();
            assert!(z < prev);
            prev = z;
        }
        // Strictly increasing as average cost decreases.
        let mut prev = f64::NEG_INFINITY;
        for i in 0..20 {
            let c_bar = 0.45 - i as f64 * 0.02;
            let pop = pop_with_cost(c_bar);
            let z = capacity_threshold(&pop, 1.0, Capacity::new(0.3).unwrap()).unwrap();
            assert!(z > prev);
            prev = z;
        }
    }

    #[test]
    fn rate_gap_maximized_at_half() {
        let at_half = rate_gap(0.5, 1.3);
        for i in 0..=500 {
            let z = -3.0 + i as f64 * 0.014;
            assert!(rate_gap(z, 1.3) <= at_half + 1e-15);
        }
    }

    proptest! {
        /// Gap identity: p₁ - p₀ = Φ(z̄/σ) - Φ((z̄-1)/σ) on random draws.
        #[test]
        fn gap_identity(z in -4.0f64..5.0, sigma in 0.2f64..3.0) {
            let direct = rate_gap(z, sigma);
            let via_cdf = std_normal_cdf(z / sigma) - std_normal_cdf((z - 1.0) / sigma);
            prop_assert!((direct - via_cdf).abs() <= 1e-14);
        }

        /// First-order condition at the interior optimum: the utility
        /// gradient in effort vanishes.
        #[test]
        fn foc_gradient_vanishes(theta in 1.5f64..30.0, z in -1.0f64..1.8) {
            let br = best_effort(theta, z, 1.0);
            prop_assume!(!br.corner && br.effort > 1e-3);
            let h = 1e-5;
            let grad = (author_utility(br.effort + h, theta, z, 1.0)
                - author_utility(br.effort - h, theta, z, 1.0)) / (2.0 * h);
            prop_assert!(grad.abs() <= 1e-6);
        }

        /// Interior reduced forms of yield and quality share on random draws.
        #[test]
        fn interior_reduced_forms(
            alpha in 0.05f64..0.95,
            theta_unskilled in 2.0f64..10.0,
            spread in 0.5f64..10.0,
            z in -0.5f64..1.5,
            sigma in 0.5f64..2.0,
        ) {
            let pop = Population::new(alpha, theta_unskilled + spread, theta_unskilled).unwrap();
            let gap = rate_gap(z, sigma);
            prop_assume!(crate::model::interior_margin(theta_unskilled, gap) >= 0.0);
            let out = aggregate(&pop, z, sigma);
            let c_bar = average_cost(&pop);
            prop_assert!((out.yield_ - (out.rate_high - c_bar)).abs() <= 1e-12);
            prop_assert!((out.beta - (1.0 - c_bar / gap)).abs() <= 1e-12);
        }

        /// Yield minus impact is the published low-quality mass.
        #[test]
        fn yield_decomposition(z in -2.0f64..3.0, sigma in 0.3f64..2.5) {
            let out = aggregate(&example_a(), z, sigma);
            prop_assert!((out.yield_ - out.impact - (1.0 - out.beta) * out.rate_low).abs() <= 1e-15);
            prop_assert!(out.impact <= out.yield_ && out.yield_ <= 1.0);
        }

        /// Equilibrium effort stays below the first-best ln θ.
        #[test]
        fn effort_below_first_best(theta in 1.1f64..40.0, z in -5.0f64..6.0, sigma in 0.2f64..3.0) {
            let br = best_effort(theta, z, sigma);
            prop_assert!(br.effort < theta.ln());
        }
    }

    #[test]
    fn technology_is_plumbed_through() {
        // Solvers take raw sigma; Technology carries it for scenarios.
        let tech = Technology::new(1.0).unwrap();
        assert_eq!(
            aggregate(&example_a(), 1.0, tech.sigma()).yield_,
            aggregate(&example_a(), 1.0, 1.0).yield_
        );
    }
}
