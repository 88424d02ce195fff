//! First-best benchmark: the effort profile a welfare-maximizing journal
//! would dictate under full verifiability, and the acceptance probability
//! that implements it when only paper quality is verifiable.

use crate::error::Error;
use crate::model::{average_cost, Capacity, Population};
use serde::{Deserialize, Serialize};

/// Dictated efforts and implied aggregates of the first-best problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstBest {
    pub effort_skilled: f64,
    pub effort_unskilled: f64,
    pub success_skilled: f64,
    pub success_unskilled: f64,
    /// Share of high-quality papers produced (= journal impact here).
    pub beta: f64,
    /// Shadow value of capacity; zero when the constraint is slack.
    pub multiplier: f64,
    pub constrained: bool,
}

/// Planner objective: high-quality share minus aggregate effort cost at
/// dictated efforts (a₁, a₀).
pub fn welfare(pop: &Population, effort_skilled: f64, effort_unskilled: f64) -> f64 {
    let alpha = pop.alpha();
    let beta = alpha * (1.0 - (-effort_skilled).exp())
        + (1.0 - alpha) * (1.0 - (-effort_unskilled).exp());
    beta
        - (alpha * effort_skilled / pop.theta_skilled()
            + (1.0 - alpha) * effort_unskilled / pop.theta_unskilled())
}

/// Solve the first-best problem. With slack capacity (n ≥ 1 - c̄) each
/// type works ln θ; a binding constraint scales both efforts down by
/// ln(c̄/(1-n)) and leaves the shadow value (1 - c̄ - n)/(1 - n).
///
/// The interior characterization requires positive efforts; parameters
/// that would dictate negative unskilled effort are reported as a corner
/// error rather than clamped.
pub fn first_best_solve(pop: &Population, cap: Capacity) -> Result<FirstBest, Error> {
    let c_bar = average_cost(pop);
    let n = cap.n();
    let (scale, multiplier, constrained) = if n >= 1.0 - c_bar {
        (1.0, 0.0, false)
    } else {
        (c_bar / (1.0 - n), (1.0 - c_bar - n) / (1.0 - n), true)
    };
    let effort_skilled = (pop.theta_skilled() * scale).ln();
    let effort_unskilled = (pop.theta_unskilled() * scale).ln();
    if effort_unskilled < 0.0 {
        return Err(Error::CornerFirstBest {
            theta: pop.theta_unskilled(),
            effort: effort_unskilled,
        });
    }
    let success_skilled = 1.0 - 1.0 / (pop.theta_skilled() * scale);
    let success_unskilled = 1.0 - 1.0 / (pop.theta_unskilled() * scale);
    let beta = if constrained { n } else { 1.0 - c_bar };
    Ok(FirstBest {
        effort_skilled,
        effort_unskilled,
        success_skilled,
        success_unskilled,
        beta,
        multiplier,
        constrained,
    })
}

/// Acceptance probability for high-quality papers that implements the
/// first best when quality alone is verifiable: 1 with slack capacity,
/// c̄/(1-n) when the constraint binds.
pub fn implementing_probability(pop: &Population, cap: Capacity) -> f64 {
    let c_bar = average_cost(pop);
    if cap.n() >= 1.0 - c_bar {
        1.0
    } else {
        c_bar / (1.0 - cap.n())
    }
}

/// Effort chosen by a type-θ author who is accepted with probability `p`
/// whenever the paper is high quality: argmax of p·y(a) - a/θ.
pub fn induced_effort(theta: f64, acceptance_probability: f64) -> f64 {
    debug_assert!(theta > 0.0 && acceptance_probability > 0.0);
    (theta * acceptance_probability).ln().max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_c() -> Population {
        Population::new(0.5, 4.0, 2.0).unwrap() // c̄ = 0.375
    }

    #[test]
    fn unconstrained_case() {
        let fb = first_best_solve(&example_c(), Capacity::new(0.7).unwrap()).unwrap();
        assert!(!fb.constrained);
        assert_eq!(fb.multiplier, 0.0);
        assert!((fb.effort_skilled - 1.386_294_361_119_890_6).abs() <= 1e-15);
        assert!((fb.effort_unskilled - std::f64::consts::LN_2).abs() <= 1e-15);
        assert!((fb.success_skilled - 0.75).abs() <= 1e-15);
        assert!((fb.success_unskilled - 0.5).abs() <= 1e-15);
        assert!((fb.beta - 0.625).abs() <= 1e-15);
    }

    #[test]
    fn constrained_case() {
        let fb = first_best_solve(&example_c(), Capacity::new(0.5).unwrap()).unwrap();
        assert!(fb.constrained);
        assert!((fb.effort_skilled - 1.098_612_288_668_109_7).abs() <= 1e-12);
        assert!((fb.effort_unskilled - 0.405_465_108_108_164_4).abs() <= 1e-12);
        assert!((fb.success_skilled - 2.0 / 3.0).abs() <= 1e-12);
        assert!((fb.success_unskilled - 1.0 / 3.0).abs() <= 1e-12);
        assert_eq!(fb.beta, 0.5);
        assert!((fb.multiplier - 0.25).abs() <= 1e-15);
    }

    #[test]
    fn branches_coincide_at_boundary() {
        // n = 1 - c̄ exactly: the binding scale is 1.
        let pop = example_c();
        let at = first_best_solve(&pop, Capacity::new(0.625).unwrap()).unwrap();
        let above = first_best_solve(&pop, Capacity::new(0.625 + 1e-12).unwrap()).unwrap();
        assert!((at.effort_skilled - above.effort_skilled).abs() <= 1e-11);
        assert!((at.beta - above.beta).abs() <= 1e-11);
        assert!(!above.constrained);
    }

    #[test]
    fn corner_parameters_are_reported() {
        // Unskilled productivity below 1 dictates negative effort.
        let pop = Population::new(0.5, 2.0, 0.8).unwrap();
        let err = first_best_solve(&pop, Capacity::new(0.9).unwrap());
        assert!(matches!(err, Err(Error::CornerFirstBest { .. })));
        // Tight capacity can do the same through the scale factor.
        let pop = Population::new(0.5, 4.0, 1.05).unwrap();
        let err = first_best_solve(&pop, Capacity::new(0.05).unwrap());
        assert!(matches!(err, Err(Error::CornerFirstBest { .. })));
    }

    #[test]
    fn implementing_probability_examples() {
        let pop = example_c();
        assert_eq!(
            implementing_probability(&pop, Capacity::new(0.5).unwrap()),
            0.75
        );
        assert_eq!(
            implementing_probability(&pop, Capacity::new(0.7).unwrap()),
            1.0
        );
    }

    #[test]
    fn induced_problem_reproduces_first_best() {
        let pop = example_c();
        for n in [0.3, 0.5, 0.7] {
            let cap = Capacity::new(n).unwrap();
            let fb = first_best_solve(&pop, cap).unwrap();
            let p = implementing_probability(&pop, cap);
            assert!((induced_effort(pop.theta_skilled(), p) - fb.effort_skilled).abs() <= 1e-12);
            assert!(
                (induced_effort(pop.theta_unskilled(), p) - fb.effort_unskilled).abs() <= 1e-12
            );
            // Induced successes aggregate back to the first-best share.
            let beta = pop.alpha() * (1.0 - (-induced_effort(pop.theta_skilled(), p)).exp())
                + (1.0 - pop.alpha())
                    * (1.0 - (-induced_effort(pop.theta_unskilled(), p)).exp());
            assert!((beta - fb.beta).abs() <= 1e-12);
        }
    }

    #[test]
    fn beats_every_point_of_a_coarse_welfare_grid() {
        // 200x200 grid over [0, 5]² with the capacity constraint imposed.
        let pop = example_c();
        for n in [0.5, 0.7] {
            let fb = first_best_solve(&pop, Capacity::new(n).unwrap()).unwrap();
            let w_star = welfare(&pop, fb.effort_skilled, fb.effort_unskilled);
            for i in 0..=200 {
                for j in 0..=200 {
                    let (a1, a0) = (i as f64 * 0.025, j as f64 * 0.025);
                    let beta = pop.alpha() * (1.0 - (-a1).exp())
                        + (1.0 - pop.alpha()) * (1.0 - (-a0).exp());
                    if beta <= n {
                        assert!(welfare(&pop, a1, a0) <= w_star + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplier_is_marginal_value_of_capacity() {
        let pop = example_c();
        let h = 1e-3;
        let fb = first_best_solve(&pop, Capacity::new(0.5).unwrap()).unwrap();
        let w = |n: f64| {
            let s = first_best_solve(&pop, Capacity::new(n).unwrap()).unwrap();
            welfare(&pop, s.effort_skilled, s.effort_unskilled)
        };
        let centered = (w(0.5 + h) - w(0.5 - h)) / (2.0 * h);
        assert!(
            (centered - fb.multiplier).abs() <= 5.0 * h * h,
            "envelope slope {centered} vs multiplier {}",
            fb.multiplier
        );
    }

    #[test]
    fn one_shot_beta_never_exceeds_first_best() {
        let pop = example_c();
        let first_best_share = 1.0 - average_cost(&pop);
        for i in 0..=200 {
            let z = -2.0 + i as f64 * 0.025;
            let beta = crate::one_shot::aggregate(&pop, z, 1.0).beta;
            assert!(beta <= first_best_share);
        }
    }

    proptest! {
        /// The effort spread is the productivity log-ratio in both branches.
        #[test]
        fn effort_ratio_invariance(
            alpha in 0.05f64..0.95,
            theta_unskilled in 1.1f64..10.0,
            spread in 0.1f64..10.0,
            n in 0.05f64..0.95,
        ) {
            let pop = Population::new(alpha, theta_unskilled + spread, theta_unskilled).unwrap();
            if let Ok(fb) = first_best_solve(&pop, Capacity::new(n).unwrap()) {
                let ratio = (fb.effort_skilled - fb.effort_unskilled)
                    - (pop.theta_skilled() / pop.theta_unskilled()).ln();
                prop_assert!(ratio.abs() <= 1e-12);
                prop_assert!(fb.constrained == (fb.multiplier > 0.0));
            }
        }
    }
}
