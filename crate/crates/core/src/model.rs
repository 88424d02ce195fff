//! Shared domain primitives: author populations, evaluation technology,
//! journal capacity, review policies, and the average-cost and
//! interior-validity computations used by every solver.
//!
//! All parameter validation happens here, at construction; the solvers
//! assume well-formed inputs.

use crate::error::Error;
use serde::{Deserialize, Serialize};

/// Paper quality. Low carries value 0, high carries value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quality {
    Low,
    High,
}

impl Quality {
    pub fn value(self) -> f64 {
        match self {
            Quality::Low => 0.0,
            Quality::High => 1.0,
        }
    }
}

/// Author-side primitives: the skilled share and the two productivity
/// levels entering effort costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Population {
    alpha: f64,
    theta_skilled: f64,
    theta_unskilled: f64,
}

impl Population {
    pub fn new(alpha: f64, theta_skilled: f64, theta_unskilled: f64) -> Result<Self, Error> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie strictly in (0, 1), got {alpha}"
            )));
        }
        if !theta_skilled.is_finite() || !theta_unskilled.is_finite() || theta_unskilled <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "productivities must be positive and finite, got ({theta_skilled}, {theta_unskilled})"
            )));
        }
        if theta_skilled <= theta_unskilled {
            return Err(Error::InvalidParameter(format!(
                "theta_skilled must exceed theta_unskilled, got ({theta_skilled}, {theta_unskilled})"
            )));
        }
        Ok(Self {
            alpha,
            theta_skilled,
            theta_unskilled,
        })
    }

    /// Construct without the `theta_skilled > theta_unskilled` check.
    /// Intended for degenerate equal-type experiments; positivity is still
    /// debug-asserted.
    pub fn new_unchecked(alpha: f64, theta_skilled: f64, theta_unskilled: f64) -> Self {
        debug_assert!(alpha > 0.0 && alpha < 1.0);
        debug_assert!(theta_skilled > 0.0 && theta_unskilled > 0.0);
        Self {
            alpha,
            theta_skilled,
            theta_unskilled,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta_skilled(&self) -> f64 {
        self.theta_skilled
    }

    pub fn theta_unskilled(&self) -> f64 {
        self.theta_unskilled
    }
}

/// Evaluation technology: the standard deviation of the referee signal
/// noise, in quality units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Technology {
    sigma: f64,
}

impl Technology {
    pub fn new(sigma: f64) -> Result<Self, Error> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Maximum publishable mass of papers, strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capacity {
    n: f64,
}

impl Capacity {
    pub fn new(n: f64) -> Result<Self, Error> {
        if !n.is_finite() || n <= 0.0 || n >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "capacity must lie strictly in (0, 1), got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// One-shot review policy: a single evaluation threshold in signal units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneShotPolicy {
    pub z_bar: f64,
}

impl OneShotPolicy {
    pub fn new(z_bar: f64) -> Result<Self, Error> {
        if !z_bar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "evaluation threshold must be finite, got {z_bar}"
            )));
        }
        Ok(Self { z_bar })
    }
}

/// Dynamic review policy: evaluation threshold plus the cost of
/// challenging a rejection, in publication-benefit units.
///
/// `kappa` is unconstrained above 0; only the policy optimizer restricts
/// its search to [0, 1], the economically relevant band given the
/// publication benefit is normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicPolicy {
    pub z_bar: f64,
    pub kappa: f64,
}

impl DynamicPolicy {
    pub fn new(z_bar: f64, kappa: f64) -> Result<Self, Error> {
        if !z_bar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "evaluation threshold must be finite, got {z_bar}"
            )));
        }
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "challenge cost must be non-negative and finite, got {kappa}"
            )));
        }
        Ok(Self { z_bar, kappa })
    }
}

/// A review policy of either kind; the variant selects the game the
/// simulator and grid oracle play.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ReviewPolicy {
    OneShot(OneShotPolicy),
    Dynamic(DynamicPolicy),
}

impl ReviewPolicy {
    pub fn z_bar(&self) -> f64 {
        match self {
            ReviewPolicy::OneShot(p) => p.z_bar,
            ReviewPolicy::Dynamic(p) => p.z_bar,
        }
    }
}

/// Average marginal cost of research across the population:
/// c̄ = α/θ₁ + (1-α)/θ₀. A strict convex combination of 1/θ₁ and 1/θ₀.
pub fn average_cost(pop: &Population) -> f64 {
    pop.alpha / pop.theta_skilled + (1.0 - pop.alpha) / pop.theta_unskilled
}

/// Interior-validity margin θ·gap - 1 for a type-θ author facing the given
/// acceptance-rate gap. Non-negative means the author's effort optimum is
/// interior; negative means the corner a = 0.
pub fn interior_margin(theta: f64, rate_gap: f64) -> f64 {
    theta * rate_gap - 1.0
}
