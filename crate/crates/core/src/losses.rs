//! Strongly convex per-round losses and the surrogate built from gradient
//! feedback.

use crate::error::{check_dim, Result};
use crate::linalg::{axpy, dot, norm, norm_sq};

/// `max(1 - y <w, x>, 0) + (lambda / 2) ||x||^2`
#[derive(Debug, Clone, PartialEq)]
pub struct HingeL2Loss {
    pub features: Vec<f64>,
    /// `+1.0` or `-1.0`.
    pub label: f64,
    pub lambda: f64,
}

/// `(lambda / 2) ||x - anchor||^2 + offset`
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLoss {
    pub anchor: Vec<f64>,
    pub lambda: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Loss {
    HingeL2(HingeL2Loss),
    Quadratic(QuadraticLoss),
}

/// Uniform bound `G` on gradient norms over the decision set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBudget {
    pub g: f64,
}

impl HingeL2Loss {
    pub fn new(features: Vec<f64>, label: f64, lambda: f64) -> Self {
        debug_assert!(label == 1.0 || label == -1.0);
        Self { features, label, lambda }
    }

    /// `1 - y <w, x>`; the hinge is active when this is positive.
    pub fn margin_slack(&self, x: &[f64]) -> f64 {
        1.0 - self.label * dot(&self.features, x)
    }
}

impl QuadraticLoss {
    pub fn new(anchor: Vec<f64>, lambda: f64) -> Self {
        Self { anchor, lambda, offset: 0.0 }
    }

    /// The surrogate `<z, x> + (lambda / 2) ||x||^2` written as a quadratic:
    /// anchor `-z / lambda`, offset `-||z||^2 / (2 lambda)`.
    pub fn from_surrogate(z: &[f64], lambda: f64) -> Self {
        Self { anchor: z.iter().map(|v| -v / lambda).collect(), lambda, offset: -norm_sq(z) / (2.0 * lambda) }
    }
}

impl Loss {
    pub fn dim(&self) -> usize {
        match self {
            Loss::HingeL2(l) => l.features.len(),
            Loss::Quadratic(l) => l.anchor.len(),
        }
    }

    /// Strong-convexity modulus.
    pub fn lambda(&self) -> f64 {
        match self {
            Loss::HingeL2(l) => l.lambda,
            Loss::Quadratic(l) => l.lambda,
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.value_unchecked(x))
    }

    pub(crate) fn value_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Loss::HingeL2(l) => l.margin_slack(x).max(0.0) + 0.5 * l.lambda * norm_sq(x),
            Loss::Quadratic(l) => {
                let d: f64 = x.iter().zip(&l.anchor).map(|(a, b)| (a - b) * (a - b)).sum();
                0.5 * l.lambda * d + l.offset
            }
        }
    }

    /// Gradient, or for the hinge the subgradient that drops the hinge term
    /// at the kink (`1 - y <w, x> == 0`).
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self.gradient_unchecked(x))
    }

    pub(crate) fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Loss::HingeL2(l) => {
                let mut g: Vec<f64> = x.iter().map(|v| l.lambda * v).collect();
                if l.margin_slack(x) > 0.0 {
                    axpy(-l.label, &l.features, &mut g);
                }
                g
            }
            Loss::Quadratic(l) => x.iter().zip(&l.anchor).map(|(a, b)| l.lambda * (a - b)).collect(),
        }
    }

    /// Upper bound on `||grad f(x)||` over the ball of the given radius:
    /// `lambda R + ||w||` for the hinge, `lambda (R + ||a||)` for a quadratic.
    pub fn gradient_bound(&self, radius: f64) -> f64 {
        match self {
            Loss::HingeL2(l) => l.lambda * radius + norm(&l.features),
            Loss::Quadratic(l) => l.lambda * (radius + norm(&l.anchor)),
        }
    }
}

impl From<HingeL2Loss> for Loss {
    fn from(l: HingeL2Loss) -> Self {
        Loss::HingeL2(l)
    }
}

impl From<QuadraticLoss> for Loss {
    fn from(l: QuadraticLoss) -> Self {
        Loss::Quadratic(l)
    }
}

impl LipschitzBudget {
    /// Largest per-loss gradient bound over the ball of the given radius.
    pub fn for_losses<'a>(losses: impl IntoIterator<Item = &'a Loss>, radius: f64) -> Self {
        let g = losses.into_iter().map(|l| l.gradient_bound(radius)).fold(0.0, f64::max);
        Self { g }
    }
}

/// `z = grad f(x_t) - lambda x_t`, the one vector shared per round by the
/// approximate leader.
pub fn surrogate_vector(grad: &[f64], x_t: &[f64], lambda: f64) -> Result<Vec<f64>> {
    check_dim(grad.len(), x_t.len())?;
    Ok(grad.iter().zip(x_t).map(|(g, x)| g - lambda * x).collect())
}

/// `<z, x> + (lambda / 2) ||x||^2`
pub fn surrogate_value(z: &[f64], lambda: f64, x: &[f64]) -> Result<f64> {
    check_dim(z.len(), x.len())?;
    Ok(dot(z, x) + 0.5 * lambda * norm_sq(x))
}

/// Gradient of [`surrogate_value`]: `z + lambda x`.
pub fn surrogate_gradient(z: &[f64], lambda: f64, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(z.len(), x.len())?;
    Ok(z.iter().zip(x).map(|(a, b)| a + lambda * b).collect())
}
