//! Seeded synthetic loss sequences.

use crate::linalg::dot;
use crate::losses::{HingeL2Loss, Loss, QuadraticLoss};
use crate::rng::{SplitMix64, Stream};

/// `(lambda/2)||x - a_t||^2` with anchors uniform in the ball of radius
/// `anchor_radius`.
pub fn quadratic_sequence(dim: usize, horizon: usize, lambda: f64, anchor_radius: f64, seed: u64) -> Vec<Loss> {
    let mut rng = SplitMix64::stream(seed, Stream::Synthetic);
    (0..horizon).map(|_| QuadraticLoss::new(rng.in_ball(dim, anchor_radius), lambda).into()).collect()
}

/// Hinge+L2 losses on features uniform in the unit ball, labelled by a
/// random hyperplane through the origin with 10% of labels flipped.
pub fn hinge_sequence(dim: usize, horizon: usize, lambda: f64, seed: u64) -> Vec<Loss> {
    let mut rng = SplitMix64::stream(seed, Stream::Synthetic);
    let normal = rng.in_ball(dim, 1.0);
    (0..horizon)
        .map(|_| {
            let w = rng.in_ball(dim, 1.0);
            let mut y = if dot(&normal, &w) >= 0.0 { 1.0 } else { -1.0 };
            if rng.next_f64() < 0.1 {
                y = -y;
            }
            HingeL2Loss::new(w, y, lambda).into()
        })
        .collect()
}
