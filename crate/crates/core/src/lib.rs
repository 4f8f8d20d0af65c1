//! Multi-agent asynchronous online convex optimization with delayed feedback.
//!
//! At every round exactly one of `M` agents is active and plays a decision
//! from a Euclidean ball. The loss of round `t` reaches agent `i` at the end
//! of round `t + d[t][i] - 1`, so each agent decides from its own, possibly
//! stale, subset of past feedback.
//!
//! The crate provides:
//!
//! * [`learners`]: follow-the-delayed-leader ([`learners::Ftdl`]), its
//!   approximate variant driven by a single shared vector per round
//!   ([`learners::Aftdl`]) and the delayed dual averaging baseline
//!   ([`learners::Dda`]);
//! * [`sim`]: a deterministic discrete-round simulator of the delivery model;
//! * [`oracles`]: offline optima, ideal (one-step-ahead) leaders and regret
//!   curves with the logarithmic regret bounds attached;
//! * [`data`]: LIBSVM parsing, seeded sampling and gradient budgets.
//!
//! ```
//! use async_oco::prelude::*;
//!
//! let domain = BallDomain::new(3, 1.0).unwrap();
//! let config = RunConfig::builder(domain.clone())
//!     .agents(2)
//!     .horizon(200)
//!     .max_delay(10)
//!     .strong_convexity(1.0)
//!     .seed(7)
//!     .build()
//!     .unwrap();
//! let losses = synthetic::quadratic_sequence(3, 200, 1.0, 1.0, 7);
//! let trace = Simulation::new(config, Algorithm::Aftdl, losses.clone())
//!     .unwrap()
//!     .run()
//!     .unwrap();
//! assert_eq!(trace.len(), 200);
//!
//! let optimum = offline_optimum(&losses, &domain, 1e-9).unwrap();
//! let report = regret_curve(&trace, &losses, &optimum.x, &BoundParams::new(10, 3.0, 1.0, 1.0)).unwrap();
//! assert!(report.final_regret() <= report.final_bound_aftdl());
//! ```

pub mod data;
pub mod error;
pub mod learners;
pub mod linalg;
pub mod losses;
pub mod model;
pub mod oracles;
pub mod rng;
pub mod sim;
pub mod synthetic;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::data::{compute_budget, parse_libsvm, sample_and_split, Example, ExperimentDataset};
    pub use crate::learners::{project_ball, unconstrained_wrap, Aftdl, Algorithm, Dda, Ftdl, Learner};
    pub use crate::losses::{HingeL2Loss, LipschitzBudget, Loss, QuadraticLoss};
    pub use crate::model::{
        ActivationPolicy, BallDomain, DelaySchedule, FeedbackMessage, FeedbackMode, Payload, RunConfig,
    };
    pub use crate::oracles::{ideal_sequence, offline_optimum, regret_curve, test_accuracy, BoundParams};
    pub use crate::sim::{RunTrace, Simulation};
    pub use crate::synthetic;
}

// Keeps the guide's snippets compiling against the current API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/delays.md")]
    struct Delays;
    #[doc = include_str!("../../../book/src/learners.md")]
    struct Learners;
    #[doc = include_str!("../../../book/src/regret.md")]
    struct Regret;
    #[doc = include_str!("../../../book/src/data.md")]
    struct Data;
}
