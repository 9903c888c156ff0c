//! Linear (Mehler) and nonlinear (Strang split-step) time evolution.

mod mehler;
mod potential;
mod spec;
mod strang;
mod trace;

pub use mehler::{mehler_apply, mehler_compose, plan_legs};
pub use potential::{Potential, Sampler};
pub use spec::{AdaptiveStep, NonlinearitySpec, Scheme, StepControls};
pub use strang::{strang_evolve, strang_propagate, Outcome, StepInfo};
pub use trace::{SolutionTrace, StopReason};
