//! Spline-coupled multirate Runge-Kutta integration.
//!
//! A partitioned ODE system with a few fast components and many slow ones is
//! advanced decoupled-slowest-first: the slow block takes one macro step of
//! size `H` reading an extrapolated clamped-cubic-spline waveform of the fast
//! block, then the fast block takes `m` micro steps of size `h = H/m` reading
//! a Hermite-cubic waveform of the slow block. With a fourth-order base
//! scheme and cubic waveforms the combination stays fourth-order accurate
//! while spending far fewer right-hand-side evaluations on the slow block.
//!
//! The crate ships:
//!
//! * [`rk`] — explicit Butcher tableaux, validation, generic stepping;
//! * [`spline`] — clamped cubic splines with controlled extrapolation;
//! * [`partition`] — the two-block IVP model and its coupled form;
//! * [`multirate`] — the multirate driver and evaluation-cost accounting;
//! * [`problems`] — the n-mass oscillator benchmark and its exact solution;
//! * [`config`] / [`study`] — the convergence-study harness behind the
//!   `mrrk` CLI.

pub mod config;
pub mod error;
pub mod multirate;
pub mod partition;
pub mod problems;
pub mod rk;
pub mod spline;
pub mod study;

pub use crate::config::{ErrorNorm, Overrides, RunMode, StudyConfig};
pub use crate::error::{Error, Result};
pub use crate::multirate::{
    CostReport, EvalCounter, MultirateConfig, MultirateRun, MultirateState, RunCounters,
};
pub use crate::partition::PartitionedIvp;
pub use crate::problems::MassSpringChain;
pub use crate::rk::{ButcherTableau, StageSlopes};
pub use crate::spline::{ClampedCubicSpline, Extrapolation, WaveformWindow};
pub use crate::study::{ConvergenceReport, StudyOutput};
