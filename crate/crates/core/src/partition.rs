//! Component-wise partitioned initial value problem: slow and fast blocks
//! with their right-hand sides, the concatenated layout (slow block first),
//! and the coupled monolithic form used by the bootstrap macro step.

use crate::error::{Error, Result};
use crate::multirate::EvalCounter;

/// Block right-hand side `(t, y_slow, y_fast) -> dy_block/dt`.
///
/// Callbacks must be pure; call counting is handled by the integrators via
/// [`EvalCounter`], never by the callback itself.
pub type BlockRhs = Box<dyn Fn(f64, &[f64], &[f64]) -> Vec<f64> + Send + Sync>;

/// A two-block partitioned IVP on `[t0, t_end]`.
///
/// `scalar_weight_*` is the number of scalar function evaluations one callback
/// invocation stands for in cost reports (for second-order mechanical systems:
/// one per equation of motion in the block, not per first-order component).
pub struct PartitionedIvp {
    f_slow: BlockRhs,
    f_fast: BlockRhs,
    pub y0_slow: Vec<f64>,
    pub y0_fast: Vec<f64>,
    pub t0: f64,
    pub t_end: f64,
    pub scalar_weight_slow: u64,
    pub scalar_weight_fast: u64,
}

impl PartitionedIvp {
    /// Build an IVP with default scalar weights equal to the first-order
    /// block dimensions.
    pub fn new(
        f_slow: BlockRhs,
        f_fast: BlockRhs,
        y0_slow: Vec<f64>,
        y0_fast: Vec<f64>,
        t0: f64,
        t_end: f64,
    ) -> Result<Self> {
        let (w_slow, w_fast) = (y0_slow.len() as u64, y0_fast.len() as u64);
        Self::with_weights(f_slow, f_fast, y0_slow, y0_fast, t0, t_end, w_slow, w_fast)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_weights(
        f_slow: BlockRhs,
        f_fast: BlockRhs,
        y0_slow: Vec<f64>,
        y0_fast: Vec<f64>,
        t0: f64,
        t_end: f64,
        scalar_weight_slow: u64,
        scalar_weight_fast: u64,
    ) -> Result<Self> {
        if y0_slow.is_empty() || y0_fast.is_empty() {
            return Err(Error::InvalidParameter {
                name: "partitioned IVP",
                reason: "both blocks must be non-empty".into(),
            });
        }
        if !t_end.is_finite() || t_end <= t0 {
            return Err(Error::InvalidParameter {
                name: "partitioned IVP",
                reason: format!("t_end = {t_end} must exceed t0 = {t0}"),
            });
        }
        if scalar_weight_slow == 0 || scalar_weight_fast == 0 {
            return Err(Error::InvalidParameter {
                name: "partitioned IVP",
                reason: "scalar weights must be at least 1".into(),
            });
        }
        Ok(PartitionedIvp {
            f_slow,
            f_fast,
            y0_slow,
            y0_fast,
            t0,
            t_end,
            scalar_weight_slow,
            scalar_weight_fast,
        })
    }

    pub fn d_slow(&self) -> usize {
        self.y0_slow.len()
    }

    pub fn d_fast(&self) -> usize {
        self.y0_fast.len()
    }

    pub fn d_total(&self) -> usize {
        self.d_slow() + self.d_fast()
    }

    /// Evaluate the slow right-hand side, recording the call.
    pub fn eval_slow(
        &self,
        t: f64,
        y_slow: &[f64],
        y_fast: &[f64],
        counter: &EvalCounter,
    ) -> Result<Vec<f64>> {
        counter.record_slow();
        let out = (self.f_slow)(t, y_slow, y_fast);
        if out.len() != self.d_slow() {
            return Err(Error::DimensionMismatch {
                context: "slow right-hand side output",
                expected: self.d_slow(),
                actual: out.len(),
            });
        }
        Ok(out)
    }

    /// Evaluate the fast right-hand side, recording the call.
    pub fn eval_fast(
        &self,
        t: f64,
        y_slow: &[f64],
        y_fast: &[f64],
        counter: &EvalCounter,
    ) -> Result<Vec<f64>> {
        counter.record_fast();
        let out = (self.f_fast)(t, y_slow, y_fast);
        if out.len() != self.d_fast() {
            return Err(Error::DimensionMismatch {
                context: "fast right-hand side output",
                expected: self.d_fast(),
                actual: out.len(),
            });
        }
        Ok(out)
    }

    /// Split a concatenated state into `(slow, fast)` views.
    pub fn split<'y>(&self, y: &'y [f64]) -> Result<(&'y [f64], &'y [f64])> {
        if y.len() != self.d_total() {
            return Err(Error::DimensionMismatch {
                context: "coupled state",
                expected: self.d_total(),
                actual: y.len(),
            });
        }
        Ok(y.split_at(self.d_slow()))
    }

    /// Concatenate block states, slow block first.
    pub fn concat(&self, y_slow: &[f64], y_fast: &[f64]) -> Vec<f64> {
        let mut y = Vec::with_capacity(y_slow.len() + y_fast.len());
        y.extend_from_slice(y_slow);
        y.extend_from_slice(y_fast);
        y
    }

    /// Monolithic right-hand side over the concatenated state. Each call
    /// invokes both block callbacks once and records both on `counter`.
    pub fn coupled<'a>(
        &'a self,
        counter: &'a EvalCounter,
    ) -> impl Fn(f64, &[f64]) -> Result<Vec<f64>> + 'a {
        move |t, y| {
            let (y_slow, y_fast) = self.split(y)?;
            let mut d = self.eval_slow(t, y_slow, y_fast, counter)?;
            d.extend(self.eval_fast(t, y_slow, y_fast, counter)?);
            Ok(d)
        }
    }
}
