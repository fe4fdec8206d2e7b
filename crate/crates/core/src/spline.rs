//! Clamped cubic splines in value/slope (Hermite) form.
//!
//! Construction solves the standard tridiagonal system for the interior first
//! derivatives; both endpoint derivatives are prescribed. Each segment is then
//! evaluated from the two-point Hermite basis, which also yields first and
//! second derivatives. A `WaveformWindow` gates evaluation to a valid time
//! interval and controls whether the final segment's cubic may be extended
//! past the last breakpoint.

use crate::error::{Error, Result};

/// Relative slack for window-boundary comparisons. Stage times are assembled
/// as `t0 + n*H + (lambda + c_i)*h` and may drift from the nominal window edge
/// by a few ulps.
fn time_slack(lo: f64, hi: f64) -> f64 {
    1e-12 * (1.0 + lo.abs().max(hi.abs()))
}

/// Piecewise-cubic C^2 interpolant with prescribed endpoint derivatives.
///
/// Stores breakpoints, node values and node slopes for a (possibly
/// vector-valued) function; each segment is the Hermite cubic determined by
/// its endpoint values and slopes.
#[derive(Debug, Clone)]
pub struct ClampedCubicSpline {
    ts: Vec<f64>,
    ys: Vec<Vec<f64>>,
    ds: Vec<Vec<f64>>,
    dim: usize,
}

/// Whether evaluation past the last breakpoint is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extrapolation {
    Forbidden,
    /// Extend the cubic of the final segment beyond its interval.
    LastSegment,
}

/// A spline together with the interval on which it may be read.
#[derive(Debug, Clone, Copy)]
pub struct WaveformWindow<'a> {
    spline: &'a ClampedCubicSpline,
    lo: f64,
    hi: f64,
    mode: Extrapolation,
}

impl ClampedCubicSpline {
    /// The unique cubic with `p(t0) = y0`, `p(t1) = y1`, `p'(t0) = d0`,
    /// `p'(t1) = d1`, as a one-segment spline.
    pub fn hermite(
        t0: f64,
        t1: f64,
        y0: &[f64],
        y1: &[f64],
        d0: &[f64],
        d1: &[f64],
    ) -> Result<Self> {
        Self::clamped(&[t0, t1], &[y0.to_vec(), y1.to_vec()], d0, d1)
    }

    /// Clamped cubic spline through `(ts, ys)` with prescribed first
    /// derivatives `d_start`, `d_end` at the ends.
    ///
    /// Interior slopes solve the C^2 continuity system; for uniform spacing
    /// `h` the rows reduce to `d_{i-1} + 4 d_i + d_{i+1} = 3 (y_{i+1} - y_{i-1}) / h`.
    /// Non-uniform spacing is supported. The system is strictly diagonally
    /// dominant, so the Thomas sweep below needs no pivoting.
    pub fn clamped(ts: &[f64], ys: &[Vec<f64>], d_start: &[f64], d_end: &[f64]) -> Result<Self> {
        if ts.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "breakpoints",
                reason: format!("need at least two, got {}", ts.len()),
            });
        }
        for (i, pair) in ts.windows(2).enumerate() {
            if pair[1].partial_cmp(&pair[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::NonIncreasingBreakpoints {
                    index: i + 1,
                    value: pair[1],
                    previous: pair[0],
                });
            }
        }
        if ys.len() != ts.len() {
            return Err(Error::DimensionMismatch {
                context: "spline values",
                expected: ts.len(),
                actual: ys.len(),
            });
        }
        let dim = ys[0].len();
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "spline values",
                reason: "zero-dimensional data".into(),
            });
        }
        for y in ys {
            if y.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "spline values",
                    expected: dim,
                    actual: y.len(),
                });
            }
        }
        for (what, d) in [("start slope", d_start), ("end slope", d_end)] {
            if d.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: if what == "start slope" {
                        "spline start slope"
                    } else {
                        "spline end slope"
                    },
                    expected: dim,
                    actual: d.len(),
                });
            }
        }

        let n_seg = ts.len() - 1;
        let mut ds = vec![vec![0.0; dim]; ts.len()];
        ds[0].copy_from_slice(d_start);
        ds[n_seg].copy_from_slice(d_end);

        let unknowns = n_seg.saturating_sub(1);
        if unknowns > 0 {
            let h: Vec<f64> = ts.windows(2).map(|w| w[1] - w[0]).collect();
            let mut sub = vec![0.0; unknowns];
            let mut diag = vec![0.0; unknowns];
            let mut sup = vec![0.0; unknowns];
            let mut rhs = vec![vec![0.0; dim]; unknowns];
            for (row, i) in (1..n_seg).enumerate() {
                let hm = h[i - 1];
                let hp = h[i];
                sub[row] = 1.0 / hm;
                diag[row] = 2.0 * (1.0 / hm + 1.0 / hp);
                sup[row] = 1.0 / hp;
                for k in 0..dim {
                    rhs[row][k] = 3.0
                        * ((ys[i][k] - ys[i - 1][k]) / (hm * hm)
                            + (ys[i + 1][k] - ys[i][k]) / (hp * hp));
                }
            }
            for k in 0..dim {
                rhs[0][k] -= sub[0] * ds[0][k];
                rhs[unknowns - 1][k] -= sup[unknowns - 1] * ds[n_seg][k];
            }
            // Thomas forward elimination + back substitution.
            for row in 1..unknowns {
                let w = sub[row] / diag[row - 1];
                diag[row] -= w * sup[row - 1];
                let (head, tail) = rhs.split_at_mut(row);
                for (value, prev) in tail[0].iter_mut().zip(&head[row - 1]) {
                    *value -= w * prev;
                }
            }
            for k in 0..dim {
                ds[n_seg - 1][k] = rhs[unknowns - 1][k] / diag[unknowns - 1];
            }
            for row in (0..unknowns - 1).rev() {
                for k in 0..dim {
                    ds[row + 1][k] = (rhs[row][k] - sup[row] * ds[row + 2][k]) / diag[row];
                }
            }
        }

        Ok(ClampedCubicSpline {
            ts: ts.to_vec(),
            ys: ys.to_vec(),
            ds,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.ts
    }

    /// Node values; for the multirate driver these are the fast micro values.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.ys
    }

    /// First derivatives at the nodes (prescribed at the ends, solved inside).
    pub fn slopes(&self) -> &[Vec<f64>] {
        &self.ds
    }

    pub fn start(&self) -> f64 {
        self.ts[0]
    }

    pub fn end(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// View of this spline restricted to `[lo, hi]`.
    ///
    /// `lo` must not precede the first breakpoint; `hi` may extend past the
    /// last one only in `LastSegment` mode.
    pub fn window(&self, lo: f64, hi: f64, mode: Extrapolation) -> Result<WaveformWindow<'_>> {
        let slack = time_slack(lo, hi);
        if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidParameter {
                name: "waveform window",
                reason: format!("empty interval [{lo}, {hi}]"),
            });
        }
        if lo < self.start() - slack {
            return Err(Error::InvalidParameter {
                name: "waveform window",
                reason: format!(
                    "window start {lo} precedes first breakpoint {}",
                    self.start()
                ),
            });
        }
        if mode == Extrapolation::Forbidden && hi > self.end() + slack {
            return Err(Error::InvalidParameter {
                name: "waveform window",
                reason: format!(
                    "window end {hi} exceeds last breakpoint {} with extrapolation forbidden",
                    self.end()
                ),
            });
        }
        Ok(WaveformWindow {
            spline: self,
            lo,
            hi,
            mode,
        })
    }

    /// Segment whose cubic governs time `t`; clamped so that queries past the
    /// last breakpoint resolve to the final segment.
    fn segment_index(&self, t: f64) -> usize {
        let n_seg = self.ts.len() - 1;
        self.ts[1..n_seg]
            .partition_point(|&edge| edge <= t)
            .min(n_seg - 1)
    }

    fn eval_segment(&self, seg: usize, t: f64, order: u32) -> Vec<f64> {
        let h = self.ts[seg + 1] - self.ts[seg];
        let s = (t - self.ts[seg]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        // Hermite basis weights for (y_i, d_i, y_{i+1}, d_{i+1}).
        let (w_y0, w_d0, w_y1, w_d1) = match order {
            0 => (
                2.0 * s3 - 3.0 * s2 + 1.0,
                (s3 - 2.0 * s2 + s) * h,
                -2.0 * s3 + 3.0 * s2,
                (s3 - s2) * h,
            ),
            1 => (
                (6.0 * s2 - 6.0 * s) / h,
                3.0 * s2 - 4.0 * s + 1.0,
                (6.0 * s - 6.0 * s2) / h,
                3.0 * s2 - 2.0 * s,
            ),
            2 => (
                (12.0 * s - 6.0) / (h * h),
                (6.0 * s - 4.0) / h,
                (6.0 - 12.0 * s) / (h * h),
                (6.0 * s - 2.0) / h,
            ),
            _ => unreachable!("derivative order checked by the caller"),
        };
        (0..self.dim)
            .map(|k| {
                w_y0 * self.ys[seg][k]
                    + w_d0 * self.ds[seg][k]
                    + w_y1 * self.ys[seg + 1][k]
                    + w_d1 * self.ds[seg + 1][k]
            })
            .collect()
    }
}

impl WaveformWindow<'_> {
    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn admit(&self, t: f64) -> Result<usize> {
        let slack = time_slack(self.lo, self.hi);
        if t < self.lo - slack || t > self.hi + slack {
            return Err(Error::OutsideWindow {
                t,
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.mode == Extrapolation::Forbidden && t > self.spline.end() + slack {
            return Err(Error::ExtrapolationForbidden {
                t,
                t_end: self.spline.end(),
            });
        }
        Ok(self.spline.segment_index(t))
    }

    /// Spline value at `t`; past the last breakpoint (in `LastSegment` mode)
    /// this is the final segment's cubic extended as a polynomial.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let seg = self.admit(t)?;
        Ok(self.spline.eval_segment(seg, t, 0))
    }

    /// First or second derivative of the active cubic at `t`.
    pub fn eval_derivative(&self, t: f64, order: u32) -> Result<Vec<f64>> {
        if order != 1 && order != 2 {
            return Err(Error::UnsupportedDerivative { order });
        }
        let seg = self.admit(t)?;
        Ok(self.spline.eval_segment(seg, t, order))
    }
}
