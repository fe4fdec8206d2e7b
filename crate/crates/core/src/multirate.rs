//! Decoupled-slowest-first multirate Runge-Kutta driver with clamped-spline
//! waveform coupling.
//!
//! Each macro window `[t_n, t_n + H]` advances the slow block with one step of
//! size `H` reading the previous window's fast spline extrapolated past its
//! end, then rebuilds the coupling data for the fast block: a Hermite cubic of
//! the slow solution over the window, `m` fast micro steps of size `h = H/m`
//! reading that cubic, and finally the clamped cubic spline of the fast micro
//! values that the next window will extrapolate. The first window has no
//! spline to extrapolate, so it integrates the coupled monolithic system with
//! `m` micro steps and splines the resulting fast history.

use crate::error::{Error, Result};
use crate::partition::PartitionedIvp;
use crate::rk::{self, ButcherTableau};
use crate::spline::{ClampedCubicSpline, Extrapolation};
use std::cell::Cell;
use std::fmt;
use std::ops::Sub;

/// Fixed-step multirate configuration: macro step `H` and micro factor `m`
/// (micro step `h = H/m`).
#[derive(Debug, Clone)]
pub struct MultirateConfig {
    pub tableau: ButcherTableau,
    pub macro_step: f64,
    pub micro_per_macro: usize,
}

impl MultirateConfig {
    pub fn new(tableau: ButcherTableau, macro_step: f64, micro_per_macro: usize) -> Self {
        MultirateConfig {
            tableau,
            macro_step,
            micro_per_macro,
        }
    }

    pub fn micro_step(&self) -> f64 {
        self.macro_step / self.micro_per_macro as f64
    }

    /// Validate against an IVP's time span; returns the macro window count.
    pub fn validate(&self, ivp: &PartitionedIvp) -> Result<usize> {
        self.tableau.require_valid()?;
        if self.macro_step <= 0.0 {
            return Err(Error::NonPositiveStep { h: self.macro_step });
        }
        if self.micro_per_macro == 0 {
            return Err(Error::InvalidParameter {
                name: "micro_per_macro",
                reason: "multirate factor must be at least 1".into(),
            });
        }
        integer_steps(ivp.t0, ivp.t_end, self.macro_step)
    }
}

/// Number of equal steps of `h` covering `[t0, t_end]`, required to be an
/// integer within 1e-9 relative.
pub fn integer_steps(t0: f64, t_end: f64, h: f64) -> Result<usize> {
    if h <= 0.0 {
        return Err(Error::NonPositiveStep { h });
    }
    let raw = (t_end - t0) / h;
    let rounded = raw.round();
    if rounded < 0.5 || (raw - rounded).abs() > 1e-9 * raw.abs().max(1.0) {
        return Err(Error::GridMismatch {
            t0,
            t_end,
            h,
            steps: raw,
        });
    }
    Ok(rounded as usize)
}

/// Right-hand-side call counter with the problem's scalar weights attached.
///
/// Counts only ever increase; `scalar_total` is
/// `slow_calls * weight_slow + fast_calls * weight_fast`.
#[derive(Debug)]
pub struct EvalCounter {
    slow: Cell<u64>,
    fast: Cell<u64>,
    weight_slow: u64,
    weight_fast: u64,
}

impl EvalCounter {
    pub fn new(weight_slow: u64, weight_fast: u64) -> Self {
        EvalCounter {
            slow: Cell::new(0),
            fast: Cell::new(0),
            weight_slow,
            weight_fast,
        }
    }

    pub fn for_ivp(ivp: &PartitionedIvp) -> Self {
        Self::new(ivp.scalar_weight_slow, ivp.scalar_weight_fast)
    }

    pub fn record_slow(&self) {
        self.slow.set(self.slow.get() + 1);
    }

    pub fn record_fast(&self) {
        self.fast.set(self.fast.get() + 1);
    }

    pub fn slow_calls(&self) -> u64 {
        self.slow.get()
    }

    pub fn fast_calls(&self) -> u64 {
        self.fast.get()
    }

    pub fn scalar_total(&self) -> u64 {
        self.slow.get() * self.weight_slow + self.fast.get() * self.weight_fast
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            slow_calls: self.slow.get(),
            fast_calls: self.fast.get(),
            scalar_total: self.scalar_total(),
        }
    }
}

/// Immutable counter readout; differences give per-window costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CounterSnapshot {
    pub slow_calls: u64,
    pub fast_calls: u64,
    pub scalar_total: u64,
}

impl Sub for CounterSnapshot {
    type Output = CounterSnapshot;

    fn sub(self, rhs: CounterSnapshot) -> CounterSnapshot {
        CounterSnapshot {
            slow_calls: self.slow_calls - rhs.slow_calls,
            fast_calls: self.fast_calls - rhs.fast_calls,
            scalar_total: self.scalar_total - rhs.scalar_total,
        }
    }
}

/// Counters for one integration: `stage` tallies RK stage calls (the usual
/// cost model for RK schemes); `waveform` tallies the extra end-derivative
/// calls made to clamp splines, kept separate so the stage counts stay
/// comparable across schemes.
#[derive(Debug)]
pub struct RunCounters {
    pub stage: EvalCounter,
    pub waveform: EvalCounter,
}

impl RunCounters {
    pub fn for_ivp(ivp: &PartitionedIvp) -> Self {
        RunCounters {
            stage: EvalCounter::for_ivp(ivp),
            waveform: EvalCounter::for_ivp(ivp),
        }
    }
}

/// State after macro window `n`: the solution values at `t_n` plus the fast
/// spline over `[t_{n-1}, t_n]` and its cached end slope
/// `f_fast(t_n, y_slow, y_fast)`, which doubles as the next spline's start
/// slope.
#[derive(Debug, Clone)]
pub struct MultirateState {
    macro_index: usize,
    t: f64,
    y_slow: Vec<f64>,
    y_fast: Vec<f64>,
    fast_spline: ClampedCubicSpline,
    fast_end_slope: Vec<f64>,
    macro_step: f64,
}

impl MultirateState {
    pub fn macro_index(&self) -> usize {
        self.macro_index
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn y_slow(&self) -> &[f64] {
        &self.y_slow
    }

    pub fn y_fast(&self) -> &[f64] {
        &self.y_fast
    }

    /// Fast spline over the window that ends at [`time`](Self::time).
    pub fn fast_spline(&self) -> &ClampedCubicSpline {
        &self.fast_spline
    }

    /// Fast micro values of the previous window (the spline's nodes).
    pub fn micro_history(&self) -> &[Vec<f64>] {
        self.fast_spline.values()
    }

    /// The fast waveform readable on `[t_n, t_n + H]`: the spline's final
    /// cubic extended past `t_n`.
    pub fn fast_waveform(&self) -> Result<crate::spline::WaveformWindow<'_>> {
        self.fast_spline
            .window(self.t, self.t + self.macro_step, Extrapolation::LastSegment)
    }

    /// Extrapolated fast value at `t in [t_n, t_n + H]`.
    pub fn extrapolate_fast(&self, t: f64) -> Result<Vec<f64>> {
        self.fast_waveform()?.eval(t)
    }
}

/// Bootstrap window: integrate the coupled system over `[t0, t0 + H]` with
/// `m` micro steps and clamp the spline of the fast history with the exact
/// end derivatives.
pub fn first_macro_step(
    ivp: &PartitionedIvp,
    cfg: &MultirateConfig,
    counters: &RunCounters,
) -> Result<MultirateState> {
    cfg.validate(ivp)?;
    let m = cfg.micro_per_macro;
    let h = cfg.micro_step();
    let t1 = ivp.t0 + cfg.macro_step;

    let coupled = ivp.coupled(&counters.stage);
    let y0 = ivp.concat(&ivp.y0_slow, &ivp.y0_fast);
    let trajectory = rk::singlerate_integrate(&cfg.tableau, &coupled, ivp.t0, &y0, h, m)?;

    let fast_values: Vec<Vec<f64>> = trajectory
        .iter()
        .map(|(_, y)| y[ivp.d_slow()..].to_vec())
        .collect();
    let (y_slow_end, y_fast_end) = {
        let (s, f) = ivp.split(&trajectory.last().unwrap().1)?;
        (s.to_vec(), f.to_vec())
    };

    let d_start = ivp.eval_fast(ivp.t0, &ivp.y0_slow, &ivp.y0_fast, &counters.waveform)?;
    let d_end = ivp.eval_fast(t1, &y_slow_end, &y_fast_end, &counters.waveform)?;
    let times = micro_grid(ivp.t0, t1, h, m);
    let fast_spline = ClampedCubicSpline::clamped(&times, &fast_values, &d_start, &d_end)?;

    Ok(MultirateState {
        macro_index: 1,
        t: t1,
        y_slow: y_slow_end,
        y_fast: y_fast_end,
        fast_spline,
        fast_end_slope: d_end,
        macro_step: cfg.macro_step,
    })
}

/// Micro node times `t_lo + i*h` with the final node snapped onto the macro
/// grid so spline ends and macro labels agree bitwise.
fn micro_grid(t_lo: f64, t_hi: f64, h: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|i| if i == m { t_hi } else { t_lo + i as f64 * h })
        .collect()
}

fn in_phase(phase: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::InPhase {
        phase,
        source: Box::new(e),
    }
}

/// One general macro window, returning the new state and the window's slow
/// interpolant.
fn advance_window(
    ivp: &PartitionedIvp,
    cfg: &MultirateConfig,
    state: &MultirateState,
    counters: &RunCounters,
) -> Result<(MultirateState, ClampedCubicSpline)> {
    let m = cfg.micro_per_macro;
    let h = cfg.micro_step();
    let t_n = state.t;
    let t_next = ivp.t0 + (state.macro_index + 1) as f64 * cfg.macro_step;

    // Slow sweep over [t_n, t_n + H] reading the extrapolated fast waveform.
    let fast_waveform = state
        .fast_waveform()
        .map_err(in_phase("slow macro sweep"))?;
    let slow_rhs = |t: f64, ys: &[f64]| -> Result<Vec<f64>> {
        let y_fast = fast_waveform.eval(t)?;
        ivp.eval_slow(t, ys, &y_fast, &counters.stage)
    };
    let (y_slow_next, slopes) =
        rk::rk_step_stages(&cfg.tableau, &slow_rhs, t_n, &state.y_slow, cfg.macro_step)
            .map_err(in_phase("slow macro sweep"))?;

    // Hermite cubic of the slow solution over the window. The left slope is
    // stage one of the sweep whenever c_1 = 0 (the waveform interpolates its
    // last node, so that stage saw exactly (t_n, y_slow, y_fast)); the right
    // slope needs the extrapolated fast value since the fast update has not
    // run yet. Both end-derivative calls are tallied on the waveform counter.
    let left_slope = if cfg.tableau.c[0] == 0.0 {
        slopes.k.into_iter().next().expect("at least one stage")
    } else {
        ivp.eval_slow(t_n, &state.y_slow, &state.y_fast, &counters.waveform)
            .map_err(in_phase("slow interpolant"))?
    };
    let fast_at_end = fast_waveform
        .eval(t_next)
        .map_err(in_phase("slow interpolant"))?;
    let right_slope = ivp
        .eval_slow(t_next, &y_slow_next, &fast_at_end, &counters.waveform)
        .map_err(in_phase("slow interpolant"))?;
    let slow_cubic = ClampedCubicSpline::hermite(
        t_n,
        t_next,
        &state.y_slow,
        &y_slow_next,
        &left_slope,
        &right_slope,
    )
    .map_err(in_phase("slow interpolant"))?;
    let slow_waveform = slow_cubic
        .window(t_n, t_next, Extrapolation::Forbidden)
        .map_err(in_phase("slow interpolant"))?;

    // Fast micro sweep reading the interpolated slow waveform.
    let fast_rhs = |t: f64, yf: &[f64]| -> Result<Vec<f64>> {
        let y_slow = slow_waveform.eval(t)?;
        ivp.eval_fast(t, &y_slow, yf, &counters.stage)
    };
    let mut y_fast = state.y_fast.clone();
    let mut fast_values = Vec::with_capacity(m + 1);
    fast_values.push(y_fast.clone());
    for lam in 0..m {
        y_fast = rk::rk_step(&cfg.tableau, &fast_rhs, t_n + lam as f64 * h, &y_fast, h)
            .map_err(|e| Error::StepFailed {
                step: lam,
                source: Box::new(e),
            })
            .map_err(in_phase("fast micro sweep"))?;
        fast_values.push(y_fast.clone());
    }

    // Next fast spline; its start slope is the previous window's cached end
    // slope (the same quantity), its end slope is a fresh call.
    let d_end = ivp
        .eval_fast(t_next, &y_slow_next, &y_fast, &counters.waveform)
        .map_err(in_phase("fast spline assembly"))?;
    let times = micro_grid(t_n, t_next, h, m);
    let fast_spline =
        ClampedCubicSpline::clamped(&times, &fast_values, &state.fast_end_slope, &d_end)
            .map_err(in_phase("fast spline assembly"))?;

    Ok((
        MultirateState {
            macro_index: state.macro_index + 1,
            t: t_next,
            y_slow: y_slow_next,
            y_fast,
            fast_spline,
            fast_end_slope: d_end,
            macro_step: cfg.macro_step,
        },
        slow_cubic,
    ))
}

/// Advance one general macro window (`macro_index >= 1`).
pub fn macro_step(
    ivp: &PartitionedIvp,
    cfg: &MultirateConfig,
    state: &MultirateState,
    counters: &RunCounters,
) -> Result<MultirateState> {
    advance_window(ivp, cfg, state, counters).map(|(next, _)| next)
}

/// What [`integrate_with`] keeps besides trajectories and counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recording {
    Trajectory,
    /// Additionally store each window's coupling waveforms.
    Waveforms,
}

/// Coupling data of one general window `[t_lo, t_hi]`.
#[derive(Debug, Clone)]
pub struct WindowWaveforms {
    pub window: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Fast spline over the *previous* window, extrapolated into this one.
    pub fast_extrapolant: ClampedCubicSpline,
    /// Slow Hermite cubic over this window.
    pub slow_interpolant: ClampedCubicSpline,
}

/// Identity of the integrated problem, used to reject cost comparisons
/// between different runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemStamp {
    pub d_slow: usize,
    pub d_fast: usize,
    pub weight_slow: u64,
    pub weight_fast: u64,
    pub t0: f64,
    pub t_end: f64,
}

impl ProblemStamp {
    pub fn of(ivp: &PartitionedIvp) -> Self {
        ProblemStamp {
            d_slow: ivp.d_slow(),
            d_fast: ivp.d_fast(),
            weight_slow: ivp.scalar_weight_slow,
            weight_fast: ivp.scalar_weight_fast,
            t0: ivp.t0,
            t_end: ivp.t_end,
        }
    }
}

/// Stage and waveform counter totals of a finished run.
#[derive(Debug, Clone, Copy)]
pub struct RunTotals {
    pub stage: CounterSnapshot,
    pub waveform: CounterSnapshot,
}

/// Full record of one multirate integration.
#[derive(Debug)]
pub struct MultirateRun {
    pub config: MultirateConfig,
    /// Macro node times `t_0 .. t_N`, uniform with spacing `H`.
    pub macro_times: Vec<f64>,
    pub macro_slow: Vec<Vec<f64>>,
    pub macro_fast: Vec<Vec<f64>>,
    /// Fast micro grid over the whole span, uniform with spacing `h`.
    pub micro_times: Vec<f64>,
    pub micro_fast: Vec<Vec<f64>>,
    /// Stage-call deltas per macro window (index 0 is the bootstrap).
    pub window_costs: Vec<CounterSnapshot>,
    pub totals: RunTotals,
    /// Per-window waveforms when requested via [`Recording::Waveforms`].
    pub waveforms: Option<Vec<WindowWaveforms>>,
    pub problem: ProblemStamp,
}

impl MultirateRun {
    /// `(t, y_slow, y_fast)` at the final macro node.
    pub fn final_state(&self) -> (f64, &[f64], &[f64]) {
        (
            *self.macro_times.last().unwrap(),
            self.macro_slow.last().unwrap(),
            self.macro_fast.last().unwrap(),
        )
    }
}

/// Run the full DSF integration over the IVP's span.
pub fn integrate(ivp: &PartitionedIvp, cfg: &MultirateConfig) -> Result<MultirateRun> {
    integrate_with(ivp, cfg, Recording::Trajectory)
}

pub fn integrate_with(
    ivp: &PartitionedIvp,
    cfg: &MultirateConfig,
    recording: Recording,
) -> Result<MultirateRun> {
    let windows = cfg.validate(ivp)?;
    let counters = RunCounters::for_ivp(ivp);

    let mut macro_times = Vec::with_capacity(windows + 1);
    let mut macro_slow = Vec::with_capacity(windows + 1);
    let mut macro_fast = Vec::with_capacity(windows + 1);
    macro_times.push(ivp.t0);
    macro_slow.push(ivp.y0_slow.clone());
    macro_fast.push(ivp.y0_fast.clone());
    let mut micro_times = Vec::with_capacity(windows * cfg.micro_per_macro + 1);
    let mut micro_fast = Vec::with_capacity(windows * cfg.micro_per_macro + 1);
    let mut window_costs = Vec::with_capacity(windows);
    let mut waveforms = (recording == Recording::Waveforms).then(Vec::new);

    let mut mark = counters.stage.snapshot();
    let mut state = first_macro_step(ivp, cfg, &counters).map_err(|e| Error::MacroStepFailed {
        index: 0,
        source: Box::new(e),
    })?;
    micro_times.extend_from_slice(state.fast_spline.breakpoints());
    micro_fast.extend(state.fast_spline.values().iter().cloned());
    macro_times.push(state.t);
    macro_slow.push(state.y_slow.clone());
    macro_fast.push(state.y_fast.clone());
    let snap = counters.stage.snapshot();
    window_costs.push(snap - mark);
    mark = snap;

    for index in 1..windows {
        let extrapolant = waveforms.as_ref().map(|_| state.fast_spline.clone());
        let t_lo = state.t;
        let (next, slow_cubic) =
            advance_window(ivp, cfg, &state, &counters).map_err(|e| Error::MacroStepFailed {
                index,
                source: Box::new(e),
            })?;
        micro_times.extend_from_slice(&next.fast_spline.breakpoints()[1..]);
        micro_fast.extend(next.fast_spline.values()[1..].iter().cloned());
        macro_times.push(next.t);
        macro_slow.push(next.y_slow.clone());
        macro_fast.push(next.y_fast.clone());
        if let Some(list) = waveforms.as_mut() {
            list.push(WindowWaveforms {
                window: index,
                t_lo,
                t_hi: next.t,
                fast_extrapolant: extrapolant.unwrap(),
                slow_interpolant: slow_cubic,
            });
        }
        let snap = counters.stage.snapshot();
        window_costs.push(snap - mark);
        mark = snap;
        state = next;
    }

    Ok(MultirateRun {
        config: cfg.clone(),
        macro_times,
        macro_slow,
        macro_fast,
        micro_times,
        micro_fast,
        window_costs,
        totals: RunTotals {
            stage: counters.stage.snapshot(),
            waveform: counters.waveform.snapshot(),
        },
        waveforms,
        problem: ProblemStamp::of(ivp),
    })
}

/// Record of a plain fixed-step integration of the coupled system.
#[derive(Debug)]
pub struct SinglerateRun {
    pub tableau: ButcherTableau,
    pub step: f64,
    pub times: Vec<f64>,
    /// Concatenated `[slow; fast]` states.
    pub states: Vec<Vec<f64>>,
    pub totals: CounterSnapshot,
    pub problem: ProblemStamp,
}

impl SinglerateRun {
    pub fn final_state(&self) -> (f64, &[f64]) {
        (*self.times.last().unwrap(), self.states.last().unwrap())
    }
}

/// Integrate the coupled monolithic system over the IVP's span with fixed
/// step `h` (the singlerate reference).
pub fn integrate_singlerate(
    ivp: &PartitionedIvp,
    tableau: &ButcherTableau,
    h: f64,
) -> Result<SinglerateRun> {
    tableau.require_valid()?;
    let steps = integer_steps(ivp.t0, ivp.t_end, h)?;
    let counter = EvalCounter::for_ivp(ivp);
    let coupled = ivp.coupled(&counter);
    let y0 = ivp.concat(&ivp.y0_slow, &ivp.y0_fast);
    let trajectory = rk::singlerate_integrate(tableau, &coupled, ivp.t0, &y0, h, steps)?;
    let (times, states) = trajectory.into_iter().unzip();
    Ok(SinglerateRun {
        tableau: tableau.clone(),
        step: h,
        times,
        states,
        totals: counter.snapshot(),
        problem: ProblemStamp::of(ivp),
    })
}

/// Side-by-side evaluation cost of a multirate run and its singlerate
/// reference, in scalar function evaluations (RK stage calls only; the spline
/// end-derivative calls are reported separately).
#[derive(Debug, Clone, Copy)]
pub struct CostReport {
    pub macro_windows: usize,
    pub multirate_factor: usize,
    pub stages: usize,
    /// Measured scalars per steady-state macro window.
    pub multirate_per_window: u64,
    pub singlerate_per_window: u64,
    /// `s * (w_slow + m * w_fast)` and `s * m * (w_slow + w_fast)`.
    pub multirate_per_window_analytic: u64,
    pub singlerate_per_window_analytic: u64,
    /// Measured whole-run stage scalars (the multirate bootstrap window runs
    /// the coupled system, so its cost matches the singlerate window).
    pub multirate_total: u64,
    pub singlerate_total: u64,
    /// Per-window analytic cost times the window count.
    pub multirate_total_analytic: u64,
    pub singlerate_total_analytic: u64,
    /// Spline end-derivative calls of the multirate run (slow, fast).
    pub waveform_calls: (u64, u64),
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scalar right-hand-side evaluations per macro step (RK stages only)"
        )?;
        writeln!(
            f,
            "  singlerate: measured {:>8}   analytic s*m*(w_slow+w_fast) = {}",
            self.singlerate_per_window, self.singlerate_per_window_analytic
        )?;
        writeln!(
            f,
            "  multirate:  measured {:>8}   analytic s*(w_slow+m*w_fast) = {}",
            self.multirate_per_window, self.multirate_per_window_analytic
        )?;
        writeln!(f, "whole run over {} macro windows", self.macro_windows)?;
        writeln!(
            f,
            "  singlerate: measured {:>8}   analytic {}",
            self.singlerate_total, self.singlerate_total_analytic
        )?;
        writeln!(
            f,
            "  multirate:  measured {:>8}   analytic {}   (bootstrap window integrates the coupled system)",
            self.multirate_total, self.multirate_total_analytic
        )?;
        write!(
            f,
            "spline end-derivative calls, not counted above: slow {}, fast {}",
            self.waveform_calls.0, self.waveform_calls.1
        )
    }
}

/// Compare the evaluation cost of a multirate run against a singlerate run of
/// the same problem with step `h = H/m`.
pub fn cost_report(multirate: &MultirateRun, singlerate: &SinglerateRun) -> Result<CostReport> {
    if multirate.problem != singlerate.problem {
        return Err(Error::ProblemMismatch);
    }
    let h = multirate.config.micro_step();
    if (singlerate.step - h).abs() > 1e-9 * h {
        return Err(Error::ProblemMismatch);
    }
    let windows = multirate.window_costs.len();
    if windows < 2 {
        return Err(Error::TooFewWindows);
    }
    let singlerate_total = singlerate.totals.scalar_total;
    if !singlerate_total.is_multiple_of(windows as u64) {
        return Err(Error::ProblemMismatch);
    }

    let s = multirate.config.tableau.stages() as u64;
    let m = multirate.config.micro_per_macro as u64;
    let w_slow = multirate.problem.weight_slow;
    let w_fast = multirate.problem.weight_fast;
    let per_window_analytic_mr = s * (w_slow + m * w_fast);
    let per_window_analytic_sr = s * m * (w_slow + w_fast);

    Ok(CostReport {
        macro_windows: windows,
        multirate_factor: multirate.config.micro_per_macro,
        stages: multirate.config.tableau.stages(),
        multirate_per_window: multirate.window_costs[1].scalar_total,
        singlerate_per_window: singlerate_total / windows as u64,
        multirate_per_window_analytic: per_window_analytic_mr,
        singlerate_per_window_analytic: per_window_analytic_sr,
        multirate_total: multirate.totals.stage.scalar_total,
        singlerate_total,
        multirate_total_analytic: per_window_analytic_mr * windows as u64,
        singlerate_total_analytic: per_window_analytic_sr * windows as u64,
        waveform_calls: (
            multirate.totals.waveform.slow_calls,
            multirate.totals.waveform.fast_calls,
        ),
    })
}
