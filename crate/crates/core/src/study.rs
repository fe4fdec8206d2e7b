//! Convergence sweeps, cost comparisons and their CSV / plot-data emission.

use crate::config::{ErrorNorm, StudyConfig};
use crate::error::{Error, Result};
use crate::multirate::{self, CostReport, MultirateConfig};
use crate::problems::{self, ExactSolution};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Errors at or below this are treated as round-off noise: they are excluded
/// from order fits and flagged in reports.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Multirate,
    Singlerate,
}

impl SchemeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Multirate => "multirate",
            SchemeKind::Singlerate => "singlerate",
        }
    }
}

/// One sweep entry: step sizes, per-block errors at `t_end`, counter readout
/// and wall time.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub h_macro: f64,
    pub h_micro: f64,
    pub error_slow: f64,
    pub error_fast: f64,
    pub slow_calls: u64,
    pub fast_calls: u64,
    pub scalar_total: u64,
    pub wall_ms: f64,
}

/// Sweep results for one scheme, rows sorted by decreasing `H`.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub scheme: SchemeKind,
    pub tableau_name: String,
    pub mrfactor: usize,
    pub norm: ErrorNorm,
    pub rows: Vec<ReportRow>,
    /// Least-squares slope of log2(error) vs log2(H) over rows above the
    /// round-off floor; `None` when fewer than two rows qualify.
    pub order_slow: Option<f64>,
    pub order_fast: Option<f64>,
}

impl ConvergenceReport {
    /// Successive `err(H) / err(H/2)` ratios for the given block extractor.
    pub fn halving_ratios(&self, block: impl Fn(&ReportRow) -> f64) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|pair| block(&pair[0]) / block(&pair[1]))
            .collect()
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} ({}), m = {}, norm = {}",
            self.scheme.as_str(),
            self.tableau_name,
            self.mrfactor,
            self.norm
        )?;
        writeln!(
            f,
            "{:>23} {:>23} {:>23} {:>23} {:>12} {:>10}",
            "H", "h", "error_slow", "error_fast", "scalar_evals", "wall_ms"
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{:>23.16e} {:>23.16e} {:>23.16e} {:>23.16e} {:>12} {:>10.2}",
                row.h_macro,
                row.h_micro,
                row.error_slow,
                row.error_fast,
                row.scalar_total,
                row.wall_ms
            )?;
        }
        match (self.order_slow, self.order_fast) {
            (Some(s), Some(fa)) => write!(f, "fitted order: slow {s:.3}, fast {fa:.3}"),
            _ => write!(
                f,
                "errors below round-off floor ({ROUNDOFF_FLOOR:e}), no slope fitted"
            ),
        }
    }
}

/// Reports produced by [`run_study`], one per requested scheme.
#[derive(Debug)]
pub struct StudyOutput {
    pub multirate: Option<ConvergenceReport>,
    pub singlerate: Option<ConvergenceReport>,
}

impl StudyOutput {
    pub fn reports(&self) -> impl Iterator<Item = &ConvergenceReport> {
        self.multirate.iter().chain(self.singlerate.iter())
    }
}

/// Least-squares slope of `log2(err)` against `log2(h)`, ignoring entries at
/// or below the round-off floor.
pub fn fit_order(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, err)| *err > ROUNDOFF_FLOOR)
        .map(|&(h, err)| (h.log2(), err.log2()))
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let n = usable.len() as f64;
    let mean_x = usable.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = usable.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in &usable {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    (var > 0.0).then(|| cov / var)
}

fn block_errors(
    norm: &ErrorNorm,
    y_slow: &[f64],
    y_fast: &[f64],
    ref_slow: &[f64],
    ref_fast: &[f64],
) -> (f64, f64) {
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    (
        norm.reduce(&diff(y_slow, ref_slow)),
        norm.reduce(&diff(y_fast, ref_fast)),
    )
}

/// Run the configured sweep: for every `H`, integrate with the requested
/// scheme(s), measure per-block errors at `t_end` against the exact solution,
/// and fit convergence orders.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyOutput> {
    let tableau = cfg.tableau()?;
    let oracle = ExactSolution::new(&cfg.chain)?;
    let (x_ref, v_ref) = oracle.state_at(cfg.t_end);
    let (ref_slow, ref_fast) = problems::blocks_from_physical(&x_ref, &v_ref);

    let mut multirate_rows = Vec::new();
    let mut singlerate_rows = Vec::new();
    for &h_macro in &cfg.h_macro_list {
        let ivp = problems::build_chain_ivp(&cfg.chain, 0.0, cfg.t_end)?;
        if cfg.mode.includes_multirate() {
            let mr_cfg = MultirateConfig::new(tableau.clone(), h_macro, cfg.mrfactor);
            let start = Instant::now();
            let run = multirate::integrate(&ivp, &mr_cfg)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let (_, y_slow, y_fast) = run.final_state();
            let (error_slow, error_fast) =
                block_errors(&cfg.norm, y_slow, y_fast, &ref_slow, &ref_fast);
            multirate_rows.push(ReportRow {
                h_macro,
                h_micro: mr_cfg.micro_step(),
                error_slow,
                error_fast,
                slow_calls: run.totals.stage.slow_calls,
                fast_calls: run.totals.stage.fast_calls,
                scalar_total: run.totals.stage.scalar_total,
                wall_ms,
            });
        }
        if cfg.mode.includes_singlerate() {
            let h = h_macro / cfg.mrfactor as f64;
            let start = Instant::now();
            let run = multirate::integrate_singlerate(&ivp, &tableau, h)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let (_, y_end) = run.final_state();
            let (y_slow, y_fast) = ivp.split(y_end)?;
            let (error_slow, error_fast) =
                block_errors(&cfg.norm, y_slow, y_fast, &ref_slow, &ref_fast);
            singlerate_rows.push(ReportRow {
                h_macro,
                h_micro: h,
                error_slow,
                error_fast,
                slow_calls: run.totals.slow_calls,
                fast_calls: run.totals.fast_calls,
                scalar_total: run.totals.scalar_total,
                wall_ms,
            });
        }
    }

    let build = |scheme: SchemeKind, rows: Vec<ReportRow>| -> Option<ConvergenceReport> {
        (!rows.is_empty()).then(|| {
            let slow: Vec<(f64, f64)> = rows.iter().map(|r| (r.h_macro, r.error_slow)).collect();
            let fast: Vec<(f64, f64)> = rows.iter().map(|r| (r.h_macro, r.error_fast)).collect();
            ConvergenceReport {
                scheme,
                tableau_name: tableau.name.clone(),
                mrfactor: cfg.mrfactor,
                norm: cfg.norm,
                order_slow: fit_order(&slow),
                order_fast: fit_order(&fast),
                rows,
            }
        })
    };

    Ok(StudyOutput {
        multirate: build(SchemeKind::Multirate, multirate_rows),
        singlerate: build(SchemeKind::Singlerate, singlerate_rows),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub const CSV_HEADER: &str = "H,h,error_slow,error_fast,slow_calls,fast_calls,scalar_total,wall_ms";

/// Write the sweep as CSV: fixed header, one row per `H`, floats in 17
/// significant digits so values round-trip bitwise, LF line endings.
pub fn emit_csv(report: &ConvergenceReport, path: &Path) -> Result<()> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{:.16e}\n",
            r.h_macro,
            r.h_micro,
            r.error_slow,
            r.error_fast,
            r.slow_calls,
            r.fast_calls,
            r.scalar_total,
            r.wall_ms
        ));
    }
    write_file(path, &out)
}

/// Parse a file produced by [`emit_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Csv {
                line: 1,
                reason: format!("unexpected header '{header}'"),
            })
        }
        None => {
            return Err(Error::Csv {
                line: 1,
                reason: "empty file".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Csv {
                line: idx + 1,
                reason: format!("expected 8 fields, got {}", fields.len()),
            });
        }
        let float = |k: usize| -> Result<f64> {
            fields[k].parse().map_err(|_| Error::Csv {
                line: idx + 1,
                reason: format!("bad float '{}'", fields[k]),
            })
        };
        let int = |k: usize| -> Result<u64> {
            fields[k].parse().map_err(|_| Error::Csv {
                line: idx + 1,
                reason: format!("bad count '{}'", fields[k]),
            })
        };
        rows.push(ReportRow {
            h_macro: float(0)?,
            h_micro: float(1)?,
            error_slow: float(2)?,
            error_fast: float(3)?,
            slow_calls: int(4)?,
            fast_calls: int(5)?,
            scalar_total: int(6)?,
            wall_ms: float(7)?,
        });
    }
    Ok(rows)
}

/// Emit `(log2 H, log2 error)` plot data: one file per block plus a
/// reference line of slope 4 anchored at the largest usable `H`.
///
/// Returns the written paths. Rows with zero error are skipped (no
/// logarithm); if nothing remains the report is not plottable.
pub fn emit_plot_data(report: &ConvergenceReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let usable: Vec<&ReportRow> = report
        .rows
        .iter()
        .filter(|r| r.error_slow > 0.0 || r.error_fast > 0.0)
        .collect();
    let Some(anchor) = usable.first() else {
        return Err(Error::EmptyReport);
    };
    let anchor_err = if anchor.error_slow > 0.0 {
        anchor.error_slow
    } else {
        anchor.error_fast
    };
    let anchor_h = anchor.h_macro;

    let prefix = format!("plot_{}", report.scheme.as_str());
    let mut written = Vec::new();
    for (suffix, value) in [
        (
            "slow",
            &(|r: &ReportRow| r.error_slow) as &dyn Fn(&ReportRow) -> f64,
        ),
        ("fast", &|r: &ReportRow| r.error_fast),
    ] {
        let mut out = String::new();
        for r in &report.rows {
            let err = value(r);
            if err > 0.0 {
                out.push_str(&format!("{:.16e} {:.16e}\n", r.h_macro.log2(), err.log2()));
            }
        }
        if !out.is_empty() {
            let path = dir.join(format!("{prefix}_{suffix}.dat"));
            write_file(&path, &out)?;
            written.push(path);
        }
    }

    let mut reference = String::new();
    for r in &report.rows {
        let value = anchor_err * (r.h_macro / anchor_h).powi(4);
        reference.push_str(&format!(
            "{:.16e} {:.16e}\n",
            r.h_macro.log2(),
            value.log2()
        ));
    }
    let path = dir.join(format!("{prefix}_ref.dat"));
    write_file(&path, &reference)?;
    written.push(path);
    Ok(written)
}

/// Run both schemes at the sweep's largest `H` and compare measured and
/// analytic evaluation costs.
pub fn compare_costs(cfg: &StudyConfig) -> Result<CostReport> {
    let tableau = cfg.tableau()?;
    let h_macro = cfg.h_max();
    let ivp = problems::build_chain_ivp(&cfg.chain, 0.0, cfg.t_end)?;
    let mr_cfg = MultirateConfig::new(tableau.clone(), h_macro, cfg.mrfactor);
    let mr = multirate::integrate(&ivp, &mr_cfg)?;
    let sr = multirate::integrate_singlerate(&ivp, &tableau, mr_cfg.micro_step())?;
    multirate::cost_report(&mr, &sr)
}

/// Write a cost report as a small CSV table.
pub fn emit_cost_csv(report: &CostReport, path: &Path) -> Result<()> {
    let mut out = String::from(
        "scheme,per_macro_step,per_macro_step_analytic,whole_run,whole_run_analytic\n",
    );
    out.push_str(&format!(
        "singlerate,{},{},{},{}\n",
        report.singlerate_per_window,
        report.singlerate_per_window_analytic,
        report.singlerate_total,
        report.singlerate_total_analytic
    ));
    out.push_str(&format!(
        "multirate,{},{},{},{}\n",
        report.multirate_per_window,
        report.multirate_per_window_analytic,
        report.multirate_total,
        report.multirate_total_analytic
    ));
    write_file(path, &out)
}

/// Write a trajectory as CSV with header `t,x_1..x_n,v_1..v_n`.
pub fn emit_trajectory_csv(
    path: &Path,
    times: &[f64],
    positions: &[Vec<f64>],
    velocities: &[Vec<f64>],
) -> Result<()> {
    let n = positions.first().map_or(0, Vec::len);
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",x_{i}"));
    }
    for i in 1..=n {
        out.push_str(&format!(",v_{i}"));
    }
    out.push('\n');
    for ((t, x), v) in times.iter().zip(positions).zip(velocities) {
        out.push_str(&format!("{t:.16e}"));
        for value in x.iter().chain(v) {
            out.push_str(&format!(",{value:.16e}"));
        }
        out.push('\n');
    }
    write_file(path, &out)
}
