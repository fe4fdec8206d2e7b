//! Explicit Runge-Kutta machinery: tableau representation and validation plus
//! the generic single step shared by the singlerate reference and the
//! multirate driver.

use crate::error::{Error, Result};
use std::fmt;

/// Right-hand side callback `(t, y) -> dy/dt`.
///
/// Callbacks are fallible so that waveform-backed systems can surface
/// out-of-window evaluations as integration failures.
pub type Rhs<'a> = dyn Fn(f64, &[f64]) -> Result<Vec<f64>> + 'a;

/// Tolerance for the tableau consistency and row-sum invariants.
pub const TABLEAU_TOL: f64 = 1e-14;

/// Coefficients `(A, b, c)` of an explicit `s`-stage Runge-Kutta scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    /// Stage coupling matrix; strictly lower triangular for explicit schemes.
    pub a: Vec<Vec<f64>>,
    /// Quadrature weights.
    pub b: Vec<f64>,
    /// Stage nodes.
    pub c: Vec<f64>,
    /// Label used by the CLI and in reports.
    pub name: String,
}

/// One violated tableau invariant, as reported by [`ButcherTableau::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum TableauViolation {
    /// `a`, `b`, `c` do not agree on the stage count.
    Shape {
        rows: usize,
        weights: usize,
        nodes: usize,
    },
    /// An entry on or above the diagonal is nonzero.
    NotExplicit { row: usize, col: usize, value: f64 },
    /// The weights do not sum to one.
    WeightsSum { sum: f64 },
    /// A node does not equal its row sum.
    NodeRowSum { row: usize, node: f64, row_sum: f64 },
    /// A node lies outside `[0, 1]`.
    NodeRange { row: usize, node: f64 },
}

impl fmt::Display for TableauViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableauViolation::Shape {
                rows,
                weights,
                nodes,
            } => write!(
                f,
                "inconsistent shapes: {rows} coefficient rows, {weights} weights, {nodes} nodes"
            ),
            TableauViolation::NotExplicit { row, col, value } => {
                write!(f, "not explicit: a[{row}][{col}] = {value} must be zero")
            }
            TableauViolation::WeightsSum { sum } => {
                write!(f, "weights sum to {sum}, expected 1")
            }
            TableauViolation::NodeRowSum { row, node, row_sum } => {
                write!(f, "node c[{row}] = {node} does not match row sum {row_sum}")
            }
            TableauViolation::NodeRange { row, node } => {
                write!(f, "node c[{row}] = {node} outside [0, 1]")
            }
        }
    }
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// The classical four-stage, fourth-order scheme.
    pub fn rk4() -> Self {
        ButcherTableau {
            a: vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            b: vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            c: vec![0.0, 0.5, 0.5, 1.0],
            name: "rk4".to_string(),
        }
    }

    /// Forward Euler; order one. Mostly a contrast case for order studies.
    pub fn euler() -> Self {
        ButcherTableau {
            a: vec![vec![0.0]],
            b: vec![1.0],
            c: vec![0.0],
            name: "euler".to_string(),
        }
    }

    /// Heun's two-stage, second-order scheme.
    pub fn heun() -> Self {
        ButcherTableau {
            a: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            b: vec![0.5, 0.5],
            c: vec![0.0, 1.0],
            name: "heun".to_string(),
        }
    }

    /// Look up a tableau by its label.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "rk4" => Some(Self::rk4()),
            "heun" => Some(Self::heun()),
            "euler" => Some(Self::euler()),
            _ => None,
        }
    }

    /// Check every tableau invariant, reporting all violations found.
    pub fn validate(&self) -> std::result::Result<(), Vec<TableauViolation>> {
        let s = self.stages();
        if s == 0
            || self.a.len() != s
            || self.a.iter().any(|row| row.len() != s)
            || self.c.len() != s
        {
            return Err(vec![TableauViolation::Shape {
                rows: self.a.len(),
                weights: s,
                nodes: self.c.len(),
            }]);
        }
        let mut violations = Vec::new();
        for (i, row) in self.a.iter().enumerate() {
            for (j, &value) in row.iter().enumerate().skip(i) {
                if value != 0.0 {
                    violations.push(TableauViolation::NotExplicit {
                        row: i,
                        col: j,
                        value,
                    });
                }
            }
        }
        let sum: f64 = self.b.iter().sum();
        if (sum - 1.0).abs() > TABLEAU_TOL {
            violations.push(TableauViolation::WeightsSum { sum });
        }
        for (i, &node) in self.c.iter().enumerate() {
            let row_sum: f64 = self.a[i].iter().sum();
            if (node - row_sum).abs() > TABLEAU_TOL {
                violations.push(TableauViolation::NodeRowSum {
                    row: i,
                    node,
                    row_sum,
                });
            }
            if !(0.0..=1.0).contains(&node) {
                violations.push(TableauViolation::NodeRange { row: i, node });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// [`validate`](Self::validate) collapsed into a crate error, for entry points.
    pub fn require_valid(&self) -> Result<()> {
        self.validate().map_err(|violations| Error::InvalidTableau {
            name: self.name.clone(),
            violations: violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        })
    }
}

/// Stage derivatives `k_i` produced by a single step.
#[derive(Debug, Clone)]
pub struct StageSlopes {
    pub k: Vec<Vec<f64>>,
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// One explicit step from `(t, y)` with step size `h`, also returning the
/// stage slopes (the multirate driver reuses `k_1` as derivative data).
///
/// Calls `f` exactly `stages()` times; a non-finite stage value aborts the
/// step with the offending stage and time.
pub fn rk_step_stages(
    tableau: &ButcherTableau,
    f: &Rhs,
    t: f64,
    y: &[f64],
    h: f64,
) -> Result<(Vec<f64>, StageSlopes)> {
    if h <= 0.0 {
        return Err(Error::NonPositiveStep { h });
    }
    let s = tableau.stages();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(s);
    for i in 0..s {
        let mut yi = y.to_vec();
        for (j, kj) in k.iter().enumerate() {
            let aij = tableau.a[i][j];
            if aij != 0.0 {
                axpy(&mut yi, h * aij, kj);
            }
        }
        let ti = t + tableau.c[i] * h;
        let ki = f(ti, &yi)?;
        if ki.len() != y.len() {
            return Err(Error::DimensionMismatch {
                context: "right-hand side output",
                expected: y.len(),
                actual: ki.len(),
            });
        }
        if !ki.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                stage: i + 1,
                time: ti,
            });
        }
        k.push(ki);
    }
    let mut y_next = y.to_vec();
    for (i, ki) in k.iter().enumerate() {
        axpy(&mut y_next, h * tableau.b[i], ki);
    }
    Ok((y_next, StageSlopes { k }))
}

/// One explicit step from `(t, y)` with step size `h`.
pub fn rk_step(tableau: &ButcherTableau, f: &Rhs, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>> {
    rk_step_stages(tableau, f, t, y, h).map(|(y_next, _)| y_next)
}

/// Fixed-step integration over `steps` steps; the trajectory has `steps + 1`
/// entries starting with `(t0, y0)`. Node times are computed as `t0 + j*h`.
pub fn singlerate_integrate(
    tableau: &ButcherTableau,
    f: &Rhs,
    t0: f64,
    y0: &[f64],
    h: f64,
    steps: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    if steps > 0 && h <= 0.0 {
        return Err(Error::NonPositiveStep { h });
    }
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push((t0, y0.to_vec()));
    let mut y = y0.to_vec();
    for j in 0..steps {
        let t = t0 + j as f64 * h;
        y = rk_step(tableau, f, t, &y, h).map_err(|e| Error::StepFailed {
            step: j,
            source: Box::new(e),
        })?;
        trajectory.push((t0 + (j + 1) as f64 * h, y.clone()));
    }
    Ok(trajectory)
}
