//! The n-mass spring chain benchmark and its exact solution.
//!
//! A light mass on a stiff spring (mass 1) is chained to `n - 1` heavy masses
//! on soft springs, with both chain ends attached to walls. The fast block is
//! mass 1's state `(x_1, v_1)`; the slow block holds the remaining positions
//! then velocities `(x_2..x_n, v_2..v_n)`. The linear system `x'' = A x` has
//! an exact trigonometric solution via the symmetric eigenproblem of
//! `-D A D^{-1}`, `D = diag(sqrt(m))`, which serves as the reference for all
//! error measurements.

use crate::error::{Error, Result};
use crate::partition::PartitionedIvp;
use nalgebra::{DMatrix, DVector};

/// Chain parameters and initial data.
#[derive(Debug, Clone, PartialEq)]
pub struct MassSpringChain {
    pub n: usize,
    /// Mass of body 1 (the light one).
    pub m1: f64,
    /// Mass of bodies 2..n.
    pub m2: f64,
    /// Stiff wall spring attached to mass 1.
    pub k1: f64,
    /// Soft spring constant of the remaining n springs.
    pub k2: f64,
    pub x0: Vec<f64>,
    pub v0: Vec<f64>,
}

impl MassSpringChain {
    pub fn new(
        n: usize,
        m1: f64,
        m2: f64,
        k1: f64,
        k2: f64,
        x0: Vec<f64>,
        v0: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "chain",
                reason: "need at least one mass".into(),
            });
        }
        for (label, v) in [("m1", m1), ("m2", m2), ("k1", k1), ("k2", k2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "chain",
                    reason: format!("{label} must be positive and finite, got {v}"),
                });
            }
        }
        if x0.len() != n || v0.len() != n {
            return Err(Error::DimensionMismatch {
                context: "chain initial data",
                expected: n,
                actual: if x0.len() != n { x0.len() } else { v0.len() },
            });
        }
        Ok(MassSpringChain {
            n,
            m1,
            m2,
            k1,
            k2,
            x0,
            v0,
        })
    }

    /// Per-mass vector `(m1, m2, ..., m2)`.
    pub fn masses(&self) -> Vec<f64> {
        let mut m = vec![self.m2; self.n];
        m[0] = self.m1;
        m
    }
}

/// The bundled benchmark configuration: ten masses, `(m1, m2) = (1, 20)`,
/// `(k1, k2) = (20, 1)`, mass 1 displaced to -0.005, the rest to 0.1, all at
/// rest.
impl Default for MassSpringChain {
    fn default() -> Self {
        let n = 10;
        let mut x0 = vec![0.1; n];
        x0[0] = -0.005;
        MassSpringChain {
            n,
            m1: 1.0,
            m2: 20.0,
            k1: 20.0,
            k2: 1.0,
            x0,
            v0: vec![0.0; n],
        }
    }
}

/// `x'' = A x` in matrix form.
#[derive(Debug, Clone)]
pub struct StiffnessSystem {
    pub matrix: DMatrix<f64>,
}

/// Tridiagonal acceleration matrix of the chain; `diag(m) * A` is symmetric.
pub fn build_stiffness(chain: &MassSpringChain) -> StiffnessSystem {
    let n = chain.n;
    let (m1, m2, k1, k2) = (chain.m1, chain.m2, chain.k1, chain.k2);
    let mut a = DMatrix::zeros(n, n);
    a[(0, 0)] = -(k1 + k2) / m1;
    if n > 1 {
        a[(0, 1)] = k2 / m1;
        for i in 1..n - 1 {
            a[(i, i - 1)] = k2 / m2;
            a[(i, i)] = -2.0 * k2 / m2;
            a[(i, i + 1)] = k2 / m2;
        }
        a[(n - 1, n - 2)] = k2 / m2;
        a[(n - 1, n - 1)] = -2.0 * k2 / m2;
    }
    StiffnessSystem { matrix: a }
}

/// Map a physical state `(x, v)` onto `(slow, fast)` block states.
pub fn blocks_from_physical(x: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut slow = Vec::with_capacity(2 * (x.len() - 1));
    slow.extend_from_slice(&x[1..]);
    slow.extend_from_slice(&v[1..]);
    let fast = vec![x[0], v[0]];
    (slow, fast)
}

/// Inverse of [`blocks_from_physical`].
pub fn physical_from_blocks(y_slow: &[f64], y_fast: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let heavy = y_slow.len() / 2;
    let mut x = Vec::with_capacity(heavy + 1);
    let mut v = Vec::with_capacity(heavy + 1);
    x.push(y_fast[0]);
    x.extend_from_slice(&y_slow[..heavy]);
    v.push(y_fast[1]);
    v.extend_from_slice(&y_slow[heavy..]);
    (x, v)
}

/// First-order partitioned IVP of the chain on `[t0, t_end]`.
///
/// Scalar cost weights count equations of motion: `n - 1` for the slow block,
/// 1 for the fast block.
pub fn build_chain_ivp(chain: &MassSpringChain, t0: f64, t_end: f64) -> Result<PartitionedIvp> {
    if chain.n < 2 {
        return Err(Error::InvalidParameter {
            name: "chain",
            reason: format!("need at least two masses for a slow block, got {}", chain.n),
        });
    }
    let n = chain.n;
    let heavy = n - 1;
    let (m1, m2, k1, k2) = (chain.m1, chain.m2, chain.k1, chain.k2);

    let f_fast = move |_t: f64, y_slow: &[f64], y_fast: &[f64]| -> Vec<f64> {
        let x1 = y_fast[0];
        let x2 = y_slow[0];
        vec![y_fast[1], (-(k1 + k2) * x1 + k2 * x2) / m1]
    };

    let f_slow = move |_t: f64, y_slow: &[f64], y_fast: &[f64]| -> Vec<f64> {
        let positions = &y_slow[..heavy];
        let velocities = &y_slow[heavy..];
        let mut out = Vec::with_capacity(2 * heavy);
        out.extend_from_slice(velocities);
        for i in 0..heavy {
            let left = if i == 0 { y_fast[0] } else { positions[i - 1] };
            // Mass n has a wall to its right instead of a neighbor.
            let right = if i + 1 < heavy { positions[i + 1] } else { 0.0 };
            out.push((k2 * left - 2.0 * k2 * positions[i] + k2 * right) / m2);
        }
        out
    };

    let (y0_slow, y0_fast) = blocks_from_physical(&chain.x0, &chain.v0);
    PartitionedIvp::with_weights(
        Box::new(f_slow),
        Box::new(f_fast),
        y0_slow,
        y0_fast,
        t0,
        t_end,
        heavy as u64,
        1,
    )
}

/// Exact trigonometric solution of the chain via the symmetric eigenproblem.
///
/// With `D = diag(sqrt(m))` the matrix `-D A D^{-1}` is symmetric positive
/// definite; its eigenpairs `(omega_j^2, u_j)` give
/// `x(t) = D^{-1} sum_j (alpha_j cos(omega_j t) + beta_j sin(omega_j t)) u_j`.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    omegas: DVector<f64>,
    modes: DMatrix<f64>,
    d_inv: DVector<f64>,
    alpha: DVector<f64>,
    beta: DVector<f64>,
}

impl ExactSolution {
    pub fn new(chain: &MassSpringChain) -> Result<Self> {
        let n = chain.n;
        let a = build_stiffness(chain).matrix;
        let d: DVector<f64> = DVector::from_iterator(n, chain.masses().iter().map(|m| m.sqrt()));

        let mut s = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = -a[(i, j)] * d[i] / d[j];
            }
        }
        let sym = (&s + s.transpose()) * 0.5;

        let eigen = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 100_000)
            .ok_or(Error::EigenFailure)?;
        if !eigen.eigenvalues.iter().all(|&l| l > 0.0) {
            return Err(Error::EigenFailure);
        }
        let omegas = eigen.eigenvalues.map(f64::sqrt);
        let modes = eigen.eigenvectors;

        let x0 = DVector::from_column_slice(&chain.x0);
        let v0 = DVector::from_column_slice(&chain.v0);
        let alpha = modes.transpose() * x0.component_mul(&d);
        let beta_raw = modes.transpose() * v0.component_mul(&d);
        let beta =
            DVector::from_iterator(n, beta_raw.iter().zip(omegas.iter()).map(|(b, w)| b / w));

        Ok(ExactSolution {
            omegas,
            modes,
            d_inv: d.map(|v| 1.0 / v),
            alpha,
            beta,
        })
    }

    /// Natural angular frequencies, ascending.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.omegas.iter().copied().collect();
        f.sort_by(|a, b| a.total_cmp(b));
        f
    }

    /// Positions and velocities at time `t`.
    pub fn state_at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.omegas.len();
        let mut px = DVector::zeros(n);
        let mut pv = DVector::zeros(n);
        for j in 0..n {
            let (sin, cos) = (self.omegas[j] * t).sin_cos();
            px[j] = self.alpha[j] * cos + self.beta[j] * sin;
            pv[j] = self.omegas[j] * (self.beta[j] * cos - self.alpha[j] * sin);
        }
        let x = (&self.modes * px).component_mul(&self.d_inv);
        let v = (&self.modes * pv).component_mul(&self.d_inv);
        (x.iter().copied().collect(), v.iter().copied().collect())
    }
}

/// One-shot exact state; prefer [`ExactSolution`] when sampling many times.
pub fn exact_solution(chain: &MassSpringChain, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(ExactSolution::new(chain)?.state_at(t))
}

/// Total mechanical energy of a chain state.
pub fn energy(chain: &MassSpringChain, x: &[f64], v: &[f64]) -> f64 {
    let masses = chain.masses();
    let kinetic: f64 = masses.iter().zip(v).map(|(m, vi)| 0.5 * m * vi * vi).sum();
    let mut potential =
        0.5 * chain.k1 * x[0] * x[0] + 0.5 * chain.k2 * x[chain.n - 1] * x[chain.n - 1];
    for pair in x.windows(2) {
        let stretch = pair[1] - pair[0];
        potential += 0.5 * chain.k2 * stretch * stretch;
    }
    kinetic + potential
}
