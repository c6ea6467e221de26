//! Caputo-derivative machinery: L1 quadrature weights on uniform and
//! nonuniform time grids, dense solution history, and the step-doubling
//! controller.
//!
//! With a piecewise-linear reconstruction of `u` on the grid
//! `t_0 < t_1 < ... < t_n`, the Caputo derivative of order `alpha` at `t_n`
//! is approximated by
//!
//! ```text
//! D^alpha u(t_n) ~= 1/Gamma(2-alpha) * sum_j w_j * (u(t_{n-j}) - u(t_{n-j-1}))
//! ```
//!
//! where the weight of the interval at memory distance `j` is the exact
//! kernel integral
//!
//! ```text
//! w_j = [ (t_n - t_{n-j-1})^(1-alpha) - (t_n - t_{n-j})^(1-alpha) ]
//!       / (t_{n-j} - t_{n-j-1}).
//! ```
//!
//! On a uniform grid with spacing `dt` this reduces to
//! `w_j = dt^-alpha * r_j` with `r_j = (j+1)^(1-alpha) - j^(1-alpha)`, the
//! classical L1 weights. The quadrature is exact for fields linear in `t`.

use ndarray::Array2;

use crate::grid::Field;
use crate::ml_special::gamma_fn;
use crate::{Error, Result};

/// L1 quadrature weights bound to a concrete time grid.
///
/// `weights[j]` multiplies the backward difference at memory distance `j`
/// (j = 0 is the most recent interval). Weights built by [`L1Weights::uniform`]
/// live on the unit-spaced grid `0, 1, ..., n` and are therefore exactly the
/// dimensionless `r_j`.
#[derive(Debug, Clone)]
pub struct L1Weights {
    alpha: f64,
    weights: Vec<f64>,
    grid: Vec<f64>,
}

impl L1Weights {
    /// Classical uniform-grid weights `r_j = (j+1)^(1-alpha) - j^(1-alpha)`,
    /// j = 0..n-1, on the unit-spaced grid.
    pub fn uniform(alpha: f64, n: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if n < 1 {
            return Err(Error::Domain("need at least one weight".into()));
        }
        let e = 1.0 - alpha;
        let weights = (0..n)
            .map(|j| {
                if j == 0 {
                    1.0
                } else {
                    // (j+1)^e - j^e, cancellation-free
                    let j = j as f64;
                    j.powf(e) * (e * (1.0 / j).ln_1p()).exp_m1()
                }
            })
            .collect();
        let grid = (0..=n).map(|k| k as f64).collect();
        Ok(Self {
            alpha,
            weights,
            grid,
        })
    }

    /// Exact piecewise-linear kernel weights for an arbitrary strictly
    /// increasing grid. On a uniform grid the result equals
    /// `dt^-alpha * r_j`.
    pub fn nonuniform(alpha: f64, grid: &[f64]) -> Result<Self> {
        check_alpha(alpha)?;
        if grid.len() < 2 {
            return Err(Error::Domain("grid needs at least two stamps".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        let n = grid.len() - 1;
        let t_n = grid[n];
        let e = 1.0 - alpha;
        let weights = (0..n)
            .map(|j| {
                let a = grid[n - j - 1];
                let b = grid[n - j];
                // (t_n-a)^e - (t_n-b)^e without cancellation: factor the
                // smaller base out and use expm1/ln1p
                let big = t_n - a;
                let small = t_n - b;
                let diff = if small == 0.0 {
                    big.powf(e)
                } else {
                    small.powf(e) * (e * ((big - small) / small).ln_1p()).exp_m1()
                };
                diff / (b - a)
            })
            .collect();
        Ok(Self {
            alpha,
            weights,
            grid: grid.to_vec(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Weights ordered by memory distance (index 0 = newest interval).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Weight of the newest interval; `w_0 / Gamma(2-alpha)` is the implicit
    /// diagonal coefficient of the stepper.
    pub fn newest(&self) -> f64 {
        self.weights[0]
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "L1 weights require 0 < alpha < 1, got {alpha}"
        )));
    }
    Ok(())
}

/// Time-stamped snapshots of a field; the memory of the fractional
/// derivative. Single writer, unbounded within a run.
#[derive(Debug, Clone)]
pub struct L1History {
    times: Vec<f64>,
    snapshots: Vec<Field>,
}

impl L1History {
    pub fn new() -> Self {
        Self {
            times: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn with_initial(t0: f64, u0: Field) -> Self {
        Self {
            times: vec![t0],
            snapshots: vec![u0],
        }
    }

    pub fn push(&mut self, t: f64, u: Field) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::Domain(format!(
                    "snapshot times must increase: {t} after {last}"
                )));
            }
        }
        if let Some(first) = self.snapshots.first() {
            if first.dim() != u.dim() {
                return Err(Error::Shape(format!(
                    "snapshot shape {:?} differs from history shape {:?}",
                    u.dim(),
                    first.dim()
                )));
            }
        }
        self.times.push(t);
        self.snapshots.push(u);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn last_time(&self) -> Option<f64> {
        self.times.last().copied()
    }

    pub fn last(&self) -> Option<&Field> {
        self.snapshots.last()
    }

    pub fn snapshot(&self, k: usize) -> &Field {
        &self.snapshots[k]
    }
}

impl Default for L1History {
    fn default() -> Self {
        Self::new()
    }
}

/// Discrete Caputo derivative at the newest time of `weights.grid()`.
///
/// `history` holds snapshots at `grid[0..n]`, `current` is the field at
/// `grid[n]`. Passing the last snapshot as `current` yields the pure
/// history part (the newest difference vanishes), which is how the stepper
/// assembles its right-hand side.
pub fn caputo_apply(history: &L1History, weights: &L1Weights, current: &Field) -> Result<Field> {
    let n = weights.weights().len();
    if history.is_empty() {
        return Err(Error::Domain("history is empty".into()));
    }
    if history.len() != n {
        return Err(Error::Shape(format!(
            "history holds {} snapshots but weights cover {} intervals",
            history.len(),
            n
        )));
    }
    for (k, &t) in history.times().iter().enumerate() {
        if t != weights.grid()[k] {
            return Err(Error::Shape(format!(
                "history stamp {t} at index {k} does not match weight grid {}",
                weights.grid()[k]
            )));
        }
    }
    let shape = history.snapshot(0).dim();
    if current.dim() != shape {
        return Err(Error::Shape(format!(
            "current field shape {:?} differs from history shape {:?}",
            current.dim(),
            shape
        )));
    }

    let inv_gamma = 1.0 / gamma_fn(2.0 - weights.alpha())?;
    let mut out: Field = Array2::zeros(shape);
    for j in 0..n {
        let w = weights.weights()[j];
        let newer: &Field = if j == 0 {
            current
        } else {
            history.snapshot(n - j)
        };
        let older = history.snapshot(n - j - 1);
        ndarray::Zip::from(&mut out)
            .and(newer)
            .and(older)
            .for_each(|o, &a, &b| *o += w * (a - b));
    }
    out.mapv_inplace(|v| v * inv_gamma);
    Ok(out)
}

/// Stepper-side split of the Caputo sum for a step ending at `t_new`:
/// the implicit diagonal `sigma = w_0 / Gamma(2-alpha)` and the field
/// holding the older memory terms. `alpha = 1` collapses to
/// `(1/dt, zeros)` — the classical backward difference.
pub fn memory_split(alpha: f64, history: &L1History, t_new: f64) -> Result<(f64, Field)> {
    let last = history
        .last_time()
        .ok_or_else(|| Error::Domain("history is empty".into()))?;
    let dt = t_new - last;
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("t_new = {t_new} does not advance past {last}")));
    }
    let shape = history.snapshot(0).dim();
    if alpha == 1.0 {
        return Ok((1.0 / dt, Array2::zeros(shape)));
    }
    let mut stamps = history.times().to_vec();
    stamps.push(t_new);
    let w = L1Weights::nonuniform(alpha, &stamps)?;
    let sigma = w.newest() / gamma_fn(2.0 - alpha)?;
    let h = caputo_apply(history, &w, history.last().expect("nonempty"))?;
    Ok((sigma, h))
}

/// Step-doubling controller settings. The growth factor is fixed at 2.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveConfig {
    /// Relaxation threshold on the relative solution change.
    pub delta: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub growth_factor: f64,
}

impl AdaptiveConfig {
    pub fn new(delta: f64, dt_min: f64, dt_max: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Config(format!("delta must be positive, got {delta}")));
        }
        if !(dt_min > 0.0 && dt_min <= dt_max) {
            return Err(Error::Config(format!(
                "need 0 < dt_min <= dt_max, got [{dt_min}, {dt_max}]"
            )));
        }
        Ok(Self {
            delta,
            dt_min,
            dt_max,
            growth_factor: 2.0,
        })
    }
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            delta: 1e-3,
            dt_min: 1e-3,
            dt_max: 1.6e-2,
            growth_factor: 2.0,
        }
    }
}

/// Outcome of the step-size decision.
#[derive(Debug, Clone, Copy)]
pub struct StepAdvice {
    /// Time step to use next; doubles when the solution relaxes, never
    /// shrinks, never exceeds `dt_max`.
    pub dt: f64,
    /// The measured relative change `||u_new - u_old|| / ||u_old||`.
    pub delta_u: f64,
    /// Set when `||u_old|| = 0`; the measure is undefined and dt is kept.
    pub degenerate_norm: bool,
}

/// Step-doubling decision: double `dt` when the relative change between
/// consecutive solutions falls below `cfg.delta`, up to `cfg.dt_max`.
pub fn adapt_step(u_new: &Field, u_old: &Field, cfg: &AdaptiveConfig, dt: f64) -> StepAdvice {
    let dt = dt.clamp(cfg.dt_min, cfg.dt_max);
    let norm_old = l2_norm(u_old);
    if norm_old == 0.0 {
        return StepAdvice {
            dt,
            delta_u: f64::INFINITY,
            degenerate_norm: true,
        };
    }
    let mut diff_sq = 0.0;
    ndarray::Zip::from(u_new).and(u_old).for_each(|&a, &b| {
        diff_sq += (a - b) * (a - b);
    });
    let delta_u = diff_sq.sqrt() / norm_old;
    let dt_next = if delta_u < cfg.delta {
        (dt * cfg.growth_factor).min(cfg.dt_max)
    } else {
        dt
    };
    StepAdvice {
        dt: dt_next.max(cfg.dt_min),
        delta_u,
        degenerate_norm: false,
    }
}

pub(crate) fn l2_norm(f: &Field) -> f64 {
    f.iter().map(|v| v * v).sum::<f64>().sqrt()
}
