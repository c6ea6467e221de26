//! Subdiffusive viscoelastic channel flow: the coupled
//! vorticity–streamfunction–conformation system on `[0, Lx] x [0, 1]`,
//! periodic in x with no-slip walls.
//!
//! ```text
//! Re [ D^alpha W + v . grad W ] = nu lap W + (1-nu) curl div (A + F)
//! lap Psi = -W,     (u, v) = (dPsi/dy, -dPsi/dx)
//! D^alpha A + v . grad A - (grad v)^T A - A grad v = (D - A)/We
//! ```
//!
//! `A` is the elastic conformation tensor, `D = grad v + (grad v)^T`
//! (the convention that makes the classical steady shear state exact), and
//! `F = mu/(1-nu) * Re[M M^T]` with `M = exp(t (grad v)^(1/alpha))` is the
//! finger-tensor body forcing. `grad v` is the Jacobian
//! `[[du/dx, du/dy], [dv/dx, dv/dy]]` evaluated at the old time level.
//!
//! Each step runs: finger forcing, the θ-IMEX vorticity update (implicit
//! diffusion and Caputo diagonal, explicit advection and elastic forcing),
//! the streamfunction Poisson solve with wall-vorticity re-evaluation, the
//! component-wise conformation update (wall rows follow their own
//! fractional relaxation), then the step-doubling controller on `W`.
//!
//! Wall vorticity uses the one-sided second derivative of `Psi` (exact on
//! the cubic base profile, so the unperturbed base state is a discrete
//! fixed point to solver tolerance).

mod tensor;

pub use tensor::{expm, fractional_power, mat2_mul, mat2_mul_transpose, mat2_real, FracPower, Mat2};

use ndarray::Zip;

use crate::caputo::{adapt_step, l2_norm, memory_split, AdaptiveConfig, L1History};
use crate::grid::{
    advect_uds, d2dx2, d2dy2, d2dy2_one_sided, ddx_central, ddy_central, mirror_periodic, Axis,
    BcKind, EdgeKinds, Field, Grid2D, UpwindParams,
};
use crate::linsolve::{gauss_seidel, BlockDiagSpec, GSConfig};
use crate::{Error, Result};

/// Physical parameters of the channel problem.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    /// Reynolds number.
    pub re: f64,
    /// Weissenberg number.
    pub we: f64,
    /// Viscous fraction of the total viscosity, 0 < nu < 1.
    pub nu: f64,
    /// Body-force strength.
    pub mu: f64,
    /// Fractional order; 1/2 for melts, 2/3 for solutions.
    pub alpha: f64,
}

impl ChannelParams {
    pub fn new(re: f64, we: f64, nu: f64, mu: f64, alpha: f64) -> Result<Self> {
        let p = Self { re, we, nu, mu, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.re > 0.0) {
            return Err(Error::Config(format!("Re must be positive, got {}", self.re)));
        }
        if !(self.we > 0.0) {
            return Err(Error::Config(format!("We must be positive, got {}", self.we)));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::Config(format!("nu must lie in (0, 1), got {}", self.nu)));
        }
        if self.mu < 0.0 {
            return Err(Error::Config(format!("mu must be >= 0, got {}", self.mu)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        Ok(())
    }

    /// Melt preset: `alpha = 1/2`, `We = 10`, `mu = 1e-2`.
    pub fn rouse(re: f64, nu: f64) -> Result<Self> {
        Self::new(re, 10.0, nu, 1e-2, 0.5)
    }

    /// Solution preset: `alpha = 2/3`, `We = 10`, `mu = 1e-2`.
    pub fn zimm(re: f64, nu: f64) -> Result<Self> {
        Self::new(re, 10.0, nu, 1e-2, 2.0 / 3.0)
    }
}

/// Wall streamfunction constants; the difference carries the base-flow
/// flux `int_0^1 (y - y^2) dy = 1/6`.
#[derive(Debug, Clone, Copy)]
pub struct ChannelBcs {
    pub psi_lower: f64,
    pub psi_upper: f64,
}

impl Default for ChannelBcs {
    fn default() -> Self {
        Self {
            psi_lower: 0.0,
            psi_upper: 1.0 / 6.0,
        }
    }
}

/// The full set of unknown fields.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub omega: Field,
    pub psi: Field,
    pub u: Field,
    pub v: Field,
    pub a11: Field,
    pub a12: Field,
    pub a22: Field,
    pub f11: Field,
    pub f12: Field,
    pub f22: Field,
}

/// Default channel grid: periodic in x over `[0, 5]`, walls at `y = 0, 1`.
pub fn channel_grid(nx: usize, ny: usize) -> Result<Grid2D> {
    Grid2D::new(
        nx,
        ny,
        [0.0, 5.0],
        [0.0, 1.0],
        EdgeKinds::periodic_x(BcKind::Dirichlet),
    )
}

/// Plane Poiseuille base state: `u = y - y^2`, `W = 2y - 1`,
/// `Psi = y^2/2 - y^3/3`, conformation in steady simple shear, finger
/// tensor at `t = 0` (`M = I`).
pub fn init_state(grid: &Grid2D, params: &ChannelParams) -> FieldState {
    let f_iso = params.mu / (1.0 - params.nu);
    FieldState {
        omega: grid.fill(|_, y| 2.0 * y - 1.0),
        psi: grid.fill(|_, y| y * y / 2.0 - y * y * y / 3.0),
        u: grid.fill(|_, y| y - y * y),
        v: grid.zeros(),
        a11: grid.zeros(),
        a12: grid.fill(|_, y| 1.0 - 2.0 * y),
        a22: grid.fill(|_, y| 2.0 * params.we * (1.0 - 2.0 * y) * (1.0 - 2.0 * y)),
        f11: grid.fill(|_, _| f_iso),
        f12: grid.zeros(),
        f22: grid.fill(|_, _| f_iso),
    }
}

/// Velocity-gradient components (Jacobian convention), computed from
/// second derivatives of the streamfunction:
/// `du/dy = psi_yy`, `dv/dx = -psi_xx`, `du/dx = psi_xy = -dv/dy`.
/// This keeps the gradient exact on the cubic base profile (no near-wall
/// kink from reconstructing velocities first) and discretely trace-free.
struct VelocityGradient {
    ux: Field,
    uy: Field,
    vx: Field,
    vy: Field,
}

fn velocity_gradient(grid: &Grid2D, psi: &Field) -> Result<VelocityGradient> {
    let uy = d2dy2(grid, psi)?;
    let vx = {
        let mut f = d2dx2(grid, psi)?;
        f.mapv_inplace(|v| -v);
        f
    };
    let cross = ddx_central(grid, &ddy_central(grid, psi)?)?;
    let vy = cross.mapv(|v| -v);
    Ok(VelocityGradient {
        ux: cross,
        uy,
        vx,
        vy,
    })
}

/// Finger-tensor forcing output.
pub struct FingerForce {
    pub f11: Field,
    pub f12: Field,
    pub f22: Field,
    /// `curl div F`, zero on the wall rows.
    pub curl_div: Field,
    /// Points where the defective fallback of the matrix power fired.
    pub defective_points: usize,
    /// Largest imaginary residue discarded when taking `Re[M M^T]`.
    pub max_imag_residue: f64,
}

/// Body forcing from the deformation history: per point
/// `M = exp(t G^(1/alpha))`, `F = mu/(1-nu) Re[M M^T]`.
pub fn finger_force(
    grid: &Grid2D,
    state: &FieldState,
    params: &ChannelParams,
    t: f64,
) -> Result<FingerForce> {
    let grad = velocity_gradient(grid, &state.psi)?;
    let mut f11 = grid.zeros();
    let mut f12 = grid.zeros();
    let mut f22 = grid.zeros();
    let pref = params.mu / (1.0 - params.nu);
    let inv_alpha = 1.0 / params.alpha;
    let mut defective_points = 0usize;
    let mut max_imag = 0.0f64;
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            let g = [
                [grad.ux[[i, j]], grad.uy[[i, j]]],
                [grad.vx[[i, j]], grad.vy[[i, j]]],
            ];
            let power = fractional_power(g, inv_alpha);
            if power.defective {
                defective_points += 1;
            }
            let mut scaled = power.m;
            for row in scaled.iter_mut() {
                for entry in row.iter_mut() {
                    *entry *= t;
                }
            }
            let m = expm(&scaled);
            let s = mat2_mul_transpose(&m);
            max_imag = max_imag
                .max(s[0][0].im.abs())
                .max(s[0][1].im.abs())
                .max(s[1][1].im.abs());
            f11[[i, j]] = pref * s[0][0].re;
            f12[[i, j]] = pref * s[0][1].re;
            f22[[i, j]] = pref * s[1][1].re;
        }
    }
    let curl_div = curl_div_tensor(grid, &f11, &f12, &f22)?;
    Ok(FingerForce {
        f11,
        f12,
        f22,
        curl_div,
        defective_points,
        max_imag_residue: max_imag,
    })
}

/// Scalar `curl div T` of a symmetric tensor field:
/// `dxx T12 + dxdy (T22 - T11) - dyy T12`. Interior rows only; wall rows
/// are governed by the wall conditions.
pub fn curl_div_tensor(grid: &Grid2D, t11: &Field, t12: &Field, t22: &Field) -> Result<Field> {
    grid.check_shape(t11)?;
    grid.check_shape(t12)?;
    grid.check_shape(t22)?;
    let (nx, ny) = (grid.nx(), grid.ny());
    let dx2 = grid.dx() * grid.dx();
    let dy2 = grid.dy() * grid.dy();
    let diff = {
        let mut d = t22.clone();
        Zip::from(&mut d).and(t11).for_each(|a, &b| *a -= b);
        d
    };
    let cross = ddx_central(grid, &ddy_central(grid, &diff)?)?;
    let mut out = grid.zeros();
    let period = nx - 1;
    for i in 0..period {
        let im = (i + period - 1) % period;
        let ip = (i + 1) % period;
        for j in 1..ny - 1 {
            let dxx = (t12[[im, j]] - 2.0 * t12[[i, j]] + t12[[ip, j]]) / dx2;
            let dyy = (t12[[i, j - 1]] - 2.0 * t12[[i, j]] + t12[[i, j + 1]]) / dy2;
            out[[i, j]] = dxx + cross[[i, j]] - dyy;
        }
    }
    mirror_periodic(grid, &mut out);
    Ok(out)
}

/// θ-IMEX vorticity update. `body_force` is the assembled explicit forcing
/// `(1-nu) curl div (A + F)` at the old level; wall rows of `omega` hold
/// the current Dirichlet data.
#[allow(clippy::too_many_arguments)]
pub fn step_vorticity(
    grid: &Grid2D,
    state: &FieldState,
    history: &L1History,
    params: &ChannelParams,
    theta: f64,
    dt: f64,
    body_force: &Field,
    gs: &GSConfig,
) -> Result<(Field, usize)> {
    let omega = &state.omega;
    let t_new = history.last_time().unwrap_or(0.0) + dt;
    let (sigma, h_field) = memory_split(params.alpha, history, t_new)?;

    let mut rhs = grid.zeros();
    Zip::from(&mut rhs)
        .and(omega)
        .and(&h_field)
        .and(body_force)
        .for_each(|r, &w, &h, &f| {
            *r = params.re * (sigma * w - h) + f;
        });
    let adv_x = advect_uds(grid, omega, &state.u, Axis::X, UpwindParams::ud3())?;
    let adv_y = advect_uds(grid, omega, &state.v, Axis::Y, UpwindParams::ud3())?;
    Zip::from(&mut rhs).and(&adv_x).and(&adv_y).for_each(|r, &ax, &ay| {
        *r -= params.re * (ax + ay);
    });
    let lap = crate::grid::laplacian_cds(grid, omega)?;
    Zip::from(&mut rhs).and(&lap).for_each(|r, &l| {
        *r += params.nu * (1.0 - theta) * l;
    });

    let spec = BlockDiagSpec::implicit_diffusion(grid, params.nu * theta, params.re * sigma)?;
    let solution = gauss_seidel(&spec, &rhs, omega, gs)?;
    let mut w_new = solution.x;
    if w_new.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            step: history.len(),
            context: "vorticity update".into(),
        });
    }
    mirror_periodic(grid, &mut w_new);
    Ok((w_new, solution.iterations))
}

/// Solve `lap Psi = -W` with the wall constants, rebuild the velocities,
/// and re-evaluate the wall vorticity from the one-sided second derivative
/// of `Psi` (second order, exact on the cubic base profile).
pub fn solve_streamfunction(
    grid: &Grid2D,
    omega: &mut Field,
    psi_guess: &Field,
    bcs: &ChannelBcs,
    gs: &GSConfig,
) -> Result<(Field, Field, Field, usize)> {
    let spec = BlockDiagSpec::poisson(grid)?;
    let rhs = omega.mapv(|w| -w);
    let mut guess = psi_guess.clone();
    let (nx, ny) = (grid.nx(), grid.ny());
    for i in 0..nx {
        guess[[i, 0]] = bcs.psi_lower;
        guess[[i, ny - 1]] = bcs.psi_upper;
    }
    let solution = gauss_seidel(&spec, &rhs, &guess, gs)?;
    let psi = solution.x;

    let mut u = ddy_central(grid, &psi)?;
    let mut v = ddx_central(grid, &psi)?;
    v.mapv_inplace(|x| -x);
    for i in 0..nx {
        u[[i, 0]] = 0.0;
        u[[i, ny - 1]] = 0.0;
        v[[i, 0]] = 0.0;
        v[[i, ny - 1]] = 0.0;
    }
    for i in 0..nx {
        omega[[i, 0]] = -d2dy2_one_sided(grid, &psi, false, i);
        omega[[i, ny - 1]] = -d2dy2_one_sided(grid, &psi, true, i);
    }
    mirror_periodic(grid, omega);
    Ok((psi, u, v, solution.iterations))
}

/// Per-component θ-IMEX update of the conformation tensor; wall rows are
/// advanced by the wall relaxation equations
/// `A11 = 0`, `D^alpha A12 = (du/dy - A12)/We`,
/// `D^alpha A22 = 2 (du/dy) A12 - A22/We`.
#[allow(clippy::too_many_arguments)]
pub fn step_conformation(
    grid: &Grid2D,
    state: &FieldState,
    histories: &ConformationHistories,
    params: &ChannelParams,
    theta: f64,
    dt: f64,
) -> Result<(Field, Field, Field, usize)> {
    let grad = velocity_gradient(grid, &state.psi)?;
    let t_new = histories.a11.last_time().unwrap_or(0.0) + dt;
    let (sigma, h11) = memory_split(params.alpha, &histories.a11, t_new)?;
    let (_, h12) = memory_split(params.alpha, &histories.a12, t_new)?;
    let (_, h22) = memory_split(params.alpha, &histories.a22, t_new)?;
    let we = params.we;
    let relax_diag = sigma + theta / we;

    let update = |a_old: &Field, h: &Field, explicit: &Field| -> Field {
        let mut out = grid.zeros();
        Zip::from(&mut out)
            .and(a_old)
            .and(h)
            .and(explicit)
            .for_each(|o, &a, &hh, &ex| {
                *o = (sigma * a - hh - (1.0 - theta) * a / we + ex) / relax_diag;
            });
        out
    };

    // explicit parts: -advection + stretching + D/We
    let explicit_for = |a: &Field, which: Tensor2Component| -> Result<Field> {
        let adv_x = advect_uds(grid, a, &state.u, Axis::X, UpwindParams::ud3())?;
        let adv_y = advect_uds(grid, a, &state.v, Axis::Y, UpwindParams::ud3())?;
        let mut ex = grid.zeros();
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let (l11, l12, l21, l22) = (
                    grad.ux[[i, j]],
                    grad.uy[[i, j]],
                    grad.vx[[i, j]],
                    grad.vy[[i, j]],
                );
                let (a11, a12, a22) = (
                    state.a11[[i, j]],
                    state.a12[[i, j]],
                    state.a22[[i, j]],
                );
                let (stretch, d) = match which {
                    Tensor2Component::C11 => (2.0 * (l11 * a11 + l21 * a12), 2.0 * l11),
                    Tensor2Component::C12 => {
                        (a11 * l12 + a12 * (l11 + l22) + a22 * l21, l12 + l21)
                    }
                    Tensor2Component::C22 => (2.0 * (l12 * a12 + l22 * a22), 2.0 * l22),
                };
                ex[[i, j]] = -(adv_x[[i, j]] + adv_y[[i, j]]) + stretch + d / we;
            }
        }
        Ok(ex)
    };

    let ex11 = explicit_for(&state.a11, Tensor2Component::C11)?;
    let ex12 = explicit_for(&state.a12, Tensor2Component::C12)?;
    let ex22 = explicit_for(&state.a22, Tensor2Component::C22)?;

    let mut a11 = update(&state.a11, &h11, &ex11);
    let mut a12 = update(&state.a12, &h12, &ex12);
    let mut a22 = update(&state.a22, &h22, &ex22);

    // wall rows: fractional relaxation driven by the wall shear rate
    let ny = grid.ny();
    for i in 0..grid.nx() {
        for j in [0usize, ny - 1] {
            let shear = grad.uy[[i, j]];
            a11[[i, j]] = 0.0;
            a12[[i, j]] = (sigma * state.a12[[i, j]]
                - h12[[i, j]]
                - (1.0 - theta) * state.a12[[i, j]] / we
                + shear / we)
                / relax_diag;
            a22[[i, j]] = (sigma * state.a22[[i, j]]
                - h22[[i, j]]
                - (1.0 - theta) * state.a22[[i, j]] / we
                + 2.0 * shear * state.a12[[i, j]])
                / relax_diag;
        }
    }
    mirror_periodic(grid, &mut a11);
    mirror_periodic(grid, &mut a12);
    mirror_periodic(grid, &mut a22);

    for (name, f) in [("a11", &a11), ("a12", &a12), ("a22", &a22)] {
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                step: histories.a11.len(),
                context: format!("conformation update ({name})"),
            });
        }
    }
    let a22_negative = a22.iter().filter(|&&v| v < -1e-8).count();
    Ok((a11, a12, a22, a22_negative))
}

#[derive(Debug, Clone, Copy)]
enum Tensor2Component {
    C11,
    C12,
    C22,
}

/// Caputo histories of the tensor components.
#[derive(Debug)]
pub struct ConformationHistories {
    pub a11: L1History,
    pub a12: L1History,
    pub a22: L1History,
}

/// Stepping schedule for a channel run.
#[derive(Debug, Clone)]
pub struct ChannelSchedule {
    pub dt0: f64,
    pub n_steps: usize,
    /// Step doubling between accepted steps; `None` keeps dt fixed.
    pub adaptive: Option<AdaptiveConfig>,
    /// Snapshot cadence in steps (0 = final snapshot only).
    pub snapshot_every: usize,
}

impl ChannelSchedule {
    /// Reference settings: dt growing from 1e-3 to 1.6e-2 by doubling.
    pub fn standard(n_steps: usize, snapshot_every: usize) -> Self {
        Self {
            dt0: 1e-3,
            n_steps,
            adaptive: Some(AdaptiveConfig::default()),
            snapshot_every,
        }
    }
}

/// Per-step channel diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ChannelDiag {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// Structure intensity `max |W - W_base|`.
    pub intensity: f64,
    pub omega_iters: usize,
    pub psi_iters: usize,
    pub omega_l2: f64,
    pub defective_points: usize,
    pub max_imag_residue: f64,
    pub a22_negative_points: usize,
}

/// Snapshot emitted on the configured cadence.
#[derive(Debug, Clone)]
pub struct ChannelSnapshot {
    pub step: usize,
    pub t: f64,
    pub state: FieldState,
}

/// Completed run.
#[derive(Debug)]
pub struct ChannelRun {
    pub snapshots: Vec<ChannelSnapshot>,
    pub diagnostics: Vec<ChannelDiag>,
    pub state: FieldState,
}

/// Owns the evolving state; on failure the caller still holds the last
/// consistent state for post-mortem output.
pub struct ChannelSim {
    grid: Grid2D,
    params: ChannelParams,
    theta: f64,
    bcs: ChannelBcs,
    schedule: ChannelSchedule,
    gs: GSConfig,
    state: FieldState,
    omega_base: Field,
    omega_history: L1History,
    conf_histories: ConformationHistories,
    time: f64,
    dt: f64,
    step_count: usize,
    pub snapshots: Vec<ChannelSnapshot>,
    pub diagnostics: Vec<ChannelDiag>,
}

impl ChannelSim {
    pub fn new(
        grid: Grid2D,
        params: ChannelParams,
        theta: f64,
        bcs: ChannelBcs,
        schedule: ChannelSchedule,
        gs: GSConfig,
    ) -> Result<Self> {
        params.validate()?;
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Config(format!("theta must lie in [0, 1], got {theta}")));
        }
        if !(schedule.dt0 > 0.0) || schedule.n_steps == 0 {
            return Err(Error::Config("schedule needs dt0 > 0 and at least one step".into()));
        }
        let state = init_state(&grid, &params);
        let omega_base = state.omega.clone();
        let omega_history = L1History::with_initial(0.0, state.omega.clone());
        let conf_histories = ConformationHistories {
            a11: L1History::with_initial(0.0, state.a11.clone()),
            a12: L1History::with_initial(0.0, state.a12.clone()),
            a22: L1History::with_initial(0.0, state.a22.clone()),
        };
        Ok(Self {
            grid,
            params,
            theta,
            bcs,
            schedule: schedule.clone(),
            gs,
            state,
            omega_base,
            omega_history,
            conf_histories,
            time: 0.0,
            dt: schedule.dt0,
            step_count: 0,
            snapshots: Vec::new(),
            diagnostics: Vec::new(),
        })
    }

    pub fn state(&self) -> &FieldState {
        &self.state
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Structure-intensity diagnostic `max |W - W_base|`.
    pub fn intensity(&self) -> f64 {
        self.state
            .omega
            .iter()
            .zip(self.omega_base.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Advance one full coupled step.
    pub fn advance(&mut self) -> Result<ChannelDiag> {
        let t_old = self.time;
        let dt = self.dt;
        let omega_old = self.state.omega.clone();

        // 1. finger forcing at the old level
        let finger = finger_force(&self.grid, &self.state, &self.params, t_old)?;
        let t11 = add(&self.state.a11, &finger.f11);
        let t12 = add(&self.state.a12, &finger.f12);
        let t22 = add(&self.state.a22, &finger.f22);
        let mut force = curl_div_tensor(&self.grid, &t11, &t12, &t22)?;
        force.mapv_inplace(|v| v * (1.0 - self.params.nu));

        // 2. vorticity
        let (mut omega_new, omega_iters) = step_vorticity(
            &self.grid,
            &self.state,
            &self.omega_history,
            &self.params,
            self.theta,
            dt,
            &force,
            &self.gs,
        )?;

        // 3. streamfunction, velocities, wall vorticity
        let (psi, u, v, psi_iters) =
            solve_streamfunction(&self.grid, &mut omega_new, &self.state.psi, &self.bcs, &self.gs)?;

        // 4. conformation update with the old velocity fields
        let (a11, a12, a22, a22_negative) = step_conformation(
            &self.grid,
            &self.state,
            &self.conf_histories,
            &self.params,
            self.theta,
            dt,
        )?;

        let t_new = t_old + dt;
        self.omega_history.push(t_new, omega_new.clone())?;
        self.conf_histories.a11.push(t_new, a11.clone())?;
        self.conf_histories.a12.push(t_new, a12.clone())?;
        self.conf_histories.a22.push(t_new, a22.clone())?;

        self.state.omega = omega_new;
        self.state.psi = psi;
        self.state.u = u;
        self.state.v = v;
        self.state.a11 = a11;
        self.state.a12 = a12;
        self.state.a22 = a22;
        self.state.f11 = finger.f11;
        self.state.f12 = finger.f12;
        self.state.f22 = finger.f22;
        self.time = t_new;
        self.step_count += 1;

        // 5. step control on the vorticity field
        if let Some(ad) = &self.schedule.adaptive {
            self.dt = adapt_step(&self.state.omega, &omega_old, ad, dt).dt;
        }

        let diag = ChannelDiag {
            step: self.step_count,
            t: self.time,
            dt,
            intensity: self.intensity(),
            omega_iters,
            psi_iters,
            omega_l2: l2_norm(&self.state.omega),
            defective_points: finger.defective_points,
            max_imag_residue: finger.max_imag_residue,
            a22_negative_points: a22_negative,
        };
        self.diagnostics.push(diag);
        if self.schedule.snapshot_every > 0 && self.step_count % self.schedule.snapshot_every == 0 {
            self.snapshots.push(ChannelSnapshot {
                step: self.step_count,
                t: self.time,
                state: self.state.clone(),
            });
        }
        Ok(diag)
    }

    /// Run the whole schedule.
    pub fn run(mut self) -> Result<ChannelRun> {
        for _ in 0..self.schedule.n_steps {
            self.advance()?;
        }
        self.snapshots.push(ChannelSnapshot {
            step: self.step_count,
            t: self.time,
            state: self.state.clone(),
        });
        Ok(ChannelRun {
            snapshots: self.snapshots,
            diagnostics: self.diagnostics,
            state: self.state,
        })
    }
}

fn add(a: &Field, b: &Field) -> Field {
    let mut out = a.clone();
    Zip::from(&mut out).and(b).for_each(|x, &y| *x += y);
    out
}

/// Convenience wrapper: build the simulator and run the schedule.
pub fn run_channel(
    grid: Grid2D,
    params: ChannelParams,
    theta: f64,
    bcs: ChannelBcs,
    schedule: ChannelSchedule,
    gs: GSConfig,
) -> Result<ChannelRun> {
    ChannelSim::new(grid, params, theta, bcs, schedule, gs)?.run()
}
