//! θ-family IMEX stepper for scalar FADR problems.
//!
//! One step advances
//!
//! ```text
//! D^alpha u + (cx, cy) . grad u = K2 laplacian u + f
//! ```
//!
//! with the L1 Caputo discretization in time, explicit upwind advection and
//! reaction evaluated at the old level, and the diffusion blended between
//! the new and old levels with weight `theta`:
//!
//! ```text
//! sigma u^n + H - sigma u^{n-1} + adv(u^{n-1})
//!     = theta K2 lap(u^n) + (1-theta) K2 lap(u^{n-1}) + f(u^{n-1})
//! ```
//!
//! where `sigma = w_0 / Gamma(2-alpha)` is the newest L1 weight over the
//! last step and `H` collects the older memory terms. `theta = 0` recovers
//! the fully explicit L1 method, `theta = 1` the fully implicit one. At
//! `alpha = 1` the memory collapses to a single backward difference
//! (`sigma = 1/dt`, `H = 0`) and the step equals the classical θ-scheme.

use ndarray::Zip;

use crate::caputo::{adapt_step, memory_split, AdaptiveConfig, L1History};
use crate::grid::{advect_uds, apply_bc, laplacian_cds, Axis, BcSpec, Field, Grid2D, UpwindParams};
use crate::linsolve::{gauss_seidel, BlockDiagSpec, GSConfig};
use crate::ml_special::{mittag_leffler, MLParams};
use crate::{Error, Result};

/// Spatially constant or per-point coefficient.
#[derive(Debug, Clone)]
pub enum Coefficient {
    Constant(f64),
    PerPoint(Field),
}

impl Coefficient {
    fn is_zero(&self) -> bool {
        match self {
            Coefficient::Constant(c) => *c == 0.0,
            Coefficient::PerPoint(f) => f.iter().all(|&v| v == 0.0),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Coefficient::Constant(c) => c.abs(),
            Coefficient::PerPoint(f) => f.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        }
    }

    fn as_field(&self, grid: &Grid2D) -> Field {
        match self {
            Coefficient::Constant(c) => grid.fill(|_, _| *c),
            Coefficient::PerPoint(f) => f.clone(),
        }
    }
}

/// Reaction/source term, evaluated explicitly at the old time level.
#[derive(Debug, Clone, Copy)]
pub enum Reaction {
    None,
    /// `f = lambda * u`
    Linear(f64),
    /// `f = f(x, y, t)`
    Source(fn(f64, f64, f64) -> f64),
}

/// One scalar FADR problem: coefficients, fractional order, domain,
/// boundary data and initial condition.
#[derive(Debug, Clone)]
pub struct FADRProblem {
    pub grid: Grid2D,
    pub advection_x: Coefficient,
    pub advection_y: Coefficient,
    pub diffusion: Coefficient,
    pub reaction: Reaction,
    /// Fractional order in (0, 1]; 1 is the classical limit.
    pub alpha: f64,
    pub bc: BcSpec,
    pub initial: Field,
}

impl FADRProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        match &self.diffusion {
            Coefficient::Constant(k2) if *k2 < 0.0 => {
                return Err(Error::Config(format!("diffusion must be >= 0, got {k2}")));
            }
            Coefficient::PerPoint(f) if f.iter().any(|&v| v < 0.0) => {
                return Err(Error::Config("diffusion field must be >= 0 everywhere".into()));
            }
            _ => {}
        }
        self.grid.check_shape(&self.initial)?;
        Ok(())
    }
}

/// Implicit/explicit blend weight for the diffusion term.
#[derive(Debug, Clone, Copy)]
pub struct ThetaScheme {
    pub theta: f64,
}

impl ThetaScheme {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Config(format!("theta must lie in [0, 1], got {theta}")));
        }
        Ok(Self { theta })
    }
}

/// The nondimensional triple built with `(dt)^alpha` scaling.
#[derive(Debug, Clone, Copy)]
pub struct DimGroups {
    /// CFL number `c dt^alpha / dx`.
    pub nc: f64,
    /// Peclet number `K2 dt^alpha / dx^2`.
    pub pe: f64,
    /// Damkoehler number `lambda dx / c`; undefined without advection.
    pub da: Option<f64>,
}

/// Evaluate the nondimensional groups for the current step size.
pub fn dim_groups(problem: &FADRProblem, dt: f64, dx: f64) -> DimGroups {
    let c = problem
        .advection_x
        .max_abs()
        .max(problem.advection_y.max_abs());
    let gamma = problem.diffusion.max_abs();
    let lambda = match problem.reaction {
        Reaction::Linear(l) => l,
        _ => 0.0,
    };
    let dts = dt.powf(problem.alpha);
    DimGroups {
        nc: c * dts / dx,
        pe: gamma * dts / (dx * dx),
        da: if c != 0.0 { Some(lambda * dx / c) } else { None },
    }
}

/// Warning box for the stability guard; the method is conditionally stable,
/// so leaving the box merely flags the step.
#[derive(Debug, Clone, Copy)]
pub struct SafeBox {
    pub nc_max: f64,
    pub pe_max: f64,
}

impl Default for SafeBox {
    fn default() -> Self {
        Self {
            nc_max: 1.0,
            pe_max: 50.0,
        }
    }
}

/// Per-step diagnostic record.
#[derive(Debug, Clone, Copy)]
pub struct StepDiag {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub l2_norm: f64,
    pub nc: f64,
    pub pe: f64,
    pub within_safe_box: bool,
}

/// Take one step of size `dt` from the newest history entry.
///
/// The first step works from the bare initial condition (single-term L1
/// sum); no separate starting scheme. Dirichlet data is re-imposed on the
/// result; Neumann edges are advanced as unknowns with the ghost-eliminated
/// stencil, consistent with the implicit operator.
pub fn step(
    problem: &FADRProblem,
    scheme: &ThetaScheme,
    history: &L1History,
    dt: f64,
    gs: &GSConfig,
) -> Result<Field> {
    if history.is_empty() {
        return Err(Error::Domain("history must hold the initial condition".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let grid = &problem.grid;
    let u_old = history.last().expect("nonempty");
    grid.check_shape(u_old)?;
    let t_old = history.last_time().expect("nonempty");
    let t_new = t_old + dt;

    // L1 memory: sigma is the diagonal weight of the newest interval, H the
    // contribution of the older intervals (kernel evaluated at t_new).
    let (sigma, h_field) = memory_split(problem.alpha, history, t_new)?;

    // explicit pieces at the old level
    let mut rhs = grid.zeros();
    Zip::from(&mut rhs)
        .and(u_old)
        .and(&h_field)
        .for_each(|r, &u, &h| {
            *r = sigma * u - h;
        });
    if !problem.advection_x.is_zero() {
        let speed = problem.advection_x.as_field(grid);
        let adv = advect_uds(grid, u_old, &speed, Axis::X, UpwindParams::ud3())?;
        Zip::from(&mut rhs).and(&adv).for_each(|r, &a| *r -= a);
    }
    if !problem.advection_y.is_zero() && grid.ny() > 1 {
        let speed = problem.advection_y.as_field(grid);
        let adv = advect_uds(grid, u_old, &speed, Axis::Y, UpwindParams::ud3())?;
        Zip::from(&mut rhs).and(&adv).for_each(|r, &a| *r -= a);
    }
    match problem.reaction {
        Reaction::None => {}
        Reaction::Linear(lambda) => {
            Zip::from(&mut rhs).and(u_old).for_each(|r, &u| *r += lambda * u);
        }
        Reaction::Source(f) => {
            for i in 0..grid.nx() {
                for j in 0..grid.ny() {
                    rhs[[i, j]] += f(grid.x(i), grid.y(j), t_old);
                }
            }
        }
    }

    let theta = scheme.theta;
    let mut u_new = match &problem.diffusion {
        Coefficient::Constant(k2) => {
            let k2 = *k2;
            if k2 != 0.0 && (1.0 - theta) != 0.0 {
                let lap_old = laplacian_cds(grid, u_old)?;
                Zip::from(&mut rhs)
                    .and(&lap_old)
                    .for_each(|r, &l| *r += (1.0 - theta) * k2 * l);
            }
            if theta * k2 > 0.0 {
                let spec = BlockDiagSpec::implicit_diffusion(grid, theta * k2, sigma)?;
                let mut guess = u_old.clone();
                apply_bc(grid, &mut guess, &problem.bc)?;
                gauss_seidel(&spec, &rhs, &guess, gs)?.x
            } else {
                rhs.mapv(|v| v / sigma)
            }
        }
        Coefficient::PerPoint(k2) => {
            if theta > 0.0 {
                return Err(Error::Config(
                    "per-point diffusion requires the explicit scheme (theta = 0); \
                     the implicit stencil has constant coefficients"
                        .into(),
                ));
            }
            let lap_old = laplacian_cds(grid, u_old)?;
            Zip::from(&mut rhs)
                .and(&lap_old)
                .and(k2)
                .for_each(|r, &l, &k| *r += k * l);
            rhs.mapv(|v| v / sigma)
        }
    };

    apply_bc(grid, &mut u_new, &problem.bc)?;
    if u_new.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            step: history.len(),
            context: "stepper output".into(),
        });
    }
    Ok(u_new)
}

/// Stopping rule for [`run`].
#[derive(Debug, Clone, Copy)]
pub enum StopRule {
    Steps(usize),
    Time(f64),
}

/// Driver options.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub dt0: f64,
    pub stop: StopRule,
    /// Step doubling; `None` keeps dt fixed (required for convergence
    /// ladders, the default for validation runs).
    pub adaptive: Option<AdaptiveConfig>,
    pub gs: GSConfig,
    pub safe_box: SafeBox,
}

/// Run output: final field, the full history, per-step diagnostics.
#[derive(Debug)]
pub struct RunOutput {
    pub u: Field,
    pub history: L1History,
    pub diagnostics: Vec<StepDiag>,
}

/// March the problem forward, collecting diagnostics each step.
pub fn run(problem: &FADRProblem, scheme: &ThetaScheme, opts: &RunOptions) -> Result<RunOutput> {
    problem.validate()?;
    let mut history = L1History::with_initial(0.0, problem.initial.clone());
    let mut dt = opts.dt0;
    let mut diagnostics = Vec::new();
    let mut k = 0usize;
    loop {
        match opts.stop {
            StopRule::Steps(n) => {
                if k >= n {
                    break;
                }
            }
            StopRule::Time(t_end) => {
                if history.last_time().unwrap_or(0.0) >= t_end - 1e-12 {
                    break;
                }
            }
        }
        let u_new = step(problem, scheme, &history, dt, &opts.gs)?;
        let t_new = history.last_time().unwrap() + dt;
        let groups = dim_groups(problem, dt, problem.grid.dx());
        let within = groups.nc <= opts.safe_box.nc_max && groups.pe <= opts.safe_box.pe_max;
        diagnostics.push(StepDiag {
            step: k + 1,
            time: t_new,
            dt,
            l2_norm: crate::caputo::l2_norm(&u_new),
            nc: groups.nc,
            pe: groups.pe,
            within_safe_box: within,
        });
        if let Some(ad) = &opts.adaptive {
            let advice = adapt_step(&u_new, history.last().unwrap(), ad, dt);
            history.push(t_new, u_new)?;
            dt = advice.dt;
        } else {
            history.push(t_new, u_new)?;
        }
        k += 1;
    }
    Ok(RunOutput {
        u: history.last().expect("at least initial").clone(),
        history,
        diagnostics,
    })
}

/// Boundary flavour of the 2D fractional-diffusion validation case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationBc {
    Dirichlet,
    Neumann,
}

/// Result of one validation run.
#[derive(Debug)]
pub struct ValidationResult {
    pub rel_l2_error: f64,
    pub solution: Field,
    pub exact: Field,
    pub diagnostics: Vec<StepDiag>,
}

/// 2D fractional-diffusion validation on `[-1,1]^2` (pure diffusion,
/// `K2 = 1`): product-cosine initial data with zero Dirichlet walls, or
/// product-sine data with zero Neumann walls. The exact solution decays as
/// `E_alpha(-(pi^2/2) t^alpha)` — the Laplacian eigenvalue shared by both
/// product modes. Integrates to `t_end` with uniform `dt` and returns the
/// relative l2 error there.
pub fn run_validation_case(
    kind: ValidationBc,
    alpha: f64,
    theta: f64,
    dt: f64,
    n_points: usize,
    t_end: f64,
) -> Result<ValidationResult> {
    use crate::grid::{BcKind, EdgeKinds};
    use std::f64::consts::PI;

    let bc_kind = match kind {
        ValidationBc::Dirichlet => BcKind::Dirichlet,
        ValidationBc::Neumann => BcKind::Neumann,
    };
    let grid = Grid2D::new(
        n_points,
        n_points,
        [-1.0, 1.0],
        [-1.0, 1.0],
        EdgeKinds::all(bc_kind),
    )?;
    let u0 = match kind {
        ValidationBc::Dirichlet => grid.fill(|x, y| (PI * x / 2.0).cos() * (PI * y / 2.0).cos()),
        ValidationBc::Neumann => grid.fill(|x, y| (PI * x / 2.0).sin() * (PI * y / 2.0).sin()),
    };
    let bc = match kind {
        ValidationBc::Dirichlet => BcSpec::all_dirichlet(0.0),
        ValidationBc::Neumann => BcSpec::all_neumann(0.0),
    };
    let problem = FADRProblem {
        grid,
        advection_x: Coefficient::Constant(0.0),
        advection_y: Coefficient::Constant(0.0),
        diffusion: Coefficient::Constant(1.0),
        reaction: Reaction::None,
        alpha,
        bc,
        initial: u0.clone(),
    };
    let scheme = ThetaScheme::new(theta)?;
    let steps = (t_end / dt).round() as usize;
    if ((steps as f64) * dt - t_end).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "dt = {dt} does not divide the horizon {t_end}"
        )));
    }
    let opts = RunOptions {
        dt0: dt,
        stop: StopRule::Steps(steps),
        adaptive: None,
        gs: GSConfig::for_grid(n_points, n_points),
        safe_box: SafeBox::default(),
    };
    let out = run(&problem, &scheme, &opts)?;

    let amp = mittag_leffler(-(PI * PI / 2.0) * t_end.powf(alpha), &MLParams::new(alpha)?)?;
    let exact = u0.mapv(|v| amp * v);
    let mut num = 0.0;
    let mut den = 0.0;
    Zip::from(&out.u).and(&exact).for_each(|&a, &b| {
        num += (a - b) * (a - b);
        den += b * b;
    });
    Ok(ValidationResult {
        rel_l2_error: (num / den).sqrt(),
        solution: out.u,
        exact,
        diagnostics: out.diagnostics,
    })
}
