//! Matrix-free Gauss-Seidel for the constant-coefficient five-point systems
//! this crate produces (Poisson and the implicit-diffusion solve).
//!
//! The operator is applied stencil-wise, never assembled:
//!
//! ```text
//! (A x)_ij = R x_ij + r1 (x_{i-1,j} + x_{i+1,j}) + r2 (x_{i,j-1} + x_{i,j+1})
//! ```
//!
//! Dirichlet boundary nodes are not unknowns; their values are read from the
//! iterate and contribute to neighbouring rows. Neumann edges keep the edge
//! node as an unknown with the outside neighbour reflected inside (ghost
//! elimination). Periodic axes wrap with period `n - 1` (duplicated
//! endpoint). Row diagonal dominance, which the constructors check, is what
//! makes the sweep converge.

use crate::grid::{BcKind, EdgeKinds, Field, Grid2D};
use crate::{Error, Result};

/// Stencil coefficients plus the grid topology they act on.
#[derive(Debug, Clone)]
pub struct BlockDiagSpec {
    r1: f64,
    r2: f64,
    diag: f64,
    nx: usize,
    ny: usize,
    bc: EdgeKinds,
}

impl BlockDiagSpec {
    /// General constructor; enforces `|R| >= |2 r1 + 2 r2| - 1e-12`.
    pub fn new(grid: &Grid2D, r1: f64, r2: f64, diag: f64) -> Result<Self> {
        if diag == 0.0 {
            return Err(Error::Config("zero diagonal coefficient".into()));
        }
        if diag.abs() < (2.0 * r1 + 2.0 * r2).abs() - 1e-12 {
            return Err(Error::Config(format!(
                "row diagonal dominance violated: |{diag}| < |2*{r1} + 2*{r2}|"
            )));
        }
        Ok(Self {
            r1,
            r2: if grid.ny() == 1 { 0.0 } else { r2 },
            diag,
            nx: grid.nx(),
            ny: grid.ny(),
            bc: grid.bc(),
        })
    }

    /// Poisson coefficients `r1 = dx^-2, r2 = dy^-2, R = -2(r1 + r2)`.
    pub fn poisson(grid: &Grid2D) -> Result<Self> {
        let r1 = 1.0 / (grid.dx() * grid.dx());
        let r2 = if grid.ny() > 1 {
            1.0 / (grid.dy() * grid.dy())
        } else {
            0.0
        };
        Self::new(grid, r1, r2, -2.0 * (r1 + r2))
    }

    /// Implicit-diffusion coefficients
    /// `r1 = -nu*theta/dx^2, r2 = -nu*theta/dy^2, R = -2(r1+r2) + sigma`,
    /// where `sigma` is the (positive) time-derivative diagonal.
    pub fn implicit_diffusion(grid: &Grid2D, nu_theta: f64, sigma: f64) -> Result<Self> {
        let r1 = -nu_theta / (grid.dx() * grid.dx());
        let r2 = if grid.ny() > 1 {
            -nu_theta / (grid.dy() * grid.dy())
        } else {
            0.0
        };
        Self::new(grid, r1, r2, -2.0 * (r1 + r2) + sigma)
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }
    pub fn r2(&self) -> f64 {
        self.r2
    }
    pub fn diag(&self) -> f64 {
        self.diag
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }
    pub fn bc(&self) -> EdgeKinds {
        self.bc
    }

    fn is_unknown(&self, i: usize, j: usize) -> bool {
        if self.bc.x_lo == BcKind::Periodic {
            if i == self.nx - 1 {
                return false; // duplicated endpoint
            }
        } else {
            if i == 0 && self.bc.x_lo == BcKind::Dirichlet {
                return false;
            }
            if i == self.nx - 1 && self.bc.x_hi == BcKind::Dirichlet {
                return false;
            }
        }
        if self.ny > 1 {
            if self.bc.y_lo == BcKind::Periodic {
                if j == self.ny - 1 {
                    return false;
                }
            } else {
                if j == 0 && self.bc.y_lo == BcKind::Dirichlet {
                    return false;
                }
                if j == self.ny - 1 && self.bc.y_hi == BcKind::Dirichlet {
                    return false;
                }
            }
        }
        true
    }

    /// Off-diagonal contribution `r1*(xW+xE) + r2*(xS+xN)` at an unknown node.
    fn neighbor_sum(&self, x: &Field, i: usize, j: usize) -> f64 {
        let mut acc = 0.0;
        // x neighbours
        if self.bc.x_lo == BcKind::Periodic {
            let p = self.nx - 1;
            acc += self.r1 * (x[[(i + p - 1) % p, j]] + x[[(i + 1) % p, j]]);
        } else {
            let west = if i == 0 {
                // Neumann reflection (Dirichlet rows are never unknowns here)
                x[[1, j]]
            } else {
                x[[i - 1, j]]
            };
            let east = if i == self.nx - 1 {
                x[[self.nx - 2, j]]
            } else {
                x[[i + 1, j]]
            };
            acc += self.r1 * (west + east);
        }
        if self.ny > 1 {
            if self.bc.y_lo == BcKind::Periodic {
                let p = self.ny - 1;
                acc += self.r2 * (x[[i, (j + p - 1) % p]] + x[[i, (j + 1) % p]]);
            } else {
                let south = if j == 0 { x[[i, 1]] } else { x[[i, j - 1]] };
                let north = if j == self.ny - 1 {
                    x[[i, self.ny - 2]]
                } else {
                    x[[i, j + 1]]
                };
                acc += self.r2 * (south + north);
            }
        }
        acc
    }

    /// Matrix-free operator application on the unknown set.
    pub fn apply(&self, x: &Field) -> Field {
        let mut out = Field::zeros((self.nx, self.ny));
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.is_unknown(i, j) {
                    out[[i, j]] = self.diag * x[[i, j]] + self.neighbor_sum(x, i, j);
                }
            }
        }
        out
    }
}

/// Gauss-Seidel stopping controls.
#[derive(Debug, Clone, Copy)]
pub struct GSConfig {
    pub rel_tol: f64,
    pub max_iters: usize,
}

impl GSConfig {
    pub fn new(rel_tol: f64, max_iters: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_iters < 1 {
            return Err(Error::Config(format!(
                "need rel_tol > 0 and max_iters >= 1, got {rel_tol}, {max_iters}"
            )));
        }
        Ok(Self { rel_tol, max_iters })
    }

    /// Defaults: `rel_tol = 1e-8`, `max_iters = 10 * nx * ny`.
    pub fn for_grid(nx: usize, ny: usize) -> Self {
        Self {
            rel_tol: 1e-8,
            max_iters: 10 * nx * ny,
        }
    }
}

/// Solver output.
#[derive(Debug, Clone)]
pub struct GsSolution {
    pub x: Field,
    pub iterations: usize,
    pub residual: f64,
    /// Relative residual after each sweep.
    pub residual_trace: Vec<f64>,
}

/// Relative l2 residual `||A x - rhs|| / ||rhs||` over the unknown set;
/// absolute when `rhs` vanishes there.
pub fn residual(spec: &BlockDiagSpec, x: &Field, rhs: &Field) -> f64 {
    let (nx, ny) = spec.shape();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            if spec.is_unknown(i, j) {
                let ax = spec.diag * x[[i, j]] + spec.neighbor_sum(x, i, j);
                let r = ax - rhs[[i, j]];
                num += r * r;
                den += rhs[[i, j]] * rhs[[i, j]];
            }
        }
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Forward lexicographic Gauss-Seidel.
///
/// Dirichlet boundary values are read from `initial_guess` and held fixed,
/// so callers write the boundary data into the guess before solving. A zero
/// right-hand side short-circuits to the zero field.
pub fn gauss_seidel(
    spec: &BlockDiagSpec,
    rhs: &Field,
    initial_guess: &Field,
    cfg: &GSConfig,
) -> Result<GsSolution> {
    let (nx, ny) = spec.shape();
    if rhs.dim() != (nx, ny) || initial_guess.dim() != (nx, ny) {
        return Err(Error::Shape(format!(
            "rhs {:?} / guess {:?} do not match spec shape ({nx}, {ny})",
            rhs.dim(),
            initial_guess.dim()
        )));
    }
    let rhs_norm: f64 = {
        let mut acc = 0.0;
        for j in 0..ny {
            for i in 0..nx {
                if spec.is_unknown(i, j) {
                    acc += rhs[[i, j]] * rhs[[i, j]];
                }
            }
        }
        acc.sqrt()
    };
    let boundary_is_zero = {
        let mut zero = true;
        for j in 0..ny {
            for i in 0..nx {
                if !spec.is_unknown(i, j) && initial_guess[[i, j]] != 0.0 {
                    zero = false;
                }
            }
        }
        zero
    };
    if rhs_norm == 0.0 && boundary_is_zero {
        return Ok(GsSolution {
            x: Field::zeros((nx, ny)),
            iterations: 0,
            residual: 0.0,
            residual_trace: Vec::new(),
        });
    }

    let mut x = initial_guess.clone();
    crate::grid::mirror_periodic_for_spec(spec.bc, nx, ny, &mut x);

    let mut trace = Vec::new();
    let mut res = residual(spec, &x, rhs);
    if res <= cfg.rel_tol {
        return Ok(GsSolution {
            x,
            iterations: 0,
            residual: res,
            residual_trace: trace,
        });
    }
    for sweep in 1..=cfg.max_iters {
        for j in 0..ny {
            for i in 0..nx {
                if spec.is_unknown(i, j) {
                    x[[i, j]] = (rhs[[i, j]] - spec.neighbor_sum(&x, i, j)) / spec.diag();
                }
            }
        }
        crate::grid::mirror_periodic_for_spec(spec.bc, nx, ny, &mut x);
        res = residual(spec, &x, rhs);
        trace.push(res);
        if res <= cfg.rel_tol {
            return Ok(GsSolution {
                x,
                iterations: sweep,
                residual: res,
                residual_trace: trace,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "Gauss-Seidel",
        iterations: cfg.max_iters,
        residual: res,
    })
}
