//! Structured-grid containers and spatial operators.
//!
//! Fields are `ndarray::Array2<f64>` with dimensions `(nx, ny)` indexed as
//! `field[[i, j]]`, `i` along x and `j` along y.
//!
//! Periodic axes use the duplicated-endpoint convention: the grid stores
//! both `x_0` and `x_{nx-1}` even though they are the same physical point,
//! so the period is `nx - 1` and boundary application mirrors
//! `field[0] -> field[nx-1]`.
//!
//! Advection uses the blended upwind formula
//!
//! ```text
//! K du/dx ~= K (u_{i+1} - u_{i-1}) / (2 dx)
//!            + q (K+ u-_x + K- u+_x),      K- = min(K,0), K+ = max(K,0),
//! u-_x = (u_{i-2} - 3u_{i-1} + 3u_i - u_{i+1}) / (3 dx)
//! u+_x = (u_{i-1} - 3u_i + 3u_{i+1} - u_{i+2}) / (3 dx)
//! ```
//!
//! `q = 0.5` is third-order accurate; `q` is forced to zero at points
//! adjacent to a non-periodic boundary so the five-point stencil never
//! needs ghost values (second-order there).

use ndarray::Array2;

use crate::{Error, Result};

pub type Field = Array2<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Periodic,
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Which boundary-condition kind applies on each edge of the rectangle.
#[derive(Debug, Clone, Copy)]
pub struct EdgeKinds {
    pub x_lo: BcKind,
    pub x_hi: BcKind,
    pub y_lo: BcKind,
    pub y_hi: BcKind,
}

impl EdgeKinds {
    pub fn all(kind: BcKind) -> Self {
        Self {
            x_lo: kind,
            x_hi: kind,
            y_lo: kind,
            y_hi: kind,
        }
    }

    pub fn periodic_x(y_kind: BcKind) -> Self {
        Self {
            x_lo: BcKind::Periodic,
            x_hi: BcKind::Periodic,
            y_lo: y_kind,
            y_hi: y_kind,
        }
    }
}

/// Uniform rectangular grid. An axis extent of 1 marks a degenerate
/// (inactive) axis used for one-dimensional problems; active axes need at
/// least 5 points so the upwind stencil fits.
#[derive(Debug, Clone)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    x0: f64,
    y0: f64,
    bc: EdgeKinds,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, x_range: [f64; 2], y_range: [f64; 2], bc: EdgeKinds) -> Result<Self> {
        for (n, name) in [(nx, "nx"), (ny, "ny")] {
            if n != 1 && n < 5 {
                return Err(Error::Config(format!(
                    "{name} = {n}: active axes need at least 5 points (or exactly 1 for a flat axis)"
                )));
            }
        }
        if (bc.x_lo == BcKind::Periodic) != (bc.x_hi == BcKind::Periodic) {
            return Err(Error::Config("periodic bc must pair on both x edges".into()));
        }
        if (bc.y_lo == BcKind::Periodic) != (bc.y_hi == BcKind::Periodic) {
            return Err(Error::Config("periodic bc must pair on both y edges".into()));
        }
        let dx = if nx > 1 {
            (x_range[1] - x_range[0]) / (nx - 1) as f64
        } else {
            1.0
        };
        let dy = if ny > 1 {
            (y_range[1] - y_range[0]) / (ny - 1) as f64
        } else {
            1.0
        };
        if !(dx > 0.0) || !(dy > 0.0) {
            return Err(Error::Config("grid extents must be increasing".into()));
        }
        Ok(Self {
            nx,
            ny,
            dx,
            dy,
            x0: x_range[0],
            y0: y_range[0],
            bc,
        })
    }

    /// One-dimensional grid along x (ny = 1).
    pub fn line(nx: usize, x_range: [f64; 2], bc_x: BcKind) -> Result<Self> {
        Self::new(
            nx,
            1,
            x_range,
            [0.0, 1.0],
            EdgeKinds {
                x_lo: bc_x,
                x_hi: bc_x,
                y_lo: BcKind::Dirichlet,
                y_hi: BcKind::Dirichlet,
            },
        )
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }
    pub fn bc(&self) -> EdgeKinds {
        self.bc
    }
    pub fn periodic_x(&self) -> bool {
        self.bc.x_lo == BcKind::Periodic
    }
    pub fn periodic_y(&self) -> bool {
        self.bc.y_lo == BcKind::Periodic
    }

    pub fn zeros(&self) -> Field {
        Array2::zeros((self.nx, self.ny))
    }

    pub fn fill(&self, f: impl Fn(f64, f64) -> f64) -> Field {
        Array2::from_shape_fn((self.nx, self.ny), |(i, j)| f(self.x(i), self.y(j)))
    }

    pub fn check_shape(&self, field: &Field) -> Result<()> {
        if field.dim() != (self.nx, self.ny) {
            return Err(Error::Shape(format!(
                "field shape {:?} does not match grid ({}, {})",
                field.dim(),
                self.nx,
                self.ny
            )));
        }
        Ok(())
    }
}

/// Upwind blend parameter; 0.5 in the interior, 0 beside boundaries.
#[derive(Debug, Clone, Copy)]
pub struct UpwindParams {
    pub q: f64,
}

impl UpwindParams {
    pub fn ud3() -> Self {
        Self { q: 0.5 }
    }

    pub fn central() -> Self {
        Self { q: 0.0 }
    }

    pub fn new(q: f64) -> Result<Self> {
        if q != 0.0 && q != 0.5 {
            return Err(Error::Config(format!("upwind blend q must be 0 or 0.5, got {q}")));
        }
        Ok(Self { q })
    }
}

/// `speed * du/daxis` with the blended upwind formula. Output is zero on
/// non-periodic boundary nodes of the chosen axis; those rows belong to the
/// boundary conditions.
pub fn advect_uds(
    grid: &Grid2D,
    field: &Field,
    speed: &Field,
    axis: Axis,
    p: UpwindParams,
) -> Result<Field> {
    grid.check_shape(field)?;
    grid.check_shape(speed)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let (len, other, h, periodic) = match axis {
        Axis::X => (nx, ny, grid.dx, grid.periodic_x()),
        Axis::Y => (ny, nx, grid.dy, grid.periodic_y()),
    };
    if len < 5 {
        return Err(Error::Shape(format!(
            "axis extent {len} too small for the upwind stencil (need 5)"
        )));
    }

    let get = |i: usize, m: usize| -> f64 {
        match axis {
            Axis::X => field[[i, m]],
            Axis::Y => field[[m, i]],
        }
    };
    let mut out = grid.zeros();
    fn set(out: &mut Field, axis: Axis, i: usize, m: usize, v: f64) {
        match axis {
            Axis::X => out[[i, m]] = v,
            Axis::Y => out[[m, i]] = v,
        }
    }

    if periodic {
        let period = len - 1;
        let wrap = |i: isize| -> usize { (i.rem_euclid(period as isize)) as usize };
        for m in 0..other {
            for i in 0..period {
                let k = match axis {
                    Axis::X => speed[[i, m]],
                    Axis::Y => speed[[m, i]],
                };
                let um2 = get(wrap(i as isize - 2), m);
                let um1 = get(wrap(i as isize - 1), m);
                let u0 = get(i, m);
                let up1 = get(wrap(i as isize + 1), m);
                let up2 = get(wrap(i as isize + 2), m);
                set(&mut out, axis, i, m, ud_point(k, um2, um1, u0, up1, up2, h, p.q));
            }
            // duplicated endpoint mirrors index 0
            let v = match axis {
                Axis::X => out[[0, m]],
                Axis::Y => out[[m, 0]],
            };
            set(&mut out, axis, period, m, v);
        }
    } else {
        for m in 0..other {
            for i in 1..len - 1 {
                let k = match axis {
                    Axis::X => speed[[i, m]],
                    Axis::Y => speed[[m, i]],
                };
                // ghost-free: drop the cubic correction where its stencil
                // would leave the grid
                let q_eff = if i < 2 || i > len - 3 { 0.0 } else { p.q };
                let (um2, up2) = if q_eff == 0.0 {
                    (0.0, 0.0)
                } else {
                    (get(i - 2, m), get(i + 2, m))
                };
                let v = ud_point(k, um2, get(i - 1, m), get(i, m), get(i + 1, m), up2, h, q_eff);
                set(&mut out, axis, i, m, v);
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn ud_point(k: f64, um2: f64, um1: f64, u0: f64, up1: f64, up2: f64, h: f64, q: f64) -> f64 {
    let central = k * (up1 - um1) / (2.0 * h);
    if q == 0.0 {
        return central;
    }
    let k_plus = k.max(0.0);
    let k_minus = k.min(0.0);
    let u_minus = (um2 - 3.0 * um1 + 3.0 * u0 - up1) / (3.0 * h);
    let u_plus = (um1 - 3.0 * u0 + 3.0 * up1 - up2) / (3.0 * h);
    central + q * (k_plus * u_minus + k_minus * u_plus)
}

/// Five-point Laplacian. Output on Dirichlet boundary nodes is zero (those
/// rows are fixed by the data); Neumann edges use homogeneous ghost
/// elimination `(2 u_1 - 2 u_0) / h^2`; periodic axes wrap. A flat axis
/// contributes nothing.
pub fn laplacian_cds(grid: &Grid2D, field: &Field) -> Result<Field> {
    grid.check_shape(field)?;
    let (nx, ny) = (grid.nx, grid.ny);
    for (n, active) in [(nx, nx > 1), (ny, ny > 1)] {
        if active && n < 3 {
            return Err(Error::Shape(format!("axis extent {n} too small for the Laplacian")));
        }
    }
    let mut out = grid.zeros();
    let dx2 = grid.dx * grid.dx;
    let dy2 = grid.dy * grid.dy;

    let px = grid.periodic_x();
    let py = grid.periodic_y();
    let on_dirichlet_edge = |i: usize, j: usize| -> bool {
        if nx > 1 && !px {
            if (i == 0 && grid.bc.x_lo == BcKind::Dirichlet)
                || (i == nx - 1 && grid.bc.x_hi == BcKind::Dirichlet)
            {
                return true;
            }
        }
        if ny > 1 && !py {
            if (j == 0 && grid.bc.y_lo == BcKind::Dirichlet)
                || (j == ny - 1 && grid.bc.y_hi == BcKind::Dirichlet)
            {
                return true;
            }
        }
        false
    };
    let x_range: Box<dyn Iterator<Item = usize>> = if px {
        Box::new(0..nx - 1)
    } else {
        Box::new(0..nx)
    };
    for i in x_range {
        for j in 0..if py { ny - 1 } else { ny } {
            if on_dirichlet_edge(i, j) {
                continue; // Dirichlet rows belong to the data
            }
            let mut acc = 0.0;
            if nx > 1 {
                acc += second_diff(field, grid, Axis::X, i, j) / dx2;
            }
            if ny > 1 {
                acc += second_diff(field, grid, Axis::Y, j, i) / dy2;
            }
            out[[i, j]] = acc;
        }
    }
    mirror_periodic(grid, &mut out);
    Ok(out)
}

/// Second difference along `axis` at position `i` (transverse index `m`),
/// in units of the local value (caller divides by h^2). Returns 0 on
/// Dirichlet boundary nodes.
fn second_diff(field: &Field, grid: &Grid2D, axis: Axis, i: usize, m: usize) -> f64 {
    let (len, periodic, lo, hi) = match axis {
        Axis::X => (grid.nx, grid.periodic_x(), grid.bc.x_lo, grid.bc.x_hi),
        Axis::Y => (grid.ny, grid.periodic_y(), grid.bc.y_lo, grid.bc.y_hi),
    };
    let get = |k: usize| -> f64 {
        match axis {
            Axis::X => field[[k, m]],
            Axis::Y => field[[m, k]],
        }
    };
    if periodic {
        let period = len - 1;
        let wrap = |k: isize| -> usize { (k.rem_euclid(period as isize)) as usize };
        let i = i as isize;
        return get(wrap(i - 1)) - 2.0 * get(wrap(i)) + get(wrap(i + 1));
    }
    if i == 0 {
        return match lo {
            BcKind::Neumann => 2.0 * (get(1) - get(0)),
            _ => 0.0,
        };
    }
    if i == len - 1 {
        return match hi {
            BcKind::Neumann => 2.0 * (get(len - 2) - get(len - 1)),
            _ => 0.0,
        };
    }
    get(i - 1) - 2.0 * get(i) + get(i + 1)
}

pub(crate) fn mirror_periodic(grid: &Grid2D, field: &mut Field) {
    mirror_periodic_for_spec(grid.bc, grid.nx, grid.ny, field);
}

pub(crate) fn mirror_periodic_for_spec(bc: EdgeKinds, nx: usize, ny: usize, field: &mut Field) {
    if bc.x_lo == BcKind::Periodic && nx > 1 {
        for j in 0..ny {
            field[[nx - 1, j]] = field[[0, j]];
        }
    }
    if bc.y_lo == BcKind::Periodic && ny > 1 {
        for i in 0..nx {
            field[[i, ny - 1]] = field[[i, 0]];
        }
    }
}

/// Boundary data for one edge.
#[derive(Debug, Clone)]
pub enum BcValue {
    Uniform(f64),
    /// One value per node along the edge.
    Profile(Vec<f64>),
}

impl BcValue {
    fn at(&self, k: usize) -> f64 {
        match self {
            BcValue::Uniform(v) => *v,
            BcValue::Profile(p) => p[k],
        }
    }

    fn len_ok(&self, need: usize) -> bool {
        match self {
            BcValue::Uniform(_) => true,
            BcValue::Profile(p) => p.len() == need,
        }
    }
}

#[derive(Debug, Clone)]
pub enum EdgeBc {
    Periodic,
    Dirichlet(BcValue),
    Neumann(BcValue),
}

impl EdgeBc {
    fn kind(&self) -> BcKind {
        match self {
            EdgeBc::Periodic => BcKind::Periodic,
            EdgeBc::Dirichlet(_) => BcKind::Dirichlet,
            EdgeBc::Neumann(_) => BcKind::Neumann,
        }
    }
}

/// Per-edge boundary specification for [`apply_bc`].
#[derive(Debug, Clone)]
pub struct BcSpec {
    pub x_lo: EdgeBc,
    pub x_hi: EdgeBc,
    pub y_lo: EdgeBc,
    pub y_hi: EdgeBc,
}

impl BcSpec {
    pub fn all_dirichlet(value: f64) -> Self {
        Self {
            x_lo: EdgeBc::Dirichlet(BcValue::Uniform(value)),
            x_hi: EdgeBc::Dirichlet(BcValue::Uniform(value)),
            y_lo: EdgeBc::Dirichlet(BcValue::Uniform(value)),
            y_hi: EdgeBc::Dirichlet(BcValue::Uniform(value)),
        }
    }

    pub fn all_neumann(gradient: f64) -> Self {
        Self {
            x_lo: EdgeBc::Neumann(BcValue::Uniform(gradient)),
            x_hi: EdgeBc::Neumann(BcValue::Uniform(gradient)),
            y_lo: EdgeBc::Neumann(BcValue::Uniform(gradient)),
            y_hi: EdgeBc::Neumann(BcValue::Uniform(gradient)),
        }
    }

    pub fn periodic_x_dirichlet_y(y_lo: BcValue, y_hi: BcValue) -> Self {
        Self {
            x_lo: EdgeBc::Periodic,
            x_hi: EdgeBc::Periodic,
            y_lo: EdgeBc::Dirichlet(y_lo),
            y_hi: EdgeBc::Dirichlet(y_hi),
        }
    }

    pub fn periodic_x_only() -> Self {
        Self {
            x_lo: EdgeBc::Periodic,
            x_hi: EdgeBc::Periodic,
            y_lo: EdgeBc::Dirichlet(BcValue::Uniform(0.0)),
            y_hi: EdgeBc::Dirichlet(BcValue::Uniform(0.0)),
        }
    }
}

/// Impose the boundary specification on `field`.
///
/// Dirichlet edges are overwritten with the data; Neumann edges get the
/// second-order one-sided extrapolation `u_0 = (4 u_1 - u_2 -+ 2 h g) / 3`
/// so that the outward normal derivative equals `g`; periodic axes mirror
/// the duplicated endpoint. Corners where two Dirichlet edges meet must
/// carry consistent data.
pub fn apply_bc(grid: &Grid2D, field: &mut Field, spec: &BcSpec) -> Result<()> {
    grid.check_shape(field)?;
    let kinds = [
        (spec.x_lo.kind(), grid.bc.x_lo, "x_lo"),
        (spec.x_hi.kind(), grid.bc.x_hi, "x_hi"),
        (spec.y_lo.kind(), grid.bc.y_lo, "y_lo"),
        (spec.y_hi.kind(), grid.bc.y_hi, "y_hi"),
    ];
    for (have, want, name) in kinds {
        if have != want {
            return Err(Error::Config(format!(
                "edge {name}: spec kind {have:?} does not match grid kind {want:?}"
            )));
        }
    }
    for (bc, need, name) in [
        (&spec.x_lo, grid.ny, "x_lo"),
        (&spec.x_hi, grid.ny, "x_hi"),
        (&spec.y_lo, grid.nx, "y_lo"),
        (&spec.y_hi, grid.nx, "y_hi"),
    ] {
        if let EdgeBc::Dirichlet(v) | EdgeBc::Neumann(v) = bc {
            if !v.len_ok(need) {
                return Err(Error::Shape(format!("edge {name}: profile length must be {need}")));
            }
        }
    }
    check_corners(grid, spec)?;

    let (nx, ny) = (grid.nx, grid.ny);
    // x edges first, then y edges (y data wins the corners)
    if nx > 1 {
        match (&spec.x_lo, &spec.x_hi) {
            (EdgeBc::Periodic, EdgeBc::Periodic) => {}
            (lo, hi) => {
                for j in 0..ny {
                    apply_edge_point(field, lo, grid.dx, j, |f| (f[[1, j]], f[[2, j]]), |f, v| {
                        f[[0, j]] = v
                    });
                    apply_edge_point(
                        field,
                        hi,
                        grid.dx,
                        j,
                        |f| (f[[nx - 2, j]], f[[nx - 3, j]]),
                        |f, v| f[[nx - 1, j]] = v,
                    );
                }
            }
        }
    }
    if ny > 1 {
        match (&spec.y_lo, &spec.y_hi) {
            (EdgeBc::Periodic, EdgeBc::Periodic) => {}
            (lo, hi) => {
                for i in 0..nx {
                    apply_edge_point(field, lo, grid.dy, i, |f| (f[[i, 1]], f[[i, 2]]), |f, v| {
                        f[[i, 0]] = v
                    });
                    apply_edge_point(
                        field,
                        hi,
                        grid.dy,
                        i,
                        |f| (f[[i, ny - 2]], f[[i, ny - 3]]),
                        |f, v| f[[i, ny - 1]] = v,
                    );
                }
            }
        }
    }
    mirror_periodic(grid, field);
    Ok(())
}

fn apply_edge_point(
    field: &mut Field,
    bc: &EdgeBc,
    h: f64,
    k: usize,
    read: impl Fn(&Field) -> (f64, f64),
    write: impl Fn(&mut Field, f64),
) {
    match bc {
        EdgeBc::Periodic => {}
        EdgeBc::Dirichlet(v) => write(field, v.at(k)),
        EdgeBc::Neumann(g) => {
            // one-sided 3-point derivative solved for the edge value; g is
            // the outward normal derivative
            let (u1, u2) = read(field);
            write(field, (4.0 * u1 - u2 - 2.0 * h * g.at(k)) / 3.0);
        }
    }
}

fn check_corners(grid: &Grid2D, spec: &BcSpec) -> Result<()> {
    if grid.nx == 1 || grid.ny == 1 {
        return Ok(());
    }
    let corners = [
        (&spec.x_lo, 0usize, &spec.y_lo, 0usize, "x_lo/y_lo"),
        (&spec.x_lo, grid.ny - 1, &spec.y_hi, 0usize, "x_lo/y_hi"),
        (&spec.x_hi, 0usize, &spec.y_lo, grid.nx - 1, "x_hi/y_lo"),
        (&spec.x_hi, grid.ny - 1, &spec.y_hi, grid.nx - 1, "x_hi/y_hi"),
    ];
    for (xe, xk, ye, yk, name) in corners {
        if let (EdgeBc::Dirichlet(a), EdgeBc::Dirichlet(b)) = (xe, ye) {
            if (a.at(xk) - b.at(yk)).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "corner {name}: conflicting Dirichlet values {} vs {}",
                    a.at(xk),
                    b.at(yk)
                )));
            }
        }
    }
    Ok(())
}

/// Central x-derivative; periodic wrap or one-sided 3-point at edges.
pub fn ddx_central(grid: &Grid2D, field: &Field) -> Result<Field> {
    derivative_central(grid, field, Axis::X)
}

/// Central y-derivative; periodic wrap or one-sided 3-point at edges.
pub fn ddy_central(grid: &Grid2D, field: &Field) -> Result<Field> {
    derivative_central(grid, field, Axis::Y)
}

fn derivative_central(grid: &Grid2D, field: &Field, axis: Axis) -> Result<Field> {
    grid.check_shape(field)?;
    let (len, other, h, periodic) = match axis {
        Axis::X => (grid.nx, grid.ny, grid.dx, grid.periodic_x()),
        Axis::Y => (grid.ny, grid.nx, grid.dy, grid.periodic_y()),
    };
    let mut out = grid.zeros();
    if len == 1 {
        return Ok(out);
    }
    if len < 3 {
        return Err(Error::Shape(format!("axis extent {len} too small for a derivative")));
    }
    let get = |i: usize, m: usize| -> f64 {
        match axis {
            Axis::X => field[[i, m]],
            Axis::Y => field[[m, i]],
        }
    };
    for m in 0..other {
        if periodic {
            let period = len - 1;
            let wrap = |k: isize| -> usize { (k.rem_euclid(period as isize)) as usize };
            for i in 0..period {
                let v = (get(wrap(i as isize + 1), m) - get(wrap(i as isize - 1), m)) / (2.0 * h);
                match axis {
                    Axis::X => out[[i, m]] = v,
                    Axis::Y => out[[m, i]] = v,
                }
            }
        } else {
            for i in 0..len {
                let v = if i == 0 {
                    (-3.0 * get(0, m) + 4.0 * get(1, m) - get(2, m)) / (2.0 * h)
                } else if i == len - 1 {
                    (3.0 * get(len - 1, m) - 4.0 * get(len - 2, m) + get(len - 3, m)) / (2.0 * h)
                } else {
                    (get(i + 1, m) - get(i - 1, m)) / (2.0 * h)
                };
                match axis {
                    Axis::X => out[[i, m]] = v,
                    Axis::Y => out[[m, i]] = v,
                }
            }
        }
    }
    mirror_periodic(grid, &mut out);
    Ok(out)
}

/// Raw second x-derivative (no boundary-condition coupling): periodic wrap
/// or the cubic-exact one-sided formula at edges.
pub fn d2dx2(grid: &Grid2D, field: &Field) -> Result<Field> {
    second_derivative(grid, field, Axis::X)
}

/// Raw second y-derivative; periodic wrap or one-sided at edges.
pub fn d2dy2(grid: &Grid2D, field: &Field) -> Result<Field> {
    second_derivative(grid, field, Axis::Y)
}

fn second_derivative(grid: &Grid2D, field: &Field, axis: Axis) -> Result<Field> {
    grid.check_shape(field)?;
    let (len, other, h, periodic) = match axis {
        Axis::X => (grid.nx, grid.ny, grid.dx, grid.periodic_x()),
        Axis::Y => (grid.ny, grid.nx, grid.dy, grid.periodic_y()),
    };
    let mut out = grid.zeros();
    if len == 1 {
        return Ok(out);
    }
    if len < 4 {
        return Err(Error::Shape(format!(
            "axis extent {len} too small for the one-sided second derivative"
        )));
    }
    let h2 = h * h;
    let get = |i: usize, m: usize| -> f64 {
        match axis {
            Axis::X => field[[i, m]],
            Axis::Y => field[[m, i]],
        }
    };
    for m in 0..other {
        for i in 0..len {
            let v = if periodic {
                if i == len - 1 {
                    continue;
                }
                let p = len - 1;
                let im = (i + p - 1) % p;
                let ip = (i + 1) % p;
                (get(im, m) - 2.0 * get(i, m) + get(ip, m)) / h2
            } else if i == 0 {
                (2.0 * get(0, m) - 5.0 * get(1, m) + 4.0 * get(2, m) - get(3, m)) / h2
            } else if i == len - 1 {
                (2.0 * get(len - 1, m) - 5.0 * get(len - 2, m) + 4.0 * get(len - 3, m)
                    - get(len - 4, m))
                    / h2
            } else {
                (get(i - 1, m) - 2.0 * get(i, m) + get(i + 1, m)) / h2
            };
            match axis {
                Axis::X => out[[i, m]] = v,
                Axis::Y => out[[m, i]] = v,
            }
        }
    }
    mirror_periodic(grid, &mut out);
    Ok(out)
}

/// One-sided second derivative along y at a wall row, exact on cubics:
/// `(2 u_0 - 5 u_1 + 4 u_2 - u_3) / dy^2` counting away from the wall.
pub fn d2dy2_one_sided(grid: &Grid2D, field: &Field, at_high_edge: bool, i: usize) -> f64 {
    let ny = grid.ny;
    let g = |j: usize| field[[i, j]];
    let dy2 = grid.dy * grid.dy;
    if at_high_edge {
        (2.0 * g(ny - 1) - 5.0 * g(ny - 2) + 4.0 * g(ny - 3) - g(ny - 4)) / dy2
    } else {
        (2.0 * g(0) - 5.0 * g(1) + 4.0 * g(2) - g(3)) / dy2
    }
}

/// One-sided first y-derivative at a wall row, exact on quadratics.
pub fn ddy_one_sided(grid: &Grid2D, field: &Field, at_high_edge: bool, i: usize) -> f64 {
    let ny = grid.ny;
    let g = |j: usize| field[[i, j]];
    if at_high_edge {
        (3.0 * g(ny - 1) - 4.0 * g(ny - 2) + g(ny - 3)) / (2.0 * grid.dy)
    } else {
        (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * grid.dy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn periodic_grid(n: usize) -> Grid2D {
        Grid2D::new(
            n,
            1,
            [0.0, 2.0 * PI],
            [0.0, 1.0],
            EdgeKinds::periodic_x(BcKind::Dirichlet),
        )
        .unwrap()
    }

    #[test]
    fn advect_constant_field_is_zero() {
        let g = periodic_grid(33);
        let u = g.fill(|_, _| 3.7);
        let k = g.fill(|_, _| 1.4);
        let out = advect_uds(&g, &u, &k, Axis::X, UpwindParams::ud3()).unwrap();
        for v in out.iter() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn advect_linear_is_exact() {
        let g = Grid2D::new(
            11,
            1,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let u = g.fill(|x, _| 2.0 * x);
        let k = g.fill(|_, _| 1.0);
        let out = advect_uds(&g, &u, &k, Axis::X, UpwindParams::ud3()).unwrap();
        for i in 1..10 {
            assert_abs_diff_eq!(out[[i, 0]], 2.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(out[[0, 0]], 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(out[[10, 0]], 0.0, epsilon = 0.0);
    }

    #[test]
    fn advect_quadratic_interior_value() {
        // u = x^2, K = 1, dx = 0.1: both the central part and the cubic
        // correction are exact on quadratics, so the result at x=1 is 2.0.
        let g = Grid2D::new(
            21,
            1,
            [0.0, 2.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        assert_abs_diff_eq!(g.dx(), 0.1, epsilon = 1e-15);
        let u = g.fill(|x, _| x * x);
        let k = g.fill(|_, _| 1.0);
        let out = advect_uds(&g, &u, &k, Axis::X, UpwindParams::ud3()).unwrap();
        let i = 10; // x = 1.0
        assert_abs_diff_eq!(out[[i, 0]], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn advect_q0_equals_central() {
        let g = periodic_grid(41);
        let u = g.fill(|x, _| (x).sin() + 0.3 * (2.0 * x).cos());
        let k = g.fill(|_, _| 0.9);
        let central = advect_uds(&g, &u, &k, Axis::X, UpwindParams::central()).unwrap();
        let n = g.nx();
        let p = n - 1;
        for i in 0..p {
            let ip = (i + 1) % p;
            let im = (i + p - 1) % p;
            let expect = 0.9 * (u[[ip, 0]] - u[[im, 0]]) / (2.0 * g.dx());
            assert_abs_diff_eq!(central[[i, 0]], expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn upwind_direction_flips_with_speed_sign() {
        // exact discrete identity: negating the speed while mirroring the
        // field swaps the one-sided branches, so the output is the mirror
        // of the forward output
        let g = periodic_grid(65);
        let u = g.fill(|x, _| (x).sin() + 0.2 * (3.0 * x).sin());
        let k_pos = g.fill(|_, _| 1.0);
        let k_neg = g.fill(|_, _| -1.0);
        let fwd = advect_uds(&g, &u, &k_pos, Axis::X, UpwindParams::ud3()).unwrap();

        let p = g.nx() - 1;
        let mut mirrored = g.zeros();
        for i in 0..g.nx() {
            mirrored[[i, 0]] = u[[(p - i % p) % p, 0]];
        }
        let bwd = advect_uds(&g, &mirrored, &k_neg, Axis::X, UpwindParams::ud3()).unwrap();
        for i in 0..p {
            let j = (p - i % p) % p;
            assert_abs_diff_eq!(bwd[[j, 0]], fwd[[i, 0]], epsilon = 1e-12);
        }
    }

    #[test]
    fn ud3_observed_order_at_least_cubic() {
        // refinement study on u = sin x, constant speed, periodic
        let mut errs = Vec::new();
        let mut hs = Vec::new();
        for n in [33usize, 65, 129, 257] {
            let g = periodic_grid(n);
            let u = g.fill(|x, _| x.sin());
            let k = g.fill(|_, _| 1.0);
            let out = advect_uds(&g, &u, &k, Axis::X, UpwindParams::ud3()).unwrap();
            let mut emax: f64 = 0.0;
            for i in 0..n - 1 {
                emax = emax.max((out[[i, 0]] - g.x(i).cos()).abs());
            }
            errs.push(emax);
            hs.push(g.dx());
        }
        let slope = (errs[0].ln() - errs[errs.len() - 1].ln())
            / (hs[0].ln() - hs[hs.len() - 1].ln());
        assert!(slope >= 2.9, "observed order {slope}");
    }

    #[test]
    fn advect_needs_five_points() {
        let g = Grid2D::new(
            5,
            1,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let u = g.zeros();
        let k = g.zeros();
        assert!(advect_uds(&g, &u, &k, Axis::Y, UpwindParams::ud3()).is_err());
        assert!(advect_uds(&g, &u, &k, Axis::X, UpwindParams::ud3()).is_ok());
    }

    #[test]
    fn laplacian_constant_zero_and_quadratic_exact() {
        let g = Grid2D::new(
            17,
            17,
            [-1.0, 1.0],
            [-1.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let c = g.fill(|_, _| 5.0);
        let lc = laplacian_cds(&g, &c).unwrap();
        for v in lc.iter() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
        let q = g.fill(|x, y| x * x + y * y);
        let lq = laplacian_cds(&g, &q).unwrap();
        for i in 1..16 {
            for j in 1..16 {
                assert_abs_diff_eq!(lq[[i, j]], 4.0, epsilon = 1e-11);
            }
        }
        // Dirichlet rows untouched (zero output)
        assert_abs_diff_eq!(lq[[0, 5]], 0.0, epsilon = 0.0);
    }

    #[test]
    fn laplacian_of_product_mode() {
        let g = Grid2D::new(
            81,
            81,
            [-1.0, 1.0],
            [-1.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let u = g.fill(|x, y| (PI * x / 2.0).sin() * (PI * y / 2.0).sin());
        let lu = laplacian_cds(&g, &u).unwrap();
        let lam = PI * PI / 2.0;
        let h2 = g.dx() * g.dx();
        for i in (5..75).step_by(7) {
            for j in (5..75).step_by(7) {
                let err = (lu[[i, j]] + lam * u[[i, j]]).abs();
                assert!(err < 2.0 * lam * h2, "err {err} at ({i},{j})");
            }
        }
    }

    #[test]
    fn laplacian_quadratic_exactness_property() {
        // arbitrary quadratic polynomial is differentiated exactly inside
        let g = Grid2D::new(
            13,
            9,
            [0.0, 1.2],
            [-0.4, 0.4],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let (a, b, c, d, e, f) = (0.3, -1.1, 2.2, 0.7, -0.6, 1.9);
        let u = g.fill(|x, y| a + b * x + c * y + d * x * x + e * x * y + f * y * y);
        let lu = laplacian_cds(&g, &u).unwrap();
        for i in 1..12 {
            for j in 1..8 {
                assert_abs_diff_eq!(lu[[i, j]], 2.0 * d + 2.0 * f, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn apply_bc_dirichlet_and_periodic() {
        let g = Grid2D::new(
            9,
            7,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::periodic_x(BcKind::Dirichlet),
        )
        .unwrap();
        let mut u = g.fill(|x, y| x + 10.0 * y);
        let spec = BcSpec::periodic_x_dirichlet_y(BcValue::Uniform(-1.0), BcValue::Uniform(2.0));
        apply_bc(&g, &mut u, &spec).unwrap();
        for i in 0..9 {
            assert_abs_diff_eq!(u[[i, 0]], -1.0, epsilon = 0.0);
            assert_abs_diff_eq!(u[[i, 6]], 2.0, epsilon = 0.0);
        }
        for j in 0..7 {
            assert_abs_diff_eq!(u[[0, j]], u[[8, j]], epsilon = 0.0);
        }
    }

    #[test]
    fn apply_bc_zero_dirichlet_everywhere() {
        let g = Grid2D::new(
            7,
            7,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let mut u = g.fill(|x, y| 1.0 + x * y);
        apply_bc(&g, &mut u, &BcSpec::all_dirichlet(0.0)).unwrap();
        for i in 0..7 {
            assert_abs_diff_eq!(u[[i, 0]], 0.0, epsilon = 0.0);
            assert_abs_diff_eq!(u[[i, 6]], 0.0, epsilon = 0.0);
            assert_abs_diff_eq!(u[[0, i]], 0.0, epsilon = 0.0);
            assert_abs_diff_eq!(u[[6, i]], 0.0, epsilon = 0.0);
        }
    }

    #[test]
    fn apply_bc_neumann_second_order() {
        // interior linear in x: zero-gradient extrapolation must return the
        // exact linear edge value
        let g = Grid2D::new(
            9,
            1,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Neumann),
        )
        .unwrap();
        let mut u = g.fill(|x, _| 3.0 - 0.0 * x);
        // perturb edges, then restore them through the bc
        u[[0, 0]] = 99.0;
        u[[8, 0]] = -7.0;
        apply_bc(&g, &mut u, &BcSpec::all_neumann(0.0)).unwrap();
        assert_abs_diff_eq!(u[[0, 0]], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u[[8, 0]], 3.0, epsilon = 1e-12);

        // quadratic with known edge slope: u = x^2 has du/dx = 0 at x=0,
        // so the zero-gradient extrapolation reproduces u(0)=0 exactly.
        let mut q = g.fill(|x, _| x * x);
        q[[0, 0]] = 5.0;
        apply_bc(&g, &mut q, &BcSpec::all_neumann(0.0)).unwrap();
        assert_abs_diff_eq!(q[[0, 0]], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn apply_bc_rejects_kind_mismatch_and_bad_corners() {
        let g = Grid2D::new(
            7,
            7,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let mut u = g.zeros();
        assert!(apply_bc(&g, &mut u, &BcSpec::all_neumann(0.0)).is_err());

        let bad = BcSpec {
            x_lo: EdgeBc::Dirichlet(BcValue::Uniform(1.0)),
            x_hi: EdgeBc::Dirichlet(BcValue::Uniform(1.0)),
            y_lo: EdgeBc::Dirichlet(BcValue::Uniform(0.0)),
            y_hi: EdgeBc::Dirichlet(BcValue::Uniform(0.0)),
        };
        assert!(apply_bc(&g, &mut u, &bad).is_err());
    }

    #[test]
    fn central_derivatives() {
        let g = Grid2D::new(
            33,
            17,
            [0.0, 2.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        let u = g.fill(|x, y| x * x + 3.0 * y * y);
        let dx = ddx_central(&g, &u).unwrap();
        let dy = ddy_central(&g, &u).unwrap();
        for i in 0..33 {
            for j in 0..17 {
                assert_abs_diff_eq!(dx[[i, j]], 2.0 * g.x(i), epsilon = 1e-10);
                assert_abs_diff_eq!(dy[[i, j]], 6.0 * g.y(j), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn one_sided_wall_operators_exact_on_polynomials() {
        let g = Grid2D::new(
            5,
            21,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::all(BcKind::Dirichlet),
        )
        .unwrap();
        // cubic in y: second derivative formula must be exact
        let u = g.fill(|_, y| y * y / 2.0 - y * y * y / 3.0);
        let low = d2dy2_one_sided(&g, &u, false, 2);
        let high = d2dy2_one_sided(&g, &u, true, 2);
        assert_abs_diff_eq!(low, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(high, -1.0, epsilon = 1e-9);

        // quadratic in y: first derivative formula exact
        let v = g.fill(|_, y| y - y * y);
        assert_abs_diff_eq!(ddy_one_sided(&g, &v, false, 1), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(ddy_one_sided(&g, &v, true, 1), -1.0, epsilon = 1e-10);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid2D::new(4, 5, [0.0, 1.0], [0.0, 1.0], EdgeKinds::all(BcKind::Dirichlet)).is_err());
        assert!(Grid2D::new(5, 5, [1.0, 0.0], [0.0, 1.0], EdgeKinds::all(BcKind::Dirichlet)).is_err());
        let mixed = EdgeKinds {
            x_lo: BcKind::Periodic,
            x_hi: BcKind::Dirichlet,
            y_lo: BcKind::Dirichlet,
            y_hi: BcKind::Dirichlet,
        };
        assert!(Grid2D::new(5, 5, [0.0, 1.0], [0.0, 1.0], mixed).is_err());
    }
}
