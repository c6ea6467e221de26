//! Von Neumann analysis of the 1D linear θ-scheme: amplification-factor
//! roots, phase-speed error, group-velocity ratio, and round-off amplitude
//! sequences, sampled over the `(N_c, kh)` plane.
//!
//! With the Fourier symbol coefficients
//!
//! ```text
//! C0 = 1 + 2 Pe th G2a (1 - cos kh)                                (= mu1)
//! C1 = -1 + q Nc G2a (1 - 4/3 cos kh + 1/3 cos 2kh)
//!      + 2 Pe (1-th) G2a (1 - cos kh) - Da Nc G2a
//!      + i Nc G2a (sin kh + 2/3 q sin kh - q/3 sin 2kh)            (= -mu2)
//! ```
//!
//! (`G2a = Gamma(2-alpha)`, `r_j = j^(1-alpha) - (j-1)^(1-alpha)`), the
//! amplification factor is the root, continuously connected to `G = 1` at
//! `kh -> 0`, of the frozen-memory polynomial of order `n`
//!
//! ```text
//! C0 G^n + C1 G^(n-1) + sum_{j=2}^n r_j (G^(n-j+1) - G^(n-j)) = 0.
//! ```
//!
//! The phase diagnostics compare against the fractional symbol
//! `X = Da Nc - Pe (kh)^2 - i Nc kh` through the principal branch of
//! `X^(1/alpha)`:
//!
//! ```text
//! beta    = arg G
//! c_ratio = i beta / X^(1/alpha),        delta_c = |1 - c_ratio|
//! W       = i X^(1/alpha) = rhat e^(i(phi + pi/2)),  phi in (-pi, pi]
//! Vg      = -alpha (dbeta/dkh)
//!           / ( rhat^(1-alpha) (Nc cos((1-alpha)phi)
//!                               + 2 kh Pe sin((1-alpha)phi)) )
//! ```
//!
//! with `dbeta/dkh` by a central difference of the tracked root's phase
//! (step 1e-4, unwrapped before differencing). All trigonometric inputs are
//! reduced modulo `2 pi`, so every diagnostic is invariant under
//! `kh -> kh + 2 pi`.

mod roots;

pub use roots::{polynomial_roots, polynomial_roots_seeded};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ml_special::gamma_fn;
use crate::{Error, Result};

/// Inclusive sampling interval.
#[derive(Debug, Clone, Copy)]
pub struct RangeSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|k| self.start + (self.end - self.start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Parameters of one spectral scan.
#[derive(Debug, Clone)]
pub struct SpectralParams {
    pub alpha: f64,
    pub theta: f64,
    pub pe: f64,
    pub da: f64,
    /// Upwind blend; 0.5 in the interior scheme.
    pub q: f64,
    /// Order of the frozen-memory polynomial.
    pub n_poly: usize,
    pub kh_range: RangeSpec,
    pub nc_range: RangeSpec,
}

impl SpectralParams {
    pub fn new(alpha: f64, theta: f64, pe: f64, da: f64) -> Result<Self> {
        let p = Self {
            alpha,
            theta,
            pe,
            da,
            q: 0.5,
            n_poly: 75,
            kh_range: RangeSpec::new(0.05, std::f64::consts::PI, 24),
            nc_range: RangeSpec::new(0.02, 0.5, 16),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Config(format!("theta must lie in [0, 1], got {}", self.theta)));
        }
        if self.q != 0.0 && self.q != 0.5 {
            return Err(Error::Config(format!("q must be 0 or 0.5, got {}", self.q)));
        }
        if self.n_poly < 2 {
            return Err(Error::Config("polynomial order must be at least 2".into()));
        }
        if self.pe < 0.0 {
            return Err(Error::Config(format!("Pe must be >= 0, got {}", self.pe)));
        }
        Ok(())
    }

    fn g2a(&self) -> f64 {
        gamma_fn(2.0 - self.alpha).expect("alpha validated")
    }
}

fn wrap_2pi(kh: f64) -> f64 {
    kh.rem_euclid(2.0 * std::f64::consts::PI)
}

/// L1 weight `r_j = j^(1-alpha) - (j-1)^(1-alpha)` in the one-based
/// indexing the recursion uses (`r_1 = 1`).
fn rj(alpha: f64, j: usize) -> f64 {
    let e = 1.0 - alpha;
    if j == 1 {
        1.0
    } else {
        let jm = (j - 1) as f64;
        jm.powf(e) * (e * (1.0 / jm).ln_1p()).exp_m1()
    }
}

/// `(C0, C1)` of the amplification polynomial; `C0` is real by
/// construction.
pub fn coefficients(p: &SpectralParams, kh: f64, nc: f64) -> (f64, Complex64) {
    let kh = wrap_2pi(kh);
    let g2a = p.g2a();
    let c0 = 1.0 + 2.0 * p.pe * p.theta * g2a * (1.0 - kh.cos());
    let re = -1.0
        + p.q * nc * g2a * (1.0 - 4.0 / 3.0 * kh.cos() + (2.0 * kh).cos() / 3.0)
        + 2.0 * p.pe * (1.0 - p.theta) * g2a * (1.0 - kh.cos())
        - p.da * nc * g2a;
    let im = nc * g2a * (kh.sin() + 2.0 / 3.0 * p.q * kh.sin() - p.q / 3.0 * (2.0 * kh).sin());
    (c0, Complex64::new(re, im))
}

/// Round-off multipliers `(mu1, mu2)`; `mu1 = C0` and `mu2 = -C1`.
pub fn multipliers(p: &SpectralParams, kh: f64, nc: f64) -> (f64, Complex64) {
    let kh = wrap_2pi(kh);
    let g2a = p.g2a();
    let mu1 = 1.0 + 2.0 * p.pe * p.theta * g2a * (1.0 - kh.cos());
    let phase1 = Complex64::from_polar(1.0, -kh);
    let phase2 = Complex64::from_polar(1.0, -2.0 * kh);
    let bracket = Complex64::new(
        nc * p.q * (1.0 - 2.0 / 3.0 * kh.cos())
            + 2.0 * p.pe * (1.0 - p.theta) * (1.0 - kh.cos())
            - p.da * nc,
        nc * kh.sin(),
    ) - nc * p.q / 3.0 * (2.0 * phase1 - phase2);
    let mu2 = Complex64::new(1.0, 0.0) - bracket * g2a;
    (mu1, mu2)
}

/// Coefficient vector of the amplification polynomial, constant term first.
pub fn amplification_polynomial(p: &SpectralParams, kh: f64, nc: f64) -> Vec<Complex64> {
    let n = p.n_poly;
    let (c0, c1) = coefficients(p, kh, nc);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(c0, 0.0);
    coeffs[n - 1] = c1 + rj(p.alpha, 2);
    for m in 1..n - 1 {
        coeffs[m] = Complex64::new(rj(p.alpha, n - m + 1) - rj(p.alpha, n - m), 0.0);
    }
    coeffs[0] = Complex64::new(-rj(p.alpha, n), 0.0);
    coeffs
}

/// All roots plus the selected (physical) amplification factor.
#[derive(Debug, Clone)]
pub struct AmpRoots {
    pub roots: Vec<Complex64>,
    pub selected: Complex64,
}

const RAMP_START: f64 = 1e-3;
const RAMP_STEPS: usize = 32;

fn nearest(roots: &[Complex64], target: Complex64) -> Complex64 {
    *roots
        .iter()
        .min_by(|a, b| {
            let da = (*a - target).norm();
            let db = (*b - target).norm();
            da.partial_cmp(&db).unwrap()
        })
        .expect("nonempty root set")
}

/// Root selection by continuation: walk `kh` up from ~0, where the
/// physical root is `G = 1`, tracking the nearest root at each step.
struct Tracker {
    seed: Option<Vec<Complex64>>,
    selected: Complex64,
}

impl Tracker {
    fn start() -> Self {
        Self {
            seed: None,
            selected: Complex64::new(1.0, 0.0),
        }
    }

    fn step(&mut self, p: &SpectralParams, kh: f64, nc: f64) -> Result<Vec<Complex64>> {
        let coeffs = amplification_polynomial(p, kh, nc);
        let roots = polynomial_roots_seeded(&coeffs, self.seed.as_deref())?;
        self.selected = nearest(&roots, self.selected);
        if roots.len() == p.n_poly {
            self.seed = Some(roots.clone());
        } else {
            self.seed = None; // deflation changed the degree; reseed fresh
        }
        Ok(roots)
    }
}

fn ramp_values(to: f64) -> Vec<f64> {
    if to <= RAMP_START {
        return vec![to];
    }
    (0..=RAMP_STEPS)
        .map(|k| RAMP_START + (to - RAMP_START) * k as f64 / RAMP_STEPS as f64)
        .collect()
}

/// All `n_poly` roots at `(kh, Nc)` and the root continuously connected to
/// `G = 1` as `kh -> 0`.
pub fn amplification_roots(p: &SpectralParams, kh: f64, nc: f64) -> Result<AmpRoots> {
    p.validate()?;
    let kh = wrap_2pi(kh);
    let mut tracker = Tracker::start();
    let mut roots = Vec::new();
    for k in ramp_values(kh) {
        roots = tracker.step(p, k, nc)?;
    }
    Ok(AmpRoots {
        roots,
        selected: tracker.selected,
    })
}

/// Phase diagnostics of a selected amplification factor.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSpeed {
    pub beta: f64,
    pub c_ratio: Complex64,
    pub delta_c: f64,
}

/// `beta = arg G`, the phase-speed ratio and its absolute error. Singular
/// at `kh = 0`.
pub fn phase_speed_ratio(p: &SpectralParams, kh: f64, nc: f64, g: Complex64) -> Result<PhaseSpeed> {
    let kh = wrap_2pi(kh);
    if kh == 0.0 {
        return Err(Error::Domain("phase-speed ratio is singular at kh = 0".into()));
    }
    let beta = g.im.atan2(g.re);
    let x = exact_symbol(p, kh, nc);
    let x_pow = x.powf(1.0 / p.alpha);
    let c_ratio = Complex64::new(0.0, beta) / x_pow;
    Ok(PhaseSpeed {
        beta,
        c_ratio,
        delta_c: (Complex64::new(1.0, 0.0) - c_ratio).norm(),
    })
}

fn exact_symbol(p: &SpectralParams, kh: f64, nc: f64) -> Complex64 {
    Complex64::new(p.da * nc - p.pe * kh * kh, -nc * kh)
}

fn unwrap_toward(b: f64, reference: f64) -> f64 {
    let mut b = b;
    while b - reference > std::f64::consts::PI {
        b -= 2.0 * std::f64::consts::PI;
    }
    while b - reference < -std::f64::consts::PI {
        b += 2.0 * std::f64::consts::PI;
    }
    b
}

const DKH: f64 = 1e-4;

/// Group-velocity ratio at `(kh, Nc)`; the phase slope comes from a
/// central difference of the tracked root's phase.
pub fn group_velocity_ratio(p: &SpectralParams, kh: f64, nc: f64) -> Result<f64> {
    p.validate()?;
    let kh = wrap_2pi(kh);
    if kh <= DKH {
        return Err(Error::Domain(format!(
            "kh = {kh} leaves no room for the centred phase difference"
        )));
    }
    let mut tracker = Tracker::start();
    for k in ramp_values(kh) {
        tracker.step(p, k, nc)?;
    }
    let g0 = tracker.selected;
    let seed = tracker.seed.clone();
    let local = |at: f64| -> Result<Complex64> {
        let coeffs = amplification_polynomial(p, at, nc);
        let roots = polynomial_roots_seeded(&coeffs, seed.as_deref())?;
        Ok(nearest(&roots, g0))
    };
    let gm = local(kh - DKH)?;
    let gp = local(kh + DKH)?;
    vg_from_phases(p, kh, nc, gm, g0, gp)
}

fn vg_from_phases(
    p: &SpectralParams,
    kh: f64,
    nc: f64,
    gm: Complex64,
    g0: Complex64,
    gp: Complex64,
) -> Result<f64> {
    let b0 = g0.im.atan2(g0.re);
    let bm = unwrap_toward(gm.im.atan2(gm.re), b0);
    let bp = unwrap_toward(gp.im.atan2(gp.re), b0);
    if (bp - bm).abs() > std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "phase branch discontinuity across the difference stencil at kh = {kh}"
        )));
    }
    let dbeta = (bp - bm) / (2.0 * DKH);
    let w = Complex64::new(0.0, 1.0) * exact_symbol(p, kh, nc).powf(1.0 / p.alpha);
    let rhat = w.norm();
    if rhat == 0.0 {
        return Err(Error::Domain("exact frequency vanishes; ratio undefined".into()));
    }
    let mut phi = w.im.atan2(w.re) - std::f64::consts::FRAC_PI_2;
    while phi <= -std::f64::consts::PI {
        phi += 2.0 * std::f64::consts::PI;
    }
    while phi > std::f64::consts::PI {
        phi -= 2.0 * std::f64::consts::PI;
    }
    let denom = rhat.powf(1.0 - p.alpha)
        * (nc * ((1.0 - p.alpha) * phi).cos() + 2.0 * kh * p.pe * ((1.0 - p.alpha) * phi).sin());
    if denom == 0.0 {
        return Err(Error::Domain("degenerate group-velocity denominator".into()));
    }
    Ok(-p.alpha * dbeta / denom)
}

/// One `(kh, Nc)` sample of the scan.
#[derive(Debug, Clone, Copy)]
pub struct DispersionPoint {
    pub kh: f64,
    pub nc: f64,
    pub g_num: Complex64,
    pub beta: f64,
    pub c_ratio: Complex64,
    pub delta_c: f64,
    pub vg_ratio: f64,
    /// Real polynomial leading coefficient (equals `mu1`).
    pub c0: f64,
    pub c1: Complex64,
    pub mu1: f64,
    pub mu2: Complex64,
    /// `vg_ratio > 0` and `delta_c <= 0.1`.
    pub favorable: bool,
}

/// A point the scan could not evaluate, with the reason.
#[derive(Debug, Clone)]
pub struct PointFailure {
    pub kh: f64,
    pub nc: f64,
    pub reason: String,
}

/// Scan output table.
#[derive(Debug, Clone)]
pub struct ContourTable {
    pub points: Vec<DispersionPoint>,
    pub failures: Vec<PointFailure>,
}

pub const FAVORABLE_DELTA_C: f64 = 0.1;

/// Dense `(Nc, kh)` scan. Rows (fixed `Nc`) are independent and evaluated
/// in parallel; within a row the root selection walks `kh` upward so the
/// continuation stays on the physical branch.
pub fn contour_scan(p: &SpectralParams) -> Result<ContourTable> {
    p.validate()?;
    let khs = p.kh_range.values();
    let ncs = p.nc_range.values();
    if khs.is_empty() || ncs.is_empty() {
        return Ok(ContourTable {
            points: Vec::new(),
            failures: Vec::new(),
        });
    }
    let rows: Vec<(Vec<DispersionPoint>, Vec<PointFailure>)> = ncs
        .par_iter()
        .map(|&nc| scan_row(p, &khs, nc))
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (mut pts, mut fails) in rows {
        points.append(&mut pts);
        failures.append(&mut fails);
    }
    Ok(ContourTable { points, failures })
}

fn scan_row(
    p: &SpectralParams,
    khs: &[f64],
    nc: f64,
) -> Result<(Vec<DispersionPoint>, Vec<PointFailure>)> {
    let mut points = Vec::new();
    let mut failures = Vec::new();
    let mut tracker = Tracker::start();
    let first = wrap_2pi(khs[0]);
    if first > RAMP_START {
        for k in ramp_values(first).iter().take(RAMP_STEPS) {
            tracker.step(p, *k, nc)?;
        }
    }
    for &kh_raw in khs {
        let kh = wrap_2pi(kh_raw);
        tracker.step(p, kh, nc)?;
        let g0 = tracker.selected;
        let (c0, c1) = coefficients(p, kh, nc);
        let (mu1, mu2) = multipliers(p, kh, nc);
        let phase = match phase_speed_ratio(p, kh, nc, g0) {
            Ok(ps) => ps,
            Err(e) => {
                failures.push(PointFailure {
                    kh: kh_raw,
                    nc,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let vg = if kh <= DKH {
            Err(Error::Domain("kh too small for the phase difference".into()))
        } else {
            let seed = tracker.seed.clone();
            let local = |at: f64| -> Result<Complex64> {
                let coeffs = amplification_polynomial(p, at, nc);
                let roots = polynomial_roots_seeded(&coeffs, seed.as_deref())?;
                Ok(nearest(&roots, g0))
            };
            local(kh - DKH).and_then(|gm| {
                local(kh + DKH).and_then(|gp| vg_from_phases(p, kh, nc, gm, g0, gp))
            })
        };
        match vg {
            Ok(vg_ratio) => {
                let favorable = vg_ratio > 0.0 && phase.delta_c <= FAVORABLE_DELTA_C;
                points.push(DispersionPoint {
                    kh: kh_raw,
                    nc,
                    g_num: g0,
                    beta: phase.beta,
                    c_ratio: phase.c_ratio,
                    delta_c: phase.delta_c,
                    vg_ratio,
                    c0,
                    c1,
                    mu1,
                    mu2,
                    favorable,
                });
            }
            Err(e) => failures.push(PointFailure {
                kh: kh_raw,
                nc,
                reason: e.to_string(),
            }),
        }
    }
    Ok((points, failures))
}

/// Round-off amplitude sequence of the scheme's memory recursion,
/// `xi_0 = 1`:
///
/// ```text
/// mu1 xi_n = | mu2 xi_{n-1} - sum_{j=2}^n r_j (xi_{n-j+1} - xi_{n-j}) |
/// ```
///
/// (magnitude taken per step; `mu1` is real and positive). Bounded,
/// non-increasing sequences certify asymptotic stability of the sampled
/// mode; growth exhibits the conditional-stability boundary.
pub fn xi_recursion(p: &SpectralParams, kh: f64, nc: f64, n_steps: usize) -> Vec<f64> {
    let (mu1, mu2) = multipliers(p, kh, nc);
    let mut xi = Vec::with_capacity(n_steps + 1);
    xi.push(1.0);
    for n in 1..=n_steps {
        let mut mem = 0.0;
        for j in 2..=n {
            mem += rj(p.alpha, j) * (xi[n - j + 1] - xi[n - j]);
        }
        let val = (mu2 * xi[n - 1] - mem).norm() / mu1;
        xi.push(val);
    }
    xi
}

/// Header matching [`DispersionPoint::csv_row`].
pub fn csv_header() -> &'static str {
    "alpha,theta,Pe,Da,Nc,kh,ReG,ImG,beta,delta_c,Vg_ratio,favorable"
}

impl DispersionPoint {
    /// One CSV row with 17 significant digits per number.
    pub fn csv_row(&self, p: &SpectralParams) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            p.alpha,
            p.theta,
            p.pe,
            p.da,
            self.nc,
            self.kh,
            self.g_num.re,
            self.g_num.im,
            self.beta,
            self.delta_c,
            self.vg_ratio,
            if self.favorable { 1 } else { 0 }
        )
    }
}
