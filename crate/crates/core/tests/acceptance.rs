//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `--nocapture`). Tolerances are pinned in the assertions.
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

use std::time::Instant;

use fadr_core::caputo::{caputo_apply, L1History, L1Weights};
use fadr_core::channel::{channel_grid, ChannelBcs, ChannelParams, ChannelSchedule, ChannelSim};
use fadr_core::dispersion::{
    amplification_polynomial, amplification_roots, group_velocity_ratio, multipliers,
    polynomial_roots, xi_recursion, SpectralParams,
};
use fadr_core::grid::{BcKind, EdgeKinds, Field, Grid2D};
use fadr_core::linsolve::{gauss_seidel, residual, BlockDiagSpec, GSConfig};
use fadr_core::ml_special::{gamma_fn, mittag_leffler, MLParams};
use fadr_core::theta_fadr::{run_validation_case, ValidationBc};
use num_complex::Complex64;

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(dt, err) in points {
        let x = dt.ln();
        let y = err.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn ladder(kind: ValidationBc, alpha: f64) -> Vec<(f64, f64)> {
    (4..=9)
        .map(|k| {
            let dt = 0.35 / f64::from(1u32 << k);
            let r = run_validation_case(kind, alpha, 1.0, dt, 51, 0.35).expect("ladder run");
            (dt, r.rel_l2_error)
        })
        .collect()
}

/// Criterion 1: Dirichlet validation at alpha = 1 converges with slope
/// 1.0 +/- 0.15 on the 51x51 grid, T = 0.35, dt = 0.35/2^k for k = 4..9,
/// inside the runtime budget.
#[test]
fn acceptance_01_dirichlet_first_order_at_integer_alpha() {
    let start = Instant::now();
    let points = ladder(ValidationBc::Dirichlet, 1.0);
    let elapsed = start.elapsed().as_secs_f64();
    let slope = fit_slope(&points);
    assert!(
        (slope - 1.0).abs() <= 0.15,
        "criterion 1: slope {slope} outside 1.0 +/- 0.15; ladder {points:?}"
    );
    assert!(elapsed < 60.0, "criterion 1: ladder took {elapsed:.1} s (budget 60 s)");
    println!("ACCEPTANCE 1 (dirichlet alpha=1 slope {slope:.4}, {elapsed:.1} s): PASS");
}

/// Criterion 2, part 1: the Neumann case at alpha = 1 is also first order.
#[test]
fn acceptance_02a_neumann_first_order_at_integer_alpha() {
    let points = ladder(ValidationBc::Neumann, 1.0);
    let slope = fit_slope(&points);
    assert!(
        (slope - 1.0).abs() <= 0.15,
        "criterion 2: Neumann slope {slope} outside 1.0 +/- 0.15; ladder {points:?}"
    );
    println!("ACCEPTANCE 2a (neumann alpha=1 slope {slope:.4}): PASS");
}

/// Criterion 2, part 2: the stated window (0.05, 0.95) for the fitted
/// slope at fractional orders, for both boundary kinds.
///
/// KNOWN RED at alpha in {0.67, 0.9}: on a uniform ladder at fixed final
/// time the error of this scheme is first-order dominated
/// (~ C1 t^(alpha-1) dt + C2 dt^(2-alpha)), so the fitted slopes come out
/// at ~0.95 (alpha = 0.67) and ~0.98 (alpha = 0.9) — sub-linear, but above
/// the stated window. Verified independently with a direct-solver
/// prototype that agrees with these runs to four digits; see the
/// sub-linearity companion test below for the property that does hold.
fn sublinear_window_case(kind: ValidationBc, alpha: f64, label: &str) {
    let points = ladder(kind, alpha);
    let slope = fit_slope(&points);
    assert!(
        slope > 0.05 && slope < 0.95,
        "criterion 2: {label} alpha={alpha} slope {slope} outside (0.05, 0.95); ladder {points:?}"
    );
    println!("ACCEPTANCE 2 ({label} alpha={alpha} slope {slope:.4} in window): PASS");
}

#[test]
fn acceptance_02b_window_dirichlet_alpha_050() {
    sublinear_window_case(ValidationBc::Dirichlet, 0.5, "dirichlet");
}

#[test]
fn acceptance_02b_window_dirichlet_alpha_067() {
    sublinear_window_case(ValidationBc::Dirichlet, 0.67, "dirichlet");
}

#[test]
fn acceptance_02b_window_dirichlet_alpha_090() {
    sublinear_window_case(ValidationBc::Dirichlet, 0.9, "dirichlet");
}

#[test]
fn acceptance_02c_window_neumann_alpha_050() {
    sublinear_window_case(ValidationBc::Neumann, 0.5, "neumann");
}

#[test]
fn acceptance_02c_window_neumann_alpha_067() {
    sublinear_window_case(ValidationBc::Neumann, 0.67, "neumann");
}

#[test]
fn acceptance_02c_window_neumann_alpha_090() {
    sublinear_window_case(ValidationBc::Neumann, 0.9, "neumann");
}

/// Criterion 2, substance check: every fractional order converges strictly
/// sub-linearly (slope < 1) and visibly below the alpha = 1 slope, with
/// monotone error decay along the ladder (one non-monotone pair allowed).
#[test]
fn acceptance_02d_sublinearity_holds() {
    let reference = fit_slope(&ladder(ValidationBc::Dirichlet, 1.0));
    for kind in [ValidationBc::Dirichlet, ValidationBc::Neumann] {
        for alpha in [0.5, 0.67, 0.9] {
            let points = ladder(kind, alpha);
            let slope = fit_slope(&points);
            assert!(
                slope < 1.0,
                "sub-linearity violated: alpha={alpha} slope {slope}"
            );
            let mut non_monotone = 0;
            for w in points.windows(2) {
                // ladder is ordered by decreasing dt
                if w[1].1 >= w[0].1 {
                    non_monotone += 1;
                }
            }
            assert!(
                non_monotone <= 1,
                "error decay not monotone for alpha={alpha}: {points:?}"
            );
            if alpha <= 0.67 {
                assert!(
                    slope < reference,
                    "alpha={alpha} slope {slope} not below the alpha=1 slope {reference}"
                );
            }
        }
    }
    println!("ACCEPTANCE 2d (sub-linear orders confirmed): PASS");
}

/// Criterion 3: Mittag-Leffler against exp on [-5, 5] and against the
/// 50-digit series value of E_{1/2}(-1).
#[test]
fn acceptance_03_mittag_leffler_oracle() {
    let p1 = MLParams::new(1.0).unwrap();
    let mut z = -5.0f64;
    while z <= 5.0 + 1e-12 {
        let ml = mittag_leffler(z, &p1).unwrap();
        assert!(
            (ml - z.exp()).abs() <= 1e-10,
            "criterion 3: |E_1({z}) - exp({z})| = {}",
            (ml - z.exp()).abs()
        );
        z += 0.1;
    }
    let p_half = MLParams::new(0.5).unwrap();
    let reference = 0.42758357615580700441075034449051518082015950316425;
    let got = mittag_leffler(-1.0, &p_half).unwrap();
    assert!(
        (got - reference).abs() <= 1e-10,
        "criterion 3: E_0.5(-1) = {got}, reference {reference}"
    );
    println!("ACCEPTANCE 3 (mittag-leffler oracle): PASS");
}

/// Criterion 4: discrete Caputo of a linear field is exact (1e-10) on
/// uniform and on step-doubling grids for alpha in {0.5, 0.67, 0.9}.
#[test]
fn acceptance_04_l1_linear_exactness() {
    let (a, b) = (0.7, -2.3);
    let scalar = |v: f64| Field::from_elem((1, 1), v);
    // uniform grid and the doubling schedule produced by the controller
    let uniform: Vec<f64> = (0..=40).map(|k| k as f64 * 0.01).collect();
    let mut doubling = vec![0.0f64];
    let mut dt = 1e-3f64;
    for _ in 0..25 {
        doubling.push(doubling.last().unwrap() + dt);
        dt = (dt * 2.0).min(1.6e-2);
    }
    for alpha in [0.5, 0.67, 0.9] {
        for grid in [&uniform, &doubling] {
            for n in 1..grid.len() {
                let stamps = &grid[..=n];
                let w = L1Weights::nonuniform(alpha, stamps).unwrap();
                let mut hist = L1History::new();
                for &t in &stamps[..n] {
                    hist.push(t, scalar(a + b * t)).unwrap();
                }
                let d = caputo_apply(&hist, &w, &scalar(a + b * stamps[n])).unwrap();
                let t = stamps[n];
                let exact = b * t.powf(1.0 - alpha) / gamma_fn(2.0 - alpha).unwrap();
                assert!(
                    (d[[0, 0]] - exact).abs() <= 1e-10,
                    "criterion 4: alpha={alpha} t={t}: {} vs {exact}",
                    d[[0, 0]]
                );
            }
        }
    }
    println!("ACCEPTANCE 4 (L1 linear exactness): PASS");
}

// dense direct solve used as the independent oracle for criterion 5
mod dense {
    use super::*;

    pub fn solve(spec: &BlockDiagSpec, rhs: &Field, boundary: &Field) -> Field {
        let (nx, ny) = spec.shape();
        let bc = spec.bc();
        let mut map = Vec::new();
        let mut index = std::collections::HashMap::new();
        for j in 0..ny {
            for i in 0..nx {
                if is_unknown(spec, i, j) {
                    index.insert((i, j), map.len());
                    map.push((i, j));
                }
            }
        }
        let n = map.len();
        let mut a = vec![0.0f64; n * n];
        let mut b: Vec<f64> = map.iter().map(|&(i, j)| rhs[[i, j]]).collect();
        for (row, &(i, j)) in map.iter().enumerate() {
            a[row * n + row] = spec.diag();
            let mut couple = |ii: isize, jj: isize, coef: f64| {
                let (mut ii, mut jj) = (ii, jj);
                if bc.x_lo == BcKind::Periodic {
                    ii = ii.rem_euclid((nx - 1) as isize);
                } else {
                    if ii < 0 {
                        ii = 1;
                    }
                    if ii > (nx - 1) as isize {
                        ii = (nx - 2) as isize;
                    }
                }
                if ny > 1 {
                    if bc.y_lo == BcKind::Periodic {
                        jj = jj.rem_euclid((ny - 1) as isize);
                    } else {
                        if jj < 0 {
                            jj = 1;
                        }
                        if jj > (ny - 1) as isize {
                            jj = (ny - 2) as isize;
                        }
                    }
                }
                let key = (ii as usize, jj as usize);
                if let Some(&col) = index.get(&key) {
                    a[row * n + col] += coef;
                } else {
                    b[row] -= coef * boundary[[key.0, key.1]];
                }
            };
            couple(i as isize - 1, j as isize, spec.r1());
            couple(i as isize + 1, j as isize, spec.r1());
            if ny > 1 {
                couple(i as isize, j as isize - 1, spec.r2());
                couple(i as isize, j as isize + 1, spec.r2());
            }
        }
        // Gaussian elimination with partial pivoting
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                }
                b.swap(col, piv);
            }
            let pv = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / pv;
                if f != 0.0 {
                    for c in col..n {
                        a[r * n + c] -= f * a[col * n + c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        for row in (0..n).rev() {
            let mut acc = b[row];
            for c in row + 1..n {
                acc -= a[row * n + c] * b[c];
            }
            b[row] = acc / a[row * n + row];
        }
        let mut out = boundary.clone();
        for (row, &(i, j)) in map.iter().enumerate() {
            out[[i, j]] = b[row];
        }
        if bc.x_lo == BcKind::Periodic {
            for j in 0..ny {
                out[[nx - 1, j]] = out[[0, j]];
            }
        }
        out
    }

    pub fn is_unknown(spec: &BlockDiagSpec, i: usize, j: usize) -> bool {
        let (nx, ny) = spec.shape();
        let bc = spec.bc();
        if bc.x_lo == BcKind::Periodic {
            if i == nx - 1 {
                return false;
            }
        } else {
            if i == 0 && bc.x_lo == BcKind::Dirichlet {
                return false;
            }
            if i == nx - 1 && bc.x_hi == BcKind::Dirichlet {
                return false;
            }
        }
        if ny > 1 && bc.y_lo == BcKind::Dirichlet && (j == 0 || j == ny - 1) {
            return false;
        }
        true
    }
}

fn lcg_field(nx: usize, ny: usize, seed: u64) -> Field {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    Field::from_shape_fn((nx, ny), |_| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
    })
}

/// Criterion 5: Gauss-Seidel matches a dense direct solve to 1e-6 relative
/// on 8x8 and 12x12 systems (Poisson and implicit-diffusion coefficients),
/// with a monotone residual trace.
#[test]
fn acceptance_05_gauss_seidel_dense_oracle() {
    for n in [8usize, 12] {
        // plain Dirichlet Poisson
        let g = Grid2D::new(n, n, [0.0, 1.0], [0.0, 1.0], EdgeKinds::all(BcKind::Dirichlet))
            .unwrap();
        let poisson = BlockDiagSpec::poisson(&g).unwrap();
        // periodic-x implicit-diffusion (vorticity-style) coefficients
        let gp = Grid2D::new(
            n + 1,
            n,
            [0.0, 1.0],
            [0.0, 1.0],
            EdgeKinds::periodic_x(BcKind::Dirichlet),
        )
        .unwrap();
        let vorticity = BlockDiagSpec::implicit_diffusion(&gp, 0.3, 40.0).unwrap();

        for (label, grid, spec) in [("poisson", &g, &poisson), ("vorticity", &gp, &vorticity)] {
            let (nx, ny) = spec.shape();
            let mut rhs = lcg_field(nx, ny, 42 + n as u64);
            for j in 0..ny {
                for i in 0..nx {
                    if !dense::is_unknown(spec, i, j) {
                        rhs[[i, j]] = 0.0;
                    }
                }
            }
            let guess = grid.zeros();
            let cfg = GSConfig {
                rel_tol: 1e-10,
                max_iters: 200_000,
            };
            let sol = gauss_seidel(spec, &rhs, &guess, &cfg).unwrap();
            let exact = dense::solve(spec, &rhs, &guess);
            let mut num = 0.0;
            let mut den = 0.0;
            for (x, y) in sol.x.iter().zip(exact.iter()) {
                num += (x - y) * (x - y);
                den += y * y;
            }
            let rel = (num / den).sqrt();
            assert!(rel <= 1e-6, "criterion 5: {label} {n}x{n} rel err {rel}");
            for w in sol.residual_trace.windows(2) {
                assert!(
                    w[1] <= w[0] * (1.0 + 1e-12),
                    "criterion 5: residual rose {} -> {}",
                    w[0],
                    w[1]
                );
            }
            assert!(residual(spec, &sol.x, &rhs) <= 1e-10);
        }
    }
    println!("ACCEPTANCE 5 (gauss-seidel vs dense oracle): PASS");
}

/// Criterion 6: round-off amplitude sequences are non-increasing over 500
/// steps at every sampled (kh, Nc, Pe) point inside the verified
/// (mu1 >= 1, |mu2| <= 1) region for (alpha, theta) in {0.5, 0.9} x
/// {0.5, 1.0} and Da <= 0; one recorded point outside the region grows.
#[test]
fn acceptance_06_asymptotic_stability_suite() {
    let mut tested = 0usize;
    for &(alpha, theta) in &[(0.5, 0.5), (0.5, 1.0), (0.9, 0.5), (0.9, 1.0)] {
        for &da in &[0.0, -0.01] {
            for &nc in &[0.02, 0.05, 0.1] {
                for &pe in &[0.001, 0.01, 0.1] {
                    let p = SpectralParams::new(alpha, theta, pe, da).unwrap();
                    for &kh in &[0.3, 1.0, 2.0, 3.0, std::f64::consts::PI] {
                        let (mu1, mu2) = multipliers(&p, kh, nc);
                        assert!(mu1 >= 1.0);
                        if mu2.norm() <= 1.0 {
                            tested += 1;
                            let xi = xi_recursion(&p, kh, nc, 500);
                            for w in xi.windows(2) {
                                assert!(
                                    w[1] <= w[0] + 1e-12,
                                    "criterion 6: increase at alpha={alpha} theta={theta} da={da} nc={nc} pe={pe} kh={kh}: {} -> {}",
                                    w[0],
                                    w[1]
                                );
                            }
                            assert!(xi[500] <= 1.0 + 1e-12);
                        }
                    }
                }
            }
        }
    }
    assert!(tested > 100, "criterion 6: only {tested} in-region samples");

    // recorded conditional-stability witness: Nc = 1.0 at kh = 2.0 leaves
    // the region (|mu2| ~ 1.25) and the sequence grows
    let p = SpectralParams::new(0.5, 0.5, 0.01, 0.0).unwrap();
    let (_, mu2) = multipliers(&p, 2.0, 1.0);
    assert!(mu2.norm() > 1.0);
    let xi = xi_recursion(&p, 2.0, 1.0, 60);
    let max = xi.iter().fold(0.0f64, |m, &v| m.max(v));
    assert!(max > 1.0, "criterion 6: witness did not grow (max {max})");
    println!("ACCEPTANCE 6 (asymptotic stability, {tested} in-region samples + witness): PASS");
}

/// Criterion 7: dispersion identities — G = 1 root at kh = 0 and Da = 0
/// for 20 seeded parameter draws, the Vieta product check, long-wave
/// group-velocity consistency, and polynomial-order insensitivity at 10
/// long-wave sample points.
#[test]
fn acceptance_07_dispersion_identities() {
    // seeded linear-congruential draws keep the test deterministic
    let mut state = 0xabcdef12345u64;
    let mut next = move |lo: f64, hi: f64| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((state >> 33) as f64 / (1u64 << 31) as f64 / 2.0 + 0.5)
    };
    for _ in 0..20 {
        let p = SpectralParams::new(next(0.1, 1.0), next(0.0, 1.0), next(0.0, 2.0), 0.0).unwrap();
        let nc = next(0.0, 1.5);
        let coeffs = amplification_polynomial(&p, 0.0, nc);
        let mut val = Complex64::new(0.0, 0.0);
        for k in (0..coeffs.len()).rev() {
            val = val * Complex64::new(1.0, 0.0) + coeffs[k];
        }
        assert!(
            val.norm() <= 1e-10,
            "criterion 7: |p(1)| = {} at kh=0, Da=0",
            val.norm()
        );
    }

    // Vieta: product of all roots vs the constant/leading ratio
    let p = SpectralParams::new(0.9, 0.5, 0.01, 0.0).unwrap();
    let coeffs = amplification_polynomial(&p, 0.8, 0.2);
    let roots = polynomial_roots(&coeffs).unwrap();
    let prod = roots.iter().fold(Complex64::new(1.0, 0.0), |a, r| a * r);
    let n = p.n_poly;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let expect = sign * coeffs[0] / coeffs[n];
    let vieta = (prod - expect).norm() / expect.norm();
    assert!(vieta <= 1e-8, "criterion 7: Vieta residual {vieta}");

    // long-wave group-velocity consistency in the integer-order limit,
    // where the scheme's effective symbol and the fractional branch agree
    for alpha in [1.0, 0.999] {
        let p = SpectralParams::new(alpha, 1.0, 0.01, 0.0).unwrap();
        let vg = group_velocity_ratio(&p, 1e-3, 0.1).unwrap();
        assert!(
            (vg - 1.0).abs() <= 0.05,
            "criterion 7: Vg(kh=1e-3, alpha={alpha}) = {vg}"
        );
    }

    // order 75 -> 76 moves the selected root by < 1e-3 relative at ten
    // long-wave sample points
    let mut p75 = SpectralParams::new(0.9, 0.5, 0.001, 0.01).unwrap();
    let mut p76 = p75.clone();
    p75.n_poly = 75;
    p76.n_poly = 76;
    let mut checked = 0;
    for &kh in &[0.1, 0.25, 0.4, 0.6, 0.8] {
        for &nc in &[0.02, 0.05] {
            let a = amplification_roots(&p75, kh, nc).unwrap().selected;
            let b = amplification_roots(&p76, kh, nc).unwrap().selected;
            let rel = (a - b).norm() / a.norm();
            assert!(rel < 1e-3, "criterion 7: kh={kh} nc={nc} rel {rel}");
            checked += 1;
        }
    }
    assert_eq!(checked, 10);
    println!("ACCEPTANCE 7 (dispersion identities): PASS");
}

fn channel_gs() -> GSConfig {
    GSConfig {
        rel_tol: 1e-8,
        max_iters: 600_000,
    }
}

/// Criterion 8: with mu = 0 the 76x51 channel keeps max|W - W_base| below
/// 1e-6 over 200 steps (alpha = 0.5, nu = 0.3, We = 10, Re = 70).
#[test]
fn acceptance_08_channel_steady_state_regression() {
    let grid = channel_grid(76, 51).unwrap();
    let params = ChannelParams::new(70.0, 10.0, 0.3, 0.0, 0.5).unwrap();
    let schedule = ChannelSchedule::standard(200, 0);
    let sim = ChannelSim::new(grid, params, 1.0, ChannelBcs::default(), schedule, channel_gs())
        .unwrap();
    let run = sim.run().unwrap();
    let worst = run
        .diagnostics
        .iter()
        .fold(0.0f64, |m, d| m.max(d.intensity));
    assert!(worst < 1e-6, "criterion 8: max intensity {worst}");
    println!("ACCEPTANCE 8 (channel steady regression, max intensity {worst:.3e}): PASS");
}

fn channel_intensity(alpha: f64, nu: f64, re: f64, n_steps: usize) -> f64 {
    let grid = channel_grid(76, 51).unwrap();
    let params = ChannelParams::new(re, 10.0, nu, 1e-2, alpha).unwrap();
    let schedule = ChannelSchedule::standard(n_steps, 0);
    let sim = ChannelSim::new(grid, params, 1.0, ChannelBcs::default(), schedule, channel_gs())
        .unwrap();
    let run = sim.run().unwrap();
    run.diagnostics.last().unwrap().intensity
}

/// Criterion 9: qualitative orderings of the final structure intensity at
/// matched schedules — (a) low Reynolds beats high Reynolds for each
/// (alpha, nu) pair, (b) the alpha = 0.5 melt beats the alpha = 0.67
/// solution at nu = 0.3, (c) the elastic-dominated nu = 0.3 case beats the
/// viscous-dominated nu = 0.6 case.
#[test]
fn acceptance_09_channel_qualitative_orderings() {
    let steps = 150;
    let i_r05_n03_re70 = channel_intensity(0.5, 0.3, 70.0, steps);
    let i_r05_n03_re1000 = channel_intensity(0.5, 0.3, 1000.0, steps);
    let i_r067_n03_re70 = channel_intensity(0.67, 0.3, 70.0, steps);
    let i_r067_n03_re1000 = channel_intensity(0.67, 0.3, 1000.0, steps);
    let i_r05_n06_re70 = channel_intensity(0.5, 0.6, 70.0, steps);
    let i_r05_n06_re1000 = channel_intensity(0.5, 0.6, 1000.0, steps);

    println!(
        "  intensities: (0.5,0.3): {i_r05_n03_re70:.3e} vs {i_r05_n03_re1000:.3e}; \
         (0.67,0.3): {i_r067_n03_re70:.3e} vs {i_r067_n03_re1000:.3e}; \
         (0.5,0.6): {i_r05_n06_re70:.3e} vs {i_r05_n06_re1000:.3e}"
    );
    // (a) structures wash out at high inertia
    assert!(
        i_r05_n03_re70 > i_r05_n03_re1000,
        "criterion 9a failed at (0.5, 0.3)"
    );
    assert!(
        i_r067_n03_re70 > i_r067_n03_re1000,
        "criterion 9a failed at (0.67, 0.3)"
    );
    assert!(
        i_r05_n06_re70 > i_r05_n06_re1000,
        "criterion 9a failed at (0.5, 0.6)"
    );
    // (b) the melt develops structures at least as strong as the solution
    assert!(
        i_r05_n03_re70 >= i_r067_n03_re70,
        "criterion 9b failed: {i_r05_n03_re70} < {i_r067_n03_re70}"
    );
    // (c) elastic-stress domination beats viscous-stress domination
    assert!(
        i_r05_n03_re70 >= i_r05_n06_re70,
        "criterion 9c failed: {i_r05_n03_re70} < {i_r05_n06_re70}"
    );
    println!("ACCEPTANCE 9 (channel qualitative orderings): PASS");
}
