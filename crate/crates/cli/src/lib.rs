//! Experiment driver library behind the `fadr` binary: configuration
//! loading, the four run modes, convergence-slope fitting, and
//! deterministic CSV/manifest output.

pub mod config;
pub mod output;
pub mod runner;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Numerics(#[from] fadr_core::Error),
}

/// Least-squares slope of `log(error)` against `log(dt)`.
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Ladder points dropped because their error was not positive.
    pub excluded: usize,
}

/// Fit the convergence order from `(dt, error)` ladder points. Points with
/// non-positive error are excluded (they carry a warning in the count);
/// fewer than three usable points is an error.
pub fn fit_convergence_slope(points: &[(f64, f64)]) -> Result<SlopeFit, CliError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(dt, err)| dt > 0.0 && err > 0.0)
        .collect();
    let excluded = points.len() - usable.len();
    if usable.len() < 3 {
        return Err(CliError::Config(format!(
            "slope fit needs at least 3 positive ladder points, got {}",
            usable.len()
        )));
    }
    let n = usable.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(dt, err) in &usable {
        let x = dt.ln();
        let y = err.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return Err(CliError::Config("degenerate ladder: all dt equal".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok(SlopeFit {
        slope,
        intercept,
        excluded,
    })
}
