//! TOML run configuration: one file per experiment, one table per mode.
//! Validation reports offending fields by path.

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Brunner,
    Dispersion,
    Channel,
    Fadr1d,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Mode::Brunner => "brunner",
            Mode::Dispersion => "dispersion",
            Mode::Channel => "channel",
            Mode::Fadr1d => "fadr1d",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    /// Reserved for future stochastic perturbations; unused by the math.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub brunner: Option<BrunnerConfig>,
    #[serde(default)]
    pub dispersion: Option<DispersionConfig>,
    #[serde(default)]
    pub channel: Option<ChannelConfig>,
    #[serde(default)]
    pub fadr1d: Option<Fadr1dConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BrunnerConfig {
    /// "dirichlet" or "neumann".
    pub kind: String,
    pub alpha: f64,
    pub theta: f64,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Ladder exponents k with dt = t_end / 2^k.
    #[serde(default = "default_ladder")]
    pub ladder_exponents: Vec<u32>,
}

fn default_n_points() -> usize {
    51
}
fn default_t_end() -> f64 {
    0.35
}
fn default_ladder() -> Vec<u32> {
    vec![4, 5, 6, 7, 8, 9]
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RangeConfig {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionConfig {
    pub alpha: f64,
    pub theta: f64,
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default = "default_n_poly")]
    pub n_poly: usize,
    pub pe_values: Vec<f64>,
    pub da_values: Vec<f64>,
    pub kh: RangeConfig,
    pub nc: RangeConfig,
}

fn default_q() -> f64 {
    0.5
}
fn default_n_poly() -> usize {
    75
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub alpha: f64,
    pub re: f64,
    #[serde(default = "default_we")]
    pub we: f64,
    pub nu: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default = "default_theta_one")]
    pub theta: f64,
    #[serde(default = "default_nx")]
    pub nx: usize,
    #[serde(default = "default_ny")]
    pub ny: usize,
    pub n_steps: usize,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_true")]
    pub adaptive: bool,
    #[serde(default)]
    pub snapshot_every: usize,
}

fn default_we() -> f64 {
    10.0
}
fn default_mu() -> f64 {
    1e-2
}
fn default_theta_one() -> f64 {
    1.0
}
fn default_nx() -> usize {
    76
}
fn default_ny() -> usize {
    51
}
fn default_dt_min() -> f64 {
    1e-3
}
fn default_dt_max() -> f64 {
    1.6e-2
}
fn default_delta() -> f64 {
    1e-3
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fadr1dConfig {
    pub alpha: f64,
    pub theta: f64,
    pub c: f64,
    pub gamma: f64,
    pub lambda: f64,
    #[serde(default = "default_nx_1d")]
    pub nx: usize,
    #[serde(default = "default_x_end")]
    pub x_end: f64,
    pub dt: f64,
    pub n_steps: usize,
    #[serde(default)]
    pub adaptive: bool,
}

fn default_nx_1d() -> usize {
    65
}
fn default_x_end() -> f64 {
    2.0 * std::f64::consts::PI
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |path: &str, msg: String| Err(CliError::Config(format!("{path}: {msg}")));
        match self.mode {
            Mode::Brunner => {
                let Some(b) = &self.brunner else {
                    return fail("brunner", "missing section for mode = \"brunner\"".into());
                };
                if b.kind != "dirichlet" && b.kind != "neumann" {
                    return fail(
                        "brunner.kind",
                        format!("must be \"dirichlet\" or \"neumann\", got {:?}", b.kind),
                    );
                }
                check_alpha("brunner.alpha", b.alpha)?;
                check_theta("brunner.theta", b.theta)?;
                if b.n_points < 5 {
                    return fail("brunner.n_points", format!("needs at least 5, got {}", b.n_points));
                }
                if !(b.t_end > 0.0) {
                    return fail("brunner.t_end", format!("must be positive, got {}", b.t_end));
                }
                if b.ladder_exponents.is_empty() {
                    return fail("brunner.ladder_exponents", "must not be empty".into());
                }
            }
            Mode::Dispersion => {
                let Some(d) = &self.dispersion else {
                    return fail("dispersion", "missing section for mode = \"dispersion\"".into());
                };
                check_alpha("dispersion.alpha", d.alpha)?;
                check_theta("dispersion.theta", d.theta)?;
                if d.q != 0.0 && d.q != 0.5 {
                    return fail("dispersion.q", format!("must be 0 or 0.5, got {}", d.q));
                }
                if d.n_poly < 2 {
                    return fail("dispersion.n_poly", format!("needs at least 2, got {}", d.n_poly));
                }
                if d.pe_values.is_empty() || d.da_values.is_empty() {
                    return fail("dispersion.pe_values", "need at least one Pe and one Da".into());
                }
                if d.pe_values.iter().any(|&p| p < 0.0) {
                    return fail("dispersion.pe_values", "Pe must be >= 0".into());
                }
                for (name, r) in [("dispersion.kh", &d.kh), ("dispersion.nc", &d.nc)] {
                    if r.count == 0 {
                        return fail(name, "count must be positive".into());
                    }
                    if r.count > 1 && !(r.end > r.start) {
                        return fail(name, "end must exceed start".into());
                    }
                }
            }
            Mode::Channel => {
                let Some(c) = &self.channel else {
                    return fail("channel", "missing section for mode = \"channel\"".into());
                };
                check_alpha("channel.alpha", c.alpha)?;
                check_theta("channel.theta", c.theta)?;
                if !(c.re > 0.0) {
                    return fail("channel.re", format!("must be positive, got {}", c.re));
                }
                if !(c.we > 0.0) {
                    return fail("channel.we", format!("must be positive, got {}", c.we));
                }
                if !(c.nu > 0.0 && c.nu < 1.0) {
                    return fail("channel.nu", format!("must lie in (0, 1), got {}", c.nu));
                }
                if c.mu < 0.0 {
                    return fail("channel.mu", format!("must be >= 0, got {}", c.mu));
                }
                if c.nx < 5 || c.ny < 5 {
                    return fail("channel.nx", format!("grid too small: {}x{}", c.nx, c.ny));
                }
                if c.n_steps == 0 {
                    return fail("channel.n_steps", "must be positive".into());
                }
                if !(c.dt_min > 0.0 && c.dt_min <= c.dt_max) {
                    return fail(
                        "channel.dt_min",
                        format!("need 0 < dt_min <= dt_max, got [{}, {}]", c.dt_min, c.dt_max),
                    );
                }
                if !(c.delta > 0.0) {
                    return fail("channel.delta", format!("must be positive, got {}", c.delta));
                }
            }
            Mode::Fadr1d => {
                let Some(f) = &self.fadr1d else {
                    return fail("fadr1d", "missing section for mode = \"fadr1d\"".into());
                };
                check_alpha("fadr1d.alpha", f.alpha)?;
                check_theta("fadr1d.theta", f.theta)?;
                if f.gamma < 0.0 {
                    return fail("fadr1d.gamma", format!("must be >= 0, got {}", f.gamma));
                }
                if f.nx < 5 {
                    return fail("fadr1d.nx", format!("needs at least 5 points, got {}", f.nx));
                }
                if !(f.x_end > 0.0) {
                    return fail("fadr1d.x_end", format!("must be positive, got {}", f.x_end));
                }
                if !(f.dt > 0.0) {
                    return fail("fadr1d.dt", format!("must be positive, got {}", f.dt));
                }
                if f.n_steps == 0 {
                    return fail("fadr1d.n_steps", "must be positive".into());
                }
            }
        }
        Ok(())
    }
}

fn check_alpha(path: &str, alpha: f64) -> Result<(), CliError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CliError::Config(format!(
            "{path}: must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

fn check_theta(path: &str, theta: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(CliError::Config(format!(
            "{path}: must lie in [0, 1], got {theta}"
        )));
    }
    Ok(())
}
