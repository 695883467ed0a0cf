//! Experiment configuration and its `key = value` file format.
//!
//! ```text
//! # geometry
//! m_y = 16
//! m_z = 8
//! delta_deg = 2.5
//! snr_db = 0, 10, 20, 30
//! methods = baseline, kf, tot
//! ```
//!
//! Lists are comma separated. `#` starts a comment. Unknown keys are errors.

use std::path::{Path, PathBuf};

use kronbf_core::beamformers::Method;
use kronbf_core::channel::{ArrayGeometry, GainLaw, LinkGeometry, PathDistribution};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// IRS split `N = N_y N_z` used by the complexity sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrsSplit {
    pub n_y: f64,
    pub n_z: f64,
}

impl IrsSplit {
    pub fn total(&self) -> f64 {
        self.n_y * self.n_z
    }

    /// `"N"` for a perfect square `N`, or an explicit `"N_yxN_z"` pair (reals
    /// allowed, e.g. `31.6227766x31.6227766`).
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('x') {
            let n_y: f64 = a.trim().parse().map_err(|_| format!("bad N_y in `{s}`"))?;
            let n_z: f64 = b.trim().parse().map_err(|_| format!("bad N_z in `{s}`"))?;
            if !(n_y > 0.0 && n_z > 0.0 && n_y.is_finite() && n_z.is_finite()) {
                return Err(format!("non-positive split `{s}`"));
            }
            return Ok(Self { n_y, n_z });
        }
        let n: u64 = s.parse().map_err(|_| format!("bad IRS size `{s}`"))?;
        let root = (n as f64).sqrt().round() as u64;
        if n == 0 || root * root != n {
            return Err(format!(
                "{n} is not a perfect square; give an explicit N_yxN_z split"
            ));
        }
        Ok(Self {
            n_y: root as f64,
            n_z: root as f64,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: LinkGeometry,
    /// Paths per channel (`H` and `G` each).
    pub paths: usize,
    pub delta_deg: f64,
    pub az_min_deg: f64,
    pub az_max_deg: f64,
    pub gain_variance: f64,
    /// SNR grid of the SE sweep.
    pub snr_db: Vec<f64>,
    /// Fixed SNR of the imperfect-CSI experiment.
    pub csi_snr_db: f64,
    /// Estimation noise grid of the imperfect-CSI experiment.
    pub sigma_z_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub n_grid: Vec<IrsSplit>,
    pub out: PathBuf,
    pub plot_script: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            geometry: LinkGeometry {
                bs: ArrayGeometry { n_y: 16, n_z: 8 },
                irs: ArrayGeometry { n_y: 10, n_z: 10 },
                ue: ArrayGeometry { n_y: 4, n_z: 4 },
            },
            paths: 4,
            delta_deg: 2.5,
            az_min_deg: -60.0,
            az_max_deg: 60.0,
            gain_variance: 1.0,
            snr_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            csi_snr_db: 20.0,
            sigma_z_db: vec![-20.0, -16.0, -12.0, -8.0, -4.0, 0.0],
            trials: 2000,
            seed: 1,
            methods: Method::ALL.to_vec(),
            n_grid: [100u32, 400, 900, 1600, 2500, 3600]
                .iter()
                .map(|&n| IrsSplit::parse(&n.to_string()).expect("perfect squares"))
                .collect(),
            out: PathBuf::from("results.csv"),
            plot_script: None,
        }
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    value.split(',').map(|s| item(s.trim())).collect()
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not a valid number"))
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses config text on top of the defaults and validates the result.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set(key, value).map_err(|e| match e {
                SetError::Unknown => ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                },
                SetError::Value(reason) => ConfigError::InvalidValue {
                    line,
                    key: key.to_string(),
                    reason,
                },
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), SetError> {
        let g = &mut self.geometry;
        match key {
            "m_y" => g.bs.n_y = parse_num(value)?,
            "m_z" => g.bs.n_z = parse_num(value)?,
            "n_y" => g.irs.n_y = parse_num(value)?,
            "n_z" => g.irs.n_z = parse_num(value)?,
            "k_y" => g.ue.n_y = parse_num(value)?,
            "k_z" => g.ue.n_z = parse_num(value)?,
            "paths" => self.paths = parse_num(value)?,
            "delta_deg" => self.delta_deg = parse_num(value)?,
            "az_min_deg" => self.az_min_deg = parse_num(value)?,
            "az_max_deg" => self.az_max_deg = parse_num(value)?,
            "gain_variance" => self.gain_variance = parse_num(value)?,
            "snr_db" => self.snr_db = parse_list(value, parse_num)?,
            "csi_snr_db" => self.csi_snr_db = parse_num(value)?,
            "sigma_z_db" => self.sigma_z_db = parse_list(value, parse_num)?,
            "trials" => self.trials = parse_num(value)?,
            "seed" => self.seed = parse_num(value)?,
            "methods" => {
                self.methods = parse_list(value, |s| {
                    Method::from_tag(s).ok_or_else(|| format!("unknown method `{s}`"))
                })?
            }
            "n_grid" => self.n_grid = parse_list(value, IrsSplit::parse)?,
            "out" => self.out = PathBuf::from(value),
            "plot_script" => self.plot_script = Some(PathBuf::from(value)),
            _ => return Err(SetError::Unknown),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        let g = &self.geometry;
        if [g.bs, g.irs, g.ue].iter().any(|a| a.n_y == 0 || a.n_z == 0) {
            return invalid("array dimensions must be positive");
        }
        if self.paths == 0 {
            return invalid("paths must be at least 1");
        }
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if self.snr_db.is_empty() || self.sigma_z_db.is_empty() || self.n_grid.is_empty() {
            return invalid("grids must be nonempty");
        }
        if self.methods.is_empty() {
            return invalid("at least one method is required");
        }
        let finite = self
            .snr_db
            .iter()
            .chain(&self.sigma_z_db)
            .chain([
                &self.csi_snr_db,
                &self.delta_deg,
                &self.az_min_deg,
                &self.az_max_deg,
                &self.gain_variance,
            ])
            .all(|x| x.is_finite());
        if !finite {
            return invalid("numeric values must be finite");
        }
        if !(0.0..=90.0).contains(&self.delta_deg) {
            return invalid("delta_deg must lie in [0, 90]");
        }
        if self.az_min_deg > self.az_max_deg {
            return invalid("az_min_deg exceeds az_max_deg");
        }
        if self.gain_variance < 0.0 {
            return invalid("gain_variance must be nonnegative");
        }
        Ok(())
    }

    pub fn path_distribution(&self) -> PathDistribution {
        PathDistribution {
            elev_spread_deg: self.delta_deg,
            az_lo_deg: self.az_min_deg,
            az_hi_deg: self.az_max_deg,
            gain: GainLaw {
                variance: self.gain_variance,
                ..GainLaw::default()
            },
        }
    }
}

enum SetError {
    Unknown,
    Value(String),
}

impl From<String> for SetError {
    fn from(reason: String) -> Self {
        SetError::Value(reason)
    }
}
