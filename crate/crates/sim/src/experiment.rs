//! Monte-Carlo runners.
//!
//! Trial `t` draws from its own ChaCha8 stream `(seed, t)`, so results are
//! independent of thread scheduling and any subset of trials can be
//! reproduced in isolation. Within a trial, every method and every grid point
//! sees the same channel and noise draws.

use std::fmt;

use kronbf_core::beamformers::{baseline_full, kf_design, tot_design, BeamformingSolution, Method};
use kronbf_core::channel::{
    combined_channel, complex_gaussian_matrix, draw_link, extract_domain_combined, lskrf,
    nearest_kron_factor, LinkChannels, LinkGeometry,
};
use kronbf_core::metrics::{
    complexity_count, effective_gain, spectral_efficiency, ComplexityDims, LinkBudget,
};
use kronbf_core::tensor::{fold_to_tensor, ComplexMatrix};
use kronbf_core::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

/// Curve a record belongs to: a designer, or the perfect-CSI reference of the
/// imperfect-CSI experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    Baseline,
    Kf,
    Tot,
    BaselinePerfectCsi,
}

impl Series {
    pub fn tag(self) -> &'static str {
        match self {
            Series::Baseline => "baseline",
            Series::Kf => "kf",
            Series::Tot => "tot",
            Series::BaselinePerfectCsi => "baseline_perfect_csi",
        }
    }

    pub fn method(self) -> Method {
        match self {
            Series::Baseline | Series::BaselinePerfectCsi => Method::Baseline,
            Series::Kf => Method::Kf,
            Series::Tot => Method::Tot,
        }
    }
}

impl From<Method> for Series {
    fn from(m: Method) -> Self {
        match m {
            Method::Baseline => Series::Baseline,
            Method::Kf => Series::Kf,
            Method::Tot => Series::Tot,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub method: Series,
    pub snr_db: f64,
    /// Estimation noise power in dB; empty for perfect CSI.
    pub sigma_z_db: Option<f64>,
    pub delta_deg: f64,
    pub trial: usize,
    pub se_bits: f64,
    pub complexity: u64,
    pub seed: u64,
}

/// Cascade gain of each method, in configured method order.
pub type MethodGains = Vec<(Method, C64)>;

/// RNG of trial `trial`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn method_complexity(method: Method, geom: &LinkGeometry) -> anyhow::Result<u64> {
    Ok(complexity_count(method, ComplexityDims::from(geom))?
        .op_count
        .round() as u64)
}

fn design_perfect(
    method: Method,
    link: &LinkChannels,
    geom: &LinkGeometry,
) -> kronbf_core::Result<BeamformingSolution> {
    let (h, g) = (&link.h, &link.g);
    match method {
        Method::Baseline => baseline_full(&h.full, &g.full),
        Method::Kf => kf_design(&h.approx_y, &h.approx_z, &g.approx_y, &g.approx_z),
        Method::Tot => {
            let f_y = combined_channel(&h.approx_y, &g.approx_y)?;
            let f_z = combined_channel(&h.approx_z, &g.approx_z)?;
            tot_design(
                &fold_to_tensor(&f_y, geom.ue.n_y, geom.bs.n_y, geom.irs.n_y)?,
                &fold_to_tensor(&f_z, geom.ue.n_z, geom.bs.n_z, geom.irs.n_z)?,
            )
        }
    }
}

/// Designs `method` from the noisy combined channel `f_hat`.
pub fn design_estimated(
    method: Method,
    f_hat: &ComplexMatrix,
    geom: &LinkGeometry,
) -> kronbf_core::Result<BeamformingSolution> {
    let factors = match method {
        Method::Tot => None,
        _ => Some(lskrf(f_hat, geom.ue.total(), geom.bs.total())?),
    };
    design_from_estimates(method, f_hat, factors.as_ref(), geom)
}

/// As [`design_estimated`], reusing the LSKRF factors `(Ĥ, Ĝ)` of `f_hat`,
/// which the baseline and KF paths require.
fn design_from_estimates(
    method: Method,
    f_hat: &ComplexMatrix,
    factors: Option<&(ComplexMatrix, ComplexMatrix)>,
    geom: &LinkGeometry,
) -> kronbf_core::Result<BeamformingSolution> {
    let (bs, irs, ue) = (geom.bs, geom.irs, geom.ue);
    let lskrf_factors = || {
        factors.ok_or(kronbf_core::Error::InvalidParameter(
            "missing LSKRF factors",
        ))
    };
    match method {
        Method::Baseline => {
            let (h, g) = lskrf_factors()?;
            baseline_full(h, g)
        }
        Method::Kf => {
            let (h, g) = lskrf_factors()?;
            let (h_y, h_z) = nearest_kron_factor(h, (irs.n_y, bs.n_y), (irs.n_z, bs.n_z))?;
            let (g_y, g_z) = nearest_kron_factor(g, (ue.n_y, irs.n_y), (ue.n_z, irs.n_z))?;
            kf_design(&h_y, &h_z, &g_y, &g_z)
        }
        Method::Tot => {
            let (f_y, f_z) = extract_domain_combined(f_hat, geom)?;
            tot_design(
                &fold_to_tensor(&f_y, ue.n_y, bs.n_y, irs.n_y)?,
                &fold_to_tensor(&f_z, ue.n_z, bs.n_z, irs.n_z)?,
            )
        }
    }
}

/// Gains `|w^H G diag(θ) H q|` on the true channels for one SE-vs-SNR
/// trial, one per configured method.
pub fn se_trial_gains(cfg: &ExperimentConfig, trial: usize) -> anyhow::Result<MethodGains> {
    let mut rng = trial_rng(cfg.seed, trial);
    let link = draw_link(&cfg.geometry, cfg.paths, &cfg.path_distribution(), &mut rng)?;
    cfg.methods
        .iter()
        .map(|&m| {
            let sol = design_perfect(m, &link, &cfg.geometry)?;
            Ok((m, effective_gain(&sol, &link.h.full, &link.g.full)?))
        })
        .collect()
}

/// Gains for one imperfect-CSI trial: `result[i]` holds the designer gains
/// at `sigma_z_db[i]`, and the last element of the tuple is the
/// perfect-CSI baseline gain.
pub fn csi_trial_gains(
    cfg: &ExperimentConfig,
    trial: usize,
) -> anyhow::Result<(Vec<MethodGains>, C64)> {
    let geom = &cfg.geometry;
    let mut rng = trial_rng(cfg.seed, trial);
    let link = draw_link(geom, cfg.paths, &cfg.path_distribution(), &mut rng)?;
    let (h, g) = (&link.h.full, &link.g.full);
    let f = combined_channel(h, g)?;
    let z0 = complex_gaussian_matrix(f.rows(), f.cols(), 1.0, &mut rng)?;
    let perfect = effective_gain(&baseline_full(h, g)?, h, g)?;
    let per_point = cfg
        .sigma_z_db
        .iter()
        .map(|&db| {
            let f_hat = f.add(&z0.scale(C64::new(10f64.powf(db / 20.0), 0.0)))?;
            let factors = if cfg.methods.iter().any(|&m| m != Method::Tot) {
                Some(lskrf(&f_hat, geom.ue.total(), geom.bs.total())?)
            } else {
                None
            };
            cfg.methods
                .iter()
                .map(|&m| {
                    let sol = design_from_estimates(m, &f_hat, factors.as_ref(), geom)?;
                    Ok((m, effective_gain(&sol, h, g)?))
                })
                .collect::<anyhow::Result<Vec<_>>>()
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok((per_point, perfect))
}

fn sort_records(records: &mut [TrialRecord]) {
    records.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(
                a.sigma_z_db
                    .unwrap_or(f64::NEG_INFINITY)
                    .total_cmp(&b.sigma_z_db.unwrap_or(f64::NEG_INFINITY)),
            )
            .then(a.snr_db.total_cmp(&b.snr_db))
            .then(a.trial.cmp(&b.trial))
    });
}

/// SE of every method over the SNR grid with perfect CSI.
pub fn run_se_sweep(cfg: &ExperimentConfig) -> anyhow::Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let budgets = cfg
        .snr_db
        .iter()
        .map(|&s| Ok((s, LinkBudget::from_snr_db(s)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let complexities = cfg
        .methods
        .iter()
        .map(|&m| method_complexity(m, &cfg.geometry))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let gains = se_trial_gains(cfg, trial)?;
            let mut out = Vec::with_capacity(gains.len() * budgets.len());
            for ((method, gain), &complexity) in gains.into_iter().zip(&complexities) {
                for (snr_db, budget) in &budgets {
                    out.push(TrialRecord {
                        method: method.into(),
                        snr_db: *snr_db,
                        sigma_z_db: None,
                        delta_deg: cfg.delta_deg,
                        trial,
                        se_bits: spectral_efficiency(gain, budget),
                        complexity,
                        seed: cfg.seed,
                    });
                }
            }
            Ok(out)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}

/// SE of every method versus estimation noise power at `csi_snr_db`, plus the
/// perfect-CSI baseline reference.
pub fn run_imperfect_csi(cfg: &ExperimentConfig) -> anyhow::Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let budget = LinkBudget::from_snr_db(cfg.csi_snr_db)?;
    let complexities = cfg
        .methods
        .iter()
        .map(|&m| method_complexity(m, &cfg.geometry))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let baseline_complexity = method_complexity(Method::Baseline, &cfg.geometry)?;
    let record =
        |method: Series, sigma_z_db: Option<f64>, trial: usize, gain: C64, complexity: u64| {
            TrialRecord {
                method,
                snr_db: cfg.csi_snr_db,
                sigma_z_db,
                delta_deg: cfg.delta_deg,
                trial,
                se_bits: spectral_efficiency(gain, &budget),
                complexity,
                seed: cfg.seed,
            }
        };
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let (points, perfect) = csi_trial_gains(cfg, trial)?;
            let mut out = vec![record(
                Series::BaselinePerfectCsi,
                None,
                trial,
                perfect,
                baseline_complexity,
            )];
            for (&db, gains) in cfg.sigma_z_db.iter().zip(points) {
                for ((method, gain), &complexity) in gains.into_iter().zip(&complexities) {
                    out.push(record(method.into(), Some(db), trial, gain, complexity));
                }
            }
            Ok(out)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}

/// One row of the complexity sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityRow {
    #[serde(serialize_with = "serialize_method")]
    pub method: Method,
    pub n: f64,
    pub n_y: f64,
    pub n_z: f64,
    pub complexity: f64,
    /// Baseline complexity divided by this method's.
    pub ratio: f64,
}

fn serialize_method<S: serde::Serializer>(m: &Method, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(m.tag())
}

/// Model complexity of every method over the IRS grid, with `M` and `K`
/// split as in the configured geometry.
pub fn run_complexity_sweep(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ComplexityRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.n_grid.len() * cfg.methods.len());
    for split in &cfg.n_grid {
        let dims = ComplexityDims {
            n_y: split.n_y,
            n_z: split.n_z,
            ..ComplexityDims::from(&cfg.geometry)
        };
        let baseline = complexity_count(Method::Baseline, dims)?.op_count;
        for &method in &cfg.methods {
            let complexity = complexity_count(method, dims)?.op_count;
            rows.push(ComplexityRow {
                method,
                n: split.total(),
                n_y: split.n_y,
                n_z: split.n_z,
                complexity,
                ratio: baseline / complexity,
            });
        }
    }
    Ok(rows)
}
