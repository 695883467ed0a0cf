//! CSV emission, per-point summaries and matplotlib plot scripts.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::Context;

use crate::experiment::{ComplexityRow, Series, TrialRecord};

pub const RECORD_HEADER: [&str; 8] = [
    "method",
    "snr_db",
    "sigma_z_db",
    "delta_deg",
    "trial",
    "se_bits",
    "complexity",
    "seed",
];
pub const COMPLEXITY_HEADER: [&str; 6] = ["method", "n", "n_y", "n_z", "complexity", "ratio"];

/// Header first, so that an empty table still yields a valid CSV.
fn write_table<T: serde::Serialize>(
    path: &Path,
    header: &[&str],
    rows: &[T],
) -> anyhow::Result<()> {
    let context = || format!("writing {}", path.display());
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .with_context(context)?;
    w.write_record(header).with_context(context)?;
    for r in rows {
        w.serialize(r).with_context(context)?;
    }
    w.flush().with_context(context)?;
    Ok(())
}

pub fn write_records(path: &Path, records: &[TrialRecord]) -> anyhow::Result<()> {
    write_table(path, &RECORD_HEADER, records)
}

pub fn read_records(path: &Path) -> anyhow::Result<Vec<TrialRecord>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

pub fn write_complexity(path: &Path, rows: &[ComplexityRow]) -> anyhow::Result<()> {
    write_table(path, &COMPLEXITY_HEADER, rows)
}

/// Sample mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_err: f64::NAN,
                count: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std_err = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            f64::NAN
        };
        Self {
            mean,
            std_err,
            count: n,
        }
    }
}

/// Grid point of a curve: SNR and optional estimation noise, both in dB.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub snr_db: f64,
    pub sigma_z_db: Option<f64>,
}

impl Point {
    fn key(&self) -> (u64, u64) {
        // Total order on the bit patterns keeps BTreeMap grouping exact.
        let sz = self.sigma_z_db.map_or(u64::MAX, |x| x.to_bits());
        (self.snr_db.to_bits(), sz)
    }

    fn of(r: &TrialRecord) -> Self {
        Self {
            snr_db: r.snr_db,
            sigma_z_db: r.sigma_z_db,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSummary {
    pub method: Series,
    pub point: Point,
    pub se: MeanEstimate,
}

/// Mean SE per `(method, point)`, in record order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Vec<PointSummary> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(Series, (u64, u64)), Vec<f64>> = BTreeMap::new();
    for r in records {
        let p = Point::of(r);
        let key = (r.method, p.key());
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push((r.method, p));
                Vec::new()
            })
            .push(r.se_bits);
    }
    order
        .into_iter()
        .map(|(method, point)| PointSummary {
            method,
            point,
            se: MeanEstimate::from_samples(&groups[&(method, point.key())]),
        })
        .collect()
}

/// Per-trial differences `SE(a) - SE(b)` at `point`, paired on the trial
/// index. Trials missing from either series are skipped.
pub fn paired_differences(records: &[TrialRecord], a: Series, b: Series, point: Point) -> Vec<f64> {
    let at = |s: Series| -> BTreeMap<usize, f64> {
        records
            .iter()
            .filter(|r| r.method == s && Point::of(r).key() == point.key())
            .map(|r| (r.trial, r.se_bits))
            .collect()
    };
    let (xa, xb) = (at(a), at(b));
    xa.iter()
        .filter_map(|(t, va)| xb.get(t).map(|vb| va - vb))
        .collect()
}

pub fn print_summary(out: &mut impl Write, summaries: &[PointSummary]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<22} {:>8} {:>10} {:>12} {:>10} {:>7}",
        "method", "snr_db", "sigma_z_db", "mean_se", "std_err", "trials"
    )?;
    for s in summaries {
        let sz = s
            .point
            .sigma_z_db
            .map_or_else(|| "-".to_string(), |x| format!("{x}"));
        writeln!(
            out,
            "{:<22} {:>8} {:>10} {:>12.4} {:>10.4} {:>7}",
            s.method.tag(),
            s.point.snr_db,
            sz,
            s.se.mean,
            s.se.std_err,
            s.se.count
        )?;
    }
    Ok(())
}

pub fn print_complexity(out: &mut impl Write, rows: &[ComplexityRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<9} {:>10} {:>10} {:>10} {:>14} {:>10}",
        "method", "n", "n_y", "n_z", "complexity", "ratio"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<9} {:>10.1} {:>10.3} {:>10.3} {:>14.1} {:>10.2}",
            r.method.tag(),
            r.n,
            r.n_y,
            r.n_z,
            r.complexity,
            r.ratio
        )?;
    }
    Ok(())
}

/// Which experiment a plot script is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    SeVsSnr,
    Complexity,
    ImperfectCsi,
}

/// Writes a standalone matplotlib script that plots `csv_path`.
pub fn write_plot_script(path: &Path, kind: PlotKind, csv_path: &Path) -> anyhow::Result<()> {
    let (x, y, xlabel, ylabel, logy, filt) = match kind {
        PlotKind::SeVsSnr => ("snr_db", "se_bits", "SNR [dB]", "spectral efficiency [bit/s/Hz]", false, ""),
        PlotKind::Complexity => ("n", "complexity", "IRS elements N", "complexity [operations]", true, ""),
        PlotKind::ImperfectCsi => (
            "sigma_z_db",
            "se_bits",
            "estimation noise power [dB]",
            "spectral efficiency [bit/s/Hz]",
            false,
            "ref = df[df.sigma_z_db.isna()]\n\
             for m, g in ref.groupby('method'):\n    plt.axhline(g.se_bits.mean(), ls='--', color='k', label=m)\n\
             df = df[df.sigma_z_db.notna()]\n",
        ),
    };
    let script = format!(
        "import sys\nimport pandas as pd\nimport matplotlib.pyplot as plt\n\n\
         df = pd.read_csv({csv:?})\n\
         {filt}\
         for m, g in df.groupby('method', sort=False):\n\
         \x20   s = g.groupby('{x}')['{y}'].mean()\n\
         \x20   plt.plot(s.index, s.values, marker='o', label=m)\n\
         {scale}\
         plt.xlabel({xlabel:?})\nplt.ylabel({ylabel:?})\nplt.grid(True, alpha=0.3)\nplt.legend()\n\
         out = sys.argv[1] if len(sys.argv) > 1 else {png:?}\n\
         plt.savefig(out, dpi=150, bbox_inches='tight')\n",
        csv = csv_path.display().to_string(),
        scale = if logy { "plt.yscale('log')\n" } else { "" },
        png = csv_path.with_extension("png").display().to_string(),
    );
    std::fs::write(path, script).with_context(|| format!("writing {}", path.display()))
}
