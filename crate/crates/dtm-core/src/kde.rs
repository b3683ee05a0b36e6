//! Kernel density estimation of DTM signatures: kernels, bandwidth rules,
//! grid evaluation, and the L1 distance between estimates.

use crate::error::{Error, Result};
use crate::exec;
use crate::stats;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Compactly supported smoothing kernels on [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    /// K(u) = (15/16)(1 - u^2)^2 on [-1, 1].
    #[serde(rename = "biweight")]
    Biweight,
    /// Standard normal density truncated to [-1, 1] and renormalized, so
    /// that every kernel in the crate shares one compact-support contract.
    #[serde(rename = "gaussian")]
    GaussianTruncated,
}

impl Kernel {
    /// Evaluate the kernel; zero outside [-1, 1].
    pub fn eval(self, u: f64) -> f64 {
        if u.abs() > 1.0 {
            return 0.0;
        }
        match self {
            Kernel::Biweight => {
                let t = 1.0 - u * u;
                15.0 / 16.0 * t * t
            }
            Kernel::GaussianTruncated => {
                let phi = (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
                phi / Self::gaussian_mass()
            }
        }
    }

    // integral of the standard normal density over [-1, 1]
    fn gaussian_mass() -> f64 {
        erf(1.0 / 2.0_f64.sqrt())
    }

    /// Closed form of the squared-kernel integral over [-1, 1], the factor
    /// entering the limit variance of the pointwise CLT.
    pub fn l2_norm(self) -> f64 {
        match self {
            Kernel::Biweight => 5.0 / 7.0,
            Kernel::GaussianTruncated => {
                let z = Self::gaussian_mass();
                erf(1.0) / (2.0 * std::f64::consts::PI.sqrt() * z * z)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Biweight => "biweight",
            Kernel::GaussianTruncated => "gaussian",
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "biweight" => Ok(Kernel::Biweight),
            "gaussian" => Ok(Kernel::GaussianTruncated),
            other => Err(Error::InvalidConfig { message: format!("unknown kernel '{other}'") }),
        }
    }
}

/// Bandwidth selection rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandwidthRule {
    /// h = 1.06 min{s, IQR/1.34} n^(-1/5), the classic Silverman form.
    #[serde(rename = "n5")]
    SilvermanN5,
    /// h = (1.06 min{s, IQR/1.34})^(5/4) n^(-1/4); decays faster than
    /// n^(-1/5), as the pointwise CLT requires.
    #[serde(rename = "n54")]
    SilvermanN54,
    /// Caller-provided bandwidth.
    #[serde(rename = "manual")]
    Manual,
}

impl std::str::FromStr for BandwidthRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n5" => Ok(BandwidthRule::SilvermanN5),
            "n54" => Ok(BandwidthRule::SilvermanN54),
            "manual" => Ok(BandwidthRule::Manual),
            other => {
                Err(Error::InvalidConfig { message: format!("unknown bandwidth rule '{other}'") })
            }
        }
    }
}

/// A positive smoothing bandwidth together with the rule that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bandwidth {
    pub h: f64,
    pub rule: BandwidthRule,
}

impl Bandwidth {
    /// A manually chosen bandwidth.
    pub fn manual(h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidConfig { message: format!("bandwidth {h} must be > 0") });
        }
        Ok(Bandwidth { h, rule: BandwidthRule::Manual })
    }
}

/// Data-driven bandwidth selection.
///
/// The spread factor is min{s, IQR/1.34} with the sample standard deviation
/// (divisor n-1) and linear-interpolation (type 7) quartiles. When the IQR
/// degenerates to zero on a non-constant sample the factor falls back to s,
/// matching the usual rule-of-thumb implementations.
pub fn bandwidth_select(values: &[f64], rule: BandwidthRule) -> Result<Bandwidth> {
    if values.len() < 2 {
        return Err(Error::InsufficientPoints { needed: 2, have: values.len() });
    }
    if rule == BandwidthRule::Manual {
        return Err(Error::InvalidConfig {
            message: "manual rule needs an explicit bandwidth".into(),
        });
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Err(Error::DegenerateSample);
    }
    let s = stats::sample_sd(values);
    let iqr = stats::iqr(values);
    let mut spread = s.min(iqr / 1.34);
    if spread <= 0.0 {
        spread = s;
    }
    let n = values.len() as f64;
    let h = match rule {
        BandwidthRule::SilvermanN5 => 1.06 * spread * n.powf(-0.2),
        BandwidthRule::SilvermanN54 => (1.06 * spread).powf(1.25) * n.powf(-0.25),
        BandwidthRule::Manual => unreachable!(),
    };
    Ok(Bandwidth { h, rule })
}

/// Evaluation grid for [`kde_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// Equally spaced points on [min(data) - h, max(data) + h].
    Span { points: usize },
    /// Explicit interval.
    Explicit { lo: f64, hi: f64, points: usize },
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Span { points: 512 }
    }
}

/// A kernel density estimate evaluated on a grid.
///
/// Estimates built by [`kde_estimate`] retain their (sorted) input sample,
/// so they can be re-evaluated exactly at arbitrary points; estimates read
/// back from disk only carry the grid and fall back to linear
/// interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub bandwidth: Bandwidth,
    pub kernel: Kernel,
    pub n: usize,
    pub source_id: Option<String>,
    sample: Option<Vec<f64>>,
}

// windowed Eq.(6) sum over an ascending-sorted sample
fn kernel_sum_sorted(sorted: &[f64], kernel: Kernel, h: f64, y: f64) -> f64 {
    let lo = sorted.partition_point(|&v| v < y - h);
    let hi = sorted.partition_point(|&v| v <= y + h);
    let mut acc = 0.0;
    for &v in &sorted[lo..hi] {
        acc += kernel.eval((v - y) / h);
    }
    acc / (sorted.len() as f64 * h)
}

impl DensityEstimate {
    /// Evaluate the estimate at `y`: exactly (closed-form kernel sum) when
    /// the sample is attached, otherwise by linear interpolation of the
    /// stored grid (zero outside it).
    pub fn density_at(&self, y: f64) -> f64 {
        if let Some(sample) = &self.sample {
            return kernel_sum_sorted(sample, self.kernel, self.bandwidth.h, y);
        }
        let g = &self.grid;
        if y < g[0] || y > g[g.len() - 1] {
            return 0.0;
        }
        let i = g.partition_point(|&x| x <= y);
        if i == 0 {
            return self.values[0];
        }
        if i >= g.len() {
            return self.values[g.len() - 1];
        }
        let t = (y - g[i - 1]) / (g[i] - g[i - 1]);
        self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
    }

    /// Interval outside which the estimate vanishes.
    pub fn support(&self) -> (f64, f64) {
        match &self.sample {
            Some(s) => (s[0] - self.bandwidth.h, s[s.len() - 1] + self.bandwidth.h),
            None => (self.grid[0], self.grid[self.grid.len() - 1]),
        }
    }

    /// Trapezoidal integral over the stored grid.
    pub fn trapezoid_mass(&self) -> f64 {
        trapezoid(&self.grid, &self.values)
    }

    /// The sorted input sample, when this estimate was computed in memory.
    pub fn sample(&self) -> Option<&[f64]> {
        self.sample.as_deref()
    }
}

fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..grid.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    }
    acc
}

/// Kernel density estimate of `values` on a grid (Eq.(6) of the DTM
/// pipeline: mean of scaled kernels centered at the data).
///
/// Grid evaluation is data-parallel when the `parallel` feature is on.
pub fn kde_estimate(
    values: &[f64],
    kernel: Kernel,
    bandwidth: Bandwidth,
    grid_spec: GridSpec,
) -> Result<DensityEstimate> {
    kde_estimate_impl(values, kernel, bandwidth, grid_spec, cfg!(feature = "parallel"))
}

/// Sequential twin of [`kde_estimate`]; same result bit for bit.
pub fn kde_estimate_seq(
    values: &[f64],
    kernel: Kernel,
    bandwidth: Bandwidth,
    grid_spec: GridSpec,
) -> Result<DensityEstimate> {
    kde_estimate_impl(values, kernel, bandwidth, grid_spec, false)
}

fn kde_estimate_impl(
    values: &[f64],
    kernel: Kernel,
    bandwidth: Bandwidth,
    grid_spec: GridSpec,
    parallel: bool,
) -> Result<DensityEstimate> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let h = bandwidth.h;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidConfig { message: format!("bandwidth {h} must be > 0") });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain { message: "non-finite sample value".into() });
    }
    let mut sample = values.to_vec();
    sample.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let (lo, hi, points) = match grid_spec {
        GridSpec::Span { points } => (sample[0] - h, sample[sample.len() - 1] + h, points),
        GridSpec::Explicit { lo, hi, points } => (lo, hi, points),
    };
    if points < 2 || !(hi > lo) {
        return Err(Error::InvalidConfig { message: "grid needs points >= 2 and hi > lo".into() });
    }
    let grid: Vec<f64> = (0..points)
        .map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64)
        .collect();
    let eval = |j: usize| kernel_sum_sorted(&sample, kernel, h, grid[j]);
    let grid_values = if parallel {
        exec::map_indexed(points, eval)
    } else {
        exec::map_indexed_seq(points, eval)
    };
    Ok(DensityEstimate {
        grid,
        values: grid_values,
        bandwidth,
        kernel,
        n: sample.len(),
        source_id: None,
        sample: Some(sample),
    })
}

/// Pointwise kernel density estimate: the literal mean-of-kernels sum at a
/// single evaluation point.
pub fn kde_at(values: &[f64], kernel: Kernel, bandwidth: Bandwidth, y: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let h = bandwidth.h;
    let mut acc = 0.0;
    for &v in values {
        acc += kernel.eval((v - y) / h);
    }
    Ok(acc / (values.len() as f64 * h))
}

/// L1 distance between two density estimates.
///
/// Both estimates are re-evaluated on a merged 1024-point grid spanning the
/// union of their supports and the absolute difference is integrated by the
/// trapezoidal rule. Symmetric by construction.
pub fn l1_distance(a: &DensityEstimate, b: &DensityEstimate) -> f64 {
    const POINTS: usize = 1024;
    let (alo, ahi) = a.support();
    let (blo, bhi) = b.support();
    let lo = alo.min(blo);
    let hi = ahi.max(bhi);
    if !(hi > lo) {
        return 0.0;
    }
    let step = (hi - lo) / (POINTS - 1) as f64;
    let mut acc = 0.0;
    let mut prev = (a.density_at(lo) - b.density_at(lo)).abs();
    for j in 1..POINTS {
        let y = lo + step * j as f64;
        let cur = (a.density_at(y) - b.density_at(y)).abs();
        acc += 0.5 * (prev + cur) * step;
        prev = cur;
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct DensityMeta {
    kernel: Kernel,
    h: f64,
    rule: BandwidthRule,
    n: usize,
    source_id: Option<String>,
}

/// Sidecar path: the density path with its extension replaced by `json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Write the estimate as a `y,density` CSV plus its JSON sidecar.
pub fn write_density_csv(est: &DensityEstimate, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut csv = String::from("y,density\n");
    for (y, v) in est.grid.iter().zip(&est.values) {
        let _ = writeln!(csv, "{y},{v}");
    }
    crate::write_atomic(path, csv.as_bytes())?;
    let meta = DensityMeta {
        kernel: est.kernel,
        h: est.bandwidth.h,
        rule: est.bandwidth.rule,
        n: est.n,
        source_id: est.source_id.clone(),
    };
    let json = serde_json::to_string_pretty(&meta).expect("serializable");
    crate::write_atomic(&sidecar_path(path), json.as_bytes())
}

/// Read a density CSV and sidecar back. The returned estimate carries no
/// raw sample, so re-evaluation interpolates the stored grid.
pub fn read_density_csv(path: impl AsRef<Path>) -> Result<DensityEstimate> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("y,")) {
            continue;
        }
        let (ys, vs) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: lineno + 1,
            message: "expected 'y,density'".into(),
        })?;
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("non-numeric field '{s}'"),
            })
        };
        grid.push(parse(ys)?);
        values.push(parse(vs)?);
    }
    if grid.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let meta_text = std::fs::read_to_string(sidecar_path(path))?;
    let meta: DensityMeta = serde_json::from_str(&meta_text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("bad density sidecar: {e}"),
    })?;
    Ok(DensityEstimate {
        grid,
        values,
        bandwidth: Bandwidth { h: meta.h, rule: meta.rule },
        kernel: meta.kernel,
        n: meta.n,
        source_id: meta.source_id,
        sample: None,
    })
}
