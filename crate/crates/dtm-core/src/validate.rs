//! Monte Carlo harness for the pointwise central limit theorem of the
//! DTM-density estimators.
//!
//! Per repetition a fresh n-sample is drawn from a reference space, the
//! plug-in estimator (kernel density of the empirical DTM signature) and
//! the oracle estimator (kernel density of the exact DTM values at the same
//! sample points) are evaluated at a fixed point y, and the standardized
//! statistics sqrt(n h) (estimate - f(y)) are recorded. Both are expected
//! to approach N(0, f(y) * int K^2) as n grows; Kolmogorov-Smirnov
//! distances quantify how close the finite-sample distributions are.

use crate::dtm::{self, Mass};
use crate::error::{Error, Result};
use crate::exec;
use crate::kde::{self, BandwidthRule, Kernel};
use crate::synth::{sample_space, AnalyticSpace, RngSeed};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

/// Configuration of one CLT experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CltExperiment {
    pub space: AnalyticSpace,
    pub m: Mass,
    /// Evaluation point; must lie strictly inside the density support.
    pub y: f64,
    pub n: usize,
    /// Monte Carlo repetitions, at least 100.
    pub reps: usize,
    pub kernel: Kernel,
    pub bandwidth_rule: BandwidthRule,
    pub seed: RngSeed,
}

/// Outcome of a CLT experiment. The statistic vectors are sorted
/// ascending: repetitions are aggregated as unordered multisets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CltResult {
    pub plugin_stats: Vec<f64>,
    pub oracle_stats: Vec<f64>,
    /// f(y) * int K^2(u) du, the limit variance of both statistics.
    pub target_variance: f64,
    pub ks_plugin: f64,
    pub ks_oracle: f64,
}

/// Standard normal distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / 2.0_f64.sqrt())
}

/// One-sample Kolmogorov-Smirnov distance between `sample` and the centered
/// normal distribution with variance `sigma2`.
pub fn ks_statistic(sample: &[f64], sigma2: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::InvalidVariance { sigma2 });
    }
    let sd = sigma2.sqrt();
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal_cdf(x / sd);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite"));
    sb.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite"));
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Run one CLT experiment. Repetitions are embarrassingly parallel: rep r
/// runs on stream `seed.stream + r`, so results do not depend on the thread
/// count or completion order.
pub fn run_clt_experiment(exp: &CltExperiment) -> Result<CltResult> {
    if exp.reps < 100 {
        return Err(Error::InvalidConfig {
            message: format!("reps = {} but at least 100 are required", exp.reps),
        });
    }
    if exp.n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, have: exp.n });
    }
    if exp.bandwidth_rule == BandwidthRule::Manual {
        return Err(Error::InvalidConfig {
            message: "CLT experiments need a data-driven bandwidth rule".into(),
        });
    }
    let (lo, hi) = dtm::density_support(exp.space, exp.m)?;
    if !(exp.y > lo && exp.y < hi) {
        return Err(Error::Domain {
            message: format!("y = {} outside the open density support ({lo}, {hi})", exp.y),
        });
    }
    let f_y = dtm::analytic_density(exp.space, exp.y, exp.m)?;
    let target_variance = f_y * exp.kernel.l2_norm();

    let run_rep = |r: usize| -> Result<(f64, f64)> {
        let rep_seed = exp.seed.with_stream(exp.seed.stream.wrapping_add(r as u64));
        let cloud = sample_space(exp.space, exp.n, rep_seed)?;
        // repetitions carry the parallelism; inner loops run sequentially
        let plugin_values = dtm::signature_seq(&cloud, exp.m)?.values;
        let oracle_values: Vec<f64> = cloud
            .iter_points()
            .map(|p| dtm::analytic_dtm(exp.space, p, exp.m))
            .collect::<Result<_>>()?;
        let nf = exp.n as f64;
        let h1 = kde::bandwidth_select(&plugin_values, exp.bandwidth_rule)?;
        let h2 = kde::bandwidth_select(&oracle_values, exp.bandwidth_rule)?;
        let plugin = (nf * h1.h).sqrt() * (kde::kde_at(&plugin_values, exp.kernel, h1, exp.y)? - f_y);
        let oracle = (nf * h2.h).sqrt() * (kde::kde_at(&oracle_values, exp.kernel, h2, exp.y)? - f_y);
        Ok((plugin, oracle))
    };
    let outcomes = exec::map_indexed(exp.reps, run_rep);
    let mut plugin_stats = Vec::with_capacity(exp.reps);
    let mut oracle_stats = Vec::with_capacity(exp.reps);
    for outcome in outcomes {
        let (p, o) = outcome?;
        plugin_stats.push(p);
        oracle_stats.push(o);
    }
    plugin_stats.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    oracle_stats.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let ks_plugin = ks_statistic(&plugin_stats, target_variance)?;
    let ks_oracle = ks_statistic(&oracle_stats, target_variance)?;
    Ok(CltResult { plugin_stats, oracle_stats, target_variance, ks_plugin, ks_oracle })
}
