//! Empirical and analytic distance-to-measure functions and signatures.
//!
//! The DTM function with mass parameter m averages the squared-distance
//! quantile function of `||X - x||^2` over quantile levels (0, m]. Its
//! empirical version replaces the population quantile function by the step
//! function of the n sorted squared sample distances; for m = k/n this is
//! exactly the mean squared distance to the k nearest sample points.

mod analytic;
mod io;

pub use analytic::{analytic_density, analytic_dtm, density_support};
pub use io::{read_signature_csv, write_signature_csv};

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{sq_dist, NeighborIndex, PointCloud};
use serde::{Deserialize, Serialize};

/// Mass parameter m in (0, 1].
///
/// With n sample points, the k nearest neighbors of the nearest-neighbor
/// form correspond to m = k/n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mass(f64);

impl Mass {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0 && m <= 1.0) || !m.is_finite() {
            return Err(Error::InvalidMass { m });
        }
        Ok(Mass(m))
    }

    /// The mass parameter matching the k-nearest-neighbor statistic.
    pub fn from_k(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, max: n });
        }
        Mass::new(k as f64 / n as f64)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The vector of empirical DTM values at all sample points of one cloud,
/// in cloud index order.
#[derive(Debug, Clone, PartialEq)]
pub struct DtmSignature {
    pub values: Vec<f64>,
    pub m: Mass,
    pub n: usize,
    pub source_id: Option<String>,
}

/// The empirical DTM at `x` with mass parameter `m`:
/// the average of the empirical squared-distance quantile function over
/// (0, m], computed exactly from the sorted squared distances.
///
/// With l = floor(m n) and ascending squared distances d2_(1) <= ... <=
/// d2_(n) the value is (1/m) [ (1/n) sum_{i<=l} d2_(i) + (m - l/n) d2_(l+1) ],
/// the last term dropping when m n is integral. For m = k/n this reduces to
/// the plain mean over the k nearest neighbors.
pub fn dtm_at(index: &NeighborIndex<'_>, x: &[f64], m: Mass) -> Result<f64> {
    let n = index.len();
    let m_val = m.value();
    if m_val * (n as f64) < 1.0 - 1e-12 {
        return Err(Error::MassTooSmall { m: m_val, n });
    }
    let scaled = m_val * n as f64;
    let l = (scaled.floor() as usize).min(n);
    if l == n {
        // the integral covers the whole quantile function: a plain mean of
        // all squared distances, no order statistics required
        if x.len() != index.cloud().dim() {
            return Err(Error::Dimension { expected: index.cloud().dim(), got: x.len() });
        }
        let total: f64 = index.cloud().iter_points().map(|p| sq_dist(x, p)).sum();
        return Ok(total / (m_val * n as f64));
    }
    let frac = m_val - l as f64 / n as f64;
    let need = if frac > 0.0 { l + 1 } else { l };
    let smallest = index.smallest_sq_distances(x, need)?;
    let head: f64 = smallest[..l].iter().sum();
    let mut acc = head / n as f64;
    if frac > 0.0 {
        acc += frac * smallest[l];
    }
    Ok(acc / m_val)
}

fn signature_impl(cloud: &PointCloud, m: Mass, parallel: bool) -> Result<DtmSignature> {
    let n = cloud.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if m.value() * (n as f64) < 1.0 - 1e-12 {
        return Err(Error::MassTooSmall { m: m.value(), n });
    }
    let index = NeighborIndex::build(cloud)?;
    let eval = |i: usize| dtm_at(&index, cloud.point(i), m).expect("preconditions checked");
    let values = if parallel {
        exec::map_indexed(n, eval)
    } else {
        exec::map_indexed_seq(n, eval)
    };
    Ok(DtmSignature { values, m, n, source_id: cloud.id.clone() })
}

/// The DTM signature of a cloud: [`dtm_at`] evaluated at every sample point
/// against the cloud's own neighbor index. A sample point participates in
/// its own neighbor set, so m = 1/n gives the all-zero signature.
///
/// Runs data-parallel over points when the `parallel` feature is enabled.
pub fn signature(cloud: &PointCloud, m: Mass) -> Result<DtmSignature> {
    signature_impl(cloud, m, cfg!(feature = "parallel"))
}

/// Sequential twin of [`signature`]; same result bit for bit.
pub fn signature_seq(cloud: &PointCloud, m: Mass) -> Result<DtmSignature> {
    signature_impl(cloud, m, false)
}

/// The m = 1 DTM in closed quadratic form: `||x - center||^2 + offset`.
///
/// For the empirical measure the center is the sample mean and the offset
/// the total per-coordinate biased variance, so evaluating the quadratic
/// reproduces the m = 1 empirical DTM at any point. This is the independent
/// route used to cross-check the order-statistics implementation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticDtm {
    pub center: Vec<f64>,
    pub offset: f64,
}

impl QuadraticDtm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        sq_dist(x, &self.center) + self.offset
    }
}

/// Fit the quadratic m = 1 DTM from sample moments (divisor n).
pub fn quadratic_dtm_from_cloud(cloud: &PointCloud) -> Result<QuadraticDtm> {
    let n = cloud.len();
    if n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, have: n });
    }
    let dim = cloud.dim();
    let mut mean = vec![0.0; dim];
    let mut second = vec![0.0; dim];
    for p in cloud.iter_points() {
        for j in 0..dim {
            mean[j] += p[j];
            second[j] += p[j] * p[j];
        }
    }
    for j in 0..dim {
        mean[j] /= n as f64;
        second[j] /= n as f64;
    }
    let offset = (0..dim).map(|j| second[j] - mean[j] * mean[j]).sum();
    Ok(QuadraticDtm { center: mean, offset })
}
