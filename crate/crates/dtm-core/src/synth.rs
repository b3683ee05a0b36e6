//! Seeded samplers: the four analytic reference spaces, plain 2D shapes for
//! discrimination experiments, and a noisy chromatin-fiber simulator.
//!
//! All randomness flows through [`RngSeed`], a (seed, stream) pair mapped
//! onto ChaCha8 streams. Identical pairs reproduce identical output
//! bit-for-bit on every platform; distinct stream ids give independent
//! streams, so batches of clouds can be generated in parallel without seed
//! reuse.

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

/// A reproducible random stream: a 64-bit seed plus a stream id for derived
/// substreams. Backed by ChaCha8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        RngSeed { seed, stream: 0 }
    }

    /// The same seed on a different stream.
    pub fn with_stream(self, stream: u64) -> Self {
        RngSeed { seed: self.seed, stream }
    }

    /// Instantiate the generator for this (seed, stream) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// The four reference metric measure spaces with closed-form DTM oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalyticSpace {
    /// Uniform distribution on [0, 1].
    UnitIntervalUniform,
    /// Density 2x on [0, 1].
    UnitIntervalLinear,
    /// Uniform distribution on the unit square.
    UnitSquareUniform,
    /// Density -(2/pi)(x1^2 + x2^2 - 1) on the unit disk.
    UnitDiskQuadratic,
}

impl AnalyticSpace {
    pub fn dim(self) -> usize {
        match self {
            AnalyticSpace::UnitIntervalUniform | AnalyticSpace::UnitIntervalLinear => 1,
            AnalyticSpace::UnitSquareUniform | AnalyticSpace::UnitDiskQuadratic => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnalyticSpace::UnitIntervalUniform => "UnitIntervalUniform",
            AnalyticSpace::UnitIntervalLinear => "UnitIntervalLinear",
            AnalyticSpace::UnitSquareUniform => "UnitSquareUniform",
            AnalyticSpace::UnitDiskQuadratic => "UnitDiskQuadratic",
        }
    }
}

impl std::fmt::Display for AnalyticSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AnalyticSpace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "UnitIntervalUniform" => Ok(AnalyticSpace::UnitIntervalUniform),
            "UnitIntervalLinear" => Ok(AnalyticSpace::UnitIntervalLinear),
            "UnitSquareUniform" => Ok(AnalyticSpace::UnitSquareUniform),
            "UnitDiskQuadratic" => Ok(AnalyticSpace::UnitDiskQuadratic),
            other => Err(Error::InvalidConfig { message: format!("unknown space '{other}'") }),
        }
    }
}

/// Draw n i.i.d. points from a reference space by inverse-CDF sampling
/// (radial inverse CDF plus uniform angle for the disk).
pub fn sample_space(space: AnalyticSpace, n: usize, seed: RngSeed) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rng = seed.rng();
    let dim = space.dim();
    let mut coords = Vec::with_capacity(n * dim);
    for _ in 0..n {
        match space {
            AnalyticSpace::UnitIntervalUniform => coords.push(rng.gen::<f64>()),
            AnalyticSpace::UnitIntervalLinear => {
                // F(x) = x^2 on [0,1]
                coords.push(rng.gen::<f64>().sqrt());
            }
            AnalyticSpace::UnitSquareUniform => {
                coords.push(rng.gen::<f64>());
                coords.push(rng.gen::<f64>());
            }
            AnalyticSpace::UnitDiskQuadratic => {
                // radial CDF 2r^2 - r^4 on [0,1] inverts to sqrt(1 - sqrt(1-u))
                let u = rng.gen::<f64>();
                let r = (1.0 - (1.0 - u).sqrt()).sqrt();
                let theta = rng.gen::<f64>() * std::f64::consts::TAU;
                coords.push(r * theta.cos());
                coords.push(r * theta.sin());
            }
        }
    }
    PointCloud::from_flat(coords, dim)
}

/// Plain 2D regions for shape-discrimination experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Unit square [0,1]^2.
    Square,
    /// Unit disk.
    Disk,
    /// Annulus with inner and outer radii.
    Annulus { r_in: f64, r_out: f64 },
}

impl std::str::FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if lower == "square" {
            return Ok(Shape::Square);
        }
        if lower == "disk" {
            return Ok(Shape::Disk);
        }
        if let Some(args) = lower.strip_prefix("annulus(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if parts.len() == 2 {
                if let (Ok(r_in), Ok(r_out)) = (parts[0].parse(), parts[1].parse()) {
                    return Ok(Shape::Annulus { r_in, r_out });
                }
            }
        }
        Err(Error::InvalidConfig { message: format!("unknown shape '{s}'") })
    }
}

/// Uniform samples on the region, by rejection from its bounding box.
pub fn sample_shape(shape: Shape, n: usize, seed: RngSeed) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if let Shape::Annulus { r_in, r_out } = shape {
        if !(r_in >= 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(Error::InvalidShape {
                message: format!("annulus radii ({r_in}, {r_out}) need 0 <= r_in < r_out"),
            });
        }
    }
    let mut rng = seed.rng();
    let mut coords = Vec::with_capacity(n * 2);
    for _ in 0..n {
        match shape {
            Shape::Square => {
                coords.push(rng.gen::<f64>());
                coords.push(rng.gen::<f64>());
            }
            Shape::Disk => loop {
                let x = 2.0 * rng.gen::<f64>() - 1.0;
                let y = 2.0 * rng.gen::<f64>() - 1.0;
                if x * x + y * y <= 1.0 {
                    coords.push(x);
                    coords.push(y);
                    break;
                }
            },
            Shape::Annulus { r_in, r_out } => loop {
                let x = r_out * (2.0 * rng.gen::<f64>() - 1.0);
                let y = r_out * (2.0 * rng.gen::<f64>() - 1.0);
                let r2 = x * x + y * y;
                if r2 >= r_in * r_in && r2 <= r_out * r_out {
                    coords.push(x);
                    coords.push(y);
                    break;
                }
            },
        }
    }
    PointCloud::from_flat(coords, 2)
}

/// Add centered Gaussian noise with a diagonal covariance (one variance per
/// axis) to every point.
pub fn add_gaussian_noise(cloud: &PointCloud, cov: &[f64], seed: RngSeed) -> Result<PointCloud> {
    if cov.len() != cloud.dim() {
        return Err(Error::Dimension { expected: cloud.dim(), got: cov.len() });
    }
    if cov.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidConfig { message: "covariance entries must be >= 0".into() });
    }
    let sds: Vec<f64> = cov.iter().map(|v| v.sqrt()).collect();
    let normals: Vec<Option<Normal<f64>>> = sds
        .iter()
        .map(|&sd| if sd > 0.0 { Some(Normal::new(0.0, sd).expect("valid sd")) } else { None })
        .collect();
    let mut rng = seed.rng();
    let dim = cloud.dim();
    let mut coords = Vec::with_capacity(cloud.len() * dim);
    for p in cloud.iter_points() {
        for j in 0..dim {
            let noise = normals[j].map_or(0.0, |nd| nd.sample(&mut rng));
            coords.push(p[j] + noise);
        }
    }
    let out = PointCloud::from_flat(coords, dim)?;
    Ok(match &cloud.id {
        Some(id) => out.with_id(id.clone()),
        None => out,
    })
}

/// Parameters of the chromatin-fiber generator. The JSON parameter file
/// mirrors these field names exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ChromatinParams {
    /// Loops per megabase; 0 disables loops entirely.
    pub loop_density_c: f64,
    /// Genome length in megabases.
    pub genome_length_mb: f64,
    /// Number of fiber points (backbone discretization).
    pub n_points: usize,
    /// Distance between consecutive fiber points, in nm.
    pub step_nm: f64,
    /// Diagonal localization-noise covariance, nm^2 per axis.
    pub noise_cov: [f64; 3],
    /// Loop radius in nm; the effective radius is nudged so that every
    /// chord between consecutive loop points is exactly `step_nm`.
    pub loop_radius_nm: f64,
    /// Final coordinate divisor (data analyzed on a 1:scale basis).
    pub scale: f64,
    /// Expected loops = loop_density_c * genome_length_mb * this factor.
    /// The default 0.4 anchors the c = 25, 249 Mb configuration at 2490
    /// expected loops.
    pub loop_rate_calibration: f64,
}

impl Default for ChromatinParams {
    fn default() -> Self {
        ChromatinParams {
            loop_density_c: 25.0,
            genome_length_mb: 249.0,
            n_points: 49_800,
            step_nm: 45.0,
            noise_cov: [45.0, 45.0, 90.0],
            loop_radius_nm: 50.0,
            scale: 45.0,
            loop_rate_calibration: 0.4,
        }
    }
}

impl ChromatinParams {
    /// Expected number of loops for this configuration.
    pub fn expected_loops(&self) -> f64 {
        self.loop_density_c * self.genome_length_mb * self.loop_rate_calibration
    }

    /// Number of fiber points consumed by one loop (full circle with all
    /// chords equal to the step length).
    pub fn points_per_loop(&self) -> usize {
        let half_angle = (self.step_nm / (2.0 * self.loop_radius_nm)).min(1.0).asin();
        let turns = std::f64::consts::PI / half_angle;
        (turns.round() as usize).max(3)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.loop_density_c >= 0.0
            && self.genome_length_mb > 0.0
            && self.n_points >= 2
            && self.step_nm > 0.0
            && self.noise_cov.iter().all(|&v| v >= 0.0)
            && self.loop_radius_nm > 0.0
            && self.scale > 0.0
            && self.loop_rate_calibration >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig { message: "chromatin parameters out of range".into() })
        }
    }
}

/// One simulated fiber: the clean backbone (nm units) and the noisy,
/// rescaled cloud that the analysis consumes.
#[derive(Debug, Clone)]
pub struct ChromatinFiber {
    pub backbone: PointCloud,
    pub noisy: PointCloud,
    pub loop_count: usize,
}

// Uniform direction on the unit sphere.
fn random_unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let normal = Normal::new(0.0, 1.0).expect("valid");
        let v: [f64; 3] = [normal.sample(rng), normal.sample(rng), normal.sample(rng)];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-12 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

// A unit vector orthogonal to `u`.
fn orthogonal_unit3(u: [f64; 3], rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let w = random_unit3(rng);
        let dot = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
        let v = [w[0] - dot * u[0], w[1] - dot * u[1], w[2] - dot * u[2]];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-6 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

/// Simulate one noisy chromatin fiber.
///
/// The backbone is a 3D random walk with fixed step length into which
/// closed circular loops are inserted: the loop count is Poisson with mean
/// [`ChromatinParams::expected_loops`], loop positions are uniform along
/// the genome, and each loop consumes a full circle of fiber points before
/// the walk resumes from the loop's last point. Consecutive backbone points
/// are always exactly `step_nm` apart. The walk softly avoids itself by
/// resampling a step that lands within `step_nm / 2` of any of the previous
/// five points. The noisy cloud adds per-axis Gaussian noise and divides
/// all coordinates by `scale`.
pub fn simulate_chromatin(params: &ChromatinParams, seed: RngSeed) -> Result<ChromatinFiber> {
    params.validate()?;
    let mut rng = seed.rng();
    let n = params.n_points;
    let step = params.step_nm;

    let per_loop = params.points_per_loop();
    let lambda = params.expected_loops();
    let loop_count = if lambda > 0.0 {
        Poisson::new(lambda)
            .map_err(|_| Error::InvalidConfig { message: format!("bad loop rate {lambda}") })?
            .sample(&mut rng) as usize
    } else {
        0
    };
    let consumed = loop_count * per_loop;
    // the walk origin always occupies one point, so loops may consume at
    // most n - 1
    if consumed >= n {
        return Err(Error::TooManyLoops { needed: consumed + 1, available: n });
    }

    // Place loop start indices uniformly over the walk coordinate, then
    // shift each start by the room taken by earlier loops; this keeps
    // placements uniform while guaranteeing loops never overlap.
    let walk_points = n - consumed;
    let mut starts: Vec<usize> =
        (0..loop_count).map(|_| rng.gen_range(0..walk_points)).collect();
    starts.sort_unstable();
    for (i, s) in starts.iter_mut().enumerate() {
        *s += i * per_loop;
    }

    // effective radius: chord of the rounded subdivision equals the step
    let r_eff = step / (2.0 * (std::f64::consts::PI / per_loop as f64).sin());

    let mut pts: Vec<[f64; 3]> = Vec::with_capacity(n);
    pts.push([0.0, 0.0, 0.0]);
    let mut next_loop = 0usize;

    let step_from = |prev: [f64; 3], pts: &[[f64; 3]], rng: &mut ChaCha8Rng| -> [f64; 3] {
        let guard = step * 0.5;
        let recent = &pts[pts.len().saturating_sub(5)..];
        let mut candidate = [0.0; 3];
        for _ in 0..32 {
            let dir = random_unit3(rng);
            candidate =
                [prev[0] + step * dir[0], prev[1] + step * dir[1], prev[2] + step * dir[2]];
            let too_close = recent.iter().any(|p| {
                let dx = candidate[0] - p[0];
                let dy = candidate[1] - p[1];
                let dz = candidate[2] - p[2];
                (dx * dx + dy * dy + dz * dz).sqrt() < guard
            });
            if !too_close {
                break;
            }
        }
        candidate
    };

    while pts.len() < n {
        let prev = *pts.last().expect("non-empty");
        let at_loop = next_loop < starts.len() && pts.len() == starts[next_loop] + 1;
        if at_loop && pts.len() + per_loop <= n {
            next_loop += 1;
            // first loop point is an ordinary step; the circle is oriented
            // so that this point lies on it
            let q0 = step_from(prev, &pts, &mut rng);
            let u = random_unit3(&mut rng);
            let v = orthogonal_unit3(u, &mut rng);
            let center = [q0[0] - r_eff * u[0], q0[1] - r_eff * u[1], q0[2] - r_eff * u[2]];
            for j in 0..per_loop {
                if j == 0 {
                    pts.push(q0);
                    continue;
                }
                let phi = std::f64::consts::TAU * j as f64 / per_loop as f64;
                let (c, s) = (phi.cos(), phi.sin());
                pts.push([
                    center[0] + r_eff * (c * u[0] + s * v[0]),
                    center[1] + r_eff * (c * u[1] + s * v[1]),
                    center[2] + r_eff * (c * u[2] + s * v[2]),
                ]);
            }
        } else {
            pts.push(step_from(prev, &pts, &mut rng));
        }
    }

    let backbone = PointCloud::from_flat(pts.iter().flatten().copied().collect(), 3)?;
    // localization noise, then the 1:scale rescale
    let noisy_nm = add_gaussian_noise_with_rng(&backbone, &params.noise_cov, &mut rng)?;
    let scaled: Vec<f64> = noisy_nm.coords().iter().map(|c| c / params.scale).collect();
    let noisy = PointCloud::from_flat(scaled, 3)?;
    Ok(ChromatinFiber { backbone, noisy, loop_count })
}

fn add_gaussian_noise_with_rng(
    cloud: &PointCloud,
    cov: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<PointCloud> {
    let dim = cloud.dim();
    let normals: Vec<Option<Normal<f64>>> = cov
        .iter()
        .map(|&v| if v > 0.0 { Some(Normal::new(0.0, v.sqrt()).expect("valid sd")) } else { None })
        .collect();
    let mut coords = Vec::with_capacity(cloud.len() * dim);
    for p in cloud.iter_points() {
        for j in 0..dim {
            let noise = normals[j].map_or(0.0, |nd| nd.sample(rng));
            coords.push(p[j] + noise);
        }
    }
    PointCloud::from_flat(coords, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sq_dist;
    use approx::assert_relative_eq;

    #[test]
    fn seeded_sampling_is_reproducible() {
        let seed = RngSeed::new(42).with_stream(3);
        let a = sample_space(AnalyticSpace::UnitDiskQuadratic, 500, seed).unwrap();
        let b = sample_space(AnalyticSpace::UnitDiskQuadratic, 500, seed).unwrap();
        assert_eq!(a.coords(), b.coords());
        let c = sample_space(AnalyticSpace::UnitDiskQuadratic, 500, seed.with_stream(4)).unwrap();
        assert_ne!(a.coords(), c.coords());
    }

    #[test]
    fn linear_sample_mean() {
        // E[X] = 2/3, Var = 1/18 under density 2x
        let n = 100_000;
        let cloud = sample_space(AnalyticSpace::UnitIntervalLinear, n, RngSeed::new(7)).unwrap();
        let mean = cloud.coords().iter().sum::<f64>() / n as f64;
        let se = (1.0 / 18.0_f64 / n as f64).sqrt();
        assert!((mean - 2.0 / 3.0).abs() < 3.0 * se, "mean {mean} too far from 2/3");
    }

    #[test]
    fn disk_sample_inside_support() {
        let cloud = sample_space(AnalyticSpace::UnitDiskQuadratic, 2000, RngSeed::new(1)).unwrap();
        assert!(cloud.iter_points().all(|p| p[0] * p[0] + p[1] * p[1] <= 1.0));
    }

    #[test]
    fn annulus_radii_in_range() {
        let shape = Shape::Annulus { r_in: 0.5, r_out: 1.0 };
        let cloud = sample_shape(shape, 2000, RngSeed::new(2)).unwrap();
        for p in cloud.iter_points() {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((0.5..=1.0).contains(&r));
        }
    }

    #[test]
    fn square_sample_means() {
        let n = 50_000;
        let cloud = sample_shape(Shape::Square, n, RngSeed::new(3)).unwrap();
        let se = (1.0 / 12.0_f64 / n as f64).sqrt();
        for j in 0..2 {
            let mean = cloud.iter_points().map(|p| p[j]).sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() < 3.0 * se);
        }
    }

    #[test]
    fn invalid_annulus_rejected() {
        let shape = Shape::Annulus { r_in: 1.0, r_out: 0.5 };
        assert!(matches!(
            sample_shape(shape, 10, RngSeed::new(0)),
            Err(Error::InvalidShape { .. })
        ));
    }

    #[test]
    fn noise_zero_is_identity() {
        let cloud = sample_shape(Shape::Square, 50, RngSeed::new(5)).unwrap();
        let noisy = add_gaussian_noise(&cloud, &[0.0, 0.0], RngSeed::new(6)).unwrap();
        assert_eq!(noisy.coords(), cloud.coords());
    }

    #[test]
    fn noise_variance_matches_cov() {
        let n = 49_800;
        let cloud =
            PointCloud::from_flat(vec![0.0; n * 3], 3).unwrap_or_else(|_| unreachable!());
        let cov = [45.0, 45.0, 90.0];
        let noisy = add_gaussian_noise(&cloud, &cov, RngSeed::new(11)).unwrap();
        for j in 0..3 {
            let var =
                noisy.iter_points().map(|p| p[j] * p[j]).sum::<f64>() / n as f64;
            assert!((var - cov[j]).abs() < 0.05 * cov[j], "axis {j}: var {var} vs {}", cov[j]);
        }
    }

    #[test]
    fn chromatin_step_lengths_exact() {
        let params = ChromatinParams {
            n_points: 2000,
            genome_length_mb: 10.0,
            loop_density_c: 25.0,
            ..ChromatinParams::default()
        };
        let fiber = simulate_chromatin(&params, RngSeed::new(9)).unwrap();
        assert!(fiber.loop_count > 0, "expected some loops at c = 25");
        let b = &fiber.backbone;
        for i in 1..b.len() {
            let d = sq_dist(b.point(i), b.point(i - 1)).sqrt();
            assert_relative_eq!(d, params.step_nm, max_relative = 1e-9);
        }
    }

    #[test]
    fn chromatin_zero_density_has_no_loops() {
        let params = ChromatinParams {
            loop_density_c: 0.0,
            n_points: 500,
            ..ChromatinParams::default()
        };
        let fiber = simulate_chromatin(&params, RngSeed::new(10)).unwrap();
        assert_eq!(fiber.loop_count, 0);
    }

    #[test]
    fn chromatin_zero_noise_is_scaled_backbone() {
        let params = ChromatinParams {
            loop_density_c: 2.0,
            genome_length_mb: 5.0,
            n_points: 300,
            noise_cov: [0.0, 0.0, 0.0],
            ..ChromatinParams::default()
        };
        let fiber = simulate_chromatin(&params, RngSeed::new(12)).unwrap();
        for (a, b) in fiber.noisy.coords().iter().zip(fiber.backbone.coords()) {
            assert_eq!(*a, b / params.scale);
        }
    }

    #[test]
    fn chromatin_expected_loop_calibration() {
        // paper-scale configuration: c = 25 over 249 Mb calibrates to 2490
        let params = ChromatinParams::default();
        assert_relative_eq!(params.expected_loops(), 2490.0, max_relative = 1e-12);
    }

    #[test]
    fn chromatin_too_many_loops() {
        let params = ChromatinParams {
            loop_density_c: 1e5,
            n_points: 100,
            ..ChromatinParams::default()
        };
        assert!(matches!(
            simulate_chromatin(&params, RngSeed::new(13)),
            Err(Error::TooManyLoops { .. })
        ));
    }

    #[test]
    fn loop_count_concentrates_around_expectation() {
        let params = ChromatinParams {
            loop_density_c: 10.0,
            genome_length_mb: 10.0,
            n_points: 3000,
            ..ChromatinParams::default()
        };
        let expected = params.expected_loops(); // 40
        let reps = 60;
        let mean = (0..reps)
            .map(|s| {
                simulate_chromatin(&params, RngSeed::new(100).with_stream(s))
                    .unwrap()
                    .loop_count as f64
            })
            .sum::<f64>()
            / reps as f64;
        let tol = 3.0 * (expected / reps as f64).sqrt();
        assert!((mean - expected).abs() < tol, "mean {mean} vs expected {expected}");
    }

    #[test]
    fn shape_parsing() {
        assert_eq!("square".parse::<Shape>().unwrap(), Shape::Square);
        assert_eq!(
            "annulus(0.5, 1.0)".parse::<Shape>().unwrap(),
            Shape::Annulus { r_in: 0.5, r_out: 1.0 }
        );
        assert!("blob".parse::<Shape>().is_err());
    }
}
