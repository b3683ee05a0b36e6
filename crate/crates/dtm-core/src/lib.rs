//! Distance-to-measure (DTM) signatures and DTM-density based point-cloud
//! discrimination.
//!
//! The pipeline implemented by this crate transforms a point cloud into a
//! one-dimensional *DTM signature* (the empirical distance-to-measure value
//! at every sample point), estimates the probability density of that
//! signature by kernel density estimation, and compares point clouds through
//! L1 distances between the estimated densities. On top of this sit
//! average-linkage clustering, k-NN hold-out classification, analytic
//! reference spaces with closed-form DTM functions and densities, seeded
//! synthetic samplers (including a noisy chromatin-fiber generator), and a
//! Monte Carlo harness that checks the pointwise central limit theorem of
//! the plug-in density estimator.
//!
//! Modules mirror the pipeline stages:
//!
//! * [`geometry`] — point clouds, file I/O, exact k-nearest-neighbor index
//! * [`dtm`] — empirical and analytic DTM functions and signatures
//! * [`kde`] — kernels, bandwidth rules, density estimates, L1 distance
//! * [`analysis`] — distance matrices, UPGMA dendrograms, classification
//! * [`synth`] — seeded samplers for reference spaces, shapes, chromatin
//! * [`validate`] — CLT Monte Carlo harness and Kolmogorov-Smirnov statistics
//!
//! With the default `parallel` feature the hot loops (signature evaluation,
//! pairwise distance matrices, Monte Carlo repetitions) run on rayon;
//! without it every entry point falls back to an identical sequential path.
//! Results are bit-for-bit independent of the thread count.

pub mod analysis;
pub mod dtm;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod kde;
pub mod plot;
pub mod quad;
pub mod stats;
pub mod synth;
pub mod validate;

pub use error::{Error, Result};

/// Write `bytes` to `path` atomically: a sibling temp file is written first
/// and then renamed into place, so readers never observe a partial file.
pub fn write_atomic(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let tmp = match path.file_name() {
        Some(name) => {
            let mut n = name.to_os_string();
            n.push(".partial");
            path.with_file_name(n)
        }
        None => {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                format!("not a file path: {}", path.display()),
            )))
        }
    };
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
