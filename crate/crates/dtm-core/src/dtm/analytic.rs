//! Closed-form DTM functions and DTM densities for the four reference
//! spaces. These are the exact oracles the empirical pipeline is validated
//! against.
//!
//! Supported pairs:
//!
//! | space                | m    | DTM | density |
//! |----------------------|------|-----|---------|
//! | UnitIntervalUniform  | 1    | yes | yes     |
//! | UnitIntervalUniform  | 0.1  | yes | no Lebesgue density |
//! | UnitIntervalLinear   | 0.1  | yes | yes     |
//! | UnitSquareUniform    | 1    | yes | yes     |
//! | UnitDiskQuadratic    | 1    | yes | yes     |
//!
//! The one-dimensional densities are unbounded at an endpoint of their
//! support; they are evaluated as-is with no clipping.

use crate::error::{Error, Result};
use crate::synth::AnalyticSpace;

use super::Mass;

fn m_is(m: Mass, target: f64) -> bool {
    (m.value() - target).abs() <= 1e-12
}

// Piece boundaries of the UnitIntervalLinear m = 0.1 formulas.
fn linear_dtm_breaks() -> (f64, f64) {
    (0.1_f64.sqrt() / 2.0, 0.5 + 3.0 / (2.0 * 10.0_f64.sqrt()))
}

// Support and branch points of the UnitIntervalLinear m = 0.1 density.
// y_min is the global minimum of the DTM function, attained inside the
// rightmost quadratic piece.
fn linear_density_breaks() -> (f64, f64, f64) {
    let y_min = 24.0 * 10.0_f64.sqrt() - 13661.0 / 180.0;
    let b1 = (19.0 - 6.0 * 10.0_f64.sqrt()) / 120.0;
    let y_star = 18.0 * (2.0_f64 / 5.0).sqrt() - 683.0 / 60.0;
    (y_min, b1, y_star)
}

fn check_dim(space: AnalyticSpace, x: &[f64]) -> Result<()> {
    let expected = space.dim();
    if x.len() != expected {
        return Err(Error::Dimension { expected, got: x.len() });
    }
    Ok(())
}

fn domain_err(space: AnalyticSpace, x: &[f64]) -> Error {
    Error::Domain { message: format!("point {x:?} outside the support of {}", space.name()) }
}

/// Exact DTM value of the reference space at `x`.
pub fn analytic_dtm(space: AnalyticSpace, x: &[f64], m: Mass) -> Result<f64> {
    check_dim(space, x)?;
    match space {
        AnalyticSpace::UnitIntervalUniform => {
            let t = x[0];
            if !(0.0..=1.0).contains(&t) {
                return Err(domain_err(space, x));
            }
            if m_is(m, 1.0) {
                Ok(1.0 / 3.0 - t + t * t)
            } else if m_is(m, 0.1) {
                // constant on [0.05, 0.95]; quadratic tails by symmetry
                Ok(if t < 0.05 {
                    t * t - 0.1 * t + 1.0 / 300.0
                } else if t <= 0.95 {
                    1.0 / 1200.0
                } else {
                    let s = 1.0 - t;
                    s * s - 0.1 * s + 1.0 / 300.0
                })
            } else {
                Err(Error::UnsupportedOracle { space: space.name(), m: m.value() })
            }
        }
        AnalyticSpace::UnitIntervalLinear => {
            let t = x[0];
            if !(0.0..=1.0).contains(&t) {
                return Err(domain_err(space, x));
            }
            if !m_is(m, 0.1) {
                return Err(Error::UnsupportedOracle { space: space.name(), m: m.value() });
            }
            let (x_lo, x_hi) = linear_dtm_breaks();
            Ok(if t <= x_lo {
                t * t - (2.0 / 3.0) * (2.0_f64 / 5.0).sqrt() * t + 1.0 / 20.0
            } else if t <= x_hi {
                1.0 / (4800.0 * t * t)
            } else {
                t * t + (18.0 * (2.0_f64 / 5.0).sqrt() - 40.0 / 3.0) * t + 19.0 / 20.0
            })
        }
        AnalyticSpace::UnitSquareUniform => {
            if !m_is(m, 1.0) {
                return Err(Error::UnsupportedOracle { space: space.name(), m: m.value() });
            }
            let (a, b) = (x[0], x[1]);
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                return Err(domain_err(space, x));
            }
            Ok(a * a + b * b - a - b + 2.0 / 3.0)
        }
        AnalyticSpace::UnitDiskQuadratic => {
            if !m_is(m, 1.0) {
                return Err(Error::UnsupportedOracle { space: space.name(), m: m.value() });
            }
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 > 1.0 {
                return Err(domain_err(space, x));
            }
            Ok(r2 + 1.0 / 3.0)
        }
    }
}

/// Open support interval of the DTM density of a supported pair.
pub fn density_support(space: AnalyticSpace, m: Mass) -> Result<(f64, f64)> {
    match space {
        AnalyticSpace::UnitIntervalUniform if m_is(m, 1.0) => Ok((1.0 / 12.0, 1.0 / 3.0)),
        AnalyticSpace::UnitIntervalUniform if m_is(m, 0.1) => {
            Err(Error::NoDensity { space: space.name(), m: m.value() })
        }
        AnalyticSpace::UnitIntervalLinear if m_is(m, 0.1) => {
            let (y_min, _, _) = linear_density_breaks();
            Ok((y_min, 1.0 / 20.0))
        }
        AnalyticSpace::UnitSquareUniform if m_is(m, 1.0) => Ok((1.0 / 6.0, 2.0 / 3.0)),
        AnalyticSpace::UnitDiskQuadratic if m_is(m, 1.0) => Ok((1.0 / 3.0, 4.0 / 3.0)),
        _ => Err(Error::UnsupportedOracle { space: space.name(), m: m.value() }),
    }
}

/// Exact DTM density of the reference space at `y`; zero outside the
/// support interval.
///
/// `UnitIntervalUniform` with m = 0.1 has no Lebesgue density (the DTM
/// function is constant on [0.05, 0.95], so 90% of the mass is an atom) and
/// returns [`Error::NoDensity`].
pub fn analytic_density(space: AnalyticSpace, y: f64, m: Mass) -> Result<f64> {
    let (lo, hi) = density_support(space, m)?;
    if y < lo || y > hi {
        return Ok(0.0);
    }
    match space {
        AnalyticSpace::UnitIntervalUniform => Ok(2.0 * 3.0_f64.sqrt() / (12.0 * y - 1.0).sqrt()),
        AnalyticSpace::UnitIntervalLinear => {
            let (y_min, b1, y_star) = linear_density_breaks();
            let rad = (180.0 * (y - y_min)).sqrt();
            Ok(if y <= b1 {
                (80.0 * 5.0_f64.sqrt() - 108.0 * 2.0_f64.sqrt()) / rad
            } else if y <= y_star {
                1.0 + (40.0 * 5.0_f64.sqrt() - 54.0 * 2.0_f64.sqrt()) / rad
                    + 1.0 / (4800.0 * y * y)
            } else if y <= 1.0 / 120.0 {
                1.0 / (4800.0 * y * y)
            } else {
                -1.0 + 2.0 / (90.0 * y - 0.5).sqrt()
            })
        }
        AnalyticSpace::UnitSquareUniform => {
            if y <= 5.0 / 12.0 {
                Ok(std::f64::consts::PI)
            } else {
                // 2 arccot(2 sqrt(y - 5/12)) - 2 arctan(sqrt(4y - 5/3))
                let t = 2.0 * (y - 5.0 / 12.0).sqrt();
                Ok(std::f64::consts::PI - 4.0 * t.atan())
            }
        }
        AnalyticSpace::UnitDiskQuadratic => Ok(-2.0 * y + 8.0 / 3.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh;
    use approx::assert_relative_eq;

    fn m(v: f64) -> Mass {
        Mass::new(v).unwrap()
    }

    #[test]
    fn interval_uniform_m1_examples() {
        let v = analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[0.5], m(1.0)).unwrap();
        assert_relative_eq!(v, 1.0 / 12.0, max_relative = 1e-15);
        let v = analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[0.0], m(1.0)).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn interval_uniform_m01_middle_piece() {
        let v = analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[0.5], m(0.1)).unwrap();
        assert_relative_eq!(v, 1.0 / 1200.0, max_relative = 1e-15);
        // continuity at the piece boundaries
        let a = analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[0.05 - 1e-12], m(0.1)).unwrap();
        assert_relative_eq!(a, 1.0 / 1200.0, epsilon = 1e-10);
        let b = analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[0.95 + 1e-12], m(0.1)).unwrap();
        assert_relative_eq!(b, 1.0 / 1200.0, epsilon = 1e-10);
        // endpoint value: the whole 10% mass sits on one side
        let e = analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[0.0], m(0.1)).unwrap();
        assert_relative_eq!(e, 1.0 / 300.0, max_relative = 1e-15);
    }

    #[test]
    fn disk_dtm_at_origin() {
        let v = analytic_dtm(AnalyticSpace::UnitDiskQuadratic, &[0.0, 0.0], m(1.0)).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0);
    }

    #[test]
    fn disk_density_examples() {
        let v = analytic_density(AnalyticSpace::UnitDiskQuadratic, 0.7, m(1.0)).unwrap();
        assert_relative_eq!(v, -1.4 + 8.0 / 3.0, max_relative = 1e-15);
        assert_eq!(analytic_density(AnalyticSpace::UnitDiskQuadratic, 2.0, m(1.0)).unwrap(), 0.0);
    }

    #[test]
    fn square_density_examples() {
        let v = analytic_density(AnalyticSpace::UnitSquareUniform, 0.3, m(1.0)).unwrap();
        assert_relative_eq!(v, std::f64::consts::PI);
        // continuous across the kink and zero at the right endpoint
        let a = analytic_density(AnalyticSpace::UnitSquareUniform, 5.0 / 12.0, m(1.0)).unwrap();
        assert_relative_eq!(a, std::f64::consts::PI);
        let b = analytic_density(AnalyticSpace::UnitSquareUniform, 2.0 / 3.0, m(1.0)).unwrap();
        assert_relative_eq!(b, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn unsupported_pairs_error() {
        assert!(matches!(
            analytic_dtm(AnalyticSpace::UnitDiskQuadratic, &[0.0, 0.0], m(0.5)),
            Err(Error::UnsupportedOracle { .. })
        ));
        assert!(matches!(
            analytic_density(AnalyticSpace::UnitIntervalUniform, 0.001, m(0.1)),
            Err(Error::NoDensity { .. })
        ));
    }

    #[test]
    fn outside_support_errors() {
        assert!(matches!(
            analytic_dtm(AnalyticSpace::UnitIntervalUniform, &[1.5], m(1.0)),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            analytic_dtm(AnalyticSpace::UnitDiskQuadratic, &[0.9, 0.9], m(1.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn linear_dtm_continuous_at_breaks() {
        let (x_lo, x_hi) = super::linear_dtm_breaks();
        for x in [x_lo, x_hi] {
            let a = analytic_dtm(AnalyticSpace::UnitIntervalLinear, &[x - 1e-10], m(0.1)).unwrap();
            let b = analytic_dtm(AnalyticSpace::UnitIntervalLinear, &[x + 1e-10], m(0.1)).unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-8);
        }
        // spot value: the middle piece at x = 1/2 gives 1/1200
        let v = analytic_dtm(AnalyticSpace::UnitIntervalLinear, &[0.5], m(0.1)).unwrap();
        assert_relative_eq!(v, 1.0 / 1200.0, max_relative = 1e-14);
    }

    // Every density with an oracle integrates to one; tanh-sinh handles the
    // unbounded endpoints of the one-dimensional cases.
    #[test]
    fn densities_integrate_to_one() {
        let cases = [
            (AnalyticSpace::UnitIntervalUniform, 1.0),
            (AnalyticSpace::UnitIntervalLinear, 0.1),
            (AnalyticSpace::UnitSquareUniform, 1.0),
            (AnalyticSpace::UnitDiskQuadratic, 1.0),
        ];
        for (space, mv) in cases {
            let mass = m(mv);
            let (lo, hi) = density_support(space, mass).unwrap();
            let mut cuts = vec![lo, hi];
            if space == AnalyticSpace::UnitIntervalLinear {
                let (_, b1, y_star) = super::linear_density_breaks();
                cuts = vec![lo, b1, y_star, 1.0 / 120.0, hi];
            }
            if space == AnalyticSpace::UnitSquareUniform {
                cuts = vec![lo, 5.0 / 12.0, hi];
            }
            let total: f64 = cuts
                .windows(2)
                .map(|w| {
                    tanh_sinh(|y| analytic_density(space, y, mass).unwrap(), w[0], w[1], 1e-12)
                })
                .sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-6);
        }
    }
}
