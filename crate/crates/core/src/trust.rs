//! Probability weighting between an argument's objective probability and the
//! trust a human expresses in it.
//!
//! The forward curve is `w(p) = p^g / (p^g + (1 - p)^g)^(1/g)`. It is the
//! identity at `g = 1`, and for small `g` it stops being monotone (roughly
//! below 0.28), so inversion is only offered for `g >= MIN_INVERTIBLE_GAMMA`.

use thiserror::Error;

use crate::num::Scalar;

/// Smallest gamma for which [`probability_of_trust`] is defined.
pub const MIN_INVERTIBLE_GAMMA: f64 = 0.3;

const DERIVATIVE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrustError {
    #[error("value {0} is outside [0, 1]")]
    Domain(f64),
    #[error("gamma {0} is outside (0, 1]")]
    InvalidGamma(f64),
    #[error("gamma {gamma} is below {min}: the weighting curve is not monotone there")]
    NonMonotoneGamma { gamma: f64, min: f64 },
    #[error("inversion did not converge within {iterations} iterations (last p = {last})")]
    ConvergenceFailure { iterations: usize, last: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightingParams<T> {
    pub gamma: T,
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> WeightingParams<T> {
    pub fn new(gamma: T) -> Self {
        WeightingParams { gamma, tolerance: T::lit(1e-10), max_iterations: 100 }
    }

    fn check_gamma(&self) -> Result<(), TrustError> {
        if !(self.gamma > T::zero() && self.gamma <= T::one()) {
            return Err(TrustError::InvalidGamma(self.gamma.to_f64_lossy()));
        }
        Ok(())
    }
}

fn check_unit<T: Scalar>(v: T) -> Result<(), TrustError> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(TrustError::Domain(v.to_f64_lossy()));
    }
    Ok(())
}

/// Trust perceived for an argument of objective probability `p`.
pub fn trust_of_probability<T: Scalar>(p: T, params: &WeightingParams<T>) -> Result<T, TrustError> {
    check_unit(p)?;
    params.check_gamma()?;
    Ok(weight(p, params.gamma))
}

fn weight<T: Scalar>(p: T, gamma: T) -> T {
    if p <= T::zero() {
        return T::zero();
    }
    if p >= T::one() {
        return T::one();
    }
    if gamma == T::one() {
        return p;
    }
    let pg = p.powf(gamma);
    let qg = (T::one() - p).powf(gamma);
    pg / (pg + qg).powf(gamma.recip())
}

/// d w / d p on the open interval.
fn weight_derivative<T: Scalar>(p: T, gamma: T) -> T {
    let q = T::one() - p;
    let pg = p.powf(gamma);
    let qg = q.powf(gamma);
    let s = pg + qg;
    let log_slope = gamma / p - (pg / p - qg / q) / s;
    weight(p, gamma) * log_slope
}

/// Objective probability whose weighted value equals `tau`.
///
/// Newton-Raphson from `p = tau`, falling back to bisection on the maintained
/// bracket whenever a step leaves it or the slope is too flat.
pub fn probability_of_trust<T: Scalar>(tau: T, params: &WeightingParams<T>) -> Result<T, TrustError> {
    check_unit(tau)?;
    params.check_gamma()?;
    let gamma = params.gamma;
    if gamma < T::lit(MIN_INVERTIBLE_GAMMA) {
        return Err(TrustError::NonMonotoneGamma { gamma: gamma.to_f64_lossy(), min: MIN_INVERTIBLE_GAMMA });
    }
    if tau <= T::zero() || tau >= T::one() || gamma == T::one() {
        return Ok(tau);
    }

    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut p = tau;
    let two = T::lit(2.0);
    for _ in 0..params.max_iterations {
        let g = weight(p, gamma) - tau;
        if g.abs() <= params.tolerance {
            return Ok(p);
        }
        if g > T::zero() {
            hi = p;
        } else {
            lo = p;
        }
        let slope = weight_derivative(p, gamma);
        let newton = p - g / slope;
        p = if slope.is_finite() && slope.abs() > T::lit(DERIVATIVE_FLOOR) && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / two
        };
        if hi - lo <= T::epsilon() {
            break;
        }
    }
    let g = weight(p, gamma) - tau;
    if g.abs() <= params.tolerance {
        return Ok(p);
    }
    Err(TrustError::ConvergenceFailure { iterations: params.max_iterations, last: p.to_f64_lossy() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(g: f64) -> WeightingParams<f64> {
        WeightingParams::new(g)
    }

    #[test]
    fn endpoints_are_fixed_points() {
        for g in [0.05, 0.2, 0.5, 0.85, 1.0] {
            assert_eq!(trust_of_probability(0.0, &params(g)).unwrap(), 0.0);
            assert_eq!(trust_of_probability(1.0, &params(g)).unwrap(), 1.0);
        }
        assert_eq!(probability_of_trust(0.0, &params(0.7)).unwrap(), 0.0);
        assert_eq!(probability_of_trust(1.0, &params(0.7)).unwrap(), 1.0);
    }

    #[test]
    fn forward_values() {
        // Reference values from an independent evaluation of the closed form.
        let t = trust_of_probability(0.62, &params(0.85)).unwrap();
        assert!((t - 0.591_987_490_452_837_8).abs() < 1e-12, "{t}");
        let t = trust_of_probability(0.566, &params(0.7)).unwrap();
        assert!((t - 0.5).abs() < 0.005, "{t}");
    }

    #[test]
    fn inverse_values() {
        let p = probability_of_trust(0.9, &params(0.7)).unwrap();
        assert!((p - 0.972).abs() < 0.001, "{p}");
        let p = probability_of_trust(0.2, &params(0.4)).unwrap();
        assert!((p - 0.150).abs() < 0.001, "{p}");
        assert_eq!(probability_of_trust(0.5, &params(1.0)).unwrap(), 0.5);
        // Brent's method on the closed form gives 0.62935018030009...
        let p = probability_of_trust(0.6, &params(0.85)).unwrap();
        assert!((p - 0.629_350_180_300_092_5).abs() < 1e-9, "{p}");
    }

    #[test]
    fn inverse_meets_tolerance() {
        for g in [0.3, 0.4, 0.55, 0.7, 0.85, 0.99] {
            for i in 1..100 {
                let tau = i as f64 / 100.0;
                let p = probability_of_trust(tau, &params(g)).unwrap();
                let back = trust_of_probability(p, &params(g)).unwrap();
                assert!((back - tau).abs() <= 1e-10, "g={g} tau={tau} p={p} back={back}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(trust_of_probability(1.2, &params(0.7)), Err(TrustError::Domain(1.2)));
        assert_eq!(probability_of_trust(-0.1, &params(0.7)), Err(TrustError::Domain(-0.1)));
        assert!(matches!(trust_of_probability(0.5, &params(0.0)), Err(TrustError::InvalidGamma(_))));
        assert!(matches!(trust_of_probability(0.5, &params(1.1)), Err(TrustError::InvalidGamma(_))));
        assert!(matches!(probability_of_trust(0.5, &params(0.2)), Err(TrustError::NonMonotoneGamma { .. })));
        // forward evaluation is still defined below the inversion threshold
        assert!(trust_of_probability(0.5, &params(0.1)).is_ok());
    }

    #[test]
    fn convergence_failure_is_reported() {
        let tight = WeightingParams { gamma: 0.7, tolerance: 0.0, max_iterations: 1 };
        assert!(matches!(probability_of_trust(0.3, &tight), Err(TrustError::ConvergenceFailure { .. })));
    }

    #[test]
    fn monotone_above_threshold() {
        for g in [0.3, 0.4, 0.6, 0.8, 1.0] {
            let mut prev = -1.0;
            for i in 0..=10_000 {
                let w = trust_of_probability(i as f64 / 10_000.0, &params(g)).unwrap();
                assert!(w > prev, "g={g} i={i}");
                prev = w;
            }
        }
    }

    #[test]
    fn not_monotone_for_small_gamma() {
        let g = 0.2;
        let ws: Vec<f64> = (0..=1000).map(|i| weight(i as f64 / 1000.0, g)).collect();
        assert!(ws.windows(2).any(|w| w[1] < w[0]));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for g in [0.4f64, 0.7, 0.9] {
            for p in [0.05f64, 0.3, 0.5, 0.77, 0.95] {
                let h = 1e-6;
                let fd = (weight(p + h, g) - weight(p - h, g)) / (2.0 * h);
                let d = weight_derivative(p, g);
                assert!((fd - d).abs() < 1e-6 * d.abs().max(1.0), "g={g} p={p} {fd} {d}");
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let p32 = WeightingParams { gamma: 0.7f32, tolerance: 1e-6, max_iterations: 100 };
        let p = probability_of_trust(0.9f32, &p32).unwrap();
        assert!((p - 0.972).abs() < 0.001);
        assert_eq!(trust_of_probability(1.0f32, &p32).unwrap(), 1.0);
    }

    proptest! {
        #[test]
        fn identity_at_gamma_one(p in 0.0f64..=1.0) {
            prop_assert_eq!(trust_of_probability(p, &params(1.0)).unwrap(), p);
        }

        #[test]
        fn roundtrip(p in 0.01f64..0.99, g in 0.4f64..=1.0) {
            let t = trust_of_probability(p, &params(g)).unwrap();
            let back = probability_of_trust(t, &params(g)).unwrap();
            prop_assert!((back - p).abs() <= 1e-6);
        }
    }
}
