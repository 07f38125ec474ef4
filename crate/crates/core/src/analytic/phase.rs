//! Critical curves and phases in the `(λ, t)` plane.

use serde::{Deserialize, Serialize};

use super::AnalyticError;
use crate::scalar::Real;

/// Critical values of `t` at fixed `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCurves<T> {
    pub lambda: T,
    /// Crescents touch the real axis outside the real support.
    pub t_cr: T,
    /// Complex domain touches the axis at the origin.
    pub t_c: T,
    /// Three real intervals merge; only for `1/9 < λ < 8/9`.
    pub t_r: Option<T>,
    pub delta_lambda: T,
    pub xi_lambda: T,
}

pub fn critical_curves<T: Real>(lambda: T) -> Result<CriticalCurves<T>, AnalyticError> {
    if !(lambda > T::zero() && lambda < T::one()) {
        return Err(AnalyticError::InvalidParameter(format!("critical curves need 0 < lambda < 1, got {lambda}")));
    }
    let k = |x: f64| T::lit(x);
    let one = T::one();
    let t_cr = lambda / (lambda - one);
    let t_c = (lambda - one) / lambda;
    let e = k(8.0) - k(9.0) * lambda;
    let xi = -k(729.0) * lambda * (lambda - one) * (k(7.0) * lambda - k(8.0));
    let delta = k(531_441.0) * (e * (one - lambda) * lambda).powi(2);
    let t_r = if lambda > k(1.0 / 9.0) && lambda < k(8.0 / 9.0) {
        // sqrt(Δ) in closed form keeps full precision.
        let sq = k(729.0) * e.abs() * (one - lambda) * lambda;
        let cubes = ((xi + sq).abs().cbrt() + (xi - sq).abs().cbrt()) / k(2.0).cbrt();
        Some((k(6.0) * (k(2.0) - k(3.0) * lambda) - cubes) / (k(3.0) * e))
    } else {
        None
    };
    Ok(CriticalCurves { lambda, t_cr, t_c, t_r, delta_lambda: delta, xi_lambda: xi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseLabel {
    /// `t > 0`: all eigenvalues real.
    QuasiHermitian,
    /// Two complex blobs, one real interval.
    DisconnectedComplex,
    /// Connected complex domain, three real intervals.
    ThreeRealIntervals,
    /// Connected complex domain, one real interval.
    ConnectedSingle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseClass {
    pub label: PhaseLabel,
    /// `t` lies on a critical curve; the label is that of the transition
    /// point itself.
    pub on_boundary: bool,
}

/// Phase of `(λ, t)`. Points on a critical curve get [`PhaseLabel::ConnectedSingle`]
/// and `on_boundary = true`: at each curve the complex domain touches the
/// axis and the real support is a single interval.
pub fn phase_classify<T: Real>(lambda: T, t: T) -> Result<PhaseClass, AnalyticError> {
    if !t.is_finite() || t == T::zero() {
        return Err(AnalyticError::InvalidParameter(format!("t = {t} must be finite and nonzero")));
    }
    let curves = critical_curves(lambda)?;
    let free = |label| Ok(PhaseClass { label, on_boundary: false });
    if t > T::zero() {
        return free(PhaseLabel::QuasiHermitian);
    }
    let tie = |c: T| (t - c).abs() <= T::lit(1e-12) * c.abs().max(T::one());
    if tie(curves.t_cr) || tie(curves.t_c) || curves.t_r.is_some_and(tie) {
        return Ok(PhaseClass { label: PhaseLabel::ConnectedSingle, on_boundary: true });
    }
    let (lo, hi) = (curves.t_c.min(curves.t_cr), curves.t_c.max(curves.t_cr));
    if lo < t && t < hi {
        return free(PhaseLabel::DisconnectedComplex);
    }
    let half = T::lit(0.5);
    let post_critical = (lambda > half && t < curves.t_cr) || (lambda < half && t > curves.t_cr);
    if !post_critical {
        return free(PhaseLabel::ConnectedSingle);
    }
    let merged = match curves.t_r {
        Some(tr) if lambda > half => t < tr,
        Some(tr) => t > tr,
        None => false,
    };
    free(if merged { PhaseLabel::ConnectedSingle } else { PhaseLabel::ThreeRealIntervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::support_intervals;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let c = critical_curves(0.75f64).unwrap();
        assert!((c.t_cr + 3.0).abs() < 1e-15);
        assert!((c.t_r.unwrap() + 3.378_75).abs() < 1e-4);
        let h = critical_curves(0.5f64).unwrap();
        assert_eq!(h.t_cr, -1.0);
        assert_eq!(h.t_c, -1.0);
        assert!((h.t_r.unwrap() + 1.0).abs() < 1e-9);
        assert!(critical_curves(0.1).unwrap().t_r.is_none());
        assert!(critical_curves(0.9).unwrap().t_r.is_none());
        assert!(critical_curves(0.0).is_err());
    }

    #[test]
    fn delta_matches_its_square_root() {
        let c = critical_curves(0.3f64).unwrap();
        let sq = 729.0 * (8.0 - 2.7) * 0.7 * 0.3;
        assert!((c.delta_lambda.sqrt() - sq).abs() < 1e-9 * sq);
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_classify(0.75, -1.0).unwrap().label, PhaseLabel::DisconnectedComplex);
        assert_eq!(phase_classify(0.75, -3.2).unwrap().label, PhaseLabel::ThreeRealIntervals);
        assert_eq!(phase_classify(0.75, -3.5).unwrap().label, PhaseLabel::ConnectedSingle);
        assert_eq!(phase_classify(0.75, 1.0).unwrap().label, PhaseLabel::QuasiHermitian);
        assert_eq!(phase_classify(0.25, -0.3125).unwrap().label, PhaseLabel::ThreeRealIntervals);
        let edge = phase_classify(0.75, -3.0).unwrap();
        assert!(edge.on_boundary);
        assert_eq!(edge.label, PhaseLabel::ConnectedSingle);
        assert!(phase_classify(0.5, -1.0).unwrap().on_boundary);
        assert_eq!(phase_classify(0.5, -2.0).unwrap().label, PhaseLabel::ConnectedSingle);
    }

    #[test]
    fn interval_count_agrees_with_phase() {
        for (lambda, t) in
            [(0.75, -3.2), (0.75, -3.5), (0.75, -2.0), (0.3, -0.45), (0.3, -0.9), (0.05, -0.03), (0.6, -1.505)]
        {
            let label = phase_classify(lambda, t).unwrap().label;
            let n = support_intervals(lambda, t, 1.0).unwrap().len();
            let want = if label == PhaseLabel::ThreeRealIntervals { 3 } else { 1 };
            assert_eq!(n, want, "λ={lambda} t={t} {label:?}");
        }
    }

    proptest! {
        #[test]
        fn curve_relations(lambda in 0.001f64..0.999) {
            let c = critical_curves(lambda).unwrap();
            prop_assert!((c.t_c * c.t_cr - 1.0).abs() < 1e-12);
            if let Some(tr) = c.t_r {
                let mirror = critical_curves(1.0 - lambda).unwrap().t_r.unwrap();
                prop_assert!((tr * mirror - 1.0).abs() < 1e-8);
            }
        }

        #[test]
        fn phases_are_mirror_symmetric(lambda in 0.01f64..0.99, t in -20.0f64..-0.05) {
            let a = phase_classify(lambda, t).unwrap();
            let b = phase_classify(1.0 - lambda, 1.0 / t).unwrap();
            prop_assert_eq!(a.label, b.label);
        }
    }
}
