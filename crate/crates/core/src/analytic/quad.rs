//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use super::AnalyticError;
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Result of [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gk15<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = h * T::lit(x);
        let pair = f(c - dx) + f(c + dx);
        kron += pair * T::lit(w);
        if j % 2 == 1 {
            gauss += pair * T::lit(WG[j / 2]);
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol * |value|)` or `max_subdivisions` is exhausted.
///
/// Integrable endpoint singularities such as square-root edges converge
/// because subdivision concentrates at the worst interval.
pub fn integrate<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_subdivisions: usize,
) -> Result<Quadrature<T>, AnalyticError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(AnalyticError::NonFinite);
    }
    if a == b {
        return Ok(Quadrature { value: T::zero(), error: T::zero(), evaluations: 0 });
    }
    let (value, error) = gk15(&mut f, a, b);
    let mut pieces = vec![Piece { a, b, value, error }];
    let mut evaluations = 15;
    loop {
        let total: T = pieces.iter().fold(T::zero(), |s, p| s + p.value);
        let err: T = pieces.iter().fold(T::zero(), |s, p| s + p.error);
        if !total.is_finite() {
            return Err(AnalyticError::NonFinite);
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Quadrature { value: total, error: err, evaluations });
        }
        if pieces.len() >= max_subdivisions {
            return Err(AnalyticError::Quadrature { estimate: total.to_f64_lossy(), error: err.to_f64_lossy() });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let mid = (p.a + p.b) * T::lit(0.5);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // Interval no longer splittable in this precision.
            return Err(AnalyticError::Quadrature { estimate: total.to_f64_lossy(), error: err.to_f64_lossy() });
        }
        let (v1, e1) = gk15(&mut f, p.a, mid);
        let (v2, e2) = gk15(&mut f, mid, p.b);
        evaluations += 30;
        pieces.push(Piece { a: p.a, b: mid, value: v1, error: e1 });
        pieces.push(Piece { a: mid, b: p.b, value: v2, error: e2 });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x: f64| 3.0 * x * x - x + 1.0, -1.0, 2.0, 1e-14, 0.0, 10).unwrap();
        assert!((q.value - (8.0 + 1.0 - 1.5 + 3.0)).abs() < 1e-13);
    }

    #[test]
    fn semicircle_with_sqrt_edges() {
        let q = integrate(
            |x: f64| (4.0 - x * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI),
            -2.0,
            2.0,
            1e-11,
            0.0,
            500,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-10, "{}", q.value);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let q = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9, 0.0, 1000).unwrap();
        assert!((q.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_limits_change_sign() {
        let q = integrate(|x: f64| x.exp(), 1.0, 0.0, 1e-13, 0.0, 50).unwrap();
        assert!((q.value + (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(|x: f64| (1.0 / x).sin() / x, 1e-6, 1.0, 1e-14, 0.0, 4);
        assert!(matches!(r, Err(AnalyticError::Quadrature { .. })));
    }

    #[test]
    fn works_in_f32() {
        let q = integrate(|x: f32| x.cos(), 0.0, 1.0, 1e-6, 0.0, 20).unwrap();
        assert!((q.value - 1f32.sin()).abs() < 1e-5);
    }
}
