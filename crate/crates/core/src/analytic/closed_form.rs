//! Closed forms for the metric `diag(1, …, 1, -1, …, -1)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{integrate, AnalyticError};
use crate::scalar::Real;

/// `sin θ0 = |2λ - 1|`.
fn sin_theta0<T: Real>(lambda: T) -> T {
    (T::lit(2.0) * lambda - T::one()).abs()
}

/// Right end `a` of the real support `[-a, a]`.
pub fn support_endpoint_a<T: Real>(lambda: T, m: T) -> T {
    let k = |x: f64| T::lit(x);
    let s = (lambda * (T::one() - lambda)).max(T::zero()).sqrt();
    let d = (T::one() - k(2.0) * lambda).abs();
    let bracket = (T::one() - k(2.0) * s).max(T::zero()).cbrt() + (T::one() + k(2.0) * s).cbrt();
    let num = k(3.0) * d.powf(k(2.0 / 3.0)) * bracket + k(2.0);
    (num / (k(2.0) * m * m)).sqrt()
}

/// Density of real eigenvalues at `t = -1`.
///
/// Inside `|x| < 1/m` the difference of the two cube-root terms is
/// rewritten through `p^3 - q^3 = -2ξ`, which removes the cancellation and
/// the division by `x`; outside the original expression is used.
pub fn rho_real_closed_form<T: Real>(x: T, lambda: T, m: T) -> T {
    let k = |v: f64| T::lit(v);
    let a = support_endpoint_a(lambda, m);
    if x.abs() >= a {
        return T::zero();
    }
    let d = T::one() - k(2.0) * lambda;
    if x.abs() < k(1e-12) * a {
        return m * d.abs() / T::PI();
    }
    let xi = -k(27.0) * m.powi(4) * d * x;
    let one_minus = T::one() - m * m * x * x;
    let delta = xi * xi + k(108.0) * m.powi(6) * one_minus * one_minus * one_minus;
    if delta <= T::zero() {
        return T::zero();
    }
    let sq = delta.sqrt();
    let denom = k(3.0).sqrt() * k(2.0).powf(k(2.0 / 3.0)) * k(6.0) * T::PI();
    let rho = if one_minus >= T::zero() {
        let p = (xi - sq).abs().cbrt();
        let q = (xi + sq).abs().cbrt();
        d.abs() * k(54.0) * m * m * (p + q) / ((p * p + p * q + q * q) * denom)
    } else {
        let pm = (xi - sq).abs().powf(k(2.0 / 3.0));
        let pp = (xi + sq).abs().powf(k(2.0 / 3.0));
        d.signum() * (pm - pp) / (denom * m * m * x)
    };
    rho.max(T::zero())
}

/// `(r_-, r_+)` of the complex domain boundary at polar angle `theta`, or
/// `None` inside the excluded wedge `sin^2 θ < sin^2 θ0`.
pub fn boundary_t_minus1<T: Real>(theta: T, lambda: T, m: T) -> Option<(T, T)> {
    let s0 = sin_theta0(lambda);
    let s = theta.sin().abs();
    let q = if s0 == T::zero() {
        T::zero()
    } else if s == T::zero() {
        return None;
    } else {
        s0 / s
    };
    let slack = T::epsilon() * T::lit(16.0);
    if q > T::one() + slack {
        return None;
    }
    let q = q.min(T::one());
    let root = ((T::one() - q) * (T::one() + q)).sqrt();
    let scale = (T::lit(2.0).sqrt() * m).recip();
    let r_plus = scale * (T::one() + root).sqrt();
    // 1 - sqrt(1 - q^2) without cancellation.
    let r_minus = scale * (q * q / (T::one() + root)).sqrt();
    Some((r_minus, r_plus))
}

/// Area `(1 - |1 - 2λ|) π / m^2` of the complex domain.
pub fn domain_area<T: Real>(lambda: T, m: T) -> T {
    (T::one() - (T::one() - T::lit(2.0) * lambda).abs()) * T::PI() / (m * m)
}

/// Area of the complex domain by quadrature of `(r_+^2 - r_-^2)/2` over
/// each blob separately.
pub fn domain_area_by_quadrature<T: Real>(lambda: T, m: T) -> Result<T, AnalyticError> {
    let s0 = sin_theta0(lambda);
    let theta0 = s0.min(T::one()).asin();
    let half_pi = T::FRAC_PI_2();
    if theta0 >= half_pi {
        return Ok(T::zero());
    }
    // θ = π/2 - (π/2 - θ0) cos φ removes the square-root edge at θ0.
    let width = half_pi - theta0;
    let blob_half = |phi: T| {
        let theta = half_pi - width * phi.cos();
        let jac = width * phi.sin();
        match boundary_t_minus1(theta, lambda, m) {
            Some((rm, rp)) => T::lit(0.5) * (rp * rp - rm * rm) * jac,
            None => T::zero(),
        }
    };
    let tol = T::epsilon() * T::lit(100.0);
    let q = integrate(blob_half, T::zero(), half_pi, tol, tol, 500)?;
    // Each blob is symmetric about θ = ±π/2; two halves per blob, two blobs.
    Ok(T::lit(4.0) * q.value)
}

/// Uniform density `m^2 / π` of complex eigenvalues.
pub fn rho_complex_uniform<T: Real>(m: T) -> T {
    m * m / T::PI()
}

/// Fraction `|1 - 2λ|` of real eigenvalues.
pub fn fraction_real<T: Real>(lambda: T) -> T {
    (T::one() - T::lit(2.0) * lambda).abs()
}

/// Gap `sin(θ0 / 2) / m` between the complex domain and the real axis.
pub fn distance_to_axis<T: Real>(lambda: T, m: T) -> T {
    let theta0 = sin_theta0(lambda).min(T::one()).asin();
    (theta0 * T::lit(0.5)).sin() / m
}

/// Sampled boundary of both blobs of the complex domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve<T> {
    /// Upper blob angles in `[θ0, π - θ0]` followed by their reflections.
    pub thetas: Vec<T>,
    pub r_minus: Vec<T>,
    pub r_plus: Vec<T>,
    pub theta0: T,
    pub lambda: T,
    pub m: T,
}

impl<T: Real> BoundaryCurve<T> {
    pub const DEFAULT_POINTS: usize = 2048;

    pub fn new(lambda: T, m: T) -> Self {
        Self::with_points(lambda, m, Self::DEFAULT_POINTS)
    }

    pub fn with_points(lambda: T, m: T, points: usize) -> Self {
        let points = points.max(2);
        let theta0 = sin_theta0(lambda).min(T::one()).asin();
        let hi = T::PI() - theta0;
        let mut thetas = Vec::with_capacity(2 * points);
        for i in 0..points {
            let theta = if i + 1 == points {
                hi
            } else {
                theta0 + (hi - theta0) * T::from_usize_lossy(i) / T::from_usize_lossy(points - 1)
            };
            thetas.push(theta);
        }
        let upper = thetas.clone();
        thetas.extend(upper.iter().map(|t| -*t));
        let mut r_minus = Vec::with_capacity(thetas.len());
        let mut r_plus = Vec::with_capacity(thetas.len());
        for th in &thetas {
            // Endpoints sit exactly on the wedge; clamp rounding there.
            let (rm, rp) = boundary_t_minus1(*th, lambda, m).unwrap_or_else(|| {
                let r = (T::lit(2.0).sqrt() * m).recip();
                (r, r)
            });
            r_minus.push(rm);
            r_plus.push(rp);
        }
        Self { thetas, r_minus, r_plus, theta0, lambda, m }
    }

    pub fn points_per_blob(&self) -> usize {
        self.thetas.len() / 2
    }

    /// Closed polygons, upper blob first: `r_+` outwards, `r_-` back.
    pub fn polygons(&self) -> [Vec<Complex<T>>; 2] {
        let n = self.points_per_blob();
        let blob = |range: std::ops::Range<usize>| {
            let mut poly: Vec<Complex<T>> =
                range.clone().map(|i| Complex::from_polar(self.r_plus[i], self.thetas[i])).collect();
            poly.extend(range.rev().map(|i| Complex::from_polar(self.r_minus[i], self.thetas[i])));
            poly
        };
        [blob(0..n), blob(n..2 * n)]
    }

    /// Whether `w` lies in the closed analytic region.
    pub fn contains(&self, w: Complex<T>) -> bool {
        let r = w.norm();
        if r.is_zero() {
            return boundary_t_minus1(T::FRAC_PI_2(), self.lambda, self.m).is_some_and(|(rm, _)| rm.is_zero());
        }
        match boundary_t_minus1(w.arg(), self.lambda, self.m) {
            Some((rm, rp)) => rm <= r && r <= rp,
            None => false,
        }
    }

    /// Euclidean distance from `w` to the region, zero inside.
    pub fn distance_outside(&self, w: Complex<T>) -> T {
        if self.contains(w) {
            return T::zero();
        }
        let mut best = T::infinity();
        for poly in self.polygons() {
            for (i, a) in poly.iter().enumerate() {
                let b = poly[(i + 1) % poly.len()];
                best = best.min(segment_distance(w, *a, b));
            }
        }
        best
    }

    /// Smallest `|Im w|` over the sampled boundary.
    pub fn min_abs_imag(&self) -> T {
        self.thetas.iter().zip(&self.r_minus).map(|(th, r)| (*r * th.sin()).abs()).fold(T::infinity(), T::min)
    }
}

fn segment_distance<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2.is_zero() {
        return (p - a).norm();
    }
    let s = ((p - a) * ab.conj()).re / len2;
    let s = s.max(T::zero()).min(T::one());
    (p - (a + ab.scale(s))).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn endpoint_examples() {
        assert!((support_endpoint_a(0.0f64, 1.0) - 2.0).abs() < 1e-15);
        assert!((support_endpoint_a(0.5f64, 1.0) - 1.0).abs() < 1e-15);
        let a = support_endpoint_a(0.25f64, 1.0);
        assert!((a - 1.6269).abs() < 1e-4);
        assert!((support_endpoint_a(0.25, 2.0) - a / 2.0).abs() < 1e-15);
    }

    #[test]
    fn density_examples() {
        assert!((rho_real_closed_form(0.0, 0.25, 1.0) - 0.5 / PI).abs() < 1e-15);
        assert!((rho_real_closed_form(0.0, 0.0, 1.0) - 1.0 / PI).abs() < 1e-15);
        for x in [0.0, 0.3, -0.9, 1.2] {
            assert_eq!(rho_real_closed_form(x, 0.5, 1.0), 0.0);
        }
        for i in 0..100 {
            let x = -2.2 + 4.4 * i as f64 / 99.0;
            let semicircle = (4.0 - x * x).max(0.0).sqrt() / (2.0 * PI);
            assert!((rho_real_closed_form(x, 0.0, 1.0) - semicircle).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn density_is_continuous_at_origin_and_unit_radius() {
        let at0 = rho_real_closed_form(0.0f64, 0.25, 1.0);
        let near = rho_real_closed_form(1e-7, 0.25, 1.0);
        assert!((at0 - near).abs() < 1e-10);
        let inside = rho_real_closed_form(1.0f64 - 1e-12, 0.3, 1.0);
        let outside = rho_real_closed_form(1.0 + 1e-12, 0.3, 1.0);
        assert!((inside - outside).abs() < 1e-9);
    }

    #[test]
    fn boundary_examples() {
        let (rm, rp) = boundary_t_minus1(PI / 2.0, 0.5, 1.0).unwrap();
        assert_eq!((rm, rp), (0.0, 1.0));
        let theta0 = (0.5f64).asin();
        let (rm, rp) = boundary_t_minus1(theta0, 0.25, 1.0).unwrap();
        assert!((rm - 0.5f64.sqrt()).abs() < 1e-7 && (rp - 0.5f64.sqrt()).abs() < 1e-7);
        let (rm, rp) = boundary_t_minus1(PI / 2.0, 0.25, 1.0).unwrap();
        assert!((rm - 0.25882).abs() < 1e-5 && (rp - 0.96593).abs() < 1e-5);
        assert!(boundary_t_minus1(0.1, 0.25, 1.0).is_none());
    }

    #[test]
    fn area_and_fraction_examples() {
        assert!((domain_area(0.5, 1.0) - PI).abs() < 1e-15);
        assert_eq!(domain_area(0.0, 1.0), 0.0);
        assert!((domain_area(0.25, 1.0) - PI / 2.0).abs() < 1e-15);
        assert!((domain_area_by_quadrature(0.25, 1.0).unwrap() - PI / 2.0).abs() < 1e-6);
        assert!((rho_complex_uniform(1.0) - 1.0 / PI).abs() < 1e-16);
        assert!((rho_complex_uniform(2.0) - 4.0 / PI).abs() < 1e-15);
        assert_eq!(fraction_real(0.5), 0.0);
        assert_eq!(fraction_real(0.0), 1.0);
        assert_eq!(fraction_real(0.125), 0.75);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_to_axis(0.5, 1.0), 0.0);
        assert!((distance_to_axis(0.0, 1.0) - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let d = distance_to_axis(0.25, 1.0);
        assert!((d - (PI / 12.0).sin()).abs() < 1e-15);
        let curve = BoundaryCurve::new(0.25, 1.0);
        assert!((curve.min_abs_imag() - d).abs() < 1e-6);
    }

    #[test]
    fn curve_shape_and_region_tests() {
        let c = BoundaryCurve::new(0.25f64, 1.0);
        assert_eq!(c.thetas.len(), 4096);
        assert_eq!(c.thetas[0], c.theta0);
        assert_eq!(c.thetas[2047], PI - c.theta0);
        assert!(c.contains(Complex::new(0.0, 0.6)));
        assert!(c.contains(Complex::new(0.0, -0.6)));
        assert!(!c.contains(Complex::new(0.0, 0.1)));
        assert!(!c.contains(Complex::new(1.5, 0.0)));
        let d = c.distance_outside(Complex::new(0.0, 1.2));
        assert!((d - (1.2 - (PI / 12.0).cos())).abs() < 1e-6, "{d}");
        assert_eq!(c.distance_outside(Complex::new(0.1, 0.5)), 0.0);
        let disk = BoundaryCurve::new(0.5f64, 1.0);
        assert!(disk.contains(Complex::new(0.0, 0.0)));
        assert!(disk.contains(Complex::new(0.3, -0.3)));
    }

    #[test]
    fn mass_conservation() {
        for lambda in [0.0f64, 0.1, 0.25, 0.4] {
            let a = support_endpoint_a(lambda, 1.0);
            let q = integrate(|x| rho_real_closed_form(x, lambda, 1.0), -a, a, 1e-12, 1e-12, 2000).unwrap();
            assert!((q.value - fraction_real(lambda)).abs() < 1e-6, "λ={lambda}: {}", q.value);
        }
    }

    proptest! {
        #[test]
        fn boundary_identities(lambda in 0.0f64..1.0, u in 0.0f64..1.0, m in 0.2f64..5.0, lower in any::<bool>()) {
            let theta0 = (2.0 * lambda - 1.0).abs().asin();
            let mut theta = theta0 + u * (PI - 2.0 * theta0);
            if lower { theta = -theta; }
            if let Some((rm, rp)) = boundary_t_minus1(theta, lambda, m) {
                prop_assert!(rm <= rp);
                let s = rp * rp + rm * rm;
                prop_assert!((s * m * m - 1.0).abs() < 1e-12);
                let prod = (2.0 * lambda - 1.0).abs() / (2.0 * m * m * theta.sin().abs());
                prop_assert!((rp * rm - prod).abs() <= 1e-12 * prod.max(1e-300), "{} vs {}", rp * rm, prod);
            }
        }

        #[test]
        fn swap_symmetry(lambda in 0.0f64..1.0, x in -2.5f64..2.5, theta in 0.0f64..PI) {
            let mu = 1.0 - lambda;
            prop_assert!((rho_real_closed_form(x, lambda, 1.0) - rho_real_closed_form(x, mu, 1.0)).abs() < 1e-12);
            prop_assert!((support_endpoint_a(lambda, 1.0) - support_endpoint_a(mu, 1.0)).abs() < 1e-12);
            prop_assert!((fraction_real(lambda) - fraction_real(mu)).abs() < 1e-12);
            let (p, q) = (boundary_t_minus1(theta, lambda, 1.0), boundary_t_minus1(theta, mu, 1.0));
            prop_assert_eq!(p.is_some(), q.is_some());
            if let (Some(p), Some(q)) = (p, q) {
                prop_assert!((p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
            }
        }

        #[test]
        fn area_density_fraction(lambda in 0.0f64..1.0, m in 0.1f64..10.0) {
            let total = domain_area(lambda, m) * rho_complex_uniform(m) + fraction_real(lambda);
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn density_nonnegative(lambda in 0.0f64..1.0, x in -3.0f64..3.0, m in 0.3f64..3.0) {
            prop_assert!(rho_real_closed_form(x, lambda, m) >= -1e-12);
        }
    }
}
