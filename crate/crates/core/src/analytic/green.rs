//! Gap-equation roots and the holomorphic resolvent.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{check_params, solve_cubic, AnalyticError, CubicCoefficients};
use crate::scalar::Real;

/// Gap cubic in `v = m b` at `u = m w`.
pub fn gap_cubic<T: Real>(u: Complex<T>, lambda: T, t: T) -> CubicCoefficients<T> {
    let one = T::one();
    let it = t.recip();
    CubicCoefficients::new(
        Complex::one(),
        u.scale(one + it),
        (u * u).scale(it) + one,
        u.scale(one - lambda + lambda * it),
    )
}

/// `G(w) = m [λ/(u + v) + (1 - λ)/(u + t v)]`.
pub fn green_from_v<T: Real>(u: Complex<T>, v: Complex<T>, lambda: T, t: T, m: T) -> Complex<T> {
    let mut g = Complex::zero();
    if lambda > T::zero() {
        g += (u + v).inv().scale(lambda);
    }
    if lambda < T::one() {
        g += (u + v.scale(t)).inv().scale(T::one() - lambda);
    }
    g.scale(m)
}

/// Large-`|u|` behaviour `v ~ -(λ + t(1 - λ))/u` of the physical root.
pub(crate) fn asymptote<T: Real>(u: Complex<T>, lambda: T, t: T) -> Complex<T> {
    -u.inv().scale(lambda + t * (T::one() - lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchTag {
    HolomorphicConsistent,
    Ambiguous,
}

/// Root of the gap cubic continued from infinity to `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenBranch<T> {
    pub w: Complex<T>,
    /// `b = v / m`.
    pub b: Complex<T>,
    pub branch_tag: BranchTag,
    pub lambda: T,
    pub t: T,
    pub m: T,
}

impl<T: Real> GreenBranch<T> {
    pub fn v(&self) -> Complex<T> {
        self.b.scale(self.m)
    }

    pub fn u(&self) -> Complex<T> {
        self.w.scale(self.m)
    }

    pub fn green(&self) -> Complex<T> {
        green_from_v(self.u(), self.v(), self.lambda, self.t, self.m)
    }

    /// Cubic residual relative to the largest coefficient.
    pub fn relative_residual(&self) -> T {
        let c = gap_cubic(self.u(), self.lambda, self.t);
        c.eval(self.v()).norm() / c.scale()
    }
}

/// Index of the root closest to `target` and the ratio of the closest to the
/// second closest distance.
pub(crate) fn nearest_root<T: Real>(roots: &[Complex<T>; 3], target: Complex<T>) -> (usize, T) {
    let mut d: Vec<(usize, T)> = roots.iter().map(|r| (*r - target).norm()).enumerate().collect();
    d.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let ratio = if d[1].1 > T::zero() { d[0].1 / d[1].1 } else { T::one() };
    (d[0].0, ratio)
}

/// Selects the physical root at `w` by continuation along the ray
/// `s * w / |w|` from `s = max(10^3, 10 |w|) / m` inwards.
///
/// Off the real axis the physical resolvent is analytic, so the ray never
/// meets a branch point of the selected sheet. On the real axis inside the
/// support the result is tagged ambiguous when roots collide.
pub fn green_branch<T: Real>(w: Complex<T>, lambda: T, t: T, m: T) -> Result<GreenBranch<T>, AnalyticError> {
    check_params(lambda, t, m)?;
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(AnalyticError::NonFinite);
    }
    let r_end = w.norm();
    if r_end.is_zero() {
        return Err(AnalyticError::InvalidParameter("w = 0 has no ray to infinity".into()));
    }
    let dir = w.unscale(r_end);
    let r_start = (T::lit(1e3) / m).max(T::lit(10.0) * r_end);
    let root_at =
        |r: T| -> Result<[Complex<T>; 3], AnalyticError> { solve_cubic(&gap_cubic(dir.scale(r * m), lambda, t)) };

    let u0 = dir.scale(r_start * m);
    let roots = root_at(r_start)?;
    let (i0, ratio0) = nearest_root(&roots, asymptote(u0, lambda, t));
    let mut tag = if ratio0 < T::lit(0.25) { BranchTag::HolomorphicConsistent } else { BranchTag::Ambiguous };
    let mut v = roots[i0];
    let mut v_prev = v;
    let mut r = r_start;
    let mut r_prev = r;
    // Geometric steps in the radius; halved whenever the prediction is not
    // clearly closer to one root than to the others.
    let mut factor = T::lit(0.9);
    let min_factor = T::one() - T::lit(1e-9);
    while r > r_end {
        let r_next = (r * factor).max(r_end);
        let slope = if r != r_prev { (v - v_prev).unscale(r - r_prev) } else { Complex::zero() };
        let predicted = v + slope.scale(r_next - r);
        let roots = root_at(r_next)?;
        let (i, ratio) = nearest_root(&roots, predicted);
        if ratio > T::lit(0.3) && factor < min_factor {
            factor = (T::one() + factor) * T::lit(0.5);
            continue;
        }
        if ratio > T::lit(0.3) {
            tag = BranchTag::Ambiguous;
        }
        v_prev = v;
        r_prev = r;
        v = roots[i];
        r = r_next;
        if ratio < T::lit(0.05) {
            factor = (factor * factor).max(T::lit(0.5));
        }
    }
    Ok(GreenBranch { w, b: v.unscale(m), branch_tag: tag, lambda, t, m })
}
