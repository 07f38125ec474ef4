//! Density of real eigenvalues for general `t`.
//!
//! On the real axis the gap cubic has real coefficients, so its roots are
//! either all real or one real root and a conjugate pair. The physical root
//! cannot change its type between two zeros of the cubic discriminant, so the
//! axis splits into segments with a fixed type. The type of each segment is
//! found by following the physical root in from `|x| = ∞` along the axis and
//! around every discriminant zero on a small semicircle in the lower half
//! plane, which is the side `x - i0` the density is read from.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::green::{asymptote, nearest_root};
use super::{
    check_params, gap_cubic, green_from_v, integrate, real_roots_up_to_cubic, solve_cubic, AnalyticError,
    CubicCoefficients,
};
use crate::scalar::Real;

const SEMICIRCLE_STEPS: usize = 512;

/// Discriminant of the gap cubic at real `u` as a polynomial in `s = u^2`,
/// coefficients from `s^3` down to `s^0`.
pub fn discriminant_in_s<T: Real>(lambda: T, t: T) -> [T; 4] {
    let one = T::one();
    let k = |x: f64| T::lit(x);
    let beta = t.recip();
    let alpha = one + beta;
    let gamma = one - lambda + lambda * beta;
    let a2 = alpha * alpha;
    [
        a2 * beta * beta - k(4.0) * beta * beta * beta,
        k(18.0) * alpha * beta * gamma - k(4.0) * a2 * alpha * gamma + k(2.0) * a2 * beta - k(12.0) * beta * beta,
        k(18.0) * alpha * gamma + a2 - k(12.0) * beta - k(27.0) * gamma * gamma,
        -k(4.0),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Segment {
    /// Three real roots; the physical one has this rank.
    Rank(usize),
    /// The single real root of a complex pair plus one real root.
    Single,
    /// A member of the conjugate pair: positive density.
    Complex,
}

impl Segment {
    fn is_complex(self) -> bool {
        self == Segment::Complex
    }
}

/// Physical sheet of the gap equation just below the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RealAxisSheet<T> {
    lambda: T,
    t: T,
    m: T,
    /// Positive zeros of the discriminant in `u = m x`, ascending.
    critical_u: Vec<T>,
    /// Segment types on `x > 0`: `[0, c0], [c0, c1], …, [c_last, ∞)`.
    positive: Vec<Segment>,
    /// Segment types on `x < 0`, mirrored index by index.
    negative: Vec<Segment>,
}

fn real_tol<T: Real>() -> T {
    T::lit(1e-9)
}

fn count_real<T: Real>(roots: &[Complex<T>; 3]) -> usize {
    roots.iter().filter(|r| r.im.abs() <= real_tol::<T>() * r.norm().max(T::one())).count()
}

impl<T: Real> RealAxisSheet<T> {
    pub fn new(lambda: T, t: T, m: T) -> Result<Self, AnalyticError> {
        check_params(lambda, t, m)?;
        let disc = discriminant_in_s(lambda, t);
        let mut critical_u: Vec<T> = real_roots_up_to_cubic(disc, T::lit(1e-4))
            .into_iter()
            .filter(|s| *s > T::zero())
            .map(|s| s.sqrt())
            .collect();
        critical_u.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-7) * b.max(T::one()));

        let mut sheet = Self { lambda, t, m, critical_u, positive: Vec::new(), negative: Vec::new() };
        sheet.positive = sheet.walk(T::one())?;
        sheet.negative = sheet.walk(-T::one())?;
        Ok(sheet)
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn m(&self) -> T {
        self.m
    }

    /// Positive abscissae where the discriminant of the gap cubic vanishes.
    pub fn critical_points(&self) -> Vec<T> {
        self.critical_u.iter().map(|u| *u / self.m).collect()
    }

    fn roots(&self, u: Complex<T>) -> Result<[Complex<T>; 3], AnalyticError> {
        solve_cubic(&gap_cubic(u, self.lambda, self.t))
    }

    fn im_green(&self, u: Complex<T>, v: Complex<T>) -> T {
        green_from_v(u, v, self.lambda, self.t, self.m).im
    }

    fn select(&self, seg: Segment, roots: &[Complex<T>; 3], u: Complex<T>) -> Complex<T> {
        let mut by_im = *roots;
        by_im.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap_or(std::cmp::Ordering::Equal));
        match seg {
            Segment::Rank(i) if count_real(roots) == 3 => {
                let mut by_re = *roots;
                by_re.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
                by_re[i]
            }
            Segment::Rank(_) | Segment::Single => by_im[0],
            Segment::Complex => {
                if self.im_green(u, by_im[1]) >= self.im_green(u, by_im[2]) {
                    by_im[1]
                } else {
                    by_im[2]
                }
            }
        }
    }

    fn classify(v: Complex<T>, roots: &[Complex<T>; 3]) -> Segment {
        if v.im.abs() > real_tol::<T>() * v.norm().max(T::one()) {
            return Segment::Complex;
        }
        if count_real(roots) == 3 {
            let rank = roots.iter().filter(|r| r.re < v.re).count();
            Segment::Rank(rank)
        } else {
            Segment::Single
        }
    }

    /// Segment types on the half axis with sign `side`, innermost first.
    fn walk(&self, side: T) -> Result<Vec<Segment>, AnalyticError> {
        let cs = &self.critical_u;
        let outer = T::lit(2.0) * cs.last().copied().unwrap_or(T::one()).max(T::one()) + T::lit(5.0);
        let u0 = Complex::new(side * outer, T::zero());
        let roots = self.roots(u0)?;
        let (i, _) = nearest_root(&roots, asymptote(u0, self.lambda, self.t));
        let mut seg = Self::classify(roots[i], &roots);
        let mut out = vec![seg];
        for (j, &c) in cs.iter().enumerate().rev() {
            let below = if j == 0 { c } else { c - cs[j - 1] };
            let above = cs.get(j + 1).map_or(c, |n| *n - c);
            let rad = (T::lit(1e-5) * c.max(T::one())).min(T::lit(0.25) * below.min(above));
            let start = Complex::new(side * (c + rad), T::zero());
            let roots = self.roots(start)?;
            let mut v = self.select(seg, &roots, start);
            let mut roots = roots;
            for step in 1..=SEMICIRCLE_STEPS {
                let theta = T::PI() * T::from_usize_lossy(step) / T::from_usize_lossy(SEMICIRCLE_STEPS);
                // From c + rad through c - i rad to c - rad, mirrored for x < 0.
                let off = Complex::new(side * rad * theta.cos(), -rad * theta.sin());
                let p = Complex::new(side * c, T::zero()) + off;
                let p = if step == SEMICIRCLE_STEPS { Complex::new(side * (c - rad), T::zero()) } else { p };
                roots = self.roots(p)?;
                v = roots[nearest_root(&roots, v).0];
            }
            seg = Self::classify(v, &roots);
            out.push(seg);
        }
        out.reverse();
        Ok(out)
    }

    fn segment_at(&self, x: T) -> Segment {
        let u = (x * self.m).abs();
        let idx = self.critical_u.partition_point(|c| *c < u);
        if x < T::zero() {
            self.negative[idx]
        } else {
            self.positive[idx]
        }
    }

    /// `ρ(x) = Im G(x - i0) / π`.
    pub fn density(&self, x: T) -> Result<T, AnalyticError> {
        if !x.is_finite() {
            return Err(AnalyticError::NonFinite);
        }
        let seg = self.segment_at(x);
        if !seg.is_complex() {
            return Ok(T::zero());
        }
        let u = Complex::new(x * self.m, T::zero());
        let roots = self.roots(u)?;
        let v = self.select(seg, &roots, u);
        Ok((self.im_green(u, v) / T::PI()).max(T::zero()))
    }

    /// Density tabulated on `xs`.
    pub fn curve(&self, xs: &[T]) -> Result<RealDensityCurve<T>, AnalyticError> {
        let rho = xs.iter().map(|&x| self.density(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(RealDensityCurve { xs: xs.to_vec(), rho, lambda: self.lambda, t: self.t, m: self.m })
    }

    /// Maximal closed intervals of positive density. Segments that meet at a
    /// discriminant zero where the density only touches zero are joined.
    pub fn support(&self) -> SupportIntervals<T> {
        let cx = self.critical_points();
        let mut pieces: Vec<(T, T)> = Vec::new();
        for (i, seg) in self.negative.iter().enumerate().rev() {
            if seg.is_complex() {
                let lo = cx.get(i).map_or(T::neg_infinity(), |c| -*c);
                let hi = if i == 0 { T::zero() } else { -cx[i - 1] };
                pieces.push((lo, hi));
            }
        }
        for (i, seg) in self.positive.iter().enumerate() {
            if seg.is_complex() {
                let lo = if i == 0 { T::zero() } else { cx[i - 1] };
                let hi = cx.get(i).copied().unwrap_or(T::infinity());
                pieces.push((lo, hi));
            }
        }
        let mut intervals: Vec<(T, T)> = Vec::new();
        for (lo, hi) in pieces {
            match intervals.last_mut() {
                Some(last) if last.1 >= lo => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        SupportIntervals { intervals, lambda: self.lambda, t: self.t, m: self.m }
    }

    /// Integral of the density over `[lo, hi]`, split at discriminant zeros.
    pub fn mass_between(&self, lo: T, hi: T) -> Result<T, AnalyticError> {
        let mut cuts = vec![lo];
        for c in self.critical_points() {
            for p in [-c, c] {
                if p > lo && p < hi {
                    cuts.push(p);
                }
            }
        }
        cuts.push(hi);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut total = T::zero();
        for w in cuts.windows(2) {
            let mut failure = None;
            let q = integrate(
                |x| match self.density(x) {
                    Ok(r) => r,
                    Err(e) => {
                        failure.get_or_insert(e);
                        T::zero()
                    }
                },
                w[0],
                w[1],
                T::lit(1e-12).max(T::epsilon() * T::lit(100.0)),
                T::lit(1e-11).max(T::epsilon() * T::lit(100.0)),
                2000,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            total += q.value;
        }
        Ok(total)
    }

    /// Total real mass, the large-N fraction of real eigenvalues.
    pub fn total_mass(&self) -> Result<T, AnalyticError> {
        let support = self.support();
        let mut total = T::zero();
        for (lo, hi) in support.intervals {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(AnalyticError::NonFinite);
            }
            total += self.mass_between(lo, hi)?;
        }
        Ok(total)
    }

    /// Mass of the interval containing the origin.
    pub fn central_mass(&self) -> Result<T, AnalyticError> {
        match self.support().intervals.into_iter().find(|(lo, hi)| *lo <= T::zero() && *hi >= T::zero()) {
            Some((lo, hi)) => self.mass_between(lo, hi),
            None => Ok(T::zero()),
        }
    }
}

/// Real density tabulated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDensityCurve<T> {
    pub xs: Vec<T>,
    pub rho: Vec<T>,
    pub lambda: T,
    pub t: T,
    pub m: T,
}

/// Ordered disjoint support of the real density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportIntervals<T> {
    pub intervals: Vec<(T, T)>,
    pub lambda: T,
    pub t: T,
    pub m: T,
}

impl<T: Real> SupportIntervals<T> {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: T) -> bool {
        self.intervals.iter().any(|(lo, hi)| *lo <= x && x <= *hi)
    }
}

/// `ρ(x)` at general `t`; builds the sheet on every call, so prefer
/// [`RealAxisSheet`] for repeated evaluation.
pub fn rho_real_general<T: Real>(x: T, lambda: T, t: T, m: T) -> Result<T, AnalyticError> {
    RealAxisSheet::new(lambda, t, m)?.density(x)
}

pub fn support_intervals<T: Real>(lambda: T, t: T, m: T) -> Result<SupportIntervals<T>, AnalyticError> {
    Ok(RealAxisSheet::new(lambda, t, m)?.support())
}

/// Large-N fraction of real eigenvalues at general `t`.
pub fn fraction_real_general<T: Real>(lambda: T, t: T, m: T) -> Result<T, AnalyticError> {
    RealAxisSheet::new(lambda, t, m)?.total_mass()
}

/// Branch points of the gap equation off the real axis, in the first
/// quadrant: the complex zeros `s` of [`discriminant_in_s`] mapped to
/// `w = sqrt(s) / m`. Before `t_cr` these are the crescent tips.
pub fn complex_branch_points<T: Real>(lambda: T, t: T, m: T) -> Result<Vec<Complex<T>>, AnalyticError> {
    check_params(lambda, t, m)?;
    let [c3, c2, c1, c0] = discriminant_in_s(lambda, t);
    let roots = solve_cubic(&CubicCoefficients::real(c3, c2, c1, c0))?;
    let mut out: Vec<Complex<T>> = roots
        .into_iter()
        .filter(|s| s.im.abs() > T::lit(1e-9) * s.norm().max(T::one()) && s.im > T::zero())
        .map(|s| {
            let u = s.sqrt();
            Complex::new(u.re.abs(), u.im.abs()) / m
        })
        .collect();
    out.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}
