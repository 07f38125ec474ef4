//! Closed-form roots of complex cubics.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::AnalyticError;
use crate::scalar::{abs1, Real};

/// `c3 z^3 + c2 z^2 + c1 z + c0` with complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients<T> {
    pub c3: Complex<T>,
    pub c2: Complex<T>,
    pub c1: Complex<T>,
    pub c0: Complex<T>,
}

impl<T: Real> CubicCoefficients<T> {
    pub fn new(c3: Complex<T>, c2: Complex<T>, c1: Complex<T>, c0: Complex<T>) -> Self {
        Self { c3, c2, c1, c0 }
    }

    pub fn real(c3: T, c2: T, c1: T, c0: T) -> Self {
        let r = |x| Complex::new(x, T::zero());
        Self::new(r(c3), r(c2), r(c1), r(c0))
    }

    /// Monic cubic with the given roots.
    pub fn from_roots(r: [Complex<T>; 3]) -> Self {
        Self::new(Complex::one(), -(r[0] + r[1] + r[2]), r[0] * r[1] + r[0] * r[2] + r[1] * r[2], -(r[0] * r[1] * r[2]))
    }

    #[inline]
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        ((self.c3 * z + self.c2) * z + self.c1) * z + self.c0
    }

    #[inline]
    fn derivative(&self, z: Complex<T>) -> Complex<T> {
        (self.c3.scale(T::lit(3.0)) * z + self.c2.scale(T::lit(2.0))) * z + self.c1
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> T {
        [self.c3, self.c2, self.c1, self.c0].iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Residual scale at `z`: the size of the largest term of the polynomial.
    pub fn term_scale(&self, z: Complex<T>) -> T {
        let r = z.norm();
        (self.c3.norm() * r * r * r).max(self.c2.norm() * r * r).max(self.c1.norm() * r).max(self.c0.norm())
    }

    /// Cubic discriminant `18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2`.
    pub fn discriminant(&self) -> Complex<T> {
        let (a, b, c, d) = (self.c3, self.c2, self.c1, self.c0);
        let k = |x: f64| T::lit(x);
        (a * b * c * d).scale(k(18.0)) - (b * b * b * d).scale(k(4.0)) + b * b * c * c
            - (a * c * c * c).scale(k(4.0))
            - (a * a * d * d).scale(k(27.0))
    }
}

/// The three roots of `c`, repeated according to multiplicity.
///
/// Cardano on the depressed monic cubic with the cube-root branch chosen to
/// avoid cancellation, followed by Newton polishing of every root. The
/// coefficients are rescaled by powers of two first so that large or tiny
/// magnitudes do not overflow in the intermediate cubes.
pub fn solve_cubic<T: Real>(c: &CubicCoefficients<T>) -> Result<[Complex<T>; 3], AnalyticError> {
    if c.c3.is_zero() {
        return Err(AnalyticError::DegenerateCubic);
    }
    let finite = |z: Complex<T>| z.re.is_finite() && z.im.is_finite();
    if ![c.c3, c.c2, c.c1, c.c0].into_iter().all(finite) {
        return Err(AnalyticError::NonFinite);
    }
    let a = c.c2 / c.c3;
    let b = c.c1 / c.c3;
    let d = c.c0 / c.c3;

    // Root bound (Fujiwara-style), rounded to a power of two so that the
    // substitution z = s y is exact.
    let bound = abs1(a).max(abs1(b).sqrt()).max(abs1(d).cbrt());
    let s = if bound > T::zero() { T::lit(2.0).powi(bound.log2().ceil().to_i32().unwrap_or(0)) } else { T::one() };
    let a_s = a.unscale(s);
    let b_s = b.unscale(s * s);
    let d_s = d.unscale(s * s * s);

    let three = T::lit(3.0);
    let third = three.recip();
    let p = b_s - a_s * a_s * third;
    let q = (a_s * a_s * a_s).scale(T::lit(2.0 / 27.0)) - (a_s * b_s) * third + d_s;
    let disc = (q * q).scale(T::lit(0.25)) + (p * p * p).scale(T::lit(1.0 / 27.0));
    let sq = disc.sqrt();
    let half_q = q.scale(T::lit(0.5));
    let cand1 = -half_q + sq;
    let cand2 = -half_q - sq;
    let inner = if cand1.norm() >= cand2.norm() { cand1 } else { cand2 };

    let shift = a_s * third;
    let mut y = [Complex::<T>::zero(); 3];
    if inner.is_zero() {
        // p = q = 0: triple root of the depressed cubic.
    } else {
        let cr = inner.powf(third);
        let omega = Complex::new(-T::lit(0.5), three.sqrt() * T::lit(0.5));
        let mut rot = Complex::<T>::one();
        for yk in &mut y {
            let ck = cr * rot;
            *yk = ck - p / (ck.scale(three));
            rot *= omega;
        }
    }
    let monic = CubicCoefficients::new(Complex::one(), a_s, b_s, d_s);
    let mut roots = [Complex::<T>::zero(); 3];
    for (r, yk) in roots.iter_mut().zip(y) {
        let mut z = yk - shift;
        polish(&monic, &mut z);
        *r = z.scale(s);
    }
    Ok(roots)
}

/// A few Newton steps, accepted only while they reduce the residual.
fn polish<T: Real>(c: &CubicCoefficients<T>, z: &mut Complex<T>) {
    let mut f = c.eval(*z);
    for _ in 0..4 {
        if f.is_zero() {
            return;
        }
        let df = c.derivative(*z);
        if df.is_zero() {
            return;
        }
        let cand = *z - f / df;
        let fc = c.eval(cand);
        if fc.norm() < f.norm() {
            *z = cand;
            f = fc;
        } else {
            return;
        }
    }
}

/// Real roots of `c3 s^3 + c2 s^2 + c1 s + c0` with real coefficients,
/// including lower-degree cases when leading coefficients vanish. Roots
/// whose imaginary part is below `imag_tol * max(1, |root|)` count as real,
/// which keeps double roots that rounding split into a narrow pair.
pub fn real_roots_up_to_cubic<T: Real>(coef: [T; 4], imag_tol: T) -> Vec<T> {
    let [c3, c2, c1, c0] = coef;
    let lead = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    let negligible = |x: T| x.abs() <= T::epsilon() * T::lit(16.0) * lead;
    let mut out = Vec::new();
    if !negligible(c3) {
        if let Ok(roots) = solve_cubic(&CubicCoefficients::real(c3, c2, c1, c0)) {
            for r in roots {
                if r.im.abs() <= imag_tol * r.re.abs().max(T::one()) {
                    out.push(r.re);
                }
            }
        }
    } else if !negligible(c2) {
        let disc = c1 * c1 - T::lit(4.0) * c2 * c0;
        let tol = imag_tol * (c1 * c1).max(T::lit(4.0) * (c2 * c0).abs());
        if disc >= -tol {
            let sq = disc.max(T::zero()).sqrt();
            // Stable quadratic formula.
            let qv = -T::lit(0.5) * (c1 + c1.signum() * sq);
            if qv.is_zero() {
                out.push(T::zero());
                out.push(T::zero());
            } else {
                out.push(qv / c2);
                out.push(c0 / qv);
            }
        }
    } else if !negligible(c1) {
        out.push(-c0 / c1);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}
