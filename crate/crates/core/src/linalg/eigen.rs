//! Eigenvalues of general dense complex matrices.
//!
//! The native path is the classical pipeline: diagonal balancing, Householder
//! reduction to upper Hessenberg form, then implicit single-shift QR with
//! Wilkinson shifts and small-subdiagonal deflation. Only eigenvalues are
//! computed, so rotations are confined to the active window.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, LinalgError};
use crate::scalar::{abs1, Real};

/// Which implementation diagonalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EigenBackend {
    /// Native single-shift QR.
    Native,
    /// Blocked multishift QR from `faer`.
    Faer,
    /// Native below [`AUTO_FAER_THRESHOLD`], `faer` at and above it.
    #[default]
    Auto,
}

/// Dimension from which [`EigenBackend::Auto`] hands off to `faer`.
pub const AUTO_FAER_THRESHOLD: usize = 384;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub backend: EigenBackend,
    pub balance: bool,
    /// QR sweeps allowed per deflation window, as a multiple of its size.
    pub iterations_per_row: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { backend: EigenBackend::Auto, balance: true, iterations_per_row: 30 }
    }
}

impl EigenOptions {
    pub fn native() -> Self {
        Self { backend: EigenBackend::Native, ..Self::default() }
    }
}

/// All `n` eigenvalues of `mat` with default options.
pub fn eigenvalues<T: Real>(mat: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>, LinalgError> {
    eigenvalues_with(mat, &EigenOptions::default())
}

pub fn eigenvalues_with<T: Real>(mat: &ComplexMatrix<T>, opts: &EigenOptions) -> Result<Vec<Complex<T>>, LinalgError> {
    if !mat.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = mat.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let use_faer = match opts.backend {
        EigenBackend::Native => false,
        EigenBackend::Faer => true,
        EigenBackend::Auto => n >= AUTO_FAER_THRESHOLD,
    };
    if use_faer {
        return T::faer_eigenvalues(n, mat.as_slice()).ok_or(LinalgError::NoConvergence {
            window_lo: 0,
            window_hi: n - 1,
            iterations: 0,
        });
    }
    let mut h = mat.clone();
    if opts.balance {
        balance(&mut h);
    }
    hessenberg_in_place(&mut h);
    hessenberg_qr(&mut h, opts.iterations_per_row)
}

/// Scales rows and columns by powers of two so that each off-diagonal row
/// and column pair has comparable 1-norm. A similarity, exact in binary.
pub fn balance<T: Real>(a: &mut ComplexMatrix<T>) {
    let n = a.n();
    let radix = T::lit(2.0);
    let radix2 = radix * radix;
    let factor = T::lit(0.95);
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c.is_zero() || r.is_zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix2;
                g /= radix2;
            }
            g = r * radix;
            while c >= g {
                f /= radix;
                c /= radix2;
                g *= radix2;
            }
            if (c + r) / f < factor * s {
                converged = false;
                let finv = f.recip();
                for j in 0..n {
                    a[(i, j)] = a[(i, j)].scale(finv);
                }
                for j in 0..n {
                    a[(j, i)] = a[(j, i)].scale(f);
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form; entries below the first
/// subdiagonal are set to zero.
pub fn hessenberg_in_place<T: Real>(a: &mut ComplexMatrix<T>) {
    let n = a.n();
    if n < 3 {
        return;
    }
    let mut v = vec![Complex::<T>::zero(); n];
    let mut w = vec![Complex::<T>::zero(); n];
    let data = a.as_mut_slice();
    for k in 0..n - 2 {
        // Reflector zeroing column k below row k + 1.
        let m = n - k - 1;
        let mut tail2 = T::zero();
        for i in 0..m {
            v[i] = data[(k + 1 + i) * n + k];
            if i > 0 {
                tail2 += v[i].norm_sqr();
            }
        }
        if tail2.is_zero() {
            continue;
        }
        let xnorm = (v[0].norm_sqr() + tail2).sqrt();
        let x0 = v[0];
        let phase = if x0.is_zero() { Complex::one() } else { x0.unscale(x0.norm()) };
        let alpha = -phase.scale(xnorm);
        v[0] = x0 - alpha;
        let vnorm2 = v[0].norm_sqr() + tail2;
        let beta = T::lit(2.0) / vnorm2;

        // Left: rows k+1.., columns k..  (H <- (I - beta v v^*) H)
        for wj in &mut w[k..n] {
            *wj = Complex::zero();
        }
        for i in 0..m {
            let vi = v[i].conj();
            let row = &data[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k..n {
                w[j] += vi * row[j];
            }
        }
        for i in 0..m {
            let vi = v[i].scale(beta);
            let row = &mut data[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k..n {
                row[j] -= vi * w[j];
            }
        }
        // Right: all rows, columns k+1..  (H <- H (I - beta v v^*))
        for i in 0..n {
            let row = &mut data[i * n..(i + 1) * n];
            let mut s = Complex::<T>::zero();
            for (x, vj) in row[k + 1..].iter().zip(&v[..m]) {
                s += *x * *vj;
            }
            let s = s.scale(beta);
            for (x, vj) in row[k + 1..].iter_mut().zip(&v[..m]) {
                *x -= s * vj.conj();
            }
        }
        data[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            data[i * n + k] = Complex::zero();
        }
    }
}

/// Givens rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>, Complex<T>) {
    if y.is_zero() {
        return (T::one(), Complex::zero(), x);
    }
    if x.is_zero() {
        return (T::zero(), Complex::one(), y);
    }
    let ax = x.norm();
    let nu = ax.hypot(y.norm());
    let phase = x.unscale(ax);
    let c = ax / nu;
    let s = phase * y.conj().unscale(nu);
    (c, s, phase.scale(nu))
}

/// Eigenvalues of an upper Hessenberg matrix by implicit single-shift QR.
///
/// Deflation uses the Ahues–Tisseur criterion; exceptional shifts are taken
/// after 10 and 20 sweeps without deflation.
pub fn hessenberg_qr<T: Real>(
    h: &mut ComplexMatrix<T>,
    iterations_per_row: usize,
) -> Result<Vec<Complex<T>>, LinalgError> {
    let n = h.n();
    let mut w = vec![Complex::<T>::zero(); n];
    if n == 0 {
        return Ok(w);
    }
    let ulp = T::epsilon();
    let safmin = T::min_positive_value();
    let smlnum = safmin * (T::from_usize_lossy(n) / ulp);
    let half = T::lit(0.5);
    let dat1 = T::lit(0.75);
    let ilo = 0usize;

    let mut i = n - 1;
    loop {
        let window = i + 1 - ilo;
        let itmax = iterations_per_row * window.max(10);
        let mut l = ilo;
        let mut converged = false;
        for its in 0..=itmax {
            // Find a negligible subdiagonal entry.
            let mut k = i;
            while k > l {
                let sub = abs1(h[(k, k - 1)]);
                if sub <= smlnum {
                    break;
                }
                let mut tst = abs1(h[(k - 1, k - 1)]) + abs1(h[(k, k)]);
                if tst.is_zero() {
                    if k >= ilo + 2 {
                        tst += abs1(h[(k - 1, k - 2)]);
                    }
                    if k + 1 <= i {
                        tst += abs1(h[(k + 1, k)]);
                    }
                }
                if sub <= ulp * tst {
                    let up = abs1(h[(k - 1, k)]);
                    let ab = sub.max(up);
                    let ba = sub.min(up);
                    let diff = abs1(h[(k - 1, k - 1)] - h[(k, k)]);
                    let hkk = abs1(h[(k, k)]);
                    let aa = hkk.max(diff);
                    let bb = hkk.min(diff);
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                k -= 1;
            }
            l = k;
            if l > ilo {
                h[(l, l - 1)] = Complex::zero();
            }
            if l >= i {
                converged = true;
                break;
            }
            if its == itmax {
                break;
            }

            let shift = if its == 10 {
                Complex::new(dat1 * abs1(h[(l + 1, l)]), T::zero()) + h[(l, l)]
            } else if its == 20 {
                Complex::new(dat1 * abs1(h[(i, i - 1)]), T::zero()) + h[(i, i)]
            } else {
                wilkinson_shift(h, i, half)
            };

            qr_sweep(h, l, i, shift);
        }
        if !converged {
            return Err(LinalgError::NoConvergence { window_lo: l, window_hi: i, iterations: itmax });
        }
        w[i] = h[(i, i)];
        if i == ilo {
            break;
        }
        i -= 1;
    }
    Ok(w)
}

fn wilkinson_shift<T: Real>(h: &ComplexMatrix<T>, i: usize, half: T) -> Complex<T> {
    let mut t = h[(i, i)];
    let u = h[(i - 1, i)].sqrt() * h[(i, i - 1)].sqrt();
    let s = abs1(u);
    if !s.is_zero() {
        let x = (h[(i - 1, i - 1)] - t).scale(half);
        let sx = abs1(x);
        let s = s.max(sx);
        let xs = x.unscale(s);
        let us = u.unscale(s);
        let mut y = (xs * xs + us * us).sqrt().scale(s);
        if sx > T::zero() {
            let xn = x.unscale(sx);
            if xn.re * y.re + xn.im * y.im < T::zero() {
                y = -y;
            }
        }
        t -= u * (u / (x + y));
    }
    t
}

/// One implicit single-shift QR sweep on the active block `l..=i`.
fn qr_sweep<T: Real>(h: &mut ComplexMatrix<T>, l: usize, i: usize, shift: Complex<T>) {
    let n = h.n();
    let data = h.as_mut_slice();
    for k in l..i {
        let (c, s) = if k == l {
            let (c, s, _) = givens(data[l * n + l] - shift, data[(l + 1) * n + l]);
            (c, s)
        } else {
            let (c, s, r) = givens(data[k * n + k - 1], data[(k + 1) * n + k - 1]);
            data[k * n + k - 1] = r;
            data[(k + 1) * n + k - 1] = Complex::zero();
            (c, s)
        };
        let sc = s.conj();
        // Rows k, k+1 over columns k..=i.
        let (top, bottom) = data.split_at_mut((k + 1) * n);
        let rk = &mut top[k * n + k..k * n + i + 1];
        let rk1 = &mut bottom[k..i + 1];
        for (a, b) in rk.iter_mut().zip(rk1.iter_mut()) {
            let x = *a;
            let y = *b;
            *a = x.scale(c) + s * y;
            *b = y.scale(c) - sc * x;
        }
        // Columns k, k+1 over rows l..=min(k+2, i).
        let last = (k + 2).min(i);
        for r in l..=last {
            let base = r * n + k;
            let x = data[base];
            let y = data[base + 1];
            data[base] = x.scale(c) + sc * y;
            data[base + 1] = y.scale(c) - s * x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn diagonal_matrix() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, -2.0, 0.0], &[0.0, 0.0, 0.5]]).unwrap();
        let ev = sorted(eigenvalues_with(&m, &EigenOptions::native()).unwrap());
        for (z, want) in ev.iter().zip([-2.0, 0.5, 3.0]) {
            assert!((z - Complex::new(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rotation_generator() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let ev = sorted(eigenvalues_with(&m, &EigenOptions::native()).unwrap());
        assert!((ev[0] - Complex::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn companion_of_factored_cubic() {
        // z^3 - 2z^2 - z + 2 = (z - 1)(z + 1)(z - 2)
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[2.0, 1.0, -2.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        let ev = sorted(eigenvalues_with(&m, &EigenOptions::native()).unwrap());
        for (z, want) in ev.iter().zip([-1.0, 1.0, 2.0]) {
            assert!((z - Complex::new(want, 0.0)).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = ComplexMatrix::<f64>::identity(3);
        m[(1, 2)] = Complex::new(f64::NAN, 0.0);
        assert!(matches!(eigenvalues(&m), Err(LinalgError::NonFinite)));
        m[(1, 2)] = Complex::new(0.0, f64::INFINITY);
        assert!(matches!(eigenvalues(&m), Err(LinalgError::NonFinite)));
    }

    #[test]
    fn iteration_cap_reports_window() {
        // A zero sweep budget cannot converge on a matrix needing iterations.
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 10.0]]).unwrap();
        let mut h = m.clone();
        hessenberg_in_place(&mut h);
        let err = hessenberg_qr(&mut h, 0).unwrap_err();
        match err {
            LinalgError::NoConvergence { window_lo, window_hi, .. } => {
                assert!(window_lo <= window_hi && window_hi == 2)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hessenberg_preserves_trace_and_shape() {
        let m = ComplexMatrix::<f64>::from_fn(7, |i, j| {
            Complex::new(((i * 7 + j) as f64 * 0.37).sin(), ((i + 3 * j) as f64 * 0.11).cos())
        });
        let mut h = m.clone();
        hessenberg_in_place(&mut h);
        assert!((h.trace() - m.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - m.frobenius_norm()).abs() < 1e-12);
        for i in 0..7usize {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(h[(i, j)], Complex::zero());
            }
        }
    }

    #[test]
    fn balancing_is_a_similarity() {
        let m =
            ComplexMatrix::<f64>::from_real_rows(&[&[1.0, 1e6, 0.0], &[1e-6, 2.0, 1e4], &[0.0, 1e-4, 3.0]]).unwrap();
        let mut b = m.clone();
        balance(&mut b);
        assert_eq!(b.trace(), m.trace());
        let a = sorted(eigenvalues_with(&m, &EigenOptions { balance: false, ..EigenOptions::native() }).unwrap());
        let c = sorted(eigenvalues_with(&m, &EigenOptions::native()).unwrap());
        for (x, y) in a.iter().zip(&c) {
            assert!((x - y).norm() < 1e-8);
        }
    }

    #[test]
    fn f32_solver_runs() {
        let m = ComplexMatrix::<f32>::from_real_rows(&[&[0.0, 1.0], &[-4.0, 0.0]]).unwrap();
        let mut ev = eigenvalues_with(&m, &EigenOptions::native()).unwrap();
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[1] - Complex::new(0.0f32, 2.0)).norm() < 1e-5);
    }
}
