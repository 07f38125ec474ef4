use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::scalar::Real;

/// Default absolute classification tolerance, relative to the spectral scale.
pub const DEFAULT_CLASSIFICATION_TOL: f64 = 1e-8;

/// Eigenvalues of one matrix split into real ones and conjugate pairs.
///
/// Every index appears exactly once, either in `real_indices` or in one pair.
/// Pairs are stored as `(upper, lower)`: `eigenvalues[upper].im > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<Complex<T>>,
    pub real_indices: Vec<usize>,
    pub pair_indices: Vec<(usize, usize)>,
    pub classification_tolerance: T,
    pub spectral_scale: T,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn real_count(&self) -> usize {
        self.real_indices.len()
    }

    pub fn complex_count(&self) -> usize {
        2 * self.pair_indices.len()
    }

    pub fn real_fraction(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.real_count() as f64 / self.len() as f64
    }

    /// Real parts of the real-classified eigenvalues.
    pub fn real_values(&self) -> impl Iterator<Item = T> + '_ {
        self.real_indices.iter().map(move |&i| self.eigenvalues[i].re)
    }

    /// The complex-classified eigenvalues, both members of every pair.
    pub fn complex_values(&self) -> impl Iterator<Item = Complex<T>> + '_ {
        self.pair_indices.iter().flat_map(move |&(i, j)| [self.eigenvalues[i], self.eigenvalues[j]])
    }

    /// Per-eigenvalue flag: `true` if classified real.
    pub fn real_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for &i in &self.real_indices {
            mask[i] = true;
        }
        mask
    }
}

/// `max(1, max |z|)`.
pub fn spectral_scale<T: Real>(eigs: &[Complex<T>]) -> T {
    eigs.iter().fold(T::one(), |m, z| m.max(z.norm()))
}

/// Splits `eigs` into real eigenvalues and conjugate pairs.
///
/// With `thr = tol * spectral_scale`, an eigenvalue with `|Im| <= thr` is
/// real. Every eigenvalue above the axis is greedily paired, in order of
/// increasing real part, with the nearest unused eigenvalue below the axis
/// lying within `thr` of its conjugate. An off-axis eigenvalue left without
/// partner is an error.
pub fn classify_spectrum<T: Real>(eigs: Vec<Complex<T>>, tol: T) -> Result<Spectrum<T>, LinalgError> {
    if !(tol > T::zero()) {
        return Err(LinalgError::InvalidTolerance(tol.to_f64_lossy()));
    }
    let scale = spectral_scale(&eigs);
    let thr = tol * scale;

    let mut real_indices = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, z) in eigs.iter().enumerate() {
        if z.im.abs() <= thr {
            real_indices.push(i);
        } else if z.im > T::zero() {
            upper.push(i);
        } else {
            lower.push(i);
        }
    }
    let by_re_im = |a: &usize, b: &usize| {
        let (za, zb) = (eigs[*a], eigs[*b]);
        za.re.partial_cmp(&zb.re).unwrap().then(za.im.partial_cmp(&zb.im).unwrap())
    };
    upper.sort_by(by_re_im);
    lower.sort_by(by_re_im);

    let mut used = vec![false; lower.len()];
    let mut pair_indices = Vec::with_capacity(upper.len());
    for &i in &upper {
        let target = eigs[i].conj();
        // Candidates have real part within thr of the target.
        let start = lower.partition_point(|&j| eigs[j].re < target.re - thr);
        let mut best: Option<(usize, T)> = None;
        for (slot, &j) in lower.iter().enumerate().skip(start) {
            if eigs[j].re > target.re + thr {
                break;
            }
            if used[slot] {
                continue;
            }
            let d = (eigs[j] - target).norm();
            if d <= thr && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((slot, d));
            }
        }
        match best {
            Some((slot, _)) => {
                used[slot] = true;
                pair_indices.push((i, lower[slot]));
            }
            None => {
                return Err(LinalgError::Classification {
                    index: i,
                    re: eigs[i].re.to_f64_lossy(),
                    im: eigs[i].im.to_f64_lossy(),
                })
            }
        }
    }
    if let Some(slot) = used.iter().position(|u| !u) {
        let j = lower[slot];
        return Err(LinalgError::Classification {
            index: j,
            re: eigs[j].re.to_f64_lossy(),
            im: eigs[j].im.to_f64_lossy(),
        });
    }
    real_indices.sort_unstable();
    Ok(Spectrum { eigenvalues: eigs, real_indices, pair_indices, classification_tolerance: tol, spectral_scale: scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn exact_conjugates() {
        let s = classify_spectrum(vec![z(1.0, 0.0), z(2.0, 1.0), z(2.0, -1.0)], 1e-8).unwrap();
        assert_eq!(s.real_indices, vec![0]);
        assert_eq!(s.pair_indices, vec![(1, 2)]);
        assert_eq!(s.real_count(), 1);
        assert_eq!(s.complex_count(), 2);
    }

    #[test]
    fn unpaired_eigenvalue_is_reported() {
        let err = classify_spectrum(vec![z(1.0, 0.0), z(2.0, 1.0), z(2.0, -0.5)], 1e-8).unwrap_err();
        assert!(matches!(err, LinalgError::Classification { index: 1, .. }));
        let err = classify_spectrum(vec![z(0.0, -3.0)], 1e-8).unwrap_err();
        assert!(matches!(err, LinalgError::Classification { index: 0, .. }));
    }

    #[test]
    fn near_axis_is_real_and_tolerance_scales() {
        // scale = 100, so thr = 1e-6
        let s = classify_spectrum(vec![z(100.0, 0.0), z(0.5, 5e-7), z(-1.0, 0.0)], 1e-8).unwrap();
        assert_eq!(s.real_count(), 3);
        assert_eq!(s.spectral_scale, 100.0);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(classify_spectrum(vec![z(1.0, 0.0)], 0.0).is_err());
        assert!(classify_spectrum(vec![z(1.0, 0.0)], f64::NAN).is_err());
    }

    #[test]
    fn nearest_partner_wins() {
        let tol = 1e-3; // thr = 1e-3 * 2
        let eigs = vec![z(1.0, 1.0), z(1.0005, 1.0), z(1.0004, -1.0), z(1.0, -1.0)];
        let s = classify_spectrum(eigs, tol).unwrap();
        assert_eq!(s.pair_indices, vec![(0, 3), (1, 2)]);
    }

    proptest! {
        #[test]
        fn partition_is_exact(
            reals in prop::collection::vec(-5.0f64..5.0, 0..8),
            pairs in prop::collection::vec((-5.0f64..5.0, 0.01f64..5.0), 0..8),
            seed in any::<u64>(),
        ) {
            let mut eigs: Vec<Complex<f64>> = reals.iter().map(|&x| z(x, 0.0)).collect();
            for &(re, im) in &pairs {
                eigs.push(z(re, im));
                eigs.push(z(re, -im));
            }
            // Deterministic shuffle.
            let mut s = seed;
            for i in (1..eigs.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                eigs.swap(i, (s >> 33) as usize % (i + 1));
            }
            let spec = classify_spectrum(eigs.clone(), 1e-8).unwrap();
            prop_assert_eq!(spec.real_count(), reals.len());
            prop_assert_eq!(spec.pair_indices.len(), pairs.len());
            let mut seen = vec![0u8; eigs.len()];
            for &i in &spec.real_indices { seen[i] += 1; }
            for &(i, j) in &spec.pair_indices {
                seen[i] += 1;
                seen[j] += 1;
                prop_assert!((eigs[i] - eigs[j].conj()).norm() <= 1e-8 * spec.spectral_scale);
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
