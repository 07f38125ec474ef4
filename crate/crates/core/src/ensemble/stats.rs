use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::Histogram1D;
use crate::analytic::RealDensityCurve;
use crate::linalg::Spectrum;

/// Mean and standard error of the mean; the error is 0 below two values.
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityComparison {
    /// `sum |h_i - ρ(c_i)| w`.
    pub l1: f64,
    /// Largest gap between the cumulative masses.
    pub ks: f64,
}

/// Compares a histogram with a curve tabulated at its bin centers. Both are
/// densities per eigenvalue, so neither is renormalized.
pub fn compare_density(hist: &Histogram1D, curve: &RealDensityCurve<f64>) -> DensityComparison {
    debug_assert_eq!(hist.bins(), curve.rho.len());
    let w = hist.bin_width();
    let (mut l1, mut ks, mut ch, mut cr) = (0.0f64, 0.0f64, 0.0, 0.0);
    for (h, r) in hist.density().iter().zip(&curve.rho) {
        l1 += (h - r).abs() * w;
        ch += h * w;
        cr += r * w;
        ks = ks.max((ch - cr).abs());
    }
    DensityComparison { l1, ks }
}

/// Count of `values` within `width / 2` of `center`, per eigenvalue and unit length.
pub fn density_near(values: impl IntoIterator<Item = f64>, center: f64, width: f64, total: usize) -> f64 {
    let half = 0.5 * width;
    let count = values.into_iter().filter(|x| (x - center).abs() <= half).count();
    count as f64 / (total.max(1) as f64 * width)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// `Q(x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2)`, the Kolmogorov tail.
pub fn kolmogorov_pvalue(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * x * x).exp();
        sum += sign * term;
        if term < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (Stephens' small-sample correction). Ties are handled exactly in the
/// statistic; the p-value is then conservative.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n1, n2) = (a.len(), b.len());
    if n1 == 0 || n2 == 0 {
        return KsTest { statistic: 0.0, p_value: 1.0, n1, n2 };
    }
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n1 && j < n2 {
        let x = a[i].min(b[j]);
        while i < n1 && a[i] <= x {
            i += 1;
        }
        while j < n2 && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let en = ((n1 * n2) as f64 / (n1 + n2) as f64).sqrt();
    let p_value = kolmogorov_pvalue((en + 0.12 + 0.11 / en) * d);
    KsTest { statistic: d, p_value, n1, n2 }
}

/// Two-sided z-test of `E[right - left] = 0` for the numbers of complex
/// eigenvalues on either side of the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryTest {
    pub samples: usize,
    pub mean_difference: f64,
    pub std_error: f64,
    pub p_value: f64,
}

/// Splits sorted `values` into intervals at spacings larger than `ratio`
/// times the mean spacing of the `neighbours` values on the sparser side.
/// Spacings with fewer than `neighbours` values on either side never split.
pub fn detect_intervals(values: &[f64], neighbours: usize, ratio: f64) -> Vec<(f64, f64)> {
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    let Some((&first, &last)) = values.first().zip(values.last()) else {
        return Vec::new();
    };
    let k = neighbours.max(1);
    let gaps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let mut out = Vec::new();
    let mut start = first;
    for i in k..gaps.len().saturating_sub(k) {
        let local = mean(&gaps[i - k..i]).max(mean(&gaps[i + 1..i + 1 + k]));
        if gaps[i] > ratio * local {
            out.push((start, values[i]));
            start = values[i + 1];
        }
    }
    out.push((start, last));
    out
}

pub fn left_right_symmetry(spectra: &[Spectrum<f64>]) -> SymmetryTest {
    let diffs: Vec<f64> = spectra
        .iter()
        .map(|s| {
            s.complex_values()
                .map(|z| {
                    if z.re > 0.0 {
                        1.0
                    } else if z.re < 0.0 {
                        -1.0
                    } else {
                        0.0
                    }
                })
                .sum()
        })
        .collect();
    let (mean, se) = mean_and_std_error(&diffs);
    let p_value = if diffs.is_empty() || mean == 0.0 {
        1.0
    } else if se == 0.0 {
        0.0
    } else {
        erfc((mean / se).abs() / std::f64::consts::SQRT_2)
    };
    SymmetryTest { samples: diffs.len(), mean_difference: mean, std_error: se, p_value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::classify_spectrum;
    use num_complex::Complex;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn intervals_split_at_wide_gaps_only() {
        let mut v: Vec<f64> = (0..100).map(|i| i as f64 * 0.01).collect();
        v.extend((0..50).map(|i| 2.0 + i as f64 * 0.02));
        let iv = detect_intervals(&v, 10, 15.0);
        assert_eq!(iv, vec![(0.0, 0.99), (2.0, 2.98)]);
        // A wide gap near the ends lacks neighbours and is kept.
        v.push(10.0);
        assert_eq!(detect_intervals(&v, 10, 15.0).len(), 2);
        assert!(detect_intervals(&[], 10, 15.0).is_empty());
        let u: Vec<f64> = (0..1000).map(|i| (i as f64).sqrt()).collect();
        assert_eq!(detect_intervals(&u, 10, 15.0).len(), 1);
    }

    #[test]
    fn identical_density_compares_to_zero() {
        let mut h = Histogram1D::new(0.0, 1.0, 4, 8);
        h.add_all([0.1, 0.3, 0.3, 0.6, 0.9, 0.9, 0.9, 0.95]);
        let curve = RealDensityCurve { xs: h.centers(), rho: h.density(), lambda: 0.0, t: -1.0, m: 1.0 };
        assert_eq!(compare_density(&h, &curve), DensityComparison { l1: 0.0, ks: 0.0 });
        let zero = RealDensityCurve { rho: vec![0.0; 4], ..curve };
        let c = compare_density(&h, &zero);
        assert!((c.l1 - 1.0).abs() < 1e-12 && (c.ks - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kolmogorov_tail_values() {
        // Q(1.36) ≈ 0.049, Q(1.63) ≈ 0.0098.
        assert!((kolmogorov_pvalue(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_pvalue(1.63) - 0.0098).abs() < 5e-4);
        assert_eq!(kolmogorov_pvalue(0.0), 1.0);
    }

    #[test]
    fn ks_detects_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let c: Vec<f64> = (0..2000).map(|_| rng.random::<f64>() + 0.1).collect();
        assert!(ks_two_sample(&a, &b).p_value > 0.01);
        assert!(ks_two_sample(&a, &c).p_value < 1e-6);
        let same = ks_two_sample(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]);
        assert!((same.statistic - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_spectra_pass() {
        let s = classify_spectrum(
            vec![Complex::new(1.0, 1.0), Complex::new(1.0, -1.0), Complex::new(-1.0, 2.0), Complex::new(-1.0, -2.0)],
            1e-8,
        )
        .unwrap();
        let t = left_right_symmetry(&[s.clone(), s]);
        assert_eq!(t.mean_difference, 0.0);
        assert_eq!(t.p_value, 1.0);
    }

    proptest! {
        #[test]
        fn mean_error_scales(xs in prop::collection::vec(-5.0f64..5.0, 2..50), c in 0.1f64..10.0) {
            let (m, se) = mean_and_std_error(&xs);
            let ys: Vec<f64> = xs.iter().map(|x| c * x).collect();
            let (m2, se2) = mean_and_std_error(&ys);
            prop_assert!((m2 - c * m).abs() < 1e-9);
            prop_assert!((se2 - c * se).abs() < 1e-9);
        }

        #[test]
        fn ks_statistic_is_symmetric(a in prop::collection::vec(-1.0f64..1.0, 1..40), b in prop::collection::vec(-1.0f64..1.0, 1..40)) {
            let x = ks_two_sample(&a, &b);
            let y = ks_two_sample(&b, &a);
            prop_assert!((x.statistic - y.statistic).abs() < 1e-15);
            prop_assert!((0.0..=1.0).contains(&x.statistic));
        }
    }
}
