use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ComplexMatrix, HermitianMatrix, LinalgError, MetricSpec};
use crate::scalar::Real;

/// Draws `A` from the Gaussian unitary ensemble with weight
/// `exp(-(n m^2 / 2) tr A^2)`: real diagonal entries and complex upper
/// entries each of variance `1 / (n m^2)`, so the spectrum fills `[-2/m, 2/m]`.
pub fn sample_gue<T, R>(n: usize, m: T, rng: &mut R) -> HermitianMatrix<T>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let var = (T::from_usize_lossy(n) * m * m).recip();
    let sd_diag = var.sqrt();
    let sd_off = (var * T::lit(0.5)).sqrt();
    // Fixed draw order (row by row over the upper triangle) keeps samples
    // reproducible from a seed.
    HermitianMatrix::from_upper(n, |i, j| {
        if i == j {
            let x: T = StandardNormal.sample(rng);
            Complex::new(x * sd_diag, T::zero())
        } else {
            let re: T = StandardNormal.sample(rng);
            let im: T = StandardNormal.sample(rng);
            Complex::new(re * sd_off, im * sd_off)
        }
    })
}

/// Dense diagonal metric matrix.
pub fn build_metric<T: Real>(spec: &MetricSpec) -> Result<ComplexMatrix<T>, LinalgError> {
    spec.validate()?;
    let diag: Vec<Complex<T>> = (0..spec.n).map(|i| Complex::new(T::lit(spec.entry(i)), T::zero())).collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// `phi = A B` for the diagonal metric `B`, formed by column scaling.
pub fn build_phi<T: Real>(a: &HermitianMatrix<T>, spec: &MetricSpec) -> Result<ComplexMatrix<T>, LinalgError> {
    spec.validate()?;
    if a.n() != spec.n {
        return Err(LinalgError::DimensionMismatch { expected: spec.n, found: a.n() });
    }
    let n = spec.n;
    let t = T::lit(spec.t);
    let mut phi = a.as_matrix().clone();
    if spec.k < n {
        let data = phi.as_mut_slice();
        for row in data.chunks_exact_mut(n) {
            for z in &mut row[spec.k..] {
                *z = z.scale(t);
            }
        }
    }
    Ok(phi)
}

/// Max-norm of `phi^† B - B phi` for a diagonal metric given by its entries.
pub fn intertwining_residual<T: Real>(phi: &ComplexMatrix<T>, metric_diag: &[T]) -> T {
    let n = phi.n();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            // (phi^† B)_{ij} = conj(phi_{ji}) b_j ; (B phi)_{ij} = b_i phi_{ij}
            let lhs = phi[(j, i)].conj().scale(metric_diag[j]);
            let rhs = phi[(i, j)].scale(metric_diag[i]);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// General intertwining residual `max |phi^† M - M phi|` for a dense metric.
pub fn intertwining_residual_dense<T: Real>(
    phi: &ComplexMatrix<T>,
    metric: &ComplexMatrix<T>,
) -> Result<T, LinalgError> {
    let lhs = phi.adjoint().matmul(metric)?;
    let rhs = metric.matmul(phi)?;
    Ok(lhs.sub(&rhs)?.max_abs())
}

pub(crate) fn metric_diagonal<T: Real>(spec: &MetricSpec) -> Vec<T> {
    (0..spec.n).map(|i| T::lit(spec.entry(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn metric_examples() {
        let b = build_metric::<f64>(&MetricSpec { n: 4, k: 2, t: -1.0 }).unwrap();
        assert_eq!(b, ComplexMatrix::from_diagonal(&[c(1.0), c(1.0), c(-1.0), c(-1.0)]));
        let b = build_metric::<f64>(&MetricSpec { n: 3, k: 3, t: -5.0 }).unwrap();
        assert_eq!(b, ComplexMatrix::identity(3));
        let b = build_metric::<f64>(&MetricSpec { n: 4, k: 2, t: -3.0 }).unwrap();
        assert_eq!(b, ComplexMatrix::from_diagonal(&[c(1.0), c(1.0), c(-3.0), c(-3.0)]));
    }

    #[test]
    fn singular_metric_rejected() {
        let err = build_metric::<f64>(&MetricSpec { n: 4, k: 2, t: 0.0 }).unwrap_err();
        assert!(matches!(err, LinalgError::SingularMetric));
        assert!(MetricSpec::new(3, 4, -1.0).is_err());
        assert!(MetricSpec::new(0, 0, -1.0).is_err());
    }

    #[test]
    fn phi_identity_case() {
        let a = HermitianMatrix::<f64>::identity(2);
        let phi = build_phi(&a, &MetricSpec { n: 2, k: 1, t: -1.0 }).unwrap();
        assert_eq!(phi, ComplexMatrix::from_diagonal(&[c(1.0), c(-1.0)]));
    }

    #[test]
    fn phi_dimension_mismatch() {
        let a = HermitianMatrix::<f64>::identity(3);
        let err = build_phi(&a, &MetricSpec { n: 2, k: 1, t: -1.0 }).unwrap_err();
        assert!(matches!(err, LinalgError::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn phi_positive_metric_is_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = sample_gue::<f64, _>(6, 1.0, &mut rng);
        let phi = build_phi(&a, &MetricSpec { n: 6, k: 6, t: -2.0 }).unwrap();
        assert_eq!(&phi, a.as_matrix());
    }

    #[test]
    fn gue_is_exactly_hermitian_with_real_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 7, 30] {
            let a = sample_gue::<f64, _>(n, 1.3, &mut rng);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(a[(i, j)], a[(j, i)].conj());
                }
            }
            assert_eq!(a.as_matrix().trace().im, 0.0);
        }
    }

    #[test]
    fn gue_scalar_is_unit_gaussian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 100_000;
        let xs: Vec<f64> = (0..draws).map(|_| sample_gue::<f64, _>(1, 1.0, &mut rng)[(0, 0)].re).collect();
        let mean = xs.iter().sum::<f64>() / draws as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se_mean = (1.0 / draws as f64).sqrt();
        // Var of the sample variance of a unit Gaussian is 2 / (n - 1).
        let se_var = (2.0 / (draws - 1) as f64).sqrt();
        assert!(mean.abs() < 3.0 * se_mean, "mean {mean}");
        assert!((var - 1.0).abs() < 3.0 * se_var, "var {var}");
    }

    #[test]
    fn intertwining_holds_for_sampled_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for &(n, k, t) in &[(16, 5, -1.0), (20, 13, -3.2), (9, 0, 2.5), (12, 12, -1.0)] {
            let spec = MetricSpec { n, k, t };
            let a = sample_gue::<f64, _>(n, 1.0, &mut rng);
            let phi = build_phi(&a, &spec).unwrap();
            let res = intertwining_residual(&phi, &metric_diagonal::<f64>(&spec));
            let bound = 100.0 * f64::EPSILON * a.as_matrix().frobenius_norm() * t.abs().max(1.0);
            assert!(res <= bound, "residual {res} > {bound}");
            let dense = intertwining_residual_dense(&phi, &build_metric(&spec).unwrap()).unwrap();
            assert!(dense <= bound);
        }
    }
}
