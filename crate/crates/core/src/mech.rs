//! Disordered mechanical system `M x'' = -K x` with random Wishart-type
//! mass and stiffness matrices.
//!
//! `M = C^† C + m0` and `K = C̃^† C̃` are hermitian and positive, so
//! `phi = M^{-1} K` satisfies `phi^† M = M phi` with a positive metric and
//! its eigenvalues `ω^2` are real and nonnegative.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ensemble::{mean_and_std_error, sample_seed, FractionEstimate, Histogram1D};
use crate::linalg::{
    classify_spectrum, eigenvalues_with, intertwining_residual_dense, ComplexMatrix, EigenOptions, HermitianMatrix,
    LinalgError, Spectrum, DEFAULT_CLASSIFICATION_TOL,
};
use crate::scalar::Real;

/// Largest accepted condition estimate of `M`.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Error)]
pub enum MechError {
    #[error("invalid mechanical parameters: {0}")]
    InvalidParams(String),
    #[error("mass matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: Box<MechError>,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechParams {
    pub n: usize,
    /// Scale of the stiffness factor `C̃`.
    pub sigma: f64,
    /// Scale of the mass factor `C`.
    pub sigma_prime: f64,
    pub m0: f64,
    pub seed: u64,
}

impl MechParams {
    pub fn new(n: usize, sigma: f64, sigma_prime: f64, m0: f64, seed: u64) -> Result<Self, MechError> {
        let p = Self { n, sigma, sigma_prime, m0, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MechError> {
        if self.n == 0 {
            return Err(MechError::InvalidParams("n must be positive".into()));
        }
        for (name, v) in [("sigma", self.sigma), ("sigma_prime", self.sigma_prime), ("m0", self.m0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MechError::InvalidParams(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

/// `n x n` matrix of independent complex Gaussians with `E|c|^2 = sigma^2 / n`,
/// the density `exp(-(n / sigma^2) tr C^† C)`.
pub fn sample_factor<T, R>(n: usize, sigma: T, rng: &mut R) -> ComplexMatrix<T>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let sd = sigma * (T::lit(2.0) * T::from_usize_lossy(n)).recip().sqrt();
    ComplexMatrix::from_fn(n, |_, _| {
        let re: T = StandardNormal.sample(rng);
        let im: T = StandardNormal.sample(rng);
        Complex::new(re * sd, im * sd)
    })
}

/// `C^† C + shift`, hermitian by construction.
pub fn gram<T: Real>(c: &ComplexMatrix<T>, shift: T) -> HermitianMatrix<T> {
    let n = c.n();
    let ct = c.adjoint();
    HermitianMatrix::from_upper(n, |i, j| {
        let (a, b) = (ct.row(i), ct.row(j));
        let s = a.iter().zip(b).fold(Complex::zero(), |s: Complex<T>, (x, y)| s + x * y.conj());
        if i == j {
            s + Complex::new(shift, T::zero())
        } else {
            s
        }
    })
}

/// Draw `index` of the pair `(M, K)` for `params`.
pub fn sample_mech_pair_at(
    params: &MechParams,
    index: usize,
) -> Result<(HermitianMatrix<f64>, HermitianMatrix<f64>), MechError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(params.seed, index));
    let c = sample_factor(params.n, params.sigma_prime, &mut rng);
    let c_tilde = sample_factor(params.n, params.sigma, &mut rng);
    Ok((gram(&c, params.m0), gram(&c_tilde, 0.0)))
}

/// The first draw of `(M, K)`.
pub fn sample_mech_pair(params: &MechParams) -> Result<(HermitianMatrix<f64>, HermitianMatrix<f64>), MechError> {
    sample_mech_pair_at(params, 0)
}

/// Lower Cholesky factor of a hermitian positive definite matrix, row-major.
fn cholesky<T: Real>(a: &HermitianMatrix<T>) -> Result<Vec<Complex<T>>, MechError> {
    let n = a.n();
    let mut l = vec![Complex::<T>::zero(); n * n];
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > T::zero()) {
            return Err(MechError::NotPositiveDefinite { pivot: j });
        }
        let djj = d.sqrt();
        l[j * n + j] = Complex::new(djj, T::zero());
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s.unscale(djj);
        }
    }
    Ok(l)
}

/// Solves `L L^† X = B` in place, column by column.
fn cholesky_solve<T: Real>(l: &[Complex<T>], b: &mut ComplexMatrix<T>) {
    let n = b.n();
    let mut col = vec![Complex::<T>::zero(); n];
    for c in 0..n {
        for (i, x) in col.iter_mut().enumerate() {
            *x = b[(i, c)];
        }
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= l[i * n + k] * col[k];
            }
            col[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= l[k * n + i].conj() * col[k];
            }
            col[i] = s / l[i * n + i];
        }
        for (i, x) in col.iter().enumerate() {
            b.as_mut_slice()[i * n + c] = *x;
        }
    }
}

/// `phi = M^{-1} K` from a Cholesky solve, with the Frobenius condition
/// estimate `||M||_F ||M^{-1}||_F` of `M`.
pub fn mech_phi<T: Real>(m: &HermitianMatrix<T>, k: &HermitianMatrix<T>) -> Result<(ComplexMatrix<T>, T), MechError> {
    if m.n() != k.n() {
        return Err(LinalgError::DimensionMismatch { expected: m.n(), found: k.n() }.into());
    }
    if !m.as_matrix().is_finite() || !k.as_matrix().is_finite() {
        return Err(LinalgError::NonFinite.into());
    }
    let l = cholesky(m)?;
    let mut inv = ComplexMatrix::identity(m.n());
    cholesky_solve(&l, &mut inv);
    let cond = m.as_matrix().frobenius_norm() * inv.frobenius_norm();
    if !(cond <= T::lit(MAX_CONDITION)) {
        return Err(LinalgError::IllConditioned { estimate: cond.to_f64_lossy() }.into());
    }
    let mut phi = k.as_matrix().clone();
    cholesky_solve(&l, &mut phi);
    Ok((phi, cond))
}

/// Spectrum of `M^{-1} K` for an explicit pair.
pub fn mech_spectrum_of(
    m: &HermitianMatrix<f64>,
    k: &HermitianMatrix<f64>,
    eigen: &EigenOptions,
    tol: f64,
) -> Result<Spectrum<f64>, MechError> {
    let (phi, _) = mech_phi(m, k)?;
    let eigs = eigenvalues_with(&phi, eigen)?;
    Ok(classify_spectrum(eigs, tol)?)
}

/// Spectrum of the first draw of `M^{-1} K`.
pub fn mech_spectrum(params: &MechParams) -> Result<Spectrum<f64>, MechError> {
    let (m, k) = sample_mech_pair(params)?;
    mech_spectrum_of(&m, &k, &EigenOptions::default(), DEFAULT_CLASSIFICATION_TOL)
}

/// Per-sample diagnostics of a mechanical run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechSampleStats {
    /// `max |Im ω^2| / scale`.
    pub max_rel_imag: f64,
    /// `min Re ω^2 / scale`.
    pub min_rel_real: f64,
    /// `||phi^† M - M phi||_max / (||M||_max ||phi||_max)`.
    pub intertwining: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechRun {
    pub params: MechParams,
    pub spectra: Vec<Spectrum<f64>>,
    pub stats: Vec<MechSampleStats>,
    pub fraction: FractionEstimate,
    pub hist1d: Histogram1D,
}

impl MechRun {
    pub fn max_rel_imag(&self) -> f64 {
        self.stats.iter().map(|s| s.max_rel_imag).fold(0.0, f64::max)
    }

    pub fn min_rel_real(&self) -> f64 {
        self.stats.iter().map(|s| s.min_rel_real).fold(f64::INFINITY, f64::min)
    }
}

fn mech_sample(
    params: &MechParams,
    index: usize,
    eigen: &EigenOptions,
) -> Result<(Spectrum<f64>, MechSampleStats), MechError> {
    let (m, k) = sample_mech_pair_at(params, index)?;
    let (phi, condition) = mech_phi(&m, &k)?;
    let intertwining = intertwining_residual_dense(&phi, m.as_matrix())?
        / (m.as_matrix().max_abs() * phi.max_abs()).max(f64::MIN_POSITIVE);
    let eigs = eigenvalues_with(&phi, eigen)?;
    let s = classify_spectrum(eigs, DEFAULT_CLASSIFICATION_TOL)?;
    let scale = s.spectral_scale;
    let max_rel_imag = s.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / scale;
    let min_rel_real = s.eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) / scale;
    Ok((s, MechSampleStats { max_rel_imag, min_rel_real, intertwining, condition }))
}

/// Draws `samples` pairs on `workers` threads, in index order.
pub fn run_mech(params: &MechParams, samples: usize, bins: usize, workers: usize) -> Result<MechRun, MechError> {
    params.validate()?;
    if samples == 0 || bins < 2 || workers == 0 {
        return Err(MechError::InvalidParams("need samples >= 1, bins >= 2, workers >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| MechError::InvalidParams(format!("worker pool: {e}")))?;
    let eigen = EigenOptions::default();
    let results: Vec<(Spectrum<f64>, MechSampleStats)> = pool.install(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| mech_sample(params, i, &eigen).map_err(|e| MechError::Sample { sample: i, source: Box::new(e) }))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let (spectra, stats): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let hi = spectra.iter().flat_map(|s| s.eigenvalues.iter().map(|z| z.re)).fold(0.0, f64::max);
    let mut hist1d = Histogram1D::new(0.0, hi.max(f64::MIN_POSITIVE), bins, params.n * samples);
    for s in &spectra {
        hist1d.add_all(s.real_values());
    }
    let per_sample: Vec<f64> = spectra.iter().map(|s| s.real_fraction()).collect();
    let (mean, std_error) = mean_and_std_error(&per_sample);
    let fraction = FractionEstimate { mean, std_error, per_sample, n: params.n, k: params.n, t: 1.0 };
    Ok(MechRun { params: *params, spectra, stats, fraction, hist1d })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_matrix_is_shifted_gram() {
        let p = MechParams::new(24, 1.0, 1.0, 1.0, 4).unwrap();
        let (m, _) = sample_mech_pair(&p).unwrap();
        let eigs = eigenvalues_with(m.as_matrix(), &EigenOptions::native()).unwrap();
        let min = eigs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        assert!(min >= 1.0 - 1e-10, "{min}");
        assert!(eigs.iter().all(|z| z.im.abs() < 1e-10));
    }

    #[test]
    fn equal_pair_gives_identity() {
        let p = MechParams::new(16, 1.0, 1.0, 0.5, 2).unwrap();
        let (m, _) = sample_mech_pair(&p).unwrap();
        let s = mech_spectrum_of(&m, &m, &EigenOptions::native(), 1e-8).unwrap();
        assert_eq!(s.real_count(), 16);
        assert!(s.eigenvalues.iter().all(|z| (z - Complex::new(1.0, 0.0)).norm() < 1e-10));
    }

    #[test]
    fn vanishing_mass_disorder_gives_wishart() {
        let p = MechParams::new(20, 1.0, 1e-9, 1.0, 8).unwrap();
        let (m, k) = sample_mech_pair(&p).unwrap();
        let (phi, _) = mech_phi(&m, &k).unwrap();
        let diff = phi.sub(k.as_matrix()).unwrap().max_abs();
        assert!(diff < 1e-12 * k.as_matrix().max_abs().max(1.0), "{diff}");
    }

    #[test]
    fn spectrum_is_real_and_nonnegative() {
        let p = MechParams::new(48, 1.0, 1.0, 1.0, 5).unwrap();
        let s = mech_spectrum(&p).unwrap();
        assert_eq!(s.real_count(), 48);
        let scale = s.spectral_scale;
        assert!(s.eigenvalues.iter().all(|z| z.re >= -1e-8 * scale && z.im.abs() <= 1e-8 * scale));
    }

    #[test]
    fn cholesky_solve_inverts() {
        let a = HermitianMatrix::from_upper(3, |i, j| match (i, j) {
            (0, 0) => Complex::new(4.0, 0.0),
            (1, 1) => Complex::new(3.0, 0.0),
            (2, 2) => Complex::new(2.0, 0.0),
            (0, 1) => Complex::new(1.0, 1.0),
            (1, 2) => Complex::new(0.0, -0.5),
            _ => Complex::new(0.2, 0.0),
        });
        let l = cholesky(&a).unwrap();
        let mut x = ComplexMatrix::identity(3);
        cholesky_solve(&l, &mut x);
        let prod = a.as_matrix().matmul(&x).unwrap();
        assert!(prod.sub(&ComplexMatrix::identity(3)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn indefinite_and_singular_masses_are_rejected() {
        let bad =
            HermitianMatrix::from_upper(2, |i, j| if i == j { Complex::new(1.0, 0.0) } else { Complex::new(2.0, 0.0) });
        assert!(matches!(mech_phi(&bad, &bad), Err(MechError::NotPositiveDefinite { pivot: 1 })));
        let tiny = HermitianMatrix::from_upper(2, |i, j| match (i, j) {
            (0, 0) => Complex::new(1.0, 0.0),
            (1, 1) => Complex::new(1e-14, 0.0),
            _ => Complex::new(0.0, 0.0),
        });
        assert!(matches!(mech_phi(&tiny, &tiny), Err(MechError::Linalg(LinalgError::IllConditioned { .. }))));
        assert!(MechParams::new(4, 1.0, 0.0, 1.0, 0).is_err());
        assert!(MechParams::new(4, 1.0, 1.0, -1.0, 0).is_err());
    }

    #[test]
    fn factor_variance_concentrates() {
        let p = MechParams::new(128, 1.5, 0.7, 1.0, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = sample_factor(p.n, p.sigma, &mut rng);
        let tr = gram(&c, 0.0).as_matrix().trace().re / p.n as f64;
        assert!((tr / (p.sigma * p.sigma) - 1.0).abs() < 0.02, "{tr}");
    }

    #[test]
    fn run_is_all_real_and_reproducible() {
        let p = MechParams::new(32, 1.0, 1.0, 1.0, 1).unwrap();
        let a = run_mech(&p, 4, 10, 1).unwrap();
        let b = run_mech(&p, 4, 10, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fraction.mean, 1.0);
        assert!(a.max_rel_imag() <= 1e-8 && a.min_rel_real() >= -1e-8);
        assert!(a.stats.iter().all(|s| s.intertwining < 1e-10));
        assert_eq!(a.hist1d.total_in_window(), 128);
    }
}
