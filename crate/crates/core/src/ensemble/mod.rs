//! Monte Carlo runs over the `phi = A B` ensemble.
//!
//! Every sample draws its own generator from the master seed and its index
//! ([`sample_seed`]), so a run is a pure function of its [`RunConfig`] and
//! the worker count only changes wall-clock time. Aggregation walks the
//! samples in index order.

mod histogram;
mod persist;
mod region;
mod stats;

use std::time::Instant;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analytic::{self, AnalyticError, RealAxisSheet};
use crate::linalg::{
    build_phi, classify_spectrum, eigenvalues_with, intertwining_residual, metric_diagonal, sample_gue, ComplexMatrix,
    EigenOptions, LinalgError, MetricSpec, Spectrum, DEFAULT_CLASSIFICATION_TOL,
};

pub use histogram::{Histogram1D, Histogram2D, Window2D};
pub use persist::{
    read_eigenvalues_csv, read_hist1d_csv, write_artifact, write_eigenvalues_csv, write_hist1d_csv, write_hist2d_csv,
    EigenClass, EigenvalueRow, Hist1dRow, Hist2dRow,
};
pub use region::{
    boundary_violation_rate, default_margin, interior_density_estimate, uniformity_check, CellReport, InteriorDensity,
    UniformityReport,
};
pub use stats::{
    compare_density, density_near, detect_intervals, kolmogorov_pvalue, ks_two_sample, left_right_symmetry,
    mean_and_std_error, DensityComparison, KsTest, SymmetryTest,
};

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: LinalgError,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error("sample {sample}: {real} real eigenvalues, below the bound {bound}")]
    CarlsonViolation { sample: usize, real: usize, bound: usize },
    #[error("sample {sample}: {counted} eigenvalues classified out of {n}")]
    MassBookkeeping { sample: usize, counted: usize, n: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

/// Ensemble parameters: metric, GUE scale `m` and master seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub metric: MetricSpec,
    pub m: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, k: usize, t: f64, m: f64, seed: u64) -> Result<Self, EnsembleError> {
        let params = Self { metric: MetricSpec::new(n, k, t)?, m, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), EnsembleError> {
        self.metric.validate()?;
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(EnsembleError::InvalidConfig(format!("m = {} must be positive", self.m)));
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.metric.lambda()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelParams,
    pub samples: usize,
    pub bins_1d: usize,
    pub bins_2d: (usize, usize),
    /// Real-axis histogram range; `None` picks 1.2x the predicted extent.
    pub window_1d: Option<(f64, f64)>,
    /// Complex-plane histogram range; `None` picks 1.2x the predicted extent.
    pub window_2d: Option<Window2D>,
    pub workers: usize,
    pub classification_tol: f64,
    pub eigen: EigenOptions,
}

impl RunConfig {
    pub fn new(model: ModelParams, samples: usize) -> Self {
        Self {
            model,
            samples,
            bins_1d: 100,
            bins_2d: (64, 64),
            window_1d: None,
            window_2d: None,
            workers: 1,
            classification_tol: DEFAULT_CLASSIFICATION_TOL,
            eigen: EigenOptions::default(),
        }
    }

    /// Desk-scale sample counts: 1000 at `n <= 128`, 100 at `n <= 512`, 20 beyond.
    pub fn preset(model: ModelParams) -> Self {
        let samples = match model.metric.n {
            0..=128 => 1000,
            129..=512 => 100,
            _ => 20,
        };
        Self::new(model, samples)
    }

    pub fn validate(&self) -> Result<(), EnsembleError> {
        self.model.validate()?;
        let bad = |msg: String| Err(EnsembleError::InvalidConfig(msg));
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.bins_1d < 2 || self.bins_2d.0 < 2 || self.bins_2d.1 < 2 {
            return bad("every histogram needs at least 2 bins per axis".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if !(self.classification_tol > 0.0) {
            return bad(format!("classification tolerance {} must be positive", self.classification_tol));
        }
        if let Some((lo, hi)) = self.window_1d {
            if !(lo < hi) {
                return bad(format!("empty real window [{lo}, {hi}]"));
            }
        }
        if let Some(w) = self.window_2d {
            if !(w.re.0 < w.re.1 && w.im.0 < w.im.1) {
                return bad("empty complex window".into());
            }
        }
        Ok(())
    }

    /// Histogram windows, with defaults filled in from the large-N support.
    pub fn resolved_windows(&self) -> Result<((f64, f64), Window2D), EnsembleError> {
        let extent = predicted_extent(&self.model)?;
        let w1 = self.window_1d.unwrap_or((-1.2 * extent.real, 1.2 * extent.real));
        let r = 1.2 * extent.complex.max(extent.real);
        let w2 = self.window_2d.unwrap_or(Window2D { re: (-r, r), im: (-r, r) });
        Ok((w1, w2))
    }
}

struct Extent {
    real: f64,
    complex: f64,
}

/// Half-widths of the predicted real support and complex domain. The
/// complex domain is known in closed form only at `t = -1`; elsewhere the
/// radius `sqrt(max(1, |t|)) / m` is used.
fn predicted_extent(model: &ModelParams) -> Result<Extent, EnsembleError> {
    let (lambda, t, m) = (model.lambda(), model.metric.t, model.m);
    if t > 0.0 {
        // Real spectrum of a GUE matrix scaled by at most max(1, t).
        return Ok(Extent { real: 2.0 * t.max(1.0) / m, complex: 0.0 });
    }
    let support = analytic::support_intervals(lambda, t, m)?;
    let real = support.intervals.iter().fold(0.0f64, |a, (lo, hi)| a.max(lo.abs()).max(hi.abs()));
    let complex = if (t + 1.0).abs() < 1e-12 { 1.0 / m } else { t.abs().max(1.0).sqrt() / m };
    // An empty large-N real support still sees finite-N real eigenvalues.
    Ok(Extent { real: if real > 0.0 { real } else { complex }, complex })
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sample `index` under `master`: `splitmix64(master ^ splitmix64(index))`.
pub fn sample_seed(master: u64, index: usize) -> u64 {
    splitmix64(master ^ splitmix64(index as u64))
}

/// The matrix `phi` of sample `index` of `model`.
pub fn sample_phi(model: &ModelParams, index: usize) -> Result<ComplexMatrix<f64>, EnsembleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(model.seed, index));
    let a = sample_gue::<f64, _>(model.metric.n, model.m, &mut rng);
    build_phi(&a, &model.metric).map_err(|source| EnsembleError::Sample { sample: index, source })
}

fn diagonalize(
    phi: ComplexMatrix<f64>,
    index: usize,
    eigen: &EigenOptions,
    classification_tol: f64,
) -> Result<Spectrum<f64>, EnsembleError> {
    let wrap = |source| EnsembleError::Sample { sample: index, source };
    let eigs = eigenvalues_with(&phi, eigen).map_err(wrap)?;
    classify_spectrum(eigs, classification_tol).map_err(wrap)
}

/// Diagonalizes sample `index` of `model` and classifies its spectrum.
pub fn sample_spectrum(
    model: &ModelParams,
    index: usize,
    eigen: &EigenOptions,
    classification_tol: f64,
) -> Result<Spectrum<f64>, EnsembleError> {
    diagonalize(sample_phi(model, index)?, index, eigen, classification_tol)
}

/// Checks real + complex = n and, for indefinite metrics, the per-sample
/// lower bound `|n - 2k|` on the number of real eigenvalues.
pub fn check_sample(metric: &MetricSpec, index: usize, s: &Spectrum<f64>) -> Result<(), EnsembleError> {
    let counted = s.real_count() + s.complex_count();
    if counted != metric.n || s.len() != metric.n {
        return Err(EnsembleError::MassBookkeeping { sample: index, counted, n: metric.n });
    }
    let bound = metric.min_real_count();
    if s.real_count() < bound {
        return Err(EnsembleError::CarlsonViolation { sample: index, real: s.real_count(), bound });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub per_sample: Vec<f64>,
    pub n: usize,
    pub k: usize,
    pub t: f64,
}

/// Statistics of one run against the large-N predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub predicted_fraction_real: Option<f64>,
    pub density: Option<DensityComparison>,
    /// Empirical density in a bin of the histogram width centered at 0.
    pub rho0_empirical: f64,
    pub rho0_predicted: Option<f64>,
    /// Complex eigenvalues outside the dilated region, `t = -1` only.
    pub boundary_violation_rate: Option<f64>,
    pub boundary_margin: Option<f64>,
    pub left_right: SymmetryTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub config: RunConfig,
    /// SHA-256 over the configuration (without `workers`) and every
    /// eigenvalue with its class.
    pub content_hash: String,
    pub hist1d: Histogram1D,
    pub hist2d: Histogram2D,
    pub fraction: FractionEstimate,
    pub comparison: Comparison,
    /// Largest `||phi^† B - B phi||_max / ||phi||_max` over the samples.
    pub max_intertwining_residual: f64,
    pub spectra: Vec<Spectrum<f64>>,
    pub wall_clock_seconds: f64,
}

impl RunArtifact {
    pub fn lambda(&self) -> f64 {
        self.config.model.lambda()
    }
}

/// Samples, diagonalizes and aggregates `config.samples` matrices.
///
/// Samples run on a dedicated pool of `config.workers` threads; the first
/// failing sample (by index) is reported and nothing is aggregated.
pub fn run_ensemble(config: &RunConfig) -> Result<RunArtifact, EnsembleError> {
    config.validate()?;
    let start = Instant::now();
    let model = config.model;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| EnsembleError::InvalidConfig(format!("worker pool: {e}")))?;
    let diag: Vec<f64> = metric_diagonal(&model.metric);
    let results: Vec<(Spectrum<f64>, f64)> = pool.install(|| {
        (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let phi = sample_phi(&model, i)?;
                let residual = intertwining_residual(&phi, &diag) / phi.max_abs().max(f64::MIN_POSITIVE);
                let s = diagonalize(phi, i, &config.eigen, config.classification_tol)?;
                check_sample(&model.metric, i, &s)?;
                Ok((s, residual))
            })
            .collect::<Result<Vec<_>, EnsembleError>>()
    })?;
    let (spectra, residuals): (Vec<_>, Vec<f64>) = results.into_iter().unzip();
    let max_residual = residuals.into_iter().fold(0.0, f64::max);
    aggregate(config, spectra, max_residual, start)
}

fn aggregate(
    config: &RunConfig,
    spectra: Vec<Spectrum<f64>>,
    max_intertwining_residual: f64,
    start: Instant,
) -> Result<RunArtifact, EnsembleError> {
    let model = config.model;
    let (w1, w2) = config.resolved_windows()?;
    let total = model.metric.n * spectra.len();
    let mut hist1d = Histogram1D::new(w1.0, w1.1, config.bins_1d, total);
    let mut hist2d = Histogram2D::new(w2, config.bins_2d, total);
    for s in &spectra {
        hist1d.add_all(s.real_values());
        hist2d.add_all(s.complex_values());
    }
    let fraction = estimate_fraction_real_from(&model.metric, &spectra);
    let comparison = compare_with_prediction(&model, &spectra, &hist1d)?;
    let content_hash = content_hash(config, &spectra);
    Ok(RunArtifact {
        config: config.clone(),
        content_hash,
        hist1d,
        hist2d,
        fraction,
        comparison,
        max_intertwining_residual,
        spectra,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

fn compare_with_prediction(
    model: &ModelParams,
    spectra: &[Spectrum<f64>],
    hist1d: &Histogram1D,
) -> Result<Comparison, EnsembleError> {
    let (lambda, t, m) = (model.lambda(), model.metric.t, model.m);
    let n = model.metric.n;
    let total = n * spectra.len();
    let width = hist1d.bin_width();
    let rho0_empirical = density_near(spectra.iter().flat_map(|s| s.real_values()), 0.0, width, total);
    let mut out = Comparison {
        predicted_fraction_real: None,
        density: None,
        rho0_empirical,
        rho0_predicted: None,
        boundary_violation_rate: None,
        boundary_margin: None,
        left_right: left_right_symmetry(spectra),
    };
    if t > 0.0 {
        out.predicted_fraction_real = Some(1.0);
        return Ok(out);
    }
    let sheet = RealAxisSheet::new(lambda, t, m)?;
    out.predicted_fraction_real = Some(sheet.total_mass()?);
    let curve = sheet.curve(&hist1d.centers())?;
    out.density = Some(compare_density(hist1d, &curve));
    out.rho0_predicted = Some(sheet.density(0.0)?);
    if (t + 1.0).abs() < 1e-12 {
        let boundary = analytic::BoundaryCurve::new(lambda, m);
        let margin = default_margin(n, m);
        out.boundary_violation_rate = Some(boundary_violation_rate(spectra, &boundary, margin));
        out.boundary_margin = Some(margin);
    }
    Ok(out)
}

fn estimate_fraction_real_from(metric: &MetricSpec, spectra: &[Spectrum<f64>]) -> FractionEstimate {
    let per_sample: Vec<f64> = spectra.iter().map(|s| s.real_fraction()).collect();
    let (mean, std_error) = mean_and_std_error(&per_sample);
    FractionEstimate { mean, std_error, per_sample, n: metric.n, k: metric.k, t: metric.t }
}

/// Mean and standard error of the per-sample real fractions.
pub fn estimate_fraction_real(artifact: &RunArtifact) -> FractionEstimate {
    estimate_fraction_real_from(&artifact.config.model.metric, &artifact.spectra)
}

fn content_hash(config: &RunConfig, spectra: &[Spectrum<f64>]) -> String {
    let mut canonical = config.clone();
    canonical.workers = 1;
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&canonical).expect("config serializes"));
    for (i, s) in spectra.iter().enumerate() {
        h.update((i as u64).to_le_bytes());
        let mask = s.real_mask();
        for (z, real) in s.eigenvalues.iter().zip(mask) {
            h.update(z.re.to_bits().to_le_bytes());
            h.update(z.im.to_bits().to_le_bytes());
            h.update([real as u8]);
        }
    }
    hex::encode(h.finalize())
}

/// Complex-classified eigenvalues of all samples.
pub fn pooled_complex(spectra: &[Spectrum<f64>]) -> Vec<Complex<f64>> {
    spectra.iter().flat_map(|s| s.complex_values()).collect()
}

/// Real-classified eigenvalues of all samples.
pub fn pooled_real(spectra: &[Spectrum<f64>]) -> Vec<f64> {
    spectra.iter().flat_map(|s| s.real_values()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> RunConfig {
        let mut c = RunConfig::new(ModelParams::new(32, 16, -1.0, 1.0, seed).unwrap(), 6);
        c.bins_2d = (8, 8);
        c
    }

    #[test]
    fn seeds_differ_per_sample_and_master() {
        assert_ne!(sample_seed(1, 0), sample_seed(1, 1));
        assert_ne!(sample_seed(1, 0), sample_seed(2, 0));
        assert_eq!(sample_seed(7, 3), sample_seed(7, 3));
    }

    #[test]
    fn rerun_is_identical() {
        let a = run_ensemble(&small(42)).unwrap();
        let b = run_ensemble(&small(42)).unwrap();
        assert_eq!(a.content_hash, b.content_hash);
        assert_eq!(a.hist1d.counts, b.hist1d.counts);
        assert_eq!(a.hist2d.counts, b.hist2d.counts);
        let c = run_ensemble(&small(43)).unwrap();
        assert_ne!(a.content_hash, c.content_hash);
    }

    #[test]
    fn workers_do_not_change_results() {
        let a = run_ensemble(&small(5)).unwrap();
        let mut cfg = small(5);
        cfg.workers = 3;
        let b = run_ensemble(&cfg).unwrap();
        assert_eq!(a.content_hash, b.content_hash);
        assert_eq!(a.spectra, b.spectra);
    }

    #[test]
    fn counts_add_up() {
        let a = run_ensemble(&small(9)).unwrap();
        let real: usize = a.spectra.iter().map(|s| s.real_count()).sum();
        let complex: usize = a.spectra.iter().map(|s| s.complex_count()).sum();
        assert_eq!(real + complex, 32 * 6);
        assert_eq!(a.hist1d.total_in_window() + a.hist1d.outside, real as u64);
        assert_eq!(a.hist2d.total_in_window() + a.hist2d.outside, complex as u64);
        assert_eq!(a.fraction.per_sample.len(), 6);
        assert!(a.max_intertwining_residual < 1e-15);
    }

    #[test]
    fn positive_metric_is_all_real() {
        let cfg = RunConfig::new(ModelParams::new(24, 0, -1.0, 1.0, 1).unwrap(), 3);
        let a = run_ensemble(&cfg).unwrap();
        assert!(a.fraction.per_sample.iter().all(|&f| f == 1.0));
        let cfg = RunConfig::new(ModelParams::new(24, 10, 2.5, 1.0, 1).unwrap(), 3);
        let a = run_ensemble(&cfg).unwrap();
        assert_eq!(a.fraction.mean, 1.0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = small(1);
        c.samples = 0;
        assert!(matches!(run_ensemble(&c), Err(EnsembleError::InvalidConfig(_))));
        let mut c = small(1);
        c.bins_1d = 1;
        assert!(run_ensemble(&c).is_err());
        assert!(ModelParams::new(8, 2, -1.0, 0.0, 1).is_err());
        assert!(ModelParams::new(8, 9, -1.0, 1.0, 1).is_err());
    }

    #[test]
    fn carlson_violation_is_reported() {
        let metric = MetricSpec::new(4, 1, -1.0).unwrap();
        let eigs =
            vec![Complex::new(0.0, 1.0), Complex::new(0.0, -1.0), Complex::new(1.0, 1.0), Complex::new(1.0, -1.0)];
        let s = classify_spectrum(eigs, 1e-8).unwrap();
        assert!(matches!(
            check_sample(&metric, 3, &s),
            Err(EnsembleError::CarlsonViolation { sample: 3, real: 0, bound: 2 })
        ));
    }

    #[test]
    fn default_windows_cover_support() {
        let cfg = RunConfig::new(ModelParams::new(64, 16, -1.0, 2.0, 1).unwrap(), 1);
        let ((lo, hi), w2) = cfg.resolved_windows().unwrap();
        let a = analytic::support_endpoint_a(0.25, 2.0);
        assert!((hi - 1.2 * a).abs() < 1e-12 && lo == -hi);
        assert!(w2.re.1 >= 1.2 * 0.5 - 1e-12);
    }
}
