//! Command-line flags, the JSON config file that mirrors them, and their
//! merge (flags win).

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Matrix dimension N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of leading +1 entries of the metric; takes precedence over --lambda.
    #[arg(long)]
    pub k: Option<usize>,
    /// Fraction k/N; rounded to the nearest k when N is known.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Trailing metric entry.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// GUE scale: the spectrum of A fills [-2/m, 2/m].
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Histogram bins or grid points, depending on the command.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// m used for the analytic reference curve (defaults to --m).
    #[arg(long)]
    pub reference_m: Option<f64>,
    /// Run the positive-metric mechanical control instead.
    #[arg(long)]
    pub mech: bool,
    /// Allowed |mean fraction - prediction|.
    #[arg(long)]
    pub fraction_tol: Option<f64>,
    /// Allowed L1 distance between histogram and prediction.
    #[arg(long)]
    pub l1_max: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct MechArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Scale of the stiffness factor.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Scale of the mass factor.
    #[arg(long)]
    pub sigma_prime: Option<f64>,
    /// Mass shift.
    #[arg(long)]
    pub m0: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lower end of the plotted t range.
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
}

/// Contents of `--config`: every flag under its long name, with `_` for `-`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub lambda: Option<f64>,
    pub t: Option<f64>,
    pub m: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub bins: Option<usize>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub reference_m: Option<f64>,
    pub mech: Option<bool>,
    pub fraction_tol: Option<f64>,
    pub l1_max: Option<f64>,
    pub sigma: Option<f64>,
    pub sigma_prime: Option<f64>,
    pub m0: Option<f64>,
    pub t_min: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Flags merged over the config file, before command defaults.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub file: FileConfig,
    pub warnings: Vec<String>,
}

impl Settings {
    /// Overlays the flags of `args` on the file named by `--config`.
    pub fn merge(args: &CommonArgs) -> Result<Self, CliError> {
        let mut file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => { $( if args.$f.is_some() { file.$f = args.$f.clone(); } )* };
        }
        over!(n, k, lambda, t, m, seed, samples, bins, workers, out);
        Ok(Self { file, warnings: Vec::new() })
    }

    pub fn with_compare(mut self, a: &CompareArgs) -> Self {
        if a.reference_m.is_some() {
            self.file.reference_m = a.reference_m;
        }
        if a.mech {
            self.file.mech = Some(true);
        }
        if a.fraction_tol.is_some() {
            self.file.fraction_tol = a.fraction_tol;
        }
        if a.l1_max.is_some() {
            self.file.l1_max = a.l1_max;
        }
        self
    }

    pub fn with_mech(mut self, a: &MechArgs) -> Self {
        if a.sigma.is_some() {
            self.file.sigma = a.sigma;
        }
        if a.sigma_prime.is_some() {
            self.file.sigma_prime = a.sigma_prime;
        }
        if a.m0.is_some() {
            self.file.m0 = a.m0;
        }
        self
    }

    pub fn with_phase(mut self, a: &PhaseArgs) -> Self {
        if a.t_min.is_some() {
            self.file.t_min = a.t_min;
        }
        self
    }

    pub fn n(&self) -> usize {
        self.file.n.unwrap_or(128)
    }

    pub fn t(&self) -> f64 {
        self.file.t.unwrap_or(-1.0)
    }

    pub fn m(&self) -> f64 {
        self.file.m.unwrap_or(1.0)
    }

    pub fn seed(&self) -> u64 {
        self.file.seed.unwrap_or(42)
    }

    pub fn workers(&self) -> usize {
        self.file.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn out(&self) -> PathBuf {
        self.file.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn bins_or(&self, default: usize) -> usize {
        self.file.bins.unwrap_or(default)
    }

    /// `k` for dimension `n`: explicit `k` wins, otherwise `λ` (default
    /// 1/4) is rounded to the nearest `k / n`, with a warning when inexact.
    pub fn resolve_k(&mut self, n: usize) -> Result<usize, CliError> {
        if let Some(k) = self.file.k {
            if k > n {
                return Err(CliError::Usage(format!("k = {k} exceeds n = {n}")));
            }
            if let Some(l) = self.file.lambda {
                if (l - k as f64 / n as f64).abs() > 1e-12 {
                    self.warnings.push(format!("--k {k} takes precedence over --lambda {l}"));
                }
            }
            return Ok(k);
        }
        let l = self.lambda_raw()?;
        let k = (l * n as f64).round() as usize;
        if (k as f64 / n as f64 - l).abs() > 1e-12 {
            self.warnings.push(format!("lambda {l} rounded to k = {k} (lambda = {})", k as f64 / n as f64));
        }
        Ok(k)
    }

    fn lambda_raw(&self) -> Result<f64, CliError> {
        let l = self.file.lambda.unwrap_or(0.25);
        if !(0.0..=1.0).contains(&l) {
            return Err(CliError::Usage(format!("lambda = {l} must lie in [0, 1]")));
        }
        Ok(l)
    }

    /// `λ` for the analytic commands: `k / n` when `k` is given, the rounded
    /// value when `n` is given, `--lambda` otherwise.
    pub fn resolve_lambda(&mut self) -> Result<f64, CliError> {
        match self.file.n {
            Some(n) => Ok(self.resolve_k(n)? as f64 / n as f64),
            None if self.file.k.is_some() => Err(CliError::Usage("--k needs --n".into())),
            None => self.lambda_raw(),
        }
    }
}
