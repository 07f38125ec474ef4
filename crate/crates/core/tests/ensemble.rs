use pseudoherm::analytic::{fraction_real, RealAxisSheet, RealDensityCurve};
use pseudoherm::ensemble::{
    compare_density, ks_two_sample, left_right_symmetry, run_ensemble, write_artifact, ModelParams, RunArtifact,
    RunConfig,
};

fn run(n: usize, k: usize, t: f64, samples: usize, seed: u64, workers: usize) -> RunArtifact {
    let mut cfg = RunConfig::new(ModelParams::new(n, k, t, 1.0, seed).unwrap(), samples);
    cfg.workers = workers;
    run_ensemble(&cfg).unwrap()
}

#[test]
fn hash_is_reproducible_and_worker_independent() {
    let a = run(128, 64, -1.0, 10, 42, 1);
    let b = run(128, 64, -1.0, 10, 42, 1);
    let c = run(128, 64, -1.0, 10, 42, 3);
    assert_eq!(a.content_hash, b.content_hash);
    assert_eq!(a.content_hash, c.content_hash);
    assert_eq!(a.hist1d, c.hist1d);
    assert_eq!(a.hist2d, c.hist2d);
    assert_ne!(a.content_hash, run(128, 64, -1.0, 10, 43, 1).content_hash);
}

#[test]
fn persisted_runs_are_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (a, b) = (run(32, 8, -1.0, 20, 5, 1), run(32, 8, -1.0, 20, 5, 2));
    assert_eq!(a.content_hash, b.content_hash);
    write_artifact(&a, d1.path()).unwrap();
    write_artifact(&b, d2.path()).unwrap();
    for f in ["eigenvalues.csv", "hist1d.csv", "hist2d.csv"] {
        let a = std::fs::read(d1.path().join(f)).unwrap();
        let b = std::fs::read(d2.path().join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn fraction_at_one_eighth() {
    let art = run(128, 16, -1.0, 500, 7, 1);
    let f = &art.fraction;
    assert!((f.mean - 0.75).abs() <= 3.0 * f.std_error.max(1e-12), "{} ± {}", f.mean, f.std_error);
    assert!(f.per_sample.iter().all(|&x| x >= 0.75));
}

#[test]
fn pure_gue_is_all_real() {
    let art = run(64, 0, -1.0, 20, 1, 1);
    assert!(art.fraction.per_sample.iter().all(|&x| x == 1.0));
    assert_eq!(art.hist2d.counts.iter().sum::<u64>(), 0);
}

#[test]
fn balanced_metric_keeps_a_finite_size_excess() {
    let art = run(1024, 512, -1.0, 3, 11, 1);
    assert_eq!(fraction_real(0.5), 0.0);
    assert!(art.fraction.mean > 0.0 && art.fraction.mean < 0.1, "{}", art.fraction.mean);
}

#[test]
fn gue_follows_the_semicircle() {
    let art = run(64, 64, 1.0, 300, 3, 1);
    let xs = art.hist1d.centers();
    let rho: Vec<f64> = xs.iter().map(|x| (4.0 - x * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI)).collect();
    let curve = RealDensityCurve { xs: xs.clone(), rho: rho.clone(), lambda: 1.0, t: 1.0, m: 1.0 };
    let cmp = compare_density(&art.hist1d, &curve);
    assert!(cmp.l1 < 0.06, "{cmp:?}");
    // The analytic sheet at λ = 1 is the same semicircle.
    let sheet = RealAxisSheet::new(1.0, 1.0, 1.0).unwrap().curve(&xs).unwrap();
    for (a, b) in sheet.rho.iter().zip(&rho) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn complementary_fractions_give_the_same_spectra() {
    let a = run(64, 16, -1.0, 500, 21, 1);
    let b = run(64, 48, -1.0, 500, 22, 1);
    assert!(
        (a.fraction.mean - b.fraction.mean).abs() <= 4.0 * a.fraction.std_error.hypot(b.fraction.std_error) + 1e-12
    );
    // One value per sample: eigenvalues of one matrix are correlated.
    let per_sample =
        |s: &RunArtifact, f: &dyn Fn(&pseudoherm::Spectrum64) -> f64| s.spectra.iter().map(f).collect::<Vec<_>>();
    let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let real = |s: &pseudoherm::Spectrum64| mean(s.real_values().map(f64::abs).collect());
    let radius = |s: &pseudoherm::Spectrum64| mean(s.complex_values().map(|z| z.norm()).collect());
    for stat in [&real as &dyn Fn(&pseudoherm::Spectrum64) -> f64, &radius] {
        let ks = ks_two_sample(&per_sample(&a, stat), &per_sample(&b, stat));
        assert!(ks.p_value > 0.01, "{ks:?}");
    }
}

#[test]
fn left_right_symmetry_after_averaging() {
    let art = run(64, 16, -1.0, 600, 31, 1);
    let s = left_right_symmetry(&art.spectra);
    assert_eq!(s.samples, 600);
    assert!(s.p_value > 0.01, "{s:?}");
}
