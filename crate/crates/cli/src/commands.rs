use std::fs;
use std::path::{Path, PathBuf};

use pseudoherm::analytic::{self, critical_curves, fraction_real_general, BoundaryCurve, RealAxisSheet};
use pseudoherm::ensemble::{
    self, read_eigenvalues_csv, read_hist1d_csv, run_ensemble, sample_spectrum, write_artifact, write_eigenvalues_csv,
    write_hist1d_csv, EigenClass, ModelParams, RunConfig,
};
use pseudoherm::linalg::{EigenOptions, DEFAULT_CLASSIFICATION_TOL};
use pseudoherm::mech::{run_mech, MechParams};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::settings::Settings;
use crate::svg::Figure;
use crate::CliError;

fn write_csv<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_csv<R: DeserializeOwned>(path: &Path) -> Result<Vec<R>, CliError> {
    let err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(err)?;
    r.deserialize().collect::<Result<Vec<R>, _>>().map_err(err)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json<V: Serialize>(path: &Path, v: &V) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    write_text(path, &(text + "\n"))
}

fn out_dir(s: &Settings) -> Result<PathBuf, CliError> {
    let out = s.out();
    fs::create_dir_all(&out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    Ok(out)
}

fn params(s: &mut Settings) -> Result<ModelParams, CliError> {
    let n = s.n();
    let k = s.resolve_k(n)?;
    Ok(ModelParams::new(n, k, s.t(), s.m(), s.seed())?)
}

fn pad(lo: f64, hi: f64) -> (f64, f64) {
    let d = 0.05 * (hi - lo).max(1e-9);
    (lo - d, hi + d)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct BoundaryRow {
    blob: usize,
    re: f64,
    im: f64,
}

fn write_boundary_csv(path: &Path, lambda: f64, m: f64) -> Result<(), CliError> {
    let curve = BoundaryCurve::with_points(lambda, m, 400);
    let rows = curve
        .polygons()
        .into_iter()
        .enumerate()
        .flat_map(|(blob, poly)| poly.into_iter().map(move |z| BoundaryRow { blob, re: z.re, im: z.im }));
    write_csv(path, rows)
}

fn boundary_polygons(rows: &[BoundaryRow]) -> Vec<Vec<(f64, f64)>> {
    let blobs = rows.iter().map(|r| r.blob + 1).max().unwrap_or(0);
    (0..blobs).map(|b| rows.iter().filter(|r| r.blob == b).map(|r| (r.re, r.im)).collect()).collect()
}

/// One sample: `eigenvalues.csv`, `scatter.svg`, and `boundary.csv` at `t = -1`.
pub fn spectrum(s: &mut Settings) -> Result<(), CliError> {
    let model = params(s)?;
    let out = out_dir(s)?;
    let spec = sample_spectrum(&model, 0, &EigenOptions::default(), DEFAULT_CLASSIFICATION_TOL)?;
    let eig_path = out.join("eigenvalues.csv");
    write_eigenvalues_csv(&eig_path, std::slice::from_ref(&spec), 0)?;
    let (lambda, t, m) = (model.lambda(), model.metric.t, model.m);
    let overlay = t == -1.0 && model.metric.is_indefinite();
    let boundary_path = out.join("boundary.csv");
    if overlay {
        write_boundary_csv(&boundary_path, lambda, m)?;
    } else {
        s.warnings.push("analytic boundary overlay unavailable (closed form only at t = -1)".into());
    }

    let rows = read_eigenvalues_csv(&eig_path)?;
    let r = rows.iter().fold(1e-9f64, |a, e| a.max(e.re.abs()).max(e.im.abs()));
    let range = pad(-r, r);
    let title = format!("Eigenvalues, N = {}, k = {}, t = {}, m = {}", model.metric.n, model.metric.k, t, m);
    let mut fig = Figure::new(&title, "Re", "Im", range, range);
    if overlay {
        let b: Vec<BoundaryRow> = read_csv(&boundary_path)?;
        for poly in boundary_polygons(&b) {
            fig.polygon(&poly, "orange", 0.15, Some("darkorange"));
        }
    } else {
        fig.note("analytic boundary unavailable for this t");
    }
    let pick = |c: EigenClass| rows.iter().filter(|e| e.class == c).map(|e| (e.re, e.im)).collect::<Vec<_>>();
    fig.scatter(&pick(EigenClass::C), "steelblue", 1.6);
    fig.scatter(&pick(EigenClass::R), "crimson", 1.6);
    write_text(&out.join("scatter.svg"), &fig.render())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct DensityRow {
    x: f64,
    rho: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct IntervalRow {
    lo: f64,
    hi: f64,
}

/// Tabulates `ρ(x)` on `bins` points over 1.2x the support.
pub fn real_density(s: &mut Settings) -> Result<(), CliError> {
    let lambda = s.resolve_lambda()?;
    let (t, m) = (s.t(), s.m());
    let points = s.bins_or(401).max(2);
    let out = out_dir(s)?;
    let sheet = RealAxisSheet::new(lambda, t, m)?;
    let support = sheet.support();
    let ext = support.intervals.iter().fold(0.0f64, |a, (lo, hi)| a.max(lo.abs()).max(hi.abs()));
    let ext = if ext > 0.0 { 1.2 * ext } else { 1.0 / m };
    let xs: Vec<f64> = (0..points).map(|i| -ext + 2.0 * ext * i as f64 / (points - 1) as f64).collect();
    let curve = sheet.curve(&xs)?;
    let dens_path = out.join("real_density.csv");
    write_csv(&dens_path, xs.iter().zip(&curve.rho).map(|(&x, &rho)| DensityRow { x, rho }))?;
    let sup_path = out.join("support.csv");
    write_csv(&sup_path, support.intervals.iter().map(|&(lo, hi)| IntervalRow { lo, hi }))?;

    let rows: Vec<DensityRow> = read_csv(&dens_path)?;
    let ivs: Vec<IntervalRow> = read_csv(&sup_path)?;
    let top = rows.iter().map(|r| r.rho).fold(0.0, f64::max).max(1e-9);
    let title = format!("Real density, λ = {lambda}, t = {t}, m = {m} ({} intervals)", ivs.len());
    let mut fig = Figure::new(&title, "x", "ρ(x)", (-ext, ext), (0.0, 1.1 * top));
    for iv in &ivs {
        fig.polygon(&[(iv.lo, 0.0), (iv.hi, 0.0), (iv.hi, 0.02 * top), (iv.lo, 0.02 * top)], "gray", 0.5, None);
    }
    fig.polyline(&rows.iter().map(|r| (r.x, r.rho)).collect::<Vec<_>>(), "crimson", 1.5);
    write_text(&out.join("real_density.svg"), &fig.render())
}

/// Boundary of the complex domain at `t = -1`.
pub fn boundary(s: &mut Settings) -> Result<(), CliError> {
    let lambda = s.resolve_lambda()?;
    let m = s.m();
    if !(m > 0.0) {
        return Err(CliError::Usage(format!("m = {m} must be positive")));
    }
    if s.file.t.is_some_and(|t| t != -1.0) {
        s.warnings.push("the boundary is known in closed form only at t = -1; --t ignored".into());
    }
    let out = out_dir(s)?;
    let path = out.join("boundary.csv");
    write_boundary_csv(&path, lambda, m)?;
    let rows: Vec<BoundaryRow> = read_csv(&path)?;
    let r = 1.1 / m;
    let mut fig = Figure::new(&format!("Complex domain, λ = {lambda}, m = {m}, t = -1"), "Re", "Im", (-r, r), (-r, r));
    for poly in boundary_polygons(&rows) {
        fig.polygon(&poly, "steelblue", 0.3, Some("navy"));
    }
    let a = analytic::support_endpoint_a(lambda, m);
    if a > 0.0 {
        fig.polyline(&[(-a, 0.0), (a, 0.0)], "crimson", 2.5);
    }
    write_text(&out.join("boundary.svg"), &fig.render())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct FractionRow {
    lambda: f64,
    fraction_real: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct FractionMcRow {
    n: usize,
    k: usize,
    lambda: f64,
    mean: f64,
    std_error: f64,
    min: f64,
}

/// Large-N fraction of real eigenvalues on a λ grid; with `--samples`,
/// Monte Carlo estimates at every `k` of a grid over `0..=n` as well.
pub fn fraction(s: &mut Settings) -> Result<(), CliError> {
    let (t, m) = (s.t(), s.m());
    let points = s.bins_or(101).max(2);
    let out = out_dir(s)?;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let lambda = i as f64 / (points - 1) as f64;
        rows.push(FractionRow { lambda, fraction_real: fraction_real_general(lambda, t, m)? });
    }
    let path = out.join("fraction.csv");
    write_csv(&path, rows)?;
    let mc_path = out.join("fraction_mc.csv");
    if let Some(samples) = s.file.samples {
        let n = s.n();
        let mut mc = Vec::new();
        for k in (0..=n).step_by((n / 16).max(1)) {
            let model = ModelParams::new(n, k, t, m, s.seed())?;
            let mut cfg = RunConfig::new(model, samples);
            cfg.workers = s.workers();
            let art = run_ensemble(&cfg)?;
            let min = art.fraction.per_sample.iter().copied().fold(f64::INFINITY, f64::min);
            mc.push(FractionMcRow {
                n,
                k,
                lambda: model.lambda(),
                mean: art.fraction.mean,
                std_error: art.fraction.std_error,
                min,
            });
        }
        write_csv(&mc_path, mc)?;
    }

    let rows: Vec<FractionRow> = read_csv(&path)?;
    let mut fig =
        Figure::new(&format!("Fraction of real eigenvalues, t = {t}"), "λ", "fraction real", (0.0, 1.0), (0.0, 1.05));
    fig.polyline(&rows.iter().map(|r| (r.lambda, r.fraction_real)).collect::<Vec<_>>(), "black", 1.5);
    if s.file.samples.is_some() {
        let mc: Vec<FractionMcRow> = read_csv(&mc_path)?;
        fig.scatter(&mc.iter().map(|r| (r.lambda, r.mean)).collect::<Vec<_>>(), "crimson", 3.0);
    }
    write_text(&out.join("fraction.svg"), &fig.render())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct CurveRow {
    lambda: f64,
    t_cr: f64,
    t_c: f64,
    t_r: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegionRow {
    region: String,
    lambda: f64,
    t: f64,
}

/// Critical curves `t_cr`, `t_c`, `t_r` and the shaded phase regions.
pub fn phase_diagram(s: &mut Settings) -> Result<(), CliError> {
    let t_min = s.file.t_min.unwrap_or(-5.0);
    if !(t_min < -1.0) {
        return Err(CliError::Usage(format!("t_min = {t_min} must be below -1")));
    }
    let res = s.bins_or(200).max(4) / 2 * 2;
    let out = out_dir(s)?;
    let grid: Vec<f64> = (1..res).map(|i| i as f64 / res as f64).collect();
    let curves: Vec<CurveRow> = grid
        .iter()
        .map(|&l| critical_curves(l).map(|c| CurveRow { lambda: l, t_cr: c.t_cr, t_c: c.t_c, t_r: c.t_r }))
        .collect::<Result<_, _>>()?;
    let clip = |t: f64| t.max(t_min);
    let mut regions = Vec::new();
    // Disconnected complex domain: between t_c and t_cr.
    for c in &curves {
        regions.push(RegionRow { region: "disconnected".into(), lambda: c.lambda, t: clip(c.t_cr.max(c.t_c)) });
    }
    for c in curves.iter().rev() {
        regions.push(RegionRow { region: "disconnected".into(), lambda: c.lambda, t: clip(c.t_cr.min(c.t_c)) });
    }
    // Three real intervals: between t_cr and t_r, on each side of λ = 1/2.
    for (name, side) in [("three-intervals-low", false), ("three-intervals-high", true)] {
        let part: Vec<&CurveRow> = curves.iter().filter(|c| c.t_r.is_some() && (c.lambda > 0.5) == side).collect();
        for c in &part {
            regions.push(RegionRow { region: name.into(), lambda: c.lambda, t: clip(c.t_cr) });
        }
        for c in part.iter().rev() {
            regions.push(RegionRow { region: name.into(), lambda: c.lambda, t: clip(c.t_r.unwrap()) });
        }
    }
    let cpath = out.join("phase_curves.csv");
    let rpath = out.join("phase_regions.csv");
    write_csv(&cpath, &curves)?;
    write_csv(&rpath, &regions)?;

    let curves: Vec<CurveRow> = read_csv(&cpath)?;
    let regions: Vec<RegionRow> = read_csv(&rpath)?;
    let mut fig = Figure::new("Phase diagram", "λ", "t", (0.0, 1.0), (t_min, 0.0));
    for (name, color) in
        [("disconnected", "steelblue"), ("three-intervals-low", "orange"), ("three-intervals-high", "orange")]
    {
        let poly: Vec<(f64, f64)> = regions.iter().filter(|r| r.region == name).map(|r| (r.lambda, r.t)).collect();
        fig.polygon(&poly, color, 0.35, None);
    }
    let line = |f: &dyn Fn(&CurveRow) -> Option<f64>| -> Vec<(f64, f64)> {
        curves.iter().filter_map(|c| f(c).map(|t| (c.lambda, t))).collect()
    };
    fig.polyline(&line(&|c| Some(c.t_cr)), "black", 1.5);
    fig.polyline(&line(&|c| Some(c.t_c)), "navy", 1.5);
    fig.polyline(&line(&|c| c.t_r), "darkred", 1.5);
    fig.note("black: t_cr, blue: t_c, red: t_r");
    write_text(&out.join("phase_diagram.svg"), &fig.render())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check_le(name: &str, value: f64, threshold: f64) -> Check {
    Check { name: name.into(), value, threshold, pass: value <= threshold }
}

fn check_ge(name: &str, value: f64, threshold: f64) -> Check {
    Check { name: name.into(), value, threshold, pass: value >= threshold }
}

/// Runs an ensemble, checks it against the predictions and writes the run
/// directory; `Ok(false)` when a threshold fails.
pub fn compare(s: &mut Settings) -> Result<bool, CliError> {
    if s.file.mech == Some(true) {
        return mech_with(s, true);
    }
    let model = params(s)?;
    let out = out_dir(s)?;
    let samples = s.file.samples.unwrap_or_else(|| RunConfig::preset(model).samples);
    let mut cfg = RunConfig::new(model, samples);
    cfg.bins_1d = s.bins_or(100);
    cfg.workers = s.workers();
    let art = run_ensemble(&cfg)?;
    write_artifact(&art, &out)?;

    let (lambda, t) = (model.lambda(), model.metric.t);
    let m_ref = s.file.reference_m.unwrap_or(model.m);
    let mut checks = Vec::new();
    let min_frac = art.fraction.per_sample.iter().copied().fold(f64::INFINITY, f64::min);
    let bound = model.metric.min_real_count() as f64 / model.metric.n as f64;
    checks.push(check_ge("carlson_min_fraction", min_frac, bound));
    let mut reference = Vec::new();
    if t < 0.0 {
        let sheet = RealAxisSheet::new(lambda, t, m_ref)?;
        let predicted = sheet.total_mass()?;
        let tol = s.file.fraction_tol.unwrap_or(0.01);
        checks.push(check_le("fraction_real_abs_error", (art.fraction.mean - predicted).abs(), tol));
        let centers = art.hist1d.centers();
        let curve = sheet.curve(&centers)?;
        let cmp = ensemble::compare_density(&art.hist1d, &curve);
        checks.push(check_le("density_l1", cmp.l1, s.file.l1_max.unwrap_or(0.05)));
        reference = centers.iter().zip(&curve.rho).map(|(&x, &rho)| DensityRow { x, rho }).collect();
        let rho0 = sheet.density(0.0)?;
        if t == -1.0 && rho0 > 0.0 {
            let emp = art.comparison.rho0_empirical;
            checks.push(check_le("rho0_rel_error", (emp - rho0).abs() / rho0, 0.10));
        }
        if t == -1.0 && model.metric.is_indefinite() {
            let boundary = BoundaryCurve::new(lambda, m_ref);
            let margin = ensemble::default_margin(model.metric.n, m_ref);
            let rate = ensemble::boundary_violation_rate(&art.spectra, &boundary, margin);
            checks.push(check_le("boundary_violation_rate", rate, 0.02));
        }
    } else {
        checks.push(check_ge("fraction_real", art.fraction.mean, 1.0));
    }
    let pass = checks.iter().all(|c| c.pass);

    let ref_path = out.join("reference_density.csv");
    write_csv(&ref_path, &reference)?;
    let summary_path = out.join("summary.json");
    let mut summary: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(&summary_path).map_err(|e| CliError::Io(format!("{}: {e}", summary_path.display())))?,
    )
    .map_err(|e| CliError::Io(e.to_string()))?;
    summary["reference_m"] = m_ref.into();
    summary["checks"] = serde_json::to_value(&checks).map_err(|e| CliError::Io(e.to_string()))?;
    summary["failed"] = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect::<Vec<_>>().into();
    summary["pass"] = pass.into();
    write_json(&summary_path, &summary)?;

    render_histogram(
        &out,
        &format!("Real eigenvalues, N = {}, λ = {lambda}, t = {t}", model.metric.n),
        "real_histogram.svg",
    )?;
    render_hist2d(&out)?;
    for c in &checks {
        println!(
            "{:<26} {:>12.6} {} {:<10} {}",
            c.name,
            c.value,
            if c.name.contains("min") || c.name == "fraction_real" { ">=" } else { "<=" },
            c.threshold,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(pass)
}

fn render_histogram(out: &Path, title: &str, name: &str) -> Result<(), CliError> {
    let hist = read_hist1d_csv(&out.join("hist1d.csv"))?;
    let reference: Vec<DensityRow> = if out.join("reference_density.csv").is_file() {
        read_csv(&out.join("reference_density.csv"))?
    } else {
        Vec::new()
    };
    let lo = hist.first().map_or(0.0, |r| r.bin_lo);
    let hi = hist.last().map_or(1.0, |r| r.bin_hi);
    let top = hist.iter().map(|r| r.density).chain(reference.iter().map(|r| r.rho)).fold(1e-9, f64::max);
    let mut fig = Figure::new(title, "x", "density", (lo, hi), (0.0, 1.1 * top));
    fig.bars(&hist.iter().map(|r| (r.bin_lo, r.bin_hi, r.density)).collect::<Vec<_>>(), "steelblue");
    fig.polyline(&reference.iter().map(|r| (r.x, r.rho)).collect::<Vec<_>>(), "crimson", 1.5);
    write_text(&out.join(name), &fig.render())
}

#[derive(Debug, Clone, Copy, Deserialize)]
struct Hist2dIn {
    #[allow(dead_code)]
    ix: usize,
    #[allow(dead_code)]
    iy: usize,
    re_lo: f64,
    im_lo: f64,
    #[allow(dead_code)]
    count: u64,
    density: f64,
}

fn render_hist2d(out: &Path) -> Result<(), CliError> {
    let cells: Vec<Hist2dIn> = read_csv(&out.join("hist2d.csv"))?;
    if cells.len() < 2 {
        return Ok(());
    }
    let mut xs: Vec<f64> = cells.iter().map(|c| c.re_lo).collect();
    let mut ys: Vec<f64> = cells.iter().map(|c| c.im_lo).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let dx = if xs.len() > 1 { xs[1] - xs[0] } else { 1.0 };
    let dy = if ys.len() > 1 { ys[1] - ys[0] } else { 1.0 };
    let x = (xs[0], xs[xs.len() - 1] + dx);
    let y = (ys[0], ys[ys.len() - 1] + dy);
    let mut fig = Figure::new("Complex eigenvalue density", "Re", "Im", x, y);
    fig.heatmap(&cells.iter().map(|c| (c.re_lo, c.im_lo, c.re_lo + dx, c.im_lo + dy, c.density)).collect::<Vec<_>>());
    write_text(&out.join("complex_density.svg"), &fig.render())
}

/// Positive-metric control: all eigenvalues of `M^{-1} K` must be real and
/// nonnegative within `1e-8` of the spectral scale.
pub fn mech(s: &mut Settings) -> Result<bool, CliError> {
    mech_with(s, false)
}

fn mech_with(s: &mut Settings, as_compare: bool) -> Result<bool, CliError> {
    let n = s.n();
    let p = MechParams::new(
        n,
        s.file.sigma.unwrap_or(1.0),
        s.file.sigma_prime.unwrap_or(1.0),
        s.file.m0.unwrap_or(1.0),
        s.seed(),
    )?;
    let samples = s.file.samples.unwrap_or(50);
    let out = out_dir(s)?;
    let run = run_mech(&p, samples, s.bins_or(100), s.workers())?;
    write_eigenvalues_csv(&out.join("eigenvalues.csv"), &run.spectra, 0)?;
    write_hist1d_csv(&out.join("hist1d.csv"), &run.hist1d)?;
    let checks = vec![
        check_ge("fraction_real", run.fraction.mean, 1.0),
        check_le("max_rel_imag", run.max_rel_imag(), 1e-8),
        check_ge("min_rel_real", run.min_rel_real(), -1e-8),
    ];
    let pass = checks.iter().all(|c| c.pass);
    #[derive(Serialize)]
    struct MechSummary<'a> {
        params: &'a MechParams,
        samples: usize,
        fraction_real: f64,
        max_rel_imag: f64,
        min_rel_real: f64,
        max_intertwining: f64,
        max_condition: f64,
        checks: &'a [Check],
        pass: bool,
    }
    write_json(
        &out.join("summary.json"),
        &MechSummary {
            params: &p,
            samples,
            fraction_real: run.fraction.mean,
            max_rel_imag: run.max_rel_imag(),
            min_rel_real: run.min_rel_real(),
            max_intertwining: run.stats.iter().map(|x| x.intertwining).fold(0.0, f64::max),
            max_condition: run.stats.iter().map(|x| x.condition).fold(0.0, f64::max),
            checks: &checks,
            pass,
        },
    )?;
    let _ = fs::remove_file(out.join("reference_density.csv"));
    render_histogram(&out, &format!("Squared frequencies ω², N = {n}, {samples} samples"), "omega2_density.svg")?;
    if as_compare {
        for c in &checks {
            println!(
                "{:<26} {:>12.3e} {:<10.1e} {}",
                c.name,
                c.value,
                c.threshold,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_rows_split_into_blobs() {
        let rows = vec![
            BoundaryRow { blob: 0, re: 0.0, im: 1.0 },
            BoundaryRow { blob: 0, re: 1.0, im: 1.0 },
            BoundaryRow { blob: 1, re: 0.0, im: -1.0 },
        ];
        let p = boundary_polygons(&rows);
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].len(), 2);
        assert_eq!(p[1], vec![(0.0, -1.0)]);
    }
}
