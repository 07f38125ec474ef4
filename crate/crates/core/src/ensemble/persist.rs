//! Run directories: `config.json`, `eigenvalues.csv`, `hist1d.csv`,
//! `hist2d.csv` and `summary.json`.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::{Comparison, EnsembleError, FractionEstimate, Histogram1D, Histogram2D, RunArtifact};
use crate::linalg::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenClass {
    R,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRow {
    pub sample_index: usize,
    pub re: f64,
    pub im: f64,
    pub class: EigenClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hist1dRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hist2dRow {
    pub ix: usize,
    pub iy: usize,
    pub re_lo: f64,
    pub im_lo: f64,
    pub count: u64,
    pub density: f64,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EnsembleError + '_ {
    move |source| EnsembleError::Io { path: path.display().to_string(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> EnsembleError + '_ {
    move |e| EnsembleError::Format { path: path.display().to_string(), message: e.to_string() }
}

pub(crate) fn write_rows<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> Result<(), EnsembleError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub(crate) fn read_rows<R: DeserializeOwned>(path: &Path) -> Result<Vec<R>, EnsembleError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize().collect::<Result<Vec<R>, _>>().map_err(csv_err(path))
}

pub(crate) fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<(), EnsembleError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| EnsembleError::Format { path: path.display().to_string(), message: e.to_string() })?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

/// One row per eigenvalue, samples numbered from `first_index`.
pub fn write_eigenvalues_csv(path: &Path, spectra: &[Spectrum<f64>], first_index: usize) -> Result<(), EnsembleError> {
    let rows = spectra.iter().enumerate().flat_map(|(i, s)| {
        let mask = s.real_mask();
        s.eigenvalues.iter().zip(mask).map(move |(z, real)| EigenvalueRow {
            sample_index: first_index + i,
            re: z.re,
            im: z.im,
            class: if real { EigenClass::R } else { EigenClass::C },
        })
    });
    write_rows(path, rows)
}

pub fn read_eigenvalues_csv(path: &Path) -> Result<Vec<EigenvalueRow>, EnsembleError> {
    read_rows(path)
}

pub fn write_hist1d_csv(path: &Path, hist: &Histogram1D) -> Result<(), EnsembleError> {
    let density = hist.density();
    let rows = (0..hist.bins()).map(|i| Hist1dRow {
        bin_lo: hist.edges[i],
        bin_hi: hist.edges[i + 1],
        count: hist.counts[i],
        density: density[i],
    });
    write_rows(path, rows)
}

pub fn read_hist1d_csv(path: &Path) -> Result<Vec<Hist1dRow>, EnsembleError> {
    read_rows(path)
}

pub fn write_hist2d_csv(path: &Path, hist: &Histogram2D) -> Result<(), EnsembleError> {
    let rows = (0..hist.nx).flat_map(|ix| {
        (0..hist.ny).map(move |iy| {
            let o = hist.cell_origin(ix, iy);
            Hist2dRow { ix, iy, re_lo: o.re, im_lo: o.im, count: hist.count(ix, iy), density: hist.density(ix, iy) }
        })
    });
    write_rows(path, rows)
}

#[derive(Serialize)]
struct Summary<'a> {
    content_hash: &'a str,
    samples: usize,
    n: usize,
    k: usize,
    lambda: f64,
    t: f64,
    m: f64,
    fraction_real: &'a FractionEstimate,
    comparison: &'a Comparison,
    real_outside_window: u64,
    complex_outside_window: u64,
    max_intertwining_residual: f64,
    wall_clock_seconds: f64,
}

/// Writes the five files of a run into `dir`, creating it if needed.
pub fn write_artifact(artifact: &RunArtifact, dir: &Path) -> Result<(), EnsembleError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let metric = artifact.config.model.metric;
    write_json(&dir.join("config.json"), &artifact.config)?;
    write_eigenvalues_csv(&dir.join("eigenvalues.csv"), &artifact.spectra, 0)?;
    write_hist1d_csv(&dir.join("hist1d.csv"), &artifact.hist1d)?;
    write_hist2d_csv(&dir.join("hist2d.csv"), &artifact.hist2d)?;
    let summary = Summary {
        content_hash: &artifact.content_hash,
        samples: artifact.spectra.len(),
        n: metric.n,
        k: metric.k,
        lambda: metric.lambda(),
        t: metric.t,
        m: artifact.config.model.m,
        fraction_real: &artifact.fraction,
        comparison: &artifact.comparison,
        real_outside_window: artifact.hist1d.outside,
        complex_outside_window: artifact.hist2d.outside,
        max_intertwining_residual: artifact.max_intertwining_residual,
        wall_clock_seconds: artifact.wall_clock_seconds,
    };
    write_json(&dir.join("summary.json"), &summary)
}
