use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{mean_and_std_error, Histogram2D};
use crate::analytic::{rho_complex_uniform, BoundaryCurve};
use crate::linalg::Spectrum;

/// `3 / (sqrt(n) m)`: three typical bulk spacings.
pub fn default_margin(n: usize, m: f64) -> f64 {
    3.0 / ((n as f64).sqrt() * m)
}

/// Fraction of complex-classified eigenvalues farther than `margin` from
/// the analytic region; 0 when there are none.
pub fn boundary_violation_rate(spectra: &[Spectrum<f64>], boundary: &BoundaryCurve<f64>, margin: f64) -> f64 {
    let (mut total, mut outside) = (0usize, 0usize);
    for z in spectra.iter().flat_map(|s| s.complex_values()) {
        total += 1;
        if boundary.distance_outside(z) > margin {
            outside += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        outside as f64 / total as f64
    }
}

/// Where a cell lies relative to the region shrunk and grown by the margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Interior,
    Exterior,
    Edge,
}

struct Region {
    boundary: BoundaryCurve<f64>,
    polygons: [Vec<Complex<f64>>; 2],
}

impl Region {
    fn new(lambda: f64, m: f64) -> Self {
        let boundary = BoundaryCurve::with_points(lambda, m, 512);
        let polygons = boundary.polygons();
        Self { boundary, polygons }
    }

    fn distance_to_boundary(&self, p: Complex<f64>) -> f64 {
        let mut best = f64::INFINITY;
        for poly in &self.polygons {
            for (i, a) in poly.iter().enumerate() {
                let b = poly[(i + 1) % poly.len()];
                let ab = b - a;
                let len2 = ab.norm_sqr();
                let s = if len2 > 0.0 { (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0) } else { 0.0 };
                best = best.min((p - (a + ab * s)).norm());
            }
        }
        best
    }

    /// Classifies a cell from a 5x5 lattice of points covering it.
    fn classify(&self, origin: Complex<f64>, size: (f64, f64), margin: f64) -> CellKind {
        let (mut interior, mut exterior) = (true, true);
        for i in 0..5 {
            for j in 0..5 {
                let p = origin + Complex::new(size.0 * i as f64 / 4.0, size.1 * j as f64 / 4.0);
                let inside = self.boundary.contains(p);
                let far = self.distance_to_boundary(p) >= margin;
                interior &= inside && far;
                exterior &= !inside && far;
                if !interior && !exterior {
                    return CellKind::Edge;
                }
            }
        }
        if interior {
            CellKind::Interior
        } else {
            CellKind::Exterior
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub ix: usize,
    pub iy: usize,
    pub count: u64,
    pub density: f64,
    /// `(density - m^2/π) / (m^2/π)`.
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub expected_density: f64,
    pub margin: f64,
    pub interior: Vec<CellReport>,
    pub max_relative_deviation: f64,
    /// Counts in cells farther than the margin outside the region.
    pub exterior_cells: usize,
    pub exterior_count: u64,
}

/// Compares the cells of `hist` lying wholly inside the region eroded by
/// `margin` with the uniform density `m^2/π` (`t = -1`).
pub fn uniformity_check(hist: &Histogram2D, lambda: f64, m: f64, margin: f64) -> UniformityReport {
    let region = Region::new(lambda, m);
    let expected = rho_complex_uniform(m);
    let size = hist.cell_size();
    let mut interior = Vec::new();
    let (mut exterior_cells, mut exterior_count) = (0, 0);
    for ix in 0..hist.nx {
        for iy in 0..hist.ny {
            match region.classify(hist.cell_origin(ix, iy), size, margin) {
                CellKind::Interior => {
                    let density = hist.density(ix, iy);
                    interior.push(CellReport {
                        ix,
                        iy,
                        count: hist.count(ix, iy),
                        density,
                        relative_deviation: (density - expected) / expected,
                    });
                }
                CellKind::Exterior => {
                    exterior_cells += 1;
                    exterior_count += hist.count(ix, iy);
                }
                CellKind::Edge => {}
            }
        }
    }
    let max_relative_deviation = interior.iter().map(|c| c.relative_deviation.abs()).fold(0.0, f64::max);
    UniformityReport {
        expected_density: expected,
        margin,
        interior,
        max_relative_deviation,
        exterior_cells,
        exterior_count,
    }
}

/// Complex density averaged over the interior cells of `hist`, estimated
/// per sample so that the error bar reflects sample-to-sample variation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorDensity {
    pub mean: f64,
    pub std_error: f64,
    pub interior_area: f64,
    pub cells: usize,
}

pub fn interior_density_estimate(
    spectra: &[Spectrum<f64>],
    hist: &Histogram2D,
    lambda: f64,
    m: f64,
    margin: f64,
) -> InteriorDensity {
    let region = Region::new(lambda, m);
    let size = hist.cell_size();
    let mut interior = vec![false; hist.nx * hist.ny];
    for ix in 0..hist.nx {
        for iy in 0..hist.ny {
            interior[ix * hist.ny + iy] = region.classify(hist.cell_origin(ix, iy), size, margin) == CellKind::Interior;
        }
    }
    let cells = interior.iter().filter(|&&b| b).count();
    let area = cells as f64 * hist.cell_area();
    let per_sample: Vec<f64> = spectra
        .iter()
        .map(|s| {
            let hits = s
                .complex_values()
                .filter(|z| hist.cell_of(*z).is_some_and(|(ix, iy)| interior[ix * hist.ny + iy]))
                .count();
            hits as f64 / (s.len() as f64 * area)
        })
        .collect();
    let (mean, std_error) = if cells == 0 { (f64::NAN, f64::NAN) } else { mean_and_std_error(&per_sample) };
    InteriorDensity { mean, std_error, interior_area: area, cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::Window2D;
    use crate::linalg::classify_spectrum;

    fn pair(re: f64, im: f64) -> Vec<Complex<f64>> {
        vec![Complex::new(re, im), Complex::new(re, -im)]
    }

    #[test]
    fn violations_count_far_points_only() {
        let boundary = BoundaryCurve::new(0.5, 1.0);
        let mut eigs = pair(0.0, 0.5);
        eigs.extend(pair(0.0, 1.05));
        eigs.extend(pair(3.0, 1.0));
        let s = classify_spectrum(eigs, 1e-8).unwrap();
        let rate = boundary_violation_rate(std::slice::from_ref(&s), &boundary, 0.1);
        assert!((rate - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(boundary_violation_rate(std::slice::from_ref(&s), &boundary, f64::INFINITY), 0.0);
        let real = classify_spectrum(vec![Complex::new(1.0, 0.0)], 1e-8).unwrap();
        assert_eq!(boundary_violation_rate(&[real], &boundary, 0.0), 0.0);
    }

    #[test]
    fn cells_are_classified() {
        // λ = 1/2: the unit disk, whose boundary includes the real diameter.
        let hist = Histogram2D::new(Window2D::square(1.2), (12, 12), 1);
        let region = Region::new(0.5, 1.0);
        let size = hist.cell_size();
        let kind = |ix, iy| region.classify(hist.cell_origin(ix, iy), size, 0.05);
        assert_eq!(kind(5, 8), CellKind::Interior);
        assert_eq!(kind(5, 6), CellKind::Edge);
        assert_eq!(kind(0, 0), CellKind::Exterior);
    }

    #[test]
    fn exact_uniform_histogram_has_no_deviation() {
        let mut hist = Histogram2D::new(Window2D::square(1.2), (12, 12), 0);
        // Fill every cell with its uniform expectation for 10^6 eigenvalues.
        hist.total_eigenvalues = 1_000_000;
        let per_cell = (rho_complex_uniform(1.0) * hist.cell_area() * 1e6).round() as u64;
        hist.counts.iter_mut().for_each(|c| *c = per_cell);
        let r = uniformity_check(&hist, 0.5, 1.0, 0.05);
        assert!(!r.interior.is_empty());
        assert!(r.max_relative_deviation < 1e-4);
        assert!(r.exterior_cells > 0);
    }
}
