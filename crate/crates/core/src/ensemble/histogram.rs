use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle `re.0 <= Re w < re.1`, `im.0 <= Im w < im.1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window2D {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window2D {
    pub fn square(half_width: f64) -> Self {
        Self { re: (-half_width, half_width), im: (-half_width, half_width) }
    }
}

/// Index of the bin of `x` among `bins` equal bins on `[lo, hi)`; the right
/// edge belongs to the last bin.
fn bin_of(x: f64, lo: f64, hi: f64, bins: usize) -> Option<usize> {
    if !(x >= lo && x <= hi) {
        return None;
    }
    let i = ((x - lo) / (hi - lo) * bins as f64) as usize;
    Some(i.min(bins - 1))
}

/// Histogram of real eigenvalues. Densities are normalized by the total
/// eigenvalue count (real and complex), so the density integrates to the
/// real fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram1D {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Real eigenvalues that fell outside the window.
    pub outside: u64,
    pub total_eigenvalues: u64,
}

impl Histogram1D {
    pub fn new(lo: f64, hi: f64, bins: usize, total_eigenvalues: usize) -> Self {
        let edges = (0..=bins).map(|i| if i == bins { hi } else { lo + (hi - lo) * i as f64 / bins as f64 }).collect();
        Self { edges, counts: vec![0; bins], outside: 0, total_eigenvalues: total_eigenvalues as u64 }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn lo(&self) -> f64 {
        self.edges[0]
    }

    pub fn hi(&self) -> f64 {
        self.edges[self.bins()]
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi() - self.lo()) / self.bins() as f64
    }

    pub fn add(&mut self, x: f64) {
        match bin_of(x, self.lo(), self.hi(), self.bins()) {
            Some(i) => self.counts[i] += 1,
            None => self.outside += 1,
        }
    }

    pub fn add_all(&mut self, xs: impl IntoIterator<Item = f64>) {
        for x in xs {
            self.add(x);
        }
    }

    pub fn total_in_window(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }

    /// `count / (total_eigenvalues * width)` per bin.
    pub fn density(&self) -> Vec<f64> {
        let norm = self.total_eigenvalues.max(1) as f64 * self.bin_width();
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }

    /// Adds the counts of `other`, which must share the bin edges.
    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.edges, other.edges, "histogram edges differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
        self.total_eigenvalues += other.total_eigenvalues;
    }
}

/// Histogram of complex-classified eigenvalues on a regular grid; counts are
/// stored with `iy` fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub window: Window2D,
    pub nx: usize,
    pub ny: usize,
    pub counts: Vec<u64>,
    pub outside: u64,
    pub total_eigenvalues: u64,
}

impl Histogram2D {
    pub fn new(window: Window2D, bins: (usize, usize), total_eigenvalues: usize) -> Self {
        let (nx, ny) = bins;
        Self { window, nx, ny, counts: vec![0; nx * ny], outside: 0, total_eigenvalues: total_eigenvalues as u64 }
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let w = self.window;
        ((w.re.1 - w.re.0) / self.nx as f64, (w.im.1 - w.im.0) / self.ny as f64)
    }

    pub fn cell_area(&self) -> f64 {
        let (dx, dy) = self.cell_size();
        dx * dy
    }

    /// Lower-left corner of cell `(ix, iy)`.
    pub fn cell_origin(&self, ix: usize, iy: usize) -> Complex<f64> {
        let (dx, dy) = self.cell_size();
        Complex::new(self.window.re.0 + dx * ix as f64, self.window.im.0 + dy * iy as f64)
    }

    /// Cell containing `z`. On a window symmetric about the real axis with
    /// an even row count, rows are assigned from `|Im z|`, so `z` and its
    /// conjugate always land in mirrored rows.
    pub fn cell_of(&self, z: Complex<f64>) -> Option<(usize, usize)> {
        let w = self.window;
        let ix = bin_of(z.re, w.re.0, w.re.1, self.nx)?;
        let iy = if w.im.0 == -w.im.1 && self.ny % 2 == 0 {
            let half = self.ny / 2;
            let j = bin_of(z.im.abs(), 0.0, w.im.1, half)?;
            if z.im >= 0.0 {
                half + j
            } else {
                half - 1 - j
            }
        } else {
            bin_of(z.im, w.im.0, w.im.1, self.ny)?
        };
        Some((ix, iy))
    }

    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[ix * self.ny + iy]
    }

    pub fn add(&mut self, z: Complex<f64>) {
        match self.cell_of(z) {
            Some((ix, iy)) => self.counts[ix * self.ny + iy] += 1,
            None => self.outside += 1,
        }
    }

    pub fn add_all(&mut self, zs: impl IntoIterator<Item = Complex<f64>>) {
        for z in zs {
            self.add(z);
        }
    }

    pub fn total_in_window(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Count per unit area per eigenvalue, `count / (total * area)`.
    pub fn density(&self, ix: usize, iy: usize) -> f64 {
        self.count(ix, iy) as f64 / (self.total_eigenvalues.max(1) as f64 * self.cell_area())
    }

    pub fn merge(&mut self, other: &Self) {
        assert!(self.window == other.window && self.nx == other.nx && self.ny == other.ny, "histogram grids differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
        self.total_eigenvalues += other.total_eigenvalues;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edges_and_counts() {
        let mut h = Histogram1D::new(-1.0, 1.0, 4, 10);
        h.add_all([-1.0, -0.6, 0.0, 0.99, 1.0, 1.5, f64::NAN]);
        assert_eq!(h.counts, vec![2, 0, 1, 2]);
        assert_eq!(h.outside, 2);
        assert_eq!(h.centers(), vec![-0.75, -0.25, 0.25, 0.75]);
        let d = h.density();
        assert!((d[0] - 2.0 / (10.0 * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn merge_adds() {
        let mut a = Histogram1D::new(0.0, 1.0, 2, 3);
        let mut b = a.clone();
        a.add(0.2);
        b.add(0.7);
        a.merge(&b);
        assert_eq!(a.counts, vec![1, 1]);
        assert_eq!(a.total_eigenvalues, 6);
    }

    #[test]
    fn grid_cells() {
        let mut h = Histogram2D::new(Window2D::square(1.0), (4, 2), 5);
        h.add(Complex::new(0.1, 0.5));
        h.add(Complex::new(-0.9, -0.9));
        h.add(Complex::new(3.0, 0.0));
        assert_eq!(h.count(2, 1), 1);
        assert_eq!(h.count(0, 0), 1);
        assert_eq!(h.outside, 1);
        assert_eq!(h.cell_origin(2, 1), Complex::new(0.0, 0.0));
        assert!((h.density(2, 1) - 1.0 / (5.0 * 0.5)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn nothing_is_lost(xs in prop::collection::vec(-3.0f64..3.0, 0..200), bins in 2usize..50) {
            let mut h = Histogram1D::new(-2.0, 2.5, bins, xs.len());
            h.add_all(xs.iter().copied());
            prop_assert_eq!(h.total_in_window() + h.outside, xs.len() as u64);
            let inside = xs.iter().filter(|x| (-2.0..=2.5).contains(*x)).count() as f64;
            let mass: f64 = h.density().iter().sum::<f64>() * h.bin_width();
            prop_assert!((mass * xs.len() as f64 - inside).abs() < 1e-9);
        }

        #[test]
        fn conjugate_pairs_fill_mirrored_cells(re in -0.99f64..0.99, im in 0.01f64..0.99, step in 0usize..8) {
            let im = if step > 0 { step as f64 * 0.125 } else { im };
            let mut h = Histogram2D::new(Window2D::square(1.0), (6, 8), 2);
            let z = Complex::new(re, im);
            h.add(z);
            h.add(z.conj());
            let (ix, iy) = h.cell_of(z).unwrap();
            prop_assert_eq!(h.count(ix, h.ny - 1 - iy), 1);
        }
    }
}
