//! Multilevel B-spline approximation of scattered data.
//!
//! Each level fits a uniform cubic B-spline control lattice to the residual
//! left by the coarser levels. The coarsest lattice is 4x4 control points
//! (one cell); every level doubles the cell count per axis until the cell
//! spacing is at most one pixel.

use crate::mesh::Sample;

#[inline]
fn basis(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    let u = 1.0 - t;
    [
        u * u * u / 6.0,
        (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
        (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0,
        t3 / 6.0,
    ]
}

#[derive(Clone, Debug)]
struct Lattice {
    cells_x: usize,
    cells_y: usize,
    scale_x: f64,
    scale_y: f64,
    // (cells_x + 3) x (cells_y + 3) control points, row-major
    phi: Vec<f64>,
}

impl Lattice {
    fn stride(&self) -> usize {
        self.cells_x + 3
    }

    #[inline]
    fn cell(&self, x: f64, y: f64) -> (usize, usize, f64, f64) {
        let u = (x * self.scale_x).max(0.0);
        let v = (y * self.scale_y).max(0.0);
        let i = (u.floor() as usize).min(self.cells_x - 1);
        let j = (v.floor() as usize).min(self.cells_y - 1);
        (i, j, u - i as f64, v - j as f64)
    }

    fn fit(cells_x: usize, cells_y: usize, extent: (f64, f64), pts: &[(f64, f64, f64)]) -> Self {
        let mut lat = Lattice {
            cells_x,
            cells_y,
            scale_x: cells_x as f64 / extent.0,
            scale_y: cells_y as f64 / extent.1,
            phi: vec![0.0; (cells_x + 3) * (cells_y + 3)],
        };
        let stride = lat.stride();
        let mut delta = vec![0.0; lat.phi.len()];
        let mut omega = vec![0.0; lat.phi.len()];
        for &(x, y, z) in pts {
            let (i, j, s, t) = lat.cell(x, y);
            let bs = basis(s);
            let bt = basis(t);
            let mut sum_w2 = 0.0;
            for b in &bt {
                for a in &bs {
                    let w = a * b;
                    sum_w2 += w * w;
                }
            }
            for (l, b) in bt.iter().enumerate() {
                for (k, a) in bs.iter().enumerate() {
                    let w = a * b;
                    let idx = (j + l) * stride + i + k;
                    let phi_c = w * z / sum_w2;
                    delta[idx] += w * w * phi_c;
                    omega[idx] += w * w;
                }
            }
        }
        for ((p, d), o) in lat.phi.iter_mut().zip(&delta).zip(&omega) {
            if *o > 0.0 {
                *p = d / o;
            }
        }
        lat
    }

    #[inline]
    fn eval(&self, x: f64, y: f64) -> f64 {
        let (i, j, s, t) = self.cell(x, y);
        let bs = basis(s);
        let bt = basis(t);
        let stride = self.stride();
        let mut acc = 0.0;
        for (l, b) in bt.iter().enumerate() {
            let row = (j + l) * stride + i;
            let mut r = 0.0;
            for (k, a) in bs.iter().enumerate() {
                r += a * self.phi[row + k];
            }
            acc += b * r;
        }
        acc
    }
}

/// A fitted multilevel B-spline surface.
#[derive(Clone, Debug)]
pub struct Mba {
    levels: Vec<Lattice>,
    offset: f64,
}

impl Mba {
    /// Fits the hierarchy to `samples` over a `width` x `height` grid.
    ///
    /// Values are fitted relative to their midrange, so a constant field is
    /// reproduced exactly.
    pub fn fit(samples: &[Sample], width: usize, height: usize) -> Self {
        let (lo, hi) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.value), hi.max(s.value))
            });
        let offset = if samples.is_empty() {
            0.0
        } else {
            (lo + hi) / 2.0
        };
        let max_x = samples.iter().map(|s| s.x).fold(0.0, f64::max);
        let max_y = samples.iter().map(|s| s.y).fold(0.0, f64::max);
        let extent = (
            (width.saturating_sub(1) as f64).max(max_x).max(1.0),
            (height.saturating_sub(1) as f64).max(max_y).max(1.0),
        );

        let mut residual: Vec<(f64, f64, f64)> = samples
            .iter()
            .map(|s| (s.x, s.y, s.value - offset))
            .collect();
        let mut levels = Vec::new();
        let mut cells = 1usize;
        loop {
            let lat = Lattice::fit(cells, cells, extent, &residual);
            for r in &mut residual {
                r.2 -= lat.eval(r.0, r.1);
            }
            levels.push(lat);
            if extent.0 / cells as f64 <= 1.0 && extent.1 / cells as f64 <= 1.0 {
                break;
            }
            cells *= 2;
        }
        Mba { levels, offset }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Control-point spacing of the finest level, in pixels.
    pub fn finest_spacing(&self) -> (f64, f64) {
        let l = self.levels.last().expect("at least one level");
        (1.0 / l.scale_x, 1.0 / l.scale_y)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.offset + self.levels.iter().map(|l| l.eval(x, y)).sum::<f64>()
    }
}
