//! Sliding-window 8x8 DCT hard-threshold denoiser.
//!
//! Every 8x8 window (stride 1, symmetric extension of 7 pixels at the
//! borders) is transformed with the orthonormal 2-D DCT-II, AC coefficients
//! with magnitude at most `2.7 * sigma` are zeroed, and the inverse
//! transforms are averaged with uniform weights. Each pixel receives
//! exactly 64 estimates.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::image::{mirror_index as mirror, Image};

use super::{check_sigma2, Denoiser};

pub const BLOCK: usize = 8;
pub const THRESHOLD_FACTOR: f64 = 2.7;
const PAD: usize = BLOCK - 1;
// block rows processed per parallel batch; bounds strip memory
const BATCH: usize = 32;

#[derive(Clone, Debug)]
pub struct DctDenoiser {
    basis: [[f64; BLOCK]; BLOCK],
}

impl Default for DctDenoiser {
    fn default() -> Self {
        let mut basis = [[0.0; BLOCK]; BLOCK];
        for (k, row) in basis.iter_mut().enumerate() {
            let scale = if k == 0 {
                (1.0 / BLOCK as f64).sqrt()
            } else {
                (2.0 / BLOCK as f64).sqrt()
            };
            for (n, v) in row.iter_mut().enumerate() {
                *v = scale * (PI * (2 * n + 1) as f64 * k as f64 / (2 * BLOCK) as f64).cos();
            }
        }
        DctDenoiser { basis }
    }
}

type Block = [[f64; BLOCK]; BLOCK];

impl DctDenoiser {
    fn forward(&self, b: &Block) -> Block {
        // C * B * C^T
        let c = &self.basis;
        let mut tmp = [[0.0; BLOCK]; BLOCK];
        for k in 0..BLOCK {
            for j in 0..BLOCK {
                let mut s = 0.0;
                for n in 0..BLOCK {
                    s += c[k][n] * b[n][j];
                }
                tmp[k][j] = s;
            }
        }
        let mut out = [[0.0; BLOCK]; BLOCK];
        for k in 0..BLOCK {
            for l in 0..BLOCK {
                let mut s = 0.0;
                for j in 0..BLOCK {
                    s += tmp[k][j] * c[l][j];
                }
                out[k][l] = s;
            }
        }
        out
    }

    fn inverse(&self, x: &Block) -> Block {
        // C^T * X * C
        let c = &self.basis;
        let mut tmp = [[0.0; BLOCK]; BLOCK];
        for n in 0..BLOCK {
            for l in 0..BLOCK {
                let mut s = 0.0;
                for k in 0..BLOCK {
                    s += c[k][n] * x[k][l];
                }
                tmp[n][l] = s;
            }
        }
        let mut out = [[0.0; BLOCK]; BLOCK];
        for n in 0..BLOCK {
            for m in 0..BLOCK {
                let mut s = 0.0;
                for l in 0..BLOCK {
                    s += tmp[n][l] * c[l][m];
                }
                out[n][m] = s;
            }
        }
        out
    }

    /// Deviation of the thresholded estimate from the window itself.
    /// The window is shifted by its first pixel first; the shift only
    /// touches DC, which is never thresholded, and makes flat windows exact.
    fn block_deviation(&self, window: &Block, threshold: f64) -> Block {
        let anchor = window[0][0];
        let mut r = *window;
        for row in &mut r {
            for v in row.iter_mut() {
                *v -= anchor;
            }
        }
        let mut coeffs = self.forward(&r);
        for (k, row) in coeffs.iter_mut().enumerate() {
            for (l, c) in row.iter_mut().enumerate() {
                if (k, l) != (0, 0) && c.abs() <= threshold {
                    *c = 0.0;
                }
            }
        }
        let est = self.inverse(&coeffs);
        let mut dev = [[0.0; BLOCK]; BLOCK];
        for i in 0..BLOCK {
            for j in 0..BLOCK {
                dev[i][j] = est[i][j] - r[i][j];
            }
        }
        dev
    }

    fn run(&self, img: &Image, sigma2: f64) -> Image {
        let (w, h) = (img.width(), img.height());
        let threshold = THRESHOLD_FACTOR * sigma2.sqrt() / 255.0;
        let pw = w + 2 * PAD;
        let padded: Vec<f64> = (0..h + 2 * PAD)
            .flat_map(|py| {
                let y = mirror(py as isize - PAD as isize, h);
                (0..pw).map(move |px| img.get(mirror(px as isize - PAD as isize, w), y))
            })
            .collect();

        // Block (bx, by) covers original pixels x in [bx - 7, bx], y in [by - 7, by].
        let block_rows = h + PAD;
        let block_cols = w + PAD;
        let mut acc = vec![0.0; w * h];
        let mut start = 0;
        while start < block_rows {
            let end = (start + BATCH).min(block_rows);
            let strips: Vec<Vec<f64>> = (start..end)
                .into_par_iter()
                .map(|by| {
                    // 8 rows of deviations, indexed by padded column
                    let mut strip = vec![0.0; BLOCK * pw];
                    let mut window = [[0.0; BLOCK]; BLOCK];
                    for bx in 0..block_cols {
                        for (i, line) in window.iter_mut().enumerate() {
                            let row = (by + i) * pw + bx;
                            line.copy_from_slice(&padded[row..row + BLOCK]);
                        }
                        let dev = self.block_deviation(&window, threshold);
                        for i in 0..BLOCK {
                            for j in 0..BLOCK {
                                strip[i * pw + bx + j] += dev[i][j];
                            }
                        }
                    }
                    strip
                })
                .collect();
            for (by, strip) in (start..end).zip(&strips) {
                for i in 0..BLOCK {
                    let py = by + i;
                    if py < PAD || py >= h + PAD {
                        continue;
                    }
                    let y = py - PAD;
                    let src = &strip[i * pw + PAD..i * pw + PAD + w];
                    for (a, s) in acc[y * w..(y + 1) * w].iter_mut().zip(src) {
                        *a += s;
                    }
                }
            }
            start = end;
        }
        let weight = (BLOCK * BLOCK) as f64;
        let data = img
            .data()
            .iter()
            .zip(&acc)
            .map(|(&v, &d)| v + d / weight)
            .collect();
        Image::from_clamped(w, h, data).expect("same dimensions")
    }
}

impl Denoiser for DctDenoiser {
    fn name(&self) -> &'static str {
        "dct"
    }

    fn denoise(&self, img: &Image, sigma2: f64) -> Result<Image> {
        check_sigma2(sigma2)?;
        if sigma2 == 0.0 || img.is_empty() {
            return Ok(img.clone());
        }
        Ok(self.run(img, sigma2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal() {
        let d = DctDenoiser::default();
        for a in 0..BLOCK {
            for b in 0..BLOCK {
                let dot: f64 = (0..BLOCK).map(|n| d.basis[a][n] * d.basis[b][n]).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn transform_round_trip() {
        let d = DctDenoiser::default();
        let mut b = [[0.0; BLOCK]; BLOCK];
        for (i, row) in b.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = ((i * 7 + j * 3) % 11) as f64 / 10.0;
            }
        }
        let back = d.inverse(&d.forward(&b));
        for i in 0..BLOCK {
            for j in 0..BLOCK {
                assert!((back[i][j] - b[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn tiny_images_supported() {
        let img = Image::from_fn(3, 2, |x, y| (x + y) as f64 / 4.0);
        let out = DctDenoiser::default().denoise(&img, 40.0).unwrap();
        assert!(out.same_dims(&img));
    }
}
