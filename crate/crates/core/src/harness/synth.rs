//! Deterministic synthetic grayscale scenes for desk-scale experiments.
//!
//! A scene layers a 1/f wave background, opaque shapes (some carrying a
//! grating texture) and fine value noise, then quantizes to 8-bit codes.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::Image;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn range(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn lattice_value(ix: i64, iy: i64, seed: u64) -> f64 {
    let h = splitmix(seed ^ splitmix((ix as u64) ^ splitmix(iy as u64)));
    (h >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

fn value_noise(x: f64, y: f64, cell: f64, seed: u64) -> f64 {
    let (u, v) = (x / cell, y / cell);
    let (ix, iy) = (u.floor() as i64, v.floor() as i64);
    let (fx, fy) = (u - ix as f64, v - iy as f64);
    let a = lattice_value(ix, iy, seed);
    let b = lattice_value(ix + 1, iy, seed);
    let c = lattice_value(ix, iy + 1, seed);
    let d = lattice_value(ix + 1, iy + 1, seed);
    let top = a + fx * (b - a);
    let bottom = c + fx * (d - c);
    top + fy * (bottom - top)
}

struct Wave {
    kx: f64,
    ky: f64,
    phase: f64,
    amp: f64,
}

enum Outline {
    Ellipse {
        cx: f64,
        cy: f64,
        rx: f64,
        ry: f64,
        cos: f64,
        sin: f64,
    },
    Rect {
        cx: f64,
        cy: f64,
        hx: f64,
        hy: f64,
        cos: f64,
        sin: f64,
    },
}

impl Outline {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Outline::Ellipse {
                cx,
                cy,
                rx,
                ry,
                cos,
                sin,
            } => {
                let (dx, dy) = (x - cx, y - cy);
                let (u, v) = (dx * cos + dy * sin, -dx * sin + dy * cos);
                (u / rx).powi(2) + (v / ry).powi(2) <= 1.0
            }
            Outline::Rect {
                cx,
                cy,
                hx,
                hy,
                cos,
                sin,
            } => {
                let (dx, dy) = (x - cx, y - cy);
                let (u, v) = (dx * cos + dy * sin, -dx * sin + dy * cos);
                u.abs() <= hx && v.abs() <= hy
            }
        }
    }
}

struct Shape {
    outline: Outline,
    level: f64,
    grating: Option<Wave>,
}

/// Generates one `width` x `height` scene; identical seeds give identical images.
pub fn synthetic_scene(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = width.max(height).max(1) as f64;

    let waves: Vec<Wave> = (0..24)
        .map(|_| {
            // 1 to 32 cycles across the image, amplitude ~ 1/f
            let cycles = 2f64.powf(range(&mut rng, 0.0, 5.0));
            let theta = range(&mut rng, 0.0, PI);
            let k = 2.0 * PI * cycles / size;
            Wave {
                kx: k * theta.cos(),
                ky: k * theta.sin(),
                phase: range(&mut rng, 0.0, 2.0 * PI),
                amp: 0.12 / cycles.sqrt(),
            }
        })
        .collect();

    let shapes: Vec<Shape> = (0..14)
        .map(|_| {
            let cx = range(&mut rng, 0.0, width as f64);
            let cy = range(&mut rng, 0.0, height as f64);
            let a = range(&mut rng, 0.04, 0.22) * size;
            let b = range(&mut rng, 0.3, 1.0) * a;
            let angle = range(&mut rng, 0.0, PI);
            let (sin, cos) = angle.sin_cos();
            let outline = if rng.next_u64() % 2 == 0 {
                Outline::Ellipse {
                    cx,
                    cy,
                    rx: a,
                    ry: b,
                    cos,
                    sin,
                }
            } else {
                Outline::Rect {
                    cx,
                    cy,
                    hx: a,
                    hy: b,
                    cos,
                    sin,
                }
            };
            let level = range(&mut rng, 0.1, 0.9);
            let grating = if rng.next_u64() % 3 == 0 {
                let period = range(&mut rng, 8.0, 30.0);
                let theta = range(&mut rng, 0.0, PI);
                Some(Wave {
                    kx: 2.0 * PI / period * theta.cos(),
                    ky: 2.0 * PI / period * theta.sin(),
                    phase: range(&mut rng, 0.0, 2.0 * PI),
                    amp: range(&mut rng, 0.05, 0.2),
                })
            } else {
                None
            };
            Shape {
                outline,
                level,
                grating,
            }
        })
        .collect();
    let noise_seed = rng.next_u64();

    let img = Image::from_fn(width, height, |xi, yi| {
        let (x, y) = (xi as f64, yi as f64);
        let mut v = 0.5
            + waves
                .iter()
                .map(|w| w.amp * (w.kx * x + w.ky * y + w.phase).sin())
                .sum::<f64>();
        for s in &shapes {
            if s.outline.contains(x, y) {
                v = s.level;
                if let Some(g) = &s.grating {
                    v += g.amp * (g.kx * x + g.ky * y + g.phase).sin();
                }
            }
        }
        v += 0.06 * value_noise(x, y, 3.0, noise_seed)
            + 0.04 * value_noise(x, y, 7.0, noise_seed ^ 1);
        v.clamp(0.02, 0.98)
    });
    // quantize as an 8-bit source would be
    let data = img
        .data()
        .iter()
        .map(|&v| f64::from(crate::image::to_code(v)) / 255.0)
        .collect();
    Image::new(width, height, data).expect("quantized values lie in [0, 1]")
}

/// `count` scenes with seeds `seed, seed + 1, ...`.
pub fn synthetic_corpus(count: usize, width: usize, height: usize, seed: u64) -> Vec<Image> {
    (0..count as u64)
        .map(|k| synthetic_scene(width, height, seed.wrapping_add(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_varied() {
        let a = synthetic_scene(64, 48, 5);
        let b = synthetic_scene(64, 48, 5);
        let c = synthetic_scene(64, 48, 6);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let (lo, hi) = a
            .data()
            .iter()
            .fold((1.0f64, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        assert!(hi - lo > 0.3);
    }
}
