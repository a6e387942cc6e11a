//! Floating-mesh simulation from a low-pass filtered image.
//!
//! Pixel `(m, n)` of the filtered image is placed at mesh position
//! `(m / phi, n / phi)`. Pixels with both coordinates multiples of `phi` form
//! the reference grid image; the remaining positions are the candidate pool,
//! from which the mesh is drawn uniformly without replacement.
//!
//! Sampling uses ChaCha8 seeded with `seed_from_u64(seed)`: a partial
//! Fisher-Yates shuffle over the candidates in raster order, drawing each
//! index with [`uniform_below`]. The first `count` shuffled candidates form
//! the mesh, in shuffle order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{clamp_unit, Image};
use crate::mesh::{MeshSamples, Sample};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub phi: usize,
    pub ratio: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(phi: usize, ratio: f64, seed: u64) -> Result<Self> {
        let cfg = SimConfig { phi, ratio, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi < 2 {
            return Err(Error::InvalidParameter(format!(
                "phi {} must be at least 2",
                self.phi
            )));
        }
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sample ratio {} outside (0, 1]",
                self.ratio
            )));
        }
        Ok(())
    }
}

/// Uniform integer in `[0, n)` by rejection on `next_u64`.
pub fn uniform_below(rng: &mut impl RngCore, n: u64) -> u64 {
    assert!(n > 0);
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % n;
        }
    }
}

/// Shuffles the first `k` slots of `items` into a uniform random prefix.
pub fn shuffle_prefix<T>(items: &mut [T], k: usize, rng: &mut impl RngCore) {
    let n = items.len();
    for i in 0..k.min(n) {
        let j = i + uniform_below(rng, (n - i) as u64) as usize;
        items.swap(i, j);
    }
}

/// Reference grid image: pixels whose coordinates are both multiples of `phi`,
/// after trimming to a multiple of `phi`.
pub fn reference_grid(filtered: &Image, phi: usize) -> Result<Image> {
    let (rw, rh) = (filtered.width() / phi, filtered.height() / phi);
    if rw == 0 || rh == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} image is smaller than phi = {phi}",
            filtered.width(),
            filtered.height()
        )));
    }
    Ok(Image::from_fn(rw, rh, |i, j| {
        filtered.get(i * phi, j * phi)
    }))
}

/// Number of candidate mesh positions for a `width` x `height` filtered image.
pub fn candidate_count(width: usize, height: usize, phi: usize) -> usize {
    let (w, h) = ((width / phi) * phi, (height / phi) * phi);
    w * h - (w / phi) * (h / phi)
}

/// Simulates a floating mesh and its reference grid image.
pub fn simulate_mesh(filtered: &Image, cfg: &SimConfig) -> Result<(MeshSamples, Image)> {
    cfg.validate()?;
    let phi = cfg.phi;
    let reference = reference_grid(filtered, phi)?;
    let (rw, rh) = (reference.width(), reference.height());
    let (w, h) = (rw * phi, rh * phi);

    let mut pool: Vec<(u32, u32)> = Vec::with_capacity(candidate_count(w, h, phi));
    for n in 0..h {
        for m in 0..w {
            if m % phi != 0 || n % phi != 0 {
                pool.push((m as u32, n as u32));
            }
        }
    }
    let count = (cfg.ratio * (rw * rh) as f64).round() as usize;
    if count > pool.len() {
        return Err(Error::InvalidParameter(format!(
            "{count} samples requested but only {} candidates",
            pool.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    shuffle_prefix(&mut pool, count, &mut rng);
    let scale = phi as f64;
    let samples = pool[..count]
        .iter()
        .map(|&(m, n)| {
            Sample::new(
                m as f64 / scale,
                n as f64 / scale,
                clamp_unit(filtered.get(m as usize, n as usize)),
            )
        })
        .collect();
    let (mesh, _) = MeshSamples::new(samples, rw, rh)?;
    Ok((mesh, reference))
}
