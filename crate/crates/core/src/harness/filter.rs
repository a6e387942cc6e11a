//! Separable windowed-sinc low-pass filter used before mesh simulation.

use std::f64::consts::PI;

use crate::image::{mirror_index, Image};

/// Hamming-windowed sinc taps with cutoff `pi / phi` rad/sample,
/// `4 * phi + 1` taps, normalized to unit DC gain.
pub fn lowpass_taps(phi: usize) -> Vec<f64> {
    let n = 4 * phi + 1;
    let center = (2 * phi) as f64;
    let cutoff = 1.0 / phi as f64;
    let mut taps: Vec<f64> = (0..n)
        .map(|k| {
            let t = k as f64 - center;
            let sinc = if t == 0.0 {
                1.0
            } else {
                (PI * cutoff * t).sin() / (PI * cutoff * t)
            };
            let window = 0.54 + 0.46 * (PI * t / center).cos();
            cutoff * sinc * window
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Magnitude response of `taps` at `freq` cycles/sample.
pub fn magnitude_response(taps: &[f64], freq: f64) -> f64 {
    let (re, im) = taps
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(re, im), (k, &h)| {
            let w = 2.0 * PI * freq * k as f64;
            (re + h * w.cos(), im - h * w.sin())
        });
    re.hypot(im)
}

fn convolve_line(src: &[f64], taps: &[f64], dst: &mut [f64]) {
    let n = src.len();
    let half = (taps.len() / 2) as isize;
    for (i, out) in dst.iter_mut().enumerate() {
        let center = src[i];
        // written as a correction to the centre sample so flat lines stay exact
        let mut acc = 0.0;
        for (k, &h) in taps.iter().enumerate() {
            let j = mirror_index(i as isize + k as isize - half, n);
            acc += h * (src[j] - center);
        }
        *out = center + acc;
    }
}

/// Low-pass filters `img` with cutoff `1 / phi` cycles/sample along both
/// axes, with half-sample symmetric boundary extension.
pub fn antialias(img: &Image, phi: usize) -> Image {
    let (w, h) = (img.width(), img.height());
    if img.is_empty() {
        return img.clone();
    }
    let taps = lowpass_taps(phi.max(1));
    let mut rows = vec![0.0; w * h];
    for y in 0..h {
        convolve_line(
            &img.data()[y * w..(y + 1) * w],
            &taps,
            &mut rows[y * w..(y + 1) * w],
        );
    }
    let mut out = vec![0.0; w * h];
    let mut col = vec![0.0; h];
    let mut res = vec![0.0; h];
    for x in 0..w {
        for y in 0..h {
            col[y] = rows[y * w + x];
        }
        convolve_line(&col, &taps, &mut res);
        for y in 0..h {
            out[y * w + x] = res[y];
        }
    }
    Image::from_clamped(w, h, out).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taps_symmetric_unit_sum() {
        for phi in 2..8 {
            let t = lowpass_taps(phi);
            assert_eq!(t.len(), 4 * phi + 1);
            assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for k in 0..t.len() {
                assert!((t[k] - t[t.len() - 1 - k]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn half_gain_near_cutoff() {
        let t = lowpass_taps(5);
        let g = magnitude_response(&t, 0.1);
        assert!((g - 0.5).abs() < 0.05, "{g}");
    }

    #[test]
    fn constant_preserved() {
        let img = Image::constant(23, 17, 0.37);
        assert_eq!(antialias(&img, 5), img);
    }
}
