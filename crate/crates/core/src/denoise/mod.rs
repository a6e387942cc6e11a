//! Strength map, pluggable denoisers and per-pixel-strength refinement.
//!
//! Noise powers (`sigma2`) are expressed in 8-bit intensity units squared,
//! so `sigma2_max = 40` means a standard deviation of about 6.3 codes.
//! Denoisers convert to normalized units internally.

mod dct;

use rayon::prelude::*;

pub use dct::DctDenoiser;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::reliability::ReliabilityMap;

/// Default upper bound on the denoising strength.
pub const SIGMA2_MAX: f64 = 40.0;
/// Default number of quantized strength levels (0, 5, ..., 40).
pub const DEFAULT_LEVELS: usize = 9;

/// A denoiser parameterized by noise power.
///
/// `sigma2 == 0` must return the input unchanged.
pub trait Denoiser: Send + Sync {
    fn name(&self) -> &'static str;
    fn denoise(&self, img: &Image, sigma2: f64) -> Result<Image>;
}

pub const DENOISERS: &[&str] = &["dct"];

/// Looks up a denoiser by name.
pub fn denoiser_by_name(name: &str) -> Result<Box<dyn Denoiser>> {
    match name.to_ascii_lowercase().as_str() {
        "dct" => Ok(Box::new(DctDenoiser::default())),
        _ => Err(Error::UnknownDenoiser {
            name: name.to_string(),
            available: DENOISERS.join(", "),
        }),
    }
}

pub(crate) fn check_sigma2(sigma2: f64) -> Result<()> {
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise power {sigma2} must be finite and non-negative"
        )));
    }
    Ok(())
}

/// Runs the reference DCT denoiser.
pub fn denoise_at_sigma(img: &Image, sigma2: f64) -> Result<Image> {
    DctDenoiser::default().denoise(img, sigma2)
}

/// Parameters of the clipped-exponential strength mapping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub sigma2_max: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        let p = ModelParams {
            alpha,
            beta,
            lambda,
            sigma2_max: SIGMA2_MAX,
        };
        p.validate()?;
        Ok(p)
    }

    /// `alpha = 0` is accepted and disables refinement.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha, self.beta, self.lambda, self.sigma2_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite model parameter".into()));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha {} must be non-negative",
                self.alpha
            )));
        }
        if self.sigma2_max <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma2_max {} must be positive",
                self.sigma2_max
            )));
        }
        crate::reliability::check_lambda(self.lambda)
    }

    /// Denoising strength for reliability `r`.
    #[inline]
    pub fn strength(&self, r: f64) -> f64 {
        strength(self.alpha, self.beta, r, self.sigma2_max)
    }
}

/// `clamp(alpha * exp(beta * r), 0, sigma2_max)`.
#[inline]
pub fn strength(alpha: f64, beta: f64, r: f64, sigma2_max: f64) -> f64 {
    (alpha * (beta * r).exp()).min(sigma2_max).max(0.0)
}

/// Per-pixel denoising strength in `[0, sigma2_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrengthMap {
    width: usize,
    height: usize,
    sigma2_max: f64,
    sigma2: Vec<f64>,
}

impl StrengthMap {
    pub fn new(width: usize, height: usize, sigma2_max: f64, sigma2: Vec<f64>) -> Result<Self> {
        if sigma2.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} strength map needs {} values, got {}",
                width * height,
                sigma2.len()
            )));
        }
        if !(sigma2_max > 0.0 && sigma2_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma2_max {sigma2_max} must be positive"
            )));
        }
        if let Some(v) = sigma2.iter().find(|v| !(0.0..=sigma2_max).contains(*v)) {
            return Err(Error::Validation(format!(
                "strength {v} outside [0, {sigma2_max}]"
            )));
        }
        Ok(StrengthMap {
            width,
            height,
            sigma2_max,
            sigma2,
        })
    }

    pub fn constant(width: usize, height: usize, sigma2_max: f64, value: f64) -> Result<Self> {
        StrengthMap::new(width, height, sigma2_max, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn sigma2_max(&self) -> f64 {
        self.sigma2_max
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    /// Index of the nearest of `levels` uniform levels over `[0, sigma2_max]`.
    pub fn quantize(&self, sigma2: f64, levels: usize) -> usize {
        let step = self.sigma2_max / (levels - 1) as f64;
        ((sigma2 / step).round() as usize).min(levels - 1)
    }

    pub fn level_value(&self, level: usize, levels: usize) -> f64 {
        level as f64 * self.sigma2_max / (levels - 1) as f64
    }
}

/// Maps a reliability map to denoising strengths.
pub fn strength_map(r: &ReliabilityMap, p: &ModelParams) -> Result<StrengthMap> {
    p.validate()?;
    if (r.lambda() - p.lambda).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "reliability computed at lambda {} but parameters trained for lambda {}",
            r.lambda(),
            p.lambda
        )));
    }
    let sigma2 = r.r().iter().map(|&v| p.strength(v)).collect();
    StrengthMap::new(r.width(), r.height(), p.sigma2_max, sigma2)
}

/// Applies a per-pixel denoising strength.
///
/// Strengths are quantized to `levels` uniform levels over
/// `[0, sigma2_max]`; the whole image is denoised once per non-zero level
/// present and each pixel takes its value from its level's image. Pixels
/// at level 0 are copied from `init`.
pub fn refine(
    init: &Image,
    s: &StrengthMap,
    levels: usize,
    denoiser: &dyn Denoiser,
) -> Result<Image> {
    if levels < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 strength levels, got {levels}"
        )));
    }
    if init.width() != s.width() || init.height() != s.height() {
        return Err(Error::DimensionMismatch(format!(
            "image {}x{} vs strength map {}x{}",
            init.width(),
            init.height(),
            s.width(),
            s.height()
        )));
    }
    let assignment: Vec<usize> = s.sigma2().iter().map(|&v| s.quantize(v, levels)).collect();
    let mut present = vec![false; levels];
    for &l in &assignment {
        present[l] = true;
    }
    let active: Vec<usize> = (1..levels).filter(|&l| present[l]).collect();
    let passes: Vec<Image> = active
        .par_iter()
        .map(|&l| denoiser.denoise(init, s.level_value(l, levels)))
        .collect::<Result<_>>()?;
    let mut by_level: Vec<Option<&Image>> = vec![None; levels];
    for (&l, img) in active.iter().zip(&passes) {
        by_level[l] = Some(img);
    }
    let data = assignment
        .iter()
        .enumerate()
        .map(|(i, &l)| match by_level[l] {
            Some(img) => img.data()[i],
            None => init.data()[i],
        })
        .collect();
    Image::new(init.width(), init.height(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin() -> ModelParams {
        ModelParams::new(214.0, -4.3, 0.6).unwrap()
    }

    #[test]
    fn strength_examples() {
        let p = lin();
        assert_eq!(p.strength(0.0), 40.0);
        let oracle = 214.0 * (-2.58f64).exp();
        assert!((p.strength(0.6) - oracle).abs() < 1e-12);
        assert!((p.strength(0.6) - 16.21).abs() < 1e-2);
        assert!((p.strength(1.0) - 2.904).abs() < 1e-3);
    }

    #[test]
    fn strength_antitone_for_negative_beta() {
        let p = lin();
        let mut prev = f64::INFINITY;
        for k in 0..=300 {
            let s = p.strength(k as f64 / 100.0);
            assert!(s <= prev);
            prev = s;
        }
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(-1.0, -4.0, 0.5).is_err());
        assert!(ModelParams::new(100.0, -4.0, 1.5).is_err());
        assert!(ModelParams::new(0.0, -4.0, 0.5).is_ok());
    }

    #[test]
    fn denoise_zero_is_identity_and_negative_rejected() {
        let img = Image::from_fn(12, 9, |x, y| ((x * 31 + y * 17) % 13) as f64 / 12.0);
        assert_eq!(denoise_at_sigma(&img, 0.0).unwrap(), img);
        assert!(denoise_at_sigma(&img, -1.0).is_err());
    }

    #[test]
    fn denoise_keeps_constants() {
        let img = Image::constant(20, 11, 0.3);
        for s in [1.0, 25.0, 40.0, 1000.0] {
            assert_eq!(denoise_at_sigma(&img, s).unwrap(), img);
        }
    }

    #[test]
    fn unknown_denoiser_lists_available() {
        let err = denoiser_by_name("wiener").err().unwrap();
        assert!(err.to_string().contains("dct"));
        assert_eq!(denoiser_by_name("DCT").unwrap().name(), "dct");
    }

    #[test]
    fn quantization() {
        let s = StrengthMap::constant(1, 1, 40.0, 0.0).unwrap();
        assert_eq!(s.quantize(0.0, 9), 0);
        assert_eq!(s.quantize(2.4, 9), 0);
        assert_eq!(s.quantize(2.6, 9), 1);
        assert_eq!(s.quantize(40.0, 9), 8);
        assert_eq!(s.level_value(8, 9), 40.0);
    }

    #[test]
    fn refine_edges() {
        let init = Image::from_fn(16, 16, |x, y| ((x * 7 + y * 5) % 9) as f64 / 8.0);
        let d = DctDenoiser::default();
        let zero = StrengthMap::constant(16, 16, 40.0, 0.0).unwrap();
        assert_eq!(refine(&init, &zero, 9, &d).unwrap(), init);
        let full = StrengthMap::constant(16, 16, 40.0, 40.0).unwrap();
        assert_eq!(
            refine(&init, &full, 9, &d).unwrap(),
            d.denoise(&init, 40.0).unwrap()
        );
        assert!(refine(&init, &full, 1, &d).is_err());
        let wrong = StrengthMap::constant(15, 16, 40.0, 0.0).unwrap();
        assert!(refine(&init, &wrong, 9, &d).is_err());
    }
}
