//! Grayscale images on the regular pixel grid, binary graymap I/O and PSNR.
//!
//! Intensities are stored normalized to `[0, 1]`. Pixel `(x, y)` sits at the
//! real position `(x, y)`: `x` runs along columns, `y` along rows, origin at
//! the top-left pixel.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Dense row-major grayscale image with intensities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    /// Builds an image, rejecting a wrong data length or any intensity outside `[0, 1]`.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_len(width, height, data.len())?;
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Validation(format!("intensity {v} outside [0, 1]")));
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    /// Builds an image, clamping every value into `[0, 1]` (NaN maps to 0).
    pub fn from_clamped(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        check_len(width, height, data.len())?;
        for v in &mut data {
            *v = clamp_unit(*v);
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Image {
            width,
            height,
            data: vec![clamp_unit(value); width * height],
        }
    }

    /// Evaluates `f(x, y)` at every pixel and clamps the result.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(clamp_unit(f(x, y)));
            }
        }
        Image {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Copies the top-left `width` x `height` window.
    pub fn crop(&self, width: usize, height: usize) -> Result<Image> {
        if width > self.width || height > self.height {
            return Err(Error::DimensionMismatch(format!(
                "crop {width}x{height} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            let row = y * self.width;
            data.extend_from_slice(&self.data[row..row + width]);
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    /// Decodes an 8-bit binary graymap (`P5`, maxval 255).
    pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
        let mut cur = HeaderCursor { bytes, pos: 0 };
        if bytes.len() < 2 || &bytes[..2] != b"P5" {
            return Err(Error::Format("missing P5 magic number".into()));
        }
        cur.pos = 2;
        let width = cur.next_uint()?;
        let height = cur.next_uint()?;
        let maxval = cur.next_uint()?;
        if maxval != 255 {
            return Err(Error::Format(format!(
                "unsupported maxval {maxval}, expected 255"
            )));
        }
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(Error::Format("missing whitespace after maxval".into())),
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
        let payload = &bytes[cur.pos..];
        if payload.len() < count {
            return Err(Error::Format(format!(
                "truncated payload: expected {count} bytes, found {}",
                payload.len()
            )));
        }
        let data = payload[..count]
            .iter()
            .map(|&b| f64::from(b) / 255.0)
            .collect();
        Ok(Image {
            width,
            height,
            data,
        })
    }

    /// Encodes as a binary graymap; each intensity is clamped, then mapped
    /// to `round(v * 255)` with halves rounded up.
    pub fn encode_pgm(&self) -> Vec<u8> {
        let header = format!("P5\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + self.data.len());
        out.extend_from_slice(header.as_bytes());
        out.extend(self.data.iter().map(|&v| to_code(v)));
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Image> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Image::decode_pgm(&bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.encode_pgm())
            .map_err(|e| Error::io(path, e))
    }
}

/// Maps an intensity to its 8-bit code.
#[inline]
pub fn to_code(v: f64) -> u8 {
    (clamp_unit(v) * 255.0 + 0.5).floor() as u8
}

/// Half-sample symmetric index into `[0, n)`.
#[inline]
pub fn mirror_index(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let mut m = i.rem_euclid(period);
    if m >= n {
        m = period - 1 - m;
    }
    m as usize
}

#[inline]
pub(crate) fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

fn check_len(width: usize, height: usize, len: usize) -> Result<()> {
    if width.checked_mul(height) != Some(len) {
        return Err(Error::DimensionMismatch(format!(
            "{width}x{height} image needs {} values, got {len}",
            width.saturating_mul(height)
        )));
    }
    Ok(())
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        loop {
            while self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_whitespace())
            {
                self.pos += 1;
            }
            if self.bytes.get(self.pos) == Some(&b'#') {
                while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn next_uint(&mut self) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format("malformed or truncated header".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("header value out of range".into()))
    }
}

/// Peak signal-to-noise ratio in dB for intensities in `[0, 1]`.
///
/// Identical images report `f64::INFINITY`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch(format!(
            "psnr of {}x{} and {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    if a.is_empty() {
        return Err(Error::DimensionMismatch("psnr of empty images".into()));
    }
    let sse: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / a.len() as f64;
    Ok(-10.0 * mse.log10())
}
