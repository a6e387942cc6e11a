//! Per-pixel effective data, visual flatness and reliability of the
//! initial estimate.
//!
//! Distances are in grid units. Inside the convex hull of the mesh the
//! three vertices of the enclosing Delaunay triangle are used; outside it
//! the three nearest samples stand in for the triangle.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::mesh::{MeshSamples, Sample};
use crate::prepared::PreparedMesh;

/// Sum of `exp(-distance)` from `pixel` to each sample.
pub fn effective_data<'a>(samples: impl IntoIterator<Item = &'a Sample>, pixel: [f64; 2]) -> f64 {
    samples
        .into_iter()
        .map(|s| (-(s.x - pixel[0]).hypot(s.y - pixel[1])).exp())
        .sum()
}

/// One minus the dynamic range of the sample values.
pub fn flatness_of<'a>(samples: impl IntoIterator<Item = &'a Sample>) -> f64 {
    let (lo, hi) = samples
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.value), hi.max(s.value))
        });
    if lo > hi {
        return 1.0;
    }
    1.0 - (hi - lo)
}

/// Effective data restricted to the enclosing triangle of grid pixel `(x, y)`.
pub fn effective_data_triangle(prepared: &PreparedMesh, x: usize, y: usize) -> f64 {
    let s = prepared.mesh().samples();
    let support = prepared.support(x, y).indices();
    effective_data(support.iter().map(|&i| &s[i]), [x as f64, y as f64])
}

/// Effective data over every mesh sample (no cutoff radius).
pub fn effective_data_global(mesh: &MeshSamples, pixel: [f64; 2]) -> f64 {
    effective_data(mesh.samples(), pixel)
}

/// Visual flatness from the enclosing triangle of grid pixel `(x, y)`.
pub fn flatness(prepared: &PreparedMesh, x: usize, y: usize) -> f64 {
    let s = prepared.mesh().samples();
    let support = prepared.support(x, y).indices();
    flatness_of(support.iter().map(|&i| &s[i]))
}

/// Convex combination of effective data and flatness.
#[inline]
pub fn combine(e_triangle: f64, flatness: f64, lambda: f64) -> f64 {
    (1.0 - lambda) * e_triangle + lambda * flatness
}

/// Largest attainable reliability for a given balance parameter.
pub fn max_reliability(lambda: f64) -> f64 {
    3.0 * (1.0 - lambda) + lambda
}

pub fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Effective data, flatness and reliability for every grid pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityMap {
    width: usize,
    height: usize,
    lambda: f64,
    e_triangle: Vec<f64>,
    flatness: Vec<f64>,
    r: Vec<f64>,
}

impl ReliabilityMap {
    pub fn compute(prepared: &PreparedMesh, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let (w, h) = (prepared.width(), prepared.height());
        let mut e_triangle = vec![0.0; w * h];
        let mut flat = vec![0.0; w * h];
        if w > 0 {
            let s = prepared.mesh().samples();
            e_triangle
                .par_chunks_mut(w)
                .zip(flat.par_chunks_mut(w))
                .enumerate()
                .for_each(|(y, (erow, frow))| {
                    for x in 0..w {
                        let support = prepared.support(x, y).indices();
                        let pts = support.iter().map(|&i| &s[i]);
                        erow[x] = effective_data(pts.clone(), [x as f64, y as f64]);
                        frow[x] = flatness_of(pts);
                    }
                });
        }
        Ok(ReliabilityMap::from_parts(w, h, lambda, e_triangle, flat))
    }

    /// Same effective data and flatness, recombined at another `lambda`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(ReliabilityMap::from_parts(
            self.width,
            self.height,
            lambda,
            self.e_triangle.clone(),
            self.flatness.clone(),
        ))
    }

    fn from_parts(
        width: usize,
        height: usize,
        lambda: f64,
        e_triangle: Vec<f64>,
        flatness: Vec<f64>,
    ) -> Self {
        let r = e_triangle
            .iter()
            .zip(&flatness)
            .map(|(&e, &f)| combine(e, f, lambda))
            .collect();
        ReliabilityMap {
            width,
            height,
            lambda,
            e_triangle,
            flatness,
            r,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn e_triangle(&self) -> &[f64] {
        &self.e_triangle
    }

    pub fn flatness(&self) -> &[f64] {
        &self.flatness
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Inspection dump: a text header (`width`, `height`, `lambda`) closed by
    /// `end_header`, then the e_triangle, flatness and r planes as
    /// little-endian 32-bit floats, row-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut header = String::new();
        let _ = writeln!(header, "rmg-reliability");
        let _ = writeln!(header, "width={}", self.width);
        let _ = writeln!(header, "height={}", self.height);
        let _ = writeln!(header, "lambda={}", self.lambda);
        let _ = writeln!(header, "planes=e_triangle,flatness,r");
        let _ = writeln!(header, "end_header");
        let mut out = header.into_bytes();
        for plane in [&self.e_triangle, &self.flatness, &self.r] {
            for &v in plane.iter() {
                out.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&self.to_bytes())
            .map_err(|e| Error::io(path, e))
    }

    /// Affinely rescales the reliability plane onto `[0, 1]` for viewing.
    pub fn render(&self) -> Image {
        render_plane(self.width, self.height, &self.r)
    }
}

pub(crate) fn render_plane(width: usize, height: usize, plane: &[f64]) -> Image {
    let (lo, hi) = plane
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let data = plane
        .iter()
        .map(|&v| if span > 0.0 { (v - lo) / span } else { 0.0 })
        .collect();
    Image::from_clamped(width, height, data).expect("plane matches dimensions")
}

pub fn reliability_map(prepared: &PreparedMesh, lambda: f64) -> Result<ReliabilityMap> {
    ReliabilityMap::compute(prepared, lambda)
}
