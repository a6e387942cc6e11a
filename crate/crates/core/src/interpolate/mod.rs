//! Initial estimate of the grid image from mesh samples.

pub mod mbs;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use mbs::Mba;

use crate::error::{Error, Result};
use crate::image::{clamp_unit, Image};
use crate::mesh::MeshSamples;
use crate::prepared::PreparedMesh;
use crate::triangulation::Triangulation;

/// Neighbours used by inverse distance weighting.
pub const IDW_NEIGHBORS: usize = 8;
/// Distances below this copy the nearest sample in inverse distance weighting.
pub const IDW_SNAP: f64 = 1e-9;

/// Initial reconstruction method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Barycentric blend inside the enclosing Delaunay triangle.
    Lin,
    /// Nearest sample.
    Nnb,
    /// Inverse squared-distance weighting of the nearest samples.
    Idw,
    /// Multilevel B-spline approximation.
    Mbs,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Lin, Method::Nnb, Method::Idw, Method::Mbs];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lin => "LIN",
            Method::Nnb => "NNB",
            Method::Idw => "IDW",
            Method::Mbs => "MBS",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LIN" => Ok(Method::Lin),
            "NNB" => Ok(Method::Nnb),
            "IDW" => Ok(Method::Idw),
            "MBS" | "BSR" => Ok(Method::Mbs),
            _ => Err(Error::InvalidParameter(format!(
                "unknown reconstruction method '{s}' (available: lin, nnb, idw, mbs)"
            ))),
        }
    }
}

/// Result of the initial reconstruction.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub image: Image,
    /// Method actually applied; differs from the request when a degenerate
    /// triangulation forced LIN to fall back to NNB.
    pub method: Method,
    pub fell_back: bool,
}

/// Reconstructs the grid image from a mesh and (optionally) its
/// triangulation. `tri = None` means the triangulation was degenerate.
pub fn reconstruct_initial(
    mesh: &MeshSamples,
    tri: Option<&Triangulation>,
    method: Method,
) -> Result<Reconstruction> {
    if mesh.is_empty() {
        return Err(Error::Validation(
            "cannot reconstruct from an empty mesh".into(),
        ));
    }
    let prepared = PreparedMesh::with_triangulation(mesh.clone(), tri.cloned());
    reconstruct(&prepared, method)
}

pub fn reconstruct(prepared: &PreparedMesh, method: Method) -> Result<Reconstruction> {
    let (w, h) = (prepared.width(), prepared.height());
    let fell_back = method == Method::Lin && prepared.triangulation().is_none();
    let applied = if fell_back { Method::Nnb } else { method };
    let mut data = vec![0.0; w * h];
    if w > 0 {
        match applied {
            Method::Lin => fill_rows(&mut data, w, |x, y| lin_at(prepared, x, y)),
            Method::Nnb => fill_rows(&mut data, w, |x, y| nearest_value(prepared, x, y)),
            Method::Idw => fill_rows(&mut data, w, |x, y| idw_at(prepared, x, y)),
            Method::Mbs => {
                let mba = Mba::fit(prepared.mesh().samples(), w, h);
                fill_rows(&mut data, w, |x, y| mba.eval(x as f64, y as f64));
            }
        }
    }
    Ok(Reconstruction {
        image: Image::from_clamped(w, h, data)?,
        method: applied,
        fell_back,
    })
}

fn fill_rows(data: &mut [f64], width: usize, f: impl Fn(usize, usize) -> f64 + Sync) {
    data.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
        for (x, v) in row.iter_mut().enumerate() {
            *v = clamp_unit(f(x, y));
        }
    });
}

fn nearest_value(prepared: &PreparedMesh, x: usize, y: usize) -> f64 {
    let n = prepared
        .kdtree()
        .nearest([x as f64, y as f64])
        .expect("mesh is non-empty");
    prepared.mesh().samples()[n.index].value
}

fn lin_at(prepared: &PreparedMesh, x: usize, y: usize) -> f64 {
    let (Some(t), Some(tri)) = (prepared.pixel_triangle(x, y), prepared.triangulation()) else {
        return nearest_value(prepared, x, y);
    };
    let w = tri
        .barycentric(t, [x as f64, y as f64])
        .expect("valid triangulation has no zero-area triangle");
    let s = prepared.mesh().samples();
    let [a, b, c] = tri.triangles()[t].map(|i| s[i].value);
    // anchored at the first corner so constant fields come out exact
    a + w[1] * (b - a) + w[2] * (c - a)
}

fn idw_at(prepared: &PreparedMesh, x: usize, y: usize) -> f64 {
    let near = prepared
        .kdtree()
        .k_nearest([x as f64, y as f64], IDW_NEIGHBORS);
    let s = prepared.mesh().samples();
    let anchor = s[near[0].index].value;
    if near[0].dist2.sqrt() < IDW_SNAP {
        return anchor;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for n in &near {
        let w = 1.0 / n.dist2;
        num += w * (s[n.index].value - anchor);
        den += w;
    }
    anchor + num / den
}
