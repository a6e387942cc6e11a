//! Delaunay triangulation of mesh positions.
//!
//! Construction is incremental Bowyer-Watson over a triangulation that
//! carries "ghost" triangles: every hull edge is closed off by a triangle
//! whose third vertex is a symbolic point at infinity. A ghost is in
//! conflict with a new point when the point lies strictly outside its hull
//! edge (or on the open edge itself), so points outside the current hull
//! need no special casing and no super-triangle is required.
//!
//! Points are inserted in input order; the result is deterministic for a
//! fixed input. Predicates use an absolute tolerance of [`EPS`] on
//! determinants of coordinates translated to the query point.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Absolute tolerance on orientation and in-circle determinants.
pub const EPS: f64 = 1e-12;

const INF: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

pub type TriangleId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside(TriangleId),
    OutsideHull,
}

/// Twice the signed area of `(a, b, c)`; positive when counter-clockwise.
#[inline]
pub fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    // translated to c
    let (ax, ay) = (a[0] - c[0], a[1] - c[1]);
    let (bx, by) = (b[0] - c[0], b[1] - c[1]);
    ax * by - ay * bx
}

/// Positive when `p` lies inside the circumcircle of the counter-clockwise
/// triangle `(a, b, c)`.
#[inline]
pub fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], p: [f64; 2]) -> f64 {
    let (adx, ady) = (a[0] - p[0], a[1] - p[1]);
    let (bdx, bdy) = (b[0] - p[0], b[1] - p[1]);
    let (cdx, cdy) = (c[0] - p[0], c[1] - p[1]);
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
}

/// An immutable Delaunay triangulation.
///
/// Triangles are counter-clockwise vertex-index triples. `neighbors[t][i]`
/// is the triangle across the edge opposite vertex `i`, or `None` on the hull.
/// Vertex indices match the order of the input positions.
#[derive(Clone, Debug)]
pub struct Triangulation {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    neighbors: Vec<[Option<TriangleId>; 3]>,
}

impl Triangulation {
    /// Builds the Delaunay triangulation of `points`.
    ///
    /// Fails with [`Error::DegenerateInput`] for fewer than three points or
    /// when all points are collinear.
    pub fn build(points: &[[f64; 2]]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "{} points, need at least 3",
                points.len()
            )));
        }
        if points.len() >= INF as usize {
            return Err(Error::InvalidParameter("too many points".into()));
        }
        let mut b = Builder::new(points.to_vec())?;
        for i in 0..points.len() {
            if !b.seeded(i) {
                b.insert(i as u32);
            }
        }
        Ok(b.finish())
    }

    /// Triangulates the positions of a mesh, preserving sample order.
    pub fn from_mesh(mesh: &crate::mesh::MeshSamples) -> Result<Self> {
        let pts: Vec<[f64; 2]> = mesh.samples().iter().map(|s| [s.x, s.y]).collect();
        Triangulation::build(&pts)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self) -> &[[Option<TriangleId>; 3]] {
        &self.neighbors
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn corners(&self, t: TriangleId) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Number of hull edges (equal to the number of hull vertices).
    pub fn hull_edge_count(&self) -> usize {
        self.neighbors
            .iter()
            .flat_map(|n| n.iter())
            .filter(|n| n.is_none())
            .count()
    }

    /// Locates `p`, starting the walk at triangle 0.
    pub fn locate(&self, p: [f64; 2]) -> Location {
        self.locate_from(p, 0)
    }

    /// Visibility walk from `start`. Points on a shared edge belong to the
    /// first triangle the walk reaches.
    pub fn locate_from(&self, p: [f64; 2], start: TriangleId) -> Location {
        if self.triangles.is_empty() {
            return Location::OutsideHull;
        }
        let mut t = start.min(self.triangles.len() - 1);
        let max_steps = 4 * self.triangles.len() + 16;
        for step in 0..max_steps {
            let tri = self.triangles[t];
            let mut next = None;
            for k in 0..3 {
                let i = (k + step) % 3;
                let u = self.vertices[tri[(i + 1) % 3]];
                let v = self.vertices[tri[(i + 2) % 3]];
                if orient(u, v, p) < -EPS {
                    next = Some(self.neighbors[t][i]);
                    break;
                }
            }
            match next {
                None => return Location::Inside(t),
                Some(None) => return Location::OutsideHull,
                Some(Some(n)) => t = n,
            }
        }
        self.locate_scan(p)
    }

    // fallback for walks that fail to terminate on near-degenerate input
    fn locate_scan(&self, p: [f64; 2]) -> Location {
        (0..self.triangles.len())
            .find(|&t| {
                let [a, b, c] = self.corners(t);
                orient(a, b, p) >= -EPS && orient(b, c, p) >= -EPS && orient(c, a, p) >= -EPS
            })
            .map_or(Location::OutsideHull, Location::Inside)
    }

    /// Locates every pixel of a `width` x `height` grid, row-parallel.
    /// Each row walks from triangle 0, so the result is independent of
    /// thread scheduling.
    pub fn locate_grid(&self, width: usize, height: usize) -> Vec<Option<TriangleId>> {
        let mut out = vec![None; width * height];
        out.par_chunks_mut(width.max(1))
            .enumerate()
            .for_each(|(y, row)| {
                let mut hint = 0;
                for (x, slot) in row.iter_mut().enumerate() {
                    if let Location::Inside(t) = self.locate_from([x as f64, y as f64], hint) {
                        *slot = Some(t);
                        hint = t;
                    }
                }
            });
        out
    }

    /// Barycentric weights of `p` with respect to the corners of `t`.
    pub fn barycentric(&self, t: TriangleId, p: [f64; 2]) -> Result<[f64; 3]> {
        let [a, b, c] = self.corners(t);
        let area = orient(a, b, c);
        if area.abs() <= EPS {
            return Err(Error::DegenerateInput(format!(
                "triangle {t} has zero area"
            )));
        }
        let w1 = orient(b, c, p) / area;
        let w2 = orient(c, a, p) / area;
        Ok([w1, w2, 1.0 - w1 - w2])
    }
}

struct Builder {
    pts: Vec<[f64; 2]>,
    tri: Vec<[u32; 3]>,
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    mark: Vec<u32>,
    stamp: u32,
    last: u32,
    seed: [usize; 3],
}

impl Builder {
    fn new(pts: Vec<[f64; 2]>) -> Result<Self> {
        let i2 = (2..pts.len())
            .find(|&k| orient(pts[0], pts[1], pts[k]).abs() > EPS)
            .ok_or_else(|| Error::DegenerateInput("all points are collinear".into()))?;
        let (a, mut b, mut c) = (0u32, 1u32, i2 as u32);
        if orient(pts[0], pts[1], pts[i2]) < 0.0 {
            std::mem::swap(&mut b, &mut c);
        }
        let mut builder = Builder {
            pts,
            tri: Vec::new(),
            nbr: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            mark: Vec::new(),
            stamp: 0,
            last: 0,
            seed: [0, 1, i2],
        };
        let t0 = builder.alloc([a, b, c]);
        let ga = builder.alloc([c, b, INF]);
        let gb = builder.alloc([a, c, INF]);
        let gc = builder.alloc([b, a, INF]);
        builder.nbr[t0 as usize] = [ga, gb, gc];
        builder.nbr[ga as usize] = [gc, gb, t0];
        builder.nbr[gb as usize] = [ga, gc, t0];
        builder.nbr[gc as usize] = [gb, ga, t0];
        builder.last = t0;
        Ok(builder)
    }

    fn seeded(&self, i: usize) -> bool {
        self.seed.contains(&i)
    }

    fn alloc(&mut self, v: [u32; 3]) -> u32 {
        if let Some(t) = self.free.pop() {
            let i = t as usize;
            self.tri[i] = v;
            self.nbr[i] = [NONE; 3];
            self.alive[i] = true;
            t
        } else {
            self.tri.push(v);
            self.nbr.push([NONE; 3]);
            self.alive.push(true);
            self.mark.push(0);
            (self.tri.len() - 1) as u32
        }
    }

    #[inline]
    fn is_ghost(&self, t: u32) -> bool {
        self.tri[t as usize].contains(&INF)
    }

    fn conflict(&self, t: u32, p: [f64; 2]) -> bool {
        let v = self.tri[t as usize];
        match v.iter().position(|&x| x == INF) {
            None => {
                let [a, b, c] = v.map(|i| self.pts[i as usize]);
                incircle(a, b, c, p) > EPS
            }
            Some(k) => {
                let u = self.pts[v[(k + 1) % 3] as usize];
                let w = self.pts[v[(k + 2) % 3] as usize];
                let o = orient(u, w, p);
                if o > EPS {
                    return true;
                }
                if o < -EPS {
                    return false;
                }
                // on the hull edge's line: conflict only on the open segment
                let d1 = (p[0] - u[0]) * (w[0] - u[0]) + (p[1] - u[1]) * (w[1] - u[1]);
                let d2 = (p[0] - w[0]) * (u[0] - w[0]) + (p[1] - w[1]) * (u[1] - w[1]);
                d1 > 0.0 && d2 > 0.0
            }
        }
    }

    fn walk(&self, p: [f64; 2]) -> u32 {
        let mut t = self.last;
        if self.is_ghost(t) {
            let k = self.tri[t as usize].iter().position(|&x| x == INF).unwrap();
            t = self.nbr[t as usize][k];
        }
        let max_steps = 4 * self.tri.len() + 16;
        for step in 0..max_steps {
            let tri = self.tri[t as usize];
            let mut next = None;
            for k in 0..3 {
                let i = (k + step) % 3;
                let u = self.pts[tri[(i + 1) % 3] as usize];
                let v = self.pts[tri[(i + 2) % 3] as usize];
                if orient(u, v, p) < 0.0 {
                    next = Some(self.nbr[t as usize][i]);
                    break;
                }
            }
            match next {
                None => return t,
                Some(n) if self.is_ghost(n) => return n,
                Some(n) => t = n,
            }
        }
        t
    }

    fn insert(&mut self, pi: u32) {
        let p = self.pts[pi as usize];
        let mut seed = self.walk(p);
        if !self.conflict(seed, p) {
            match (0..self.tri.len() as u32)
                .find(|&t| self.alive[t as usize] && self.conflict(t, p))
            {
                Some(t) => seed = t,
                // coincides with an existing vertex within tolerance
                None => return,
            }
        }

        self.stamp += 1;
        let stamp = self.stamp;
        let mut cavity = vec![seed];
        self.mark[seed as usize] = stamp;
        let mut head = 0;
        while head < cavity.len() {
            let t = cavity[head];
            head += 1;
            for n in self.nbr[t as usize] {
                if self.mark[n as usize] != stamp && self.conflict(n, p) {
                    self.mark[n as usize] = stamp;
                    cavity.push(n);
                }
            }
        }

        // Cavity boundary as (u, v, outside). Every real boundary edge must
        // see p strictly on its inner side; otherwise grow the cavity.
        let boundary = loop {
            let mut boundary = Vec::with_capacity(cavity.len() + 2);
            let mut grow = None;
            'scan: for &t in &cavity {
                let v = self.tri[t as usize];
                for i in 0..3 {
                    let n = self.nbr[t as usize][i];
                    if self.mark[n as usize] == stamp {
                        continue;
                    }
                    let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                    if a != INF
                        && b != INF
                        && orient(self.pts[a as usize], self.pts[b as usize], p) <= EPS
                    {
                        grow = Some(n);
                        break 'scan;
                    }
                    boundary.push((a, b, n));
                }
            }
            match grow {
                Some(n) => {
                    self.mark[n as usize] = stamp;
                    cavity.push(n);
                }
                None => break boundary,
            }
        };

        for &t in &cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        // reuse slots in a fixed order
        self.free.sort_unstable_by(|a, b| b.cmp(a));

        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, outside) in &boundary {
            let t = self.alloc([a, b, pi]);
            self.nbr[t as usize][2] = outside;
            let on = self.tri[outside as usize];
            let slot = (0..3)
                .find(|&j| on[(j + 1) % 3] == b && on[(j + 2) % 3] == a)
                .expect("outside neighbour shares the boundary edge");
            self.nbr[outside as usize][slot] = t;
            created.push((a, b, t));
        }
        for &(_, b, t) in &created {
            // across (b, p): the new triangle that starts at b
            let next = created.iter().find(|c| c.0 == b).expect("closed cavity").2;
            self.nbr[t as usize][0] = next;
            self.nbr[next as usize][1] = t;
        }
        self.last = created
            .iter()
            .map(|c| c.2)
            .find(|&t| !self.is_ghost(t))
            .unwrap_or(created[0].2);
    }

    fn finish(self) -> Triangulation {
        let mut remap = vec![NONE; self.tri.len()];
        let mut triangles = Vec::new();
        for (t, v) in self.tri.iter().enumerate() {
            if self.alive[t] && !v.contains(&INF) {
                remap[t] = triangles.len() as u32;
                triangles.push(v.map(|i| i as usize));
            }
        }
        let neighbors = (0..self.tri.len())
            .filter(|&t| remap[t] != NONE)
            .map(|t| {
                self.nbr[t].map(|n| match remap[n as usize] {
                    NONE => None,
                    r => Some(r as usize),
                })
            })
            .collect();
        Triangulation {
            vertices: self.pts,
            triangles,
            neighbors,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: [f64; 3], b: [f64; 3]) {
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn single_triangle() {
        let t = Triangulation::build(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(t.len(), 1);
        let [a, b, c] = t.corners(0);
        assert!(orient(a, b, c) > 0.0);
        assert_eq!(t.neighbors()[0], [None, None, None]);
    }

    #[test]
    fn unit_square_two_triangles() {
        let t = Triangulation::build(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(t.len(), 2);
        let shared: Vec<usize> = t.triangles()[0]
            .iter()
            .copied()
            .filter(|v| t.triangles()[1].contains(v))
            .collect();
        assert_eq!(shared.len(), 2);
        assert_eq!(t.hull_edge_count(), 4);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            Triangulation::build(&[[0.0, 0.0], [1.0, 1.0]]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            Triangulation::build(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.5, 3.5]]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn collinear_prefix_then_offset_point() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [1.5, 1.0]];
        let t = Triangulation::build(&pts).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.hull_edge_count(), 5);
    }

    #[test]
    fn barycentric_examples() {
        let t = Triangulation::build(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        let [a, b, c] = t.corners(0);
        let w = t.barycentric(0, a).unwrap();
        assert_close(w, [1.0, 0.0, 0.0]);
        let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
        assert_close(t.barycentric(0, centroid).unwrap(), [1.0 / 3.0; 3]);
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        assert_close(t.barycentric(0, mid).unwrap(), [0.5, 0.5, 0.0]);
    }

    #[test]
    fn locate_centroid_and_outside() {
        let pts = [[0.0, 0.0], [4.0, 0.0], [4.0, 3.0], [0.0, 3.0], [2.0, 1.3]];
        let t = Triangulation::build(&pts).unwrap();
        for id in 0..t.len() {
            let [a, b, c] = t.corners(id);
            let g = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
            assert_eq!(t.locate(g), Location::Inside(id));
        }
        assert_eq!(t.locate([10.0, -5.0]), Location::OutsideHull);
        assert_eq!(t.locate([-0.5, 1.0]), Location::OutsideHull);
    }
}
