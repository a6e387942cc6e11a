#![allow(dead_code)]

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmg::triangulation::{incircle, orient};
use rmg::Triangulation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn random_points(seed: u64, n: usize, w: f64, h: f64) -> Vec<[f64; 2]> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| [unit(&mut r) * w, unit(&mut r) * h])
        .collect()
}

/// Brute-force count of (triangle, vertex) pairs where the vertex lies
/// strictly inside the circumcircle, normalized by edge length^4.
pub fn incircle_violations(t: &Triangulation, tol: f64) -> usize {
    let mut bad = 0;
    for (id, tri) in t.triangles().iter().enumerate() {
        let [a, b, c] = t.corners(id);
        let l = [dist(a, b), dist(b, c), dist(c, a)]
            .into_iter()
            .fold(0.0f64, f64::max);
        let norm = l.powi(4);
        for (v, &p) in t.vertices().iter().enumerate() {
            if tri.contains(&v) {
                continue;
            }
            if incircle(a, b, c, p) / norm > tol {
                bad += 1;
            }
        }
    }
    bad
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Convex hull area via Andrew's monotone chain.
pub fn hull_area(points: &[[f64; 2]]) -> f64 {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (p, q) = (hull[i], hull[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

pub fn triangulated_area(t: &Triangulation) -> f64 {
    (0..t.len())
        .map(|id| {
            let [a, b, c] = t.corners(id);
            orient(a, b, c) / 2.0
        })
        .sum()
}

/// Euler relation for a triangulated convex point set.
pub fn euler_holds(t: &Triangulation) -> bool {
    let hull = t.hull_edge_count();
    t.len() + hull + 2 == 2 * t.vertices().len()
}

pub fn contains(t: &Triangulation, id: usize, p: [f64; 2], tol: f64) -> bool {
    let [a, b, c] = t.corners(id);
    orient(a, b, p) >= -tol && orient(b, c, p) >= -tol && orient(c, a, p) >= -tol
}
