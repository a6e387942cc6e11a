mod common;

use std::collections::HashSet;

use common::*;
use rand_chacha::rand_core::RngCore;
use rmg::triangulation::orient;
use rmg::{Location, Triangulation};

fn check_structure(t: &Triangulation) {
    for (id, tri) in t.triangles().iter().enumerate() {
        let [a, b, c] = t.corners(id);
        assert!(orient(a, b, c) > 0.0, "triangle {id} {tri:?} not ccw");
        for (i, n) in t.neighbors()[id].iter().enumerate() {
            if let Some(n) = *n {
                assert!(
                    t.neighbors()[n].contains(&Some(id)),
                    "adjacency not symmetric between {id} and {n}"
                );
                let u = tri[(i + 1) % 3];
                let v = tri[(i + 2) % 3];
                assert!(t.triangles()[n].contains(&u) && t.triangles()[n].contains(&v));
            }
        }
    }
    let used: HashSet<usize> = t.triangles().iter().flatten().copied().collect();
    assert_eq!(
        used.len(),
        t.vertices().len(),
        "some vertex not triangulated"
    );
}

#[test]
fn random_sets_pass_brute_force_oracle() {
    for seed in 0..200 {
        let n = 3 + (seed as usize % 28);
        let pts = random_points(seed, n, 10.0, 7.0);
        let t = Triangulation::build(&pts).unwrap();
        check_structure(&t);
        assert_eq!(incircle_violations(&t, 1e-9), 0, "seed {seed}");
        assert!(euler_holds(&t), "seed {seed}");
        let (ha, ta) = (hull_area(&pts), triangulated_area(&t));
        assert!((ha - ta).abs() <= 1e-9 * ha, "seed {seed}: {ha} vs {ta}");
    }
}

#[test]
fn lattice_subsets_with_cocircular_points() {
    // positions on a 1/5 lattice are massively cocircular
    for seed in 0..60 {
        let mut r = rng(1000 + seed);
        let mut set = HashSet::new();
        let mut pts = Vec::new();
        let count = 10 + (seed as usize * 7) % 200;
        while pts.len() < count {
            let m = (r.next_u64() % 40) as i64;
            let n = (r.next_u64() % 30) as i64;
            if set.insert((m, n)) {
                pts.push([m as f64 / 5.0, n as f64 / 5.0]);
            }
        }
        let t = match Triangulation::build(&pts) {
            Ok(t) => t,
            Err(_) => continue,
        };
        check_structure(&t);
        assert_eq!(incircle_violations(&t, 1e-9), 0, "seed {seed}");
        assert!(euler_holds(&t), "seed {seed}");
        let (ha, ta) = (hull_area(&pts), triangulated_area(&t));
        assert!((ha - ta).abs() <= 1e-9 * ha, "seed {seed}: {ha} vs {ta}");
    }
}

#[test]
fn full_grid_lattice() {
    let mut pts = Vec::new();
    for y in 0..12 {
        for x in 0..15 {
            pts.push([x as f64 * 0.2, y as f64 * 0.2]);
        }
    }
    let t = Triangulation::build(&pts).unwrap();
    check_structure(&t);
    assert_eq!(incircle_violations(&t, 1e-9), 0);
    assert_eq!(t.len(), 2 * 14 * 11);
    assert!(euler_holds(&t));
}

#[test]
fn deterministic_for_fixed_order() {
    let pts = random_points(7, 500, 50.0, 50.0);
    let a = Triangulation::build(&pts).unwrap();
    let b = Triangulation::build(&pts).unwrap();
    assert_eq!(a.triangles(), b.triangles());
    assert_eq!(a.neighbors(), b.neighbors());
}

#[test]
fn locate_agrees_with_exhaustive_scan() {
    let pts = random_points(42, 50, 20.0, 20.0);
    let t = Triangulation::build(&pts).unwrap();
    let grid = t.locate_grid(21, 21);
    for y in 0..21 {
        for x in 0..21 {
            let p = [x as f64, y as f64];
            let hits: Vec<usize> = (0..t.len())
                .filter(|&id| contains(&t, id, p, 1e-12))
                .collect();
            match (t.locate(p), grid[y * 21 + x]) {
                (Location::Inside(id), Some(g)) => {
                    assert!(
                        hits.contains(&id),
                        "({x},{y}) located in {id}, scan {hits:?}"
                    );
                    assert!(hits.contains(&g));
                    if hits.len() == 1 {
                        assert_eq!(hits[0], id);
                    }
                }
                (Location::OutsideHull, None) => assert!(hits.is_empty(), "({x},{y})"),
                other => panic!("({x},{y}) inconsistent: {other:?}"),
            }
        }
    }
}

#[test]
fn larger_random_mesh() {
    let pts = random_points(3, 20_000, 300.0, 200.0);
    let t = Triangulation::build(&pts).unwrap();
    check_structure(&t);
    assert!(euler_holds(&t));
    let (ha, ta) = (hull_area(&pts), triangulated_area(&t));
    assert!((ha - ta).abs() <= 1e-9 * ha);
}
