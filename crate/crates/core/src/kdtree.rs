//! Static 2-D k-d tree for nearest-neighbour queries over sample positions.
//!
//! Ties in distance resolve to the smaller point index, so every query is
//! deterministic regardless of tree shape.

#[derive(Clone, Debug)]
pub struct KdTree {
    points: Vec<[f64; 2]>,
    // implicit balanced tree: the median of each slice is its root
    order: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub dist2: f64,
}

impl Neighbor {
    #[inline]
    fn before(&self, other: &Neighbor) -> bool {
        self.dist2 < other.dist2 || (self.dist2 == other.dist2 && self.index < other.index)
    }
}

impl KdTree {
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        build(&points, &mut order, 0);
        KdTree { points, order }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, index: usize) -> [f64; 2] {
        self.points[index]
    }

    pub fn nearest(&self, q: [f64; 2]) -> Option<Neighbor> {
        self.k_nearest(q, 1).into_iter().next()
    }

    /// The `k` nearest points ordered by distance, then index.
    pub fn k_nearest(&self, q: [f64; 2], k: usize) -> Vec<Neighbor> {
        let mut best = Vec::with_capacity(k + 1);
        if k > 0 {
            self.search(q, k, 0, self.order.len(), 0, &mut best);
        }
        best
    }

    fn search(
        &self,
        q: [f64; 2],
        k: usize,
        lo: usize,
        hi: usize,
        depth: usize,
        best: &mut Vec<Neighbor>,
    ) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid];
        let p = self.points[idx];
        let dx = q[0] - p[0];
        let dy = q[1] - p[1];
        offer(
            best,
            k,
            Neighbor {
                index: idx,
                dist2: dx * dx + dy * dy,
            },
        );

        let axis = depth % 2;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, k, near.0, near.1, depth + 1, best);
        if best.len() < k || diff * diff <= best[best.len() - 1].dist2 {
            self.search(q, k, far.0, far.1, depth + 1, best);
        }
    }
}

fn offer(best: &mut Vec<Neighbor>, k: usize, cand: Neighbor) {
    if best.len() == k && !cand.before(&best[k - 1]) {
        return;
    }
    let pos = best
        .iter()
        .position(|b| cand.before(b))
        .unwrap_or(best.len());
    best.insert(pos, cand);
    best.truncate(k);
}

fn build(points: &[[f64; 2]], order: &mut [usize], depth: usize) {
    if order.len() <= 1 {
        return;
    }
    let axis = depth % 2;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
    });
    let (left, right) = order.split_at_mut(mid);
    build(points, left, depth + 1);
    build(points, &mut right[1..], depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(points: &[[f64; 2]], q: [f64; 2], k: usize) -> Vec<Neighbor> {
        let mut all: Vec<Neighbor> = points
            .iter()
            .enumerate()
            .map(|(index, p)| Neighbor {
                index,
                dist2: (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2),
            })
            .collect();
        all.sort_by(|a, b| a.dist2.total_cmp(&b.dist2).then(a.index.cmp(&b.index)));
        all.truncate(k);
        all
    }

    #[test]
    fn empty_tree() {
        let t = KdTree::new(vec![]);
        assert!(t.nearest([0.0, 0.0]).is_none());
    }

    #[test]
    fn ties_prefer_smaller_index() {
        let t = KdTree::new(vec![[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
        let n = t.k_nearest([0.0, 0.0], 4);
        assert_eq!(
            n.iter().map(|n| n.index).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..60),
            qx in -2.0f64..12.0,
            qy in -2.0f64..12.0,
            k in 1usize..10,
        ) {
            // snap to a coarse lattice so distance ties actually occur
            let points: Vec<[f64; 2]> = pts
                .iter()
                .map(|&(x, y)| [(x * 2.0).round() / 2.0, (y * 2.0).round() / 2.0])
                .collect();
            let q = [(qx * 2.0).round() / 2.0, (qy * 2.0).round() / 2.0];
            let tree = KdTree::new(points.clone());
            prop_assert_eq!(tree.k_nearest(q, k), brute(&points, q, k));
        }
    }
}
