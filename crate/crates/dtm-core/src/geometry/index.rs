//! Exact k-nearest-neighbor search backed by a kd-tree.
//!
//! Queries are exact (no approximation) and deterministic: results come back
//! in ascending squared distance, with ties broken by ascending point index.
//! The index borrows its cloud immutably, so concurrent read-only queries
//! from multiple threads are safe.

use super::{sq_dist, PointCloud};
use crate::error::{Error, Result};
use std::collections::BinaryHeap;

const LEAF_SIZE: usize = 16;

#[derive(Debug)]
enum Node {
    Leaf {
        start: u32,
        end: u32,
    },
    Split {
        axis: u8,
        value: f64,
        left: u32,
        right: u32,
    },
}

/// Spatial index over a [`PointCloud`] for exact k-NN under squared
/// Euclidean distance.
#[derive(Debug)]
pub struct NeighborIndex<'a> {
    cloud: &'a PointCloud,
    nodes: Vec<Node>,
    order: Vec<u32>,
    root: u32,
}

/// One query result: point index into the source cloud plus its squared
/// distance to the query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub sq_dist: f64,
}

// Max-heap entry ordered by (sq_dist, index): the heap top is the current
// worst candidate under the deterministic tie rule.
#[derive(PartialEq)]
struct Candidate {
    sq_dist: f64,
    index: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sq_dist
            .partial_cmp(&other.sq_dist)
            .expect("finite distance")
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> NeighborIndex<'a> {
    /// Build an index over `cloud`. The cloud is never mutated; building is
    /// deterministic for a fixed cloud.
    pub fn build(cloud: &'a PointCloud) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut order: Vec<u32> = (0..cloud.len() as u32).collect();
        let mut nodes = Vec::new();
        let root = build_node(cloud, &mut order, 0, &mut nodes);
        Ok(NeighborIndex { cloud, nodes, order, root })
    }

    pub fn cloud(&self) -> &PointCloud {
        self.cloud
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.cloud.dim() {
            return Err(Error::Dimension { expected: self.cloud.dim(), got: x.len() });
        }
        Ok(())
    }

    /// The `k` nearest neighbors of `x` among the indexed points, in
    /// ascending squared distance; exact ties are resolved by ascending
    /// point index. A query point that is itself a sample point is its own
    /// neighbor at distance zero.
    pub fn knn(&self, x: &[f64], k: usize) -> Result<Vec<Neighbor>> {
        self.check_dim(x)?;
        let n = self.len();
        if k == 0 {
            return Err(Error::InvalidK { k, max: n });
        }
        if k > n {
            return Err(Error::InsufficientPoints { needed: k, have: n });
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        self.search(self.root, x, k, &mut heap);
        let mut out: Vec<Neighbor> = heap
            .into_sorted_vec()
            .into_iter()
            .map(|c| Neighbor { index: c.index as usize, sq_dist: c.sq_dist })
            .collect();
        debug_assert_eq!(out.len(), k);
        out.shrink_to_fit();
        Ok(out)
    }

    fn search(&self, node: u32, x: &[f64], k: usize, heap: &mut BinaryHeap<Candidate>) {
        match &self.nodes[node as usize] {
            Node::Leaf { start, end } => {
                for &idx in &self.order[*start as usize..*end as usize] {
                    let d2 = sq_dist(x, self.cloud.point(idx as usize));
                    let cand = Candidate { sq_dist: d2, index: idx };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().expect("non-empty heap") {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = x[*axis as usize] - value;
                let (near, far) = if diff <= 0.0 { (*left, *right) } else { (*right, *left) };
                self.search(near, x, k, heap);
                // On the boundary (diff^2 == worst) the far side can still
                // hold an equal-distance point with a smaller index, so only
                // a strictly larger plane distance prunes.
                let prune = heap.len() == k
                    && diff * diff > heap.peek().expect("non-empty heap").sq_dist;
                if !prune {
                    self.search(far, x, k, heap);
                }
            }
        }
    }

    /// All n squared distances from `x` to the cloud, sorted ascending.
    ///
    /// Entry i (1-based) is the empirical squared-distance quantile at
    /// levels ((i-1)/n, i/n].
    pub fn sorted_sq_distances(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut dists: Vec<f64> = self.cloud.iter_points().map(|p| sq_dist(x, p)).collect();
        dists.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distance"));
        Ok(dists)
    }

    /// The `count` smallest squared distances from `x`, sorted ascending.
    ///
    /// Equivalent to the prefix of [`Self::sorted_sq_distances`] but uses
    /// the tree (small `count`) or an O(n) selection (large `count`).
    pub fn smallest_sq_distances(&self, x: &[f64], count: usize) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let n = self.len();
        if count > n {
            return Err(Error::InsufficientPoints { needed: count, have: n });
        }
        if count == 0 {
            return Ok(Vec::new());
        }
        if count <= 32 || count * 4 <= n {
            return Ok(self.knn(x, count)?.into_iter().map(|nb| nb.sq_dist).collect());
        }
        let mut dists: Vec<f64> = self.cloud.iter_points().map(|p| sq_dist(x, p)).collect();
        if count < n {
            dists.select_nth_unstable_by(count - 1, |a, b| {
                a.partial_cmp(b).expect("finite distance")
            });
            dists.truncate(count);
        }
        dists.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distance"));
        Ok(dists)
    }
}

fn build_node(cloud: &PointCloud, order: &mut [u32], offset: u32, nodes: &mut Vec<Node>) -> u32 {
    if order.len() <= LEAF_SIZE {
        nodes.push(Node::Leaf { start: offset, end: offset + order.len() as u32 });
        return (nodes.len() - 1) as u32;
    }
    // split on the axis with the widest extent
    let dim = cloud.dim();
    let mut axis = 0;
    let mut best_spread = -1.0;
    for d in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in order.iter() {
            let c = cloud.point(i as usize)[d];
            lo = lo.min(c);
            hi = hi.max(c);
        }
        if hi - lo > best_spread {
            best_spread = hi - lo;
            axis = d;
        }
    }
    let mid = order.len() / 2;
    // total order (coordinate, index) keeps the partition deterministic
    order.select_nth_unstable_by(mid, |&a, &b| {
        cloud.point(a as usize)[axis]
            .partial_cmp(&cloud.point(b as usize)[axis])
            .expect("finite coordinate")
            .then(a.cmp(&b))
    });
    let value = cloud.point(order[mid] as usize)[axis];
    let placeholder = nodes.len();
    nodes.push(Node::Leaf { start: 0, end: 0 });
    let (left_slice, right_slice) = order.split_at_mut(mid);
    let left = build_node(cloud, left_slice, offset, nodes);
    let right = build_node(cloud, right_slice, offset + mid as u32, nodes);
    nodes[placeholder] = Node::Split { axis: axis as u8, value, left, right };
    placeholder as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cloud2(points: &[(f64, f64)]) -> PointCloud {
        PointCloud::new(points.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap()
    }

    #[test]
    fn self_is_nearest() {
        let c = cloud2(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let idx = NeighborIndex::build(&c).unwrap();
        for i in 0..3 {
            let nn = idx.knn(c.point(i), 1).unwrap();
            assert_eq!(nn[0].index, i);
            assert_eq!(nn[0].sq_dist, 0.0);
        }
    }

    #[test]
    fn tie_broken_by_ascending_index() {
        let c = cloud2(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let idx = NeighborIndex::build(&c).unwrap();
        let nn = idx.knn(&[0.0, 0.0], 2).unwrap();
        assert_eq!(nn[0], Neighbor { index: 0, sq_dist: 0.0 });
        assert_eq!(nn[1], Neighbor { index: 1, sq_dist: 1.0 });
    }

    #[test]
    fn line_cloud_example() {
        let c = PointCloud::from_1d(vec![0.0, 3.0, 10.0]).unwrap();
        let idx = NeighborIndex::build(&c).unwrap();
        let nn = idx.knn(&[4.0], 2).unwrap();
        assert_eq!(nn[0], Neighbor { index: 1, sq_dist: 1.0 });
        assert_eq!(nn[1], Neighbor { index: 0, sq_dist: 16.0 });
    }

    #[test]
    fn single_point_cloud() {
        let c = PointCloud::from_1d(vec![5.0]).unwrap();
        let idx = NeighborIndex::build(&c).unwrap();
        assert_eq!(idx.knn(&[5.0], 1).unwrap()[0].sq_dist, 0.0);
        assert!(matches!(
            idx.knn(&[5.0], 2),
            Err(Error::InsufficientPoints { needed: 2, have: 1 })
        ));
    }

    #[test]
    fn duplicates_both_returned() {
        let c = cloud2(&[(1.0, 1.0), (1.0, 1.0), (9.0, 9.0)]);
        let idx = NeighborIndex::build(&c).unwrap();
        let nn = idx.knn(&[1.0, 1.0], 2).unwrap();
        assert_eq!(nn[0], Neighbor { index: 0, sq_dist: 0.0 });
        assert_eq!(nn[1], Neighbor { index: 1, sq_dist: 0.0 });
    }

    #[test]
    fn dimension_mismatch() {
        let c = cloud2(&[(0.0, 0.0), (1.0, 0.0)]);
        let idx = NeighborIndex::build(&c).unwrap();
        assert!(matches!(idx.knn(&[0.0], 1), Err(Error::Dimension { expected: 2, got: 1 })));
        assert!(matches!(
            idx.sorted_sq_distances(&[0.0, 0.0, 0.0]),
            Err(Error::Dimension { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn sorted_distances_examples() {
        let c = PointCloud::from_1d(vec![0.0, 1.0]).unwrap();
        let idx = NeighborIndex::build(&c).unwrap();
        assert_eq!(idx.sorted_sq_distances(&[0.0]).unwrap(), vec![0.0, 1.0]);

        let c = cloud2(&[(0.0, 0.0), (3.0, 4.0)]);
        let idx = NeighborIndex::build(&c).unwrap();
        let d = idx.sorted_sq_distances(&[0.0, 0.0]).unwrap();
        assert_relative_eq!(d[1], 25.0);

        let c = PointCloud::from_1d(vec![7.0]).unwrap();
        let idx = NeighborIndex::build(&c).unwrap();
        assert_eq!(idx.sorted_sq_distances(&[7.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn smallest_matches_knn_for_all_counts() {
        let c = cloud2(&[
            (0.1, 0.4),
            (0.9, 0.2),
            (0.5, 0.5),
            (0.3, 0.8),
            (0.7, 0.1),
            (0.2, 0.2),
        ]);
        let idx = NeighborIndex::build(&c).unwrap();
        let q = [0.4, 0.4];
        let all = idx.sorted_sq_distances(&q).unwrap();
        for count in 1..=6 {
            let got = idx.smallest_sq_distances(&q, count).unwrap();
            for (a, b) in got.iter().zip(&all) {
                assert_relative_eq!(a, b);
            }
        }
    }
}
