use alloc::vec::Vec;

#[allow(unused_imports)] // float methods under no_std
use num_traits::Float;

use super::{dist2, Vec3};
use crate::error::{Error, Result};

const LEAF_SIZE: usize = 16;

/// One k-nearest-neighbor hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

/// Immutable k-d tree over a fixed set of positions.
///
/// Queries return exactly what a linear scan would: distances come from
/// [`dist2`] and equal distances are ordered by point index.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    points: Vec<Vec3>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl SpatialIndex {
    pub fn build(points: &[Vec3]) -> Self {
        let mut index = SpatialIndex {
            points: points.to_vec(),
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        if !points.is_empty() {
            index.build_node(0, points.len());
        }
        index
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for &i in &self.order[start..end] {
            lo = lo.inf(&self.points[i]);
            hi = hi.sup(&self.points[i]);
        }
        let extent = hi - lo;
        let axis = if extent.x >= extent.y && extent.x >= extent.z {
            0
        } else if extent.y >= extent.z {
            1
        } else {
            2
        };
        let mid = start + (end - start) / 2;
        let points = &self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
        });
        let value = self.points[self.order[mid]][axis];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split { axis, value, left, right };
        id
    }

    /// The `k` nearest points, ascending by `(distance, index)`.
    pub fn nearest(&self, query: &Vec3, k: usize) -> Result<Vec<Neighbor>> {
        if self.is_empty() {
            return Err(Error::state("nearest-neighbor query on an empty index"));
        }
        if k == 0 {
            return Err(Error::arg("k must be at least 1"));
        }
        let k = k.min(self.len());
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        self.knn_node(0, query, k, &mut best);
        Ok(best.into_iter().map(|(d2, index)| Neighbor { index, distance: d2.sqrt() }).collect())
    }

    /// Index of the single nearest point (lowest index on ties).
    pub fn nearest_one(&self, query: &Vec3) -> Result<Neighbor> {
        self.nearest(query, 1).map(|v| v[0])
    }

    fn knn_node(&self, node: usize, q: &Vec3, k: usize, best: &mut Vec<(f64, usize)>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let cand = (dist2(q, &self.points[i]), i);
                    if best.len() < k || lex_less(cand, best[best.len() - 1]) {
                        let pos = best.partition_point(|&b| lex_less(b, cand));
                        best.insert(pos, cand);
                        best.truncate(k);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = q[axis] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.knn_node(near, q, k, best);
                if best.len() < k || diff * diff <= best[best.len() - 1].0 {
                    self.knn_node(far, q, k, best);
                }
            }
        }
    }

    /// Every point within `radius` (inclusive), ascending by index.
    pub fn within_radius(&self, query: &Vec3, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.is_empty() && radius >= 0.0 {
            self.radius_node(0, query, radius * radius, &mut out);
            out.sort_unstable();
        }
        out
    }

    fn radius_node(&self, node: usize, q: &Vec3, r2: f64, out: &mut Vec<usize>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                out.extend(self.order[start..end].iter().copied().filter(|&i| dist2(q, &self.points[i]) <= r2));
            }
            Node::Split { axis, value, left, right } => {
                let diff = q[axis] - value;
                if diff <= 0.0 || diff * diff <= r2 {
                    self.radius_node(left, q, r2, out);
                }
                if diff >= 0.0 || diff * diff <= r2 {
                    self.radius_node(right, q, r2, out);
                }
            }
        }
    }

    /// True if any point lies within `radius` of `query`.
    pub fn any_within(&self, query: &Vec3, radius: f64) -> bool {
        !self.is_empty() && self.any_node(0, query, radius * radius)
    }

    fn any_node(&self, node: usize, q: &Vec3, r2: f64) -> bool {
        match self.nodes[node] {
            Node::Leaf { start, end } => self.order[start..end].iter().any(|&i| dist2(q, &self.points[i]) <= r2),
            Node::Split { axis, value, left, right } => {
                let diff = q[axis] - value;
                ((diff <= 0.0 || diff * diff <= r2) && self.any_node(left, q, r2))
                    || ((diff >= 0.0 || diff * diff <= r2) && self.any_node(right, q, r2))
            }
        }
    }
}

#[inline]
fn lex_less(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}
