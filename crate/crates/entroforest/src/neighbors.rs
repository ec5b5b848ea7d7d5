//! k-d tree construction and all-points 1-nearest-neighbor distances,
//! plus the O(n^2) brute-force oracle used to cross-check it.

use crate::error::{Error, Result};
use crate::numerics::TargetMatrix;

const DEFAULT_LEAF_CAPACITY: usize = 16;

enum Node {
    Leaf {
        indices: Vec<usize>,
    },
    Internal {
        dim: usize,
        value: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

/// Static k-d tree over the rows of a [`TargetMatrix`].
///
/// Internal nodes split on the widest-spread dimension at the median
/// coordinate; the left subtree holds exactly the points with coordinate
/// <= the split value.
pub struct KdTree<'a> {
    points: &'a TargetMatrix,
    root: Node,
    leaf_capacity: usize,
}

impl<'a> KdTree<'a> {
    /// Build with the default leaf capacity of 16.
    pub fn build(points: &'a TargetMatrix) -> Result<Self> {
        Self::with_leaf_capacity(points, DEFAULT_LEAF_CAPACITY)
    }

    pub fn with_leaf_capacity(points: &'a TargetMatrix, leaf_capacity: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        let capacity = leaf_capacity.max(1);
        let mut indices: Vec<usize> = (0..points.n()).collect();
        let root = build_node(points, &mut indices, capacity);
        Ok(Self {
            points,
            root,
            leaf_capacity: capacity,
        })
    }

    pub fn leaf_capacity(&self) -> usize {
        self.leaf_capacity
    }

    /// Maximum root-to-leaf node count.
    pub fn depth(&self) -> usize {
        fn walk(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 1,
                Node::Internal { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }

    /// All point indices in traversal order; each appears exactly once.
    pub fn collect_indices(&self) -> Vec<usize> {
        fn walk(node: &Node, out: &mut Vec<usize>) {
            match node {
                Node::Leaf { indices } => out.extend_from_slice(indices),
                Node::Internal { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.points.n());
        walk(&self.root, &mut out);
        out
    }

    /// Euclidean distance from point `query` to its nearest neighbor with a
    /// different index.
    pub fn nearest_distance_excluding(&self, query: usize) -> f64 {
        let q = self.points.row(query);
        let mut best = f64::INFINITY;
        self.search(&self.root, q, query, &mut best);
        best.sqrt()
    }

    fn search(&self, node: &Node, q: &[f64], skip: usize, best_sq: &mut f64) {
        match node {
            Node::Leaf { indices } => {
                for &i in indices {
                    if i == skip {
                        continue;
                    }
                    let d = dist_sq(q, self.points.row(i));
                    if d < *best_sq {
                        *best_sq = d;
                    }
                }
            }
            Node::Internal {
                dim,
                value,
                left,
                right,
            } => {
                let delta = q[*dim] - value;
                let (near, far) = if delta <= 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.search(near, q, skip, best_sq);
                if delta * delta < *best_sq {
                    self.search(far, q, skip, best_sq);
                }
            }
        }
    }
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

fn build_node(points: &TargetMatrix, indices: &mut [usize], capacity: usize) -> Node {
    if indices.len() <= capacity {
        return Node::Leaf {
            indices: indices.to_vec(),
        };
    }

    // Widest-spread dimension.
    let d = points.dim();
    let mut split_dim = 0;
    let mut best_spread = -1.0;
    for j in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in indices.iter() {
            let v = points.row(i)[j];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let spread = hi - lo;
        if spread > best_spread {
            best_spread = spread;
            split_dim = j;
        }
    }
    if best_spread <= 0.0 {
        // All points identical; nothing to split on.
        return Node::Leaf {
            indices: indices.to_vec(),
        };
    }

    let mut coords: Vec<f64> = indices.iter().map(|&i| points.row(i)[split_dim]).collect();
    coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut split_value = coords[(coords.len() - 1) / 2];
    let max = *coords.last().unwrap();
    if split_value == max {
        // Duplicates pushed the median to the maximum; back off to the
        // largest value strictly below it so both sides stay non-empty.
        split_value = coords
            .iter()
            .copied()
            .filter(|&v| v < max)
            .fold(f64::NEG_INFINITY, f64::max);
    }

    let mut left_idx = Vec::new();
    let mut right_idx = Vec::new();
    for &i in indices.iter() {
        if points.row(i)[split_dim] <= split_value {
            left_idx.push(i);
        } else {
            right_idx.push(i);
        }
    }
    Node::Internal {
        dim: split_dim,
        value: split_value,
        left: Box::new(build_node(points, &mut left_idx, capacity)),
        right: Box::new(build_node(points, &mut right_idx, capacity)),
    }
}

/// 1-NN distance of every point to its nearest distinct-index neighbor,
/// computed through a k-d tree. Duplicate points yield distance 0.
pub fn all_1nn_distances(points: &TargetMatrix) -> Result<Vec<f64>> {
    if points.n() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: points.n(),
        });
    }
    let tree = KdTree::build(points)?;
    Ok((0..points.n())
        .map(|i| tree.nearest_distance_excluding(i))
        .collect())
}

/// Exact O(n^2) 1-NN distances; the testing oracle for
/// [`all_1nn_distances`].
pub fn brute_force_1nn(points: &TargetMatrix) -> Result<Vec<f64>> {
    let n = points.n();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut best = f64::INFINITY;
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = dist_sq(points.row(i), points.row(j));
            if d < best {
                best = d;
            }
        }
        out.push(best.sqrt());
    }
    Ok(out)
}
