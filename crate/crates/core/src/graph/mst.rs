use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::components::UnionFind;
use crate::model::WeightVector;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree<T> {
    pub weight: T,
    /// Edge indices in the order Kruskal accepted them.
    pub edges: Vec<usize>,
}

/// Minimum spanning tree of the complete graph weighted by `x` (Kruskal,
/// ties broken by edge index).
pub fn mst_weight<T: Scalar>(x: &WeightVector<T>) -> Result<SpanningTree<T>> {
    let space = x.space();
    if space.is_directed() {
        return Err(Error::domain("spanning trees need an undirected edge space"));
    }
    let n = space.vertices();
    let values = x.values();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    let mut weight = T::zero();
    for e in order {
        let (i, j) = space.endpoints_unchecked(e);
        if uf.union(i, j) {
            weight = weight + values[e];
            edges.push(e);
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    Ok(SpanningTree { weight, edges })
}
