use std::collections::BTreeMap;

use crate::model::ThresholdGraph;

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n], sets: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub size: usize,
    pub edges: usize,
}

impl Component {
    pub fn is_tree(&self) -> bool {
        self.edges + 1 == self.size
    }
}

/// Connected components, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSummary {
    vertices: usize,
    components: Vec<Component>,
}

impl ComponentSummary {
    /// Number of components, `kappa`.
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Component sizes in non-increasing order.
    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.size).collect()
    }

    pub fn largest(&self) -> usize {
        self.components.first().map_or(0, |c| c.size)
    }

    pub fn largest_fraction(&self) -> f64 {
        self.largest() as f64 / self.vertices as f64
    }

    /// `kappa_k`: number of components with `k` vertices.
    pub fn size_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.size).or_insert(0) += 1;
        }
        out
    }

    /// `tau_k`: number of tree components with `k` vertices.
    pub fn tree_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in self.components.iter().filter(|c| c.is_tree()) {
            *out.entry(c.size).or_insert(0) += 1;
        }
        out
    }
}

pub fn components(g: &ThresholdGraph) -> ComponentSummary {
    let n = g.vertices();
    let mut uf = UnionFind::new(n);
    for v in 0..n {
        for &w in g.neighbors(v) {
            if v < w {
                uf.union(v, w);
            }
        }
    }
    let mut by_root: Vec<Component> = vec![Component { size: 0, edges: 0 }; n];
    for v in 0..n {
        let r = uf.find(v);
        by_root[r].size += 1;
        // each edge is seen from both ends
        by_root[r].edges += g.degree(v);
    }
    let mut components: Vec<Component> = by_root
        .into_iter()
        .filter(|c| c.size > 0)
        .map(|c| Component { size: c.size, edges: c.edges / 2 })
        .collect();
    components.sort_by(|a, b| b.size.cmp(&a.size).then(a.edges.cmp(&b.edges)));
    ComponentSummary { vertices: n, components }
}

pub fn is_connected(g: &ThresholdGraph) -> bool {
    let n = g.vertices();
    let mut uf = UnionFind::new(n);
    for v in 0..n {
        for &w in g.neighbors(v) {
            if v < w && uf.union(v, w) && uf.set_count() == 1 {
                return true;
            }
        }
    }
    uf.set_count() == 1
}
