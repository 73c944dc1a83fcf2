use std::fmt;

use crate::graph::components::is_connected;
use crate::model::ThresholdGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diameter {
    Finite(usize),
    /// The graph is disconnected.
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

/// Largest BFS distance over all vertex pairs.
pub fn diameter(g: &ThresholdGraph) -> Diameter {
    if !is_connected(g) {
        return Diameter::Infinite;
    }
    let mut bfs = Bfs::new(g);
    let d = (0..g.vertices()).map(|s| bfs.eccentricity(s)).max().unwrap_or(0);
    Diameter::Finite(d)
}

/// Direction-optimizing BFS: switches to bottom-up sweeps once the frontier's
/// edges outnumber a fraction of the unexplored edges.
struct Bfs<'a> {
    g: &'a ThresholdGraph,
    visited: Vec<u64>,
    in_frontier: Vec<u64>,
    frontier: Vec<usize>,
    next: Vec<usize>,
    total_degree: usize,
}

const BOTTOM_UP_RATIO: usize = 14;

#[inline]
fn test_bit(bits: &[u64], i: usize) -> bool {
    bits[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
fn set_bit(bits: &mut [u64], i: usize) {
    bits[i >> 6] |= 1 << (i & 63);
}

impl<'a> Bfs<'a> {
    fn new(g: &'a ThresholdGraph) -> Self {
        let words = g.vertices().div_ceil(64);
        Self {
            g,
            visited: vec![0; words],
            in_frontier: vec![0; words],
            frontier: Vec::new(),
            next: Vec::new(),
            total_degree: 2 * g.edge_count(),
        }
    }

    /// Eccentricity of `source` in a connected graph.
    fn eccentricity(&mut self, source: usize) -> usize {
        let n = self.g.vertices();
        self.visited.iter_mut().for_each(|w| *w = 0);
        self.frontier.clear();
        self.frontier.push(source);
        set_bit(&mut self.visited, source);
        let mut seen = 1;
        let mut unexplored = self.total_degree - self.g.degree(source);
        let mut level = 0;
        while seen < n && !self.frontier.is_empty() {
            let frontier_edges: usize = self.frontier.iter().map(|&v| self.g.degree(v)).sum();
            self.next.clear();
            if frontier_edges * BOTTOM_UP_RATIO > unexplored {
                self.in_frontier.iter_mut().for_each(|w| *w = 0);
                for &v in &self.frontier {
                    set_bit(&mut self.in_frontier, v);
                }
                for v in 0..n {
                    if test_bit(&self.visited, v) {
                        continue;
                    }
                    if self.g.neighbors(v).iter().any(|&w| test_bit(&self.in_frontier, w)) {
                        self.next.push(v);
                    }
                }
                for &v in &self.next {
                    set_bit(&mut self.visited, v);
                }
            } else {
                for &v in &self.frontier {
                    for &w in self.g.neighbors(v) {
                        if !test_bit(&self.visited, w) {
                            set_bit(&mut self.visited, w);
                            self.next.push(w);
                        }
                    }
                }
            }
            seen += self.next.len();
            unexplored -= self.next.iter().map(|&v| self.g.degree(v)).sum::<usize>();
            std::mem::swap(&mut self.frontier, &mut self.next);
            level += 1;
        }
        level
    }
}
