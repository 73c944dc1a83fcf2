use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::ThresholdGraph;

const UNMATCHED: usize = usize::MAX;

/// Maximum matching across the split `{0..n/2} | {n/2..n}` by Hopcroft-Karp,
/// ignoring edges inside either half.
pub fn max_cross_matching(g: &ThresholdGraph) -> usize {
    let n = g.vertices();
    let half = n / 2;
    let right = n - half;
    let adj: Vec<Vec<usize>> = (0..half)
        .map(|u| g.neighbors(u).iter().filter(|&&w| w >= half).map(|&w| w - half).collect())
        .collect();
    HopcroftKarp::new(&adj, right).run()
}

/// True iff the crossing edges contain a perfect matching of the two halves.
pub fn bipartite_perfect_matching(g: &ThresholdGraph) -> Result<bool> {
    let n = g.vertices();
    if n % 2 == 1 {
        return Err(Error::domain(format!("perfect matching needs an even vertex count, got {n}")));
    }
    Ok(max_cross_matching(g) == n / 2)
}

struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    dist: Vec<usize>,
}

impl<'a> HopcroftKarp<'a> {
    fn new(adj: &'a [Vec<usize>], right: usize) -> Self {
        Self {
            adj,
            match_left: vec![UNMATCHED; adj.len()],
            match_right: vec![UNMATCHED; right],
            dist: vec![0; adj.len()],
        }
    }

    fn run(mut self) -> usize {
        let mut size = 0;
        while self.layer() {
            for u in 0..self.adj.len() {
                if self.match_left[u] == UNMATCHED && self.augment(u) {
                    size += 1;
                }
            }
        }
        size
    }

    /// BFS layering from free left vertices; true if a free right vertex is reachable.
    fn layer(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.adj.len() {
            if self.match_left[u] == UNMATCHED {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                let w = self.match_right[v];
                if w == UNMATCHED {
                    found = true;
                } else if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn augment(&mut self, u: usize) -> bool {
        for i in 0..self.adj[u].len() {
            let v = self.adj[u][i];
            let w = self.match_right[v];
            if w == UNMATCHED || (self.dist[w] == self.dist[u] + 1 && self.augment(w)) {
                self.match_left[u] = v;
                self.match_right[v] = u;
                return true;
            }
        }
        self.dist[u] = usize::MAX;
        false
    }
}
