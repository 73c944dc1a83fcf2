use crate::error::{Error, Result};
use crate::graph::components::is_connected;
use crate::model::ThresholdGraph;

pub const HAMILTON_MAX_N: usize = 24;

/// Exact Hamilton cycle test by backtracking over bitmask adjacency.
///
/// Before searching it rejects graphs with a vertex of degree below two, a
/// disconnected vertex set or a cut vertex. During the search every
/// unvisited vertex must keep two possible cycle neighbours and the
/// unvisited vertices must stay reachable from the path end.
pub fn is_hamiltonian(g: &ThresholdGraph) -> Result<bool> {
    let n = g.vertices();
    if n > HAMILTON_MAX_N {
        return Err(Error::capacity(format!(
            "Hamiltonicity search supports n <= {HAMILTON_MAX_N}, got {n}"
        )));
    }
    if n < 3 || (0..n).any(|v| g.degree(v) < 2) || !is_connected(g) || has_cut_vertex(g) {
        return Ok(false);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let all = (1u32 << n) - 1;
    let mut search = Search { adj, all };
    Ok(search.extend(0, 1))
}

struct Search {
    adj: Vec<u32>,
    all: u32,
}

impl Search {
    fn extend(&mut self, end: usize, visited: u32) -> bool {
        let unvisited = self.all & !visited;
        if unvisited == 0 {
            return self.adj[end] & 1 == 1;
        }
        let open = unvisited | 1 << end | 1;
        let mut rest = unvisited;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[w] & open).count_ones() < 2 {
                return false;
            }
        }
        if !self.reaches_all(end, unvisited) {
            return false;
        }
        let mut candidates = self.adj[end] & unvisited;
        // Low-degree vertices first; they are the most constrained.
        let mut order: Vec<usize> = Vec::with_capacity(candidates.count_ones() as usize);
        while candidates != 0 {
            order.push(candidates.trailing_zeros() as usize);
            candidates &= candidates - 1;
        }
        order.sort_by_key(|&w| (self.adj[w] & unvisited).count_ones());
        order.into_iter().any(|w| self.extend(w, visited | 1 << w))
    }

    fn reaches_all(&self, end: usize, unvisited: u32) -> bool {
        let mut reached = 0u32;
        let mut frontier = self.adj[end] & unvisited;
        while frontier != 0 {
            reached |= frontier;
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & unvisited & !reached;
        }
        reached == unvisited
    }
}

/// Articulation points by Tarjan's low-link DFS.
fn has_cut_vertex(g: &ThresholdGraph) -> bool {
    let n = g.vertices();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    fn dfs(
        g: &ThresholdGraph,
        v: usize,
        parent: usize,
        disc: &mut [usize],
        low: &mut [usize],
        timer: &mut usize,
    ) -> bool {
        disc[v] = *timer;
        low[v] = *timer;
        *timer += 1;
        let mut children = 0;
        for &w in g.neighbors(v) {
            if disc[w] == usize::MAX {
                children += 1;
                if dfs(g, w, v, disc, low, timer) {
                    return true;
                }
                low[v] = low[v].min(low[w]);
                if parent != usize::MAX && low[w] >= disc[v] {
                    return true;
                }
            } else if w != parent {
                low[v] = low[v].min(disc[w]);
            }
        }
        parent == usize::MAX && children > 1
    }
    dfs(g, 0, usize::MAX, &mut disc, &mut low, &mut timer)
}
