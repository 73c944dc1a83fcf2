//! Brute-force reference implementations shared by the integration tests.
//! They favour obviousness over speed and share no code with the crate.

#![allow(dead_code)]

pub const UNREACHABLE: usize = usize::MAX;

/// Adjacency matrix of an undirected edge list.
pub fn matrix(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(i, j) in edges {
        m[i][j] = true;
        m[j][i] = true;
    }
    m
}

/// All-pairs hop distances by Floyd-Warshall.
pub fn distances(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != UNREACHABLE && d[k][j] != UNREACHABLE && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// `None` when disconnected.
pub fn diameter(adj: &[Vec<bool>]) -> Option<usize> {
    let d = distances(adj);
    let mut best = 0;
    for row in &d {
        for &x in row {
            if x == UNREACHABLE {
                return None;
            }
            best = best.max(x);
        }
    }
    Some(best)
}

/// Component sizes in descending order, from reachability.
pub fn component_sizes(adj: &[Vec<bool>]) -> Vec<usize> {
    let d = distances(adj);
    let n = adj.len();
    let mut done = vec![false; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        if done[v] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&w| d[v][w] != UNREACHABLE).collect();
        for &w in &members {
            done[w] = true;
        }
        sizes.push(members.len());
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Calls `f` on every permutation of `items`.
pub fn for_each_permutation(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Hamilton cycle by trying every ordering of the vertices after 0.
pub fn hamiltonian(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    if n < 3 {
        return false;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut found = false;
    for_each_permutation(&mut rest, 0, &mut |order| {
        if found {
            return;
        }
        let mut prev = 0;
        for &v in order {
            if !adj[prev][v] {
                return;
            }
            prev = v;
        }
        found = adj[prev][0];
    });
    found
}

/// Perfect matching of `{0..n/2}` onto `{n/2..n}` by trying every bijection.
pub fn cross_perfect_matching(adj: &[Vec<bool>]) -> bool {
    let half = adj.len() / 2;
    let mut right: Vec<usize> = (half..adj.len()).collect();
    let mut found = false;
    for_each_permutation(&mut right, 0, &mut |perm| {
        found |= (0..half).all(|i| adj[i][perm[i]]);
    });
    found
}

/// Minimum spanning tree weight of the complete graph over all `n^(n-2)`
/// labelled trees, generated from their Pruefer sequences.
pub fn min_spanning_tree_by_enumeration(n: usize, weight: &dyn Fn(usize, usize) -> f64) -> f64 {
    if n == 2 {
        return weight(0, 1);
    }
    let len = n - 2;
    let mut code = vec![0usize; len];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(pruefer_tree(n, &code).iter().map(|&(i, j)| weight(i, j)).sum());
        // odometer increment
        let mut k = 0;
        while k < len && code[k] == n - 1 {
            code[k] = 0;
            k += 1;
        }
        if k == len {
            return best;
        }
        code[k] += 1;
    }
}

fn pruefer_tree(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((last[0], last[1]));
    edges
}

/// Optimal assignment avoiding the diagonal, by trying every permutation.
pub fn assignment_by_enumeration(cost: &dyn Fn(usize, usize) -> f64, n: usize) -> f64 {
    let mut cols: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    for_each_permutation(&mut cols, 0, &mut |perm| {
        if perm.iter().enumerate().all(|(i, &j)| i != j) {
            best = best.min(perm.iter().enumerate().map(|(i, &j)| cost(i, j)).sum());
        }
    });
    best
}

/// `1 - (1 - x)^m` for `x` in `[0, 1]`, evaluated stably.
pub fn one_minus_power_complement(x: f64, m: f64) -> f64 {
    if x >= 1.0 {
        1.0
    } else {
        -(m * (-x).ln_1p()).exp_m1()
    }
}

#[test]
fn pruefer_counts_match_cayley() {
    // every sequence decodes to a distinct tree: n^(n-2) of them
    let n = 5;
    let mut seen = std::collections::BTreeSet::new();
    let mut code = vec![0usize; n - 2];
    loop {
        let mut t: Vec<(usize, usize)> = pruefer_tree(n, &code).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        t.sort_unstable();
        seen.insert(t);
        let mut k = 0;
        while k < n - 2 && code[k] == n - 1 {
            code[k] = 0;
            k += 1;
        }
        if k == n - 2 {
            break;
        }
        code[k] += 1;
    }
    assert_eq!(seen.len(), 125);
}
