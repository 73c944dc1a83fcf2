use crate::atsp::CostMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Optimal assignment and the cycles of the induced permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentResult<T> {
    /// `assignment[i]` is the column matched to row `i`.
    pub assignment: Vec<usize>,
    pub cost: T,
    /// Cycles in successor order, longest first; ties keep the order of their
    /// smallest vertex.
    pub cycles: Vec<Vec<usize>>,
}

impl<T> AssignmentResult<T> {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }
}

/// Minimum-cost assignment avoiding the diagonal, by the O(n^3) shortest
/// augmenting path method with row and column potentials.
pub fn hungarian<T: Scalar>(costs: &CostMatrix<T>) -> Result<AssignmentResult<T>> {
    let n = costs.len();
    let inf = T::infinity();
    // 1-based arrays; column 0 is the virtual root of each augmenting search
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![inf; n + 1];
    let mut used = vec![false; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        minv.iter_mut().for_each(|m| *m = inf);
        used.iter_mut().for_each(|b| *b = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let r = costs.row(i0 - 1);
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = r[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == 0 {
                return Err(Error::domain("no finite assignment exists"));
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let cost = (0..n).fold(T::zero(), |acc, i| acc + costs.get(i, assignment[i]));
    let cycles = permutation_cycles(&assignment);
    Ok(AssignmentResult { assignment, cost, cycles })
}

pub(crate) fn permutation_cycles(succ: &[usize]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(v);
            v = succ[v];
        }
        cycles.push(cycle);
    }
    cycles.sort_by_key(|c| std::cmp::Reverse(c.len()));
    cycles
}
