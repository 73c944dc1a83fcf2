use crate::atsp::{CostMatrix, Tour};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const HELD_KARP_MAX_N: usize = 13;

/// Exact optimal tour by the Held-Karp subset recursion.
pub fn held_karp<T: Scalar>(costs: &CostMatrix<T>) -> Result<Tour<T>> {
    let n = costs.len();
    if n > HELD_KARP_MAX_N {
        return Err(Error::capacity(format!(
            "Held-Karp supports n <= {HELD_KARP_MAX_N}, got {n}"
        )));
    }
    // subsets of {1..n-1}; bit k stands for vertex k+1
    let m = n - 1;
    let full = (1usize << m) - 1;
    let inf = T::infinity();
    let mut dp = vec![inf; (full + 1) * m];
    let mut parent = vec![usize::MAX; (full + 1) * m];
    for k in 0..m {
        dp[(1 << k) * m + k] = costs.get(0, k + 1);
    }
    for mask in 1..=full {
        for last in 0..m {
            let cur = dp[mask * m + last];
            if mask >> last & 1 == 0 || !cur.is_finite() {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let next = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let slot = (mask | 1 << next) * m + next;
                let cand = cur + costs.get(last + 1, next + 1);
                if cand < dp[slot] {
                    dp[slot] = cand;
                    parent[slot] = last;
                }
            }
        }
    }
    let (mut last, _) = (0..m)
        .map(|k| (k, dp[full * m + k] + costs.get(k + 1, 0)))
        .fold((0, inf), |best, c| if c.1 < best.1 { c } else { best });
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    while mask != 0 {
        order.push(last + 1);
        let prev = parent[mask * m + last];
        mask &= !(1 << last);
        last = prev;
    }
    order.push(0);
    order.reverse();
    let mut succ = vec![0; n];
    for k in 0..n {
        succ[order[k]] = order[(k + 1) % n];
    }
    Tour::from_successors(&succ, costs)
}
