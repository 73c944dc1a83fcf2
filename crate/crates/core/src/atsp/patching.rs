use crate::atsp::{AssignmentResult, CostMatrix, Tour};
use crate::error::Result;
use crate::scalar::Scalar;

/// One merge of a cycle into the growing tour: arcs `a->b` and `c->d` are
/// replaced by `a->d` and `c->b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchStep<T> {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    /// `X_ad + X_cb`, the cost of the two new arcs.
    pub added: T,
    /// Change in total cost, `X_ad + X_cb - X_ab - X_cd`.
    pub delta: T,
}

/// Patches the assignment cycles into a single tour.
///
/// Starting from the longest cycle, each remaining cycle (in order, shortest
/// last) is spliced in by the cheapest pair of new arcs.
pub fn patch<T: Scalar>(assignment: &AssignmentResult<T>, costs: &CostMatrix<T>) -> Result<Tour<T>> {
    patch_traced(assignment, costs).map(|(tour, _)| tour)
}

/// [`patch`], also returning the merge steps in the order they were applied.
pub fn patch_traced<T: Scalar>(
    assignment: &AssignmentResult<T>,
    costs: &CostMatrix<T>,
) -> Result<(Tour<T>, Vec<PatchStep<T>>)> {
    let mut succ = assignment.assignment.clone();
    let cycles = &assignment.cycles;
    let mut steps = Vec::with_capacity(cycles.len().saturating_sub(1));
    let mut merged: Vec<usize> = cycles.first().cloned().unwrap_or_default();
    for cycle in cycles.iter().skip(1).rev() {
        let mut best: Option<PatchStep<T>> = None;
        for &a in &merged {
            let b = succ[a];
            for &c in cycle {
                let d = succ[c];
                let added = costs.get(a, d) + costs.get(c, b);
                if best.is_none_or(|s| added < s.added) {
                    let delta = added - costs.get(a, b) - costs.get(c, d);
                    best = Some(PatchStep { a, b, c, d, added, delta });
                }
            }
        }
        let step = best.expect("cycles are non-empty");
        succ[step.a] = step.d;
        succ[step.c] = step.b;
        merged.extend_from_slice(cycle);
        steps.push(step);
    }
    Ok((Tour::from_successors(&succ, costs)?, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atsp::{held_karp, hungarian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_two_cycles() {
        let big = 10.0;
        let c = CostMatrix::from_rows(vec![
            vec![0.0, 1.0, big, 3.0],
            vec![1.0, 0.0, big, big],
            vec![big, 2.0, 0.0, 1.0],
            vec![big, big, 1.0, 0.0],
        ])
        .unwrap();
        let a = hungarian(&c).unwrap();
        assert_eq!(a.cycle_count(), 2);
        let (tour, steps) = patch_traced(&a, &c).unwrap();
        // replace 0->1 and 2->3 by 0->3 and 2->1
        assert_eq!(steps.len(), 1);
        assert_eq!((steps[0].a, steps[0].b, steps[0].c, steps[0].d), (0, 1, 2, 3));
        assert_eq!(tour.order, vec![0, 3, 2, 1]);
        assert_eq!(tour.cost, 3.0 + 1.0 + 2.0 + 1.0);
        assert!(tour.is_valid(&c));
    }

    #[test]
    fn single_cycle_is_unchanged() {
        let c = CostMatrix::from_rows(vec![
            vec![0.0, 2.0, 9.0],
            vec![1.0, 0.0, 6.0],
            vec![8.0, 7.0, 0.0],
        ])
        .unwrap();
        let a = hungarian(&c).unwrap();
        let (tour, steps) = patch_traced(&a, &c).unwrap();
        assert!(steps.is_empty());
        assert_eq!(tour.cost, a.cost);
    }

    #[test]
    fn sandwiched_between_assignment_and_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..=8 {
            for _ in 0..15 {
                let c = CostMatrix::from_rows(
                    (0..n).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect(),
                )
                .unwrap();
                let a = hungarian(&c).unwrap();
                let (tour, steps) = patch_traced(&a, &c).unwrap();
                let opt = held_karp(&c).unwrap();
                assert!(tour.is_valid(&c));
                assert_eq!(steps.len(), a.cycle_count() - 1);
                assert!(a.cost <= opt.cost + 1e-12);
                assert!(opt.cost <= tour.cost + 1e-12);
                let increase: f64 = steps.iter().map(|s| s.delta).sum();
                assert!((tour.cost - a.cost - increase).abs() < 1e-12);
                assert!(steps.iter().all(|s| s.delta <= s.added + 1e-15));
            }
        }
    }
}
