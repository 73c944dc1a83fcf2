//! Asymmetric TSP: optimal assignment, cycle patching and exact oracles.

mod assignment;
mod held_karp;
mod patching;

use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{SimplexModel, WeightVector};
use crate::sampling::sample_simplex;
use crate::scalar::{lit, Scalar};

pub use assignment::{hungarian, AssignmentResult};
pub use held_karp::{held_karp, HELD_KARP_MAX_N};
pub use patching::{patch, patch_traced, PatchStep};

/// Costs `X_ij` for ordered pairs `i != j`; the diagonal holds `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    /// Builds from square rows. Diagonal entries are replaced by `+inf`.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::domain(format!("cost matrix needs n >= 2, got {n}")));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, x) in row.into_iter().enumerate() {
                if i == j {
                    data.push(T::infinity());
                } else if !(x.is_finite() && x >= T::zero()) {
                    return Err(Error::domain(format!("cost ({i}, {j}) = {x} must be finite and non-negative")));
                } else {
                    data.push(x);
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Costs from a weight vector on a directed edge space.
    pub fn from_weights(x: &WeightVector<T>) -> Result<Self> {
        let space = x.space();
        if !space.is_directed() {
            return Err(Error::domain("cost matrices come from directed edge spaces"));
        }
        let n = space.vertices();
        let mut data = vec![T::infinity(); n * n];
        for (e, i, j) in space.pairs() {
            data[i * n + j] = x.get(e);
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Same matrix with `shift` added to every off-diagonal entry of row `i`.
    pub fn with_row_shift(&self, i: usize, shift: T) -> Result<Self> {
        let mut rows: Vec<Vec<T>> = (0..self.n).map(|r| self.row(r).to_vec()).collect();
        rows[i].iter_mut().for_each(|x| *x = *x + shift);
        Self::from_rows(rows)
    }

    /// Writes the header `n=<n>` and `n` comma-separated rows with `inf` on the diagonal.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n={}", self.n)?;
        for i in 0..self.n {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .enumerate()
                .map(|(j, x)| if i == j { "inf".to_string() } else { x.to_string() })
                .collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input
            .lines()
            .map(|l| l.map(|s| s.trim().to_string()))
            .filter(|l| !matches!(l, Ok(s) if s.is_empty()));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))??;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}, expected n=<int>")))?;
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let row = line
                .split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    tok.parse::<f64>()
                        .map(lit::<T>)
                        .map_err(|_| Error::Parse(format!("row {i}: bad number {tok:?}")))
                })
                .collect::<Result<Vec<T>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse(format!("header says n={n} but found {} rows", rows.len())));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() == n && !row[i].is_infinite() {
                return Err(Error::Parse(format!("diagonal entry ({i}, {i}) must be inf")));
            }
        }
        Self::from_rows(rows)
    }
}

/// Cost matrix drawn uniformly from a row-symmetric directed simplex.
pub fn sample_row_symmetric<T: Scalar, R: Rng + ?Sized>(
    model: &SimplexModel<T>,
    rng: &mut R,
) -> Result<CostMatrix<T>> {
    if !model.is_row_symmetric() {
        return Err(Error::domain("model must be directed with alpha depending only on the head vertex"));
    }
    CostMatrix::from_weights(&sample_simplex(model, rng))
}

/// A directed Hamilton cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct Tour<T> {
    /// Visiting order, starting at vertex 0.
    pub order: Vec<usize>,
    pub cost: T,
}

impl<T: Scalar> Tour<T> {
    /// Follows `succ` from vertex 0. Fails unless `succ` is a single cycle on all vertices.
    pub fn from_successors(succ: &[usize], costs: &CostMatrix<T>) -> Result<Self> {
        let n = succ.len();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut v = 0;
        let mut cost = T::zero();
        for _ in 0..n {
            if v >= n || seen[v] {
                return Err(Error::domain("successor map is not a single Hamilton cycle"));
            }
            seen[v] = true;
            order.push(v);
            cost = cost + costs.get(v, succ[v]);
            v = succ[v];
        }
        if v != 0 {
            return Err(Error::domain("successor map is not a single Hamilton cycle"));
        }
        Ok(Self { order, cost })
    }

    /// Each vertex exactly once, no loops, cost equal to the sum of its arcs.
    pub fn is_valid(&self, costs: &CostMatrix<T>) -> bool {
        let n = costs.len();
        if self.order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        let total = (0..n).fold(T::zero(), |acc, k| {
            acc + costs.get(self.order[k], self.order[(k + 1) % n])
        });
        let tol = lit::<T>(1e-9) * (T::one() + total.abs());
        total.is_finite() && (total - self.cost).abs() <= tol
    }
}

/// Assignment plus the tour obtained by patching its cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct AtspSolution<T> {
    pub assignment: AssignmentResult<T>,
    pub tour: Tour<T>,
}

/// Solves the assignment problem, then patches the cycles into one tour.
pub fn assign_and_patch<T: Scalar>(costs: &CostMatrix<T>) -> Result<AtspSolution<T>> {
    let assignment = hungarian(costs)?;
    let tour = patch(&assignment, costs)?;
    Ok(AtspSolution { assignment, tour })
}
