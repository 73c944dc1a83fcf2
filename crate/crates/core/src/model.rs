//! Edge indexing, simplex model parameters and threshold-graph extraction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{count, lit, Scalar};

/// Coordinate space of edge weights on `n` vertices.
///
/// Undirected pairs `i < j` are numbered lexicographically, so `(0,1)` is 0
/// and `(n-2,n-1)` is `N-1`. Directed pairs `(i,j)`, `i != j`, are numbered
/// row by row with the diagonal skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSpace {
    n: usize,
    directed: bool,
}

impl EdgeSpace {
    pub fn undirected(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("edge space needs n >= 2, got {n}")));
        }
        Ok(Self { n, directed: false })
    }

    pub fn directed(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("edge space needs n >= 2, got {n}")));
        }
        Ok(Self { n, directed: true })
    }

    #[inline]
    pub fn vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of coordinates `N`.
    #[inline]
    pub fn len(&self) -> usize {
        if self.directed {
            self.n * (self.n - 1)
        } else {
            self.n * (self.n - 1) / 2
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Canonical index of the pair `(i, j)`. Undirected pairs are normalized first.
    pub fn index(&self, i: usize, j: usize) -> Result<usize> {
        if i >= self.n || j >= self.n {
            return Err(Error::domain(format!(
                "vertex pair ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::domain(format!("loop ({i}, {i}) has no coordinate")));
        }
        Ok(self.index_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, i: usize, j: usize) -> usize {
        let n = self.n;
        if self.directed {
            i * (n - 1) + if j < i { j } else { j - 1 }
        } else {
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            i * n - i * (i + 1) / 2 + (j - i - 1)
        }
    }

    /// Inverse of [`EdgeSpace::index`].
    pub fn endpoints(&self, e: usize) -> Result<(usize, usize)> {
        if e >= self.len() {
            return Err(Error::domain(format!(
                "edge index {e} out of range for N = {}",
                self.len()
            )));
        }
        Ok(self.endpoints_unchecked(e))
    }

    pub(crate) fn endpoints_unchecked(&self, e: usize) -> (usize, usize) {
        let n = self.n;
        if self.directed {
            let i = e / (n - 1);
            let r = e % (n - 1);
            (i, if r < i { r } else { r + 1 })
        } else {
            // Row i starts at i*n - i(i+1)/2; solve the quadratic then fix rounding.
            let b = (2 * n - 1) as f64;
            let mut i = ((b - (b * b - 8.0 * e as f64).max(0.0).sqrt()) / 2.0).floor() as usize;
            let start = |i: usize| i * n - i * (i + 1) / 2;
            while i > 0 && start(i) > e {
                i -= 1;
            }
            while i + 1 < n && start(i + 1) <= e {
                i += 1;
            }
            (i, i + 1 + (e - start(i)))
        }
    }

    /// All `(index, i, j)` triples in index order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        let directed = self.directed;
        (0..n)
            .flat_map(move |i| {
                let lo = if directed { 0 } else { i + 1 };
                (lo..n).filter(move |&j| j != i).map(move |j| (i, j))
            })
            .enumerate()
            .map(|(e, (i, j))| (e, i, j))
    }

    /// Coordinates touching `v` (both directions for directed spaces).
    pub fn incident(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let directed = self.directed;
        (0..self.n).filter(move |&w| w != v).flat_map(move |w| {
            let first = self.index_unchecked(v, w);
            let second = directed.then(|| self.index_unchecked(w, v));
            std::iter::once(first).chain(second)
        })
    }
}

/// Uniform distribution on `{x >= 0 : sum_e alpha_e x_e <= L}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexModel<T> {
    space: EdgeSpace,
    alpha: Vec<T>,
    budget: T,
    bound: Option<T>,
}

impl<T: Scalar> SimplexModel<T> {
    /// All weights one and budget `L = N`.
    pub fn unit(space: EdgeSpace) -> Self {
        Self {
            space,
            alpha: vec![T::one(); space.len()],
            budget: count(space.len()),
            bound: None,
        }
    }

    pub fn new(space: EdgeSpace, alpha: Vec<T>, budget: T) -> Result<Self> {
        if alpha.len() != space.len() {
            return Err(Error::domain(format!(
                "expected {} weights, got {}",
                space.len(),
                alpha.len()
            )));
        }
        if let Some(e) = alpha.iter().position(|a| !(a.is_finite() && *a > T::zero())) {
            return Err(Error::domain(format!(
                "weight alpha[{e}] = {} is not a positive real",
                alpha[e]
            )));
        }
        if !(budget.is_finite() && budget > T::zero()) {
            return Err(Error::domain(format!("budget L = {budget} must be positive")));
        }
        Ok(Self { space, alpha, budget, bound: None })
    }

    /// Weights with the default budget `L = N`.
    pub fn with_weights(space: EdgeSpace, alpha: Vec<T>) -> Result<Self> {
        Self::new(space, alpha, count(space.len()))
    }

    /// Declares the boundedness constant `M`, checking `1/M <= alpha_e <= M`.
    pub fn with_bound(mut self, m: T) -> Result<Self> {
        if !(m >= T::one()) {
            return Err(Error::domain(format!("bound M = {m} must be at least 1")));
        }
        let lo = m.recip();
        if let Some(e) = self.alpha.iter().position(|&a| a < lo || a > m) {
            return Err(Error::domain(format!(
                "alpha[{e}] = {} violates 1/M <= alpha <= M for M = {m}",
                self.alpha[e]
            )));
        }
        self.bound = Some(m);
        Ok(self)
    }

    pub fn with_budget(mut self, budget: T) -> Result<Self> {
        if !(budget.is_finite() && budget > T::zero()) {
            return Err(Error::domain(format!("budget L = {budget} must be positive")));
        }
        self.budget = budget;
        Ok(self)
    }

    /// Random `M`-bounded weights, `alpha_e = M^u` with `u` uniform on `[-1, 1]`.
    pub fn random_bounded<R: Rng + ?Sized>(space: EdgeSpace, m: T, rng: &mut R) -> Result<Self> {
        if !(m >= T::one()) {
            return Err(Error::domain(format!("bound M = {m} must be at least 1")));
        }
        let ln_m = m.ln();
        let alpha = (0..space.len())
            .map(|_| {
                let u: f64 = rng.random_range(-1.0..=1.0);
                (lit::<T>(u) * ln_m).exp().max(m.recip()).min(m)
            })
            .collect();
        Self::with_weights(space, alpha)?.with_bound(m)
    }

    /// Directed model whose weight depends only on the head vertex: `alpha_(i,j) = beta_j`.
    pub fn row_symmetric(beta: &[T]) -> Result<Self> {
        let space = EdgeSpace::directed(beta.len())?;
        if let Some(w) = beta.iter().position(|b| !(b.is_finite() && *b > T::zero())) {
            return Err(Error::domain(format!("beta[{w}] = {} must be positive", beta[w])));
        }
        let alpha = space.pairs().map(|(_, _, j)| beta[j]).collect();
        Self::with_weights(space, alpha)
    }

    #[inline]
    pub fn space(&self) -> EdgeSpace {
        self.space
    }

    #[inline]
    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    #[inline]
    pub fn budget(&self) -> T {
        self.budget
    }

    #[inline]
    pub fn bound(&self) -> Option<T> {
        self.bound
    }

    /// Coordinate count `N`.
    #[inline]
    pub fn dimension(&self) -> usize {
        self.space.len()
    }

    pub fn is_unit(&self) -> bool {
        self.alpha.iter().all(|&a| a == T::one())
    }

    pub fn is_row_symmetric(&self) -> bool {
        if !self.space.is_directed() {
            return false;
        }
        let n = self.space.vertices();
        (0..n).all(|w| {
            let head = self.alpha[self.space.index_unchecked(if w == 0 { 1 } else { 0 }, w)];
            (0..n).filter(|&v| v != w).all(|v| self.alpha[self.space.index_unchecked(v, w)] == head)
        })
    }

    pub fn min_alpha(&self) -> T {
        self.alpha.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_alpha(&self) -> T {
        self.alpha.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Smallest `M` for which the weights are `M`-bounded.
    pub fn tightest_bound(&self) -> T {
        self.max_alpha().max(self.min_alpha().recip())
    }

    /// `alpha_v`, the total weight of coordinates touching `v`.
    pub fn vertex_alpha(&self, v: usize) -> Result<T> {
        if v >= self.space.vertices() {
            return Err(Error::domain(format!(
                "vertex {v} out of range for n = {}",
                self.space.vertices()
            )));
        }
        Ok(self.space.incident(v).fold(T::zero(), |acc, e| acc + self.alpha[e]))
    }

    /// `alpha_v` for every vertex in one pass over the coordinates.
    pub fn vertex_alphas(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.space.vertices()];
        for (e, i, j) in self.space.pairs() {
            out[i] = out[i] + self.alpha[e];
            out[j] = out[j] + self.alpha[e];
        }
        out
    }

    /// `alpha(S)` for a set of coordinates.
    pub fn alpha_sum(&self, set: &[usize]) -> Result<T> {
        set.iter().try_fold(T::zero(), |acc, &e| {
            self.alpha
                .get(e)
                .map(|&a| acc + a)
                .ok_or_else(|| Error::domain(format!("edge index {e} out of range")))
        })
    }

    /// Same budget, every weight multiplied by `c`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        let alpha = self.alpha.iter().map(|&a| a * c).collect();
        Self::new(self.space, alpha, self.budget)
    }
}

/// Per-vertex parameters `d_v` inducing `alpha_vw = d_v d_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposableWeights<T> {
    d: Vec<T>,
}

impl<T: Scalar> DecomposableWeights<T> {
    pub fn new(d: Vec<T>) -> Result<Self> {
        if d.len() < 2 {
            return Err(Error::domain("decomposable weights need at least two vertices"));
        }
        if let Some(v) = d.iter().position(|x| !(x.is_finite() && *x > T::zero())) {
            return Err(Error::domain(format!("d[{v}] = {} must be positive", d[v])));
        }
        Ok(Self { d })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![T::one(); n])
    }

    /// Repeats `pattern` cyclically over `n` vertices.
    pub fn cyclic(n: usize, pattern: &[T]) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::domain("empty d pattern"));
        }
        Self::new((0..n).map(|v| pattern[v % pattern.len()]).collect())
    }

    pub fn values(&self) -> &[T] {
        &self.d
    }

    pub fn vertices(&self) -> usize {
        self.d.len()
    }

    /// `D = sum_v d_v`.
    pub fn total(&self) -> T {
        self.d.iter().copied().fold(T::zero(), |a, b| a + b)
    }

    /// `d_S = sum_{v in S} d_v`.
    pub fn subset_total(&self, set: &[usize]) -> T {
        set.iter().fold(T::zero(), |acc, &v| acc + self.d[v])
    }

    /// True when every `d_v` lies in `[1/omega, omega]`.
    pub fn within_regime(&self, omega: T) -> bool {
        let lo = omega.recip();
        self.d.iter().all(|&x| x >= lo && x <= omega)
    }

    /// Distinct values with multiplicities, in first-seen order.
    pub fn groups(&self) -> Vec<(T, usize)> {
        let mut groups: Vec<(T, usize)> = Vec::new();
        for &x in &self.d {
            match groups.iter_mut().find(|(v, _)| *v == x) {
                Some((_, m)) => *m += 1,
                None => groups.push((x, 1)),
            }
        }
        groups
    }

    /// Undirected simplex model with `alpha_vw = d_v d_w` and `L = N`.
    pub fn to_model(&self) -> Result<SimplexModel<T>> {
        let space = EdgeSpace::undirected(self.d.len())?;
        let alpha = space.pairs().map(|(_, i, j)| self.d[i] * self.d[j]).collect();
        SimplexModel::with_weights(space, alpha)
    }
}

/// One sampled point `X` in the positive orthant, indexed by an [`EdgeSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector<T> {
    space: EdgeSpace,
    x: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(space: EdgeSpace, x: Vec<T>) -> Result<Self> {
        if x.len() != space.len() {
            return Err(Error::domain(format!(
                "expected {} coordinates, got {}",
                space.len(),
                x.len()
            )));
        }
        if let Some(e) = x.iter().position(|v| !(*v >= T::zero())) {
            return Err(Error::domain(format!("coordinate {e} = {} is negative", x[e])));
        }
        Ok(Self { space, x })
    }

    pub(crate) fn from_raw(space: EdgeSpace, x: Vec<T>) -> Self {
        debug_assert_eq!(x.len(), space.len());
        Self { space, x }
    }

    #[inline]
    pub fn space(&self) -> EdgeSpace {
        self.space
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.x
    }

    #[inline]
    pub fn get(&self, e: usize) -> T {
        self.x[e]
    }

    pub fn into_values(self) -> Vec<T> {
        self.x
    }

    /// `sum_e alpha_e x_e`.
    pub fn weighted_sum(&self, alpha: &[T]) -> T {
        self.x
            .iter()
            .zip(alpha)
            .fold(T::zero(), |acc, (&x, &a)| acc + a * x)
    }

    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.x.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    /// Number of coordinates at or below `p`.
    pub fn count_at_most(&self, p: T) -> usize {
        self.x.iter().filter(|&&x| x <= p).count()
    }
}

/// Undirected graph `G_p` with edge set `{e : X_e <= p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdGraph {
    space: EdgeSpace,
    present: Vec<bool>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl ThresholdGraph {
    /// Graph on `n` vertices from an explicit edge list. Duplicates are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let space = EdgeSpace::undirected(n)?;
        let mut present = vec![false; space.len()];
        for &(i, j) in edges {
            present[space.index(i, j)?] = true;
        }
        Ok(Self::from_bitmap(space, present))
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    pub fn complete(n: usize) -> Result<Self> {
        let space = EdgeSpace::undirected(n)?;
        Ok(Self::from_bitmap(space, vec![true; space.len()]))
    }

    fn from_bitmap(space: EdgeSpace, present: Vec<bool>) -> Self {
        let mut adjacency = vec![Vec::new(); space.vertices()];
        let mut edge_count = 0;
        for (e, i, j) in space.pairs() {
            if present[e] {
                adjacency[i].push(j);
                adjacency[j].push(i);
                edge_count += 1;
            }
        }
        Self { space, present, adjacency, edge_count }
    }

    #[inline]
    pub fn vertices(&self) -> usize {
        self.space.vertices()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn space(&self) -> EdgeSpace {
        self.space
    }

    /// Edge bitmap in canonical index order.
    #[inline]
    pub fn bitmap(&self) -> &[bool] {
        &self.present
    }

    #[inline]
    pub fn has_edge_index(&self, e: usize) -> bool {
        self.present[e]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.space.index(i, j).map(|e| self.present[e]).unwrap_or(false)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.space
            .pairs()
            .filter(|&(e, _, _)| self.present[e])
            .map(|(_, i, j)| (i, j))
    }

    /// Edge set inclusion on a common vertex set.
    pub fn is_subgraph_of(&self, other: &ThresholdGraph) -> bool {
        self.space == other.space
            && self.present.iter().zip(&other.present).all(|(&a, &b)| !a || b)
    }
}

/// Keeps exactly the coordinates with `x_e <= p`.
pub fn threshold<T: Scalar>(x: &WeightVector<T>, p: T) -> Result<ThresholdGraph> {
    if !(p >= T::zero()) {
        return Err(Error::domain(format!("threshold p = {p} must be non-negative")));
    }
    if x.space().is_directed() {
        return Err(Error::domain("threshold graphs are built on undirected edge spaces"));
    }
    let space = x.space();
    let n = space.vertices();
    let mut present = vec![false; space.len()];
    let mut adjacency = vec![Vec::new(); n];
    let mut edge_count = 0;
    let mut e = 0;
    for i in 0..n {
        for j in i + 1..n {
            if x.x[e] <= p {
                present[e] = true;
                adjacency[i].push(j);
                adjacency[j].push(i);
                edge_count += 1;
            }
            e += 1;
        }
    }
    Ok(ThresholdGraph { space, present, adjacency, edge_count })
}
