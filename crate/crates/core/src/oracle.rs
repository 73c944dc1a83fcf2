//! Closed-form probabilities for the uniform simplex model.

use crate::error::{Error, Result};
use crate::model::{DecomposableWeights, SimplexModel};
use crate::sampling::{simplex_second_moment, simplex_survival, DensityModel};
use crate::scalar::{count, lit, one_minus_pow, Scalar};

fn check_p<T: Scalar>(p: T) -> Result<()> {
    if !(p >= T::zero()) {
        return Err(Error::domain(format!("p = {p} must be non-negative")));
    }
    Ok(())
}

fn check_distinct(model_len: usize, sets: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; model_len];
    for set in sets {
        for &e in *set {
            if e >= model_len {
                return Err(Error::domain(format!("edge index {e} out of range")));
            }
            if seen[e] {
                return Err(Error::domain(format!("edge index {e} repeated or shared between sets")));
            }
            seen[e] = true;
        }
    }
    Ok(())
}

/// `P(S ∩ E_p = ∅) = (1 - alpha(S) p / L)^N`, zero once `alpha(S) p >= L`.
pub fn prob_all_absent<T: Scalar>(model: &SimplexModel<T>, absent: &[usize], p: T) -> Result<T> {
    check_p(p)?;
    check_distinct(model.dimension(), &[absent])?;
    Ok(simplex_survival(model, model.alpha_sum(absent)?, p))
}

/// Leading-order value with a multiplicative error bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approximation<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
}

impl<T: Scalar> Approximation<T> {
    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `P(S ∩ E_p = ∅, T ⊆ E_p)` to leading order,
/// `(prod_{e in T} alpha_e) (N p / L)^{|T|} (1 - alpha(S) p / L)^N`.
///
/// The bracket is `value * exp(±B)` with
/// `B = 2 (|T|^2 / N + alpha(T) N p / L + alpha(S) |T| p / L)`; it collapses
/// to the exact value when `T` is empty.
pub fn prob_absent_present<T: Scalar>(
    model: &SimplexModel<T>,
    absent: &[usize],
    present: &[usize],
    p: T,
) -> Result<Approximation<T>> {
    check_p(p)?;
    check_distinct(model.dimension(), &[absent, present])?;
    let n = count::<T>(model.dimension());
    let l = model.budget();
    let alpha_s = model.alpha_sum(absent)?;
    let alpha_t = model.alpha_sum(present)?;
    let t = count::<T>(present.len());
    let prod = present.iter().fold(T::one(), |acc, &e| acc * model.alpha()[e]);
    let value = prod * (n * p / l).powi(present.len() as i32) * simplex_survival(model, alpha_s, p);
    let spread = lit::<T>(2.0) * (t * t / n + alpha_t * n * p / l + alpha_s * t * p / l);
    Ok(Approximation {
        value,
        lower: value * (-spread).exp(),
        upper: value * spread.exp(),
    })
}

fn require_unit<T: Scalar>(model: &SimplexModel<T>) -> Result<()> {
    if !model.is_unit() {
        return Err(Error::domain("formula requires all weights alpha_e = 1"));
    }
    Ok(())
}

/// `q = P(X_e <= p) = 1 - (1 - p/L)^N` for unit weights.
pub fn edge_prob_q<T: Scalar>(model: &SimplexModel<T>, p: T) -> Result<T> {
    require_unit(model)?;
    check_p(p)?;
    Ok(T::one() - one_minus_pow(p / model.budget(), model.dimension()))
}

/// `E(m) = qN`, the mean number of edges of `G_p` for unit weights.
pub fn expected_edge_count<T: Scalar>(model: &SimplexModel<T>, p: T) -> Result<T> {
    Ok(edge_prob_q(model, p)? * count(model.dimension()))
}

/// Upper bound `qN` on `Var(m)` for unit weights.
pub fn edge_count_variance_bound<T: Scalar>(model: &SimplexModel<T>, p: T) -> Result<T> {
    expected_edge_count(model, p)
}

/// Exact `Var(m)` for unit weights from the one- and two-edge absence probabilities.
pub fn edge_count_variance<T: Scalar>(model: &SimplexModel<T>, p: T) -> Result<T> {
    let q = edge_prob_q(model, p)?;
    let big_n = model.dimension();
    let n = count::<T>(big_n);
    let x = p / model.budget();
    let both = T::one() - lit::<T>(2.0) * one_minus_pow(x, big_n) + one_minus_pow(x + x, big_n);
    Ok(n * q * (T::one() - q) + n * (n - T::one()) * (both - q * q))
}

/// Isolation probabilities `xi_v(p) = (1 - alpha_v p / L)^N` and their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolationProfile<T> {
    pub xi: Vec<T>,
    pub total: T,
}

pub fn isolation_profile<T: Scalar>(model: &SimplexModel<T>, p: T) -> Result<IsolationProfile<T>> {
    check_p(p)?;
    let xi: Vec<T> = model
        .vertex_alphas()
        .into_iter()
        .map(|a| simplex_survival(model, a, p))
        .collect();
    let total = xi.iter().copied().fold(T::zero(), |a, b| a + b);
    Ok(IsolationProfile { xi, total })
}

fn isolation_total<T: Scalar>(model: &SimplexModel<T>, vertex_alpha: &[T], p: T) -> T {
    vertex_alpha
        .iter()
        .fold(T::zero(), |acc, &a| acc + simplex_survival(model, a, p))
}

const P0_MAX_ITER: usize = 200;

/// Root `p_0` of `sum_v xi_v(p) = 1`.
///
/// The sum equals `n > 1` at zero, is strictly decreasing while any `xi_v`
/// is positive, and vanishes at `L / min_v alpha_v`, so bisection on that
/// bracket always converges.
pub fn solve_p0<T: Scalar>(model: &SimplexModel<T>) -> T {
    let alphas = model.vertex_alphas();
    let min_alpha = alphas.iter().copied().fold(T::infinity(), T::min);
    let mut lo = T::zero();
    let mut hi = model.budget() / min_alpha;
    // Runs to machine precision, well inside the 1e-12 relative target.
    for _ in 0..P0_MAX_ITER {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if isolation_total(model, &alphas, mid) > T::one() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / lit(2.0)
}

/// Exact second moment `E(X_e^2) = 2 L^2 / (alpha_e^2 (N+1)(N+2))` of a
/// simplex coordinate.
pub fn sigma_simplex<T: Scalar>(model: &SimplexModel<T>, e: usize) -> Result<T> {
    if e >= model.dimension() {
        return Err(Error::domain(format!("edge index {e} out of range")));
    }
    Ok(simplex_second_moment(model, e))
}

/// Large-`N` form `2 L^2 / (alpha_e^2 N (N+1))` of [`sigma_simplex`]; the two
/// differ by the factor `(N+2)/N`.
pub fn sigma_simplex_leading_order<T: Scalar>(model: &SimplexModel<T>, e: usize) -> Result<T> {
    if e >= model.dimension() {
        return Err(Error::domain(format!("edge index {e} out of range")));
    }
    let n = count::<T>(model.dimension());
    let l = model.budget();
    let a = model.alpha()[e];
    Ok(lit::<T>(2.0) * l * l / (a * a * n * (n + T::one())))
}

/// How [`mst_series`] evaluates the subset sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMode {
    /// Enumerate every subset; `n <= 20`.
    Exact,
    /// Sum over count vectors of the distinct `d` values; at most 4 distinct values.
    Grouped,
    /// Integral form, stopped once three consecutive terms fall below
    /// `1e-12` of the partial sum.
    Truncated,
}

pub const EXACT_SERIES_MAX_N: usize = 20;
pub const GROUPED_SERIES_MAX_VALUES: usize = 4;
const TRUNCATION_REL: f64 = 1e-12;

/// `sum_k (k-1)!/D^k sum_{|S|=k} prod_{v in S} d_v / d_S^2`.
///
/// All modes work with `u_v = d_v / D`, using
/// `(k-1)!/D^k * prod d_v / d_S^2 = (k-1)! prod u_v / (D^2 u_S^2)`.
pub fn mst_series<T: Scalar>(weights: &DecomposableWeights<T>, mode: SeriesMode) -> Result<T> {
    let total = weights.total();
    let u: Vec<T> = weights.values().iter().map(|&d| d / total).collect();
    let scaled = match mode {
        SeriesMode::Exact => series_exact(&u)?,
        SeriesMode::Grouped => series_grouped(weights, total)?,
        SeriesMode::Truncated => series_truncated(&u),
    };
    Ok(scaled / (total * total))
}

/// `ln(k!)` for `k = 0..=n`.
fn ln_factorials<T: Scalar>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::zero());
    for k in 1..=n {
        let prev = out[k - 1];
        out.push(prev + count::<T>(k).ln());
    }
    out
}

fn series_exact<T: Scalar>(u: &[T]) -> Result<T> {
    let n = u.len();
    if n > EXACT_SERIES_MAX_N {
        return Err(Error::capacity(format!(
            "exact series enumerates 2^n subsets; n = {n} exceeds {EXACT_SERIES_MAX_N}"
        )));
    }
    let mut by_size = vec![T::zero(); n + 1];
    fn visit<T: Scalar>(u: &[T], start: usize, k: usize, sum: T, prod: T, acc: &mut [T]) {
        for v in start..u.len() {
            let (s, p) = (sum + u[v], prod * u[v]);
            acc[k + 1] = acc[k + 1] + p / (s * s);
            visit(u, v + 1, k + 1, s, p, acc);
        }
    }
    visit(u, 0, 0, T::zero(), T::one(), &mut by_size);
    let ln_fact = ln_factorials::<T>(n);
    Ok((1..=n).fold(T::zero(), |acc, k| acc + ln_fact[k - 1].exp() * by_size[k]))
}

fn series_grouped<T: Scalar>(weights: &DecomposableWeights<T>, total: T) -> Result<T> {
    let groups = weights.groups();
    if groups.len() > GROUPED_SERIES_MAX_VALUES {
        return Err(Error::capacity(format!(
            "grouped series supports at most {GROUPED_SERIES_MAX_VALUES} distinct d values, found {}",
            groups.len()
        )));
    }
    let n = weights.vertices();
    let ln_fact = ln_factorials::<T>(n);
    let ln_choose = |m: usize, k: usize| ln_fact[m] - ln_fact[k] - ln_fact[m - k];
    let values: Vec<T> = groups.iter().map(|&(d, _)| d / total).collect();
    let mults: Vec<usize> = groups.iter().map(|&(_, m)| m).collect();

    let mut sum = T::zero();
    let mut counts = vec![0usize; groups.len()];
    // Odometer over count vectors 0 <= counts[i] <= mults[i].
    loop {
        let mut i = 0;
        loop {
            if i == counts.len() {
                return Ok(sum);
            }
            if counts[i] < mults[i] {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        let k: usize = counts.iter().sum();
        let mut ln_term = ln_fact[k - 1];
        let mut u_s = T::zero();
        for ((&c, &m), &v) in counts.iter().zip(&mults).zip(&values) {
            if c > 0 {
                ln_term = ln_term + ln_choose(m, c) + count::<T>(c) * v.ln();
                u_s = u_s + count::<T>(c) * v;
            }
        }
        sum = sum + ln_term.exp() / (u_s * u_s);
    }
}

/// `sum_{|S|=k} prod u_v / u_S^2 = ∫ t e_k(u e^{-tu}) dt` with `t = e^s`,
/// integrated by the trapezoidal rule in `s`, where the integrand decays
/// double exponentially on the right and exponentially on the left.
fn series_truncated<T: Scalar>(u: &[T]) -> T {
    let n = u.len();
    let mut k_max = 32.min(n);
    loop {
        let terms = truncated_terms(u, k_max);
        let mut partial = T::zero();
        let mut small_run = 0;
        let rel = lit::<T>(TRUNCATION_REL);
        for &term in &terms {
            partial = partial + term;
            if term < rel * partial {
                small_run += 1;
                if small_run == 3 {
                    return partial;
                }
            } else {
                small_run = 0;
            }
        }
        if k_max == n {
            return partial;
        }
        k_max = (2 * k_max).min(n);
    }
}

/// `(k-1)! sum_{|S|=k} prod u_v / u_S^2` for `k = 1..=k_max`.
fn truncated_terms<T: Scalar>(u: &[T], k_max: usize) -> Vec<T> {
    let u_min = u.iter().copied().fold(T::infinity(), T::min);
    let u_max = u.iter().copied().fold(T::zero(), T::max);
    let step = lit::<T>(0.05);
    let s_lo = (lit::<T>(1e-9) / (count::<T>(k_max) * u_max)).ln();
    let s_hi = (lit::<T>(50.0) / u_min).ln();
    let nodes = ((s_hi - s_lo) / step).ceil().to_usize().unwrap_or(0) + 1;

    let mut integrals = vec![T::zero(); k_max + 1];
    // e_scaled[k] = k! e_k(w)
    let mut e_scaled = vec![T::zero(); k_max + 1];
    for i in 0..nodes {
        let s = s_lo + count::<T>(i) * step;
        let t = s.exp();
        e_scaled.iter_mut().for_each(|v| *v = T::zero());
        e_scaled[0] = T::one();
        for (j, &uv) in u.iter().enumerate() {
            let w = uv * (-t * uv).exp();
            let top = k_max.min(j + 1);
            for k in (1..=top).rev() {
                e_scaled[k] = e_scaled[k] + count::<T>(k) * w * e_scaled[k - 1];
            }
        }
        let weight = t * t * step;
        for k in 1..=k_max {
            integrals[k] = integrals[k] + weight * e_scaled[k];
        }
    }
    (1..=k_max).map(|k| integrals[k] / count::<T>(k)).collect()
}

/// One grid point of [`check_basic_bounds`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundRow<T> {
    pub p: T,
    pub cdf: T,
    /// `p M_f`
    pub upper: T,
    /// `p M_f / 2`
    pub lower: T,
    /// `p / (2 sigma)`
    pub lower_sigma: T,
    pub upper_ok: bool,
    pub lower_ok: bool,
    pub lower_sigma_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport<T> {
    /// Standard deviation of the marginal.
    pub sigma: T,
    /// Marginal density maximum `M_f`.
    pub mode_density: T,
    pub rows: Vec<BoundRow<T>>,
    /// Grid points above `sigma`, where the lower bound is not claimed.
    pub skipped: Vec<T>,
}

impl<T: Scalar> BoundsReport<T> {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.upper_ok && r.lower_ok && r.lower_sigma_ok)
    }
}

/// Checks `P(X_e <= p) <= p M_f` together with the two lower bounds
/// `p M_f / 2` and `p / (2 sigma)` on the grid points in `[0, sigma]`.
pub fn check_basic_bounds<T: Scalar>(
    model: &DensityModel<T>,
    e: usize,
    grid: &[T],
) -> Result<BoundsReport<T>> {
    let sigma = model.std_dev(e)?;
    let mode_density = model.mode_density(e)?;
    let slack = lit::<T>(1e-12);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &p in grid {
        check_p(p)?;
        if p > sigma {
            skipped.push(p);
            continue;
        }
        let cdf = model.marginal_cdf(e, p)?;
        let upper = p * mode_density;
        let lower = upper / lit(2.0);
        let lower_sigma = p / (lit::<T>(2.0) * sigma);
        rows.push(BoundRow {
            p,
            cdf,
            upper,
            lower,
            lower_sigma,
            upper_ok: cdf <= upper * (T::one() + slack),
            lower_ok: cdf >= lower * (T::one() - slack),
            lower_sigma_ok: cdf >= lower_sigma * (T::one() - slack),
        });
    }
    Ok(BoundsReport { sigma, mode_density, rows, skipped })
}
