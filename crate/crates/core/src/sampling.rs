//! Reproducible samplers for the edge-weight distributions.
//!
//! Every sampler draws from a [`ChaCha8Rng`] keyed by a base seed and a
//! stream id. ChaCha is counter based, so each trial owns an independent
//! stream without any state handoff between workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::model::{EdgeSpace, SimplexModel, WeightVector};
use crate::quadrature::adaptive_simpson;
use crate::scalar::{count, lit, one_minus_pow, Scalar};

/// Base seed plus stream id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeededRng {
    pub seed: u64,
    pub stream: u64,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Stream for trial `trial` of schedule point `point`.
    pub fn for_trial(seed: u64, point: usize, trial: usize) -> Self {
        Self::new(seed, splitmix64(((point as u64) << 32) ^ trial as u64 ^ 0x5eed_0000_0000_0000))
    }

    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Unit-rate exponential by inversion, `-ln(1 - U)`.
#[inline]
pub fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p()
}

/// Uniform point of `{x >= 0 : sum alpha_e x_e <= L}`.
///
/// Draws `N + 1` unit exponentials `E_k`, sets `y_e = L E_e / sum_k E_k` and
/// returns `x_e = y_e / alpha_e`.
pub fn sample_simplex<T: Scalar, R: Rng + ?Sized>(
    model: &SimplexModel<T>,
    rng: &mut R,
) -> WeightVector<T> {
    let n = model.dimension();
    let mut draws: Vec<f64> = (0..n).map(|_| unit_exponential(rng)).collect();
    let total = draws.iter().sum::<f64>() + unit_exponential(rng);
    let budget = model.budget();
    let budget_f = budget.to_f64().unwrap_or(f64::NAN);
    let x: Vec<T> = draws
        .drain(..)
        .zip(model.alpha())
        .map(|(e, &a)| lit::<T>(budget_f * e / total) / a)
        .collect();
    let mut x = WeightVector::from_raw(model.space(), x);
    // Rounding can push the constraint over the boundary by a few ulps.
    let mut s = x.weighted_sum(model.alpha());
    while s > budget {
        let shrink = budget / s * (T::one() - T::epsilon() * lit(4.0));
        let values: Vec<T> = x.values().iter().map(|&v| v * shrink).collect();
        x = WeightVector::from_raw(model.space(), values);
        s = x.weighted_sum(model.alpha());
    }
    x
}

/// Independent exponential coordinates with rates `rates[e]`.
pub fn sample_product_exponential<T: Scalar, R: Rng + ?Sized>(
    rates: &[T],
    space: EdgeSpace,
    rng: &mut R,
) -> Result<WeightVector<T>> {
    check_rates(rates, space)?;
    let x = rates.iter().map(|&l| lit::<T>(unit_exponential(rng)) / l).collect();
    Ok(WeightVector::from_raw(space, x))
}

fn check_rates<T: Scalar>(rates: &[T], space: EdgeSpace) -> Result<()> {
    if rates.len() != space.len() {
        return Err(Error::domain(format!(
            "expected {} rates, got {}",
            space.len(),
            rates.len()
        )));
    }
    if let Some(e) = rates.iter().position(|l| !(l.is_finite() && *l > T::zero())) {
        return Err(Error::domain(format!("rate[{e}] = {} must be positive", rates[e])));
    }
    Ok(())
}

/// Uniform point of `{x >= 0 : |x|_2 <= R}`: a uniform point of the full
/// ball folded into the positive orthant.
pub fn sample_orthant_ball<T: Scalar, R: Rng + ?Sized>(
    radius: T,
    space: EdgeSpace,
    rng: &mut R,
) -> Result<WeightVector<T>> {
    check_radius(radius)?;
    let n = space.len();
    let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u: f64 = rng.random();
    let r = radius.to_f64().unwrap_or(f64::NAN) * u.powf(1.0 / n as f64);
    let mut x: Vec<T> = g.iter().map(|v| lit::<T>((v / norm).abs() * r)).collect();
    let mut len = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
    while len > radius {
        let shrink = radius / len * (T::one() - T::epsilon() * lit(4.0));
        x.iter_mut().for_each(|v| *v = *v * shrink);
        len = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
    }
    Ok(WeightVector::from_raw(space, x))
}

fn check_radius<T: Scalar>(radius: T) -> Result<()> {
    if !(radius.is_finite() && radius > T::zero()) {
        return Err(Error::domain(format!("radius R = {radius} must be positive")));
    }
    Ok(())
}

/// Uniform distribution on the positive part of the Euclidean ball.
///
/// The one-dimensional marginal has density proportional to
/// `(1 - x^2/R^2)^((N-1)/2)` on `[0, R]`; its normaliser is computed once by
/// quadrature when the model is built.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthantBall<T> {
    space: EdgeSpace,
    radius: T,
    normalizer: T,
    peak_width: T,
}

impl<T: Scalar> OrthantBall<T> {
    pub fn new(space: EdgeSpace, radius: T) -> Result<Self> {
        check_radius(radius)?;
        let n = count::<T>(space.len());
        // Beyond ~40 widths the kernel is below e^{-800}; splitting there keeps
        // the adaptive rule from stepping over the peak.
        let peak_width = (radius * lit::<T>(40.0) / n.sqrt()).min(radius);
        let mut ball = Self { space, radius, normalizer: T::one(), peak_width };
        ball.normalizer = ball.integrate(radius);
        Ok(ball)
    }

    #[inline]
    pub fn radius(&self) -> T {
        self.radius
    }

    #[inline]
    pub fn space(&self) -> EdgeSpace {
        self.space
    }

    fn kernel(&self, x: T) -> T {
        let t = x / self.radius;
        let half = (count::<T>(self.space.len()) - T::one()) / lit(2.0);
        if t > T::one() {
            T::zero()
        } else if half == T::zero() {
            T::one()
        } else if t == T::one() {
            T::zero()
        } else {
            (half * (-(t * t)).ln_1p()).exp()
        }
    }

    fn integrate(&self, upper: T) -> T {
        let f = |x: T| self.kernel(x);
        let tol = lit::<T>(1e-14) * self.radius;
        let split = self.peak_width.min(upper);
        let mut v = adaptive_simpson(&f, T::zero(), split, tol);
        if upper > split {
            v = v + adaptive_simpson(&f, split, upper, tol);
        }
        v
    }

    pub fn cdf(&self, p: T) -> T {
        if p >= self.radius {
            return T::one();
        }
        (self.integrate(p) / self.normalizer).min(T::one())
    }

    /// Marginal density at zero, its maximum.
    pub fn mode_density(&self) -> T {
        self.normalizer.recip()
    }

    pub fn mean(&self) -> T {
        let n = count::<T>(self.space.len());
        self.radius * self.radius / ((n + T::one()) * self.normalizer)
    }

    /// `E(X_e^2) = R^2 / (N + 2)`.
    pub fn second_moment(&self) -> T {
        let n = count::<T>(self.space.len());
        self.radius * self.radius / (n + lit(2.0))
    }
}

/// Distribution families supported on the positive orthant with
/// down-monotone logconcave densities.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityModel<T> {
    Simplex(SimplexModel<T>),
    ProductExponential { space: EdgeSpace, rates: Vec<T> },
    OrthantBall(OrthantBall<T>),
}

impl<T: Scalar> DensityModel<T> {
    pub fn product_exponential(space: EdgeSpace, rates: Vec<T>) -> Result<Self> {
        check_rates(&rates, space)?;
        Ok(DensityModel::ProductExponential { space, rates })
    }

    pub fn orthant_ball(space: EdgeSpace, radius: T) -> Result<Self> {
        Ok(DensityModel::OrthantBall(OrthantBall::new(space, radius)?))
    }

    pub fn space(&self) -> EdgeSpace {
        match self {
            DensityModel::Simplex(m) => m.space(),
            DensityModel::ProductExponential { space, .. } => *space,
            DensityModel::OrthantBall(b) => b.space(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightVector<T> {
        match self {
            DensityModel::Simplex(m) => sample_simplex(m, rng),
            DensityModel::ProductExponential { space, rates } => {
                sample_product_exponential(rates, *space, rng).expect("rates validated")
            }
            DensityModel::OrthantBall(b) => {
                sample_orthant_ball(b.radius(), b.space(), rng).expect("radius validated")
            }
        }
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.space().len() {
            return Err(Error::domain(format!("edge index {e} out of range")));
        }
        Ok(())
    }

    /// Exact `P(X_e <= p)`.
    pub fn marginal_cdf(&self, e: usize, p: T) -> Result<T> {
        self.check_edge(e)?;
        if !(p >= T::zero()) {
            return Err(Error::domain(format!("p = {p} must be non-negative")));
        }
        Ok(match self {
            DensityModel::Simplex(m) => {
                let x = m.alpha()[e] * p / m.budget();
                if x >= T::one() {
                    T::one()
                } else {
                    -(count::<T>(m.dimension()) * (-x).ln_1p()).exp_m1()
                }
            }
            DensityModel::ProductExponential { rates, .. } => -(-rates[e] * p).exp_m1(),
            DensityModel::OrthantBall(b) => b.cdf(p),
        })
    }

    /// Maximum of the marginal density of coordinate `e` (attained at 0).
    pub fn mode_density(&self, e: usize) -> Result<T> {
        self.check_edge(e)?;
        Ok(match self {
            DensityModel::Simplex(m) => count::<T>(m.dimension()) * m.alpha()[e] / m.budget(),
            DensityModel::ProductExponential { rates, .. } => rates[e],
            DensityModel::OrthantBall(b) => b.mode_density(),
        })
    }

    pub fn mean(&self, e: usize) -> Result<T> {
        self.check_edge(e)?;
        Ok(match self {
            DensityModel::Simplex(m) => {
                m.budget() / (m.alpha()[e] * (count::<T>(m.dimension()) + T::one()))
            }
            DensityModel::ProductExponential { rates, .. } => rates[e].recip(),
            DensityModel::OrthantBall(b) => b.mean(),
        })
    }

    /// `E(X_e^2)`.
    pub fn second_moment(&self, e: usize) -> Result<T> {
        self.check_edge(e)?;
        Ok(match self {
            DensityModel::Simplex(m) => simplex_second_moment(m, e),
            DensityModel::ProductExponential { rates, .. } => lit::<T>(2.0) / (rates[e] * rates[e]),
            DensityModel::OrthantBall(b) => b.second_moment(),
        })
    }

    /// Standard deviation of the marginal of coordinate `e`.
    pub fn std_dev(&self, e: usize) -> Result<T> {
        let m = self.mean(e)?;
        Ok((self.second_moment(e)? - m * m).max(T::zero()).sqrt())
    }

    /// `min_e sqrt(E(X_e^2))`.
    pub fn sigma_min(&self) -> T {
        (0..self.space().len())
            .map(|e| self.second_moment(e).expect("in range").sqrt())
            .fold(T::infinity(), T::min)
    }

    /// `max_e sqrt(E(X_e^2))`.
    pub fn sigma_max(&self) -> T {
        (0..self.space().len())
            .map(|e| self.second_moment(e).expect("in range").sqrt())
            .fold(T::neg_infinity(), T::max)
    }
}

/// Exact `E(X_e^2) = 2 L^2 / (alpha_e^2 (N+1)(N+2))` for the uniform simplex.
pub(crate) fn simplex_second_moment<T: Scalar>(m: &SimplexModel<T>, e: usize) -> T {
    let n = count::<T>(m.dimension());
    let l = m.budget();
    let a = m.alpha()[e];
    lit::<T>(2.0) * l * l / (a * a * (n + T::one()) * (n + lit(2.0)))
}

/// `P(X_e > p)` for the simplex, `(1 - alpha_e p / L)^N`.
pub(crate) fn simplex_survival<T: Scalar>(m: &SimplexModel<T>, alpha_total: T, p: T) -> T {
    one_minus_pow(alpha_total * p / m.budget(), m.dimension())
}
