mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use lcgraph::experiments::{build_model, run_sweep, ExperimentConfig};
use lcgraph::model::EdgeSpace;
use lcgraph::oracle::{prob_absent_present, prob_all_absent};
use lcgraph::sampling::{sample_simplex, DensityModel, OrthantBall, SeededRng};
use lcgraph::stats::{ks_distance, mean_variance};
use lcgraph::SimplexModel;

/// `P(|X_1| <= p)` for `X` uniform in the `dim`-ball of radius `r`:
/// `X_1^2 / r^2` is Beta(1/2, (dim+1)/2).
fn ball_marginal_cdf(dim: usize, r: f64, p: f64) -> f64 {
    if p >= r {
        return 1.0;
    }
    beta_reg(0.5, (dim as f64 + 1.0) / 2.0, (p / r).powi(2))
}

#[test]
fn ball_cdf_matches_incomplete_beta() {
    for n in [2, 3, 10, 30, 300] {
        let space = EdgeSpace::undirected(n).unwrap();
        for r in [1.0, 2.5] {
            let ball = OrthantBall::<f64>::new(space, r).unwrap();
            // probe where the mass is: a few marginal scales r / sqrt(N)
            let scale = r / (space.len() as f64).sqrt();
            for k in 0..=40 {
                let p = (k as f64 / 40.0 * 6.0 * scale).min(r);
                let want = ball_marginal_cdf(space.len(), r, p);
                let got = ball.cdf(p);
                assert!((got - want).abs() < 1e-8, "n={n} r={r} p={p}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn ball_mode_density_and_moments() {
    for n in [3, 12, 60] {
        let space = EdgeSpace::undirected(n).unwrap();
        let dim = space.len() as f64;
        let r = 1.7;
        let ball = OrthantBall::<f64>::new(space, r).unwrap();
        // density of |X_1| at 0: 2 Gamma(N/2 + 1) / (sqrt(pi) Gamma((N+1)/2) r)
        let mode = 2.0 * (ln_gamma(dim / 2.0 + 1.0) - ln_gamma((dim + 1.0) / 2.0)).exp() / (std::f64::consts::PI.sqrt() * r);
        assert!((ball.mode_density() - mode).abs() < 1e-8 * mode, "n={n}");
        let second = r * r / (dim + 2.0);
        assert!((ball.second_moment() - second).abs() < 1e-12 * second);
        // E|X_1| = r Gamma(N/2 + 1) / (sqrt(pi) Gamma((N+3)/2))
        let mean = r * (ln_gamma(dim / 2.0 + 1.0) - ln_gamma((dim + 3.0) / 2.0)).exp() / std::f64::consts::PI.sqrt();
        assert!((ball.mean() - mean).abs() < 1e-8 * mean, "n={n}");
    }
}

#[test]
fn ball_sampler_marginal() {
    let space = EdgeSpace::undirected(8).unwrap();
    let model = DensityModel::<f64>::orthant_ball(space, 2.0).unwrap();
    let mut rng = SeededRng::new(31, 0).generator();
    let m = 20_000;
    for e in [0, 27] {
        let xs: Vec<f64> = (0..m).map(|_| model.sample(&mut rng).get(e)).collect();
        let d = ks_distance(&xs, |p| ball_marginal_cdf(28, 2.0, p));
        // 99% Kolmogorov critical value
        assert!(d < 1.63 / (m as f64).sqrt(), "edge {e}: {d}");
        let norm2: f64 = {
            let x = model.sample(&mut rng);
            x.values().iter().map(|v| v * v).sum()
        };
        assert!(norm2 <= 4.0 * (1.0 + 1e-12));
    }
}

#[test]
fn exponential_sampler_marginal() {
    let space = EdgeSpace::undirected(6).unwrap();
    let rates: Vec<f64> = (0..15).map(|e| 0.5 + e as f64 * 0.25).collect();
    let model = DensityModel::product_exponential(space, rates.clone()).unwrap();
    let mut rng = SeededRng::new(32, 0).generator();
    let m = 20_000;
    let draws: Vec<_> = (0..m).map(|_| model.sample(&mut rng)).collect();
    for e in [0, 7, 14] {
        let xs: Vec<f64> = draws.iter().map(|x| x.get(e)).collect();
        let d = ks_distance(&xs, |p| 1.0 - (-rates[e] * p).exp());
        assert!(d < 1.63 / (m as f64).sqrt(), "edge {e}: {d}");
    }
    // coordinates are independent: the sample correlation is near zero
    let a: Vec<f64> = draws.iter().map(|x| x.get(0)).collect();
    let b: Vec<f64> = draws.iter().map(|x| x.get(1)).collect();
    let (ma, va) = mean_variance(&a);
    let (mb, vb) = mean_variance(&b);
    let cov = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (m as f64 - 1.0);
    assert!((cov / (va * vb).sqrt()).abs() < 4.0 / (m as f64).sqrt());
}

#[test]
fn simplex_coordinates_are_negatively_correlated() {
    // Cov(X_e, X_f) = -L^2 / ((N+1)^2 (N+2)) for the unit simplex
    let space = EdgeSpace::undirected(5).unwrap();
    let model = SimplexModel::<f64>::unit(space);
    let dim: f64 = 10.0;
    let mut rng = SeededRng::new(33, 0).generator();
    let m = 200_000;
    let draws: Vec<(f64, f64)> = (0..m)
        .map(|_| {
            let x = sample_simplex(&model, &mut rng);
            (x.get(2), x.get(7))
        })
        .collect();
    let ma = draws.iter().map(|d| d.0).sum::<f64>() / m as f64;
    let mb = draws.iter().map(|d| d.1).sum::<f64>() / m as f64;
    let cov = draws.iter().map(|(a, b)| (a - ma) * (b - mb)).sum::<f64>() / (m as f64 - 1.0);
    let want = -dim * dim / ((dim + 1.0).powi(2) * (dim + 2.0));
    // the sd of the product is about the product of the sds, roughly 0.83
    assert!((cov - want).abs() < 4.0 * 0.83 / (m as f64).sqrt(), "{cov} vs {want}");
}

#[test]
fn simplex_is_exchangeable_for_unit_weights() {
    // edge count inside a fixed triple of edges versus a random triple; chi-square two-sample test
    let space = EdgeSpace::undirected(7).unwrap();
    let model = SimplexModel::<f64>::unit(space);
    let mut pick = ChaCha8Rng::seed_from_u64(34);
    let mut other: Vec<usize> = (0..space.len()).collect();
    for i in 0..3 {
        let j = pick.random_range(i..other.len());
        other.swap(i, j);
    }
    other.truncate(3);
    let p = 0.4;
    let m = 20_000;
    let histogram = |set: &[usize], stream: u64| {
        let mut rng = SeededRng::new(35, stream).generator();
        let mut h = [0usize; 4];
        for _ in 0..m {
            let x = sample_simplex(&model, &mut rng);
            h[set.iter().filter(|&&e| x.get(e) <= p).count()] += 1;
        }
        h
    };
    let (a, b) = (histogram(&[0, 1, 2], 1), histogram(&other, 2));
    let chi2: f64 = (0..4)
        .filter(|&k| a[k] + b[k] > 0)
        .map(|k| {
            let d = a[k] as f64 - b[k] as f64;
            d * d / (a[k] + b[k]) as f64
        })
        .sum();
    // 0.1% point of chi-square with 3 degrees of freedom
    assert!(chi2 < 16.27, "chi2 = {chi2}, {a:?} vs {b:?}");
}

#[test]
fn sampling_is_reproducible() {
    let space = EdgeSpace::undirected(30).unwrap();
    let model = SimplexModel::<f64>::unit(space);
    let a = sample_simplex(&model, &mut SeededRng::for_trial(9, 2, 3).generator());
    let b = sample_simplex(&model, &mut SeededRng::for_trial(9, 2, 3).generator());
    let c = sample_simplex(&model, &mut SeededRng::for_trial(9, 3, 2).generator());
    assert_eq!(a, b);
    assert_ne!(a, c);
    let f32_model = SimplexModel::<f32>::unit(space);
    let d = sample_simplex(&f32_model, &mut SeededRng::for_trial(9, 2, 3).generator());
    assert!(a.values().iter().zip(d.values()).all(|(x, y)| (x - f64::from(*y)).abs() < 1e-5 * (1.0 + x)));
}

/// `P(S absent, T present)` by inclusion-exclusion over subsets of `T`.
fn absent_present_by_inclusion_exclusion(model: &SimplexModel<f64>, s: &[usize], t: &[usize], p: f64) -> f64 {
    (0u32..1 << t.len())
        .map(|mask| {
            let mut set = s.to_vec();
            set.extend((0..t.len()).filter(|b| mask >> b & 1 == 1).map(|b| t[b]));
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            sign * prob_all_absent(model, &set, p).unwrap()
        })
        .sum()
}

#[test]
fn absent_present_monte_carlo() {
    let space = EdgeSpace::undirected(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let model = SimplexModel::<f64>::random_bounded(space, 1.5, &mut rng).unwrap();
    let (s, t) = (vec![0, 5, 9], vec![3, 20]);
    let p = 0.5;
    let exact = absent_present_by_inclusion_exclusion(&model, &s, &t, p);
    let approx = prob_absent_present(&model, &s, &t, p).unwrap();
    assert!(approx.contains(exact), "{exact} outside [{}, {}]", approx.lower, approx.upper);
    let m = 200_000;
    let mut g = SeededRng::new(37, 0).generator();
    let hits = (0..m)
        .filter(|_| {
            let x = sample_simplex(&model, &mut g);
            s.iter().all(|&e| x.get(e) > p) && t.iter().all(|&e| x.get(e) <= p)
        })
        .count();
    let freq = hits as f64 / m as f64;
    let se = (exact * (1.0 - exact) / m as f64).sqrt();
    assert!((freq - exact).abs() < 4.0 * se, "{freq} vs {exact}");
}

#[test]
fn wilson_intervals_cover_exact_marginals() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    let mut covered = 0;
    for k in 0..20 {
        let n = rng.random_range(4..=10);
        let dim = n * (n - 1) / 2;
        let edge = rng.random_range(0..dim);
        let target: f64 = rng.random_range(0.05..0.95);
        let mut c: ExperimentConfig = format!(
            "kind=marginals\nn={n}\nalpha=bounded:2\nedge={edge}\np=1\ntrials=400\nseed={}",
            1000 + k
        )
        .parse()
        .unwrap();
        let DensityModel::Simplex(model) = build_model(&c, 0).unwrap() else { unreachable!() };
        // threshold where 1 - (1 - alpha p / L)^N equals the target
        let a = model.alpha()[edge];
        let p = model.budget() * (1.0 - (1.0 - target).powf(1.0 / dim as f64)) / a;
        c.schedule = lcgraph::experiments::Schedule::Explicit(vec![p]);
        let r = run_sweep(&c).unwrap();
        let exact = common::one_minus_power_complement(a * p / model.budget(), dim as f64);
        let s = &r.summaries[0];
        if s.lo <= exact && exact <= s.hi {
            covered += 1;
        }
    }
    assert!(covered >= 18, "{covered}/20 intervals cover the exact value");
}

#[test]
fn moments_sweep_mean_matches_oracle() {
    let r = run_sweep(&"kind=moments\nn=12\np=0.3\ntrials=2000\nseed=39".parse().unwrap()).unwrap();
    let dim = 66.0;
    let expected = dim * common::one_minus_power_complement(0.3 / dim, dim);
    let s = &r.summaries[0];
    assert!((s.point.oracle.unwrap() - expected).abs() < 1e-12);
    assert!(s.lo <= expected && expected <= s.hi, "{expected} outside [{}, {}]", s.lo, s.hi);
}
