use crate::error::{Error, Result};
use crate::experiments::{
    build_model, resolve_points, run_points, series_mode_for, ExperimentConfig, ExperimentKind, Schedule,
    Summary, SweepPoint,
};
use crate::model::{DecomposableWeights, SimplexModel};
use crate::oracle::{mst_series, solve_p0, SeriesMode};
use crate::sampling::DensityModel;
use crate::stats::mean_interval;

/// Indicator frequency at one threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyRow {
    /// Schedule parameter (`c` or the signed `eps`).
    pub label: f64,
    pub p: f64,
    pub trials: usize,
    pub frequency: f64,
    /// Wilson 95% interval.
    pub lo: f64,
    pub hi: f64,
    pub theory: Option<f64>,
}

impl FrequencyRow {
    fn from_summary(s: &Summary) -> Self {
        Self {
            label: s.point.label.unwrap_or(f64::NAN),
            p: s.point.p.unwrap_or(f64::NAN),
            trials: s.trials,
            frequency: s.mean,
            lo: s.lo,
            hi: s.hi,
            theory: s.point.oracle,
        }
    }
}

/// Connectivity frequency at `p = (ln n + c)/n` on the unit simplex, next to
/// the limit `exp(-exp(-c))`.
pub fn connectivity_limit_experiment(
    n: usize,
    cs: &[f64],
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<FrequencyRow>> {
    let mut config = ExperimentConfig::new(ExperimentKind::Connectivity, vec![n], Schedule::LogShift(cs.to_vec()));
    config.trials = trials;
    config.seed = seed;
    config.workers = workers;
    let result = crate::experiments::run_sweep(&config)?;
    Ok(result.summaries.iter().map(FrequencyRow::from_summary).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub p0: f64,
    pub below: FrequencyRow,
    pub above: FrequencyRow,
    /// Tightest `M` with `alpha` in `[1/M, M]`.
    pub bound: f64,
    /// Whether `M <= (ln n)^(1/4)`.
    pub within_hypothesis: bool,
}

/// Connectivity frequencies at `(1 - eps) p0` and `(1 + eps) p0` for a given model.
pub fn threshold_transition_experiment(
    model: &SimplexModel<f64>,
    eps: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Transition> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::config(format!("eps = {eps} must lie in (0, 1)")));
    }
    if model.space().is_directed() {
        return Err(Error::config("connectivity needs an undirected model"));
    }
    let n = model.space().vertices();
    let p0 = solve_p0(model);
    let points: Vec<SweepPoint> = [-eps, eps]
        .iter()
        .enumerate()
        .map(|(index, &e)| SweepPoint { index, model_index: 0, n, p: Some((1.0 + e) * p0), label: Some(e), oracle: None })
        .collect();
    let models = [DensityModel::Simplex(model.clone())];
    let (_, summaries) = run_points(ExperimentKind::Connectivity, &models, &points, trials, seed, workers, 0)?;
    let row = |k: usize| {
        summaries.get(k).map(FrequencyRow::from_summary).unwrap_or(FrequencyRow {
            label: points[k].label.unwrap(),
            p: points[k].p.unwrap(),
            trials: 0,
            frequency: f64::NAN,
            lo: 0.0,
            hi: 1.0,
            theory: None,
        })
    };
    let bound = model.tightest_bound();
    Ok(Transition {
        p0,
        below: row(0),
        above: row(1),
        bound,
        within_hypothesis: bound <= (n as f64).ln().powf(0.25),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MstComparison {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_error: f64,
    pub series: f64,
    pub mode: SeriesMode,
    /// `|mean - series| / series`.
    pub relative_gap: f64,
}

/// Monte Carlo mean MST weight under the decomposable simplex model against the series.
pub fn mst_experiment(
    weights: &DecomposableWeights<f64>,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<MstComparison> {
    let n = weights.vertices();
    let mode = series_mode_for(weights);
    let series = mst_series(weights, mode).map_err(|e| Error::config(format!("series unavailable: {e}")))?;
    let models = [DensityModel::Simplex(weights.to_model()?)];
    let point = SweepPoint { index: 0, model_index: 0, n, p: None, label: None, oracle: Some(series) };
    let (records, _) = run_points(ExperimentKind::Mst, &models, &[point], trials, seed, workers, 0)?;
    let values: Vec<f64> = records.iter().map(|r| r.outcome_value()).collect();
    let (mean, lo, _) = mean_interval(&values);
    let std_error = (mean - lo) / crate::stats::Z95;
    Ok(MstComparison {
        n,
        trials,
        mean,
        std_error,
        series,
        mode,
        relative_gap: (mean - series).abs() / series,
    })
}

/// Mean with a normal 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanInterval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

impl MeanInterval {
    fn of(values: &[f64]) -> Self {
        let (mean, lo, hi) = mean_interval(values);
        Self { mean, lo, hi }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtspRow {
    pub n: usize,
    pub trials: usize,
    /// Tightest `M` with `beta` in `[1/M, M]`.
    pub bound: f64,
    pub tour_over_assignment: MeanInterval,
    /// Present when `n` is small enough for the exact solver.
    pub tour_over_optimum: Option<MeanInterval>,
    /// Smallest tour/optimum ratio seen.
    pub min_tour_over_optimum: Option<f64>,
    /// Whether the assignment never exceeded the optimum.
    pub assignment_below_optimum: Option<bool>,
    pub mean_cycles: f64,
}

/// Assignment-plus-patching on row-symmetric costs for each `n`; `beta`
/// repeats cyclically over the vertices.
pub fn atsp_experiment(
    beta: &[f64],
    ns: &[usize],
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<AtspRow>> {
    let mut config = ExperimentConfig::new(
        ExperimentKind::Atsp,
        ns.to_vec(),
        Schedule::None,
    );
    config.model.alpha = crate::experiments::AlphaSpec::Row(beta.to_vec());
    config.trials = trials;
    config.seed = seed;
    config.workers = workers;
    config.validate()?;
    let models = (0..ns.len()).map(|i| build_model(&config, i)).collect::<Result<Vec<_>>>()?;
    let points = resolve_points(&config, &models)?;
    let (records, _) = run_points(ExperimentKind::Atsp, &models, &points, trials, seed, workers, 0)?;
    let mut rows = Vec::with_capacity(ns.len());
    for (k, model) in models.iter().enumerate() {
        let recs: Vec<_> = records.iter().filter(|r| r.point == k).collect();
        let ratios: Vec<f64> = recs.iter().map(|r| r.outcome_value()).collect();
        let cycles: Vec<f64> = recs.iter().filter_map(|r| r.cycles).map(|c| c as f64).collect();
        let optimum: Vec<(f64, f64, f64)> = recs
            .iter()
            .filter_map(|r| Some((r.assignment_cost?, r.tour_cost?, r.optimum_cost?)))
            .collect();
        let has_opt = !optimum.is_empty();
        let opt_ratios: Vec<f64> = optimum.iter().map(|(_, t, o)| t / o).collect();
        let bound = match model {
            DensityModel::Simplex(m) => m.tightest_bound(),
            _ => f64::NAN,
        };
        rows.push(AtspRow {
            n: ns[k],
            trials: recs.len(),
            bound,
            tour_over_assignment: MeanInterval::of(&ratios),
            tour_over_optimum: has_opt.then(|| MeanInterval::of(&opt_ratios)),
            min_tour_over_optimum: has_opt.then(|| opt_ratios.iter().copied().fold(f64::INFINITY, f64::min)),
            assignment_below_optimum: has_opt.then(|| optimum.iter().all(|(a, _, o)| a <= &(o + 1e-12 * o.abs()))),
            mean_cycles: crate::stats::mean_variance(&cycles).0,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_rows_carry_theory() {
        let rows = connectivity_limit_experiment(60, &[-1.0, 3.0], 20, 1, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[1].theory.unwrap() - (-(-3.0f64).exp()).exp()).abs() < 1e-15);
        assert!(rows.iter().all(|r| r.lo <= r.frequency && r.frequency <= r.hi));
    }

    #[test]
    fn transition_rejects_zero_eps() {
        let m = SimplexModel::<f64>::unit(crate::model::EdgeSpace::undirected(20).unwrap());
        assert!(matches!(threshold_transition_experiment(&m, 0.0, 10, 0, 1), Err(Error::Config(_))));
        let t = threshold_transition_experiment(&m, 0.5, 10, 0, 1).unwrap();
        assert!(t.below.p < t.p0 && t.p0 < t.above.p);
        assert!(t.within_hypothesis);
    }

    #[test]
    fn mst_small() {
        let w = DecomposableWeights::<f64>::uniform(5).unwrap();
        let c = mst_experiment(&w, 200, 3, 1).unwrap();
        assert_eq!(c.mode, SeriesMode::Grouped);
        assert!(c.relative_gap < 0.2);
    }

    #[test]
    fn atsp_rows() {
        let rows = atsp_experiment(&[1.0], &[7, 20], 6, 2, 1).unwrap();
        assert_eq!(rows[0].trials, 6);
        assert!(rows[0].min_tour_over_optimum.unwrap() >= 1.0 - 1e-12);
        assert_eq!(rows[0].assignment_below_optimum, Some(true));
        assert!(rows[1].tour_over_optimum.is_none());
        assert!(rows[1].tour_over_assignment.mean >= 1.0);
    }
}
