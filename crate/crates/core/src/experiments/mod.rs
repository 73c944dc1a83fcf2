//! Seeded Monte Carlo sweeps with CSV output.
//!
//! A sweep visits every `(n, p)` point of a configuration and runs the same
//! number of independent trials at each. Trial `t` of point `k` draws from
//! the ChaCha stream [`SeededRng::for_trial`]`(seed, k, t)`, so a record
//! depends only on the base seed and its coordinates, never on scheduling.

mod config;
mod named;

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;

use crate::atsp::{assign_and_patch, held_karp, CostMatrix, HELD_KARP_MAX_N};
use crate::error::{Error, Result};
use crate::graph::{bipartite_perfect_matching, components, diameter, is_hamiltonian, mst_weight, Diameter};
use crate::model::{threshold, DecomposableWeights, EdgeSpace, SimplexModel};
use crate::oracle::{mst_series, solve_p0, SeriesMode, EXACT_SERIES_MAX_N, GROUPED_SERIES_MAX_VALUES};
use crate::sampling::{splitmix64, DensityModel, SeededRng};
use crate::stats::{mean_variance, wilson_interval, Z95};

pub use config::{parse_real_list, AlphaSpec, ExperimentConfig, ExperimentKind, ModelKind, ModelSpec, Schedule};
pub use named::{
    atsp_experiment, connectivity_limit_experiment, mst_experiment, threshold_transition_experiment,
    AtspRow, FrequencyRow, MstComparison, Transition,
};

/// One schedule point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    /// Position of this point's `n` in the configured list.
    pub model_index: usize,
    pub n: usize,
    /// Threshold; `None` for `mst` and `atsp`.
    pub p: Option<f64>,
    /// The schedule parameter that produced `p` (`c`, `eps`, `theta`, ...).
    pub label: Option<f64>,
    /// Exact or limiting value of the summary statistic, when one is known.
    pub oracle: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    Flag(bool),
    Value(f64),
}

impl Outcome {
    pub fn as_f64(self) -> f64 {
        match self {
            Outcome::Flag(b) => f64::from(u8::from(b)),
            Outcome::Value(x) => x,
        }
    }
}

/// Outcome of one trial plus whatever auxiliary metrics the kind produces.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TrialRecord {
    pub point: usize,
    pub n: usize,
    pub p: Option<f64>,
    pub trial: usize,
    /// Stream id of the trial's generator.
    pub seed: u64,
    pub outcome: Option<Outcome>,
    pub edges: Option<usize>,
    pub components: Option<usize>,
    pub largest_fraction: Option<f64>,
    pub diameter: Option<Diameter>,
    pub mst_weight: Option<f64>,
    pub assignment_cost: Option<f64>,
    pub tour_cost: Option<f64>,
    pub optimum_cost: Option<f64>,
    pub cycles: Option<usize>,
}

pub const RECORD_HEADER: &str = "point,n,p,trial,seed,outcome,edges,components,largest_fraction,diameter,mst_weight,assignment_cost,tour_cost,optimum_cost,cycles";
pub const SUMMARY_HEADER: &str = "#summary,point,n,p,label,trials,mean,variance,lo,hi,oracle";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl TrialRecord {
    pub fn outcome_value(&self) -> f64 {
        self.outcome.map_or(f64::NAN, Outcome::as_f64)
    }

    pub fn to_csv_row(&self) -> String {
        let outcome = match self.outcome {
            Some(Outcome::Flag(b)) => u8::from(b).to_string(),
            Some(Outcome::Value(x)) => x.to_string(),
            None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.point,
            self.n,
            opt(self.p),
            self.trial,
            self.seed,
            outcome,
            opt(self.edges),
            opt(self.components),
            opt(self.largest_fraction),
            opt(self.diameter),
            opt(self.mst_weight),
            opt(self.assignment_cost),
            opt(self.tour_cost),
            opt(self.optimum_cost),
            opt(self.cycles),
        )
    }
}

/// Per-point aggregate. Indicator outcomes get a Wilson 95% interval, real
/// outcomes a normal 95% interval for the mean.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub point: SweepPoint,
    pub trials: usize,
    pub mean: f64,
    pub variance: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Summary {
    fn from_records(point: &SweepPoint, records: &[TrialRecord], boolean: bool) -> Self {
        let values: Vec<f64> = records.iter().map(TrialRecord::outcome_value).collect();
        let (mean, variance, lo, hi) = if boolean {
            let t = values.len();
            let hits = values.iter().filter(|&&v| v == 1.0).count();
            let (lo, hi) = wilson_interval(hits, t, Z95);
            let mean = if t == 0 { f64::NAN } else { hits as f64 / t as f64 };
            let variance = if t < 2 { 0.0 } else { (hits * (t - hits)) as f64 / (t * (t - 1)) as f64 };
            (mean, variance, lo, hi)
        } else {
            let (mean, variance) = mean_variance(&values);
            let half = Z95 * (variance / values.len() as f64).sqrt();
            (mean, variance, mean - half, mean + half)
        };
        Self { point: point.clone(), trials: records.len(), mean, variance, lo, hi }
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "#summary,{},{},{},{},{},{},{},{},{},{}",
            self.point.index,
            self.point.n,
            opt(self.point.p),
            opt(self.point.label),
            self.trials,
            self.mean,
            self.variance,
            self.lo,
            self.hi,
            opt(self.point.oracle),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub kind: ExperimentKind,
    pub points: Vec<SweepPoint>,
    /// Sorted by `(point, trial)`.
    pub records: Vec<TrialRecord>,
    /// One per point; empty when no trials ran.
    pub summaries: Vec<Summary>,
    /// Hypotheses of the underlying statements that the configuration violates.
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn records_at(&self, point: usize) -> &[TrialRecord] {
        let start = self.records.partition_point(|r| r.point < point);
        let end = self.records.partition_point(|r| r.point <= point);
        &self.records[start..end]
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{RECORD_HEADER}").unwrap();
        for r in &self.records {
            writeln!(s, "{}", r.to_csv_row()).unwrap();
        }
        if !self.summaries.is_empty() {
            writeln!(s, "{SUMMARY_HEADER}").unwrap();
            for sm in &self.summaries {
                writeln!(s, "{}", sm.to_csv_row()).unwrap();
            }
        }
        s
    }
}

/// Builds the model for `n` vertices. Random weights draw from a stream of
/// their own, so they do not depend on the schedule.
pub fn build_model(config: &ExperimentConfig, model_index: usize) -> Result<DensityModel<f64>> {
    let spec = &config.model;
    let n = config.n[model_index];
    let undirected = EdgeSpace::undirected(n)?;
    let dim = undirected.len();
    let model = match spec.kind {
        ModelKind::Exponential => return DensityModel::product_exponential(undirected, vec![spec.rate; dim]),
        ModelKind::Ball => return DensityModel::orthant_ball(undirected, spec.radius),
        ModelKind::Simplex => match &spec.alpha {
            AlphaSpec::Unit if config.kind == ExperimentKind::Atsp => SimplexModel::row_symmetric(&vec![1.0; n])?,
            AlphaSpec::Unit => SimplexModel::unit(undirected),
            AlphaSpec::Bounded(m) => {
                let stream = splitmix64(0xa1fa_0000_0000_0000 ^ model_index as u64);
                let mut rng = SeededRng::new(config.seed, stream).generator();
                SimplexModel::random_bounded(undirected, *m, &mut rng)?
            }
            AlphaSpec::Scale(c) => SimplexModel::with_weights(undirected, vec![*c; dim])?,
            AlphaSpec::Decomposable(d) => DecomposableWeights::cyclic(n, d)?.to_model()?,
            AlphaSpec::Row(b) => {
                let beta: Vec<f64> = (0..n).map(|v| b[v % b.len()]).collect();
                SimplexModel::row_symmetric(&beta)?
            }
        },
    };
    Ok(DensityModel::Simplex(match spec.budget {
        Some(b) => model.with_budget(b)?,
        None => model,
    }))
}

/// Series evaluation mode for a weight profile: grouped when few distinct
/// values, otherwise exact for small `n`, otherwise the integral form.
pub fn series_mode_for(weights: &DecomposableWeights<f64>) -> SeriesMode {
    if weights.groups().len() <= GROUPED_SERIES_MAX_VALUES {
        SeriesMode::Grouped
    } else if weights.vertices() <= EXACT_SERIES_MAX_N {
        SeriesMode::Exact
    } else {
        SeriesMode::Truncated
    }
}

fn point_oracle(kind: ExperimentKind, model: &DensityModel<f64>, p: Option<f64>, label: Option<f64>, config: &ExperimentConfig) -> Result<Option<f64>> {
    Ok(match (kind, p) {
        (ExperimentKind::Connectivity, _) if matches!(config.schedule, Schedule::LogShift(_)) => {
            label.map(|c| (-(-c).exp()).exp())
        }
        (ExperimentKind::Moments, Some(p)) => Some(expected_edges(model, p)?),
        (ExperimentKind::Marginals, Some(p)) => Some(model.marginal_cdf(config.edge, p)?),
        (ExperimentKind::Mst, _) => {
            let n = model.space().vertices();
            let weights = match &config.model.alpha {
                AlphaSpec::Decomposable(d) => DecomposableWeights::cyclic(n, d)?,
                _ => DecomposableWeights::uniform(n)?,
            };
            Some(mst_series(&weights, series_mode_for(&weights))?)
        }
        _ => None,
    })
}

/// `E m = sum_e P(X_e <= p)`.
pub fn expected_edges(model: &DensityModel<f64>, p: f64) -> Result<f64> {
    let dim = model.space().len();
    match model {
        DensityModel::Simplex(_) => (0..dim).map(|e| model.marginal_cdf(e, p)).sum(),
        // exchangeable coordinates
        _ => Ok(dim as f64 * model.marginal_cdf(0, p)?),
    }
}

/// Resolves the schedule of `config` against already built models.
pub fn resolve_points(config: &ExperimentConfig, models: &[DensityModel<f64>]) -> Result<Vec<SweepPoint>> {
    let mut points = Vec::new();
    for (model_index, model) in models.iter().enumerate() {
        let n = config.n[model_index];
        let nf = n as f64;
        let pairs: Vec<(Option<f64>, Option<f64>)> = match &config.schedule {
            Schedule::None => vec![(None, None)],
            Schedule::Explicit(v) => v.iter().map(|&p| (Some(p), None)).collect(),
            Schedule::LogShift(v) => v.iter().map(|&c| (Some((nf.ln() + c) / nf), Some(c))).collect(),
            Schedule::P0Relative(v) => {
                let DensityModel::Simplex(m) = model else {
                    return Err(Error::config("p.eps needs the simplex model"));
                };
                let p0 = solve_p0(m);
                v.iter().map(|&e| (Some((1.0 + e) * p0), Some(e))).collect()
            }
            Schedule::Power(v) => v.iter().map(|&t| (Some(nf.powf(t - 1.0)), Some(t))).collect(),
            Schedule::Scaled(v) => v.iter().map(|&c| (Some(c / nf), Some(c))).collect(),
            Schedule::Sigma(v) => {
                let unit = model.sigma_max() * nf.ln() / nf;
                v.iter().map(|&c| (Some(c * unit), Some(c))).collect()
            }
        };
        for (p, label) in pairs {
            if let Some(p) = p {
                if !(p.is_finite() && p > 0.0) {
                    return Err(Error::config(format!("schedule gives threshold {p} at n = {n}; thresholds must be positive")));
                }
            }
            let oracle = point_oracle(config.kind, model, p, label, config)?;
            points.push(SweepPoint { index: points.len(), model_index, n, p, label, oracle });
        }
    }
    Ok(points)
}

/// Runs one trial: sample, then threshold or keep the weights, then evaluate.
pub fn run_trial(
    kind: ExperimentKind,
    model: &DensityModel<f64>,
    point: &SweepPoint,
    trial: usize,
    seed: u64,
    edge: usize,
) -> Result<TrialRecord> {
    let stream = SeededRng::for_trial(seed, point.index, trial);
    let x = model.sample(&mut stream.generator());
    let mut rec = TrialRecord { point: point.index, n: point.n, p: point.p, trial, seed: stream.stream, ..Default::default() };
    match kind {
        ExperimentKind::Mst => {
            let w = mst_weight(&x)?.weight;
            rec.mst_weight = Some(w);
            rec.outcome = Some(Outcome::Value(w));
        }
        ExperimentKind::Atsp => {
            let costs = CostMatrix::from_weights(&x)?;
            let sol = assign_and_patch(&costs)?;
            if !sol.tour.is_valid(&costs) {
                return Err(Error::domain("patched tour failed validation"));
            }
            rec.assignment_cost = Some(sol.assignment.cost);
            rec.tour_cost = Some(sol.tour.cost);
            rec.cycles = Some(sol.assignment.cycle_count());
            if costs.len() <= HELD_KARP_MAX_N {
                rec.optimum_cost = Some(held_karp(&costs)?.cost);
            }
            rec.outcome = Some(Outcome::Value(sol.tour.cost / sol.assignment.cost));
        }
        ExperimentKind::Marginals => {
            let p = point.p.expect("threshold kinds have p");
            rec.outcome = Some(Outcome::Flag(x.get(edge) <= p));
        }
        _ => {
            let p = point.p.expect("threshold kinds have p");
            let g = threshold(&x, p)?;
            rec.edges = Some(g.edge_count());
            match kind {
                ExperimentKind::Connectivity | ExperimentKind::Giant => {
                    let c = components(&g);
                    rec.components = Some(c.count());
                    rec.largest_fraction = Some(c.largest_fraction());
                    rec.outcome = Some(if kind == ExperimentKind::Connectivity {
                        Outcome::Flag(c.count() == 1)
                    } else {
                        Outcome::Value(c.largest_fraction())
                    });
                }
                ExperimentKind::Matching => rec.outcome = Some(Outcome::Flag(bipartite_perfect_matching(&g)?)),
                ExperimentKind::Hamilton => rec.outcome = Some(Outcome::Flag(is_hamiltonian(&g)?)),
                ExperimentKind::Diameter => {
                    let d = diameter(&g);
                    rec.diameter = Some(d);
                    rec.outcome = Some(Outcome::Value(d.finite().map_or(f64::INFINITY, |d| d as f64)));
                }
                ExperimentKind::Moments => rec.outcome = Some(Outcome::Value(g.edge_count() as f64)),
                _ => unreachable!("handled above"),
            }
        }
    }
    Ok(rec)
}

/// Runs `trials` trials at every point on a pool of `workers` threads.
/// Records come back sorted by `(point, trial)`.
pub fn run_points(
    kind: ExperimentKind,
    models: &[DensityModel<f64>],
    points: &[SweepPoint],
    trials: usize,
    seed: u64,
    workers: usize,
    edge: usize,
) -> Result<(Vec<TrialRecord>, Vec<Summary>)> {
    if trials == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start {workers} workers: {e}")))?;
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|k| (0..trials).map(move |t| (k, t))).collect();
    let records: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(k, t)| run_trial(kind, &models[points[k].model_index], &points[k], t, seed, edge))
            .collect::<Result<_>>()
    })?;
    let summaries = points
        .iter()
        .zip(records.chunks(trials))
        .map(|(pt, recs)| Summary::from_records(pt, recs, kind.is_boolean()))
        .collect();
    Ok((records, summaries))
}

fn hypothesis_warnings(config: &ExperimentConfig, models: &[DensityModel<f64>]) -> Vec<String> {
    let mut out = Vec::new();
    if matches!(config.schedule, Schedule::P0Relative(_)) {
        for (model, &n) in models.iter().zip(&config.n) {
            if let DensityModel::Simplex(m) = model {
                let bound = m.tightest_bound();
                let limit = (n as f64).ln().powf(0.25);
                if bound > limit {
                    out.push(format!("n = {n}: alpha is {bound:.4}-bounded, above (ln n)^(1/4) = {limit:.4}"));
                }
            }
        }
    }
    out
}

/// Validates `config`, resolves its schedule and runs every trial.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let models = (0..config.n.len()).map(|i| build_model(config, i)).collect::<Result<Vec<_>>>()?;
    let points = resolve_points(config, &models)?;
    let warnings = hypothesis_warnings(config, &models);
    let (records, summaries) =
        run_points(config.kind, &models, &points, config.trials, config.seed, config.workers, config.edge)?;
    Ok(SweepResult { kind: config.kind, points, records, summaries, warnings })
}
