//! Command line front end.
//!
//! Exit codes: 0 on success, 2 on a configuration or input error, 3 when an
//! instance exceeds the capacity of an exact routine, 1 on I/O failure or a
//! failed self test.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lcgraph::atsp::{assign_and_patch, held_karp, hungarian, CostMatrix, HELD_KARP_MAX_N};
use lcgraph::experiments::{
    atsp_experiment, build_model, expected_edges, mst_experiment, resolve_points, run_sweep, AlphaSpec,
    ExperimentConfig, ExperimentKind,
};
use lcgraph::graph::{components, diameter, Diameter};
use lcgraph::model::{DecomposableWeights, EdgeSpace, SimplexModel, ThresholdGraph};
use lcgraph::oracle::{mst_series, solve_p0, SeriesMode};
use lcgraph::sampling::{DensityModel, SeededRng};
use lcgraph::stats::ks_distance;
use lcgraph::{Error, Result};

#[derive(Parser)]
#[command(name = "lcgraph", version, about = "Thresholded random graphs from logconcave edge weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Experiment description (flat key = value file)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed, overriding the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per schedule point, overriding the config
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file (stdout when absent), overriding the config
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, overriding the config
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one weight vector from the configured model
    Sample,
    /// Exact and limiting values for every schedule point
    Oracle,
    /// Run the configured experiment and write per-trial CSV
    Sweep,
    /// Monte Carlo MST weight against the series
    Mst,
    /// Solve a cost matrix file, or run the configured ATSP experiment
    Atsp {
        /// Cost matrix CSV (`n=<int>` header, `inf` on the diagonal)
        matrix: Option<PathBuf>,
    },
    /// Quick internal consistency checks
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample => sample(&cli.common),
        Command::Oracle => oracle(&cli.common),
        Command::Sweep => sweep(&cli.common),
        Command::Mst => mst(&cli.common),
        Command::Atsp { matrix } => atsp(&cli.common, matrix.as_deref()),
        Command::Selftest => return selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lcgraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("this command needs --config <path>".into()))?;
    let mut config = ExperimentConfig::from_file(path)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(trials) = common.trials {
        config.trials = trials;
    }
    if let Some(workers) = common.workers {
        config.workers = workers;
    }
    if let Some(out) = &common.out {
        config.out = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sample(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    let model = build_model(&config, 0)?;
    let x = model.sample(&mut SeededRng::new(config.seed, 0).generator());
    let mut out = output(config.out.as_deref())?;
    if x.space().is_directed() {
        CostMatrix::from_weights(&x)?.write_csv(&mut out)?;
    } else {
        writeln!(out, "i,j,x")?;
        for (e, i, j) in x.space().pairs() {
            writeln!(out, "{i},{j},{}", x.get(e))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn oracle(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    let models = (0..config.n.len()).map(|i| build_model(&config, i)).collect::<Result<Vec<_>>>()?;
    let points = resolve_points(&config, &models)?;
    let mut out = output(config.out.as_deref())?;
    writeln!(out, "point,n,p,label,oracle,p0,sigma_max,expected_edges")?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for pt in &points {
        let model = &models[pt.model_index];
        let p0 = match model {
            DensityModel::Simplex(m) if !m.space().is_directed() => Some(solve_p0(m)),
            _ => None,
        };
        let edges = pt.p.map(|p| expected_edges(model, p)).transpose()?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            pt.index,
            pt.n,
            opt(pt.p),
            opt(pt.label),
            opt(pt.oracle),
            opt(p0),
            model.sigma_max(),
            opt(edges)
        )?;
    }
    out.flush()?;
    Ok(())
}

fn sweep(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    let result = run_sweep(&config)?;
    for w in &result.warnings {
        eprintln!("lcgraph: warning: {w}");
    }
    let mut out = output(config.out.as_deref())?;
    result.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn mst(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    if config.kind != ExperimentKind::Mst {
        return Err(Error::Config("the mst command needs kind = mst".into()));
    }
    let mut out = output(config.out.as_deref())?;
    writeln!(out, "n,trials,mean,std_error,series,mode,relative_gap")?;
    for &n in &config.n {
        let weights = match &config.model.alpha {
            AlphaSpec::Decomposable(d) => DecomposableWeights::cyclic(n, d)?,
            _ => DecomposableWeights::uniform(n)?,
        };
        let c = mst_experiment(&weights, config.trials, config.seed, config.workers)?;
        writeln!(
            out,
            "{},{},{},{},{},{:?},{}",
            c.n, c.trials, c.mean, c.std_error, c.series, c.mode, c.relative_gap
        )?;
    }
    out.flush()?;
    Ok(())
}

fn atsp(common: &Common, matrix: Option<&Path>) -> Result<()> {
    if let Some(path) = matrix {
        let costs = CostMatrix::<f64>::read_csv(BufReader::new(File::open(path)?))?;
        let sol = assign_and_patch(&costs)?;
        let mut out = output(common.out.as_deref())?;
        writeln!(out, "assignment_cost,{}", sol.assignment.cost)?;
        writeln!(out, "cycles,{}", sol.assignment.cycle_count())?;
        writeln!(out, "tour_cost,{}", sol.tour.cost)?;
        let order: Vec<String> = sol.tour.order.iter().map(usize::to_string).collect();
        writeln!(out, "tour,{}", order.join(" "))?;
        if costs.len() <= HELD_KARP_MAX_N {
            writeln!(out, "optimum_cost,{}", held_karp(&costs)?.cost)?;
        }
        out.flush()?;
        return Ok(());
    }
    let config = load_config(common)?;
    if config.kind != ExperimentKind::Atsp {
        return Err(Error::Config("the atsp command needs kind = atsp or a matrix file".into()));
    }
    let beta = match &config.model.alpha {
        AlphaSpec::Row(b) => b.clone(),
        _ => vec![1.0],
    };
    let rows = atsp_experiment(&beta, &config.n, config.trials, config.seed, config.workers)?;
    let mut out = output(config.out.as_deref())?;
    writeln!(out, "n,trials,bound,tour_over_assignment,lo,hi,tour_over_optimum,min_tour_over_optimum,assignment_below_optimum,mean_cycles")?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.trials,
            r.bound,
            r.tour_over_assignment.mean,
            r.tour_over_assignment.lo,
            r.tour_over_assignment.hi,
            opt(r.tour_over_optimum.map(|m| m.mean.to_string())),
            opt(r.min_tour_over_optimum.map(|m| m.to_string())),
            opt(r.assignment_below_optimum.map(|b| b.to_string())),
            r.mean_cycles
        )?;
    }
    out.flush()?;
    Ok(())
}

fn check(name: &str, f: impl FnOnce() -> Result<bool>) -> bool {
    let ok = matches!(f(), Ok(true));
    println!("{} {name}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn selftest() -> ExitCode {
    let checks = [
        check("simplex marginal KS distance (n=8, 20000 draws)", || {
            let model = SimplexModel::<f64>::unit(EdgeSpace::undirected(8)?);
            let dm = DensityModel::Simplex(model);
            let mut rng = SeededRng::new(1, 0).generator();
            let xs: Vec<f64> = (0..20_000).map(|_| dm.sample(&mut rng).get(0)).collect();
            Ok(ks_distance(&xs, |p| dm.marginal_cdf(0, p).unwrap()) < 0.015)
        }),
        check("p0 of the unit simplex at n=4", || {
            let m = SimplexModel::<f64>::unit(EdgeSpace::undirected(4)?);
            Ok((solve_p0(&m) - 2.0 * (1.0 - 4f64.powf(-1.0 / 6.0))).abs() < 1e-12)
        }),
        check("MST series: grouped equals exact at n=10", || {
            let w = DecomposableWeights::<f64>::cyclic(10, &[0.8, 1.25])?;
            let (a, b) = (mst_series(&w, SeriesMode::Exact)?, mst_series(&w, SeriesMode::Grouped)?);
            Ok((a - b).abs() <= 1e-10 * a)
        }),
        check("assignment and patching on a 3x3 matrix", || {
            let c = CostMatrix::from_rows(vec![
                vec![0.0, 2.0, 9.0],
                vec![1.0, 0.0, 6.0],
                vec![8.0, 7.0, 0.0],
            ])?;
            let a = hungarian(&c)?;
            let t = assign_and_patch(&c)?.tour;
            Ok(a.cost == 16.0 && t.cost == 16.0 && t.is_valid(&c))
        }),
        check("components and diameter of a path", || {
            let g = ThresholdGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])?;
            Ok(components(&g).count() == 1 && diameter(&g) == Diameter::Finite(4))
        }),
    ];
    if checks.iter().all(|&ok| ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
