use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::json;
use symsearch::abstraction::{enumerate_dnas, first_dna};
use symsearch::flows::run_separate;
use symsearch::{
    abstract_search_space, build_nasbench_space, deserialize, run_factorized, run_hybrid,
    run_joint, space_size, Aggregator, AlgorithmConfig, AlgorithmKind, EvolutionConfig, LoopConfig,
    Partition, Registry, Report, RewardOracle, RunOptions, SyntheticNasOracle, TableOracle, Value,
};

use crate::args::{AggregatorKind, AlgoKind, Builtin, FlowKind, OracleKind, SearchArgs, SpaceArgs};

/// Flag combinations clap cannot express.
pub fn check_search(args: &SearchArgs) -> Result<(), String> {
    if args.flow != FlowKind::Joint && args.partition.is_none() {
        let flow = format!("{:?}", args.flow).to_lowercase();
        return Err(format!("--flow {flow} requires --partition <HINT>"));
    }
    Ok(())
}

fn load_space(args: &SpaceArgs) -> Result<Value> {
    match (&args.space, args.builtin) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            deserialize(&text, &Registry::new())
                .with_context(|| format!("parsing {}", path.display()))
        }
        (None, Some(Builtin::Nasbench)) => Ok(build_nasbench_space(args.nodes, args.ops)?),
        (None, None) => bail!("no space given"),
    }
}

pub fn inspect(args: &SpaceArgs) -> Result<()> {
    let space = load_space(args)?;
    let spec = abstract_search_space(&space);
    let size = space_size(&space);
    let size = match size.to_u64() {
        Some(n) => json!(n),
        None => json!(size.to_string()),
    };
    let out = json!({"spec": spec, "space_size": size});
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

pub fn enumerate(args: &SpaceArgs, limit: Option<usize>) -> Result<()> {
    let spec = abstract_search_space(&load_space(args)?);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for dna in enumerate_dnas(&spec)?.take(limit.unwrap_or(usize::MAX)) {
        writeln!(out, "{dna}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn dump_table(args: &SpaceArgs, oracle_seed: u64, out: &Path) -> Result<()> {
    let space = load_space(args)?;
    let oracle = SyntheticNasOracle::new(args.nodes, args.ops, oracle_seed)?;
    let table = TableOracle::tabulate(&space, &oracle)?;
    fs::write(out, serde_json::to_string(&table.to_json())?)
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn oracle(args: &SearchArgs, space: &Value) -> Result<Box<dyn RewardOracle<f64>>> {
    Ok(match args.oracle {
        OracleKind::Synthetic => Box::new(SyntheticNasOracle::new(
            args.space.nodes,
            args.space.ops,
            args.oracle_seed,
        )?),
        OracleKind::Table => {
            let path = args
                .table
                .as_ref()
                .context("--oracle table requires --table")?;
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let table = TableOracle::from_json(&text)?;
            if !table.spec().shape_eq(&abstract_search_space(space)) {
                bail!("table spec does not match the search space");
            }
            Box::new(table)
        }
    })
}

fn algorithm(kind: AlgoKind, args: &SearchArgs, seed: u64) -> AlgorithmConfig {
    let kind = match kind {
        AlgoKind::Random => AlgorithmKind::Random,
        AlgoKind::Exhaustive => AlgorithmKind::Exhaustive,
        AlgoKind::Regevo => AlgorithmKind::RegularizedEvolution(EvolutionConfig::new(
            args.population,
            args.tournament,
        )),
    };
    AlgorithmConfig::new(kind, seed)
}

fn run_once(
    args: &SearchArgs,
    space: &Value,
    oracle: &dyn RewardOracle<f64>,
    seed: u64,
) -> Result<Report> {
    let options = RunOptions {
        timing: args.timing,
    };
    let outer = LoopConfig::new(algorithm(args.algo, args, seed), args.trials);
    let inner_kind = args.inner_algo.unwrap_or(args.algo);
    let aggregator = match args.aggregator {
        AggregatorKind::Top5 => Aggregator::Top5,
        AggregatorKind::Mean => Aggregator::Mean,
        AggregatorKind::Max => Aggregator::Max,
    };
    let partition = || Partition::by_hint(args.partition.clone().unwrap_or_default());
    Ok(match args.flow {
        FlowKind::Joint => run_joint(space, &outer, oracle, &options)?,
        FlowKind::Factorized => {
            let inner = LoopConfig::new(algorithm(inner_kind, args, seed), args.inner_trials);
            run_factorized(
                space,
                &partition(),
                &outer,
                &inner,
                oracle,
                aggregator,
                &options,
            )?
        }
        FlowKind::Hybrid => {
            let inner = LoopConfig::new(algorithm(inner_kind, args, seed), args.inner_trials);
            run_hybrid(
                space,
                &partition(),
                &outer,
                &inner,
                args.phase2_trials,
                oracle,
                aggregator,
                &options,
            )?
        }
        FlowKind::Separate => {
            let second = LoopConfig::new(
                algorithm(inner_kind, args, seed.wrapping_add(1)),
                args.phase2_trials,
            );
            let pivot = first_dna(&abstract_search_space(space));
            run_separate(
                space,
                &partition(),
                &outer,
                &second,
                oracle,
                &pivot,
                &options,
            )?
        }
    })
}

fn log_path(out: &Path, run: u64, repeat: u64) -> PathBuf {
    if repeat == 1 {
        return out.to_path_buf();
    }
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{run}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{run}"),
    };
    out.with_file_name(name)
}

pub fn search(args: &SearchArgs) -> Result<()> {
    let space = load_space(&args.space)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs as usize)
        .build()?;
    let summaries = pool.install(|| {
        (0..args.repeat)
            .into_par_iter()
            .map(|run| {
                let seed = args.seed.wrapping_add(run);
                let oracle = oracle(args, &space)?;
                let report = run_once(args, &space, oracle.as_ref(), seed)?;
                if let Some(out) = &args.out {
                    let path = log_path(out, run, args.repeat);
                    let file = File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    let mut writer = BufWriter::new(file);
                    report.write_jsonl(&mut writer)?;
                    writer.flush()?;
                }
                Ok(summary(args, seed, &report))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    for line in summaries {
        println!("{line}");
    }
    Ok(())
}

fn summary(args: &SearchArgs, seed: u64, report: &Report) -> serde_json::Value {
    let flow = format!("{:?}", args.flow).to_lowercase();
    let budgets = match args.flow {
        FlowKind::Joint => json!({"trials": args.trials}),
        FlowKind::Factorized => json!({"trials": args.trials, "inner_trials": args.inner_trials}),
        FlowKind::Hybrid => json!({
            "trials": args.trials,
            "inner_trials": args.inner_trials,
            "phase2_trials": args.phase2_trials,
        }),
        FlowKind::Separate => json!({"trials": args.trials, "phase2_trials": args.phase2_trials}),
    };
    json!({
        "flow": flow,
        "budgets": budgets,
        "seed": seed,
        "best_dna": report.best_dna.as_ref().map(|d| d.to_string()),
        "best_reward": report.best_reward,
        "oracle_calls": report.oracle_calls,
    })
}
