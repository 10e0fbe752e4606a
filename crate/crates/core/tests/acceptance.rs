//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use statrs::distribution::{ContinuousCDF, StudentsT};
use symsearch::abstraction::{split_dna, DecisionPoint};
use symsearch::flows::{collect_spec, Candidate, EagerError};
use symsearch::symbolic::{insert, set};
use symsearch::{
    abstract_search_space, build_nasbench_space, deserialize, enumerate_dnas, floatv, manyof,
    materialize, materialize_partial, oneof, permutate, random_dna, run_eager, run_factorized,
    run_hybrid, run_joint, run_separate, serialize, space_size, Aggregator, AlgorithmConfig,
    AlgorithmKind, Dna, EagerContext, EvolutionConfig, LoopConfig, Partition, Registry, Report,
    RunOptions, SyntheticNasOracle, TypeDef, Value, ValueSpec,
};

use common::{registry, SpaceGen};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn criterion(number: u32, title: &str, limit: Duration, check: fn() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default())
    });
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(_) if elapsed > limit => (false, format!("took {elapsed:.2?}, limit {limit:?}")),
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    let status = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {number:>2} {status}: {title}: {detail} [{:.0?}]",
        elapsed
    );
    pass
}

fn main() -> ExitCode {
    let results = [
        criterion(
            1,
            "operation transcript",
            Duration::from_secs(1),
            transcript,
        ),
        criterion(
            2,
            "enumeration and cardinality",
            Duration::from_secs(1),
            cardinality,
        ),
        criterion(
            3,
            "materialization oracle",
            Duration::from_secs(30),
            materialization,
        ),
        criterion(
            4,
            "partition decomposition",
            Duration::from_secs(30),
            decomposition,
        ),
        criterion(
            5,
            "exhaustive search finds the optimum",
            Duration::from_secs(10),
            exhaustive_optimum,
        ),
        criterion(6, "budget accounting", Duration::from_secs(5), budgets),
        criterion(
            7,
            "regularized evolution beats random",
            Duration::from_secs(120),
            algorithm_quality,
        ),
        criterion(8, "determinism", Duration::from_secs(10), determinism),
        criterion(
            9,
            "eager and declarative spaces agree",
            Duration::from_secs(10),
            eager_isomorphism,
        ),
        criterion(
            10,
            "hybrid phase-2 monotonicity",
            Duration::from_secs(30),
            hybrid_sanity,
        ),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn layers() -> Registry {
    let mut r = Registry::new();
    r.register(
        TypeDef::new("Conv")
            .param("filters", ValueSpec::int_min(1))
            .param("kernel_size", ValueSpec::any()),
    )
    .unwrap();
    r.register(TypeDef::new("Dense").param("units", ValueSpec::int_min(1)))
        .unwrap();
    r.register(
        TypeDef::new("Sequential").param("children", ValueSpec::list(ValueSpec::any_object())),
    )
    .unwrap();
    r.register(
        TypeDef::new("CosineDecay")
            .param("learning_rate", ValueSpec::float_min(0.0))
            .param("steps", ValueSpec::int_min(1)),
    )
    .unwrap();
    r.register(
        TypeDef::new("random_augment")
            .param("magnitude", ValueSpec::int_range(0, 10))
            .functor(|args| Ok(Value::Int(args["magnitude"].as_int().unwrap_or(0)))),
    )
    .unwrap();
    r.register(
        TypeDef::new("train_model")
            .param("model", ValueSpec::object("Sequential"))
            .param("augment_policy", ValueSpec::any_object())
            .param("learning_schedule", ValueSpec::any_object())
            .functor(|args| {
                let layers = args["model"]
                    .get("children")?
                    .as_list()
                    .map_or(0, <[Value]>::len);
                Ok(Value::Float(layers as f64 / 10.0))
            }),
    )
    .unwrap();
    r
}

fn conv(r: &Registry, filters: i64, k: i64) -> Value {
    r.new_object(
        "Conv",
        [
            ("filters", Value::Int(filters)),
            ("kernel_size", Value::from(vec![k, k])),
        ],
    )
    .unwrap()
}

fn dense(r: &Registry, units: i64) -> Value {
    r.lookup("Dense")
        .unwrap()
        .positional(vec![Value::Int(units)])
        .unwrap()
}

fn sequential(r: &Registry, children: Vec<Value>) -> Value {
    r.new_object("Sequential", [("children", Value::List(children))])
        .unwrap()
}

fn transcript() -> Check {
    let r = layers();
    let model = sequential(&r, vec![conv(&r, 8, 3), dense(&r, 10)]);
    let augment = ok(r.new_object("random_augment", [("magnitude", Value::Int(8))]))?;
    let trainer = ok(r.new_object(
        "train_model",
        [("model", model.clone()), ("augment_policy", augment)],
    ))?;

    ensure!(trainer.is_instance_of("train_model"), "trainer type");
    ensure!(
        ok(trainer.get("model.children[1]"))? == &dense(&r, 10),
        "children[1] == Dense(10)"
    );
    ensure!(
        ok(trainer.get("model"))? != &conv(&r, 16, 3),
        "model != Conv(16, (3, 3))"
    );

    let filters = ok(trainer.query(".*filters"))?;
    ensure!(
        filters.len() == 1 && filters["model.children[0].filters"] == &Value::Int(8),
        "query: {filters:?}"
    );
    let denses = trainer.query_where(|_, v, _| v.is_instance_of("Dense"));
    ensure!(
        denses.len() == 1 && denses["model.children[1]"] == &dense(&r, 10),
        "query where: {denses:?}"
    );

    let edited = ok(trainer.rebind([
        ("model.children[0].filters", set(16)),
        ("model.children[1]", insert(dense(&r, 20))),
    ]))?;
    let expected = sequential(&r, vec![conv(&r, 16, 3), dense(&r, 20), dense(&r, 10)]);
    ensure!(
        ok(edited.get("model"))? == &expected,
        "rebind gave {:?}",
        edited.get("model")
    );

    let dense_type = r.lookup("Dense").unwrap();
    let converted = ok(edited.rebind_with(|_, v, _| match v.as_object() {
        Some(o) if o.is_instance_of("Conv") => dense_type
            .create([("units", o.field("filters").unwrap().clone())])
            .unwrap(),
        _ => v.clone(),
    }))?;
    let expected = sequential(&r, vec![dense(&r, 16), dense(&r, 20), dense(&r, 10)]);
    ensure!(
        ok(converted.get("model"))? == &expected,
        "transform gave {:?}",
        converted.get("model")
    );

    ensure!(trainer.clone() == trainer, "clone equality");
    let text = ok(serialize(&trainer))?;
    ensure!(
        ok(deserialize(&text, &r))? == trainer,
        "serialize roundtrip"
    );
    ensure!(
        ok(serialize(&dense(&r, 10)))? == r#"{"_type":"Dense","units":10}"#,
        "Dense wire format"
    );

    let partial = ok(r.new_object(
        "train_model",
        [(
            "augment_policy",
            ok(r.new_object("random_augment", [("magnitude", Value::Int(8))]))?,
        )],
    ))?;
    let schedule = |lr: f64| {
        r.new_object(
            "CosineDecay",
            [
                ("learning_rate", Value::Float(lr)),
                ("steps", Value::Int(5000)),
            ],
        )
    };
    let partial = ok(partial.rebind([("learning_schedule", set(ok(schedule(1e-5))?))]))?;
    let trainer_fn = partial.as_object().unwrap();
    ensure!(
        ok(trainer_fn.call([("model", model.clone())], false))? == Value::Float(0.2),
        "call-time binding"
    );
    ensure!(
        trainer_fn
            .call(
                [
                    ("model", model.clone()),
                    ("learning_schedule", ok(schedule(2e-4))?)
                ],
                false
            )
            .is_err(),
        "rebinding without override must fail"
    );
    ensure!(
        trainer_fn
            .call(
                [("model", model), ("learning_schedule", ok(schedule(2e-4))?)],
                true
            )
            .is_ok(),
        "override_args"
    );
    ensure!(
        schedule(-1.0).is_err(),
        "CosineDecay(-1) must violate Float(min=0)"
    );
    Ok("query, rebind, transform, clone, serialize and functor binding reproduce".into())
}

fn trainer_space(r: &Registry, learning_rate: Value) -> Value {
    let conv = r
        .new_object(
            "Conv",
            [
                ("filters", oneof(vec![8.into(), 16.into()]).unwrap().into()),
                (
                    "kernel_size",
                    oneof(vec![vec![3, 3].into(), vec![5, 5].into()])
                        .unwrap()
                        .into(),
                ),
            ],
        )
        .unwrap();
    let dense = r
        .new_object(
            "Dense",
            [("units", oneof(vec![10.into(), 20.into()]).unwrap().into())],
        )
        .unwrap();
    let model = sequential(r, vec![]);
    let model = model
        .rebind([(
            "children",
            set(manyof(3, vec![conv, dense], false, false).unwrap()),
        )])
        .unwrap();
    let augment = r
        .new_object(
            "random_augment",
            [(
                "magnitude",
                oneof(vec![3.into(), 6.into(), 9.into()]).unwrap().into(),
            )],
        )
        .unwrap();
    let schedule = r
        .new_object(
            "CosineDecay",
            [
                ("learning_rate", learning_rate),
                ("steps", Value::Int(5000)),
            ],
        )
        .unwrap();
    r.new_object(
        "train_model",
        [
            ("model", model),
            ("augment_policy", augment),
            ("learning_schedule", schedule),
        ],
    )
    .unwrap()
}

fn count(space: &Value) -> Result<(Option<u64>, usize), String> {
    let spec = abstract_search_space(space);
    Ok((
        space_size(space).to_u64(),
        ok(enumerate_dnas(&spec))?.count(),
    ))
}

fn cardinality() -> Check {
    let perm: Value = permutate(vec![1.into(), 2.into(), 3.into()])
        .unwrap()
        .into();
    let nas = ok(build_nasbench_space(3, 3))?;
    let r = layers();
    let discrete = trainer_space(&r, Value::Float(1e-5));
    let mut sizes = Vec::new();
    for (space, expected) in [(&perm, 6u64), (&nas, 216), (&discrete, 648)] {
        let (size, enumerated) = count(space)?;
        ensure!(
            size == Some(expected) && enumerated as u64 == expected,
            "{size:?} vs {enumerated}, want {expected}"
        );
        sizes.push(expected);
    }
    let continuous = trainer_space(&r, floatv(1e-5, 1e-4).unwrap().into());
    ensure!(
        !space_size(&continuous).is_finite(),
        "floatv space must be infinite"
    );
    Ok(format!("sizes {sizes:?} match enumeration"))
}

fn materialization() -> Check {
    let (registry, cell) = registry();
    let mut total = 0;
    let mut spaces = 0;
    for seed in 0..40u64 {
        let mut g = SpaceGen::new(1000 + seed, cell.clone());
        let space = g.space(4, 10_000);
        let spec = abstract_search_space(&space);
        let size = space_size(&space).to_u64().ok_or("infinite space")?;
        let mut programs = HashSet::new();
        for dna in ok(enumerate_dnas(&spec))? {
            let program = ok(materialize(&space, &dna))?;
            ensure!(
                program.is_deterministic(),
                "seed {seed}: {dna} left hyper values"
            );
            let text = ok(serialize(&program))?;
            ensure!(
                ok(deserialize(&text, &registry))? == program,
                "seed {seed}: {dna} not spec-valid"
            );
            programs.insert(text);
        }
        ensure!(
            programs.len() as u64 == size,
            "seed {seed}: {} programs, size {size}",
            programs.len()
        );
        total += size;
        spaces += 1;
    }
    Ok(format!(
        "{spaces} spaces, {total} programs, all distinct and valid"
    ))
}

fn decomposition() -> Check {
    let (_, cell) = registry();
    let selectors: [&dyn Fn(&DecisionPoint) -> bool; 4] = [
        &|p| p.hints.as_deref() == Some("a"),
        &|p| p.hints.is_some(),
        &|p| p.id.len() % 2 == 0,
        &|p| p.id.contains("k0"),
    ];
    let mut cases = 0;
    for seed in 0..1000u64 {
        let mut g = SpaceGen::new(50_000 + seed, cell.clone());
        g.floats = true;
        let space = g.space(3, u64::MAX);
        let spec = abstract_search_space(&space);
        let dna = random_dna(&spec, g.rng());
        let selector = selectors[seed as usize % selectors.len()];
        let (selected, rest) = ok(split_dna(&spec, &dna, selector))?;
        let partial = ok(materialize_partial(&space, &selected, selector))?;
        let composed = ok(materialize(&partial, &rest))?;
        ensure!(
            composed == ok(materialize(&space, &dna))?,
            "seed {seed}: decomposition differs for {dna}"
        );
        cases += 1;
    }
    Ok(format!("{cases} cases"))
}

fn brute_force(oracle: &SyntheticNasOracle, nodes: usize, ops: usize) -> f64 {
    let edges = nodes * (nodes - 1) / 2;
    let mut best = f64::NEG_INFINITY;
    for op_code in 0..ops.pow(nodes as u32) {
        let node_ops = (0..nodes)
            .map(|i| op_code / ops.pow((nodes - 1 - i) as u32) % ops)
            .collect::<Vec<_>>();
        for edge_code in 0..1usize << edges {
            let on = (0..edges)
                .map(|e| edge_code >> (edges - 1 - e) & 1 == 1)
                .collect::<Vec<_>>();
            best = best.max(oracle.score(&node_ops, &on));
        }
    }
    best
}

fn exhaustive(seed: u64) -> AlgorithmConfig {
    AlgorithmConfig::new(AlgorithmKind::Exhaustive, seed)
}

fn regevo(seed: u64) -> AlgorithmConfig {
    AlgorithmConfig::new(
        AlgorithmKind::RegularizedEvolution(EvolutionConfig::new(25, 5)),
        seed,
    )
}

fn random(seed: u64) -> AlgorithmConfig {
    AlgorithmConfig::new(AlgorithmKind::Random, seed)
}

fn exhaustive_optimum() -> Check {
    let space = ok(build_nasbench_space(3, 3))?;
    let opts = RunOptions::default();
    for seed in 0..20 {
        let oracle = ok(SyntheticNasOracle::new(3, 3, seed))?;
        let best = brute_force(&oracle, 3, 3);
        let joint = ok(run_joint(
            &space,
            &LoopConfig::new(exhaustive(seed), 216),
            &oracle,
            &opts,
        ))?;
        ensure!(
            joint.best_reward == Some(best),
            "seed {seed}: joint {:?} vs {best}",
            joint.best_reward
        );
        let factorized = ok(run_factorized(
            &space,
            &Partition::by_hint("op"),
            &LoopConfig::new(exhaustive(seed), 27),
            &LoopConfig::new(exhaustive(seed), 8),
            &oracle,
            Aggregator::Top5,
            &opts,
        ))?;
        ensure!(
            factorized.best_reward == Some(best),
            "seed {seed}: factorized {:?} vs {best}",
            factorized.best_reward
        );
    }
    Ok("20 oracle seeds, joint and factorized both exact".into())
}

fn budgets() -> Check {
    let space = ok(build_nasbench_space(4, 3))?;
    let oracle = ok(SyntheticNasOracle::new(4, 3, 3))?;
    let opts = RunOptions::default();
    let ops = Partition::by_hint("op");
    let calls = |report: Report| report.oracle_calls;
    let joint = calls(ok(run_joint(
        &space,
        &LoopConfig::new(regevo(1), 37),
        &oracle,
        &opts,
    ))?);
    ensure!(joint == 37, "joint {joint}");
    let factorized = calls(ok(run_factorized(
        &space,
        &ops,
        &LoopConfig::new(regevo(2), 30),
        &LoopConfig::new(regevo(3), 10),
        &oracle,
        Aggregator::Top5,
        &opts,
    ))?);
    ensure!(factorized == 300, "factorized {factorized}");
    let hybrid = calls(ok(run_hybrid(
        &space,
        &ops,
        &LoopConfig::new(regevo(4), 15),
        &LoopConfig::new(regevo(5), 10),
        150,
        &oracle,
        Aggregator::Top5,
        &opts,
    ))?);
    ensure!(hybrid == 300, "hybrid {hybrid}");
    let pivot = symsearch::abstraction::first_dna(&abstract_search_space(&space));
    let separate = calls(ok(run_separate(
        &space,
        &ops,
        &LoopConfig::new(random(6), 40),
        &LoopConfig::new(regevo(7), 25),
        &oracle,
        &pivot,
        &opts,
    ))?);
    ensure!(separate == 65, "separate {separate}");
    Ok("joint 37, factorized 30x10=300, hybrid 15x10+150=300, separate 40+25=65".into())
}

fn final_best(report: &Report) -> f64 {
    *report.trajectory().last().unwrap()
}

fn algorithm_quality() -> Check {
    const SEEDS: u64 = 100;
    const TRIALS: usize = 500;
    const ALPHA: f64 = 0.05;
    let space = ok(build_nasbench_space(5, 3))?;
    ensure!(space_size(&space).to_u64() == Some(248_832), "space size");
    let opts = RunOptions::default();
    let mut diffs = Vec::new();
    let (mut evo_sum, mut rand_sum) = (0.0, 0.0);
    for seed in 0..SEEDS {
        let oracle = ok(SyntheticNasOracle::new(5, 3, seed))?;
        let evo = final_best(&ok(run_joint(
            &space,
            &LoopConfig::new(regevo(seed), TRIALS),
            &oracle,
            &opts,
        ))?);
        let rnd = final_best(&ok(run_joint(
            &space,
            &LoopConfig::new(random(seed), TRIALS),
            &oracle,
            &opts,
        ))?);
        evo_sum += evo;
        rand_sum += rnd;
        diffs.push(evo - rnd);
    }
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = mean / (var / n).sqrt();
    let p = 1.0 - ok(StudentsT::new(0.0, 1.0, n - 1.0))?.cdf(t);
    let summary = format!(
        "mean best regevo {:.5} vs random {:.5}, paired t {t:.3}, one-sided p {p:.2e}",
        evo_sum / n,
        rand_sum / n
    );
    ensure!(evo_sum >= rand_sum && p < ALPHA, "{summary}");
    Ok(summary)
}

fn jsonl(report: &Report) -> Vec<u8> {
    let mut out = Vec::new();
    report.write_jsonl(&mut out).unwrap();
    out
}

/// The synthetic reward written out independently of the library.
fn straight_line(nodes: usize, ops: usize, seed: u64, node_ops: &[usize], on: &[bool]) -> f64 {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / 9007199254740992.0
    };
    let mut w = vec![vec![0.0; ops]; nodes];
    for row in w.iter_mut() {
        for x in row.iter_mut() {
            *x = next();
        }
    }
    let mut pairs = Vec::new();
    for i in 0..nodes {
        for j in i + 1..nodes {
            pairs.push((i, j));
        }
    }
    let v = pairs.iter().map(|_| next()).collect::<Vec<_>>();
    let mut a = 0.0;
    for i in 0..nodes {
        a += w[i][node_ops[i]];
    }
    let mut b = 0.0;
    for (e, (i, j)) in pairs.iter().enumerate() {
        if on[e] == ((node_ops[*i] + node_ops[*j]) % 2 == 1) {
            b += v[e];
        }
    }
    0.5 * (a / nodes as f64) + 0.5 * (b / pairs.len() as f64)
}

fn determinism() -> Check {
    let space = ok(build_nasbench_space(5, 3))?;
    let oracle = ok(SyntheticNasOracle::new(5, 3, 7))?;
    let opts = RunOptions::default();
    let cfg = LoopConfig::new(regevo(1), 500);
    let first = jsonl(&ok(run_joint(&space, &cfg, &oracle, &opts))?);
    let second = jsonl(&ok(run_joint(&space, &cfg, &oracle, &opts))?);
    ensure!(first == second, "joint logs differ");
    let ops = Partition::by_hint("op");
    let hybrid = || {
        run_hybrid(
            &space,
            &ops,
            &LoopConfig::new(regevo(2), 10),
            &LoopConfig::new(regevo(3), 10),
            50,
            &oracle,
            Aggregator::Top5,
            &opts,
        )
    };
    ensure!(
        jsonl(&ok(hybrid())?) == jsonl(&ok(hybrid())?),
        "hybrid logs differ"
    );

    let mut checked = 0;
    for (nodes, ops, seed) in [(2usize, 2usize, 7u64), (3, 3, 11), (4, 2, 0)] {
        let space = ok(build_nasbench_space(nodes, ops))?;
        let oracle = ok(SyntheticNasOracle::new(nodes, ops, seed))?;
        for dna in ok(enumerate_dnas(&abstract_search_space(&space)))? {
            let picks = dna
                .decisions()
                .iter()
                .map(|d| d.as_choice().unwrap()[0].index)
                .collect::<Vec<_>>();
            let on = picks[nodes..].iter().map(|&i| i == 1).collect::<Vec<_>>();
            let expected = straight_line(nodes, ops, seed, &picks[..nodes], &on);
            let got = ok(oracle.score_dna(&dna))?;
            ensure!(
                got.to_bits() == expected.to_bits(),
                "{dna}: {got} vs {expected}"
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{} byte-identical log bytes; {checked} rewards bit-exact",
        first.len()
    ))
}

fn score(value: &Value) -> f64 {
    let text = serialize(value).unwrap();
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    (h >> 11) as f64 / (1u64 << 53) as f64
}

type Eager = fn(&mut EagerContext) -> Result<Value, EagerError>;

fn ints(values: &[i64]) -> Vec<Value> {
    values.iter().map(|&v| Value::Int(v)).collect()
}

fn choice(values: &[i64]) -> Value {
    oneof(ints(values)).unwrap().into()
}

fn paired_programs() -> Vec<(Value, Eager)> {
    let pairs: Vec<(Value, Eager)> = vec![
        (choice(&[1, 2]), |c| {
            Ok(Value::Int(c.oneof_values(&[1, 2])?))
        }),
        (Value::List(vec![choice(&[1, 2]), choice(&[3, 4])]), |c| {
            Ok(Value::List(vec![
                c.oneof_values(&[1, 2])?.into(),
                c.oneof_values(&[3, 4])?.into(),
            ]))
        }),
        (
            oneof(vec![choice(&[1, 2]), 1.into()]).unwrap().into(),
            |c| {
                c.oneof(vec![
                    Candidate::thunk(|c| Ok(Value::Int(c.oneof_values(&[1, 2])?))),
                    Candidate::Value(1.into()),
                ])
            },
        ),
        (symsearch::intv(0, 5).unwrap().into(), |c| {
            Ok(Value::Int(c.intv(0, 5)?))
        }),
        (
            Value::List(vec![
                symsearch::intv(-2, 2).unwrap().into(),
                choice(&[7, 8, 9]),
            ]),
            |c| {
                Ok(Value::List(vec![
                    c.intv(-2, 2)?.into(),
                    c.oneof_values(&[7, 8, 9])?.into(),
                ]))
            },
        ),
        (
            Value::mapping([
                ("a", choice(&[1, 2, 3])),
                ("b", Value::Int(0)),
                ("c", choice(&[4, 5])),
            ])
            .unwrap(),
            |c| {
                let a = c.oneof_values(&[1, 2, 3])?;
                let cc = c.oneof_values(&[4, 5])?;
                Ok(Value::mapping([
                    ("a", Value::Int(a)),
                    ("b", Value::Int(0)),
                    ("c", Value::Int(cc)),
                ])
                .unwrap())
            },
        ),
        (
            oneof(vec![
                Value::List(vec![Value::Int(10), choice(&[1, 2])]),
                Value::List(vec![Value::Int(20), symsearch::intv(0, 3).unwrap().into()]),
                Value::Int(30),
            ])
            .unwrap()
            .into(),
            |c| {
                c.oneof(vec![
                    Candidate::thunk(|c| {
                        Ok(Value::List(vec![
                            10.into(),
                            c.oneof_values(&[1, 2])?.into(),
                        ]))
                    }),
                    Candidate::thunk(|c| Ok(Value::List(vec![20.into(), c.intv(0, 3)?.into()]))),
                    Candidate::Value(30.into()),
                ])
            },
        ),
        (
            oneof(vec![
                oneof(vec![choice(&[1, 2]), 3.into()]).unwrap().into(),
                4.into(),
            ])
            .unwrap()
            .into(),
            |c| {
                c.oneof(vec![
                    Candidate::thunk(|c| {
                        c.oneof(vec![
                            Candidate::thunk(|c| Ok(Value::Int(c.oneof_values(&[1, 2])?))),
                            Candidate::Value(3.into()),
                        ])
                    }),
                    Candidate::Value(4.into()),
                ])
            },
        ),
        (
            Value::List(vec![
                choice(&[1, 2, 3, 4]),
                choice(&[1, 2, 3, 4]),
                choice(&[1, 2, 3, 4]),
            ]),
            |c| {
                let mut out = Vec::new();
                for _ in 0..3 {
                    out.push(Value::Int(c.oneof_values(&[1, 2, 3, 4])?));
                }
                Ok(Value::List(out))
            },
        ),
        (
            Value::List(vec![
                oneof(vec![
                    Value::List(vec![choice(&[5, 6]), choice(&[7, 8])]),
                    0.into(),
                ])
                .unwrap()
                .into(),
                symsearch::intv(1, 2).unwrap().into(),
            ]),
            |c| {
                let head = c.oneof(vec![
                    Candidate::thunk(|c| {
                        let x = c.oneof_values(&[5, 6])?;
                        let y = c.oneof_values(&[7, 8])?;
                        Ok(Value::List(ints(&[x, y])))
                    }),
                    Candidate::Value(0.into()),
                ])?;
                Ok(Value::List(vec![head, c.intv(1, 2)?.into()]))
            },
        ),
    ];
    pairs
}

fn eager_isomorphism() -> Check {
    let opts = RunOptions::default();
    let mut sizes = Vec::new();
    for (i, (declarative, eager)) in paired_programs().into_iter().enumerate() {
        let spec = abstract_search_space(&declarative);
        let eager_spec = ok(collect_spec(&eager))?;
        ensure!(spec.shape_eq(&eager_spec), "program {i}: specs differ");
        let size = space_size(&declarative).to_u64().unwrap() as usize;
        let cfg = LoopConfig::new(exhaustive(0), size + 5);
        let oracle = |program: &Value, _: &Dna| Ok(score(program));
        let joint = ok(run_joint(&declarative, &cfg, &oracle, &opts))?;
        let (_, eager_report) = ok(run_eager(
            |c: &mut EagerContext| eager(c).map(|v| score(&v)),
            &cfg,
            &opts,
        ))?;
        ensure!(
            joint.oracle_calls == size && eager_report.oracle_calls == size,
            "program {i}: call counts"
        );
        ensure!(
            joint.best_reward == eager_report.best_reward,
            "program {i}: best rewards differ"
        );
        ensure!(
            joint.trajectory() == eager_report.trajectory(),
            "program {i}: trajectories differ"
        );
        sizes.push(size);
    }
    Ok(format!("10 pairs, space sizes {sizes:?}"))
}

fn hybrid_sanity() -> Check {
    let space = ok(build_nasbench_space(4, 3))?;
    let opts = RunOptions::default();
    let ops = Partition::by_hint("op");
    for seed in 0..30u64 {
        let oracle = ok(SyntheticNasOracle::new(4, 3, seed))?;
        let report: Report = ok(run_hybrid(
            &space,
            &ops,
            &LoopConfig::new(regevo(seed), 15),
            &LoopConfig::new(regevo(seed + 1000), 10),
            150,
            &oracle,
            Aggregator::Top5,
            &opts,
        ))?;
        let handoff = report.handoff.ok_or("no handoff")?;
        let trajectory = report.trajectory();
        ensure!(
            handoff == 150 && trajectory.len() == 300,
            "seed {seed}: layout"
        );
        let at_handoff = trajectory[handoff - 1];
        ensure!(
            trajectory[handoff..].windows(2).all(|w| w[0] <= w[1]),
            "seed {seed}: phase-2 best-so-far decreased"
        );
        ensure!(
            trajectory[handoff..].iter().all(|&b| b >= at_handoff),
            "seed {seed}: below handoff value"
        );
        let outer = report.trials[handoff].outer_index;
        ensure!(
            report.trials[handoff..]
                .iter()
                .all(|t| t.outer_index == outer),
            "seed {seed}: phase 2 left the sub-space"
        );
    }
    Ok("30 seeds".into())
}
