use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;

use qcnn_core::data::{Pad, TaskSpec};
use qcnn_core::encodings::{liveness_peak, memory_bound};
use qcnn_core::metrics::{
    evaluate_circuit, objective_lpqc, Arch, MetricReport, SamplingBudget, ThresholdSet,
};
use qcnn_core::models::{
    baseline_circuit, best_model, grid_search_menu, menu_model, reference_table,
    reference_tables, BaselineId, HybridModel, RegularModel,
};
use qcnn_core::search::{run_search, SearchConfig};
use qcnn_core::sim::ParameterizedCircuit;
use qcnn_core::training::{evaluate, train, BsocSpec, TrainConfig, TrainRun, TrainableModel};

use crate::data_source::load_dataset;

fn parse_arch(s: &str) -> anyhow::Result<Arch> {
    Arch::parse(s).with_context(|| format!("unknown architecture '{s}' (hybrid|regular)"))
}

fn parse_task(s: &str) -> anyhow::Result<TaskSpec> {
    TaskSpec::parse(s).with_context(|| format!("unknown task '{s}' (0v1|7v8|g4|0-3)"))
}

fn resolve_circuit(reference: &str, qubits: usize, arch: Arch) -> anyhow::Result<ParameterizedCircuit> {
    if let Some(id) = BaselineId::parse(reference) {
        return Ok(baseline_circuit(id, qubits, arch)?);
    }
    let path = Path::new(reference);
    if path.exists() {
        let json = fs::read_to_string(path)?;
        let circuit = ParameterizedCircuit::from_json(&json)?;
        if circuit.num_qubits != qubits {
            anyhow::bail!(
                "circuit file is on {} qubits, --qubits says {qubits}",
                circuit.num_qubits
            );
        }
        return Ok(circuit);
    }
    anyhow::bail!("unknown circuit '{reference}' (library id C1..C6/AS or a circuit JSON path)")
}

fn write_if_some(out: &Option<PathBuf>, name: &str, content: &str) -> anyhow::Result<()> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), content)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- metrics

#[derive(Args)]
pub struct MetricsArgs {
    /// Library id (C1..C6, AS) or path to a circuit JSON file.
    #[arg(long)]
    circuit: String,
    #[arg(long)]
    qubits: usize,
    #[arg(long)]
    arch: String,
    /// Input configurations |C|.
    #[arg(long, default_value_t = 10)]
    inputs: usize,
    /// Parameter samples per input |S|.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Directory for metrics.csv / metrics.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_metrics(args: MetricsArgs) -> anyhow::Result<()> {
    crate::check_capacity(args.qubits)?;
    let arch = parse_arch(&args.arch)?;
    let circuit = resolve_circuit(&args.circuit, args.qubits, arch)?;
    let budget = SamplingBudget {
        num_inputs: args.inputs,
        num_weight_samples: args.samples,
        rng_seed: args.seed,
    };
    let report = evaluate_circuit(&args.circuit, &circuit, arch, &budget);
    println!("{}", MetricReport::CSV_HEADER);
    println!("{}", report.csv_row());
    let json = serde_json::to_string_pretty(&report)?;
    write_if_some(
        &args.out,
        "metrics.csv",
        &format!("{}\n{}\n", MetricReport::CSV_HEADER, report.csv_row()),
    )?;
    write_if_some(&args.out, "metrics.json", &json)?;
    Ok(())
}

// ------------------------------------------------------- reproduce-tables

#[derive(Args)]
pub struct ReproduceArgs {
    /// Table keys: s1..s8, hybrid-2q..regular-9q, or `all`.
    #[arg(long, default_value = "all")]
    which: String,
    /// desk (10x2000) or paper (publication scale, 100x10000; slow).
    #[arg(long, default_value = "desk")]
    budget: String,
    /// Comma-separated seeds averaged per cell.
    #[arg(long, default_value = "170,171,172")]
    seeds: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_reproduce(args: ReproduceArgs) -> anyhow::Result<()> {
    let seeds: Vec<u64> = args
        .seeds
        .split(',')
        .map(|s| s.trim().parse().context("bad seed list"))
        .collect::<anyhow::Result<_>>()?;
    let tables = if args.which.eq_ignore_ascii_case("all") {
        reference_tables()
    } else {
        args.which
            .split(',')
            .map(|key| {
                reference_table(key.trim())
                    .with_context(|| format!("unknown table '{key}' (s1..s8 or hybrid-2q style)"))
            })
            .collect::<anyhow::Result<Vec<_>>>()?
    };
    if args.budget == "paper" {
        eprintln!("note: the publication-scale budget evaluates 100x10000 samples per cell; expect a long run");
    } else if args.budget != "desk" {
        anyhow::bail!("unknown budget '{}' (desk|paper)", args.budget);
    }

    let mut csv = String::from(
        "table,arch,qubits,circuit,published_expr,repro_expr,expr_delta,expr_pass,\
         published_entgl,repro_entgl,entgl_delta,entgl_pass,published_lpqc,recomputed_lpqc,repro_lpqc\n",
    );
    for table in &tables {
        crate::check_capacity(table.qubits)?;
        println!(
            "# table {} ({} {}q), seeds {:?}",
            table.key,
            table.arch.label(),
            table.qubits,
            seeds
        );
        let thr = ThresholdSet {
            expr_thr: table.expr_thr,
            expr_max: table.expr_max,
            ..table.thresholds()
        };
        for row in table.rows {
            let circuit = baseline_circuit(row.id, table.qubits, table.arch)?;
            let mut expr = 0.0;
            let mut entgl = 0.0;
            let mut lpqc = 0.0;
            for &seed in &seeds {
                let budget = match args.budget.as_str() {
                    "paper" => SamplingBudget::publication(seed),
                    _ => SamplingBudget::desk(seed),
                };
                let rep = evaluate_circuit(row.id.label(), &circuit, table.arch, &budget);
                expr += rep.expr_mean / seeds.len() as f64;
                entgl += rep.entgl_mean / seeds.len() as f64;
                lpqc += rep.l_pqc / seeds.len() as f64;
            }
            // the printed objective recomputed from the row's own values
            let c = qcnn_core::sim::Complexity {
                params: row.params,
                depth: row.depth,
                gates: row.gates,
            };
            let recomputed = objective_lpqc(row.expr.0, row.entgl.0, c, &thr);
            let expr_delta = (expr - row.expr.0).abs();
            let entgl_delta = (entgl - row.entgl.0).abs();
            let expr_pass = if row.expr.0.is_infinite() {
                expr.is_infinite()
            } else {
                expr_delta <= 0.06
            };
            let line = format!(
                "{},{},{},{},{},{},{},{},{:.3},{:.3},{:.3},{},{},{},{}",
                table.key,
                table.arch.label(),
                table.qubits,
                row.id.label(),
                fmt(row.expr.0),
                fmt(expr),
                fmt(expr_delta),
                expr_pass,
                row.entgl.0,
                entgl,
                entgl_delta,
                entgl_delta <= 0.04,
                fmt(row.l_pqc),
                fmt(recomputed),
                fmt(lpqc),
            );
            println!("{line}");
            csv.push_str(&line);
            csv.push('\n');
        }
        println!(
            "# thresholds: params<={} depth<={} gates<={} expr<={} entgl>={:.3}",
            thr.params_max, thr.depth_max, thr.gates_max, thr.expr_thr, thr.entgl_thr
        );
    }
    write_if_some(&args.out, "reproduction.csv", &csv)?;
    Ok(())
}

fn fmt(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.4}")
    }
}

// ------------------------------------------------------------------ search

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    qubits: usize,
    #[arg(long)]
    arch: String,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    max_duplicates: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Disable the surrogate; propose uniformly at random.
    #[arg(long)]
    random_mode: bool,
    /// How many best circuits to rescore at the desk budget and export.
    #[arg(long, default_value_t = 3)]
    top: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_search_cmd(args: SearchArgs) -> anyhow::Result<()> {
    crate::check_capacity(args.qubits)?;
    let arch = parse_arch(&args.arch)?;
    let mut config = SearchConfig::desk(args.qubits, arch, args.seed);
    config.num_trials = args.trials;
    config.max_duplicates = args.max_duplicates;
    config.random_mode = args.random_mode;
    let started = std::time::Instant::now();
    let (best, log) = run_search(&config)?;
    eprintln!(
        "search: {} trials in {:.1}s, {} distinct structures",
        args.trials,
        started.elapsed().as_secs_f64(),
        best.len()
    );
    let caps = ThresholdSet::standard(arch, args.qubits);
    println!("rank,hash,search_lpqc,desk_lpqc,expr,entgl,params,depth,gates");
    for (rank, entry) in best.iter().take(args.top.max(1)).enumerate() {
        let circuit = entry.genome.decode(&caps)?;
        let rescored = evaluate_circuit("search-best", &circuit, arch, &SamplingBudget::desk(args.seed));
        println!(
            "{},{:016x},{},{},{},{},{},{},{}",
            rank,
            entry.hash,
            fmt(entry.l_pqc),
            fmt(rescored.l_pqc),
            fmt(rescored.expr_mean),
            fmt(rescored.entgl_mean),
            entry.complexity.params,
            entry.complexity.depth,
            entry.complexity.gates,
        );
        if let Some(dir) = &args.out {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("best_{rank}.json")), circuit.to_json())?;
        }
    }
    write_if_some(&args.out, "trials.jsonl", &log.to_json_lines())?;
    Ok(())
}

// ------------------------------------------------------------------- train

#[derive(Args)]
pub struct TrainArgs {
    /// regular-1q-best / regular-4q-best / regular-16q-best, a menu name
    /// with --qubits, or a model-config JSON path.
    #[arg(long)]
    model: String,
    /// Needed when --model is a menu name such as U3-U3-U3->Pool-C2.
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long, default_value = "0v1")]
    task: String,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, default_value_t = 200)]
    batches: usize,
    #[arg(long, default_value_t = 25)]
    batch_size: usize,
    #[arg(long, default_value_t = 0.01)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.1)]
    fd_epsilon: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Per-class training examples (0 = all).
    #[arg(long, default_value_t = 500)]
    train_cap: usize,
    /// Per-class test examples (0 = all).
    #[arg(long, default_value_t = 250)]
    test_cap: usize,
    /// Use the synthetic digit source even if IDX data is configured.
    #[arg(long)]
    synthetic: bool,
    /// Output directory (default runs/<timestamp>).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum ModelConfig {
    Regular(RegularModel),
    Hybrid(HybridModel),
}

fn resolve_model(reference: &str, qubits: Option<usize>) -> anyhow::Result<ModelConfig> {
    match reference {
        "regular-1q-best" => Ok(ModelConfig::Regular(best_model(1)?)),
        "regular-4q-best" => Ok(ModelConfig::Regular(best_model(4)?)),
        "regular-16q-best" => Ok(ModelConfig::Regular(best_model(16)?)),
        other => {
            let path = Path::new(other);
            if path.exists() {
                let json = fs::read_to_string(path)?;
                if let Ok(model) = serde_json::from_str::<RegularModel>(&json) {
                    return Ok(ModelConfig::Regular(model));
                }
                let hybrid: HybridModel =
                    serde_json::from_str(&json).context("parsing model config JSON")?;
                return Ok(ModelConfig::Hybrid(hybrid));
            }
            let qubits = qubits.context("menu model names need --qubits (1, 4 or 16)")?;
            Ok(ModelConfig::Regular(menu_model(qubits, other)?))
        }
    }
}

pub fn resolve_regular_model(
    reference: &str,
    qubits: Option<usize>,
) -> anyhow::Result<RegularModel> {
    match resolve_model(reference, qubits)? {
        ModelConfig::Regular(m) => Ok(m),
        ModelConfig::Hybrid(_) => anyhow::bail!("this command takes a regular model"),
    }
}

pub fn run_train(args: TrainArgs) -> anyhow::Result<()> {
    let task = parse_task(&args.task)?;
    let config_model = resolve_model(&args.model, args.qubits)?;
    let (model_name, model_json, trainable) = match config_model {
        ModelConfig::Regular(model) => {
            let plan = model.plan()?;
            crate::check_capacity(plan.num_qubits())?;
            (
                model.name.clone(),
                serde_json::to_string_pretty(&model)?,
                TrainableModel::regular(model)?,
            )
        }
        ModelConfig::Hybrid(model) => (
            model.name.clone(),
            serde_json::to_string_pretty(&model)?,
            TrainableModel::hybrid(model)?,
        ),
    };
    let (dataset, source) = load_dataset(
        task,
        Pad::Pad32,
        args.seed,
        args.train_cap,
        args.test_cap,
        args.synthetic,
    )?;
    eprintln!(
        "training {model_name} on {:?} ({source} data, {} train / {} test)",
        task,
        dataset.train.len(),
        dataset.test.len()
    );
    let spec = BsocSpec::new(task.num_classes());
    let out_dir = args.out.clone().unwrap_or_else(|| {
        PathBuf::from("runs").join(format!(
            "{}",
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_secs()
        ))
    });
    fs::create_dir_all(&out_dir)?;

    let mut runs: Vec<TrainRun> = Vec::with_capacity(args.runs);
    for run_idx in 0..args.runs {
        let config = TrainConfig {
            learning_rate: args.learning_rate,
            num_batches: args.batches,
            batch_size: args.batch_size,
            eval_every: 20,
            fd_epsilon: args.fd_epsilon,
            runs: args.runs,
            seed: args.seed.wrapping_add(run_idx as u64),
        };
        let started = std::time::Instant::now();
        let run = train(&trainable, &dataset.train, &dataset.test, &spec, &config)?;
        eprintln!(
            "run {}: final accuracy {:.2}% in {:.1}s",
            run_idx,
            run.final_accuracy(),
            started.elapsed().as_secs_f64()
        );
        fs::write(
            out_dir.join(format!("history_run{run_idx}.csv")),
            run.history_csv(),
        )?;
        runs.push(run);
    }

    // aggregated mean +- std history across runs
    let mut agg = String::from("batch,mean_loss,std_loss,mean_accuracy,std_accuracy\n");
    let points = runs[0].history.len();
    for i in 0..points {
        let losses: Vec<f64> = runs.iter().map(|r| r.history[i].test_loss).collect();
        let accs: Vec<f64> = runs.iter().map(|r| r.history[i].test_accuracy).collect();
        let (ml, sl) = mean_std(&losses);
        let (ma, sa) = mean_std(&accs);
        agg.push_str(&format!(
            "{},{:.6},{:.6},{:.4},{:.4}\n",
            runs[0].history[i].batch, ml, sl, ma, sa
        ));
    }
    fs::write(out_dir.join("history.csv"), &agg)?;
    fs::write(out_dir.join("model.json"), &model_json)?;
    let config_json = serde_json::json!({
        "model": model_name,
        "task": task,
        "runs": args.runs,
        "batches": args.batches,
        "batch_size": args.batch_size,
        "learning_rate": args.learning_rate,
        "fd_epsilon": args.fd_epsilon,
        "seed": args.seed,
        "data_source": source,
        "train_cap_per_class": args.train_cap,
        "test_cap_per_class": args.test_cap,
    });
    fs::write(
        out_dir.join("config.json"),
        serde_json::to_string_pretty(&config_json)?,
    )?;
    for (i, run) in runs.iter().enumerate() {
        fs::write(
            out_dir.join(format!("run{i}.json")),
            serde_json::to_string_pretty(run)?,
        )?;
    }
    let final_accs: Vec<f64> = runs.iter().map(|r| r.final_accuracy()).collect();
    let (mean, std) = mean_std(&final_accs);
    println!("final_accuracy_mean,{mean:.4}");
    println!("final_accuracy_std,{std:.4}");
    println!("output_dir,{}", out_dir.display());
    Ok(())
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
    (mean, var.sqrt())
}

// ---------------------------------------------------------------- evaluate

#[derive(Args)]
pub struct EvaluateArgs {
    /// Model reference (as for train) or a run directory containing
    /// model.json.
    #[arg(long)]
    model: String,
    #[arg(long)]
    qubits: Option<usize>,
    /// JSON file with the parameter vector, or a run{N}.json file.
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value = "0v1")]
    task: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 250)]
    test_cap: usize,
    #[arg(long)]
    synthetic: bool,
}

pub fn run_evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    let task = parse_task(&args.task)?;
    let model_path = Path::new(&args.model).join("model.json");
    let model = if model_path.exists() {
        serde_json::from_str(&fs::read_to_string(model_path)?)?
    } else {
        resolve_regular_model(&args.model, args.qubits)?
    };
    let params_json = fs::read_to_string(&args.params)?;
    let params: Vec<f64> = match serde_json::from_str::<TrainRun>(&params_json) {
        Ok(run) => run.final_params,
        Err(_) => serde_json::from_str(&params_json).context("parameter file")?,
    };
    let (dataset, source) = load_dataset(task, Pad::Pad32, args.seed, 1, args.test_cap, args.synthetic)?;
    let trainable = TrainableModel::regular(model)?;
    let spec = BsocSpec::new(task.num_classes());
    let (acc, loss) = evaluate(&trainable, &params, &dataset.test, &spec)?;
    println!("data_source,{source}");
    println!("test_accuracy,{acc:.4}");
    println!("test_loss,{loss:.6}");
    Ok(())
}

// ------------------------------------------------------------- grid-search

#[derive(Args)]
pub struct GridSearchArgs {
    /// 1, 4 or 16.
    #[arg(long)]
    qubits: usize,
    #[arg(long, default_value = "0v1")]
    task: String,
    /// Runs per model (the published search used one).
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 200)]
    batches: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    train_cap: usize,
    #[arg(long, default_value_t = 250)]
    test_cap: usize,
    #[arg(long)]
    synthetic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_grid_search(args: GridSearchArgs) -> anyhow::Result<()> {
    let task = parse_task(&args.task)?;
    let menu = grid_search_menu(args.qubits)?;
    let (dataset, source) = load_dataset(
        task,
        Pad::Pad32,
        args.seed,
        args.train_cap,
        args.test_cap,
        args.synthetic,
    )?;
    eprintln!(
        "grid search: {} models at {} qubits on {source} data",
        menu.len(),
        args.qubits
    );
    let spec = BsocSpec::new(task.num_classes());
    let mut results: Vec<(String, f64, f64)> = Vec::new();
    for model in menu {
        let name = model.name.clone();
        let trainable = TrainableModel::regular(model)?;
        let mut finals = Vec::new();
        for run_idx in 0..args.runs {
            let config = TrainConfig {
                num_batches: args.batches,
                seed: args.seed.wrapping_add(run_idx as u64),
                runs: args.runs,
                ..TrainConfig::default()
            };
            let run = train(&trainable, &dataset.train, &dataset.test, &spec, &config)?;
            finals.push(run.final_accuracy());
        }
        let (mean, std) = mean_std(&finals);
        eprintln!("  {name}: {mean:.2}% (+-{std:.2})");
        results.push((name, mean, std));
    }
    results.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut csv = String::from("rank,model,final_accuracy_mean,final_accuracy_std\n");
    println!("rank,model,final_accuracy_mean,final_accuracy_std");
    for (rank, (name, mean, std)) in results.iter().enumerate() {
        let line = format!("{rank},{name},{mean:.4},{std:.4}");
        println!("{line}");
        csv.push_str(&line);
        csv.push('\n');
    }
    write_if_some(&args.out, "grid_search.csv", &csv)?;
    Ok(())
}

// ------------------------------------------------------------ memory-bound

#[derive(Args)]
pub struct MemoryBoundArgs {
    /// Square input side (a power of m).
    #[arg(short = 'n', long)]
    n: usize,
    /// Convolution kernel side (stride 1).
    #[arg(short = 'k', long)]
    k: usize,
    /// Pooling kernel side and stride.
    #[arg(short = 'm', long)]
    m: usize,
}

pub fn run_memory_bound(args: MemoryBoundArgs) -> anyhow::Result<()> {
    let formula = memory_bound(args.n, args.k, args.m)?;
    let oracle = liveness_peak(args.n, args.k, args.m)?;
    println!("formula={formula} oracle={oracle}");
    Ok(())
}

// ----------------------------------------------------- shared test helpers
