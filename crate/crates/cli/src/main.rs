//! Command-line interface: inference, training and constraint
//! diagnostics over knowledge-base files.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 nonconvergence under
//! `--strict`.

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use logicnet::formula::KnowledgeBase;
use logicnet::graph::{CompileConfig, NeuronGraph};
use logicnet::inference::{Engine, InferConfig, ModelParams, Trainable};
use logicnet::learning::{check_constraints, train, LossSet, TrainConfig};
use logicnet::parse::parse_kb;
use logicnet::report;
use logicnet::semantics::Family;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "logicnet", version, about = "Weighted real-valued logic engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run bounds inference to convergence and report query answers.
    Infer(InferArgs),
    /// Train connective weights and initial bounds against the logical loss.
    Train(TrainArgs),
    /// Check the classical-behaviour parameter constraints.
    Check(CheckArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Knowledge-base file.
    kb: PathBuf,
    /// Activation family: lukasiewicz | godel | tailored | logistic |
    /// probability. Defaults to $LOGICNET_SEMANTICS or lukasiewicz.
    #[arg(long)]
    semantics: Option<String>,
    /// Threshold of truth in (1/2, 1].
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Rewrite n-ary connective chains into nested binary nodes.
    #[arg(long)]
    binary_connectives: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InferArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Report only this query.
    #[arg(long)]
    query: Option<String>,
    /// Convergence threshold on the aggregate bounds change.
    #[arg(long, default_value_t = 1e-4)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Minimum operand weight for downward rules to offer proofs.
    #[arg(long, default_value_t = 0.01)]
    w_min: f64,
    /// Propagate only groundings reachable from facts and queries.
    #[arg(long)]
    guided: bool,
    /// Exit with status 3 if inference does not converge.
    #[arg(long)]
    strict: bool,
    /// Dump the full graph (nodes, parameters, bounds, states) as JSON.
    #[arg(long)]
    dump_graph: Option<PathBuf>,
    /// Export every predicate's grounding table as CSV.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    lr_start: f64,
    #[arg(long, default_value_t = 0.0)]
    lr_end: f64,
    /// Clip each parameter update step to this magnitude.
    #[arg(long, default_value_t = 0.1)]
    grad_clip: f64,
    #[arg(long, default_value_t = 0.01)]
    w_min: f64,
    /// Comma-separated trainable groups: weights,axioms,facts.
    #[arg(long = "train", default_value = "weights,axioms,facts")]
    train_groups: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Disable rescaling of a connective's weights by w_max.
    #[arg(long)]
    no_weight_norm: bool,
    /// Gradient scale inside clamped regions (1 = fully transparent,
    /// 0 = conventional clamp).
    #[arg(long, default_value_t = 1.0)]
    grad_scale: f64,
    /// Node set for the factual-alignment term:
    /// params | facts | observed | axioms | all.
    #[arg(long, default_value = "observed")]
    factalign_over: String,
    /// Node set for the bound-tightness term.
    #[arg(long, default_value = "axioms")]
    tightbounds_over: String,
    /// Write a parameter checkpoint here.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
}

fn family(common: &CommonArgs) -> anyhow::Result<Family> {
    let name = common
        .semantics
        .clone()
        .or_else(|| std::env::var("LOGICNET_SEMANTICS").ok())
        .unwrap_or_else(|| "lukasiewicz".to_string());
    Family::parse(&name).with_context(|| format!("unknown semantics {:?}", name))
}

fn load(common: &CommonArgs) -> Result<KnowledgeBase<f64>, String> {
    let text = std::fs::read_to_string(&common.kb)
        .map_err(|e| format!("cannot read {}: {}", common.kb.display(), e))?;
    let mut kb = parse_kb::<f64>(&text).map_err(|e| format!("{}: {}", common.kb.display(), e))?;
    if common.binary_connectives {
        for ax in kb.axioms.iter_mut() {
            ax.formula = logicnet::formula::decompose_binary(ax.formula.clone());
        }
        for q in kb.queries.iter_mut() {
            q.formula = logicnet::formula::decompose_binary(q.formula.clone());
        }
    }
    Ok(kb)
}

fn emit(common: &CommonArgs, doc: &serde_json::Value, summary: &str) -> anyhow::Result<()> {
    let text = report::to_string_pretty(doc);
    match &common.out {
        Some(path) => {
            std::fs::write(path, text + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            println!("{}", summary);
        }
        None => {
            eprintln!("{}", summary);
            println!("{}", text);
        }
    }
    Ok(())
}

fn run_infer(args: &InferArgs) -> anyhow::Result<ExitCode> {
    let fam = family(&args.common)?;
    let kb = match load(&args.common) {
        Ok(kb) => kb,
        Err(msg) => {
            eprintln!("{}", msg);
            return Ok(ExitCode::from(2));
        }
    };
    let compile = CompileConfig {
        family: fam,
        alpha: args.common.alpha,
        grad_scale: 1.0,
        guided: args.guided,
    };
    let graph = NeuronGraph::compile(&kb, compile).context("compiling knowledge base")?;
    let model = ModelParams::from_graph(&graph);
    let infer_cfg = InferConfig {
        epsilon: args.epsilon,
        max_iters: args.max_iters,
        w_min: args.w_min,
    };
    let mut eng = Engine::new(&graph, &model, infer_cfg);
    let rep = eng.infer();
    if let Some(path) = &args.dump_graph {
        let dump = report::graph_dump_json(&eng, &model);
        std::fs::write(path, report::to_string_pretty(&dump) + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.csv_out {
        let mut csv = String::new();
        for (pred, &node) in &graph.atom_nodes {
            csv.push_str(&format!("# {}\n", pred));
            csv.push_str(&eng.table(node).to_csv());
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    let doc = report::infer_report_json(&graph, &rep, args.query.as_deref());
    let summary = format!(
        "{}: {} in {} iterations, {} contradiction(s), {} quer{} answered",
        args.common.kb.display(),
        if rep.converged { "converged" } else { "did not converge" },
        rep.iterations,
        rep.contradiction_count,
        rep.queries.len(),
        if rep.queries.len() == 1 { "y" } else { "ies" },
    );
    emit(&args.common, &doc, &summary)?;
    if args.strict && !rep.converged {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_train(args: &TrainArgs) -> anyhow::Result<ExitCode> {
    let fam = family(&args.common)?;
    let kb = match load(&args.common) {
        Ok(kb) => kb,
        Err(msg) => {
            eprintln!("{}", msg);
            return Ok(ExitCode::from(2));
        }
    };
    let compile = CompileConfig {
        family: fam,
        alpha: args.common.alpha,
        grad_scale: args.grad_scale,
        guided: false,
    };
    let graph = NeuronGraph::compile(&kb, compile).context("compiling knowledge base")?;
    let mut trainable = Trainable::default();
    for group in args.train_groups.split(',').filter(|s| !s.is_empty()) {
        match group.trim() {
            "weights" => trainable.weights = true,
            "axioms" => trainable.axiom_bounds = true,
            "facts" => trainable.fact_bounds = true,
            other => anyhow::bail!("unknown trainable group {:?}", other),
        }
    }
    let cfg = TrainConfig {
        epochs: args.epochs,
        lr_start: args.lr_start,
        lr_end: args.lr_end,
        grad_clip: args.grad_clip,
        w_min: args.w_min,
        trainable,
        weight_normalization: !args.no_weight_norm,
        epsilon: args.epsilon,
        max_iters: args.max_iters,
        factalign_over: LossSet::parse(&args.factalign_over)
            .with_context(|| format!("unknown loss set {:?}", args.factalign_over))?,
        tightbounds_over: LossSet::parse(&args.tightbounds_over)
            .with_context(|| format!("unknown loss set {:?}", args.tightbounds_over))?,
        seed: args.seed,
    };
    let (rep, model, _) = train(&graph, &cfg);
    if let Some(path) = &args.checkpoint {
        let ckpt = report::checkpoint_json(&graph, &model);
        std::fs::write(path, report::to_string_pretty(&ckpt) + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let start = rep.epochs.first().map(|r| r.loss);
    let doc = report::train_report_json(&graph, &rep);
    let summary = format!(
        "{}: {} epochs, loss {} -> {:.6}, {} contradiction(s) remaining",
        args.common.kb.display(),
        rep.epochs.len(),
        start.map(|l| format!("{:.6}", l)).unwrap_or_else(|| "-".into()),
        rep.final_loss.loss,
        rep.final_contradiction_count,
    );
    emit(&args.common, &doc, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn run_check(args: &CheckArgs) -> anyhow::Result<ExitCode> {
    let fam = family(&args.common)?;
    let kb = match load(&args.common) {
        Ok(kb) => kb,
        Err(msg) => {
            eprintln!("{}", msg);
            return Ok(ExitCode::from(2));
        }
    };
    let compile = CompileConfig {
        family: fam,
        alpha: args.common.alpha,
        grad_scale: 1.0,
        guided: false,
    };
    let graph = NeuronGraph::compile(&kb, compile).context("compiling knowledge base")?;
    let model = ModelParams::from_graph(&graph);
    let checks = check_constraints(&graph, &model, args.common.alpha);
    let violations = checks.iter().filter(|c| !c.satisfied).count();
    let doc = report::constraints_json(&checks);
    let summary = format!(
        "{}: {} constraint(s) checked, {} violation(s)",
        args.common.kb.display(),
        checks.len(),
        violations,
    );
    emit(&args.common, &doc, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Infer(args) => run_infer(args),
        Command::Train(args) => run_train(args),
        Command::Check(args) => run_check(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {:#}", err);
            ExitCode::FAILURE
        }
    }
}
