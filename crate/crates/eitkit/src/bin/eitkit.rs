//! Command-line front end: dataset simulation, N-D ingestion, training,
//! evaluation, and the experiment runner. Fails with a machine-readable
//! error JSON on stderr and a nonzero exit code.

use clap::{Parser, Subcommand};
use eitkit::ann;
use eitkit::dataset::{generate_dataset, ingest_nd_records, read_dataset, write_dataset, Dataset};
use eitkit::experiments::{
    confusion, emit_report, emit_sweep, model_kind_for, paper_counts, pattern_for,
    run_electrode_sweep, run_measurement_sweep, run_task_on, scaled_counts, EvalSummary,
    ModelKind, RunConfig,
};
use eitkit::forward::PatternKind;
use eitkit::phantom::Task;
use eitkit::svm;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "eitkit", about = "2D EIT inclusion simulation and classification toolkit")]
struct Cli {
    /// JSON file overriding runner defaults (fields of RunConfig)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a labeled D-N dataset
    Simulate {
        /// task name: presence, count_small, count_large, radii,
        /// iso_vs_aniso_both, iso_vs_aniso_inclusion, diag_vs_offdiag,
        /// iso_vs_spatial
        #[arg(long)]
        task: String,
        /// samples per class (overrides --scale)
        #[arg(long)]
        count_per_class: Option<usize>,
        /// fraction of the experiment's reference counts
        #[arg(long, default_value_t = 0.1)]
        scale: f64,
        #[arg(long, default_value_t = 16)]
        electrodes: usize,
        #[arg(long, default_value_t = 16)]
        measurements: usize,
        /// trig or opposite (defaults to the task's pattern)
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ingest externally measured N-D records (CSV: label, M, r_11..r_MM)
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a classifier on a dataset directory
    Train {
        /// ann or svm
        #[arg(long)]
        model: String,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// output model JSON path
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a trained model on a dataset directory
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// report output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a full experiment: one of the eight tasks, measurement-sweep,
    /// or electrode-sweep
    Experiment {
        task: String,
        #[arg(long, default_value_t = 0.1)]
        scale: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// electrode sweep: also fill the full (E, M <= E) grid
        #[arg(long, default_value_t = false)]
        full_grid: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            let payload = serde_json::json!({
                "error": {
                    "kind": error_kind(&err),
                    "message": err.to_string(),
                }
            });
            eprintln!("{}", serde_json::to_string_pretty(&payload).expect("error serializes"));
            1
        }
    };
    std::process::exit(code);
}

fn error_kind(err: &eitkit::EitError) -> &'static str {
    use eitkit::EitError::*;
    match err {
        InvalidArgument(_) => "invalid_argument",
        DegenerateTriangle { .. } => "degenerate_triangle",
        MeshTooCoarse(_) => "mesh_too_coarse",
        ElectrodeOutOfRange { .. } => "electrode_out_of_range",
        NotElliptic { .. } => "not_elliptic",
        OutsideTank { .. } => "outside_tank",
        PlacementInfeasible { .. } => "placement_infeasible",
        SolveFailed(_) => "solve_failed",
        SingularMatrix { .. } => "singular_matrix",
        PatternFailed { .. } => "pattern_failed",
        SampleFailed { .. } => "sample_failed",
        ClassTooSmall { .. } => "class_too_small",
        ShapeMismatch(_) => "shape_mismatch",
        TrainingDiverged { .. } => "training_diverged",
        SmoNotConverged { .. } => "smo_not_converged",
        MalformedRecord { .. } => "malformed_record",
        Io { .. } => "io",
        Format(_) => "format",
    }
}

fn load_config(path: &Option<PathBuf>) -> eitkit::Result<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| eitkit::EitError::io(p.display().to_string(), e))?;
            serde_json::from_str(&text).map_err(|e| eitkit::EitError::Format(e.to_string()))
        }
    }
}

fn parse_task(name: &str) -> eitkit::Result<Task> {
    Task::from_name(name).ok_or_else(|| {
        eitkit::EitError::InvalidArgument(format!(
            "unknown task {name:?}; expected one of {}",
            Task::ALL.map(|t| t.name()).join(", ")
        ))
    })
}

fn run(cli: Cli) -> eitkit::Result<()> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Simulate {
            task,
            count_per_class,
            scale,
            electrodes,
            measurements,
            pattern,
            seed,
            out,
        } => {
            let task = parse_task(&task)?;
            let counts = match count_per_class {
                Some(c) => vec![c; task.class_count()],
                None => scaled_counts(&paper_counts(task), scale),
            };
            let kind = match pattern {
                None => pattern_for(task),
                Some(ref p) => PatternKind::from_name(p).ok_or_else(|| {
                    eitkit::EitError::InvalidArgument(format!(
                        "unknown pattern {p:?}; expected trig or opposite"
                    ))
                })?,
            };
            let outcome = generate_dataset(
                task,
                &counts,
                electrodes,
                measurements,
                kind,
                seed,
                &config.gen_config(),
            )?;
            write_dataset(&outcome.dataset, &out)?;
            for ev in &outcome.regenerated {
                eprintln!(
                    "regenerated sample {} (seed {} -> {}): {}",
                    ev.index, ev.from_seed, ev.to_seed, ev.reason
                );
            }
            println!(
                "{}",
                serde_json::json!({
                    "dataset": out,
                    "samples": outcome.dataset.len(),
                    "feature_dim": outcome.dataset.feature_dim(),
                    "regenerated": outcome.regenerated.len(),
                })
            );
            Ok(())
        }
        Command::Ingest { input, out } => {
            let outcome = ingest_nd_records(&input)?;
            write_dataset(&outcome.dataset, &out)?;
            for d in &outcome.diagnostics {
                eprintln!("line {}: {}", d.line, d.reason);
            }
            println!(
                "{}",
                serde_json::json!({
                    "dataset": out,
                    "samples": outcome.dataset.len(),
                    "rejected": outcome.diagnostics.len(),
                })
            );
            Ok(())
        }
        Command::Train { model, data, seed, out } => {
            let dataset = read_dataset(&data)?;
            let labels = dataset.labels();
            match model.as_str() {
                "ann" => {
                    let (m, _split, val, test) =
                        eitkit::experiments::train_eval_ann(&dataset, &labels, seed, &config)?;
                    ann::save_model(&m, &out)?;
                    print_train_summary("ann", &out, &val, &test);
                    Ok(())
                }
                "svm" => {
                    let (m, _split, val, test) =
                        eitkit::experiments::train_eval_svm(&dataset, &labels, seed, &config)?;
                    svm::save_model(&m, &out)?;
                    print_train_summary("svm", &out, &val, &test);
                    Ok(())
                }
                other => Err(eitkit::EitError::InvalidArgument(format!(
                    "unknown model {other:?}; expected ann or svm"
                ))),
            }
        }
        Command::Eval { model, data, out } => {
            let dataset = read_dataset(&data)?;
            let text = std::fs::read_to_string(&model)
                .map_err(|e| eitkit::EitError::io(model.display().to_string(), e))?;
            let (kind, predicted) = predict_all(&text, &dataset)?;
            let actual: Vec<u32> = dataset.samples.iter().map(|s| s.label).collect();
            let labels = dataset.labels();
            let cm = confusion(&actual, &predicted, &labels)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| eitkit::EitError::io(out.display().to_string(), e))?;
            let report = serde_json::json!({
                "model": kind.name(),
                "samples": dataset.len(),
                "accuracy": cm.accuracy(),
                "confusion": cm,
            });
            let report_path = out.join("eval.json");
            std::fs::write(&report_path, serde_json::to_string_pretty(&report).expect("serializes"))
                .map_err(|e| eitkit::EitError::io(report_path.display().to_string(), e))?;
            std::fs::write(out.join("confusion.csv"), cm.to_csv())
                .map_err(|e| eitkit::EitError::io(out.display().to_string(), e))?;
            std::fs::write(out.join("confusion.svg"), cm.to_svg("evaluation"))
                .map_err(|e| eitkit::EitError::io(out.display().to_string(), e))?;
            println!("{report}");
            Ok(())
        }
        Command::Experiment { task, scale, seed, out, full_grid } => match task.as_str() {
            "measurement-sweep" => {
                let sweep = run_measurement_sweep(&[1, 2, 4, 8, 12, 16], scale, seed, &config)?;
                let files = emit_sweep(&sweep, &out)?;
                println!("{}", serde_json::json!({ "files": files }));
                Ok(())
            }
            "electrode-sweep" => {
                let sweep =
                    run_electrode_sweep(&[2, 4, 8, 12, 16], scale, seed, &config, full_grid)?;
                let files = emit_sweep(&sweep, &out)?;
                println!("{}", serde_json::json!({ "files": files }));
                Ok(())
            }
            name => {
                let task = parse_task(name)?;
                let counts = scaled_counts(&paper_counts(task), scale);
                let outcome = generate_dataset(
                    task,
                    &counts,
                    16,
                    16,
                    pattern_for(task),
                    seed,
                    &config.gen_config(),
                )?;
                let report = run_task_on(task, &outcome.dataset, scale, seed, &config)?;
                let files = emit_report(&report, &out)?;
                println!(
                    "{}",
                    serde_json::json!({
                        "task": report.task,
                        "model": model_kind_for(task).name(),
                        "validation_accuracy": report.validation.accuracy,
                        "test_accuracy": report.test.accuracy,
                        "files": files,
                    })
                );
                Ok(())
            }
        },
    }
}

fn print_train_summary(kind: &str, path: &Path, val: &EvalSummary, test: &EvalSummary) {
    println!(
        "{}",
        serde_json::json!({
            "model": kind,
            "path": path,
            "validation_accuracy": val.accuracy,
            "test_accuracy": test.accuracy,
        })
    );
}

/// Predict every sample with a model file of either family, detected from
/// its JSON shape.
fn predict_all(model_text: &str, dataset: &Dataset) -> eitkit::Result<(ModelKind, Vec<u32>)> {
    if let Ok(m) = ann::from_json(model_text) {
        let indices: Vec<usize> = (0..dataset.len()).collect();
        let predicted = m.predict_batch(dataset, &indices, 0)?;
        return Ok((ModelKind::Ann, predicted));
    }
    let m = svm::from_json(model_text)?;
    let predicted: Vec<u32> = dataset
        .samples
        .iter()
        .map(|s| svm::predict_ovo(&m, &s.features))
        .collect::<eitkit::Result<_>>()?;
    Ok((ModelKind::Svm, predicted))
}
