//! Experiment runner: the eight classification tasks plus the measurement
//! and electrode sweeps, with confusion-matrix reports emitted as JSON, CSV,
//! and SVG.

mod confusion;

pub use confusion::{confusion, ConfusionMatrix};

use crate::ann::{self, DesignMatrix, MlpModel, TrainConfig};
use crate::dataset::{
    generate_dataset, kfold, split, Dataset, GenConfig, Manifest, Sample, Split, SplitPolicy,
};
use crate::error::{EitError, Result};
use crate::forward::{PatternKind, NOISE_SCALE};
use crate::geom::splitmix64;
use crate::dataset::DATASET_MESH_EDGE;
use crate::phantom::Task;
use crate::svm::{self, KernelSpec, SvmModel};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Which classifier a task uses (Table-of-results pairing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Ann,
    Svm,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Ann => "ann",
            ModelKind::Svm => "svm",
        }
    }
}

/// Box constraint used by the experiment runner. The raw quadratic kernel
/// has magnitude ~1e9 on D-N features, and scaling the kernel by k is
/// dual-equivalent to scaling C by k, so this corresponds to an ordinary
/// normalized-kernel box of about 10; the library-wide default C = 1 is an
/// effectively hard-margin machine at this feature scale and classifies far
/// above the reference pipeline's reported operating range.
pub const DEFAULT_EXPERIMENT_C: f64 = 1.2e-8;

/// Runner configuration; every knob has the experiment default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub noise_scale: f64,
    pub mesh_edge: f64,
    pub svm_c: f64,
    pub svm_tol: f64,
    pub max_epochs: usize,
    pub patience: usize,
    /// z-score ANN inputs on the training split (the reference toolbox's
    /// pattern nets normalize inputs internally, so this defaults on)
    pub normalize_ann_inputs: bool,
    /// initial weight range relative to the library default; values below 1
    /// regularize implicitly, in the spirit of the reference toolbox's
    /// small-magnitude layer initialization
    pub ann_init_scale: f64,
    /// independently initialized training runs; the snapshot with the best
    /// validation loss wins
    pub ann_restarts: usize,
    pub cv_folds: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            noise_scale: NOISE_SCALE,
            mesh_edge: DATASET_MESH_EDGE,
            svm_c: DEFAULT_EXPERIMENT_C,
            svm_tol: svm::DEFAULT_TOL,
            max_epochs: 1000,
            patience: 30,
            normalize_ann_inputs: true,
            ann_init_scale: 0.2,
            ann_restarts: 3,
            cv_folds: 5,
        }
    }
}

impl RunConfig {
    pub fn gen_config(&self) -> GenConfig {
        GenConfig {
            noise_scale: self.noise_scale,
            mesh_edge: self.mesh_edge,
            ..GenConfig::default()
        }
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            max_epochs: self.max_epochs,
            patience: self.patience,
            seed,
            normalize_inputs: self.normalize_ann_inputs,
            ..TrainConfig::default()
        }
    }
}

/// The classifier and excitation pattern each task uses.
pub fn model_kind_for(task: Task) -> ModelKind {
    match task {
        Task::Presence | Task::CountSmall | Task::CountLarge => ModelKind::Svm,
        _ => ModelKind::Ann,
    }
}

pub fn pattern_for(task: Task) -> PatternKind {
    match task {
        Task::Radii => PatternKind::Opposite,
        _ => PatternKind::Trig,
    }
}

/// Per-class sample counts at scale 1.0.
pub fn paper_counts(task: Task) -> Vec<usize> {
    match task {
        Task::Presence => vec![2400, 2400],
        Task::CountSmall | Task::CountLarge => vec![2000, 2000, 2000],
        Task::Radii => vec![6000, 6000, 6000, 6000],
        Task::IsoVsAnisoBoth | Task::IsoVsAnisoInclusion => vec![1000, 1000],
        Task::DiagVsOffdiag | Task::IsoVsSpatial => vec![4000, 4000],
    }
}

/// Scale per-class counts, keeping at least 10 per class so splits stay
/// well-defined.
pub fn scaled_counts(counts: &[usize], scale: f64) -> Vec<usize> {
    counts.iter().map(|&c| ((c as f64 * scale).round() as usize).max(10)).collect()
}

/// One evaluated confusion matrix with its accuracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
}

impl EvalSummary {
    fn new(confusion: ConfusionMatrix) -> Self {
        let accuracy = confusion.accuracy();
        EvalSummary { confusion, accuracy }
    }
}

/// Full record of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub task: String,
    pub model: ModelKind,
    pub scale: f64,
    pub seed: u64,
    pub dataset_manifest: Manifest,
    pub validation: EvalSummary,
    pub test: EvalSummary,
    pub wall_time_seconds: f64,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    /// Report JSON with the wall time zeroed, for reproducibility
    /// comparisons (wall time is measurement metadata, not a result).
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.wall_time_seconds = 0.0;
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A trained task model, either family.
pub enum TrainedModel {
    Ann(MlpModel),
    Svm(SvmModel),
}

impl TrainedModel {
    pub fn predict(&self, features: &[f64], tie_seed: u64) -> Result<u32> {
        match self {
            TrainedModel::Ann(m) => m.predict(features, tie_seed),
            TrainedModel::Svm(m) => svm::predict_ovo(m, features),
        }
    }
}

fn predict_indices(
    model: &TrainedModel,
    dataset: &Dataset,
    indices: &[usize],
    tie_seed: u64,
) -> Result<(Vec<u32>, Vec<u32>)> {
    let mut actual = Vec::with_capacity(indices.len());
    let mut predicted = Vec::with_capacity(indices.len());
    for (k, &i) in indices.iter().enumerate() {
        let s = &dataset.samples[i];
        actual.push(s.label);
        predicted.push(model.predict(&s.features, splitmix64(tie_seed ^ k as u64))?);
    }
    Ok((actual, predicted))
}

fn flat_features(dataset: &Dataset, indices: &[usize]) -> (Vec<f64>, Vec<u32>) {
    let d = dataset.feature_dim();
    let mut x = Vec::with_capacity(indices.len() * d);
    let mut labels = Vec::with_capacity(indices.len());
    for &i in indices {
        x.extend_from_slice(&dataset.samples[i].features);
        labels.push(dataset.samples[i].label);
    }
    (x, labels)
}

/// Train the task's ANN on an 80/10/10 split and evaluate.
pub fn train_eval_ann(
    dataset: &Dataset,
    task_labels: &[u32],
    seed: u64,
    config: &RunConfig,
) -> Result<(MlpModel, Split, EvalSummary, EvalSummary)> {
    let sp = split(dataset, SplitPolicy::Ann801010, splitmix64(seed ^ 0x5917))?;
    check_isolation(&sp)?;
    let train = DesignMatrix::from_dataset(dataset, &sp.train, task_labels)?;
    let validation = DesignMatrix::from_dataset(dataset, &sp.validation, task_labels)?;
    // several restarts from independent initializations; keep the snapshot
    // with the best validation loss
    let mut best: Option<(f64, MlpModel)> = None;
    for restart in 0..config.ann_restarts.max(1) {
        let model = MlpModel::new_scaled(
            dataset.feature_dim(),
            ann::HIDDEN_UNITS,
            task_labels.to_vec(),
            splitmix64(seed ^ 0x1717 ^ ((restart as u64) << 17)),
            config.ann_init_scale,
        );
        let (model, _history) =
            ann::train_scg(model, &train, &validation, &config.train_config(seed))?;
        let val_loss = ann::loss(&model, &validation)?;
        if best.as_ref().map(|(l, _)| val_loss < *l).unwrap_or(true) {
            best = Some((val_loss, model));
        }
    }
    let (_, model) = best.expect("at least one restart");
    let trained = TrainedModel::Ann(model);
    let (va, vp) = predict_indices(&trained, dataset, &sp.validation, splitmix64(seed ^ 0x7a11))?;
    let (ta, tp) = predict_indices(&trained, dataset, &sp.test, splitmix64(seed ^ 0x7e57))?;
    let val = EvalSummary::new(confusion(&va, &vp, task_labels)?);
    let test = EvalSummary::new(confusion(&ta, &tp, task_labels)?);
    let model = match trained {
        TrainedModel::Ann(m) => m,
        _ => unreachable!(),
    };
    Ok((model, sp, val, test))
}

/// Train the task's quadratic SVM on a 90/10 split with k-fold validation
/// pooled into the validation confusion matrix.
pub fn train_eval_svm(
    dataset: &Dataset,
    task_labels: &[u32],
    seed: u64,
    config: &RunConfig,
) -> Result<(SvmModel, Split, EvalSummary, EvalSummary)> {
    let sp = split(dataset, SplitPolicy::Svm9010, splitmix64(seed ^ 0x5917))?;
    check_isolation(&sp)?;
    let d = dataset.feature_dim();

    // pooled k-fold cross-validation over the training part
    let folds = kfold(&sp.train, config.cv_folds)?;
    let mut cv_actual = Vec::new();
    let mut cv_predicted = Vec::new();
    for (fit, holdout) in &folds {
        let (x, labels) = flat_features(dataset, fit);
        let model = svm::train_ovo_with(
            &x,
            d,
            &labels,
            KernelSpec::Quadratic,
            config.svm_c,
            config.svm_tol,
            svm::OnCap::AcceptCurrent,
        )?;
        for &i in holdout {
            cv_actual.push(dataset.samples[i].label);
            cv_predicted.push(svm::predict_ovo(&model, &dataset.samples[i].features)?);
        }
    }
    let val = EvalSummary::new(confusion(&cv_actual, &cv_predicted, task_labels)?);

    // final model on the full training part
    let (x, labels) = flat_features(dataset, &sp.train);
    let model = svm::train_ovo_with(
            &x,
            d,
            &labels,
            KernelSpec::Quadratic,
            config.svm_c,
            config.svm_tol,
            svm::OnCap::AcceptCurrent,
        )?;
    let trained = TrainedModel::Svm(model);
    let (ta, tp) = predict_indices(&trained, dataset, &sp.test, splitmix64(seed ^ 0x7e57))?;
    let test = EvalSummary::new(confusion(&ta, &tp, task_labels)?);
    let model = match trained {
        TrainedModel::Svm(m) => m,
        _ => unreachable!(),
    };
    Ok((model, sp, val, test))
}

fn check_isolation(sp: &Split) -> Result<()> {
    let test: std::collections::HashSet<usize> = sp.test.iter().copied().collect();
    if sp.train.iter().any(|i| test.contains(i)) || sp.validation.iter().any(|i| test.contains(i)) {
        return Err(EitError::InvalidArgument(
            "test indices leaked into train or validation".into(),
        ));
    }
    Ok(())
}

/// Run one full experiment: generate (or reuse) the dataset, train the
/// task's model, and report validation/test confusion matrices.
pub fn run_task(task: Task, scale: f64, seed: u64, config: &RunConfig) -> Result<ExperimentReport> {
    let counts = scaled_counts(&paper_counts(task), scale);
    let out = generate_dataset(
        task,
        &counts,
        16,
        16,
        pattern_for(task),
        seed,
        &config.gen_config(),
    )?;
    run_task_on(task, &out.dataset, scale, seed, config)
}

/// [`run_task`] against an already generated dataset (reused by sweeps and
/// the CLI when a dataset directory is supplied).
pub fn run_task_on(
    task: Task,
    dataset: &Dataset,
    scale: f64,
    seed: u64,
    config: &RunConfig,
) -> Result<ExperimentReport> {
    let started = std::time::Instant::now();
    let labels = task.class_labels();
    let model = model_kind_for(task);
    let mut notes = Vec::new();
    if task == Task::Radii {
        notes.push(
            "simulated analog of the radii experiment: the original uses an external \
             measured dataset, reproduced here with the same classes and tank"
                .to_string(),
        );
    }
    let (validation, test) = match model {
        ModelKind::Ann => {
            let (_m, _sp, val, test) = train_eval_ann(dataset, &labels, seed, config)?;
            (val, test)
        }
        ModelKind::Svm => {
            let (_m, _sp, val, test) = train_eval_svm(dataset, &labels, seed, config)?;
            (val, test)
        }
    };
    Ok(ExperimentReport {
        task: task.name().to_string(),
        model,
        scale,
        seed,
        dataset_manifest: dataset.manifest.clone(),
        validation,
        test,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        notes,
    })
}

/// Restrict every sample to the leading M x M principal submatrix of its
/// M0 x M0 feature matrix.
pub fn restrict_measurements(dataset: &Dataset, m: usize) -> Result<Dataset> {
    let m0 = dataset.manifest.measurement_count;
    if m > m0 {
        return Err(EitError::InvalidArgument(format!("cannot restrict to M={m} from M={m0}")));
    }
    let samples = dataset
        .samples
        .iter()
        .map(|s| {
            let mut features = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    features.push(s.features[i * m0 + j]);
                }
            }
            Sample { features, label: s.label, provenance: s.provenance.clone() }
        })
        .collect();
    let mut manifest = dataset.manifest.clone();
    manifest.measurement_count = m;
    Ok(Dataset { manifest, samples })
}

/// One sweep measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPoint {
    pub electrode_count: usize,
    pub measurement_count: usize,
    pub test_accuracy: f64,
}

/// Accuracy-vs-M (or vs-E) table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: String,
    pub scale: f64,
    pub seed: u64,
    pub points: Vec<SweepPoint>,
}

/// Measurement sweep: one radii-task dataset at E = 16 with opposite
/// injection, classified from the leading M x M submatrix for each M.
pub fn run_measurement_sweep(
    m_list: &[usize],
    scale: f64,
    seed: u64,
    config: &RunConfig,
) -> Result<SweepResult> {
    for &m in m_list {
        if !(1..=16).contains(&m) {
            return Err(EitError::InvalidArgument(format!("M={m} outside 1..=16")));
        }
    }
    let counts = scaled_counts(&paper_counts(Task::Radii), scale);
    let out = generate_dataset(
        Task::Radii,
        &counts,
        16,
        16,
        PatternKind::Opposite,
        seed,
        &config.gen_config(),
    )?;
    let labels = Task::Radii.class_labels();
    let mut points = Vec::new();
    for &m in m_list {
        let restricted = restrict_measurements(&out.dataset, m)?;
        let (_model, _sp, _val, test) = train_eval_ann(&restricted, &labels, seed, config)?;
        points.push(SweepPoint {
            electrode_count: 16,
            measurement_count: m,
            test_accuracy: test.accuracy,
        });
    }
    Ok(SweepResult { kind: "measurement_sweep".into(), scale, seed, points })
}

/// Electrode sweep: a fresh opposite-injection radii dataset per electrode
/// count (12000 samples at scale 1.0), classified at M = E, plus the full
/// (E, M <= E) grid when requested.
pub fn run_electrode_sweep(
    e_list: &[usize],
    scale: f64,
    seed: u64,
    config: &RunConfig,
    full_grid: bool,
) -> Result<SweepResult> {
    const GRID_M: [usize; 6] = [1, 2, 4, 8, 12, 16];
    for &e in e_list {
        if e < 2 || e % 2 != 0 || e > 16 {
            return Err(EitError::InvalidArgument(format!("E={e} outside the even range 2..=16")));
        }
    }
    let labels = Task::Radii.class_labels();
    // 12000 samples per electrode configuration at scale 1.0
    let per_class = (((12000.0 / labels.len() as f64) * scale).round() as usize).max(10);
    let counts = vec![per_class; labels.len()];
    let mut points = Vec::new();
    for &e in e_list {
        let out = generate_dataset(
            Task::Radii,
            &counts,
            e,
            e,
            PatternKind::Opposite,
            splitmix64(seed ^ (e as u64) << 8),
            &config.gen_config(),
        )?;
        let m_values: Vec<usize> = if full_grid {
            GRID_M.iter().copied().filter(|&m| m <= e).collect()
        } else {
            vec![e]
        };
        for m in m_values {
            let restricted = restrict_measurements(&out.dataset, m)?;
            let (_model, _sp, _val, test) = train_eval_ann(&restricted, &labels, seed, config)?;
            points.push(SweepPoint {
                electrode_count: e,
                measurement_count: m,
                test_accuracy: test.accuracy,
            });
        }
    }
    Ok(SweepResult { kind: "electrode_sweep".into(), scale, seed, points })
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("electrodes,measurements,test_accuracy\n");
        for p in &self.points {
            writeln!(
                out,
                "{},{},{:.6}",
                p.electrode_count, p.measurement_count, p.test_accuracy
            )
            .expect("string write");
        }
        out
    }

    /// accuracy of the (e, m) cell, if measured
    pub fn accuracy_at(&self, e: usize, m: usize) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.electrode_count == e && p.measurement_count == m)
            .map(|p| p.test_accuracy)
    }

    /// Line plot of accuracy against the swept variable.
    pub fn to_line_svg(&self, x_is_measurements: bool) -> String {
        let mut pts: Vec<(usize, f64)> = self
            .points
            .iter()
            .map(|p| {
                (
                    if x_is_measurements { p.measurement_count } else { p.electrode_count },
                    p.test_accuracy,
                )
            })
            .collect();
        pts.sort_by_key(|&(x, _)| x);
        let (w, h, ml, mb) = (460.0, 320.0, 60.0, 50.0);
        let x_max = pts.last().map(|&(x, _)| x).unwrap_or(16) as f64;
        let sx = |x: f64| ml + (w - ml - 20.0) * x / x_max;
        let sy = |y: f64| (h - mb) - (h - mb - 30.0) * y;
        let mut s = String::new();
        write!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" \
             viewBox=\"0 0 {w:.0} {h:.0}\">\n"
        )
        .expect("string write");
        let x_label = if x_is_measurements { "measurements M" } else { "electrodes E" };
        write!(
            s,
            "<text x=\"{:.0}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" \
             text-anchor=\"middle\">test accuracy vs {x_label}</text>\n",
            w / 2.0
        )
        .expect("string write");
        // axes
        write!(
            s,
            "<line x1=\"{ml}\" y1=\"{:.0}\" x2=\"{:.0}\" y2=\"{:.0}\" stroke=\"#333\"/>\n\
             <line x1=\"{ml}\" y1=\"30\" x2=\"{ml}\" y2=\"{:.0}\" stroke=\"#333\"/>\n",
            h - mb,
            w - 20.0,
            h - mb,
            h - mb
        )
        .expect("string write");
        for tick in [0.0f64, 0.25, 0.5, 0.75, 1.0] {
            write!(
                s,
                "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"11\" \
                 text-anchor=\"end\">{tick:.2}</text>\n",
                ml - 6.0,
                sy(tick) + 4.0
            )
            .expect("string write");
        }
        let path: Vec<String> =
            pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x as f64), sy(y))).collect();
        write!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>\n", path.join(" "))
            .expect("string write");
        for &(x, y) in &pts {
            write!(
                s,
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"#1f4e9c\"/>\n\
                 <text x=\"{:.1}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"11\" \
                 text-anchor=\"middle\">{x}</text>\n",
                sx(x as f64),
                sy(y),
                sx(x as f64),
                h - mb + 16.0
            )
            .expect("string write");
        }
        s.push_str("</svg>\n");
        s
    }

    /// Heatmap over the (E, M) grid; cells with M > E or E = 1 stay empty.
    pub fn to_heatmap_svg(&self) -> String {
        const AXIS: [usize; 6] = [1, 2, 4, 8, 12, 16];
        let cell = 54.0;
        let ml = 90.0;
        let mt = 60.0;
        let w = ml + AXIS.len() as f64 * cell + 20.0;
        let h = mt + AXIS.len() as f64 * cell + 40.0;
        let mut s = String::new();
        write!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" \
             viewBox=\"0 0 {w:.0} {h:.0}\">\n"
        )
        .expect("string write");
        write!(
            s,
            "<text x=\"{:.0}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" \
             text-anchor=\"middle\">test accuracy by electrodes (rows) and measurements \
             (columns)</text>\n",
            w / 2.0
        )
        .expect("string write");
        for (r, &e) in AXIS.iter().enumerate() {
            write!(
                s,
                "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"end\">E={e}</text>\n",
                ml - 8.0,
                mt + r as f64 * cell + cell / 2.0 + 4.0
            )
            .expect("string write");
            for (col, &m) in AXIS.iter().enumerate() {
                let x = ml + col as f64 * cell;
                let y = mt + r as f64 * cell;
                if r == 0 {
                    write!(
                        s,
                        "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" \
                         font-size=\"12\" text-anchor=\"middle\">M={m}</text>\n",
                        x + cell / 2.0,
                        mt - 10.0
                    )
                    .expect("string write");
                }
                match self.accuracy_at(e, m) {
                    Some(acc) if e > 1 && m <= e => {
                        let t = acc.clamp(0.0, 1.0);
                        let shade = (235.0 - 165.0 * t) as u8;
                        write!(
                            s,
                            "<rect x=\"{x:.0}\" y=\"{y:.0}\" width=\"{cell:.0}\" \
                             height=\"{cell:.0}\" fill=\"rgb({shade},{shade},255)\" \
                             stroke=\"#666\"/>\n\
                             <text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" \
                             font-size=\"12\" text-anchor=\"middle\">{:.0}%</text>\n",
                            x + cell / 2.0,
                            y + cell / 2.0 + 4.0,
                            100.0 * acc
                        )
                        .expect("string write");
                    }
                    _ => {
                        // invalid or unmeasured cell stays hollow
                        write!(
                            s,
                            "<rect x=\"{x:.0}\" y=\"{y:.0}\" width=\"{cell:.0}\" \
                             height=\"{cell:.0}\" fill=\"#f4f4f4\" stroke=\"#ccc\"/>\n"
                        )
                        .expect("string write");
                    }
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Write the report JSON, confusion CSVs, and SVG heatmaps into `dir`.
/// All content is rendered before anything touches the filesystem, so a
/// failed run never leaves a partial report behind.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let files: Vec<(PathBuf, String)> = vec![
        (dir.join("report.json"), report.to_json()),
        (dir.join("confusion_validation.csv"), report.validation.confusion.to_csv()),
        (dir.join("confusion_test.csv"), report.test.confusion.to_csv()),
        (
            dir.join("confusion_validation.svg"),
            report
                .validation
                .confusion
                .to_svg(&format!("{} validation ({})", report.task, report.model.name())),
        ),
        (
            dir.join("confusion_test.svg"),
            report.test.confusion.to_svg(&format!("{} test ({})", report.task, report.model.name())),
        ),
    ];
    std::fs::create_dir_all(dir).map_err(|e| EitError::io(dir.display().to_string(), e))?;
    let mut written = Vec::new();
    for (path, content) in files {
        std::fs::write(&path, content).map_err(|e| EitError::io(path.display().to_string(), e))?;
        written.push(path);
    }
    Ok(written)
}

/// Write a sweep's JSON, CSV table, line plot, and (for electrode sweeps)
/// grid heatmap.
pub fn emit_sweep(sweep: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let is_m_sweep = sweep.kind == "measurement_sweep";
    let mut files: Vec<(PathBuf, String)> = vec![
        (
            dir.join(format!("{}.json", sweep.kind)),
            serde_json::to_string_pretty(sweep).expect("sweep serializes"),
        ),
        (dir.join(format!("{}.csv", sweep.kind)), sweep.to_csv()),
        (dir.join(format!("{}.svg", sweep.kind)), sweep.to_line_svg(is_m_sweep)),
    ];
    if !is_m_sweep {
        files.push((dir.join("electrode_heatmap.svg"), sweep.to_heatmap_svg()));
    }
    std::fs::create_dir_all(dir).map_err(|e| EitError::io(dir.display().to_string(), e))?;
    let mut written = Vec::new();
    for (path, content) in files {
        std::fs::write(&path, content).map_err(|e| EitError::io(path.display().to_string(), e))?;
        written.push(path);
    }
    Ok(written)
}
