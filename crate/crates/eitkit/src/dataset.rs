//! Labeled D-N datasets: generation, persistence, splits, and ingestion of
//! externally measured N-D records.
//!
//! Generation is data-parallel over samples with seeds derived from the
//! manifest base seed, so serial and parallel runs produce bit-identical
//! datasets. Persistence is a JSON manifest plus a CSV samples file with one
//! `label, f_1, ..., f_{M^2}` row per sample at 17 significant digits.

use crate::error::{EitError, Result};
use crate::forward::{
    add_noise, dn_from_nd, dn_matrix_with, opposite_patterns, trig_patterns, FluxMethod,
    PatternKind, VoltagePattern, DEFAULT_FLUX_METHOD, NOISE_SCALE,
};
use crate::geom::splitmix64;
use crate::mesh::{
    electrode_layout, generate_disk_mesh_opts, RefineDisk, DEFAULT_TARGET_MAX_EDGE,
};
use crate::phantom::{sample_scenario_with_cohort, ConductivitySpec, Task};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Default mesh pitch for simulated datasets. Matches the reference
/// pipeline's ~400-triangle forward meshes; the per-sample discretization
/// scatter at this pitch is part of the simulated measurement noise.
pub const DATASET_MESH_EDGE: f64 = 0.037;

const MESH_SALT: u64 = 0x6d65_7368;
const NOISE_SALT: u64 = 0x6e6f_6973;
const COHORT_SALT: u64 = 0x636f_686f;
const REGEN_ATTEMPTS: u64 = 8;

fn default_mesh_edge() -> f64 {
    DATASET_MESH_EDGE
}

/// Per-class sample count, as stored in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub label: u32,
    pub count: usize,
}

/// Dataset description; identical manifests reproduce identical datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub task: String,
    pub electrode_count: usize,
    pub measurement_count: usize,
    pub pattern: String,
    pub noise_scale: f64,
    pub base_seed: u64,
    pub classes: Vec<ClassCount>,
    #[serde(default = "default_mesh_edge")]
    pub mesh_edge: f64,
}

/// Where a sample came from: its derived seed and the sampled scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleProvenance {
    pub seed: u64,
    pub scenario: ConductivitySpec,
}

/// One labeled feature vector (flattened D-N matrix, row-major).
#[derive(Debug, Clone)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: u32,
    pub provenance: Option<SampleProvenance>,
}

/// Labeled collection of flattened D-N matrices plus manifest.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub manifest: Manifest,
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.manifest.measurement_count * self.manifest.measurement_count
    }

    /// Distinct labels in manifest order.
    pub fn labels(&self) -> Vec<u32> {
        self.manifest.classes.iter().map(|c| c.label).collect()
    }
}

/// A sample that had to be regenerated and the seeds involved.
#[derive(Debug, Clone, Serialize)]
pub struct RegenEvent {
    pub index: usize,
    pub from_seed: u64,
    pub to_seed: u64,
    pub reason: String,
}

/// Result of dataset generation.
pub struct GenOutcome {
    pub dataset: Dataset,
    pub regenerated: Vec<RegenEvent>,
}

/// Knobs not covered by the manifest's required fields.
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub noise_scale: f64,
    pub mesh_edge: f64,
    pub flux_method: FluxMethod,
    pub structured_annulus: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            noise_scale: NOISE_SCALE,
            mesh_edge: DATASET_MESH_EDGE,
            flux_method: DEFAULT_FLUX_METHOD,
            structured_annulus: true,
        }
    }
}

fn patterns_for(kind: PatternKind, m: usize, e: usize) -> Result<Vec<VoltagePattern>> {
    match kind {
        PatternKind::Trig => Ok(trig_patterns(m)),
        PatternKind::Opposite => opposite_patterns(m, e),
        PatternKind::External => Err(EitError::InvalidArgument(
            "external pattern kind cannot be simulated".into(),
        )),
    }
}

/// Simulate one labeled sample from its derived seed.
fn simulate_sample(
    task: Task,
    label: u32,
    seed: u64,
    cohort_seed: u64,
    mesh_seed: u64,
    patterns: &[VoltagePattern],
    e: usize,
    config: &GenConfig,
) -> Result<Sample> {
    let scenario = sample_scenario_with_cohort(task, label, seed, cohort_seed)?;
    let refine: Vec<RefineDisk> = scenario
        .inclusions
        .iter()
        .map(|i| RefineDisk { center: i.center, radius: i.radius })
        .collect();
    // one base-lattice realization per dataset; only the refinement zones
    // near each sample's inclusions vary from sample to sample
    let mesh = generate_disk_mesh_opts(
        scenario.tank_radius,
        config.mesh_edge,
        mesh_seed,
        &refine,
        config.structured_annulus,
    )?;
    let layout = electrode_layout(e)?;
    let clean = dn_matrix_with(&mesh, &scenario, &layout, patterns, config.flux_method)?;
    let features = if config.noise_scale > 0.0 {
        add_noise(&clean, config.noise_scale, splitmix64(seed ^ NOISE_SALT)).entries
    } else {
        clean.entries
    };
    Ok(Sample { features, label, provenance: Some(SampleProvenance { seed, scenario }) })
}

/// Generate a balanced labeled dataset: `counts[c]` samples for the c-th
/// class label of the task. Failed samples are regenerated with the next
/// derived seed and reported in the outcome.
pub fn generate_dataset(
    task: Task,
    counts: &[usize],
    electrode_count: usize,
    measurement_count: usize,
    pattern: PatternKind,
    base_seed: u64,
    config: &GenConfig,
) -> Result<GenOutcome> {
    let labels = task.class_labels();
    if counts.len() != labels.len() {
        return Err(EitError::InvalidArgument(format!(
            "task {} has {} classes but {} counts were given",
            task.name(),
            labels.len(),
            counts.len()
        )));
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(EitError::InvalidArgument("per-class counts must be at least 1".into()));
    }
    if measurement_count > electrode_count {
        return Err(EitError::InvalidArgument(format!(
            "M={measurement_count} must not exceed E={electrode_count}"
        )));
    }
    let patterns = patterns_for(pattern, measurement_count, electrode_count)?;

    // class-major sample plan
    let mut plan: Vec<u32> = Vec::new();
    for (&label, &count) in labels.iter().zip(counts) {
        plan.extend(std::iter::repeat_n(label, count));
    }

    // one anisotropy cohort per dataset: the aniso classes carry a single
    // tensor signature per generated dataset
    let cohort_seed = splitmix64(base_seed ^ COHORT_SALT);
    let mesh_seed = splitmix64(base_seed ^ MESH_SALT);
    let results: Vec<Result<(Sample, Vec<RegenEvent>)>> = plan
        .par_iter()
        .enumerate()
        .map(|(index, &label)| {
            let first_seed = base_seed.wrapping_add(index as u64);
            let mut events = Vec::new();
            let mut attempt = 0u64;
            loop {
                let seed = first_seed.wrapping_add(attempt << 32);
                match simulate_sample(task, label, seed, cohort_seed, mesh_seed, &patterns, electrode_count, config) {
                    Ok(sample) => return Ok((sample, events)),
                    Err(err) if attempt + 1 < REGEN_ATTEMPTS => {
                        events.push(RegenEvent {
                            index,
                            from_seed: seed,
                            to_seed: first_seed.wrapping_add((attempt + 1) << 32),
                            reason: err.to_string(),
                        });
                        attempt += 1;
                    }
                    Err(err) => {
                        return Err(EitError::SampleFailed { index, source: Box::new(err) })
                    }
                }
            }
        })
        .collect();

    let mut samples = Vec::with_capacity(plan.len());
    let mut regenerated = Vec::new();
    for r in results {
        let (s, ev) = r?;
        samples.push(s);
        regenerated.extend(ev);
    }

    let manifest = Manifest {
        format_version: 1,
        task: task.name().to_string(),
        electrode_count,
        measurement_count,
        pattern: pattern.name().to_string(),
        noise_scale: config.noise_scale,
        base_seed,
        classes: labels
            .iter()
            .zip(counts)
            .map(|(&label, &count)| ClassCount { label, count })
            .collect(),
        mesh_edge: config.mesh_edge,
    };
    Ok(GenOutcome { dataset: Dataset { manifest, samples }, regenerated })
}

/// Train/validation/test index partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

/// Split policies matching the two model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPolicy {
    /// 80% train / 10% validation / 10% test
    Ann801010,
    /// 90% train / 10% test; validation by k-fold inside the training part
    Svm9010,
}

/// Stratified split, deterministic per seed. Every class needs at least 10
/// samples so each part is non-degenerate.
pub fn split(dataset: &Dataset, policy: SplitPolicy, seed: u64) -> Result<Split> {
    let mut per_class: std::collections::BTreeMap<u32, Vec<usize>> = std::collections::BTreeMap::new();
    for (i, s) in dataset.samples.iter().enumerate() {
        per_class.entry(s.label).or_default().push(i);
    }
    for (&label, idxs) in &per_class {
        if idxs.len() < 10 {
            return Err(EitError::ClassTooSmall { label, count: idxs.len(), needed: 10 });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut validation = Vec::new();
    let mut test = Vec::new();
    for (_, idxs) in per_class.iter_mut() {
        idxs.shuffle(&mut rng);
        let n = idxs.len();
        let n_test = n / 10;
        let n_val = match policy {
            SplitPolicy::Ann801010 => n / 10,
            SplitPolicy::Svm9010 => 0,
        };
        test.extend_from_slice(&idxs[..n_test]);
        validation.extend_from_slice(&idxs[n_test..n_test + n_val]);
        train.extend_from_slice(&idxs[n_test + n_val..]);
    }
    // mix classes so contiguous k-fold chunks are class-balanced
    train.shuffle(&mut rng);
    validation.shuffle(&mut rng);
    test.shuffle(&mut rng);
    Ok(Split { train, validation, test })
}

/// K disjoint (fit, holdout) index pairs over the training indices. Fold
/// sizes differ by at most one; the remainder goes to the first folds.
pub fn kfold(train: &[usize], k: usize) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if k == 0 || k > train.len() {
        return Err(EitError::InvalidArgument(format!(
            "k={k} folds for {} training samples",
            train.len()
        )));
    }
    let n = train.len();
    let base = n / k;
    let rem = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < rem);
        let holdout: Vec<usize> = train[start..start + size].to_vec();
        let fit: Vec<usize> =
            train[..start].iter().chain(&train[start + size..]).copied().collect();
        folds.push((fit, holdout));
        start += size;
    }
    Ok(folds)
}

/// Format a float with 17 significant digits (round-trip exact).
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write manifest.json and samples.csv into the directory.
pub fn write_dataset(dataset: &Dataset, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| EitError::io(dir.display().to_string(), e))?;
    let manifest_path = dir.join("manifest.json");
    let manifest = serde_json::to_string_pretty(&dataset.manifest)
        .map_err(|e| EitError::Format(e.to_string()))?;
    std::fs::write(&manifest_path, manifest)
        .map_err(|e| EitError::io(manifest_path.display().to_string(), e))?;

    let mut csv = String::new();
    for s in &dataset.samples {
        write!(csv, "{}", s.label).expect("string write");
        for f in &s.features {
            write!(csv, ",{}", fmt_f64(*f)).expect("string write");
        }
        csv.push('\n');
    }
    let csv_path = dir.join("samples.csv");
    std::fs::write(&csv_path, csv).map_err(|e| EitError::io(csv_path.display().to_string(), e))?;
    Ok(())
}

/// Read a dataset written by [`write_dataset`]. Provenance is not persisted;
/// it can be re-derived from the manifest seeds.
pub fn read_dataset(dir: &Path) -> Result<Dataset> {
    let manifest_path = dir.join("manifest.json");
    let manifest_text = std::fs::read_to_string(&manifest_path)
        .map_err(|e| EitError::io(manifest_path.display().to_string(), e))?;
    let manifest: Manifest =
        serde_json::from_str(&manifest_text).map_err(|e| EitError::Format(e.to_string()))?;
    let dim = manifest.measurement_count * manifest.measurement_count;

    let csv_path = dir.join("samples.csv");
    let text = std::fs::read_to_string(&csv_path)
        .map_err(|e| EitError::io(csv_path.display().to_string(), e))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let label: u32 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| EitError::MalformedRecord {
                line: lineno + 1,
                reason: "missing or invalid label".into(),
            })?;
        let features: Vec<f64> = fields
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| EitError::MalformedRecord {
                    line: lineno + 1,
                    reason: format!("bad float {s:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if features.len() != dim {
            return Err(EitError::MalformedRecord {
                line: lineno + 1,
                reason: format!("{} features, expected {dim}", features.len()),
            });
        }
        samples.push(Sample { features, label, provenance: None });
    }
    Ok(Dataset { manifest, samples })
}

/// A rejected ingestion record.
#[derive(Debug, Clone, Serialize)]
pub struct IngestDiagnostic {
    pub line: usize,
    pub reason: String,
}

/// Result of ingesting an external N-D file.
pub struct IngestOutcome {
    pub dataset: Dataset,
    pub diagnostics: Vec<IngestDiagnostic>,
}

/// Ingest externally measured Neumann-to-Dirichlet records: CSV lines
/// `label, M, r_11, r_12, ..., r_MM` (row-major). Each N-D matrix is
/// inverted into a D-N matrix and flattened; no noise is added. Malformed
/// records are reported with their line number and skipped.
pub fn ingest_nd_records(path: &Path) -> Result<IngestOutcome> {
    let text =
        std::fs::read_to_string(path).map_err(|e| EitError::io(path.display().to_string(), e))?;
    let mut samples = Vec::new();
    let mut diagnostics = Vec::new();
    let mut m_common: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_nd_record(line) {
            Ok((label, m, nd)) => {
                if let Some(mc) = m_common {
                    if m != mc {
                        diagnostics.push(IngestDiagnostic {
                            line: line_no,
                            reason: format!("M={m} differs from the file's M={mc}"),
                        });
                        continue;
                    }
                } else {
                    m_common = Some(m);
                }
                match dn_from_nd(&nd) {
                    Ok(dn) => samples.push(Sample {
                        features: dn.entries,
                        label,
                        provenance: None,
                    }),
                    Err(err) => diagnostics.push(IngestDiagnostic {
                        line: line_no,
                        reason: err.to_string(),
                    }),
                }
            }
            Err(reason) => diagnostics.push(IngestDiagnostic { line: line_no, reason }),
        }
    }
    let m = m_common.unwrap_or(0);
    let mut class_counts: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for s in &samples {
        *class_counts.entry(s.label).or_insert(0) += 1;
    }
    let manifest = Manifest {
        format_version: 1,
        task: "ingest".to_string(),
        electrode_count: m,
        measurement_count: m,
        pattern: PatternKind::External.name().to_string(),
        noise_scale: 0.0,
        base_seed: 0,
        classes: class_counts
            .into_iter()
            .map(|(label, count)| ClassCount { label, count })
            .collect(),
        mesh_edge: DEFAULT_TARGET_MAX_EDGE,
    };
    Ok(IngestOutcome { dataset: Dataset { manifest, samples }, diagnostics })
}

fn parse_nd_record(line: &str) -> std::result::Result<(u32, usize, Vec<Vec<f64>>), String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() < 3 {
        return Err(format!("{} fields; need label, M, entries", fields.len()));
    }
    let label: u32 = fields[0].parse().map_err(|_| format!("bad label {:?}", fields[0]))?;
    let m: usize = fields[1].parse().map_err(|_| format!("bad M {:?}", fields[1]))?;
    if m == 0 {
        return Err("M must be positive".into());
    }
    if fields.len() != 2 + m * m {
        return Err(format!("{} entries for M={m}; expected {}", fields.len() - 2, m * m));
    }
    let mut values = Vec::with_capacity(m * m);
    for f in &fields[2..] {
        let v: f64 = f.parse().map_err(|_| format!("bad float {f:?}"))?;
        if !v.is_finite() {
            return Err(format!("non-finite value {f:?}"));
        }
        values.push(v);
    }
    let nd: Vec<Vec<f64>> = (0..m).map(|i| values[i * m..(i + 1) * m].to_vec()).collect();
    Ok((label, m, nd))
}
