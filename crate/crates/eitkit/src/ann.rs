//! Feed-forward classifier: input -> 64 sigmoid units -> n-class softmax,
//! trained full-batch by scaled conjugate gradient with validation-based
//! early stopping and best-snapshot restoration.

use crate::dataset::Dataset;
use crate::error::{EitError, Result};
use crate::geom::splitmix64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Samples per parallel gradient chunk. Chunk boundaries are fixed by the
/// batch layout and partial sums combine in chunk order, so results are
/// bit-identical for any thread count.
const GRAD_CHUNK: usize = 512;

/// Hidden layer width used throughout the experiments.
pub const HIDDEN_UNITS: usize = 64;

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Per-feature affine input normalization (z-score), optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputNorm {
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
}

impl InputNorm {
    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for ((o, &v), (&s, &c)) in
            out.iter_mut().zip(x).zip(self.shift.iter().zip(&self.scale))
        {
            *o = (v - s) / c;
        }
    }
}

/// Dense row-major design matrix with class indices (positions in the
/// model's label list).
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub x: Vec<f64>,
    pub n: usize,
    pub d: usize,
    pub class_idx: Vec<usize>,
}

impl DesignMatrix {
    pub fn new(x: Vec<f64>, d: usize, class_idx: Vec<usize>) -> Result<Self> {
        if d == 0 || x.len() != d * class_idx.len() {
            return Err(EitError::ShapeMismatch(format!(
                "{} values for {} samples of dim {d}",
                x.len(),
                class_idx.len()
            )));
        }
        Ok(DesignMatrix { n: class_idx.len(), x, d, class_idx })
    }

    /// Gather the given dataset rows; labels map to indices in `labels`.
    pub fn from_dataset(dataset: &Dataset, indices: &[usize], labels: &[u32]) -> Result<Self> {
        let d = dataset.feature_dim();
        let mut x = Vec::with_capacity(indices.len() * d);
        let mut class_idx = Vec::with_capacity(indices.len());
        for &i in indices {
            let s = &dataset.samples[i];
            let pos = labels.iter().position(|&l| l == s.label).ok_or_else(|| {
                EitError::InvalidArgument(format!("label {} not in class list", s.label))
            })?;
            x.extend_from_slice(&s.features);
            class_idx.push(pos);
        }
        DesignMatrix::new(x, d, class_idx)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }
}

/// Trained two-layer perceptron state.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub input_dim: usize,
    pub hidden_dim: usize,
    /// class labels; output unit i predicts labels[i]
    pub labels: Vec<u32>,
    /// flat parameters: [w1 (hidden x input), b1, w2 (n x hidden), b2]
    params: Vec<f64>,
    pub norm: Option<InputNorm>,
}

impl MlpModel {
    /// Seeded uniform initialization on +-sqrt(6 / (fan_in + fan_out)),
    /// biases zero.
    pub fn new(input_dim: usize, hidden_dim: usize, labels: Vec<u32>, seed: u64) -> Self {
        Self::new_scaled(input_dim, hidden_dim, labels, seed, 1.0)
    }

    /// [`MlpModel::new`] with the initial weight range scaled by `scale`.
    /// Values below 1 start the network closer to linear, which acts as an
    /// implicit regularizer on small datasets.
    pub fn new_scaled(
        input_dim: usize,
        hidden_dim: usize,
        labels: Vec<u32>,
        seed: u64,
        scale: f64,
    ) -> Self {
        let n = labels.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = vec![0.0; hidden_dim * input_dim + hidden_dim + n * hidden_dim + n];
        let r1 = scale * (6.0 / (input_dim + hidden_dim) as f64).sqrt();
        for p in params[..hidden_dim * input_dim].iter_mut() {
            *p = rng.random_range(-r1..r1);
        }
        let r2 = scale * (6.0 / (hidden_dim + n) as f64).sqrt();
        let w2_start = hidden_dim * input_dim + hidden_dim;
        for p in params[w2_start..w2_start + n * hidden_dim].iter_mut() {
            *p = rng.random_range(-r2..r2);
        }
        MlpModel { input_dim, hidden_dim, labels, params, norm: None }
    }

    pub fn class_count(&self) -> usize {
        self.labels.len()
    }

    pub fn w1(&self) -> &[f64] {
        &self.params[..self.hidden_dim * self.input_dim]
    }

    pub fn b1(&self) -> &[f64] {
        let s = self.hidden_dim * self.input_dim;
        &self.params[s..s + self.hidden_dim]
    }

    pub fn w2(&self) -> &[f64] {
        let s = self.hidden_dim * self.input_dim + self.hidden_dim;
        &self.params[s..s + self.class_count() * self.hidden_dim]
    }

    pub fn b2(&self) -> &[f64] {
        let n = self.class_count();
        &self.params[self.params.len() - n..]
    }

    /// Mutable access to the flat parameter vector (tests and diagnostics).
    pub fn params_mut(&mut self) -> &mut Vec<f64> {
        &mut self.params
    }

    /// The flat parameter vector: [w1, b1, w2, b2], row-major blocks.
    pub fn params_flat(&self) -> &[f64] {
        &self.params
    }

    fn dims(&self) -> Dims {
        Dims { d: self.input_dim, h: self.hidden_dim, n: self.class_count() }
    }

    /// Class probabilities for one input.
    pub fn forward_pass(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(EitError::ShapeMismatch(format!(
                "input has {} features, model expects {}",
                x.len(),
                self.input_dim
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(EitError::InvalidArgument("non-finite input".into()));
        }
        let mut buf;
        let xin = match &self.norm {
            Some(norm) => {
                buf = vec![0.0; x.len()];
                norm.apply_into(x, &mut buf);
                &buf[..]
            }
            None => x,
        };
        let (_, p) = forward_one(&self.params, self.dims(), xin);
        Ok(p)
    }

    /// Predicted class label (argmax of the probabilities). Ties are broken
    /// by a seeded uniform choice among the maximizers.
    pub fn predict(&self, x: &[f64], tie_seed: u64) -> Result<u32> {
        let p = self.forward_pass(x)?;
        let max = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> =
            p.iter().enumerate().filter(|(_, &v)| v == max).map(|(i, _)| i).collect();
        let pick = if winners.len() == 1 {
            winners[0]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(tie_seed);
            winners[rng.random_range(0..winners.len())]
        };
        Ok(self.labels[pick])
    }

    /// Predict every row of a dataset slice; per-row tie seeds derive from
    /// the base seed.
    pub fn predict_batch(&self, dataset: &Dataset, indices: &[usize], tie_seed: u64) -> Result<Vec<u32>> {
        indices
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                self.predict(&dataset.samples[i].features, splitmix64(tie_seed ^ k as u64))
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
struct Dims {
    d: usize,
    h: usize,
    n: usize,
}

impl Dims {
    fn total(&self) -> usize {
        self.h * self.d + self.h + self.n * self.h + self.n
    }
}

fn forward_one(params: &[f64], dims: Dims, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let Dims { d, h, n } = dims;
    let (w1, rest) = params.split_at(h * d);
    let (b1, rest) = rest.split_at(h);
    let (w2, b2) = rest.split_at(n * h);
    let mut hidden = vec![0.0; h];
    for (j, hj) in hidden.iter_mut().enumerate() {
        let row = &w1[j * d..(j + 1) * d];
        let z: f64 = row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b1[j];
        *hj = sigmoid(z);
    }
    let mut logits = vec![0.0; n];
    for (c, lc) in logits.iter_mut().enumerate() {
        let row = &w2[c * h..(c + 1) * h];
        *lc = row.iter().zip(&hidden).map(|(w, v)| w * v).sum::<f64>() + b2[c];
    }
    let peak = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = logits.iter().map(|&z| (z - peak).exp()).collect();
    let total: f64 = p.iter().sum();
    for v in &mut p {
        *v /= total;
    }
    (hidden, p)
}

/// Mean cross-entropy over the batch, log argument clamped at 1e-300.
/// Chunked like the gradient so parallel runs stay bit-deterministic.
fn loss_flat(params: &[f64], dims: Dims, data: &DesignMatrix) -> f64 {
    if data.n > 2 * GRAD_CHUNK {
        let ranges: Vec<(usize, usize)> = (0..data.n)
            .step_by(GRAD_CHUNK)
            .map(|s| (s, (s + GRAD_CHUNK).min(data.n)))
            .collect();
        let parts: Vec<f64> = ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let mut t = 0.0;
                for i in lo..hi {
                    let (_, p) = forward_one(params, dims, data.row(i));
                    t -= p[data.class_idx[i]].max(1e-300).ln();
                }
                t
            })
            .collect();
        return parts.iter().sum::<f64>() / data.n as f64;
    }
    let mut total = 0.0;
    for i in 0..data.n {
        let (_, p) = forward_one(params, dims, data.row(i));
        total -= p[data.class_idx[i]].max(1e-300).ln();
    }
    total / data.n as f64
}

/// Backpropagated gradient; returns the loss of the same pass. Large
/// batches fan out over fixed-size chunks.
fn grad_flat(params: &[f64], dims: Dims, data: &DesignMatrix, grad: &mut [f64]) -> f64 {
    if data.n > 2 * GRAD_CHUNK {
        let ranges: Vec<(usize, usize)> = (0..data.n)
            .step_by(GRAD_CHUNK)
            .map(|s| (s, (s + GRAD_CHUNK).min(data.n)))
            .collect();
        let parts: Vec<(Vec<f64>, f64)> = ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let sub = DesignMatrix {
                    x: data.x[lo * data.d..hi * data.d].to_vec(),
                    n: hi - lo,
                    d: data.d,
                    class_idx: data.class_idx[lo..hi].to_vec(),
                };
                let mut g = vec![0.0; grad.len()];
                let l = grad_chunk(params, dims, &sub, &mut g);
                (g, l)
            })
            .collect();
        grad.fill(0.0);
        let mut total = 0.0;
        let inv_n = 1.0 / data.n as f64;
        for (g, l) in &parts {
            // chunk gradients are sums over their samples; rescale to the
            // full-batch mean in deterministic chunk order
            for (acc, &v) in grad.iter_mut().zip(g) {
                *acc += v * inv_n;
            }
            total += l;
        }
        return total * inv_n;
    }
    let l = grad_chunk(params, dims, data, grad);
    let inv_n = 1.0 / data.n as f64;
    for g in grad.iter_mut() {
        *g *= inv_n;
    }
    l / data.n as f64
}

/// Per-chunk backpropagation accumulating unscaled sums (no 1/N factor).
fn grad_chunk(params: &[f64], dims: Dims, data: &DesignMatrix, grad: &mut [f64]) -> f64 {
    let Dims { d, h, n } = dims;
    grad.fill(0.0);
    let (w1, rest) = params.split_at(h * d);
    let (b1, rest) = rest.split_at(h);
    let (w2, _b2) = rest.split_at(n * h);
    let _ = w1;
    let mut total = 0.0;
    let mut dlogits = vec![0.0; n];
    let mut dpre = vec![0.0; h];
    for i in 0..data.n {
        let x = data.row(i);
        let (hidden, p) = forward_one(params, dims, x);
        let y = data.class_idx[i];
        total -= p[y].max(1e-300).ln();
        for c in 0..n {
            dlogits[c] = p[c] - f64::from(c == y);
        }
        // output layer
        {
            let (gw2, gb2) = {
                let (head, tail) = grad.split_at_mut(h * d + h + n * h);
                (&mut head[h * d + h..], tail)
            };
            for c in 0..n {
                let dc = dlogits[c];
                gb2[c] += dc;
                let row = &mut gw2[c * h..(c + 1) * h];
                for (g, &hv) in row.iter_mut().zip(&hidden) {
                    *g += dc * hv;
                }
            }
        }
        // hidden layer
        for j in 0..h {
            let mut acc = 0.0;
            for c in 0..n {
                acc += dlogits[c] * w2[c * h + j];
            }
            dpre[j] = acc * hidden[j] * (1.0 - hidden[j]);
        }
        {
            let (gw1, gb1) = {
                let (head, tail) = grad.split_at_mut(h * d);
                (head, &mut tail[..h])
            };
            for j in 0..h {
                let dj = dpre[j];
                if dj == 0.0 {
                    continue;
                }
                gb1[j] += dj;
                let row = &mut gw1[j * d..(j + 1) * d];
                for (g, &xv) in row.iter_mut().zip(x) {
                    *g += dj * xv;
                }
            }
        }
    }
    let _ = b1;
    total
}

/// Cross-entropy loss of the model on a raw batch (normalization applied if
/// the model carries one).
pub fn loss(model: &MlpModel, data: &DesignMatrix) -> Result<f64> {
    let data = normalized_copy(model, data)?;
    Ok(loss_flat(model.params_flat(), model.dims(), &data))
}

/// Parameter gradient of the loss, shaped like the flat parameter vector.
pub fn gradient(model: &MlpModel, data: &DesignMatrix) -> Result<Vec<f64>> {
    let data = normalized_copy(model, data)?;
    let mut g = vec![0.0; model.dims().total()];
    let l = grad_flat(model.params_flat(), model.dims(), &data, &mut g);
    if !l.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(EitError::TrainingDiverged { epoch: 0, reason: "non-finite gradient".into() });
    }
    Ok(g)
}

fn normalized_copy(model: &MlpModel, data: &DesignMatrix) -> Result<DesignMatrix> {
    if data.n == 0 {
        return Err(EitError::InvalidArgument("empty batch".into()));
    }
    if data.d != model.input_dim {
        return Err(EitError::ShapeMismatch(format!(
            "batch dim {} vs model input {}",
            data.d, model.input_dim
        )));
    }
    match &model.norm {
        None => Ok(data.clone()),
        Some(norm) => {
            let mut out = data.clone();
            for i in 0..out.n {
                let row = &data.x[i * data.d..(i + 1) * data.d];
                let dst = &mut out.x[i * data.d..(i + 1) * data.d];
                norm.apply_into(row, dst);
            }
            Ok(out)
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub patience: usize,
    pub seed: u64,
    /// finite-difference step scale for the curvature estimate
    pub scg_sigma: f64,
    /// initial model-trust regularizer
    pub scg_lambda: f64,
    /// z-score the inputs on the training set before optimizing
    pub normalize_inputs: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 1000,
            patience: 6,
            seed: 0,
            scg_sigma: 5e-5,
            scg_lambda: 5e-7,
            normalize_inputs: false,
        }
    }
}

/// Loss trace of one epoch.
#[derive(Debug, Clone, Serialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub validation_loss: f64,
}

/// Train by full-batch scaled conjugate gradient: conjugate directions with
/// model-trust scaling adapted by the comparison ratio, no line search.
/// Stops at `max_epochs` or after `patience` epochs without validation
/// improvement, returning the best-validation snapshot.
pub fn train_scg(
    mut model: MlpModel,
    train: &DesignMatrix,
    validation: &DesignMatrix,
    config: &TrainConfig,
) -> Result<(MlpModel, Vec<EpochStats>)> {
    if train.n == 0 || validation.n == 0 {
        return Err(EitError::InvalidArgument("train and validation must be non-empty".into()));
    }
    if config.max_epochs == 0 || config.patience == 0 {
        return Err(EitError::InvalidArgument("max_epochs and patience must be at least 1".into()));
    }
    let dims = model.dims();

    // optional z-score normalization fitted on the training inputs
    let (train_data, val_data);
    if config.normalize_inputs {
        let norm = fit_norm(train);
        train_data = apply_norm(&norm, train);
        val_data = apply_norm(&norm, validation);
        model.norm = Some(norm);
    } else {
        train_data = train.clone();
        val_data = validation.clone();
    }

    let total = dims.total();
    let mut w = model.params_flat().to_vec();
    let mut grad = vec![0.0; total];
    let mut loss_now = grad_flat(&w, dims, &train_data, &mut grad);
    if !loss_now.is_finite() {
        return Err(EitError::TrainingDiverged { epoch: 0, reason: "initial loss not finite".into() });
    }
    let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut p = r.clone();
    let mut lambda = config.scg_lambda;
    let mut lambda_bar = 0.0;
    let mut success = true;
    let mut delta = 0.0;
    let mut s = vec![0.0; total];
    let mut trial = vec![0.0; total];
    let mut grad_trial = vec![0.0; total];

    let mut history: Vec<EpochStats> = Vec::new();
    let mut best_w = w.clone();
    let mut best_val = f64::INFINITY;
    let mut best_epoch = 0usize;
    let mut bad_epochs = 0usize;

    for epoch in 1..=config.max_epochs {
        let p_norm2: f64 = p.iter().map(|v| v * v).sum();
        if p_norm2.sqrt() < 1e-300 {
            break;
        }
        if success {
            // second-order information along p by finite differences
            let sigma_k = config.scg_sigma / p_norm2.sqrt();
            for ((t, &wv), &pv) in trial.iter_mut().zip(&w).zip(&p) {
                *t = wv + sigma_k * pv;
            }
            grad_flat(&trial, dims, &train_data, &mut grad_trial);
            for ((sv, &gt), &g) in s.iter_mut().zip(&grad_trial).zip(&grad) {
                *sv = (gt - g) / sigma_k;
            }
            delta = p.iter().zip(&s).map(|(a, b)| a * b).sum();
        }
        // scale the curvature and force it positive definite
        delta += (lambda - lambda_bar) * p_norm2;
        if delta <= 0.0 {
            lambda_bar = 2.0 * (lambda - delta / p_norm2);
            delta = -delta + lambda * p_norm2;
            lambda = lambda_bar;
        }
        let mu: f64 = p.iter().zip(&r).map(|(a, b)| a * b).sum();
        let alpha = mu / delta;
        for ((t, &wv), &pv) in trial.iter_mut().zip(&w).zip(&p) {
            *t = wv + alpha * pv;
        }
        let loss_trial = loss_flat(&trial, dims, &train_data);
        if !loss_trial.is_finite() {
            return Err(EitError::TrainingDiverged {
                epoch,
                reason: format!("loss became {loss_trial}"),
            });
        }
        let comparison = 2.0 * delta * (loss_now - loss_trial) / (mu * mu);
        if comparison >= 0.0 {
            // accepted step
            w.copy_from_slice(&trial);
            loss_now = loss_trial;
            let grad_old_dot: f64;
            let r_new_norm2: f64;
            grad_flat(&w, dims, &train_data, &mut grad);
            let r_new: Vec<f64> = grad.iter().map(|g| -g).collect();
            r_new_norm2 = r_new.iter().map(|v| v * v).sum();
            grad_old_dot = r_new.iter().zip(&r).map(|(a, b)| a * b).sum();
            lambda_bar = 0.0;
            success = true;
            if epoch % total == 0 {
                p.copy_from_slice(&r_new);
            } else {
                let beta = (r_new_norm2 - grad_old_dot) / mu;
                for (pv, &rv) in p.iter_mut().zip(&r_new) {
                    *pv = rv + beta * *pv;
                }
            }
            r = r_new;
            if comparison >= 0.75 {
                lambda *= 0.25;
            }
        } else {
            lambda_bar = lambda;
            success = false;
        }
        if comparison < 0.25 {
            lambda += delta * (1.0 - comparison) / p_norm2;
        }
        lambda = lambda.min(1e100);

        let val_loss = loss_flat(&w, dims, &val_data);
        history.push(EpochStats { epoch, train_loss: loss_now, validation_loss: val_loss });
        if val_loss < best_val {
            best_val = val_loss;
            best_w.copy_from_slice(&w);
            best_epoch = epoch;
            bad_epochs = 0;
        } else {
            bad_epochs += 1;
            if bad_epochs >= config.patience {
                break;
            }
        }
        // converged: gradient numerically zero
        if r.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-14 {
            break;
        }
    }
    let _ = best_epoch;
    model.params_mut().copy_from_slice(&best_w);
    Ok((model, history))
}

fn fit_norm(data: &DesignMatrix) -> InputNorm {
    let d = data.d;
    let n = data.n as f64;
    let mut shift = vec![0.0; d];
    let mut scale = vec![0.0; d];
    for i in 0..data.n {
        for (a, &v) in shift.iter_mut().zip(data.row(i)) {
            *a += v;
        }
    }
    for a in &mut shift {
        *a /= n;
    }
    for i in 0..data.n {
        for ((a, &v), &m) in scale.iter_mut().zip(data.row(i)).zip(&shift) {
            *a += (v - m) * (v - m);
        }
    }
    for a in &mut scale {
        *a = (*a / n).sqrt();
        if *a < 1e-12 {
            *a = 1.0;
        }
    }
    InputNorm { shift, scale }
}

fn apply_norm(norm: &InputNorm, data: &DesignMatrix) -> DesignMatrix {
    let mut out = data.clone();
    for i in 0..data.n {
        let row = &data.x[i * data.d..(i + 1) * data.d];
        let dst = &mut out.x[i * data.d..(i + 1) * data.d];
        norm.apply_into(row, dst);
    }
    out
}

/// Serialized form: shape header plus row-major parameter arrays.
#[derive(Serialize, Deserialize)]
struct ModelJson {
    input_dim: usize,
    hidden_dim: usize,
    labels: Vec<u32>,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
    norm: Option<InputNorm>,
}

pub fn to_json(model: &MlpModel) -> String {
    let j = ModelJson {
        input_dim: model.input_dim,
        hidden_dim: model.hidden_dim,
        labels: model.labels.clone(),
        w1: model.w1().to_vec(),
        b1: model.b1().to_vec(),
        w2: model.w2().to_vec(),
        b2: model.b2().to_vec(),
        norm: model.norm.clone(),
    };
    serde_json::to_string_pretty(&j).expect("model serializes")
}

pub fn from_json(text: &str) -> Result<MlpModel> {
    let j: ModelJson = serde_json::from_str(text).map_err(|e| EitError::Format(e.to_string()))?;
    let dims_ok = j.w1.len() == j.hidden_dim * j.input_dim
        && j.b1.len() == j.hidden_dim
        && j.w2.len() == j.labels.len() * j.hidden_dim
        && j.b2.len() == j.labels.len();
    if !dims_ok {
        return Err(EitError::ShapeMismatch("model arrays do not match header".into()));
    }
    let mut params = j.w1;
    params.extend_from_slice(&j.b1);
    params.extend_from_slice(&j.w2);
    params.extend_from_slice(&j.b2);
    Ok(MlpModel {
        input_dim: j.input_dim,
        hidden_dim: j.hidden_dim,
        labels: j.labels,
        params,
        norm: j.norm,
    })
}

pub fn save_model(model: &MlpModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model)).map_err(|e| EitError::io(path.display().to_string(), e))
}

pub fn load_model(path: &Path) -> Result<MlpModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| EitError::io(path.display().to_string(), e))?;
    from_json(&text)
}
