//! Soft-margin kernel SVM trained by sequential minimal optimization, with
//! one-vs-one multiclass voting.
//!
//! The working pair is the maximal KKT violator (most violating pair over
//! the up/low index sets); the dual objective increases monotonically and
//! training stops when the violation gap falls under the tolerance.

use crate::error::{EitError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Default box constraint.
pub const DEFAULT_C: f64 = 1.0;

/// Default KKT tolerance for SMO.
pub const DEFAULT_TOL: f64 = 1e-3;

/// Passes over the data allowed per training run, as a multiple of the
/// sample count; one pass is N pair updates.
pub const MAX_PASS_FACTOR: usize = 10;

/// Hard ceiling on pair updates regardless of N, matching the reference
/// toolbox's default iteration limit.
const MAX_PAIR_UPDATES: usize = 1_000_000;

/// What to do when SMO reaches its pair-update budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnCap {
    /// report non-convergence with the violation count
    Error,
    /// return the current dual-feasible iterate (box and equality
    /// constraints hold; KKT optimality is partial), like the reference
    /// solver's warning-and-continue behavior
    AcceptCurrent,
}

/// Gram matrices up to this many bytes are precomputed.
const GRAM_BYTE_LIMIT: usize = 400 << 20;

/// Kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSpec {
    Linear,
    /// K(x, y) = (x . y + 1)^2
    Quadratic,
}

impl KernelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Quadratic => "quadratic",
        }
    }
}

/// Evaluate the kernel on two equal-length vectors.
pub fn kernel(x: &[f64], y: &[f64], spec: KernelSpec) -> Result<f64> {
    if x.len() != y.len() {
        return Err(EitError::ShapeMismatch(format!(
            "kernel arguments of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(match spec {
        KernelSpec::Linear => dot,
        KernelSpec::Quadratic => (dot + 1.0) * (dot + 1.0),
    })
}

/// The explicit quadratic feature map: linear terms, squares, and
/// sqrt(2)-scaled interactions, mapping R^l into R^(2l + l(l-1)/2).
/// Materialized only for small l (tests and diagnostics); training always
/// goes through the kernel trick.
pub fn quadratic_feature_map(x: &[f64]) -> Vec<f64> {
    let l = x.len();
    let mut phi = Vec::with_capacity(2 * l + l * (l - 1) / 2);
    phi.extend_from_slice(x);
    let root2 = 2f64.sqrt();
    for i in 0..l {
        phi.push(x[i] * x[i]);
        for j in (i + 1)..l {
            phi.push(root2 * x[i] * x[j]);
        }
    }
    phi
}

/// Trained binary classifier: support vectors, dual coefficients
/// alpha_i y_i, and bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvm {
    pub kernel: KernelSpec,
    /// support vectors, flattened row-major
    pub support_vectors: Vec<f64>,
    pub dim: usize,
    /// alpha_i y_i per support vector
    pub coefficients: Vec<f64>,
    pub bias: f64,
}

impl BinarySvm {
    pub fn support_count(&self) -> usize {
        self.coefficients.len()
    }

    fn sv(&self, i: usize) -> &[f64] {
        &self.support_vectors[i * self.dim..(i + 1) * self.dim]
    }
}

/// Signed decision value f(x) = sum_i alpha_i y_i K(x_i, x) + b.
pub fn decision(model: &BinarySvm, x: &[f64]) -> Result<f64> {
    let mut f = model.bias;
    for i in 0..model.support_count() {
        f += model.coefficients[i] * kernel(model.sv(i), x, model.kernel)?;
    }
    Ok(f)
}

/// Hard classification: sign of the decision value, with f = 0 mapped
/// to +1.
pub fn classify(model: &BinarySvm, x: &[f64]) -> Result<i8> {
    Ok(if decision(model, x)? >= 0.0 { 1 } else { -1 })
}

struct Gram {
    full: Option<Vec<f64>>,
    diag: Vec<f64>,
    x: Vec<f64>,
    d: usize,
    n: usize,
    spec: KernelSpec,
}

impl Gram {
    fn new(x: &[f64], d: usize, n: usize, spec: KernelSpec) -> Gram {
        let full = if n * n * 8 <= GRAM_BYTE_LIMIT {
            let mut g = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let k = kernel(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d], spec)
                        .expect("equal lengths");
                    g[i * n + j] = k;
                    g[j * n + i] = k;
                }
            }
            Some(g)
        } else {
            None
        };
        let diag = (0..n)
            .map(|i| {
                let xi = &x[i * d..(i + 1) * d];
                kernel(xi, xi, spec).expect("equal lengths")
            })
            .collect();
        Gram { full, diag, x: x.to_vec(), d, n, spec }
    }

    fn row(&self, i: usize, out: &mut Vec<f64>) {
        match &self.full {
            Some(g) => {
                out.clear();
                out.extend_from_slice(&g[i * self.n..(i + 1) * self.n]);
            }
            None => {
                out.clear();
                let xi = &self.x[i * self.d..(i + 1) * self.d];
                for j in 0..self.n {
                    out.push(
                        kernel(xi, &self.x[j * self.d..(j + 1) * self.d], self.spec)
                            .expect("equal lengths"),
                    );
                }
            }
        }
    }

    fn diag(&self, i: usize) -> f64 {
        self.diag[i]
    }
}

/// Train a binary soft-margin SVM by SMO. `y` must contain both +1 and -1.
/// Postconditions: box constraints, dual feasibility sum(alpha_i y_i) = 0,
/// and KKT conditions within `tol`.
pub fn train_smo(
    x: &[f64],
    d: usize,
    y: &[f64],
    spec: KernelSpec,
    c: f64,
    tol: f64,
) -> Result<BinarySvm> {
    train_smo_with(x, d, y, spec, c, tol, OnCap::Error)
}

/// [`train_smo`] with an explicit budget-exhaustion policy.
pub fn train_smo_with(
    x: &[f64],
    d: usize,
    y: &[f64],
    spec: KernelSpec,
    c: f64,
    tol: f64,
    on_cap: OnCap,
) -> Result<BinarySvm> {
    let n = y.len();
    if d == 0 || x.len() != n * d {
        return Err(EitError::ShapeMismatch(format!("{} values for {n} samples of dim {d}", x.len())));
    }
    if !(c > 0.0) {
        return Err(EitError::InvalidArgument(format!("C must be positive, got {c}")));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(EitError::InvalidArgument("labels must be +1 or -1".into()));
    }
    if !y.contains(&1.0) || !y.contains(&-1.0) {
        return Err(EitError::InvalidArgument("both classes must be present".into()));
    }

    let gram = Gram::new(x, d, n, spec);
    let mut alpha = vec![0.0f64; n];
    // s_i = sum_k alpha_k y_k K(x_k, x_i), the bias-free decision part
    let mut s = vec![0.0f64; n];
    let max_iter = (MAX_PASS_FACTOR * n * n).clamp(1000, MAX_PAIR_UPDATES);
    let mut row_i = Vec::with_capacity(n);
    let mut row_j = Vec::with_capacity(n);
    let mut iterations = 0usize;

    loop {
        // first index: maximal violator over I_up; also track the extreme
        // of I_low for the stopping gap
        let mut m_up = f64::NEG_INFINITY;
        let mut i_up = usize::MAX;
        let mut m_low = f64::INFINITY;
        let mut j_min = usize::MAX;
        for t in 0..n {
            let v = y[t] - s[t];
            let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < c);
            if in_up && v > m_up {
                m_up = v;
                i_up = t;
            }
            if in_low && v < m_low {
                m_low = v;
                j_min = t;
            }
        }
        let gap = m_up - m_low;
        if gap <= tol || i_up == usize::MAX || j_min == usize::MAX {
            let bias = (m_up + m_low) / 2.0;
            return Ok(finish(x, d, y, &alpha, bias, spec));
        }
        if iterations >= max_iter {
            match on_cap {
                OnCap::Error => {
                    let violations =
                        count_violations(y, &s, &alpha, c, (m_up + m_low) / 2.0, tol);
                    return Err(EitError::SmoNotConverged { iterations, violations });
                }
                OnCap::AcceptCurrent => {
                    let bias = (m_up + m_low) / 2.0;
                    return Ok(finish(x, d, y, &alpha, bias, spec));
                }
            }
        }
        iterations += 1;

        let i = i_up;
        gram.row(i, &mut row_i);
        // second index by maximal second-order gain among violating
        // candidates in I_low
        let kii = gram.diag(i);
        let mut best_gain = f64::NEG_INFINITY;
        let mut j = j_min;
        for t in 0..n {
            if t == i {
                continue;
            }
            let in_low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < c);
            if !in_low {
                continue;
            }
            let v = y[t] - s[t];
            let diff = m_up - v;
            if diff <= 0.0 {
                continue;
            }
            let eta_t = (kii + gram.diag(t) - 2.0 * row_i[t]).max(1e-12);
            let gain = diff * diff / eta_t;
            if gain > best_gain {
                best_gain = gain;
                j = t;
            }
        }
        gram.row(j, &mut row_j);
        let eta = (kii + gram.diag(j) - 2.0 * row_i[j]).max(1e-12);
        let gap = (y[i] - s[i]) - (y[j] - s[j]);
        // step t along alpha_i += y_i t, alpha_j -= y_j t, which preserves
        // the equality constraint; membership in I_up/I_low guarantees room
        let lim_i = if y[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let lim_j = if y[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        let t_step = (gap / eta).min(lim_i).min(lim_j);
        if t_step <= 0.0 {
            // fully clamped by roundoff; accept the current iterate
            let bias = (m_up + m_low) / 2.0;
            return Ok(finish(x, d, y, &alpha, bias, spec));
        }
        alpha[i] = (alpha[i] + y[i] * t_step).clamp(0.0, c);
        alpha[j] = (alpha[j] - y[j] * t_step).clamp(0.0, c);
        // coefficients alpha_i y_i move by +t and -t
        for k in 0..n {
            s[k] += t_step * (row_i[k] - row_j[k]);
        }
    }
}

fn count_violations(y: &[f64], s: &[f64], alpha: &[f64], c: f64, bias: f64, tol: f64) -> usize {
    let mut count = 0;
    for t in 0..y.len() {
        let margin = y[t] * (s[t] + bias);
        let ok = if alpha[t] <= 0.0 {
            margin >= 1.0 - tol
        } else if alpha[t] >= c {
            margin <= 1.0 + tol
        } else {
            (margin - 1.0).abs() <= tol
        };
        if !ok {
            count += 1;
        }
    }
    count
}

fn finish(x: &[f64], d: usize, y: &[f64], alpha: &[f64], bias: f64, spec: KernelSpec) -> BinarySvm {
    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        if a > 0.0 {
            support_vectors.extend_from_slice(&x[i * d..(i + 1) * d]);
            coefficients.push(a * y[i]);
        }
    }
    BinarySvm { kernel: spec, support_vectors, dim: d, coefficients, bias }
}

/// Count of KKT violations of a trained model on its training set, at the
/// given tolerance. Zero for a converged SMO run.
pub fn kkt_violation_count(
    model: &BinarySvm,
    x: &[f64],
    d: usize,
    y: &[f64],
    c: f64,
    tol: f64,
) -> Result<usize> {
    let n = y.len();
    let mut count = 0;
    for t in 0..n {
        let xt = &x[t * d..(t + 1) * d];
        let f = decision(model, xt)?;
        let margin = y[t] * f;
        // recover this point's alpha by matching against support vectors
        let mut a = 0.0;
        for i in 0..model.support_count() {
            if model.sv(i) == xt {
                a = model.coefficients[i] * y[t]; // coeff = alpha y, so alpha = coeff y
                break;
            }
        }
        let ok = if a <= 0.0 {
            margin >= 1.0 - tol
        } else if a >= c - 1e-12 {
            margin <= 1.0 + tol
        } else {
            (margin - 1.0).abs() <= tol
        };
        if !ok {
            count += 1;
        }
    }
    Ok(count)
}

/// One binary model of the one-vs-one ensemble: +1 is `class_a` (the
/// smaller label), -1 is `class_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairModel {
    pub class_a: u32,
    pub class_b: u32,
    pub svm: BinarySvm,
}

/// One-vs-one multiclass SVM: n(n-1)/2 binary models with majority vote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: KernelSpec,
    pub c: f64,
    pub labels: Vec<u32>,
    pub pairs: Vec<PairModel>,
}

/// Train the one-vs-one ensemble. Every class needs at least 2 samples.
/// Pair trainings are independent and run in parallel.
pub fn train_ovo(
    x: &[f64],
    d: usize,
    labels: &[u32],
    spec: KernelSpec,
    c: f64,
    tol: f64,
) -> Result<SvmModel> {
    train_ovo_with(x, d, labels, spec, c, tol, OnCap::Error)
}

/// [`train_ovo`] with an explicit budget-exhaustion policy.
pub fn train_ovo_with(
    x: &[f64],
    d: usize,
    labels: &[u32],
    spec: KernelSpec,
    c: f64,
    tol: f64,
    on_cap: OnCap,
) -> Result<SvmModel> {
    let n = labels.len();
    if d == 0 || x.len() != n * d {
        return Err(EitError::ShapeMismatch(format!("{} values for {n} samples of dim {d}", x.len())));
    }
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    for &cl in &classes {
        let count = labels.iter().filter(|&&l| l == cl).count();
        if count < 2 {
            return Err(EitError::ClassTooSmall { label: cl, count, needed: 2 });
        }
    }
    if classes.len() < 2 {
        return Err(EitError::InvalidArgument("need at least two classes".into()));
    }

    let mut pair_list = Vec::new();
    for (ai, &a) in classes.iter().enumerate() {
        for &b in &classes[ai + 1..] {
            pair_list.push((a, b));
        }
    }
    use rayon::prelude::*;
    let pairs: Vec<Result<PairModel>> = pair_list
        .par_iter()
        .map(|&(a, b)| {
            let mut sub_x = Vec::new();
            let mut sub_y = Vec::new();
            for (i, &l) in labels.iter().enumerate() {
                if l == a || l == b {
                    sub_x.extend_from_slice(&x[i * d..(i + 1) * d]);
                    sub_y.push(if l == a { 1.0 } else { -1.0 });
                }
            }
            let svm = train_smo_with(&sub_x, d, &sub_y, spec, c, tol, on_cap)?;
            Ok(PairModel { class_a: a, class_b: b, svm })
        })
        .collect();
    let pairs: Vec<PairModel> = pairs.into_iter().collect::<Result<_>>()?;
    Ok(SvmModel { kernel: spec, c, labels: classes, pairs })
}

/// Majority vote over all pairs; ties go to the smallest class label.
pub fn predict_ovo(model: &SvmModel, x: &[f64]) -> Result<u32> {
    let mut votes: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for pair in &model.pairs {
        let winner = if classify(&pair.svm, x)? > 0 { pair.class_a } else { pair.class_b };
        *votes.entry(winner).or_insert(0) += 1;
    }
    // ascending label order keeps the smallest label on vote ties
    let mut best_label = model.labels[0];
    let mut best_votes = 0;
    for (&label, &v) in &votes {
        if v > best_votes {
            best_votes = v;
            best_label = label;
        }
    }
    Ok(best_label)
}

pub fn to_json(model: &SvmModel) -> String {
    serde_json::to_string_pretty(model).expect("model serializes")
}

pub fn from_json(text: &str) -> Result<SvmModel> {
    serde_json::from_str(text).map_err(|e| EitError::Format(e.to_string()))
}

pub fn save_model(model: &SvmModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model)).map_err(|e| EitError::io(path.display().to_string(), e))
}

pub fn load_model(path: &Path) -> Result<SvmModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| EitError::io(path.display().to_string(), e))?;
    from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_values() {
        assert_relative_eq!(kernel(&[1.0, 0.0], &[1.0, 0.0], KernelSpec::Quadratic).unwrap(), 4.0);
        assert_relative_eq!(kernel(&[1.0, 0.0], &[0.0, 1.0], KernelSpec::Quadratic).unwrap(), 1.0);
        assert!(kernel(&[1.0], &[1.0, 2.0], KernelSpec::Linear).is_err());
    }

    #[test]
    fn kernel_feature_map_identity() {
        // K(x, y) - x.y - 1 = Phi(x) . Phi(y)
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let l = rng.random_range(1..=10usize);
            let x: Vec<f64> = (0..l).map(|_| rng.random_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..l).map(|_| rng.random_range(-2.0..2.0)).collect();
            let k = kernel(&x, &y, KernelSpec::Quadratic).unwrap();
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let phi_x = quadratic_feature_map(&x);
            let phi_y = quadratic_feature_map(&y);
            assert_eq!(phi_x.len(), 2 * l + l * (l - 1) / 2);
            let phi_dot: f64 = phi_x.iter().zip(&phi_y).map(|(a, b)| a * b).sum();
            assert!((k - dot - 1.0 - phi_dot).abs() <= 1e-10, "l={l}");
        }
    }

    #[test]
    fn gram_matrix_is_positive_semidefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let n = 20;
            let d = 4;
            let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut g = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    g[i][j] =
                        kernel(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d], KernelSpec::Quadratic)
                            .unwrap();
                }
            }
            let eigs = crate::linalg::symmetric_eigenvalues(&g);
            assert!(eigs[0] >= -1e-8, "min eigenvalue {}", eigs[0]);
        }
    }

    #[test]
    fn two_point_hard_margin_solution() {
        // hand-solved: w = (1, 0), b = 0, both alphas = 0.5
        let x = [1.0, 0.0, -1.0, 0.0];
        let y = [1.0, -1.0];
        let model = train_smo(&x, 2, &y, KernelSpec::Linear, 1e6, 1e-6).unwrap();
        assert_eq!(model.support_count(), 2);
        assert_relative_eq!(decision(&model, &[2.0, 0.0]).unwrap(), 2.0, epsilon = 1e-4);
        assert_relative_eq!(decision(&model, &[1.0, 0.0]).unwrap(), 1.0, epsilon = 1e-4);
        assert_relative_eq!(decision(&model, &[-1.0, 0.0]).unwrap(), -1.0, epsilon = 1e-4);
        assert_eq!(classify(&model, &[2.0, 0.0]).unwrap(), 1);
        // f = 0 maps to +1 by convention
        assert_relative_eq!(decision(&model, &[0.0, 5.0]).unwrap(), 0.0, epsilon = 1e-4);
        assert_eq!(classify(&model, &[0.0, 0.0]).unwrap(), 1);
        // dual feasibility: coefficients are alpha_i y_i and must sum to 0
        let sum: f64 = model.coefficients.iter().sum();
        assert!(sum.abs() <= 1e-8);
    }

    #[test]
    fn xor_is_separated_by_quadratic_kernel() {
        let x = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0];
        let y = [1.0, 1.0, -1.0, -1.0];
        let model = train_smo(&x, 2, &y, KernelSpec::Quadratic, 10.0, 1e-4).unwrap();
        for i in 0..4 {
            let f = decision(&model, &x[i * 2..(i + 1) * 2]).unwrap();
            assert_eq!(f.signum(), y[i], "point {i}: f = {f}");
        }
    }

    #[test]
    fn single_class_rejected() {
        let x = [0.0, 1.0, 2.0, 3.0];
        assert!(train_smo(&x, 2, &[1.0, 1.0], KernelSpec::Linear, 1.0, 1e-3).is_err());
    }

    #[test]
    fn kkt_holds_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..20 {
            let n = 30;
            let d = 3;
            let sep: f64 = if trial % 2 == 0 { 2.0 } else { 0.3 }; // separable or not
            let mut x = Vec::with_capacity(n * d);
            let mut y = Vec::with_capacity(n);
            for i in 0..n {
                let cls = if i % 2 == 0 { 1.0f64 } else { -1.0 };
                x.push(cls * sep + rng.random_range(-1.0..1.0));
                for _ in 1..d {
                    x.push(rng.random_range(-1.0..1.0));
                }
                y.push(cls);
            }
            let c = 1.0;
            let tol = 1e-3;
            let model = train_smo(&x, d, &y, KernelSpec::Quadratic, c, tol).unwrap();
            let sum: f64 = model.coefficients.iter().sum();
            assert!(sum.abs() <= 1e-8, "dual feasibility, trial {trial}");
            for &coef in &model.coefficients {
                assert!(coef.abs() <= c + 1e-12, "box constraint, trial {trial}");
            }
            let violations = kkt_violation_count(&model, &x, d, &y, c, 2.0 * tol).unwrap();
            assert_eq!(violations, 0, "trial {trial}");
        }
    }

    #[test]
    fn free_support_vectors_sit_on_margin() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 40;
        let d = 2;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let cls = if i % 2 == 0 { 1.0f64 } else { -1.0 };
            x.push(cls * 0.7 + rng.random_range(-1.0..1.0));
            x.push(rng.random_range(-1.0..1.0));
            y.push(cls);
        }
        let c = 1.0;
        let model = train_smo(&x, d, &y, KernelSpec::Linear, c, 1e-4).unwrap();
        let mut checked = 0;
        for i in 0..model.support_count() {
            let a = model.coefficients[i].abs();
            if a > 1e-6 && a < c - 1e-6 {
                let f = decision(&model, model.sv(i)).unwrap();
                assert!((f.abs() - 1.0).abs() <= 1e-3, "free SV margin |f| = {}", f.abs());
                checked += 1;
            }
        }
        assert!(checked > 0, "no free support vectors found");
    }

    #[test]
    fn ovo_counts_and_blobs() {
        // n = 2 -> single pair
        let x2 = [0.0, 0.0, 0.1, 0.0, 3.0, 0.0, 3.1, 0.0];
        let l2 = [1u32, 1, 2, 2];
        let m2 = train_ovo(&x2, 2, &l2, KernelSpec::Linear, 10.0, 1e-3).unwrap();
        assert_eq!(m2.pairs.len(), 1);

        // 3 well-separated blobs vs a nearest-centroid oracle
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let centers = [(0.0, 0.0), (6.0, 0.0), (0.0, 6.0)];
        let mut x = Vec::new();
        let mut labels = Vec::new();
        for (ci, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..20 {
                x.push(cx + rng.random_range(-0.5..0.5));
                x.push(cy + rng.random_range(-0.5..0.5));
                labels.push(ci as u32 + 1);
            }
        }
        let model = train_ovo(&x, 2, &labels, KernelSpec::Quadratic, 10.0, 1e-3).unwrap();
        assert_eq!(model.pairs.len(), 3);
        let mut agree = 0;
        for i in 0..labels.len() {
            let p = predict_ovo(&model, &x[i * 2..(i + 1) * 2]).unwrap();
            let oracle = 1 + centers
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let da = (x[i * 2] - a.0).powi(2) + (x[i * 2 + 1] - a.1).powi(2);
                    let db = (x[i * 2] - b.0).powi(2) + (x[i * 2 + 1] - b.1).powi(2);
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap()
                .0 as u32;
            if p == oracle {
                agree += 1;
            }
        }
        assert!(agree as f64 / labels.len() as f64 >= 0.95);
    }

    #[test]
    fn ovo_pair_count_for_four_classes() {
        let mut x = Vec::new();
        let mut labels = Vec::new();
        for c in 0..4u32 {
            for i in 0..3 {
                x.push(c as f64 * 2.0 + i as f64 * 0.1);
                x.push(0.0);
                labels.push(c + 1);
            }
        }
        let model = train_ovo(&x, 2, &labels, KernelSpec::Linear, 10.0, 1e-3).unwrap();
        assert_eq!(model.pairs.len(), 6);
    }

    #[test]
    fn ovo_rejects_missing_class() {
        let x = [0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
        let labels = [1u32, 1, 2];
        assert!(matches!(
            train_ovo(&x, 2, &labels, KernelSpec::Linear, 1.0, 1e-3),
            Err(EitError::ClassTooSmall { label: 2, .. })
        ));
    }

    #[test]
    fn permuting_training_set_preserves_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 60;
        let d = 2;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let cls = if i % 2 == 0 { 1.0f64 } else { -1.0 };
            x.push(cls * 0.8 + rng.random_range(-1.0..1.0));
            x.push(rng.random_range(-1.0..1.0));
            y.push(cls);
        }
        let acc = |model: &BinarySvm, xs: &[f64], ys: &[f64]| {
            let mut ok = 0;
            for i in 0..ys.len() {
                if f64::from(classify(model, &xs[i * d..(i + 1) * d]).unwrap()) == ys[i] {
                    ok += 1;
                }
            }
            ok
        };
        let m1 = train_smo(&x, d, &y, KernelSpec::Quadratic, 1.0, 1e-3).unwrap();
        let mut xr = Vec::new();
        let mut yr = Vec::new();
        for i in (0..n).rev() {
            xr.extend_from_slice(&x[i * d..(i + 1) * d]);
            yr.push(y[i]);
        }
        let m2 = train_smo(&xr, d, &yr, KernelSpec::Quadratic, 1.0, 1e-3).unwrap();
        assert_eq!(acc(&m1, &x, &y), acc(&m2, &x, &y));
    }

    #[test]
    fn model_round_trips_through_json() {
        let x = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0];
        let labels = [1u32, 1, 2, 2];
        let model = train_ovo(&x, 2, &labels, KernelSpec::Quadratic, 10.0, 1e-4).unwrap();
        let back = from_json(&to_json(&model)).unwrap();
        assert_eq!(model, back);
    }
}
