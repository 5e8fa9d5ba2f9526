//! Forward Dirichlet solves and Dirichlet-to-Neumann matrix assembly.
//!
//! For each voltage pattern the Dirichlet problem is solved with P1 finite
//! elements, the boundary current density is recovered, averaged per
//! electrode arc, and the D-N entry (i, j) is the Euclidean inner product of
//! the j-th averaged current vector with the i-th discretized voltage vector.

mod fem;
mod flux;

pub use fem::{assemble_stiffness, element_stiffness, FemSystem, DEGENERATE_AREA};
pub use flux::{boundary_flux, electrode_average_flux, FluxMethod, DEFAULT_FLUX_METHOD};

use crate::error::{EitError, Result};
use crate::linalg::invert_dense;
use crate::mesh::{ElectrodeLayout, TriMesh};
use crate::phantom::ConductivitySpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Gaussian noise scale applied to simulated D-N matrices (1% level).
pub const NOISE_SCALE: f64 = 1e-2;

/// Condition-number ceiling beyond which an N-D matrix is treated as
/// numerically singular.
pub const SINGULARITY_CONDITION: f64 = 1e12;

const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;

/// sin(pi x) with exact zeros at integer x.
fn sinpi(x: f64) -> f64 {
    let y = x.rem_euclid(2.0);
    if y == 0.0 || y == 1.0 {
        0.0
    } else if y == 0.5 {
        1.0
    } else if y == 1.5 {
        -1.0
    } else {
        (std::f64::consts::PI * y).sin()
    }
}

/// cos(pi x) with exact zeros at half-integer x.
fn cospi(x: f64) -> f64 {
    sinpi(x + 0.5)
}

/// Kinds of excitation used to build D-N matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    /// trigonometric voltage basis applied on the whole boundary
    Trig,
    /// +1 V / -1 V on an antipodal electrode pair, 0 elsewhere
    Opposite,
    /// externally measured data ingested through the N-D path
    External,
}

impl PatternKind {
    pub fn name(&self) -> &'static str {
        match self {
            PatternKind::Trig => "trig",
            PatternKind::Opposite => "opposite",
            PatternKind::External => "external",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "trig" => Some(PatternKind::Trig),
            "opposite" => Some(PatternKind::Opposite),
            "external" => Some(PatternKind::External),
            _ => None,
        }
    }
}

/// One boundary voltage pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoltagePattern {
    /// V^k(theta) = pi^(-1/2) cos((k+1) theta / 2) for odd k,
    /// pi^(-1/2) sin(k theta / 2) for even k; k >= 1
    Trig { k: usize },
    /// +1 on electrode arc m, -1 on the antipodal arc, 0 elsewhere
    Opposite { m: usize },
}

impl VoltagePattern {
    /// Continuum boundary voltage at angle theta (radians). Opposite
    /// patterns need the electrode layout to resolve arc membership.
    pub fn value_at(&self, theta: f64, layout: &ElectrodeLayout) -> f64 {
        match *self {
            VoltagePattern::Trig { k } => {
                if k % 2 == 1 {
                    FRAC_1_SQRT_PI * ((k + 1) as f64 * theta / 2.0).cos()
                } else {
                    FRAC_1_SQRT_PI * (k as f64 * theta / 2.0).sin()
                }
            }
            VoltagePattern::Opposite { m } => {
                let e = layout.electrode_count;
                let arc = layout.electrode_of_angle(theta);
                if arc == m {
                    1.0
                } else if arc == opposite_electrode(m, e) {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Dirichlet data at the mesh boundary nodes (ordered as
    /// `mesh.boundary_nodes`).
    pub fn boundary_values(&self, mesh: &TriMesh, layout: &ElectrodeLayout) -> Vec<f64> {
        mesh.boundary_nodes
            .iter()
            .map(|&v| self.value_at(mesh.vertices[v].angle(), layout))
            .collect()
    }

    pub fn kind(&self) -> PatternKind {
        match self {
            VoltagePattern::Trig { .. } => PatternKind::Trig,
            VoltagePattern::Opposite { .. } => PatternKind::Opposite,
        }
    }
}

/// Antipodal electrode of `m` (1-based) in an E-electrode layout.
pub fn opposite_electrode(m: usize, electrode_count: usize) -> usize {
    (m - 1 + electrode_count / 2) % electrode_count + 1
}

/// The first `m` trigonometric patterns, k = 1..=m.
pub fn trig_patterns(m: usize) -> Vec<VoltagePattern> {
    (1..=m).map(|k| VoltagePattern::Trig { k }).collect()
}

/// The first `m` opposite-injection patterns, m <= E.
pub fn opposite_patterns(m: usize, electrode_count: usize) -> Result<Vec<VoltagePattern>> {
    if m > electrode_count {
        return Err(EitError::InvalidArgument(format!(
            "unique opposite-injection patterns need M <= E, got M={m}, E={electrode_count}"
        )));
    }
    Ok((1..=m).map(|m| VoltagePattern::Opposite { m }).collect())
}

/// Discretize a pattern at the electrode centers: V-hat in R^E.
/// Trigonometric values are evaluated through exact rational multiples of
/// pi, so aliased patterns (k = E at the centers) vanish exactly.
pub fn discretize_pattern(pattern: &VoltagePattern, layout: &ElectrodeLayout) -> Vec<f64> {
    let e = layout.electrode_count;
    match *pattern {
        VoltagePattern::Trig { k } => (1..=e)
            .map(|l| {
                // theta_l = 2 pi l / E
                if k % 2 == 1 {
                    FRAC_1_SQRT_PI * cospi((k + 1) as f64 * l as f64 / e as f64)
                } else {
                    FRAC_1_SQRT_PI * sinpi(k as f64 * l as f64 / e as f64)
                }
            })
            .collect(),
        VoltagePattern::Opposite { m } => {
            let mut v = vec![0.0; e];
            v[m - 1] = 1.0;
            v[opposite_electrode(m, e) - 1] = -1.0;
            v
        }
    }
}

/// The discretized D-N map: entry (i, j) = < J-hat^j, V-hat^i >.
#[derive(Debug, Clone, PartialEq)]
pub struct DnMatrix {
    /// row-major M x M entries
    pub entries: Vec<f64>,
    /// measurement count M
    pub m: usize,
    pub pattern: PatternKind,
    pub electrode_count: usize,
    pub noisy: bool,
    pub noise_seed: Option<u64>,
}

impl DnMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.m + j]
    }

    /// Row-major flattening used as the classifier feature vector.
    pub fn flatten(&self) -> &[f64] {
        &self.entries
    }

    /// Leading principal submatrix, used by the measurement sweep where the
    /// first M of the full pattern set are kept.
    pub fn leading_submatrix(&self, m: usize) -> DnMatrix {
        assert!(m <= self.m);
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(self.get(i, j));
            }
        }
        DnMatrix { entries, m, ..*self }
    }
}

/// Assemble the clean D-N matrix for the scenario: one forward solve per
/// pattern against a single factorization.
pub fn dn_matrix(
    mesh: &TriMesh,
    spec: &ConductivitySpec,
    layout: &ElectrodeLayout,
    patterns: &[VoltagePattern],
) -> Result<DnMatrix> {
    dn_matrix_with(mesh, spec, layout, patterns, DEFAULT_FLUX_METHOD)
}

/// [`dn_matrix`] with an explicit flux-recovery method.
pub fn dn_matrix_with(
    mesh: &TriMesh,
    spec: &ConductivitySpec,
    layout: &ElectrodeLayout,
    patterns: &[VoltagePattern],
    flux_method: FluxMethod,
) -> Result<DnMatrix> {
    let m = patterns.len();
    if m > layout.electrode_count {
        return Err(EitError::InvalidArgument(format!(
            "M={} patterns exceed E={} electrodes",
            m, layout.electrode_count
        )));
    }
    let system = assemble_stiffness(mesh, spec)?;
    let mut currents: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (jdx, pattern) in patterns.iter().enumerate() {
        let run = || -> Result<Vec<f64>> {
            let g = pattern.boundary_values(mesh, layout);
            let u = system.solve_dirichlet(&g)?;
            let j = boundary_flux(mesh, spec, &u, flux_method)?;
            electrode_average_flux(&j, mesh, layout)
        };
        currents.push(run().map_err(|e| EitError::PatternFailed {
            pattern: jdx + 1,
            source: Box::new(e),
        })?);
    }
    let voltages: Vec<Vec<f64>> =
        patterns.iter().map(|p| discretize_pattern(p, layout)).collect();

    let mut entries = Vec::with_capacity(m * m);
    for vi in &voltages {
        for jj in &currents {
            entries.push(vi.iter().zip(jj).map(|(a, b)| a * b).sum::<f64>());
        }
    }
    let kind = patterns.first().map(|p| p.kind()).unwrap_or(PatternKind::Trig);
    Ok(DnMatrix {
        entries,
        m,
        pattern: kind,
        electrode_count: layout.electrode_count,
        noisy: false,
        noise_seed: None,
    })
}

/// Add zero-mean Gaussian noise, entrywise: L' = L + scale * N with
/// N ~ N(0, 1). Deterministic for a fixed seed; the input stays clean.
pub fn add_noise(clean: &DnMatrix, scale: f64, seed: u64) -> DnMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let entries = clean
        .entries
        .iter()
        .map(|&v| v + scale * <StandardNormal as Distribution<f64>>::sample(&normal, &mut rng))
        .collect();
    DnMatrix {
        entries,
        m: clean.m,
        pattern: clean.pattern,
        electrode_count: clean.electrode_count,
        noisy: true,
        noise_seed: Some(seed),
    }
}

/// Invert a measured Neumann-to-Dirichlet matrix into the D-N matrix.
/// No noise is added on this path.
pub fn dn_from_nd(nd: &[Vec<f64>]) -> Result<DnMatrix> {
    let m = nd.len();
    let (inv, cond) = invert_dense(nd)?;
    if cond > SINGULARITY_CONDITION {
        return Err(EitError::SingularMatrix { name: "N-D".into(), cond });
    }
    let mut entries = Vec::with_capacity(m * m);
    for row in &inv {
        entries.extend_from_slice(row);
    }
    Ok(DnMatrix {
        entries,
        m,
        pattern: PatternKind::External,
        electrode_count: m,
        noisy: false,
        noise_seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{electrode_layout, generate_disk_mesh, DEFAULT_TARGET_MAX_EDGE};
    use crate::phantom::ConductivitySpec;
    use approx::assert_relative_eq;

    #[test]
    fn trig_pattern_values() {
        let layout = electrode_layout(16).unwrap();
        // k = 1 (odd): pi^(-1/2) cos(theta); at theta = 0 this is 0.564190
        let p = VoltagePattern::Trig { k: 1 };
        assert_relative_eq!(p.value_at(0.0, &layout), 0.5641895835477563, epsilon = 1e-9);
        // k = 2 (even): pi^(-1/2) sin(theta)
        let p2 = VoltagePattern::Trig { k: 2 };
        assert_relative_eq!(
            p2.value_at(std::f64::consts::FRAC_PI_2, &layout),
            0.5641895835477563,
            epsilon = 1e-9
        );
    }

    #[test]
    fn sixteenth_trig_pattern_discretizes_to_exact_zero() {
        let layout = electrode_layout(16).unwrap();
        let v = discretize_pattern(&VoltagePattern::Trig { k: 16 }, &layout);
        assert!(v.iter().all(|&x| x == 0.0), "{v:?}");
    }

    #[test]
    fn opposite_pattern_discretization() {
        let layout = electrode_layout(16).unwrap();
        let v = discretize_pattern(&VoltagePattern::Opposite { m: 1 }, &layout);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[8], -1.0);
        assert_eq!(v.iter().filter(|&&x| x != 0.0).count(), 2);
        assert_eq!(opposite_electrode(9, 16), 1);
        assert_eq!(opposite_electrode(16, 16), 8);
    }

    #[test]
    fn pattern_count_cannot_exceed_electrodes() {
        assert!(opposite_patterns(4, 2).is_err());
        assert_eq!(opposite_patterns(2, 2).unwrap().len(), 2);
    }

    #[test]
    fn homogeneous_dn_matches_analytic_eigenvalues() {
        let gamma = 1.45;
        let r = 0.28;
        let mesh = generate_disk_mesh(r, DEFAULT_TARGET_MAX_EDGE, 11).unwrap();
        let layout = electrode_layout(16).unwrap();
        let spec = ConductivitySpec::homogeneous(r, gamma);
        let dn = dn_matrix(&mesh, &spec, &layout, &trig_patterns(16)).unwrap();

        // diagonal: gamma n / R * (8 / pi) * sinc(n pi / 16) for k = 1..14
        for k in 1..=14usize {
            let n = if k % 2 == 1 { (k + 1) / 2 } else { k / 2 } as f64;
            let x = n * std::f64::consts::PI / 16.0;
            let expected = gamma * n / r * (8.0 / std::f64::consts::PI) * (x.sin() / x);
            let got = dn.get(k - 1, k - 1);
            let rel = (got - expected).abs() / expected;
            assert!(rel <= 0.03, "k={k}: got {got}, expected {expected}, rel {rel}");
        }
        // row 16 exactly zero
        for j in 0..16 {
            assert_eq!(dn.get(15, j), 0.0);
        }
        // off-diagonals small next to their diagonals
        for i in 0..14 {
            for j in 0..14 {
                if i != j {
                    let bound = 0.02 * dn.get(i, i).abs().max(dn.get(j, j).abs());
                    assert!(
                        dn.get(i, j).abs() <= bound,
                        "({i},{j}): {} vs bound {bound}",
                        dn.get(i, j)
                    );
                }
            }
        }
    }

    #[test]
    fn dn_scales_linearly_with_sigma() {
        let mesh = generate_disk_mesh(0.28, 0.025, 12).unwrap();
        let layout = electrode_layout(16).unwrap();
        let patterns = trig_patterns(4);
        let a = dn_matrix(&mesh, &ConductivitySpec::homogeneous(0.28, 1.0), &layout, &patterns)
            .unwrap();
        let b = dn_matrix(&mesh, &ConductivitySpec::homogeneous(0.28, 3.0), &layout, &patterns)
            .unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert!((3.0 * x - y).abs() <= 1e-8 * y.abs().max(1.0));
        }
    }

    #[test]
    fn noise_is_deterministic_and_leaves_input_clean() {
        let clean = DnMatrix {
            entries: vec![1.0, 2.0, 3.0, 4.0],
            m: 2,
            pattern: PatternKind::Trig,
            electrode_count: 16,
            noisy: false,
            noise_seed: None,
        };
        let n1 = add_noise(&clean, NOISE_SCALE, 7);
        let n2 = add_noise(&clean, NOISE_SCALE, 7);
        assert_eq!(n1.entries, n2.entries);
        assert!(n1.noisy);
        assert_eq!(clean.entries, vec![1.0, 2.0, 3.0, 4.0]);
        let zero = add_noise(&clean, 0.0, 7);
        assert_eq!(zero.entries, clean.entries);
        let other = add_noise(&clean, NOISE_SCALE, 8);
        assert_ne!(n1.entries, other.entries);
    }

    #[test]
    fn noise_moments_match_standard_normal() {
        let m = 320;
        let clean = DnMatrix {
            entries: vec![0.0; m * m],
            m,
            pattern: PatternKind::Trig,
            electrode_count: 16,
            noisy: false,
            noise_seed: None,
        };
        let noisy = add_noise(&clean, NOISE_SCALE, 99);
        let n = (m * m) as f64;
        let mean: f64 = noisy.entries.iter().sum::<f64>() / n;
        let var: f64 = noisy.entries.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        assert!(mean.abs() <= 3.0 * NOISE_SCALE / n.sqrt(), "mean {mean}");
        assert!((var.sqrt() - NOISE_SCALE).abs() / NOISE_SCALE <= 0.02, "std {}", var.sqrt());
    }

    #[test]
    fn nd_inversion_paths() {
        let id = dn_from_nd(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(id.entries, vec![1.0, 0.0, 0.0, 1.0]);
        assert!(!id.noisy);

        let diag = dn_from_nd(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        assert_relative_eq!(diag.get(0, 0), 0.5);
        assert_relative_eq!(diag.get(1, 1), 0.25);

        assert!(matches!(
            dn_from_nd(&[vec![1.0, 1.0], vec![1.0, 1.0]]),
            Err(EitError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn leading_submatrix_takes_prefix() {
        let dn = DnMatrix {
            entries: (0..16).map(|v| v as f64).collect(),
            m: 4,
            pattern: PatternKind::Opposite,
            electrode_count: 16,
            noisy: false,
            noise_seed: None,
        };
        let sub = dn.leading_submatrix(2);
        assert_eq!(sub.entries, vec![0.0, 1.0, 4.0, 5.0]);
    }
}
