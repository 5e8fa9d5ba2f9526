//! Tank and inclusion conductivity scenarios.
//!
//! Five tensor families are supported: constant isotropic tank/inclusion,
//! constant diagonal anisotropy, constant symmetric (off-diagonal)
//! anisotropy, and the spatially varying diagonal family diag(x^2, y^2)
//! clamped from below so the field stays uniformly elliptic.

use crate::error::{EitError, Result};
use crate::geom::Point2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Inclusion radius classes in meters (half of the 19.4/38.8/58.2/77.6 mm
/// diameters), indexed by class label 1..=4.
pub const RADIUS_CLASSES: [f64; 4] = [0.0097, 0.0194, 0.0291, 0.0388];

/// Minimum gap between an inclusion boundary and the tank wall, meters.
pub const BOUNDARY_CLEARANCE: f64 = 0.010;

/// Minimum gap between two inclusion boundaries, meters.
pub const SPACING_MARGIN: f64 = 0.010;

/// Floor applied to each diagonal entry of the spatially varying family,
/// in S/m; keeps the FEM system nonsingular where x or y vanishes.
pub const SPATIAL_CLAMP: f64 = 1e-3;

/// Background saline conductivity, S/m.
pub const TANK_LAMBDA: f64 = 1.45;

/// Inclusion conductivity used in the anisotropy experiments, S/m.
pub const INCLUSION_LAMBDA: f64 = 10.0;

const MAX_PLACEMENT_RETRIES: usize = 1000;

/// Symmetric 2x2 conductivity tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tensor2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Tensor2 {
    pub fn isotropic(lambda: f64) -> Self {
        Tensor2 { xx: lambda, xy: 0.0, yy: lambda }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let d = (0.25 * (self.xx - self.yy).powi(2) + self.xy * self.xy).sqrt();
        (mean - d, mean + d)
    }

    /// tensor * vector
    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.xx * v.0 + self.xy * v.1, self.xy * v.0 + self.yy * v.1)
    }

    pub fn scale(&self, c: f64) -> Self {
        Tensor2 { xx: c * self.xx, xy: c * self.xy, yy: c * self.yy }
    }
}

/// Declarative description of one region's conductivity tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TensorSpec {
    /// lambda * I
    IsoConst { lambda: f64 },
    /// mu * diag(a, b) with positive integer a, b
    DiagConst { mu: f64, a: u32, b: u32 },
    /// mu * [[a, c], [c, b]], symmetric positive definite
    SymConst { mu: f64, a: u32, b: u32, c: u32 },
    /// diag(x^2, y^2) in tank-centered coordinates, clamped below
    SpatialDiag,
}

impl TensorSpec {
    /// Evaluate the tensor at a point (tank-centered coordinates, meters).
    pub fn evaluate(&self, p: Point2) -> Tensor2 {
        match *self {
            TensorSpec::IsoConst { lambda } => Tensor2::isotropic(lambda),
            TensorSpec::DiagConst { mu, a, b } => {
                Tensor2 { xx: mu * a as f64, xy: 0.0, yy: mu * b as f64 }
            }
            TensorSpec::SymConst { mu, a, b, c } => Tensor2 {
                xx: mu * a as f64,
                xy: mu * c as f64,
                yy: mu * b as f64,
            },
            TensorSpec::SpatialDiag => Tensor2 {
                xx: (p.x * p.x).max(SPATIAL_CLAMP),
                xy: 0.0,
                yy: (p.y * p.y).max(SPATIAL_CLAMP),
            },
        }
    }

    /// Positive definite for every point (after the spatial clamp)?
    pub fn is_elliptic(&self) -> bool {
        match *self {
            TensorSpec::IsoConst { lambda } => lambda > 0.0,
            TensorSpec::DiagConst { mu, a, b } => mu > 0.0 && a > 0 && b > 0,
            TensorSpec::SymConst { mu, a, b, c } => {
                mu > 0.0 && (a as f64) * (b as f64) > (c as f64) * (c as f64)
            }
            TensorSpec::SpatialDiag => true,
        }
    }
}

/// A circular inclusion inside the tank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inclusion {
    pub center: Point2,
    pub radius: f64,
    pub conductivity: TensorSpec,
}

impl Inclusion {
    pub fn contains(&self, p: Point2) -> bool {
        p.dist(&self.center) <= self.radius
    }
}

/// Full conductivity scenario: tank tensor, inclusions, and class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConductivitySpec {
    pub tank_radius: f64,
    pub tank: TensorSpec,
    pub inclusions: Vec<Inclusion>,
    pub label: u32,
}

impl ConductivitySpec {
    pub fn homogeneous(tank_radius: f64, lambda: f64) -> Self {
        ConductivitySpec {
            tank_radius,
            tank: TensorSpec::IsoConst { lambda },
            inclusions: Vec::new(),
            label: 1,
        }
    }
}

/// Conductivity tensor at a point: the inclusion containing the point wins,
/// otherwise the tank tensor applies.
pub fn evaluate_tensor(spec: &ConductivitySpec, p: Point2) -> Result<Tensor2> {
    if p.norm() > spec.tank_radius * (1.0 + 1e-9) {
        return Err(EitError::OutsideTank { x: p.x, y: p.y });
    }
    for inc in &spec.inclusions {
        if inc.contains(p) {
            return Ok(inc.conductivity.evaluate(p));
        }
    }
    Ok(spec.tank.evaluate(p))
}

/// Effective conductivity tensor of a triangular element. Elements that a
/// region interface might cut are averaged over 64 equal-area subtriangle
/// centroids (first-order homogenization of the discontinuity); everything
/// else evaluates at the centroid, which is exact for constant regions.
pub fn effective_tensor(
    spec: &ConductivitySpec,
    a: Point2,
    b: Point2,
    c: Point2,
) -> Result<Tensor2> {
    let centroid = Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
    let reach = centroid
        .dist(&a)
        .max(centroid.dist(&b))
        .max(centroid.dist(&c));
    let straddles = spec.inclusions.iter().any(|inc| {
        let d = centroid.dist(&inc.center);
        // may cut the interface only if the circle passes within reach
        (d - inc.radius).abs() <= reach
    });
    if !straddles {
        return evaluate_tensor(spec, centroid);
    }
    let mut sum = Tensor2 { xx: 0.0, xy: 0.0, yy: 0.0 };
    let mut count = 0.0;
    subdivide_tensor(spec, a, b, c, 3, &mut sum, &mut count)?;
    Ok(sum.scale(1.0 / count))
}

fn subdivide_tensor(
    spec: &ConductivitySpec,
    a: Point2,
    b: Point2,
    c: Point2,
    depth: usize,
    sum: &mut Tensor2,
    count: &mut f64,
) -> Result<()> {
    if depth == 0 {
        let centroid = Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
        let t = evaluate_tensor(spec, centroid)?;
        sum.xx += t.xx;
        sum.xy += t.xy;
        sum.yy += t.yy;
        *count += 1.0;
        return Ok(());
    }
    let ab = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    let bc = Point2::new(0.5 * (b.x + c.x), 0.5 * (b.y + c.y));
    let ca = Point2::new(0.5 * (c.x + a.x), 0.5 * (c.y + a.y));
    subdivide_tensor(spec, a, ab, ca, depth - 1, sum, count)?;
    subdivide_tensor(spec, ab, b, bc, depth - 1, sum, count)?;
    subdivide_tensor(spec, ca, bc, c, depth - 1, sum, count)?;
    subdivide_tensor(spec, ab, bc, ca, depth - 1, sum, count)?;
    Ok(())
}

/// Min/max tensor eigenvalue over the sampled points. Errors with the
/// offending point if any eigenvalue is non-positive.
pub fn verify_ellipticity(spec: &ConductivitySpec, points: &[Point2]) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(EitError::InvalidArgument("ellipticity check needs at least one point".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &p in points {
        let t = evaluate_tensor(spec, p)?;
        let (emin, emax) = t.eigenvalues();
        if emin <= 0.0 {
            return Err(EitError::NotElliptic { x: p.x, y: p.y, eigenvalue: emin });
        }
        lo = lo.min(emin);
        hi = hi.max(emax);
    }
    Ok((lo, hi))
}

/// The eight classification tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Presence,
    CountSmall,
    CountLarge,
    Radii,
    IsoVsAnisoBoth,
    IsoVsAnisoInclusion,
    DiagVsOffdiag,
    IsoVsSpatial,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Presence,
        Task::CountSmall,
        Task::CountLarge,
        Task::Radii,
        Task::IsoVsAnisoBoth,
        Task::IsoVsAnisoInclusion,
        Task::DiagVsOffdiag,
        Task::IsoVsSpatial,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Task::Presence => "presence",
            Task::CountSmall => "count_small",
            Task::CountLarge => "count_large",
            Task::Radii => "radii",
            Task::IsoVsAnisoBoth => "iso_vs_aniso_both",
            Task::IsoVsAnisoInclusion => "iso_vs_aniso_inclusion",
            Task::DiagVsOffdiag => "diag_vs_offdiag",
            Task::IsoVsSpatial => "iso_vs_spatial",
        }
    }

    pub fn from_name(name: &str) -> Option<Task> {
        Task::ALL.iter().copied().find(|t| t.name() == name)
    }

    /// 1-based class labels for the task.
    pub fn class_labels(&self) -> Vec<u32> {
        match self {
            Task::Presence => vec![1, 2],
            Task::CountSmall | Task::CountLarge => vec![1, 2, 3],
            Task::Radii => vec![1, 2, 3, 4],
            _ => vec![1, 2],
        }
    }

    pub fn class_count(&self) -> usize {
        self.class_labels().len()
    }
}

/// Minimum spread between the diagonal anisotropy integers; near-equal
/// pairs collapse to an (up to scale) isotropic signature and would
/// mislabel the anisotropic class.
pub const DIAG_ANISOTROPY_GAP: u32 = 4;

/// Draw a diagonal anisotropy pair with a genuinely anisotropic tensor.
fn draw_diag_pair(rng: &mut ChaCha8Rng) -> (u32, u32) {
    loop {
        let a: u32 = rng.random_range(2..=10);
        let b: u32 = rng.random_range(2..=10);
        if a.abs_diff(b) >= DIAG_ANISOTROPY_GAP {
            return (a, b);
        }
    }
}

/// Place non-overlapping inclusion centers for the given radii. Uniform over
/// admissible centers, sequential rejection per center.
pub fn place_inclusions(rng: &mut ChaCha8Rng, tank_radius: f64, radii: &[f64]) -> Result<Vec<Point2>> {
    let mut centers: Vec<Point2> = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let reach = tank_radius - r - BOUNDARY_CLEARANCE;
        if reach < 0.0 {
            return Err(EitError::PlacementInfeasible { requested: radii.len(), retries: 0 });
        }
        let mut placed = false;
        for _ in 0..MAX_PLACEMENT_RETRIES {
            let rho = reach * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            let c = Point2::new(rho * theta.cos(), rho * theta.sin());
            let ok = centers
                .iter()
                .zip(radii)
                .all(|(q, &rq)| c.dist(q) >= r + rq + SPACING_MARGIN);
            if ok {
                centers.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(EitError::PlacementInfeasible {
                requested: radii.len(),
                retries: MAX_PLACEMENT_RETRIES * (k + 1),
            });
        }
    }
    Ok(centers)
}

/// Sample a conductivity scenario for (task, class label), deterministically
/// from the seed. Anisotropy integers derive from a cohort seed folded from
/// the sample seed, so standalone calls stay fully seed-determined.
pub fn sample_scenario(task: Task, class_label: u32, seed: u64) -> Result<ConductivitySpec> {
    sample_scenario_with_cohort(task, class_label, seed, crate::geom::splitmix64(seed ^ 0xc0_c07))
}

/// [`sample_scenario`] with an explicit cohort seed for the anisotropy
/// integers (a, b, c). A dataset generator passes one cohort seed for all
/// its samples: the anisotropic class then carries a single tensor
/// signature per dataset, the way one pseudorandom draw configures a whole
/// simulated experiment, while placements and scalar conductivities stay
/// per-sample.
pub fn sample_scenario_with_cohort(
    task: Task,
    class_label: u32,
    seed: u64,
    cohort_seed: u64,
) -> Result<ConductivitySpec> {
    if !task.class_labels().contains(&class_label) {
        return Err(EitError::InvalidArgument(format!(
            "label {class_label} is not valid for task {}",
            task.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cohort = ChaCha8Rng::seed_from_u64(cohort_seed);
    let tank_radius = crate::TANK_RADIUS;
    let iso_tank = TensorSpec::IsoConst { lambda: TANK_LAMBDA };

    let spec = match task {
        Task::Presence => {
            if class_label == 1 {
                ConductivitySpec {
                    tank_radius,
                    tank: iso_tank,
                    inclusions: Vec::new(),
                    label: 1,
                }
            } else {
                let radius = RADIUS_CLASSES[rng.random_range(0..4)];
                let centers = place_inclusions(&mut rng, tank_radius, &[radius])?;
                let lambda = rng.random_range(8.0..10.0);
                ConductivitySpec {
                    tank_radius,
                    tank: iso_tank,
                    inclusions: vec![Inclusion {
                        center: centers[0],
                        radius,
                        conductivity: TensorSpec::IsoConst { lambda },
                    }],
                    label: 2,
                }
            }
        }
        Task::CountSmall | Task::CountLarge => {
            let radius = if task == Task::CountSmall { RADIUS_CLASSES[0] } else { RADIUS_CLASSES[1] };
            let n = class_label as usize;
            let radii = vec![radius; n];
            let centers = place_inclusions(&mut rng, tank_radius, &radii)?;
            let inclusions = centers
                .into_iter()
                .map(|c| Inclusion {
                    center: c,
                    radius,
                    conductivity: TensorSpec::IsoConst { lambda: rng.random_range(8.0..10.0) },
                })
                .collect();
            ConductivitySpec { tank_radius, tank: iso_tank, inclusions, label: class_label }
        }
        Task::Radii => {
            let radius = RADIUS_CLASSES[(class_label - 1) as usize];
            let centers = place_inclusions(&mut rng, tank_radius, &[radius])?;
            let lambda = rng.random_range(8.0..10.0);
            ConductivitySpec {
                tank_radius,
                tank: iso_tank,
                inclusions: vec![Inclusion {
                    center: centers[0],
                    radius,
                    conductivity: TensorSpec::IsoConst { lambda },
                }],
                label: class_label,
            }
        }
        Task::IsoVsAnisoBoth => {
            let radius = RADIUS_CLASSES[rng.random_range(0..4)];
            let centers = place_inclusions(&mut rng, tank_radius, &[radius])?;
            let (tank, inc) = if class_label == 1 {
                (iso_tank, TensorSpec::IsoConst { lambda: INCLUSION_LAMBDA })
            } else {
                // one (a, b) pair: the inclusion differs from the background
                // by the scalar jump mu_inc / mu_tank
                let (a, b) = draw_diag_pair(&mut cohort);
                (
                    TensorSpec::DiagConst { mu: TANK_LAMBDA, a, b },
                    TensorSpec::DiagConst { mu: INCLUSION_LAMBDA, a, b },
                )
            };
            ConductivitySpec {
                tank_radius,
                tank,
                inclusions: vec![Inclusion { center: centers[0], radius, conductivity: inc }],
                label: class_label,
            }
        }
        Task::IsoVsAnisoInclusion => {
            let radius = RADIUS_CLASSES[rng.random_range(0..4)];
            let centers = place_inclusions(&mut rng, tank_radius, &[radius])?;
            let inc = if class_label == 1 {
                TensorSpec::IsoConst { lambda: INCLUSION_LAMBDA }
            } else {
                // determinant-matched scalar factor: the anisotropic tensor
                // has the same determinant as the isotropic inclusion, so
                // the two classes differ by pure anisotropy rather than by
                // overall conductivity magnitude
                let (a, b) = draw_diag_pair(&mut cohort);
                let mu = INCLUSION_LAMBDA / ((a as f64) * (b as f64)).sqrt();
                TensorSpec::DiagConst { mu, a, b }
            };
            ConductivitySpec {
                tank_radius,
                tank: iso_tank,
                inclusions: vec![Inclusion { center: centers[0], radius, conductivity: inc }],
                label: class_label,
            }
        }
        Task::DiagVsOffdiag => {
            let radius = RADIUS_CLASSES[rng.random_range(0..4)];
            let centers = place_inclusions(&mut rng, tank_radius, &[radius])?;
            let (tank, inc) = if class_label == 1 {
                let (a, b) = draw_diag_pair(&mut cohort);
                (
                    TensorSpec::DiagConst { mu: TANK_LAMBDA, a, b },
                    TensorSpec::DiagConst { mu: INCLUSION_LAMBDA, a, b },
                )
            } else {
                // rejection keeps the symmetric matrix positive definite
                let (a, b, c) = loop {
                    let a: u32 = cohort.random_range(6..=20);
                    let b: u32 = cohort.random_range(6..=20);
                    let c: u32 = cohort.random_range(1..=5);
                    if (a as f64) * (b as f64) > (c as f64) * (c as f64) {
                        break (a, b, c);
                    }
                };
                (
                    TensorSpec::SymConst { mu: TANK_LAMBDA, a, b, c },
                    TensorSpec::SymConst { mu: INCLUSION_LAMBDA, a, b, c },
                )
            };
            ConductivitySpec {
                tank_radius,
                tank,
                inclusions: vec![Inclusion { center: centers[0], radius, conductivity: inc }],
                label: class_label,
            }
        }
        Task::IsoVsSpatial => {
            let radius = RADIUS_CLASSES[rng.random_range(0..4)];
            let centers = place_inclusions(&mut rng, tank_radius, &[radius])?;
            let inc = if class_label == 1 {
                TensorSpec::IsoConst { lambda: INCLUSION_LAMBDA }
            } else {
                TensorSpec::SpatialDiag
            };
            ConductivitySpec {
                tank_radius,
                tank: iso_tank,
                inclusions: vec![Inclusion { center: centers[0], radius, conductivity: inc }],
                label: class_label,
            }
        }
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn isotropic_tank_evaluates_to_lambda_i() {
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let t = evaluate_tensor(&spec, Point2::new(0.1, 0.1)).unwrap();
        assert_eq!(t, Tensor2::isotropic(1.45));
    }

    #[test]
    fn inclusion_overrides_tank() {
        let mut spec = ConductivitySpec::homogeneous(0.28, 1.45);
        spec.inclusions.push(Inclusion {
            center: Point2::new(0.05, 0.0),
            radius: 0.02,
            conductivity: TensorSpec::IsoConst { lambda: 10.0 },
        });
        let inside = evaluate_tensor(&spec, Point2::new(0.05, 0.01)).unwrap();
        assert_eq!(inside, Tensor2::isotropic(10.0));
        let outside = evaluate_tensor(&spec, Point2::new(-0.05, 0.0)).unwrap();
        assert_eq!(outside, Tensor2::isotropic(1.45));
    }

    #[test]
    fn spatial_diag_evaluates_pointwise() {
        let t = TensorSpec::SpatialDiag.evaluate(Point2::new(0.1, 0.2));
        assert_relative_eq!(t.xx, 0.01);
        assert_relative_eq!(t.yy, 0.04);
        // clamp floor on the axes
        let t0 = TensorSpec::SpatialDiag.evaluate(Point2::new(0.0, 0.0));
        assert_eq!(t0.xx, SPATIAL_CLAMP);
        assert_eq!(t0.yy, SPATIAL_CLAMP);
    }

    #[test]
    fn points_outside_tank_rejected() {
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        assert!(evaluate_tensor(&spec, Point2::new(0.3, 0.0)).is_err());
    }

    #[test]
    fn ellipticity_bounds_for_constant_fields() {
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let pts = [Point2::new(0.0, 0.0), Point2::new(0.1, -0.1)];
        let (lo, hi) = verify_ellipticity(&spec, &pts).unwrap();
        assert_relative_eq!(lo, 1.45);
        assert_relative_eq!(hi, 1.45);

        let mut with_inc = spec.clone();
        with_inc.inclusions.push(Inclusion {
            center: Point2::new(0.0, 0.0),
            radius: 0.05,
            conductivity: TensorSpec::DiagConst { mu: 1.0, a: 2, b: 10 },
        });
        let pts = [Point2::new(0.0, 0.0), Point2::new(0.2, 0.0)];
        let (lo, hi) = verify_ellipticity(&with_inc, &pts).unwrap();
        assert_relative_eq!(lo, 1.45);
        assert_relative_eq!(hi, 10.0);
    }

    #[test]
    fn spatial_clamp_floors_min_eigenvalue() {
        let mut spec = ConductivitySpec::homogeneous(0.28, 1.45);
        spec.inclusions.push(Inclusion {
            center: Point2::new(0.0, 0.0),
            radius: 0.05,
            conductivity: TensorSpec::SpatialDiag,
        });
        // grid scan inside the inclusion
        let mut pts = Vec::new();
        for i in -5..=5 {
            for j in -5..=5 {
                let p = Point2::new(i as f64 * 0.009, j as f64 * 0.009);
                if p.norm() <= 0.05 {
                    pts.push(p);
                }
            }
        }
        let (lo, _) = verify_ellipticity(&spec, &pts).unwrap();
        assert!(lo >= SPATIAL_CLAMP);
    }

    #[test]
    fn presence_label_one_has_no_inclusions() {
        let spec = sample_scenario(Task::Presence, 1, 99).unwrap();
        assert!(spec.inclusions.is_empty());
        assert_eq!(spec.label, 1);
    }

    #[test]
    fn count_task_places_requested_inclusions() {
        let spec = sample_scenario(Task::CountSmall, 3, 5).unwrap();
        assert_eq!(spec.inclusions.len(), 3);
        for inc in &spec.inclusions {
            assert_relative_eq!(inc.radius, RADIUS_CLASSES[0]);
            assert!(inc.center.norm() + inc.radius + BOUNDARY_CLEARANCE <= 0.28 + 1e-12);
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = spec.inclusions[i].center.dist(&spec.inclusions[j].center);
                assert!(d >= spec.inclusions[i].radius + spec.inclusions[j].radius + SPACING_MARGIN - 1e-12);
            }
        }
    }

    #[test]
    fn offdiag_samples_are_positive_definite() {
        for seed in 0..50 {
            let spec = sample_scenario(Task::DiagVsOffdiag, 2, seed).unwrap();
            let t = spec.inclusions[0].conductivity.evaluate(Point2::new(0.0, 0.0));
            let det = t.xx * t.yy - t.xy * t.xy;
            assert!(det > 0.0 && t.xx + t.yy > 0.0, "seed {seed} gave det {det}");
        }
    }

    #[test]
    fn invalid_label_rejected() {
        assert!(sample_scenario(Task::Presence, 3, 0).is_err());
        assert!(sample_scenario(Task::Radii, 0, 0).is_err());
    }

    #[test]
    fn infeasible_placement_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // five giant inclusions cannot fit
        let r = 0.12;
        let err = place_inclusions(&mut rng, 0.28, &[r, r, r, r, r]);
        assert!(matches!(err, Err(EitError::PlacementInfeasible { .. })));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_scenario(Task::Radii, 2, 1234).unwrap();
        let b = sample_scenario(Task::Radii, 2, 1234).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = sample_scenario(Task::Radii, 2, 1235).unwrap();
        assert_ne!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    }

    #[test]
    fn sampled_scenarios_are_elliptic() {
        let probe: Vec<Point2> = (0..100)
            .map(|i| {
                let t = i as f64 / 100.0;
                Point2::new(0.27 * (t * 6.0).cos() * t, 0.27 * (t * 6.0).sin() * t)
            })
            .collect();
        for task in Task::ALL {
            for &label in &task.class_labels() {
                let spec = sample_scenario(task, label, 7).unwrap();
                let (lo, hi) = verify_ellipticity(&spec, &probe).unwrap();
                assert!(lo > 0.0 && hi.is_finite());
            }
        }
    }

    #[test]
    fn placement_covers_all_quadrants_uniformly() {
        // chi-square on quadrant counts; critical value for df=3 at p=0.01
        let mut counts = [0usize; 4];
        let n = 1200;
        for seed in 0..n {
            let spec = sample_scenario(Task::Radii, 1, seed as u64).unwrap();
            let c = spec.inclusions[0].center;
            let q = match (c.x >= 0.0, c.y >= 0.0) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            counts[q] += 1;
        }
        assert!(counts.iter().all(|&c| c > 0));
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 11.345, "chi2 = {chi2}, counts {counts:?}");
    }
}
