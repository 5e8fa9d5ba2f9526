//! Conforming triangular meshes of the disk tank and electrode geometry.
//!
//! Boundary nodes are placed equispaced in angle on the tank circle so that
//! electrode arcs receive equal node counts. Interior nodes come from a
//! hexagonal lattice (halved spacing inside optional refinement disks),
//! jittered by a seeded RNG, and the whole cloud is Delaunay-triangulated.

mod delaunay;
mod io;

pub use io::{read_mesh_text, write_mesh_text};

use crate::error::{EitError, Result};
use crate::geom::{circumradius, hash01, triangle_area, Point2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Default mesh pitch: 160 boundary nodes on the 0.28 m tank, ten per
/// electrode arc at E = 16.
pub const DEFAULT_TARGET_MAX_EDGE: f64 = 0.011;

/// Interior lattice spacing relative to the boundary pitch.
const INTERIOR_SPACING_FACTOR: f64 = 1.25;

/// Jitter amplitude for interior lattice points, relative to local spacing.
const JITTER_FRACTION: f64 = 0.12;

/// Angular jitter of boundary and annulus nodes, relative to the node
/// spacing. Below 0.5 so electrode arcs keep their exact node counts; the
/// seed dependence makes every sample see a fresh realization of the
/// discretization error, standing in for per-sample re-meshing.
const RING_JITTER_FRACTION: f64 = 0.3;

/// A disk region in which the mesh pitch is halved.
#[derive(Debug, Clone, Copy)]
pub struct RefineDisk {
    pub center: Point2,
    pub radius: f64,
}

/// Triangulated disk domain with boundary topology.
#[derive(Debug, Clone)]
pub struct TriMesh {
    /// vertex coordinates in meters
    pub vertices: Vec<Point2>,
    /// vertex-index triples, counterclockwise
    pub triangles: Vec<[usize; 3]>,
    /// ordered edge pairs tracing the boundary counterclockwise
    pub boundary_edges: Vec<(usize, usize)>,
    /// vertex indices on the boundary, counterclockwise
    pub boundary_nodes: Vec<usize>,
    /// tank radius in meters
    pub radius: f64,
}

impl TriMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> (Point2, Point2, Point2) {
        let [a, b, c] = self.triangles[t];
        (self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let (a, b, c) = self.triangle_points(t);
        triangle_area(a, b, c)
    }

    pub fn triangle_centroid(&self, t: usize) -> Point2 {
        let (a, b, c) = self.triangle_points(t);
        Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    pub fn max_circumradius(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let (a, b, c) = self.triangle_points(t);
                circumradius(a, b, c)
            })
            .fold(0.0, f64::max)
    }

    pub fn is_boundary_node(&self, v: usize) -> bool {
        self.boundary_nodes.binary_search(&v).is_ok()
            || self.boundary_nodes.contains(&v)
    }

    /// Check every structural invariant; returns the first violation found.
    pub fn validate(&self) -> Result<()> {
        for (t, _) in self.triangles.iter().enumerate() {
            let area = self.triangle_area(t);
            if area <= 0.0 {
                return Err(EitError::InvalidArgument(format!(
                    "triangle {t} has non-positive area {area:.3e}"
                )));
            }
        }
        let tol = 1e-9 * self.radius;
        for &v in &self.boundary_nodes {
            let r = self.vertices[v].norm();
            if (r - self.radius).abs() > tol {
                return Err(EitError::InvalidArgument(format!(
                    "boundary node {v} off the circle by {:.3e}",
                    (r - self.radius).abs()
                )));
            }
        }
        // edge sharing: boundary edges once, interior edges exactly twice
        let mut edge_count: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for &[a, b, c] in &self.triangles {
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let key = (u.min(v), u.max(v));
                *edge_count.entry(key).or_insert(0) += 1;
            }
        }
        let mut boundary_from_tris = Vec::new();
        for (&(u, v), &cnt) in &edge_count {
            match cnt {
                1 => boundary_from_tris.push((u, v)),
                2 => {}
                _ => {
                    return Err(EitError::InvalidArgument(format!(
                        "edge ({u},{v}) shared by {cnt} triangles"
                    )))
                }
            }
        }
        if boundary_from_tris.len() != self.boundary_edges.len() {
            return Err(EitError::InvalidArgument(format!(
                "boundary edge count mismatch: {} in topology vs {} recorded",
                boundary_from_tris.len(),
                self.boundary_edges.len()
            )));
        }
        // the recorded boundary loop must be closed and consistent
        let m = self.boundary_edges.len();
        for k in 0..m {
            let (_, b) = self.boundary_edges[k];
            let (a_next, _) = self.boundary_edges[(k + 1) % m];
            if b != a_next {
                return Err(EitError::InvalidArgument(
                    "boundary edges do not form a single closed loop".into(),
                ));
            }
            let key = {
                let (u, v) = self.boundary_edges[k];
                (u.min(v), u.max(v))
            };
            if edge_count.get(&key) != Some(&1) {
                return Err(EitError::InvalidArgument(format!(
                    "recorded boundary edge {:?} is not a topological boundary edge",
                    self.boundary_edges[k]
                )));
            }
        }
        Ok(())
    }
}

/// Angular partition of the boundary into equal electrode arcs.
#[derive(Debug, Clone)]
pub struct ElectrodeLayout {
    pub electrode_count: usize,
    /// center angle of electrode l (1-based: centers[l-1] = 2*pi*l/E)
    pub centers: Vec<f64>,
    /// common angular width 2*pi/E
    pub arc_width: f64,
}

impl ElectrodeLayout {
    /// Center angle of electrode `l` (1-based).
    pub fn center(&self, l: usize) -> f64 {
        self.centers[l - 1]
    }

    /// Electrode (1-based) whose half-open arc contains the angle.
    pub fn electrode_of_angle(&self, theta: f64) -> usize {
        let e = self.electrode_count as f64;
        let idx = ((theta * e / TAU) + 0.5).floor() as i64;
        let idx = idx.rem_euclid(self.electrode_count as i64) as usize;
        if idx == 0 {
            self.electrode_count
        } else {
            idx
        }
    }

    /// Exact arc length on a circle of the given radius.
    pub fn arc_length(&self, radius: f64) -> f64 {
        TAU * radius / self.electrode_count as f64
    }
}

/// Build the equal-arc electrode layout. E must be even and at least 2 so
/// every electrode has an antipodal partner for opposite injection.
pub fn electrode_layout(electrode_count: usize) -> Result<ElectrodeLayout> {
    if electrode_count < 2 || electrode_count % 2 != 0 {
        return Err(EitError::InvalidArgument(format!(
            "electrode count must be even and >= 2, got {electrode_count}"
        )));
    }
    let e = electrode_count as f64;
    let centers = (1..=electrode_count).map(|l| TAU * l as f64 / e).collect();
    Ok(ElectrodeLayout { electrode_count, centers, arc_width: TAU / e })
}

/// Boundary nodes whose angle lies in electrode arc `l` (1-based), ordered
/// counterclockwise from the arc start.
pub fn boundary_arc_nodes(mesh: &TriMesh, layout: &ElectrodeLayout, l: usize) -> Result<Vec<usize>> {
    if l < 1 || l > layout.electrode_count {
        return Err(EitError::ElectrodeOutOfRange {
            index: l,
            electrode_count: layout.electrode_count,
        });
    }
    let center = layout.center(l);
    let half = layout.arc_width / 2.0;
    let mut picked: Vec<(f64, usize)> = Vec::new();
    for &v in &mesh.boundary_nodes {
        let theta = mesh.vertices[v].angle();
        if layout.electrode_of_angle(theta) == l {
            // offset from arc start, in [0, arc_width)
            let mut d = theta - (center - half);
            while d < 0.0 {
                d += TAU;
            }
            while d >= TAU {
                d -= TAU;
            }
            picked.push((d, v));
        }
    }
    picked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(picked.into_iter().map(|(_, v)| v).collect())
}

/// Generate a conforming Delaunay mesh of the disk of the given radius.
/// Deterministic for fixed inputs; the seed drives node jitter.
pub fn generate_disk_mesh(radius: f64, target_max_edge: f64, seed: u64) -> Result<TriMesh> {
    generate_disk_mesh_opts(radius, target_max_edge, seed, &[], true)
}

/// Same as [`generate_disk_mesh`] but with the lattice pitch halved inside a
/// band around each refinement disk (twice the disk radius from its center),
/// used to control the conductivity-interface error near inclusions.
pub fn generate_disk_mesh_refined(
    radius: f64,
    target_max_edge: f64,
    seed: u64,
    refine: &[RefineDisk],
) -> Result<TriMesh> {
    generate_disk_mesh_opts(radius, target_max_edge, seed, refine, true)
}

/// Full-control variant: `structured_annulus` switches the symmetric
/// boundary strip that the superconvergent flux recovery relies on; without
/// it the jittered lattice runs all the way to the boundary ring.
pub fn generate_disk_mesh_opts(
    radius: f64,
    target_max_edge: f64,
    seed: u64,
    refine: &[RefineDisk],
    structured_annulus: bool,
) -> Result<TriMesh> {
    if !(radius > 0.0) {
        return Err(EitError::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    if !(target_max_edge > 0.0 && target_max_edge <= radius) {
        return Err(EitError::InvalidArgument(format!(
            "target_max_edge must lie in (0, radius], got {target_max_edge}"
        )));
    }

    // boundary ring, equispaced in angle and phase-shifted half a spacing so
    // nodes never coincide with electrode arc edges; the sub-tolerance radial
    // jitter breaks exact cocircularity in the incircle predicate. Angular
    // jitter stays under half a spacing, so arc node counts are unchanged.
    let n_boundary = ((TAU * radius / target_max_edge).ceil() as usize).max(6);
    let arc_pitch = TAU * radius / n_boundary as f64;
    let micro = |key: u64| (hash01(0x6274_7279 ^ key) - 0.5) * 2e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point2> = Vec::new();
    for i in 0..n_boundary {
        let wobble = (rng.random::<f64>() - 0.5) * 2.0 * RING_JITTER_FRACTION;
        let theta = TAU * (i as f64 + 0.5 + wobble) / n_boundary as f64;
        let r = radius * (1.0 + micro(i as u64));
        points.push(Point2::new(r * theta.cos(), r * theta.sin()));
    }

    // structured hexagonal annulus under the boundary: concentric rings with
    // alternating half-phase keep node patches symmetric, which the
    // variational flux recovery needs for its accuracy
    let ring_step = arc_pitch * 3f64.sqrt() / 2.0;
    let n_rings = if structured_annulus && radius - 3.0 * ring_step > 2.0 * arc_pitch {
        3
    } else {
        0
    };
    for k in 1..=n_rings {
        let r_k = radius - k as f64 * ring_step;
        let phase = if k % 2 == 1 { 0.0 } else { 0.5 };
        for i in 0..n_boundary {
            let wobble = (rng.random::<f64>() - 0.5) * 2.0 * RING_JITTER_FRACTION;
            let theta = TAU * (i as f64 + phase + wobble) / n_boundary as f64;
            let r = r_k * (1.0 + micro((k as u64) << 32 | i as u64));
            points.push(Point2::new(r * theta.cos(), r * theta.sin()));
        }
    }

    // jittered interior lattice: coarse hexagonal everywhere, fine inside
    // refinement bands kept clear of the boundary strip. The refined pitch
    // also scales with the inclusion radius so even the smallest inclusion
    // is resolved by a few dozen elements.
    let spacing = INTERIOR_SPACING_FACTOR * target_max_edge;
    let clearance = if n_rings > 0 {
        radius - n_rings as f64 * ring_step - 0.6 * spacing
    } else {
        radius - 0.55 * target_max_edge.min(spacing)
    };
    let band_limit = clearance - 0.5 * spacing;
    let in_refined = |p: Point2| -> bool {
        p.norm() < band_limit
            && refine.iter().any(|d| p.dist(&d.center) <= 2.0 * d.radius)
    };
    let mut candidates: Vec<(Point2, f64)> = Vec::new();
    // global coarse lattice, skipping refinement zones
    {
        let s = spacing;
        let row_h = s * 3f64.sqrt() / 2.0;
        let j_max = (radius / row_h).ceil() as i64;
        let k_max = (radius / s).ceil() as i64 + 1;
        for j in -j_max..=j_max {
            let y = j as f64 * row_h;
            let x_off = if j.rem_euclid(2) == 1 { 0.5 * s } else { 0.0 };
            for k in -k_max..=k_max {
                let x = k as f64 * s + x_off;
                let base = Point2::new(x, y);
                // jitter is drawn for every lattice site so the stream is
                // independent of which sites are kept
                let jx = (rng.random::<f64>() - 0.5) * 2.0 * JITTER_FRACTION * s;
                let jy = (rng.random::<f64>() - 0.5) * 2.0 * JITTER_FRACTION * s;
                let p = Point2::new(base.x + jx, base.y + jy);
                if p.norm() > clearance || in_refined(base) {
                    continue;
                }
                candidates.push((p, s));
            }
        }
    }
    // per-zone fine lattices on the same global grid alignment
    for disk in refine {
        let s = (spacing / 2.0).min(0.6 * disk.radius).max(1e-4);
        let row_h = s * 3f64.sqrt() / 2.0;
        let reach = 2.0 * disk.radius + s;
        let j_lo = ((disk.center.y - reach) / row_h).floor() as i64;
        let j_hi = ((disk.center.y + reach) / row_h).ceil() as i64;
        for j in j_lo..=j_hi {
            let y = j as f64 * row_h;
            let x_off = if j.rem_euclid(2) == 1 { 0.5 * s } else { 0.0 };
            let k_lo = ((disk.center.x - reach - x_off) / s).floor() as i64;
            let k_hi = ((disk.center.x + reach - x_off) / s).ceil() as i64;
            for k in k_lo..=k_hi {
                let x = k as f64 * s + x_off;
                let base = Point2::new(x, y);
                let jx = (rng.random::<f64>() - 0.5) * 2.0 * JITTER_FRACTION * s;
                let jy = (rng.random::<f64>() - 0.5) * 2.0 * JITTER_FRACTION * s;
                let p = Point2::new(base.x + jx, base.y + jy);
                if p.norm() > clearance
                    || base.norm() >= band_limit
                    || base.dist(&disk.center) > 2.0 * disk.radius
                {
                    continue;
                }
                candidates.push((p, s));
            }
        }
    }

    // greedy minimum-distance filter over a bucket grid; ring nodes are
    // pre-seeded so lattice points keep their distance from the annulus
    let cell = spacing / 2.0;
    let mut kept: Vec<(Point2, f64)> = Vec::new();
    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    let key = |p: Point2| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    for &p in &points {
        kept.push((p, arc_pitch));
        grid.entry(key(p)).or_default().push(kept.len() - 1);
    }
    for (p, s) in candidates {
        let (ci, cj) = key(p);
        let mut ok = true;
        'scan: for di in -2..=2i64 {
            for dj in -2..=2i64 {
                if let Some(bucket) = grid.get(&(ci + di, cj + dj)) {
                    for &q in bucket {
                        let (q_pt, q_s): &(Point2, f64) = &kept[q];
                        if p.dist(q_pt) < 0.62 * s.min(*q_s) {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        if ok {
            kept.push((p, s));
            grid.entry((ci, cj)).or_default().push(kept.len() - 1);
            points.push(p);
        }
    }

    let triangles = delaunay::triangulate(&points, radius);
    if triangles.is_empty() {
        return Err(EitError::MeshTooCoarse("triangulation produced no triangles".into()));
    }

    let mesh = assemble_mesh(points, triangles, radius, n_boundary)?;
    mesh.validate()?;
    Ok(mesh)
}

/// Order boundary edges into the counterclockwise loop and freeze the mesh.
fn assemble_mesh(
    vertices: Vec<Point2>,
    triangles: Vec<[usize; 3]>,
    radius: f64,
    n_boundary: usize,
) -> Result<TriMesh> {
    let mut edge_count: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    for &[a, b, c] in &triangles {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let key = (u.min(v), u.max(v));
            *edge_count.entry(key).or_insert(0) += 1;
        }
    }
    // boundary edges keep triangle orientation: interior on the left
    let mut next: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for &[a, b, c] in &triangles {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let key = (u.min(v), u.max(v));
            if edge_count[&key] == 1 {
                next.insert(u, v);
            }
        }
    }
    if next.len() != n_boundary {
        return Err(EitError::MeshTooCoarse(format!(
            "expected {n_boundary} boundary edges, found {}",
            next.len()
        )));
    }
    let start = *next.keys().min().expect("boundary exists");
    let mut boundary_edges = Vec::with_capacity(next.len());
    let mut boundary_nodes = Vec::with_capacity(next.len());
    let mut cur = start;
    loop {
        let nxt = *next.get(&cur).ok_or_else(|| {
            EitError::InvalidArgument("boundary loop is broken".into())
        })?;
        boundary_edges.push((cur, nxt));
        boundary_nodes.push(cur);
        cur = nxt;
        if cur == start {
            break;
        }
        if boundary_edges.len() > next.len() {
            return Err(EitError::InvalidArgument(
                "boundary traversal did not close".into(),
            ));
        }
    }
    Ok(TriMesh { vertices, triangles, boundary_edges, boundary_nodes, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_arguments() {
        assert!(generate_disk_mesh(-1.0, 0.01, 0).is_err());
        assert!(generate_disk_mesh(0.28, 0.0, 0).is_err());
        assert!(generate_disk_mesh(0.28, 0.5, 0).is_err());
    }

    #[test]
    fn coarse_mesh_is_valid_and_contained() {
        let mesh = generate_disk_mesh(0.28, 0.28, 3).unwrap();
        mesh.validate().unwrap();
        for v in &mesh.vertices {
            assert!(v.norm() <= 0.28 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn default_mesh_area_matches_disk() {
        let mesh = generate_disk_mesh(0.28, DEFAULT_TARGET_MAX_EDGE, 1).unwrap();
        let total: f64 = (0..mesh.triangle_count()).map(|t| mesh.triangle_area(t)).sum();
        let disk = PI * 0.28 * 0.28;
        assert!(
            (total - disk).abs() / disk < 0.005,
            "mesh area {total} vs disk {disk}"
        );
    }

    #[test]
    fn default_mesh_has_ten_boundary_nodes_per_arc() {
        let mesh = generate_disk_mesh(0.28, DEFAULT_TARGET_MAX_EDGE, 1).unwrap();
        let layout = electrode_layout(16).unwrap();
        for l in 1..=16 {
            let nodes = boundary_arc_nodes(&mesh, &layout, l).unwrap();
            assert!(nodes.len() >= 10, "arc {l} has {} nodes", nodes.len());
        }
    }

    #[test]
    fn halving_edge_roughly_doubles_boundary_nodes() {
        let coarse = generate_disk_mesh(0.28, 0.02, 1).unwrap();
        let fine = generate_disk_mesh(0.28, 0.01, 1).unwrap();
        let ratio = fine.boundary_nodes.len() as f64 / coarse.boundary_nodes.len() as f64;
        assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn refinement_never_increases_max_circumradius() {
        let coarse = generate_disk_mesh(0.28, 0.024, 7).unwrap();
        let fine = generate_disk_mesh(0.28, 0.012, 7).unwrap();
        assert!(fine.max_circumradius() <= coarse.max_circumradius());
    }

    #[test]
    fn refined_mesh_is_denser_near_inclusion() {
        let refine = [RefineDisk { center: Point2::new(0.08, 0.0), radius: 0.03 }];
        let plain = generate_disk_mesh(0.28, 0.015, 5).unwrap();
        let refined = generate_disk_mesh_refined(0.28, 0.015, 5, &refine).unwrap();
        assert!(refined.vertex_count() > plain.vertex_count());
        refined.validate().unwrap();
    }

    #[test]
    fn electrode_layout_invariants() {
        assert!(electrode_layout(3).is_err());
        assert!(electrode_layout(1).is_err());
        let layout = electrode_layout(16).unwrap();
        assert!((layout.center(4) - PI / 2.0).abs() < 1e-12);
        assert!((layout.arc_width - TAU / 16.0).abs() < 1e-15);
        let total: f64 = layout.arc_width * 16.0;
        assert!((total - TAU).abs() < 1e-12);
        let two = electrode_layout(2).unwrap();
        assert!((two.arc_width - PI).abs() < 1e-15);
    }

    #[test]
    fn arc_nodes_partition_boundary() {
        let mesh = generate_disk_mesh(0.28, DEFAULT_TARGET_MAX_EDGE, 2).unwrap();
        let layout = electrode_layout(16).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut total = 0;
        for l in 1..=16 {
            let nodes = boundary_arc_nodes(&mesh, &layout, l).unwrap();
            total += nodes.len();
            for v in nodes {
                assert!(seen.insert(v), "node {v} in two arcs");
            }
        }
        assert_eq!(total, mesh.boundary_nodes.len());
        assert!(boundary_arc_nodes(&mesh, &layout, 0).is_err());
        assert!(boundary_arc_nodes(&mesh, &layout, 17).is_err());
    }

    #[test]
    fn mesh_generation_is_deterministic() {
        let a = generate_disk_mesh(0.28, 0.02, 42).unwrap();
        let b = generate_disk_mesh(0.28, 0.02, 42).unwrap();
        assert_eq!(a.triangles, b.triangles);
        assert_eq!(a.vertices.len(), b.vertices.len());
        for (u, v) in a.vertices.iter().zip(&b.vertices) {
            assert_eq!(u.x.to_bits(), v.x.to_bits());
            assert_eq!(u.y.to_bits(), v.y.to_bits());
        }
        let c = generate_disk_mesh(0.28, 0.02, 43).unwrap();
        assert_ne!(
            a.vertices.iter().map(|p| p.x.to_bits()).collect::<Vec<_>>(),
            c.vertices.iter().map(|p| p.x.to_bits()).collect::<Vec<_>>()
        );
    }
}
