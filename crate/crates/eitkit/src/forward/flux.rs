//! Boundary current-density recovery and electrode arc averaging.

use crate::error::{EitError, Result};
use crate::forward::fem::element_stiffness;
use crate::mesh::{boundary_arc_nodes, ElectrodeLayout, TriMesh};
use crate::phantom::{effective_tensor, ConductivitySpec};

/// How the conormal derivative at boundary nodes is recovered from the
/// P1 solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxMethod {
    /// Weak-form recovery: the stiffness residual at a boundary node divided
    /// by the lumped boundary measure of its hat function. Superconvergent
    /// (O(h^2) on smooth data) and exactly conservative.
    Variational,
    /// Plain average of the constant per-element sigma grad(u) over the
    /// elements sharing the node, dotted with the exact circle normal.
    /// First-order accurate; kept as a cross-check.
    ElementAverage,
}

/// Default recovery used by the D-N pipeline. The element-average method
/// carries an O(h) one-sided bias that misses the 2-3% oracle window at the
/// default mesh pitch, so the weak form is the default.
pub const DEFAULT_FLUX_METHOD: FluxMethod = FluxMethod::Variational;

/// Recover the boundary current density J = sigma grad(u) . nu at every
/// boundary node, ordered like `mesh.boundary_nodes`.
pub fn boundary_flux(
    mesh: &TriMesh,
    spec: &ConductivitySpec,
    u: &[f64],
    method: FluxMethod,
) -> Result<Vec<f64>> {
    if u.len() != mesh.vertex_count() {
        return Err(EitError::ShapeMismatch(format!(
            "solution has {} entries for {} nodes",
            u.len(),
            mesh.vertex_count()
        )));
    }
    match method {
        FluxMethod::Variational => variational_flux(mesh, spec, u),
        FluxMethod::ElementAverage => element_average_flux(mesh, spec, u),
    }
}

fn variational_flux(mesh: &TriMesh, spec: &ConductivitySpec, u: &[f64]) -> Result<Vec<f64>> {
    let n = mesh.vertex_count();
    let mut on_boundary = vec![false; n];
    for &v in &mesh.boundary_nodes {
        on_boundary[v] = true;
    }
    // stiffness residual restricted to boundary rows
    let mut residual = vec![0.0f64; n];
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        if !(on_boundary[a] || on_boundary[b] || on_boundary[c]) {
            continue;
        }
        let (pa, pb, pc) = mesh.triangle_points(t);
        let sigma = effective_tensor(spec, pa, pb, pc)?;
        let k = element_stiffness(pa, pb, pc, &sigma)?;
        let idx = [a, b, c];
        for i in 0..3 {
            if on_boundary[idx[i]] {
                residual[idx[i]] += k[i][0] * u[a] + k[i][1] * u[b] + k[i][2] * u[c];
            }
        }
    }
    // lumped boundary measure: half the two adjacent edge chords per node
    let m = mesh.boundary_nodes.len();
    let mut weight = vec![0.0f64; n];
    for k in 0..m {
        let (a, b) = mesh.boundary_edges[k];
        let len = mesh.vertices[a].dist(&mesh.vertices[b]);
        weight[a] += 0.5 * len;
        weight[b] += 0.5 * len;
    }
    Ok(mesh.boundary_nodes.iter().map(|&v| residual[v] / weight[v]).collect())
}

fn element_average_flux(mesh: &TriMesh, spec: &ConductivitySpec, u: &[f64]) -> Result<Vec<f64>> {
    let n = mesh.vertex_count();
    let mut on_boundary = vec![false; n];
    for &v in &mesh.boundary_nodes {
        on_boundary[v] = true;
    }
    let mut sum = vec![(0.0f64, 0.0f64); n];
    let mut count = vec![0usize; n];
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        if !(on_boundary[a] || on_boundary[b] || on_boundary[c]) {
            continue;
        }
        let (pa, pb, pc) = mesh.triangle_points(t);
        let area2 = (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x);
        // constant P1 gradient on the element
        let gx = ((pb.y - pc.y) * u[a] + (pc.y - pa.y) * u[b] + (pa.y - pb.y) * u[c]) / area2;
        let gy = ((pc.x - pb.x) * u[a] + (pa.x - pc.x) * u[b] + (pb.x - pa.x) * u[c]) / area2;
        let sigma = effective_tensor(spec, pa, pb, pc)?;
        let f = sigma.apply((gx, gy));
        for &v in &[a, b, c] {
            if on_boundary[v] {
                sum[v].0 += f.0;
                sum[v].1 += f.1;
                count[v] += 1;
            }
        }
    }
    Ok(mesh
        .boundary_nodes
        .iter()
        .map(|&v| {
            let p = mesh.vertices[v];
            let r = p.norm();
            let nu = (p.x / r, p.y / r);
            let k = count[v] as f64;
            (sum[v].0 / k) * nu.0 + (sum[v].1 / k) * nu.1
        })
        .collect())
}

/// Average the nodal current density over each electrode arc: trapezoidal
/// rule over the piecewise-linear flux along the boundary polyline, with the
/// two straddling segments cut exactly at the arc edges so the full arc
/// window is covered. `j` is ordered like `mesh.boundary_nodes`. Arcs with
/// fewer than two nodes reject the mesh.
pub fn electrode_average_flux(
    j: &[f64],
    mesh: &TriMesh,
    layout: &ElectrodeLayout,
) -> Result<Vec<f64>> {
    if j.len() != mesh.boundary_nodes.len() {
        return Err(EitError::ShapeMismatch(format!(
            "{} flux values for {} boundary nodes",
            j.len(),
            mesh.boundary_nodes.len()
        )));
    }
    for l in 1..=layout.electrode_count {
        let nodes = boundary_arc_nodes(mesh, layout, l)?;
        if nodes.len() < 2 {
            return Err(EitError::MeshTooCoarse(format!(
                "electrode arc {l} has {} boundary nodes; need at least 2",
                nodes.len()
            )));
        }
    }
    let tau = std::f64::consts::TAU;
    let nb = mesh.boundary_nodes.len();
    let angles: Vec<f64> = mesh.boundary_nodes.iter().map(|&v| mesh.vertices[v].angle()).collect();
    let half = layout.arc_width / 2.0;
    let mut out = Vec::with_capacity(layout.electrode_count);
    for l in 1..=layout.electrode_count {
        let start = layout.center(l) - half;
        let mut integral = 0.0;
        let mut length = 0.0;
        for i in 0..nb {
            let i2 = (i + 1) % nb;
            // segment angular span relative to the arc start, in [0, tau)
            let a0 = (angles[i] - start).rem_euclid(tau);
            let span = (angles[i2] - angles[i]).rem_euclid(tau);
            if span == 0.0 {
                continue;
            }
            let chord =
                mesh.vertices[mesh.boundary_nodes[i]].dist(&mesh.vertices[mesh.boundary_nodes[i2]]);
            // a segment that crosses the arc start appears in the shifted copy
            for a in [a0, a0 - tau] {
                let b = a + span;
                let t0 = a.max(0.0);
                let t1 = b.min(layout.arc_width);
                if t1 <= t0 {
                    continue;
                }
                let frac0 = (t0 - a) / span;
                let frac1 = (t1 - a) / span;
                let j0 = j[i] + (j[i2] - j[i]) * frac0;
                let j1 = j[i] + (j[i2] - j[i]) * frac1;
                let seg = chord * (frac1 - frac0);
                integral += 0.5 * (j0 + j1) * seg;
                length += seg;
            }
        }
        out.push(integral / length);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::fem::assemble_stiffness;
    use crate::mesh::{electrode_layout, generate_disk_mesh, DEFAULT_TARGET_MAX_EDGE};
    use crate::phantom::ConductivitySpec;

    fn solve_with_boundary(
        mesh: &TriMesh,
        spec: &ConductivitySpec,
        f: impl Fn(f64) -> f64,
    ) -> Vec<f64> {
        let sys = assemble_stiffness(mesh, spec).unwrap();
        let g: Vec<f64> =
            mesh.boundary_nodes.iter().map(|&v| f(mesh.vertices[v].angle())).collect();
        sys.solve_dirichlet(&g).unwrap()
    }

    #[test]
    fn constant_solution_has_zero_flux() {
        let mesh = generate_disk_mesh(0.28, 0.04, 1).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let u = vec![1.0; mesh.vertex_count()];
        for method in [FluxMethod::Variational, FluxMethod::ElementAverage] {
            let j = boundary_flux(&mesh, &spec, &u, method).unwrap();
            assert!(j.iter().all(|v| v.abs() < 1e-9), "{method:?}");
        }
    }

    #[test]
    fn flux_oracle_cosine_modes() {
        // J = gamma n / R cos(n theta) for boundary data cos(n theta);
        // electrode averages carry the arc-average factor sinc(n pi / E)
        let gamma = 1.45;
        let r = 0.28;
        let mesh = generate_disk_mesh(r, DEFAULT_TARGET_MAX_EDGE, 2).unwrap();
        let layout = electrode_layout(16).unwrap();
        let spec = ConductivitySpec::homogeneous(r, gamma);
        for n in [1usize, 3, 7] {
            let u = solve_with_boundary(&mesh, &spec, |t| (n as f64 * t).cos());
            let j = boundary_flux(&mesh, &spec, &u, FluxMethod::Variational).unwrap();
            let avg = electrode_average_flux(&j, &mesh, &layout).unwrap();
            let x = n as f64 * std::f64::consts::PI / 16.0;
            let sinc = x.sin() / x;
            let mut worst = 0.0f64;
            for (l, &a) in avg.iter().enumerate() {
                let theta_l = layout.center(l + 1);
                let exact = gamma * n as f64 / r * (n as f64 * theta_l).cos() * sinc;
                let scale = gamma * n as f64 / r * sinc;
                worst = worst.max((a - exact).abs() / scale);
            }
            assert!(worst <= 0.02, "n={n}: relative error {worst}");
        }
    }

    #[test]
    fn flux_scales_with_conductivity() {
        let mesh = generate_disk_mesh(0.28, 0.02, 3).unwrap();
        let s1 = ConductivitySpec::homogeneous(0.28, 1.0);
        let s2 = ConductivitySpec::homogeneous(0.28, 2.0);
        let u1 = solve_with_boundary(&mesh, &s1, |t| t.cos());
        let u2 = solve_with_boundary(&mesh, &s2, |t| t.cos());
        let j1 = boundary_flux(&mesh, &s1, &u1, FluxMethod::Variational).unwrap();
        let j2 = boundary_flux(&mesh, &s2, &u2, FluxMethod::Variational).unwrap();
        for (a, b) in j1.iter().zip(&j2) {
            assert!((2.0 * a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn total_flux_is_conserved() {
        let mesh = generate_disk_mesh(0.28, DEFAULT_TARGET_MAX_EDGE, 4).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let u = solve_with_boundary(&mesh, &spec, |t| (2.0 * t).cos() + 0.3 * (5.0 * t).sin());
        let j = boundary_flux(&mesh, &spec, &u, FluxMethod::Variational).unwrap();
        // closed trapezoidal integral over the boundary polygon
        let m = mesh.boundary_nodes.len();
        let mut net = 0.0;
        let mut total = 0.0;
        for k in 0..m {
            let (a, b) = mesh.boundary_edges[k];
            let ia = mesh.boundary_nodes.iter().position(|&v| v == a).unwrap();
            let ib = mesh.boundary_nodes.iter().position(|&v| v == b).unwrap();
            let chord = mesh.vertices[a].dist(&mesh.vertices[b]);
            net += 0.5 * (j[ia] + j[ib]) * chord;
            total += 0.5 * (j[ia].abs() + j[ib].abs()) * chord;
        }
        assert!(net.abs() / total <= 0.02, "net {net} vs total {total}");
    }

    #[test]
    fn electrode_average_of_constant_is_exact() {
        let mesh = generate_disk_mesh(0.28, DEFAULT_TARGET_MAX_EDGE, 5).unwrap();
        let layout = electrode_layout(16).unwrap();
        let j = vec![3.25; mesh.boundary_nodes.len()];
        let avg = electrode_average_flux(&j, &mesh, &layout).unwrap();
        for a in avg {
            assert!((a - 3.25).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_flux_is_antisymmetric_under_reflection() {
        let mesh = generate_disk_mesh(0.28, DEFAULT_TARGET_MAX_EDGE, 6).unwrap();
        let layout = electrode_layout(16).unwrap();
        // J odd in y: use J(theta) = sin(theta) directly
        let j: Vec<f64> =
            mesh.boundary_nodes.iter().map(|&v| mesh.vertices[v].angle().sin()).collect();
        let avg = electrode_average_flux(&j, &mesh, &layout).unwrap();
        // reflection maps electrode l to 16 - l; both average sin with
        // opposite signs
        for l in 1..16 {
            let a = avg[l - 1];
            let b = avg[16 - l - 1];
            assert!((a + b).abs() < 1e-3, "l={l}: {a} vs {b}");
        }
    }

    #[test]
    fn too_coarse_arc_is_rejected() {
        let mesh = generate_disk_mesh(0.28, 0.28, 7).unwrap();
        let layout = electrode_layout(16).unwrap();
        let j = vec![0.0; mesh.boundary_nodes.len()];
        assert!(matches!(
            electrode_average_flux(&j, &mesh, &layout),
            Err(EitError::MeshTooCoarse(_))
        ));
    }
}
