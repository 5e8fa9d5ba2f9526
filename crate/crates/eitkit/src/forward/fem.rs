//! P1 finite-element assembly and Dirichlet solve on the disk mesh.
//!
//! The conductivity tensor is evaluated once per element at the centroid;
//! meshes do not conform to inclusion boundaries, so the interface error is
//! O(h) and controlled by local refinement near inclusions.

use crate::error::{EitError, Result};
use crate::geom::Point2;
use crate::linalg::{CsrMatrix, SkylineCholesky};
use crate::mesh::TriMesh;
use crate::phantom::{effective_tensor, ConductivitySpec, Tensor2};

/// Minimum admissible element area in m^2.
pub const DEGENERATE_AREA: f64 = 1e-14;

/// Assembled stiffness with the reduced interior factorization.
pub struct FemSystem {
    /// full stiffness over all nodes, rows summing to zero
    pub stiffness: CsrMatrix,
    /// Dirichlet node set, counterclockwise boundary order
    pub boundary_nodes: Vec<usize>,
    /// interior node ids in ascending order
    interior: Vec<usize>,
    /// node id -> position in `interior` (usize::MAX for boundary nodes)
    interior_pos: Vec<usize>,
    factor: SkylineCholesky,
}

/// Element stiffness of a P1 triangle for a constant tensor:
/// `k[i][j] = area * grad(phi_i) . sigma grad(phi_j)`.
pub fn element_stiffness(a: Point2, b: Point2, c: Point2, sigma: &Tensor2) -> Result<[[f64; 3]; 3]> {
    let area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let area = 0.5 * area2;
    if area.abs() < DEGENERATE_AREA {
        return Err(EitError::DegenerateTriangle { element: usize::MAX, area });
    }
    // grad(phi_i) = rot90(edge opposite i) / (2 area)
    let grads = [
        ((b.y - c.y) / area2, (c.x - b.x) / area2),
        ((c.y - a.y) / area2, (a.x - c.x) / area2),
        ((a.y - b.y) / area2, (b.x - a.x) / area2),
    ];
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        let sg = sigma.apply(grads[i]);
        for j in 0..3 {
            k[i][j] = area * (sg.0 * grads[j].0 + sg.1 * grads[j].1);
        }
    }
    Ok(k)
}

/// Assemble the P1 stiffness matrix for the scenario and factor the reduced
/// interior block. The reduced block must be SPD or assembly fails.
pub fn assemble_stiffness(mesh: &TriMesh, spec: &ConductivitySpec) -> Result<FemSystem> {
    let n = mesh.vertex_count();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(9 * mesh.triangle_count());
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        let (pa, pb, pc) = mesh.triangle_points(t);
        let sigma = effective_tensor(spec, pa, pb, pc)?;
        let k = element_stiffness(pa, pb, pc, &sigma)
            .map_err(|e| match e {
                EitError::DegenerateTriangle { area, .. } => {
                    EitError::DegenerateTriangle { element: t, area }
                }
                other => other,
            })?;
        let idx = [a, b, c];
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((idx[i], idx[j], k[i][j]));
            }
        }
    }
    let stiffness = CsrMatrix::from_triplets(n, &triplets);

    let mut is_boundary = vec![false; n];
    for &v in &mesh.boundary_nodes {
        is_boundary[v] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !is_boundary[v]).collect();
    let mut interior_pos = vec![usize::MAX; n];
    for (pos, &v) in interior.iter().enumerate() {
        interior_pos[v] = pos;
    }

    // reduced interior block
    let mut reduced: Vec<(usize, usize, f64)> = Vec::new();
    for (pos, &v) in interior.iter().enumerate() {
        for k in stiffness.row_ptr[v]..stiffness.row_ptr[v + 1] {
            let c = stiffness.col_idx[k];
            if interior_pos[c] != usize::MAX {
                reduced.push((pos, interior_pos[c], stiffness.values[k]));
            }
        }
    }
    let reduced = CsrMatrix::from_triplets(interior.len(), &reduced);
    let factor = SkylineCholesky::factor(&reduced)?;

    Ok(FemSystem {
        stiffness,
        boundary_nodes: mesh.boundary_nodes.clone(),
        interior,
        interior_pos,
        factor,
    })
}

impl FemSystem {
    pub fn node_count(&self) -> usize {
        self.stiffness.n
    }

    pub fn interior_count(&self) -> usize {
        self.interior.len()
    }

    /// Solve the Dirichlet problem for the given boundary voltages (ordered
    /// as `boundary_nodes`) and return the full nodal solution.
    pub fn solve_dirichlet(&self, boundary_values: &[f64]) -> Result<Vec<f64>> {
        if boundary_values.len() != self.boundary_nodes.len() {
            return Err(EitError::ShapeMismatch(format!(
                "{} boundary values for {} boundary nodes",
                boundary_values.len(),
                self.boundary_nodes.len()
            )));
        }
        if boundary_values.iter().any(|v| !v.is_finite()) {
            return Err(EitError::InvalidArgument("non-finite boundary value".into()));
        }
        let n = self.node_count();
        let mut u = vec![0.0f64; n];
        for (&v, &g) in self.boundary_nodes.iter().zip(boundary_values) {
            u[v] = g;
        }
        // rhs_i = -sum_b K_ib g_b over boundary columns b
        let mut rhs = vec![0.0f64; self.interior.len()];
        for (pos, &v) in self.interior.iter().enumerate() {
            let mut acc = 0.0;
            for k in self.stiffness.row_ptr[v]..self.stiffness.row_ptr[v + 1] {
                let c = self.stiffness.col_idx[k];
                if self.interior_pos[c] == usize::MAX {
                    acc -= self.stiffness.values[k] * u[c];
                }
            }
            rhs[pos] = acc;
        }
        let x = self.factor.solve(&rhs);

        // residual check against the 1e-10 contract
        let mut r_norm = 0.0f64;
        let mut b_norm = 0.0f64;
        for (pos, &v) in self.interior.iter().enumerate() {
            let mut acc = 0.0;
            for k in self.stiffness.row_ptr[v]..self.stiffness.row_ptr[v + 1] {
                let c = self.stiffness.col_idx[k];
                let pc = self.interior_pos[c];
                if pc != usize::MAX {
                    acc += self.stiffness.values[k] * x[pc];
                }
            }
            let r = acc - rhs[pos];
            r_norm += r * r;
            b_norm += rhs[pos] * rhs[pos];
        }
        let rel = if b_norm > 0.0 { (r_norm / b_norm).sqrt() } else { r_norm.sqrt() };
        if rel > 1e-10 {
            return Err(EitError::SolveFailed(format!(
                "relative interior residual {rel:.3e} exceeds 1e-10"
            )));
        }

        for (pos, &v) in self.interior.iter().enumerate() {
            u[v] = x[pos];
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hash01;
    use crate::mesh::generate_disk_mesh;
    use crate::phantom::TensorSpec;
    use approx::assert_relative_eq;

    /// independent element-stiffness route for the Laplacian: the
    /// edge-vector identity k[i][j] = (e_i . e_j) / (4 area)
    fn laplace_reference(a: Point2, b: Point2, c: Point2) -> [[f64; 3]; 3] {
        let e = [
            (c.x - b.x, c.y - b.y),
            (a.x - c.x, a.y - c.y),
            (b.x - a.x, b.y - a.y),
        ];
        let area = 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
        let mut k = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] = (e[i].0 * e[j].0 + e[i].1 * e[j].1) / (4.0 * area);
            }
        }
        k
    }

    #[test]
    fn element_stiffness_matches_laplace_reference() {
        for s in 0..5u64 {
            let a = Point2::new(hash01(s * 3), hash01(s * 3 + 100));
            let b = Point2::new(1.0 + hash01(s * 3 + 1), hash01(s * 3 + 101));
            let c = Point2::new(hash01(s * 3 + 2), 1.0 + hash01(s * 3 + 102));
            let k = element_stiffness(a, b, c, &Tensor2::isotropic(1.0)).unwrap();
            let r = laplace_reference(a, b, c);
            for i in 0..3 {
                for j in 0..3 {
                    assert_relative_eq!(k[i][j], r[i][j], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn element_stiffness_rejects_degenerate() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let c = Point2::new(2.0, 1e-15);
        assert!(element_stiffness(a, b, c, &Tensor2::isotropic(1.0)).is_err());
    }

    #[test]
    fn row_sums_vanish_and_matrix_is_symmetric() {
        let mesh = generate_disk_mesh(0.28, 0.05, 3).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let n = sys.node_count();
        for r in 0..n {
            assert!(sys.stiffness.row_sum(r).abs() < 1e-12, "row {r}");
        }
        for r in 0..n {
            for k in sys.stiffness.row_ptr[r]..sys.stiffness.row_ptr[r + 1] {
                let c = sys.stiffness.col_idx[k];
                assert_relative_eq!(sys.stiffness.values[k], sys.stiffness.get(c, r), epsilon = 1e-12);
            }
        }
        // constants lie in the kernel
        let ones = vec![1.0; n];
        let y = sys.stiffness.mul_vec(&ones);
        assert!(y.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn stiffness_scales_linearly_with_sigma() {
        let mesh = generate_disk_mesh(0.28, 0.06, 4).unwrap();
        let s1 = assemble_stiffness(&mesh, &ConductivitySpec::homogeneous(0.28, 1.0)).unwrap();
        let s2 = assemble_stiffness(&mesh, &ConductivitySpec::homogeneous(0.28, 2.0)).unwrap();
        for (a, b) in s1.stiffness.values.iter().zip(&s2.stiffness.values) {
            assert_relative_eq!(2.0 * a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn reduced_stiffness_is_spd_on_small_mesh() {
        let mesh = generate_disk_mesh(0.28, 0.06, 5).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        assert!(sys.interior_count() < 500, "keep this check dense-friendly");
        // dense eigendecomposition of the reduced block
        let mut reduced = vec![vec![0.0; sys.interior_count()]; sys.interior_count()];
        for (pi, &i) in sys.interior.iter().enumerate() {
            for k in sys.stiffness.row_ptr[i]..sys.stiffness.row_ptr[i + 1] {
                let c = sys.stiffness.col_idx[k];
                if sys.interior_pos[c] != usize::MAX {
                    reduced[pi][sys.interior_pos[c]] = sys.stiffness.values[k];
                }
            }
        }
        let eigs = crate::linalg::symmetric_eigenvalues(&reduced);
        assert!(eigs[0] > 0.0, "smallest eigenvalue {}", eigs[0]);
    }

    #[test]
    fn constant_boundary_data_gives_constant_solution() {
        let mesh = generate_disk_mesh(0.28, 0.04, 6).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let g = vec![1.0; mesh.boundary_nodes.len()];
        let u = sys.solve_dirichlet(&g).unwrap();
        for v in &u {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn harmonic_cosine_matches_separation_of_variables() {
        let mesh = generate_disk_mesh(0.28, crate::mesh::DEFAULT_TARGET_MAX_EDGE, 7).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.45);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let g: Vec<f64> =
            mesh.boundary_nodes.iter().map(|&v| mesh.vertices[v].angle().cos()).collect();
        let u = sys.solve_dirichlet(&g).unwrap();
        let mut worst = 0.0f64;
        for (v, &uv) in u.iter().enumerate() {
            let p = mesh.vertices[v];
            let exact = (p.norm() / 0.28) * p.angle().cos();
            worst = worst.max((uv - exact).abs());
        }
        assert!(worst <= 0.01, "max nodal error {worst}");
    }

    #[test]
    fn odd_solution_vanishes_at_origin() {
        let mesh = generate_disk_mesh(0.28, crate::mesh::DEFAULT_TARGET_MAX_EDGE, 8).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.0);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let g: Vec<f64> =
            mesh.boundary_nodes.iter().map(|&v| mesh.vertices[v].angle().sin()).collect();
        let u = sys.solve_dirichlet(&g).unwrap();
        // P1 interpolation of u at the origin via the containing triangle
        let origin = Point2::new(0.0, 0.0);
        let mut at_origin = None;
        for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
            let (pa, pb, pc) = mesh.triangle_points(t);
            let area = mesh.triangle_area(t);
            let wa = crate::geom::triangle_area(origin, pb, pc) / area;
            let wb = crate::geom::triangle_area(pa, origin, pc) / area;
            let wc = crate::geom::triangle_area(pa, pb, origin) / area;
            if wa >= -1e-12 && wb >= -1e-12 && wc >= -1e-12 {
                at_origin = Some(wa * u[a] + wb * u[b] + wc * u[c]);
                break;
            }
        }
        let v0 = at_origin.expect("origin lies in some triangle");
        assert!(v0.abs() < 1e-3, "u at origin = {v0}");
    }

    #[test]
    fn discrete_maximum_principle_on_delaunay_mesh() {
        let mesh = generate_disk_mesh(0.28, 0.03, 9).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 2.0);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let g: Vec<f64> = mesh
            .boundary_nodes
            .iter()
            .map(|&v| (3.0 * mesh.vertices[v].angle()).cos())
            .collect();
        let (lo, hi) = g.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        let u = sys.solve_dirichlet(&g).unwrap();
        for &v in &u {
            assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
        }
    }

    #[test]
    fn anisotropic_assembly_solves_linear_solution() {
        // u = x is exact for any constant tensor; boundary data x
        let mesh = generate_disk_mesh(0.28, 0.04, 10).unwrap();
        let spec = ConductivitySpec {
            tank_radius: 0.28,
            tank: TensorSpec::SymConst { mu: 1.0, a: 5, b: 3, c: 2 },
            inclusions: vec![],
            label: 1,
        };
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let g: Vec<f64> = mesh.boundary_nodes.iter().map(|&v| mesh.vertices[v].x).collect();
        let u = sys.solve_dirichlet(&g).unwrap();
        for (v, &uv) in u.iter().enumerate() {
            assert_relative_eq!(uv, mesh.vertices[v].x, epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_non_finite_boundary_values() {
        let mesh = generate_disk_mesh(0.28, 0.06, 11).unwrap();
        let spec = ConductivitySpec::homogeneous(0.28, 1.0);
        let sys = assemble_stiffness(&mesh, &spec).unwrap();
        let mut g = vec![0.0; mesh.boundary_nodes.len()];
        g[0] = f64::NAN;
        assert!(sys.solve_dirichlet(&g).is_err());
    }
}
