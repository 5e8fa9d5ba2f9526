//! Plain-text mesh export/import, used for debugging and golden tests.
//!
//! Format: header `vertices N triangles M boundary K`, then N `x y` lines,
//! M `a b c` triangle index lines, and K boundary loop node indices.

use super::TriMesh;
use crate::error::{EitError, Result};
use crate::geom::Point2;
use std::fmt::Write as _;
use std::path::Path;

pub fn write_mesh_text(mesh: &TriMesh, path: &Path) -> Result<()> {
    let mut out = String::new();
    writeln!(
        out,
        "vertices {} triangles {} boundary {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.boundary_nodes.len()
    )
    .expect("string write");
    for v in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e}", v.x, v.y).expect("string write");
    }
    for t in &mesh.triangles {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).expect("string write");
    }
    for &v in &mesh.boundary_nodes {
        writeln!(out, "{v}").expect("string write");
    }
    std::fs::write(path, out).map_err(|e| EitError::io(path.display().to_string(), e))
}

pub fn read_mesh_text(path: &Path, radius: f64) -> Result<TriMesh> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EitError::io(path.display().to_string(), e))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| EitError::Format("empty mesh file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "vertices" || fields[2] != "triangles" || fields[4] != "boundary" {
        return Err(EitError::Format(format!("bad mesh header: {header}")));
    }
    let nv: usize = fields[1].parse().map_err(|_| EitError::Format("bad vertex count".into()))?;
    let nt: usize = fields[3].parse().map_err(|_| EitError::Format("bad triangle count".into()))?;
    let nb: usize = fields[5].parse().map_err(|_| EitError::Format("bad boundary count".into()))?;

    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let line = lines.next().ok_or_else(|| EitError::Format(format!("missing vertex {i}")))?;
        let mut it = line.split_whitespace();
        let x: f64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| EitError::Format(format!("bad vertex line {i}")))?;
        let y: f64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| EitError::Format(format!("bad vertex line {i}")))?;
        vertices.push(Point2::new(x, y));
    }
    let mut triangles = Vec::with_capacity(nt);
    for i in 0..nt {
        let line = lines.next().ok_or_else(|| EitError::Format(format!("missing triangle {i}")))?;
        let idx: Vec<usize> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| EitError::Format(format!("bad triangle line {i}"))))
            .collect::<Result<_>>()?;
        if idx.len() != 3 {
            return Err(EitError::Format(format!("triangle line {i} has {} indices", idx.len())));
        }
        triangles.push([idx[0], idx[1], idx[2]]);
    }
    let mut boundary_nodes = Vec::with_capacity(nb);
    for i in 0..nb {
        let line = lines.next().ok_or_else(|| EitError::Format(format!("missing boundary {i}")))?;
        boundary_nodes.push(
            line.trim()
                .parse()
                .map_err(|_| EitError::Format(format!("bad boundary line {i}")))?,
        );
    }
    let boundary_edges = (0..nb).map(|k| (boundary_nodes[k], boundary_nodes[(k + 1) % nb])).collect();
    let mesh = TriMesh { vertices, triangles, boundary_edges, boundary_nodes, radius };
    mesh.validate()?;
    Ok(mesh)
}
