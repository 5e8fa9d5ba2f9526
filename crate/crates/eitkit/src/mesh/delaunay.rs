//! Incremental Bowyer-Watson Delaunay triangulation with walk-based point
//! location. Points are inserted in spatially coherent order so walks stay
//! short; a super-triangle far outside the domain anchors the construction.

use crate::geom::{in_circumcircle, orient2d, Point2};
use std::collections::{HashMap, HashSet};

const NONE: usize = usize::MAX;

struct Triangulation {
    points: Vec<Point2>,
    /// vertex triples, counterclockwise
    tris: Vec<[usize; 3]>,
    /// neighbor across the edge opposite each vertex; NONE on the hull
    nbrs: Vec<[usize; 3]>,
    alive: Vec<bool>,
    last: usize,
}

impl Triangulation {
    fn locate(&self, p: Point2) -> usize {
        let mut t = self.last;
        if !self.alive[t] {
            t = (0..self.tris.len()).rfind(|&i| self.alive[i]).expect("no alive triangle");
        }
        // straight walk; bounded to guard against numeric loops
        for _ in 0..(4 * self.tris.len() + 16) {
            let [a, b, c] = self.tris[t];
            let pa = self.points[a];
            let pb = self.points[b];
            let pc = self.points[c];
            let mut moved = false;
            // edge opposite vertex 0 is (b, c), etc.
            for (i, (u, v)) in [(pb, pc), (pc, pa), (pa, pb)].into_iter().enumerate() {
                if orient2d(u, v, p) < 0.0 {
                    let n = self.nbrs[t][i];
                    if n != NONE {
                        t = n;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                return t;
            }
        }
        t
    }

    /// index of the edge of `t` that runs from `u` to `v`
    fn edge_index(&self, t: usize, u: usize, v: usize) -> Option<usize> {
        let [a, b, c] = self.tris[t];
        let edges = [(b, c), (c, a), (a, b)];
        edges.iter().position(|&e| e == (u, v))
    }

    fn insert(&mut self, pi: usize) {
        let p = self.points[pi];
        let t0 = self.locate(p);

        // grow the cavity of triangles whose circumcircle contains p
        let mut cavity = vec![t0];
        let mut in_cavity = HashSet::new();
        in_cavity.insert(t0);
        let mut stack = vec![t0];
        while let Some(t) = stack.pop() {
            for i in 0..3 {
                let n = self.nbrs[t][i];
                if n == NONE || in_cavity.contains(&n) {
                    continue;
                }
                let [a, b, c] = self.tris[n];
                if in_circumcircle(self.points[a], self.points[b], self.points[c], p) > 0.0 {
                    in_cavity.insert(n);
                    cavity.push(n);
                    stack.push(n);
                }
            }
        }

        // boundary edges of the cavity: (v1, v2, outer neighbor)
        let mut boundary: Vec<(usize, usize, usize)> = Vec::new();
        for &t in &cavity {
            let [a, b, c] = self.tris[t];
            let edges = [(b, c), (c, a), (a, b)];
            for (i, &(u, v)) in edges.iter().enumerate() {
                let n = self.nbrs[t][i];
                if n == NONE || !in_cavity.contains(&n) {
                    boundary.push((u, v, n));
                }
            }
        }
        for &t in &cavity {
            self.alive[t] = false;
        }

        // fan of new triangles [u, v, p] over the cavity boundary
        let base = self.tris.len();
        let mut start_of: HashMap<usize, usize> = HashMap::with_capacity(boundary.len());
        let mut end_of: HashMap<usize, usize> = HashMap::with_capacity(boundary.len());
        for (k, &(u, v, _)) in boundary.iter().enumerate() {
            start_of.insert(u, base + k);
            end_of.insert(v, base + k);
        }
        for (k, &(u, v, outer)) in boundary.iter().enumerate() {
            let t_new = base + k;
            // edges of [u, v, p]: opposite u = (v, p), opposite v = (p, u),
            // opposite p = (u, v) which faces the old outer neighbor
            let across_vp = *start_of.get(&v).expect("cavity boundary is a closed loop");
            let across_pu = *end_of.get(&u).expect("cavity boundary is a closed loop");
            self.tris.push([u, v, pi]);
            self.nbrs.push([across_vp, across_pu, outer]);
            self.alive.push(true);
            if outer != NONE {
                // outer stores this edge reversed
                let i = self
                    .edge_index(outer, v, u)
                    .expect("outer neighbor must share the cavity edge");
                self.nbrs[outer][i] = t_new;
            }
            self.last = t_new;
        }
    }
}

/// Delaunay-triangulate `points` (which must all lie inside a disk of radius
/// `extent` around the origin). Returns counterclockwise triangles.
pub fn triangulate(points: &[Point2], extent: f64) -> Vec<[usize; 3]> {
    let n = points.len();
    if n < 3 {
        return Vec::new();
    }
    let big = 64.0 * extent;
    let mut all = points.to_vec();
    all.push(Point2::new(0.0, 2.0 * big));
    all.push(Point2::new(-1.8 * big, -big));
    all.push(Point2::new(1.8 * big, -big));

    let mut tri = Triangulation {
        points: all,
        tris: vec![[n, n + 1, n + 2]],
        nbrs: vec![[NONE; 3]],
        alive: vec![true],
        last: 0,
    };
    for pi in 0..n {
        tri.insert(pi);
    }

    let mut out = Vec::new();
    for (t, &a) in tri.alive.iter().enumerate() {
        if !a {
            continue;
        }
        let [i, j, k] = tri.tris[t];
        if i >= n || j >= n || k >= n {
            continue;
        }
        out.push([i, j, k]);
    }
    out
}
