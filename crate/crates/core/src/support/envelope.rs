//! Convex envelope of boundary data: the largest convex function on the disc
//! lying below `φ` on the circle.
//!
//! The boundary samples lifted to `(cos θ, sin θ, φ(θ))` project onto a convex
//! polygon, so the lower convex hull is a triangulation of that polygon. It is
//! built facet by facet: across each known hull chord `(i, j)` the next facet
//! is the plane through the chord that supports every vertex of the arc.

use std::sync::Arc;

use crate::support::boundary::BoundaryFn;
use crate::support::grid::{Grid, GridSupportFn};
use crate::support::SupportFn;

/// An affine function `a z₁ + b z₂ + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Plane {
    pub fn eval(&self, z1: f64, z2: f64) -> f64 {
        self.a * z1 + self.b * z2 + self.c
    }

    /// Plane through three lifted points; `None` when their projections are collinear.
    pub fn through(p: [f64; 3], q: [f64; 3], r: [f64; 3]) -> Option<Plane> {
        let (ux, uy, uz) = (q[0] - p[0], q[1] - p[1], q[2] - p[2]);
        let (vx, vy, vz) = (r[0] - p[0], r[1] - p[1], r[2] - p[2]);
        let det = ux * vy - uy * vx;
        if det.abs() < 1e-300 {
            return None;
        }
        let a = (uz * vy - uy * vz) / det;
        let b = (ux * vz - uz * vx) / det;
        Some(Plane { a, b, c: p[2] - a * p[0] - b * p[1] })
    }
}

/// The lower convex hull of the lifted boundary points, as a list of facets.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
    planes: Vec<Plane>,
}

impl Envelope {
    pub fn new(phi: &BoundaryFn) -> Self {
        let vertices: Vec<[f64; 3]> = phi.points().into_iter().map(|(t, v)| [t.cos(), t.sin(), v]).collect();
        let triangles = lower_hull_triangulation(&vertices);
        let planes = triangles
            .iter()
            .map(|t| {
                Plane::through(vertices[t[0]], vertices[t[1]], vertices[t[2]])
                    .expect("distinct points on a circle are never collinear")
            })
            .collect();
        Envelope { vertices, triangles, planes }
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    /// `h(z) = max` over hull facets; a convex piecewise-affine function.
    pub fn value(&self, z1: f64, z2: f64) -> f64 {
        self.planes.iter().map(|p| p.eval(z1, z2)).fold(f64::NEG_INFINITY, f64::max)
    }
}

impl SupportFn for Envelope {
    fn eval(&self, z1: f64, z2: f64) -> Option<f64> {
        Some(self.value(z1, z2))
    }

    fn fd_step(&self) -> f64 {
        1e-4
    }

    fn max_radius(&self) -> f64 {
        1.0
    }
}

/// Triangulate the convex polygon `vertices[..].xy` (counterclockwise on the
/// unit circle) by the lower hull of the lifted points.
fn lower_hull_triangulation(vertices: &[[f64; 3]]) -> Vec<[usize; 3]> {
    let m = vertices.len();
    let mut triangles = Vec::with_capacity(m.saturating_sub(2));
    if m < 3 {
        return triangles;
    }
    // the polygon edge (m−1, 0) is a hull edge; the rest of the polygon is the
    // chain 0, 1, …, m−1
    let mut stack = vec![(0usize, m - 1)];
    while let Some((i, j)) = stack.pop() {
        if j <= i + 1 {
            continue;
        }
        let (pi, pj) = (vertices[i], vertices[j]);
        let (ex, ey) = (pj[0] - pi[0], pj[1] - pi[1]);
        let len2 = ex * ex + ey * ey;
        let len = len2.sqrt();
        let mut best = (f64::INFINITY, i + 1);
        for (k, pk) in vertices.iter().enumerate().take(j).skip(i + 1) {
            let (dx, dy) = (pk[0] - pi[0], pk[1] - pi[1]);
            let along = (dx * ex + dy * ey) / len2;
            // vertices between i and j (ccw) lie right of the chord i→j
            let dist = (ey * dx - ex * dy) / len;
            let chord_height = pi[2] + along * (pj[2] - pi[2]);
            let slope = (pk[2] - chord_height) / dist;
            if slope < best.0 {
                best = (slope, k);
            }
        }
        let k = best.1;
        triangles.push([i, k, j]);
        stack.push((i, k));
        stack.push((k, j));
    }
    triangles
}

/// Sample the convex envelope of `phi` on a grid (interior and ring nodes).
pub fn convex_envelope(phi: &BoundaryFn, grid: Arc<Grid>) -> GridSupportFn {
    let env = Envelope::new(phi);
    GridSupportFn::from_fn(grid, |x, y| env.value(x, y))
}
