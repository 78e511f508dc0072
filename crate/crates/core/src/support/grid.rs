//! Square grids restricted to a sub-disc, and support functions sampled on them.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::support::SupportFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Strictly inside the disc of radius `R`: an unknown of the solver.
    Interior,
    /// Outside the disc but reachable from an interior node by a stencil of the
    /// configured reach; carries Dirichlet data.
    Ring,
    Outside,
}

/// An `n × n` square grid on `[−R, R]²`, masked to the disc `|z| < R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    radius: f64,
    n: usize,
    h: f64,
    reach: usize,
    kinds: Vec<NodeKind>,
}

impl Grid {
    /// Grid with a one-node ring (enough for the 9-point stencil).
    pub fn new(radius: f64, n: usize) -> Result<Self> {
        Grid::with_reach(radius, n, 1)
    }

    pub fn with_reach(radius: f64, n: usize, reach: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::InvalidArgument(format!("radius {radius} not in (0,1)")));
        }
        if n < 5 {
            return Err(Error::InvalidArgument(format!("grid size {n} too small")));
        }
        let reach = reach.max(1);
        let h = 2.0 * radius / (n - 1) as f64;
        let coord = |i: usize| -radius + i as f64 * h;
        let mut kinds = vec![NodeKind::Outside; n * n];
        let r2 = radius * radius * (1.0 - 1e-12);
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (coord(i), coord(j));
                if x * x + y * y < r2 {
                    kinds[j * n + i] = NodeKind::Interior;
                }
            }
        }
        let interior = kinds.clone();
        let r = reach as isize;
        for j in 0..n {
            for i in 0..n {
                if interior[j * n + i] != NodeKind::Interior {
                    continue;
                }
                for dj in -r..=r {
                    for di in -r..=r {
                        let (ii, jj) = (i as isize + di, j as isize + dj);
                        if ii < 0 || jj < 0 || ii >= n as isize || jj >= n as isize {
                            continue;
                        }
                        let k = jj as usize * n + ii as usize;
                        let (x, y) = (coord(ii as usize), coord(jj as usize));
                        if kinds[k] == NodeKind::Outside && x * x + y * y < 1.0 - 1e-9 {
                            kinds[k] = NodeKind::Ring;
                        }
                    }
                }
            }
        }
        Ok(Grid { radius, n, h, reach, kinds })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn reach(&self) -> usize {
        self.reach
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.radius + i as f64 * self.h
    }

    pub fn point(&self, k: usize) -> (f64, f64) {
        (self.coord(k % self.n), self.coord(k / self.n))
    }

    pub fn kind(&self, k: usize) -> NodeKind {
        self.kinds[k]
    }

    pub fn kind_at(&self, i: isize, j: isize) -> NodeKind {
        if i < 0 || j < 0 || i >= self.n as isize || j >= self.n as isize {
            NodeKind::Outside
        } else {
            self.kinds[j as usize * self.n + i as usize]
        }
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.kinds[k] == NodeKind::Interior)
    }

    pub fn ring_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.kinds[k] == NodeKind::Ring)
    }

    /// Index of the node at `(z1, z2)`, if that point is a grid node (to `1e-9·h`).
    pub fn node_at(&self, z1: f64, z2: f64) -> Option<usize> {
        let fi = (z1 + self.radius) / self.h;
        let fj = (z2 + self.radius) / self.h;
        let (i, j) = (fi.round(), fj.round());
        if (fi - i).abs() > 1e-9 || (fj - j).abs() > 1e-9 {
            return None;
        }
        if i < 0.0 || j < 0.0 || i >= self.n as f64 || j >= self.n as f64 {
            return None;
        }
        Some(self.index(i as usize, j as usize))
    }

    /// Interior nodes whose full 9-point neighbourhood is interior (away from the ring).
    pub fn is_deep_interior(&self, k: usize) -> bool {
        let (i, j) = ((k % self.n) as isize, (k / self.n) as isize);
        (-1..=1).all(|dj| (-1..=1).all(|di| self.kind_at(i + di, j + dj) == NodeKind::Interior))
    }
}

/// A support function sampled on a [`Grid`]: values at interior nodes and
/// Dirichlet data on the ring. Outside nodes hold NaN.
#[derive(Debug, Clone)]
pub struct GridSupportFn {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

/// Equal grids and bit-identical values (so NaN at outside nodes compares equal).
impl PartialEq for GridSupportFn {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid
            && self.values.iter().zip(&other.values).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl GridSupportFn {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let mut values = values;
        for (k, v) in values.iter_mut().enumerate() {
            if grid.kind(k) == NodeKind::Outside {
                *v = f64::NAN;
            }
        }
        Ok(GridSupportFn { grid, values })
    }

    /// Sample `f` at every interior and ring node.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| match grid.kind(k) {
                NodeKind::Outside => f64::NAN,
                _ => {
                    let (x, y) = grid.point(k);
                    f(x, y)
                }
            })
            .collect();
        GridSupportFn { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn value_at(&self, i: isize, j: isize) -> Option<f64> {
        match self.grid.kind_at(i, j) {
            NodeKind::Outside => None,
            _ => Some(self.values[j as usize * self.grid.n() + i as usize]),
        }
    }

    pub fn ring_values(&self) -> Vec<(usize, f64)> {
        self.grid.ring_nodes().map(|k| (k, self.values[k])).collect()
    }

    /// Pointwise map over valued nodes.
    pub fn map(&self, f: impl Fn(f64, f64, f64) -> f64) -> GridSupportFn {
        let values = (0..self.grid.len())
            .map(|k| match self.grid.kind(k) {
                NodeKind::Outside => f64::NAN,
                _ => {
                    let (x, y) = self.grid.point(k);
                    f(x, y, self.values[k])
                }
            })
            .collect();
        GridSupportFn { grid: Arc::clone(&self.grid), values }
    }

    /// Maximum of `|self − other|` over nodes of the given kinds.
    pub fn max_abs_diff(&self, other: &GridSupportFn, interior_only: bool) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..self.grid.len() {
            match self.grid.kind(k) {
                NodeKind::Interior => {}
                NodeKind::Ring if !interior_only => {}
                _ => continue,
            }
            m = m.max((self.values[k] - other.values[k]).abs());
        }
        m
    }

    /// Second differences along the directions `(1,0), (0,1), (1,1), (1,−1)`
    /// (and the wider ones up to the grid reach), minimum over interior nodes.
    pub fn min_second_difference(&self) -> f64 {
        let dirs = crate::solver::stencil::directions_within(self.grid.reach());
        let n = self.grid.n() as isize;
        let mut m = f64::INFINITY;
        for k in self.grid.interior_nodes() {
            let (i, j) = ((k as isize) % n, (k as isize) / n);
            let u0 = self.values[k];
            for &(di, dj) in &dirs {
                let (Some(a), Some(b)) = (self.value_at(i + di, j + dj), self.value_at(i - di, j - dj))
                else {
                    continue;
                };
                let len2 = ((di * di + dj * dj) as f64) * self.grid.h() * self.grid.h();
                m = m.min((a + b - 2.0 * u0) / len2);
            }
        }
        m
    }

    /// Whether the discrete convexity invariant holds (second differences ≥ −1e-8).
    pub fn is_discretely_convex(&self) -> bool {
        self.min_second_difference() >= -1e-8
    }

    /// CSV with header `z1,z2,u`, row-major over valued nodes.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "z1,z2,u")?;
        for k in 0..self.grid.len() {
            if self.grid.kind(k) == NodeKind::Outside {
                continue;
            }
            let (x, y) = self.grid.point(k);
            writeln!(w, "{},{},{}", x, y, self.values[k])?;
        }
        Ok(())
    }

    fn cubic_weights(t: f64) -> [f64; 4] {
        // Lagrange basis on nodes −1, 0, 1, 2
        [
            -t * (t - 1.0) * (t - 2.0) / 6.0,
            (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0,
            (t + 1.0) * t * (t - 1.0) / 6.0,
        ]
    }
}

impl SupportFn for GridSupportFn {
    /// Bicubic Lagrange interpolation, falling back to bilinear next to the
    /// ring; exact at nodes.
    fn eval(&self, z1: f64, z2: f64) -> Option<f64> {
        let g = &self.grid;
        if let Some(k) = g.node_at(z1, z2) {
            return match g.kind(k) {
                NodeKind::Outside => None,
                _ => Some(self.values[k]),
            };
        }
        let fi = (z1 + g.radius()) / g.h();
        let fj = (z2 + g.radius()) / g.h();
        let (i0, j0) = (fi.floor() as isize, fj.floor() as isize);
        let (tx, ty) = (fi - i0 as f64, fj - j0 as f64);
        let (wx, wy) = (Self::cubic_weights(tx), Self::cubic_weights(ty));
        let mut acc = 0.0;
        let mut complete = true;
        'outer: for (b, wyb) in wy.iter().enumerate() {
            for (a, wxa) in wx.iter().enumerate() {
                match self.value_at(i0 - 1 + a as isize, j0 - 1 + b as isize) {
                    Some(v) => acc += wxa * wyb * v,
                    None => {
                        complete = false;
                        break 'outer;
                    }
                }
            }
        }
        if complete {
            return Some(acc);
        }
        let v00 = self.value_at(i0, j0)?;
        let v10 = self.value_at(i0 + 1, j0)?;
        let v01 = self.value_at(i0, j0 + 1)?;
        let v11 = self.value_at(i0 + 1, j0 + 1)?;
        Some((1.0 - tx) * (1.0 - ty) * v00 + tx * (1.0 - ty) * v10 + (1.0 - tx) * ty * v01 + tx * ty * v11)
    }

    fn fd_step(&self) -> f64 {
        self.grid.h()
    }

    fn max_radius(&self) -> f64 {
        self.grid.radius()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_and_ring() {
        let g = Grid::new(0.9, 33).unwrap();
        assert!(g.interior_nodes().count() > 600);
        for k in g.ring_nodes() {
            let (x, y) = g.point(k);
            assert!(x * x + y * y >= 0.81 * (1.0 - 1e-12));
            assert!(x * x + y * y < (0.9 + 2.0 * g.h()).powi(2));
        }
        // every 8-neighbour of an interior node has data
        let n = g.n() as isize;
        for k in g.interior_nodes() {
            let (i, j) = ((k as isize) % n, (k as isize) / n);
            for dj in -1..=1 {
                for di in -1..=1 {
                    assert_ne!(g.kind_at(i + di, j + dj), NodeKind::Outside);
                }
            }
        }
        assert_eq!(g.node_at(0.0, 0.0), Some(g.index(16, 16)));
        assert_eq!(g.node_at(0.001, 0.0), None);
    }

    #[test]
    fn interpolation_is_exact_on_cubics() {
        let g = Arc::new(Grid::new(0.8, 41).unwrap());
        let f = |x: f64, y: f64| 1.0 + x - 2.0 * y + x * x * y - 0.5 * y * y * y + x * y;
        let u = GridSupportFn::from_fn(g, f);
        for &(x, y) in &[(0.013, -0.2), (0.31, 0.27), (-0.5, 0.1234)] {
            assert!((u.eval(x, y).unwrap() - f(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_layout() {
        let g = Arc::new(Grid::new(0.5, 5).unwrap());
        let u = GridSupportFn::from_fn(g, |x, y| x + 0.1 * y);
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("z1,z2,u"));
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
        assert!(!rows.is_empty());
        // row-major: z2 non-decreasing, z1 increasing within a row
        for w in rows.windows(2) {
            assert!(w[1][1] > w[0][1] || (w[1][1] == w[0][1] && w[1][0] > w[0][0]));
        }
        for r in &rows {
            assert_eq!(r[2], r[0] + 0.1 * r[1]);
        }
    }
}
