//! Post-solve diagnostics: residuals, recovered curvature, the envelope
//! sandwich, the comparison principle, and constant-curvature foliations.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solver::{stencil, CurvatureField, Dirichlet, Solution, Solve, SolverConfig};
use crate::support::{BoundaryFn, Envelope, Grid, GridSupportFn, NodeKind, SupportFn};

/// Values at the interior nodes of a grid (NaN elsewhere).
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridField {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_within(f64::INFINITY)
    }

    /// Max of `|value|` over interior nodes with `|z| ≤ radius`.
    pub fn max_abs_within(&self, radius: f64) -> f64 {
        self.grid
            .interior_nodes()
            .filter(|&k| {
                let (x, y) = self.grid.point(k);
                x * x + y * y <= radius * radius
            })
            .fold(0.0, |m: f64, k| m.max(self.values[k].abs()))
    }

    /// Max of `|value − target|/|target|` over interior nodes with `|z| ≤ radius`.
    pub fn max_rel_err_within(&self, radius: f64, target: impl Fn(f64, f64) -> f64) -> f64 {
        self.grid
            .interior_nodes()
            .filter_map(|k| {
                let (x, y) = self.grid.point(k);
                (x * x + y * y <= radius * radius).then(|| {
                    let t = target(x, y);
                    ((self.values[k] - t) / t).abs()
                })
            })
            .fold(0.0, f64::max)
    }
}

fn det9_at(u: &GridSupportFn, k: usize) -> f64 {
    let n = u.grid().n() as isize;
    let (i, j) = ((k as isize) % n, (k as isize) / n);
    stencil::det9(|di, dj| u.value_at(i + di, j + dj).unwrap_or(f64::NAN), u.grid().h()).0
}

/// `det D²u − (1/ψ)(1−|z|²)⁻²` at interior nodes, 9-point determinant.
pub fn residual(u: &GridSupportFn, psi: &CurvatureField) -> GridField {
    let grid = Arc::clone(u.grid());
    let mut values = vec![f64::NAN; grid.len()];
    for k in grid.interior_nodes() {
        let (x, y) = grid.point(k);
        values[k] = det9_at(u, k) - psi.rhs(x, y);
    }
    GridField { grid, values }
}

/// `ψ_est = 1/((1−|z|²)² det D²u)` at interior nodes.
pub fn curvature_recovery(u: &GridSupportFn) -> Result<GridField> {
    curvature_recovery_within(u, f64::INFINITY)
}

/// [`curvature_recovery`] restricted to interior nodes with `|z| ≤ radius`
/// (NaN elsewhere). Keeps the estimate away from a boundary layer at the
/// ring when the ring data is only approximate.
pub fn curvature_recovery_within(u: &GridSupportFn, radius: f64) -> Result<GridField> {
    let grid = Arc::clone(u.grid());
    let mut values = vec![f64::NAN; grid.len()];
    for k in grid.interior_nodes() {
        let (x, y) = grid.point(k);
        if x * x + y * y > radius * radius {
            continue;
        }
        let det = det9_at(u, k);
        if !(det > 0.0) {
            return Err(Error::Degenerate { z1: x, z2: y, det });
        }
        let q = 1.0 - x * x - y * y;
        values[k] = 1.0 / (q * q * det);
    }
    Ok(GridField { grid, values })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub pass: bool,
    /// Discretisation allowance `10·h²`.
    pub tol: f64,
    /// `max(u − h)` over valued nodes.
    pub max_above_envelope: f64,
    /// `max(lower − u)` with `lower = h − (1/√a)√(1−|z|²)`.
    pub max_below_lower: f64,
    /// Node with the largest violation (either side).
    pub worst: (f64, f64),
}

/// Check `h − (1/√a)√(1−|z|²) − tol ≤ u ≤ h + tol` at every valued node, where
/// `h` is the convex envelope of `phi`.
pub fn sandwich_check(u: &GridSupportFn, phi: &BoundaryFn, a: f64) -> SandwichReport {
    let env = Envelope::new(phi);
    let grid = u.grid();
    let tol = 10.0 * grid.h() * grid.h();
    let c = 1.0 / a.sqrt();
    let (mut above, mut below) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let (mut worst, mut worst_v) = ((0.0, 0.0), f64::NEG_INFINITY);
    for k in 0..grid.len() {
        if grid.kind(k) == NodeKind::Outside {
            continue;
        }
        let (x, y) = grid.point(k);
        let h = env.value(x, y);
        let v = u.value(k);
        let up = v - h;
        let down = h - c * (1.0 - x * x - y * y).sqrt() - v;
        above = above.max(up);
        below = below.max(down);
        if up.max(down) > worst_v {
            worst_v = up.max(down);
            worst = (x, y);
        }
    }
    SandwichReport {
        pass: above <= tol && below <= tol,
        tol,
        max_above_envelope: above,
        max_below_lower: below,
        worst,
    }
}

/// Ring data from the middle of the envelope bracket:
/// `h − (1/(2√a))√(1−|z|²)`.
pub fn sandwich_midpoint(env: Arc<Envelope>, a: f64) -> Dirichlet {
    let c = 0.5 / a.sqrt();
    Dirichlet::function(move |x, y| env.value(x, y) - c * (1.0 - x * x - y * y).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub pass: bool,
    pub interior_min: f64,
    pub boundary_min: f64,
    pub tol: f64,
}

/// Verify `min_interior(u1 − u2) ≥ min_ring(u1 − u2) − 1e-8`.
pub fn comparison_check(u1: &GridSupportFn, u2: &GridSupportFn) -> Result<ComparisonReport> {
    if u1.grid() != u2.grid() {
        return Err(Error::InvalidArgument("comparison needs a common grid".into()));
    }
    let grid = u1.grid();
    let tol = 1e-8;
    let (mut inner, mut outer) = (f64::INFINITY, f64::INFINITY);
    for k in 0..grid.len() {
        let d = u1.value(k) - u2.value(k);
        match grid.kind(k) {
            NodeKind::Interior => inner = inner.min(d),
            NodeKind::Ring => outer = outer.min(d),
            NodeKind::Outside => {}
        }
    }
    Ok(ComparisonReport { pass: inner >= outer - tol, interior_min: inner, boundary_min: outer, tol })
}

/// Where the ring data of each leaf of a foliation comes from.
#[derive(Clone)]
pub enum FoliationRing {
    /// The envelope-bracket midpoint for `a = |K|`.
    SandwichMidpoint,
    /// A known exact support function `(K, z1, z2) ↦ u_K(z)`.
    Exact(Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub pass: bool,
    pub tol: f64,
    /// Largest `u_{K₂} − u_{K₁}` over pairs `K₁ < K₂` and valued nodes.
    pub max_violation: f64,
    /// `(K₁, K₂, z1, z2)` of the largest violation, if any pair exists.
    pub worst: Option<(f64, f64, f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Foliation {
    pub ks: Vec<f64>,
    pub leaves: Vec<Solution>,
    pub report: MonotonicityReport,
}

/// Solve `ψ ≡ |K|` for each `K` (strictly increasing, negative) and check
/// that the leaves move to the past as `K → 0⁻`: `u_{K₂} ≤ u_{K₁} + 1e-6`.
pub fn foliation_sweep(
    phi: &BoundaryFn,
    ks: &[f64],
    cfg: &SolverConfig,
    ring: &FoliationRing,
) -> Result<Foliation> {
    if ks.iter().any(|&k| !(k < 0.0)) || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("curvatures must be negative and strictly increasing".into()));
    }
    let env = Arc::new(Envelope::new(phi));
    let mut leaves = Vec::with_capacity(ks.len());
    for &k in ks {
        let psi = CurvatureField::constant(-k)?;
        let data = match ring {
            FoliationRing::SandwichMidpoint => sandwich_midpoint(Arc::clone(&env), -k),
            FoliationRing::Exact(f) => {
                let f = Arc::clone(f);
                Dirichlet::function(move |x, y| f(k, x, y))
            }
        };
        leaves.push(Solve::new(&psi, &data, cfg).envelope(&env).run()?);
    }
    let tol = 1e-6;
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst = None;
    for a in 0..leaves.len() {
        for b in a + 1..leaves.len() {
            let (u1, u2) = (&leaves[a].u, &leaves[b].u);
            let grid = u1.grid();
            for node in 0..grid.len() {
                if grid.kind(node) == NodeKind::Outside {
                    continue;
                }
                let d = u2.value(node) - u1.value(node);
                if d > max_violation {
                    max_violation = d;
                    let (x, y) = grid.point(node);
                    worst = Some((ks[a], ks[b], x, y));
                }
            }
        }
    }
    let report =
        MonotonicityReport { pass: max_violation <= tol || leaves.len() < 2, tol, max_violation, worst };
    Ok(Foliation { ks: ks.to_vec(), leaves, report })
}

#[derive(Debug, Clone)]
pub struct Continuation {
    pub radii: Vec<f64>,
    pub solutions: Vec<Solution>,
    /// `max |u_R − u_{R'}|` between consecutive stages, over the nodes of the
    /// larger grid that lie inside the smaller disc.
    pub increments: Vec<f64>,
}

/// Approach the full-disc problem through growing radii, each stage with the
/// sandwich-midpoint ring. The increments are reported, not hidden.
pub fn solve_with_continuation(
    phi: &BoundaryFn,
    psi: &CurvatureField,
    cfg: &SolverConfig,
    radii: &[f64],
) -> Result<Continuation> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    let env = Arc::new(Envelope::new(phi));
    let data = sandwich_midpoint(Arc::clone(&env), psi.lower());
    let mut solutions: Vec<Solution> = Vec::new();
    let mut increments = Vec::new();
    for &r in radii {
        let stage = SolverConfig { radius: r, ..cfg.clone() };
        let s = Solve::new(psi, &data, &stage).envelope(&env).run()?;
        if let Some(prev) = solutions.last() {
            let g = s.u.grid();
            let inner = prev.u.grid().radius();
            let mut inc: f64 = 0.0;
            for k in g.interior_nodes() {
                let (x, y) = g.point(k);
                if (x * x + y * y).sqrt() < inner {
                    if let Some(v) = prev.u.eval(x, y) {
                        inc = inc.max((v - s.u.value(k)).abs());
                    }
                }
            }
            increments.push(inc);
        }
        solutions.push(s);
    }
    Ok(Continuation { radii: radii.to_vec(), solutions, increments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::hyperboloid;

    #[test]
    fn affine_residual_is_minus_rhs() {
        let g = Arc::new(Grid::new(0.9, 33).unwrap());
        let u = GridSupportFn::from_fn(Arc::clone(&g), |x, y| 0.3 + x - 2.0 * y);
        let psi = CurvatureField::constant(2.0).unwrap();
        let r = residual(&u, &psi);
        for k in g.interior_nodes() {
            let (x, y) = g.point(k);
            assert_eq!(r.value(k), -psi.rhs(x, y));
        }
        assert!(curvature_recovery(&u).is_err());
    }

    #[test]
    fn ramp_curvature_is_recovered() {
        let psi = CurvatureField::new(|x, _| 1.0 + 0.5 * x, 0.5, 1.5).unwrap();
        let ring = Dirichlet::function(hyperboloid(1.0));
        let cfg = SolverConfig { n: 65, ..Default::default() };
        let sol = Solve::new(&psi, &ring, &cfg).run().unwrap();
        let est = curvature_recovery_within(&sol.u, 0.7).unwrap();
        let err = est.max_rel_err_within(0.7, |x, y| psi.eval(x, y));
        assert!(err < 0.03, "relative error {err}");
    }

    #[test]
    fn recovery_can_skip_a_nonconvex_rim() {
        // radial second derivative 1 − 3r² changes sign at r ≈ 0.577
        let g = Arc::new(Grid::new(0.9, 33).unwrap());
        let u = GridSupportFn::from_fn(Arc::clone(&g), |x, y| {
            let r2 = x * x + y * y;
            0.5 * r2 - 0.25 * r2 * r2
        });
        assert!(curvature_recovery(&u).is_err());
        let p = curvature_recovery_within(&u, 0.5).unwrap();
        for k in g.interior_nodes() {
            let (x, y) = g.point(k);
            assert_eq!(p.value(k).is_nan(), x * x + y * y > 0.25);
        }
    }

    #[test]
    fn paraboloid_recovers_unbounded_curvature() {
        let g = Arc::new(Grid::new(0.9, 33).unwrap());
        let u = GridSupportFn::from_fn(Arc::clone(&g), |x, y| 0.5 * (x * x + y * y));
        let p = curvature_recovery(&u).unwrap();
        for k in g.interior_nodes() {
            let (x, y) = g.point(k);
            let q = 1.0 - x * x - y * y;
            assert!((p.value(k) - 1.0 / (q * q)).abs() < 1e-9 / (q * q));
        }
    }

    #[test]
    fn exact_hyperboloid_residual_is_second_order() {
        let psi = CurvatureField::constant(1.0).unwrap();
        let errs: Vec<f64> = [65, 129]
            .iter()
            .map(|&n| {
                let g = Arc::new(Grid::new(0.9, n).unwrap());
                residual(&GridSupportFn::from_fn(g, hyperboloid(1.0)), &psi).max_abs()
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.8, "order {order}");
    }

    #[test]
    fn sandwich_of_cone_data() {
        let g = Arc::new(Grid::new(0.9, 33).unwrap());
        let phi = BoundaryFn::zero(64);
        let hyp = GridSupportFn::from_fn(Arc::clone(&g), hyperboloid(1.0));
        let rep = sandwich_check(&hyp, &phi, 1.0);
        assert!(rep.pass, "{rep:?}");
        assert!(rep.max_below_lower.abs() < 1e-12);
        let env = GridSupportFn::from_fn(g, |_, _| 0.0);
        let rep = sandwich_check(&env, &phi, 1.0);
        assert!(rep.pass && rep.max_above_envelope.abs() < 1e-12);
    }

    #[test]
    fn comparison_of_equal_functions() {
        let g = Arc::new(Grid::new(0.9, 33).unwrap());
        let u = GridSupportFn::from_fn(g, hyperboloid(1.0));
        let r = comparison_check(&u, &u).unwrap();
        assert!(r.pass && r.interior_min == 0.0);
    }

    #[test]
    fn singleton_foliation_is_vacuous() {
        let cfg = SolverConfig { n: 33, ..Default::default() };
        let f =
            foliation_sweep(&BoundaryFn::zero(64), &[-1.0], &cfg, &FoliationRing::SandwichMidpoint).unwrap();
        assert!(f.report.pass && f.report.worst.is_none());
        assert!(foliation_sweep(
            &BoundaryFn::zero(64),
            &[-1.0, -2.0],
            &cfg,
            &FoliationRing::SandwichMidpoint
        )
        .is_err());
    }
}
