//! Newton solver for the singular Monge-Ampère equation
//! `det D²u = (1/ψ)(1−|z|²)⁻²` on a sub-disc `|z| < R` with Dirichlet data
//! on the surrounding ring of grid nodes.
//!
//! The smooth branch uses the 9-point determinant. Steps are damped until the
//! residual decreases without losing discrete convexity. When that fails, or
//! when the initial guess has a non-positive 9-point determinant, the
//! iteration runs on the monotone wide-stencil form and tries to return to
//! the 9-point form once converged there.

pub mod banded;
mod checks;
mod config;
pub mod stencil;

use std::sync::Arc;

use crate::error::{Error, IterationLog, Result};
use crate::support::{Envelope, Grid, GridSupportFn, NodeKind};
use banded::BandMatrix;

pub use checks::{
    comparison_check, curvature_recovery, curvature_recovery_within, foliation_sweep, residual,
    sandwich_check, sandwich_midpoint, solve_with_continuation, ComparisonReport, Continuation, Foliation,
    FoliationRing, GridField, MonotonicityReport, SandwichReport,
};
pub use config::{InitMode, SolverConfig};

pub type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Prescribed curvature `ψ = |K|` with bounds `0 < a ≤ ψ ≤ b`.
#[derive(Clone)]
pub struct CurvatureField {
    psi: Field,
    lower: f64,
    upper: f64,
}

impl std::fmt::Debug for CurvatureField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CurvatureField")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish_non_exhaustive()
    }
}

impl CurvatureField {
    pub fn new(
        psi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lower: f64,
        upper: f64,
    ) -> Result<Self> {
        if !(lower > 0.0 && upper.is_finite() && lower <= upper) {
            return Err(Error::InvalidArgument(format!(
                "curvature bounds [{lower}, {upper}] must satisfy 0 < a <= b < inf"
            )));
        }
        Ok(CurvatureField { psi: Arc::new(psi), lower, upper })
    }

    pub fn constant(c: f64) -> Result<Self> {
        CurvatureField::new(move |_, _| c, c, c)
    }

    pub fn eval(&self, z1: f64, z2: f64) -> f64 {
        (self.psi)(z1, z2)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Right-hand side `(1/ψ)(1−|z|²)⁻²`.
    pub fn rhs(&self, z1: f64, z2: f64) -> f64 {
        let w = 1.0 - z1 * z1 - z2 * z2;
        1.0 / (self.eval(z1, z2) * w * w)
    }

    fn check_on(&self, grid: &Grid) -> Result<()> {
        let slack = 1e-12 * self.upper;
        for k in grid.interior_nodes() {
            let (x, y) = grid.point(k);
            let p = self.eval(x, y);
            if !(p >= self.lower - slack && p <= self.upper + slack) {
                return Err(Error::InvalidArgument(format!(
                    "psi({x}, {y}) = {p} outside [{}, {}]",
                    self.lower, self.upper
                )));
            }
        }
        Ok(())
    }
}

/// Dirichlet data on the ring.
#[derive(Clone)]
pub enum Dirichlet {
    /// A function of `z`, evaluated at the ring nodes themselves.
    Function(Field),
    /// Equally spaced samples on `|z| = R`, starting at angle 0; ring nodes
    /// take the periodic linear interpolant at their polar angle.
    Circle(Vec<f64>),
}

impl Dirichlet {
    pub fn function(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Dirichlet::Function(Arc::new(f))
    }

    pub fn value(&self, z1: f64, z2: f64) -> f64 {
        match self {
            Dirichlet::Function(f) => f(z1, z2),
            Dirichlet::Circle(s) => {
                let n = s.len();
                let t = z2.atan2(z1).rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU * n as f64;
                let k = (t.floor() as usize).min(n - 1);
                let w = t - k as f64;
                (1.0 - w) * s[k] + w * s[(k + 1) % n]
            }
        }
    }
}

/// A converged solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub u: GridSupportFn,
    pub log: Vec<IterationLog>,
    /// Final max-norm residual of the operator that was solved.
    pub residual: f64,
    /// Whether the returned iterate solves the monotone wide-stencil form
    /// rather than the 9-point form.
    pub monotone: bool,
    pub notes: Vec<String>,
}

impl Solution {
    /// CSV `z1,z2,u,det,psi_est` over interior nodes, row-major.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        let grid = self.u.grid();
        let n = grid.n() as isize;
        writeln!(w, "z1,z2,u,det,psi_est")?;
        for k in grid.interior_nodes() {
            let (x, y) = grid.point(k);
            let (i, j) = ((k as isize) % n, (k as isize) / n);
            let v = |di: isize, dj: isize| self.u.value_at(i + di, j + dj).unwrap_or(f64::NAN);
            let (det, _) = stencil::det9(v, grid.h());
            let q = 1.0 - x * x - y * y;
            writeln!(w, "{},{},{},{},{}", x, y, self.u.value(k), det, 1.0 / (q * q * det))?;
        }
        Ok(())
    }

    /// Convergence log, one `iteration residual damping branch` line per step.
    pub fn write_log<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "iteration,residual,damping,branch")?;
        for l in &self.log {
            let b = if l.monotone { "monotone" } else { "9-point" };
            writeln!(w, "{},{:e},{},{}", l.iteration, l.residual, l.damping, b)?;
        }
        Ok(())
    }
}

/// Solve with the configured initialisation.
pub fn solve(psi: &CurvatureField, ring: &Dirichlet, cfg: &SolverConfig) -> Result<Solution> {
    Solve::new(psi, ring, cfg).run()
}

/// A solve with optional extras: an envelope for [`InitMode::EnvelopeMinusCt`]
/// or an explicit initial guess.
pub struct Solve<'a> {
    psi: &'a CurvatureField,
    ring: &'a Dirichlet,
    cfg: &'a SolverConfig,
    envelope: Option<&'a Envelope>,
    initial: Option<&'a dyn Fn(f64, f64) -> f64>,
}

impl<'a> Solve<'a> {
    pub fn new(psi: &'a CurvatureField, ring: &'a Dirichlet, cfg: &'a SolverConfig) -> Self {
        Solve { psi, ring, cfg, envelope: None, initial: None }
    }

    pub fn envelope(mut self, env: &'a Envelope) -> Self {
        self.envelope = Some(env);
        self
    }

    /// Overrides the initialisation mode.
    pub fn initial_guess(mut self, f: &'a dyn Fn(f64, f64) -> f64) -> Self {
        self.initial = Some(f);
        self
    }

    pub fn run(self) -> Result<Solution> {
        let cfg = self.cfg;
        cfg.validate()?;
        let grid = Arc::new(Grid::with_reach(cfg.radius, cfg.n, cfg.reach())?);
        self.psi.check_on(&grid)?;
        let mut values = vec![f64::NAN; grid.len()];
        for k in grid.ring_nodes() {
            let (x, y) = grid.point(k);
            values[k] = self.ring.value(x, y);
        }
        let a = self.psi.lower();
        let mut warm_note = None;
        let warm = match (self.initial, cfg.init) {
            (None, InitMode::RadialSubsolution) => self.coarse_start(&mut warm_note),
            _ => None,
        };
        let init: Box<dyn Fn(f64, f64) -> f64> = match (self.initial, cfg.init) {
            (Some(f), _) => Box::new(f),
            (None, InitMode::RadialSubsolution) if warm.is_some() => warm.expect("checked"),
            (None, InitMode::RadialSubsolution) => {
                // affine fit of what the subsolution leaves over on the ring
                let ia = 1.0 / a.sqrt();
                let shape = move |x: f64, y: f64| -ia * (1.0 - x * x - y * y).sqrt();
                let mut rest = values.clone();
                for k in grid.ring_nodes() {
                    let (x, y) = grid.point(k);
                    rest[k] -= shape(x, y);
                }
                let [c0, c1, c2] = affine_fit(&grid, &rest)?;
                Box::new(move |x, y| c0 + c1 * x + c2 * y + shape(x, y))
            }
            (None, InitMode::EnvelopeMinusCt) => {
                let env = self.envelope.ok_or_else(|| {
                    Error::InvalidArgument("initMode envelope-minus-CT needs an envelope".into())
                })?;
                let ia = 1.0 / a.sqrt();
                Box::new(move |x, y| env.value(x, y) - ia * (1.0 - x * x - y * y).sqrt())
            }
        };
        for k in grid.interior_nodes() {
            let (x, y) = grid.point(k);
            values[k] = init(x, y);
        }
        let system = System::new(Arc::clone(&grid), self.psi, cfg.directions);
        let mut sol = system.newton(values, cfg)?;
        if let Some(note) = warm_note {
            sol.notes.insert(0, note);
        }
        Ok(sol)
    }

    /// Nested iteration: for `n > WARM_START_MIN` with `n − 1` even, solve on
    /// the grid of half the resolution (recursively) and interpolate with
    /// Catmull-Rom cubics. Cubic rather than bilinear interpolation keeps the
    /// second differences of the guess close to those of the solution.
    fn coarse_start(&self, note: &mut Option<String>) -> Option<Box<dyn Fn(f64, f64) -> f64 + 'a>> {
        let cfg = self.cfg;
        if cfg.n <= WARM_START_MIN || !(cfg.n - 1).is_multiple_of(2) {
            return None;
        }
        let coarse_cfg = SolverConfig { n: (cfg.n - 1) / 2 + 1, ..cfg.clone() };
        coarse_cfg.validate().ok()?;
        let coarse = Solve { cfg: &coarse_cfg, initial: None, ..*self };
        let sol = coarse.run().ok()?;
        *note = Some(format!(
            "warm start from the n = {} grid ({} iterations, {} form)",
            coarse_cfg.n,
            sol.log.len() - 1,
            if sol.monotone { "monotone" } else { "9-point" }
        ));
        let u = sol.u;
        let ring = self.ring;
        let (r, h) = (u.grid().radius(), u.grid().h());
        Some(Box::new(move |x: f64, y: f64| {
            let (fx, fy) = ((x + r) / h, (y + r) / h);
            let (i, j) = (fx.floor() as isize, fy.floor() as isize);
            let (tx, ty) = (fx - i as f64, fy - j as f64);
            let node = |a: isize, b: isize| {
                u.value_at(a, b).unwrap_or_else(|| ring.value(-r + a as f64 * h, -r + b as f64 * h))
            };
            let (wx, wy) = (catmull_rom(tx), catmull_rom(ty));
            let mut acc = 0.0;
            for (b, wyb) in wy.iter().enumerate() {
                for (a, wxa) in wx.iter().enumerate() {
                    acc += wxa * wyb * node(i - 1 + a as isize, j - 1 + b as isize);
                }
            }
            acc
        }))
    }
}

/// Grids at or below this size start from the configured guess directly.
const WARM_START_MIN: usize = 65;

/// Catmull-Rom weights of the nodes at offsets −1, 0, 1, 2 for `t ∈ [0, 1)`.
fn catmull_rom(t: f64) -> [f64; 4] {
    let (t2, t3) = (t * t, t * t * t);
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

/// Least-squares affine fit `c0 + c1 x + c2 y` of the ring data.
fn affine_fit(grid: &Grid, values: &[f64]) -> Result<[f64; 3]> {
    let mut ata = vec![vec![0.0; 3]; 3];
    let mut atb = vec![0.0; 3];
    for k in grid.ring_nodes() {
        let (x, y) = grid.point(k);
        let row = [1.0, x, y];
        for r in 0..3 {
            atb[r] += row[r] * values[k];
            for c in 0..3 {
                ata[r][c] += row[r] * row[c];
            }
        }
    }
    let c = crate::numeric::solve_dense(ata, atb)
        .ok_or_else(|| Error::InvalidArgument("ring too small for an affine fit".into()))?;
    Ok([c[0], c[1], c[2]])
}

/// Unknown numbering and right-hand side of the discrete problem.
struct System {
    grid: Arc<Grid>,
    nodes: Vec<usize>,
    unknown: Vec<usize>,
    rhs: Vec<f64>,
    directions: usize,
}

const NONE: usize = usize::MAX;

/// Tolerated negative second difference in an accepted 9-point solution.
const CONVEXITY_SLACK: f64 = 1e-10;

impl System {
    fn new(grid: Arc<Grid>, psi: &CurvatureField, directions: usize) -> Self {
        let nodes: Vec<usize> = grid.interior_nodes().collect();
        let mut unknown = vec![NONE; grid.len()];
        for (u, &k) in nodes.iter().enumerate() {
            unknown[k] = u;
        }
        let rhs = nodes
            .iter()
            .map(|&k| {
                let (x, y) = grid.point(k);
                psi.rhs(x, y)
            })
            .collect();
        System { grid, nodes, unknown, rhs, directions }
    }

    fn neighbour(&self, k: usize, (di, dj): (isize, isize)) -> Option<usize> {
        let n = self.grid.n() as isize;
        let (i, j) = ((k as isize) % n + di, (k as isize) / n + dj);
        match self.grid.kind_at(i, j) {
            NodeKind::Outside => None,
            _ => Some((j * n + i) as usize),
        }
    }

    /// Residual of the chosen operator and, optionally, its Jacobian.
    fn evaluate(&self, values: &[f64], wide: bool, jacobian: bool) -> (Vec<f64>, Option<BandMatrix>) {
        let h = self.grid.h();
        // half bandwidth: unknowns between a node and its farthest stencil partner
        let mut band = 0;
        let mut f = Vec::with_capacity(self.nodes.len());
        let mut rows = Vec::new();
        for (u, &k) in self.nodes.iter().enumerate() {
            let (det, row) = if wide {
                stencil::det_wide(|di, dj| self.neighbour(k, (di, dj)).map(|m| values[m]), h, self.directions)
            } else {
                stencil::det9(|di, dj| values[self.neighbour(k, (di, dj)).expect("ring covers stencil")], h)
            };
            f.push(det - self.rhs[u]);
            if jacobian {
                let mut entries = Vec::with_capacity(row.len());
                for (off, w) in row {
                    let m = self.neighbour(k, off).expect("stencil inside data");
                    let v = self.unknown[m];
                    if v != NONE {
                        band = band.max(v.abs_diff(u));
                        entries.push((v, w));
                    }
                }
                rows.push(entries);
            }
        }
        if !jacobian {
            return (f, None);
        }
        let mut m = BandMatrix::new(self.nodes.len(), band, band);
        for (u, entries) in rows.into_iter().enumerate() {
            for (v, w) in entries {
                m.add(u, v, w);
            }
        }
        (f, Some(m))
    }

    fn min_det9(&self, values: &[f64]) -> f64 {
        let h = self.grid.h();
        self.nodes
            .iter()
            .map(|&k| stencil::det9(|di, dj| values[self.neighbour(k, (di, dj)).unwrap()], h).0)
            .fold(f64::INFINITY, f64::min)
    }

    fn convexity(&self, values: &[f64]) -> f64 {
        GridSupportFn::new(Arc::clone(&self.grid), values.to_vec())
            .map(|g| g.min_second_difference())
            .unwrap_or(f64::NEG_INFINITY)
    }

    /// 9-point Newton from a convex-determinant guess, else the monotone form.
    fn newton(&self, values: Vec<f64>, cfg: &SolverConfig) -> Result<Solution> {
        let mut log = Vec::new();
        let mut notes = Vec::new();
        if self.min_det9(&values) > 0.0 {
            if let Ok((v, res)) = self.smooth(values.clone(), cfg, cfg.newton_tol, &mut log) {
                return self.finish(v, log, notes, res, false);
            }
            notes.push("9-point Newton from the initial guess failed".into());
        } else {
            notes.push("initial guess has a non-positive 9-point determinant".into());
        }
        self.monotone_newton(values, cfg, log, notes)
    }

    /// 9-point Newton with no fallback. Iterations are appended to `log`.
    fn smooth(
        &self,
        mut values: Vec<f64>,
        cfg: &SolverConfig,
        tol: f64,
        log: &mut Vec<IterationLog>,
    ) -> Result<(Vec<f64>, f64)> {
        let l2 = |f: &[f64]| f.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (mut best, mut since_best) = (f64::INFINITY, 0usize);
        for _ in 0..=cfg.max_iters {
            let (f, jac) = self.evaluate(&values, false, true);
            let res = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            log.push(IterationLog { iteration: log.len(), residual: res, damping: 0.0, monotone: false });
            if res < tol {
                // det9 matches the positive right-hand side here; a concave or
                // saddle-shaped root is still possible and is rejected
                let convexity = self.convexity(&values);
                if convexity < -CONVEXITY_SLACK {
                    return Err(Error::NotConvex(convexity));
                }
                return Ok((values, res));
            }
            if res < 0.5 * best {
                best = res;
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= 8 {
                    break;
                }
            }
            let lu = jac.expect("requested").factorize()?;
            let delta = lu.solve(&f.iter().map(|v| -v).collect::<Vec<_>>());
            let (next, alpha) =
                self.line_search(&values, &delta, false, l2(&f), cfg.damping).ok_or_else(|| {
                    Error::NoConvergence { iterations: log.len(), residual: res, trace: vec![] }
                })?;
            log.last_mut().expect("pushed").damping = alpha;
            values = next;
        }
        let residual = log.last().map_or(f64::NAN, |l| l.residual);
        Err(Error::NoConvergence { iterations: cfg.max_iters, residual, trace: vec![] })
    }

    /// Newton on the monotone wide-stencil form, then a 9-point polish.
    fn monotone_newton(
        &self,
        mut values: Vec<f64>,
        cfg: &SolverConfig,
        mut log: Vec<IterationLog>,
        mut notes: Vec<String>,
    ) -> Result<Solution> {
        let mut best = f64::INFINITY;
        let mut since_best = 0usize;
        let max_abs = |f: &[f64]| f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let l2 = |f: &[f64]| f.iter().map(|v| v * v).sum::<f64>().sqrt();
        for _ in 0..=cfg.max_iters {
            let (f, jac) = self.evaluate(&values, true, true);
            let res = max_abs(&f);
            let slot = log.len();
            log.push(IterationLog { iteration: slot, residual: res, damping: 0.0, monotone: true });
            if res < cfg.newton_tol {
                let saved = values.clone();
                let mut polish_log = Vec::new();
                if let Ok((v, r)) = self.smooth(values, cfg, cfg.newton_tol, &mut polish_log) {
                    for mut l in polish_log {
                        l.iteration = log.len();
                        log.push(l);
                    }
                    notes.push("monotone branch used; final iterate solves the 9-point form".into());
                    return self.finish(v, log, notes, r, false);
                }
                notes.push("monotone branch used; 9-point polish did not converge".into());
                return self.finish(saved, log, notes, res, true);
            }
            if res < 0.5 * best {
                best = res;
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= 8 {
                    break;
                }
            }
            let step = jac
                .expect("requested")
                .factorize()
                .map(|lu| lu.solve(&f.iter().map(|v| -v).collect::<Vec<_>>()));
            let Some((next, alpha)) =
                step.ok().and_then(|d| self.line_search(&values, &d, true, l2(&f), cfg.damping))
            else {
                break;
            };
            log[slot].damping = alpha;
            values = next;
        }
        let residual = log.last().map_or(f64::NAN, |l| l.residual);
        Err(Error::NoConvergence { iterations: log.len(), residual, trace: log })
    }

    /// Halve the step until the residual decreases and convexity is not lost.
    fn line_search(
        &self,
        values: &[f64],
        delta: &[f64],
        wide: bool,
        norm0: f64,
        damping: f64,
    ) -> Option<(Vec<f64>, f64)> {
        let floor = self.convexity(values).min(-1e-8);
        let mut alpha = damping;
        while alpha >= 1.0 / 1024.0 {
            let mut cand = values.to_vec();
            for (u, &k) in self.nodes.iter().enumerate() {
                cand[k] += alpha * delta[u];
            }
            if wide || self.convexity(&cand) >= floor {
                let (f, _) = self.evaluate(&cand, wide, false);
                let norm: f64 = f.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm < (1.0 - 1e-4 * alpha) * norm0 || norm == 0.0 {
                    return Some((cand, alpha));
                }
            }
            alpha *= 0.5;
        }
        None
    }

    fn finish(
        &self,
        values: Vec<f64>,
        log: Vec<IterationLog>,
        notes: Vec<String>,
        residual: f64,
        monotone: bool,
    ) -> Result<Solution> {
        let u = GridSupportFn::new(Arc::clone(&self.grid), values)?;
        Ok(Solution { u, log, residual, monotone, notes })
    }
}
