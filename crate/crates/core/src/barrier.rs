//! Constant-curvature surfaces invariant under a parabolic group.
//!
//! Fix a null frame `(v₀, v₁, v₂)` and the parabolic one-parameter group
//! `A_t` fixing `v₀`. The orbit of `γ₀(s) = (√2/2)(eˢv₀ + e⁻ˢv₁)` sweeps ℍ² as
//! `σ(t,s) = A_t γ₀(s)`. An `A_t`-invariant support function is a function
//! `f(s)` alone, and constant curvature `K` becomes the ODE
//! `(f″ − f)(−f′ − f) = 1/|K|`. With `g = −f′ − f` this integrates to
//! `g(s) = √(1/|K| + C e^{2s})` and
//!
//! * `C > 0`: `f = −g/2 − e⁻ˢ asinh(√(C|K|) eˢ) / (2|K|√C) + (D − D₀) e⁻ˢ`,
//! * `C < 0`: `f = −g/2 − e⁻ˢ asin(√(|C||K|) eˢ) / (2|K|√|C|) + D e⁻ˢ`,
//!   defined up to the cap `s* = ½ log(1/|CK|)`,
//! * `C = 0`: `f = −1/√|K| + D e⁻ˢ` (the hyperboloid for `D = 0`).
//!
//! For `C > 0`, `D₀ = log(C/|K|) / (4|K|√C)` is the value for which the
//! support function vanishes at every ideal point except `[v₀]`, where it
//! equals `−√C`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::mink::{inner, klein_up, DiscPoint, MinkVec3, NullFrame};
use crate::support::SupportFn;

/// Parameters of one barrier surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierParams {
    k: f64,
    c: f64,
    d: f64,
    frame: NullFrame,
}

impl BarrierParams {
    /// The normalised surface: `D = D₀` (see the module docs).
    pub fn new(k: f64, c: f64, frame: NullFrame) -> Result<Self> {
        if !(k < 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!("curvature K = {k} must be negative")));
        }
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!("C = {c} must be finite")));
        }
        let frame = NullFrame::new(frame.v0, frame.v1, frame.v2)?;
        Ok(BarrierParams { k, c, d: normalization(k, c), frame })
    }

    /// Override the constant `D` (adds `(D − D₀) e⁻ˢ` to `f`).
    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn frame(&self) -> &NullFrame {
        &self.frame
    }

    /// Upper end of the `s`-domain: `½ log(1/|CK|)` for `C < 0`, else `+∞`.
    pub fn cap(&self) -> f64 {
        if self.c < 0.0 {
            0.5 * (1.0 / (self.c * self.k).abs()).ln()
        } else {
            f64::INFINITY
        }
    }

    fn check(&self, s: f64) -> Result<()> {
        if !s.is_finite() || s > self.cap() {
            return Err(Error::BarrierDomain { s, cap: self.cap() });
        }
        Ok(())
    }

    fn kappa(&self) -> f64 {
        -self.k
    }

    /// `(A, A′, A″, B)` with `f = −g/2 − B e⁻ˢ A(s) + (D − D₀) e⁻ˢ`.
    fn transcendental(&self, s: f64) -> (f64, f64, f64, f64) {
        let kappa = self.kappa();
        let c = self.c;
        if c == 0.0 {
            return (0.0, 0.0, 0.0, 0.0);
        }
        let q = (c.abs() * kappa).sqrt();
        let y = q * s.exp();
        let b = 1.0 / (2.0 * kappa * c.abs().sqrt());
        if c > 0.0 {
            let r = (1.0 + y * y).sqrt();
            (y.asinh(), y / r, y / (r * r * r), b)
        } else {
            let r = (1.0 - y * y).max(0.0).sqrt();
            (y.min(1.0).asin(), y / r, y / (r * r * r), b)
        }
    }

    fn extra(&self) -> f64 {
        self.d - normalization(self.k, self.c)
    }
}

/// The constant `D₀`: `log(C/|K|)/(4|K|√C)` for `C > 0`, and `0` otherwise.
pub fn normalization(k: f64, c: f64) -> f64 {
    if c > 0.0 {
        (c / -k).ln() / (4.0 * -k * c.sqrt())
    } else {
        0.0
    }
}

/// `D₀` for `C > 0` recomputed from the limit condition `e^s f(s) → 0` as
/// `s → −∞`, by quadrature: `D = −F(0) − ∫_{−∞}^0 eˣ g(x) dx` where
/// `F(s) = −eˢg(s)/2 − log(√C g(s) + C eˢ)/(2|K|√C)`. The integral is
/// `∫_0^1 √(1/|K| + C y²) dy`, evaluated by composite Simpson.
pub fn normalization_quadrature(k: f64, c: f64) -> f64 {
    let kappa = -k;
    let g = |s: f64| (1.0 / kappa + c * (2.0 * s).exp()).sqrt();
    let f0 = -0.5 * g(0.0) - (c.sqrt() * g(0.0) + c).ln() / (2.0 * kappa * c.sqrt());
    let n = 20_000;
    let h = 1.0 / n as f64;
    let integrand = |y: f64| (1.0 / kappa + c * y * y).sqrt();
    let mut sum = integrand(0.0) + integrand(1.0);
    for i in 1..n {
        sum += integrand(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    -f0 - sum * h / 3.0
}

pub fn barrier_g(s: f64, p: &BarrierParams) -> Result<f64> {
    p.check(s)?;
    Ok((1.0 / p.kappa() + p.c * (2.0 * s).exp()).max(0.0).sqrt())
}

pub fn barrier_g_prime(s: f64, p: &BarrierParams) -> Result<f64> {
    let g = barrier_g(s, p)?;
    Ok(p.c * (2.0 * s).exp() / g)
}

pub fn barrier_f(s: f64, p: &BarrierParams) -> Result<f64> {
    let g = barrier_g(s, p)?;
    let (a, _, _, b) = p.transcendental(s);
    let e = (-s).exp();
    if p.c == 0.0 {
        return Ok(-g + p.extra() * e);
    }
    Ok(-0.5 * g - b * e * a + p.extra() * e)
}

/// `f′`, differentiated term by term from the closed form.
pub fn barrier_f_prime(s: f64, p: &BarrierParams) -> Result<f64> {
    let g1 = barrier_g_prime(s, p)?;
    let (a, a1, _, b) = p.transcendental(s);
    let e = (-s).exp();
    if p.c == 0.0 {
        return Ok(-p.extra() * e);
    }
    Ok(-0.5 * g1 + b * e * (a - a1) - p.extra() * e)
}

/// `f″`, differentiated term by term from the closed form.
pub fn barrier_f_second(s: f64, p: &BarrierParams) -> Result<f64> {
    let g = barrier_g(s, p)?;
    let g1 = barrier_g_prime(s, p)?;
    let (a, a1, a2, b) = p.transcendental(s);
    let e = (-s).exp();
    if p.c == 0.0 {
        return Ok(p.extra() * e);
    }
    let g2 = p.c * (2.0 * s).exp() * (2.0 * g - g1) / (g * g);
    Ok(-0.5 * g2 - b * e * (a - a1) + b * e * (a1 - a2) + p.extra() * e)
}

/// `(f″ − f)(−f′ − f) − 1/|K|` from the closed-form derivatives.
pub fn ode_residual(s: f64, p: &BarrierParams) -> Result<f64> {
    let f = barrier_f(s, p)?;
    let f1 = barrier_f_prime(s, p)?;
    let f2 = barrier_f_second(s, p)?;
    Ok((f2 - f) * (-f1 - f) - 1.0 / p.kappa())
}

/// The same residual with `f′, f″` from fourth-order central differences of
/// `f` with step `h` (`h = 1e-2` keeps both truncation and rounding far
/// below `1e-6` for `|s| ≤ 3`). Near the cap, where `f` has a square-root
/// singularity, the step shrinks to 1/32 of the distance to it.
pub fn ode_residual_fd(s: f64, p: &BarrierParams, h: f64) -> Result<f64> {
    let h = h.min((p.cap() - s) / 32.0);
    let f = |k: f64| barrier_f(s + k * h, p);
    let (fm2, fm1, f0, fp1, fp2) = (f(-2.0)?, f(-1.0)?, f(0.0)?, f(1.0)?, f(2.0)?);
    let f1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let f2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    Ok((f2 - f0) * (-f1 - f0) - 1.0 / p.kappa())
}

/// `f` continued past the cap for `C < 0` by `−(π/4) e⁻ˢ/(|K|√|C|)`, the
/// support function of the point where the surface meets the light cone.
pub fn barrier_f_extended(s: f64, p: &BarrierParams) -> Result<f64> {
    if s > p.cap() && s.is_finite() {
        let b = std::f64::consts::FRAC_PI_4 / (p.kappa() * p.c.abs().sqrt());
        return Ok((-b + p.extra()) * (-s).exp());
    }
    barrier_f(s, p)
}

/// For `C < 0`: the point `β v₀` where the surface meets the light cone at
/// the cap, `β = √2 (π/4)/(|K|√|C|)`. `None` for `C ≥ 0`.
pub fn cap_point(p: &BarrierParams) -> Option<MinkVec3> {
    (p.c < 0.0).then(|| {
        let beta = std::f64::consts::SQRT_2 * std::f64::consts::FRAC_PI_4 / (p.kappa() * p.c.abs().sqrt());
        p.frame.v0 * beta
    })
}

/// `σ(t,s) = A_t γ₀(s)`, a point of ℍ².
pub fn orbit_point(t: f64, s: f64, frame: &NullFrame) -> MinkVec3 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a_t_v1 = frame.v0 * (0.5 * t * t) + frame.v1 + frame.v2 * t;
    (frame.v0 * s.exp() + a_t_v1 * (-s).exp()) * h
}

/// The point of the surface with normal `σ(t,s)`:
/// `(√2/2)(−(g+2f)eˢ v₀ + g e⁻ˢ A_t v₁)`.
pub fn barrier_surface_point(t: f64, s: f64, p: &BarrierParams) -> Result<MinkVec3> {
    let g = barrier_g(s, p)?;
    let f = barrier_f(s, p)?;
    let fr = &p.frame;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a_t_v1 = fr.v0 * (0.5 * t * t) + fr.v1 + fr.v2 * t;
    Ok((fr.v0 * (-(g + 2.0 * f) * s.exp()) + a_t_v1 * (g * (-s).exp())) * h)
}

/// Horocyclic coordinates `(t, s)` of a point of ℍ²: `e⁻ˢ = −√2⟨x,v₀⟩`,
/// `t = √2⟨x,v₂⟩eˢ`.
pub fn chart(x: MinkVec3, frame: &NullFrame) -> Result<(f64, f64)> {
    let a = -std::f64::consts::SQRT_2 * inner(x, frame.v0);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::ChartInversion { z1: x.x1 / x.x3, z2: x.x2 / x.x3 });
    }
    let s = -a.ln();
    Ok((std::f64::consts::SQRT_2 * inner(x, frame.v2) / a, s))
}

/// `u(z) = f(s)·√(1−|z|²)` where `s` is the chart coordinate of `klein_up(z)`;
/// for `C < 0` the continuation past the cap is used.
pub fn barrier_support_on_disc(z: DiscPoint, p: &BarrierParams) -> Result<f64> {
    let x = klein_up(z)?;
    let (_, s) = chart(x, &p.frame)?;
    Ok(barrier_f_extended(s, p)? / x.x3)
}

/// The barrier's disc support as a [`SupportFn`].
#[derive(Debug, Clone, Copy)]
pub struct BarrierSupport {
    pub params: BarrierParams,
    pub step: f64,
}

impl BarrierSupport {
    pub fn new(params: BarrierParams) -> Self {
        BarrierSupport { params, step: 1e-4 }
    }
}

impl SupportFn for BarrierSupport {
    fn eval(&self, z1: f64, z2: f64) -> Option<f64> {
        let z = DiscPoint::new(z1, z2).ok()?;
        if z.norm_sq() >= 1.0 {
            return None;
        }
        barrier_support_on_disc(z, &self.params).ok()
    }

    fn fd_step(&self) -> f64 {
        self.step
    }

    fn max_radius(&self) -> f64 {
        1.0
    }
}

/// Height `x₃` of the surface over the horizontal point `(p1, p2)`, found by
/// damped Newton in `(t, s)` seeded with the chart coordinates of
/// `(p, √(1+|p|²))`.
pub fn barrier_graph_height(p1: f64, p2: f64, p: &BarrierParams) -> Result<f64> {
    let seed = MinkVec3::new(p1, p2, (1.0 + p1 * p1 + p2 * p2).sqrt());
    let (mut t, mut s) = chart(seed, &p.frame)?;
    s = s.min(p.cap() - 1e-9);
    let fail = || Error::ChartInversion { z1: p1, z2: p2 };
    let miss = |t: f64, s: f64| -> Result<(f64, f64)> {
        let q = barrier_surface_point(t, s, p)?;
        Ok((q.x1 - p1, q.x2 - p2))
    };
    let scale = 1.0 + (p1 * p1 + p2 * p2).sqrt();
    for _ in 0..200 {
        let (r1, r2) = miss(t, s)?;
        let norm = r1.hypot(r2);
        if norm < 1e-12 * scale {
            return Ok(barrier_surface_point(t, s, p)?.x3);
        }
        let h = 1e-6;
        let (a1, a2) = miss(t + h, s)?;
        let (b1, b2) = miss(t, s + h)?;
        let (j11, j21) = ((a1 - r1) / h, (a2 - r2) / h);
        let (j12, j22) = ((b1 - r1) / h, (b2 - r2) / h);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return Err(fail());
        }
        let dt = -(j22 * r1 - j12 * r2) / det;
        let ds = -(-j21 * r1 + j11 * r2) / det;
        let mut lambda = 1.0;
        loop {
            let (nt, ns) = (t + lambda * dt, s + lambda * ds);
            if ns <= p.cap() {
                if let Ok((q1, q2)) = miss(nt, ns) {
                    if q1.hypot(q2) < norm {
                        t = nt;
                        s = ns;
                        break;
                    }
                }
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                return Err(fail());
            }
        }
    }
    Err(fail())
}

/// Comparison of the finite-difference first fundamental form with the
/// closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// Max relative error of `⟨∂ₛ, ∂ₛ⟩` against `(f″ − f)²`.
    pub ss_rel_err: f64,
    /// Max relative error of `⟨∂ₜ, ∂ₜ⟩` against `½ e^{−2s} g²`.
    pub tt_rel_err: f64,
    /// Max `|⟨∂ₛ, ∂ₜ⟩|` relative to `√(EG)`.
    pub off_diagonal: f64,
    /// For `C > 0`: max relative error of `dr/ds` and of `(C/2)cosh²(r√|K|)`
    /// after the change of variables `r(s)`.
    pub profile_rel_err: Option<f64>,
    pub pass: bool,
}

/// Sample the metric on an `nt × ns` grid over `[t0,t1] × [s0,s1]` (the
/// `s`-range is clipped below the cap) and compare with the closed forms at
/// relative tolerance `1e-4`.
pub fn induced_metric_check(
    p: &BarrierParams,
    (t0, t1): (f64, f64),
    (s0, s1): (f64, f64),
    (nt, ns): (usize, usize),
) -> Result<MetricReport> {
    let s1 = s1.min(p.cap() - 0.05);
    if !(s0 < s1) || nt < 2 || ns < 2 {
        return Err(Error::InvalidArgument("empty sampling grid".into()));
    }
    let h = 1e-5;
    let kappa = p.kappa();
    let r_of = |s: f64| (1.0 / (1.0 + kappa * p.c * (2.0 * s).exp()).sqrt()).atanh() / kappa.sqrt();
    let (mut ess, mut ett, mut off, mut prof) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..nt {
        let t = t0 + (t1 - t0) * i as f64 / (nt - 1) as f64;
        for j in 0..ns {
            let s = s0 + (s1 - s0) * j as f64 / (ns - 1) as f64;
            let ds = (barrier_surface_point(t, s + h, p)? - barrier_surface_point(t, s - h, p)?) * (0.5 / h);
            let dt = (barrier_surface_point(t + h, s, p)? - barrier_surface_point(t - h, s, p)?) * (0.5 / h);
            let (e, f, g) = (inner(ds, ds), inner(ds, dt), inner(dt, dt));
            let gg = barrier_g(s, p)?;
            let e_exact = (barrier_f_second(s, p)? - barrier_f(s, p)?).powi(2);
            let g_exact = 0.5 * (-2.0 * s).exp() * gg * gg;
            ess = ess.max((e - e_exact).abs() / e_exact);
            ett = ett.max((g - g_exact).abs() / g_exact);
            off = off.max(f.abs() / (e * g).sqrt());
            if p.c > 0.0 {
                let drds = (r_of(s + h) - r_of(s - h)) / (2.0 * h);
                prof = prof.max((drds * drds - e).abs() / e);
                let r = r_of(s);
                let c2 = 0.5 * p.c * (r * kappa.sqrt()).cosh().powi(2);
                prof = prof.max((c2 - g).abs() / g);
            }
        }
    }
    let profile_rel_err = (p.c > 0.0).then_some(prof);
    let tol = 1e-4;
    let pass = ess < tol && ett < tol && off < 1e-8 && profile_rel_err.is_none_or(|e| e < tol);
    Ok(MetricReport { ss_rel_err: ess, tt_rel_err: ett, off_diagonal: off, profile_rel_err, pass })
}

/// OBJ mesh of the surface over an `nt × ns` grid in `(t, s)`: vertices and
/// quad faces, no normals.
pub fn write_obj<W: Write>(
    p: &BarrierParams,
    (t0, t1): (f64, f64),
    (s0, s1): (f64, f64),
    (nt, ns): (usize, usize),
    mut w: W,
) -> Result<()> {
    let s1 = s1.min(p.cap());
    if nt < 2 || ns < 2 || !(s0 < s1) {
        return Err(Error::InvalidArgument("mesh needs at least 2x2 samples".into()));
    }
    writeln!(w, "# barrier K={} C={} D={}", p.k, p.c, p.d)?;
    for j in 0..ns {
        let s = s0 + (s1 - s0) * j as f64 / (ns - 1) as f64;
        for i in 0..nt {
            let t = t0 + (t1 - t0) * i as f64 / (nt - 1) as f64;
            let q = barrier_surface_point(t, s, p)?;
            writeln!(w, "v {} {} {}", q.x1, q.x2, q.x3)?;
        }
    }
    for j in 0..ns - 1 {
        for i in 0..nt - 1 {
            let a = j * nt + i + 1;
            writeln!(w, "f {} {} {} {}", a, a + 1, a + 1 + nt, a + nt)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mink::parabolic_isometry;

    fn params(k: f64, c: f64) -> BarrierParams {
        BarrierParams::new(k, c, NullFrame::standard(0.0)).unwrap()
    }

    #[test]
    fn g_examples() {
        let p = params(-1.0, 0.0);
        for s in [-3.0, 0.0, 2.0] {
            assert_eq!(barrier_g(s, &p).unwrap(), 1.0);
        }
        assert!((barrier_g(0.0, &params(-1.0, 1.0)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        for &(k, c) in &[(-1.0, 1.0), (-4.0, -0.5), (-1.0, 3.0)] {
            let p = params(k, c);
            for s in [-2.0, -1.0, -0.5] {
                let h = 1e-5;
                let fd = (barrier_g(s + h, &p).unwrap() - barrier_g(s - h, &p).unwrap()) / (2.0 * h);
                assert!((fd - barrier_g_prime(s, &p).unwrap()).abs() < 1e-8);
                let g = barrier_g(s, &p).unwrap();
                assert!((g * (g - barrier_g_prime(s, &p).unwrap()) + 1.0 / k).abs() < 1e-12);
            }
        }
        assert!(matches!(barrier_g(1.0, &params(-1.0, -0.5)), Err(Error::BarrierDomain { .. })));
    }

    #[test]
    fn f_examples() {
        let p = params(-1.0, 0.0);
        assert_eq!(barrier_f(0.7, &p).unwrap(), -1.0);
        let p = params(-1.0, 1.0);
        assert_eq!(p.d(), 0.0);
        let want = -(2f64.sqrt()) / 2.0 - 0.5 * (1.0 + 2f64.sqrt()).ln();
        assert!((barrier_f(0.0, &p).unwrap() - want).abs() < 1e-15);
        assert!((want + 1.14779357).abs() < 1e-8);
        for &(k, c) in &[(-1.0, 1.0), (-4.0, 1.0), (-1.0, -0.5), (-4.0, 0.0)] {
            let p = params(k, c).with_d(0.3);
            for s in [-2.5, -1.0, 0.0, 0.2] {
                let f = barrier_f(s, &p).unwrap();
                let f1 = barrier_f_prime(s, &p).unwrap();
                let g = barrier_g(s, &p).unwrap();
                assert!((f1 + f + g).abs() < 1e-12);
                let h = 1e-5;
                let fd = (barrier_f(s + h, &p).unwrap() - barrier_f(s - h, &p).unwrap()) / (2.0 * h);
                assert!((fd - f1).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn normalisation_matches_quadrature() {
        for &(k, c) in &[(-1.0, 1.0), (-4.0, 1.0), (-1.0, 0.25), (-2.0, 3.0)] {
            let q = normalization_quadrature(k, c);
            assert!((q - normalization(k, c)).abs() < 1e-12, "{k} {c}: {q}");
        }
    }

    #[test]
    fn residuals_vanish() {
        assert_eq!(ode_residual(0.3, &params(-1.0, 0.0)).unwrap(), 0.0);
        for &(k, c) in &[(-1.0, 1.0), (-1.0, -0.5), (-4.0, 1.0), (-4.0, -0.5)] {
            let p = params(k, c);
            let top = (p.cap() - 0.05).min(3.0);
            for i in 0..64 {
                let s = -3.0 + (top + 3.0) * i as f64 / 63.0;
                assert!(ode_residual(s, &p).unwrap().abs() < 1e-12, "{k} {c} {s}");
                let fd = ode_residual_fd(s, &p, 1e-2).unwrap();
                assert!(fd.abs() < 1e-6, "{k} {c} {s} {fd}");
            }
        }
    }

    #[test]
    fn surface_points() {
        let p = params(-1.0, 0.0);
        let fr = *p.frame();
        let q = barrier_surface_point(0.0, 0.0, &p).unwrap();
        let g0 = (fr.v0 + fr.v1) * std::f64::consts::FRAC_1_SQRT_2;
        assert!(q.euclidean_dist(g0) < 1e-15);
        let p4 = params(-4.0, 0.0);
        let q = barrier_surface_point(0.3, -0.4, &p4).unwrap();
        assert!(q.euclidean_dist(orbit_point(0.3, -0.4, &fr) * 0.5) < 1e-15);

        let p = params(-1.0, 1.0);
        for i in -4..=4 {
            for j in -4..=4 {
                let (t, s) = (i as f64 * 0.7, j as f64 * 0.6);
                let (g, f) = (barrier_g(s, &p).unwrap(), barrier_f(s, &p).unwrap());
                let two_z = -(g + 2.0 * f) * s.exp() + g * (-s).exp() * (0.5 * t * t + 1.0);
                let q = barrier_surface_point(t, s, &p).unwrap();
                assert!((2.0 * q.x3 - two_z).abs() < 1e-10 * (1.0 + two_z.abs()));
            }
        }
    }

    #[test]
    fn parabolic_invariance() {
        let frame = NullFrame::standard(0.8);
        let p = BarrierParams::new(-1.0, 1.0, frame).unwrap();
        for &tau in &[0.5, -1.3] {
            let a = parabolic_isometry(tau, &frame).unwrap();
            for &(t, s) in &[(0.0, 0.0), (1.0, -1.0), (-2.0, 0.5)] {
                let lhs = barrier_surface_point(t + tau, s, &p).unwrap();
                let rhs = a.apply(barrier_surface_point(t, s, &p).unwrap());
                assert!(lhs.euclidean_dist(rhs) < 1e-12 * (1.0 + lhs.x3.abs()));
            }
        }
    }

    #[test]
    fn properness() {
        let p = params(-1.0, 1.0);
        let min_height = |m: f64| {
            (0..400)
                .map(|i| {
                    let a = i as f64 / 400.0 * std::f64::consts::TAU;
                    let (t, s) = (a.cos(), a.sin());
                    let l = t.abs() + s.abs();
                    barrier_surface_point(m * t / l, m * s / l, &p).unwrap().x3
                })
                .fold(f64::INFINITY, f64::min)
        };
        let hs: Vec<f64> = [5.0, 10.0, 20.0].iter().map(|&m| min_height(m)).collect();
        assert!(hs[0] < hs[1] && hs[1] < hs[2], "{hs:?}");
    }

    #[test]
    fn disc_support() {
        let p = params(-1.0, 0.0);
        assert!(
            (barrier_support_on_disc(DiscPoint::new(0.0, 0.0).unwrap(), &p).unwrap() + 1.0).abs() < 1e-15
        );
        let p4 = params(-4.0, 0.0);
        let z = DiscPoint::new(0.3, -0.5).unwrap();
        let want = -0.5 * (1.0 - z.norm_sq()).sqrt();
        assert!((barrier_support_on_disc(z, &p4).unwrap() - want).abs() < 1e-14);
        // u is the support function of the surface: ⟨G⁻¹(x), x⟩ = ū(x)
        let p = params(-1.0, 1.0);
        for &(t, s) in &[(0.0, 0.0), (0.7, -1.2), (-1.5, 1.1)] {
            let x = orbit_point(t, s, p.frame());
            let y = barrier_surface_point(t, s, &p).unwrap();
            let z = DiscPoint::new(x.x1 / x.x3, x.x2 / x.x3).unwrap();
            let u = barrier_support_on_disc(z, &p).unwrap();
            assert!((inner(y, x) - u * x.x3).abs() < 1e-12 * (1.0 + x.x3));
            let (tt, ss) = chart(x, p.frame()).unwrap();
            assert!((tt - t).abs() < 1e-12 && (ss - s).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_c_cap() {
        let p = params(-1.0, -0.5);
        let cap = p.cap();
        let b = std::f64::consts::FRAC_PI_4;
        assert!((barrier_f(cap, &p).unwrap() + b).abs() < 1e-10);
        assert!((barrier_f_extended(cap + 1e-12, &p).unwrap() + b).abs() < 1e-10);
        // the cap point is where the surface meets the light cone
        let q = barrier_surface_point(0.0, cap, &p).unwrap();
        let want = cap_point(&p).unwrap();
        assert!(q.euclidean_dist(want) < 1e-10);
        assert!(q.euclidean_dist(barrier_surface_point(3.0, cap, &p).unwrap()) < 1e-10);
        assert!(cap_point(&params(-1.0, 1.0)).is_none());
        assert!(q.norm_sq().abs() < 1e-10);
        // beyond the cap the support is that of the cone point: affine in z
        let u = |z1: f64, z2: f64| barrier_support_on_disc(DiscPoint::new(z1, z2).unwrap(), &p).unwrap();
        let (a, bb, c) = (u(0.95, 0.0), u(0.97, 0.01), u(0.96, -0.01));
        let (za, zb, zc) = ([0.95, 0.0], [0.97, 0.01], [0.96, -0.01]);
        for (v, z) in [(a, za), (bb, zb), (c, zc)] {
            assert!((v - inner(want, MinkVec3::new(z[0], z[1], 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn metric() {
        let r = induced_metric_check(&params(-1.0, 0.0), (-2.0, 2.0), (-2.0, 2.0), (9, 9)).unwrap();
        assert!(r.pass && r.profile_rel_err.is_none(), "{r:?}");
        let r = induced_metric_check(&params(-1.0, 1.0), (-2.0, 2.0), (-2.0, 2.0), (9, 9)).unwrap();
        assert!(r.pass && r.off_diagonal < 1e-8, "{r:?}");
        let r = induced_metric_check(&params(-4.0, 1.0), (-2.0, 2.0), (-2.0, 2.0), (9, 9)).unwrap();
        assert!(r.pass, "{r:?}");
        let r = induced_metric_check(&params(-1.0, -0.5), (-2.0, 2.0), (-2.0, 2.0), (9, 9)).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn curvature_is_constant() {
        use crate::support::curvature;
        for &(k, c, th) in &[(-1.0, 1.0, 0.0), (-4.0, 1.0, 1.0), (-1.0, 2.0, -2.0)] {
            let b = BarrierSupport::new(BarrierParams::new(k, c, NullFrame::standard(th)).unwrap());
            for &(x, y) in &[(0.0, 0.0), (0.5, 0.2), (-0.6, 0.3), (0.1, -0.7)] {
                let got = curvature(&b, DiscPoint::new(x, y).unwrap()).unwrap();
                assert!(((got - k) / k).abs() < 1e-3, "{k} {c} ({x},{y}): {got}");
            }
        }
    }

    #[test]
    fn boundary_limits() {
        use crate::support::radial_boundary_value;
        let b = BarrierSupport::new(params(-1.0, 1.0));
        assert!((radial_boundary_value(&b, 0.0).unwrap().limit + 1.0).abs() < 1e-3);
        for k in 1..9 {
            let th = k as f64 * std::f64::consts::TAU / 9.0;
            assert!(radial_boundary_value(&b, th).unwrap().limit.abs() < 1e-3);
        }
    }

    #[test]
    fn sandwich_between_envelope_and_lower_bound() {
        // boundary data: −1 at [v₀] (angle 0), 0 elsewhere. Its envelope is
        // the sup of affine c + g·z with c + g₁ = −1 and c + |g| ≤ 0, searched
        // on a grid of gradients (so it is slightly underestimated).
        let b = BarrierSupport::new(params(-1.0, 1.0));
        let env = |x: f64, y: f64| {
            let mut best = f64::NEG_INFINITY;
            for i in 0..=400 {
                let g1 = -1.0 + 2.0 * i as f64 / 400.0;
                for j in 0..=400 {
                    let g2 = -2.0 + 4.0 * j as f64 / 400.0;
                    let c = -1.0 - g1;
                    if c + (g1 * g1 + g2 * g2).sqrt() <= 1e-12 {
                        best = best.max(c + g1 * x + g2 * y);
                    }
                }
            }
            best
        };
        for &(x, y) in &[(0.0, 0.0), (0.5, 0.1), (-0.4, -0.4), (0.7, -0.3)] {
            let u = b.eval(x, y).unwrap();
            let h = env(x, y);
            assert!(u <= h + 1e-3, "({x},{y}) u={u} h={h}");
            assert!(u >= h - (1.0 - x * x - y * y).sqrt() - 1e-12);
        }
    }

    #[test]
    fn obj_layout() {
        let mut buf = Vec::new();
        write_obj(&params(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (3, 4), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 6);
    }
}
