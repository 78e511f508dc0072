use crate::error::{Error, Result};
use crate::mink::{klein_up, tangent_frame, DiscPoint, MinkVec3};
use crate::numeric::{polyfit, solve_dense, sym2_eigen};
use crate::support::{GridSupportFn, SupportFn};

fn sample<U: SupportFn + ?Sized>(u: &U, z1: f64, z2: f64) -> Result<f64> {
    u.eval(z1, z2).ok_or(Error::Stencil { z1, z2 })
}

/// Central-difference gradient `Du(z)`.
pub fn gradient<U: SupportFn + ?Sized>(u: &U, z: DiscPoint) -> Result<(f64, f64)> {
    let h = u.fd_step();
    let (x, y) = (z.z1, z.z2);
    let ux = (sample(u, x + h, y)? - sample(u, x - h, y)?) / (2.0 * h);
    let uy = (sample(u, x, y + h)? - sample(u, x, y - h)?) / (2.0 * h);
    Ok((ux, uy))
}

/// Central-difference Hessian `[[u_xx, u_xy], [u_xy, u_yy]]` (9-point stencil).
pub fn hessian<U: SupportFn + ?Sized>(u: &U, z: DiscPoint) -> Result<[[f64; 2]; 2]> {
    let h = u.fd_step();
    let (x, y) = (z.z1, z.z2);
    let c = sample(u, x, y)?;
    let uxx = (sample(u, x + h, y)? - 2.0 * c + sample(u, x - h, y)?) / (h * h);
    let uyy = (sample(u, x, y + h)? - 2.0 * c + sample(u, x, y - h)?) / (h * h);
    let uxy = (sample(u, x + h, y + h)? - sample(u, x + h, y - h)? - sample(u, x - h, y + h)?
        + sample(u, x - h, y - h)?)
        / (4.0 * h * h);
    Ok([[uxx, uxy], [uxy, uyy]])
}

/// Point of the surface whose future unit normal is `klein_up(z)`:
/// `(Du(z), ⟨z, Du(z)⟩ − u(z))`.
pub fn gauss_inverse<U: SupportFn + ?Sized>(u: &U, z: DiscPoint) -> Result<MinkVec3> {
    let (ux, uy) = gradient(u, z)?;
    let v = sample(u, z.z1, z.z2)?;
    Ok(MinkVec3::new(ux, uy, z.z1 * ux + z.z2 * uy - v))
}

/// Gauss curvature `K = −1 / ((1−|z|²)² det D²u(z))` of the dual surface.
pub fn curvature<U: SupportFn + ?Sized>(u: &U, z: DiscPoint) -> Result<f64> {
    let hs = hessian(u, z)?;
    let det = hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0];
    if det <= 0.0 {
        return Err(Error::Degenerate { z1: z.z1, z2: z.z2, det });
    }
    let w = 1.0 - z.norm_sq();
    Ok(-1.0 / (w * w * det))
}

/// `ū(x) = x₃ u(x/x₃)` for a future timelike `x`.
pub fn support_on_hyperboloid<U: SupportFn + ?Sized>(u: &U, x: MinkVec3) -> Result<f64> {
    if !x.is_future_timelike() {
        return Err(Error::NotFutureTimelike(x.x1, x.x2, x.x3));
    }
    Ok(x.x3 * sample(u, x.x1 / x.x3, x.x2 / x.x3)?)
}

/// Orthonormal basis of the tangent plane `x^⊥` at `x ∈ ℍ²`.
/// Eigenvalues (ascending) of `Hess ū − ū I` at `x = klein_up(z)`, the inverse
/// shape operator. Second derivatives are taken along ℍ²-geodesics through `x`
/// with arclength step `fd_step`.
pub fn shape_inverse_eigen<U: SupportFn + ?Sized>(u: &U, z: DiscPoint) -> Result<(f64, f64)> {
    let x = klein_up(z)?;
    let (e1, e2) = tangent_frame(x);
    let d = u.fd_step();
    let ubar = |p: MinkVec3| support_on_hyperboloid(u, p);
    let u0 = ubar(x)?;
    let second = |e: MinkVec3| -> Result<f64> {
        let plus = x * d.cosh() + e * d.sinh();
        let minus = x * d.cosh() - e * d.sinh();
        Ok((ubar(plus)? - 2.0 * u0 + ubar(minus)?) / (d * d))
    };
    let h11 = second(e1)?;
    let h22 = second(e2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h12 = 0.5 * (second((e1 + e2) * s)? - second((e1 - e2) * s)?);
    let (lo, hi) = sym2_eigen(h11 - u0, h12, h22 - u0);
    if lo <= 0.0 {
        return Err(Error::NotConvex(lo));
    }
    Ok((lo, hi))
}

/// Support function of the level `{T = d}` of the cosmological time:
/// `h_d(z) = h(z) − d√(1−|z|²)`.
pub fn cosmological_level(hfn: &GridSupportFn, d: f64) -> Result<GridSupportFn> {
    if !(d >= 0.0) {
        return Err(Error::InvalidArgument(format!("level {d} must be non-negative")));
    }
    Ok(hfn.map(|x, y, v| v - d * (1.0 - x * x - y * y).max(0.0).sqrt()))
}

/// Extrapolated boundary value of a support function along a radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLimit {
    pub limit: f64,
    /// Distance between the limit and the outermost sample.
    pub gap: f64,
    /// Whether the sampled tail is monotone in `r`; if not the fit is unreliable.
    pub monotone: bool,
}

/// Limit of `u(rθ)` as `r → 1`, by a least-squares fit
/// `u ≈ a + b w + c (1−r)` with `w = √(1−r²)` on the ten outermost samples.
/// The basis is exact for the hyperboloid and for affine functions.
///
/// Functions defined up to the circle are sampled at `1 − r = 10⁻⁸·2^k`;
/// grid data at `r = R − (k+1)·h`.
pub fn radial_boundary_value<U: SupportFn + ?Sized>(u: &U, theta: f64) -> Result<RadialLimit> {
    let rmax = u.max_radius();
    let radii: Vec<f64> = if rmax >= 1.0 - 1e-12 {
        (0..10).map(|k| 1.0 - 1e-8 * f64::powi(2.0, k)).collect()
    } else {
        (0..10).map(|k| rmax - (k + 1) as f64 * u.fd_step()).collect()
    };
    let (c, s) = (theta.cos(), theta.sin());
    let mut rows = Vec::with_capacity(10);
    let mut vs = Vec::with_capacity(10);
    for &r in &radii {
        rows.push([1.0, (1.0 - r * r).sqrt(), 1.0 - r]);
        vs.push(sample(u, r * c, r * s)?);
    }
    // scale the columns so the normal equations stay well conditioned
    let scale: Vec<f64> = (0..3).map(|j| rows.iter().map(|row| row[j].abs()).fold(0.0, f64::max)).collect();
    let mut ata = vec![vec![0.0; 3]; 3];
    let mut atb = vec![0.0; 3];
    for (row, v) in rows.iter().zip(&vs) {
        for a in 0..3 {
            atb[a] += row[a] / scale[a] * v;
            for b in 0..3 {
                ata[a][b] += row[a] / scale[a] * row[b] / scale[b];
            }
        }
    }
    let coef = solve_dense(ata, atb).ok_or_else(|| Error::Divergent("singular radial fit".into()))?;
    let limit = coef[0];
    let diffs: Vec<f64> = vs.windows(2).map(|p| p[1] - p[0]).collect();
    let tol = 1e-13 * (1.0 + vs[0].abs());
    let monotone = diffs.iter().all(|d| *d >= -tol) || diffs.iter().all(|d| *d <= tol);
    Ok(RadialLimit { limit, gap: (limit - vs[0]).abs(), monotone })
}

/// Samples `(r, f(r(cos θ, sin θ)))` of a spacelike entire graph along a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSamples {
    pub theta: f64,
    pub samples: Vec<(f64, f64)>,
}

impl GraphSamples {
    /// `count` samples with `r` geometrically spaced in `[r0, r1]`.
    pub fn from_fn(
        theta: f64,
        r0: f64,
        r1: f64,
        count: usize,
        f: impl Fn(f64, f64) -> Result<f64>,
    ) -> Result<Self> {
        let count = count.max(4);
        let ratio = (r1 / r0).powf(1.0 / (count - 1) as f64);
        let (c, s) = (theta.cos(), theta.sin());
        let samples = (0..count)
            .map(|k| {
                let r = r0 * ratio.powi(k as i32);
                f(r * c, r * s).map(|v| (r, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphSamples { theta, samples })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphAsymptotics {
    /// Fitted `lim (f(rz) − r)`.
    pub fitted: f64,
    /// `−u(θ)` from the radial extrapolation of the support function.
    pub expected: f64,
    pub difference: f64,
}

fn graph_limit(samples: &[(f64, f64)]) -> Option<f64> {
    let r0 = samples[0].0;
    let xs: Vec<f64> = samples.iter().map(|(r, _)| r0 / r).collect();
    let ys: Vec<f64> = samples.iter().map(|(r, f)| f - r).collect();
    polyfit(&xs, &ys, 2).map(|c| c[0])
}

/// Compare `lim_{r→∞} (f(rz) − r)` with `−u` at the boundary point `z = e^{iθ}`.
pub fn asymptotic_graph_check<U: SupportFn + ?Sized>(
    f: &GraphSamples,
    u: &U,
    theta: f64,
) -> Result<GraphAsymptotics> {
    if f.samples.len() < 6 {
        return Err(Error::InvalidArgument("need at least 6 graph samples".into()));
    }
    let full = graph_limit(&f.samples).ok_or_else(|| Error::Divergent("singular fit".into()))?;
    let tail = graph_limit(&f.samples[f.samples.len() / 2..])
        .ok_or_else(|| Error::Divergent("singular fit".into()))?;
    if (full - tail).abs() > 1e-3 * (1.0 + full.abs()) {
        return Err(Error::Divergent(format!("fits disagree: {full} vs {tail}")));
    }
    let expected = -radial_boundary_value(u, theta)?.limit;
    Ok(GraphAsymptotics { fitted: tail, expected, difference: (tail - expected).abs() })
}
