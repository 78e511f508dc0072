//! Support functions of future-convex domains, restricted to the Klein disc.
//!
//! A support function `U(x) = sup_{p∈D} ⟨p,x⟩` is 1-homogeneous on the future
//! cone; we work with its restriction `u(z) = U(z,1)` to the disc and with
//! `ū = U|ℍ²`, related by `ū(x) = x₃ · u(x/x₃)`.

pub mod boundary;
pub mod envelope;
pub mod grid;
mod ops;

pub use boundary::BoundaryFn;
pub use envelope::{convex_envelope, Envelope, Plane};
pub use grid::{Grid, GridSupportFn, NodeKind};
pub use ops::{
    asymptotic_graph_check, cosmological_level, curvature, gauss_inverse, gradient, hessian,
    radial_boundary_value, shape_inverse_eigen, support_on_hyperboloid, GraphAsymptotics, GraphSamples,
    RadialLimit,
};

/// Anything that can be evaluated as a support function on (part of) the disc.
pub trait SupportFn {
    /// `u(z)`, or `None` outside the region where data is available.
    fn eval(&self, z1: f64, z2: f64) -> Option<f64>;

    /// Step for finite differences taken on this function.
    fn fd_step(&self) -> f64;

    /// Radius of the largest centred disc on which `eval` is defined.
    fn max_radius(&self) -> f64;
}

/// A closed-form support function on the disc.
pub struct AnalyticSupport<F> {
    f: F,
    step: f64,
    radius: f64,
}

impl<F: Fn(f64, f64) -> f64> AnalyticSupport<F> {
    /// Defined on the whole open disc; finite differences use step `1e-4`.
    pub fn new(f: F) -> Self {
        AnalyticSupport { f, step: 1e-4, radius: 1.0 }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Restrict to `|z| ≤ radius`.
    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }
}

impl<F: Fn(f64, f64) -> f64> SupportFn for AnalyticSupport<F> {
    fn eval(&self, z1: f64, z2: f64) -> Option<f64> {
        if z1 * z1 + z2 * z2 > self.radius * self.radius {
            return None;
        }
        let v = (self.f)(z1, z2);
        v.is_finite().then_some(v)
    }

    fn fd_step(&self) -> f64 {
        self.step
    }

    fn max_radius(&self) -> f64 {
        self.radius
    }
}

impl<T: SupportFn + ?Sized> SupportFn for &T {
    fn eval(&self, z1: f64, z2: f64) -> Option<f64> {
        (**self).eval(z1, z2)
    }

    fn fd_step(&self) -> f64 {
        (**self).fd_step()
    }

    fn max_radius(&self) -> f64 {
        (**self).max_radius()
    }
}

/// Support function of the hyperboloid of curvature `−1/c²` centred at the
/// origin: `u(z) = −c√(1−|z|²)`.
pub fn hyperboloid(c: f64) -> impl Fn(f64, f64) -> f64 + Copy + Send + Sync {
    move |x: f64, y: f64| -c * (1.0 - x * x - y * y).max(0.0).sqrt()
}
