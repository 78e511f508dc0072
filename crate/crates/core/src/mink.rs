//! Linear algebra of the Minkowski space ℝ^{2,1}.
//!
//! The bilinear form has signature (+,+,−): `⟨x,y⟩ = x₁y₁ + x₂y₂ − x₃y₃`.
//! The hyperbolic plane ℍ² is the upper sheet `{⟨x,x⟩ = −1, x₃ > 0}` and the
//! Klein disc is its radial projection onto the plane `x₃ = 1`.

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Values of `⟨v,v⟩` within this distance of zero count as lightlike.
pub const CAUSAL_TOL: f64 = 1e-12;

/// Points closer than this (in `|⟨x,σ⟩|`) to a leaf are treated as lying on it.
pub const LEAF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Timelike,
    Lightlike,
    Spacelike,
}

impl MinkVec3 {
    pub const ZERO: MinkVec3 = MinkVec3 { x1: 0.0, x2: 0.0, x3: 0.0 };
    pub const E1: MinkVec3 = MinkVec3 { x1: 1.0, x2: 0.0, x3: 0.0 };
    pub const E2: MinkVec3 = MinkVec3 { x1: 0.0, x2: 1.0, x3: 0.0 };
    pub const E3: MinkVec3 = MinkVec3 { x1: 0.0, x2: 0.0, x3: 1.0 };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MinkVec3 { x1, x2, x3 }
    }

    pub fn inner(self, other: MinkVec3) -> f64 {
        inner(self, other)
    }

    pub fn norm_sq(self) -> f64 {
        inner(self, self)
    }

    pub fn cross(self, other: MinkVec3) -> MinkVec3 {
        cross(self, other)
    }

    pub fn causal(self) -> Causal {
        let q = self.norm_sq();
        if q < -CAUSAL_TOL {
            Causal::Timelike
        } else if q > CAUSAL_TOL {
            Causal::Spacelike
        } else {
            Causal::Lightlike
        }
    }

    pub fn is_future_timelike(self) -> bool {
        self.causal() == Causal::Timelike && self.x3 > 0.0
    }

    /// Future timelike or future lightlike (the closed future cone minus the origin).
    pub fn is_future_causal(self) -> bool {
        self.causal() != Causal::Spacelike && self.x3 > 0.0
    }

    /// Lorentzian length `√|⟨v,v⟩|`.
    pub fn minkowski_norm(self) -> f64 {
        self.norm_sq().abs().sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MinkVec3::new(a[0], a[1], a[2])
    }

    pub fn euclidean_dist(self, other: MinkVec3) -> f64 {
        let d = self - other;
        (d.x1 * d.x1 + d.x2 * d.x2 + d.x3 * d.x3).sqrt()
    }

    /// Rescale a timelike vector onto ℍ² (future sheet).
    pub fn normalize_timelike(self) -> Result<MinkVec3> {
        let q = self.norm_sq();
        if q >= -CAUSAL_TOL {
            return Err(Error::NotFutureTimelike(self.x1, self.x2, self.x3));
        }
        let s = 1.0 / (-q).sqrt();
        Ok(if self.x3 > 0.0 { self * s } else { self * -s })
    }

    /// Rescale a spacelike vector to unit length.
    pub fn normalize_spacelike(self) -> Option<MinkVec3> {
        let q = self.norm_sq();
        if q <= CAUSAL_TOL {
            None
        } else {
            Some(self * (1.0 / q.sqrt()))
        }
    }
}

impl Add for MinkVec3 {
    type Output = MinkVec3;
    fn add(self, o: MinkVec3) -> MinkVec3 {
        MinkVec3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for MinkVec3 {
    fn add_assign(&mut self, o: MinkVec3) {
        *self = *self + o;
    }
}

impl Sub for MinkVec3 {
    type Output = MinkVec3;
    fn sub(self, o: MinkVec3) -> MinkVec3 {
        MinkVec3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for MinkVec3 {
    type Output = MinkVec3;
    fn neg(self) -> MinkVec3 {
        MinkVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for MinkVec3 {
    type Output = MinkVec3;
    fn mul(self, s: f64) -> MinkVec3 {
        MinkVec3::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<MinkVec3> for f64 {
    type Output = MinkVec3;
    fn mul(self, v: MinkVec3) -> MinkVec3 {
        v * self
    }
}

pub fn inner(a: MinkVec3, b: MinkVec3) -> f64 {
    a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3
}

/// Minkowski cross product, characterised by `⟨a⊠b, c⟩ = det[a|b|c]`.
///
/// This is the Euclidean cross product with the third component negated.
pub fn cross(a: MinkVec3, b: MinkVec3) -> MinkVec3 {
    MinkVec3::new(a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, -(a.x1 * b.x2 - a.x2 * b.x1))
}

/// Euclidean determinant of the matrix with columns `a, b, c`.
pub fn det3(a: MinkVec3, b: MinkVec3, c: MinkVec3) -> f64 {
    a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - b.x1 * (a.x2 * c.x3 - a.x3 * c.x2)
        + c.x1 * (a.x2 * b.x3 - a.x3 * b.x2)
}

/// Hyperbolic distance between two points of ℍ².
pub fn hyperbolic_distance(x: MinkVec3, y: MinkVec3) -> f64 {
    (-inner(x, y)).max(1.0).acosh()
}

/// Point at arclength `tau` on the geodesic through `p ∈ ℍ²` with unit tangent `w`.
pub fn geodesic_point(p: MinkVec3, w: MinkVec3, tau: f64) -> MinkVec3 {
    p * tau.cosh() + w * tau.sinh()
}

/// An orthonormal basis of the tangent plane `x^⊥` at `x ∈ ℍ²`.
pub fn tangent_frame(x: MinkVec3) -> (MinkVec3, MinkVec3) {
    let project = |v: MinkVec3| v + x * inner(v, x);
    let e1 = project(MinkVec3::E1).normalize_spacelike().expect("E1 projects to a spacelike vector");
    let w = project(MinkVec3::E2);
    let e2 = (w - e1 * inner(w, e1)).normalize_spacelike().expect("independent tangent");
    (e1, e2)
}

/// Reduce an angle to `[0, 2π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angle_separation(a: f64, b: f64) -> f64 {
    let d = canonical_angle(a - b);
    d.min(TAU - d)
}

/// Null lift `(cos θ, sin θ, 1)` of the ideal point at angle `θ`.
pub fn boundary_null(theta: f64) -> MinkVec3 {
    MinkVec3::new(theta.cos(), theta.sin(), 1.0)
}

/// Unit counterclockwise tangent `(−sin θ, cos θ, 0)` to the circle at angle `θ`.
pub fn boundary_tangent(theta: f64) -> MinkVec3 {
    MinkVec3::new(-theta.sin(), theta.cos(), 0.0)
}

/// Point of the closed Klein disc.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiscPoint {
    pub z1: f64,
    pub z2: f64,
}

impl DiscPoint {
    pub fn new(z1: f64, z2: f64) -> Result<Self> {
        if z1 * z1 + z2 * z2 > (1.0 + 1e-12) * (1.0 + 1e-12) {
            return Err(Error::OutsideDisc { z1, z2 });
        }
        Ok(DiscPoint { z1, z2 })
    }

    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        DiscPoint::new(r * theta.cos(), r * theta.sin())
    }

    pub fn norm_sq(self) -> f64 {
        self.z1 * self.z1 + self.z2 * self.z2
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_boundary(self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    /// `(z, 1)`, the point of the affine chart `x₃ = 1`.
    pub fn lift_affine(self) -> MinkVec3 {
        MinkVec3::new(self.z1, self.z2, 1.0)
    }
}

/// Inverse of the radial projection: `z ↦ (z, 1)/√(1−|z|²)`.
pub fn klein_up(z: DiscPoint) -> Result<MinkVec3> {
    let q = 1.0 - z.norm_sq();
    if q <= 0.0 {
        return Err(Error::OutsideDisc { z1: z.z1, z2: z.z2 });
    }
    let s = 1.0 / q.sqrt();
    Ok(MinkVec3::new(z.z1 * s, z.z2 * s, s))
}

/// Radial projection of a future timelike vector to the Klein disc.
pub fn klein_down(x: MinkVec3) -> Result<DiscPoint> {
    if !x.is_future_timelike() {
        return Err(Error::NotFutureTimelike(x.x1, x.x2, x.x3));
    }
    Ok(DiscPoint { z1: x.x1 / x.x3, z2: x.x2 / x.x3 })
}

/// Which side of an oriented geodesic its dual vector points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Toward the boundary arc swept counterclockwise from `theta1` to `theta2`.
    Counterclockwise,
    /// Toward the complementary arc.
    Clockwise,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Counterclockwise => Side::Clockwise,
            Side::Clockwise => Side::Counterclockwise,
        }
    }
}

/// A complete geodesic of ℍ², stored by the angles of its ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    theta1: f64,
    theta2: f64,
    side: Side,
}

impl Geodesic {
    pub fn new(theta1: f64, theta2: f64, side: Side) -> Result<Self> {
        let (a, b) = (canonical_angle(theta1), canonical_angle(theta2));
        if angle_separation(a, b) < 1e-9 {
            return Err(Error::DegenerateGeodesic { theta1, theta2 });
        }
        Ok(Geodesic { theta1: a, theta2: b, side })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn flipped(&self) -> Geodesic {
        Geodesic { side: self.side.flipped(), ..*self }
    }

    /// Whether `theta` lies strictly inside the arc swept counterclockwise from
    /// `theta1` to `theta2`.
    pub fn in_ccw_arc(&self, theta: f64) -> bool {
        let span = canonical_angle(self.theta2 - self.theta1);
        let t = canonical_angle(theta - self.theta1);
        t > 0.0 && t < span
    }

    /// Whether `theta` coincides with one of the two endpoints.
    pub fn is_endpoint(&self, theta: f64, tol: f64) -> bool {
        angle_separation(theta, self.theta1) <= tol || angle_separation(theta, self.theta2) <= tol
    }

    /// Whether the two geodesics cross in ℍ² (their endpoints interleave strictly).
    /// Geodesics sharing an ideal endpoint are asymptotic, not crossing.
    pub fn crosses(&self, other: &Geodesic) -> bool {
        let tol = 1e-12;
        if self.is_endpoint(other.theta1, tol) || self.is_endpoint(other.theta2, tol) {
            return false;
        }
        self.in_ccw_arc(other.theta1) != self.in_ccw_arc(other.theta2)
    }

    /// The spacelike unit normal σ of the plane through the origin containing
    /// this geodesic, signed according to [`Side`].
    pub fn dual(&self) -> MinkVec3 {
        // closed form, stable for nearby endpoints: with span Δ of the ccw arc
        // and mid-angle m, σ = (cos m, sin m, cos(Δ/2)) / sin(Δ/2) is the unit
        // normal with ⟨σ, (e^{im},1)⟩ > 0
        let span = canonical_angle(self.theta2 - self.theta1);
        let m = self.theta1 + 0.5 * span;
        let (c, s) = ((0.5 * span).cos(), (0.5 * span).sin());
        let toward_ccw = MinkVec3::new(m.cos() / s, m.sin() / s, c / s);
        match self.side {
            Side::Counterclockwise => toward_ccw,
            Side::Clockwise => -toward_ccw,
        }
    }
}

/// Dual spacelike unit vector of a geodesic.
pub fn geodesic_dual(l: &Geodesic) -> MinkVec3 {
    l.dual()
}

/// Whether the geodesic with dual `sigma` separates `x` from `y`.
///
/// Both points must be future causal vectors (points of ℍ² or ideal points)
/// off the leaf.
pub fn separates_dual(sigma: MinkVec3, x: MinkVec3, y: MinkVec3) -> Result<bool> {
    for p in [x, y] {
        if !p.is_future_causal() {
            return Err(Error::NotFutureTimelike(p.x1, p.x2, p.x3));
        }
    }
    let (sx, sy) = (inner(x, sigma), inner(y, sigma));
    if sx.abs() <= LEAF_TOL {
        return Err(Error::OnLeaf(sx));
    }
    if sy.abs() <= LEAF_TOL {
        return Err(Error::OnLeaf(sy));
    }
    Ok((sx > 0.0) != (sy > 0.0))
}

pub fn separates(l: &Geodesic, x: MinkVec3, y: MinkVec3) -> Result<bool> {
    separates_dual(l.dual(), x, y)
}

/// A null frame `(v₀, v₁, v₂)`: `v₀, v₁` null with `⟨v₀,v₁⟩ = −1` and `v₂` a
/// unit spacelike vector orthogonal to both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullFrame {
    pub v0: MinkVec3,
    pub v1: MinkVec3,
    pub v2: MinkVec3,
}

impl NullFrame {
    pub fn new(v0: MinkVec3, v1: MinkVec3, v2: MinkVec3) -> Result<Self> {
        let tol = 1e-10;
        let checks = [
            (v0.norm_sq(), 0.0, "<v0,v0> != 0"),
            (v1.norm_sq(), 0.0, "<v1,v1> != 0"),
            (inner(v0, v1), -1.0, "<v0,v1> != -1"),
            (v2.norm_sq(), 1.0, "<v2,v2> != 1"),
            (inner(v0, v2), 0.0, "<v0,v2> != 0"),
            (inner(v1, v2), 0.0, "<v1,v2> != 0"),
        ];
        for (got, want, msg) in checks {
            if (got - want).abs() > tol {
                return Err(Error::NotNullFrame(format!("{msg} (got {got})")));
            }
        }
        Ok(NullFrame { v0, v1, v2 })
    }

    /// Frame whose fixed null direction points to the ideal point at angle `theta0`,
    /// with `(v₀+v₁)/√2 = e₃`.
    pub fn standard(theta0: f64) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (c, s) = (theta0.cos(), theta0.sin());
        NullFrame {
            v0: MinkVec3::new(h * c, h * s, h),
            v1: MinkVec3::new(-h * c, -h * s, h),
            v2: MinkVec3::new(-s, c, 0.0),
        }
    }

    /// Coordinates `(a, b, c)` with `x = a v₀ + b v₁ + c v₂`.
    pub fn coordinates(&self, x: MinkVec3) -> [f64; 3] {
        [-inner(x, self.v1), -inner(x, self.v0), inner(x, self.v2)]
    }
}

/// An orientation and time-orientation preserving isometry `x ↦ A x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    linear: [[f64; 3]; 3],
    translation: MinkVec3,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { linear: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], translation: MinkVec3::ZERO }
    }

    /// Validates `Aᵀ J A = J`, `det A = 1` and `A₃₃ > 0` to `1e-10`.
    pub fn new(linear: [[f64; 3]; 3], translation: MinkVec3) -> Result<Self> {
        let iso = Isometry { linear, translation };
        iso.check()?;
        Ok(iso)
    }

    pub fn translation_by(t: MinkVec3) -> Self {
        Isometry { translation: t, ..Isometry::identity() }
    }

    pub fn linear(&self) -> [[f64; 3]; 3] {
        self.linear
    }

    pub fn translation(&self) -> MinkVec3 {
        self.translation
    }

    fn column(&self, k: usize) -> MinkVec3 {
        MinkVec3::new(self.linear[0][k], self.linear[1][k], self.linear[2][k])
    }

    #[allow(clippy::needless_range_loop)]
    pub fn check(&self) -> Result<()> {
        let tol = 1e-10;
        let j = [1.0, 1.0, -1.0];
        for a in 0..3 {
            for b in 0..3 {
                let g = inner(self.column(a), self.column(b));
                let want = if a == b { j[a] } else { 0.0 };
                if (g - want).abs() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "linear part does not preserve the form: entry ({a},{b}) = {g}"
                    )));
                }
            }
        }
        let det = det3(self.column(0), self.column(1), self.column(2));
        if (det - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("determinant {det} != 1")));
        }
        if self.linear[2][2] <= 0.0 {
            return Err(Error::InvalidArgument("reverses time orientation".into()));
        }
        Ok(())
    }

    /// Linear part applied to a vector.
    pub fn apply_linear(&self, v: MinkVec3) -> MinkVec3 {
        let m = &self.linear;
        MinkVec3::new(
            m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
            m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
            m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3,
        )
    }

    pub fn apply(&self, p: MinkVec3) -> MinkVec3 {
        self.apply_linear(p) + self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|j| self.linear[i][j] * other.linear[j][k]).sum();
            }
        }
        Isometry { linear: m, translation: self.apply(other.translation) }
    }

    pub fn inverse(&self) -> Isometry {
        // A⁻¹ = J Aᵀ J
        let j = [1.0, 1.0, -1.0];
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                *entry = j[i] * self.linear[k][i] * j[k];
            }
        }
        let lin = Isometry { linear: m, translation: MinkVec3::ZERO };
        Isometry { linear: m, translation: -lin.apply_linear(self.translation) }
    }

    pub fn max_abs_diff(&self, other: &Isometry) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                d = d.max((self.linear[i][k] - other.linear[i][k]).abs());
            }
        }
        d.max(self.translation.euclidean_dist(other.translation))
    }
}

/// The parabolic one-parameter group fixing `v₀`:
/// `A_t v₀ = v₀`, `A_t v₁ = (t²/2) v₀ + v₁ + t v₂`, `A_t v₂ = v₂ + t v₀`.
pub fn parabolic_isometry(t: f64, frame: &NullFrame) -> Result<Isometry> {
    let frame = NullFrame::new(frame.v0, frame.v1, frame.v2)?;
    let image = |x: MinkVec3| {
        let [a, b, c] = frame.coordinates(x);
        frame.v0 * (a + b * 0.5 * t * t + c * t) + frame.v1 * b + frame.v2 * (b * t + c)
    };
    let cols = [image(MinkVec3::E1), image(MinkVec3::E2), image(MinkVec3::E3)];
    let mut linear = [[0.0; 3]; 3];
    for (k, col) in cols.iter().enumerate() {
        let a = col.to_array();
        for i in 0..3 {
            linear[i][k] = a[i];
        }
    }
    Ok(Isometry { linear, translation: MinkVec3::ZERO })
}
