//! Quantities measured on a lamination: Thurston norm lower bounds,
//! infinitesimal earthquakes, and the Zygmund seminorm of boundary data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lamination::MeasuredLamination;
use crate::mink::{
    boundary_null, boundary_tangent, cross, geodesic_point, inner, tangent_frame, MinkVec3, LEAF_TOL,
};

/// Weight crossed by the unit geodesic segment centred at `p` with unit tangent `w`.
fn segment_mass(duals: &[(MinkVec3, f64)], p: MinkVec3, w: MinkVec3) -> f64 {
    let (a, b) = (geodesic_point(p, w, -0.5), geodesic_point(p, w, 0.5));
    duals
        .iter()
        .filter(|(s, _)| {
            let (sa, sb) = (inner(a, *s), inner(b, *s));
            sa.abs() > LEAF_TOL && sb.abs() > LEAF_TOL && (sa > 0.0) != (sb > 0.0)
        })
        .map(|(_, wt)| wt)
        .sum()
}

fn unit_tangent(p: MinkVec3, v: MinkVec3) -> Option<MinkVec3> {
    (v + p * inner(v, p)).normalize_spacelike()
}

/// A certified lower bound for the Thurston norm: the largest weight crossed
/// by any of a finite family of unit-length geodesic segments.
///
/// Candidates are segments through the common perpendiculars of leaf pairs
/// (centred at the midpoint and at both feet), perpendicular crossings of
/// each leaf, a polar grid of centres with 16 directions, and `trials` random
/// segments drawn from a ChaCha stream seeded by `seed`.
pub fn thurston_norm_lower(mu: &MeasuredLamination, trials: usize, seed: u64) -> f64 {
    if mu.is_empty() {
        return 0.0;
    }
    let duals: Vec<(MinkVec3, f64)> = mu.leaves().iter().map(|l| (l.geodesic.dual(), l.weight)).collect();
    let mut best: f64 = 0.0;
    let mut try_segment = |p: MinkVec3, w: MinkVec3| best = best.max(segment_mass(&duals, p, w));

    for (i, &(si, _)) in duals.iter().enumerate() {
        // the point of leaf i closest to the origin, crossed perpendicularly
        if let Ok(p) = (MinkVec3::E3 - si * inner(MinkVec3::E3, si)).normalize_timelike() {
            try_segment(p, si);
        }
        for &(sj, _) in &duals[i + 1..] {
            let c = inner(si, sj);
            if c.abs() <= 1.0 + 1e-12 {
                continue; // asymptotic
            }
            let (Ok(p1), Ok(p2)) = ((sj - si * c).normalize_timelike(), (si - sj * c).normalize_timelike())
            else {
                continue;
            };
            let Ok(m) = (p1 + p2).normalize_timelike() else { continue };
            for p in [m, p1, p2] {
                if let Some(w) = unit_tangent(p, p2 - p1) {
                    try_segment(p, w);
                }
            }
        }
    }

    let directions: Vec<f64> = (0..16).map(|k| k as f64 * std::f64::consts::PI / 16.0).collect();
    for ri in 0..=24 {
        let rho = ri as f64 * 0.25;
        let count = if ri == 0 { 1 } else { 48 };
        for ai in 0..count {
            let alpha = ai as f64 * std::f64::consts::TAU / count as f64;
            let p = MinkVec3::new(rho.sinh() * alpha.cos(), rho.sinh() * alpha.sin(), rho.cosh());
            let (e1, e2) = tangent_frame(p);
            for &d in &directions {
                try_segment(p, e1 * d.cos() + e2 * d.sin());
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let rho: f64 = rng.gen_range(0.0..8.0);
        let alpha: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let d: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let p = MinkVec3::new(rho.sinh() * alpha.cos(), rho.sinh() * alpha.sin(), rho.cosh());
        let (e1, e2) = tangent_frame(p);
        try_segment(p, e1 * d.cos() + e2 * d.sin());
    }
    best
}

/// The infinitesimal earthquake field at the ideal point of angle `theta`,
/// normalised to vanish at `x0`: the sum over leaves separating `η` from `x₀`
/// of `a ⟨η⊠σ, v⟩`, with `σ` oriented away from `x₀`, `η = (cos θ, sin θ, 1)`
/// and `v` the counterclockwise unit tangent.
pub fn infinitesimal_earthquake(mu: &MeasuredLamination, x0: MinkVec3, theta: f64) -> Result<f64> {
    let x0 = x0.normalize_timelike()?;
    let eta = boundary_null(theta);
    let v = boundary_tangent(theta);
    let mut total = 0.0;
    for leaf in mu.leaves() {
        if leaf.geodesic.is_endpoint(theta, 1e-12) {
            return Err(Error::OnLeaf(0.0));
        }
        let s = leaf.geodesic.dual();
        let side0 = inner(x0, s);
        if side0.abs() <= 1e-10 {
            return Err(Error::OnLeaf(side0));
        }
        let s = if side0 > 0.0 { -s } else { s };
        if inner(eta, s) > 0.0 {
            total += leaf.weight * inner(cross(eta, s), v);
        }
    }
    Ok(total)
}

/// `sup |φ(θ+h) + φ(θ−h) − 2φ(θ)| / h` over 4096 equally spaced `θ` and 64
/// geometrically spaced `h ∈ [hmin, hmax]`.
pub fn zygmund_seminorm(phi: impl Fn(f64) -> f64, hmin: f64, hmax: f64) -> Result<f64> {
    if !(hmin > 0.0 && hmax >= hmin && hmax.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < hmin <= hmax, got [{hmin}, {hmax}]")));
    }
    let nh = 64;
    let ratio = if nh > 1 { (hmax / hmin).powf(1.0 / (nh - 1) as f64) } else { 1.0 };
    let hs: Vec<f64> = (0..nh).map(|k| hmin * ratio.powi(k)).collect();
    let mut best: f64 = 0.0;
    for k in 0..4096 {
        let t = k as f64 * std::f64::consts::TAU / 4096.0;
        let c = phi(t);
        for &h in &hs {
            best = best.max((phi(t + h) + phi(t - h) - 2.0 * c).abs() / h);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::{DomainOfDependence, Leaf};
    use crate::mink::{klein_up, DiscPoint, Geodesic, Side};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn thurston_examples() {
        assert_eq!(thurston_norm_lower(&MeasuredLamination::empty(), 100, 1), 0.0);
        let one = MeasuredLamination::single(0.3, 2.0, 3.0).unwrap();
        assert_eq!(thurston_norm_lower(&one, 100, 1), 3.0);
    }

    /// Two leaves symmetric about the vertical axis at hyperbolic distance `2δ`.
    fn pair(delta: f64) -> MeasuredLamination {
        // geodesic orthogonal to the x-axis through the Klein point x = tanh δ
        let x = delta.tanh();
        let a = x.acos();
        let g1 = Geodesic::new(-a, a, Side::Counterclockwise).unwrap();
        let g2 = Geodesic::new(PI - a, PI + a, Side::Counterclockwise).unwrap();
        MeasuredLamination::new(vec![Leaf { geodesic: g1, weight: 1.0 }, Leaf { geodesic: g2, weight: 1.0 }])
            .unwrap()
    }

    #[test]
    fn far_apart_leaves_are_not_crossed_together() {
        let lam = pair(0.6);
        let d = {
            let s = lam.leaves().iter().map(|l| l.geodesic.dual()).collect::<Vec<_>>();
            inner(s[0], s[1]).abs().acosh()
        };
        assert!((d - 1.2).abs() < 1e-12);
        assert_eq!(thurston_norm_lower(&lam, 1000, 5), 1.0);
        // exhaustive segment grid: centres on a fine Klein grid, 64 directions
        let duals: Vec<(MinkVec3, f64)> =
            lam.leaves().iter().map(|l| (l.geodesic.dual(), l.weight)).collect();
        let mut oracle: f64 = 0.0;
        for i in -40..=40 {
            for j in -40..=40 {
                let (x, y) = (i as f64 * 0.024, j as f64 * 0.024);
                let Ok(z) = DiscPoint::new(x, y) else { continue };
                let Ok(p) = klein_up(z) else { continue };
                let (e1, e2) = tangent_frame(p);
                for k in 0..64 {
                    let t = k as f64 * PI / 64.0;
                    oracle = oracle.max(segment_mass(&duals, p, e1 * t.cos() + e2 * t.sin()));
                }
            }
        }
        assert_eq!(oracle, 1.0);
        // closer than 1: a unit segment crosses both
        assert_eq!(thurston_norm_lower(&pair(0.4), 10, 5), 2.0);
    }

    #[test]
    fn earthquake_examples() {
        let x0 = klein_up(DiscPoint::new(0.0, -0.5).unwrap()).unwrap();
        assert_eq!(infinitesimal_earthquake(&MeasuredLamination::empty(), x0, 1.0).unwrap(), 0.0);
        let one = MeasuredLamination::single(0.0, PI, 1.0).unwrap();
        assert!((infinitesimal_earthquake(&one, x0, FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(infinitesimal_earthquake(&one, x0, -FRAC_PI_2).unwrap(), 0.0);
        assert!(infinitesimal_earthquake(&one, x0, PI).is_err());
        let d = DomainOfDependence::new(one.clone(), x0, MinkVec3::ZERO).unwrap();
        for k in 0..64 {
            let t = 0.05 + k as f64 * std::f64::consts::TAU / 64.0;
            let e = infinitesimal_earthquake(&one, x0, t).unwrap();
            assert!((e - d.support(boundary_null(t)).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn zygmund_examples() {
        assert_eq!(zygmund_seminorm(|_| 2.5, 1e-4, 0.5).unwrap(), 0.0);
        let s = zygmund_seminorm(f64::sin, 1e-4, 0.5).unwrap();
        assert!(s.is_finite() && s <= 2.0);
        // the corner of max(0, sin) at 0: quotient sin(h)/h, whose sup 1 is
        // approached as h → 0 but not attained
        let c = zygmund_seminorm(|t: f64| t.sin().max(0.0), 1e-4, 0.5).unwrap();
        assert!(c.is_finite() && (1.0 - 1e-8..=1.0).contains(&c));
        assert!(zygmund_seminorm(f64::sin, 0.0, 1.0).is_err());
    }
}
