//! Mess domains of dependence of discrete laminations.

use crate::error::{Error, Result};
use crate::lamination::MeasuredLamination;
use crate::mink::{inner, MinkVec3, LEAF_TOL};
use crate::support::SupportFn;

/// The domain generated by a lamination, a base point `x₀ ∈ ℍ²` and `y₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainOfDependence {
    lamination: MeasuredLamination,
    x0: MinkVec3,
    y0: MinkVec3,
    /// Unit duals oriented away from `x₀`: `⟨x₀, σ⟩ < 0`.
    sigmas: Vec<MinkVec3>,
}

/// Both sides of the weight-distance inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightDistance {
    /// Total weight of the leaves separating the two points.
    pub weight: f64,
    /// Minkowski length `√⟨y₁−y₂, y₁−y₂⟩` of the difference of boundary points.
    pub distance: f64,
    pub pass: bool,
}

impl DomainOfDependence {
    /// `x0` is normalised onto ℍ²; it must be off every leaf (`|⟨x₀,σ⟩| > 1e-10`)
    /// and the lamination must be disjoint.
    pub fn new(lamination: MeasuredLamination, x0: MinkVec3, y0: MinkVec3) -> Result<Self> {
        let report = lamination.validate();
        if !report.pass {
            return Err(Error::InvalidLamination(format!("crossing leaves {:?}", report.crossings)));
        }
        let x0 = x0.normalize_timelike()?;
        let mut sigmas = Vec::with_capacity(lamination.len());
        for leaf in lamination.leaves() {
            let s = leaf.geodesic.dual();
            let d = inner(x0, s);
            if d.abs() <= 1e-10 {
                return Err(Error::OnLeaf(d));
            }
            sigmas.push(if d > 0.0 { -s } else { s });
        }
        Ok(DomainOfDependence { lamination, x0, y0, sigmas })
    }

    pub fn lamination(&self) -> &MeasuredLamination {
        &self.lamination
    }

    pub fn x0(&self) -> MinkVec3 {
        self.x0
    }

    pub fn y0(&self) -> MinkVec3 {
        self.y0
    }

    /// Outward unit duals, in leaf order.
    pub fn outward_duals(&self) -> &[MinkVec3] {
        &self.sigmas
    }

    /// Indices of the leaves separating `x₀` from `x`, in leaf order.
    fn crossed(&self, x: MinkVec3) -> Result<Vec<usize>> {
        if !x.is_future_causal() {
            return Err(Error::NotFutureTimelike(x.x1, x.x2, x.x3));
        }
        let scale = x.x3.abs().max(1.0);
        let mut out = Vec::new();
        for (i, &s) in self.sigmas.iter().enumerate() {
            let d = inner(x, s);
            if d.abs() <= LEAF_TOL * scale {
                return Err(Error::OnLeaf(d));
            }
            if d > 0.0 {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `H(x) = ⟨x,y₀⟩ + Σ a_l ⟨x,σ_l⟩` over leaves separating `x₀` from `x`.
    /// Defined on the closed future cone (ideal points included), off the leaves.
    pub fn support(&self, x: MinkVec3) -> Result<f64> {
        let leaves = self.lamination.leaves();
        let mut h = inner(x, self.y0);
        for i in self.crossed(x)? {
            h += leaves[i].weight * inner(x, self.sigmas[i]);
        }
        Ok(h)
    }

    /// `y(x) = y₀ + Σ a_l σ_l`, the point where the support plane with
    /// normal `x` touches the domain.
    pub fn boundary_point(&self, x: MinkVec3) -> Result<MinkVec3> {
        let leaves = self.lamination.leaves();
        let mut y = self.y0;
        for i in self.crossed(x)? {
            y += self.sigmas[i] * leaves[i].weight;
        }
        Ok(y)
    }

    /// Total weight of leaves separating `x1` from `x2`, against the Minkowski
    /// length of `y(x1) − y(x2)`; passes iff `weight ≤ distance + 1e-10`.
    pub fn weight_distance(&self, x1: MinkVec3, x2: MinkVec3) -> Result<WeightDistance> {
        let (c1, c2) = (self.crossed(x1)?, self.crossed(x2)?);
        let leaves = self.lamination.leaves();
        // symmetric difference of the crossed sets = leaves between x1 and x2
        let weight: f64 =
            (0..leaves.len()).filter(|i| c1.contains(i) != c2.contains(i)).map(|i| leaves[i].weight).sum();
        let d = self.boundary_point(x1)? - self.boundary_point(x2)?;
        let distance = d.norm_sq().max(0.0).sqrt();
        Ok(WeightDistance { weight, distance, pass: weight <= distance + 1e-10 })
    }
}

/// The restriction `u(z) = H(z, 1)` to the closed disc.
impl SupportFn for DomainOfDependence {
    fn eval(&self, z1: f64, z2: f64) -> Option<f64> {
        if z1 * z1 + z2 * z2 > 1.0 + 1e-12 {
            return None;
        }
        self.support(MinkVec3::new(z1, z2, 1.0)).ok()
    }

    fn fd_step(&self) -> f64 {
        1e-4
    }

    fn max_radius(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mink::{boundary_null, klein_up, DiscPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn single_leaf() -> DomainOfDependence {
        // the geodesic from angle 0 to π, dual ±(0,1,0)
        let lam = MeasuredLamination::single(0.0, PI, 1.0).unwrap();
        let x0 = klein_up(DiscPoint::new(0.0, -0.5).unwrap()).unwrap();
        DomainOfDependence::new(lam, x0, MinkVec3::ZERO).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng) -> MinkVec3 {
        let r = rng.gen_range(0.0f64..0.999).sqrt();
        let t = rng.gen_range(0.0..2.0 * PI);
        klein_up(DiscPoint::new(r * t.cos(), r * t.sin()).unwrap()).unwrap()
    }

    #[test]
    fn empty_lamination() {
        let d = DomainOfDependence::new(MeasuredLamination::empty(), MinkVec3::E3, MinkVec3::ZERO).unwrap();
        let x = MinkVec3::new(0.3, 0.2, 2.0);
        assert_eq!(d.support(x).unwrap(), 0.0);
        assert_eq!(d.boundary_point(x).unwrap(), MinkVec3::ZERO);
        let w = d.weight_distance(x, MinkVec3::E3).unwrap();
        assert!(w.pass && w.weight == 0.0 && w.distance == 0.0);
    }

    #[test]
    fn single_leaf_examples() {
        let d = single_leaf();
        assert!((d.eval(0.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        for &(x, y) in &[(0.3, -0.2), (-0.7, 0.1), (0.0, 0.9)] {
            assert!((d.eval(x, y).unwrap() - y.max(0.0)).abs() < 1e-15);
        }
        let y = d.boundary_point(klein_up(DiscPoint::new(0.0, 0.5).unwrap()).unwrap()).unwrap();
        assert!((y - MinkVec3::E2).euclidean_dist(MinkVec3::ZERO) < 1e-15);
        let x1 = klein_up(DiscPoint::new(0.1, -0.3).unwrap()).unwrap();
        let x2 = klein_up(DiscPoint::new(0.2, 0.4).unwrap()).unwrap();
        let w = d.weight_distance(x1, x2).unwrap();
        assert!((w.weight - 1.0).abs() < 1e-15 && (w.distance - 1.0).abs() < 1e-15 && w.pass);
        assert!(d.eval(0.3, 0.0).is_none());
        assert!(matches!(d.support(MinkVec3::new(0.3, 0.0, 1.0)), Err(Error::OnLeaf(_))));
    }

    #[test]
    fn orientation_hint_is_irrelevant() {
        let lam = MeasuredLamination::single(0.0, PI, 1.0).unwrap();
        let flipped = MeasuredLamination::new(
            lam.leaves()
                .iter()
                .map(|l| crate::lamination::Leaf { geodesic: l.geodesic.flipped(), ..*l })
                .collect(),
        )
        .unwrap();
        let x0 = klein_up(DiscPoint::new(0.0, -0.5).unwrap()).unwrap();
        let a = DomainOfDependence::new(lam, x0, MinkVec3::ZERO).unwrap();
        let b = DomainOfDependence::new(flipped, x0, MinkVec3::ZERO).unwrap();
        assert_eq!(a.eval(0.2, 0.3), b.eval(0.2, 0.3));
    }

    #[test]
    fn base_point_change_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let lam = MeasuredLamination::random(&mut rng, 12);
            let x0 = random_point(&mut rng);
            let y0 =
                MinkVec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let Ok(d) = DomainOfDependence::new(lam.clone(), x0, y0) else { continue };
            let x1 = random_point(&mut rng);
            let Ok(y1) = d.boundary_point(x1) else { continue };
            let d1 = DomainOfDependence::new(lam, x1, y1).unwrap();
            for _ in 0..20 {
                let x = random_point(&mut rng);
                if let (Ok(a), Ok(b)) = (d.support(x), d1.support(x)) {
                    assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
                }
            }
        }
    }

    #[test]
    fn boundary_points_give_support_planes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lam = MeasuredLamination::random(&mut rng, 15);
        let d = DomainOfDependence::new(lam, MinkVec3::E3, MinkVec3::new(0.1, -0.2, 0.3)).unwrap();
        let xs: Vec<MinkVec3> = (0..200).map(|_| random_point(&mut rng)).collect();
        for &x in xs.iter().take(20) {
            let y = d.boundary_point(x).unwrap();
            assert!((inner(y, x) - d.support(x).unwrap()).abs() < 1e-10);
            for &xp in &xs {
                assert!(inner(y, xp) <= d.support(xp).unwrap() + 1e-9);
            }
        }
        // ideal points too
        let eta = boundary_null(0.77);
        assert!(d.support(eta).is_ok());
    }
}
