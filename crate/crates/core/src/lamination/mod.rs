//! Discrete measured geodesic laminations and the domains of dependence they
//! generate.
//!
//! A lamination is a finite list of pairwise disjoint geodesics with positive
//! weights. Together with a base point `x₀ ∈ ℍ²` off the leaves and a base
//! point `y₀` it determines a domain of dependence whose support function is a
//! finite sum over the leaves crossed on the way from `x₀`.

mod measures;
mod mess;

use std::io::BufRead;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mink::{Geodesic, Side};

pub use measures::{infinitesimal_earthquake, thurston_norm_lower, zygmund_seminorm};
pub use mess::{DomainOfDependence, WeightDistance};

/// A geodesic with a positive weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf {
    pub geodesic: Geodesic,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasuredLamination {
    leaves: Vec<Leaf>,
}

/// Outcome of [`MeasuredLamination::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub pass: bool,
    /// Index pairs of leaves whose endpoints interleave.
    pub crossings: Vec<(usize, usize)>,
}

impl MeasuredLamination {
    /// Checks weights only; disjointness is reported by [`validate`](Self::validate).
    pub fn new(leaves: Vec<Leaf>) -> Result<Self> {
        for (i, l) in leaves.iter().enumerate() {
            if !(l.weight > 0.0 && l.weight.is_finite()) {
                return Err(Error::InvalidLamination(format!("leaf {i} has weight {}", l.weight)));
            }
        }
        Ok(MeasuredLamination { leaves })
    }

    pub fn empty() -> Self {
        MeasuredLamination::default()
    }

    /// One leaf with endpoints `theta1, theta2` and weight `weight`.
    pub fn single(theta1: f64, theta2: f64, weight: f64) -> Result<Self> {
        let geodesic = Geodesic::new(theta1, theta2, Side::Counterclockwise)?;
        MeasuredLamination::new(vec![Leaf { geodesic, weight }])
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.leaves.iter().map(|l| l.weight).sum()
    }

    /// Lists every pair of leaves that cross.
    pub fn validate(&self) -> ValidationReport {
        let mut crossings = Vec::new();
        for i in 0..self.leaves.len() {
            for j in i + 1..self.leaves.len() {
                if self.leaves[i].geodesic.crosses(&self.leaves[j].geodesic) {
                    crossings.push((i, j));
                }
            }
        }
        ValidationReport { pass: crossings.is_empty(), crossings }
    }

    /// Parse `theta1 theta2 weight` lines (radians); `#` starts a comment.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut leaves = Vec::new();
        for (no, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 'theta1 theta2 weight', got {} fields", fields.len())));
            }
            let mut v = [0.0f64; 3];
            for (slot, f) in v.iter_mut().zip(&fields) {
                *slot = f.parse().map_err(|_| err(format!("bad number '{f}'")))?;
                if !slot.is_finite() {
                    return Err(err(format!("non-finite value '{f}'")));
                }
            }
            if v[2] <= 0.0 {
                return Err(err(format!("weight {} must be positive", v[2])));
            }
            let geodesic =
                Geodesic::new(v[0], v[1], Side::Counterclockwise).map_err(|e| err(e.to_string()))?;
            leaves.push(Leaf { geodesic, weight: v[2] });
        }
        MeasuredLamination::new(leaves)
    }

    /// Inverse of [`read`](Self::read).
    pub fn write<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# theta1 theta2 weight")?;
        for l in &self.leaves {
            writeln!(w, "{} {} {}", l.geodesic.theta1(), l.geodesic.theta2(), l.weight)?;
        }
        Ok(())
    }

    /// A random lamination of at most `max_leaves` pairwise disjoint leaves:
    /// sorted random endpoints matched by a random non-crossing pairing.
    /// Weights are uniform in `[0.1, 2)`.
    pub fn random<R: Rng>(rng: &mut R, max_leaves: usize) -> Self {
        let m = rng.gen_range(0..=max_leaves);
        let mut angles: Vec<f64> = (0..2 * m).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let mut stack: Vec<f64> = Vec::new();
        let mut leaves = Vec::with_capacity(m);
        for (k, &a) in angles.iter().enumerate() {
            let remaining = angles.len() - k;
            // close when forced (as many open arcs as remaining points) or by coin flip
            let close = !stack.is_empty() && (stack.len() == remaining || rng.gen_bool(0.5));
            if close {
                let b = stack.pop().expect("non-empty");
                let side = if rng.gen_bool(0.5) { Side::Counterclockwise } else { Side::Clockwise };
                if let Ok(geodesic) = Geodesic::new(b, a, side) {
                    leaves.push(Leaf { geodesic, weight: rng.gen_range(0.1..2.0) });
                }
            } else {
                stack.push(a);
            }
        }
        MeasuredLamination { leaves }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn lam(pairs: &[(f64, f64)]) -> MeasuredLamination {
        MeasuredLamination::new(
            pairs
                .iter()
                .map(|&(a, b)| Leaf {
                    geodesic: Geodesic::new(a, b, Side::Counterclockwise).unwrap(),
                    weight: 1.0,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation_examples() {
        let r = lam(&[(0.0, PI), (PI / 2.0, 1.5 * PI)]).validate();
        assert!(!r.pass);
        assert_eq!(r.crossings, vec![(0, 1)]);
        assert!(lam(&[(0.0, PI), (PI / 4.0, 0.75 * PI)]).validate().pass);
        // asymptotic leaves do not cross
        assert!(lam(&[(0.0, PI), (PI, 1.5)]).validate().pass);
    }

    #[test]
    fn random_laminations_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let l = MeasuredLamination::random(&mut rng, 20);
            assert!(l.len() <= 20);
            assert!(l.validate().pass);
        }
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let l = lam(&[(0.0, PI), (0.5, 1.0)]);
        let mut buf = Vec::new();
        l.write(&mut buf).unwrap();
        assert_eq!(MeasuredLamination::read(&buf[..]).unwrap(), l);

        let bad = "0 1 1\n# ok\n0.5 0.5 1\n";
        assert!(matches!(MeasuredLamination::read(bad.as_bytes()), Err(Error::Parse { line: 3, .. })));
        let bad = "0 1\n";
        assert!(matches!(MeasuredLamination::read(bad.as_bytes()), Err(Error::Parse { line: 1, .. })));
        let bad = "0 1 -2\n";
        assert!(matches!(MeasuredLamination::read(bad.as_bytes()), Err(Error::Parse { line: 1, .. })));
        let bad = "0 1 x\n";
        assert!(MeasuredLamination::read(bad.as_bytes()).is_err());
        assert!(MeasuredLamination::read("0 1 1 # trailing comment\n".as_bytes()).is_ok());
    }
}
