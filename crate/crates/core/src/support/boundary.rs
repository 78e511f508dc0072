//! Boundary data `φ : ∂𝔻 → ℝ` (support functions at infinity).

use std::f64::consts::TAU;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::mink::{angle_separation, canonical_angle};

pub const MIN_SAMPLES: usize = 16;

/// Uniform samples `φ(2πk/N)` plus optional point overrides for lower
/// semicontinuous data (a value below the surrounding trace at isolated angles).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFn {
    samples: Vec<f64>,
    exceptional: Vec<(f64, f64)>,
}

impl BoundaryFn {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "boundary function needs at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("boundary samples must be finite".into()));
        }
        Ok(BoundaryFn { samples, exceptional: Vec::new() })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        BoundaryFn::new((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
    }

    pub fn zero(n: usize) -> Self {
        BoundaryFn::new(vec![0.0; n.max(MIN_SAMPLES)]).expect("valid size")
    }

    /// Add a lower-semicontinuous dip: `φ(angle) = value`, which must not
    /// exceed the interpolated base value there.
    pub fn with_exceptional(mut self, angle: f64, value: f64) -> Result<Self> {
        let angle = canonical_angle(angle);
        let base = self.interpolate(angle);
        if value > base + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "exceptional value {value} at {angle} exceeds the base value {base}"
            )));
        }
        self.exceptional.push((angle, value));
        self.exceptional.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn exceptional(&self) -> &[(f64, f64)] {
        &self.exceptional
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.samples.len() as f64
    }

    fn interpolate(&self, theta: f64) -> f64 {
        let n = self.samples.len();
        let x = canonical_angle(theta) / TAU * n as f64;
        let k = (x.floor() as usize).min(n - 1);
        let t = x - k as f64;
        (1.0 - t) * self.samples[k] + t * self.samples[(k + 1) % n]
    }

    /// Periodic linear interpolation of the samples, with exceptional points
    /// taking precedence at their exact angle.
    pub fn eval(&self, theta: f64) -> f64 {
        for &(a, v) in &self.exceptional {
            if angle_separation(a, theta) <= 1e-12 {
                return v;
            }
        }
        self.interpolate(theta)
    }

    /// All `(angle, value)` points, sorted by angle, with exceptional points
    /// merged in (overriding a sample at the same angle).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> =
            (0..self.samples.len()).map(|k| (self.angle(k), self.samples[k])).collect();
        for &(a, v) in &self.exceptional {
            match pts.iter_mut().find(|p| angle_separation(p.0, a) <= 1e-12) {
                Some(p) => p.1 = p.1.min(v),
                None => pts.push((a, v)),
            }
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    }

    /// Parse a `theta,phi` CSV (header optional, `#` comments). The angles must
    /// be uniform `2πk/N` in order; other layouts are resampled onto `N` uniform
    /// angles by periodic linear interpolation.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut pts = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if idx == 0 && t.chars().next().is_some_and(|c| c.is_alphabetic()) {
                continue;
            }
            let mut it = t.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Parse { line: idx + 1, msg: "expected theta,phi".into() })?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })
            };
            let theta = parse(it.next())?;
            let phi = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse { line: idx + 1, msg: "too many fields".into() });
            }
            if !theta.is_finite() || !phi.is_finite() {
                return Err(Error::Parse { line: idx + 1, msg: "non-finite value".into() });
            }
            pts.push((canonical_angle(theta), phi));
        }
        let n = pts.len();
        if n < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!("{n} boundary samples, need {MIN_SAMPLES}")));
        }
        let uniform =
            pts.iter().enumerate().all(|(k, p)| angle_separation(p.0, TAU * k as f64 / n as f64) < 1e-9);
        if uniform {
            return BoundaryFn::new(pts.into_iter().map(|p| p.1).collect());
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let at = |theta: f64| {
            let idx = pts.partition_point(|p| p.0 <= theta);
            let (a, b) = if idx == 0 || idx == n { (pts[n - 1], pts[0]) } else { (pts[idx - 1], pts[idx]) };
            let span = canonical_angle(b.0 - a.0);
            let t = if span > 0.0 { canonical_angle(theta - a.0) / span } else { 0.0 };
            (1.0 - t) * a.1 + t * b.1
        };
        BoundaryFn::from_fn(n, at)
    }
}
