//! Solver configuration, readable from a flat `key = value` text file.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::solver::stencil::reach_for;

/// How the Newton iteration is started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMode {
    /// Affine fit of the ring data plus a radial strict subsolution.
    RadialSubsolution,
    /// `h − (1/√a)√(1−|z|²)`, the lower end of the envelope bracket.
    EnvelopeMinusCt,
}

impl FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial-subsolution" => Ok(InitMode::RadialSubsolution),
            "envelope-minus-CT" | "envelope-minus-ct" => Ok(InitMode::EnvelopeMinusCt),
            other => Err(Error::InvalidArgument(format!("unknown initMode '{other}'"))),
        }
    }
}

impl fmt::Display for InitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitMode::RadialSubsolution => "radial-subsolution",
            InitMode::EnvelopeMinusCt => "envelope-minus-CT",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Radius of the sub-disc carrying the unknowns.
    pub radius: f64,
    /// Grid nodes per axis.
    pub n: usize,
    /// Directions of the monotone fallback stencil: 4, 8 or 16.
    pub directions: usize,
    /// Target for the max-norm residual.
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Initial step length of the line search, in `(0, 1]`.
    pub damping: f64,
    pub init: InitMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            radius: 0.9,
            n: 257,
            directions: 8,
            newton_tol: 1e-9,
            max_iters: 60,
            damping: 1.0,
            init: InitMode::RadialSubsolution,
        }
    }
}

impl SolverConfig {
    pub fn with_grid(mut self, radius: f64, n: usize) -> Self {
        self.radius = radius;
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.radius > 0.0 && self.radius < 1.0) {
            return bad(format!("R = {} must lie in (0, 1)", self.radius));
        }
        if self.n < 33 {
            return bad(format!("n = {} must be at least 33", self.n));
        }
        if reach_for(self.directions).is_none() {
            return bad(format!("directions = {} must be 4, 8 or 16", self.directions));
        }
        if !(self.newton_tol > 0.0) {
            return bad(format!("newtonTol = {} must be positive", self.newton_tol));
        }
        if self.max_iters == 0 {
            return bad("maxIters must be positive".into());
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad(format!("damping = {} must lie in (0, 1]", self.damping));
        }
        let h = 2.0 * self.radius / (self.n - 1) as f64;
        if self.radius + h * std::f64::consts::SQRT_2 >= 1.0 {
            return bad(format!("stencil ring of R = {} reaches the unit circle", self.radius));
        }
        Ok(())
    }

    /// Stencil reach of the monotone fallback.
    pub fn reach(&self) -> usize {
        reach_for(self.directions).unwrap_or(1)
    }

    pub fn h(&self) -> f64 {
        2.0 * self.radius / (self.n - 1) as f64
    }

    /// Parse `key = value` lines; `#` starts a comment. Unset keys keep
    /// their defaults, unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SolverConfig::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
                v.parse().map_err(|_| format!("bad number '{v}'"))
            }
            match key {
                "R" => cfg.radius = num(value).map_err(err)?,
                "n" => cfg.n = num(value).map_err(err)?,
                "directions" => cfg.directions = num(value).map_err(err)?,
                "newtonTol" => cfg.newton_tol = num(value).map_err(err)?,
                "maxIters" => cfg.max_iters = num(value).map_err(err)?,
                "damping" => cfg.damping = num(value).map_err(err)?,
                "initMode" => cfg.init = value.parse().map_err(|e: Error| err(e.to_string()))?,
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SolverConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "R = {}", self.radius)?;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "directions = {}", self.directions)?;
        writeln!(f, "newtonTol = {:e}", self.newton_tol)?;
        writeln!(f, "maxIters = {}", self.max_iters)?;
        writeln!(f, "damping = {}", self.damping)?;
        writeln!(f, "initMode = {}", self.init)
    }
}
