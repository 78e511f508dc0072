//! Prescribed curvature with boundary data from a lamination: a single leaf
//! of weight 1, solved at `K = −1`, then checked against the envelope
//! bracket and by recovering the curvature from the discrete solution.
//!
//! ```text
//! cargo run --release --example lamination_solve -- [n]
//! ```

use std::sync::Arc;

use minkowski::lamination::{DomainOfDependence, MeasuredLamination};
use minkowski::mink::boundary_null;
use minkowski::solver::{
    curvature_recovery_within, sandwich_check, CurvatureField, Dirichlet, Solve, SolverConfig,
};
use minkowski::support::{BoundaryFn, Envelope};
use minkowski::{klein_up, DiscPoint, MinkVec3};

fn main() -> minkowski::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(65);
    let lam = MeasuredLamination::single(0.0, std::f64::consts::PI, 1.0)?;
    let x0 = klein_up(DiscPoint::new(0.0, -0.5)?)?;
    let dom = DomainOfDependence::new(lam, x0, MinkVec3::ZERO)?;
    // trace of the domain; endpoints take the lower one-sided value
    let phi = BoundaryFn::from_fn(1024, |t| {
        dom.support(boundary_null(t)).unwrap_or_else(|_| {
            let a = dom.support(boundary_null(t - 1e-9)).unwrap_or(f64::NAN);
            let b = dom.support(boundary_null(t + 1e-9)).unwrap_or(f64::NAN);
            a.min(b)
        })
    })?;
    let env = Arc::new(Envelope::new(&phi));

    let psi = CurvatureField::constant(1.0)?;
    let ring = {
        let env = Arc::clone(&env);
        Dirichlet::function(move |x, y| env.value(x, y) - (1.0 - x * x - y * y).max(0.0).sqrt())
    };
    let cfg = SolverConfig { n, ..Default::default() };
    let sol = Solve::new(&psi, &ring, &cfg).envelope(&env).run()?;
    println!(
        "n = {n}: {} iterations on the {} form, residual {:.2e}",
        sol.log.len() - 1,
        if sol.monotone { "monotone" } else { "9-point" },
        sol.residual
    );
    for note in &sol.notes {
        println!("  {note}");
    }

    let sw = sandwich_check(&sol.u, &phi, 1.0);
    println!(
        "sandwich: {} (above {:.2e}, below {:.2e}, tol {:.2e})",
        sw.pass, sw.max_above_envelope, sw.max_below_lower, sw.tol
    );
    // the lower ring is exact only for affine data, so stay off the ring
    for r in [0.4, 0.6, 0.8] {
        let k = curvature_recovery_within(&sol.u, r)?;
        println!(
            "recovered curvature, max rel. error within |z| ≤ {r}: {:.3e}",
            k.max_rel_err_within(r, |_, _| 1.0)
        );
    }
    Ok(())
}
