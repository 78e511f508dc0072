//! Constant-curvature leaves over zero boundary data: one solve per `K`,
//! checking that the leaves move to the past as `K → 0⁻`.
//!
//! ```text
//! cargo run --release --example foliation -- [n]
//! ```

use std::sync::Arc;

use minkowski::solver::{foliation_sweep, FoliationRing, SolverConfig};
use minkowski::support::{BoundaryFn, SupportFn};

fn main() -> minkowski::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(65);
    let cfg = SolverConfig { n, ..Default::default() };
    let phi = BoundaryFn::zero(256);
    // the exact leaves are hyperboloids −√(1−|z|²)/√|K|
    let exact = FoliationRing::Exact(Arc::new(|k: f64, x: f64, y: f64| {
        -(1.0 - x * x - y * y).max(0.0).sqrt() / (-k).sqrt()
    }));
    let ks = [-4.0, -2.0, -1.0, -0.5, -0.25];
    let fol = foliation_sweep(&phi, &ks, &cfg, &exact)?;
    for (k, leaf) in fol.ks.iter().zip(&fol.leaves) {
        let centre = leaf.u.eval(0.0, 0.0).unwrap_or(f64::NAN);
        println!(
            "K = {k:5}: {} iterations, u(0) = {centre:.6} (exact {:.6})",
            leaf.log.len() - 1,
            -1.0 / (-k).sqrt()
        );
    }
    let r = &fol.report;
    println!("ordered: {} (max u_K2 − u_K1 = {:.2e})", r.pass, r.max_violation);
    Ok(())
}
