//! Solve for the hyperboloid `K = −1` with exact ring data and report the
//! error against the closed form on two grids.
//!
//! ```text
//! cargo run --release --example hyperboloid -- [n1 n2]
//! ```

use std::sync::Arc;
use std::time::Instant;

use minkowski::solver::{solve, CurvatureField, Dirichlet, SolverConfig};
use minkowski::support::{hyperboloid, GridSupportFn};

fn main() -> minkowski::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sizes = if args.is_empty() { vec![65, 129] } else { args };
    let psi = CurvatureField::constant(1.0)?;
    let ring = Dirichlet::function(hyperboloid(1.0));
    let mut prev: Option<f64> = None;
    for n in sizes {
        let cfg = SolverConfig { n, ..Default::default() };
        let t = Instant::now();
        let sol = solve(&psi, &ring, &cfg)?;
        let exact = GridSupportFn::from_fn(Arc::clone(sol.u.grid()), hyperboloid(1.0));
        let err = sol.u.max_abs_diff(&exact, true);
        print!(
            "n = {n:4}  iterations = {:2}  residual = {:.2e}  max error = {err:.3e}  ({:.2} s)",
            sol.log.len() - 1,
            sol.residual,
            t.elapsed().as_secs_f64()
        );
        if let Some(p) = prev {
            print!("  order = {:.2}", (p / err).log2());
        }
        println!();
        prev = Some(err);
    }
    Ok(())
}
