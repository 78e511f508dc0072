//! Convex envelopes of boundary data: exactness on affine data, a
//! lower-semicontinuous dip, and the cosmological-time levels below it.
//!
//! ```text
//! cargo run --release --example envelope
//! ```

use std::sync::Arc;

use minkowski::support::{convex_envelope, cosmological_level, BoundaryFn, Envelope, Grid, SupportFn};

fn main() -> minkowski::Result<()> {
    // affine data: the envelope is the plane itself
    let affine = BoundaryFn::from_fn(256, |t| 0.3 * t.cos() - 0.2 * t.sin() + 0.1)?;
    let env = Envelope::new(&affine);
    println!(
        "affine data: h(0.4, 0.3) = {:.12} (exact {:.12})",
        env.value(0.4, 0.3),
        0.3 * 0.4 - 0.2 * 0.3 + 0.1
    );

    // |sin| data with a dip to −1 at θ = π/2
    let phi =
        BoundaryFn::from_fn(256, |t| t.sin().abs())?.with_exceptional(std::f64::consts::FRAC_PI_2, -1.0)?;
    let env = Envelope::new(&phi);
    println!("dipped data: {} hull vertices, {} faces", env.vertices().len(), env.triangles().len());
    for (x, y) in [(0.0, 0.0), (0.0, 0.5), (0.0, 0.9), (0.5, 0.0), (-0.5, -0.5)] {
        println!("  h({x:5.2}, {y:5.2}) = {:.6}", env.value(x, y));
    }

    let grid = Arc::new(Grid::new(0.9, 65)?);
    let h = convex_envelope(&phi, Arc::clone(&grid));
    println!("grid envelope discretely convex: {}", h.is_discretely_convex());
    for d in [0.0, 0.5, 1.0] {
        let level = cosmological_level(&h, d)?;
        println!("  level T = {d}: support at the origin {:.6}", level.eval(0.0, 0.0).unwrap_or(f64::NAN));
    }
    Ok(())
}
