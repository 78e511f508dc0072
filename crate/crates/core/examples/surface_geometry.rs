//! Differential geometry read off a support function: the Gauss map
//! inverse, the curvature and the principal radii of a hyperboloid and of
//! a tilted, rescaled copy.
//!
//! ```text
//! cargo run --release --example surface_geometry
//! ```

use minkowski::support::{curvature, gauss_inverse, hyperboloid, shape_inverse_eigen, AnalyticSupport};
use minkowski::DiscPoint;

fn main() -> minkowski::Result<()> {
    // u = −2√(1−|z|²) + 0.3 z1 is a hyperboloid of radius 2 translated by (0.3, 0, 0)
    let base = hyperboloid(2.0);
    let u = AnalyticSupport::new(move |x, y| base(x, y) + 0.3 * x);
    for (r, th) in [(0.0, 0.0), (0.5, 0.3), (0.8, 2.0)] {
        let z = DiscPoint::polar(r, th)?;
        let p = gauss_inverse(&u, z)?;
        let (l1, l2) = shape_inverse_eigen(&u, z)?;
        println!(
            "z = ({:5.2}, {:5.2}): point ({:8.4}, {:8.4}, {:8.4}), ⟨p,p⟩ = {:8.4}, K = {:8.5}, radii {l1:.4} / {l2:.4}",
            z.z1,
            z.z2,
            p.x1,
            p.x2,
            p.x3,
            (p - minkowski::MinkVec3::new(0.3, 0.0, 0.0)).norm_sq(),
            curvature(&u, z)?,
        );
    }
    Ok(())
}
