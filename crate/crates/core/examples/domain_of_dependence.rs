//! A random measured lamination, its domain of dependence, the
//! infinitesimal earthquake identity and the weight/distance inequality.
//!
//! ```text
//! cargo run --release --example domain_of_dependence -- [seed]
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minkowski::lamination::{
    infinitesimal_earthquake, thurston_norm_lower, zygmund_seminorm, DomainOfDependence, MeasuredLamination,
};
use minkowski::mink::boundary_null;
use minkowski::{klein_up, DiscPoint, MinkVec3};

fn main() -> minkowski::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lam = MeasuredLamination::random(&mut rng, 8);
    let x0 = MinkVec3::new(0.0, 0.0, 1.0);
    println!(
        "{} leaves, total weight {:.4}, disjoint: {}",
        lam.len(),
        lam.total_weight(),
        lam.validate().pass
    );
    lam.write(std::io::stdout().lock())?;

    let dom = DomainOfDependence::new(lam.clone(), x0, MinkVec3::ZERO)?;
    let mut worst: f64 = 0.0;
    for k in 0..256 {
        let th = (k as f64 + 0.5) * std::f64::consts::TAU / 256.0;
        if let (Ok(e), Ok(h)) = (infinitesimal_earthquake(&lam, x0, th), dom.support(boundary_null(th))) {
            worst = worst.max((e - h).abs());
        }
    }
    println!("earthquake field vs domain trace: max gap {worst:.2e}");

    let mut slack = f64::INFINITY;
    for _ in 0..200 {
        let z = |r: &mut ChaCha8Rng| {
            DiscPoint::polar(r.gen_range(0.0..0.95), r.gen_range(0.0..std::f64::consts::TAU))
        };
        let (a, b) = (klein_up(z(&mut rng)?)?, klein_up(z(&mut rng)?)?);
        if let Ok(wd) = dom.weight_distance(a, b) {
            slack = slack.min(wd.distance - wd.weight);
        }
    }
    println!("min(distance − weight) over 200 pairs: {slack:.3e}");

    println!("Thurston norm ≥ {:.4}", thurston_norm_lower(&lam, 2000, seed));
    let trace = |t: f64| dom.support(boundary_null(t)).unwrap_or(f64::NAN);
    println!("Zygmund seminorm of the trace (h ∈ [1e-3, 0.5]): {:.4}", zygmund_seminorm(trace, 1e-3, 0.5)?);
    Ok(())
}
