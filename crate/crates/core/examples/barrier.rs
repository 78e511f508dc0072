//! Parabolic barrier surfaces: profile values, the ODE residual, the
//! boundary values of the support function and the induced metric, then an
//! OBJ mesh.
//!
//! ```text
//! cargo run --release --example barrier -- [K C] [out.obj]
//! ```

use std::fs::File;
use std::io::BufWriter;

use minkowski::barrier::{
    barrier_f, barrier_g, induced_metric_check, ode_residual, write_obj, BarrierParams, BarrierSupport,
};
use minkowski::support::radial_boundary_value;
use minkowski::NullFrame;

fn main() -> minkowski::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let nums: Vec<f64> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let (k, c) = match nums.as_slice() {
        [k, c, ..] => (*k, *c),
        _ => (-1.0, 1.0),
    };
    let out = args.iter().find(|a| a.ends_with(".obj"));

    let p = BarrierParams::new(k, c, NullFrame::standard(0.0))?;
    println!("K = {k}, C = {c}, D = {:.6}, cap s* = {}", p.d(), p.cap());
    println!("{:>6} {:>12} {:>12} {:>10}", "s", "g", "f", "residual");
    for s in [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0] {
        if s >= p.cap() {
            break;
        }
        println!(
            "{s:6.1} {:12.6} {:12.6} {:10.1e}",
            barrier_g(s, &p)?,
            barrier_f(s, &p)?,
            ode_residual(s, &p)?
        );
    }

    let b = BarrierSupport::new(p);
    for k in 0..6 {
        let th = k as f64 * std::f64::consts::TAU / 6.0;
        println!("boundary value at θ = {th:.3}: {:.6}", radial_boundary_value(&b, th)?.limit);
    }

    let m = induced_metric_check(&p, (-1.0, 1.0), (-2.0, 1.5), (9, 9))?;
    println!(
        "induced metric: ds² {:.1e}, dt² {:.1e}, off-diagonal {:.1e} -> {}",
        m.ss_rel_err,
        m.tt_rel_err,
        m.off_diagonal,
        if m.pass { "PASS" } else { "FAIL" }
    );

    if let Some(path) = out {
        let f = File::create(path).map_err(|e| minkowski::Error::Io(e.to_string()))?;
        write_obj(&p, (-3.0, 3.0), (-3.0, p.cap().min(3.0)), (41, 41), BufWriter::new(f))?;
        println!("wrote {path}");
    }
    Ok(())
}
