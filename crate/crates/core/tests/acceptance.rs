//! Acceptance checks. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any fails.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minkowski::barrier::{
    barrier_f, induced_metric_check, ode_residual, ode_residual_fd, BarrierParams, BarrierSupport,
};
use minkowski::lamination::{infinitesimal_earthquake, DomainOfDependence, MeasuredLamination};
use minkowski::mink::{boundary_null, boundary_tangent, cross, inner};
use minkowski::solver::{
    comparison_check, foliation_sweep, sandwich_check, solve, CurvatureField, Dirichlet, FoliationRing,
    Solution, SolverConfig,
};
use minkowski::support::{hyperboloid, radial_boundary_value, BoundaryFn, GridSupportFn, SupportFn};
use minkowski::{klein_up, DiscPoint, MinkVec3, NullFrame};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn failed(e: minkowski::Error) -> Outcome {
    outcome(false, format!("error: {e}"))
}

/// Every converged solve is collected here for the sandwich criterion,
/// with its boundary data at infinity and the lower curvature bound.
struct Solved {
    label: String,
    solution: Solution,
    phi: BoundaryFn,
    a: f64,
}

fn exact_error(s: &Solution, f: impl Fn(f64, f64) -> f64) -> f64 {
    let exact = GridSupportFn::from_fn(Arc::clone(s.u.grid()), f);
    s.u.max_abs_diff(&exact, true)
}

fn hyperboloid_oracle(log: &mut Vec<Solved>) -> Outcome {
    let psi = CurvatureField::constant(1.0).unwrap();
    let ring = Dirichlet::function(hyperboloid(1.0));
    let mut errs = Vec::new();
    let mut time129 = 0.0;
    for n in [129, 257] {
        let cfg = SolverConfig::default().with_grid(0.9, n);
        let t = Instant::now();
        let s = match solve(&psi, &ring, &cfg) {
            Ok(s) => s,
            Err(e) => return failed(e),
        };
        if n == 129 {
            time129 = t.elapsed().as_secs_f64();
        }
        errs.push(exact_error(&s, hyperboloid(1.0)));
        log.push(Solved {
            label: format!("hyperboloid n={n}"),
            solution: s,
            phi: BoundaryFn::zero(256),
            a: 1.0,
        });
    }
    let order = (errs[0] / errs[1]).log2();
    outcome(
        errs[0] <= 5e-3 && time129 <= 60.0 && order >= 1.8,
        format!(
            "n=129 error {:.3e} (≤ 5e-3) in {time129:.2} s (≤ 60); order 129→257 {order:.2} (≥ 1.8)",
            errs[0]
        ),
    )
}

fn rescaled_family(log: &mut Vec<Solved>) -> Outcome {
    let ks = [-4.0, -1.0, -0.25];
    let cfg = SolverConfig::default().with_grid(0.9, 129);
    let exact: Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync> =
        Arc::new(|k: f64, x: f64, y: f64| hyperboloid(1.0 / (-k).sqrt())(x, y));
    let phi = BoundaryFn::zero(256);
    let fol = match foliation_sweep(&phi, &ks, &cfg, &FoliationRing::Exact(Arc::clone(&exact))) {
        Ok(f) => f,
        Err(e) => return failed(e),
    };
    let mut errs = Vec::new();
    for (&k, s) in ks.iter().zip(&fol.leaves) {
        errs.push(exact_error(s, |x, y| exact(k, x, y)));
        log.push(Solved { label: format!("K={k}"), solution: s.clone(), phi: phi.clone(), a: -k });
    }
    let pass = errs.iter().all(|&e| e <= 5e-3) && fol.report.pass;
    outcome(
        pass,
        format!(
            "errors {:.2e} / {:.2e} / {:.2e} (≤ 5e-3); max u_K2 − u_K1 = {:.2e} (≤ 1e-6)",
            errs[0], errs[1], errs[2], fol.report.max_violation
        ),
    )
}

fn barrier_ode() -> Outcome {
    let (mut analytic, mut fd) = (0.0f64, 0.0f64);
    for &k in &[-1.0, -4.0] {
        for &c in &[1.0, -0.5, 0.0] {
            let p = BarrierParams::new(k, c, NullFrame::standard(0.0)).unwrap();
            let top = (p.cap() - 0.05).min(3.0);
            for i in 0..64 {
                let s = -3.0 + (top + 3.0) * i as f64 / 63.0;
                match (ode_residual(s, &p), ode_residual_fd(s, &p, 1e-2)) {
                    (Ok(a), Ok(f)) => {
                        analytic = analytic.max(a.abs());
                        fd = fd.max(f.abs());
                    }
                    (Err(e), _) | (_, Err(e)) => return failed(e),
                }
            }
        }
    }
    outcome(
        analytic <= 1e-12 && fd <= 1e-6,
        format!("max analytic residual {analytic:.2e} (≤ 1e-12), finite-difference {fd:.2e} (≤ 1e-6)"),
    )
}

fn barrier_limits() -> Outcome {
    let b = BarrierSupport::new(BarrierParams::new(-1.0, 1.0, NullFrame::standard(0.0)).unwrap());
    let at_v0 = match radial_boundary_value(&b, 0.0) {
        Ok(r) => r.limit,
        Err(e) => return failed(e),
    };
    let mut other: f64 = 0.0;
    for k in 1..=8 {
        let th = k as f64 * std::f64::consts::TAU / 9.0;
        match radial_boundary_value(&b, th) {
            Ok(r) => other = other.max(r.limit.abs()),
            Err(e) => return failed(e),
        }
    }
    outcome(
        (at_v0 + 1.0).abs() <= 1e-3 && other <= 1e-3,
        format!(
            "limit at [v0] {at_v0:.6} (−1 ± 1e-3); max |limit| at 8 other directions {other:.2e} (≤ 1e-3)"
        ),
    )
}

fn barrier_oracle(log: &mut Vec<Solved>) -> Outcome {
    let b = BarrierSupport::new(BarrierParams::new(-1.0, 1.0, NullFrame::standard(0.0)).unwrap());
    let f = move |x: f64, y: f64| b.eval(x, y).unwrap_or(f64::NAN);
    let cfg = SolverConfig::default().with_grid(0.85, 129);
    let psi = CurvatureField::constant(1.0).unwrap();
    let s = match solve(&psi, &Dirichlet::function(f), &cfg) {
        Ok(s) => s,
        Err(e) => return failed(e),
    };
    let err = exact_error(&s, f);
    let branch = if s.monotone { "monotone" } else { "9-point" };
    let iters = s.log.len() - 1;
    let phi = BoundaryFn::zero(256).with_exceptional(0.0, -1.0).unwrap();
    log.push(Solved { label: "barrier C=1".into(), solution: s, phi, a: 1.0 });
    outcome(
        err <= 1e-2,
        format!("R=0.85, n=129: error {err:.3e} (≤ 1e-2), {iters} iterations, {branch} form"),
    )
}

fn random_point(rng: &mut ChaCha8Rng) -> MinkVec3 {
    let r = rng.gen_range(0.0f64..0.95).sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    klein_up(DiscPoint::new(r * t.cos(), r * t.sin()).unwrap()).unwrap()
}

fn earthquake_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst, mut worst_cross, mut checked, mut skipped) = (0.0f64, 0.0f64, 0usize, 0usize);
    let mut instances = 0;
    while instances < 100 {
        let lam = MeasuredLamination::random(&mut rng, 20);
        let x0 = random_point(&mut rng);
        let Ok(d) = DomainOfDependence::new(lam.clone(), x0, MinkVec3::ZERO) else { continue };
        instances += 1;
        for k in 0..64 {
            let th = (k as f64 + 0.5) * std::f64::consts::TAU / 64.0;
            let eta = boundary_null(th);
            let v = boundary_tangent(th);
            for &s in d.outward_duals() {
                worst_cross = worst_cross.max((inner(eta, s) - inner(cross(eta, s), v)).abs());
            }
            match (infinitesimal_earthquake(&lam, x0, th), d.support(eta)) {
                (Ok(e), Ok(m)) => {
                    worst = worst.max((e - m).abs());
                    checked += 1;
                }
                _ => skipped += 1,
            }
        }
    }
    outcome(
        worst <= 1e-10 && worst_cross <= 1e-12 && checked > 0,
        format!(
            "{checked} angles over 100 laminations ({skipped} on a leaf endpoint): max gap {worst:.2e} (≤ 1e-10); cross identity {worst_cross:.2e} (≤ 1e-12)"
        ),
    )
}

fn weight_distance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut instances, mut worst) = (0, f64::NEG_INFINITY);
    let mut failures = 0;
    while instances < 100 {
        let lam = MeasuredLamination::random(&mut rng, 20);
        let x0 = random_point(&mut rng);
        let y0 = MinkVec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let Ok(d) = DomainOfDependence::new(lam, x0, y0) else { continue };
        let (x1, x2) = (random_point(&mut rng), random_point(&mut rng));
        let Ok(w) = d.weight_distance(x1, x2) else { continue };
        instances += 1;
        worst = worst.max(w.weight - w.distance);
        if !w.pass {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("100 instances, {failures} violations; max(weight − distance) = {worst:.3e} (≤ 1e-10)"),
    )
}

fn comparison(log: &mut Vec<Solved>) -> Outcome {
    let cfg = SolverConfig::default().with_grid(0.9, 129);
    let ring = Dirichlet::function(hyperboloid(1.0));
    // ψ₁ ≥ ψ₂: the larger curvature bound gives the flatter, higher solution
    let psi1 = CurvatureField::new(|x, y| 1.5 + 0.5 * (3.0 * x).sin() * y, 1.0, 2.0).unwrap();
    let psi2 = CurvatureField::constant(1.0).unwrap();
    let (s1, s2) = match (solve(&psi1, &ring, &cfg), solve(&psi2, &ring, &cfg)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return failed(e),
    };
    let r = match comparison_check(&s1.u, &s2.u) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    log.push(Solved { label: "comparison ψ1".into(), solution: s1, phi: BoundaryFn::zero(256), a: 1.0 });
    log.push(Solved { label: "comparison ψ2".into(), solution: s2, phi: BoundaryFn::zero(256), a: 1.0 });
    outcome(
        r.pass,
        format!(
            "interior min(u1 − u2) = {:.3e}, ring min = {:.3e} (tolerance {:.0e})",
            r.interior_min, r.boundary_min, r.tol
        ),
    )
}

fn sandwich(log: &[Solved]) -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for s in log {
        let r = sandwich_check(&s.solution.u, &s.phi, s.a);
        pass &= r.pass;
        lines.push(format!(
            "{}: above {:.1e}, below {:.1e}, tol {:.1e}",
            s.label, r.max_above_envelope, r.max_below_lower, r.tol
        ));
    }
    outcome(pass && !log.is_empty(), format!("{} solves; {}", log.len(), lines.join("; ")))
}

fn induced_metric() -> Outcome {
    let p = BarrierParams::new(-1.0, 1.0, NullFrame::standard(0.0)).unwrap();
    match induced_metric_check(&p, (-2.0, 2.0), (-2.0, 2.0), (17, 17)) {
        Ok(r) => outcome(
            r.pass,
            format!(
                "rel. errors ds² {:.1e}, dt² {:.1e}, cosh² profile {:.1e} (≤ 1e-4); off-diagonal {:.1e}",
                r.ss_rel_err,
                r.tt_rel_err,
                r.profile_rel_err.unwrap_or(f64::NAN),
                r.off_diagonal
            ),
        ),
        Err(e) => failed(e),
    }
}

fn main() {
    // sanity: the normalised C = 1 barrier
    let p = BarrierParams::new(-1.0, 1.0, NullFrame::standard(0.0)).unwrap();
    assert!(barrier_f(0.0, &p).is_ok());

    let mut solved = Vec::new();
    let mut results = vec![
        ("1 hyperboloid oracle", hyperboloid_oracle(&mut solved)),
        ("2 rescaled family", rescaled_family(&mut solved)),
        ("3 barrier ODE", barrier_ode()),
        ("4 barrier limits", barrier_limits()),
        ("5 barrier as solver oracle", barrier_oracle(&mut solved)),
        ("6 earthquake identity", earthquake_identity()),
        ("7 weight-distance", weight_distance()),
    ];
    let comparison = comparison(&mut solved);
    results.push(("8 sandwich", sandwich(&solved)));
    results.push(("9 comparison principle", comparison));
    results.push(("10 induced metric", induced_metric()));

    let mut all = true;
    for (name, o) in &results {
        println!("criterion {name}: {} — {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if !all {
        eprintln!("acceptance: some criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all {} criteria passed", results.len());
}
