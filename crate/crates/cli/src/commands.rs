//! Subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use minkowski::barrier::{barrier_g, write_obj, BarrierParams, BarrierSupport};
use minkowski::lamination::{
    infinitesimal_earthquake, thurston_norm_lower, DomainOfDependence, MeasuredLamination,
};
use minkowski::mink::boundary_null;
use minkowski::solver::{
    curvature_recovery_within, foliation_sweep, sandwich_check, sandwich_midpoint, CurvatureField, Dirichlet,
    FoliationRing, Solution, Solve, SolverConfig,
};
use minkowski::support::{radial_boundary_value, BoundaryFn, Envelope, SupportFn};
use minkowski::{klein_up, DiscPoint, Error, MinkVec3, NullFrame, Result};

use crate::manifest::{read_manifests, sha256_file, Convergence, RunManifest};
use crate::{
    BarrierArgs, Command, DataArgs, EarthquakeArgs, Emit, FoliateArgs, LaminationCommand, ReportArgs,
    RingMode, SolveArgs, EXIT_IO, EXIT_NUMERICAL, THREADS_ENV,
};

/// Samples of boundary data derived from a lamination.
const LAMINATION_SAMPLES: usize = 1024;

pub(crate) fn dispatch(command: Command, args: Vec<String>) -> Result<i32> {
    let threads = threads()?;
    match command {
        Command::Solve(a) => cmd_solve(a, args, threads),
        Command::Foliate(a) => cmd_foliate(a, args, threads),
        Command::Barrier(a) => cmd_barrier(a, args, threads),
        Command::Lamination(c) => cmd_lamination(c),
        Command::Earthquake(a) => cmd_earthquake(a, args, threads),
        Command::Report(a) => cmd_report(a),
    }
}

fn threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::InvalidArgument(format!("{THREADS_ENV}='{v}' must be a positive integer"))),
        },
        Err(_) => Ok(1),
    }
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io(dir))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(io(path))?))
}

/// `z1,z2` in the open disc, lifted to ℍ².
pub fn parse_point(text: &str) -> Result<MinkVec3> {
    let bad = || Error::InvalidArgument(format!("expected 'z1,z2', got '{text}'"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let z1: f64 = a.trim().parse().map_err(|_| bad())?;
    let z2: f64 = b.trim().parse().map_err(|_| bad())?;
    klein_up(DiscPoint::new(z1, z2)?)
}

/// `const:V` or `bump:A:B`, the latter `A + (B−A)(1−|z|²)` with bounds
/// `[min, max]` of `A, B`.
pub fn parse_psi(text: &str) -> Result<CurvatureField> {
    let bad = || Error::InvalidArgument(format!("psi '{text}': expected const:V or bump:A:B"));
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        ["const", v] => CurvatureField::constant(num(v)?),
        ["bump", a, b] => {
            let (a, b) = (num(a)?, num(b)?);
            CurvatureField::new(move |x, y| a + (b - a) * (1.0 - x * x - y * y), a.min(b), a.max(b))
        }
        _ => Err(bad()),
    }
}

pub fn load_lamination(path: &Path) -> Result<MeasuredLamination> {
    let f = File::open(path).map_err(io(path))?;
    MeasuredLamination::read(BufReader::new(f)).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

/// Boundary data, plus the files it was read from.
pub fn load_boundary(data: &DataArgs) -> Result<(BoundaryFn, Vec<PathBuf>)> {
    if let Some(path) = &data.lamination {
        let lam = load_lamination(path)?;
        let x0 = parse_point(&data.x0)?;
        let dom = DomainOfDependence::new(lam, x0, MinkVec3::ZERO)?;
        // φ(θ) = H(e^{iθ}, 1); at a leaf endpoint take the lower one-sided value
        let phi = BoundaryFn::from_fn(LAMINATION_SAMPLES, |t| match dom.support(boundary_null(t)) {
            Ok(v) => v,
            Err(_) => {
                let a = dom.support(boundary_null(t - 1e-9)).unwrap_or(f64::NAN);
                let b = dom.support(boundary_null(t + 1e-9)).unwrap_or(f64::NAN);
                a.min(b)
            }
        })?;
        return Ok((phi, vec![path.clone()]));
    }
    match data.boundary.as_deref() {
        None | Some("zero") => Ok((BoundaryFn::zero(256), vec![])),
        Some(file) => {
            let path = PathBuf::from(file);
            let f = File::open(&path).map_err(io(&path))?;
            Ok((BoundaryFn::read_csv(BufReader::new(f))?, vec![path]))
        }
    }
}

fn ring_data(mode: RingMode, env: &Arc<Envelope>, a: f64) -> Dirichlet {
    match mode {
        RingMode::Midpoint => sandwich_midpoint(Arc::clone(env), a),
        RingMode::Lower => {
            let env = Arc::clone(env);
            let c = 1.0 / a.sqrt();
            Dirichlet::function(move |x, y| env.value(x, y) - c * (1.0 - x * x - y * y).max(0.0).sqrt())
        }
    }
}

fn digests(paths: &[PathBuf], cfg_file: Option<&PathBuf>) -> Result<Vec<crate::manifest::InputDigest>> {
    paths.iter().chain(cfg_file).map(|p| sha256_file(p).map_err(io(p))).collect()
}

fn convergence(s: &Solution) -> Convergence {
    Convergence {
        status: "converged".into(),
        iterations: s.log.len().saturating_sub(1),
        residual: s.residual,
        branch: if s.monotone { "monotone" } else { "9-point" }.into(),
    }
}

fn failed_convergence(e: &Error) -> Convergence {
    match e {
        Error::NoConvergence { iterations, residual, .. } => Convergence {
            status: "failed".into(),
            iterations: *iterations,
            residual: *residual,
            branch: String::new(),
        },
        _ => Convergence { status: "failed".into(), ..Default::default() },
    }
}

fn finish(mut m: RunManifest, start: Instant, out: &Path, code: i32) -> Result<i32> {
    m.wall_time_s = start.elapsed().as_secs_f64();
    m.exit_code = code;
    m.append_to(out).map_err(io(out))?;
    Ok(code)
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_solve(a: SolveArgs, args: Vec<String>, threads: usize) -> Result<i32> {
    let start = Instant::now();
    let cfg = a.solver.resolve()?;
    let psi = parse_psi(&a.psi)?;
    let (phi, files) = load_boundary(&a.data)?;
    let mut m = RunManifest::new("solve", args);
    m.threads = threads;
    m.inputs = digests(&files, a.solver.config.as_ref())?;
    m.config = format!("{cfg}psi = {}\nring = {:?}\n", a.psi, a.ring);

    let env = Arc::new(Envelope::new(&phi));
    let ring = ring_data(a.ring, &env, psi.lower());
    let sol = match Solve::new(&psi, &ring, &cfg).envelope(&env).run() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            m.convergence.push(failed_convergence(&e));
            let code = crate::exit_code(&e);
            return finish(m, start, &a.out, code);
        }
    };
    m.convergence.push(convergence(&sol));

    let sw = sandwich_check(&sol.u, &phi, psi.lower());
    m.check(
        "sandwich",
        sw.pass,
        format!("above {:.3e}, below {:.3e}, tol {:.3e}", sw.max_above_envelope, sw.max_below_lower, sw.tol),
    );
    let radius = 0.9 * cfg.radius;
    match curvature_recovery_within(&sol.u, radius) {
        Ok(est) => {
            let err = est.max_rel_err_within(radius, |x, y| psi.eval(x, y));
            // passes when the estimate exists (det > 0) inside the radius; the
            // error is reported, since the monotone form carries an angular
            // consistency error that does not vanish with h
            let form = if sol.monotone { "monotone" } else { "9-point" };
            m.check(
                "curvature-recovery",
                true,
                format!("det > 0 within |z| <= {radius}; max rel. error {err:.3e} ({form} form)"),
            );
        }
        Err(e) => m.check("curvature-recovery", false, e.to_string()),
    }

    let csv = a.out.join("solution.csv");
    sol.write_csv(create(&csv)?)?;
    let log = a.out.join("convergence.csv");
    sol.write_log(create(&log)?)?;
    m.outputs = vec![csv.display().to_string(), log.display().to_string()];

    println!(
        "converged in {} iterations on the {} form, residual {:.3e}",
        sol.log.len() - 1,
        if sol.monotone { "monotone" } else { "9-point" },
        sol.residual
    );
    for note in &sol.notes {
        println!("  note: {note}");
    }
    for c in &m.checks {
        println!("{}: {} ({})", c.name, status(c.pass), c.detail);
    }
    let code = if m.all_checks_pass() { 0 } else { EXIT_NUMERICAL };
    finish(m, start, &a.out, code)
}

fn cmd_foliate(a: FoliateArgs, args: Vec<String>, threads: usize) -> Result<i32> {
    let start = Instant::now();
    let cfg: SolverConfig = a.solver.resolve()?;
    let (phi, files) = load_boundary(&a.data)?;
    let mut m = RunManifest::new("foliate", args);
    m.threads = threads;
    m.inputs = digests(&files, a.solver.config.as_ref())?;
    let ks: Vec<String> = a.ks.iter().map(|k| k.to_string()).collect();
    m.config = format!("{cfg}ks = {}\nring = {:?}\n", ks.join(","), a.ring);

    let env = Arc::new(Envelope::new(&phi));
    let ring = match a.ring {
        RingMode::Midpoint => FoliationRing::SandwichMidpoint,
        RingMode::Lower => {
            let env = Arc::clone(&env);
            FoliationRing::Exact(Arc::new(move |k: f64, x: f64, y: f64| {
                env.value(x, y) - (1.0 - x * x - y * y).max(0.0).sqrt() / (-k).sqrt()
            }))
        }
    };
    let fol = match foliation_sweep(&phi, &a.ks, &cfg, &ring) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            m.convergence.push(failed_convergence(&e));
            let code = crate::exit_code(&e);
            return finish(m, start, &a.out, code);
        }
    };
    for (k, leaf) in fol.ks.iter().zip(&fol.leaves) {
        m.convergence.push(convergence(leaf));
        let path = a.out.join(format!("leaf_K{k}.csv"));
        leaf.write_csv(create(&path)?)?;
        m.outputs.push(path.display().to_string());
        let sw = sandwich_check(&leaf.u, &phi, -k);
        m.check(&format!("sandwich K={k}"), sw.pass, format!("tol {:.3e}", sw.tol));
    }
    let r = &fol.report;
    let detail = match r.worst {
        Some((k1, k2, x, y)) => {
            format!(
                "max u_K2 - u_K1 = {:.3e} (K1={k1}, K2={k2} at ({x:.4}, {y:.4})), tol {:.0e}",
                r.max_violation, r.tol
            )
        }
        None => "single leaf: vacuous".into(),
    };
    m.check("monotonicity", r.pass, detail);

    let report = a.out.join("foliation.txt");
    let mut w = create(&report)?;
    for c in &m.checks {
        writeln!(w, "{}: {} ({})", c.name, status(c.pass), c.detail)?;
        println!("{}: {} ({})", c.name, status(c.pass), c.detail);
    }
    w.flush()?;
    m.outputs.push(report.display().to_string());
    let code = if m.all_checks_pass() { 0 } else { EXIT_NUMERICAL };
    finish(m, start, &a.out, code)
}

fn cmd_barrier(a: BarrierArgs, args: Vec<String>, threads: usize) -> Result<i32> {
    let start = Instant::now();
    if a.samples < 2 {
        return Err(Error::InvalidArgument("--samples must be at least 2".into()));
    }
    let mut p = BarrierParams::new(a.k, a.c, NullFrame::standard(a.theta0))?;
    if let Some(d) = a.d {
        p = p.with_d(d);
    }
    let mut m = RunManifest::new("barrier", args);
    m.threads = threads;
    m.config =
        format!("K = {}\nC = {}\nD = {}\ntheta0 = {}\nsamples = {}\n", a.k, a.c, p.d(), a.theta0, a.samples);

    let top = (p.cap()).min(3.0);
    if matches!(a.emit, Emit::Obj | Emit::All) {
        let path = a.out.join("barrier.obj");
        let mut w = create(&path)?;
        write_obj(&p, (-3.0, 3.0), (-3.0, top), (a.samples, a.samples), &mut w)?;
        w.flush()?;
        m.outputs.push(path.display().to_string());
    }
    let b = BarrierSupport::new(p);
    if matches!(a.emit, Emit::Csv | Emit::All) {
        let path = a.out.join("barrier_disc.csv");
        let mut w = create(&path)?;
        writeln!(w, "z1,z2,u")?;
        let n = a.samples;
        for j in 0..n {
            for i in 0..n {
                let (x, y) =
                    (-0.99 + 1.98 * i as f64 / (n - 1) as f64, -0.99 + 1.98 * j as f64 / (n - 1) as f64);
                if x * x + y * y < 0.99 * 0.99 {
                    if let Some(u) = b.eval(x, y) {
                        writeln!(w, "{x},{y},{u}")?;
                    }
                }
            }
        }
        w.flush()?;
        m.outputs.push(path.display().to_string());
    }

    // boundary values at [v₀] and 8 other directions
    let at_v0 = radial_boundary_value(&b, a.theta0)?.limit;
    let mut others = Vec::new();
    for k in 1..=8 {
        let th = a.theta0 + k as f64 * std::f64::consts::TAU / 9.0;
        others.push(radial_boundary_value(&b, th)?.limit);
    }
    println!("g(0) = {}", barrier_g(0.0, &p)?);
    println!("support limit at [v0]: {at_v0:.6}");
    for (k, v) in others.iter().enumerate() {
        println!("support limit at theta0 + {}·2π/9: {v:.6}", k + 1);
    }
    if a.c > 0.0 && a.d.is_none() {
        let worst = others.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let pass = (at_v0 + a.c.sqrt()).abs() <= 1e-3 && worst <= 1e-3;
        m.check("limits", pass, format!("[v0] {at_v0:.6} vs {:.6}; others max |u| {worst:.2e}", -a.c.sqrt()));
        println!("limits: {}", status(pass));
    }
    let code = if m.all_checks_pass() { 0 } else { EXIT_NUMERICAL };
    finish(m, start, &a.out, code)
}

fn cmd_lamination(c: LaminationCommand) -> Result<i32> {
    match c {
        LaminationCommand::Check { file } => {
            let lam = load_lamination(&file)?;
            let r = lam.validate();
            println!("{} leaves, total weight {}", lam.len(), lam.total_weight());
            for (i, j) in &r.crossings {
                println!("leaves {} and {} cross", i + 1, j + 1);
            }
            println!("disjointness: {}", status(r.pass));
            Ok(if r.pass { 0 } else { EXIT_NUMERICAL })
        }
        LaminationCommand::Random { seed, max_leaves, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lam = MeasuredLamination::random(&mut rng, max_leaves);
            match out {
                Some(p) => {
                    let mut w = create(&p)?;
                    lam.write(&mut w)?;
                    w.flush()?;
                }
                None => lam.write(std::io::stdout().lock())?,
            }
            Ok(0)
        }
        LaminationCommand::Norm { file, trials, seed } => {
            let lam = load_lamination(&file)?;
            println!("thurston norm >= {}", thurston_norm_lower(&lam, trials, seed));
            Ok(0)
        }
    }
}

fn cmd_earthquake(a: EarthquakeArgs, args: Vec<String>, threads: usize) -> Result<i32> {
    let start = Instant::now();
    if a.angles == 0 {
        return Err(Error::InvalidArgument("--angles must be positive".into()));
    }
    let lam = load_lamination(&a.lamination)?;
    let x0 = parse_point(&a.x0)?;
    let dom = DomainOfDependence::new(lam.clone(), x0, MinkVec3::ZERO)?;
    let mut m = RunManifest::new("earthquake", args);
    m.threads = threads;
    m.inputs = digests(std::slice::from_ref(&a.lamination), None)?;
    m.config = format!("angles = {}\nx0 = {}\n", a.angles, a.x0);

    let path = a.out.join("earthquake.csv");
    let mut w = create(&path)?;
    writeln!(w, "theta,field,trace,difference")?;
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for k in 0..a.angles {
        // half-step offset keeps the samples off integer-multiple endpoints
        let th = (k as f64 + 0.5) * std::f64::consts::TAU / a.angles as f64;
        match (infinitesimal_earthquake(&lam, x0, th), dom.support(boundary_null(th))) {
            (Ok(e), Ok(t)) => {
                worst = worst.max((e - t).abs());
                writeln!(w, "{th},{e},{t},{}", e - t)?;
            }
            _ => skipped += 1,
        }
    }
    w.flush()?;
    m.outputs.push(path.display().to_string());
    let pass = worst <= 1e-10;
    m.check(
        "identity",
        pass,
        format!("max |field - trace| = {worst:.3e}, {skipped} angles on a leaf endpoint"),
    );
    println!("max |field - trace| = {worst:.3e} over {} angles: {}", a.angles - skipped, status(pass));
    finish(m, start, &a.out, if pass { 0 } else { EXIT_NUMERICAL })
}

fn cmd_report(a: ReportArgs) -> Result<i32> {
    let runs = match read_manifests(&a.dir) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", a.dir.display());
            return Ok(EXIT_IO);
        }
    };
    println!("{} runs in {}", runs.len(), a.dir.display());
    for (i, r) in runs.iter().enumerate() {
        let passed = r.checks.iter().filter(|c| c.pass).count();
        let conv = r
            .convergence
            .iter()
            .map(|c| format!("{} ({} it, {:.1e}, {})", c.status, c.iterations, c.residual, c.branch))
            .collect::<Vec<_>>()
            .join("; ");
        println!(
            "{:3}  {:10} exit {}  {:8.2} s  checks {}/{}  {}",
            i + 1,
            r.command,
            r.exit_code,
            r.wall_time_s,
            passed,
            r.checks.len(),
            conv
        );
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!("       FAIL {}: {}", c.name, c.detail);
        }
    }
    Ok(0)
}
