//! Command-line surface: one subcommand per laboratory operation.
//!
//! Exit codes: 0 success, 1 validation/usage error, 2 numerical failure
//! (non-convergence or an unexpected blowup flag). `TRIWAVE_THREADS` caps
//! internal parallelism.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evolution::{
    evolve, series_drift, strang_step, threshold_constant, ThresholdBranch,
};
use crate::fields::band_limited;
use crate::functionals::{
    action_gradient, classify_case, nehari_project, phase_map, tilde_report, PhaseDirection,
};
use crate::grid::{
    apply_gradient, apply_laplacian, apply_partial, from_spectral, l2_norm_sq, to_spectral,
    ComplexField,
};
use crate::io::config::RunConfig;
use crate::io::series::{read_series, write_series};
use crate::io::snapshot::write_snapshot;
use crate::solver::{
    gn_constant, ground_state, mu_estimate, nonexistence_probe, pohozaev_check, traveling_wave,
};
use crate::state::{gauge_align, gauge_transform, invariants, Params, TriField};

const USAGE: &str = "usage: triwave <command> [--config FILE] [--out FILE] [--series FILE]

commands:
  evolve      integrate the configured data and report conservation drift
  ground      compute a standing ground state (c = 0)
  twave       compute a boosted traveling wave (c ≠ 0)
  gn          estimate the sharp Gagliardo-Nirenberg constant (dim 4)
  mu          estimate the Nehari minimum of the action
  threshold   compute the oscillating-data mass cap for the configured couplings
  scan        run the oscillation scan over [scan] c_values
  probe       run the mass-resonance nonexistence probe
  check       run the invariant self-test suite (optionally re-check --series CSV)

flags:
  --config FILE   configuration file (defaults apply when omitted)
  --out FILE      output artifact (snapshot for ground/twave/gn, CSV for evolve/scan)
  --series FILE   CSV re-checked by `check`

environment:
  TRIWAVE_THREADS   cap on internal parallelism";

fn init_threads() {
    static POOL: OnceLock<()> = OnceLock::new();
    POOL.get_or_init(|| {
        if let Ok(v) = std::env::var("TRIWAVE_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
        }
    });
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::SolveFailed { .. } | Error::Blowup(_) | Error::NonPositiveCubic { .. } => 2,
        _ => 1,
    }
}

struct Cli {
    command: String,
    config: Option<String>,
    out: Option<String>,
    series: Option<String>,
}

fn parse_args(args: &[String]) -> std::result::Result<Cli, String> {
    if args.is_empty() {
        return Err("missing command".into());
    }
    let mut cli = Cli { command: args[0].clone(), config: None, out: None, series: None };
    let mut i = 1;
    while i < args.len() {
        let flag = args[i].as_str();
        let value = args.get(i + 1).cloned();
        match flag {
            "--config" => cli.config = Some(value.ok_or("--config needs a path")?),
            "--out" => cli.out = Some(value.ok_or("--out needs a path")?),
            "--series" => cli.series = Some(value.ok_or("--series needs a path")?),
            other => return Err(format!("unknown flag `{other}`")),
        }
        i += 2;
    }
    Ok(cli)
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            RunConfig::parse(&text)
        }
        None => Ok(RunConfig::default()),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn dispatch(args: &[String]) -> i32 {
    init_threads();
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("error: {msg}\n{USAGE}");
            return 1;
        }
    };
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    // every run logs the fully resolved configuration for reproducibility
    println!("# resolved configuration");
    for line in cfg.serialize().lines() {
        println!("# {line}");
    }

    let run: Result<i32> = match cli.command.as_str() {
        "evolve" => cmd_evolve(&cfg, cli.out.as_deref()),
        "ground" => cmd_ground(&cfg, cli.out.as_deref()),
        "twave" => cmd_twave(&cfg, cli.out.as_deref()),
        "gn" => cmd_gn(&cfg, cli.out.as_deref()),
        "mu" => cmd_mu(&cfg),
        "threshold" => cmd_threshold(&cfg),
        "scan" => cmd_scan(&cfg, cli.out.as_deref()),
        "probe" => cmd_probe(&cfg),
        "check" => cmd_check(&cfg, cli.series.as_deref()),
        other => {
            eprintln!("error: unknown command `{other}`\n{USAGE}");
            return 1;
        }
    };
    match run {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_evolve(cfg: &RunConfig, out: Option<&str>) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let params = cfg.build_params()?;
    let data = cfg.build_data(&grid)?;
    let traj = evolve(&params, &data, &cfg.evolve_config())?;
    let drift = traj.drift();
    println!("verdict: {}", traj.verdict.label());
    println!("samples: {} (t = 0 .. {})", traj.times.len(), traj.final_time);
    println!(
        "relative drift: M {:.3e}  M1 {:.3e}  M2 {:.3e}  M3 {:.3e}  E {:.3e}  |P| {:.3e}",
        drift.m, drift.m1, drift.m2, drift.m3, drift.e, drift.p
    );
    if let Some(path) = out {
        write_series(path, &traj)?;
        println!("series written to {path}");
    }
    Ok(if traj.verdict == crate::evolution::Verdict::Completed { 0 } else { 2 })
}

fn cmd_ground(cfg: &RunConfig, out: Option<&str>) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let params = cfg.build_params()?;
    let wave = ground_state(&params, &grid, &cfg.solve_options())?;
    let rep = tilde_report(&params, &wave.profile)?;
    let po = pohozaev_check(&params, &wave.profile)?;
    println!(
        "S = {:.12e}  Q = {:.12e}  V = {:.12e}  N = {:.3e}",
        rep.s, rep.q, rep.v, rep.n
    );
    println!(
        "grad residual = {:.3e}; Pohozaev residuals = {:.3e}, {:.3e}; case {}",
        wave.grad_residual,
        po.residual1,
        po.residual2,
        wave.case.label()
    );
    if wave.restart_spread > 0.01 {
        println!("warning: restart spread {:.2}% > 1%", wave.restart_spread * 100.0);
    }
    if let Some(path) = out {
        write_snapshot(path, &wave.profile, &params)?;
        println!("snapshot written to {path}");
    }
    Ok(0)
}

fn cmd_twave(cfg: &RunConfig, out: Option<&str>) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let params = cfg.build_params()?;
    let wave = traveling_wave(&params, &grid, &cfg.solve_options())?;
    let rep = tilde_report(&params, &wave.profile)?;
    println!(
        "case {}: S̃ = {:.12e}  Q̃ = {:.12e}  Ṽ = {:.12e}  Ñ = {:.3e}",
        wave.case.label(),
        rep.s,
        rep.q,
        rep.v,
        rep.n
    );
    println!("grad residual = {:.3e}", wave.grad_residual);
    let aligned = gauge_align(&wave.profile);
    let max_im = aligned
        .components()
        .iter()
        .flat_map(|f| f.values().iter())
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    let max_re = aligned
        .components()
        .iter()
        .flat_map(|f| f.values().iter())
        .map(|z| z.re.abs())
        .fold(0.0, f64::max);
    println!("profile complexity max|Im|/max|Re| (gauge-aligned): {:.3e}", max_im / max_re);
    if let Some(path) = out {
        write_snapshot(path, &wave.profile, &params)?;
        println!("snapshot written to {path}");
    }
    Ok(0)
}

fn cmd_gn(cfg: &RunConfig, out: Option<&str>) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let gammas = [cfg.params.gamma1, cfg.params.gamma2, cfg.params.gamma3];
    let gn = gn_constant(gammas, &grid, &cfg.solve_options())?;
    let params = Params::standing(gammas[0], gammas[1], gammas[2], 1.0, 4)?;
    let j_at_profile = crate::solver::gn_quotient(&params, &gn.profile)?;
    let equality = (j_at_profile - gn.alpha).abs() / gn.alpha;
    println!("alpha = {:.9e}  C_opt = {:.9e}", gn.alpha, gn.c_opt);
    println!("direct-descent J (upper bound) = {:.9e}", gn.j_direct);
    println!("equality residual |J − 2√M|/J at minimizer: {:.3e}", equality);
    if let Some(path) = out {
        write_snapshot(path, &gn.profile, &params)?;
        println!("snapshot written to {path}");
    }
    Ok(0)
}

fn cmd_mu(cfg: &RunConfig) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let params = cfg.build_params()?;
    let case = classify_case(&params)?;
    let mu = mu_estimate(&params, &grid, &cfg.solve_options())?;
    println!("case {}: mu = {:.12e}", case.label(), mu);
    Ok(0)
}

fn cmd_threshold(cfg: &RunConfig) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let gammas = [cfg.params.gamma1, cfg.params.gamma2, cfg.params.gamma3];
    let branch = crate::evolution::threshold_branch(gammas)?;
    let mut unit_c = vec![0.0; cfg.grid.dim];
    unit_c[cfg.scan.axis] = 1.0;
    let omega_unit = branch.omega_unit(gammas);
    let mu_params = match branch {
        ThresholdBranch::C0 => Params::new(gammas[1], gammas[0], gammas[2], omega_unit, unit_c)?,
        _ => Params::new(gammas[0], gammas[1], gammas[2], omega_unit, unit_c)?,
    };
    let mu_unit = mu_estimate(&mu_params, &grid, &cfg.solve_options())?;
    let (branch, cap) = threshold_constant(gammas, mu_unit)?;
    println!(
        "branch {}: mu(omega = {:.6}, |c| = 1) = {:.9e}",
        branch.label(),
        omega_unit,
        mu_unit
    );
    println!("mass cap {} < {:.9e}", branch.capped_norms(), cap);
    Ok(0)
}

fn cmd_scan(cfg: &RunConfig, out: Option<&str>) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let gammas = [cfg.params.gamma1, cfg.params.gamma2, cfg.params.gamma3];
    let data = cfg.build_data(&grid)?;
    let rows = crate::evolution::oscillation_scan(
        &data,
        gammas,
        &cfg.scan_velocities(),
        &cfg.solve_options(),
    )?;
    println!("{:>8}  {:>14}  {:>14}  {:>14}  {:>14}  class", "|c|", "V", "S", "N", "mu");
    for r in &rows {
        println!(
            "{:8.3}  {:14.6e}  {:14.6e}  {:14.6e}  {:14.6e}  {}",
            r.c_mag,
            r.v_dressed,
            r.s_dressed,
            r.n_dressed,
            r.mu,
            r.region.label()
        );
    }
    if let Some(path) = out {
        let mut text = String::from("c,V,S,N,mu,classification\n");
        for r in &rows {
            text.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                r.c_mag,
                r.v_dressed,
                r.s_dressed,
                r.n_dressed,
                r.mu,
                r.region.label()
            ));
        }
        std::fs::write(path, text)?;
        println!("scan written to {path}");
    }
    Ok(0)
}

fn cmd_probe(cfg: &RunConfig) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let params = cfg.build_params()?;
    let trace = nonexistence_probe(&params, &grid, &cfg.solve_options())?;
    let stride = (trace.q_trace.len() / 20).max(1);
    println!("{:>8}  {:>14}", "iter", "Q̃");
    for (i, q) in trace.q_trace.iter().enumerate() {
        if i % stride == 0 || i + 1 == trace.q_trace.len() {
            println!("{i:8}  {q:14.6e}");
        }
    }
    println!("dilation identity residual at final candidate: {:.3}", trace.dilation_residual);
    println!("verdict: {}", trace.verdict);
    Ok(0)
}

struct CheckSuite {
    all_pass: bool,
}

impl CheckSuite {
    fn new() -> Self {
        Self { all_pass: true }
    }
    fn report(&mut self, name: &str, metric: f64, budget: f64) {
        let pass = metric <= budget;
        self.all_pass &= pass;
        println!(
            "{} {name}: {metric:.3e} (budget {budget:.1e})",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    fn report_err(&mut self, name: &str, err: &Error) {
        self.all_pass = false;
        println!("FAIL {name}: {err}");
    }
}

fn cmd_check(cfg: &RunConfig, series: Option<&str>) -> Result<i32> {
    let grid = cfg.build_grid()?;
    let params = cfg.build_params()?;
    let mut suite = CheckSuite::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.data.seed);

    // transforms
    let f = band_limited(&grid, &mut rng, grid.n_per_dim() / 4, 1.0);
    let coeffs = to_spectral(&f);
    let back = from_spectral(&grid, coeffs.clone())?;
    let rt = (f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        / f.values().iter().map(|z| z.norm_sqr()).sum::<f64>())
    .sqrt();
    suite.report("fft round-trip", rt, 1e-12);

    let quad = l2_norm_sq(&f);
    let spec: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.cell_volume()
        / grid.total_points() as f64;
    suite.report("Parseval identity", (quad - spec).abs() / quad, 1e-12);

    let lap = apply_laplacian(&f);
    let mut div = ComplexField::zeros(grid.clone());
    for (a, ga) in apply_gradient(&f).iter().enumerate() {
        let dga = apply_partial(ga, a);
        for (d, s) in div.values_mut().iter_mut().zip(dga.values()) {
            *d += s;
        }
    }
    let lap_err = (div
        .values()
        .iter()
        .zip(lap.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        / lap.values().iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300))
    .sqrt();
    suite.report("divergence∘gradient = laplacian", lap_err, 1e-12);

    // invariants
    let tri = TriField::new(
        band_limited(&grid, &mut rng, 6, 0.8),
        band_limited(&grid, &mut rng, 6, 0.8),
        band_limited(&grid, &mut rng, 6, 0.8),
    )?;
    let base = invariants(&params, &tri);
    let mut gauge_err = 0.0f64;
    for _ in 0..20 {
        let theta: f64 = rand::Rng::gen::<f64>(&mut rng) * 10.0;
        let inv = invariants(&params, &gauge_transform(&tri, theta));
        gauge_err = gauge_err
            .max((inv.m - base.m).abs() / base.m)
            .max((inv.e - base.e).abs() / base.e.abs().max(1e-300))
            .max((inv.k - base.k).abs() / base.k);
    }
    suite.report("gauge invariance of invariants", gauge_err, 1e-12);
    suite.report("mass identity M = M1 + M2", (base.m - base.m1 - base.m2).abs() / base.m, 1e-12);

    // variational layer at a case-A parameter set
    let thresholds = params.gamma1.max(params.gamma2) * params.c_norm_sq() / 4.0;
    let omega_a = (1.5 * thresholds.max(params.gamma3 * params.c_norm_sq() / 8.0)).max(1.0);
    let pa = params.with_omega(omega_a);
    match phase_map(&tri, &pa, PhaseDirection::Strip)
        .and_then(|s| phase_map(&s, &pa, PhaseDirection::Dress))
    {
        Ok(round) => suite.report("phase strip∘dress identity", round.rel_l2_distance(&tri), 1e-13),
        Err(e) => suite.report_err("phase strip∘dress identity", &e),
    }

    let mut nehari_err = 0.0f64;
    let mut nehari_fail = None;
    for _ in 0..20 {
        let mut trial = TriField::new(
            band_limited(&grid, &mut rng, 6, 0.8),
            band_limited(&grid, &mut rng, 6, 0.8),
            band_limited(&grid, &mut rng, 6, 0.8),
        )?;
        match tilde_report(&pa, &trial) {
            Ok(rep) if rep.v < 0.0 => {
                trial = TriField::new(
                    trial.u.clone(),
                    trial.v.clone(),
                    trial.w.scaled(Complex64::new(-1.0, 0.0)),
                )?;
            }
            Ok(_) => {}
            Err(e) => {
                nehari_fail = Some(e);
                break;
            }
        }
        match nehari_project(&pa, &trial) {
            Ok((proj, _)) => {
                let rep = tilde_report(&pa, &proj)?;
                nehari_err = nehari_err.max(rep.n.abs() / rep.q.abs().max(1e-300));
            }
            Err(e) => {
                nehari_fail = Some(e);
                break;
            }
        }
    }
    match nehari_fail {
        None => suite.report("Nehari projection |N|/Q", nehari_err, 1e-10),
        Some(e) => suite.report_err("Nehari projection |N|/Q", &e),
    }

    match action_gradient(&pa, &tri) {
        Ok(grad) => {
            let mut fd_err = 0.0f64;
            let eps = 1e-5;
            for _ in 0..3 {
                let dir = TriField::new(
                    band_limited(&grid, &mut rng, 6, 1.0),
                    band_limited(&grid, &mut rng, 6, 1.0),
                    band_limited(&grid, &mut rng, 6, 1.0),
                )?;
                let plus = tilde_report(&pa, &tri.axpy(eps, &dir))?.s;
                let minus = tilde_report(&pa, &tri.axpy(-eps, &dir))?.s;
                let fd = (plus - minus) / (2.0 * eps);
                let an = grad.inner(&dir)?;
                fd_err = fd_err.max((fd - an).abs() / an.abs().max(1e-300));
            }
            suite.report("action gradient vs finite differences", fd_err, 1e-6);
        }
        Err(e) => suite.report_err("action gradient vs finite differences", &e),
    }

    // free flow exactness on a plane wave
    {
        let k0 = grid.wavenumbers()[3];
        let w0 = ComplexField::from_fn(grid.clone(), |x| {
            Complex64::from_polar(1.0, k0 * x[0])
        });
        let tri0 = TriField::new(
            ComplexField::zeros(grid.clone()),
            ComplexField::zeros(grid.clone()),
            w0.clone(),
        )?;
        let dt = 0.01;
        let mut cur = tri0;
        for _ in 0..10 {
            cur = strang_step(&params, &cur, dt);
        }
        let phase = Complex64::from_polar(1.0, -k0 * k0 * 0.1 / params.gamma3);
        let err = cur
            .w
            .values()
            .iter()
            .zip(w0.values())
            .map(|(got, base)| (got - base * phase).norm())
            .fold(0.0, f64::max);
        suite.report("free plane-wave evolution", err, 1e-12);
    }

    // short conservation run on the configured data
    {
        let data = cfg.build_data(&grid)?;
        let mut config = cfg.evolve_config();
        config.t_final = config.t_final.min(0.2).max(config.dt);
        config.snapshot_every = config.snapshot_every.min(20);
        let traj = evolve(&params, &data, &config)?;
        let drift = traj.drift();
        suite.report("short-run mass drift", drift.m.max(drift.m1).max(drift.m2).max(drift.m3), 1e-8);
        suite.report("short-run energy/momentum drift", drift.e.max(drift.p), 1e-6);
    }

    if let Some(path) = series {
        let parsed = read_series(path)?;
        let drift = series_drift(&parsed.invariants);
        println!(
            "series {path}: {} rows, verdict {}, drift M {:.3e} M1 {:.3e} M2 {:.3e} M3 {:.3e} E {:.3e} |P| {:.3e}",
            parsed.times.len(),
            parsed.verdict,
            drift.m,
            drift.m1,
            drift.m2,
            drift.m3,
            drift.e,
            drift.p
        );
    }

    Ok(if suite.all_pass { 0 } else { 2 })
}
