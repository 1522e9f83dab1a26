//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured figures (run with `--nocapture` to see them). Tolerances are
//! pinned in the asserts.

use std::sync::{Arc, Mutex, MutexGuard};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triwave::evolution::{
    classify_region, evolve, h1_bound, oscillation_scan, threshold_constant, EvolveConfig, Region,
    ThresholdBranch,
};
use triwave::fields::{band_limited, gaussian};
use triwave::functionals::{
    action_gradient, classify_case, nehari_project, phase_map, tilde_report, Case, PhaseDirection,
};
use triwave::grid::{make_grid, Grid};
use triwave::solver::{
    gn_constant, gn_values, ground_state, mu_estimate, nonexistence_probe, pohozaev_check,
    traveling_wave, SolveOptions,
};
use triwave::state::{
    galilean_boost, gauge_transform, invariants, oscillating_data, Params, TriField,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Compute-heavy criteria share the worker pool; serializing them keeps the
/// per-criterion wall-clock budgets meaningful.
fn heavy() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn random_triple(grid: &Arc<Grid>, rng: &mut ChaCha8Rng, max_mode: usize, amp: f64) -> TriField {
    TriField::new(
        band_limited(grid, rng, max_mode, amp),
        band_limited(grid, rng, max_mode, amp),
        band_limited(grid, rng, max_mode, amp),
    )
    .unwrap()
}

/// 1-D Gaussian data with nonzero momentum (lattice plane-wave phases).
fn conservation_data(grid: &Arc<Grid>) -> TriField {
    TriField::new(
        gaussian(grid, Complex64::new(0.4, 0.0), &[0.0], 2.0, &[8]),
        gaussian(grid, Complex64::new(0.3, 0.0), &[1.0], 1.5, &[0]),
        gaussian(grid, Complex64::new(0.3, 0.0), &[-1.0], 2.0, &[-8]),
    )
    .unwrap()
}

#[test]
fn criterion_01_conservation_suite() {
    let _guard = heavy();
    let start = Instant::now();
    let grid = make_grid(1, 256, 16.0).unwrap();
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 1).unwrap();
    let data = conservation_data(&grid);
    let config = EvolveConfig { dt: 1e-3, t_final: 1.0, snapshot_every: 50, blowup_factor: 1e3 };
    let traj = evolve(&params, &data, &config).unwrap();
    let d = traj.drift();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(d.m < 1e-8, "M drift {}", d.m);
    assert!(d.m1 < 1e-8, "M1 drift {}", d.m1);
    assert!(d.m2 < 1e-8, "M2 drift {}", d.m2);
    assert!(d.m3 < 1e-8, "M3 drift {}", d.m3);
    assert!(d.e < 1e-6, "E drift {}", d.e);
    assert!(d.p < 1e-6, "|P| drift {}", d.p);
    assert!(elapsed < 10.0, "runtime {elapsed:.1}s exceeds 10s");
    println!(
        "ACCEPTANCE 01 conservation: PASS (mass drift ≤ {:.2e}, E {:.2e}, |P| {:.2e}, {elapsed:.1}s)",
        d.m.max(d.m1).max(d.m2).max(d.m3),
        d.e,
        d.p
    );
}

#[test]
fn criterion_02_integrator_order() {
    let _guard = heavy();
    let start = Instant::now();
    let grid = make_grid(1, 256, 16.0).unwrap();
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 1).unwrap();
    let data = conservation_data(&grid);
    let t_final = 1.0;
    let run = |dt: f64| {
        let config = EvolveConfig {
            dt,
            t_final,
            snapshot_every: usize::MAX / 2, // endpoints only
            blowup_factor: 1e6,
        };
        evolve(&params, &data, &config).unwrap().final_state
    };
    let reference = run(1.25e-4);
    let dts = [4e-3, 2e-3, 1e-3];
    let errors: Vec<f64> = dts.iter().map(|&dt| run(dt).rel_l2_distance(&reference)).collect();
    // least-squares slope of ln e against ln dt
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let xm = xs.iter().sum::<f64>() / 3.0;
    let ym = ys.iter().sum::<f64>() / 3.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        (1.8..=2.2).contains(&slope),
        "self-convergence order {slope} outside [1.8, 2.2]; errors {errors:?}"
    );
    assert!(elapsed < 30.0, "runtime {elapsed:.1}s exceeds 30s");
    println!("ACCEPTANCE 02 integrator order: PASS (order {slope:.3}, {elapsed:.1}s)");
}

#[test]
fn criterion_03_ground_state() {
    let _guard = heavy();
    let start = Instant::now();
    let grid = make_grid(1, 256, 16.0).unwrap();
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 1).unwrap();
    let opts = SolveOptions { max_iters: 20000, step_size: 0.1, tol_grad: 1e-6, restarts: 5, seed: 7 };
    let gs = ground_state(&params, &grid, &opts).unwrap();
    let rep = tilde_report(&params, &gs.profile).unwrap();
    let po = pohozaev_check(&params, &gs.profile).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(gs.grad_residual < 1e-6, "gradient residual {}", gs.grad_residual);
    assert!(po.residual1 < 1e-4, "Pohozaev residual1 {}", po.residual1);
    assert!(po.residual2 < 1e-4, "Pohozaev residual2 {}", po.residual2);
    assert!(rep.n.abs() <= 1e-8 * rep.q, "N {} vs Q {}", rep.n, rep.q);
    assert!(rel(rep.s, rep.q / 3.0) < 1e-8, "S {} vs Q/3 {}", rep.s, rep.q / 3.0);
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s");
    println!(
        "ACCEPTANCE 03 ground state: PASS (residual {:.2e}, Pohozaev {:.2e}/{:.2e}, S={:.6e}, {elapsed:.1}s)",
        gs.grad_residual, po.residual1, po.residual2, rep.s
    );
}

#[test]
fn criterion_04_gn_sharpness_dim4() {
    let _guard = heavy();
    let start = Instant::now();
    let grid = make_grid(4, 24, 6.0).unwrap();
    let gammas = [1.0, 1.0, 2.0];
    let opts =
        SolveOptions { max_iters: 400, step_size: 0.05, tol_grad: 1e-7, restarts: 2, seed: 11 };
    let gn = gn_constant(gammas, &grid, &opts).unwrap();
    let params = Params::standing(gammas[0], gammas[1], gammas[2], 1.0, 4).unwrap();
    // the equality J = 2·M^{1/2} at the minimizer is the quartic Pohozaev
    // identity K = 2∫uvw — not enforced by the solver, so it certifies it
    let j_at_profile = triwave::solver::gn_quotient(&params, &gn.profile).unwrap();
    let equality = (j_at_profile - gn.alpha).abs() / gn.alpha;
    assert!(equality < 1e-3, "|J − 2√M|/J = {equality}");
    // the independent direct minimization must sit at or above the realized
    // infimum (it is a variational upper bound)
    assert!(
        gn.j_direct > gn.alpha * (1.0 - 5e-3),
        "direct route dipped below the realized infimum: {} vs {}",
        gn.j_direct,
        gn.alpha
    );

    // inequality over 200 random positive trials
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_margin = f64::NEG_INFINITY;
    for _ in 0..200 {
        let tri = random_triple(&grid, &mut rng, 5, 0.8);
        let positive = TriField::new(
            tri.u.map(|z| Complex64::new(z.norm(), 0.0)),
            tri.v.map(|z| Complex64::new(z.norm(), 0.0)),
            tri.w.map(|z| Complex64::new(z.norm(), 0.0)),
        )
        .unwrap();
        let (k, m, i3) = gn_values(&params, &positive);
        let margin = (i3 - gn.c_opt * k * m.sqrt()) / (k * m.sqrt());
        worst_margin = worst_margin.max(margin);
        assert!(
            i3 - gn.c_opt * k * m.sqrt() <= 1e-6 * k * m.sqrt(),
            "GN inequality violated by margin {margin:.3e}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 900.0, "runtime {elapsed:.1}s exceeds 15min");
    println!(
        "ACCEPTANCE 04 GN sharpness: PASS (alpha {:.6e}, direct J {:.6e}, equality {:.2e}, worst margin {:.2e}, {elapsed:.0}s)",
        gn.alpha, gn.j_direct, equality, worst_margin
    );
}

#[test]
fn criterion_05_gradient_oracle() {
    let grid = make_grid(1, 64, 4.0 * std::f64::consts::PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst = 0.0f64;
    for set in 0..3 {
        // random admissible case-A parameters on the commensurate menu
        let c: f64 =
            [0.5, 1.0, 1.5][rng.gen_range(0..3)] * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let threshold = (3.0 * c * c / 8.0).max(c * c / 4.0);
        let omega = threshold * (1.2 + rng.gen::<f64>());
        let params = Params::new(1.0, 1.0, 3.0, omega, vec![c]).unwrap();
        assert_eq!(classify_case(&params).unwrap(), Case::A);

        let tri = random_triple(&grid, &mut rng, 6, 0.7);
        let grad = action_gradient(&params, &tri).unwrap();
        let eps = 1e-5;
        for dir_idx in 0..10 {
            let dir = random_triple(&grid, &mut rng, 6, 1.0);
            let plus = tilde_report(&params, &tri.axpy(eps, &dir)).unwrap().s;
            let minus = tilde_report(&params, &tri.axpy(-eps, &dir)).unwrap().s;
            let fd = (plus - minus) / (2.0 * eps);
            let analytic = grad.inner(&dir).unwrap();
            let err = rel(fd, analytic);
            worst = worst.max(err);
            assert!(err < 1e-6, "set {set} direction {dir_idx}: fd {fd} vs analytic {analytic}");
        }
    }
    println!("ACCEPTANCE 05 gradient oracle: PASS (worst relative error {worst:.2e})");
}

#[test]
fn criterion_06_nehari_projection_exactness() {
    let grid = make_grid(1, 64, 4.0 * std::f64::consts::PI).unwrap();
    let params = Params::new(1.0, 1.0, 3.0, 1.0, vec![0.5]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut done = 0;
    let mut worst = 0.0f64;
    while done < 100 {
        let mut tri = random_triple(&grid, &mut rng, 6, 0.8);
        let rep = tilde_report(&params, &tri).unwrap();
        if rep.v < 0.0 {
            tri = TriField::new(
                tri.u.clone(),
                tri.v.clone(),
                tri.w.scaled(Complex64::new(-1.0, 0.0)),
            )
            .unwrap();
        } else if rep.v == 0.0 {
            continue;
        }
        let (projected, _lambda) = nehari_project(&params, &tri).unwrap();
        let p = tilde_report(&params, &projected).unwrap();
        let ratio = p.n.abs() / p.q;
        worst = worst.max(ratio);
        assert!(ratio < 1e-10, "|N| = {} vs Q = {}", p.n, p.q);
        done += 1;
    }
    println!("ACCEPTANCE 06 Nehari projection: PASS (worst |N|/Q {worst:.2e} over 100 trials)");
}

#[test]
fn criterion_07_galilean_dichotomy() {
    let _guard = heavy();
    let start = Instant::now();
    let l = 4.0 * std::f64::consts::PI;
    let grid = make_grid(1, 128, l).unwrap();
    let data = TriField::new(
        gaussian(&grid, Complex64::new(0.5, 0.0), &[0.0], 1.0, &[0]),
        gaussian(&grid, Complex64::new(0.5, 0.0), &[0.5], 1.0, &[0]),
        gaussian(&grid, Complex64::new(0.4, 0.0), &[-0.5], 1.0, &[0]),
    )
    .unwrap();
    let c = vec![1.0];
    let t = 0.5;
    let config = EvolveConfig { dt: 1e-3, t_final: t, snapshot_every: 250, blowup_factor: 1e3 };
    let commutator = |g3: f64| -> f64 {
        let params = Params::standing(1.0, 1.0, g3, 1.0, 1).unwrap();
        let a = evolve(&params, &galilean_boost(&data, &params, &c, 0.0).unwrap(), &config)
            .unwrap()
            .final_state;
        let b = galilean_boost(&evolve(&params, &data, &config).unwrap().final_state, &params, &c, t)
            .unwrap();
        a.rel_l2_distance(&b)
    };
    let resonant = commutator(2.0);
    let non_resonant = commutator(3.0);
    let elapsed = start.elapsed().as_secs_f64();
    assert!(resonant < 1e-6, "resonant commutator {resonant}");
    assert!(non_resonant > 1e-2, "non-resonant commutator {non_resonant} not measurably broken");
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s");
    println!(
        "ACCEPTANCE 07 Galilean dichotomy: PASS (resonant {resonant:.2e}, non-resonant {non_resonant:.2e}, {elapsed:.1}s)"
    );
}

#[test]
fn criterion_08_traveling_wave_self_propagation() {
    let _guard = heavy();
    let start = Instant::now();
    let l = 4.0 * std::f64::consts::PI;
    let grid = make_grid(1, 256, l).unwrap();
    let c = 0.5;
    let omega = 1.0;
    let params = Params::new(1.0, 1.0, 3.0, omega, vec![c]).unwrap();
    let opts = SolveOptions { max_iters: 30000, step_size: 0.1, tol_grad: 1e-7, restarts: 3, seed: 19 };
    let wave = traveling_wave(&params, &grid, &opts).unwrap();

    // pick T so the drift c·T is a lattice shift (the discrete relative
    // equilibrium is exact there)
    let h = grid.spacing();
    let shift_cells = 8.0;
    let t_final = shift_cells * h / c;
    let n_steps = 1600usize;
    let dt = t_final / n_steps as f64;

    let dressed = phase_map(&wave.profile, &params, PhaseDirection::Dress).unwrap();
    let config = EvolveConfig { dt, t_final, snapshot_every: n_steps, blowup_factor: 1e3 };
    let evolved = evolve(&params, &dressed, &config).unwrap().final_state;

    let target = gauge_transform(&dressed.translate(&[c * t_final]), omega * t_final);
    let err = evolved.rel_l2_distance(&target);
    let elapsed = start.elapsed().as_secs_f64();
    assert!(err < 1e-4, "self-propagation error {err}");
    assert!(elapsed < 300.0, "runtime {elapsed:.1}s exceeds 5min");
    println!(
        "ACCEPTANCE 08 traveling-wave self-propagation: PASS (T {t_final:.3}, error {err:.2e}, {elapsed:.0}s)"
    );
}

#[test]
fn criterion_09_global_existence_scan() {
    let _guard = heavy();
    let start = Instant::now();
    let l = 4.0 * std::f64::consts::PI;
    let grid = make_grid(1, 512, l).unwrap();
    let gammas = [1.0, 1.0, 3.0];
    let opts = SolveOptions { max_iters: 20000, step_size: 0.1, tol_grad: 1e-6, restarts: 3, seed: 23 };

    // mass cap from the unit-velocity minimum
    let branch_omega = 3.0 / 8.0;
    let mu_params = Params::new(1.0, 1.0, 3.0, branch_omega, vec![1.0]).unwrap();
    let mu_unit = mu_estimate(&mu_params, &grid, &opts).unwrap();
    let (branch, cap) = threshold_constant(gammas, mu_unit).unwrap();
    assert_eq!(branch, ThresholdBranch::A0);
    assert!(cap > 0.0);

    // Gaussian data with masses at half the cap
    let raw = TriField::new(
        gaussian(&grid, Complex64::new(1.0, 0.0), &[0.0], 1.0, &[0]),
        gaussian(&grid, Complex64::new(0.9, 0.0), &[0.3], 1.0, &[0]),
        gaussian(&grid, Complex64::new(0.8, 0.0), &[-0.3], 1.0, &[0]),
    )
    .unwrap();
    let max_mass = triwave::grid::l2_norm_sq(&raw.u).max(triwave::grid::l2_norm_sq(&raw.v));
    let data = raw.scaled((0.5 * cap / max_mass).sqrt());

    let velocities: Vec<Vec<f64>> = [2.0, 4.0, 8.0, 16.0].iter().map(|&c| vec![c]).collect();
    let rows = oscillation_scan(&data, gammas, &velocities, &opts).unwrap();
    for pair in rows.windows(2) {
        assert!(
            pair[1].v_dressed.abs() < pair[0].v_dressed.abs(),
            "|V| must decrease monotonically: {} then {}",
            pair[0].v_dressed,
            pair[1].v_dressed
        );
    }
    let decay = rows[0].v_dressed.abs() / rows.last().unwrap().v_dressed.abs();
    assert!(decay >= 1e3, "overall |V| decay {decay:.2e} < 1e3");
    let last = rows.last().unwrap();
    assert_eq!(last.region, Region::APlus, "largest |c| must classify A+: {last:?}");

    // evolve the largest-|c| datum and hold K(t) under the a-priori bound
    let c16 = velocities.last().unwrap().clone();
    let params16 =
        Params::new(1.0, 1.0, 3.0, branch_omega * c16[0] * c16[0], c16.clone()).unwrap();
    let dressed = oscillating_data(&data, &params16, &c16).unwrap();
    let mass0 = invariants(&params16, &dressed).m;
    let bound = h1_bound(last.mu, mass0, &params16);
    let config = EvolveConfig { dt: 1e-3, t_final: 2.0, snapshot_every: 100, blowup_factor: 1e4 };
    let traj = evolve(&params16, &dressed, &config).unwrap();
    let k_max = traj.invariant_series.iter().map(|i| i.k).fold(0.0, f64::max);
    assert!(
        k_max <= bound,
        "K(t) peaked at {k_max:.4e}, above the a-priori bound {bound:.4e}"
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "runtime {elapsed:.1}s exceeds 10min");
    println!(
        "ACCEPTANCE 09 global-existence scan: PASS (cap {cap:.3e}, |V| decay {decay:.1e}, K max {k_max:.3e} ≤ bound {bound:.3e}, {elapsed:.0}s)"
    );
}

#[test]
fn criterion_10_scaling_conjugacy() {
    let grid = make_grid(4, 8, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut factors = Vec::new();
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let cx: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let c_mag: f64 = cx.iter().map(|x| x * x).sum::<f64>();
        if c_mag < 1e-2 {
            continue;
        }
        let params = Params::new(1.0, 1.3, 2.7, 1.5 + rng.gen::<f64>(), cx).unwrap();
        let tri = random_triple(&grid, &mut rng, 3, 0.7);
        let rep = triwave::solver::scaling_consistency(&params, &tri).unwrap();
        let agreement = rel(rep.factor_q, rep.factor_v);
        worst = worst.max(agreement);
        assert!(agreement < 1e-10, "trial {trial}: factors {rep:?}");
        factors.push(rep.factor_q);
    }
    // measured factor is |c|⁻², the reciprocal of the displayed exponent
    println!(
        "ACCEPTANCE 10 scaling conjugacy: PASS (worst factor agreement {worst:.2e}; measured factors e.g. {:.4e})",
        factors[0]
    );
}

#[test]
fn criterion_11_a_plus_invariance() {
    let _guard = heavy();
    let start = Instant::now();
    let grid = make_grid(1, 128, 16.0).unwrap();
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 1).unwrap();
    let opts = SolveOptions { max_iters: 20000, step_size: 0.1, tol_grad: 1e-6, restarts: 3, seed: 13 };
    let mu = mu_estimate(&params, &grid, &opts).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let config = EvolveConfig { dt: 1e-3, t_final: 2.0, snapshot_every: 200, blowup_factor: 1e3 };
    for run in 0..10 {
        // small random data sits in A⁺ (S < μ, N ≥ 0); shrink until both hold
        let mut data = random_triple(&grid, &mut rng, 5, 0.3);
        loop {
            match classify_region(&params, &data, mu) {
                Region::APlus => break,
                _ => data = data.scaled(0.7),
            }
        }
        let traj = evolve(&params, &data, &config).unwrap();
        for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
            let region = classify_region(&params, snap, mu);
            assert_eq!(region, Region::APlus, "run {run}: left A+ at t = {t}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("ACCEPTANCE 11 A+ invariance: PASS (10 runs to T=2, μ {mu:.4e}, {elapsed:.0}s)");
}

#[test]
fn criterion_12_nonexistence_probe() {
    let _guard = heavy();
    let start = Instant::now();
    let l = 4.0 * std::f64::consts::PI;
    let grid = make_grid(1, 128, l).unwrap();
    let opts = SolveOptions { max_iters: 4000, step_size: 0.1, tol_grad: 1e-6, restarts: 1, seed: 43 };

    // degenerate resonant zero-mass parameters
    let probe_params = Params::new(1.0, 1.0, 2.0, 0.25, vec![1.0]).unwrap();
    let trace = nonexistence_probe(&probe_params, &grid, &opts).unwrap();
    let q_final = *trace.q_trace.last().unwrap();

    // matched non-resonant case-A run on the same grid and options
    let comparator = Params::new(1.0, 1.0, 3.0, 0.45, vec![1.0]).unwrap();
    assert_eq!(classify_case(&comparator).unwrap(), Case::A);
    let mut wave_opts = opts.clone();
    wave_opts.restarts = 3;
    let wave = traveling_wave(&comparator, &grid, &wave_opts).unwrap();
    let q_converged = 3.0 * wave.action_value; // S̃ = Q̃/3 on the manifold

    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        q_final < 0.1 * q_converged,
        "probe Q̃ {q_final:.4e} not below 10% of the non-resonant Q̃ {q_converged:.4e}"
    );
    println!(
        "ACCEPTANCE 12 nonexistence probe: PASS (Q̃ {q_final:.3e} vs non-resonant {q_converged:.3e}; {}; {elapsed:.0}s)",
        trace.verdict
    );
}

#[test]
fn spectral_convergence_of_ground_state_action() {
    let _guard = heavy();
    // doubling n at fixed L moves S by less than 1e−8 relative
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 1).unwrap();
    let opts = SolveOptions { max_iters: 30000, step_size: 0.1, tol_grad: 1e-6, restarts: 3, seed: 3 };
    let s_at = |n: usize| {
        let grid = make_grid(1, n, 16.0).unwrap();
        ground_state(&params, &grid, &opts).unwrap().action_value
    };
    let coarse = s_at(128);
    let fine = s_at(256);
    assert!(
        rel(coarse, fine) < 1e-8,
        "S moved from {coarse} to {fine} under refinement"
    );
    println!("spectral convergence: S({}) vs S({}) agree to {:.2e}", 128, 256, rel(coarse, fine));
}
