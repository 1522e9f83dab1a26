//! Traveling wave without Galilean symmetry: at non-resonant couplings
//! (γ₁+γ₂ ≠ γ₃) the boosted profile cannot be manufactured from the standing
//! one — it is found by minimizing the stripped action, comes out genuinely
//! complex, and propagates under the full flow as e^{iωt}·(translate by ct).

use triwave::{
    evolve, gauge_align, gauge_transform, make_grid, phase_map, tilde_report, traveling_wave,
    EvolveConfig, Params, PhaseDirection, SolveOptions,
};

fn main() -> triwave::Result<()> {
    let grid = make_grid(1, 256, 4.0 * std::f64::consts::PI)?;
    let c = 0.5;
    let omega = 1.0;
    let params = Params::new(1.0, 1.0, 3.0, omega, vec![c])?;
    let opts = SolveOptions { tol_grad: 1e-7, restarts: 3, ..Default::default() };

    let wave = traveling_wave(&params, &grid, &opts)?;
    let rep = tilde_report(&params, &wave.profile)?;
    println!("case {} traveling wave at ω = {omega}, c = {c}, γ = (1, 1, 3):", wave.case.label());
    println!("  S̃ = {:.10e}  (gradient residual {:.2e})", rep.s, wave.grad_residual);

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
    println!("  complexity max|Im|/max|Re| after gauge alignment: {:.3e}", max_im / max_re);
    println!("  (a resonant or standing profile would align to ~1e-8)");

    // self-propagation: evolve the dressed profile for a lattice drift
    let dressed = phase_map(&wave.profile, &params, PhaseDirection::Dress)?;
    let t_final = 8.0 * grid.spacing() / c;
    let n_steps = 800;
    let config = EvolveConfig {
        dt: t_final / n_steps as f64,
        t_final,
        snapshot_every: n_steps,
        blowup_factor: 1e3,
    };
    let evolved = evolve(&params, &dressed, &config)?.final_state;
    let target = gauge_transform(&dressed.translate(&[c * t_final]), omega * t_final);
    println!(
        "  self-propagation over T = {t_final:.3}: relative L² deviation {:.2e}",
        evolved.rel_l2_distance(&target)
    );
    Ok(())
}
