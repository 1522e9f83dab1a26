//! At the degenerate mass-resonance parameters (γ₁ = γ₂, γ₁+γ₂ = γ₃,
//! ω = γ₁|c|²/4) every quadratic coefficient of the stripped action vanishes
//! and no nontrivial wave exists: the same descent that converges at nearby
//! non-resonant parameters collapses toward zero instead.

use triwave::{make_grid, nonexistence_probe, traveling_wave, Params, SolveOptions};

fn main() -> triwave::Result<()> {
    let grid = make_grid(1, 128, 4.0 * std::f64::consts::PI)?;
    let opts = SolveOptions { max_iters: 4000, restarts: 1, ..Default::default() };

    let probe_params = Params::new(1.0, 1.0, 2.0, 0.25, vec![1.0])?;
    let trace = nonexistence_probe(&probe_params, &grid, &opts)?;
    println!("descent trace at the degenerate resonant parameters:");
    let stride = (trace.q_trace.len() / 15).max(1);
    for (i, q) in trace.q_trace.iter().enumerate() {
        if i % stride == 0 || i + 1 == trace.q_trace.len() {
            println!("  iter {i:5}   Q̃ = {q:.6e}");
        }
    }
    println!("dilation identity residual: {:.3}", trace.dilation_residual);
    println!("{}", trace.verdict);

    // matched non-resonant comparison on the same grid and options
    let comparator = Params::new(1.0, 1.0, 3.0, 0.45, vec![1.0])?;
    let mut wave_opts = opts;
    wave_opts.restarts = 3;
    let wave = traveling_wave(&comparator, &grid, &wave_opts)?;
    let q_converged = 3.0 * wave.action_value;
    let q_final = *trace.q_trace.last().expect("nonempty trace");
    println!(
        "\nmatched non-resonant run (γ = (1,1,3)) converges to Q̃ = {q_converged:.6e}; \
         the probe's final Q̃ is {:.1}% of that",
        100.0 * q_final / q_converged
    );
    Ok(())
}
