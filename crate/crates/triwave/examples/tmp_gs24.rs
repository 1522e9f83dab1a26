use triwave::solver::{gn_quotient, gn_values};
use triwave::{ground_state, make_grid, Params, SolveOptions};

fn main() {
    let grid = make_grid(4, 24, 6.0).unwrap();
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 4).unwrap();
    let opts =
        SolveOptions { max_iters: 400, step_size: 0.05, tol_grad: 1e-7, restarts: 2, seed: 11 };
    let t = std::time::Instant::now();
    let gs = ground_state(&params, &grid, &opts).unwrap();
    let (k, m, i3) = gn_values(&params, &gs.profile);
    let j = gn_quotient(&params, &gs.profile).unwrap();
    println!(
        "t={:.0}s residual={:.2e} S={:.5e} K={k:.5e} M={m:.5e} I={i3:.5e}",
        t.elapsed().as_secs_f64(),
        gs.grad_residual,
        gs.action_value
    );
    println!(
        "J={j:.5} 2sqrtM={:.5} eq={:.3e} K/2I={:.4} boundary={:.2e} spread={:.2e}",
        2.0 * m.sqrt(),
        (j - 2.0 * m.sqrt()).abs() / j,
        k / (2.0 * i3),
        triwave::boundary_decay(&gs.profile.u),
        gs.restart_spread
    );
}
