//! Self-convergence study of the Strang splitting: halving dt should cut the
//! terminal error against a fine-dt reference by ×4.

use num_complex::Complex64;
use triwave::{evolve, gaussian, make_grid, EvolveConfig, Params, TriField};

fn main() -> triwave::Result<()> {
    let grid = make_grid(1, 256, 16.0)?;
    let params = Params::standing(1.0, 1.0, 2.0, 1.0, 1)?;
    let data = TriField::new(
        gaussian(&grid, Complex64::new(0.5, 0.0), &[0.0], 1.5, &[4]),
        gaussian(&grid, Complex64::new(0.4, 0.0), &[0.5], 1.2, &[0]),
        gaussian(&grid, Complex64::new(0.4, 0.0), &[-0.5], 1.3, &[-4]),
    )?;

    let t_final = 1.0;
    let run = |dt: f64| {
        let config = EvolveConfig {
            dt,
            t_final,
            snapshot_every: usize::MAX / 2,
            blowup_factor: 1e6,
        };
        evolve(&params, &data, &config).map(|t| t.final_state)
    };

    let reference = run(1.25e-4)?;
    println!("{:>9}  {:>13}  {:>6}", "dt", "error", "order");
    let mut last: Option<(f64, f64)> = None;
    for dt in [4e-3, 2e-3, 1e-3] {
        let err = run(dt)?.rel_l2_distance(&reference);
        let order = last
            .map(|(dt0, e0)| (e0 / err).ln() / (dt0 / dt).ln())
            .map(|o| format!("{o:6.3}"))
            .unwrap_or_else(|| "  --  ".into());
        println!("{dt:9.1e}  {err:13.4e}  {order}");
        last = Some((dt, err));
    }
    println!("\nexpected order: 2 (Strang)");
    Ok(())
}
