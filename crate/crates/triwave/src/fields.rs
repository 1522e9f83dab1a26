//! Constructors for initial data and solver trials.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::grid::{ComplexField, Grid};

/// Gaussian bump amplitude·e^{−|x−center|²/(2 width²)}·e^{ik·x} with k given
/// by integer lattice indices (k_a = π·wave[a]/L), so the phase is exactly
/// torus-periodic. The envelope itself is only numerically periodic; callers
/// should keep width ≪ half_width (the boundary value is reported by
/// [`boundary_decay`]).
pub fn gaussian(
    grid: &Arc<Grid>,
    amplitude: Complex64,
    center: &[f64],
    width: f64,
    wave: &[i64],
) -> ComplexField {
    assert_eq!(center.len(), grid.dim());
    assert_eq!(wave.len(), grid.dim());
    assert!(width > 0.0);
    let scale = std::f64::consts::PI / grid.half_width();
    let k: Vec<f64> = wave.iter().map(|&m| scale * m as f64).collect();
    ComplexField::from_fn(grid.clone(), |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for a in 0..x.len() {
            let d = x[a] - center[a];
            r2 += d * d;
            phase += k[a] * x[a];
        }
        amplitude * Complex64::from_polar((-r2 / (2.0 * width * width)).exp(), phase)
    })
}

/// Random band-limited field: independent complex Gaussian spectral
/// coefficients on modes with every |m_a| ≤ max_mode (Nyquist excluded), with
/// a mild spectral roll-off, scaled so the max amplitude is ≈ `amplitude`.
pub fn band_limited(
    grid: &Arc<Grid>,
    rng: &mut impl Rng,
    max_mode: usize,
    amplitude: f64,
) -> ComplexField {
    let n = grid.n_per_dim();
    let max_mode = max_mode.min(n / 2 - 1);
    let mut coeffs = vec![Complex64::default(); grid.total_points()];
    let mut idx = [0usize; 4];
    for (flat, c) in coeffs.iter_mut().enumerate() {
        grid.unravel(flat, &mut idx[..grid.dim()]);
        let mut ok = true;
        let mut m2 = 0.0;
        for &j in &idx[..grid.dim()] {
            let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            if m.unsigned_abs() as usize > max_mode || j == n / 2 {
                ok = false;
                break;
            }
            m2 += (m * m) as f64;
        }
        if ok {
            let damp = (-m2 / (max_mode as f64 * max_mode as f64)).exp();
            *c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * damp;
        }
    }
    let field = crate::grid::from_spectral(grid, coeffs).expect("sized by construction");
    let max = field.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        field
    } else {
        field.scaled(Complex64::new(amplitude / max, 0.0))
    }
}

/// Largest sample magnitude on the boundary faces of the box, relative to the
/// global max. The torus truncation of whole-space profiles is trustworthy
/// when this is small (≲ 1e−10 for the documented validity check).
pub fn boundary_decay(f: &ComplexField) -> f64 {
    let grid = f.grid();
    let n = grid.n_per_dim();
    let mut idx = [0usize; 4];
    let mut edge = 0.0f64;
    let mut global = 0.0f64;
    for (flat, v) in f.values().iter().enumerate() {
        grid.unravel(flat, &mut idx[..grid.dim()]);
        let mag = v.norm();
        global = global.max(mag);
        if idx[..grid.dim()].iter().any(|&j| j == 0 || j == n - 1) {
            edge = edge.max(mag);
        }
    }
    if global == 0.0 {
        0.0
    } else {
        edge / global
    }
}

/// Deterministic helper: checks commensurability of γ_j·c/2 for all three
/// couplings against the grid lattice.
pub fn dressing_indices(grid: &Arc<Grid>, gammas: [f64; 3], c: &[f64]) -> Result<[Vec<i64>; 3]> {
    let k = |gamma: f64| -> Vec<f64> { c.iter().map(|&ca| gamma * ca / 2.0).collect() };
    Ok([
        grid.lattice_indices(&k(gammas[0]))?,
        grid.lattice_indices(&k(gammas[1]))?,
        grid.lattice_indices(&k(gammas[2]))?,
    ])
}
