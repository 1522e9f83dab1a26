//! Periodic-torus discretization with discrete Fourier transforms,
//! spectral derivatives, and uniform quadrature.
//!
//! The torus is [−L, L)^dim sampled with n points per axis, x_i = −L + i·h,
//! h = 2L/n. The dual lattice is k = πm/L for integer m ∈ [−n/2, n/2).
//! Fields are stored row-major as flat `Vec<Complex64>` (last axis fastest).
//!
//! Convention fixed once for the whole crate: a field is the trigonometric
//! polynomial f(x) = Σ_m c_m e^{ik_m·x}. Spectral coefficients are the raw
//! forward-DFT bins of the samples; symbol multipliers (ik for ∇, −|k|² for Δ,
//! e^{−i|k|²t/γ} for the free flow) act on those bins, which is independent of
//! the DFT's internal phase convention because plane waves are eigenvectors.
//! The Nyquist mode m = −n/2 has no conjugate partner, so it is zeroed in the
//! derivative symbols; the same truncated symbols are used everywhere so that
//! ∇·∇ = Δ holds exactly on the grid.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Hard cap on total grid points; keeps accidental 512⁴ requests from
/// exhausting memory.
const MAX_POINTS: usize = 1 << 28;

pub struct Grid {
    dim: usize,
    n_per_dim: usize,
    half_width: f64,
    /// True dual lattice per axis index: k[j] = π·m(j)/L with
    /// m(j) = j for j < n/2 and j − n otherwise.
    wavenumbers: Vec<f64>,
    /// Same lattice with the Nyquist entry zeroed; used for all derivative
    /// symbols.
    deriv_wavenumbers: Vec<f64>,
    /// −|k|² over the full grid (derivative lattice), the Laplacian symbol.
    laplacian_symbol: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n_per_dim", &self.n_per_dim)
            .field("half_width", &self.half_width)
            .finish()
    }
}

/// Builds the torus grid. `dim` in 1..=4, `n_per_dim` even and ≥ 8,
/// `half_width` > 0.
pub fn make_grid(dim: usize, n_per_dim: usize, half_width: f64) -> Result<Arc<Grid>> {
    if !(1..=4).contains(&dim) {
        return Err(Error::InvalidGrid(format!("dim must be in 1..=4, got {dim}")));
    }
    if n_per_dim < 8 || n_per_dim % 2 != 0 {
        return Err(Error::InvalidGrid(format!(
            "n_per_dim must be even and at least 8, got {n_per_dim}"
        )));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidGrid(format!("half_width must be positive, got {half_width}")));
    }
    let total = n_per_dim
        .checked_pow(dim as u32)
        .filter(|&t| t <= MAX_POINTS)
        .ok_or_else(|| Error::InvalidGrid(format!("{n_per_dim}^{dim} points exceeds the supported size")))?;

    let n = n_per_dim;
    let scale = std::f64::consts::PI / half_width;
    let mut wavenumbers = vec![0.0; n];
    let mut deriv = vec![0.0; n];
    for j in 0..n {
        let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
        wavenumbers[j] = scale * m as f64;
        deriv[j] = if j == n / 2 { 0.0 } else { wavenumbers[j] };
    }

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);

    let mut grid = Grid {
        dim,
        n_per_dim,
        half_width,
        wavenumbers,
        deriv_wavenumbers: deriv,
        laplacian_symbol: Vec::new(),
        fwd,
        inv,
    };
    let mut sym = vec![0.0; total];
    for (flat, s) in sym.iter_mut().enumerate() {
        let mut k2 = 0.0;
        let mut rem = flat;
        for axis in (0..dim).rev() {
            let j = rem % n;
            rem /= n;
            let _ = axis;
            let k = grid.deriv_wavenumbers[j];
            k2 += k * k;
        }
        *s = -k2;
    }
    grid.laplacian_symbol = sym;
    Ok(Arc::new(grid))
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn n_per_dim(&self) -> usize {
        self.n_per_dim
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    /// Points per axis spacing h = 2L/n.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_per_dim as f64
    }
    pub fn total_points(&self) -> usize {
        self.n_per_dim.pow(self.dim as u32)
    }
    /// Quadrature weight h^dim of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }
    /// Torus volume (2L)^dim.
    pub fn volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }
    /// The dual lattice along one axis (true values, Nyquist included).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }
    /// Derivative lattice (Nyquist zeroed).
    pub fn deriv_wavenumbers(&self) -> &[f64] {
        &self.deriv_wavenumbers
    }
    /// −|k|² symbol over the flat grid.
    pub fn laplacian_symbol(&self) -> &[f64] {
        &self.laplacian_symbol
    }
    /// Largest resolvable wavenumber magnitude per axis, π(n/2−1)/L.
    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI * (self.n_per_dim as f64 / 2.0 - 1.0) / self.half_width
    }

    /// Coordinate of sample index i along one axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Decomposes a flat index into per-axis indices (row-major, last axis
    /// fastest).
    pub fn unravel(&self, flat: usize, out: &mut [usize]) {
        let n = self.n_per_dim;
        let mut rem = flat;
        for a in (0..self.dim).rev() {
            out[a] = rem % n;
            rem /= n;
        }
    }

    /// Fills `x` with the coordinates of flat index `flat`.
    pub fn point(&self, flat: usize, x: &mut [f64]) {
        let mut idx = [0usize; 4];
        self.unravel(flat, &mut idx[..self.dim]);
        for a in 0..self.dim {
            x[a] = self.coordinate(idx[a]);
        }
    }

    /// Two grids are compatible when they discretize the same torus.
    pub fn compatible(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.n_per_dim == other.n_per_dim
            && self.half_width == other.half_width
    }

    /// Checks that a per-axis wavenumber vector lies on the dual lattice and
    /// is representable; returns the integer lattice indices.
    pub fn lattice_indices(&self, k: &[f64]) -> Result<Vec<i64>> {
        if k.len() != self.dim {
            return Err(Error::Incommensurate(format!(
                "wavenumber has {} components on a dim-{} grid",
                k.len(),
                self.dim
            )));
        }
        let scale = self.half_width / std::f64::consts::PI;
        let half_n = (self.n_per_dim / 2) as i64;
        let mut out = Vec::with_capacity(self.dim);
        for (a, &ka) in k.iter().enumerate() {
            let m = ka * scale;
            let rounded = m.round();
            if (m - rounded).abs() > 1e-9 * (1.0 + m.abs()) {
                return Err(Error::Incommensurate(format!(
                    "k[{a}] = {ka} is not π·m/L for integer m (m would be {m})"
                )));
            }
            let mi = rounded as i64;
            if mi < -half_n || mi >= half_n {
                return Err(Error::Incommensurate(format!(
                    "k[{a}] = {ka} (lattice index {mi}) exceeds the resolvable range [−{half_n}, {half_n})"
                )));
            }
            out.push(mi);
        }
        Ok(out)
    }

    /// In-place unnormalized forward DFT along every axis.
    pub fn forward(&self, values: &mut [Complex64]) {
        self.transform(values, true);
    }

    /// In-place inverse DFT along every axis, normalized by 1/N_total.
    pub fn inverse(&self, values: &mut [Complex64]) {
        self.transform(values, false);
        let scale = 1.0 / self.total_points() as f64;
        for v in values.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, values: &mut [Complex64], forward: bool) {
        assert_eq!(values.len(), self.total_points(), "buffer size mismatch");
        let plan = if forward { &self.fwd } else { &self.inv };
        let n = self.n_per_dim;
        // Last axis is contiguous; other axes are brought last by an index
        // permutation so lines can be processed as contiguous chunks.
        for axis in 0..self.dim {
            if axis == self.dim - 1 {
                values.par_chunks_mut(n).for_each(|line| {
                    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
                    plan.process_with_scratch(line, &mut scratch);
                });
            } else {
                let mut moved = self.permute_axis_last(values, axis);
                moved.par_chunks_mut(n).for_each(|line| {
                    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
                    plan.process_with_scratch(line, &mut scratch);
                });
                self.unpermute_axis_last(&moved, axis, values);
            }
        }
    }

    /// Copies `values` into a layout where `axis` is the fastest index.
    fn permute_axis_last(&self, values: &[Complex64], axis: usize) -> Vec<Complex64> {
        let n = self.n_per_dim;
        let stride: usize = n.pow((self.dim - 1 - axis) as u32);
        let lines = values.len() / n;
        let mut out = vec![Complex64::default(); values.len()];
        // Flat index = base + j*stride where base enumerates all indices with
        // the `axis` digit removed.
        out.par_chunks_mut(n).enumerate().for_each(|(line, chunk)| {
            let base = (line / stride) * stride * n + (line % stride);
            for (j, c) in chunk.iter_mut().enumerate() {
                *c = values[base + j * stride];
            }
        });
        debug_assert_eq!(lines * n, values.len());
        out
    }

    fn unpermute_axis_last(&self, moved: &[Complex64], axis: usize, values: &mut [Complex64]) {
        let n = self.n_per_dim;
        let stride: usize = n.pow((self.dim - 1 - axis) as u32);
        // Inverse of permute_axis_last. Parallelizing the scatter would alias
        // `values`, so this direction stays sequential; the FFT passes above
        // carry the parallel work.
        for (line, chunk) in moved.chunks(n).enumerate() {
            let base = (line / stride) * stride * n + (line % stride);
            for (j, c) in chunk.iter().enumerate() {
                values[base + j * stride] = *c;
            }
        }
    }
}

/// Complex samples on a shared grid.
#[derive(Clone, Debug)]
pub struct ComplexField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::SizeMismatch { expected: grid.total_points(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.total_points();
        Self { grid, values: vec![Complex64::default(); n] }
    }

    /// Builds a field by evaluating `f` at every grid point.
    pub fn from_fn(grid: Arc<Grid>, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = vec![Complex64::default(); grid.total_points()];
        let mut x = [0.0f64; 4];
        for (flat, v) in values.iter_mut().enumerate() {
            grid.point(flat, &mut x);
            *v = f(&x[..grid.dim()]);
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Pointwise map into a new field.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Self {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Self { grid: self.grid.clone(), values }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    /// The mean value (k = 0 Fourier coefficient over volume).
    pub fn mean(&self) -> Complex64 {
        let sum: Complex64 = self.values.iter().sum();
        sum / self.values.len() as f64
    }
}

/// Forward transform: raw DFT bins of the samples.
pub fn to_spectral(f: &ComplexField) -> Vec<Complex64> {
    let mut coeffs = f.values().to_vec();
    f.grid().forward(&mut coeffs);
    coeffs
}

/// Inverse of [`to_spectral`].
pub fn from_spectral(grid: &Arc<Grid>, mut coeffs: Vec<Complex64>) -> Result<ComplexField> {
    if coeffs.len() != grid.total_points() {
        return Err(Error::SizeMismatch { expected: grid.total_points(), got: coeffs.len() });
    }
    grid.inverse(&mut coeffs);
    ComplexField::new(grid.clone(), coeffs)
}

/// Δf via the spectral symbol −|k|² (Nyquist zeroed).
pub fn apply_laplacian(f: &ComplexField) -> ComplexField {
    let grid = f.grid().clone();
    let mut coeffs = f.values().to_vec();
    grid.forward(&mut coeffs);
    for (c, &s) in coeffs.iter_mut().zip(grid.laplacian_symbol()) {
        *c *= s;
    }
    grid.inverse(&mut coeffs);
    ComplexField { grid, values: coeffs }
}

/// ∂f/∂x_axis via the symbol ik (Nyquist zeroed).
pub fn apply_partial(f: &ComplexField, axis: usize) -> ComplexField {
    let grid = f.grid().clone();
    assert!(axis < grid.dim(), "axis out of range");
    let n = grid.n_per_dim();
    let stride = n.pow((grid.dim() - 1 - axis) as u32);
    let mut coeffs = f.values().to_vec();
    grid.forward(&mut coeffs);
    for (flat, c) in coeffs.iter_mut().enumerate() {
        let j = (flat / stride) % n;
        let k = grid.deriv_wavenumbers()[j];
        *c *= Complex64::new(0.0, k);
    }
    grid.inverse(&mut coeffs);
    ComplexField { grid, values: coeffs }
}

/// All partial derivatives, one field per axis.
pub fn apply_gradient(f: &ComplexField) -> Vec<ComplexField> {
    (0..f.grid().dim()).map(|a| apply_partial(f, a)).collect()
}

/// Real L² pairing ℜ Σ f ḡ · h^dim.
pub fn inner(f: &ComplexField, g: &ComplexField) -> Result<f64> {
    if !f.grid().compatible(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let s: f64 = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a.re * b.re + a.im * b.im)
        .sum();
    Ok(s * f.grid().cell_volume())
}

/// Squared L² norm, quadrature of |f|².
pub fn l2_norm_sq(f: &ComplexField) -> f64 {
    let s: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
    s * f.grid().cell_volume()
}

/// Squared H¹ seminorm Σ_axes ‖∂_a f‖².
pub fn grad_norm_sq(f: &ComplexField) -> f64 {
    // One forward transform; sum |k|²|f̂|² with the Parseval weight.
    let grid = f.grid();
    let mut coeffs = f.values().to_vec();
    grid.forward(&mut coeffs);
    let s: f64 = coeffs
        .iter()
        .zip(grid.laplacian_symbol())
        .map(|(c, &sym)| -sym * c.norm_sqr())
        .sum();
    s * grid.cell_volume() / grid.total_points() as f64
}

/// Translates f by `shift` (spectral phase, exact for any shift; lattice
/// shifts reduce to sample permutations up to roundoff).
pub fn translate(f: &ComplexField, shift: &[f64]) -> ComplexField {
    let grid = f.grid().clone();
    assert_eq!(shift.len(), grid.dim());
    let mut coeffs = f.values().to_vec();
    grid.forward(&mut coeffs);
    let mut idx = [0usize; 4];
    for (flat, c) in coeffs.iter_mut().enumerate() {
        grid.unravel(flat, &mut idx[..grid.dim()]);
        let mut phase = 0.0;
        for a in 0..grid.dim() {
            phase -= grid.wavenumbers()[idx[a]] * shift[a];
        }
        *c *= Complex64::from_polar(1.0, phase);
    }
    grid.inverse(&mut coeffs);
    ComplexField { grid, values: coeffs }
}
