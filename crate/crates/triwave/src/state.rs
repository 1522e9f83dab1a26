//! The field triple (u, v, w), system parameters, the conserved quantities
//!
//!   M  = γ₁‖u‖² + γ₂‖v‖² + 2γ₃‖w‖²      (plus the partial masses M₁, M₂, M₃)
//!   E  = ½K − ℜ∫u v w̄,   K = ‖∇u‖² + ‖∇v‖² + ‖∇w‖²
//!   P  = γ₁(i∇u, u) + γ₂(i∇v, v) + γ₃(i∇w, w)
//!
//! and the symmetry transforms: gauge, spatial scaling, Galilean boost (exact
//! under mass resonance γ₁+γ₂ = γ₃) and oscillatory dressing of initial data.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::dressing_indices;
use crate::grid::{
    self, apply_partial, inner, l2_norm_sq, make_grid, translate, ComplexField, Grid,
};

pub const MASS_RESONANCE_TOL: f64 = 1e-12;

/// Coupling constants γ₁,γ₂,γ₃ > 0 plus the wave parameters (ω, c).
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub omega: f64,
    pub c: Vec<f64>,
}

impl Params {
    pub fn new(gamma1: f64, gamma2: f64, gamma3: f64, omega: f64, c: Vec<f64>) -> Result<Self> {
        for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2), ("gamma3", gamma3)] {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InadmissibleParams(format!("{name} must be positive, got {g}")));
            }
        }
        if !omega.is_finite() || c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InadmissibleParams("omega and c must be finite".into()));
        }
        Ok(Self { gamma1, gamma2, gamma3, omega, c })
    }

    /// Standing-wave parameters (c = 0) in the given dimension.
    pub fn standing(gamma1: f64, gamma2: f64, gamma3: f64, omega: f64, dim: usize) -> Result<Self> {
        Self::new(gamma1, gamma2, gamma3, omega, vec![0.0; dim])
    }

    pub fn gammas(&self) -> [f64; 3] {
        [self.gamma1, self.gamma2, self.gamma3]
    }

    /// γ₁ + γ₂ = γ₃ within 1e−12: the mass resonance condition.
    pub fn mass_resonant(&self) -> bool {
        (self.gamma1 + self.gamma2 - self.gamma3).abs() <= MASS_RESONANCE_TOL
    }

    pub fn c_norm_sq(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn with_omega(&self, omega: f64) -> Self {
        Self { omega, ..self.clone() }
    }

    pub fn with_c(&self, c: Vec<f64>) -> Self {
        Self { c, ..self.clone() }
    }
}

/// The solution triple sampled on one shared grid.
#[derive(Clone, Debug)]
pub struct TriField {
    pub u: ComplexField,
    pub v: ComplexField,
    pub w: ComplexField,
}

impl TriField {
    pub fn new(u: ComplexField, v: ComplexField, w: ComplexField) -> Result<Self> {
        if !u.grid().compatible(v.grid()) || !u.grid().compatible(w.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { u, v, w })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        Self {
            u: ComplexField::zeros(grid.clone()),
            v: ComplexField::zeros(grid.clone()),
            w: ComplexField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.u.grid()
    }

    pub fn components(&self) -> [&ComplexField; 3] {
        [&self.u, &self.v, &self.w]
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.w.is_finite()
    }

    /// Σ components ‖·‖²_{L²}.
    pub fn norm_sq(&self) -> f64 {
        l2_norm_sq(&self.u) + l2_norm_sq(&self.v) + l2_norm_sq(&self.w)
    }

    /// Component-wise scalar multiples.
    pub fn scaled3(&self, su: Complex64, sv: Complex64, sw: Complex64) -> Self {
        Self { u: self.u.scaled(su), v: self.v.scaled(sv), w: self.w.scaled(sw) }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let z = Complex64::new(s, 0.0);
        self.scaled3(z, z, z)
    }

    /// Pairing Σ ℜ∫ f_j ḡ_j.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        Ok(inner(&self.u, &other.u)? + inner(&self.v, &other.v)? + inner(&self.w, &other.w)?)
    }

    /// self + s·other, component-wise.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        let add = |a: &ComplexField, b: &ComplexField| {
            let values = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| x + s * y)
                .collect();
            ComplexField::new(a.grid().clone(), values).expect("same grid")
        };
        Self { u: add(&self.u, &other.u), v: add(&self.v, &other.v), w: add(&self.w, &other.w) }
    }

    pub fn translate(&self, shift: &[f64]) -> Self {
        Self {
            u: translate(&self.u, shift),
            v: translate(&self.v, shift),
            w: translate(&self.w, shift),
        }
    }

    /// Relative L² distance Σ‖f_j − g_j‖² / Σ‖g_j‖², square-rooted.
    pub fn rel_l2_distance(&self, other: &Self) -> f64 {
        let diff = self.axpy(-1.0, other);
        (diff.norm_sq() / other.norm_sq().max(1e-300)).sqrt()
    }
}

/// The conserved quantities of one snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSet {
    pub m: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub k: f64,
    pub e: f64,
    pub p: Vec<f64>,
}

/// ℜ ∫ u v w̄ — the cubic interaction integral.
pub fn cubic_integral(field: &TriField) -> f64 {
    let s: f64 = field
        .u
        .values()
        .iter()
        .zip(field.v.values())
        .zip(field.w.values())
        .map(|((a, b), c)| (a * b * c.conj()).re)
        .sum();
    s * field.grid().cell_volume()
}

/// Evaluates every conserved quantity on the triple.
pub fn invariants(params: &Params, field: &TriField) -> InvariantSet {
    let nu = l2_norm_sq(&field.u);
    let nv = l2_norm_sq(&field.v);
    let nw = l2_norm_sq(&field.w);
    let [g1, g2, g3] = params.gammas();

    let k = grid::grad_norm_sq(&field.u)
        + grid::grad_norm_sq(&field.v)
        + grid::grad_norm_sq(&field.w);
    let e = 0.5 * k - cubic_integral(field);

    let dim = field.grid().dim();
    let mut p = vec![0.0; dim];
    for (a, pa) in p.iter_mut().enumerate() {
        for (gamma, f) in [(g1, &field.u), (g2, &field.v), (g3, &field.w)] {
            let df = apply_partial(f, a);
            // (i ∂_a f, f) = ℜ ∫ i ∂_a f · f̄
            let idf = df.map(|z| Complex64::new(-z.im, z.re));
            *pa += gamma * inner(&idf, f).expect("same grid");
        }
    }

    InvariantSet {
        m: g1 * nu + g2 * nv + 2.0 * g3 * nw,
        m1: g1 * nu + g3 * nw,
        m2: g2 * nv + g3 * nw,
        m3: g1 * nu - g2 * nv,
        k,
        e,
        p,
    }
}

/// Gauge transform (u, v, w) ↦ (e^{iθ}u, e^{iθ}v, e^{2iθ}w); leaves every
/// invariant unchanged.
pub fn gauge_transform(field: &TriField, theta: f64) -> TriField {
    let p1 = Complex64::from_polar(1.0, theta);
    let p2 = Complex64::from_polar(1.0, 2.0 * theta);
    field.scaled3(p1, p1, p2)
}

/// Fixes the free gauge: rotates u and v so their means are real
/// non-negative, and w by the product phase. Useful for comparing profiles
/// up to gauge.
pub fn gauge_align(field: &TriField) -> TriField {
    let t1 = -field.u.mean().arg();
    let t2 = -field.v.mean().arg();
    field.scaled3(
        Complex64::from_polar(1.0, t1),
        Complex64::from_polar(1.0, t2),
        Complex64::from_polar(1.0, t1 + t2),
    )
}

/// Time-slice of the scaling symmetry: samples λ²·f(λx) by re-generating the
/// grid with half_width L/λ (the sample values are reused exactly, so there
/// is no resampling error).
pub fn scaling_transform(field: &TriField, lambda: f64) -> Result<TriField> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InadmissibleParams(format!("lambda must be positive, got {lambda}")));
    }
    let old = field.grid();
    let new_grid = make_grid(old.dim(), old.n_per_dim(), old.half_width() / lambda)?;
    let s = Complex64::new(lambda * lambda, 0.0);
    let remap = |f: &ComplexField| {
        ComplexField::new(new_grid.clone(), f.values().iter().map(|&z| z * s).collect())
            .expect("same sample count")
    };
    TriField::new(remap(&field.u), remap(&field.v), remap(&field.w))
}

/// Galilean boost at time t: spatial shift by c·t composed with the phase
/// dressing e^{iγ_j c·x/2 − iγ_j|c|²t/4} per component. Requires each γ_j·c/2
/// on the dual lattice so the phases are torus-periodic.
pub fn galilean_boost(field: &TriField, params: &Params, c: &[f64], t: f64) -> Result<TriField> {
    let grid = field.grid();
    if c.len() != grid.dim() {
        return Err(Error::Incommensurate(format!(
            "boost velocity has {} components on a dim-{} grid",
            c.len(),
            grid.dim()
        )));
    }
    dressing_indices(grid, params.gammas(), c)?;
    let c2: f64 = c.iter().map(|x| x * x).sum();
    let shift: Vec<f64> = c.iter().map(|x| x * t).collect();
    let shifted = field.translate(&shift);
    let dress = |f: &ComplexField, gamma: f64| {
        let tphase = -gamma * c2 * t / 4.0;
        let mut out = Vec::with_capacity(f.values().len());
        let mut x = [0.0f64; 4];
        for (flat, &z) in f.values().iter().enumerate() {
            grid.point(flat, &mut x);
            let mut phase = tphase;
            for a in 0..grid.dim() {
                phase += gamma * c[a] * x[a] / 2.0;
            }
            out.push(z * Complex64::from_polar(1.0, phase));
        }
        ComplexField::new(grid.clone(), out).expect("same count")
    };
    TriField::new(
        dress(&shifted.u, params.gamma1),
        dress(&shifted.v, params.gamma2),
        dress(&shifted.w, params.gamma3),
    )
}

/// Oscillating initial data (e^{iγ₁c·x/2}u₀, e^{iγ₂c·x/2}v₀, e^{iγ₃c·x/2}w₀).
/// Masses and M₃ are preserved exactly; the cubic integral acquires the
/// oscillatory weight that drives the large-|c| global existence mechanism.
pub fn oscillating_data(field: &TriField, params: &Params, c: &[f64]) -> Result<TriField> {
    let grid = field.grid();
    if c.len() != grid.dim() {
        return Err(Error::Incommensurate(format!(
            "velocity has {} components on a dim-{} grid",
            c.len(),
            grid.dim()
        )));
    }
    dressing_indices(grid, params.gammas(), c)?;
    let dress = |f: &ComplexField, gamma: f64| {
        let mut out = Vec::with_capacity(f.values().len());
        let mut x = [0.0f64; 4];
        for (flat, &z) in f.values().iter().enumerate() {
            grid.point(flat, &mut x);
            let mut phase = 0.0;
            for a in 0..grid.dim() {
                phase += gamma * c[a] * x[a] / 2.0;
            }
            out.push(z * Complex64::from_polar(1.0, phase));
        }
        ComplexField::new(grid.clone(), out).expect("same count")
    };
    TriField::new(
        dress(&field.u, params.gamma1),
        dress(&field.v, params.gamma2),
        dress(&field.w, params.gamma3),
    )
}
