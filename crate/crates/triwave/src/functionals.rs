//! The variational layer: the action and its pieces
//!
//!   Q_{ω,c} = ½K + ½ωγ₁‖u‖² + ½ωγ₂‖v‖² + ωγ₃‖w‖² + ½c·P
//!   V       = ℜ∫ u v w̄
//!   S = Q − V,     N = 2Q − 3V = ∂_λ S(λu,λv,λw)|_{λ=1}
//!
//! together with the phase-stripped (tilde) forms, where the boost moves into
//! the L² coefficients
//!
//!   α₁ = γ₁ω − γ₁²|c|²/4,  α₂ = γ₂ω − γ₂²|c|²/4,  α₃ = 2γ₃ω − γ₃²|c|²/4
//!
//! and into the oscillatory weight e^{i((γ₁+γ₂−γ₃)/2)c·x} inside the cubic
//! term. The Nehari projection λ₀ = 2Q̃/(3Ṽ) and the L²-Riesz gradient of the
//! action live here too.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::dressing_indices;
use crate::grid::{apply_laplacian, l2_norm_sq, ComplexField};
use crate::state::{cubic_integral, invariants, Params, TriField};

/// Relative tolerance used to decide whether ω sits on a case boundary.
const CASE_TOL: f64 = 1e-12;

/// S, Q, V, N at one (ω, c); `tilde` records which form was evaluated.
#[derive(Clone, Copy, Debug)]
pub struct FunctionalReport {
    pub s: f64,
    pub q: f64,
    pub v: f64,
    pub n: f64,
    pub tilde: bool,
}

impl FunctionalReport {
    fn assemble(q: f64, v: f64, tilde: bool) -> Self {
        Self { s: q - v, q, v, n: 2.0 * q - 3.0 * v, tilde }
    }
}

/// Admissible parameter cases. A is the interior case (all three L²
/// coefficients positive); B–E pin ω to a boundary where some coefficients
/// vanish ("zero mass"), each with its γ-ordering:
///
///   B: ω = γ₃|c|²/8, γ₁ ≤ γ₂ < γ₃/2      (w slot zero-mass)
///   C: ω = γ₃|c|²/8, γ₁ < γ₂ = γ₃/2      (v, w slots zero-mass)
///   D: ω = γ₂|c|²/4, max{γ₁, γ₃/2} < γ₂  (v slot zero-mass)
///   E: ω = γ₂|c|²/4, γ₃/2 < γ₁ = γ₂      (u, v slots zero-mass)
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    A,
    B,
    C,
    D,
    E,
}

impl Case {
    /// Which components have a vanishing L² coefficient; their k = 0 mode is
    /// a flat direction and the mean is projected out at every evaluation
    /// (the continuum space is Ḣ¹ for those slots).
    pub fn zero_mass(self) -> [bool; 3] {
        match self {
            Case::A => [false, false, false],
            Case::B => [false, false, true],
            Case::C => [false, true, true],
            Case::D => [false, true, false],
            Case::E => [true, true, false],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
            Case::D => "D",
            Case::E => "E",
        }
    }
}

/// Classifies (ω, c, γ) against the admissibility table, or reports which
/// condition fails.
pub fn classify_case(params: &Params) -> Result<Case> {
    let c2 = params.c_norm_sq();
    let (g1, g2, g3, w) = (params.gamma1, params.gamma2, params.gamma3, params.omega);
    let t_u = g1 * c2 / 4.0;
    let t_v = g2 * c2 / 4.0;
    let t_w = g3 * c2 / 8.0;
    let t_max = t_u.max(t_v).max(t_w);
    let scale = t_max.abs().max(w.abs()).max(1.0);
    let eq = |a: f64, b: f64| (a - b).abs() <= CASE_TOL * scale;
    let geq = |a: f64, b: f64| a - b >= -CASE_TOL * scale;

    if w > t_max + CASE_TOL * scale {
        return Ok(Case::A);
    }
    if c2 == 0.0 {
        return Err(Error::InadmissibleParams(format!(
            "omega must be positive for standing waves, got {w}"
        )));
    }
    if eq(w, t_w) && geq(t_w, t_u) && geq(t_w, t_v) {
        // γ₂ ≤ γ₃/2 here; split on equality
        if eq(g2, g3 / 2.0) {
            if g1 < g2 - CASE_TOL * scale {
                return Ok(Case::C);
            }
            return Err(Error::InadmissibleParams(
                "omega = γ₃|c|²/8 with γ₂ = γ₃/2 requires γ₁ < γ₂".into(),
            ));
        }
        if g1 <= g2 + CASE_TOL * scale {
            return Ok(Case::B);
        }
        return Err(Error::InadmissibleParams(
            "omega = γ₃|c|²/8 requires γ₁ ≤ γ₂ < γ₃/2".into(),
        ));
    }
    if eq(w, t_v) && geq(t_v, t_u) && geq(t_v, t_w) {
        if eq(g1, g2) {
            if g3 / 2.0 < g1 - CASE_TOL * scale {
                return Ok(Case::E);
            }
            return Err(Error::InadmissibleParams(
                "omega = γ₂|c|²/4 with γ₁ = γ₂ requires γ₃/2 < γ₁".into(),
            ));
        }
        if g2 > g1 && g2 > g3 / 2.0 + CASE_TOL * scale {
            return Ok(Case::D);
        }
        return Err(Error::InadmissibleParams(
            "omega = γ₂|c|²/4 requires γ₂ > max{γ₁, γ₃/2}".into(),
        ));
    }
    Err(Error::InadmissibleParams(format!(
        "omega = {w} is below the admissible threshold max{{γ₁|c|²/4, γ₂|c|²/4, γ₃|c|²/8}} = {t_max} and matches no boundary case"
    )))
}

/// The tilde L² coefficients (α₁, α₂, α₃).
pub fn tilde_coefficients(params: &Params) -> [f64; 3] {
    let c2 = params.c_norm_sq();
    let (g1, g2, g3, w) = (params.gamma1, params.gamma2, params.gamma3, params.omega);
    [
        g1 * w - g1 * g1 * c2 / 4.0,
        g2 * w - g2 * g2 * c2 / 4.0,
        2.0 * g3 * w - g3 * g3 * c2 / 4.0,
    ]
}

/// Plain (dressed-picture) functionals on a triple.
pub fn report(params: &Params, field: &TriField) -> FunctionalReport {
    let inv = invariants(params, field);
    let nu = l2_norm_sq(&field.u);
    let nv = l2_norm_sq(&field.v);
    let nw = l2_norm_sq(&field.w);
    let cp: f64 = params.c.iter().zip(&inv.p).map(|(a, b)| a * b).sum();
    let q = 0.5 * inv.k
        + 0.5 * params.omega * params.gamma1 * nu
        + 0.5 * params.omega * params.gamma2 * nv
        + params.omega * params.gamma3 * nw
        + 0.5 * cp;
    FunctionalReport::assemble(q, cubic_integral(field), false)
}

/// The oscillatory cubic weight exponent wavenumber β·c with
/// β = (γ₁+γ₂−γ₃)/2.
fn tilde_weight_wavenumber(params: &Params) -> Vec<f64> {
    let beta = (params.gamma1 + params.gamma2 - params.gamma3) / 2.0;
    params.c.iter().map(|&ca| beta * ca).collect()
}

/// Ṽ = ℜ∫ e^{i((γ₁+γ₂−γ₃)/2)c·x} u v w̄ on a (stripped) triple.
pub fn tilde_cubic(params: &Params, field: &TriField) -> Result<f64> {
    let grid = field.grid();
    let kw = tilde_weight_wavenumber(params);
    grid.lattice_indices(&kw).map_err(|e| {
        Error::Incommensurate(format!("tilde cubic weight off-lattice: {e}"))
    })?;
    let mut x = [0.0f64; 4];
    let mut s = 0.0;
    for (flat, ((a, b), c)) in field
        .u
        .values()
        .iter()
        .zip(field.v.values())
        .zip(field.w.values())
        .enumerate()
    {
        grid.point(flat, &mut x);
        let mut phase = 0.0;
        for ax in 0..grid.dim() {
            phase += kw[ax] * x[ax];
        }
        s += (Complex64::from_polar(1.0, phase) * a * b * c.conj()).re;
    }
    Ok(s * grid.cell_volume())
}

/// Removes the mean of zero-mass components (flat directions of Q̃).
pub fn project_zero_mass(field: &TriField, mask: [bool; 3]) -> TriField {
    if !mask.iter().any(|&m| m) {
        return field.clone();
    }
    let strip = |f: &ComplexField, on: bool| {
        if on {
            let mean = f.mean();
            f.map(|z| z - mean)
        } else {
            f.clone()
        }
    };
    TriField::new(
        strip(&field.u, mask[0]),
        strip(&field.v, mask[1]),
        strip(&field.w, mask[2]),
    )
    .expect("same grid")
}

/// Tilde functionals on a stripped triple. Requires the cubic weight on the
/// dual lattice. Zero-mass means are projected out per the case.
pub fn tilde_report(params: &Params, field: &TriField) -> Result<FunctionalReport> {
    let case = classify_case(params)?;
    tilde_report_unchecked(params, field, case.zero_mass())
}

/// Tilde functionals with an explicit zero-mass mask; used by the solver and
/// by the nonexistence probe (whose degenerate parameters fall outside the
/// case table).
pub fn tilde_report_unchecked(
    params: &Params,
    field: &TriField,
    mask: [bool; 3],
) -> Result<FunctionalReport> {
    let f = project_zero_mass(field, mask);
    let [a1, a2, a3] = tilde_coefficients(params);
    let k = crate::grid::grad_norm_sq(&f.u)
        + crate::grid::grad_norm_sq(&f.v)
        + crate::grid::grad_norm_sq(&f.w);
    let q = 0.5 * k
        + 0.5 * a1 * l2_norm_sq(&f.u)
        + 0.5 * a2 * l2_norm_sq(&f.v)
        + 0.5 * a3 * l2_norm_sq(&f.w);
    let v = tilde_cubic(params, &f)?;
    Ok(FunctionalReport::assemble(q, v, true))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseDirection {
    /// Multiply by e^{−iγ_j c·x/2}: dressed → tilde picture.
    Strip,
    /// Multiply by e^{+iγ_j c·x/2}: tilde → dressed picture.
    Dress,
}

/// Moves a triple between the dressed and stripped pictures.
pub fn phase_map(field: &TriField, params: &Params, direction: PhaseDirection) -> Result<TriField> {
    let grid = field.grid();
    dressing_indices(grid, params.gammas(), &params.c)?;
    let sign = match direction {
        PhaseDirection::Strip => -1.0,
        PhaseDirection::Dress => 1.0,
    };
    let apply = |f: &ComplexField, gamma: f64| {
        let mut out = Vec::with_capacity(f.values().len());
        let mut x = [0.0f64; 4];
        for (flat, &z) in f.values().iter().enumerate() {
            grid.point(flat, &mut x);
            let mut phase = 0.0;
            for a in 0..grid.dim() {
                phase += sign * gamma * params.c[a] * x[a] / 2.0;
            }
            out.push(z * Complex64::from_polar(1.0, phase));
        }
        ComplexField::new(grid.clone(), out).expect("same count")
    };
    TriField::new(
        apply(&field.u, params.gamma1),
        apply(&field.v, params.gamma2),
        apply(&field.w, params.gamma3),
    )
}

/// Twisted translation in the tilde picture: shift by y with the constant
/// compensating phases e^{−iγ_j c·y/2}, which leaves Q̃ and Ṽ invariant.
pub fn twisted_translate(field: &TriField, params: &Params, y: &[f64]) -> TriField {
    let cy: f64 = params.c.iter().zip(y).map(|(a, b)| a * b).sum();
    let shifted = field.translate(y);
    shifted.scaled3(
        Complex64::from_polar(1.0, -params.gamma1 * cy / 2.0),
        Complex64::from_polar(1.0, -params.gamma2 * cy / 2.0),
        Complex64::from_polar(1.0, -params.gamma3 * cy / 2.0),
    )
}

/// Scales a (stripped) trial onto the Nehari manifold: λ₀ = 2Q̃/(3Ṽ), so that
/// Ñ(λ₀·f) = 0. Fails when Ṽ ≤ 0 (the trial lies outside the cubic-dominant
/// cone).
pub fn nehari_project(params: &Params, field: &TriField) -> Result<(TriField, f64)> {
    let case = classify_case(params)?;
    nehari_project_unchecked(params, field, case.zero_mass())
}

pub fn nehari_project_unchecked(
    params: &Params,
    field: &TriField,
    mask: [bool; 3],
) -> Result<(TriField, f64)> {
    let rep = tilde_report_unchecked(params, field, mask)?;
    if rep.v <= 0.0 {
        return Err(Error::NonPositiveCubic { v: rep.v });
    }
    let lambda0 = 2.0 * rep.q / (3.0 * rep.v);
    Ok((project_zero_mass(field, mask).scaled(lambda0), lambda0))
}

/// L²-Riesz representative of the first variation of S̃ at a stripped triple:
///
///   G_u = −Δu + α₁u − e^{−iβc·x} v̄ w
///   G_v = −Δv + α₂v − e^{−iβc·x} ū w
///   G_w = −Δw + α₃w − e^{+iβc·x} u v ,     β = (γ₁+γ₂−γ₃)/2,
///
/// so that d/dε S̃(f+εg)|₀ = Σ ℜ∫ G_j ḡ_j. G vanishes exactly at solutions of
/// the stripped stationary system on the grid. Zero-mass slots are projected
/// on input and output, matching the projected functional.
pub fn action_gradient(params: &Params, field: &TriField) -> Result<TriField> {
    let case = classify_case(params)?;
    action_gradient_unchecked(params, field, case.zero_mass())
}

pub fn action_gradient_unchecked(
    params: &Params,
    field: &TriField,
    mask: [bool; 3],
) -> Result<TriField> {
    let grid = field.grid().clone();
    let kw = tilde_weight_wavenumber(params);
    grid.lattice_indices(&kw)?;
    let f = project_zero_mass(field, mask);
    let [a1, a2, a3] = tilde_coefficients(params);

    let lap_u = apply_laplacian(&f.u);
    let lap_v = apply_laplacian(&f.v);
    let lap_w = apply_laplacian(&f.w);

    let n = grid.total_points();
    let mut gu = Vec::with_capacity(n);
    let mut gv = Vec::with_capacity(n);
    let mut gw = Vec::with_capacity(n);
    let mut x = [0.0f64; 4];
    for flat in 0..n {
        grid.point(flat, &mut x);
        let mut phase = 0.0;
        for a in 0..grid.dim() {
            phase += kw[a] * x[a];
        }
        let e_plus = Complex64::from_polar(1.0, phase);
        let e_minus = e_plus.conj();
        let (u, v, w) = (f.u.values()[flat], f.v.values()[flat], f.w.values()[flat]);
        gu.push(-lap_u.values()[flat] + a1 * u - e_minus * v.conj() * w);
        gv.push(-lap_v.values()[flat] + a2 * v - e_minus * u.conj() * w);
        gw.push(-lap_w.values()[flat] + a3 * w - e_plus * u * v);
    }
    let grad = TriField::new(
        ComplexField::new(grid.clone(), gu)?,
        ComplexField::new(grid.clone(), gv)?,
        ComplexField::new(grid, gw)?,
    )?;
    Ok(project_zero_mass(&grad, mask))
}
