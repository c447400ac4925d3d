//! Integral representations of the Wigner function and distributional
//! checks. These are independent of the quadratic-form engine and exist to
//! validate it.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::WignerGrid;
use crate::phase::{qp_from_z, z_from_qp, BasisParams};
use crate::quadrature::{QuadratureRule, QuadratureSpec};
use crate::scalar::{CompensatedComplexSum, Real};
use crate::states::StateSpec;

const CONFIG_IMAGINARY_TOLERANCE: f64 = 1e-8;
const PHASE_IMAGINARY_TOLERANCE: f64 = 1e-7;

/// A quadrature spec with its coarse and doubled rules built once.
#[derive(Debug, Clone)]
struct PairedRule<T> {
    spec: QuadratureSpec,
    coarse: QuadratureRule<T>,
    fine: QuadratureRule<T>,
}

impl<T: Real> PairedRule<T> {
    fn new(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            coarse: QuadratureRule::new(spec.rule, spec.nodes),
            fine: QuadratureRule::new(spec.rule, 2 * spec.nodes),
        })
    }

    /// Runs `eval` on both rules and returns the fine value when they agree
    /// to the spec tolerance, measured in units of `1/(πħ)`.
    fn converged(&self, hbar: T, eval: impl Fn(&QuadratureRule<T>) -> Result<T>) -> Result<T> {
        let coarse = eval(&self.coarse)?;
        let fine = eval(&self.fine)?;
        let change = (fine - coarse).abs() * T::PI() * hbar;
        if !(change <= T::lit(self.spec.convergence_tolerance)) {
            return Err(Error::QuadratureNotConverged {
                coarse: coarse.as_f64(),
                fine: fine.as_f64(),
                coarse_nodes: self.coarse.len(),
                fine_nodes: self.fine.len(),
            });
        }
        Ok(fine)
    }
}

/// Configuration-space integral
/// `W = (2πħ)⁻¹ ∫ dy ψ(q + y/2) ψ*(q − y/2) e^{−ipy/ħ}`.
#[derive(Debug, Clone)]
pub struct ConfigOracle<T> {
    rules: PairedRule<T>,
}

impl<T: Real> ConfigOracle<T> {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        Ok(Self {
            rules: PairedRule::new(spec)?,
        })
    }

    pub fn evaluate(&self, state: &StateSpec<T>, q: T, p: T, basis: &BasisParams<T>) -> Result<T> {
        let halfwidth =
            T::lit(self.rules.spec.domain_halfwidth) * state.characteristic_width(basis);
        let hbar = basis.hbar();
        let half = T::lit(0.5);
        self.rules.converged(hbar, |rule| {
            let acc: CompensatedComplexSum<T> = rule
                .scaled(halfwidth)
                .map(|(y, w)| {
                    let plus = state.position_wavefunction(q + y * half, basis);
                    let minus = state.position_wavefunction(q - y * half, basis);
                    let phase = Complex::from_polar(T::one(), -p * y / hbar);
                    plus * minus.conj() * phase * w
                })
                .collect();
            let value = acc.value() / (T::lit(2.0) * T::PI() * hbar);
            check_imaginary(value, hbar, CONFIG_IMAGINARY_TOLERANCE)
        })
    }
}

/// Phase-space integral over `w = u + iv`:
/// `W = e^{−|z|²}/(4πħ) ∫ du dv/π f*(z + w/2) f(z − w/2) e^{−|w|²/4 + (z̄w − zw̄)/2}`.
#[derive(Debug, Clone)]
pub struct PhaseOracle<T> {
    rules: PairedRule<T>,
}

impl<T: Real> PhaseOracle<T> {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        Ok(Self {
            rules: PairedRule::new(spec)?,
        })
    }

    pub fn evaluate(
        &self,
        state: &StateSpec<T>,
        z: Complex<T>,
        basis: &BasisParams<T>,
    ) -> Result<T> {
        state.check_basis(basis)?;
        let halfwidth = T::lit(self.rules.spec.domain_halfwidth);
        let hbar = basis.hbar();
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        self.rules.converged(hbar, |rule| {
            let axis: Vec<(T, T)> = rule.scaled(halfwidth).collect();
            let mut acc = CompensatedComplexSum::new();
            for &(u, wu) in &axis {
                for &(v, wv) in &axis {
                    let w = Complex::new(u, v);
                    let left = state.bargmann(z + w * half).conj();
                    let right = state.bargmann(z - w * half);
                    // z̄w − z w̄ = 2i Im(z̄w)
                    let phase =
                        Complex::from_polar((-quarter * w.norm_sqr()).exp(), (z.conj() * w).im);
                    acc.add(left * right * phase * (wu * wv));
                }
            }
            let value =
                acc.value() * (-z.norm_sqr()).exp() / (T::lit(4.0) * T::PI() * hbar * T::PI());
            check_imaginary(value, hbar, PHASE_IMAGINARY_TOLERANCE)
        })
    }
}

fn check_imaginary<T: Real>(value: Complex<T>, hbar: T, tolerance: f64) -> Result<T> {
    // residual in units of 1/(πħ)
    let scaled = value.im.abs() * T::PI() * hbar;
    if !(scaled <= T::lit(tolerance)) {
        return Err(Error::Numerical(format!(
            "integral has imaginary residual {} (units of 1/πħ)",
            scaled
        )));
    }
    Ok(value.re)
}

/// Configuration-space oracle at physical `(q, p)`.
pub fn wigner_config_integral<T: Real>(
    state: &StateSpec<T>,
    q: T,
    p: T,
    basis: &BasisParams<T>,
    quad: &QuadratureSpec,
) -> Result<T> {
    ConfigOracle::new(*quad)?.evaluate(state, q, p, basis)
}

/// Phase-space oracle at label `z`.
pub fn wigner_phase_integral<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    basis: &BasisParams<T>,
    quad: &QuadratureSpec,
) -> Result<T> {
    PhaseOracle::new(*quad)?.evaluate(state, z, basis)
}

/// Convenience: configuration-space oracle addressed by label.
pub fn wigner_config_integral_at<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    basis: &BasisParams<T>,
    quad: &QuadratureSpec,
) -> Result<T> {
    let (q, p) = qp_from_z(z, basis);
    wigner_config_integral(state, q, p, basis, quad)
}

/// Convenience: phase-space oracle addressed by physical coordinates.
pub fn wigner_phase_integral_qp<T: Real>(
    state: &StateSpec<T>,
    q: T,
    p: T,
    basis: &BasisParams<T>,
    quad: &QuadratureSpec,
) -> Result<T> {
    wigner_phase_integral(state, z_from_qp(q, p, basis), basis, quad)
}

/// Position density recovered by integrating a grid over `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginal {
    pub q: Vec<f64>,
    pub density: Vec<f64>,
    /// Set when the grid does not reach where `W` has decayed.
    pub warning: Option<String>,
}

/// Relative boundary magnitude above which a grid counts as too narrow.
const BOUNDARY_FRACTION: f64 = 1e-6;

fn trapezoid(values: impl ExactSizeIterator<Item = f64>, step: f64) -> f64 {
    let n = values.len();
    let mut acc = crate::scalar::CompensatedSum::new();
    for (i, v) in values.enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc.add(w * v);
    }
    acc.value() * step
}

fn boundary_ratio(grid: &WignerGrid, along_p: bool) -> f64 {
    let (nq, np) = (grid.q_axis.count, grid.p_axis.count);
    let peak = grid.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = if along_p {
        (0..nq)
            .flat_map(|i| [grid.value(i, 0), grid.value(i, np - 1)])
            .fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        (0..np)
            .flat_map(|k| [grid.value(0, k), grid.value(nq - 1, k)])
            .fold(0.0f64, |m, v| m.max(v.abs()))
    };
    if peak == 0.0 {
        0.0
    } else {
        edge / peak
    }
}

/// Trapezoid integral of `W` over `p` at each `q` sample.
pub fn marginal_position(grid: &WignerGrid) -> Marginal {
    let np = grid.p_axis.count;
    let dp = grid.p_axis.step();
    let density = (0..grid.q_axis.count)
        .map(|i| trapezoid((0..np).map(|k| grid.value(i, k)), dp))
        .collect();
    let ratio = boundary_ratio(grid, true);
    let warning = (ratio > BOUNDARY_FRACTION)
        .then(|| format!("grid too narrow in p: boundary |W| is {ratio:.2e} of the peak"));
    Marginal {
        q: grid.q_axis.values().collect(),
        density,
        warning,
    }
}

/// Trapezoid integral of `W` over `q` at each `p` sample.
pub fn marginal_momentum(grid: &WignerGrid) -> Marginal {
    let nq = grid.q_axis.count;
    let dq = grid.q_axis.step();
    let density = (0..grid.p_axis.count)
        .map(|k| trapezoid((0..nq).map(|i| grid.value(i, k)), dq))
        .collect();
    let ratio = boundary_ratio(grid, false);
    let warning = (ratio > BOUNDARY_FRACTION)
        .then(|| format!("grid too narrow in q: boundary |W| is {ratio:.2e} of the peak"));
    Marginal {
        q: grid.p_axis.values().collect(),
        density,
        warning,
    }
}

/// `∫∫ W dq dp` by the two-dimensional trapezoid rule.
pub fn normalization(grid: &WignerGrid) -> f64 {
    let dq = grid.q_axis.step();
    let rows = marginal_position(grid).density;
    trapezoid(rows.into_iter(), dq)
}
