//! The explicit `b`-dependence of `W` written in `(z, z̄)` and its relation to
//! the phase-space gradient:
//!
//! `b ∂W/∂b = z̄ ∂W/∂z + z ∂W/∂z̄ = q ∂W/∂q − p ∂W/∂p = √(q²+p²) n·∇W`,
//! with `n ∥ (q, −p)`. Checked on coherent states of width `B` seen through a
//! basis of width `b`, the one family with that dependence in closed form.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{wirtinger_coefficients, z_from_qp, BasisParams, PhasePoint};
use crate::scalar::Real;
use crate::wigner::{wigner_closed_coherent_crossb, wigner_closed_coherent_gaussian};

/// Residuals below this are treated as converged when judging step halving.
pub const RESIDUAL_FLOOR: f64 = 1e-10;

/// Relative pass threshold, against `max(|lhs|, 1/(πħ))`.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

/// Coherent state described by its physical centre and width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalCoherent<T> {
    pub center_q: T,
    pub center_p: T,
    pub width: T,
    pub hbar: T,
}

impl<T: Real> PhysicalCoherent<T> {
    pub fn new(center_q: T, center_p: T, width: T, hbar: T) -> Result<Self> {
        if !(width > T::zero()) || !(hbar > T::zero()) {
            return Err(Error::InvalidParameter(
                "width and hbar must be positive".into(),
            ));
        }
        Ok(Self {
            center_q,
            center_p,
            width,
            hbar,
        })
    }

    /// `U` with `√2 U = Q/B + i B P/ħ`.
    pub fn label(&self) -> Complex<T> {
        Complex::new(
            self.center_q / self.width,
            self.width * self.center_p / self.hbar,
        ) / T::SQRT_2()
    }

    pub fn from_label(label: Complex<T>, width: T, hbar: T) -> Result<Self> {
        Self::new(
            T::SQRT_2() * width * label.re,
            T::SQRT_2() * hbar * label.im / width,
            width,
            hbar,
        )
    }

    pub fn wigner(&self, q: T, p: T) -> T {
        wigner_closed_coherent_gaussian(self.center_q, self.center_p, self.width, q, p, self.hbar)
    }

    /// Analytic `(∂W/∂q, ∂W/∂p)`.
    pub fn gradient(&self, q: T, p: T) -> (T, T) {
        let w = self.wigner(q, p);
        let two = T::lit(2.0);
        (
            -two * (q - self.center_q) / (self.width * self.width) * w,
            -two * self.width * self.width * (p - self.center_p) / (self.hbar * self.hbar) * w,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport<T> {
    pub point: PhasePoint<T>,
    /// `b ∂W/∂b` at fixed `(z, z̄)`, by central difference.
    pub lhs: T,
    /// `z̄ ∂W/∂z + z ∂W/∂z̄` through the Wirtinger coefficients.
    pub rhs_z: T,
    /// `q ∂W/∂q − p ∂W/∂p`.
    pub rhs_qp: T,
    /// `√(q²+p²) n·∇W`.
    pub rhs_directional: T,
    pub residual_z: T,
    pub residual_qp: T,
    pub residual_directional: T,
    pub step: T,
    pub tolerance: T,
    pub passed: bool,
    pub diagnostic: Option<String>,
}

impl<T: Real> IdentityReport<T> {
    pub fn max_residual(&self) -> T {
        self.residual_z
            .max(self.residual_qp)
            .max(self.residual_directional)
    }
}

/// `b ∂W/∂b` holding `z` fixed, by central difference with step `h`.
pub fn explicit_b_derivative<T: Real>(
    label: Complex<T>,
    width: T,
    point: &PhasePoint<T>,
    h: T,
) -> Result<T> {
    let b = point.basis().b();
    let hbar = point.basis().hbar();
    if !(h > T::zero() && h < b) {
        return Err(Error::InvalidParameter(format!(
            "b-step {h} must lie in (0, b = {b})"
        )));
    }
    let up = BasisParams::new(b + h, hbar)?;
    let down = BasisParams::new(b - h, hbar)?;
    let z = point.z();
    let w_up = wigner_closed_coherent_crossb(label, width, z, &up);
    let w_down = wigner_closed_coherent_crossb(label, width, z, &down);
    Ok(b * (w_up - w_down) / (T::lit(2.0) * h))
}

fn report_at_step<T: Real>(
    state: &PhysicalCoherent<T>,
    point: &PhasePoint<T>,
    step: T,
) -> Result<IdentityReport<T>> {
    let basis = point.basis();
    let label = state.label();
    let lhs = explicit_b_derivative(label, state.width, point, step)?;

    let (q, p) = (point.q(), point.p());
    let (dq, dp) = state.gradient(q, p);
    let rhs_qp = q * dq - p * dp;

    let coeffs = wirtinger_coefficients(basis);
    let z = point.z();
    let rhs_z = (z.conj() * coeffs.d_dz(dq, dp) + z * coeffs.d_dzbar(dq, dp)).re;

    let radius = (q * q + p * p).sqrt();
    let rhs_directional = if radius > T::zero() {
        let (nq, np) = (q / radius, -p / radius);
        radius * (nq * dq + np * dp)
    } else {
        T::zero()
    };

    let tolerance = T::lit(IDENTITY_TOLERANCE) * lhs.abs().max(basis.wigner_bound());
    let residual_z = (lhs - rhs_z).abs();
    let residual_qp = (lhs - rhs_qp).abs();
    let residual_directional = (lhs - rhs_directional).abs();
    let passed = residual_z.max(residual_qp).max(residual_directional) <= tolerance;
    Ok(IdentityReport {
        point: *point,
        lhs,
        rhs_z,
        rhs_qp,
        rhs_directional,
        residual_z,
        residual_qp,
        residual_directional,
        step,
        tolerance,
        passed,
        diagnostic: None,
    })
}

/// Compares the explicit `b`-derivative of the cross-width coherent closed
/// form with the three gradient expressions at `point`. The point's basis
/// supplies `b` and `ħ`.
pub fn check_identity_crossb<T: Real>(
    label: Complex<T>,
    width: T,
    point: &PhasePoint<T>,
    step: T,
) -> Result<IdentityReport<T>> {
    let state = PhysicalCoherent::from_label(label, width, point.basis().hbar())?;
    let mut report = report_at_step(&state, point, step)?;
    let halved = report_at_step(&state, point, step / T::lit(2.0))?;
    let floor = T::lit(RESIDUAL_FLOOR);
    if report.residual_qp > floor && halved.residual_qp >= report.residual_qp {
        report.diagnostic = Some(format!(
            "residual did not improve when halving the b-step ({} -> {}); step {} is outside the usable range",
            report.residual_qp, halved.residual_qp, step
        ));
    }
    Ok(report)
}

/// Residuals of the identity at steps `h` and `h/2`, and their ratio
/// (≈ 4 for a second-order difference in the truncation-dominated range).
pub fn identity_convergence<T: Real>(
    label: Complex<T>,
    width: T,
    point: &PhasePoint<T>,
    step: T,
) -> Result<(T, T, T)> {
    let state = PhysicalCoherent::from_label(label, width, point.basis().hbar())?;
    let coarse = report_at_step(&state, point, step)?.residual_qp;
    let fine = report_at_step(&state, point, step / T::lit(2.0))?.residual_qp;
    Ok((coarse, fine, coarse / fine))
}

/// `|W_{b₁} − W_{b₂}|` for the cross-width closed form evaluated at the
/// same physical `(q, p)` through two bases.
pub fn check_b_independence<T: Real>(
    state: &PhysicalCoherent<T>,
    q: T,
    p: T,
    b1: T,
    b2: T,
) -> Result<T> {
    let first = BasisParams::new(b1, state.hbar)?;
    let second = BasisParams::new(b2, state.hbar)?;
    let label = state.label();
    let w1 = wigner_closed_coherent_crossb(label, state.width, z_from_qp(q, p, &first), &first);
    let w2 = wigner_closed_coherent_crossb(label, state.width, z_from_qp(q, p, &second), &second);
    Ok((w1 - w2).abs())
}
