//! Phase-space coordinates and the complex coherent-state label.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coherent-state basis width `b` and the action unit `ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisParams<T> {
    b: T,
    hbar: T,
}

impl<T: Real> BasisParams<T> {
    pub fn new(b: T, hbar: T) -> Result<Self> {
        if !(b > T::zero() && b.is_finite()) {
            return Err(Error::InvalidBasis(format!(
                "width b must be positive, got {b}"
            )));
        }
        if !(hbar > T::zero() && hbar.is_finite()) {
            return Err(Error::InvalidBasis(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self { b, hbar })
    }

    /// Basis of width `b` in units where `ħ = 1`.
    pub fn with_width(b: T) -> Result<Self> {
        Self::new(b, T::one())
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// Peak magnitude `1/(πħ)` every Wigner function is bounded by.
    pub fn wigner_bound(&self) -> T {
        T::one() / (T::PI() * self.hbar)
    }
}

impl<T: Real> Default for BasisParams<T> {
    fn default() -> Self {
        Self {
            b: T::one(),
            hbar: T::one(),
        }
    }
}

/// `z = (q/b + i b p/ħ) / √2`.
pub fn z_from_qp<T: Real>(q: T, p: T, basis: &BasisParams<T>) -> Complex<T> {
    Complex::new(q / basis.b, basis.b * p / basis.hbar) / T::SQRT_2()
}

/// Inverse of [`z_from_qp`]: `q = √2 b Re z`, `p = √2 ħ Im z / b`.
pub fn qp_from_z<T: Real>(z: Complex<T>, basis: &BasisParams<T>) -> (T, T) {
    (
        T::SQRT_2() * basis.b * z.re,
        T::SQRT_2() * basis.hbar * z.im / basis.b,
    )
}

/// A point of phase space together with its complex label under one basis.
/// The label is fixed at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint<T> {
    q: T,
    p: T,
    basis: BasisParams<T>,
    z: Complex<T>,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(q: T, p: T, basis: BasisParams<T>) -> Self {
        let z = z_from_qp(q, p, &basis);
        Self { q, p, basis, z }
    }

    pub fn from_z(z: Complex<T>, basis: BasisParams<T>) -> Self {
        let (q, p) = qp_from_z(z, &basis);
        Self { q, p, basis, z }
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn z(&self) -> Complex<T> {
        self.z
    }

    pub fn basis(&self) -> &BasisParams<T> {
        &self.basis
    }

    /// Same physical `(q, p)` relabelled under another basis.
    pub fn rebased(&self, basis: BasisParams<T>) -> Self {
        Self::new(self.q, self.p, basis)
    }
}

/// Coefficients expressing the Wirtinger derivatives through `∂/∂q` and `∂/∂p`:
///
/// `∂/∂z  = dq ∂/∂q + i dp_z ∂/∂p`, `∂/∂z* = dq ∂/∂q + i dp_zbar ∂/∂p`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerCoefficients<T> {
    pub dq: T,
    pub dp_z: T,
    pub dp_zbar: T,
}

impl<T: Real> WirtingerCoefficients<T> {
    /// `∂W/∂z` from the real gradient.
    pub fn d_dz(&self, dw_dq: T, dw_dp: T) -> Complex<T> {
        Complex::new(self.dq * dw_dq, self.dp_z * dw_dp)
    }

    /// `∂W/∂z*` from the real gradient.
    pub fn d_dzbar(&self, dw_dq: T, dw_dp: T) -> Complex<T> {
        Complex::new(self.dq * dw_dq, self.dp_zbar * dw_dp)
    }
}

pub fn wirtinger_coefficients<T: Real>(basis: &BasisParams<T>) -> WirtingerCoefficients<T> {
    let dq = basis.b / T::SQRT_2();
    let dp = basis.hbar / (basis.b * T::SQRT_2());
    WirtingerCoefficients {
        dq,
        dp_z: -dp,
        dp_zbar: dp,
    }
}
