//! Wigner functions of single-mode states computed from their Bargmann
//! (coherent-state analytic) representation.
//!
//! The engine evaluates `W = e^{−2|z|²}/(πħ) · V†FV`, where `V` stacks the
//! derivatives of the Bargmann function at the phase-space label `z` and `F`
//! is a Hermitian kernel built from terminating ₂F₀ series. Integral
//! representations in configuration and phase space are provided as
//! independent oracles, together with closed forms for Fock and coherent
//! states.
//!
//! Numerics are generic over [`Real`] (`f32`, `f64`); the aliases at the
//! crate root fix the scalar to `f64`. Grid evaluation and serialization are
//! `f64` only.

// Guards of the form `!(x > 0)` are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod grid;
pub mod oracle;
pub mod phase;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::{evaluate_grid, Axis, EvalOptions, Method, WignerGrid};
pub use scalar::{Field, Real};
pub use wigner::{TruncationMode, TruncationPolicy, Variant};

pub type Complex64 = num_complex::Complex<f64>;

pub type Basis = phase::BasisParams<f64>;
pub type Point = phase::PhasePoint<f64>;
pub type State = states::StateSpec<f64>;
pub type Derivatives = states::BargmannDerivatives<f64>;
pub type Kernel = wigner::KernelMatrix<f64>;
pub type IdentityReport = geometry::IdentityReport<f64>;

pub type Basis32 = phase::BasisParams<f32>;
pub type State32 = states::StateSpec<f32>;
pub type Kernel32 = wigner::KernelMatrix<f32>;
