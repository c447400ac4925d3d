#![allow(dead_code)]

use bargwig::states::{Member, StateSpec, Superposition};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn fock_superposition() -> StateSpec<f64> {
    let terms = vec![
        (c(1.0, 0.0), Member::Fock(0)),
        (c(0.0, -1.0), Member::Fock(3)),
        (c(0.5, 0.5), Member::Fock(8)),
    ];
    StateSpec::Superposition(Superposition::normalized(terms).unwrap())
}

pub fn mixed_superposition() -> StateSpec<f64> {
    let terms = vec![
        (c(0.6, 0.0), Member::Fock(2)),
        (c(0.0, 0.8), Member::Coherent(c(-0.5, 0.9))),
    ];
    StateSpec::Superposition(Superposition::normalized(terms).unwrap())
}

/// States with a polynomial Bargmann function of degree ≤ 8.
pub fn polynomial_catalog() -> Vec<StateSpec<f64>> {
    let mut out: Vec<_> = (0..=8).map(StateSpec::fock).collect();
    out.push(fock_superposition());
    out
}

/// Every state family sharing the unit basis.
pub fn catalog() -> Vec<StateSpec<f64>> {
    let mut out = polynomial_catalog();
    out.push(StateSpec::coherent(c(0.0, 0.0)));
    out.push(StateSpec::coherent(c(1.0, 0.0)));
    out.push(StateSpec::coherent(c(-0.7, 1.1)));
    out.push(StateSpec::cat(c(1.2, 0.3), 0.0).unwrap());
    out.push(StateSpec::cat(c(0.9, -0.6), std::f64::consts::PI).unwrap());
    out.push(mixed_superposition());
    out
}
