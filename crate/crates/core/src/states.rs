//! State catalog: Fock states, coherent states and finite superpositions of
//! them, with exact Bargmann functions, analytic derivative towers and
//! position-space wavefunctions.
//!
//! The Bargmann function of `|ψ⟩` is `f(z) = e^{|z|²/2} ⟨ψ|z⟩`, which is
//! analytic in `z` and *antilinear* in `|ψ⟩`: the superposition
//! `Σ cₖ|ψₖ⟩` has `f = Σ c̄ₖ fₖ`. Position wavefunctions `⟨y|ψ⟩` are linear.

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::phase::BasisParams;
use crate::scalar::{CompensatedComplexSum, Real};
use crate::special::{factorial, hermite_psi, log_factorial};

/// Most members a superposition may hold.
pub const MAX_SUPERPOSITION_TERMS: usize = 64;

/// Tolerance on `⟨ψ|ψ⟩ = 1` for superpositions accepted without rescaling.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Coherent state `|U⟩` with `√2 U = Q/B + i B P/ħ`. A `width` of `None`
/// means the state shares the width of whatever basis it is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherent<T> {
    pub label: Complex<T>,
    pub width: Option<T>,
}

impl<T: Real> Coherent<T> {
    /// Physical centre `(Q, P)` given the basis that fixes any unset width.
    pub fn center(&self, basis: &BasisParams<T>) -> (T, T) {
        let width = self.width.unwrap_or(basis.b());
        (
            T::SQRT_2() * width * self.label.re,
            T::SQRT_2() * basis.hbar() * self.label.im / width,
        )
    }

    pub fn effective_width(&self, basis: &BasisParams<T>) -> T {
        self.width.unwrap_or(basis.b())
    }

    fn matches_basis(&self, basis: &BasisParams<T>) -> bool {
        match self.width {
            None => true,
            Some(w) => (w - basis.b()).abs() <= T::epsilon() * T::lit(16.0) * basis.b(),
        }
    }
}

/// Elementary member of a superposition. Members always share the basis
/// width, so coherent members carry no width of their own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Member<T> {
    Fock(usize),
    Coherent(Complex<T>),
}

impl<T: Real> Member<T> {
    fn bargmann(&self, z: Complex<T>) -> Complex<T> {
        match *self {
            Member::Fock(n) => bargmann_of_fock(n, z),
            Member::Coherent(u) => bargmann_of_coherent(u, z),
        }
    }

    fn tower(&self, z: Complex<T>, order: usize) -> Vec<Complex<T>> {
        match *self {
            Member::Fock(n) => fock_tower(n, z, order),
            Member::Coherent(u) => coherent_tower(u, z, order),
        }
    }

    fn wavefunction(&self, y: T, basis: &BasisParams<T>) -> Complex<T> {
        match *self {
            Member::Fock(n) => fock_wavefunction(n, y, basis.b()),
            Member::Coherent(u) => coherent_wavefunction(u, basis.b(), y),
        }
    }

    fn degree(&self) -> Option<usize> {
        match *self {
            Member::Fock(n) => Some(n),
            Member::Coherent(_) => None,
        }
    }
}

/// `⟨a|b⟩` for members sharing one basis.
fn member_overlap<T: Real>(a: &Member<T>, b: &Member<T>) -> Complex<T> {
    let fock_coherent = |n: usize, v: Complex<T>| {
        let half = T::lit(0.5);
        v.powi(n as i32) * (-(v.norm_sqr() * half) - half * log_factorial::<T>(n)).exp()
    };
    match (*a, *b) {
        (Member::Fock(m), Member::Fock(n)) => {
            if m == n {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        }
        (Member::Fock(m), Member::Coherent(v)) => fock_coherent(m, v),
        (Member::Coherent(u), Member::Fock(n)) => fock_coherent(n, u).conj(),
        (Member::Coherent(u), Member::Coherent(v)) => {
            let half = T::lit(0.5);
            (u.conj() * v - Complex::new((u.norm_sqr() + v.norm_sqr()) * half, T::zero())).exp()
        }
    }
}

fn finite<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Finite superposition `Σ cₖ |memberₖ⟩`, normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition<T> {
    terms: Vec<(Complex<T>, Member<T>)>,
}

impl<T: Real> Superposition<T> {
    /// Accepts the terms only if they already form a unit vector.
    pub fn new(terms: Vec<(Complex<T>, Member<T>)>) -> Result<Self> {
        let candidate = Self::unchecked(terms)?;
        let norm = candidate.norm_squared().as_f64();
        if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Unnormalized { norm_squared: norm });
        }
        Ok(candidate)
    }

    /// Rescales the coefficients to unit norm.
    pub fn normalized(terms: Vec<(Complex<T>, Member<T>)>) -> Result<Self> {
        let mut candidate = Self::unchecked(terms)?;
        let norm = candidate.norm_squared();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState(format!(
                "superposition has norm² {norm}, cannot normalize"
            )));
        }
        let scale = norm.sqrt().recip();
        for (c, _) in &mut candidate.terms {
            *c = *c * scale;
        }
        Ok(candidate)
    }

    fn unchecked(terms: Vec<(Complex<T>, Member<T>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidState("empty superposition".into()));
        }
        if terms.len() > MAX_SUPERPOSITION_TERMS {
            return Err(Error::InvalidState(format!(
                "superposition has {} terms, limit is {MAX_SUPERPOSITION_TERMS}",
                terms.len()
            )));
        }
        if terms
            .iter()
            .any(|(c, m)| !finite(c) || matches!(m, Member::Coherent(u) if !finite(u)))
        {
            return Err(Error::InvalidState("non-finite superposition entry".into()));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Complex<T>, Member<T>)] {
        &self.terms
    }

    /// `⟨ψ|ψ⟩` from exact member overlaps.
    pub fn norm_squared(&self) -> T {
        let mut acc = CompensatedComplexSum::new();
        for (ca, ma) in &self.terms {
            for (cb, mb) in &self.terms {
                acc.add(ca.conj() * *cb * member_overlap(ma, mb));
            }
        }
        acc.value().re
    }
}

/// Declarative description of a pure state.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec<T> {
    Fock(usize),
    Coherent(Coherent<T>),
    Superposition(Superposition<T>),
}

impl<T: Real> StateSpec<T> {
    pub fn fock(n: usize) -> Self {
        StateSpec::Fock(n)
    }

    /// Coherent state sharing the basis width.
    pub fn coherent(label: Complex<T>) -> Self {
        StateSpec::Coherent(Coherent { label, width: None })
    }

    /// Coherent state of its own physical width `B`.
    pub fn coherent_with_width(label: Complex<T>, width: T) -> Result<Self> {
        if !(width > T::zero() && width.is_finite()) {
            return Err(Error::InvalidState(format!(
                "coherent width must be positive, got {width}"
            )));
        }
        Ok(StateSpec::Coherent(Coherent {
            label,
            width: Some(width),
        }))
    }

    /// Coherent state centred at physical `(Q, P)` with width `B`.
    pub fn coherent_at(q: T, p: T, width: T, hbar: T) -> Result<Self> {
        let label = Complex::new(q / width, width * p / hbar) / T::SQRT_2();
        Self::coherent_with_width(label, width)
    }

    /// Normalized cat state `N(|U⟩ + e^{iφ}|−U⟩)`.
    pub fn cat(label: Complex<T>, phase: T) -> Result<Self> {
        let relative = Complex::from_polar(T::one(), phase);
        Ok(StateSpec::Superposition(Superposition::normalized(vec![
            (Complex::new(T::one(), T::zero()), Member::Coherent(label)),
            (relative, Member::Coherent(-label)),
        ])?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Fock(_) => "fock",
            StateSpec::Coherent(_) => "coherent",
            StateSpec::Superposition(_) => "superposition",
        }
    }

    /// Polynomial degree of the Bargmann function, when it is a polynomial.
    pub fn exact_degree(&self) -> Option<usize> {
        match self {
            StateSpec::Fock(n) => Some(*n),
            StateSpec::Coherent(_) => None,
            StateSpec::Superposition(s) => s
                .terms
                .iter()
                .map(|(_, m)| m.degree())
                .try_fold(0usize, |acc, d| d.map(|d| acc.max(d))),
        }
    }

    /// Errors when the state cannot be represented by a Bargmann function in
    /// this basis (coherent states of a different width).
    pub fn check_basis(&self, basis: &BasisParams<T>) -> Result<()> {
        if let StateSpec::Coherent(c) = self {
            if !c.matches_basis(basis) {
                return Err(Error::CrossWidth {
                    state_width: c.effective_width(basis).as_f64(),
                    basis_width: basis.b().as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Bargmann function `f(z)` in a basis of matching width.
    pub fn bargmann(&self, z: Complex<T>) -> Complex<T> {
        match self {
            StateSpec::Fock(n) => bargmann_of_fock(*n, z),
            StateSpec::Coherent(c) => bargmann_of_coherent(c.label, z),
            StateSpec::Superposition(s) => s
                .terms
                .iter()
                .map(|(c, m)| c.conj() * m.bargmann(z))
                .collect::<CompensatedComplexSum<T>>()
                .value(),
        }
    }

    /// `⟨y|ψ⟩` with `y` in physical length units.
    pub fn position_wavefunction(&self, y: T, basis: &BasisParams<T>) -> Complex<T> {
        match self {
            StateSpec::Fock(n) => fock_wavefunction(*n, y, basis.b()),
            StateSpec::Coherent(c) => coherent_wavefunction(c.label, c.effective_width(basis), y),
            StateSpec::Superposition(s) => s
                .terms
                .iter()
                .map(|(c, m)| *c * m.wavefunction(y, basis))
                .collect::<CompensatedComplexSum<T>>()
                .value(),
        }
    }

    /// Position spread used to size integration windows.
    pub fn characteristic_width(&self, basis: &BasisParams<T>) -> T {
        match self {
            StateSpec::Coherent(c) => c.effective_width(basis),
            _ => basis.b(),
        }
    }

    /// Deserializes the JSON state schema. Unnormalized superpositions are
    /// rejected unless `normalize` is set, in which case they are rescaled.
    pub fn from_json_str(text: &str, normalize: bool) -> Result<Self> {
        let repr: StateRepr = serde_json::from_str(text)?;
        repr.into_state(normalize, true)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&StateRepr::from_state(self)).expect("state serializes")
    }
}

/// `zᴺ/√N!`.
pub fn bargmann_of_fock<T: Real>(n: usize, z: Complex<T>) -> Complex<T> {
    z.powi(n as i32) * (-T::lit(0.5) * log_factorial::<T>(n)).exp()
}

/// `exp(Ū z − |U|²/2)`.
pub fn bargmann_of_coherent<T: Real>(label: Complex<T>, z: Complex<T>) -> Complex<T> {
    (label.conj() * z - Complex::new(label.norm_sqr() * T::lit(0.5), T::zero())).exp()
}

fn fock_tower<T: Real>(n: usize, z: Complex<T>, order: usize) -> Vec<Complex<T>> {
    let root = factorial::<T>(n).sqrt();
    (0..=order)
        .map(|j| {
            if j > n {
                Complex::new(T::zero(), T::zero())
            } else {
                z.powi((n - j) as i32) * (root / factorial::<T>(n - j))
            }
        })
        .collect()
}

fn coherent_tower<T: Real>(label: Complex<T>, z: Complex<T>, order: usize) -> Vec<Complex<T>> {
    let step = label.conj();
    let mut value = bargmann_of_coherent(label, z);
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        out.push(value);
        value = value * step;
    }
    out
}

fn fock_wavefunction<T: Real>(n: usize, y: T, b: T) -> Complex<T> {
    Complex::new(hermite_psi(n, y / b) / b.sqrt(), T::zero())
}

/// `π^{−1/4} B^{−1/2} exp{−(y/B − √2U)²/2 + U(U − Ū)/2}`.
fn coherent_wavefunction<T: Real>(label: Complex<T>, width: T, y: T) -> Complex<T> {
    let half = T::lit(0.5);
    let shift = Complex::new(y / width, T::zero()) - label * T::SQRT_2();
    let exponent = -(shift * shift) * half + label * (label - label.conj()) * half;
    exponent.exp() * (T::PI().powf(T::lit(-0.25)) / width.sqrt())
}

/// `f, f′, …, f^{(K)}` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannDerivatives<T> {
    pub z: Complex<T>,
    pub values: Vec<Complex<T>>,
    pub exact_degree: Option<usize>,
}

impl<T: Real> BargmannDerivatives<T> {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Exact derivatives of the Bargmann function up to order `order`.
pub fn derivative_tower<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    order: usize,
) -> BargmannDerivatives<T> {
    let values = match state {
        StateSpec::Fock(n) => fock_tower(*n, z, order),
        StateSpec::Coherent(c) => coherent_tower(c.label, z, order),
        StateSpec::Superposition(s) => {
            let mut acc = vec![CompensatedComplexSum::new(); order + 1];
            for (c, m) in &s.terms {
                let w = c.conj();
                for (slot, d) in acc.iter_mut().zip(m.tower(z, order)) {
                    slot.add(w * d);
                }
            }
            acc.iter().map(|a| a.value()).collect()
        }
    };
    BargmannDerivatives {
        z,
        values,
        exact_degree: state.exact_degree(),
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ComplexRepr {
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    coeff: ComplexRepr,
    state: StateRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum StateRepr {
    Fock {
        n: usize,
    },
    Coherent {
        re: f64,
        im: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<f64>,
    },
    Superposition {
        terms: Vec<TermRepr>,
    },
}

impl StateRepr {
    fn into_state<T: Real>(self, normalize: bool, top_level: bool) -> Result<StateSpec<T>> {
        let cast = |x: f64| {
            T::from_f64(x)
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidState(format!("value {x} not representable")))
        };
        match self {
            StateRepr::Fock { n } => Ok(StateSpec::Fock(n)),
            StateRepr::Coherent { re, im, width } => {
                let label = Complex::new(cast(re)?, cast(im)?);
                match width {
                    None => Ok(StateSpec::coherent(label)),
                    Some(w) => StateSpec::coherent_with_width(label, cast(w)?),
                }
            }
            StateRepr::Superposition { terms } => {
                if !top_level {
                    return Err(Error::InvalidState(
                        "nested superpositions are not supported".into(),
                    ));
                }
                let mut members = Vec::with_capacity(terms.len());
                for term in terms {
                    let coeff = Complex::new(cast(term.coeff.re)?, cast(term.coeff.im)?);
                    let member = match term.state.into_state::<T>(normalize, false)? {
                        StateSpec::Fock(n) => Member::Fock(n),
                        StateSpec::Coherent(Coherent { label, width: None }) => {
                            Member::Coherent(label)
                        }
                        StateSpec::Coherent(_) => {
                            return Err(Error::InvalidState(
                                "superposition members share the basis width; drop \"width\""
                                    .into(),
                            ))
                        }
                        StateSpec::Superposition(_) => unreachable!("rejected above"),
                    };
                    members.push((coeff, member));
                }
                let sup = if normalize {
                    Superposition::normalized(members)?
                } else {
                    Superposition::new(members)?
                };
                Ok(StateSpec::Superposition(sup))
            }
        }
    }

    fn from_state<T: Real>(state: &StateSpec<T>) -> Self {
        let member = |m: &Member<T>| match *m {
            Member::Fock(n) => StateRepr::Fock { n },
            Member::Coherent(u) => StateRepr::Coherent {
                re: u.re.as_f64(),
                im: u.im.as_f64(),
                width: None,
            },
        };
        match state {
            StateSpec::Fock(n) => StateRepr::Fock { n: *n },
            StateSpec::Coherent(c) => StateRepr::Coherent {
                re: c.label.re.as_f64(),
                im: c.label.im.as_f64(),
                width: c.width.map(|w| w.as_f64()),
            },
            StateSpec::Superposition(s) => StateRepr::Superposition {
                terms: s
                    .terms
                    .iter()
                    .map(|(c, m)| TermRepr {
                        coeff: ComplexRepr {
                            re: c.re.as_f64(),
                            im: c.im.as_f64(),
                        },
                        state: member(m),
                    })
                    .collect(),
            },
        }
    }
}

impl<T: Real> Serialize for StateSpec<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr::from_state(self).serialize(serializer)
    }
}

/// Strict: unnormalized superpositions are an error.
impl<'de, T: Real> Deserialize<'de> for StateSpec<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        StateRepr::deserialize(deserializer)?
            .into_state(false, true)
            .map_err(serde::de::Error::custom)
    }
}
