//! Fixed-node quadrature rules on symmetric intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    GaussLegendre,
    TanhSinh,
}

/// Nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn new(rule: Rule, nodes: usize) -> Self {
        match rule {
            Rule::GaussLegendre => gauss_legendre(nodes),
            Rule::TanhSinh => tanh_sinh(nodes),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[−h, h]`.
    pub fn scaled(&self, halfwidth: T) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (x * halfwidth, w * halfwidth))
    }

    pub fn integrate(&self, halfwidth: T, f: impl Fn(T) -> T) -> T {
        self.scaled(halfwidth)
            .map(|(x, w)| w * f(x))
            .fold(T::zero(), |a, b| a + b)
    }
}

/// Gauss–Legendre rule by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> QuadratureRule<T> {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_count(n);
    let two = T::lit(2.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton
        let mut x = (T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = two / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    QuadratureRule { nodes, weights }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 1..n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf + T::one()) * x * p1 - kf * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    let (pn, pn1) = if n == 0 {
        (T::one(), T::zero())
    } else {
        (p1, p0)
    };
    let d = T::from_count(n) * (x * pn - pn1) / (x * x - T::one());
    (pn, d)
}

/// Double-exponential rule: `x = tanh(π/2 sinh t)` sampled on `t ∈ [−3, 3]`.
pub fn tanh_sinh<T: Real>(n: usize) -> QuadratureRule<T> {
    assert!(n >= 3, "need at least three nodes");
    let m = n / 2;
    let t_max = T::lit(3.0);
    let h = t_max / T::from_count(m);
    let half_pi = T::FRAC_PI_2();
    let mut nodes = Vec::with_capacity(2 * m + 1);
    let mut weights = Vec::with_capacity(2 * m + 1);
    for k in 0..=2 * m {
        let t = T::from_count(k) * h - t_max;
        let u = half_pi * t.sinh();
        let cu = u.cosh();
        nodes.push(u.tanh());
        weights.push(h * half_pi * t.cosh() / (cu * cu));
    }
    QuadratureRule { nodes, weights }
}

/// Integration settings for the oracles. `domain_halfwidth` is in units of
/// the state's characteristic width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: Rule,
    pub nodes: usize,
    pub domain_halfwidth: f64,
    /// Largest change allowed when the node count is doubled.
    pub convergence_tolerance: f64,
}

impl QuadratureSpec {
    /// Default for the configuration-space integral.
    pub fn config_default() -> Self {
        Self {
            rule: Rule::GaussLegendre,
            nodes: 257,
            domain_halfwidth: 12.0,
            convergence_tolerance: 1e-8,
        }
    }

    /// Default for the phase-space integral, per axis.
    pub fn phase_default() -> Self {
        Self {
            rule: Rule::GaussLegendre,
            nodes: 257,
            domain_halfwidth: 16.0,
            convergence_tolerance: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 32 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least 32 nodes, got {}",
                self.nodes
            )));
        }
        if !(self.domain_halfwidth > 0.0) || !(self.convergence_tolerance > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature halfwidth and tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            ..*self
        }
    }
}
