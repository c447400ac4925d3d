//! Rectangular `(q, p)` lattices of Wigner values and their serialization.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ConfigOracle, PhaseOracle};
use crate::phase::{z_from_qp, BasisParams};
use crate::quadrature::QuadratureSpec;
use crate::states::StateSpec;
use crate::wigner::{evaluate_series, wigner_closed, TruncationPolicy, Variant};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Slack above `1/(πħ)` tolerated before a grid value counts as unphysical.
pub const BOUND_SLACK: f64 = 1e-9;

/// Uniform samples `min, …, max` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter(format!(
                "axis needs at least 2 samples, got {count}"
            )));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidParameter(format!(
                "axis range [{min}, {max}] is empty"
            )));
        }
        Ok(Self { min, max, count })
    }

    /// Symmetric axis `[−extent, extent]`.
    pub fn symmetric(extent: f64, count: usize) -> Result<Self> {
        Self::new(-extent, extent, count)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

/// Evaluation route for grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Quadratic form; standard kernel near the origin, scaled beyond `|z| = 2`.
    Series,
    /// Quadratic form with the scaled kernel everywhere (undefined at `z = 0`).
    SeriesScaled,
    ConfigIntegral,
    PhaseIntegral,
    Closed,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Series,
        Method::SeriesScaled,
        Method::ConfigIntegral,
        Method::PhaseIntegral,
        Method::Closed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::SeriesScaled => "series-scaled",
            Method::ConfigIntegral => "config-integral",
            Method::PhaseIntegral => "phase-integral",
            Method::Closed => "closed",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method '{s}'")))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings shared by every point of a grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub policy: TruncationPolicy,
    pub config_quadrature: QuadratureSpec,
    pub phase_quadrature: QuadratureSpec,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            policy: TruncationPolicy::default(),
            config_quadrature: QuadratureSpec::config_default(),
            phase_quadrature: QuadratureSpec::phase_default(),
        }
    }
}

/// Per-point evaluator with quadrature rules built once.
pub struct PointEvaluator<'a> {
    state: &'a StateSpec<f64>,
    basis: BasisParams<f64>,
    method: Method,
    policy: TruncationPolicy,
    config: Option<ConfigOracle<f64>>,
    phase: Option<PhaseOracle<f64>>,
}

impl<'a> PointEvaluator<'a> {
    pub fn new(
        state: &'a StateSpec<f64>,
        basis: BasisParams<f64>,
        method: Method,
        options: &EvalOptions,
    ) -> Result<Self> {
        options.policy.validate()?;
        match method {
            Method::Series | Method::SeriesScaled | Method::PhaseIntegral => {
                state.check_basis(&basis)?
            }
            Method::Closed => {
                if let StateSpec::Superposition(_) = state {
                    return Err(Error::NoClosedForm("superposition".into()));
                }
            }
            Method::ConfigIntegral => {}
        }
        let config = match method {
            Method::ConfigIntegral => Some(ConfigOracle::new(options.config_quadrature)?),
            _ => None,
        };
        let phase = match method {
            Method::PhaseIntegral => Some(PhaseOracle::new(options.phase_quadrature)?),
            _ => None,
        };
        Ok(Self {
            state,
            basis,
            method,
            policy: options.policy,
            config,
            phase,
        })
    }

    /// `W(q, p)` and, for series methods, the truncation order used.
    pub fn evaluate(&self, q: f64, p: f64) -> Result<(f64, Option<usize>)> {
        let z = z_from_qp(q, p, &self.basis);
        match self.method {
            Method::Series | Method::SeriesScaled => {
                let variant = if self.method == Method::Series {
                    Variant::Auto
                } else {
                    Variant::Scaled
                };
                let e = evaluate_series(self.state, z, &self.policy, variant, &self.basis)?;
                Ok((e.value, Some(e.order)))
            }
            Method::ConfigIntegral => {
                let oracle = self.config.as_ref().expect("built for this method");
                Ok((oracle.evaluate(self.state, q, p, &self.basis)?, None))
            }
            Method::PhaseIntegral => {
                let oracle = self.phase.as_ref().expect("built for this method");
                Ok((oracle.evaluate(self.state, z, &self.basis)?, None))
            }
            Method::Closed => Ok((wigner_closed(self.state, z, &self.basis)?, None)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub state: StateSpec<f64>,
    pub basis: BasisParams<f64>,
    pub method: Method,
    /// Largest truncation order used, for series methods.
    pub truncation_order: Option<usize>,
    /// Seconds since the Unix epoch; absent in reproducible output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub tool_version: String,
}

/// Wigner values on a `q × p` lattice, row-major with `q` as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub q_axis: Axis,
    pub p_axis: Axis,
    pub values: Vec<f64>,
    pub metadata: GridMetadata,
}

impl WignerGrid {
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.p_axis.count + ip]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// CSV with a version comment, a header and `q,p,W` rows at 17
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.values.len() + 2));
        let _ = writeln!(out, "# bargwig v{}", self.metadata.tool_version);
        out.push_str("q,p,W\n");
        for (iq, q) in self.q_axis.values().enumerate() {
            for (ip, p) in self.p_axis.values().enumerate() {
                let _ = writeln!(out, "{q:.16e},{p:.16e},{:.16e}", self.value(iq, ip));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Weighted average `Σ wᵢ Wᵢ`, the Wigner function of the mixture.
    /// Grids must share axes and basis; weights must be non-negative and sum to 1.
    pub fn mix(components: &[(f64, &WignerGrid)]) -> Result<WignerGrid> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights must be non-negative and sum to 1 (sum {total})"
            )));
        }
        for (_, g) in components {
            if g.q_axis != first.q_axis
                || g.p_axis != first.p_axis
                || g.metadata.basis != first.metadata.basis
            {
                return Err(Error::InvalidParameter(
                    "mixture grids differ in axes or basis".into(),
                ));
            }
        }
        let mut values = vec![0.0; first.values.len()];
        for (w, g) in components {
            for (acc, v) in values.iter_mut().zip(&g.values) {
                *acc += w * v;
            }
        }
        let mut out = (*first).clone();
        out.values = values;
        out.metadata.truncation_order = components
            .iter()
            .filter_map(|(_, g)| g.metadata.truncation_order)
            .max();
        Ok(out)
    }
}

/// Evaluates `state` on the lattice. Points are computed in parallel and
/// assembled in fixed row-major order.
pub fn evaluate_grid(
    state: &StateSpec<f64>,
    q_axis: Axis,
    p_axis: Axis,
    basis: BasisParams<f64>,
    method: Method,
    options: &EvalOptions,
) -> Result<WignerGrid> {
    let evaluator = PointEvaluator::new(state, basis, method, options)?;
    let np = p_axis.count;
    let results: Vec<Result<(f64, Option<usize>)>> = (0..q_axis.count * np)
        .into_par_iter()
        .map(|idx| evaluator.evaluate(q_axis.value(idx / np), p_axis.value(idx % np)))
        .collect();
    let bound = basis.wigner_bound() + BOUND_SLACK;
    let mut values = Vec::with_capacity(results.len());
    let mut order: Option<usize> = None;
    for (idx, r) in results.into_iter().enumerate() {
        let (v, k) = r?;
        if !v.is_finite() || v.abs() > bound {
            return Err(Error::Numerical(format!(
                "W = {v} at (q, p) = ({}, {}) violates |W| ≤ 1/(πħ)",
                q_axis.value(idx / np),
                p_axis.value(idx % np)
            )));
        }
        values.push(v);
        order = match (order, k) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
    Ok(WignerGrid {
        q_axis,
        p_axis,
        values,
        metadata: GridMetadata {
            state: state.clone(),
            basis,
            method,
            truncation_order: order,
            timestamp: None,
            tool_version: TOOL_VERSION.to_string(),
        },
    })
}
