use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::time::Instant;

use bargwig::geometry::{
    check_b_independence, check_identity_crossb, identity_convergence, PhysicalCoherent,
};
use bargwig::grid::{evaluate_grid, Axis, EvalOptions, Method, PointEvaluator};
use bargwig::oracle::{marginal_position, normalization};
use bargwig::phase::{BasisParams, PhasePoint};
use bargwig::states::{Member, StateSpec, Superposition};
use bargwig::wigner::{
    evaluate_series, wigner_closed_fock, wigner_series, TruncationPolicy, Variant,
};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{emit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Series,
    Oracles,
    Geometry,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Tolerance override. A bare value applies to every selected check,
    /// `name=value` to one check. Repeatable.
    #[arg(long = "tol", allow_negative_numbers = true)]
    pub tol: Vec<String>,
    /// Report file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub suite: Suite,
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

type Outcome = Result<(f64, Option<String>), bargwig::Error>;

struct CheckDef {
    name: &'static str,
    suite: Suite,
    tolerance: f64,
    run: fn() -> Outcome,
}

const CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "fock-closed-form",
        suite: Suite::Series,
        tolerance: 1e-10,
        run: fock_closed_form,
    },
    CheckDef {
        name: "variant-agreement",
        suite: Suite::Series,
        tolerance: 1e-9,
        run: variant_agreement,
    },
    CheckDef {
        name: "realness",
        suite: Suite::Series,
        tolerance: 1e-10,
        run: realness,
    },
    CheckDef {
        name: "global-bound",
        suite: Suite::Series,
        tolerance: 1e-9,
        run: global_bound,
    },
    CheckDef {
        name: "negativity-witness",
        suite: Suite::Series,
        tolerance: 1e-12,
        run: negativity_witness,
    },
    CheckDef {
        name: "config-concordance",
        suite: Suite::Oracles,
        tolerance: 1e-6,
        run: config_concordance,
    },
    CheckDef {
        name: "phase-concordance",
        suite: Suite::Oracles,
        tolerance: 1e-6,
        run: phase_concordance,
    },
    CheckDef {
        name: "normalization",
        suite: Suite::Oracles,
        tolerance: 1e-6,
        run: grid_normalization,
    },
    CheckDef {
        name: "position-marginal",
        suite: Suite::Oracles,
        tolerance: 1e-6,
        run: position_marginal,
    },
    CheckDef {
        name: "identity-scan",
        suite: Suite::Geometry,
        tolerance: 1e-6,
        run: identity_scan,
    },
    CheckDef {
        name: "identity-convergence",
        suite: Suite::Geometry,
        tolerance: 0.5,
        run: identity_order,
    },
    CheckDef {
        name: "b-independence",
        suite: Suite::Geometry,
        tolerance: 1e-11,
        run: b_independence,
    },
];

/// Names of all checks, in report order.
pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|c| c.name)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_basis() -> BasisParams<f64> {
    BasisParams::default()
}

fn fock_superposition() -> StateSpec<f64> {
    let terms = vec![
        (c(1.0, 0.0), Member::Fock(0)),
        (c(0.0, -1.0), Member::Fock(3)),
        (c(0.5, 0.5), Member::Fock(8)),
    ];
    StateSpec::Superposition(Superposition::normalized(terms).expect("valid terms"))
}

fn cat() -> StateSpec<f64> {
    StateSpec::cat(c(1.2, 0.3), 0.0).expect("valid cat")
}

/// Catalog states of polynomial degree ≤ 8.
fn polynomial_catalog() -> Vec<StateSpec<f64>> {
    let mut out: Vec<_> = (0..=8).map(StateSpec::fock).collect();
    out.push(fock_superposition());
    out
}

fn catalog() -> Vec<StateSpec<f64>> {
    let mut out = polynomial_catalog();
    out.push(StateSpec::coherent(c(0.0, 0.0)));
    out.push(StateSpec::coherent(c(1.0, 0.0)));
    out.push(StateSpec::coherent(c(-0.7, 1.1)));
    out.push(cat());
    out
}

fn annulus_points(seed: u64, count: usize, rmin: f64, rmax: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.gen_range(rmin * rmin..rmax * rmax).sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..TAU))
        })
        .collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn fock_closed_form() -> Outcome {
    let basis = unit_basis();
    let policy = TruncationPolicy::default();
    let axis = Axis::symmetric(3.0, 21)?;
    let mut worst = 0.0f64;
    for n in 0..=8 {
        let state = StateSpec::fock(n);
        for q in axis.values() {
            for p in axis.values() {
                let z = bargwig::phase::z_from_qp(q, p, &basis);
                let series = wigner_series(&state, z, &policy, Variant::Auto, &basis)?;
                let closed = wigner_closed_fock(n, z, &basis);
                worst = worst.max((series - closed).abs() / closed.abs());
            }
        }
    }
    Ok((
        worst,
        Some("relative error, fock 0..8 on a 21x21 grid over [-3, 3]".into()),
    ))
}

fn variant_agreement() -> Outcome {
    let basis = unit_basis();
    let policy = TruncationPolicy::default();
    let points = annulus_points(2, 200, 0.5, 4.0);
    let mut worst = 0.0f64;
    for state in polynomial_catalog() {
        for &z in &points {
            let a = wigner_series(&state, z, &policy, Variant::Standard, &basis)?;
            let b = wigner_series(&state, z, &policy, Variant::Scaled, &basis)?;
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }
    Ok((
        worst,
        Some("relative, 200 points on 0.5 <= |z| <= 4".into()),
    ))
}

fn realness() -> Outcome {
    let basis = unit_basis();
    let policy = TruncationPolicy::default();
    let points = annulus_points(3, 500, 0.0, 4.0);
    let mut worst = 0.0f64;
    for state in catalog() {
        for &z in &points {
            let e = evaluate_series(&state, z, &policy, Variant::Auto, &basis)?;
            let modulus = e.value.hypot(e.imaginary_residual);
            if modulus > 0.0 {
                worst = worst.max(e.imaginary_residual.abs() / modulus);
            }
        }
    }
    Ok((
        worst,
        Some("imaginary part relative to modulus, 500 points with |z| <= 4".into()),
    ))
}

fn global_bound() -> Outcome {
    let policy = TruncationPolicy::default();
    let points = annulus_points(4, 300, 0.0, 4.0);
    let mut worst = 0.0f64;
    for hbar in [0.5, 1.0, 2.0] {
        let basis = BasisParams::new(1.0, hbar)?;
        for state in catalog() {
            for &z in &points {
                let w = wigner_series(&state, z, &policy, Variant::Auto, &basis)?;
                worst = worst.max(w.abs() - 1.0 / (PI * hbar));
            }
        }
    }
    Ok((
        worst.max(0.0),
        Some("largest excess of |W| over 1/(pi hbar)".into()),
    ))
}

fn negativity_witness() -> Outcome {
    let state = StateSpec::fock(1);
    let options = EvalOptions::default();
    let methods = [
        Method::Series,
        Method::Closed,
        Method::ConfigIntegral,
        Method::PhaseIntegral,
    ];
    let mut worst = 0.0f64;
    for m in methods {
        let (w, _) = PointEvaluator::new(&state, unit_basis(), m, &options)?.evaluate(0.0, 0.0)?;
        worst = worst.max((w + 1.0 / PI).abs());
    }
    Ok((
        worst,
        Some("fock(1) at the origin against -1/pi, four methods".into()),
    ))
}

fn concordance_states() -> Vec<StateSpec<f64>> {
    let mut out: Vec<_> = (0..=4).map(StateSpec::fock).collect();
    out.push(StateSpec::coherent(c(1.5, 0.0)));
    out.push(StateSpec::coherent(c(-0.6, 1.2)));
    out.push(cat());
    out
}

fn concordance(method: Method) -> Outcome {
    let basis = unit_basis();
    let options = EvalOptions::default();
    let mut worst = 0.0f64;
    for state in concordance_states() {
        let series = PointEvaluator::new(&state, basis, Method::Series, &options)?;
        let oracle = PointEvaluator::new(&state, basis, method, &options)?;
        let width = state.characteristic_width(&basis);
        let errors: Result<Vec<f64>, bargwig::Error> = (0..49)
            .into_par_iter()
            .map(|idx| {
                let q = width * (idx / 7) as f64 - 3.0 * width;
                let p = width * (idx % 7) as f64 - 3.0 * width;
                let a = series.evaluate(q, p)?.0;
                let b = oracle.evaluate(q, p)?.0;
                Ok((a - b).abs() * PI * basis.hbar())
            })
            .collect();
        worst = worst.max(max_of(errors?));
    }
    Ok((
        worst,
        Some("absolute, units of 1/(pi hbar), 7x7 probe grid over +-3 widths".into()),
    ))
}

fn config_concordance() -> Outcome {
    concordance(Method::ConfigIntegral)
}

fn phase_concordance() -> Outcome {
    concordance(Method::PhaseIntegral)
}

fn marginal_states() -> Vec<StateSpec<f64>> {
    let mut out: Vec<_> = (0..=3).map(StateSpec::fock).collect();
    out.push(StateSpec::coherent(c(1.0, 0.5)));
    out
}

fn wide_grid(state: &StateSpec<f64>) -> Result<bargwig::WignerGrid, bargwig::Error> {
    let basis = unit_basis();
    let axis = Axis::symmetric(6.0 * state.characteristic_width(&basis), 201)?;
    evaluate_grid(
        state,
        axis,
        axis,
        basis,
        Method::Series,
        &EvalOptions::default(),
    )
}

fn grid_normalization() -> Outcome {
    let mut worst = 0.0f64;
    for state in marginal_states() {
        worst = worst.max((normalization(&wide_grid(&state)?) - 1.0).abs());
    }
    Ok((
        worst,
        Some("|integral of W - 1| on a 201x201 grid over +-6 widths".into()),
    ))
}

fn position_marginal() -> Outcome {
    let basis = unit_basis();
    let mut worst = 0.0f64;
    let mut warnings = Vec::new();
    for state in marginal_states() {
        let m = marginal_position(&wide_grid(&state)?);
        if let Some(w) = m.warning {
            warnings.push(format!("{}: {w}", state.kind()));
        }
        for (q, d) in m.q.iter().zip(&m.density) {
            worst = worst.max((d - state.position_wavefunction(*q, &basis).norm_sqr()).abs());
        }
    }
    let detail = if warnings.is_empty() {
        "pointwise against |psi(q)|^2".to_string()
    } else {
        warnings.join("; ")
    };
    Ok((worst, Some(detail)))
}

const IDENTITY_STEP: f64 = 1e-4;
const CONVERGENCE_STEP: f64 = 0.02;
/// Residuals below this are roundoff and say nothing about the order.
const CONVERGENCE_FLOOR: f64 = 1e-9;

fn reference_state() -> PhysicalCoherent<f64> {
    PhysicalCoherent::new(0.7, -0.4, 1.5, 1.0).expect("valid reference state")
}

fn identity_points() -> impl Iterator<Item = PhasePoint<f64>> {
    let span = |a: f64, b: f64| (0..5).map(move |i| a + (b - a) * i as f64 / 4.0);
    [0.8, 1.5, 2.2].into_iter().flat_map(move |b| {
        let basis = BasisParams::with_width(b).expect("positive width");
        span(-1.3, 2.7)
            .flat_map(move |q| span(-2.4, 1.6).map(move |p| PhasePoint::new(q, p, basis)))
    })
}

fn identity_scan() -> Outcome {
    let s = reference_state();
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for point in identity_points() {
        let r = check_identity_crossb(s.label(), s.width, &point, IDENTITY_STEP)?;
        worst = worst.max(r.max_residual() / r.lhs.abs().max(point.basis().wigner_bound()));
        if let Some(d) = r.diagnostic {
            notes.push(d);
        }
    }
    let detail = if notes.is_empty() {
        "relative residual over a 5x5x3 (q, p, b) scan, Q=0.7 P=-0.4 B=1.5".to_string()
    } else {
        notes.join("; ")
    };
    Ok((worst, Some(detail)))
}

fn identity_order() -> Outcome {
    let s = reference_state();
    let mut worst = 0.0f64;
    let mut counted = 0;
    for point in identity_points() {
        let (_, fine, ratio) = identity_convergence(s.label(), s.width, &point, CONVERGENCE_STEP)?;
        if fine > CONVERGENCE_FLOOR {
            worst = worst.max((ratio - 4.0).abs());
            counted += 1;
        }
    }
    Ok((
        worst,
        Some(format!(
            "|ratio - 4| on halving the b-step, {counted} points above the floor"
        )),
    ))
}

fn b_independence() -> Outcome {
    let s = reference_state();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (q, p) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let (b1, b2) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        worst = worst.max(check_b_independence(&s, q, p, b1, b2)?);
    }
    Ok((
        worst,
        Some("|W_b1 - W_b2| at 100 random (q, p, b1, b2)".into()),
    ))
}

type Overrides = (Option<f64>, Vec<(String, f64)>);

fn parse_overrides(raw: &[String]) -> Result<Overrides, CliError> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0 && v.is_finite())
            .ok_or_else(|| {
                CliError::Usage(format!("--tol value must be a positive number, got '{s}'"))
            })
    };
    let mut global = None;
    let mut named = Vec::new();
    for item in raw {
        match item.split_once('=') {
            Some((name, value)) => {
                if !CHECKS.iter().any(|c| c.name == name) {
                    let known: Vec<_> = check_names().collect();
                    return Err(CliError::Usage(format!(
                        "unknown check '{name}' in --tol (known: {})",
                        known.join(", ")
                    )));
                }
                named.push((name.to_string(), number(value)?));
            }
            None => global = Some(number(item)?),
        }
    }
    Ok((global, named))
}

/// Runs the selected suite. Tolerance overrides that fail to parse are usage errors.
pub fn cmd_check(args: &CheckArgs) -> Result<SuiteReport, CliError> {
    let (global, named) = parse_overrides(&args.tol)?;
    let checks = CHECKS
        .iter()
        .filter(|c| args.suite == Suite::All || c.suite == args.suite)
        .map(|def| {
            let tolerance = named
                .iter()
                .rev()
                .find(|(n, _)| n == def.name)
                .map(|(_, v)| *v)
                .or(global)
                .unwrap_or(def.tolerance);
            let start = Instant::now();
            let outcome = (def.run)();
            let seconds = start.elapsed().as_secs_f64();
            let (max_residual, detail, passed) = match outcome {
                Ok((r, d)) => (r, d, r <= tolerance),
                Err(e) => (f64::INFINITY, Some(e.to_string()), false),
            };
            CheckResult {
                name: def.name,
                suite: def.suite,
                passed,
                max_residual,
                tolerance,
                detail,
                seconds,
            }
        })
        .collect::<Vec<_>>();
    Ok(SuiteReport {
        suite: args.suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub(crate) fn run(args: &CheckArgs) -> Result<(), CliError> {
    let report = cmd_check(args)?;
    // serde_json writes non-finite numbers as null
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    emit(&text, args.out.as_ref())?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Err(CliError::Failure(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}
