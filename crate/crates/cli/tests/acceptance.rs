//! Acceptance criteria. Runs as a plain binary so every criterion prints
//! one PASS/FAIL line whether or not output capture is on.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bargwig::geometry::{
    check_b_independence, check_identity_crossb, identity_convergence, PhysicalCoherent,
};
use bargwig::grid::{evaluate_grid, Axis, EvalOptions, Method, PointEvaluator};
use bargwig::oracle::{marginal_position, normalization};
use bargwig::phase::{z_from_qp, BasisParams, PhasePoint};
use bargwig::special::laguerre;
use bargwig::states::{Member, StateSpec, Superposition};
use bargwig::wigner::{wigner_series, TruncationPolicy, Variant};
use bargwig_cli::{cmd_eval, eval::render, EvalArgs, Format};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn unit() -> BasisParams<f64> {
    BasisParams::default()
}

fn fock_closed_form() -> Verdict {
    let start = Instant::now();
    let basis = unit();
    let policy = TruncationPolicy::default();
    let axis: Vec<f64> = (0..21).map(|i| -3.0 + 0.3 * i as f64).collect();
    let mut worst = 0.0f64;
    for n in 0..=8usize {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let state = StateSpec::fock(n);
        for &q in &axis {
            for &p in &axis {
                let z = z_from_qp(q, p, &basis);
                let r2 = z.norm_sqr();
                let expected = sign * (-2.0 * r2).exp() * laguerre(n, 4.0 * r2) / PI;
                let w = wigner_series(&state, z, &policy, Variant::Auto, &basis).unwrap();
                worst = worst.max((w - expected).abs() / expected.abs());
            }
        }
    }
    let elapsed = secs(start.elapsed());
    verdict(
        worst <= 1e-10 && elapsed < 5.0,
        format!("max relative error {worst:.2e} (limit 1e-10), {elapsed:.3} s (limit 5 s)"),
    )
}

fn degree_eight_states() -> Vec<StateSpec<f64>> {
    let mut out: Vec<_> = (0..=8).map(StateSpec::fock).collect();
    let sup = |terms: Vec<(Complex64, Member<f64>)>| {
        StateSpec::Superposition(Superposition::normalized(terms).unwrap())
    };
    out.push(sup(vec![
        (c(1.0, 0.0), Member::Fock(0)),
        (c(0.0, 1.0), Member::Fock(8)),
    ]));
    out.push(sup(vec![
        (c(0.5, 0.0), Member::Fock(1)),
        (c(-0.3, 0.4), Member::Fock(4)),
        (c(0.2, 0.2), Member::Fock(7)),
    ]));
    out
}

fn variant_agreement() -> Verdict {
    let start = Instant::now();
    let basis = unit();
    let policy = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let points: Vec<Complex64> = (0..200)
        .map(|_| {
            Complex64::from_polar(rng.gen_range(0.25f64..16.0).sqrt(), rng.gen_range(0.0..TAU))
        })
        .collect();
    let mut worst = 0.0f64;
    for state in degree_eight_states() {
        for &z in &points {
            let a = wigner_series(&state, z, &policy, Variant::Standard, &basis).unwrap();
            let b = wigner_series(&state, z, &policy, Variant::Scaled, &basis).unwrap();
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }
    let elapsed = secs(start.elapsed());
    verdict(
        worst <= 1e-9 && elapsed < 5.0,
        format!("max relative difference {worst:.2e} (limit 1e-9), {elapsed:.3} s (limit 5 s)"),
    )
}

fn oracle_concordance() -> Verdict {
    let start = Instant::now();
    let basis = unit();
    let options = EvalOptions::default();
    let mut states: Vec<StateSpec<f64>> = (0..=4).map(StateSpec::fock).collect();
    states.push(StateSpec::coherent(c(1.5, 0.0)));
    states.push(StateSpec::coherent(c(-0.6, 1.2)));
    states.push(StateSpec::cat(c(1.2, 0.3), 0.0).unwrap());
    let (mut config_worst, mut phase_worst) = (0.0f64, 0.0f64);
    for state in &states {
        let series = PointEvaluator::new(state, basis, Method::Series, &options).unwrap();
        let config = PointEvaluator::new(state, basis, Method::ConfigIntegral, &options).unwrap();
        let phase = PointEvaluator::new(state, basis, Method::PhaseIntegral, &options).unwrap();
        let width = state.characteristic_width(&basis);
        let errors: Vec<(f64, f64)> = (0..49)
            .into_par_iter()
            .map(|idx| {
                let q = width * ((idx / 7) as f64 - 3.0);
                let p = width * ((idx % 7) as f64 - 3.0);
                let w = series.evaluate(q, p).unwrap().0;
                let a = config.evaluate(q, p).unwrap().0;
                let b = phase.evaluate(q, p).unwrap().0;
                ((a - w).abs() * PI, (b - w).abs() * PI)
            })
            .collect();
        for (a, b) in errors {
            config_worst = config_worst.max(a);
            phase_worst = phase_worst.max(b);
        }
    }
    let elapsed = secs(start.elapsed());
    verdict(
        config_worst <= 1e-6 && phase_worst <= 1e-6 && elapsed < 60.0,
        format!(
            "configuration {config_worst:.2e}, phase-space {phase_worst:.2e} (limit 1e-6 in 1/(pi hbar)), {elapsed:.1} s (limit 60 s)"
        ),
    )
}

fn negativity_witness() -> Verdict {
    let state = StateSpec::fock(1);
    let options = EvalOptions::default();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for m in [
        Method::Series,
        Method::Closed,
        Method::ConfigIntegral,
        Method::PhaseIntegral,
    ] {
        let w = PointEvaluator::new(&state, unit(), m, &options)
            .unwrap()
            .evaluate(0.0, 0.0)
            .unwrap()
            .0;
        let err = (w + 1.0 / PI).abs();
        worst = worst.max(err);
        parts.push(format!("{m} {err:.1e}"));
    }
    verdict(
        worst <= 1e-12,
        format!("|W + 1/pi|: {} (limit 1e-12)", parts.join(", ")),
    )
}

fn marginals() -> Verdict {
    let basis = unit();
    let options = EvalOptions::default();
    let mut cases: Vec<(StateSpec<f64>, Method)> = (0..=3)
        .map(|n| (StateSpec::fock(n), Method::Series))
        .collect();
    cases.push((StateSpec::coherent(c(1.0, 0.5)), Method::Series));
    cases.push((StateSpec::coherent(c(-0.4, -0.8)), Method::Series));
    // a coherent state of another width goes through the closed form
    cases.push((
        StateSpec::coherent_at(0.7, -0.4, 1.5, 1.0).unwrap(),
        Method::Closed,
    ));
    let (mut norm_worst, mut marginal_worst) = (0.0f64, 0.0f64);
    let mut warnings = 0;
    for (state, method) in &cases {
        let axis = Axis::symmetric(6.0 * state.characteristic_width(&basis), 201).unwrap();
        let grid = evaluate_grid(state, axis, axis, basis, *method, &options).unwrap();
        norm_worst = norm_worst.max((normalization(&grid) - 1.0).abs());
        let m = marginal_position(&grid);
        warnings += m.warning.is_some() as usize;
        for (q, d) in m.q.iter().zip(&m.density) {
            marginal_worst =
                marginal_worst.max((d - state.position_wavefunction(*q, &basis).norm_sqr()).abs());
        }
    }
    verdict(
        norm_worst <= 1e-6 && marginal_worst <= 1e-6 && warnings == 0,
        format!("|norm - 1| {norm_worst:.2e}, marginal {marginal_worst:.2e} (limit 1e-6), {warnings} grid warnings"),
    )
}

fn reference_state() -> PhysicalCoherent<f64> {
    PhysicalCoherent::new(0.7, -0.4, 1.5, 1.0).unwrap()
}

fn b_independence() -> Verdict {
    let s = reference_state();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (q, p) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        worst = worst.max(check_b_independence(&s, q, p, 1.0, 2.0).unwrap());
    }
    verdict(
        worst <= 1e-11,
        format!("max |W_b1 - W_b2| {worst:.2e} (limit 1e-11)"),
    )
}

fn geometric_identity() -> Verdict {
    let s = reference_state();
    let span = |a: f64, b: f64| (0..5).map(move |i| a + (b - a) * i as f64 / 4.0);
    let (mut worst, mut ratio_worst, mut counted) = (0.0f64, 0.0f64, 0);
    let mut all_passed = true;
    for b in [0.8, 1.5, 2.2] {
        let basis = BasisParams::with_width(b).unwrap();
        for q in span(-1.3, 2.7) {
            for p in span(-2.4, 1.6) {
                let point = PhasePoint::new(q, p, basis);
                let r = check_identity_crossb(s.label(), s.width, &point, 1e-4).unwrap();
                all_passed &= r.passed && r.diagnostic.is_none();
                worst = worst.max(r.max_residual() / r.lhs.abs().max(basis.wigner_bound()));
                let (_, fine, ratio) =
                    identity_convergence(s.label(), s.width, &point, 0.02).unwrap();
                if fine > 1e-9 {
                    ratio_worst = ratio_worst.max((ratio - 4.0).abs());
                    counted += 1;
                }
            }
        }
    }
    verdict(
        all_passed && worst <= 1e-6 && ratio_worst <= 0.5 && counted == 75,
        format!(
            "max relative residual {worst:.2e} (limit 1e-6); halving ratio within {ratio_worst:.3} of 4 at {counted}/75 points"
        ),
    )
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn bargwig(args: &[&str], threads: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bargwig"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("BARGWIG_THREADS", t),
        None => cmd.env_remove("BARGWIG_THREADS"),
    };
    cmd.output().unwrap()
}

fn determinism_and_interface() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("cat.json");
    let sup = dir.path().join("sup.json");
    write(
        &state,
        r#"{"type":"superposition","terms":[
            {"coeff":{"re":0.7,"im":0.0},"state":{"type":"coherent","re":1.2,"im":0.3}},
            {"coeff":{"re":0.7,"im":0.0},"state":{"type":"coherent","re":-1.2,"im":-0.3}}]}"#,
    );
    write(
        &sup,
        r#"{"type":"superposition","terms":[
            {"coeff":{"re":0.6,"im":0.0},"state":{"type":"fock","n":0}},
            {"coeff":{"re":0.0,"im":0.8},"state":{"type":"fock","n":2}}]}"#,
    );
    let s = state.to_str().unwrap();
    let grid = [
        "--qmin", "-3", "--qmax", "3", "--nq", "41", "--pmin", "-3", "--pmax", "3", "--np", "41",
    ];
    let eval = |out: &Path, threads: Option<&str>| {
        let mut args = vec![
            "eval",
            "--state",
            s,
            "--normalize",
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend(grid);
        bargwig(&args, threads)
    };
    let outputs = [
        (dir.path().join("a.csv"), None),
        (dir.path().join("b.csv"), None),
        (dir.path().join("c.csv"), Some("1")),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (path, threads) in &outputs {
        ok &= eval(path, *threads).status.code() == Some(0);
    }
    let bytes: Vec<Vec<u8>> = outputs
        .iter()
        .map(|(p, _)| std::fs::read(p).unwrap_or_default())
        .collect();
    let identical = !bytes[0].is_empty() && bytes.iter().all(|b| b == &bytes[0]);
    ok &= identical;
    notes.push(format!(
        "csv byte-identical across runs and thread counts: {identical}"
    ));

    let args = EvalArgs {
        state: state.clone(),
        qmin: -3.0,
        qmax: 3.0,
        nq: 41,
        pmin: -3.0,
        pmax: 3.0,
        np: 41,
        b: 1.0,
        hbar: 1.0,
        method: Method::Series,
        tol: None,
        out: None,
        format: Format::Csv,
        normalize: true,
        no_meta: true,
    };
    let in_process = render(&cmd_eval(&args).unwrap(), Format::Csv);
    let same = in_process == render(&cmd_eval(&args).unwrap(), Format::Csv)
        && in_process.as_bytes() == &bytes[0][..];
    ok &= same;
    notes.push(format!("in-process eval matches binary: {same}"));

    let sup_s = sup.to_str().unwrap();
    let missing = dir.path().join("missing.json");
    let missing_s = missing.to_str().unwrap();
    let failure_cases: [(&str, Vec<&str>, i32); 5] = [
        (
            "unknown method",
            [&["eval", "--state", s, "--method", "bogus"][..], &grid[..]].concat(),
            2,
        ),
        (
            "unreadable state",
            [&["eval", "--state", missing_s][..], &grid[..]].concat(),
            2,
        ),
        (
            "closed on superposition",
            [
                &["eval", "--state", sup_s, "--method", "closed"][..],
                &grid[..],
            ]
            .concat(),
            2,
        ),
        (
            "failing check",
            vec!["check", "--suite", "geometry", "--tol", "1e-30"],
            1,
        ),
        ("empty suite", vec!["check", "--suite", ""], 2),
    ];
    for (name, argv, expected) in failure_cases {
        let out = bargwig(&argv, None);
        let code = out.status.code();
        let good = code == Some(expected) && !out.stderr.is_empty();
        ok &= good;
        notes.push(format!("{name} -> {code:?} (expected {expected})"));
    }
    let passing = bargwig(&["check", "--suite", "geometry"], None);
    ok &= passing.status.code() == Some(0);
    notes.push(format!("passing check -> {:?}", passing.status.code()));
    verdict(ok, notes.join("; "))
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 8] = [
        ("Fock closed form", fock_closed_form),
        ("variant agreement", variant_agreement),
        ("oracle concordance", oracle_concordance),
        ("negativity witness", negativity_witness),
        ("marginals and normalization", marginals),
        ("b-independence", b_independence),
        ("geometric identity", geometric_identity),
        ("determinism and interface", determinism_and_interface),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failures += !v.passed as usize;
        println!(
            "criterion {} {name}: {} ({})",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
