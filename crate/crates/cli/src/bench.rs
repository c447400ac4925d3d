use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use bargwig::grid::{Method, PointEvaluator};
use bargwig::phase::{qp_from_z, BasisParams};
use bargwig::states::StateSpec;
use clap::Args;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::eval::options_with_tolerance;
use crate::{emit, parse_method, read_state, CliError, Format};

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Points per axis.
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid_size: u64,
    #[arg(long, value_delimiter = ',', default_value = "series,phase-integral", value_parser = parse_method)]
    pub methods: Vec<Method>,
    /// Timed repetitions per method; the median is reported.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..))]
    pub repeat: u32,
    /// Half-extent of the square grid in units of the state width.
    #[arg(long, default_value_t = 3.0)]
    pub extent: f64,
    /// Polar grid on `RMIN <= |z| <= RMAX` instead of a square grid.
    #[arg(long, value_delimiter = ',', num_args = 1, value_names = ["RMIN,RMAX"])]
    pub annulus: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub method: Method,
    pub points: usize,
    pub median_seconds: f64,
    pub per_point_seconds: f64,
    /// Largest `|W − W_series|`, in units of `1/(πħ)`.
    pub max_deviation: f64,
}

fn sample_points(
    args: &BenchArgs,
    state: &StateSpec<f64>,
    basis: &BasisParams<f64>,
) -> Result<Vec<(f64, f64)>, CliError> {
    let n = args.grid_size as usize;
    let span = |a: f64, b: f64| (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64);
    match &args.annulus {
        Some(bounds) => {
            let [rmin, rmax] = bounds[..] else {
                return Err(CliError::Usage("--annulus takes RMIN,RMAX".into()));
            };
            if !(rmin >= 0.0 && rmax > rmin) {
                return Err(CliError::Usage(format!(
                    "--annulus needs 0 <= RMIN < RMAX, got {rmin},{rmax}"
                )));
            }
            // n radii by n angles; the angle grid leaves out the repeated 2π
            Ok(span(rmin, rmax)
                .flat_map(|r| {
                    (0..n).map(move |k| Complex64::from_polar(r, TAU * k as f64 / n as f64))
                })
                .map(|z| qp_from_z(z, basis))
                .collect())
        }
        None => {
            if !(args.extent > 0.0) {
                return Err(CliError::Usage(format!(
                    "--extent must be positive, got {}",
                    args.extent
                )));
            }
            let half = args.extent * state.characteristic_width(basis);
            Ok(span(-half, half)
                .flat_map(|q| span(-half, half).map(move |p| (q, p)))
                .collect())
        }
    }
}

fn evaluate_all(evaluator: &PointEvaluator, points: &[(f64, f64)]) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, bargwig::Error> = points
        .par_iter()
        .map(|&(q, p)| evaluator.evaluate(q, p).map(|v| v.0))
        .collect();
    Ok(values?)
}

fn median(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

/// Times each requested method on the same points.
pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let state = read_state(&args.state, args.normalize)?;
    let basis = BasisParams::new(args.b, args.hbar)?;
    let options = options_with_tolerance(args.tol)?;
    if args.methods.is_empty() {
        return Err(CliError::Usage("--methods is empty".into()));
    }
    let points = sample_points(args, &state, &basis)?;
    let reference = evaluate_all(
        &PointEvaluator::new(&state, basis, Method::Series, &options)?,
        &points,
    )?;
    let scale = PI * basis.hbar();

    let mut rows = Vec::with_capacity(args.methods.len());
    for &method in &args.methods {
        let evaluator = PointEvaluator::new(&state, basis, method, &options)?;
        let mut times = Vec::with_capacity(args.repeat as usize);
        let mut values = Vec::new();
        for _ in 0..args.repeat {
            let start = Instant::now();
            values = evaluate_all(&evaluator, &points)?;
            times.push(start.elapsed().as_secs_f64());
        }
        let max_deviation = values
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs() * scale)
            .fold(0.0, f64::max);
        let median_seconds = median(times);
        rows.push(BenchRow {
            method,
            points: points.len(),
            median_seconds,
            per_point_seconds: median_seconds / points.len() as f64,
            max_deviation,
        });
    }
    Ok(rows)
}

pub fn render(rows: &[BenchRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(rows).expect("rows serialize");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out =
                String::from("method,points,median_seconds,per_point_seconds,max_deviation\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{:.6e},{:.6e},{:.6e}",
                    r.method, r.points, r.median_seconds, r.per_point_seconds, r.max_deviation
                );
            }
            out
        }
    }
}

pub(crate) fn run(args: &BenchArgs) -> Result<(), CliError> {
    let rows = cmd_bench(args)?;
    emit(&render(&rows, args.format), args.out.as_ref())
}
