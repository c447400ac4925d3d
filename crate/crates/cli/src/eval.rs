use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use bargwig::grid::{evaluate_grid, Axis, EvalOptions, Method, WignerGrid};
use bargwig::phase::BasisParams;
use clap::Args;

use crate::{emit, parse_method, read_state, CliError, Format};

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// State description (JSON).
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub qmin: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub qmax: f64,
    #[arg(long)]
    pub nq: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub pmin: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub pmax: f64,
    #[arg(long)]
    pub np: usize,
    /// Basis width.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value = "series", value_parser = parse_method)]
    pub method: Method,
    /// Truncation tail tolerance for series methods, node-doubling
    /// tolerance for the integral methods.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Rescale unnormalized superpositions instead of rejecting them.
    #[arg(long)]
    pub normalize: bool,
    /// Leave the timestamp out of JSON metadata.
    #[arg(long)]
    pub no_meta: bool,
}

pub(crate) fn options_with_tolerance(tol: Option<f64>) -> Result<EvalOptions, CliError> {
    let mut options = EvalOptions::default();
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
        options.policy.tail_tolerance = t;
        options.config_quadrature.convergence_tolerance = t;
        options.phase_quadrature.convergence_tolerance = t;
    }
    Ok(options)
}

/// Evaluates the grid described by `args`.
pub fn cmd_eval(args: &EvalArgs) -> Result<WignerGrid, CliError> {
    let state = read_state(&args.state, args.normalize)?;
    let basis = BasisParams::new(args.b, args.hbar)?;
    let q_axis = Axis::new(args.qmin, args.qmax, args.nq)?;
    let p_axis = Axis::new(args.pmin, args.pmax, args.np)?;
    let options = options_with_tolerance(args.tol)?;
    let mut grid = evaluate_grid(&state, q_axis, p_axis, basis, args.method, &options)?;
    if !args.no_meta {
        grid.metadata.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    Ok(grid)
}

pub fn render(grid: &WignerGrid, format: Format) -> String {
    match format {
        Format::Csv => grid.to_csv(),
        Format::Json => {
            let mut text = grid.to_json();
            text.push('\n');
            text
        }
    }
}

pub(crate) fn run(args: &EvalArgs) -> Result<(), CliError> {
    let grid = cmd_eval(args)?;
    emit(&render(&grid, args.format), args.out.as_ref())
}
