mod args;
mod output;

use args::{
    ChargeArgs, Cli, Command, Common, DensityArgs, EnergyArgs, EnergyUnits, Format, Method,
    Quantity, ScanArgs, Spacing, Variable, XUnits,
};
use clap::{CommandFactory, Parser};
use output::{Record, Report};
use qed1d::energy::{breakdown, relativistic_unit, EnergyBreakdown};
use qed1d::green::vacuum_numbers_with_cutoff;
use qed1d::vacuum::{
    linspace, vacuum_charge_numeric, vacuum_charge_summary, DensityMethod, RadialProfile,
};
use qed1d::{ModelParams, QuadratureSpec};
use rayon::prelude::*;
use std::io::Write;
use std::process::ExitCode;

const THREADS_VAR: &str = "QED1D_MAX_THREADS";

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Computation(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Validation(_) => 3,
            AppError::Computation(_) => 4,
            AppError::Io(_) | AppError::Csv(_) => 1,
        }
    }
}

impl From<qed1d::Error> for AppError {
    fn from(e: qed1d::Error) -> Self {
        use qed1d::Error as E;
        match e {
            E::InvalidParams(_)
            | E::NoBoundState
            | E::InvalidMomentum { .. }
            | E::NoZeroMomentumState(_)
            | E::SpectralFrequency { .. }
            | E::PoleProximity { .. }
            | E::SingularPoint { .. }
            | E::OutsideStableWindow { .. } => AppError::Validation(e.to_string()),
            E::NotConverged { .. } | E::Diagnostic { .. } | E::Quadrature(_) => {
                AppError::Computation(e.to_string())
            }
        }
    }
}

type Result<T> = std::result::Result<T, AppError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qed1d: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let spec = quad_spec(&cli.common)?;
    let (report, default_format) = match &cli.command {
        Command::Energy(a) => (energy(&cli.common, a, &spec)?, Format::Json),
        Command::VpDensity(a) => (vp_density(&cli.common, a, &spec)?, Format::Csv),
        Command::Uehling(g) => {
            let a = DensityArgs {
                method: Method::Uehling,
                grid: *g,
            };
            (vp_density(&cli.common, &a, &spec)?, Format::Csv)
        }
        Command::VacuumCharge(a) => (vacuum_charge(&cli.common, a, &spec)?, Format::Json),
        Command::Scan(a) => (scan(&cli.common, a, &spec)?, Format::Csv),
    };
    let bytes = match cli.common.format.unwrap_or(default_format) {
        Format::Csv => report.csv()?,
        Format::Json => report.json(),
    };
    match &cli.common.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        AppError::Validation(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| AppError::Validation(e.to_string()))
}

fn quad_spec(c: &Common) -> Result<QuadratureSpec> {
    let spec = QuadratureSpec::new(c.rel_tol, c.abs_tol).with_max_subdivisions(c.max_subdivisions);
    spec.validate()
        .map_err(|e| AppError::Validation(e.to_string()))?;
    Ok(spec)
}

fn require_z(c: &Common) -> f64 {
    match c.z {
        Some(z) => z,
        None => Cli::command()
            .error(
                clap::error::ErrorKind::MissingRequiredArgument,
                "the argument '--Z <Z>' is required for this subcommand",
            )
            .exit(),
    }
}

fn params(z: f64, c: &Common) -> Result<ModelParams> {
    Ok(ModelParams::new(z, c.c, c.m)?)
}

fn metadata(p: &ModelParams, common: &Common) -> Record {
    Record::default()
        .num("Z", p.z())
        .num("c", p.c())
        .num("m", p.m())
        .num("rel_tol", common.rel_tol)
        .num("abs_tol", common.abs_tol)
        .int("max_subdivisions", common.max_subdivisions as u64)
}

fn energy_record(b: &EnergyBreakdown, p: &ModelParams, units: EnergyUnits) -> Result<Record> {
    let scale = match units {
        EnergyUnits::Hartree => 1.0,
        EnergyUnits::Relativistic => {
            let u = relativistic_unit(p);
            if u == 0.0 {
                return Err(AppError::Validation(
                    "relativistic energy units need Z > 0".into(),
                ));
            }
            1.0 / u
        }
    };
    let e = &b.error_estimates;
    Ok(Record::default()
        .text("energy_units", units.as_str())
        .with_error("zeroth", b.zeroth, 0.0)
        .with_error("dc", b.dc * scale, e.dc * scale)
        .with_error("xc", b.xc * scale, e.xc * scale)
        .with_error("db", b.db * scale, e.db * scale)
        .with_error("xb", b.xb * scale, e.xb * scale)
        .with_error("total_vp", b.total_vp * scale, e.total_vp * scale)
        .with_error("el_first_order", b.el_first_order, 0.0))
}

fn energy(common: &Common, a: &EnergyArgs, spec: &QuadratureSpec) -> Result<Report> {
    let p = params(require_z(common), common)?;
    let b = breakdown(&p, spec)?;
    Ok(Report::Single(metadata(&p, common).extend(energy_record(
        &b,
        &p,
        a.energy_units,
    )?)))
}

fn vp_density(common: &Common, a: &DensityArgs, spec: &QuadratureSpec) -> Result<Report> {
    let p = params(require_z(common), common)?;
    let g = &a.grid;
    if g.points < 2 {
        return Err(AppError::Validation(format!(
            "--points must be at least 2, got {}",
            g.points
        )));
    }
    if !(g.x_min.is_finite() && g.x_max.is_finite() && g.x_min < g.x_max) {
        return Err(AppError::Validation(format!(
            "need finite --x-min < --x-max, got {} and {}",
            g.x_min, g.x_max
        )));
    }
    let unit = match g.x_units {
        XUnits::Au => 1.0,
        XUnits::Compton => 1.0 / p.compton_k(),
    };
    let grid = linspace(g.x_min, g.x_max, g.points);
    let xs: Vec<f64> = grid.iter().map(|x| x * unit).collect();
    let method = match a.method {
        Method::Spectral => DensityMethod::Spectral,
        Method::Commutator => DensityMethod::Commutator,
        Method::Green => DensityMethod::Green,
        Method::Uehling => DensityMethod::Uehling,
    };
    let column = if a.method == Method::Uehling {
        "n_vp_uehling"
    } else {
        "n_vp"
    };
    let prof = RadialProfile::density(method, p, xs, spec)?;
    let rows = grid
        .iter()
        .zip(prof.values.iter().zip(&prof.errors))
        .map(|(&x, (&v, &e))| {
            Record::default()
                .num("x", x)
                .num(column, v)
                .num(&format!("{column}_error_estimate"), e)
        })
        .collect();
    let meta = metadata(&p, common)
        .text("method", a.method.as_str())
        .text("x_units", g.x_units.as_str());
    let rows = match common.format {
        Some(Format::Json) => rows,
        // the CSV schema is fixed to position and value
        _ => strip_errors(rows),
    };
    Ok(Report::Profile {
        metadata: meta,
        rows,
    })
}

fn strip_errors(rows: Vec<Record>) -> Vec<Record> {
    rows.into_iter()
        .map(|mut r| {
            r.fields.retain(|(k, _)| !k.ends_with("_error_estimate"));
            r
        })
        .collect()
}

fn charge_record(p: &ModelParams, spec: &QuadratureSpec) -> Result<Record> {
    let s = vacuum_charge_summary(p);
    let numeric = vacuum_charge_numeric(&p.derive(), spec)?;
    Ok(Record::default()
        .with_error("integral", s.integral, 0.0)
        .with_error("integral_numeric", numeric.value, numeric.error_estimate)
        .with_error("z_obs", s.z_obs, 0.0))
}

fn vacuum_charge(common: &Common, a: &ChargeArgs, spec: &QuadratureSpec) -> Result<Report> {
    let p = params(require_z(common), common)?;
    if !(a.cutoff.is_finite() && a.cutoff > 0.0) {
        return Err(AppError::Validation(format!(
            "--cutoff must be positive, got {}",
            a.cutoff
        )));
    }
    let n = vacuum_numbers_with_cutoff(&p, a.cutoff, spec)?;
    let r = metadata(&p, common)
        .extend(charge_record(&p, spec)?)
        .num("cutoff", n.cutoff)
        .with_error("n_e", n.n_e, n.n_e_error)
        .with_error("n_p", n.n_p, n.n_p_error)
        .with_error("n_net", n.n_net, n.n_net_error);
    Ok(Report::Single(r))
}

fn scan_values(a: &ScanArgs) -> Result<Vec<f64>> {
    if a.steps < 2 {
        return Err(AppError::Validation(format!(
            "--steps must be at least 2, got {}",
            a.steps
        )));
    }
    if !(a.from.is_finite() && a.to.is_finite()) {
        return Err(AppError::Validation("scan bounds must be finite".into()));
    }
    Ok(match a.spacing {
        Spacing::Linear => linspace(a.from, a.to, a.steps),
        Spacing::Log => {
            if !(a.from > 0.0 && a.to > 0.0) {
                return Err(AppError::Validation(
                    "log spacing needs positive bounds".into(),
                ));
            }
            linspace(a.from.ln(), a.to.ln(), a.steps)
                .into_iter()
                .enumerate()
                .map(|(i, v)| match i {
                    0 => a.from,
                    i if i == a.steps - 1 => a.to,
                    _ => v.exp(),
                })
                .collect()
        }
    })
}

fn scan(common: &Common, a: &ScanArgs, spec: &QuadratureSpec) -> Result<Report> {
    let values = scan_values(a)?;
    let points: Vec<ModelParams> = values
        .iter()
        .map(|&v| match a.variable {
            Variable::Z => params(v, common),
            Variable::InvC => {
                if !(v > 0.0) {
                    return Err(AppError::Validation(format!(
                        "1/c must be positive, got {v}"
                    )));
                }
                let z = require_z(common);
                Ok(ModelParams::new(z, 1.0 / v, common.m)?)
            }
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Record> = points
        .par_iter()
        .map(|p| -> Result<Record> {
            let head = Record::default()
                .num("Z", p.z())
                .num("c", p.c())
                .num("inv_c", 1.0 / p.c())
                .num("m", p.m());
            let body = match a.quantity {
                Quantity::EnergyBreakdown => {
                    energy_record(&breakdown(p, spec)?, p, a.energy_units)?
                }
                Quantity::VacuumCharge => charge_record(p, spec)?,
            };
            Ok(head.extend(body))
        })
        .collect::<Result<_>>()?;
    Ok(Report::Scan(rows))
}
