//! Command-line front end: spectra, hermiticity audits, wavefunction
//! sampling and the origin delta test, emitted as plot-ready CSV/JSON.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use radialwell::{
    audit, audit_to_csv, audit_to_json, default_epsilon_ladder, delta_to_json, delta_weight,
    shooting_eigenfunction, shooting_solve, spectrum_from_json, spectrum_to_csv, spectrum_to_json,
    wavefn_to_csv, well_spectrum, AuditTolerances, BoundaryConditionFamily, Error, PotentialSpec,
    QuantumChannel, RadialMode, ShootingConfig, Spectrum, Units, DELTA_SOURCE_TOLERANCE,
};

const EXIT_TABLE: &str = "\
Exit codes:
  0  success; for `audit`, every state passed; for `deltatest`, the weight is within tolerance
  1  numerical failure (bracket exhausted, integrator underflow, ...)
  2  invalid configuration or unparseable input file
  3  non-normalizable request (huang-thomann with l > 0; deltatest with l != 0)
  4  audit found at least one failing state
  5  deltatest measured a weight above tolerance

The RADIALWELL_TOL environment variable overrides the default verdict
tolerance; an explicit --tol flag overrides both.";

#[derive(Parser)]
#[command(
    name = "radialwell",
    version,
    about = "Bound states of a spherical box and the boundary conditions that keep its Hamiltonian hermitian",
    after_help = EXIT_TABLE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute bound-state wavenumbers and energies for one channel.
    Spectrum(SpectrumArgs),
    /// Audit every state of a spectrum for hermiticity defects.
    Audit(AuditArgs),
    /// Sample one eigenfunction on a uniform radial grid.
    Wavefn(WavefnArgs),
    /// Measure the delta-source weight of an s-wave mode at the origin.
    Deltatest(DeltaArgs),
}

#[derive(Args)]
struct UnitsArgs {
    /// Reduced Planck constant.
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Particle mass; the default makes E = k^2.
    #[arg(long = "mass", default_value_t = 0.5)]
    mass: f64,
}

impl UnitsArgs {
    fn units(&self) -> Result<Units, Error> {
        Units::new(self.hbar, self.mass)
    }
}

#[derive(Args)]
struct GeometryArgs {
    /// Well radius for the free interior.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Angular momentum quantum number.
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// Boundary-condition family: conventional | huang-thomann.
    #[arg(long, default_value = "conventional", value_parser = parse_family)]
    family: BoundaryConditionFamily,
    /// Potential file (JSON); its radius overrides --radius and the
    /// spectrum is found by shooting instead of closed form.
    #[arg(long, value_name = "FILE")]
    potential: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Number of levels.
    #[arg(long, short = 'n', default_value_t = 3)]
    n: u32,
    #[command(flatten)]
    units: UnitsArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Number of levels.
    #[arg(long, short = 'n', default_value_t = 3)]
    n: u32,
    /// Audit a previously exported spectrum (JSON) instead of solving.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["radius", "l", "family", "potential", "n"])]
    spectrum: Option<PathBuf>,
    /// Verdict tolerance on the wronskian and endpoint defects.
    #[arg(long)]
    tol: Option<f64>,
    /// Tolerance on the momentum-identity quadrature residual.
    #[arg(long)]
    identity_tol: Option<f64>,
    #[command(flatten)]
    units: UnitsArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WavefnArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Which eigenstate, counted from 1.
    #[arg(long, short = 'n', default_value_t = 1)]
    n: u32,
    /// Number of grid points over (0, a].
    #[arg(long, default_value_t = 1001)]
    points: u32,
    #[command(flatten)]
    units: UnitsArgs,
    /// Output path; stdout when omitted.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DeltaArgs {
    /// Sine (regular) amplitude of the mode.
    #[arg(short = 'A', long = "regular", default_value_t = 1.0)]
    regular: f64,
    /// Cosine (irregular) amplitude of the mode.
    #[arg(short = 'B', long = "irregular", default_value_t = 0.0)]
    irregular: f64,
    /// Wavenumber of the mode.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    k: f64,
    /// Well radius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Angular momentum; anything but 0 is rejected.
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// Rejection threshold on the extrapolated weight.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path; stdout when omitted.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<BoundaryConditionFamily, String> {
    BoundaryConditionFamily::from_str(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Audit(args) => cmd_audit(&args),
        Command::Wavefn(args) => cmd_wavefn(&args),
        Command::Deltatest(args) => cmd_deltatest(&args),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::FamilyRequiresSWave { .. } | Error::NonNormalizable { .. } => 3,
        Error::InvalidInput(_) => 2,
        _ => 1,
    }
}

/// Flag beats environment beats default.
fn resolve_tolerance(flag: Option<f64>, default: f64) -> Result<f64, Error> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("RADIALWELL_TOL") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::invalid(format!("RADIALWELL_TOL is not a number: {text:?}"))),
        Err(_) => Ok(default),
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Error::invalid(format!("cannot write to stdout: {e}")))
        }
    }
}

fn load_potential(path: &Path) -> Result<PotentialSpec, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("potential file {}: {e}", path.display())))
}

fn solve_spectrum(geometry: &GeometryArgs, units: Units, n: u32) -> Result<Spectrum, Error> {
    let channel = QuantumChannel::new(geometry.l);
    match &geometry.potential {
        Some(path) => {
            if geometry.family != BoundaryConditionFamily::Conventional {
                return Err(Error::invalid(
                    "shooting over a potential supports the conventional family only".to_string(),
                ));
            }
            let potential = load_potential(path)?;
            let config = ShootingConfig::for_radius(potential.radius());
            shooting_solve(&potential, channel, units, &config, n)
        }
        None => {
            let geometry_spec = PotentialSpec::zero(geometry.radius)?;
            well_spectrum(&geometry_spec, channel, geometry.family, units, n)
        }
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<u8, Error> {
    let spectrum = solve_spectrum(&args.geometry, args.units.units()?, args.n)?;
    let text = match args.format {
        Format::Csv => spectrum_to_csv(&spectrum),
        Format::Json => spectrum_to_json(&spectrum),
    };
    emit(&text, args.output.as_deref())?;
    Ok(0)
}

/// The modes behind a spectrum: closed-form well modes when the interior
/// is free, re-integrated shooting eigenfunctions otherwise.
fn spectrum_modes(
    args: &AuditArgs,
    spectrum: &Spectrum,
    units: Units,
) -> Result<Vec<RadialMode>, Error> {
    match &args.geometry.potential {
        None => spectrum.well_modes(),
        Some(path) => {
            let potential = load_potential(path)?;
            let config = ShootingConfig::for_radius(potential.radius());
            spectrum
                .entries()
                .iter()
                .map(|e| {
                    shooting_eigenfunction(&potential, spectrum.channel(), units, &config, e.n)
                })
                .collect()
        }
    }
}

fn cmd_audit(args: &AuditArgs) -> Result<u8, Error> {
    let units = args.units.units()?;
    let spectrum = match &args.spectrum {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
            spectrum_from_json(&text)?
        }
        None => solve_spectrum(&args.geometry, units, args.n)?,
    };
    let defaults = AuditTolerances::default();
    let tolerances = AuditTolerances {
        identity: args.identity_tol.unwrap_or(defaults.identity),
        verdict: resolve_tolerance(args.tol, defaults.verdict)?,
    };
    let modes = spectrum_modes(args, &spectrum, units)?;
    let reports = modes
        .iter()
        .map(|m| audit(m, units, tolerances))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match args.format {
        Format::Csv => audit_to_csv(&spectrum, &reports)?,
        Format::Json => audit_to_json(&spectrum, &reports)?,
    };
    emit(&text, args.output.as_deref())?;
    let all_pass = reports
        .iter()
        .all(|r| r.verdict == radialwell::AuditVerdict::Pass);
    Ok(if all_pass { 0 } else { 4 })
}

fn cmd_wavefn(args: &WavefnArgs) -> Result<u8, Error> {
    let units = args.units.units()?;
    if args.n == 0 {
        return Err(Error::invalid(
            "eigenstate indices start at n = 1".to_string(),
        ));
    }
    let mode = match &args.geometry.potential {
        Some(path) => {
            if args.geometry.family != BoundaryConditionFamily::Conventional {
                return Err(Error::invalid(
                    "shooting over a potential supports the conventional family only".to_string(),
                ));
            }
            let potential = load_potential(path)?;
            let config = ShootingConfig::for_radius(potential.radius());
            shooting_eigenfunction(
                &potential,
                QuantumChannel::new(args.geometry.l),
                units,
                &config,
                args.n,
            )?
        }
        None => {
            let spectrum = solve_spectrum(&args.geometry, units, args.n)?;
            let modes = spectrum.well_modes()?;
            modes[args.n as usize - 1].normalize()?
        }
    };
    let text = wavefn_to_csv(&mode, args.points)?;
    emit(&text, args.output.as_deref())?;
    Ok(0)
}

fn cmd_deltatest(args: &DeltaArgs) -> Result<u8, Error> {
    if args.l != 0 {
        return Err(Error::NonNormalizable { l: args.l });
    }
    let mode = RadialMode::analytic(
        args.k,
        QuantumChannel::new(0),
        args.radius,
        args.regular,
        args.irregular,
    )?;
    let ladder = default_epsilon_ladder(args.radius);
    let estimate = delta_weight(&mode, &ladder)?;
    emit(&delta_to_json(&estimate), args.output.as_deref())?;
    let tol = resolve_tolerance(args.tol, DELTA_SOURCE_TOLERANCE)?;
    Ok(if estimate.extrapolated_weight.abs() <= tol {
        0
    } else {
        5
    })
}
