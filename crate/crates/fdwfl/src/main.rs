//! Command-line front end: experiment simulation, PE checks, membership
//! queries, FRF/transient evaluation, and the case-study reproductions.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use num_complex::Complex64;

use fdwfl::bench::{self, io, ExperimentConfig};
use fdwfl::error::{Error, Result};
use fdwfl::frfeval::{estimate_noisy, evaluate_joint};
use fdwfl::lti::{IoSpectrumData, StateSpaceModel};
use fdwfl::spectra::{check_pe, Spectrum};
use fdwfl::tolerances::DEFAULT_TOL_REL;
use fdwfl::wfl::{membership_steady, membership_transient};

#[derive(Parser)]
#[command(
    name = "fdwfl",
    version,
    about = "Data-driven LTI analysis from frequency-domain data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multisine experiment on a model and write its spectra as CSV.
    Simulate(SimulateArgs),
    /// Test persistence of excitation of a spectrum CSV.
    PeCheck(PeCheckArgs),
    /// Decide whether a trajectory belongs to the system behind the data.
    Membership(MembershipArgs),
    /// Evaluate the FRF and transient at one complex frequency.
    Evaluate(EvaluateArgs),
    /// Reproduce the benchmark case studies.
    CaseStudy(CaseStudyArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment configuration JSON (flags below override its fields).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid size M.
    #[arg(long)]
    m: Option<usize>,
    /// Number of multisine periods.
    #[arg(long)]
    periods: Option<usize>,
    /// Linear output signal-to-noise ratio; omit for noise-free.
    #[arg(long)]
    snr: Option<f64>,
    /// Seed for every stochastic choice (required if absent from the config).
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn resolve(&self, base: ExperimentConfig) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => base,
        };
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if let Some(p) = self.periods {
            cfg.periods = p;
        }
        if let Some(snr) = self.snr {
            cfg.snr = Some(snr);
        }
        match (self.seed, self.config.is_some()) {
            (Some(seed), _) => cfg.seed = seed,
            (None, true) => {}
            (None, false) => {
                return Err(Error::InvalidArgument(
                    "--seed is required for stochastic runs without a config file".into(),
                ))
            }
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// State-space model JSON; defaults to the built-in benchmark.
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory for u_spectrum.csv, y_spectrum.csv, meta.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct PeCheckArgs {
    /// Spectrum CSV to test.
    #[arg(long)]
    spectrum: PathBuf,
    /// PE order L.
    #[arg(long)]
    order: usize,
    /// Relative rank tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL_REL)]
    tol_rel: f64,
    /// Append the grid phasor channel before testing.
    #[arg(long)]
    augmented: bool,
}

#[derive(Args)]
struct MembershipArgs {
    /// Directory holding u_spectrum.csv and y_spectrum.csv.
    #[arg(long)]
    data: PathBuf,
    /// Trajectory CSV to test.
    #[arg(long)]
    trajectory: PathBuf,
    /// Use the steady-state form (no phasor rows).
    #[arg(long)]
    steady: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Directory holding u_spectrum.csv and y_spectrum.csv.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    z_re: f64,
    #[arg(long, default_value_t = 0.0)]
    z_im: f64,
    /// Input direction, one "re,im" pair per channel, ';'-separated.
    #[arg(long, value_delimiter = ';')]
    uz: Vec<String>,
    /// Window parameter for exact evaluation.
    #[arg(long)]
    l0: Option<usize>,
    /// Use the noise-robust estimator with this model-order guess.
    #[arg(long)]
    nx: Option<usize>,
}

#[derive(Args)]
struct CaseStudyArgs {
    /// Noise-free reproduction (single record).
    #[arg(long, conflicts_with = "noisy")]
    noise_free: bool,
    /// Noisy reproduction (SNR 20, 100 periods by default).
    #[arg(long)]
    noisy: bool,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out_dir: PathBuf,
}

fn load_model(path: &Option<PathBuf>) -> Result<StateSpaceModel> {
    match path {
        Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
        None => Ok(bench::benchmark_model()),
    }
}

fn load_data(dir: &Path) -> Result<IoSpectrumData> {
    let u = io::read_spectrum_csv(&dir.join("u_spectrum.csv"))?;
    let y = io::read_spectrum_csv(&dir.join("y_spectrum.csv"))?;
    let x_path = dir.join("x_spectrum.csv");
    let x = if x_path.exists() {
        Some(io::read_spectrum_csv(&x_path)?)
    } else {
        None
    };
    IoSpectrumData::new(u, y, x)
}

fn parse_uz(raw: &[String], n_u: usize) -> Result<DVector<Complex64>> {
    if raw.is_empty() {
        return Ok(DVector::from_element(n_u, Complex64::new(1.0, 0.0)));
    }
    if raw.len() != n_u {
        return Err(Error::InvalidArgument(format!(
            "{} input directions given for {} channels",
            raw.len(),
            n_u
        )));
    }
    let mut uz = DVector::zeros(n_u);
    for (i, pair) in raw.iter().enumerate() {
        let (re, im) = pair
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("expected re,im pair, got {pair}")))?;
        uz[i] = Complex64::new(
            re.trim()
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("{e}")))?,
            im.trim()
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("{e}")))?,
        );
    }
    Ok(uz)
}

fn run_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let mut cfg = args
        .config
        .resolve(ExperimentConfig::noise_free_case_study(0))?;
    if args.model.is_some() {
        cfg.model_path = args.model.clone();
    }
    let model = load_model(&cfg.model_path)?;
    let (data, _) = bench::run_experiment(&model, &cfg)?;
    std::fs::create_dir_all(&args.out_dir)?;
    io::write_spectrum_csv(&args.out_dir.join("u_spectrum.csv"), data.input())?;
    io::write_spectrum_csv(&args.out_dir.join("y_spectrum.csv"), data.output())?;
    if let Some(x) = data.state() {
        io::write_spectrum_csv(&args.out_dir.join("x_spectrum.csv"), x)?;
    }
    let meta = serde_json::json!({
        "m": cfg.m,
        "periods": cfg.periods,
        "snr": cfg.snr,
        "seed": cfg.seed,
        "n_u": data.n_u(),
        "n_y": data.n_y(),
    });
    std::fs::write(
        args.out_dir.join("meta.json"),
        serde_json::to_string_pretty(&meta)?,
    )?;
    println!("{meta:#}");
    Ok(ExitCode::SUCCESS)
}

fn run_pe_check(args: &PeCheckArgs) -> Result<ExitCode> {
    let spectrum = io::read_spectrum_csv(&args.spectrum)?;
    let spectrum = if args.augmented {
        Spectrum::stack(&spectrum, &spectrum.grid().phasor_spectrum())?
    } else {
        spectrum
    };
    let report = check_pe(&spectrum, args.order, args.tol_rel);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn run_membership(args: &MembershipArgs) -> Result<ExitCode> {
    let data = load_data(&args.data)?;
    let traj = io::read_trajectory_csv(&args.trajectory)?;
    let solution = if args.steady {
        membership_steady(&data, &traj)?
    } else {
        membership_transient(&data, &traj)?
    };
    println!("{}", serde_json::to_string_pretty(&solution)?);
    Ok(ExitCode::SUCCESS)
}

fn run_evaluate(args: &EvaluateArgs) -> Result<ExitCode> {
    let data = load_data(&args.data)?;
    let z = Complex64::new(args.z_re, args.z_im);
    let uz = parse_uz(&args.uz, data.n_u())?;
    let result = match (args.nx, args.l0) {
        (Some(nx), _) => estimate_noisy(&data, z, &uz, nx)?,
        (None, Some(l0)) => evaluate_joint(&data, z, &uz, l0)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "pass --l0 for exact evaluation or --nx for the noise-robust path".into(),
            ))
        }
    };
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(ExitCode::SUCCESS)
}

fn run_case_study(args: &CaseStudyArgs) -> Result<ExitCode> {
    let report = if args.noisy {
        let cfg = args.config.resolve(ExperimentConfig::noisy_case_study(0))?;
        bench::run_noisy_case_study(&cfg, &args.out_dir)?
    } else if args.noise_free {
        let cfg = args
            .config
            .resolve(ExperimentConfig::noise_free_case_study(0))?;
        bench::run_noisefree_case_study(&cfg, &args.out_dir)?
    } else {
        return Err(Error::InvalidArgument(
            "pass --noise-free or --noisy".into(),
        ));
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "error bound {} exceeded near omega = {}",
            report.tolerance, report.worst_omega
        );
        Ok(ExitCode::FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<ExitCode> {
        match &cli.command {
            Command::Simulate(args) => run_simulate(args),
            Command::PeCheck(args) => run_pe_check(args),
            Command::Membership(args) => run_membership(args),
            Command::Evaluate(args) => run_evaluate(args),
            Command::CaseStudy(args) => run_case_study(args),
        }
    };
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
