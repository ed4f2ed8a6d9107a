use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use qcorrsim_cli::checks::run_checks;
use qcorrsim_cli::config::{
    ChannelChoice, GridConfig, InitialState, RunManifest, SimulationConfig,
};
use qcorrsim_cli::output::{
    atomic_write, clamp_tiny_negative, parse_trajectory_csv, trajectory_to_csv,
};
use qcorrsim_cli::svg::trajectory_svg;
use qcorrsim_core::changepoint::detect_in_series;
use qcorrsim_core::*;

#[derive(Parser)]
#[command(
    name = "qcorrsim",
    version,
    about = "Two-qubit decoherence and correlation-dynamics simulator"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Evolve an initial state under the selected noise channels and write a
    /// trajectory CSV, a run manifest and optionally an SVG plot.
    Simulate(SimulateArgs),
    /// Evaluate mutual information, classical correlation and discord of a
    /// single state and print them as JSON.
    Discord(DiscordArgs),
    /// Run sudden-change detection on a trajectory CSV.
    Detect(DetectArgs),
    /// Run the built-in consistency checks and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Simulation config JSON; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bell-diagonal coefficient c_x of the initial state.
    #[arg(long, requires = "cy", requires = "cz", conflicts_with = "state_file")]
    cx: Option<f64>,
    #[arg(long, requires = "cx")]
    cy: Option<f64>,
    #[arg(long, requires = "cx")]
    cz: Option<f64>,
    /// Initial deviation matrix from a JSON state file instead.
    #[arg(long)]
    state_file: Option<PathBuf>,
    #[arg(long)]
    t1_a: Option<f64>,
    #[arg(long)]
    t1_b: Option<f64>,
    #[arg(long)]
    t2_a: Option<f64>,
    #[arg(long)]
    t2_b: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Noise channels: pd | gad | both.
    #[arg(long)]
    channels: Option<String>,
    #[arg(long)]
    j_coupling: Option<f64>,
    /// Number of sampling steps of length 1/(4J) (grid has m-max + 1 points).
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    residual_amplitude: Option<f64>,
    #[arg(long)]
    grid_theta: Option<usize>,
    #[arg(long)]
    grid_phi: Option<usize>,
    #[arg(long)]
    refine_iters: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_manifest: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Args)]
struct DiscordArgs {
    /// Deviation matrix JSON file.
    #[arg(long, conflicts_with = "cx")]
    state_file: Option<PathBuf>,
    #[arg(long, requires = "cy", requires = "cz")]
    cx: Option<f64>,
    #[arg(long, requires = "cx")]
    cy: Option<f64>,
    #[arg(long, requires = "cx")]
    cz: Option<f64>,
    #[arg(long)]
    grid_theta: Option<usize>,
    #[arg(long)]
    grid_phi: Option<usize>,
    #[arg(long)]
    refine_iters: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct DetectArgs {
    /// Trajectory CSV produced by `simulate`.
    trajectory: PathBuf,
    /// Which curve to inspect: classical | quantum | mutual-info.
    #[arg(long, default_value = "classical")]
    curve: String,
}

#[derive(Args)]
struct ValidateArgs {
    /// Run a reduced subset of random draws.
    #[arg(long)]
    quick: bool,
    /// Deliberately damage one Kraus operator (negative control).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// Errors split by exit code: 2 for configuration/usage, 1 for runtime.
enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Discord(args) => cmd_discord(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn merge_simulate_config(args: &SimulateArgs) -> Result<SimulationConfig> {
    let mut cfg = match &args.config {
        Some(path) => SimulationConfig::from_file(path)?,
        None => SimulationConfig::default(),
    };
    if let (Some(cx), Some(cy), Some(cz)) = (args.cx, args.cy, args.cz) {
        cfg.initial = InitialState::Bell {
            c_x: cx,
            c_y: cy,
            c_z: cz,
        };
    }
    if let Some(path) = &args.state_file {
        cfg.initial = InitialState::StateFile(path.clone());
    }
    if let Some(v) = args.t1_a {
        cfg.relaxation.t1_a = v;
    }
    if let Some(v) = args.t1_b {
        cfg.relaxation.t1_b = v;
    }
    if let Some(v) = args.t2_a {
        cfg.relaxation.t2_a = v;
    }
    if let Some(v) = args.t2_b {
        cfg.relaxation.t2_b = v;
    }
    if let Some(v) = args.epsilon {
        cfg.relaxation.epsilon = v;
    }
    if let Some(choice) = &args.channels {
        cfg.channels = ChannelChoice::parse(choice)?;
    }
    if args.j_coupling.is_some() || args.m_max.is_some() {
        let (mut j, mut m) = match cfg.grid {
            GridConfig::Coupling { j_coupling, m_max } => (j_coupling, m_max),
            GridConfig::Times(_) => (215.1, 250),
        };
        if let Some(v) = args.j_coupling {
            j = v;
        }
        if let Some(v) = args.m_max {
            m = v;
        }
        cfg.grid = GridConfig::Coupling {
            j_coupling: j,
            m_max: m,
        };
    }
    if let Some(v) = args.residual_amplitude {
        cfg.residual_amplitude = v;
    }
    if let Some(v) = args.grid_theta {
        cfg.optimizer.grid_theta = v;
    }
    if let Some(v) = args.grid_phi {
        cfg.optimizer.grid_phi = v;
    }
    if let Some(v) = args.refine_iters {
        cfg.optimizer.refine_iters = v;
    }
    if let Some(v) = args.tolerance {
        cfg.optimizer.tolerance = v;
    }
    if let Some(p) = &args.out_csv {
        cfg.output.csv = Some(p.clone());
    }
    if let Some(p) = &args.out_manifest {
        cfg.output.manifest = Some(p.clone());
    }
    if let Some(p) = &args.out_svg {
        cfg.output.svg = Some(p.clone());
    }
    Ok(cfg)
}

fn load_deviation(path: &Path) -> Result<DeviationMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read state file {}", path.display()))?;
    let json: MatrixJson = serde_json::from_str(&text)
        .with_context(|| format!("state file {} is not valid", path.display()))?;
    DeviationMatrix::from_json(&json).with_context(|| {
        format!(
            "state file {} is not a valid deviation matrix",
            path.display()
        )
    })
}

fn initial_state(cfg: &SimulationConfig) -> Result<DeviationMatrix> {
    match &cfg.initial {
        InitialState::Bell { .. } => {
            let coeffs = cfg.bell_coeffs()?.expect("bell variant checked");
            Ok(bell_diagonal_deviation(&coeffs))
        }
        InitialState::StateFile(path) => load_deviation(path),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = merge_simulate_config(&args).map_err(usage)?;
    cfg.validate().map_err(usage)?;

    let params = cfg.relaxation_params().map_err(usage)?;
    let warnings = params.physicality_warnings();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let settings = cfg.optimizer_settings().map_err(usage)?;
    let grid = cfg.time_grid().map_err(usage)?;
    let mut delta0 = initial_state(&cfg).map_err(usage)?;
    if cfg.residual_amplitude > 0.0 {
        delta0 = inject_residual_coherence(&delta0, cfg.residual_amplitude);
    }
    let sel = cfg.channels.to_selection();

    let traj = match cfg.j_coupling() {
        Some(j) => {
            let nmr = NmrSystemParams::new(j, params, cfg.residual_amplitude).map_err(usage)?;
            evolve_trajectory_nmr(&delta0, &nmr, &grid, sel, &settings)
        }
        None => evolve_trajectory(&delta0, &params, &grid, sel, &settings),
    }
    .map_err(runtime)?;

    let csv_path = cfg
        .output
        .csv
        .clone()
        .unwrap_or_else(|| PathBuf::from("trajectory.csv"));
    let manifest_path = cfg
        .output
        .manifest
        .clone()
        .unwrap_or_else(|| PathBuf::from("manifest.json"));

    let csv = trajectory_to_csv(&traj);
    atomic_write(&csv_path, &csv).map_err(runtime)?;

    let t_star = if traj.len() >= 8 {
        detect_sudden_change(&traj, CurveKind::Classical)
            .ok()
            .and_then(|det| det.report().map(|r| r.t_star))
    } else {
        None
    };

    let manifest = RunManifest {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_seconds: start.elapsed().as_secs_f64(),
        t_star,
        warnings,
    };
    let manifest_text = serde_json::to_string_pretty(&manifest).map_err(runtime)?;
    atomic_write(&manifest_path, &manifest_text).map_err(runtime)?;

    if let Some(svg_path) = &cfg.output.svg {
        let table = parse_trajectory_csv(&csv).map_err(runtime)?;
        atomic_write(svg_path, &trajectory_svg(&table)).map_err(runtime)?;
    }

    println!(
        "wrote {} rows to {}{}",
        traj.len(),
        csv_path.display(),
        match t_star {
            Some(t) => format!(", sudden change detected at t* = {t:.6} s"),
            None => String::new(),
        }
    );
    Ok(())
}

fn cmd_discord(args: DiscordArgs) -> Result<(), CliError> {
    let delta = if let Some(path) = &args.state_file {
        load_deviation(path).map_err(usage)?
    } else if let (Some(cx), Some(cy), Some(cz)) = (args.cx, args.cy, args.cz) {
        let coeffs = BellDiagonalCoeffs::new(cx, cy, cz).map_err(usage)?;
        bell_diagonal_deviation(&coeffs)
    } else {
        return Err(usage(anyhow!(
            "provide either --state-file or all of --cx --cy --cz"
        )));
    };
    let defaults = OptimizerSettings::default();
    let settings = OptimizerSettings::new(
        args.grid_theta.unwrap_or(defaults.grid_theta),
        args.grid_phi.unwrap_or(defaults.grid_phi),
        args.refine_iters.unwrap_or(defaults.refine_iters),
        args.tolerance.unwrap_or(defaults.tolerance),
    )
    .map_err(usage)?;

    let res = quantum_discord(&delta, &settings);
    let (theta_a, phi_a, theta_b, phi_b) = res.maximizer.angles();
    let out = serde_json::json!({
        "mutual_info": clamp_tiny_negative(res.values.mutual_info),
        "classical": clamp_tiny_negative(res.values.classical),
        "quantum": clamp_tiny_negative(res.values.quantum),
        "converged": res.converged,
        "maximizer": {
            "theta_a": theta_a,
            "phi_a": phi_a,
            "theta_b": theta_b,
            "phi_b": phi_b,
        },
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(runtime)?);
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.trajectory)
        .with_context(|| format!("cannot read {}", args.trajectory.display()))
        .map_err(usage)?;
    let table = parse_trajectory_csv(&text).map_err(usage)?;
    let series = table
        .curve(&args.curve)
        .ok_or_else(|| usage(anyhow!("unknown curve '{}'", args.curve)))?;
    if table.len() < 8 {
        return Err(usage(anyhow!(
            "change detection needs at least 8 rows, file has {}",
            table.len()
        )));
    }
    let detection = detect_in_series(&table.t, series).map_err(usage)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&detection).map_err(runtime)?
    );
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let results = run_checks(args.quick, args.inject_fault);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut all_passed = true;
    for r in &results {
        all_passed &= r.passed;
        println!(
            "{} {:width$}  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail,
        );
    }
    if all_passed {
        println!("all {} checks passed", results.len());
        Ok(())
    } else {
        Err(runtime(anyhow!("one or more validation checks failed")))
    }
}
