use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{error, info};

use tumour_core::benchmark::{run_radial, sweep};
use tumour_core::config::{Mode, RunConfig, SCHEMA};
use tumour_core::io::{write_mesh_vtk, write_radial_csv, write_table_csv, write_vtk_file, SeriesWriter};
use tumour_core::mesh::{Mesh, Rect};
use tumour_core::radial::{integrate_radius, steady_radius, OdeTolerances, RadialParams};
use tumour_core::simulation::{initialize, step, Observer, SeriesRow, SimState, StepDiagnostics};

#[derive(Parser)]
#[command(name = "tumour", version, about = "Adaptive finite element solver for diffuse-interface tumour growth", after_help = SCHEMA)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-dependent simulation writing VTK snapshots and a CSV time series.
    Run(ConfigArg),
    /// Circular tumour compared with the radial ODE; prints E_r.
    Radial(ConfigArg),
    /// Radius ODE alone.
    Oracle(OracleArgs),
    /// Radial benchmark over the sweep.* axes; writes a table of E_r.
    Sweep(ConfigArg),
    /// Builds a uniform mesh and reports its angles and conformity.
    CheckMesh(CheckMeshArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// key = value configuration file
    config: PathBuf,
    /// Overrides `output_dir`
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
    #[arg(long = "T", default_value_t = 0.5)]
    t_final: f64,
    /// Output interval
    #[arg(long, default_value_t = 0.01)]
    interval: f64,
    /// Writes `t,R` rows here instead of stdout
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CheckMeshArgs {
    /// Side length of the square `(0, L)^2`
    #[arg(long, default_value_t = 1.0)]
    side: f64,
    /// Cells per side
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Uniform bisection rounds applied afterwards
    #[arg(long, default_value_t = 0)]
    refine: usize,
    /// Writes the mesh as VTK
    #[arg(long)]
    vtk: Option<PathBuf>,
}

fn load(arg: &ConfigArg, expected: Mode) -> Result<RunConfig> {
    let text = fs::read_to_string(&arg.config).with_context(|| format!("reading {}", arg.config.display()))?;
    let mut config = RunConfig::parse(&text).with_context(|| format!("in {}", arg.config.display()))?;
    if config.mode != expected && !(expected == Mode::Radial && config.mode == Mode::Run) {
        info!("config mode {:?} overridden by subcommand", config.mode);
    }
    config.mode = expected;
    if let Some(out) = &arg.output {
        config.output_dir = out.clone();
    }
    config.validate()?;
    fs::create_dir_all(&config.output_dir)?;
    fs::write(config.output_dir.join("config.txt"), config.to_config_string())?;
    Ok(config)
}

struct FileObserver {
    dir: PathBuf,
    mask: bool,
    series: SeriesWriter<BufWriter<File>>,
    written: usize,
}

impl Observer for FileObserver {
    fn on_step(&mut self, state: &SimState, d: &StepDiagnostics) -> tumour_core::Result<()> {
        log::debug!("step {} t={:.6} nodes={} pcg={} sor={}", d.step, state.t, d.nodes, d.pcg_iterations, d.sor_sweeps);
        Ok(())
    }

    fn on_snapshot(&mut self, state: &SimState) -> tumour_core::Result<()> {
        let path = self.dir.join(format!("snapshot_{:06}.vtk", state.step));
        let zones = state.zones(0.99);
        write_vtk_file(&path, &state.mesh, &state.phi, &state.u, &zones, self.mask, &format!("t = {}", state.t))?;
        self.written += 1;
        Ok(())
    }

    fn on_sample(&mut self, row: &SeriesRow) -> tumour_core::Result<()> {
        self.series.write_row(row)
    }
}

fn dump_state(dir: &Path, state: &SimState) {
    let path = dir.join(format!("failure_{:06}.vtk", state.step));
    let zones = state.zones(0.99);
    match write_vtk_file(&path, &state.mesh, &state.phi, &state.u, &zones, false, "state before failure") {
        Ok(()) => error!("state before the failing step written to {}", path.display()),
        Err(e) => error!("could not write {}: {e}", path.display()),
    }
}

fn cmd_run(arg: &ConfigArg) -> Result<()> {
    let config = load(arg, Mode::Run)?;
    let params = config.sim_params();
    let dir = config.output_dir.clone();
    let mut obs = FileObserver {
        dir: dir.clone(),
        mask: config.mask_pressure,
        series: SeriesWriter::new(BufWriter::new(File::create(dir.join("series.csv"))?))?,
        written: 0,
    };
    // Drives the loop by hand so the last good state can be dumped on failure.
    let mut state = initialize(&params)?;
    let n_steps = params.num_steps();
    let cadence = params.snapshot_cadence();
    let spacing = 0.5 * params.zones.fine;
    obs.on_sample(&row(&state, None, spacing))?;
    obs.on_snapshot(&state)?;
    let mut last_sample = 0_i64;
    for n in 1..=n_steps {
        let before = state.clone();
        let diag = match step(&mut state, &params) {
            Ok(d) => d,
            Err(e) => {
                dump_state(&dir, &before);
                obs.series.flush()?;
                return Err(e.into());
            }
        };
        obs.on_step(&state, &diag)?;
        let k = (state.t / params.sample_interval).round() as i64;
        if k > last_sample && (state.t - k as f64 * params.sample_interval).abs() <= 0.5 * params.model.dt * (1.0 + 1e-9) {
            last_sample = k;
            obs.on_sample(&row(&state, Some(&diag), spacing))?;
        }
        if n % cadence == 0 || n == n_steps {
            obs.on_snapshot(&state)?;
            info!("t = {:.4}: {} nodes, area {:.6}", state.t, state.mesh.num_nodes(), state.tumour_area());
        }
    }
    obs.series.flush()?;
    println!("{} steps, {} snapshots written to {}", n_steps, obs.written, dir.display());
    Ok(())
}

fn row(state: &SimState, d: Option<&StepDiagnostics>, spacing: f64) -> SeriesRow {
    SeriesRow {
        t: state.t,
        radius: tumour_core::radial::extract_radius(&state.mesh, &state.phi, spacing).ok(),
        u_min: state.u.min(),
        u_max: state.u.max(),
        energy_defect: d.map_or(0.0, |d| d.energy_defect),
        stability_slack: d.map_or(0.0, |d| d.stability_slack),
        vi_residual: d.map_or(0.0, |d| d.vi_residual),
        tumour_area: state.tumour_area(),
        nodes: state.mesh.num_nodes(),
    }
}

fn cmd_radial(arg: &ConfigArg) -> Result<()> {
    let config = load(arg, Mode::Radial)?;
    let r = run_radial(&config.sim_params(), config.radius_method)?;
    let mut out = BufWriter::new(File::create(config.output_dir.join("radial.csv"))?);
    write_radial_csv(&mut out, &r.times, &r.simulated, &r.oracle)?;
    println!("E_r = {:.6e}", r.e_r);
    println!("final radius = {:.6}", r.final_radius);
    println!(
        "worst: vi_residual {:.3e}, energy defect {:.3e}, stability slack {:.3e}, bound margin {:.3e}",
        r.worst.max_vi_residual, r.worst.max_energy_defect, r.worst.min_stability_slack, r.worst.min_bound_margin
    );
    Ok(())
}

fn cmd_oracle(a: &OracleArgs) -> Result<()> {
    if !(a.interval > 0.0) {
        bail!("--interval must be positive");
    }
    let p = RadialParams { q: a.q, alpha: a.alpha, beta: a.beta };
    let count = (a.t_final / a.interval + 1e-9).floor() as usize + 1;
    let times = tumour_core::radial::sample_times(a.interval, count);
    let sol = integrate_radius(a.r0, &p, &times, OdeTolerances::default())?;
    let rows: String = sol.times.iter().zip(&sol.radii).map(|(t, r)| format!("{t},{r}\n")).collect();
    match &a.csv {
        Some(path) => fs::write(path, format!("t,R\n{rows}"))?,
        None => print!("t,R\n{rows}"),
    }
    if let Some(t) = sol.vanished_at {
        eprintln!("tumour vanishes at t = {t}");
    }
    if let Some(r) = sol.radii.last() {
        eprintln!("R(T) = {r:.9}");
    }
    match steady_radius(&p) {
        Some(r) => eprintln!("R* = {r:.9}"),
        None => eprintln!("no steady radius (Q^2 < 2 beta)"),
    }
    Ok(())
}

fn cmd_sweep(arg: &ConfigArg) -> Result<()> {
    let config = load(arg, Mode::Sweep)?;
    let table = sweep(&config)?;
    let columns: Vec<String> = table.columns.iter().map(|c| format!("{}={c}", table.column_axis.name())).collect();
    let corner = table.row_axes.iter().map(|a| a.name()).collect::<Vec<_>>().join(" ");
    let rows = table.e_r_rows();
    let mut out = BufWriter::new(File::create(config.output_dir.join("sweep.csv"))?);
    write_table_csv(&mut out, &corner, &columns, &rows)?;
    out.flush()?;
    write_table_csv(&mut std::io::stdout(), &corner, &columns, &rows)?;
    for c in &table.cells {
        if let Err(e) = &c.result {
            error!("cell failed: {e}");
        }
    }
    Ok(())
}

fn cmd_check_mesh(a: &CheckMeshArgs) -> Result<()> {
    let mut mesh = Mesh::generate_square_mesh(Rect::quadrant(a.side)?, a.n)?;
    for _ in 0..a.refine {
        let all: Vec<usize> = (0..mesh.num_elements()).collect();
        mesh.bisect(&all)?;
    }
    let report = mesh.check_nonobtuse();
    println!("nodes {} elements {}", mesh.num_nodes(), mesh.num_elements());
    println!("max diameter {:.6}", mesh.max_diameter());
    println!("largest angle {:.6} deg, nonobtuse {}", report.worst_angle_deg, report.nonobtuse);
    println!("conforming {}", mesh.check_conforming());
    if let Some(path) = &a.vtk {
        let mut out = BufWriter::new(File::create(path)?);
        write_mesh_vtk(&mut out, &mesh, "check-mesh")?;
    }
    if !report.nonobtuse || !mesh.check_conforming() {
        bail!("mesh check failed");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Radial(a) => cmd_radial(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::CheckMesh(a) => cmd_check_mesh(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
