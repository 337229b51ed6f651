//! Time loop: pressure solve, phase solve, then adaptive remeshing.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;

use log::debug;

use crate::error::{Error, Result};
use crate::fem::{FemSpace, SparseOperator};
use crate::field::NodalField;
use crate::mesh::{classify_zones, Mesh, NodeTransfer, Point, ZoneLabel};
use crate::params::{InitialShape, SimParams, ZoneTargets};
use crate::phase::{build_phase_system, phase_stability, projected_sor, vi_residual, SorOptions};
use crate::pressure::{build_pressure_system, pcg_solve, pressure_energy_balance, verify_max_principle, MaxPrincipleReport};
use crate::radial::extract_radius;

/// Refinement rounds allowed when building the initial mesh or remeshing.
pub const MAX_REFINE_ROUNDS: usize = 40;

const DIAGNOSTICS_KEPT: usize = 64;

fn sin_profile(r: f64, epsilon: f64) -> f64 {
    let half = epsilon * FRAC_PI_2;
    if r >= half {
        1.0
    } else if r <= -half {
        -1.0
    } else {
        (r / epsilon).sin()
    }
}

/// `sin(r/eps)` across the band `|r| < eps pi/2` with
/// `r(x) = 1 - sqrt(4 x1^2 + x2^2)`, saturated at `+-1` outside it.
pub fn ellipse_phase_profile(x: Point, epsilon: f64) -> f64 {
    sin_profile(1.0 - (4.0 * x[0] * x[0] + x[1] * x[1]).sqrt(), epsilon)
}

/// Same profile with `r(x) = R0 - |x|`.
pub fn circle_phase_profile(x: Point, r0: f64, epsilon: f64) -> f64 {
    sin_profile(r0 - x[0].hypot(x[1]), epsilon)
}

pub fn initial_phase(shape: InitialShape, epsilon: f64) -> impl Fn(Point) -> f64 {
    move |x| match shape {
        InitialShape::Ellipse => ellipse_phase_profile(x, epsilon),
        InitialShape::Circle { r0 } => circle_phase_profile(x, r0, epsilon),
    }
}

/// Per-step monitoring record.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub t: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub max_principle: MaxPrincipleReport,
    pub pcg_iterations: usize,
    pub sor_sweeps: usize,
    pub vi_residual: f64,
    /// Relative defect of the pressure energy identity.
    pub energy_defect: f64,
    /// Relative slack of the phase stability estimate (nonnegative when it holds).
    pub stability_slack: f64,
    /// Slack of the estimate without the two increment terms.
    pub literal_stability_slack: f64,
    /// `int (1 + phi)/2` after the step.
    pub tumour_area: f64,
    pub nodes: usize,
    pub elements: usize,
}

#[derive(Clone, Debug)]
struct Operators {
    space: FemSpace,
    stiffness: SparseOperator,
}

#[derive(Clone, Debug)]
pub struct SimState {
    pub t: f64,
    pub step: usize,
    pub mesh: Mesh,
    pub phi: NodalField,
    pub u: NodalField,
    /// `|u_h^0|_inf`, used by the maximum-principle bounds.
    pub u0_inf: f64,
    /// The most recent step diagnostics.
    pub diagnostics: VecDeque<StepDiagnostics>,
    ops: Option<Operators>,
}

impl SimState {
    fn operators(&mut self) -> &Operators {
        let stale = self.ops.as_ref().map_or(true, |o| o.space.version() != self.mesh.version());
        if stale {
            let space = FemSpace::new(&self.mesh);
            let stiffness = space.stiffness();
            self.ops = Some(Operators { space, stiffness });
        }
        self.ops.as_ref().unwrap()
    }

    pub fn tumour_area(&self) -> f64 {
        (0..self.mesh.num_elements())
            .map(|e| {
                let v = self.mesh.elements()[e];
                let mean = (self.phi[v[0]] + self.phi[v[1]] + self.phi[v[2]]) / 3.0;
                self.mesh.element_area(e) * 0.5 * (1.0 + mean)
            })
            .sum()
    }

    pub fn zones(&self, cutoff: f64) -> Vec<ZoneLabel> {
        classify_zones(&self.mesh, &self.phi, cutoff)
    }
}

fn target(zones: &ZoneTargets, z: ZoneLabel) -> f64 {
    match z {
        ZoneLabel::Fine => zones.fine,
        ZoneLabel::Medium => zones.medium,
        ZoneLabel::Coarse => zones.coarse,
    }
}

const SIZE_SLACK: f64 = 1.0 + 1e-9;

/// Zone of an element judged from the exact initial profile sampled at its
/// vertices, edge midpoints and centroid, so that a band passing between
/// vertices of a coarse element is not missed.
fn sampled_zone(mesh: &Mesh, e: usize, profile: &impl Fn(Point) -> f64, cutoff: f64) -> ZoneLabel {
    let [a, b, c] = mesh.element_points(e);
    let mid = |p: Point, q: Point| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
    let vals = [a, b, c, mid(a, b), mid(b, c), mid(c, a), centroid].map(profile);
    if vals.iter().all(|v| v.abs() < cutoff) {
        ZoneLabel::Fine
    } else if vals.iter().all(|&v| v == 1.0) {
        ZoneLabel::Medium
    } else if vals.iter().all(|&v| v == -1.0) {
        ZoneLabel::Coarse
    } else {
        ZoneLabel::Fine
    }
}

/// Builds the initial mesh, refined until every zone meets its size target,
/// and the interpolated initial data.
pub fn initialize(params: &SimParams) -> Result<SimState> {
    params.validate()?;
    let domain = params.domain;
    let n0 = ((domain.width() * std::f64::consts::SQRT_2 / params.zones.coarse) - 1e-9).ceil().max(1.0) as usize;
    let mut mesh = Mesh::generate_square_mesh(domain, n0)?;
    let profile = initial_phase(params.initial, params.model.epsilon);

    let mut converged = false;
    for _ in 0..MAX_REFINE_ROUNDS {
        let marked: Vec<usize> = (0..mesh.num_elements())
            .filter(|&e| {
                let z = sampled_zone(&mesh, e, &profile, params.zone_cutoff);
                mesh.element_diameter(e) > target(&params.zones, z) * SIZE_SLACK
            })
            .collect();
        if marked.is_empty() {
            converged = true;
            break;
        }
        mesh.bisect(&marked)?;
    }
    if !converged {
        return Err(Error::RefinementStalled { rounds: MAX_REFINE_ROUNDS });
    }

    let phi = NodalField::from_fn(&mesh, |x| profile(x).clamp(-1.0, 1.0));
    let u = NodalField::constant(&mesh, params.u0);
    debug!("initial mesh: {} nodes, {} elements", mesh.num_nodes(), mesh.num_elements());
    Ok(SimState {
        t: 0.0,
        step: 0,
        mesh,
        phi,
        u,
        u0_inf: params.u0.abs(),
        diagnostics: VecDeque::with_capacity(DIAGNOSTICS_KEPT),
        ops: None,
    })
}

/// Statistics of one remeshing pass.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RemeshStats {
    pub refine_rounds: usize,
    pub bisected: usize,
    pub coarsened: usize,
}

/// Marks by zone, bisects until every element meets its zone target, then
/// merges elements at most half their target. `phi` and every field in
/// `others` are carried along by linear interpolation.
pub fn remesh(
    mesh: &mut Mesh,
    phi: &mut NodalField,
    others: &mut [&mut NodalField],
    zones: &ZoneTargets,
    cutoff: f64,
) -> Result<RemeshStats> {
    let mut phi_v = std::mem::take(phi).into_values();
    let mut rest: Vec<Vec<f64>> = others.iter_mut().map(|f| std::mem::take(&mut **f).into_values()).collect();
    let mut stats = RemeshStats::default();
    let apply = |t: &NodeTransfer, phi_v: &mut Vec<f64>, rest: &mut Vec<Vec<f64>>| {
        t.apply(phi_v);
        rest.iter_mut().for_each(|v| t.apply(v));
    };

    let mut converged = false;
    for _ in 0..MAX_REFINE_ROUNDS {
        let labels = classify_zones(mesh, &phi_v, cutoff);
        let marked: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|&(e, &z)| mesh.element_diameter(e) > target(zones, z) * SIZE_SLACK)
            .map(|(e, _)| e)
            .collect();
        if marked.is_empty() {
            converged = true;
            break;
        }
        stats.refine_rounds += 1;
        stats.bisected += marked.len();
        let transfer = mesh.bisect(&marked)?;
        apply(&transfer, &mut phi_v, &mut rest);
    }
    if !converged {
        return Err(Error::RefinementStalled { rounds: MAX_REFINE_ROUNDS });
    }

    let labels = classify_zones(mesh, &phi_v, cutoff);
    let marked: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|&(e, &z)| mesh.element_diameter(e) <= 0.5 * target(zones, z) * SIZE_SLACK)
        .map(|(e, _)| e)
        .collect();
    let transfer = mesh.coarsen(&marked)?;
    if let NodeTransfer::Compacted { keep } = &transfer {
        stats.coarsened = phi_v.len() - keep.len();
    }
    apply(&transfer, &mut phi_v, &mut rest);

    // linear interpolation stays inside [-1, 1]; the clamp guards rounding
    phi_v.iter_mut().for_each(|v| *v = v.clamp(-1.0, 1.0));
    *phi = NodalField::new(mesh, phi_v)?;
    for (f, v) in others.iter_mut().zip(rest) {
        **f = NodalField::new(mesh, v)?;
    }
    Ok(stats)
}

/// Advances one time step: pressure, then phase, then remeshing.
pub fn step(state: &mut SimState, params: &SimParams) -> Result<StepDiagnostics> {
    let model = params.model;
    let n_next = state.step + 1;
    let t_next = n_next as f64 * model.dt;
    let solver = params.solver;
    let (phi_n, u_n) = (state.phi.clone(), state.u.clone());
    let u0_inf = state.u0_inf;
    let ops = state.operators();

    let pressure = build_pressure_system(&ops.space, &phi_n, &u_n, &model);
    let pcg = pcg_solve(&pressure.matrix, &pressure.rhs, &u_n, solver.pcg_tol, solver.pcg_max_iter)?;
    let u_next = pcg.solution;
    let max_principle = verify_max_principle(&u_next, u0_inf, t_next, &model);
    if let Some((node, value)) = max_principle.violation {
        return Err(Error::MaxPrinciple {
            step: n_next,
            node,
            value,
            lower: max_principle.lower,
            upper: max_principle.upper,
        });
    }
    let energy = pressure_energy_balance(&ops.space, &phi_n, &u_n, &u_next, &model);

    let phase = build_phase_system(&ops.space, &ops.stiffness, &phi_n, &u_next, &model)?;
    let sor = projected_sor(
        &phase,
        &phi_n,
        &SorOptions {
            omega: solver.sor_omega,
            tol: solver.sor_tol,
            max_iter: solver.sor_max_iter,
            order: solver.sweep_order,
        },
    )?;
    let residual = vi_residual(&phase, &sor.solution);
    if residual > solver.vi_tol {
        return Err(Error::ViResidual { step: n_next, residual, limit: solver.vi_tol });
    }
    let stability = phase_stability(&ops.space, &ops.stiffness, &phi_n, &sor.solution, &u_next, &model);

    state.phi = NodalField::new(&state.mesh, sor.solution)?;
    state.u = NodalField::new(&state.mesh, u_next)?;
    state.step = n_next;
    state.t = t_next;
    if n_next % params.remesh_every == 0 {
        let stats = remesh(&mut state.mesh, &mut state.phi, &mut [&mut state.u], &params.zones, params.zone_cutoff)?;
        if stats != RemeshStats::default() {
            debug!("step {n_next}: remesh {stats:?}");
        }
    }

    let diag = StepDiagnostics {
        step: n_next,
        t: t_next,
        u_min: max_principle.min,
        u_max: max_principle.max,
        max_principle,
        pcg_iterations: pcg.iterations,
        sor_sweeps: sor.sweeps,
        vi_residual: residual,
        energy_defect: energy.relative_defect(),
        stability_slack: stability.slack(),
        literal_stability_slack: stability.literal_slack(),
        tumour_area: state.tumour_area(),
        nodes: state.mesh.num_nodes(),
        elements: state.mesh.num_elements(),
    };
    if state.diagnostics.len() == DIAGNOSTICS_KEPT {
        state.diagnostics.pop_front();
    }
    state.diagnostics.push_back(diag.clone());
    Ok(diag)
}

/// One row of the sampled time series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    /// Zero crossing of `phi_h` on the positive `x1` axis, if any.
    pub radius: Option<f64>,
    pub u_min: f64,
    pub u_max: f64,
    pub energy_defect: f64,
    pub stability_slack: f64,
    pub vi_residual: f64,
    pub tumour_area: f64,
    pub nodes: usize,
}

/// Callbacks from [`run`]. All methods default to no-ops.
pub trait Observer {
    fn on_step(&mut self, _state: &SimState, _diag: &StepDiagnostics) -> Result<()> {
        Ok(())
    }

    fn on_snapshot(&mut self, _state: &SimState) -> Result<()> {
        Ok(())
    }

    fn on_sample(&mut self, _row: &SeriesRow) -> Result<()> {
        Ok(())
    }
}

/// Observer that ignores everything.
pub struct NoObserver;

impl Observer for NoObserver {}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub state: SimState,
    pub series: Vec<SeriesRow>,
    pub snapshots: usize,
}

fn sample_row(state: &SimState, diag: Option<&StepDiagnostics>, spacing: f64) -> SeriesRow {
    SeriesRow {
        t: state.t,
        radius: extract_radius(&state.mesh, &state.phi, spacing).ok(),
        u_min: state.u.min(),
        u_max: state.u.max(),
        energy_defect: diag.map_or(0.0, |d| d.energy_defect),
        stability_slack: diag.map_or(0.0, |d| d.stability_slack),
        vi_residual: diag.map_or(0.0, |d| d.vi_residual),
        tumour_area: state.tumour_area(),
        nodes: state.mesh.num_nodes(),
    }
}

/// Runs `N = T/dt` steps from the initial state. Snapshots go out at step 0,
/// every `snapshot_cadence` steps and at the final step; time-series rows at
/// the steps nearest to multiples of `sample_interval`.
pub fn run(params: &SimParams, observer: &mut dyn Observer) -> Result<RunOutput> {
    let mut state = initialize(params)?;
    let n_steps = params.num_steps();
    let cadence = params.snapshot_cadence();
    let spacing = 0.5 * params.zones.fine;
    let dt = params.model.dt;

    let mut series = Vec::new();
    let row = sample_row(&state, None, spacing);
    observer.on_sample(&row)?;
    series.push(row);
    observer.on_snapshot(&state)?;
    let mut snapshots = 1;
    let mut last_sample = 0_i64;

    for n in 1..=n_steps {
        let diag = step(&mut state, params)?;
        observer.on_step(&state, &diag)?;
        let k = (state.t / params.sample_interval).round() as i64;
        if k > last_sample && (state.t - k as f64 * params.sample_interval).abs() <= 0.5 * dt * (1.0 + 1e-9) {
            last_sample = k;
            let row = sample_row(&state, Some(&diag), spacing);
            observer.on_sample(&row)?;
            series.push(row);
        }
        if n % cadence == 0 || n == n_steps {
            observer.on_snapshot(&state)?;
            snapshots += 1;
        }
    }
    Ok(RunOutput { state, series, snapshots })
}
