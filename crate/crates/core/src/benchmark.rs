//! Radially symmetric benchmark runs and parameter sweeps.

use log::info;

use crate::config::{RadiusMethod, RunConfig, SweepAxis};
use crate::error::{Error, Result};
use crate::params::{InitialShape, SimParams};
use crate::radial::{area_radius, benchmark_sample_times, extract_radius, integrate_radius, radial_error, OdeTolerances, RadialParams};
use crate::simulation::{run, Observer, SimState, StepDiagnostics};

/// Extremes of the per-step diagnostics over a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorstDiagnostics {
    pub steps: usize,
    pub max_vi_residual: f64,
    pub max_energy_defect: f64,
    pub min_stability_slack: f64,
    pub min_literal_stability_slack: f64,
    pub u_min: f64,
    pub u_max: f64,
    /// Smallest margin to the maximum-principle bounds (negative if violated).
    pub min_bound_margin: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub max_nodes: usize,
}

impl Default for WorstDiagnostics {
    fn default() -> Self {
        Self {
            steps: 0,
            max_vi_residual: 0.0,
            max_energy_defect: 0.0,
            min_stability_slack: f64::INFINITY,
            min_literal_stability_slack: f64::INFINITY,
            u_min: f64::INFINITY,
            u_max: f64::NEG_INFINITY,
            min_bound_margin: f64::INFINITY,
            phi_min: f64::INFINITY,
            phi_max: f64::NEG_INFINITY,
            max_nodes: 0,
        }
    }
}

impl WorstDiagnostics {
    pub fn record(&mut self, state: &SimState, d: &StepDiagnostics) {
        self.steps += 1;
        self.max_vi_residual = self.max_vi_residual.max(d.vi_residual);
        self.max_energy_defect = self.max_energy_defect.max(d.energy_defect);
        self.min_stability_slack = self.min_stability_slack.min(d.stability_slack);
        self.min_literal_stability_slack = self.min_literal_stability_slack.min(d.literal_stability_slack);
        self.u_min = self.u_min.min(d.u_min);
        self.u_max = self.u_max.max(d.u_max);
        let mp = &d.max_principle;
        self.min_bound_margin = self.min_bound_margin.min(mp.min - mp.lower).min(mp.upper - mp.max);
        self.phi_min = self.phi_min.min(state.phi.min());
        self.phi_max = self.phi_max.max(state.phi.max());
        self.max_nodes = self.max_nodes.max(d.nodes);
    }
}

/// Result of one radial benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialRun {
    pub times: Vec<f64>,
    /// `R_h(t_n)`; NaN where no radius could be extracted.
    pub simulated: Vec<f64>,
    pub oracle: Vec<f64>,
    pub e_r: f64,
    pub worst: WorstDiagnostics,
    pub final_radius: f64,
}

struct RadiusTrace {
    method: RadiusMethod,
    spacing: f64,
    history: Vec<(f64, f64)>,
    worst: WorstDiagnostics,
}

impl RadiusTrace {
    fn measure(&self, state: &SimState) -> f64 {
        match self.method {
            RadiusMethod::Ray => extract_radius(&state.mesh, &state.phi, self.spacing).unwrap_or(f64::NAN),
            RadiusMethod::Area => area_radius(&state.mesh, &state.phi),
        }
    }

    /// Linear interpolation of the recorded radius at `t`.
    fn at(&self, t: f64) -> f64 {
        let h = &self.history;
        let k = h.partition_point(|&(s, _)| s < t);
        if k == 0 {
            return h.first().map_or(f64::NAN, |p| p.1);
        }
        if k == h.len() {
            let (s, r) = h[k - 1];
            return if (t - s).abs() <= 1e-9 * t.max(1.0) { r } else { f64::NAN };
        }
        let (s0, r0) = h[k - 1];
        let (s1, r1) = h[k];
        if s1 == s0 {
            return r1;
        }
        r0 + (r1 - r0) * (t - s0) / (s1 - s0)
    }
}

impl Observer for RadiusTrace {
    fn on_step(&mut self, state: &SimState, diag: &StepDiagnostics) -> Result<()> {
        self.worst.record(state, diag);
        self.history.push((state.t, self.measure(state)));
        Ok(())
    }

    fn on_snapshot(&mut self, state: &SimState) -> Result<()> {
        if state.step == 0 {
            self.history.push((0.0, self.measure(state)));
            self.worst.phi_min = state.phi.min();
            self.worst.phi_max = state.phi.max();
        }
        Ok(())
    }
}

/// Runs a circular-tumour simulation and compares its radius with the ODE
/// solution at `times` (all within `[0, T]`).
pub fn run_radial_at(params: &SimParams, method: RadiusMethod, times: &[f64]) -> Result<RadialRun> {
    let InitialShape::Circle { r0 } = params.initial else {
        return Err(Error::Param { key: "initial".into(), reason: "radial benchmark needs a circle".into() });
    };
    let m = params.model;
    let oracle = integrate_radius(r0, &RadialParams { q: m.q, alpha: m.alpha, beta: m.beta }, times, OdeTolerances::default())?;
    let mut trace = RadiusTrace { method, spacing: 0.5 * params.zones.fine, history: Vec::new(), worst: WorstDiagnostics::default() };
    run(params, &mut trace)?;
    let simulated: Vec<f64> = oracle.times.iter().map(|&t| trace.at(t)).collect();
    let report = radial_error(&simulated, &oracle.radii)?;
    let final_radius = trace.history.last().map_or(f64::NAN, |p| p.1);
    Ok(RadialRun {
        times: oracle.times,
        simulated,
        oracle: oracle.radii,
        e_r: report.e_r,
        worst: trace.worst,
        final_radius,
    })
}

/// Radial benchmark sampled at `t_n = 0.01 n`, `n = 0..=50`.
pub fn run_radial(params: &SimParams, method: RadiusMethod) -> Result<RadialRun> {
    run_radial_at(params, method, &benchmark_sample_times())
}

/// One cell of a sweep.
#[derive(Clone, Debug)]
pub struct SweepCell {
    pub config: RunConfig,
    pub result: std::result::Result<RadialRun, String>,
}

/// Sweep results laid out with the last axis as columns.
#[derive(Clone, Debug)]
pub struct SweepTable {
    pub row_axes: Vec<SweepAxis>,
    pub column_axis: SweepAxis,
    pub columns: Vec<f64>,
    pub row_labels: Vec<String>,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    /// `E_r` per row and column; `None` for failed cells.
    pub fn e_r_rows(&self) -> Vec<(String, Vec<Option<f64>>)> {
        let w = self.columns.len();
        self.row_labels
            .iter()
            .enumerate()
            .map(|(i, label)| {
                let vals = self.cells[i * w..(i + 1) * w].iter().map(|c| c.result.as_ref().ok().map(|r| r.e_r)).collect();
                (label.clone(), vals)
            })
            .collect()
    }
}

/// Runs the radial benchmark for every cell of the configured sweep.
pub fn sweep(config: &RunConfig) -> Result<SweepTable> {
    let Some(((column_axis, columns), rest)) = config.sweep.split_last() else {
        return Err(Error::Param { key: "sweep".into(), reason: "no sweep.* axis given".into() });
    };
    let mut cells = Vec::new();
    for cell in config.sweep_cells() {
        let m = cell.model();
        info!("sweep cell: Q={} alpha={} beta={} eps={} dt={} h_fine={}", m.q, m.alpha, m.beta, m.epsilon, m.dt, cell.resolved_h_fine());
        let result = run_radial(&cell.sim_params(), cell.radius_method).map_err(|e| e.to_string());
        cells.push(SweepCell { config: cell, result });
    }
    let row_labels = cells
        .chunks(columns.len())
        .map(|chunk| rest.iter().map(|(axis, _)| format!("{}={}", axis.name(), axis.value(&chunk[0].config))).collect::<Vec<_>>().join(" "))
        .collect();
    Ok(SweepTable {
        row_axes: rest.iter().map(|(a, _)| *a).collect(),
        column_axis: *column_axis,
        columns: columns.clone(),
        row_labels,
        cells,
    })
}
