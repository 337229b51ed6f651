//! Radially symmetric reference solutions and the radius error metric.
//!
//! For a circular tumour of radius `R(t)` the free boundary problem reduces to
//! the scalar ODE `R' = -beta/R + Q - R/2` with pressure profile
//! `u(r) = r^2/4 + alpha Q - alpha R/2 - R^2/4`.

use crate::error::{Error, Result};
use crate::mesh::Mesh;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialParams {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `R' = -beta/R + Q - R/2`. Independent of `alpha`.
pub fn radial_rhs(r: f64, p: &RadialParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    Ok(-p.beta / r + p.q - 0.5 * r)
}

/// Stable equilibrium `Q + sqrt(Q^2 - 2 beta)`, if it exists.
pub fn steady_radius(p: &RadialParams) -> Option<f64> {
    let disc = p.q * p.q - 2.0 * p.beta;
    (disc >= 0.0).then(|| p.q + disc.sqrt())
}

/// `u(r) = r^2/4 + alpha Q - alpha R/2 - R^2/4` for `0 <= r <= R`.
pub fn pressure_profile(r: f64, radius: f64, p: &RadialParams) -> f64 {
    0.25 * r * r + p.alpha * p.q - 0.5 * p.alpha * radius - 0.25 * radius * radius
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeTolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for OdeTolerances {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialSolution {
    pub params: RadialParams,
    pub r0: f64,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    /// Time at which the radius collapsed to zero; samples after it are dropped.
    pub vanished_at: Option<f64>,
    pub steps: usize,
}

// Dormand-Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step; `None` if a stage leaves `R > 0`.
fn dopri_step(f: &impl Fn(f64) -> Option<f64>, y: f64, h: f64) -> Option<(f64, f64)> {
    let mut k = [0.0; 7];
    for s in 0..7 {
        let ys = y + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
        k[s] = f(ys)?;
    }
    let y5 = y + h * (0..7).map(|j| B5[j] * k[j]).sum::<f64>();
    let err = h * (0..7).map(|j| (B5[j] - B4[j]) * k[j]).sum::<f64>();
    (y5 > 0.0).then_some((y5, err))
}

/// Integrates the radius ODE with an adaptive embedded Runge-Kutta 5(4)
/// scheme, landing exactly on every sample time. `times` must be
/// nondecreasing and start at or after 0.
pub fn integrate_radius(r0: f64, params: &RadialParams, times: &[f64], tol: OdeTolerances) -> Result<RadialSolution> {
    if !(r0 > 0.0) {
        return Err(Error::NonPositiveRadius(r0));
    }
    let f = |r: f64| radial_rhs(r, params).ok();
    let mut t = 0.0;
    let mut y = r0;
    let mut h: f64 = 1e-3;
    let mut steps = 0;
    let mut radii = Vec::with_capacity(times.len());
    let mut vanished_at = None;
    'samples: for &target in times {
        while t < target {
            let h_try = h.min(target - t);
            let clipped = h_try < h;
            match dopri_step(&f, y, h_try) {
                Some((y_new, err)) => {
                    let scale = tol.abs + tol.rel * y.abs().max(y_new.abs());
                    let ratio = err.abs() / scale;
                    let accepted = ratio <= 1.0;
                    if accepted {
                        t = if clipped { target } else { t + h_try };
                        y = y_new;
                        steps += 1;
                    }
                    let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
                    if !(accepted && clipped) {
                        h = h_try * factor;
                    }
                }
                None => h = 0.25 * h_try,
            }
            if h < 1e-14 * target.max(1.0) {
                vanished_at = Some(t);
                break 'samples;
            }
        }
        radii.push(y);
    }
    let kept = radii.len();
    Ok(RadialSolution {
        params: *params,
        r0,
        times: times[..kept].to_vec(),
        radii,
        vanished_at,
        steps,
    })
}

/// Uniform sample times `0, dt, ..., n dt`.
pub fn sample_times(interval: f64, count: usize) -> Vec<f64> {
    (0..count).map(|n| n as f64 * interval).collect()
}

/// `t_n = 0.01 n`, `n = 0..=50`.
pub fn benchmark_sample_times() -> Vec<f64> {
    sample_times(0.01, 51)
}

/// Why no radius could be extracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusEvent {
    /// No tumour phase at the origin.
    Vanished,
    /// No sign change before the domain boundary.
    FillsDomain,
}

/// Zero crossing of `phi_h` along the positive `x1` axis from the origin,
/// sampled with the given spacing and located by linear interpolation between
/// the bracketing samples.
pub fn extract_radius(mesh: &Mesh, phi: &[f64], spacing: f64) -> std::result::Result<f64, RadiusEvent> {
    let end = mesh.bbox().max[0];
    let eval = |s: f64| mesh.evaluate(phi, [s, 0.0]).unwrap_or(-1.0);
    let mut s0 = 0.0_f64.max(mesh.bbox().min[0]);
    let mut f0 = eval(s0);
    if f0 <= 0.0 {
        return Err(RadiusEvent::Vanished);
    }
    while s0 < end {
        let s1 = (s0 + spacing).min(end);
        let f1 = eval(s1);
        if f1 <= 0.0 {
            return Ok(s0 + (s1 - s0) * f0 / (f0 - f1));
        }
        s0 = s1;
        f0 = f1;
    }
    Err(RadiusEvent::FillsDomain)
}

/// Radius of the disc with the same tumour area `int (1 + phi_h)/2`. A mesh
/// whose lower-left corner is the origin is treated as one quadrant of a
/// symmetric domain.
pub fn area_radius(mesh: &Mesh, phi: &[f64]) -> f64 {
    let area: f64 = (0..mesh.num_elements())
        .map(|e| {
            let v = mesh.elements()[e];
            let mean = (phi[v[0]] + phi[v[1]] + phi[v[2]]) / 3.0;
            mesh.element_area(e) * 0.5 * (1.0 + mean)
        })
        .sum();
    let copies = if mesh.bbox().min == [0.0, 0.0] { 4.0 } else { 1.0 };
    (copies * area / std::f64::consts::PI).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    /// `sum_n |R_h(t_n) - R(t_n)|^2`.
    pub e_r: f64,
    pub differences: Vec<f64>,
}

pub fn radial_error(simulated: &[f64], oracle: &[f64]) -> Result<ErrorReport> {
    if simulated.len() != oracle.len() {
        return Err(Error::SampleCount { simulated: simulated.len(), oracle: oracle.len() });
    }
    let differences: Vec<f64> = simulated.iter().zip(oracle).map(|(a, b)| a - b).collect();
    let e_r = differences.iter().map(|d| d * d).sum();
    Ok(ErrorReport { e_r, differences })
}
