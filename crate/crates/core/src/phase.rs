//! Double-obstacle variational inequality for the phase field, solved by
//! projected SOR.
//!
//! With lumped mass the inequality decouples node by node: `phi` solves it iff
//! for every node `j`, `(G phi - r)_j` is zero where `-1 < phi_j < 1`,
//! nonpositive where `phi_j = 1` and nonnegative where `phi_j = -1`.

use crate::error::{Error, Result};
use crate::fem::{FemSpace, SparseOperator, C_W};
use crate::params::{ModelParams, SweepOrder};

/// `G phi >= r` on the box `[lower, upper]` in the complementarity sense.
#[derive(Clone, Debug)]
pub struct PhaseSystem {
    pub matrix: SparseOperator,
    pub rhs: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl PhaseSystem {
    pub fn new(matrix: SparseOperator, rhs: Vec<f64>, lower: f64, upper: f64) -> Self {
        assert_eq!(matrix.dim(), rhs.len());
        Self { matrix, rhs, lower, upper }
    }

    /// `G phi - r`.
    pub fn residual(&self, phi: &[f64]) -> Vec<f64> {
        let mut g = self.matrix.matvec(phi);
        g.iter_mut().zip(&self.rhs).for_each(|(gi, ri)| *gi -= ri);
        g
    }
}

/// Assembles `G = eps beta K + (eps/dt - beta/eps) M` and
/// `r = (eps/dt) M phi_n + (c_W/alpha) M u_{n+1}`.
pub fn build_phase_system(
    space: &FemSpace,
    stiffness: &SparseOperator,
    phi_n: &[f64],
    u_np1: &[f64],
    model: &ModelParams,
) -> Result<PhaseSystem> {
    let ModelParams { alpha, beta, epsilon: eps, dt, .. } = *model;
    if dt >= model.dt_limit() {
        return Err(Error::TimeStepTooLarge { dt, limit: model.dt_limit() });
    }
    let m = space.lumped_mass();
    let mut matrix = stiffness.clone();
    matrix.scale(eps * beta);
    let shift = eps / dt - beta / eps;
    matrix.add_diagonal(&m.iter().map(|mj| shift * mj).collect::<Vec<_>>());
    let rhs = m
        .iter()
        .zip(phi_n)
        .zip(u_np1)
        .map(|((&mj, &p), &u)| eps / dt * mj * p + C_W / alpha * mj * u)
        .collect();
    Ok(PhaseSystem::new(matrix, rhs, -1.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SorOptions {
    pub omega: f64,
    /// Stop when the largest nodal update of a sweep is at most this.
    pub tol: f64,
    pub max_iter: usize,
    pub order: SweepOrder,
}

impl Default for SorOptions {
    fn default() -> Self {
        Self { omega: 1.5, tol: 1e-8, max_iter: 20_000, order: SweepOrder::Ascending }
    }
}

#[derive(Clone, Debug)]
pub struct SorOutcome {
    pub solution: Vec<f64>,
    pub sweeps: usize,
    pub last_delta: f64,
}

/// Node visiting order for a sweep.
pub fn sweep_order(matrix: &SparseOperator, order: SweepOrder) -> Vec<usize> {
    let n = matrix.dim();
    match order {
        SweepOrder::Ascending => (0..n).collect(),
        SweepOrder::Colored => {
            let mut color = vec![usize::MAX; n];
            let mut used = Vec::new();
            for i in 0..n {
                used.clear();
                used.extend(matrix.row(i).0.iter().map(|&j| color[j]).filter(|&c| c != usize::MAX));
                used.sort_unstable();
                used.dedup();
                color[i] = (0..).find(|c| used.binary_search(c).is_err()).unwrap();
            }
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by_key(|&i| (color[i], i));
            idx
        }
    }
}

/// Projected successive over-relaxation:
/// `phi_j <- clamp(phi_j + omega (r_j - (G phi)_j) / G_jj, lower, upper)`.
pub fn projected_sor(sys: &PhaseSystem, init: &[f64], opts: &SorOptions) -> Result<SorOutcome> {
    let g = &sys.matrix;
    let order = sweep_order(g, opts.order);
    let diag = g.diagonal();
    if let Some(j) = diag.iter().position(|&d| !(d > 0.0)) {
        return Err(Error::Param { key: "phase system".into(), reason: format!("diagonal entry {j} is not positive") });
    }
    let mut phi: Vec<f64> = init.iter().map(|v| v.clamp(sys.lower, sys.upper)).collect();
    let mut last_delta = f64::INFINITY;
    for sweep in 1..=opts.max_iter {
        let mut delta: f64 = 0.0;
        for &j in &order {
            let (cols, vals) = g.row(j);
            let gphi: f64 = cols.iter().zip(vals).map(|(&i, &a)| a * phi[i]).sum();
            let updated = (phi[j] + opts.omega * (sys.rhs[j] - gphi) / diag[j]).clamp(sys.lower, sys.upper);
            delta = delta.max((updated - phi[j]).abs());
            phi[j] = updated;
        }
        last_delta = delta;
        if delta <= opts.tol {
            return Ok(SorOutcome { solution: phi, sweeps: sweep, last_delta });
        }
    }
    Err(Error::SorDiverged { sweeps: opts.max_iter, delta: last_delta })
}

/// Scaled complementarity residual: the largest violation of the nodal
/// optimality conditions, divided by `max(1, ||r||_inf)`.
pub fn vi_residual(sys: &PhaseSystem, phi: &[f64]) -> f64 {
    let res = sys.residual(phi);
    let scale = sys.rhs.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let worst = phi
        .iter()
        .zip(&res)
        .map(|(&p, &w)| {
            if p >= sys.upper - 1e-12 {
                w.max(0.0)
            } else if p <= sys.lower + 1e-12 {
                (-w).max(0.0)
            } else {
                w.abs()
            }
        })
        .fold(0.0, f64::max);
    worst / scale
}

/// Terms of the per-step phase stability estimate, from testing the
/// inequality with `rho = phi_n`, `d = phi_{n+1} - phi_n`:
///
/// `|d|_h^2/(2 dt) + beta/2 (|grad phi1|^2 - |grad phi0|^2) + beta/2 |grad d|^2
///   <= dt/2 (c_W/(eps alpha))^2 |u|_h^2 + beta/(2 eps^2) (|phi1|_h^2 - |phi0|_h^2)
///      + beta/(2 eps^2) |d|_h^2`.
///
/// The `literal_*` fields drop the two `d`-squared terms that carry the
/// gradient and potential increments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseStability {
    pub lhs: f64,
    pub rhs: f64,
    pub literal_lhs: f64,
    pub literal_rhs: f64,
    pub scale: f64,
}

impl PhaseStability {
    /// `(rhs - lhs) / scale`; nonnegative when the estimate holds.
    pub fn slack(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (self.rhs - self.lhs) / self.scale
        }
    }

    pub fn literal_slack(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (self.literal_rhs - self.literal_lhs) / self.scale
        }
    }
}

pub fn phase_stability(
    space: &FemSpace,
    stiffness: &SparseOperator,
    phi_n: &[f64],
    phi_np1: &[f64],
    u: &[f64],
    model: &ModelParams,
) -> PhaseStability {
    let ModelParams { alpha, beta, epsilon: eps, dt, .. } = *model;
    let d: Vec<f64> = phi_np1.iter().zip(phi_n).map(|(a, b)| a - b).collect();
    let d2 = space.inner(&d, &d);
    let a1 = d2 / (2.0 * dt);
    let grad1 = 0.5 * beta * stiffness.quad_form(phi_np1);
    let grad0 = 0.5 * beta * stiffness.quad_form(phi_n);
    let a3 = 0.5 * beta * stiffness.quad_form(&d);
    let coupling = C_W / (eps * alpha);
    let b1 = 0.5 * dt * coupling * coupling * space.inner(u, u);
    let w = beta / (2.0 * eps * eps);
    let pot1 = w * space.inner(phi_np1, phi_np1);
    let pot0 = w * space.inner(phi_n, phi_n);
    let b3 = w * d2;
    PhaseStability {
        lhs: a1 + grad1 - grad0 + a3,
        rhs: b1 + pot1 - pot0 + b3,
        literal_lhs: a1 + grad1 - grad0,
        literal_rhs: b1 + pot1 - pot0,
        scale: a1 + grad1 + grad0 + a3 + b1 + pot1 + pot0 + b3,
    }
}
