//! Linear pressure update and its discrete maximum principle.

use crate::error::{Error, Result};
use crate::fem::{delta, zeta, FemSpace, SparseOperator};
use crate::params::ModelParams;

/// Absolute tolerance of the maximum-principle bounds.
pub const MAX_PRINCIPLE_TOL: f64 = 1e-10;

/// `A u = b` for the pressure at the new time level.
#[derive(Clone, Debug)]
pub struct PressureSystem {
    pub matrix: SparseOperator,
    pub rhs: Vec<f64>,
}

/// Assembles
/// `A = (eps^2/dt) M + K_zeta(phi_n) + 1/(eps alpha) M_delta(phi_n)` and
/// `b = (eps^2/dt) M u_n + M [(Q/eps) delta(phi_n) - zeta(phi_n)]`,
/// where `M` is the lumped mass.
pub fn build_pressure_system(space: &FemSpace, phi_n: &[f64], u_n: &[f64], model: &ModelParams) -> PressureSystem {
    let ModelParams { q, alpha, epsilon: eps, dt, .. } = *model;
    let m = space.lumped_mass();
    let mut matrix = space.weighted_stiffness(phi_n);
    let time = eps * eps / dt;
    let diag: Vec<f64> = m.iter().zip(phi_n).map(|(&mj, &p)| time * mj + mj * delta(p) / (eps * alpha)).collect();
    matrix.add_diagonal(&diag);
    let rhs = m
        .iter()
        .zip(phi_n)
        .zip(u_n)
        .map(|((&mj, &p), &u)| time * mj * u + mj * (q / eps * delta(p) - zeta(p)))
        .collect();
    PressureSystem { matrix, rhs }
}

#[derive(Clone, Debug)]
pub struct PcgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// `||A x - b||_2 / ||b||_2` (or the absolute residual when `b = 0`).
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Conjugate gradients with Jacobi preconditioning. Stops once
/// `||A x - b||_2 <= max(rel_tol ||b||_2, 1e-14)`.
pub fn pcg_solve(
    a: &SparseOperator,
    b: &[f64],
    x0: &[f64],
    rel_tol: f64,
    max_iter: Option<usize>,
) -> Result<PcgOutcome> {
    let n = a.dim();
    let max_iter = max_iter.unwrap_or(10 * n.max(1));
    let b_norm = norm(b);
    let target = (rel_tol * b_norm).max(1e-14);
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();

    let mut x = x0.to_vec();
    let mut r = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];
    let mut iterations = 0;

    // the recurrence residual can drift from the true one; re-seed from the
    // true residual until it agrees
    loop {
        a.matvec_into(&x, &mut r);
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
        let true_res = norm(&r);
        if true_res <= target {
            let relative_residual = if b_norm > 0.0 { true_res / b_norm } else { true_res };
            return Ok(PcgOutcome { solution: x, iterations, relative_residual });
        }
        if iterations >= max_iter {
            return Err(Error::PcgDiverged { iterations, residual: true_res / b_norm.max(f64::MIN_POSITIVE) });
        }
        for i in 0..n {
            z[i] = inv_diag[i] * r[i];
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        let stop = (0.5 * target) * (0.5 * target);
        while iterations < max_iter {
            a.matvec_into(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            let mut rr = 0.0;
            let mut rz_new = 0.0;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
                z[i] = inv_diag[i] * r[i];
                rr += r[i] * r[i];
                rz_new += r[i] * z[i];
            }
            iterations += 1;
            if rr <= stop {
                break;
            }
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
}

/// Outcome of [`verify_max_principle`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxPrincipleReport {
    pub lower: f64,
    pub upper: f64,
    pub min: f64,
    pub max: f64,
    /// First node outside the bounds and its value.
    pub violation: Option<(usize, f64)>,
}

impl MaxPrincipleReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Nodal bounds `-|u0|_inf - t/eps^2 <= u <= max(alpha Q, |u0|_inf)`, valid on
/// nonobtuse meshes.
pub fn max_principle_bounds(u0_inf: f64, t: f64, model: &ModelParams) -> (f64, f64) {
    let lower = -u0_inf - t / (model.epsilon * model.epsilon);
    let upper = (model.alpha * model.q).max(u0_inf);
    (lower, upper)
}

pub fn verify_max_principle(u: &[f64], u0_inf: f64, t: f64, model: &ModelParams) -> MaxPrincipleReport {
    let (lower, upper) = max_principle_bounds(u0_inf, t, model);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut violation = None;
    for (j, &v) in u.iter().enumerate() {
        min = min.min(v);
        max = max.max(v);
        if violation.is_none() && !(v <= upper + MAX_PRINCIPLE_TOL && v >= lower - MAX_PRINCIPLE_TOL) {
            violation = Some((j, v));
        }
    }
    MaxPrincipleReport { lower, upper, min, max, violation }
}

/// Both sides of the energy identity obtained by testing the pressure
/// equation with `eta = u_{n+1}`:
///
/// `eps^2/2 |u1-u0|_h^2 + eps^2/2 (|u1|_h^2 - |u0|_h^2) + dt (zeta grad u1, grad u1)
///  + dt/(eps alpha) |sqrt(delta) u1|_h^2 = dt [(Q/eps)(delta, u1)_h - (zeta, u1)_h]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBalance {
    pub lhs: f64,
    pub rhs: f64,
    /// Sum of absolute values of all terms.
    pub scale: f64,
}

impl EnergyBalance {
    pub fn relative_defect(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / self.scale
        }
    }
}

pub fn pressure_energy_balance(
    space: &FemSpace,
    phi_n: &[f64],
    u_n: &[f64],
    u_np1: &[f64],
    model: &ModelParams,
) -> EnergyBalance {
    let ModelParams { q, alpha, epsilon: eps, dt, .. } = *model;
    let jump: Vec<f64> = u_np1.iter().zip(u_n).map(|(a, b)| a - b).collect();
    let e2 = eps * eps;
    let t1 = 0.5 * e2 * space.inner(&jump, &jump);
    let t2 = 0.5 * e2 * space.inner(u_np1, u_np1);
    let t3 = 0.5 * e2 * space.inner(u_n, u_n);
    let t4 = dt * space.weighted_stiffness(phi_n).quad_form(u_np1);
    let d: Vec<f64> = phi_n.iter().map(|&p| delta(p)).collect();
    let z: Vec<f64> = phi_n.iter().map(|&p| zeta(p)).collect();
    let du: Vec<f64> = d.iter().zip(u_np1).map(|(a, b)| a * b).collect();
    let t5 = dt / (eps * alpha) * space.inner(&du, u_np1);
    let r1 = dt * q / eps * space.inner(&d, u_np1);
    let r2 = dt * space.inner(&z, u_np1);
    EnergyBalance {
        lhs: t1 + t2 - t3 + t4 + t5,
        rhs: r1 - r2,
        scale: t1.abs() + t2.abs() + t3.abs() + t4.abs() + t5.abs() + r1.abs() + r2.abs(),
    }
}
