//! Independent reference solvers shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use tumour_core::fem::SparseOperator;
use tumour_core::phase::PhaseSystem;

/// Dense Cholesky solve.
pub fn dense_solve(a: &SparseOperator, b: &[f64]) -> Vec<f64> {
    let n = a.dim();
    let rows = a.to_dense();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let x = m.cholesky().expect("SPD").solve(&DVector::from_column_slice(b));
    x.iter().copied().collect()
}

/// Solves the box-constrained VI by trying every lower/free/upper pattern.
pub fn active_set_oracle(sys: &PhaseSystem) -> Vec<f64> {
    let g = sys.matrix.to_dense();
    let n = g.len();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut pattern = vec![0u8; n];
        let mut c = code;
        for p in pattern.iter_mut() {
            *p = (c % 3) as u8;
            c /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| pattern[i] == 1).collect();
        let mut x: Vec<f64> = pattern
            .iter()
            .map(|&p| match p {
                0 => sys.lower,
                2 => sys.upper,
                _ => 0.0,
            })
            .collect();
        if !free.is_empty() {
            let a = DMatrix::from_fn(free.len(), free.len(), |i, j| g[free[i]][free[j]]);
            let b = DVector::from_fn(free.len(), |i, _| {
                let r = free[i];
                sys.rhs[r] - (0..n).filter(|&j| pattern[j] != 1).map(|j| g[r][j] * x[j]).sum::<f64>()
            });
            let Some(sol) = a.lu().solve(&b) else { continue };
            for (k, &i) in free.iter().enumerate() {
                x[i] = sol[k];
            }
        }
        let feasible = free.iter().all(|&i| x[i] >= sys.lower - 1e-12 && x[i] <= sys.upper + 1e-12);
        if !feasible {
            continue;
        }
        let w = sys.residual(&x);
        let complementary = (0..n).all(|i| match pattern[i] {
            0 => w[i] >= -1e-10,
            2 => w[i] <= 1e-10,
            _ => true,
        });
        if complementary {
            return x;
        }
    }
    panic!("no activity pattern solves the VI");
}
