//! P1 element quantities: coefficient functions, lumped masses, stiffness
//! matrices and the lumped (nodal quadrature) inner product.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::NodalField;
use crate::mesh::Mesh;

/// `c_W = 1/2 * int_{-1}^{1} sqrt(2 W(s)) ds` for the double-obstacle potential.
pub const C_W: f64 = PI / 4.0;

/// Mobility `zeta(s) = (1 + s) / 2`.
#[inline]
pub fn zeta(s: f64) -> f64 {
    0.5 * (1.0 + s)
}

/// Interface weight `delta(s) = (2 / pi) (1 - s^2)`.
#[inline]
pub fn delta(s: f64) -> f64 {
    2.0 / PI * (1.0 - s * s)
}

/// Compressed-row sparsity pattern with sorted column indices.
#[derive(Debug, PartialEq, Eq)]
pub struct SparsePattern {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    diag: Vec<usize>,
}

impl SparsePattern {
    /// Pattern of node adjacency plus the diagonal.
    pub fn from_adjacency(adj: &[Vec<usize>]) -> Self {
        let mut row_ptr = Vec::with_capacity(adj.len() + 1);
        let mut cols = Vec::new();
        let mut diag = Vec::with_capacity(adj.len());
        row_ptr.push(0);
        for (i, nbrs) in adj.iter().enumerate() {
            let mut row: Vec<usize> = nbrs.iter().copied().chain(std::iter::once(i)).collect();
            row.sort_unstable();
            row.dedup();
            diag.push(cols.len() + row.binary_search(&i).unwrap());
            cols.extend(row);
            row_ptr.push(cols.len());
        }
        Self { row_ptr, cols, diag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row_cols(&self, i: usize) -> &[usize] {
        &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.row_cols(i).binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }
}

/// Sparse square matrix over a shared [`SparsePattern`].
#[derive(Clone, Debug)]
pub struct SparseOperator {
    pattern: Arc<SparsePattern>,
    values: Vec<f64>,
}

impl SparseOperator {
    pub fn zeros(pattern: Arc<SparsePattern>) -> Self {
        let values = vec![0.0; pattern.nnz()];
        Self { pattern, values }
    }

    /// Stores every nonzero of `rows` plus the full diagonal.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let adj: Vec<Vec<usize>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, _)| j).collect())
            .collect();
        let mut op = Self::zeros(Arc::new(SparsePattern::from_adjacency(&adj)));
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if let Some(k) = op.pattern.position(i, j) {
                    op.values[k] = v;
                }
            }
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.pattern.dim()
    }

    pub fn pattern(&self) -> &Arc<SparsePattern> {
        &self.pattern
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.pattern.row_ptr[i]..self.pattern.row_ptr[i + 1];
        (&self.pattern.cols[range.clone()], &self.values[range])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pattern.position(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.pattern.diag.iter().map(|&k| self.values[k]).collect()
    }

    pub fn diagonal_entry(&self, i: usize) -> f64 {
        self.values[self.pattern.diag[i]]
    }

    pub fn add_diagonal(&mut self, d: &[f64]) {
        for (&k, &v) in self.pattern.diag.iter().zip(d) {
            self.values[k] += v;
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.values.iter_mut().for_each(|v| *v *= s);
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        let cols = &self.pattern.cols;
        for (yi, w) in y.iter_mut().zip(self.pattern.row_ptr.windows(2)) {
            let (c, v) = (&cols[w[0]..w[1]], &self.values[w[0]..w[1]]);
            *yi = c.iter().zip(v).fold(0.0, |acc, (&j, &a)| acc + a * x[j]);
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.matvec_into(x, &mut y);
        y
    }

    /// `x^T A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        (0..self.dim())
            .map(|i| {
                let (cols, vals) = self.row(i);
                x[i] * cols.iter().zip(vals).map(|(&j, &a)| a * x[j]).sum::<f64>()
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `|A_ij - A_ji| <= tol * max |A|` for all stored entries.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        let tol = rel_tol * self.max_abs();
        (0..self.dim()).all(|i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).all(|(&j, &a)| (a - self.get(j, i)).abs() <= tol)
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = vec![vec![0.0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &a) in cols.iter().zip(vals) {
                row[j] = a;
            }
        }
        out
    }
}

/// Per-mesh element data reused by every assembly on one mesh version.
#[derive(Clone, Debug)]
pub struct FemSpace {
    version: u64,
    elements: Vec<[usize; 3]>,
    /// `|sigma| grad chi_i . grad chi_j` for the three local basis functions.
    local: Vec<[[f64; 3]; 3]>,
    /// Positions of the local entries in the global value array.
    slots: Vec<[usize; 9]>,
    pattern: Arc<SparsePattern>,
    lumped: Vec<f64>,
}

impl FemSpace {
    pub fn new(mesh: &Mesh) -> Self {
        let pattern = Arc::new(SparsePattern::from_adjacency(&mesh.node_adjacency()));
        let elements = mesh.elements().to_vec();
        let mut lumped = vec![0.0; mesh.num_nodes()];
        let mut local = Vec::with_capacity(elements.len());
        let mut slots = Vec::with_capacity(elements.len());
        for (e, verts) in elements.iter().enumerate() {
            let p = mesh.element_points(e);
            let area = mesh.element_area(e);
            let grads: [[f64; 2]; 3] = std::array::from_fn(|i| {
                let b = p[(i + 1) % 3];
                let c = p[(i + 2) % 3];
                [(b[1] - c[1]) / (2.0 * area), (c[0] - b[0]) / (2.0 * area)]
            });
            let k: [[f64; 3]; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|j| area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]))
            });
            local.push(k);
            slots.push(std::array::from_fn(|ij| pattern.position(verts[ij / 3], verts[ij % 3]).unwrap()));
            for &v in verts {
                lumped[v] += area / 3.0;
            }
        }
        Self { version: mesh.version(), elements, local, slots, pattern, lumped }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn num_nodes(&self) -> usize {
        self.lumped.len()
    }

    pub fn pattern(&self) -> &Arc<SparsePattern> {
        &self.pattern
    }

    /// `m_j = (1, chi_j)`.
    pub fn lumped_mass(&self) -> &[f64] {
        &self.lumped
    }

    pub fn check_field(&self, f: &NodalField) -> Result<()> {
        if f.version() != self.version {
            return Err(Error::VersionMismatch { expected: self.version, found: f.version() });
        }
        Ok(())
    }

    fn assemble(&self, weight: impl Fn(&[usize; 3]) -> f64) -> SparseOperator {
        let mut op = SparseOperator::zeros(self.pattern.clone());
        for ((verts, k), slots) in self.elements.iter().zip(&self.local).zip(&self.slots) {
            let w = weight(verts);
            if w == 0.0 {
                continue;
            }
            for ij in 0..9 {
                op.values[slots[ij]] += w * k[ij / 3][ij % 3];
            }
        }
        op
    }

    /// `K_ij = (grad chi_i, grad chi_j)`.
    pub fn stiffness(&self) -> SparseOperator {
        self.assemble(|_| 1.0)
    }

    /// `K_ij = (zeta(phi_h) grad chi_i, grad chi_j)`. `zeta` is affine, so the
    /// element integral of `zeta(phi_h)` is `|sigma|` times the vertex mean.
    pub fn weighted_stiffness(&self, phi: &[f64]) -> SparseOperator {
        self.assemble(|v| (zeta(phi[v[0]]) + zeta(phi[v[1]]) + zeta(phi[v[2]])) / 3.0)
    }

    /// Diagonal of `(g(phi_h) u, eta)_h`, i.e. `m_j g(phi_j)`.
    pub fn weighted_lumped_mass(&self, phi: &[f64], g: impl Fn(f64) -> f64) -> Vec<f64> {
        self.lumped.iter().zip(phi).map(|(m, &p)| m * g(p)).collect()
    }

    /// `(u, v)_h = sum_j m_j u_j v_j`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.lumped.iter().zip(u).zip(v).map(|((m, a), b)| m * a * b).sum()
    }
}

pub fn lumped_mass(mesh: &Mesh) -> Vec<f64> {
    FemSpace::new(mesh).lumped
}

/// Lumped inner product of two fields living on the same mesh version.
pub fn discrete_inner(u: &NodalField, v: &NodalField, m: &[f64]) -> Result<f64> {
    u.check_same_mesh(v)?;
    if m.len() != u.len() {
        return Err(Error::LengthMismatch { expected: u.len(), found: m.len() });
    }
    Ok(m.iter().zip(u.iter()).zip(v.iter()).map(|((m, a), b)| m * a * b).sum())
}

pub fn assemble_stiffness(mesh: &Mesh) -> SparseOperator {
    FemSpace::new(mesh).stiffness()
}

pub fn assemble_weighted_stiffness(mesh: &Mesh, phi: &NodalField) -> Result<SparseOperator> {
    phi.check_mesh(mesh)?;
    Ok(FemSpace::new(mesh).weighted_stiffness(phi))
}

pub fn weighted_lumped_mass(mesh: &Mesh, phi: &NodalField, g: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    phi.check_mesh(mesh)?;
    Ok(FemSpace::new(mesh).weighted_lumped_mass(phi, g))
}
