use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

/// One value per mesh node, tagged with the version of the mesh it lives on.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NodalField {
    values: Vec<f64>,
    version: u64,
}

impl NodalField {
    pub fn new(mesh: &Mesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_nodes() {
            return Err(Error::LengthMismatch { expected: mesh.num_nodes(), found: values.len() });
        }
        Ok(Self { values, version: mesh.version() })
    }

    pub fn constant(mesh: &Mesh, value: f64) -> Self {
        Self { values: vec![value; mesh.num_nodes()], version: mesh.version() }
    }

    /// Nodal interpolant of `f`.
    pub fn from_fn(mesh: &Mesh, f: impl Fn(Point) -> f64) -> Self {
        Self { values: mesh.nodes().iter().map(|&p| f(p)).collect(), version: mesh.version() }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn check_mesh(&self, mesh: &Mesh) -> Result<()> {
        if self.version != mesh.version() {
            return Err(Error::VersionMismatch { expected: mesh.version(), found: self.version });
        }
        Ok(())
    }

    pub fn check_same_mesh(&self, other: &NodalField) -> Result<()> {
        if self.version != other.version {
            return Err(Error::VersionMismatch { expected: self.version, found: other.version });
        }
        Ok(())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl Deref for NodalField {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for NodalField {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}
