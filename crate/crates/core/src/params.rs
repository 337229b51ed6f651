use crate::error::{Error, Result};
use crate::mesh::Rect;

/// Model coefficients and the time step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Surface source strength `Q`.
    pub q: f64,
    /// Pressure relaxation `alpha`.
    pub alpha: f64,
    /// Curvature weight `beta`.
    pub beta: f64,
    /// Interface width `epsilon`.
    pub epsilon: f64,
    pub dt: f64,
}

impl ModelParams {
    /// Upper bound `epsilon^2 / beta` on the time step for a unique phase update.
    pub fn dt_limit(&self) -> f64 {
        self.epsilon * self.epsilon / self.beta
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("Q", self.q),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("epsilon", self.epsilon),
            ("dt", self.dt),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Param { key: key.into(), reason: format!("must be positive, got {v}") });
            }
        }
        if self.dt >= self.dt_limit() {
            return Err(Error::TimeStepTooLarge { dt: self.dt, limit: self.dt_limit() });
        }
        Ok(())
    }

    /// Linear stability criterion `3 alpha beta > 2 Q^3` for steady circles.
    pub fn steady_circle_expected(&self) -> bool {
        3.0 * self.alpha * self.beta > 2.0 * self.q.powi(3)
    }
}

/// Target maximum element diameters for the three refinement zones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZoneTargets {
    pub fine: f64,
    pub medium: f64,
    pub coarse: f64,
}

pub const MEDIUM_TO_FINE_CAP: f64 = 16.0;
pub const COARSE_TO_MEDIUM_CAP: f64 = 128.0;

impl ZoneTargets {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, reason: String| Err(Error::Param { key: key.into(), reason });
        if !(self.fine > 0.0) {
            return bad("h_fine", format!("must be positive, got {}", self.fine));
        }
        if self.medium < self.fine {
            return bad("h_medium", format!("{} is below h_fine = {}", self.medium, self.fine));
        }
        if self.coarse < self.medium {
            return bad("h_coarse", format!("{} is below h_medium = {}", self.coarse, self.medium));
        }
        if self.medium > MEDIUM_TO_FINE_CAP * self.fine * (1.0 + 1e-12) {
            return bad("h_medium", format!("h_medium / h_fine = {} exceeds 2^4", self.medium / self.fine));
        }
        if self.coarse > COARSE_TO_MEDIUM_CAP * self.medium * (1.0 + 1e-12) {
            return bad("h_coarse", format!("h_coarse / h_medium = {} exceeds 2^7", self.coarse / self.medium));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// Ascending node index.
    #[default]
    Ascending,
    /// Greedy graph colouring; nodes of one colour are mutually independent.
    Colored,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub pcg_tol: f64,
    /// Defaults to ten times the system size when unset.
    pub pcg_max_iter: Option<usize>,
    pub sor_omega: f64,
    pub sor_tol: f64,
    pub sor_max_iter: usize,
    pub sweep_order: SweepOrder,
    /// Scaled complementarity residual accepted after a phase solve.
    pub vi_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            pcg_tol: 1e-10,
            pcg_max_iter: None,
            sor_omega: 1.5,
            sor_tol: 1e-8,
            sor_max_iter: 20_000,
            sweep_order: SweepOrder::Ascending,
            vi_tol: 1e-8,
        }
    }
}

/// Initial phase-field geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialShape {
    /// Ellipse `4 x1^2 + x2^2 = 1`.
    Ellipse,
    /// Circle of radius `r0` centred at the origin.
    Circle { r0: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimParams {
    pub model: ModelParams,
    pub t_final: f64,
    pub domain: Rect,
    pub zones: ZoneTargets,
    pub solver: SolverSettings,
    pub initial: InitialShape,
    /// Constant initial pressure.
    pub u0: f64,
    /// Remesh after every `remesh_every` steps.
    pub remesh_every: usize,
    /// Snapshot cadence in steps; `None` gives `max(1, N / 50)`.
    pub snapshot_every: Option<usize>,
    /// Spacing of time-series samples.
    pub sample_interval: f64,
    /// `|phi|` threshold of the interfacial zone.
    pub zone_cutoff: f64,
}

impl SimParams {
    pub fn new(model: ModelParams, t_final: f64, domain: Rect, zones: ZoneTargets, initial: InitialShape) -> Self {
        Self {
            model,
            t_final,
            domain,
            zones,
            solver: SolverSettings::default(),
            initial,
            u0: 0.0,
            remesh_every: 1,
            snapshot_every: None,
            sample_interval: 0.01,
            zone_cutoff: 0.99,
        }
    }

    pub fn num_steps(&self) -> usize {
        (self.t_final / self.model.dt).round() as usize
    }

    pub fn snapshot_cadence(&self) -> usize {
        self.snapshot_every.unwrap_or_else(|| (self.num_steps() / 50).max(1))
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.zones.validate()?;
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Param { key: "T".into(), reason: format!("must be nonnegative, got {}", self.t_final) });
        }
        if let InitialShape::Circle { r0 } = self.initial {
            if !(r0 > 0.0) {
                return Err(Error::Param { key: "R0".into(), reason: format!("must be positive, got {r0}") });
            }
        }
        if self.remesh_every == 0 {
            return Err(Error::Param { key: "remesh_every".into(), reason: "must be at least 1".into() });
        }
        if !(self.sample_interval > 0.0) {
            return Err(Error::Param { key: "sample_interval".into(), reason: "must be positive".into() });
        }
        let s = &self.solver;
        if !(s.sor_omega > 0.0 && s.sor_omega < 2.0) {
            return Err(Error::Param { key: "sor_omega".into(), reason: format!("{} is outside (0, 2)", s.sor_omega) });
        }
        if !(s.pcg_tol > 0.0 && s.pcg_tol < 1.0) {
            return Err(Error::Param { key: "pcg_tol".into(), reason: format!("{} is outside (0, 1)", s.pcg_tol) });
        }
        Ok(())
    }
}
