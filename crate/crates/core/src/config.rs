//! Flat `key = value` run configuration.
//!
//! ```text
//! # ellipse run
//! mode = run
//! Q = 1
//! alpha = 1
//! beta = 0.1
//! epsilon = 0.04
//! dt = 1e-3
//! T = 45
//! h_fine = 0.0048
//! domain = 0, 0, 5, 5
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::mesh::Rect;
use crate::params::{InitialShape, ModelParams, SimParams, SolverSettings, SweepOrder, ZoneTargets};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Run,
    Radial,
    Oracle,
    Sweep,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Radial => "radial",
            Mode::Oracle => "oracle",
            Mode::Sweep => "sweep",
        }
    }
}

/// Time step given directly or as a multiple of `h_fine`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeStep {
    Absolute(f64),
    FactorOfFineSize(f64),
}

/// Fine-zone size given directly or as a multiple of `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FineSize {
    Absolute(f64),
    FactorOfEpsilon(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RadiusMethod {
    /// Zero crossing along the positive `x1` axis.
    #[default]
    Ray,
    /// Radius of the disc with equal tumour area.
    Area,
}

/// Parameter varied by a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Q,
    Alpha,
    Beta,
    Epsilon,
    HFactor,
    DtFactor,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] =
        [SweepAxis::Q, SweepAxis::Alpha, SweepAxis::Beta, SweepAxis::Epsilon, SweepAxis::HFactor, SweepAxis::DtFactor];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Q => "Q",
            SweepAxis::Alpha => "alpha",
            SweepAxis::Beta => "beta",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::HFactor => "h_factor",
            SweepAxis::DtFactor => "dt_factor",
        }
    }

    pub fn key(self) -> String {
        format!("sweep.{}", self.name())
    }

    fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| key.strip_prefix("sweep.") == Some(a.name()))
    }

    /// Sets this parameter on `c`. Sweeping `h_factor` or `dt_factor`
    /// switches the corresponding size to its relative form.
    pub fn apply(self, c: &mut RunConfig, v: f64) {
        match self {
            SweepAxis::Q => c.q = v,
            SweepAxis::Alpha => c.alpha = v,
            SweepAxis::Beta => c.beta = v,
            SweepAxis::Epsilon => c.epsilon = v,
            SweepAxis::HFactor => c.h_fine = FineSize::FactorOfEpsilon(v),
            SweepAxis::DtFactor => c.dt = TimeStep::FactorOfFineSize(v),
        }
    }

    /// Current value of this parameter in `c`.
    pub fn value(self, c: &RunConfig) -> f64 {
        match self {
            SweepAxis::Q => c.q,
            SweepAxis::Alpha => c.alpha,
            SweepAxis::Beta => c.beta,
            SweepAxis::Epsilon => c.epsilon,
            SweepAxis::HFactor => c.resolved_h_fine() / c.epsilon,
            SweepAxis::DtFactor => c.resolved_dt() / c.resolved_h_fine(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub dt: TimeStep,
    pub t_final: f64,
    pub domain: Rect,
    pub h_fine: FineSize,
    pub h_medium: Option<f64>,
    pub h_coarse: Option<f64>,
    pub initial: InitialShape,
    pub u0: f64,
    pub output_dir: PathBuf,
    pub snapshot_every: Option<usize>,
    pub sample_interval: f64,
    pub remesh_every: usize,
    pub pcg_tol: f64,
    pub sor_omega: f64,
    pub sor_tol: f64,
    pub sor_max_iter: usize,
    pub sweep_order: SweepOrder,
    /// Write `u` as NaN where `phi = -1` in snapshots.
    pub mask_pressure: bool,
    pub radius_method: RadiusMethod,
    /// Swept parameters in the order they appear in the file.
    pub sweep: Vec<(SweepAxis, Vec<f64>)>,
}

/// Keys that must be present in every configuration.
pub const REQUIRED_KEYS: [&str; 8] = ["Q", "alpha", "beta", "epsilon", "T", "dt | dt_factor", "h_fine | h_factor", "domain"];

const KNOWN_KEYS: [&str; 27] = [
    "mode",
    "Q",
    "alpha",
    "beta",
    "epsilon",
    "dt",
    "dt_factor",
    "T",
    "domain",
    "h_fine",
    "h_factor",
    "h_medium",
    "h_coarse",
    "initial",
    "R0",
    "u0",
    "output_dir",
    "snapshot_every",
    "sample_interval",
    "remesh_every",
    "pcg_tol",
    "sor_omega",
    "sor_tol",
    "sor_max_iter",
    "sweep_order",
    "mask_pressure",
    "radius_method",
];

/// Default medium-zone size, capped at `2^4 h_fine`.
pub const DEFAULT_H_MEDIUM: f64 = 0.02;
/// Default coarse-zone size, capped at `2^7 h_medium`.
pub const DEFAULT_H_COARSE: f64 = 2.5;

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::Param { key: key.to_string(), reason: reason.into() }
}

fn num(key: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| bad(key, format!("`{raw}` is not a number")))
}

fn count(key: &str, raw: &str) -> Result<usize> {
    raw.parse::<usize>().map_err(|_| bad(key, format!("`{raw}` is not a nonnegative integer")))
}

fn list(key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',').map(|s| num(key, s.trim())).collect()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    pub fn model(&self) -> ModelParams {
        ModelParams { q: self.q, alpha: self.alpha, beta: self.beta, epsilon: self.epsilon, dt: self.resolved_dt() }
    }

    pub fn resolved_h_fine(&self) -> f64 {
        match self.h_fine {
            FineSize::Absolute(h) => h,
            FineSize::FactorOfEpsilon(f) => f * self.epsilon,
        }
    }

    pub fn resolved_dt(&self) -> f64 {
        match self.dt {
            TimeStep::Absolute(dt) => dt,
            TimeStep::FactorOfFineSize(f) => f * self.resolved_h_fine(),
        }
    }

    pub fn zone_targets(&self) -> ZoneTargets {
        let fine = self.resolved_h_fine();
        let medium = self.h_medium.unwrap_or_else(|| DEFAULT_H_MEDIUM.min(16.0 * fine).max(fine));
        let coarse = self.h_coarse.unwrap_or_else(|| DEFAULT_H_COARSE.min(128.0 * medium).max(medium));
        ZoneTargets { fine, medium, coarse }
    }

    pub fn sim_params(&self) -> SimParams {
        let mut p = SimParams::new(self.model(), self.t_final, self.domain, self.zone_targets(), self.initial);
        p.u0 = self.u0;
        p.remesh_every = self.remesh_every;
        p.snapshot_every = self.snapshot_every;
        p.sample_interval = self.sample_interval;
        p.solver = SolverSettings {
            pcg_tol: self.pcg_tol,
            sor_omega: self.sor_omega,
            sor_tol: self.sor_tol,
            sor_max_iter: self.sor_max_iter,
            sweep_order: self.sweep_order,
            ..SolverSettings::default()
        };
        p
    }

    /// Checks the derived simulation parameters, naming the offending key.
    pub fn validate(&self) -> Result<()> {
        let named = |e: Error| match e {
            Error::TimeStepTooLarge { dt, limit } => bad(
                match self.dt {
                    TimeStep::Absolute(_) => "dt",
                    TimeStep::FactorOfFineSize(_) => "dt_factor",
                },
                format!("time step {dt} must be below epsilon^2/beta = {limit}"),
            ),
            other => other,
        };
        self.sim_params().validate().map_err(named)?;
        if self.mode == Mode::Sweep {
            if self.sweep.is_empty() {
                return Err(bad("sweep", "mode = sweep needs at least one sweep.* axis"));
            }
            for cell in self.sweep_cells() {
                cell.sim_params().validate().map_err(named)?;
            }
        }
        if matches!(self.mode, Mode::Radial) && !matches!(self.initial, InitialShape::Circle { .. }) {
            return Err(bad("initial", "radial mode needs initial = circle"));
        }
        Ok(())
    }

    /// Every configuration of the sweep's Cartesian product, last axis fastest.
    pub fn sweep_cells(&self) -> Vec<RunConfig> {
        let mut base = self.clone();
        base.mode = Mode::Radial;
        base.sweep.clear();
        let mut cells = vec![base];
        for (axis, values) in &self.sweep {
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    values.iter().map(move |&v| {
                        let mut c = c.clone();
                        axis.apply(&mut c, v);
                        c
                    })
                })
                .collect();
        }
        cells
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse { line: i + 1, message: format!("expected `key = value`, got `{line}`") });
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) && SweepAxis::from_key(&key).is_none() {
                return Err(Error::Parse { line: i + 1, message: format!("unknown key `{key}`") });
            }
            if entries.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(Error::Parse { line: i + 1, message: format!("duplicate key `{key}`") });
            }
        }
        let get = |k: &str| entries.get(k).map(|(_, v)| v.as_str());

        let mut missing = Vec::new();
        for key in REQUIRED_KEYS {
            if !key.split(" | ").any(|k| entries.contains_key(k)) {
                missing.push(key.to_string());
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingKeys(missing));
        }
        let req = |k: &str| num(k, get(k).unwrap());
        let opt = |k: &str, default: f64| get(k).map_or(Ok(default), |v| num(k, v));

        let mode = match get("mode").unwrap_or("run") {
            "run" => Mode::Run,
            "radial" => Mode::Radial,
            "oracle" => Mode::Oracle,
            "sweep" => Mode::Sweep,
            other => return Err(bad("mode", format!("unknown mode `{other}`"))),
        };
        let dt = match (get("dt"), get("dt_factor")) {
            (Some(_), Some(_)) => return Err(bad("dt", "give either dt or dt_factor, not both")),
            (Some(v), None) => TimeStep::Absolute(num("dt", v)?),
            (None, Some(v)) => TimeStep::FactorOfFineSize(num("dt_factor", v)?),
            (None, None) => unreachable!(),
        };
        let h_fine = match (get("h_fine"), get("h_factor")) {
            (Some(_), Some(_)) => return Err(bad("h_fine", "give either h_fine or h_factor, not both")),
            (Some(v), None) => FineSize::Absolute(num("h_fine", v)?),
            (None, Some(v)) => FineSize::FactorOfEpsilon(num("h_factor", v)?),
            (None, None) => unreachable!(),
        };
        let corners = list("domain", get("domain").unwrap())?;
        if corners.len() != 4 {
            return Err(bad("domain", "expected `xmin, ymin, xmax, ymax`"));
        }
        let domain = Rect::new([corners[0], corners[1]], [corners[2], corners[3]]).map_err(|e| bad("domain", e.to_string()))?;
        let initial = match get("initial").unwrap_or("ellipse") {
            "ellipse" => {
                if entries.contains_key("R0") {
                    return Err(bad("R0", "only used with initial = circle"));
                }
                InitialShape::Ellipse
            }
            "circle" => InitialShape::Circle { r0: opt("R0", 1.0)? },
            other => return Err(bad("initial", format!("unknown shape `{other}`"))),
        };
        let sweep_order = match get("sweep_order").unwrap_or("ascending") {
            "ascending" => SweepOrder::Ascending,
            "colored" => SweepOrder::Colored,
            other => return Err(bad("sweep_order", format!("unknown order `{other}`"))),
        };
        let radius_method = match get("radius_method").unwrap_or("ray") {
            "ray" => RadiusMethod::Ray,
            "area" => RadiusMethod::Area,
            other => return Err(bad("radius_method", format!("unknown method `{other}`"))),
        };
        let mask_pressure = match get("mask_pressure").unwrap_or("true") {
            "true" => true,
            "false" => false,
            other => return Err(bad("mask_pressure", format!("expected true or false, got `{other}`"))),
        };
        let defaults = SolverSettings::default();
        let mut sweep_keys: Vec<(usize, SweepAxis, &str)> = entries
            .iter()
            .filter_map(|(k, (line, v))| SweepAxis::from_key(k).map(|a| (*line, a, v.as_str())))
            .collect();
        sweep_keys.sort_by_key(|&(line, _, _)| line);
        let sweep = sweep_keys
            .into_iter()
            .map(|(_, axis, v)| {
                let values = list(&axis.key(), v)?;
                if values.is_empty() {
                    return Err(bad(&axis.key(), "needs at least one value"));
                }
                Ok((axis, values))
            })
            .collect::<Result<Vec<_>>>()?;
        let config = RunConfig {
            mode,
            q: req("Q")?,
            alpha: req("alpha")?,
            beta: req("beta")?,
            epsilon: req("epsilon")?,
            dt,
            t_final: req("T")?,
            domain,
            h_fine,
            h_medium: get("h_medium").map(|v| num("h_medium", v)).transpose()?,
            h_coarse: get("h_coarse").map(|v| num("h_coarse", v)).transpose()?,
            initial,
            u0: opt("u0", 0.0)?,
            output_dir: PathBuf::from(get("output_dir").unwrap_or("out")),
            snapshot_every: get("snapshot_every").map(|v| count("snapshot_every", v)).transpose()?,
            sample_interval: opt("sample_interval", 0.01)?,
            remesh_every: get("remesh_every").map_or(Ok(1), |v| count("remesh_every", v))?,
            pcg_tol: opt("pcg_tol", defaults.pcg_tol)?,
            sor_omega: opt("sor_omega", defaults.sor_omega)?,
            sor_tol: opt("sor_tol", defaults.sor_tol)?,
            sor_max_iter: get("sor_max_iter").map_or(Ok(defaults.sor_max_iter), |v| count("sor_max_iter", v))?,
            sweep_order,
            mask_pressure,
            radius_method,
            sweep,
        };
        config.validate()?;
        Ok(config)
    }

    /// Canonical text form; parsing it yields an equal configuration.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("mode", self.mode.name().into());
        kv("Q", self.q.to_string());
        kv("alpha", self.alpha.to_string());
        kv("beta", self.beta.to_string());
        kv("epsilon", self.epsilon.to_string());
        match self.dt {
            TimeStep::Absolute(v) => kv("dt", v.to_string()),
            TimeStep::FactorOfFineSize(v) => kv("dt_factor", v.to_string()),
        }
        kv("T", self.t_final.to_string());
        let d = self.domain;
        kv("domain", fmt_list(&[d.min[0], d.min[1], d.max[0], d.max[1]]));
        match self.h_fine {
            FineSize::Absolute(v) => kv("h_fine", v.to_string()),
            FineSize::FactorOfEpsilon(v) => kv("h_factor", v.to_string()),
        }
        if let Some(v) = self.h_medium {
            kv("h_medium", v.to_string());
        }
        if let Some(v) = self.h_coarse {
            kv("h_coarse", v.to_string());
        }
        match self.initial {
            InitialShape::Ellipse => kv("initial", "ellipse".into()),
            InitialShape::Circle { r0 } => {
                kv("initial", "circle".into());
                kv("R0", r0.to_string());
            }
        }
        kv("u0", self.u0.to_string());
        kv("output_dir", self.output_dir.display().to_string());
        if let Some(v) = self.snapshot_every {
            kv("snapshot_every", v.to_string());
        }
        kv("sample_interval", self.sample_interval.to_string());
        kv("remesh_every", self.remesh_every.to_string());
        kv("pcg_tol", self.pcg_tol.to_string());
        kv("sor_omega", self.sor_omega.to_string());
        kv("sor_tol", self.sor_tol.to_string());
        kv("sor_max_iter", self.sor_max_iter.to_string());
        kv(
            "sweep_order",
            match self.sweep_order {
                SweepOrder::Ascending => "ascending",
                SweepOrder::Colored => "colored",
            }
            .into(),
        );
        kv("mask_pressure", self.mask_pressure.to_string());
        kv(
            "radius_method",
            match self.radius_method {
                RadiusMethod::Ray => "ray",
                RadiusMethod::Area => "area",
            }
            .into(),
        );
        for (axis, values) in &self.sweep {
            kv(&axis.key(), fmt_list(values));
        }
        s
    }
}

/// Text printed by `--help`: every key with its meaning.
pub const SCHEMA: &str = "\
Configuration: one `key = value` per line, `#` starts a comment.
Required:
  Q, alpha, beta, epsilon      model parameters (all > 0)
  T                            final time
  dt | dt_factor               time step, or multiple of h_fine (dt < epsilon^2/beta)
  h_fine | h_factor            fine-zone diameter, or multiple of epsilon
  domain = xmin, ymin, xmax, ymax   square domain; lower-left corner at the origin means
                               the positive quadrant of a symmetric problem
Optional:
  mode = run | radial | oracle | sweep    (run)
  h_medium (min(0.02, 16 h_fine)), h_coarse (min(2.5, 128 h_medium))
  initial = ellipse | circle (ellipse), R0 (1, circle only), u0 (0)
  output_dir (out), snapshot_every (N/50), sample_interval (0.01), remesh_every (1)
  pcg_tol (1e-10), sor_omega (1.5), sor_tol (1e-8), sor_max_iter (20000)
  sweep_order = ascending | colored, mask_pressure = true | false, radius_method = ray | area
  sweep.Q, sweep.alpha, sweep.beta, sweep.epsilon, sweep.h_factor, sweep.dt_factor
                               comma-separated values swept as a Cartesian product;
                               the last axis listed becomes the table columns
";
