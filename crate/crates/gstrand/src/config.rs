//! JSON scenario configuration.
//!
//! Parsing is strict (unknown keys are rejected) and [`ScenarioConfig::validate`]
//! runs every check that can be made without integrating, so a bad file never
//! starts a run.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use gstrand_core::algebra::So3Vector;
use gstrand_core::analytic::{Branch, Direction, WaveProfile, WaveShape};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

/// Largest accepted `dt / ds`.
pub const MAX_CFL: f64 = 0.5;

const PERIODICITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    SpinChain,
    Chiral,
    AnisoUv,
    AnisoXy,
    Peakon,
    PeakonSingleExact,
    PeakonCollisionExact,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::SpinChain,
        ModelKind::Chiral,
        ModelKind::AnisoUv,
        ModelKind::AnisoXy,
        ModelKind::Peakon,
        ModelKind::PeakonSingleExact,
        ModelKind::PeakonCollisionExact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::SpinChain => "spin_chain",
            ModelKind::Chiral => "chiral",
            ModelKind::AnisoUv => "aniso_uv",
            ModelKind::AnisoXy => "aniso_xy",
            ModelKind::Peakon => "peakon",
            ModelKind::PeakonSingleExact => "peakon_single_exact",
            ModelKind::PeakonCollisionExact => "peakon_collision_exact",
        }
    }

    pub fn is_peakon(self) -> bool {
        matches!(
            self,
            ModelKind::Peakon | ModelKind::PeakonSingleExact | ModelKind::PeakonCollisionExact
        )
    }

    pub fn is_aniso(self) -> bool {
        matches!(self, ModelKind::AnisoUv | ModelKind::AnisoXy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Period S of the s-domain.
    pub length: f64,
    pub nodes: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_stencil_order")]
    pub stencil_order: u8,
}

fn default_stencil_order() -> u8 {
    2
}

impl GridConfig {
    pub fn spacing(&self) -> f64 {
        self.length / self.nodes as f64
    }

    /// Number of steps and the step actually taken, `t_end / steps`.
    pub fn steps(&self) -> (usize, f64) {
        let steps = ((self.t_end / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (steps, self.t_end / steps as f64)
    }
}

/// `amplitude · basis(wavenumber · s + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub amplitude: f64,
    #[serde(default)]
    pub wavenumber: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub basis: Basis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Sin,
    #[default]
    Cos,
}

impl Term {
    pub fn constant(value: f64) -> Self {
        Term {
            amplitude: value,
            wavenumber: 0.0,
            phase: 0.0,
            basis: Basis::Cos,
        }
    }

    pub fn sin(amplitude: f64, wavenumber: f64) -> Self {
        Term {
            amplitude,
            wavenumber,
            phase: 0.0,
            basis: Basis::Sin,
        }
    }

    pub fn cos(amplitude: f64, wavenumber: f64) -> Self {
        Term {
            amplitude,
            wavenumber,
            phase: 0.0,
            basis: Basis::Cos,
        }
    }

    fn eval(&self, s: f64) -> f64 {
        let arg = self.wavenumber * s + self.phase;
        self.amplitude
            * match self.basis {
                Basis::Sin => arg.sin(),
                Basis::Cos => arg.cos(),
            }
    }
}

/// A periodic scalar profile in s: a finite sum of [`Term`]s.
pub type Series = Vec<Term>;

pub fn eval_series(series: &[Term], s: f64) -> f64 {
    series.iter().map(|t| t.eval(s)).sum()
}

/// Three component series of an so(3)-valued field.
pub type VectorSeries = [Series; 3];

pub fn eval_vector(series: &VectorSeries, s: f64) -> So3Vector {
    So3Vector::new(
        eval_series(&series[0], s),
        eval_series(&series[1], s),
        eval_series(&series[2], s),
    )
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<VectorSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<VectorSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<VectorSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<VectorSeries>,
    /// Project X and Y onto the unit sphere node by node (aniso_xy only).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unit_sphere: bool,
    /// Peakon positions, one series per peakon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Series>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Series>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<Series>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Sine {
        amplitude: f64,
        wavenumber: f64,
        #[serde(default)]
        phase: f64,
    },
    Linear {
        slope: f64,
        #[serde(default)]
        offset: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSpec {
    Right,
    Left,
}

/// Wave-equation solution `h(s, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant {
        value: f64,
    },
    Traveling {
        shape: ShapeSpec,
        direction: DirectionSpec,
    },
    Standing {
        amplitude: f64,
        wavenumber: f64,
    },
    Superposition {
        parts: Vec<ProfileSpec>,
    },
}

impl ProfileSpec {
    pub fn to_profile(&self) -> WaveProfile {
        match self {
            ProfileSpec::Constant { value } => WaveProfile::Constant(*value),
            ProfileSpec::Traveling { shape, direction } => {
                let shape = match *shape {
                    ShapeSpec::Sine {
                        amplitude,
                        wavenumber,
                        phase,
                    } => WaveShape::Sine {
                        amplitude,
                        wavenumber,
                        phase,
                    },
                    ShapeSpec::Linear { slope, offset } => WaveShape::Linear { slope, offset },
                };
                let direction = match direction {
                    DirectionSpec::Right => Direction::Right,
                    DirectionSpec::Left => Direction::Left,
                };
                WaveProfile::traveling(shape, direction)
            }
            ProfileSpec::Standing {
                amplitude,
                wavenumber,
            } => WaveProfile::standing(*amplitude, *wavenumber),
            ProfileSpec::Superposition { parts } => {
                WaveProfile::Superposition(parts.iter().map(ProfileSpec::to_profile).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchSpec {
    Plus,
    Minus,
}

impl From<BranchSpec> for Branch {
    fn from(b: BranchSpec) -> Self {
        match b {
            BranchSpec::Plus => Branch::Plus,
            BranchSpec::Minus => Branch::Minus,
        }
    }
}

/// Model parameters; which ones are required depends on the model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia_a: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia_b: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anisotropy: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peakon_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_condition: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiagnosticSpec {
    /// Discrete `v_t − u_s + u × v` along the trajectory.
    ZeroCurvature,
    /// Lax-pair zero-curvature residual per spectral parameter.
    Lax {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambdas: Option<Vec<f64>>,
    },
    InvariantDrift,
    SConstraint,
    ConservationSums,
    /// Distance to the closed-form solution (exact peakon models only).
    ManufacturedError,
}

impl DiagnosticSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DiagnosticSpec::ZeroCurvature => "zero_curvature",
            DiagnosticSpec::Lax { .. } => "lax",
            DiagnosticSpec::InvariantDrift => "invariant_drift",
            DiagnosticSpec::SConstraint => "s_constraint",
            DiagnosticSpec::ConservationSums => "conservation_sums",
            DiagnosticSpec::ManufacturedError => "manufactured_error",
        }
    }

    fn supports(&self, model: ModelKind) -> bool {
        use ModelKind::*;
        match self {
            DiagnosticSpec::ZeroCurvature => matches!(model, SpinChain | Chiral),
            DiagnosticSpec::Lax { .. } => matches!(model, Chiral | AnisoUv | AnisoXy),
            DiagnosticSpec::InvariantDrift => model.is_aniso(),
            DiagnosticSpec::SConstraint => model.is_peakon(),
            DiagnosticSpec::ConservationSums => true,
            DiagnosticSpec::ManufacturedError => {
                matches!(model, PeakonSingleExact | PeakonCollisionExact)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    /// Record every `cadence` steps.
    #[serde(default = "default_cadence")]
    pub cadence: usize,
    /// Write per-node field CSVs in addition to diagnostics.
    #[serde(default = "default_true")]
    pub fields: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: None,
            cadence: 1,
            fields: true,
        }
    }
}

fn default_cadence() -> usize {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    pub grid: GridConfig,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub initial: InitialData,
    #[serde(default)]
    pub diagnostics: Vec<DiagnosticSpec>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Validation(msg.into())
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| invalid(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Every check that does not require integrating.
    pub fn validate(&self) -> Result<(), HarnessError> {
        self.validate_grid()?;
        self.validate_params()?;
        self.validate_initial()?;
        self.validate_diagnostics()?;
        if self.output.cadence == 0 {
            return Err(invalid("output.cadence must be at least 1"));
        }
        Ok(())
    }

    fn validate_grid(&self) -> Result<(), HarnessError> {
        let g = &self.grid;
        gstrand_core::grid::PeriodicGrid::new(g.length, g.nodes)
            .map_err(|e| invalid(format!("grid: {e}")))?;
        gstrand_core::grid::DerivativeStencil::new(g.stencil_order)
            .map_err(|e| invalid(format!("grid: {e}")))?;
        if !(g.dt.is_finite() && g.dt > 0.0) {
            return Err(invalid("grid.dt must be positive"));
        }
        if !(g.t_end.is_finite() && g.t_end >= g.dt) {
            return Err(invalid("grid.t_end must be at least grid.dt"));
        }
        let cfl = g.dt / g.spacing();
        if cfl > MAX_CFL {
            return Err(invalid(format!("CFL number dt/ds = {cfl} exceeds {MAX_CFL}")));
        }
        Ok(())
    }

    fn validate_params(&self) -> Result<(), HarnessError> {
        use ModelKind::*;
        let p = &self.params;
        let model = self.model;
        let allowed = |name: &str| -> bool {
            match name {
                "inertia_a" | "inertia_b" => model == SpinChain,
                "anisotropy" => model.is_aniso(),
                "peakon_count" => model == Peakon,
                "profile" => matches!(model, PeakonSingleExact | PeakonCollisionExact),
                "branch" => model == PeakonCollisionExact,
                "min_gap" | "max_condition" => model.is_peakon(),
                _ => false,
            }
        };
        let present = [
            ("inertia_a", p.inertia_a.is_some()),
            ("inertia_b", p.inertia_b.is_some()),
            ("anisotropy", p.anisotropy.is_some()),
            ("peakon_count", p.peakon_count.is_some()),
            ("profile", p.profile.is_some()),
            ("branch", p.branch.is_some()),
            ("min_gap", p.min_gap.is_some()),
            ("max_condition", p.max_condition.is_some()),
        ];
        for (name, set) in present {
            if set && !allowed(name) {
                return Err(invalid(format!(
                    "params.{name} does not apply to model {}",
                    model.name()
                )));
            }
        }
        let require = |name: &str, set: bool| {
            if set {
                Ok(())
            } else {
                Err(invalid(format!("model {} requires params.{name}", model.name())))
            }
        };
        match model {
            SpinChain => {
                require("inertia_a", p.inertia_a.is_some())?;
                require("inertia_b", p.inertia_b.is_some())?;
                let a = p.inertia_a.unwrap();
                let b = p.inertia_b.unwrap();
                gstrand_core::so3_dynamics::SpinChainParams::new(
                    gstrand_core::algebra::DiagonalParams::inertia_a(a)
                        .map_err(|e| invalid(format!("params.inertia_a: {e}")))?,
                    gstrand_core::algebra::DiagonalParams::inertia_b(b)
                        .map_err(|e| invalid(format!("params.inertia_b: {e}")))?,
                )
                .map_err(|e| invalid(format!("params: {e}")))?;
            }
            AnisoUv | AnisoXy => {
                require("anisotropy", p.anisotropy.is_some())?;
                gstrand_core::algebra::DiagonalParams::anisotropy(p.anisotropy.unwrap())
                    .map_err(|e| invalid(format!("params.anisotropy: {e}")))?;
            }
            Peakon => {
                require("peakon_count", p.peakon_count.is_some())?;
                let count = p.peakon_count.unwrap();
                if !(1..=8).contains(&count) {
                    return Err(invalid("params.peakon_count must be between 1 and 8"));
                }
            }
            PeakonSingleExact | PeakonCollisionExact => {
                require("profile", p.profile.is_some())?;
                if model == PeakonCollisionExact {
                    require("branch", p.branch.is_some())?;
                }
                let profile = p.profile.as_ref().unwrap().to_profile();
                let profile = profile
                    .validated()
                    .map_err(|e| invalid(format!("params.profile: {e}")))?;
                self.check_profile_periodic(&profile)?;
            }
            Chiral => {}
        }
        if let Some(gap) = p.min_gap {
            if !(gap.is_finite() && gap >= 0.0) {
                return Err(invalid("params.min_gap must be finite and non-negative"));
            }
        }
        if let Some(c) = p.max_condition {
            if !(c.is_finite() && c >= 1.0) {
                return Err(invalid("params.max_condition must be finite and at least 1"));
            }
        }
        Ok(())
    }

    fn check_profile_periodic(&self, profile: &WaveProfile) -> Result<(), HarnessError> {
        let length = self.grid.length;
        for k in 0..5 {
            let t = k as f64 * self.grid.t_end / 4.0;
            for j in 0..4 {
                let s = j as f64 * length / 4.0;
                let (a, b) = (profile.eval(s, t), profile.eval(s + length, t));
                let gap = (a.h - b.h)
                    .abs()
                    .max((a.h_t - b.h_t).abs())
                    .max((a.h_s - b.h_s).abs());
                if gap > PERIODICITY_TOLERANCE * (1.0 + a.h.abs()) {
                    return Err(invalid("params.profile is not periodic in s over grid.length"));
                }
            }
        }
        Ok(())
    }

    fn check_series(&self, name: &str, series: &[Term]) -> Result<(), HarnessError> {
        for term in series {
            if !(term.amplitude.is_finite() && term.wavenumber.is_finite() && term.phase.is_finite()) {
                return Err(invalid(format!("initial.{name}: non-finite term")));
            }
            let cycles = term.wavenumber * self.grid.length / TAU;
            if (cycles - cycles.round()).abs() > PERIODICITY_TOLERANCE {
                return Err(invalid(format!(
                    "initial.{name}: wavenumber {} is not periodic over grid.length",
                    term.wavenumber
                )));
            }
        }
        Ok(())
    }

    fn validate_initial(&self) -> Result<(), HarnessError> {
        use ModelKind::*;
        let init = &self.initial;
        let present = [
            ("u", init.u.is_some()),
            ("v", init.v.is_some()),
            ("x", init.x.is_some()),
            ("y", init.y.is_some()),
            ("q", init.q.is_some()),
            ("m", init.m.is_some()),
            ("n", init.n.is_some()),
        ];
        let expected: &[&str] = match self.model {
            SpinChain | Chiral | AnisoUv => &["u", "v"],
            AnisoXy => &["x", "y"],
            Peakon => &["q", "m", "n"],
            PeakonSingleExact | PeakonCollisionExact => &[],
        };
        for (name, set) in present {
            let wanted = expected.contains(&name);
            if set != wanted {
                return Err(invalid(if set {
                    format!("initial.{name} does not apply to model {}", self.model.name())
                } else {
                    format!("model {} requires initial.{name}", self.model.name())
                }));
            }
        }
        if init.unit_sphere && self.model != AnisoXy {
            return Err(invalid("initial.unit_sphere applies to model aniso_xy only"));
        }
        for (name, field) in [("u", &init.u), ("v", &init.v), ("x", &init.x), ("y", &init.y)] {
            if let Some(components) = field {
                for c in components {
                    self.check_series(name, c)?;
                }
            }
        }
        if self.model == Peakon {
            let count = self.params.peakon_count.unwrap_or(0);
            for (name, field) in [("q", &init.q), ("m", &init.m), ("n", &init.n)] {
                let field = field.as_ref().unwrap();
                if field.len() != count {
                    return Err(invalid(format!(
                        "initial.{name} has {} entries, params.peakon_count is {count}",
                        field.len()
                    )));
                }
                for series in field {
                    self.check_series(name, series)?;
                }
            }
        }
        Ok(())
    }

    fn validate_diagnostics(&self) -> Result<(), HarnessError> {
        let mut seen = Vec::new();
        for d in &self.diagnostics {
            if seen.contains(&d.name()) {
                return Err(invalid(format!("diagnostic {} requested twice", d.name())));
            }
            seen.push(d.name());
            if !d.supports(self.model) {
                return Err(invalid(format!(
                    "diagnostic {} does not apply to model {}",
                    d.name(),
                    self.model.name()
                )));
            }
            if let DiagnosticSpec::Lax { lambdas: Some(l) } = d {
                if l.is_empty() || l.iter().any(|x| !x.is_finite()) {
                    return Err(invalid("lax.lambdas must be a non-empty list of finite numbers"));
                }
                if self.model == ModelKind::Chiral && l.contains(&0.0) {
                    return Err(invalid("lax.lambdas: the chiral pair has a pole at 0"));
                }
            }
        }
        Ok(())
    }

    /// Requested diagnostics plus the manufactured error of exact models.
    pub fn effective_diagnostics(&self) -> Vec<DiagnosticSpec> {
        let mut list = self.diagnostics.clone();
        let exact = matches!(
            self.model,
            ModelKind::PeakonSingleExact | ModelKind::PeakonCollisionExact
        );
        if exact && !list.contains(&DiagnosticSpec::ManufacturedError) {
            list.push(DiagnosticSpec::ManufacturedError);
        }
        list
    }

    /// The same scenario with `(ds, dt)` halved `level` times and the output
    /// cadence scaled so records land on the same times.
    pub fn refined(&self, level: u32) -> Self {
        let factor = 1usize << level;
        let mut cfg = self.clone();
        cfg.grid.nodes *= factor;
        cfg.grid.dt /= factor as f64;
        cfg.output.cadence *= factor;
        cfg
    }
}
