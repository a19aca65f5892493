//! Time integration of a configured scenario with diagnostics and output.

use std::path::{Path, PathBuf};

use gstrand_core::algebra::{DiagonalParams, So3Vector};
use gstrand_core::analytic::{collision_exact, single_peakon_exact, CollisionSolution, WaveProfile};
use gstrand_core::grid::{DerivativeStencil, PeriodicGrid};
use gstrand_core::integrability::{
    aniso_lax_normalized, chiral_lax, invariant_drift, zero_curvature_residual, ANISO_LAMBDAS, CHIRAL_LAMBDAS,
};
use gstrand_core::integrate::rk4_step;
use gstrand_core::peakon::{peakon_rhs_with, s_constraint_residual, PeakonGuards, PeakonState};
use gstrand_core::so3_dynamics::{
    aniso_rhs_uv, aniso_rhs_xy, chiral_rhs, compatibility_residual, from_xy, spin_chain_rhs, to_xy,
    So3StrandState, SpinChainParams, XYState,
};
use gstrand_core::Error as CoreError;

use crate::config::{eval_series, eval_vector, DiagnosticSpec, ModelKind, ScenarioConfig};
use crate::error::HarnessError;
use crate::report::{DiagnosticSeries, FieldWriter, RunReport, RunStatus, SeriesKind};

enum Reference {
    Single(WaveProfile),
    Collision(CollisionSolution),
}

enum System {
    SpinChain(SpinChainParams),
    Chiral,
    AnisoUv(DiagonalParams),
    AnisoXy(DiagonalParams),
    Peakon {
        guards: PeakonGuards,
        reference: Option<Reference>,
    },
}

#[derive(Clone)]
enum State {
    Strand(So3StrandState),
    Xy(XYState),
    Peakon(PeakonState),
}

impl State {
    /// (u, v) view used by the so(3) diagnostics.
    fn strand(&self) -> Option<So3StrandState> {
        match self {
            State::Strand(s) => Some(s.clone()),
            State::Xy(xy) => Some(from_xy(xy)),
            State::Peakon(_) => None,
        }
    }

    fn xy(&self) -> Option<XYState> {
        match self {
            State::Strand(s) => Some(to_xy(s)),
            State::Xy(xy) => Some(xy.clone()),
            State::Peakon(_) => None,
        }
    }
}

struct Setup {
    system: System,
    grid: PeriodicGrid,
    stencil: DerivativeStencil,
}

fn core_invalid(context: &str, e: CoreError) -> HarnessError {
    HarnessError::Validation(format!("{context}: {e}"))
}

impl Setup {
    fn new(cfg: &ScenarioConfig) -> Result<Self, HarnessError> {
        let grid = PeriodicGrid::new(cfg.grid.length, cfg.grid.nodes).map_err(|e| core_invalid("grid", e))?;
        let stencil = DerivativeStencil::new(cfg.grid.stencil_order).map_err(|e| core_invalid("grid", e))?;
        let p = &cfg.params;
        let guards = PeakonGuards {
            min_gap: p.min_gap.unwrap_or(PeakonGuards::default().min_gap),
            max_condition: p.max_condition.unwrap_or(PeakonGuards::default().max_condition),
        };
        let profile = || -> Result<WaveProfile, HarnessError> {
            let spec = p
                .profile
                .as_ref()
                .ok_or_else(|| HarnessError::Validation("missing profile".into()))?;
            spec.to_profile()
                .validated()
                .map_err(|e| core_invalid("params.profile", e))
        };
        let system = match cfg.model {
            ModelKind::SpinChain => {
                let a = DiagonalParams::inertia_a(p.inertia_a.unwrap_or_default())
                    .map_err(|e| core_invalid("params.inertia_a", e))?;
                let b = DiagonalParams::inertia_b(p.inertia_b.unwrap_or_default())
                    .map_err(|e| core_invalid("params.inertia_b", e))?;
                System::SpinChain(SpinChainParams::new(a, b).map_err(|e| core_invalid("params", e))?)
            }
            ModelKind::Chiral => System::Chiral,
            ModelKind::AnisoUv | ModelKind::AnisoXy => {
                let d = DiagonalParams::anisotropy(p.anisotropy.unwrap_or_default())
                    .map_err(|e| core_invalid("params.anisotropy", e))?;
                if cfg.model == ModelKind::AnisoUv {
                    System::AnisoUv(d)
                } else {
                    System::AnisoXy(d)
                }
            }
            ModelKind::Peakon => System::Peakon {
                guards,
                reference: None,
            },
            ModelKind::PeakonSingleExact => System::Peakon {
                guards,
                reference: Some(Reference::Single(profile()?)),
            },
            ModelKind::PeakonCollisionExact => {
                let branch = p
                    .branch
                    .ok_or_else(|| HarnessError::Validation("missing branch".into()))?;
                System::Peakon {
                    guards,
                    reference: Some(Reference::Collision(CollisionSolution::new(
                        profile()?,
                        branch.into(),
                    ))),
                }
            }
        };
        Ok(Setup {
            system,
            grid,
            stencil,
        })
    }

    fn initial_state(&self, cfg: &ScenarioConfig) -> Result<State, CoreError> {
        let init = &cfg.initial;
        match &self.system {
            System::SpinChain(_) | System::Chiral | System::AnisoUv(_) => {
                let (u, v) = (init.u.as_ref().unwrap(), init.v.as_ref().unwrap());
                Ok(State::Strand(So3StrandState::from_fn(self.grid, |s| {
                    (eval_vector(u, s), eval_vector(v, s))
                })))
            }
            System::AnisoXy(_) => {
                let (xs, ys) = (init.x.as_ref().unwrap(), init.y.as_ref().unwrap());
                let project = |w: So3Vector| {
                    if init.unit_sphere {
                        w * (1.0 / w.norm())
                    } else {
                        w
                    }
                };
                let x = self
                    .grid
                    .coordinates()
                    .map(|s| project(eval_vector(xs, s)))
                    .collect();
                let y = self
                    .grid
                    .coordinates()
                    .map(|s| project(eval_vector(ys, s)))
                    .collect();
                Ok(State::Xy(XYState::new(self.grid, x, y)?))
            }
            System::Peakon { reference: None, .. } => {
                let count = cfg.params.peakon_count.unwrap_or(0);
                let (q, m, n) = (
                    init.q.as_ref().unwrap(),
                    init.m.as_ref().unwrap(),
                    init.n.as_ref().unwrap(),
                );
                let sample =
                    |f: &Vec<crate::config::Series>, s: f64| f.iter().map(|x| eval_series(x, s)).collect();
                Ok(State::Peakon(PeakonState::from_fn(self.grid, count, |s| {
                    (sample(q, s), sample(m, s), sample(n, s))
                })?))
            }
            System::Peakon {
                reference: Some(r), ..
            } => Ok(State::Peakon(exact_peakon_state(self.grid, r, 0.0)?)),
        }
    }

    fn step(&self, state: &State, t: f64, dt: f64) -> Result<State, CoreError> {
        let st = &self.stencil;
        match (&self.system, state) {
            (System::SpinChain(p), State::Strand(s)) => {
                rk4_step(s, t, dt, |x| spin_chain_rhs(x, p, st)).map(State::Strand)
            }
            (System::Chiral, State::Strand(s)) => {
                rk4_step(s, t, dt, |x| Ok(chiral_rhs(x, st))).map(State::Strand)
            }
            (System::AnisoUv(p), State::Strand(s)) => {
                rk4_step(s, t, dt, |x| Ok(aniso_rhs_uv(x, p, st))).map(State::Strand)
            }
            (System::AnisoXy(p), State::Xy(s)) => {
                rk4_step(s, t, dt, |x| Ok(aniso_rhs_xy(x, p, st))).map(State::Xy)
            }
            (System::Peakon { guards, .. }, State::Peakon(s)) => {
                rk4_step(s, t, dt, |x| peakon_rhs_with(x, st, guards)).map(State::Peakon)
            }
            _ => unreachable!("state variant always matches its system"),
        }
    }
}

fn exact_peakon_state(grid: PeriodicGrid, reference: &Reference, t: f64) -> Result<PeakonState, CoreError> {
    match reference {
        Reference::Single(profile) => PeakonState::from_fn(grid, 1, |s| {
            let (q, m, n) = single_peakon_exact(profile, s, t);
            (vec![q], vec![m], vec![n])
        }),
        Reference::Collision(sol) => {
            let mut points = Vec::with_capacity(grid.nodes());
            for s in grid.coordinates() {
                points.push(collision_exact(sol, s, t)?);
            }
            let col = |f: fn(&gstrand_core::analytic::CollisionPoint) -> [f64; 2]| -> Vec<Vec<f64>> {
                let pairs: Vec<[f64; 2]> = points.iter().map(f).collect();
                vec![
                    pairs.iter().map(|p| p[0]).collect(),
                    pairs.iter().map(|p| p[1]).collect(),
                ]
            };
            PeakonState::new(
                grid,
                col(|p| [p.q1, p.q2]),
                col(|p| [p.m1, p.m2]),
                col(|p| [p.n1, p.n2]),
            )
        }
    }
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(
        0.0,
        |acc: f64, x| if x.is_nan() { f64::NAN } else { acc.max(x.abs()) },
    )
}

struct Monitor {
    spec: DiagnosticSpec,
    series: DiagnosticSeries,
}

impl Monitor {
    fn new(spec: DiagnosticSpec, cfg: &ScenarioConfig, state: &State) -> Self {
        let cols = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (kind, columns) = match &spec {
            DiagnosticSpec::ZeroCurvature => (SeriesKind::Residual, cols(&["residual"])),
            DiagnosticSpec::Lax { .. } => (
                SeriesKind::Residual,
                lambdas(&spec, cfg.model)
                    .iter()
                    .map(|l| format!("lambda_{l}"))
                    .collect(),
            ),
            DiagnosticSpec::InvariantDrift => (SeriesKind::Residual, cols(&["x_drift", "y_drift"])),
            DiagnosticSpec::SConstraint => (SeriesKind::Residual, cols(&["residual"])),
            DiagnosticSpec::ConservationSums => (
                SeriesKind::Conserved,
                match (cfg.model, state) {
                    (ModelKind::SpinChain, _) => cols(&["energy"]),
                    (ModelKind::Chiral, _) => cols(&["energy", "u1_sum", "u2_sum", "u3_sum"]),
                    (ModelKind::AnisoUv | ModelKind::AnisoXy, _) => cols(&["x_norm_sq_sum", "y_norm_sq_sum"]),
                    (_, State::Peakon(p)) if p.count() == 2 => cols(&["m_sum", "n_difference_sum"]),
                    _ => cols(&["m_sum"]),
                },
            ),
            DiagnosticSpec::ManufacturedError => (
                SeriesKind::Residual,
                match cfg.model {
                    ModelKind::PeakonCollisionExact => cols(&["x_error"]),
                    _ => cols(&["q_error", "m_error", "n_error"]),
                },
            ),
        };
        Monitor {
            series: DiagnosticSeries::new(spec.name(), kind, columns),
            spec,
        }
    }

    fn centered(&self) -> bool {
        matches!(
            self.spec,
            DiagnosticSpec::ZeroCurvature | DiagnosticSpec::Lax { .. }
        )
    }
}

fn lambdas(spec: &DiagnosticSpec, model: ModelKind) -> Vec<f64> {
    match spec {
        DiagnosticSpec::Lax { lambdas: Some(l) } => l.clone(),
        _ if model == ModelKind::Chiral => CHIRAL_LAMBDAS.to_vec(),
        _ => ANISO_LAMBDAS.to_vec(),
    }
}

struct Evaluator<'a> {
    setup: &'a Setup,
    model: ModelKind,
    initial_xy: Option<XYState>,
}

impl Evaluator<'_> {
    fn point(&self, spec: &DiagnosticSpec, state: &State, t: f64) -> Result<Vec<f64>, CoreError> {
        let ds = self.setup.grid.spacing();
        match spec {
            DiagnosticSpec::InvariantDrift => {
                let now = state.xy().expect("aniso state");
                let d = invariant_drift(&[self.initial_xy.clone().expect("aniso initial"), now])?;
                Ok(vec![d.x, d.y])
            }
            DiagnosticSpec::SConstraint => match state {
                State::Peakon(p) => Ok(vec![s_constraint_residual(p, &self.setup.stencil)]),
                _ => unreachable!(),
            },
            DiagnosticSpec::ConservationSums => Ok(match (&self.setup.system, state) {
                (System::SpinChain(p), State::Strand(s)) => vec![p.energy(s)],
                (System::Chiral, State::Strand(s)) => {
                    let total = s.u.iter().fold(So3Vector::ZERO, |acc, u| acc + *u) * ds;
                    vec![SpinChainParams::chiral().energy(s), total[0], total[1], total[2]]
                }
                (System::AnisoUv(_) | System::AnisoXy(_), _) => {
                    let (x, y) = state.xy().expect("aniso state").magnitude_integrals();
                    vec![x, y]
                }
                (System::Peakon { .. }, State::Peakon(p)) => {
                    let mut v = vec![p.momentum_sum()];
                    v.extend(p.n_difference_sum());
                    v
                }
                _ => unreachable!(),
            }),
            DiagnosticSpec::ManufacturedError => {
                let (
                    State::Peakon(p),
                    System::Peakon {
                        reference: Some(r), ..
                    },
                ) = (state, &self.setup.system)
                else {
                    unreachable!()
                };
                match r {
                    Reference::Single(_) => {
                        let exact = exact_peakon_state(self.setup.grid, r, t)?;
                        let err = |a: &[Vec<f64>], b: &[Vec<f64>]| {
                            max_abs(a[0].iter().zip(&b[0]).map(|(x, y)| x - y))
                        };
                        Ok(vec![
                            err(&p.q, &exact.q),
                            err(&p.m, &exact.m),
                            err(&p.n, &exact.n),
                        ])
                    }
                    Reference::Collision(sol) => {
                        let err = max_abs(
                            self.setup
                                .grid
                                .coordinates()
                                .enumerate()
                                .map(|(i, s)| (p.q[0][i] - p.q[1][i]) - sol.separation(s, t)),
                        );
                        Ok(vec![err])
                    }
                }
            }
            DiagnosticSpec::ZeroCurvature | DiagnosticSpec::Lax { .. } => unreachable!("centered"),
        }
    }

    fn centered(&self, spec: &DiagnosticSpec, window: [&State; 3], dt: f64) -> Result<Vec<f64>, CoreError> {
        let strands: Vec<So3StrandState> = window.iter().map(|s| s.strand().expect("so(3) state")).collect();
        let st = &self.setup.stencil;
        match spec {
            DiagnosticSpec::ZeroCurvature => {
                let r = compatibility_residual(&strands, st, dt)?;
                Ok(vec![max_abs(r.iter().flatten().map(So3Vector::max_abs))])
            }
            DiagnosticSpec::Lax { .. } => lambdas(spec, self.model)
                .into_iter()
                .map(|lambda| match &self.setup.system {
                    System::Chiral => {
                        let lax = strands
                            .iter()
                            .map(|s| chiral_lax(s, lambda))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(zero_curvature_residual(&lax, st, dt)?.max_norm())
                    }
                    System::AnisoUv(p) | System::AnisoXy(p) => {
                        let lax = strands
                            .iter()
                            .map(|s| aniso_lax_normalized(s, lambda, p))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(zero_curvature_residual(&lax, st, dt)?.max_norm())
                    }
                    _ => unreachable!(),
                })
                .collect(),
            _ => unreachable!("point diagnostic"),
        }
    }
}

/// Per-node values of one output field: `(state, node, peakon count)`.
type Extract = fn(&State, usize, usize) -> Vec<f64>;

struct FieldOutput {
    writers: Vec<(FieldWriter, Extract)>,
}

fn strand_u(s: &State, i: usize, _: usize) -> Vec<f64> {
    match s {
        State::Strand(x) => x.u[i].0.to_vec(),
        _ => unreachable!(),
    }
}
fn strand_v(s: &State, i: usize, _: usize) -> Vec<f64> {
    match s {
        State::Strand(x) => x.v[i].0.to_vec(),
        _ => unreachable!(),
    }
}
fn xy_x(s: &State, i: usize, _: usize) -> Vec<f64> {
    match s {
        State::Xy(x) => x.x[i].0.to_vec(),
        _ => unreachable!(),
    }
}
fn xy_y(s: &State, i: usize, _: usize) -> Vec<f64> {
    match s {
        State::Xy(x) => x.y[i].0.to_vec(),
        _ => unreachable!(),
    }
}
fn peakon_q(s: &State, i: usize, count: usize) -> Vec<f64> {
    match s {
        State::Peakon(p) => (0..count).map(|a| p.q[a][i]).collect(),
        _ => unreachable!(),
    }
}
fn peakon_m(s: &State, i: usize, count: usize) -> Vec<f64> {
    match s {
        State::Peakon(p) => (0..count).map(|a| p.m[a][i]).collect(),
        _ => unreachable!(),
    }
}
fn peakon_n(s: &State, i: usize, count: usize) -> Vec<f64> {
    match s {
        State::Peakon(p) => (0..count).map(|a| p.n[a][i]).collect(),
        _ => unreachable!(),
    }
}

impl FieldOutput {
    fn create(dir: &Path, state: &State) -> std::io::Result<Self> {
        let vector_cols = |p: &str| (1..=3).map(|k| format!("{p}{k}")).collect::<Vec<_>>();
        let specs: Vec<(&str, Vec<String>, Extract)> = match state {
            State::Strand(_) => vec![
                ("u", vector_cols("u"), strand_u as Extract),
                ("v", vector_cols("v"), strand_v),
            ],
            State::Xy(_) => vec![
                ("x", vector_cols("x"), xy_x as Extract),
                ("y", vector_cols("y"), xy_y),
            ],
            State::Peakon(p) => {
                let cols = |f: &str| (1..=p.count()).map(|a| format!("{f}{a}")).collect::<Vec<_>>();
                vec![
                    ("q", cols("q"), peakon_q as Extract),
                    ("m", cols("m"), peakon_m),
                    ("n", cols("n"), peakon_n),
                ]
            }
        };
        let mut writers = Vec::new();
        for (name, cols, f) in specs {
            writers.push((FieldWriter::create(&dir.join(format!("{name}.csv")), &cols)?, f));
        }
        Ok(FieldOutput { writers })
    }

    fn write(&mut self, state: &State, t: f64, nodes: usize) -> std::io::Result<()> {
        let count = match state {
            State::Peakon(p) => p.count(),
            _ => 3,
        };
        for (w, f) in &mut self.writers {
            for i in 0..nodes {
                w.write_node(t, i, &f(state, i, count))?;
            }
        }
        Ok(())
    }

    fn finish(self) -> std::io::Result<()> {
        for (w, _) in self.writers {
            w.finish()?;
        }
        Ok(())
    }
}

/// Why the step loop stopped early.
enum Stop {
    Core(f64, CoreError),
    Io(std::io::Error),
}

impl From<std::io::Error> for Stop {
    fn from(e: std::io::Error) -> Self {
        Stop::Io(e)
    }
}

fn status_of(e: &CoreError) -> RunStatus {
    match e {
        CoreError::BlowUp { .. } => RunStatus::BlowUp,
        CoreError::CoincidentPeakons { .. }
        | CoreError::NotPositiveDefinite { .. }
        | CoreError::CollisionInstant => RunStatus::SingularConfiguration,
        CoreError::IllConditioned { .. } => RunStatus::IllConditioned,
        _ => RunStatus::Failed,
    }
}

/// Integrate a validated scenario.
///
/// Files go to `out_dir`, or to `cfg.output.directory` when `out_dir` is
/// `None`; with neither set the run is in-memory only. A runtime failure
/// still writes everything recorded up to that point, and the partial report
/// travels inside [`HarnessError::Runtime`].
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunReport, HarnessError> {
    cfg.validate()?;
    let setup = Setup::new(cfg)?;
    let dir: Option<PathBuf> = out_dir
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.directory.clone());
    if let Some(d) = &dir {
        std::fs::create_dir_all(d)?;
    }
    let (steps, dt) = cfg.grid.steps();
    let nodes = cfg.grid.nodes;
    let cadence = cfg.output.cadence;

    let mut report = RunReport {
        model: cfg.model.name().to_string(),
        status: RunStatus::Completed,
        message: None,
        failed_at: None,
        nodes,
        ds: setup.grid.spacing(),
        dt,
        steps_planned: steps,
        steps_completed: 0,
        final_time: 0.0,
        diagnostics: Vec::new(),
    };

    let initial = setup.initial_state(cfg);
    let mut fields: Option<FieldOutput> = None;
    let mut monitors: Vec<Monitor> = Vec::new();

    let outcome = (|| -> Result<(), Stop> {
        let mut cur = initial.map_err(|e| Stop::Core(0.0, e))?;
        monitors = cfg
            .effective_diagnostics()
            .into_iter()
            .map(|spec| Monitor::new(spec, cfg, &cur))
            .collect();
        if let (Some(d), true) = (&dir, cfg.output.fields) {
            fields = Some(FieldOutput::create(d, &cur)?);
        }
        let eval = Evaluator {
            setup: &setup,
            model: cfg.model,
            initial_xy: cur.xy().filter(|_| cfg.model.is_aniso()),
        };
        let record =
            |state: &State, t: f64, monitors: &mut Vec<Monitor>, fields: &mut Option<FieldOutput>| {
                for m in monitors.iter_mut().filter(|m| !m.centered()) {
                    let values = eval.point(&m.spec, state, t).map_err(|e| Stop::Core(t, e))?;
                    m.series.push(t, values);
                }
                if let Some(f) = fields {
                    f.write(state, t, nodes)?;
                }
                Ok::<(), Stop>(())
            };

        record(&cur, 0.0, &mut monitors, &mut fields)?;
        let mut prev: Option<State> = None;
        for n in 0..steps {
            let t = n as f64 * dt;
            let next = setup.step(&cur, t, dt).map_err(|e| {
                let time = match e {
                    CoreError::BlowUp { time } => time,
                    _ => t,
                };
                Stop::Core(time, e)
            })?;
            if let Some(p) = &prev {
                if n % cadence == 0 {
                    for m in monitors.iter_mut().filter(|m| m.centered()) {
                        let values = eval
                            .centered(&m.spec, [p, &cur, &next], dt)
                            .map_err(|e| Stop::Core(t, e))?;
                        m.series.push(t, values);
                    }
                }
            }
            prev = Some(std::mem::replace(&mut cur, next));
            report.steps_completed = n + 1;
            report.final_time = (n + 1) as f64 * dt;
            if (n + 1) % cadence == 0 || n + 1 == steps {
                record(&cur, report.final_time, &mut monitors, &mut fields)?;
            }
        }
        Ok(())
    })();

    report.diagnostics = monitors.into_iter().map(|m| m.series).collect();
    if let Some(f) = fields {
        f.finish()?;
    }
    let failure = match outcome {
        Ok(()) => None,
        Err(Stop::Io(e)) => return Err(e.into()),
        Err(Stop::Core(time, e)) => {
            report.status = status_of(&e);
            report.message = Some(e.to_string());
            report.failed_at = Some(time);
            Some((time, e))
        }
    };
    if let Some(d) = &dir {
        for series in &report.diagnostics {
            series.write_csv(&d.join(format!("{}.csv", series.name)))?;
        }
        report.write_json(&d.join("report.json"))?;
    }
    match failure {
        None => Ok(report),
        Some((time, source)) => Err(HarnessError::Runtime {
            time,
            source,
            report: Box::new(report),
        }),
    }
}
