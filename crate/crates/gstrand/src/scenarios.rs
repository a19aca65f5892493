//! Built-in scenarios.

use std::f64::consts::TAU;

use crate::config::{
    BranchSpec, DiagnosticSpec, DirectionSpec, GridConfig, InitialData, ModelKind, OutputConfig, Params,
    ProfileSpec, ScenarioConfig, Series, ShapeSpec, Term,
};

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ScenarioConfig,
}

impl Scenario {
    pub fn config(&self) -> ScenarioConfig {
        (self.build)()
    }
}

/// Periodic grid over [0, 2π) with `dt = cfl · ds`.
pub fn periodic_grid(nodes: usize, cfl: f64, t_end: f64) -> GridConfig {
    GridConfig {
        length: TAU,
        nodes,
        dt: cfl * TAU / nodes as f64,
        t_end,
        stencil_order: 2,
    }
}

fn base(model: ModelKind, grid: GridConfig) -> ScenarioConfig {
    ScenarioConfig {
        model,
        grid,
        params: Params::default(),
        initial: InitialData::default(),
        diagnostics: Vec::new(),
        output: OutputConfig {
            directory: None,
            cadence: 1,
            fields: true,
        },
    }
}

fn none() -> Series {
    Vec::new()
}

/// u = (sin s, 0, cos s), v = (0, cos s, 0).
pub fn smooth_uv() -> InitialData {
    InitialData {
        u: Some([vec![Term::sin(1.0, 1.0)], none(), vec![Term::cos(1.0, 1.0)]]),
        v: Some([none(), vec![Term::cos(1.0, 1.0)], none()]),
        ..InitialData::default()
    }
}

pub fn chiral_smooth() -> ScenarioConfig {
    let mut cfg = base(ModelKind::Chiral, periodic_grid(64, 0.25, 1.0));
    cfg.initial = smooth_uv();
    cfg.diagnostics = vec![
        DiagnosticSpec::Lax { lambdas: None },
        DiagnosticSpec::ZeroCurvature,
        DiagnosticSpec::ConservationSums,
    ];
    cfg
}

pub fn chiral_fixed_point() -> ScenarioConfig {
    let mut cfg = base(ModelKind::Chiral, periodic_grid(32, 0.25, 1.0));
    let e3 = || [none(), none(), vec![Term::constant(1.0)]];
    cfg.initial = InitialData {
        u: Some(e3()),
        v: Some(e3()),
        ..InitialData::default()
    };
    cfg.diagnostics = vec![
        DiagnosticSpec::ZeroCurvature,
        DiagnosticSpec::Lax { lambdas: None },
        DiagnosticSpec::ConservationSums,
    ];
    cfg
}

pub fn spin_chain_smooth() -> ScenarioConfig {
    let mut cfg = base(ModelKind::SpinChain, periodic_grid(64, 0.25, 1.0));
    cfg.params.inertia_a = Some([1.0, 2.0, 3.0]);
    cfg.params.inertia_b = Some([2.0, 1.0, 1.0]);
    cfg.initial = InitialData {
        u: Some([
            vec![Term::sin(0.3, 1.0)],
            vec![Term::constant(0.2)],
            vec![Term::cos(0.3, 1.0)],
        ]),
        v: Some([none(), vec![Term::cos(0.2, 2.0)], vec![Term::constant(1.0)]]),
        ..InitialData::default()
    };
    cfg.diagnostics = vec![DiagnosticSpec::ZeroCurvature, DiagnosticSpec::ConservationSums];
    cfg
}

/// X and Y constant in s on the unit sphere, P = diag(1, 2, 3).
pub fn aniso_xy_sphere() -> ScenarioConfig {
    let mut cfg = base(
        ModelKind::AnisoXy,
        GridConfig {
            dt: 5e-3,
            ..periodic_grid(128, 0.25, 1.0)
        },
    );
    cfg.params.anisotropy = Some([1.0, 2.0, 3.0]);
    cfg.initial = InitialData {
        x: Some([
            vec![Term::constant(0.48)],
            vec![Term::constant(0.6)],
            vec![Term::constant(0.64)],
        ]),
        y: Some([
            vec![Term::constant(0.8)],
            vec![Term::constant(-0.36)],
            vec![Term::constant(0.48)],
        ]),
        unit_sphere: true,
        ..InitialData::default()
    };
    cfg.diagnostics = vec![
        DiagnosticSpec::InvariantDrift,
        DiagnosticSpec::ConservationSums,
        DiagnosticSpec::Lax { lambdas: None },
    ];
    cfg
}

/// s-dependent unit-sphere data for the same model.
pub fn aniso_xy_wave() -> ScenarioConfig {
    let mut cfg = aniso_xy_sphere();
    cfg.initial = InitialData {
        x: Some([
            vec![Term::cos(1.0, 1.0)],
            vec![Term::sin(1.0, 1.0)],
            vec![Term::constant(0.5)],
        ]),
        y: Some([
            vec![Term::constant(0.3)],
            vec![Term::cos(1.0, 2.0)],
            vec![Term::sin(1.0, 2.0)],
        ]),
        unit_sphere: true,
        ..InitialData::default()
    };
    cfg
}

pub fn aniso_uv_smooth() -> ScenarioConfig {
    let mut cfg = base(ModelKind::AnisoUv, periodic_grid(64, 0.25, 1.0));
    cfg.params.anisotropy = Some([1.0, 2.0, 3.0]);
    cfg.initial = smooth_uv();
    cfg.diagnostics = vec![
        DiagnosticSpec::Lax { lambdas: None },
        DiagnosticSpec::ConservationSums,
    ];
    cfg
}

/// h = 0.3 sin(s − t) + 0.1 sin(2(s + t)).
pub fn manufactured_profile() -> ProfileSpec {
    let sine = |amplitude, wavenumber, direction| ProfileSpec::Traveling {
        shape: ShapeSpec::Sine {
            amplitude,
            wavenumber,
            phase: 0.0,
        },
        direction,
    };
    ProfileSpec::Superposition {
        parts: vec![
            sine(0.3, 1.0, DirectionSpec::Right),
            sine(0.1, 2.0, DirectionSpec::Left),
        ],
    }
}

pub fn peakon_single_manufactured() -> ScenarioConfig {
    let mut cfg = base(ModelKind::PeakonSingleExact, periodic_grid(256, 0.25, 1.0));
    cfg.params.profile = Some(manufactured_profile());
    cfg.diagnostics = vec![
        DiagnosticSpec::ManufacturedError,
        DiagnosticSpec::SConstraint,
        DiagnosticSpec::ConservationSums,
    ];
    cfg
}

fn collision(profile: ProfileSpec) -> ScenarioConfig {
    let mut cfg = base(ModelKind::PeakonCollisionExact, periodic_grid(256, 0.25, 1.0));
    cfg.params.profile = Some(profile);
    cfg.params.branch = Some(BranchSpec::Plus);
    cfg.diagnostics = vec![
        DiagnosticSpec::ManufacturedError,
        DiagnosticSpec::ConservationSums,
        DiagnosticSpec::SConstraint,
    ];
    cfg
}

/// h = 0.5 cos s cos t; h vanishes at s = π/2 and 3π/2 for all t.
pub fn peakon_collision_standing() -> ScenarioConfig {
    collision(ProfileSpec::Standing {
        amplitude: 0.5,
        wavenumber: 1.0,
    })
}

/// h = 1 + 0.5 cos s cos t, bounded away from zero.
pub fn peakon_collision_offset() -> ScenarioConfig {
    collision(ProfileSpec::Superposition {
        parts: vec![
            ProfileSpec::Constant { value: 1.0 },
            ProfileSpec::Standing {
                amplitude: 0.5,
                wavenumber: 1.0,
            },
        ],
    })
}

pub fn peakon_triplet() -> ScenarioConfig {
    let mut cfg = base(ModelKind::Peakon, periodic_grid(64, 0.25, 1.0));
    cfg.params.peakon_count = Some(3);
    cfg.initial = InitialData {
        q: Some(vec![
            vec![Term::constant(-2.0), Term::sin(0.2, 1.0)],
            vec![Term::cos(0.1, 1.0)],
            vec![Term::constant(2.0)],
        ]),
        m: Some(vec![
            vec![Term::constant(1.0)],
            vec![Term::constant(0.2)],
            vec![Term::constant(-1.0)],
        ]),
        n: Some(vec![vec![Term::cos(0.1, 1.0)], vec![], vec![Term::sin(0.1, 1.0)]]),
        ..InitialData::default()
    };
    cfg.diagnostics = vec![DiagnosticSpec::ConservationSums, DiagnosticSpec::SConstraint];
    cfg
}

static REGISTRY: &[Scenario] = &[
    Scenario {
        name: "chiral_smooth",
        description: "chiral model from smooth data, Lax residual sweep",
        build: chiral_smooth,
    },
    Scenario {
        name: "chiral_fixed_point",
        description: "chiral model at the constant fixed point u = v = e3",
        build: chiral_fixed_point,
    },
    Scenario {
        name: "spin_chain_smooth",
        description: "spin chain with A = diag(1,2,3), B = diag(2,1,1)",
        build: spin_chain_smooth,
    },
    Scenario {
        name: "aniso_xy_sphere",
        description: "anisotropic model in (X, Y), s-uniform unit-sphere data",
        build: aniso_xy_sphere,
    },
    Scenario {
        name: "aniso_xy_wave",
        description: "anisotropic model in (X, Y), s-dependent unit-sphere data",
        build: aniso_xy_wave,
    },
    Scenario {
        name: "aniso_uv_smooth",
        description: "anisotropic model in (u, v) with the 4x4 Lax monitor",
        build: aniso_uv_smooth,
    },
    Scenario {
        name: "peakon_single_manufactured",
        description: "single peakon driven by h = 0.3 sin(s-t) + 0.1 sin(2(s+t))",
        build: peakon_single_manufactured,
    },
    Scenario {
        name: "peakon_collision_standing",
        description: "peakon-antipeakon pair from h = 0.5 cos s cos t",
        build: peakon_collision_standing,
    },
    Scenario {
        name: "peakon_collision_offset",
        description: "peakon-antipeakon pair from h = 1 + 0.5 cos s cos t",
        build: peakon_collision_offset,
    },
    Scenario {
        name: "peakon_triplet",
        description: "three interacting peakons with s-dependent data",
        build: peakon_triplet,
    },
];

pub fn registry() -> &'static [Scenario] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static Scenario> {
    REGISTRY.iter().find(|s| s.name == name)
}
