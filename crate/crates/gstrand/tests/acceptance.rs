//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{SQRT_2, TAU};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use gstrand::config::{DiagnosticSpec, OutputConfig, ScenarioConfig};
use gstrand::convergence::observed_order;
use gstrand::scenarios::{self, periodic_grid};
use gstrand::{convergence_study, run_scenario, HarnessError, RunReport, RunStatus};
use gstrand_core::algebra::{ad_star, hat, pairing, DiagonalParams, So3Vector};
use gstrand_core::analytic::{
    collision_f, collision_f_inverse, potentials_resolve, single_peakon_exact, Branch, CollisionSamples,
    CollisionSolution, Direction, WaveProfile, WaveShape,
};
use gstrand_core::grid::{second_difference, DerivativeStencil, PeriodicGrid};
use gstrand_core::integrability::{chiral_lax, zero_curvature_residual, CHIRAL_LAMBDAS};
use gstrand_core::integrate::rk4_step;
use gstrand_core::peakon::{peakon_rhs, Kernel, PeakonState};
use gstrand_core::so3_dynamics::{
    aniso_residual, chiral_residual, chiral_rhs, compatibility_residual, lie_poisson_rhs_spin_chain,
    spin_chain_rhs, So3StrandState, SpinChainParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vector(rng: &mut ChaCha8Rng, scale: f64) -> So3Vector {
    So3Vector::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn random_state(rng: &mut ChaCha8Rng, grid: PeriodicGrid) -> So3StrandState {
    So3StrandState::from_fn(grid, |_| (random_vector(rng, 1.0), random_vector(rng, 1.0)))
}

fn require(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fmt_orders(errors: &[f64]) -> String {
    let orders: Vec<String> = errors
        .windows(2)
        .map(|w| match observed_order(w[0], w[1]) {
            Some(p) => format!("{p:.2}"),
            None => "n/a".into(),
        })
        .collect();
    let errors: Vec<String> = errors.iter().map(|e| format!("{e:.3e}")).collect();
    format!("errors [{}], orders [{}]", errors.join(", "), orders.join(", "))
}

fn orders_at_least(errors: &[f64], floor: f64) -> bool {
    errors
        .windows(2)
        .all(|w| observed_order(w[0], w[1]).is_some_and(|p| p >= floor))
}

fn in_memory(mut cfg: ScenarioConfig, diagnostics: Vec<DiagnosticSpec>) -> ScenarioConfig {
    cfg.diagnostics = diagnostics;
    cfg.output = OutputConfig {
        directory: None,
        cadence: 1,
        fields: false,
    };
    cfg
}

fn metric(report: &RunReport, diagnostic: &str, column: &str) -> f64 {
    report
        .diagnostic(diagnostic)
        .and_then(|d| d.column(column))
        .unwrap_or(f64::NAN)
}

fn algebra_identities() -> Verdict {
    let mut rng = rng(1);
    let (mut adjoint, mut bracket, mut pair) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let (u, m, v) = (
            random_vector(&mut rng, 2.0),
            random_vector(&mut rng, 2.0),
            random_vector(&mut rng, 2.0),
        );
        adjoint = adjoint.max((ad_star(&u, &m).dot(&v) - m.dot(&u.cross(&v))).abs());
        let (hu, hv) = (*hat(&u).as_matrix(), *hat(&v).as_matrix());
        bracket = bracket.max((hu.commutator(&hv) - *hat(&u.cross(&v)).as_matrix()).max_abs());
        pair = pair.max((pairing(&hu, &hv) - u.dot(&v)).abs());
    }
    let worst = adjoint.max(bracket).max(pair);
    require(
        worst <= 1e-12,
        format!("adjointness {adjoint:.2e}, bracket {bracket:.2e}, pairing {pair:.2e} over 1000 samples"),
    )
}

fn ep_lp_equivalence() -> Verdict {
    let params = SpinChainParams::new(
        DiagonalParams::inertia_a([1.0, 2.0, 3.0]).unwrap(),
        DiagonalParams::inertia_b([2.0, 1.0, 1.0]).unwrap(),
    )
    .unwrap();
    let grid = PeriodicGrid::new(TAU, 64).unwrap();
    let stencil = DerivativeStencil::default();
    let mut rng = rng(2);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let state = random_state(&mut rng, grid);
        let ep = spin_chain_rhs(&state, &params, &stencil).unwrap();
        let lp = lie_poisson_rhs_spin_chain(&params.momentum(&state), &params, &stencil).unwrap();
        worst = worst.max(params.velocity(&lp).unwrap().max_abs_diff(&ep));
    }
    require(
        worst <= 1e-12,
        format!("max RHS difference {worst:.2e} over 100 states"),
    )
}

/// RK4 chiral trajectory from the smooth data at CFL 0.25 up to t = 1.
fn chiral_trajectory(nodes: usize) -> (Vec<So3StrandState>, f64) {
    let grid = PeriodicGrid::new(TAU, nodes).unwrap();
    let stencil = DerivativeStencil::default();
    let mut state = So3StrandState::from_fn(grid, |s| {
        (
            So3Vector::new(s.sin(), 0.0, s.cos()),
            So3Vector::new(0.0, s.cos(), 0.0),
        )
    });
    let steps = (1.0 / (0.25 * grid.spacing())).ceil() as usize;
    let dt = 1.0 / steps as f64;
    let mut traj = vec![state.clone()];
    for n in 0..steps {
        state = rk4_step(&state, n as f64 * dt, dt, |s| Ok(chiral_rhs(s, &stencil))).unwrap();
        traj.push(state.clone());
    }
    (traj, dt)
}

fn chiral_zero_curvature() -> Verdict {
    let cfg = in_memory(
        ScenarioConfig {
            grid: periodic_grid(64, 0.25, 1.0),
            ..scenarios::chiral_smooth()
        },
        vec![DiagnosticSpec::Lax { lambdas: None }],
    );
    let table = convergence_study(&cfg, 3).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for lambda in CHIRAL_LAMBDAS {
        let row = table
            .row("lax", &format!("lambda_{lambda}"))
            .ok_or("missing lax column")?;
        if row.errors.iter().all(|e| *e == 0.0) {
            parts.push(format!("λ={lambda}: identically 0"));
        } else {
            ok &= orders_at_least(&row.errors, 1.8);
            parts.push(format!("λ={lambda}: {}", fmt_orders(&row.errors)));
        }
    }

    let stencil = DerivativeStencil::default();
    let mut identity = 0.0_f64;
    for nodes in [64, 128, 256] {
        let (traj, dt) = chiral_trajectory(nodes);
        let lax: Vec<_> = traj.iter().map(|s| chiral_lax(s, 1.0).unwrap()).collect();
        let curvature = zero_curvature_residual(&lax, &stencil, dt).unwrap();
        let discrete = compatibility_residual(&traj, &stencil, dt).unwrap();
        for (level, r) in curvature.levels.iter().zip(&discrete) {
            for (c, d) in level.iter().zip(r) {
                identity = identity.max((*c + *hat(d).as_matrix()).max_abs());
            }
        }
    }
    ok &= identity <= 1e-13;
    parts.push(format!(
        "λ=1 vs negated equation residual {identity:.2e} per step"
    ));
    require(ok, parts.join("; "))
}

fn anisotropic_magnitudes() -> Verdict {
    let base = in_memory(scenarios::aniso_xy_sphere(), vec![DiagnosticSpec::InvariantDrift]);
    let mut drifts = Vec::new();
    for k in 0..3 {
        let mut cfg = base.clone();
        cfg.grid.dt = 5e-3 / f64::from(1u32 << k);
        let report = run_scenario(&cfg, None).map_err(|e| e.to_string())?;
        drifts.push(metric(&report, "invariant_drift", "x_drift").max(metric(
            &report,
            "invariant_drift",
            "y_drift",
        )));
    }
    require(
        drifts[0] <= 1e-6 && orders_at_least(&drifts, 3.5),
        format!("N=128, dt 5e-3/2^k: {}", fmt_orders(&drifts)),
    )
}

fn scaling_reduction() -> Verdict {
    let identity = DiagonalParams::anisotropy([1.0; 3]).unwrap();
    let stencil = DerivativeStencil::default();
    let grid = PeriodicGrid::new(TAU, 32).unwrap();
    let mut rng = rng(5);
    let (mut doubled, mut halved) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let state = random_state(&mut rng, grid);
        let rate = random_state(&mut rng, grid);
        let aniso = aniso_residual(&state, &rate, &identity, &stencil);
        let up = chiral_residual(&state.scaled(2.0), &rate.scaled(2.0), &stencil);
        doubled = doubled.max(up.max_abs_diff(&aniso.scaled(2.0)));
        let down = chiral_residual(&state.scaled(0.5), &rate.scaled(0.5), &stencil).scaled(2.0);
        halved = halved.max(down.max_abs_diff(&aniso));
    }
    require(
        doubled <= 1e-13,
        format!(
            "ChiralResidual(2u,2v) - 2 AnisoResidual(u,v): {doubled:.2e} over 100 states \
             (halved-field form deviates by {halved:.2e})"
        ),
    )
}

fn manufactured_profile() -> WaveProfile {
    let sine = |amplitude, wavenumber, direction| {
        WaveProfile::traveling(
            WaveShape::Sine {
                amplitude,
                wavenumber,
                phase: 0.0,
            },
            direction,
        )
    };
    WaveProfile::Superposition(vec![
        sine(0.3, 1.0, Direction::Right),
        sine(0.1, 2.0, Direction::Left),
    ])
    .validated()
    .unwrap()
}

/// Max of `D_tt Q − D_ss Q` over interior levels of a single-peakon run.
fn wave_operator_residual(nodes: usize) -> f64 {
    let profile = manufactured_profile();
    let grid = PeriodicGrid::new(TAU, nodes).unwrap();
    let stencil = DerivativeStencil::default();
    let mut state = PeakonState::from_fn(grid, 1, |s| {
        let (q, m, n) = single_peakon_exact(&profile, s, 0.0);
        (vec![q], vec![m], vec![n])
    })
    .unwrap();
    let steps = (1.0 / (0.25 * grid.spacing())).ceil() as usize;
    let dt = 1.0 / steps as f64;
    let mut levels = vec![state.q[0].clone()];
    for n in 0..steps {
        state = rk4_step(&state, n as f64 * dt, dt, |s| peakon_rhs(s, &stencil)).unwrap();
        levels.push(state.q[0].clone());
    }
    levels
        .windows(3)
        .flat_map(|w| {
            let q_ss = second_difference(&w[1], grid.spacing());
            (0..nodes)
                .map(|i| ((w[2][i] - 2.0 * w[1][i] + w[0][i]) / (dt * dt) - q_ss[i]).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

fn single_peakon() -> Verdict {
    let cfg = in_memory(
        ScenarioConfig {
            grid: periodic_grid(64, 0.25, 1.0),
            ..scenarios::peakon_single_manufactured()
        },
        vec![DiagnosticSpec::ManufacturedError, DiagnosticSpec::SConstraint],
    );
    let table = convergence_study(&cfg, 3).map_err(|e| e.to_string())?;
    let q = table
        .row("manufactured_error", "q_error")
        .ok_or("missing q_error")?;
    let mut ok = q.errors[2] <= 1e-3 && orders_at_least(&q.errors, 1.8);
    let mut parts = vec![format!("|Q-h| {}", fmt_orders(&q.errors))];

    let wave: Vec<f64> = [64, 128, 256].into_iter().map(wave_operator_residual).collect();
    ok &= orders_at_least(&wave, 1.8);
    parts.push(format!("wave operator {}", fmt_orders(&wave)));

    let s = table
        .row("s_constraint", "residual")
        .ok_or("missing s_constraint")?;
    let constants: Vec<f64> = table
        .levels
        .iter()
        .zip(&s.errors)
        .map(|(level, e)| e / ((TAU / level.nodes as f64).powi(2) + level.dt * level.dt))
        .collect();
    ok &= constants.iter().all(|c| c.is_finite()) && constants.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    parts.push(format!("s-constraint / (ds^2+dt^2) = {constants:.3?}"));
    require(ok, parts.join("; "))
}

fn collision_summary(cfg: &ScenarioConfig) -> (bool, String) {
    match run_scenario(cfg, None) {
        Ok(report) => {
            let x = metric(&report, "manufactured_error", "x_error");
            let m = metric(&report, "conservation_sums", "m_sum");
            let n = metric(&report, "conservation_sums", "n_difference_sum");
            (
                x <= 1e-3 && m <= 1e-8 && n <= 1e-8,
                format!("x_error {x:.2e}, sum drift M {m:.2e}, N {n:.2e}"),
            )
        }
        Err(e) => (false, format!("run failed: {e}")),
    }
}

fn potentials_on(sol: &CollisionSolution) -> Result<Vec<f64>, String> {
    [0.05_f64, 0.025]
        .iter()
        .map(|h| {
            let n = (1.0 / h).round() as usize;
            let samples = CollisionSamples::from_solution(sol, (0.0, *h, 6 * n), (0.0, *h, n))
                .map_err(|e| e.to_string())?;
            potentials_resolve(&samples)
                .map(|r| r.max_residual())
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn collision() -> Verdict {
    let literal = in_memory(
        scenarios::peakon_collision_standing(),
        vec![
            DiagnosticSpec::ManufacturedError,
            DiagnosticSpec::ConservationSums,
        ],
    );
    let (ok, run) = collision_summary(&literal);
    let sol = CollisionSolution::new(WaveProfile::standing(0.5, 1.0), Branch::Plus);
    let (pot_ok, pot) = match potentials_on(&sol) {
        Ok(r) => (
            r[1] <= 1e-2 && orders_at_least(&r, 1.8),
            format!("potentials {}", fmt_orders(&r)),
        ),
        Err(e) => (false, format!("potentials failed: {e}")),
    };

    let offset = in_memory(
        scenarios::peakon_collision_offset(),
        vec![
            DiagnosticSpec::ManufacturedError,
            DiagnosticSpec::ConservationSums,
        ],
    );
    let (_, offset_run) = collision_summary(&offset);
    require(
        ok && pot_ok,
        format!("h = 0.5 cos s cos t: {run}; {pot}; [h = 1 + 0.5 cos s cos t: {offset_run}]"),
    )
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let simpson = |a: f64, b: f64| (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    let m = 0.5 * (a + b);
    let (whole, left, right) = (simpson(a, b), simpson(a, m), simpson(m, b));
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, 0.5 * tol, depth - 1) + adaptive_simpson(f, m, b, 0.5 * tol, depth - 1)
}

/// `√2 ∫₀^|X| (1 − e^{−Y})^{−1/2} dY`, substituting `Y = w²`.
fn f_by_quadrature(x: f64) -> f64 {
    let integrand = |w: f64| {
        if w == 0.0 {
            2.0 * SQRT_2
        } else {
            2.0 * SQRT_2 * w / (-(-w * w).exp_m1()).sqrt()
        }
    };
    x.signum() * adaptive_simpson(&integrand, 0.0, x.abs().sqrt(), 1e-12, 50)
}

fn f_map() -> Verdict {
    let round_trip = (0..=4000)
        .map(|k| -20.0 + 0.01 * k as f64)
        .map(|x| (collision_f_inverse(collision_f(x)) - x).abs())
        .fold(0.0, f64::max);
    let quadrature = (0..=200)
        .map(|k| -10.0 + 0.1 * k as f64)
        .map(|x| (collision_f(x) - f_by_quadrature(x)).abs())
        .fold(0.0, f64::max);
    let sol = CollisionSolution::new(
        WaveProfile::Superposition(vec![WaveProfile::Constant(1.0), WaveProfile::standing(0.5, 1.0)]),
        Branch::Plus,
    );
    let mut linear = 0.0_f64;
    for i in 0..64 {
        for j in 0..16 {
            let (s, t) = (TAU * i as f64 / 64.0, 0.125 * j as f64);
            let h = sol.profile.eval(s, t).h;
            linear = linear.max((collision_f(sol.separation(s, t)) - 2.0 * SQRT_2 * h).abs());
        }
    }
    require(
        round_trip <= 1e-12 && quadrature <= 1e-8 && linear <= 1e-12,
        format!("round trip {round_trip:.2e}, quadrature {quadrature:.2e}, F(X) - 2√2h {linear:.2e}"),
    )
}

/// Two-peakon equations written with `X = Q¹ − Q²`.
fn pair_oracle(q: [f64; 2], m: [f64; 2], n: [f64; 2]) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let x = q[0] - q[1];
    let (k, kp, k0) = (
        Kernel::of_separation(x),
        Kernel::derivative_of_separation(x),
        Kernel::K0,
    );
    let q_t = [m[0] * k0 + m[1] * k, m[0] * k + m[1] * k0];
    let coupling = (m[0] * m[1] - n[0] * n[1]) * kp;
    let twist = (n[0] * m[1] - m[0] * n[1]) * (k0 - k) / (k0 + k) * kp;
    (q_t, [-coupling, coupling], [twist, twist])
}

fn pair_reproduction() -> Verdict {
    let grid = PeriodicGrid::new(TAU, 8).unwrap();
    let stencil = DerivativeStencil::default();
    let mut rng = rng(9);
    let mut worst = 0.0_f64;
    let mut states = 0;
    while states < 100 {
        let mut pair = |scale: f64| [rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)];
        let (q, m, n) = (pair(3.0), pair(2.0), pair(2.0));
        if (q[0] - q[1]).abs() < 1e-3 {
            continue;
        }
        states += 1;
        let state = PeakonState::from_fn(grid, 2, |_| (q.to_vec(), m.to_vec(), n.to_vec())).unwrap();
        let rate = peakon_rhs(&state, &stencil).unwrap();
        let (q_t, m_t, n_t) = pair_oracle(q, m, n);
        for a in 0..2 {
            worst = worst
                .max((rate.q[a][0] - q_t[a]).abs())
                .max((rate.m[a][0] - m_t[a]).abs())
                .max((rate.n[a][0] - n_t[a]).abs());
        }
    }
    require(
        worst <= 1e-12,
        format!("max term difference {worst:.2e} over 100 states"),
    )
}

fn fixture(name: &str) -> Result<ScenarioConfig, HarnessError> {
    ScenarioConfig::load(
        &Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(name),
    )
}

fn read_dir_sorted(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let bytes = std::fs::read(&path).unwrap();
            (PathBuf::from(path.file_name().unwrap()), bytes)
        })
        .collect();
    files.sort();
    files
}

fn runtime_status(cfg: &ScenarioConfig) -> Option<RunStatus> {
    match run_scenario(cfg, None) {
        Err(HarnessError::Runtime { report, .. }) => Some(report.status),
        _ => None,
    }
}

fn harness_determinism() -> Verdict {
    let cfg = fixture("chiral_small.json").map_err(|e| e.to_string())?;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_scenario(&cfg, Some(a.path())).map_err(|e| e.to_string())?;
    run_scenario(&cfg, Some(b.path())).map_err(|e| e.to_string())?;
    let (fa, fb) = (read_dir_sorted(a.path()), read_dir_sorted(b.path()));
    let identical = !fa.is_empty() && fa == fb;

    let cfl = matches!(fixture("cfl_violation.json"), Err(HarnessError::Validation(_)));
    let blow_up = runtime_status(&fixture("blow_up.json").map_err(|e| e.to_string())?);
    let singular = runtime_status(&fixture("coincident_peakons.json").map_err(|e| e.to_string())?);
    require(
        identical && cfl && blow_up == Some(RunStatus::BlowUp) && singular == Some(RunStatus::SingularConfiguration),
        format!(
            "{} files byte-identical: {identical}; CFL guard: {cfl}; blow-up: {blow_up:?}; singular: {singular:?}",
            fa.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("algebra identities", algebra_identities),
        ("Euler-Poincare / Lie-Poisson agreement", ep_lp_equivalence),
        ("chiral zero curvature along trajectories", chiral_zero_curvature),
        ("anisotropic magnitude conservation", anisotropic_magnitudes),
        ("P = Id scaling reduction", scaling_reduction),
        ("single-peakon manufactured solution", single_peakon),
        ("peakon-antipeakon collision", collision),
        ("F/X round trip and quadrature", f_map),
        ("two-peakon term-by-term reproduction", pair_reproduction),
        ("harness determinism and guards", harness_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let verdict = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        match verdict {
            Ok(detail) => println!("PASS [{:>2}] {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {title}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
