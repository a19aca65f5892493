//! Closed-form solutions: wave profiles, the single peakon and the
//! antisymmetric peakon–antipeakon collision.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::math::{cos, expm1, ln1p, ln_cosh, signum, sin, sqrt, tanh};
use crate::peakon::Kernel;
use crate::{Error, Result};

/// Relative tolerance of the wave-equation check run by [`WaveProfile::validated`].
pub const PROFILE_TOLERANCE: f64 = 1e-6;

/// One-variable shape `f(ξ)` for traveling waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveShape {
    /// `amplitude · sin(wavenumber · ξ + phase)`.
    Sine {
        amplitude: f64,
        wavenumber: f64,
        phase: f64,
    },
    /// `slope · ξ + offset`.
    Linear { slope: f64, offset: f64 },
}

impl WaveShape {
    /// `(f(ξ), f'(ξ))`.
    pub fn eval(&self, xi: f64) -> (f64, f64) {
        match *self {
            WaveShape::Sine {
                amplitude,
                wavenumber,
                phase,
            } => {
                let arg = wavenumber * xi + phase;
                (amplitude * sin(arg), amplitude * wavenumber * cos(arg))
            }
            WaveShape::Linear { slope, offset } => (slope * xi + offset, slope),
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            WaveShape::Sine { wavenumber, .. } => wavenumber.abs(),
            WaveShape::Linear { .. } => 0.0,
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            WaveShape::Sine {
                amplitude,
                wavenumber,
                phase,
            } => amplitude.is_finite() && wavenumber.is_finite() && phase.is_finite(),
            WaveShape::Linear { slope, offset } => slope.is_finite() && offset.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `f(s − t)`.
    Right,
    /// `f(s + t)`.
    Left,
}

/// `h(s, t)` with its first derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub h: f64,
    pub h_t: f64,
    pub h_s: f64,
}

/// A solution of `h_tt = h_ss` given in closed form.
#[derive(Debug, Clone)]
pub enum WaveProfile {
    Constant(f64),
    Traveling {
        shape: WaveShape,
        direction: Direction,
    },
    /// `amplitude · cos(k s) · cos(k t)`.
    Standing {
        amplitude: f64,
        wavenumber: f64,
    },
    Superposition(Vec<WaveProfile>),
    /// User-supplied evaluators for `h`, `h_t` and `h_s`.
    Custom {
        h: fn(f64, f64) -> f64,
        h_t: fn(f64, f64) -> f64,
        h_s: fn(f64, f64) -> f64,
    },
}

impl WaveProfile {
    pub fn traveling(shape: WaveShape, direction: Direction) -> Self {
        WaveProfile::Traveling { shape, direction }
    }

    pub fn standing(amplitude: f64, wavenumber: f64) -> Self {
        WaveProfile::Standing {
            amplitude,
            wavenumber,
        }
    }

    /// Accept the profile only if it solves the wave equation and its
    /// derivative evaluators agree with `h`, both to [`PROFILE_TOLERANCE`]
    /// relative on a fixed sample grid.
    pub fn validated(self) -> Result<Self> {
        if !self.params_finite() {
            return Err(Error::InvalidProfile("non-finite parameter"));
        }
        let delta = 1e-3 / self.max_wavenumber().max(1.0);
        let (mut residual, mut derivative_gap, mut scale) = (0.0_f64, 0.0_f64, 0.0_f64);
        for i in 0..7 {
            for j in 0..7 {
                let (s, t) = (-1.3 + 0.47 * i as f64, -0.9 + 0.41 * j as f64);
                let c = self.eval(s, t);
                if !(c.h.is_finite() && c.h_t.is_finite() && c.h_s.is_finite()) {
                    return Err(Error::InvalidProfile("non-finite value"));
                }
                let tp = self.eval(s, t + delta);
                let tm = self.eval(s, t - delta);
                let sp = self.eval(s + delta, t);
                let sm = self.eval(s - delta, t);
                let h_tt = (tp.h_t - tm.h_t) / (2.0 * delta);
                let h_ss = (sp.h_s - sm.h_s) / (2.0 * delta);
                residual = residual.max((h_tt - h_ss).abs());
                let fd_t = (tp.h - tm.h) / (2.0 * delta);
                let fd_s = (sp.h - sm.h) / (2.0 * delta);
                derivative_gap = derivative_gap.max((fd_t - c.h_t).abs()).max((fd_s - c.h_s).abs());
                scale = scale
                    .max(h_tt.abs())
                    .max(h_ss.abs())
                    .max(c.h_t.abs())
                    .max(c.h_s.abs());
            }
        }
        let scale = scale.max(1.0);
        if residual > PROFILE_TOLERANCE * scale {
            return Err(Error::InvalidProfile("does not satisfy the wave equation"));
        }
        if derivative_gap > PROFILE_TOLERANCE * scale {
            return Err(Error::InvalidProfile("derivatives inconsistent with h"));
        }
        Ok(self)
    }

    pub fn eval(&self, s: f64, t: f64) -> WaveSample {
        match self {
            WaveProfile::Constant(c) => WaveSample {
                h: *c,
                h_t: 0.0,
                h_s: 0.0,
            },
            WaveProfile::Traveling { shape, direction } => {
                let sign = match direction {
                    Direction::Right => -1.0,
                    Direction::Left => 1.0,
                };
                let (f, df) = shape.eval(s + sign * t);
                WaveSample {
                    h: f,
                    h_t: sign * df,
                    h_s: df,
                }
            }
            WaveProfile::Standing {
                amplitude,
                wavenumber: k,
            } => {
                let (cs, ct) = (cos(k * s), cos(k * t));
                WaveSample {
                    h: amplitude * cs * ct,
                    h_t: -amplitude * k * cs * sin(k * t),
                    h_s: -amplitude * k * sin(k * s) * ct,
                }
            }
            WaveProfile::Superposition(parts) => parts.iter().fold(
                WaveSample {
                    h: 0.0,
                    h_t: 0.0,
                    h_s: 0.0,
                },
                |acc, p| {
                    let w = p.eval(s, t);
                    WaveSample {
                        h: acc.h + w.h,
                        h_t: acc.h_t + w.h_t,
                        h_s: acc.h_s + w.h_s,
                    }
                },
            ),
            WaveProfile::Custom { h, h_t, h_s } => WaveSample {
                h: h(s, t),
                h_t: h_t(s, t),
                h_s: h_s(s, t),
            },
        }
    }

    fn params_finite(&self) -> bool {
        match self {
            WaveProfile::Constant(c) => c.is_finite(),
            WaveProfile::Traveling { shape, .. } => shape.is_finite(),
            WaveProfile::Standing {
                amplitude,
                wavenumber,
            } => amplitude.is_finite() && wavenumber.is_finite(),
            WaveProfile::Superposition(parts) => parts.iter().all(WaveProfile::params_finite),
            WaveProfile::Custom { .. } => true,
        }
    }

    fn max_wavenumber(&self) -> f64 {
        match self {
            WaveProfile::Traveling { shape, .. } => shape.scale(),
            WaveProfile::Standing { wavenumber, .. } => wavenumber.abs(),
            WaveProfile::Superposition(parts) => {
                parts.iter().map(WaveProfile::max_wavenumber).fold(0.0, f64::max)
            }
            WaveProfile::Constant(_) | WaveProfile::Custom { .. } => 0.0,
        }
    }
}

/// Exact one-peakon solution `(Q, M, N)` built from a wave profile:
/// `Q = h`, `M = h_t / K₀`, `N = −h_s / K₀`.
pub fn single_peakon_exact(profile: &WaveProfile, s: f64, t: f64) -> (f64, f64, f64) {
    let w = profile.eval(s, t);
    (w.h, w.h_t / Kernel::K0, -w.h_s / Kernel::K0)
}

/// `F(X) = 2√2 sign(X) arccosh(e^{|X|/2})`, the map that linearizes the
/// separation equation of the antisymmetric collision.
pub fn collision_f(x: f64) -> f64 {
    let a = 0.5 * x.abs();
    let arccosh = a + ln1p(sqrt(-expm1(-2.0 * a)));
    2.0 * SQRT_2 * signum(x) * arccosh
}

/// Inverse of [`collision_f`]: `X = sign(F) · 2 ln cosh(F / (2√2))`.
pub fn collision_f_inverse(f: f64) -> f64 {
    signum(f) * 2.0 * ln_cosh(f / (2.0 * SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Peakon–antipeakon pair with `X = ± ln cosh²(h)` and center `Q¹ + Q² = 0`.
#[derive(Debug, Clone)]
pub struct CollisionSolution {
    pub profile: WaveProfile,
    pub branch: Branch,
}

/// Values of the collision solution at one `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionPoint {
    pub q1: f64,
    pub q2: f64,
    pub m1: f64,
    pub m2: f64,
    pub n1: f64,
    pub n2: f64,
    pub x: f64,
}

impl CollisionSolution {
    pub fn new(profile: WaveProfile, branch: Branch) -> Self {
        CollisionSolution { profile, branch }
    }

    /// Relative spacing `X = Q¹ − Q²`, defined everywhere.
    pub fn separation(&self, s: f64, t: f64) -> f64 {
        self.branch.sign() * 2.0 * ln_cosh(self.profile.eval(s, t).h)
    }
}

/// Evaluate the collision solution.
///
/// `M₁ = −M₂ = X_t / (2(K₀ − K(X)))` and `N₁ = −N₂ = −X_s / (2(K₀ − K(X)))`.
/// With `K₀ − K(X) = ½ tanh²h` these reduce to `±2 h_t / tanh h` and
/// `∓2 h_s / tanh h`, which is the form evaluated. Fails with
/// [`Error::CollisionInstant`] where `h = 0`.
pub fn collision_exact(sol: &CollisionSolution, s: f64, t: f64) -> Result<CollisionPoint> {
    let w = sol.profile.eval(s, t);
    let sign = sol.branch.sign();
    let x = sign * 2.0 * ln_cosh(w.h);
    let th = tanh(w.h);
    if th == 0.0 {
        return Err(Error::CollisionInstant);
    }
    let m1 = sign * 2.0 * w.h_t / th;
    let n1 = -sign * 2.0 * w.h_s / th;
    Ok(CollisionPoint {
        q1: 0.5 * x,
        q2: -0.5 * x,
        m1,
        m2: -m1,
        n1,
        n2: -n1,
        x,
    })
}

/// `K₀ − K(X)` evaluated without cancellation.
pub fn kernel_gap(x: f64) -> f64 {
    -0.5 * expm1(-x.abs())
}

/// Collision fields sampled on a uniform `(s, t)` grid, indexed `[t][s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionSamples {
    pub ds: f64,
    pub dt: f64,
    pub x: Vec<Vec<f64>>,
    pub m1: Vec<Vec<f64>>,
    pub m2: Vec<Vec<f64>>,
    pub n1: Vec<Vec<f64>>,
    pub n2: Vec<Vec<f64>>,
}

impl CollisionSamples {
    /// Sample `sol` at `s₀ + i·ds`, `t₀ + j·dt`.
    pub fn from_solution(
        sol: &CollisionSolution,
        (s0, ds, ns): (f64, f64, usize),
        (t0, dt, nt): (f64, f64, usize),
    ) -> Result<Self> {
        let mut out = CollisionSamples {
            ds,
            dt,
            x: Vec::with_capacity(nt),
            m1: Vec::with_capacity(nt),
            m2: Vec::with_capacity(nt),
            n1: Vec::with_capacity(nt),
            n2: Vec::with_capacity(nt),
        };
        for j in 0..nt {
            let t = t0 + j as f64 * dt;
            let points = (0..ns)
                .map(|i| collision_exact(sol, s0 + i as f64 * ds, t))
                .collect::<Result<Vec<_>>>()?;
            out.x.push(points.iter().map(|p| p.x).collect());
            out.m1.push(points.iter().map(|p| p.m1).collect());
            out.m2.push(points.iter().map(|p| p.m2).collect());
            out.n1.push(points.iter().map(|p| p.n1).collect());
            out.n2.push(points.iter().map(|p| p.n2).collect());
        }
        Ok(out)
    }

    fn shape(&self) -> Result<(usize, usize)> {
        let nt = self.x.len();
        let ns = self.x.first().map_or(0, Vec::len);
        if nt < 3 || ns < 3 {
            return Err(Error::TooFewTimeLevels {
                required: 3,
                found: nt.min(ns),
            });
        }
        if !(self.ds > 0.0 && self.dt > 0.0) {
            return Err(Error::InvalidParameters("sample spacings must be positive"));
        }
        let fields = [&self.x, &self.m1, &self.m2, &self.n1, &self.n2];
        if fields
            .iter()
            .any(|f| f.len() != nt || f.iter().any(|row| row.len() != ns))
        {
            return Err(Error::NonUniformTrajectory);
        }
        Ok((nt, ns))
    }
}

/// Maximum residuals of the potential representation over interior samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PotentialsReport {
    /// `|M₁ − M₂ − X_t / (K₀ − K)|`.
    pub x_time: f64,
    /// `|N₁ − N₂ + X_s / (K₀ − K)|`.
    pub x_space: f64,
    /// `|∂ₜ(M₁ + M₂) + ∂ₛ(N₁ + N₂)|`: obstruction to the potential φ.
    pub phi_curl: f64,
    /// `|∂ₜ(N₁ − N₂) + ∂ₛ(M₁ − M₂)|`.
    pub difference_law: f64,
    /// `max(|∂ₛφ|, |∂ₜφ|) = max(|M₁ + M₂|, |N₁ + N₂|)`.
    pub phi_gradient: f64,
}

impl PotentialsReport {
    /// Largest of the residuals, excluding the φ-gradient.
    pub fn max_residual(&self) -> f64 {
        self.x_time
            .max(self.x_space)
            .max(self.phi_curl)
            .max(self.difference_law)
    }
}

/// Check that sampled collision fields derive from potentials `X` and `φ`,
/// using centered differences at interior samples.
pub fn potentials_resolve(samples: &CollisionSamples) -> Result<PotentialsReport> {
    let (nt, ns) = samples.shape()?;
    let (ds, dt) = (samples.ds, samples.dt);
    let d_t = |f: &Vec<Vec<f64>>, j: usize, i: usize| (f[j + 1][i] - f[j - 1][i]) / (2.0 * dt);
    let d_s = |f: &Vec<Vec<f64>>, j: usize, i: usize| (f[j][i + 1] - f[j][i - 1]) / (2.0 * ds);
    let combine = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>, sign: f64| -> Vec<Vec<f64>> {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + sign * y).collect())
            .collect()
    };
    let m_sum = combine(&samples.m1, &samples.m2, 1.0);
    let m_diff = combine(&samples.m1, &samples.m2, -1.0);
    let n_sum = combine(&samples.n1, &samples.n2, 1.0);
    let n_diff = combine(&samples.n1, &samples.n2, -1.0);

    let mut r = PotentialsReport::default();
    for j in 0..nt {
        for i in 0..ns {
            r.phi_gradient = r.phi_gradient.max(m_sum[j][i].abs()).max(n_sum[j][i].abs());
        }
    }
    for j in 1..nt - 1 {
        for i in 1..ns - 1 {
            let gap = kernel_gap(samples.x[j][i]);
            let x_t = d_t(&samples.x, j, i);
            let x_s = d_s(&samples.x, j, i);
            r.x_time = r.x_time.max((m_diff[j][i] - x_t / gap).abs());
            r.x_space = r.x_space.max((n_diff[j][i] + x_s / gap).abs());
            r.phi_curl = r.phi_curl.max((d_t(&m_sum, j, i) + d_s(&n_sum, j, i)).abs());
            r.difference_law = r
                .difference_law
                .max((d_t(&n_diff, j, i) + d_s(&m_diff, j, i)).abs());
        }
    }
    Ok(r)
}

/// `K'(X) / (2(K₀ − K(X)))`, the coefficient of the separation equation.
pub fn separation_coefficient(x: f64) -> f64 {
    Kernel::derivative_of_separation(x) / (2.0 * kernel_gap(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_right(amplitude: f64) -> WaveProfile {
        WaveProfile::traveling(
            WaveShape::Sine {
                amplitude,
                wavenumber: 1.0,
                phase: 0.0,
            },
            Direction::Right,
        )
    }

    #[test]
    fn profiles_validate() {
        for p in [
            WaveProfile::Constant(0.3),
            sine_right(1.0),
            WaveProfile::standing(0.5, 1.0),
            WaveProfile::traveling(
                WaveShape::Linear {
                    slope: 1.0,
                    offset: 0.0,
                },
                Direction::Left,
            ),
            WaveProfile::Superposition(alloc::vec![
                WaveProfile::Constant(1.0),
                WaveProfile::standing(0.5, 3.0),
                sine_right(0.2),
            ]),
        ] {
            assert!(p.clone().validated().is_ok(), "{p:?}");
        }
    }

    #[test]
    fn non_wave_profile_is_rejected() {
        let heat = WaveProfile::Custom {
            h: |s, t| libm::exp(-t) * libm::sin(s),
            h_t: |s, t| -libm::exp(-t) * libm::sin(s),
            h_s: |s, t| libm::exp(-t) * libm::cos(s),
        };
        assert!(matches!(
            heat.validated(),
            Err(Error::InvalidProfile("does not satisfy the wave equation"))
        ));
        let wrong_derivative = WaveProfile::Custom {
            h: |s, t| s * t,
            h_t: |_, _| 0.0,
            h_s: |_, _| 0.0,
        };
        assert!(wrong_derivative.validated().is_err());
        assert!(WaveProfile::standing(f64::NAN, 1.0).validated().is_err());
    }

    #[test]
    fn single_peakon_examples() {
        let linear = WaveProfile::traveling(
            WaveShape::Linear {
                slope: 1.0,
                offset: 0.0,
            },
            Direction::Left,
        );
        assert_eq!(single_peakon_exact(&linear, 0.7, 0.2), (0.7 + 0.2, 2.0, -2.0));
        assert_eq!(
            single_peakon_exact(&WaveProfile::Constant(0.0), 1.0, 2.0),
            (0.0, 0.0, -0.0)
        );
        let (s, t) = (0.4, 1.1);
        let (q, m, n) = single_peakon_exact(&sine_right(1.0), s, t);
        assert!((q - libm::sin(s - t)).abs() < 1e-15);
        assert!((m + 2.0 * libm::cos(s - t)).abs() < 1e-15);
        assert!((n + 2.0 * libm::cos(s - t)).abs() < 1e-15);
    }

    #[test]
    fn collision_f_values() {
        assert_eq!(collision_f(0.0), 0.0);
        let exact = 2.0 * SQRT_2 * libm::acosh(core::f64::consts::E);
        assert!((collision_f(2.0) - exact).abs() < 1e-13);
        assert!((collision_f(2.0) - 4.6879).abs() < 5e-4);
        assert_eq!(collision_f(-2.0), -collision_f(2.0));
        for x in [-5.0, -1.0, 0.1, 3.0] {
            assert!((collision_f_inverse(collision_f(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn collision_round_trip_range() {
        for k in 0..=400 {
            let x = -20.0 + 0.1 * k as f64;
            assert!((collision_f_inverse(collision_f(x)) - x).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn linearization_identity() {
        for h in [0.0, 1e-6, 0.3, 1.0, 4.0, 12.0] {
            let x = 2.0 * ln_cosh(h);
            assert!(
                (collision_f(x) - 2.0 * SQRT_2 * h).abs() < 1e-12 * (1.0 + h),
                "{h}"
            );
        }
    }

    #[test]
    fn collision_examples() {
        let plus = CollisionSolution::new(WaveProfile::Constant(1.0), Branch::Plus);
        let p = collision_exact(&plus, 0.3, 0.9).unwrap();
        assert!((p.x - 0.867_562).abs() < 1e-6);
        assert_eq!((p.m1, p.m2, p.n1, p.n2), (0.0, -0.0, -0.0, 0.0));
        let minus = CollisionSolution::new(WaveProfile::Constant(1.0), Branch::Minus);
        let p = collision_exact(&minus, 0.0, 0.0).unwrap();
        assert!((p.x + 0.867_562).abs() < 1e-6);
        assert!(p.q1 < 0.0 && 0.0 < p.q2);
        let zero = CollisionSolution::new(WaveProfile::Constant(0.0), Branch::Plus);
        assert_eq!(collision_exact(&zero, 0.0, 0.0), Err(Error::CollisionInstant));
        assert_eq!(zero.separation(0.0, 0.0), 0.0);
    }

    #[test]
    fn closed_form_momenta_match_gap_form() {
        let sol = CollisionSolution::new(
            WaveProfile::Superposition(alloc::vec![
                WaveProfile::Constant(1.0),
                WaveProfile::standing(0.5, 1.0)
            ]),
            Branch::Plus,
        );
        for (s, t) in [(0.1, 0.2), (1.3, -0.4), (2.9, 0.8)] {
            let p = collision_exact(&sol, s, t).unwrap();
            let w = sol.profile.eval(s, t);
            let x_t = 2.0 * libm::tanh(w.h) * w.h_t;
            let x_s = 2.0 * libm::tanh(w.h) * w.h_s;
            let gap = Kernel::K0 - Kernel::of_separation(p.x);
            assert!((p.m1 - x_t / (2.0 * gap)).abs() < 1e-12 * p.m1.abs().max(1.0));
            assert!((p.n1 + x_s / (2.0 * gap)).abs() < 1e-12 * p.n1.abs().max(1.0));
            assert_eq!(p.q1 + p.q2, 0.0);
        }
    }

    #[test]
    fn potentials_constant_gradient_case() {
        let row = alloc::vec![0.5; 5];
        let ones = alloc::vec![alloc::vec![1.0; 5]; 4];
        let zeros = alloc::vec![alloc::vec![0.0; 5]; 4];
        let samples = CollisionSamples {
            ds: 0.1,
            dt: 0.1,
            x: alloc::vec![row; 4],
            m1: ones.clone(),
            m2: ones,
            n1: zeros.clone(),
            n2: zeros,
        };
        let r = potentials_resolve(&samples).unwrap();
        assert_eq!(r.phi_gradient, 2.0);
        assert_eq!(r.phi_curl, 0.0);
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn potentials_detect_asymmetry() {
        let sol = CollisionSolution::new(
            WaveProfile::Superposition(alloc::vec![
                WaveProfile::Constant(1.0),
                WaveProfile::standing(0.5, 1.0)
            ]),
            Branch::Plus,
        );
        let mut samples = CollisionSamples::from_solution(&sol, (0.0, 0.05, 40), (0.0, 0.05, 20)).unwrap();
        let clean = potentials_resolve(&samples).unwrap();
        assert!(clean.max_residual() < 1e-2, "{clean:?}");
        assert!(clean.phi_gradient < 1e-12);
        for (j, row) in samples.m1.iter_mut().enumerate() {
            for (i, m) in row.iter_mut().enumerate() {
                *m += 0.1 * libm::sin(0.05 * i as f64) * (1.0 + 0.05 * j as f64);
            }
        }
        let dirty = potentials_resolve(&samples).unwrap();
        assert!(dirty.phi_curl > 1e-2, "{dirty:?}");
    }

    #[test]
    fn short_samples_are_rejected() {
        let samples = CollisionSamples {
            ds: 0.1,
            dt: 0.1,
            x: alloc::vec![alloc::vec![1.0; 5]; 2],
            m1: alloc::vec![alloc::vec![1.0; 5]; 2],
            m2: alloc::vec![alloc::vec![1.0; 5]; 2],
            n1: alloc::vec![alloc::vec![1.0; 5]; 2],
            n2: alloc::vec![alloc::vec![1.0; 5]; 2],
        };
        assert!(potentials_resolve(&samples).is_err());
    }
}
