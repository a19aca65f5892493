//! Method-of-lines right-hand sides for SO(3) strands.
//!
//! All systems live on a periodic s-grid and use a centered
//! [`DerivativeStencil`] for ∂_s. The returned "rates" are states of the same
//! type holding the time derivatives, so they plug straight into
//! [`rk4_step`](crate::integrate::rk4_step).

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{DiagonalParams, DiagonalRole, So3Vector};
use crate::grid::{centered_time_difference, DerivativeStencil, PeriodicGrid};
use crate::integrate::Integrable;
use crate::{Error, Result};

/// Reduced velocities `u = g⁻¹g_t`, `v = g⁻¹g_s` sampled on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct So3StrandState {
    grid: PeriodicGrid,
    pub u: Vec<So3Vector>,
    pub v: Vec<So3Vector>,
}

impl So3StrandState {
    pub fn new(grid: PeriodicGrid, u: Vec<So3Vector>, v: Vec<So3Vector>) -> Result<Self> {
        grid.check_len(u.len())?;
        grid.check_len(v.len())?;
        Ok(So3StrandState { grid, u, v })
    }

    /// Sample `(u(s), v(s))` at every grid coordinate.
    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64) -> (So3Vector, So3Vector)) -> Self {
        let (u, v) = grid.coordinates().map(&mut f).unzip();
        So3StrandState { grid, u, v }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        let n = grid.nodes();
        So3StrandState {
            grid,
            u: alloc::vec![So3Vector::ZERO; n],
            v: alloc::vec![So3Vector::ZERO; n],
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn scaled(&self, factor: f64) -> Self {
        So3StrandState {
            grid: self.grid,
            u: self.u.iter().map(|x| *x * factor).collect(),
            v: self.v.iter().map(|x| *x * factor).collect(),
        }
    }

    /// Largest componentwise difference to another state on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_vec_diff(&self.u, &other.u).max(max_vec_diff(&self.v, &other.v))
    }

    pub fn max_abs(&self) -> f64 {
        self.u
            .iter()
            .chain(&self.v)
            .fold(0.0, |acc, x| acc.max(x.max_abs()))
    }
}

pub(crate) fn max_vec_diff(a: &[So3Vector], b: &[So3Vector]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc.max((*x - *y).max_abs()))
}

fn add_scaled_field(target: &mut [So3Vector], factor: f64, other: &[So3Vector]) {
    for (x, y) in target.iter_mut().zip(other) {
        *x += *y * factor;
    }
}

fn field_finite(field: &[So3Vector]) -> bool {
    field.iter().all(So3Vector::is_finite)
}

impl Integrable for So3StrandState {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        add_scaled_field(&mut self.u, factor, &other.u);
        add_scaled_field(&mut self.v, factor, &other.v);
    }

    fn all_finite(&self) -> bool {
        field_finite(&self.u) && field_finite(&self.v)
    }
}

/// Inertia tensors of the spin-chain Lagrangian `½∮(u·Au + v·Bv) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainParams {
    pub a: DiagonalParams,
    pub b: DiagonalParams,
}

impl SpinChainParams {
    pub fn new(a: DiagonalParams, b: DiagonalParams) -> Result<Self> {
        if a.role() != DiagonalRole::InertiaA || b.role() != DiagonalRole::InertiaB {
            return Err(Error::InvalidParameters(
                "spin chain needs inertia-A and inertia-B",
            ));
        }
        if a.diagonal().contains(&0.0) {
            return Err(Error::SingularInertia);
        }
        Ok(SpinChainParams { a, b })
    }

    /// `A = Id`, `B = −Id`: the chiral model.
    pub fn chiral() -> Self {
        SpinChainParams {
            a: DiagonalParams::inertia_a([1.0; 3]).expect("identity is invertible"),
            b: DiagonalParams::inertia_b([-1.0; 3]).expect("finite"),
        }
    }

    /// Legendre map `m = δℓ/δu = Au`.
    pub fn momentum(&self, state: &So3StrandState) -> MomentumState {
        MomentumState {
            grid: state.grid,
            m: state.u.iter().map(|u| self.a.apply(u)).collect(),
            v: state.v.clone(),
        }
    }

    /// Inverse Legendre map `u = δh/δm = A⁻¹m`.
    pub fn velocity(&self, state: &MomentumState) -> Result<So3StrandState> {
        let u = state
            .m
            .iter()
            .map(|m| self.a.apply_inverse(m))
            .collect::<Result<Vec<_>>>()?;
        So3StrandState::new(state.grid, u, state.v.clone())
    }

    /// Hamiltonian `h = ∮ ½(u·Au − v·Bv) ds`, conserved by the spin chain.
    pub fn energy(&self, state: &So3StrandState) -> f64 {
        let ds = state.grid.spacing();
        state
            .u
            .iter()
            .zip(&state.v)
            .map(|(u, v)| 0.5 * (u.dot(&self.a.apply(u)) - v.dot(&self.b.apply(v))))
            .sum::<f64>()
            * ds
    }
}

/// Lie–Poisson variables: momentum `m` and the strand velocity `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumState {
    grid: PeriodicGrid,
    pub m: Vec<So3Vector>,
    pub v: Vec<So3Vector>,
}

impl MomentumState {
    pub fn new(grid: PeriodicGrid, m: Vec<So3Vector>, v: Vec<So3Vector>) -> Result<Self> {
        grid.check_len(m.len())?;
        grid.check_len(v.len())?;
        Ok(MomentumState { grid, m, v })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }
}

impl Integrable for MomentumState {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        add_scaled_field(&mut self.m, factor, &other.m);
        add_scaled_field(&mut self.v, factor, &other.v);
    }

    fn all_finite(&self) -> bool {
        field_finite(&self.m) && field_finite(&self.v)
    }
}

/// Spin chain in Euler–Poincaré form:
///
/// ```text
/// u_t = −A⁻¹( u × Au + ∂_s(Bv) + v × Bv )
/// v_t = ∂_s u + v × u
/// ```
pub fn spin_chain_rhs(
    state: &So3StrandState,
    params: &SpinChainParams,
    stencil: &DerivativeStencil,
) -> Result<So3StrandState> {
    let ds = state.grid.spacing();
    let bv: Vec<So3Vector> = state.v.iter().map(|v| params.b.apply(v)).collect();
    let dbv = stencil.derivative(&bv, ds);
    let du = stencil.derivative(&state.u, ds);

    let mut u_t = Vec::with_capacity(state.u.len());
    let mut v_t = Vec::with_capacity(state.u.len());
    for i in 0..state.u.len() {
        let (u, v) = (state.u[i], state.v[i]);
        let force = u.cross(&params.a.apply(&u)) + dbv[i] + v.cross(&bv[i]);
        u_t.push(-params.a.apply_inverse(&force)?);
        v_t.push(du[i] + v.cross(&u));
    }
    Ok(So3StrandState {
        grid: state.grid,
        u: u_t,
        v: v_t,
    })
}

/// Chiral model: `u_t = ∂_s v`, `v_t = ∂_s u − u × v`.
pub fn chiral_rhs(state: &So3StrandState, stencil: &DerivativeStencil) -> So3StrandState {
    let ds = state.grid.spacing();
    let u_t = stencil.derivative(&state.v, ds);
    let du = stencil.derivative(&state.u, ds);
    let v_t = du
        .iter()
        .zip(state.u.iter().zip(&state.v))
        .map(|(d, (u, v))| *d - u.cross(v))
        .collect();
    So3StrandState {
        grid: state.grid,
        u: u_t,
        v: v_t,
    }
}

/// Anisotropic chiral model in (u, v):
///
/// ```text
/// u_t = ∂_s v − v × Pv + u × Pu
/// v_t = ∂_s u − u × Pv + v × Pu
/// ```
pub fn aniso_rhs_uv(
    state: &So3StrandState,
    p: &DiagonalParams,
    stencil: &DerivativeStencil,
) -> So3StrandState {
    let ds = state.grid.spacing();
    let du = stencil.derivative(&state.u, ds);
    let dv = stencil.derivative(&state.v, ds);
    let mut u_t = Vec::with_capacity(du.len());
    let mut v_t = Vec::with_capacity(du.len());
    for i in 0..du.len() {
        let (u, v) = (state.u[i], state.v[i]);
        let (pu, pv) = (p.apply(&u), p.apply(&v));
        u_t.push(dv[i] - v.cross(&pv) + u.cross(&pu));
        v_t.push(du[i] - u.cross(&pv) + v.cross(&pu));
    }
    So3StrandState {
        grid: state.grid,
        u: u_t,
        v: v_t,
    }
}

/// Cross-coupled variables `X = u − v`, `Y = −u − v` of the anisotropic model.
///
/// The per-node magnitudes at construction are kept so that drift can be
/// measured without carrying the initial state around.
#[derive(Debug, Clone, PartialEq)]
pub struct XYState {
    grid: PeriodicGrid,
    pub x: Vec<So3Vector>,
    pub y: Vec<So3Vector>,
    recorded_x: Arc<[f64]>,
    recorded_y: Arc<[f64]>,
}

impl XYState {
    pub fn new(grid: PeriodicGrid, x: Vec<So3Vector>, y: Vec<So3Vector>) -> Result<Self> {
        grid.check_len(x.len())?;
        grid.check_len(y.len())?;
        let recorded_x = x.iter().map(So3Vector::norm_squared).collect();
        let recorded_y = y.iter().map(So3Vector::norm_squared).collect();
        Ok(XYState {
            grid,
            x,
            y,
            recorded_x,
            recorded_y,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// `(|X|², |Y|²)` per node as recorded at construction.
    pub fn recorded_magnitudes(&self) -> (&[f64], &[f64]) {
        (&self.recorded_x, &self.recorded_y)
    }

    /// Max per-node `| |X|² − recorded |` and the same for Y.
    pub fn magnitude_drift(&self) -> (f64, f64) {
        let drift = |field: &[So3Vector], recorded: &[f64]| {
            field
                .iter()
                .zip(recorded)
                .fold(0.0_f64, |acc, (x, r)| acc.max((x.norm_squared() - r).abs()))
        };
        (drift(&self.x, &self.recorded_x), drift(&self.y, &self.recorded_y))
    }

    /// `(∮|X|² ds, ∮|Y|² ds)`.
    pub fn magnitude_integrals(&self) -> (f64, f64) {
        let ds = self.grid.spacing();
        let sum = |field: &[So3Vector]| field.iter().map(So3Vector::norm_squared).sum::<f64>() * ds;
        (sum(&self.x), sum(&self.y))
    }

    fn with_fields(&self, x: Vec<So3Vector>, y: Vec<So3Vector>) -> Self {
        XYState {
            grid: self.grid,
            x,
            y,
            recorded_x: self.recorded_x.clone(),
            recorded_y: self.recorded_y.clone(),
        }
    }
}

impl Integrable for XYState {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        add_scaled_field(&mut self.x, factor, &other.x);
        add_scaled_field(&mut self.y, factor, &other.y);
    }

    fn all_finite(&self) -> bool {
        field_finite(&self.x) && field_finite(&self.y)
    }
}

pub fn to_xy(state: &So3StrandState) -> XYState {
    let x = state.u.iter().zip(&state.v).map(|(u, v)| *u - *v).collect();
    let y = state.u.iter().zip(&state.v).map(|(u, v)| -*u - *v).collect();
    XYState::new(state.grid, x, y).expect("lengths come from a valid state")
}

/// Inverse of [`to_xy`]: `u = (X − Y)/2`, `v = −(X + Y)/2`.
pub fn from_xy(xy: &XYState) -> So3StrandState {
    let u = xy.x.iter().zip(&xy.y).map(|(x, y)| (*x - *y) * 0.5).collect();
    let v = xy.x.iter().zip(&xy.y).map(|(x, y)| (*x + *y) * -0.5).collect();
    So3StrandState { grid: xy.grid, u, v }
}

/// Anisotropic chiral model in cross-coupled form:
///
/// ```text
/// X_t = −∂_s X − X × PY
/// Y_t =  ∂_s Y + Y × PX
/// ```
///
/// The sign of the Y coupling is the one obtained by pushing
/// [`aniso_rhs_uv`] through `X = u − v`, `Y = −u − v`.
pub fn aniso_rhs_xy(xy: &XYState, p: &DiagonalParams, stencil: &DerivativeStencil) -> XYState {
    let ds = xy.grid.spacing();
    let dx = stencil.derivative(&xy.x, ds);
    let dy = stencil.derivative(&xy.y, ds);
    let mut x_t = Vec::with_capacity(dx.len());
    let mut y_t = Vec::with_capacity(dx.len());
    for i in 0..dx.len() {
        let (x, y) = (xy.x[i], xy.y[i]);
        x_t.push(-dx[i] - x.cross(&p.apply(&y)));
        y_t.push(dy[i] + y.cross(&p.apply(&x)));
    }
    xy.with_fields(x_t, y_t)
}

/// Spin chain in Lie–Poisson form, with `δh/δm = A⁻¹m` and `δh/δv = −Bv`:
///
/// ```text
/// m_t = ad*_{δh/δm} m + ∂_s(δh/δv) − ad*_v(δh/δv)
/// v_t = ∂_s(δh/δm) − ad_{δh/δm} v
/// ```
pub fn lie_poisson_rhs_spin_chain(
    state: &MomentumState,
    params: &SpinChainParams,
    stencil: &DerivativeStencil,
) -> Result<MomentumState> {
    use crate::algebra::{ad, ad_star};

    let ds = state.grid.spacing();
    let dh_dm = state
        .m
        .iter()
        .map(|m| params.a.apply_inverse(m))
        .collect::<Result<Vec<_>>>()?;
    let dh_dv: Vec<So3Vector> = state.v.iter().map(|v| -params.b.apply(v)).collect();
    let d_dh_dv = stencil.derivative(&dh_dv, ds);
    let d_dh_dm = stencil.derivative(&dh_dm, ds);

    let mut m_t = Vec::with_capacity(dh_dm.len());
    let mut v_t = Vec::with_capacity(dh_dm.len());
    for i in 0..dh_dm.len() {
        let (m, v) = (state.m[i], state.v[i]);
        m_t.push(ad_star(&dh_dm[i], &m) + d_dh_dv[i] - ad_star(&v, &dh_dv[i]));
        v_t.push(d_dh_dm[i] - ad(&dh_dm[i], &v));
    }
    Ok(MomentumState {
        grid: state.grid,
        m: m_t,
        v: v_t,
    })
}

/// Residual of the chiral equations for given fields and time derivatives:
/// `(u_t − ∂_s v, v_t − ∂_s u + u × v)`.
pub fn chiral_residual(
    state: &So3StrandState,
    rate: &So3StrandState,
    stencil: &DerivativeStencil,
) -> So3StrandState {
    let ds = state.grid.spacing();
    let du = stencil.derivative(&state.u, ds);
    let dv = stencil.derivative(&state.v, ds);
    let ru = rate.u.iter().zip(&dv).map(|(ut, d)| *ut - *d).collect();
    let rv = (0..du.len())
        .map(|i| rate.v[i] - du[i] + state.u[i].cross(&state.v[i]))
        .collect();
    So3StrandState {
        grid: state.grid,
        u: ru,
        v: rv,
    }
}

/// Residual of the anisotropic equations in (u, v) form:
/// `(u_t − ∂_s v + v × Pv − u × Pu, v_t − ∂_s u + u × Pv − v × Pu)`.
pub fn aniso_residual(
    state: &So3StrandState,
    rate: &So3StrandState,
    p: &DiagonalParams,
    stencil: &DerivativeStencil,
) -> So3StrandState {
    let ds = state.grid.spacing();
    let du = stencil.derivative(&state.u, ds);
    let dv = stencil.derivative(&state.v, ds);
    let mut ru = Vec::with_capacity(du.len());
    let mut rv = Vec::with_capacity(du.len());
    for i in 0..du.len() {
        let (u, v) = (state.u[i], state.v[i]);
        let (pu, pv) = (p.apply(&u), p.apply(&v));
        ru.push(rate.u[i] - dv[i] + v.cross(&pv) - u.cross(&pu));
        rv.push(rate.v[i] - du[i] + u.cross(&pv) - v.cross(&pu));
    }
    So3StrandState {
        grid: state.grid,
        u: ru,
        v: rv,
    }
}

/// Discrete zero-curvature relation `r = D_t v − D_s u + u × v` along a
/// trajectory with uniform spacing `dt`.
///
/// `D_t` is the centered difference over stored snapshots, so the result has
/// one entry per interior time level (`traj.len() − 2` levels).
pub fn compatibility_residual(
    traj: &[So3StrandState],
    stencil: &DerivativeStencil,
    dt: f64,
) -> Result<Vec<Vec<So3Vector>>> {
    if traj.len() < 3 {
        return Err(Error::TooFewTimeLevels {
            required: 3,
            found: traj.len(),
        });
    }
    let grid = traj[0].grid;
    if traj.iter().any(|s| s.grid != grid) {
        return Err(Error::NonUniformTrajectory);
    }
    let ds = grid.spacing();
    Ok(traj
        .windows(3)
        .map(|w| {
            let v_t = centered_time_difference(&w[0].v, &w[2].v, dt);
            let du = stencil.derivative(&w[1].u, ds);
            (0..du.len())
                .map(|i| v_t[i] - du[i] + w[1].u[i].cross(&w[1].v[i]))
                .collect()
        })
        .collect())
}
