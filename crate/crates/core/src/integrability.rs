//! Lax pairs and zero-curvature monitors.
//!
//! A [`LaxConnection`] holds, per s-node, the potentials of the linear problem
//! `ψ_s = Uψ`, `ψ_t = Vψ`. Compatibility of the two is the zero-curvature
//! condition `U_t − V_s + [U, V] = 0`, which [`zero_curvature_residual`]
//! evaluates along stored trajectories with centered differences in t and the
//! periodic stencil in s.

use alloc::vec::Vec;

use crate::algebra::{build_j, embed_so4, hat, DiagonalParams, Matrix, So3Vector};
use crate::grid::{centered_time_difference, DerivativeStencil, PeriodicGrid};
use crate::so3_dynamics::{So3StrandState, XYState};
use crate::{Error, Result};

/// Default spectral-parameter sweep for the chiral pair.
pub const CHIRAL_LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, -1.0];
/// Default spectral-parameter sweep for the anisotropic pair.
pub const ANISO_LAMBDAS: [f64; 3] = [0.0, 0.5, 1.0];

/// Field scale at which the 4×4 anisotropic pair is compatible with the
/// (u, v) equations of [`aniso_rhs_uv`](crate::so3_dynamics::aniso_rhs_uv).
pub const ANISO_LAX_FIELD_SCALE: f64 = 2.0;

/// Matrix potentials `(U, V)` per s-node at one spectral parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxConnection<const N: usize> {
    grid: PeriodicGrid,
    pub lambda: f64,
    /// s-potential U (the `L` operator).
    pub spatial: Vec<Matrix<N>>,
    /// t-potential V (the `M` operator).
    pub temporal: Vec<Matrix<N>>,
}

impl<const N: usize> LaxConnection<N> {
    pub fn new(
        grid: PeriodicGrid,
        lambda: f64,
        spatial: Vec<Matrix<N>>,
        temporal: Vec<Matrix<N>>,
    ) -> Result<Self> {
        grid.check_len(spatial.len())?;
        grid.check_len(temporal.len())?;
        Ok(LaxConnection {
            grid,
            lambda,
            spatial,
            temporal,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub const fn algebra_dim(&self) -> usize {
        N
    }
}

/// Chiral-model pair
///
/// ```text
/// L =  ¼[(1+λ)(û − v̂) − (1 + 1/λ)(û + v̂)]
/// M = −¼[(1+λ)(û − v̂) + (1 + 1/λ)(û + v̂)]
/// ```
pub fn chiral_lax(state: &So3StrandState, lambda: f64) -> Result<LaxConnection<3>> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::ZeroSpectralParameter);
    }
    let alpha = 0.25 * (1.0 + lambda);
    let beta = 0.25 * (1.0 + 1.0 / lambda);
    let (spatial, temporal) = state
        .u
        .iter()
        .zip(&state.v)
        .map(|(u, v)| {
            let diff = *hat(&(*u - *v)).as_matrix();
            let sum = *hat(&(*u + *v)).as_matrix();
            (diff * alpha - sum * beta, -(diff * alpha + sum * beta))
        })
        .unzip();
    Ok(LaxConnection {
        grid: *state.grid(),
        lambda,
        spatial,
        temporal,
    })
}

/// Anisotropic chiral pair `U = A(v,u)(λ Id + J)`, `V = A(u,v)(λ Id + J)`
/// with `J` from [`build_j`], evaluated on the stored fields as they are.
///
/// These potentials are not antisymmetric: the diagonal factor is kept raw.
pub fn aniso_lax(state: &So3StrandState, lambda: f64, p: &DiagonalParams) -> Result<LaxConnection<4>> {
    aniso_lax_scaled(state, lambda, p, 1.0)
}

/// [`aniso_lax`] applied to the fields scaled by [`ANISO_LAX_FIELD_SCALE`].
///
/// This is the normalization in which the pair's zero-curvature condition
/// reproduces the (u, v) equations integrated by this crate.
pub fn aniso_lax_normalized(
    state: &So3StrandState,
    lambda: f64,
    p: &DiagonalParams,
) -> Result<LaxConnection<4>> {
    aniso_lax_scaled(state, lambda, p, ANISO_LAX_FIELD_SCALE)
}

fn aniso_lax_scaled(
    state: &So3StrandState,
    lambda: f64,
    p: &DiagonalParams,
    scale: f64,
) -> Result<LaxConnection<4>> {
    let shift = Matrix::<4>::identity() * lambda + build_j(p)?;
    let (spatial, temporal) = state
        .u
        .iter()
        .zip(&state.v)
        .map(|(u, v)| {
            let (u, v) = (*u * scale, *v * scale);
            (
                *embed_so4(&v, &u).as_matrix() * shift,
                *embed_so4(&u, &v).as_matrix() * shift,
            )
        })
        .unzip();
    Ok(LaxConnection {
        grid: *state.grid(),
        lambda,
        spatial,
        temporal,
    })
}

/// Zero-curvature residual fields at the interior levels of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureResidual<const N: usize> {
    /// `levels[k][i]` is the residual at time level `k + 1`, node `i`.
    pub levels: Vec<Vec<Matrix<N>>>,
}

impl<const N: usize> CurvatureResidual<N> {
    /// Max entry magnitude per interior time level.
    pub fn level_max(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|level| level.iter().fold(0.0_f64, |acc, m| acc.max(m.max_abs())))
            .collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.level_max().into_iter().fold(0.0, f64::max)
    }
}

/// `R = D_t U − D_s V + [U, V]` per node at every interior stored level.
///
/// Requires at least three snapshots with uniform spacing `dt`, all at the
/// same spectral parameter and on the same grid.
pub fn zero_curvature_residual<const N: usize>(
    traj: &[LaxConnection<N>],
    stencil: &DerivativeStencil,
    dt: f64,
) -> Result<CurvatureResidual<N>> {
    if traj.len() < 3 {
        return Err(Error::TooFewTimeLevels {
            required: 3,
            found: traj.len(),
        });
    }
    let first = &traj[0];
    if traj
        .iter()
        .any(|c| c.grid != first.grid || c.lambda != first.lambda)
    {
        return Err(Error::NonUniformTrajectory);
    }
    let ds = first.grid.spacing();
    let levels = traj
        .windows(3)
        .map(|w| {
            let u_t = centered_time_difference(&w[0].spatial, &w[2].spatial, dt);
            let v_s = stencil.derivative(&w[1].temporal, ds);
            (0..u_t.len())
                .map(|i| u_t[i] - v_s[i] + w[1].spatial[i].commutator(&w[1].temporal[i]))
                .collect()
        })
        .collect();
    Ok(CurvatureResidual { levels })
}

/// Max drift of the per-node magnitudes along an (X, Y) trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MagnitudeDrift {
    pub x: f64,
    pub y: f64,
}

impl MagnitudeDrift {
    pub fn max(&self) -> f64 {
        self.x.max(self.y)
    }
}

/// `max_{t,s} | |X(t,s)|² − |X(0,s)|² |` and the same for Y.
pub fn invariant_drift(xy_traj: &[XYState]) -> Result<MagnitudeDrift> {
    let Some(initial) = xy_traj.first() else {
        return Err(Error::TooFewTimeLevels {
            required: 2,
            found: 0,
        });
    };
    if xy_traj.len() < 2 {
        return Err(Error::TooFewTimeLevels {
            required: 2,
            found: xy_traj.len(),
        });
    }
    let reference = |field: &[So3Vector]| field.iter().map(So3Vector::norm_squared).collect::<Vec<_>>();
    let (x0, y0) = (reference(&initial.x), reference(&initial.y));
    let drift = |field: &[So3Vector], r: &[f64]| {
        field
            .iter()
            .zip(r)
            .fold(0.0_f64, |acc, (x, r0)| acc.max((x.norm_squared() - r0).abs()))
    };
    Ok(xy_traj
        .iter()
        .fold(MagnitudeDrift::default(), |acc, xy| MagnitudeDrift {
            x: acc.x.max(drift(&xy.x, &x0)),
            y: acc.y.max(drift(&xy.y, &y0)),
        }))
}
