//! Classical explicit RK4.

use alloc::vec::Vec;

use crate::{Error, Result};

/// State vectors the integrator can combine linearly.
pub trait Integrable: Clone {
    /// `self += factor · other`.
    fn add_scaled(&mut self, factor: f64, other: &Self);

    fn all_finite(&self) -> bool;
}

impl Integrable for f64 {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        *self += factor * other;
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl Integrable for Vec<f64> {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        for (x, y) in self.iter_mut().zip(other) {
            *x += factor * y;
        }
    }

    fn all_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

/// Advance `state` from `t` to `t + dt` with the classical four-stage scheme.
///
/// Errors from `rhs` are passed through unchanged. A non-finite result is
/// reported as [`Error::BlowUp`] stamped with `t + dt`.
pub fn rk4_step<S, F>(state: &S, t: f64, dt: f64, mut rhs: F) -> Result<S>
where
    S: Integrable,
    F: FnMut(&S) -> Result<S>,
{
    let k1 = rhs(state)?;

    let mut stage = state.clone();
    stage.add_scaled(0.5 * dt, &k1);
    let k2 = rhs(&stage)?;

    stage = state.clone();
    stage.add_scaled(0.5 * dt, &k2);
    let k3 = rhs(&stage)?;

    stage = state.clone();
    stage.add_scaled(dt, &k3);
    let k4 = rhs(&stage)?;

    let mut next = state.clone();
    next.add_scaled(dt / 6.0, &k1);
    next.add_scaled(dt / 3.0, &k2);
    next.add_scaled(dt / 3.0, &k3);
    next.add_scaled(dt / 6.0, &k4);

    if !next.all_finite() {
        return Err(Error::BlowUp { time: t + dt });
    }
    Ok(next)
}
