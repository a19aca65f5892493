//! Uniform periodic s-grids and centered finite-difference stencils.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::{Error, Result};

/// Smallest number of nodes accepted for a strand grid.
pub const MIN_NODES: usize = 8;

/// Uniform periodic grid over `[0, length)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    length: f64,
    nodes: usize,
}

impl PeriodicGrid {
    pub fn new(length: f64, nodes: usize) -> Result<Self> {
        if nodes < MIN_NODES || !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid { nodes, length });
        }
        Ok(PeriodicGrid { length, nodes })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.nodes as f64
    }

    pub fn coordinate(&self, index: usize) -> f64 {
        index as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(move |i| self.coordinate(i))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.nodes {
            return Err(Error::FieldLength {
                expected: self.nodes,
                found: len,
            });
        }
        Ok(())
    }
}

/// Values a stencil can differentiate: anything closed under linear combination.
pub trait FieldValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> FieldValue for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

/// Centered first-derivative stencil on a periodic grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivativeStencil {
    order: StencilOrder,
}

impl Default for DerivativeStencil {
    fn default() -> Self {
        DerivativeStencil {
            order: StencilOrder::Second,
        }
    }
}

impl DerivativeStencil {
    pub fn new(order: u8) -> Result<Self> {
        let order = match order {
            2 => StencilOrder::Second,
            4 => StencilOrder::Fourth,
            other => return Err(Error::UnsupportedStencilOrder(other)),
        };
        Ok(DerivativeStencil { order })
    }

    pub fn second_order() -> Self {
        DerivativeStencil {
            order: StencilOrder::Second,
        }
    }

    pub fn fourth_order() -> Self {
        DerivativeStencil {
            order: StencilOrder::Fourth,
        }
    }

    pub fn order(&self) -> u8 {
        match self.order {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    /// ∂_s of a periodic field sampled with the given spacing.
    pub fn derivative<T: FieldValue>(&self, field: &[T], spacing: f64) -> Vec<T> {
        let n = field.len();
        let at = |i: usize, offset: isize| field[(i as isize + offset).rem_euclid(n as isize) as usize];
        match self.order {
            StencilOrder::Second => {
                let scale = 1.0 / (2.0 * spacing);
                (0..n).map(|i| (at(i, 1) - at(i, -1)) * scale).collect()
            }
            StencilOrder::Fourth => {
                let scale = 1.0 / (12.0 * spacing);
                (0..n)
                    .map(|i| ((at(i, -2) - at(i, 2)) + (at(i, 1) - at(i, -1)) * 8.0) * scale)
                    .collect()
            }
        }
    }

    /// ∂_s at a single node; same weights as [`Self::derivative`].
    pub fn derivative_at<T: FieldValue>(&self, field: &[T], index: usize, spacing: f64) -> T {
        let n = field.len() as isize;
        let at = |offset: isize| field[(index as isize + offset).rem_euclid(n) as usize];
        match self.order {
            StencilOrder::Second => (at(1) - at(-1)) * (1.0 / (2.0 * spacing)),
            StencilOrder::Fourth => ((at(-2) - at(2)) + (at(1) - at(-1)) * 8.0) * (1.0 / (12.0 * spacing)),
        }
    }
}

/// Second-order periodic second difference `(f[i+1] − 2f[i] + f[i−1]) / h²`.
pub fn second_difference<T: FieldValue>(field: &[T], spacing: f64) -> Vec<T> {
    let n = field.len();
    let inv = 1.0 / (spacing * spacing);
    (0..n)
        .map(|i| {
            let prev = field[(i + n - 1) % n];
            let next = field[(i + 1) % n];
            ((next - field[i]) - (field[i] - prev)) * inv
        })
        .collect()
}

/// Centered time difference `(next − prev) / (2 dt)` node by node.
pub fn centered_time_difference<T: FieldValue>(prev: &[T], next: &[T], dt: f64) -> Vec<T> {
    let scale = 1.0 / (2.0 * dt);
    prev.iter().zip(next).map(|(&p, &n)| (n - p) * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::So3Vector;
    use core::f64::consts::TAU;

    #[test]
    fn grid_validation() {
        assert!(PeriodicGrid::new(TAU, 7).is_err());
        assert!(PeriodicGrid::new(0.0, 64).is_err());
        assert!(PeriodicGrid::new(f64::INFINITY, 64).is_err());
        let g = PeriodicGrid::new(TAU, 64).unwrap();
        assert_eq!(g.spacing(), TAU / 64.0);
        assert_eq!(g.coordinates().count(), 64);
    }

    #[test]
    fn rejects_odd_orders() {
        assert_eq!(DerivativeStencil::new(3), Err(Error::UnsupportedStencilOrder(3)));
        assert_eq!(DerivativeStencil::new(4).unwrap().order(), 4);
    }

    #[test]
    fn constant_field_has_exactly_zero_derivative() {
        for order in [2, 4] {
            let s = DerivativeStencil::new(order).unwrap();
            let d = s.derivative(&[1.2345_f64; 16], 0.1);
            assert!(d.iter().all(|&x| x == 0.0));
            let dv = s.derivative(&[So3Vector::new(0.3, -1.0, 7.0); 16], 0.1);
            assert!(dv.iter().all(|x| *x == So3Vector::ZERO));
        }
    }

    fn sine_error(order: u8, n: usize, k: f64) -> f64 {
        let g = PeriodicGrid::new(TAU, n).unwrap();
        let f: Vec<f64> = g.coordinates().map(|s| libm::sin(k * s)).collect();
        let d = DerivativeStencil::new(order).unwrap().derivative(&f, g.spacing());
        g.coordinates()
            .zip(&d)
            .map(|(s, di)| (di - k * libm::cos(k * s)).abs())
            .fold(0.0, f64::max)
            / k
    }

    #[test]
    fn sine_derivative_error_scales_with_order() {
        for (order, tol) in [(2u8, 0.2), (4, 0.1)] {
            let k = 3.0;
            for n in [32, 64, 128] {
                let kh = k * TAU / n as f64;
                let err = sine_error(order, n, k);
                assert!(err <= tol * kh.powi(order as i32), "order {order}, n {n}: {err}");
            }
            let rate = libm::log2(sine_error(order, 64, k) / sine_error(order, 128, k));
            assert!((rate - order as f64).abs() < 0.1, "rate {rate}");
        }
    }

    #[test]
    fn derivative_at_agrees_with_full_field() {
        let f: Vec<f64> = (0..12).map(|i| libm::sin(i as f64)).collect();
        for order in [2, 4] {
            let s = DerivativeStencil::new(order).unwrap();
            let full = s.derivative(&f, 0.3);
            for (i, d) in full.iter().enumerate() {
                assert_eq!(s.derivative_at(&f, i, 0.3), *d);
            }
        }
    }

    #[test]
    fn second_difference_of_quadratic_mode() {
        let g = PeriodicGrid::new(TAU, 256).unwrap();
        let f: Vec<f64> = g.coordinates().map(libm::cos).collect();
        let d2 = second_difference(&f, g.spacing());
        let err = g
            .coordinates()
            .zip(&d2)
            .map(|(s, d)| (d + libm::cos(s)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4);
    }
}
