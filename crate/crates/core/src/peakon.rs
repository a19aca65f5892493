//! Singular (peakon) solutions of the Diff(R)-strand.
//!
//! The momenta are sums of delta functions supported at positions Qᵃ(s,t),
//!
//! ```text
//! m = Σ Mₐ δ(x − Qᵃ),   n = Σ Nₐ δ(x − Qᵃ),
//! u = Σ Mₐ K(x, Qᵃ),    v = −Σ Nₐ K(x, Qᵃ),
//! ```
//!
//! with the Helmholtz Green function `K(x, y) = ½ e^{−|x−y|}`. The parameters
//! are advanced in t on a periodic s-grid; the s-equation for Qᵃ is a
//! constraint on the data and is only monitored.

use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{DerivativeStencil, PeriodicGrid};
use crate::integrate::Integrable;
use crate::math::{exp, signum};
use crate::{Error, Result};

/// Default minimum separation between peakons at one s-node.
pub const DEFAULT_MIN_GAP: f64 = 1e-8;
/// Default upper bound on the kernel-matrix condition estimate.
pub const DEFAULT_MAX_CONDITION: f64 = 1e12;

/// Green function of `1 − ∂ₓ²` on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Kernel;

impl Kernel {
    /// `K(0, 0)`.
    pub const K0: f64 = 0.5;

    pub fn value(x: f64, y: f64) -> f64 {
        0.5 * exp(-(x - y).abs())
    }

    /// `K` as a function of the separation `x − y`.
    pub fn of_separation(d: f64) -> f64 {
        0.5 * exp(-d.abs())
    }

    /// `∂K(x, y)/∂x`, taken as 0 at the peak `x = y`.
    pub fn derivative_first(x: f64, y: f64) -> f64 {
        Self::derivative_of_separation(x - y)
    }

    /// `K'(d) = −½ sign(d) e^{−|d|}`, with `K'(0) = 0`.
    pub fn derivative_of_separation(d: f64) -> f64 {
        -0.5 * signum(d) * exp(-d.abs())
    }
}

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(size: usize) -> Self {
        DenseMatrix {
            size,
            data: vec![0.0; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.size + col] = value;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

/// `K^{ab} = K(Qᵃ, Qᵇ)`.
pub fn kernel_matrix(q: &[f64]) -> DenseMatrix {
    let mut k = DenseMatrix::zeros(q.len());
    for (a, qa) in q.iter().enumerate() {
        for (b, qb) in q.iter().enumerate() {
            k.set(a, b, Kernel::value(*qa, *qb));
        }
    }
    k
}

/// `∂K^{ac}/∂Qᵃ`, zero on the diagonal.
pub fn kernel_deriv(q: &[f64]) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(q.len());
    for (a, qa) in q.iter().enumerate() {
        for (c, qc) in q.iter().enumerate() {
            if a != c {
                d.set(a, c, Kernel::derivative_first(*qa, *qc));
            }
        }
    }
    d
}

/// Cholesky factor `K = L Lᵀ` of a symmetric positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    lower: DenseMatrix,
}

impl Cholesky {
    /// Returns `None` when a pivot is not strictly positive.
    pub fn factor(k: &DenseMatrix) -> Option<Self> {
        let n = k.size();
        let mut l = DenseMatrix::zeros(n);
        for j in 0..n {
            let mut diag = k.get(j, j);
            for p in 0..j {
                diag -= l.get(j, p) * l.get(j, p);
            }
            if diag.is_nan() || diag <= 0.0 {
                return None;
            }
            let ljj = crate::math::sqrt(diag);
            l.set(j, j, ljj);
            for i in j + 1..n {
                let mut x = k.get(i, j);
                for p in 0..j {
                    x -= l.get(i, p) * l.get(j, p);
                }
                l.set(i, j, x / ljj);
            }
        }
        Some(Cholesky { lower: l })
    }

    /// Solve `K y = r`.
    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        let n = self.lower.size();
        let l = &self.lower;
        let mut y = r.to_vec();
        for i in 0..n {
            for p in 0..i {
                y[i] -= l.get(i, p) * y[p];
            }
            y[i] /= l.get(i, i);
        }
        for i in (0..n).rev() {
            for p in i + 1..n {
                y[i] -= l.get(p, i) * y[p];
            }
            y[i] /= l.get(i, i);
        }
        y
    }

    /// Cheap condition estimate `(max Lᵢᵢ / min Lᵢᵢ)²`.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lower.size();
        let (lo, hi) = (0..n)
            .map(|i| self.lower.get(i, i))
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        (hi / lo) * (hi / lo)
    }
}

/// Limits applied before the per-node linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakonGuards {
    pub min_gap: f64,
    pub max_condition: f64,
}

impl Default for PeakonGuards {
    fn default() -> Self {
        PeakonGuards {
            min_gap: DEFAULT_MIN_GAP,
            max_condition: DEFAULT_MAX_CONDITION,
        }
    }
}

/// Peakon parameters `(Qᵃ, Mₐ, Nₐ)` on a periodic s-grid.
///
/// Fields are stored per peakon: `q[a][i]` is Qᵃ at s-node i.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakonState {
    grid: PeriodicGrid,
    pub q: Vec<Vec<f64>>,
    pub m: Vec<Vec<f64>>,
    pub n: Vec<Vec<f64>>,
}

impl PeakonState {
    pub fn new(grid: PeriodicGrid, q: Vec<Vec<f64>>, m: Vec<Vec<f64>>, n: Vec<Vec<f64>>) -> Result<Self> {
        let count = q.len();
        if count == 0 || m.len() != count || n.len() != count {
            return Err(Error::InvalidParameters(
                "peakon fields need one entry per peakon",
            ));
        }
        for field in q.iter().chain(&m).chain(&n) {
            grid.check_len(field.len())?;
        }
        Ok(PeakonState { grid, q, m, n })
    }

    /// Build from a per-node sampler returning `(Q, M, N)` for all peakons.
    pub fn from_fn(
        grid: PeriodicGrid,
        count: usize,
        mut f: impl FnMut(f64) -> (Vec<f64>, Vec<f64>, Vec<f64>),
    ) -> Result<Self> {
        let nodes = grid.nodes();
        let mut q = vec![vec![0.0; nodes]; count];
        let mut m = q.clone();
        let mut n = q.clone();
        for (i, s) in grid.coordinates().enumerate() {
            let (qs, ms, ns) = f(s);
            if qs.len() != count || ms.len() != count || ns.len() != count {
                return Err(Error::InvalidParameters(
                    "sampler returned the wrong peakon count",
                ));
            }
            for a in 0..count {
                q[a][i] = qs[a];
                m[a][i] = ms[a];
                n[a][i] = ns[a];
            }
        }
        PeakonState::new(grid, q, m, n)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn count(&self) -> usize {
        self.q.len()
    }

    /// `(Q, M, N)` of every peakon at s-node `i`.
    pub fn node(&self, i: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let col = |f: &[Vec<f64>]| f.iter().map(|x| x[i]).collect();
        (col(&self.q), col(&self.m), col(&self.n))
    }

    /// `∮ Σₐ Mₐ ds`, conserved for any peakon count.
    pub fn momentum_sum(&self) -> f64 {
        self.m.iter().flat_map(|f| f.iter()).sum::<f64>() * self.grid.spacing()
    }

    /// `∮ Σₐ Nₐ ds`.
    pub fn n_sum(&self) -> f64 {
        self.n.iter().flat_map(|f| f.iter()).sum::<f64>() * self.grid.spacing()
    }

    /// `∮ (N₁ − N₂) ds` for a peakon pair.
    pub fn n_difference_sum(&self) -> Option<f64> {
        (self.count() == 2)
            .then(|| self.n[0].iter().zip(&self.n[1]).map(|(a, b)| a - b).sum::<f64>() * self.grid.spacing())
    }

    fn zip_fields_mut(&mut self) -> impl Iterator<Item = &mut Vec<f64>> {
        self.q
            .iter_mut()
            .chain(self.m.iter_mut())
            .chain(self.n.iter_mut())
    }
}

impl Integrable for PeakonState {
    fn add_scaled(&mut self, factor: f64, other: &Self) {
        let others = other.q.iter().chain(&other.m).chain(&other.n);
        for (mine, theirs) in self.zip_fields_mut().zip(others) {
            for (x, y) in mine.iter_mut().zip(theirs) {
                *x += factor * y;
            }
        }
    }

    fn all_finite(&self) -> bool {
        self.q
            .iter()
            .chain(&self.m)
            .chain(&self.n)
            .all(|f| f.iter().all(|x| x.is_finite()))
    }
}

fn min_gap(q: &[f64]) -> f64 {
    let mut gap = f64::INFINITY;
    for a in 0..q.len() {
        for b in a + 1..q.len() {
            gap = gap.min((q[a] - q[b]).abs());
        }
    }
    gap
}

/// [`peakon_rhs_with`] under the default guards.
pub fn peakon_rhs(state: &PeakonState, stencil: &DerivativeStencil) -> Result<PeakonState> {
    peakon_rhs_with(state, stencil, &PeakonGuards::default())
}

/// Time derivatives of the peakon parameters:
///
/// ```text
/// ∂ₜQᵃ = Σ_b M_b K^{ab}
/// ∂ₜMₐ = −∂ₛNₐ − Σ_c (MₐM_c − NₐN_c) ∂K^{ac}/∂Qᵃ
/// ∂ₜNₐ = −∂ₛMₐ + Σ_e (K⁻¹)_{ae} r_e,
///   r_e = Σ_{b,c} (N_bM_c − M_bN_c) ∂K^{ec}/∂Qᵉ (K^{eb} − K^{cb})
/// ```
///
/// The last term is obtained from a Cholesky solve of `K y = r` per node.
pub fn peakon_rhs_with(
    state: &PeakonState,
    stencil: &DerivativeStencil,
    guards: &PeakonGuards,
) -> Result<PeakonState> {
    let count = state.count();
    let nodes = state.grid.nodes();
    let ds = state.grid.spacing();
    let dm: Vec<Vec<f64>> = state.m.iter().map(|f| stencil.derivative(f, ds)).collect();
    let dn: Vec<Vec<f64>> = state.n.iter().map(|f| stencil.derivative(f, ds)).collect();

    let mut q_t = vec![vec![0.0; nodes]; count];
    let mut m_t = q_t.clone();
    let mut n_t = q_t.clone();
    let mut r = vec![0.0; count];

    for i in 0..nodes {
        let (q, m, n) = state.node(i);
        let gap = min_gap(&q);
        if gap < guards.min_gap {
            return Err(Error::CoincidentPeakons { node: i, gap });
        }
        let k = kernel_matrix(&q);
        let d = kernel_deriv(&q);

        for a in 0..count {
            q_t[a][i] = (0..count).map(|b| m[b] * k.get(a, b)).sum();
            let self_force: f64 = (0..count)
                .map(|c| (m[a] * m[c] - n[a] * n[c]) * d.get(a, c))
                .sum();
            m_t[a][i] = -dn[a][i] - self_force;
        }

        for (e, r_e) in r.iter_mut().enumerate() {
            let mut acc = 0.0;
            for c in 0..count {
                let dec = d.get(e, c);
                if dec == 0.0 {
                    continue;
                }
                for b in 0..count {
                    let w = n[b] * m[c] - m[b] * n[c];
                    acc += w * dec * (k.get(e, b) - k.get(c, b));
                }
            }
            *r_e = acc;
        }
        let chol = Cholesky::factor(&k).ok_or(Error::NotPositiveDefinite { node: i })?;
        let estimate = chol.condition_estimate();
        if estimate > guards.max_condition {
            return Err(Error::IllConditioned { node: i, estimate });
        }
        let y = chol.solve(&r);
        for a in 0..count {
            n_t[a][i] = -dm[a][i] + y[a];
        }
    }

    Ok(PeakonState {
        grid: state.grid,
        q: q_t,
        m: m_t,
        n: n_t,
    })
}

/// `max |∂ₛQᵃ + Σ_b N_b K^{ab}|` over nodes and peakons.
pub fn s_constraint_residual(state: &PeakonState, stencil: &DerivativeStencil) -> f64 {
    let ds = state.grid.spacing();
    let dq: Vec<Vec<f64>> = state.q.iter().map(|f| stencil.derivative(f, ds)).collect();
    let mut worst: f64 = 0.0;
    for (a, dqa) in dq.iter().enumerate() {
        for (i, d) in dqa.iter().enumerate() {
            let qa = state.q[a][i];
            let v: f64 = state
                .q
                .iter()
                .zip(&state.n)
                .map(|(qb, nb)| nb[i] * Kernel::value(qa, qb[i]))
                .sum();
            worst = worst.max((d + v).abs());
        }
    }
    worst
}

/// Velocity fields and momentum atoms at one s-node.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `(Qᵃ, Mₐ)` pairs.
    pub m_atoms: Vec<(f64, f64)>,
    /// `(Qᵃ, Nₐ)` pairs.
    pub n_atoms: Vec<(f64, f64)>,
}

/// `u(x) = Σ Mₐ K(x, Qᵃ)` and `v(x) = −Σ Nₐ K(x, Qᵃ)` on `x_grid`.
pub fn reconstruct_fields(q: &[f64], m: &[f64], n: &[f64], x_grid: &[f64]) -> FieldSample {
    let u = x_grid
        .iter()
        .map(|&x| q.iter().zip(m).map(|(qa, ma)| ma * Kernel::value(x, *qa)).sum())
        .collect();
    let v = x_grid
        .iter()
        .map(|&x| {
            -q.iter()
                .zip(n)
                .map(|(qa, na)| na * Kernel::value(x, *qa))
                .sum::<f64>()
        })
        .collect();
    FieldSample {
        x: x_grid.to_vec(),
        u,
        v,
        m_atoms: q.iter().copied().zip(m.iter().copied()).collect(),
        n_atoms: q.iter().copied().zip(n.iter().copied()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::TAU;

    fn grid() -> PeriodicGrid {
        PeriodicGrid::new(TAU, 16).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(Kernel::value(0.0, 0.0), 0.5);
        assert!((Kernel::value(1.0, 0.0) - 0.183_939_720_585_721_16).abs() < 1e-15);
        assert_eq!(Kernel::value(1.3, -0.4), Kernel::value(-0.4, 1.3));
        assert_eq!(kernel_deriv(&[0.7]).get(0, 0), 0.0);
    }

    #[test]
    fn kernel_derivative_matches_finite_difference() {
        let (x, y, h) = (0.8, -0.3, 1e-6);
        let fd = (Kernel::value(x + h, y) - Kernel::value(x - h, y)) / (2.0 * h);
        assert!((Kernel::derivative_first(x, y) - fd).abs() < 1e-9);
        let fd = (Kernel::value(y + h, x) - Kernel::value(y - h, x)) / (2.0 * h);
        assert!((Kernel::derivative_first(y, x) - fd).abs() < 1e-9);
    }

    #[test]
    fn kernel_deriv_is_antisymmetric() {
        let d = kernel_deriv(&[0.1, 1.5, -0.7]);
        for a in 0..3 {
            for c in 0..3 {
                assert_eq!(d.get(a, c), -d.get(c, a));
            }
        }
    }

    #[test]
    fn cholesky_solves_kernel_system() {
        let q = [0.0, 0.4, 1.7, -2.2];
        let k = kernel_matrix(&q);
        let chol = Cholesky::factor(&k).unwrap();
        let rhs = [1.0, -2.0, 0.5, 3.0];
        let y = chol.solve(&rhs);
        let back = k.mul_vec(&y);
        for (a, b) in back.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut k = DenseMatrix::zeros(2);
        k.set(0, 0, 1.0);
        k.set(0, 1, 2.0);
        k.set(1, 0, 2.0);
        k.set(1, 1, 1.0);
        assert!(Cholesky::factor(&k).is_none());
    }

    #[test]
    fn single_peakon_reduction() {
        let g = grid();
        let state = PeakonState::from_fn(g, 1, |s| {
            (vec![libm::sin(s)], vec![libm::cos(s)], vec![libm::sin(2.0 * s)])
        })
        .unwrap();
        let st = DerivativeStencil::default();
        let rate = peakon_rhs(&state, &st).unwrap();
        let dm = st.derivative(&state.m[0], g.spacing());
        let dn = st.derivative(&state.n[0], g.spacing());
        for i in 0..g.nodes() {
            assert_eq!(rate.q[0][i], state.m[0][i] * Kernel::K0);
            assert_eq!(rate.m[0][i], -dn[i]);
            assert_eq!(rate.n[0][i], -dm[i]);
        }
    }

    #[test]
    fn zero_momenta_are_stationary() {
        let state =
            PeakonState::from_fn(grid(), 3, |_| (vec![-1.0, 0.0, 2.0], vec![0.0; 3], vec![0.0; 3])).unwrap();
        let rate = peakon_rhs(&state, &DerivativeStencil::default()).unwrap();
        assert!(rate
            .q
            .iter()
            .chain(&rate.m)
            .chain(&rate.n)
            .all(|f| f.iter().all(|x| *x == 0.0)));
    }

    #[test]
    fn symmetric_pair_matches_relative_spacing_equation() {
        let (mu, nu, q) = (0.8, -0.3, 0.6);
        let state = PeakonState::from_fn(grid(), 2, |_| (vec![q, -q], vec![mu, -mu], vec![nu, -nu])).unwrap();
        let rate = peakon_rhs(&state, &DerivativeStencil::default()).unwrap();
        let kx = Kernel::of_separation(2.0 * q);
        assert!((rate.q[0][0] - mu * (Kernel::K0 - kx)).abs() < 1e-15);
        let x_t = rate.q[0][0] - rate.q[1][0];
        assert!((x_t - 2.0 * mu * (Kernel::K0 - kx)).abs() < 1e-15);
    }

    #[test]
    fn coincident_peakons_are_rejected() {
        let state = PeakonState::from_fn(grid(), 2, |_| {
            (vec![0.3, 0.3 + 1e-9], vec![1.0, -1.0], vec![0.0, 0.0])
        })
        .unwrap();
        let err = peakon_rhs(&state, &DerivativeStencil::default()).unwrap_err();
        assert!(matches!(err, Error::CoincidentPeakons { node: 0, .. }));
    }

    #[test]
    fn ill_conditioned_kernel_is_rejected() {
        let state =
            PeakonState::from_fn(grid(), 3, |_| (vec![0.0, 1e-7, 2e-7], vec![1.0; 3], vec![0.0; 3])).unwrap();
        let guards = PeakonGuards {
            min_gap: 1e-9,
            max_condition: 1e5,
        };
        let err = peakon_rhs_with(&state, &DerivativeStencil::default(), &guards).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { node: 0, .. }), "{err:?}");
    }

    #[test]
    fn s_constraint_examples() {
        let state = PeakonState::from_fn(grid(), 1, |_| (vec![0.4], vec![1.0], vec![0.0])).unwrap();
        assert_eq!(s_constraint_residual(&state, &DerivativeStencil::default()), 0.0);
    }

    #[test]
    fn reconstruct_single_peakon() {
        let f = reconstruct_fields(&[0.0], &[1.0], &[0.0], &[0.0, 1.0]);
        assert_eq!(f.u[0], 0.5);
        assert!((f.u[1] - 0.5 * libm::exp(-1.0)).abs() < 1e-16);
        assert!(f.v.iter().all(|x| *x == 0.0));
        assert_eq!(f.m_atoms, vec![(0.0, 1.0)]);
        let zero = reconstruct_fields(&[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0], &[-1.0, 0.5, 2.0]);
        assert!(zero.u.iter().chain(&zero.v).all(|x| *x == 0.0));
    }

    #[test]
    fn state_validation() {
        let g = grid();
        assert!(PeakonState::new(g, vec![], vec![], vec![]).is_err());
        assert!(PeakonState::new(g, vec![vec![0.0; 16]], vec![vec![0.0; 15]], vec![vec![0.0; 16]]).is_err());
    }
}
