//! so(3) and so(4) kernels.
//!
//! so(3) elements are carried as [`So3Vector`]s through the hat map
//!
//! ```text
//!         | 0   -u3   u2 |
//! hat u = | u3   0   -u1 |
//!         | -u2  u1   0  |
//! ```
//!
//! and the dual so(3)* is identified with R³ through the dot product, which
//! coincides with the trace pairing `½ tr(mᵀ n)` on hatted matrices. With that
//! identification `ad_u v = u × v` and `ad*_u m = m × u`.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::{Error, Result};

/// Absolute tolerance on `max |Ω + Ωᵀ|` when validating antisymmetric input.
pub const ANTISYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct So3Vector(pub [f64; 3]);

impl So3Vector {
    pub const ZERO: So3Vector = So3Vector([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        So3Vector([x, y, z])
    }

    /// Unit basis vector `e_{axis+1}`.
    pub fn basis(axis: usize) -> Self {
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        So3Vector(e)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        So3Vector([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        crate::math::sqrt(self.norm_squared())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Componentwise product, i.e. the action of a diagonal matrix.
    pub fn scale_by(&self, diagonal: &[f64; 3]) -> Self {
        So3Vector([
            self.0[0] * diagonal[0],
            self.0[1] * diagonal[1],
            self.0[2] * diagonal[2],
        ])
    }
}

impl Index<usize> for So3Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for So3Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for So3Vector {
    type Output = So3Vector;
    fn add(self, rhs: Self) -> Self {
        So3Vector([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl AddAssign for So3Vector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for So3Vector {
    type Output = So3Vector;
    fn sub(self, rhs: Self) -> Self {
        So3Vector([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl SubAssign for So3Vector {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for So3Vector {
    type Output = So3Vector;
    fn neg(self) -> Self {
        So3Vector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for So3Vector {
    type Output = So3Vector;
    fn mul(self, rhs: f64) -> Self {
        So3Vector([self.0[0] * rhs, self.0[1] * rhs, self.0[2] * rhs])
    }
}

impl Mul<So3Vector> for f64 {
    type Output = So3Vector;
    fn mul(self, rhs: So3Vector) -> So3Vector {
        rhs * self
    }
}

/// Dense real N×N matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[f64; N]; N]);

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const fn zeros() -> Self {
        Matrix([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diagonal: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diagonal.into_iter().enumerate() {
            m.0[i][i] = d;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    /// Matrix commutator `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// `max |A + Aᵀ|` over all entries.
    pub fn antisymmetry_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in i..N {
                worst = worst.max((self.0[i][j] + self.0[j][i]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|row| row.iter()).all(|x| x.is_finite())
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for row in self.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= rhs;
            }
        }
        self
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

fn check_antisymmetric<const N: usize>(m: &Matrix<N>) -> Result<()> {
    let deviation = m.antisymmetry_deviation();
    if deviation > ANTISYMMETRY_TOLERANCE || !m.is_finite() {
        return Err(Error::NotAntisymmetric { deviation });
    }
    Ok(())
}

/// Antisymmetric 3×3 matrix, an element of so(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3Matrix(Matrix<3>);

impl So3Matrix {
    pub fn new(m: Matrix<3>) -> Result<Self> {
        check_antisymmetric(&m)?;
        Ok(So3Matrix(m))
    }

    pub fn as_matrix(&self) -> &Matrix<3> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<3> {
        self.0
    }

    pub fn unhat(&self) -> So3Vector {
        let m = &self.0 .0;
        So3Vector([m[2][1], m[0][2], m[1][0]])
    }
}

/// Antisymmetric 4×4 matrix, an element of so(4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So4Matrix(Matrix<4>);

impl So4Matrix {
    pub fn new(m: Matrix<4>) -> Result<Self> {
        check_antisymmetric(&m)?;
        Ok(So4Matrix(m))
    }

    pub fn as_matrix(&self) -> &Matrix<4> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<4> {
        self.0
    }
}

pub fn hat(u: &So3Vector) -> So3Matrix {
    let [u1, u2, u3] = u.0;
    So3Matrix(Matrix([[0.0, -u3, u2], [u3, 0.0, -u1], [-u2, u1, 0.0]]))
}

/// Inverse of [`hat`]; rejects input that is not antisymmetric.
pub fn unhat(m: &Matrix<3>) -> Result<So3Vector> {
    Ok(So3Matrix::new(*m)?.unhat())
}

/// `ad_u v = u × v`.
pub fn ad(u: &So3Vector, v: &So3Vector) -> So3Vector {
    u.cross(v)
}

/// `ad*_u m = m × u`, the dual of [`ad`] under the dot-product pairing.
pub fn ad_star(u: &So3Vector, m: &So3Vector) -> So3Vector {
    m.cross(u)
}

/// Ad-invariant trace pairing `½ tr(mᵀ n)`.
pub fn pairing<const N: usize>(m: &Matrix<N>, n: &Matrix<N>) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        for j in 0..N {
            sum += m.0[i][j] * n.0[i][j];
        }
    }
    0.5 * sum
}

/// Coadjoint action in matrix form, with the transpose as the map from the
/// algebra to its dual: `(ad*_u m)ᵀ = −[u, mᵀ]`.
///
/// Only used to cross-check the R³ form [`ad_star`].
pub fn ad_star_matrix(u: &So3Matrix, m_dual: &Matrix<3>) -> Matrix<3> {
    (-u.as_matrix().commutator(&m_dual.transpose())).transpose()
}

/// so(3) ⊕ so(3) → so(4):
///
/// ```text
///          |  0    u3  -u2   v1 |
/// A(u,v) = | -u3   0    u1   v2 |
///          |  u2  -u1   0    v3 |
///          | -v1  -v2  -v3   0  |
/// ```
pub fn embed_so4(u: &So3Vector, v: &So3Vector) -> So4Matrix {
    let [u1, u2, u3] = u.0;
    let [v1, v2, v3] = v.0;
    So4Matrix(Matrix([
        [0.0, u3, -u2, v1],
        [-u3, 0.0, u1, v2],
        [u2, -u1, 0.0, v3],
        [-v1, -v2, -v3, 0.0],
    ]))
}

/// Inverse of [`embed_so4`]; rejects input that is not antisymmetric.
pub fn extract_so4(a: &Matrix<4>) -> Result<(So3Vector, So3Vector)> {
    check_antisymmetric(a)?;
    let m = &a.0;
    Ok((
        So3Vector([m[1][2], m[2][0], m[0][1]]),
        So3Vector([m[0][3], m[1][3], m[2][3]]),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalRole {
    InertiaA,
    InertiaB,
    Anisotropy,
}

/// Constant diagonal 3×3 matrix with a declared role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalParams {
    diagonal: [f64; 3],
    role: DiagonalRole,
}

impl DiagonalParams {
    pub fn new(diagonal: [f64; 3], role: DiagonalRole) -> Result<Self> {
        if diagonal.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidParameters("diagonal entries must be finite"));
        }
        if role != DiagonalRole::Anisotropy && diagonal.contains(&0.0) {
            return Err(Error::SingularInertia);
        }
        Ok(DiagonalParams { diagonal, role })
    }

    pub fn inertia_a(diagonal: [f64; 3]) -> Result<Self> {
        Self::new(diagonal, DiagonalRole::InertiaA)
    }

    pub fn inertia_b(diagonal: [f64; 3]) -> Result<Self> {
        Self::new(diagonal, DiagonalRole::InertiaB)
    }

    pub fn anisotropy(diagonal: [f64; 3]) -> Result<Self> {
        Self::new(diagonal, DiagonalRole::Anisotropy)
    }

    pub fn diagonal(&self) -> [f64; 3] {
        self.diagonal
    }

    pub fn role(&self) -> DiagonalRole {
        self.role
    }

    pub fn apply(&self, v: &So3Vector) -> So3Vector {
        v.scale_by(&self.diagonal)
    }

    pub fn apply_inverse(&self, v: &So3Vector) -> Result<So3Vector> {
        if self.diagonal.contains(&0.0) {
            return Err(Error::SingularInertia);
        }
        Ok(So3Vector([
            v.0[0] / self.diagonal[0],
            v.0[1] / self.diagonal[1],
            v.0[2] / self.diagonal[2],
        ]))
    }
}

/// Constant diagonal of the anisotropic Lax pair,
/// `J = −½ diag(P1, P2, P3, P1 + P2 + P3)`.
pub fn build_j(p: &DiagonalParams) -> Result<Matrix<4>> {
    if p.role != DiagonalRole::Anisotropy {
        return Err(Error::InvalidParameters("J is built from anisotropy parameters"));
    }
    let [p1, p2, p3] = p.diagonal;
    Ok(Matrix::from_diagonal([
        -0.5 * p1,
        -0.5 * p2,
        -0.5 * p3,
        -0.5 * (p1 + p2 + p3),
    ]))
}
