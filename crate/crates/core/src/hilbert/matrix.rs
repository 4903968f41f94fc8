use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::space::SpaceDescriptor;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Dense complex operator on a [`SpaceDescriptor`], stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T> {
    space: SpaceDescriptor,
    entries: Vec<C<T>>,
}

/// Local single-qubit operator in the `(|0>, |1>)` basis.
pub type Local2<T> = [[C<T>; 2]; 2];

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(space: SpaceDescriptor) -> Self {
        let d = space.dim();
        OperatorMatrix { space, entries: vec![C::zero(); d * d] }
    }

    pub fn identity(space: SpaceDescriptor) -> Self {
        let mut m = Self::zeros(space);
        for i in 0..space.dim() {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(space: SpaceDescriptor, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let d = space.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(f(i, j));
            }
        }
        OperatorMatrix { space, entries }
    }

    pub fn from_diagonal(space: SpaceDescriptor, diag: &[C<T>]) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: diag.len() });
        }
        let mut m = Self::zeros(space);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        Ok(m)
    }

    /// Row-major entries; length must be `dim^2`.
    pub fn from_entries(space: SpaceDescriptor, entries: Vec<C<T>>) -> Result<Self> {
        let d = space.dim();
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: entries.len() });
        }
        Ok(OperatorMatrix { space, entries })
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    /// Reinterprets the matrix on another space of the same dimension.
    pub fn relabel(mut self, space: SpaceDescriptor) -> Result<Self> {
        if space.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: space.dim() });
        }
        self.space = space;
        Ok(self)
    }

    pub fn cast<U: Real>(&self) -> OperatorMatrix<U> {
        OperatorMatrix {
            space: self.space,
            entries: self
                .entries
                .iter()
                .map(|z| Complex::new(U::of(z.re.as_f64()), U::of(z.im.as_f64())))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        Self::from_fn(self.space, |i, j| self.entries[j * d + i].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        OperatorMatrix { space: self.space, entries: self.entries.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(cr(s))
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: C<T>, other: &Self) {
        debug_assert_eq!(self.space, other.space);
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * s;
        }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim()).map(|i| self[(i, i)]).fold(C::zero(), |a, b| a + b)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "matmul dimension mismatch");
        let d = self.dim();
        let mut out = vec![C::zero(); d * d];
        for i in 0..d {
            let row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let rrow = &rhs.entries[k * d..(k + 1) * d];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        OperatorMatrix { space: self.space, entries: out }
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        let d = self.dim();
        assert_eq!(v.len(), d, "apply dimension mismatch");
        (0..d)
            .map(|i| {
                self.entries[i * d..(i + 1) * d]
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.entries.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> T {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| self.entries[i * d + j].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn hermiticity_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.entries[i * d + j] - self.entries[j * d + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() < tol
    }

    /// `max |U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> T {
        let p = self.adjoint().matmul(self);
        p.max_abs_diff(&Self::identity(self.space))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() < tol
    }

    /// Kronecker product; the result lives on `space`, which must have the product dimension.
    pub fn kron(&self, other: &Self, space: SpaceDescriptor) -> Result<Self> {
        let (da, db) = (self.dim(), other.dim());
        if space.dim() != da * db {
            return Err(Error::DimensionMismatch { expected: da * db, found: space.dim() });
        }
        Ok(Self::from_fn(space, |i, j| {
            self.entries[(i / db) * da + j / db] * other.entries[(i % db) * db + j % db]
        }))
    }

    /// `A ⊗ I_cavity` for an operator `A` on `space.qubit_space()`.
    pub fn extend_to_cavity(&self, space: SpaceDescriptor) -> Result<Self> {
        if self.space.has_cavity() || space.qubit_dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: space.qubit_dim(), found: self.dim() });
        }
        let dc = space.cavity_dim();
        let dq = self.dim();
        let mut out = Self::zeros(space);
        for qi in 0..dq {
            for qj in 0..dq {
                let v = self.entries[qi * dq + qj];
                if v.is_zero() {
                    continue;
                }
                for m in 0..dc {
                    out[(qi * dc + m, qj * dc + m)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Block `<...,m_out| self |...,m_in>` on the qubit factor for fixed photon numbers.
    pub fn cavity_block(&self, m_out: usize, m_in: usize) -> Self {
        let qs = self.space.qubit_space();
        let dc = self.space.cavity_dim();
        let d = self.dim();
        Self::from_fn(qs, |i, j| self.entries[(i * dc + m_out) * d + j * dc + m_in])
    }

    pub fn is_zero_within(&self, tol: T) -> bool {
        self.max_abs() < tol
    }

    /// Matrix exponential `exp(self)`.
    pub fn exp(&self) -> Self {
        super::expm::expm(self)
    }

    /// `exp(-i t H)` for a Hermitian `H`.
    pub fn exp_i_hermitian(&self, t: T) -> Self {
        self.scale(Complex::new(T::zero(), -t)).exp()
    }
}

impl<T> std::ops::Index<(usize, usize)> for OperatorMatrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        let d = self.space.dim();
        &self.entries[i * d + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for OperatorMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        let d = self.space.dim();
        &mut self.entries[i * d + j]
    }
}

impl<T: Real> Add for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn add(self, rhs: Self) -> OperatorMatrix<T> {
        assert_eq!(self.dim(), rhs.dim());
        OperatorMatrix {
            space: self.space,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn sub(self, rhs: Self) -> OperatorMatrix<T> {
        assert_eq!(self.dim(), rhs.dim());
        OperatorMatrix {
            space: self.space,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn mul(self, rhs: Self) -> OperatorMatrix<T> {
        self.matmul(rhs)
    }
}

/// Common single-qubit operators in the `(|0>, |1>)` basis with
/// `sigma_z = |0><0| - |1><1|`, `sigma_+ = |1><0|`, `sigma_- = |0><1|`.
pub mod pauli {
    use super::*;

    fn m<T: Real>(a: [[(f64, f64); 2]; 2]) -> Local2<T> {
        a.map(|row| row.map(|(re, im)| Complex::new(T::of(re), T::of(im))))
    }

    pub fn identity<T: Real>() -> Local2<T> {
        m([[(1., 0.), (0., 0.)], [(0., 0.), (1., 0.)]])
    }
    pub fn x<T: Real>() -> Local2<T> {
        m([[(0., 0.), (1., 0.)], [(1., 0.), (0., 0.)]])
    }
    pub fn y<T: Real>() -> Local2<T> {
        m([[(0., 0.), (0., -1.)], [(0., 1.), (0., 0.)]])
    }
    pub fn z<T: Real>() -> Local2<T> {
        m([[(1., 0.), (0., 0.)], [(0., 0.), (-1., 0.)]])
    }
    pub fn raising<T: Real>() -> Local2<T> {
        m([[(0., 0.), (0., 0.)], [(1., 0.), (0., 0.)]])
    }
    pub fn lowering<T: Real>() -> Local2<T> {
        m([[(0., 0.), (1., 0.)], [(0., 0.), (0., 0.)]])
    }
    pub fn hadamard<T: Real>() -> Local2<T> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        m([[(s, 0.), (s, 0.)], [(s, 0.), (-s, 0.)]])
    }
}
