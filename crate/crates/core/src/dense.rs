//! Dense complex matrices.
//!
//! The engine evolves states sparsely; dense matrices exist for export,
//! verification and the factorization check, at dimensions small enough
//! for `O(dim²)`–`O(dim³)` work to stay cheap. Square matrices only.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::WalkFloat;

/// Square dense complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: WalkFloat> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: WalkFloat> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let (out_row, b_row) = (&mut out.data[r * n..(r + 1) * n], &other.data[k * n..(k + 1) * n]);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(&m, &x)| m * x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t)
            })
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Largest entrywise modulus of `M†M − I`; zero for a unitary matrix.
    pub fn unitarity_deviation(&self) -> T {
        let product = self
            .adjoint()
            .mul(self)
            .expect("adjoint preserves the dimension");
        product
            .max_abs_diff(&Self::identity(self.dim))
            .expect("identity built at the same dimension")
    }

    /// The matrix `out[r][c] = self[map[r]][map[c]]`. For a permutation
    /// matrix `P` with `P[map[d]][d] = 1` this is exactly `P† · self · P`,
    /// i.e. the operator expressed in the permuted basis.
    pub fn conjugate_by_index_map(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: map.len(),
            });
        }
        Ok(Self::from_fn(self.dim, |r, c| self.get(map[r], map[c])))
    }

    /// Kronecker product; the result indexes pairs as
    /// `(a_row * other.dim + b_row, a_col * other.dim + b_col)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for ar in 0..n {
            for ac in 0..n {
                let a = self.get(ar, ac);
                for br in 0..m {
                    for bc in 0..m {
                        out.set(ar * m + br, ac * m + bc, a * other.get(br, bc));
                    }
                }
            }
        }
        out
    }
}
