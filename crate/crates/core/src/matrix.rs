//! Small dense square matrices over any [`Coefficient`] ring.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::jets::SpatialJet;
use crate::series::{Additive, Coefficient, SeriesError};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl Matrix<f64> {
    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        Matrix::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn determinant(&self) -> f64 {
        self.to_nalgebra().determinant()
    }

    fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Inverse, rejecting matrices whose 1-norm condition number exceeds `max_cond`.
    pub fn inverse_checked(&self, max_cond: f64) -> Result<Self, SeriesError> {
        let inv = self
            .to_nalgebra()
            .try_inverse()
            .ok_or(SeriesError::IllConditioned(f64::INFINITY))?;
        let inv = Matrix::from_nalgebra(&inv);
        let cond = self.norm1() * inv.norm1();
        if !cond.is_finite() || cond > max_cond {
            return Err(SeriesError::IllConditioned(cond));
        }
        Ok(inv)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Matrix<SpatialJet> {
    pub fn values(&self) -> Matrix<f64> {
        self.map(SpatialJet::value)
    }

    pub fn differentiate(&self, i: usize) -> Self {
        self.map(|j| j.differentiate(i))
    }

    pub fn truncate(&self, degree: usize) -> Self {
        self.map(|j| j.truncate(degree))
    }

    /// Inverse of a jet-valued matrix.
    ///
    /// With `A = A₀ + N`, where `A₀` holds the point values and `N` is
    /// nilpotent of index `degree + 1`, the inverse is
    /// `Σ_{k ≤ degree} (-A₀⁻¹N)^k A₀⁻¹`.
    pub fn inverse_checked(&self, max_cond: f64) -> Result<Self, SeriesError> {
        let n = self.n;
        let layout = self.data[0].layout();
        let a0_inv = self.values().inverse_checked(max_cond)?;
        let nil = self.map(|j| {
            let mut z = j.clone();
            z.axpy(-1.0, &SpatialJet::constant_in(layout, j.value()));
            z
        });
        // step = −A₀⁻¹N; A₀⁻¹ is constant, so these are scalar-times-jet sums
        let scalar_left = |m: &Matrix<f64>, b: &Matrix<SpatialJet>, sign: f64| {
            Matrix::from_fn(n, |i, j| {
                let mut acc = SpatialJet::constant_in(layout, 0.0);
                for k in 0..n {
                    acc.axpy(sign * m[(i, k)], &b[(k, j)]);
                }
                acc
            })
        };
        let step = scalar_left(&a0_inv, &nil, -1.0);
        let mut acc = a0_inv.map(|&v| SpatialJet::constant_in(layout, v));
        if layout.degree() == 0 {
            return Ok(acc);
        }
        // first power: step·A₀⁻¹
        let mut term = Matrix::from_fn(n, |i, j| {
            let mut t = SpatialJet::constant_in(layout, 0.0);
            for k in 0..n {
                t.axpy(a0_inv[(k, j)], &step[(i, k)]);
            }
            t
        });
        acc = acc.plus(&term);
        for _ in 1..layout.degree() {
            term = step.times(&term);
            acc = acc.plus(&term);
        }
        Ok(acc)
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    /// Largest asymmetry measured by a caller-provided norm.
    pub fn is_symmetric_by(&self, tol: f64, dist: impl Fn(&T, &T) -> f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| dist(&self[(i, j)], &self[(j, i)]) <= tol))
    }
}

impl<T: Coefficient> Coefficient for Matrix<T> {
    fn times(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut acc = self[(i, 0)].times(&rhs[(0, j)]);
            for k in 1..n {
                self[(i, k)].mul_acc(&rhs[(k, j)], &mut acc);
            }
            acc
        })
    }
}

impl<T: Additive> Additive for Matrix<T> {
    fn plus(&self, rhs: &Self) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    fn minus(&self, rhs: &Self) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    fn scaled(&self, s: f64) -> Self {
        self.map(|x| x.scaled(s))
    }

    fn zero_like(&self) -> Self {
        self.map(Additive::zero_like)
    }

    fn all_finite(&self) -> bool {
        self.data.iter().all(Additive::all_finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_matrix_inverse_matches_pointwise_inverse() {
        // A(x) = [[1 + x1, x2], [x2, 2 + x1^2]] at (0.2, 0.1)
        let x1 = SpatialJet::coordinate(2, 3, 0, 0.2).unwrap();
        let x2 = SpatialJet::coordinate(2, 3, 1, 0.1).unwrap();
        let one = SpatialJet::constant(2, 3, 1.0).unwrap();
        let two = SpatialJet::constant(2, 3, 2.0).unwrap();
        let a = Matrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => &one + &x1,
            (1, 1) => &two + &(&x1 * &x1),
            _ => x2.clone(),
        });
        let inv = a.inverse_checked(1e12).unwrap();
        let prod = a.times(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)].value() - target).abs() < 1e-14);
                assert!(prod[(i, j)].partials()[1..].iter().all(|p| p.abs() < 1e-13));
            }
        }
    }

    #[test]
    fn ill_conditioned_is_reported() {
        let mut m = Matrix::<f64>::identity(2);
        m[(1, 1)] = 1e-14;
        assert!(matches!(m.inverse_checked(1e12), Err(SeriesError::IllConditioned(_))));
    }
}
