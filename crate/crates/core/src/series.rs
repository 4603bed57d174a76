//! Truncated power series in the perturbation parameter ε.
//!
//! `EpsSeries<T>` holds `[c₀, …, c_N]` for any coefficient type that forms a
//! ring ([`Coefficient`]): plain scalars, spatial jets, or dense matrices of
//! either. Products are Cauchy products truncated at order `N`.

use thiserror::Error;

use crate::jets::{JetError, SpatialJet};
use crate::matrix::Matrix;

/// Pivot magnitude below which a leading coefficient counts as zero.
pub const LEADING_FLOOR: f64 = 1e-12;
/// Largest accepted 1-norm condition number of a leading matrix coefficient.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series order must be at least 1 (got {0} coefficients)")]
    TooShort(usize),
    #[error("leading coefficient {0:e} is too close to zero")]
    SingularLeading(f64),
    #[error("leading coefficient {0:e} is not positive")]
    NonPositiveLeading(f64),
    #[error("leading matrix is ill-conditioned (1-norm condition {0:e})")]
    IllConditioned(f64),
    #[error("matrix dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Vector-space operations needed by termwise series arithmetic.
pub trait Additive: Clone {
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn scaled(&self, s: f64) -> Self;
    fn zero_like(&self) -> Self;
    fn all_finite(&self) -> bool;
}

/// Ring operations needed by Cauchy products.
pub trait Coefficient: Additive {
    fn times(&self, rhs: &Self) -> Self;

    /// `acc += self * rhs`.
    fn mul_acc(&self, rhs: &Self, acc: &mut Self) {
        *acc = acc.plus(&self.times(rhs));
    }
}

impl Coefficient for f64 {
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn mul_acc(&self, rhs: &Self, acc: &mut Self) {
        *acc += self * rhs;
    }
}

impl Additive for f64 {
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn zero_like(&self) -> Self {
        0.0
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl Coefficient for SpatialJet {
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn mul_acc(&self, rhs: &Self, acc: &mut Self) {
        if self.same_shape(rhs) && self.same_shape(acc) {
            self.mul_add_into(rhs, acc);
        } else {
            *acc = acc.plus(&self.times(rhs));
        }
    }
}

impl Additive for SpatialJet {
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn scaled(&self, s: f64) -> Self {
        self.scale(s)
    }
    fn zero_like(&self) -> Self {
        SpatialJet::zero_like(self)
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Coefficient types with a multiplicative inverse of the leading term.
pub trait Invertible: Coefficient {
    fn try_invert(&self) -> Result<Self, SeriesError>;
}

impl Invertible for f64 {
    fn try_invert(&self) -> Result<Self, SeriesError> {
        if self.abs() > LEADING_FLOOR {
            Ok(1.0 / self)
        } else {
            Err(SeriesError::SingularLeading(*self))
        }
    }
}

impl Invertible for Matrix<f64> {
    fn try_invert(&self) -> Result<Self, SeriesError> {
        self.inverse_checked(MAX_CONDITION)
    }
}

impl Invertible for Matrix<SpatialJet> {
    fn try_invert(&self) -> Result<Self, SeriesError> {
        self.inverse_checked(MAX_CONDITION)
    }
}

/// Truncated power series `c₀ + c₁ε + … + c_N ε^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSeries<T> {
    coeffs: Vec<T>,
}

impl<T> EpsSeries<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self, SeriesError> {
        if coeffs.len() < 2 {
            return Err(SeriesError::TooShort(coeffs.len()));
        }
        Ok(EpsSeries { coeffs })
    }

    /// Builds a series of the given order from a coefficient generator.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        EpsSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> EpsSeries<U> {
        EpsSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<EpsSeries<U>, E> {
        Ok(EpsSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    fn check_order<U>(&self, other: &EpsSeries<U>) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch(self.order(), other.order()))
        }
    }

    /// Cauchy product with an arbitrary bilinear pairing of coefficients.
    ///
    /// Panics if the orders differ; use [`EpsSeries::try_convolve`] for
    /// untrusted input.
    pub fn convolve<U, V: Additive>(
        &self,
        other: &EpsSeries<U>,
        pair: impl Fn(&T, &U) -> V,
    ) -> EpsSeries<V> {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        let n = self.order();
        EpsSeries::from_fn(n, |k| {
            let mut acc = pair(&self.coeffs[0], &other.coeffs[k]);
            for i in 1..=k {
                acc = acc.plus(&pair(&self.coeffs[i], &other.coeffs[k - i]));
            }
            acc
        })
    }

    pub fn try_convolve<U, V: Additive>(
        &self,
        other: &EpsSeries<U>,
        pair: impl Fn(&T, &U) -> V,
    ) -> Result<EpsSeries<V>, SeriesError> {
        self.check_order(other)?;
        Ok(self.convolve(other, pair))
    }
}

impl<T: Additive> EpsSeries<T> {
    /// `[c₀, 0, …, 0]`.
    pub fn constant(c0: T, order: usize) -> Self {
        let zero = c0.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c0;
        EpsSeries { coeffs }
    }

    /// `c₀ + c₁ ε`, padded with zeros up to `order`.
    pub fn linear(c0: T, c1: T, order: usize) -> Self {
        let mut s = Self::constant(c0, order);
        s.coeffs[1] = c1;
        s
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().all(Additive::all_finite)
    }

    pub fn zero_like(&self) -> Self {
        self.map(Additive::zero_like)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c.scaled(s))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.sub(other))
    }

    /// Termwise sum (orders must agree).
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        EpsSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        EpsSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    /// Evaluates the truncated polynomial at a numeric ε.
    pub fn eval_at(&self, eps: f64) -> T {
        let mut acc = self.coeffs[self.order()].clone();
        for c in self.coeffs[..self.order()].iter().rev() {
            acc = acc.scaled(eps).plus(c);
        }
        acc
    }
}

impl<T: Coefficient> EpsSeries<T> {
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.mul(other))
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        self.convolve(other, |a, b| a.times(b))
    }
}

impl<T: Invertible> EpsSeries<T> {
    /// Multiplicative inverse by the recurrence `b_k = -b₀ Σ_{j≥1} a_j b_{k-j}`.
    ///
    /// For matrix coefficients this is the Neumann iteration
    /// `g^{-1} = ḡ^{-1} - ḡ^{-1}(g - ḡ)g^{-1}` solved order by order.
    pub fn try_inverse(&self) -> Result<Self, SeriesError> {
        let b0 = self.coeffs[0].try_invert()?;
        let mut out: Vec<T> = Vec::with_capacity(self.coeffs.len());
        out.push(b0.clone());
        for k in 1..=self.order() {
            let mut acc = self.coeffs[1].times(&out[k - 1]);
            for j in 2..=k {
                acc = acc.plus(&self.coeffs[j].times(&out[k - j]));
            }
            out.push(b0.times(&acc).scaled(-1.0));
        }
        Ok(EpsSeries { coeffs: out })
    }
}

impl EpsSeries<f64> {
    /// Scalar reciprocal series.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        self.try_inverse()
    }

    /// Square root with positive leading coefficient.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(SeriesError::NonPositiveLeading(a0));
        }
        let b0 = a0.sqrt();
        let mut out = vec![b0];
        for k in 1..=self.order() {
            let cross: f64 = (1..k).map(|j| out[j] * out[k - j]).sum();
            out.push((self.coeffs[k] - cross) / (2.0 * b0));
        }
        Ok(EpsSeries { coeffs: out })
    }
}

pub fn series_add<T: Additive>(
    a: &EpsSeries<T>,
    b: &EpsSeries<T>,
) -> Result<EpsSeries<T>, SeriesError> {
    a.try_add(b)
}

pub fn series_mul<T: Coefficient>(
    a: &EpsSeries<T>,
    b: &EpsSeries<T>,
) -> Result<EpsSeries<T>, SeriesError> {
    a.try_mul(b)
}

pub fn series_recip(a: &EpsSeries<f64>) -> Result<EpsSeries<f64>, SeriesError> {
    a.recip()
}

pub fn series_sqrt(a: &EpsSeries<f64>) -> Result<EpsSeries<f64>, SeriesError> {
    a.sqrt()
}

pub fn series_matrix_inverse<T>(a: &EpsSeries<Matrix<T>>) -> Result<EpsSeries<Matrix<T>>, SeriesError>
where
    T: Coefficient,
    Matrix<T>: Invertible,
{
    for c in a.coeffs() {
        if c.dim() != a.coeff(0).dim() {
            return Err(SeriesError::DimMismatch(a.coeff(0).dim(), c.dim()));
        }
    }
    a.try_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[f64]) -> EpsSeries<f64> {
        EpsSeries::new(c.to_vec()).unwrap()
    }

    fn close(a: &EpsSeries<f64>, b: &[f64], tol: f64) -> bool {
        a.coeffs().iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn products() {
        assert_eq!(series_mul(&s(&[1., 1., 0.]), &s(&[1., -1., 0.])).unwrap().coeffs(), &[1., 0., -1.]);
        assert_eq!(series_mul(&s(&[1., 2., 1.]), &s(&[1., 1., 0.])).unwrap().coeffs(), &[1., 3., 3.]);
        let a = s(&[0.3, -1.2, 2.5]);
        assert_eq!(series_mul(&a, &s(&[1., 0., 0.])).unwrap(), a);
    }

    #[test]
    fn order_mismatch() {
        assert!(matches!(
            series_add(&s(&[1., 1.]), &s(&[1., 1., 1.])),
            Err(SeriesError::OrderMismatch(1, 2))
        ));
        assert!(EpsSeries::new(vec![1.0]).is_err());
    }

    #[test]
    fn reciprocal() {
        assert!(close(&series_recip(&s(&[1., 1., 0.])).unwrap(), &[1., -1., 1.], 0.0));
        assert!(close(&series_recip(&s(&[2., 0., 0.])).unwrap(), &[0.5, 0., 0.], 0.0));
        assert!(series_recip(&s(&[1e-13, 1., 0.])).is_err());
    }

    #[test]
    fn square_root() {
        assert!(close(&series_sqrt(&s(&[1., 2., 1.])).unwrap(), &[1., 1., 0.], 1e-15));
        assert!(close(&series_sqrt(&s(&[4., 0., 0.])).unwrap(), &[2., 0., 0.], 0.0));
        assert!(matches!(series_sqrt(&s(&[0., 1., 0.])), Err(SeriesError::NonPositiveLeading(_))));
    }

    #[test]
    fn eval_is_horner() {
        let a = s(&[1., 2., 3.]);
        assert!((a.eval_at(0.5) - (1. + 1. + 0.75)).abs() < 1e-15);
    }

    #[test]
    fn matrix_inverse_of_identity_series() {
        let i4 = Matrix::<f64>::identity(4);
        let z = Matrix::<f64>::zeros(4);
        let a = EpsSeries::new(vec![i4.clone(), z.clone(), z.clone()]).unwrap();
        let inv = series_matrix_inverse(&a).unwrap();
        assert_eq!(inv.coeff(0), &i4);
        assert_eq!(inv.coeff(1), &z);
        assert_eq!(inv.coeff(2), &z);
    }

    #[test]
    fn matrix_inverse_scalar_direction() {
        let i4 = Matrix::<f64>::identity(4);
        let mut d = Matrix::<f64>::zeros(4);
        d[(0, 0)] = 2.0;
        let a = EpsSeries::new(vec![i4, d, Matrix::zeros(4)]).unwrap();
        let inv = series_matrix_inverse(&a).unwrap();
        let e00: Vec<f64> = inv.coeffs().iter().map(|m| m[(0, 0)]).collect();
        assert_eq!(e00, vec![1.0, -2.0, 4.0]);
        for i in 1..4 {
            let eii: Vec<f64> = inv.coeffs().iter().map(|m| m[(i, i)]).collect();
            assert_eq!(eii, vec![1.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = EpsSeries::new(vec![Matrix::<f64>::zeros(3), Matrix::identity(3)]).unwrap();
        assert!(series_matrix_inverse(&a).is_err());
    }
}
