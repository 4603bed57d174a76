//! Multivariate Taylor jets carrying exact partial derivatives.
//!
//! A [`SpatialJet`] stores `∂^α f(x)` for every multi-index `|α| ≤ degree`
//! at a fixed point. Multi-indices are unordered exponent vectors, so mixed
//! partials are symmetric by construction. Products use the general Leibniz
//! rule; elementary functions are applied by composing their univariate
//! derivatives with powers of the jet's nilpotent part.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use smallvec::SmallVec;
use thiserror::Error;

/// Largest chart dimension a jet layout can be built for.
pub const MAX_DIM: usize = 8;
/// Largest supported jet degree.
pub const MAX_DEGREE: usize = 5;
/// Default floor below which a value is treated as zero by [`SpatialJet::try_recip`].
pub const RECIP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet shape mismatch: dim {0} degree {1} vs dim {2} degree {3}")]
    Mismatch(usize, usize, usize, usize),
    #[error("unsupported jet shape: dim {dim}, degree {degree} (limits {MAX_DIM}, {MAX_DEGREE})")]
    Unsupported { dim: usize, degree: usize },
    #[error("{op} is singular at value {value:e}")]
    Singular { op: &'static str, value: f64 },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    BadCoordinate { index: usize, dim: usize },
}

/// Multi-index bookkeeping shared by all jets of one (dim, degree) shape.
///
/// Multi-indices are enumerated by total degree first, so the layout of
/// degree `d - 1` is a prefix of the layout of degree `d`.
pub struct JetLayout {
    dim: usize,
    degree: usize,
    exponents: Vec<SmallVec<[u8; MAX_DIM]>>,
    total: Vec<usize>,
    lookup: HashMap<SmallVec<[u8; MAX_DIM]>, usize>,
    // (lhs index, rhs index, target index, multinomial C(α+β, α))
    products: Vec<(u16, u16, u16, f64)>,
    // raise[i][k]: index of exponents[k] + e_i, when still within degree
    raise: Vec<Vec<Option<u16>>>,
}

impl fmt::Debug for JetLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetLayout(dim={}, degree={}, len={})", self.dim, self.degree, self.len())
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn exponents_of_total(dim: usize, total: usize, out: &mut Vec<SmallVec<[u8; MAX_DIM]>>) {
    fn rec(
        pos: usize,
        remaining: usize,
        current: &mut SmallVec<[u8; MAX_DIM]>,
        out: &mut Vec<SmallVec<[u8; MAX_DIM]>>,
    ) {
        if pos + 1 == current.len() {
            current[pos] = remaining as u8;
            out.push(current.clone());
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e as u8;
            rec(pos + 1, remaining - e, current, out);
        }
    }
    let mut current: SmallVec<[u8; MAX_DIM]> = SmallVec::from_elem(0, dim);
    rec(0, total, &mut current, out);
}

impl JetLayout {
    fn build(dim: usize, degree: usize) -> Self {
        let mut exponents = Vec::new();
        for d in 0..=degree {
            exponents_of_total(dim, d, &mut exponents);
        }
        let total: Vec<usize> = exponents
            .iter()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .collect();
        let lookup: HashMap<_, _> = exponents
            .iter()
            .enumerate()
            .map(|(k, e)| (e.clone(), k))
            .collect();
        let mut products = Vec::new();
        for (a, ea) in exponents.iter().enumerate() {
            for (b, eb) in exponents.iter().enumerate() {
                if total[a] + total[b] > degree {
                    continue;
                }
                let sum: SmallVec<[u8; MAX_DIM]> =
                    ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let coeff = ea
                    .iter()
                    .zip(&sum)
                    .map(|(&x, &s)| binomial(s as usize, x as usize))
                    .product();
                products.push((a as u16, b as u16, lookup[&sum] as u16, coeff));
            }
        }
        let raise = (0..dim)
            .map(|i| {
                exponents
                    .iter()
                    .map(|e| {
                        let mut up = e.clone();
                        up[i] += 1;
                        lookup.get(&up).map(|&k| k as u16)
                    })
                    .collect()
            })
            .collect();
        JetLayout {
            dim,
            degree,
            exponents,
            total,
            lookup,
            products,
            raise,
        }
    }

    /// Shared layout for a (dim, degree) shape.
    pub fn get(dim: usize, degree: usize) -> Result<&'static JetLayout, JetError> {
        static LAYOUTS: [[OnceLock<JetLayout>; MAX_DEGREE + 1]; MAX_DIM + 1] =
            [const { [const { OnceLock::new() }; MAX_DEGREE + 1] }; MAX_DIM + 1];
        if dim == 0 || dim > MAX_DIM || degree > MAX_DEGREE {
            return Err(JetError::Unsupported { dim, degree });
        }
        Ok(LAYOUTS[dim][degree].get_or_init(|| JetLayout::build(dim, degree)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of stored partials.
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponent vector of entry `k`.
    pub fn exponent(&self, k: usize) -> &[u8] {
        &self.exponents[k]
    }

    /// Total order `|α|` of entry `k`.
    pub fn order(&self, k: usize) -> usize {
        self.total[k]
    }

    /// Position of an exponent vector, if it lies within the layout.
    pub fn index_of(&self, exponent: &[u8]) -> Option<usize> {
        self.lookup.get(exponent).copied()
    }

    /// Number of entries with total order at most `degree`.
    fn prefix_len(&self, degree: usize) -> usize {
        self.total.partition_point(|&t| t <= degree)
    }
}

#[inline]
fn product_into(layout: &JetLayout, a: &[f64], b: &[f64], out: &mut [f64]) {
    if layout.degree <= 1 {
        // degree 1: Leibniz rule with no cross terms
        let (a0, b0) = (a[0], b[0]);
        out[0] += a0 * b0;
        for q in 1..out.len() {
            out[q] += a0 * b[q] + a[q] * b0;
        }
        return;
    }
    for &(i, j, k, c) in &layout.products {
        out[k as usize] += c * a[i as usize] * b[j as usize];
    }
}

/// Inline storage covers degree 2 in four variables; larger jets spill to the heap.
type Partials = SmallVec<[f64; 15]>;

/// All partial derivatives of a scalar field at one point, up to a fixed degree.
#[derive(Clone)]
pub struct SpatialJet {
    layout: &'static JetLayout,
    partials: Partials,
}

impl fmt::Debug for SpatialJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpatialJet")
            .field("dim", &self.dim())
            .field("degree", &self.degree())
            .field("partials", &self.partials.as_slice())
            .finish()
    }
}

impl PartialEq for SpatialJet {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.layout, other.layout) && self.partials == other.partials
    }
}

impl SpatialJet {
    pub fn constant(dim: usize, degree: usize, value: f64) -> Result<Self, JetError> {
        let layout = JetLayout::get(dim, degree)?;
        Ok(Self::constant_in(layout, value))
    }

    pub fn constant_in(layout: &'static JetLayout, value: f64) -> Self {
        let mut partials = SmallVec::from_elem(0.0, layout.len());
        partials[0] = value;
        SpatialJet { layout, partials }
    }

    /// Jet of the coordinate function `x_i` (0-based) taking value `at`.
    pub fn coordinate(dim: usize, degree: usize, i: usize, at: f64) -> Result<Self, JetError> {
        if i >= dim {
            return Err(JetError::BadCoordinate { index: i, dim });
        }
        let layout = JetLayout::get(dim, degree)?;
        let mut jet = Self::constant_in(layout, at);
        if degree >= 1 {
            let mut e: SmallVec<[u8; MAX_DIM]> = SmallVec::from_elem(0, dim);
            e[i] = 1;
            let k = layout.index_of(&e).expect("first-order entry");
            jet.partials[k] = 1.0;
        }
        Ok(jet)
    }

    /// Builds a jet from partials listed in layout order.
    pub fn from_partials(dim: usize, degree: usize, partials: &[f64]) -> Result<Self, JetError> {
        let layout = JetLayout::get(dim, degree)?;
        if partials.len() != layout.len() {
            return Err(JetError::Mismatch(dim, degree, dim, partials.len()));
        }
        Ok(SpatialJet {
            layout,
            partials: SmallVec::from_slice(partials),
        })
    }

    pub fn layout(&self) -> &'static JetLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn degree(&self) -> usize {
        self.layout.degree
    }

    pub fn value(&self) -> f64 {
        self.partials[0]
    }

    /// Partials in layout order.
    pub fn partials(&self) -> &[f64] {
        &self.partials
    }

    /// `∂^α f` for an exponent vector `α`; zero beyond the stored degree.
    pub fn partial(&self, exponent: &[u8]) -> f64 {
        self.layout
            .index_of(exponent)
            .map_or(0.0, |k| self.partials[k])
    }

    /// Partial derivative along the listed (0-based) coordinates, e.g.
    /// `d(&[0, 0])` is `∂²f/∂x₁²`.
    pub fn d(&self, coords: &[usize]) -> f64 {
        let mut k = 0usize;
        for &c in coords {
            match self.layout.raise[c][k] {
                Some(up) => k = up as usize,
                None => return 0.0,
            }
        }
        self.partials[k]
    }

    pub fn is_finite(&self) -> bool {
        self.partials.iter().all(|p| p.is_finite())
    }

    /// True when every partial is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.partials.iter().all(|&p| p == 0.0)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        std::ptr::eq(self.layout, other.layout)
    }

    fn check_shape(&self, other: &Self) -> Result<(), JetError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(JetError::Mismatch(
                self.dim(),
                self.degree(),
                other.dim(),
                other.degree(),
            ))
        }
    }

    pub fn zero_like(&self) -> Self {
        Self::constant_in(self.layout, 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        SpatialJet {
            layout: self.layout,
            partials: self.partials.iter().map(|p| p * s).collect(),
        }
    }

    /// Adds `s·other` in place.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        debug_assert!(self.same_shape(other));
        for (a, b) in self.partials.iter_mut().zip(&other.partials) {
            *a += s * b;
        }
    }

    /// Product by the Leibniz rule, truncated at the jet degree.
    pub fn try_mul(&self, other: &Self) -> Result<Self, JetError> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out: Partials = SmallVec::from_elem(0.0, self.partials.len());
        product_into(self.layout, &self.partials, &other.partials, &mut out);
        SpatialJet {
            layout: self.layout,
            partials: out,
        }
    }

    /// Accumulates `self * other` into `acc` without allocating.
    pub fn mul_add_into(&self, other: &Self, acc: &mut Self) {
        debug_assert!(self.same_shape(other) && self.same_shape(acc));
        product_into(self.layout, &self.partials, &other.partials, &mut acc.partials);
    }

    /// Applies a univariate function given its derivatives `f^{(k)}(value)`
    /// for `k = 0..=degree`.
    pub fn compose(&self, derivs: &[f64]) -> Self {
        let degree = self.degree();
        debug_assert!(derivs.len() > degree);
        let mut nil = self.clone();
        nil.partials[0] = 0.0;
        let mut out = Self::constant_in(self.layout, derivs[0]);
        let mut power = Self::constant_in(self.layout, 1.0);
        let mut factorial = 1.0;
        for (k, dk) in derivs.iter().enumerate().take(degree + 1).skip(1) {
            power = power.mul_unchecked(&nil);
            factorial *= k as f64;
            out.axpy(dk / factorial, &power);
        }
        out
    }

    /// `1/a`; fails when `|value| ≤ floor`.
    pub fn try_recip_with_floor(&self, floor: f64) -> Result<Self, JetError> {
        let x = self.value();
        if !(x.abs() > floor) {
            return Err(JetError::Singular {
                op: "reciprocal",
                value: x,
            });
        }
        let mut derivs = Vec::with_capacity(self.degree() + 1);
        let mut term = 1.0 / x;
        for k in 0..=self.degree() {
            derivs.push(term);
            term *= -((k + 1) as f64) / x;
        }
        Ok(self.compose(&derivs))
    }

    pub fn try_recip(&self) -> Result<Self, JetError> {
        self.try_recip_with_floor(RECIP_FLOOR)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, JetError> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(&other.try_recip()?))
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.degree() + 1])
    }

    pub fn try_ln(&self) -> Result<Self, JetError> {
        let x = self.value();
        if !(x > 0.0) {
            return Err(JetError::Singular { op: "log", value: x });
        }
        let mut derivs = vec![x.ln()];
        let mut term = 1.0 / x;
        for k in 1..=self.degree() {
            derivs.push(term);
            term *= -(k as f64) / x;
        }
        Ok(self.compose(&derivs))
    }

    /// Real power of a positive jet.
    pub fn try_powf(&self, p: f64) -> Result<Self, JetError> {
        let x = self.value();
        if !(x > 0.0) {
            return Err(JetError::Singular { op: "real power", value: x });
        }
        let mut derivs = Vec::with_capacity(self.degree() + 1);
        let mut coeff = 1.0;
        for k in 0..=self.degree() {
            derivs.push(coeff * x.powf(p - k as f64));
            coeff *= p - k as f64;
        }
        Ok(self.compose(&derivs))
    }

    pub fn try_sqrt(&self) -> Result<Self, JetError> {
        let x = self.value();
        if x == 0.0 && self.partials[1..].iter().all(|&p| p == 0.0) {
            return Ok(self.zero_like());
        }
        if !(x > 0.0) {
            return Err(JetError::Singular { op: "sqrt", value: x });
        }
        self.try_powf(0.5)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let derivs: Vec<f64> = (0..=self.degree()).map(|k| cycle[k % 4]).collect();
        self.compose(&derivs)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let derivs: Vec<f64> = (0..=self.degree()).map(|k| cycle[k % 4]).collect();
        self.compose(&derivs)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn try_powi(&self, p: i32) -> Result<Self, JetError> {
        let mut base = if p < 0 { self.try_recip()? } else { self.clone() };
        let mut e = p.unsigned_abs();
        let mut acc = Self::constant_in(self.layout, 1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// Jet of `∂f/∂x_i`, one degree lower.
    pub fn differentiate(&self, i: usize) -> Self {
        assert!(self.degree() >= 1, "cannot differentiate a degree-0 jet");
        let lower = JetLayout::get(self.dim(), self.degree() - 1).expect("lower layout");
        let partials = (0..lower.len())
            .map(|k| {
                let up = self.layout.raise[i][k].expect("raised index within degree");
                self.partials[up as usize]
            })
            .collect();
        SpatialJet {
            layout: lower,
            partials,
        }
    }

    /// Drops all partials above `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        if degree >= self.degree() {
            return self.clone();
        }
        let layout = JetLayout::get(self.dim(), degree).expect("lower layout");
        let keep = self.layout.prefix_len(degree);
        SpatialJet {
            layout,
            partials: SmallVec::from_slice(&self.partials[..keep]),
        }
    }

    /// Largest absolute difference between corresponding partials.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert!(self.same_shape(other));
        self.partials
            .iter()
            .zip(&other.partials)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for &SpatialJet {
    type Output = SpatialJet;
    fn add(self, rhs: &SpatialJet) -> SpatialJet {
        assert!(self.same_shape(rhs), "jet shape mismatch in add");
        SpatialJet {
            layout: self.layout,
            partials: self
                .partials
                .iter()
                .zip(&rhs.partials)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SpatialJet {
    type Output = SpatialJet;
    fn sub(self, rhs: &SpatialJet) -> SpatialJet {
        assert!(self.same_shape(rhs), "jet shape mismatch in sub");
        SpatialJet {
            layout: self.layout,
            partials: self
                .partials
                .iter()
                .zip(&rhs.partials)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &SpatialJet {
    type Output = SpatialJet;
    fn mul(self, rhs: &SpatialJet) -> SpatialJet {
        assert!(self.same_shape(rhs), "jet shape mismatch in mul");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &SpatialJet {
    type Output = SpatialJet;
    fn neg(self) -> SpatialJet {
        self.scale(-1.0)
    }
}

impl Add for SpatialJet {
    type Output = SpatialJet;
    fn add(self, rhs: SpatialJet) -> SpatialJet {
        &self + &rhs
    }
}

impl Sub for SpatialJet {
    type Output = SpatialJet;
    fn sub(self, rhs: SpatialJet) -> SpatialJet {
        &self - &rhs
    }
}

impl Mul for SpatialJet {
    type Output = SpatialJet;
    fn mul(self, rhs: SpatialJet) -> SpatialJet {
        &self * &rhs
    }
}

impl Neg for SpatialJet {
    type Output = SpatialJet;
    fn neg(self) -> SpatialJet {
        self.scale(-1.0)
    }
}

/// Free-function form of the jet product.
pub fn jet_mul(a: &SpatialJet, b: &SpatialJet) -> Result<SpatialJet, JetError> {
    a.try_mul(b)
}

pub fn jet_recip(a: &SpatialJet) -> Result<SpatialJet, JetError> {
    a.try_recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, at: f64, degree: usize) -> SpatialJet {
        SpatialJet::coordinate(4, degree, i, at).unwrap()
    }

    #[test]
    fn layout_sizes_and_prefix() {
        let l3 = JetLayout::get(4, 3).unwrap();
        let l2 = JetLayout::get(4, 2).unwrap();
        assert_eq!(l3.len(), 35);
        assert_eq!(l2.len(), 15);
        for k in 0..l2.len() {
            assert_eq!(l2.exponent(k), l3.exponent(k));
        }
        assert!(JetLayout::get(9, 2).is_err());
        assert!(JetLayout::get(4, 6).is_err());
    }

    #[test]
    fn square_of_coordinate() {
        let a = x(0, 2.0, 3);
        let p = jet_mul(&a, &a).unwrap();
        assert_eq!(p.value(), 4.0);
        assert_eq!(p.d(&[0]), 4.0);
        assert_eq!(p.d(&[0, 0]), 2.0);
        assert_eq!(p.d(&[0, 0, 0]), 0.0);
        assert_eq!(p.d(&[1]), 0.0);
    }

    #[test]
    fn identity_constant_is_neutral() {
        let one = SpatialJet::constant(4, 3, 1.0).unwrap();
        let b = x(1, 0.4, 3).sin();
        assert_eq!(jet_mul(&one, &b).unwrap(), b);
    }

    #[test]
    fn recip_of_one_plus_x() {
        let one = SpatialJet::constant(4, 3, 1.0).unwrap();
        let a = &one + &x(0, 0.0, 3);
        let r = jet_recip(&a).unwrap();
        assert!((r.value() - 1.0).abs() < 1e-15);
        assert!((r.d(&[0]) + 1.0).abs() < 1e-15);
        assert!((r.d(&[0, 0]) - 2.0).abs() < 1e-14);
        assert!((r.d(&[0, 0, 0]) + 6.0).abs() < 1e-13);
    }

    #[test]
    fn recip_of_constant_two() {
        let r = jet_recip(&SpatialJet::constant(4, 3, 2.0).unwrap()).unwrap();
        assert_eq!(r.value(), 0.5);
        assert!(r.partials()[1..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn recip_of_exp_is_exp_of_negation() {
        let a = x(0, 0.3, 3).exp();
        let r = jet_recip(&a).unwrap();
        let e = (-&x(0, 0.3, 3)).exp();
        assert!(r.max_abs_diff(&e) < 1e-14);
    }

    #[test]
    fn near_zero_recip_is_singular() {
        let z = SpatialJet::constant(4, 2, 1e-14).unwrap();
        assert!(matches!(z.try_recip(), Err(JetError::Singular { .. })));
    }

    #[test]
    fn sin_times_cos_is_half_sin_double() {
        let t = x(0, 0.7, 3);
        let lhs = jet_mul(&t.sin(), &t.cos()).unwrap();
        let rhs = t.scale(2.0).sin().scale(0.5);
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = x(0, 1.0, 3);
        let b = x(0, 1.0, 2);
        assert!(matches!(jet_mul(&a, &b), Err(JetError::Mismatch(..))));
    }

    #[test]
    fn differentiate_and_truncate() {
        // f = x1^2 x2 ; ∂1 f = 2 x1 x2
        let f = &(&x(0, 1.5, 3) * &x(0, 1.5, 3)) * &x(1, -0.5, 3);
        let df = f.differentiate(0);
        assert_eq!(df.degree(), 2);
        assert!((df.value() - 2.0 * 1.5 * -0.5).abs() < 1e-15);
        assert!((df.d(&[1]) - 3.0).abs() < 1e-15);
        assert!((df.d(&[0, 1]) - 2.0).abs() < 1e-15);
        let t = f.truncate(1);
        assert_eq!(t.degree(), 1);
        assert_eq!(t.d(&[0]), f.d(&[0]));
    }

    #[test]
    fn powi_matches_repeated_product() {
        let a = &x(2, 0.8, 3) + &SpatialJet::constant(4, 3, 1.0).unwrap();
        let cube = &(&a * &a) * &a;
        assert!(a.try_powi(3).unwrap().max_abs_diff(&cube) < 1e-13);
        let inv2 = a.try_powi(-2).unwrap();
        let check = &inv2 * &(&a * &a);
        assert!((check.value() - 1.0).abs() < 1e-14);
        assert!(check.partials()[1..].iter().all(|p| p.abs() < 1e-13));
    }
}
