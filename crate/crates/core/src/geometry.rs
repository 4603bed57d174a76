//! ε-series of the inverse metric, Christoffel symbols, scalar curvature and
//! volume density for `g = ḡ + εg̿` at a single chart point.

use thiserror::Error;

use crate::jets::SpatialJet;
use crate::matrix::Matrix;
use crate::scene::{MetricPair, MetricScene, SceneError};
use crate::series::{Additive, Coefficient, EpsSeries, SeriesError};

/// Jet degree used for metric entries: curvature needs ∂²g and the Connes
/// a-term needs second derivatives of g⁻¹.
pub const METRIC_DEGREE: usize = 2;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("dimension {found} not supported here (expected {expected})")]
    Dimension { expected: usize, found: usize },
    #[error("metric jets need degree >= {needed}, got {found}")]
    Degree { needed: usize, found: usize },
}

/// Dense rank-3 array `a[k][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank3<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> Rank3<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    data.push(f(k, i, j));
                }
            }
        }
        Rank3 { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> &T {
        &self.data[(k * self.n + i) * self.n + j]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Rank3<U> {
        Rank3 {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Additive> Additive for Rank3<T> {
    fn plus(&self, rhs: &Self) -> Self {
        Rank3 {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        Rank3 {
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

pub type ChristoffelSeries = EpsSeries<Rank3<SpatialJet>>;

/// `[ḡ, g̿, 0, …]` as a matrix series.
pub fn metric_series(pair: &MetricPair, order: usize) -> EpsSeries<Matrix<SpatialJet>> {
    EpsSeries::linear(pair.base.clone(), pair.perturbation.clone(), order)
}

/// `g⁻¹` as a series of jet matrices (same jet degree as the metric).
pub fn inverse_metric_series(
    pair: &MetricPair,
    order: usize,
) -> Result<EpsSeries<Matrix<SpatialJet>>, GeometryError> {
    if pair.perturbation_is_zero {
        let inv = pair.base.inverse_checked(crate::series::MAX_CONDITION)?;
        return Ok(EpsSeries::constant(inv, order));
    }
    // linear pencil: b_k = (−b₀g̿)·b_{k−1}
    let b0 = pair.base.inverse_checked(crate::series::MAX_CONDITION)?;
    let step = b0.times(&pair.perturbation).scaled(-1.0);
    let mut out = vec![b0];
    for k in 1..=order {
        let next = step.times(&out[k - 1]);
        out.push(next);
    }
    Ok(EpsSeries::new(out)?)
}

/// `Γ^k_ij = ½ g^{kl}(∂_j g_il + ∂_i g_jl − ∂_l g_ij)`, one jet degree below the metric.
pub fn christoffel_series(
    pair: &MetricPair,
    inverse: &EpsSeries<Matrix<SpatialJet>>,
) -> Result<ChristoffelSeries, GeometryError> {
    let n = pair.dim();
    let degree = pair.degree();
    if degree < 1 {
        return Err(GeometryError::Degree { needed: 1, found: degree });
    }
    let order = inverse.order();
    // lower symbols Γ_{l,ij} = ½(∂_j g_il + ∂_i g_jl − ∂_l g_ij), indexed [l][i][j]
    let lower_of = |g: &Matrix<SpatialJet>| {
        let dg: Vec<Matrix<SpatialJet>> = (0..n).map(|m| g.differentiate(m)).collect();
        Rank3::from_fn(n, |l, i, j| {
            let mut s = dg[j][(i, l)].clone();
            s.axpy(1.0, &dg[i][(j, l)]);
            s.axpy(-1.0, &dg[l][(i, j)]);
            s.scale(0.5)
        })
    };
    let base_lower = lower_of(&pair.base);
    let pert_lower = (!pair.perturbation_is_zero).then(|| lower_of(&pair.perturbation));
    let inv = inverse.map(|m| m.truncate(degree - 1));
    // Γ[m] = g⁻¹[m]·Γ_low(ḡ) + g⁻¹[m−1]·Γ_low(g̿); higher lower-symbol orders vanish
    let raise = |ginv: &Matrix<SpatialJet>, low: &Rank3<SpatialJet>, acc: &mut Rank3<SpatialJet>| {
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let slot = &mut acc.data[(k * n + i) * n + j];
                    for l in 0..n {
                        ginv[(k, l)].mul_add_into(low.get(l, i, j), slot);
                    }
                }
            }
        }
    };
    let symmetrize = |acc: &mut Rank3<SpatialJet>| {
        for k in 0..n {
            for i in 0..n {
                for j in 0..i {
                    acc.data[(k * n + i) * n + j] = acc.data[(k * n + j) * n + i].clone();
                }
            }
        }
    };
    let zero = base_lower.zero_like();
    EpsSeries::new(
        (0..=order)
            .map(|m| {
                let mut acc = zero.clone();
                raise(inv.coeff(m), &base_lower, &mut acc);
                if let (Some(pl), true) = (&pert_lower, m >= 1) {
                    raise(inv.coeff(m - 1), pl, &mut acc);
                }
                symmetrize(&mut acc);
                acc
            })
            .collect(),
    )
    .map_err(Into::into)
}

/// Point values of every ingredient the operator and density formulas need.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub dim: usize,
    pub order: usize,
    pub pair: MetricPair,
    /// g⁻¹ series, jets at the metric degree.
    pub inverse: EpsSeries<Matrix<SpatialJet>>,
    /// Γ series, jets one degree lower.
    pub christoffel: ChristoffelSeries,
    inv_vals: Vec<Matrix<f64>>,
    gamma_vals: Vec<Rank3<f64>>,
    contracted: Vec<Vec<f64>>,
}

impl PointGeometry {
    pub fn new(pair: MetricPair, order: usize) -> Result<Self, GeometryError> {
        if pair.degree() < METRIC_DEGREE {
            return Err(GeometryError::Degree {
                needed: METRIC_DEGREE,
                found: pair.degree(),
            });
        }
        let n = pair.dim();
        let inverse = inverse_metric_series(&pair, order)?;
        let christoffel = christoffel_series(&pair, &inverse)?;
        let inv_vals: Vec<Matrix<f64>> = inverse.coeffs().iter().map(Matrix::values).collect();
        let gamma_vals: Vec<Rank3<f64>> = christoffel
            .coeffs()
            .iter()
            .map(|g| g.map(SpatialJet::value))
            .collect();
        // V^m[c] = Σ_{a+b=c} g^{ij}[a] Γ^m_ij[b]
        let contracted = (0..=order)
            .map(|c| {
                (0..n)
                    .map(|m| {
                        let mut s = 0.0;
                        for a in 0..=c {
                            for i in 0..n {
                                for j in 0..n {
                                    s += inv_vals[a][(i, j)] * gamma_vals[c - a].get(m, i, j);
                                }
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        Ok(PointGeometry {
            dim: n,
            order,
            pair,
            inverse,
            christoffel,
            inv_vals,
            gamma_vals,
            contracted,
        })
    }

    pub fn at(scene: &MetricScene, point: &[f64]) -> Result<Self, GeometryError> {
        let pair = scene.eval_metric_pair(point, METRIC_DEGREE)?;
        Self::new(pair, scene.order)
    }

    /// Point value of `g^{ij}[a]`.
    pub fn inv(&self, a: usize) -> &Matrix<f64> {
        &self.inv_vals[a]
    }

    /// Point value of `Γ^k_ij[b]`.
    pub fn gamma(&self, b: usize) -> &Rank3<f64> {
        &self.gamma_vals[b]
    }

    /// `g^{ij}Γ^m_ij` at order `c`.
    pub fn contracted_gamma(&self, c: usize) -> &[f64] {
        &self.contracted[c]
    }

    /// Scalar curvature series with the contraction
    /// `r = g^{jl}∂_kΓ^k_jl + g^{jl}Γ^α_jlΓ^k_kα − g^{jl}∂_jΓ^k_kl − g^{jl}Γ^α_klΓ^k_jα`.
    pub fn scalar_curvature(&self) -> EpsSeries<f64> {
        let n = self.dim;
        let order = self.order;
        // derivative part D_jl[b] = ∂_kΓ^k_jl − ∂_jΓ^k_kl
        let deriv: Vec<Matrix<f64>> = self
            .christoffel
            .coeffs()
            .iter()
            .map(|gam| {
                Matrix::from_fn(n, |j, l| {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += gam.get(k, j, l).d(&[k]) - gam.get(k, k, l).d(&[j]);
                    }
                    s
                })
            })
            .collect();
        // trace T_α[d] = Γ^k_kα
        let trace: Vec<Vec<f64>> = self
            .gamma_vals
            .iter()
            .map(|gam| (0..n).map(|a| (0..n).map(|k| gam.get(k, k, a)).sum()).collect())
            .collect();
        // quadratic part Q_jl[c] = Σ_{b+d=c} Γ^α_jl[b]T_α[d] − Γ^α_kl[b]Γ^k_jα[d]
        let quad: Vec<Matrix<f64>> = (0..=order)
            .map(|c| {
                Matrix::from_fn(n, |j, l| {
                    let mut s = 0.0;
                    for b in 0..=c {
                        let (gb, gd, td) = (&self.gamma_vals[b], &self.gamma_vals[c - b], &trace[c - b]);
                        for al in 0..n {
                            s += gb.get(al, j, l) * td[al];
                            for k in 0..n {
                                s -= gb.get(al, k, l) * gd.get(k, j, al);
                            }
                        }
                    }
                    s
                })
            })
            .collect();
        EpsSeries::from_fn(order, |c| {
            let mut s = 0.0;
            for a in 0..=c {
                let ginv = &self.inv_vals[a];
                let (d, q) = (&deriv[c - a], &quad[c - a]);
                for j in 0..n {
                    for l in 0..n {
                        s += ginv[(j, l)] * (d[(j, l)] + q[(j, l)]);
                    }
                }
            }
            s
        })
    }

    /// `√det ḡ` at the point.
    pub fn sqrt_det_base(&self) -> f64 {
        self.pair.base.values().determinant().sqrt()
    }
}

/// `[1, c₁, c₂, …]` with `√det g = (Σ c_k ε^k)·√det ḡ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSeries {
    /// Closed-form coefficients (orders above 2 come from the √det route).
    pub coeffs: EpsSeries<f64>,
    /// `series_sqrt` of the determinant series, computed independently.
    pub sqrt_route: EpsSeries<f64>,
    pub sqrt_det_base: f64,
}

impl VolumeSeries {
    pub fn max_route_gap(&self) -> f64 {
        self.coeffs
            .coeffs()
            .iter()
            .zip(self.sqrt_route.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `G = ḡ⁻¹g̿` at the point.
pub fn relative_perturbation(base: &Matrix<f64>, pert: &Matrix<f64>) -> Result<Matrix<f64>, GeometryError> {
    Ok(base.inverse_checked(crate::series::MAX_CONDITION)?.times(pert))
}

/// Closed-form `c₁ = tr G / 2` and
/// `c₂ = ½(Σ_{j<l} G_jj G_ll − Σ_{j<l} G_jl G_lj) − ⅛(tr G)²`.
pub fn closed_form_c(g: &Matrix<f64>) -> (f64, f64) {
    let n = g.dim();
    let tr = g.trace();
    let (mut diag, mut off) = (0.0, 0.0);
    for j in 0..n {
        for l in j + 1..n {
            diag += g[(j, j)] * g[(l, l)];
            off += g[(j, l)] * g[(l, j)];
        }
    }
    (0.5 * tr, 0.5 * (diag - off) - 0.125 * tr * tr)
}

/// `det(I + εG)` as a series: elementary symmetric functions of G via Newton's
/// identities on the power sums `tr Gᵏ`.
pub fn determinant_series(g: &Matrix<f64>, order: usize) -> EpsSeries<f64> {
    let n = g.dim();
    let kmax = order.min(n);
    let mut power = g.clone();
    let mut p = vec![0.0; kmax + 1];
    for k in 1..=kmax {
        if k > 1 {
            power = power.times(g);
        }
        p[k] = power.trace();
    }
    let mut e = vec![0.0; order + 1];
    e[0] = 1.0;
    for k in 1..=kmax {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * p[i];
        }
        e[k] = s / k as f64;
    }
    EpsSeries::from_fn(order, |k| e[k])
}

pub fn volume_density_series(pair: &MetricPair, order: usize) -> Result<VolumeSeries, GeometryError> {
    let base = pair.base.values();
    let sqrt_det_base = base.determinant().sqrt();
    if pair.perturbation_is_zero {
        let one = EpsSeries::constant(1.0, order);
        return Ok(VolumeSeries {
            coeffs: one.clone(),
            sqrt_route: one,
            sqrt_det_base,
        });
    }
    let g = relative_perturbation(&base, &pair.perturbation.values())?;
    let sqrt_route = determinant_series(&g, order).sqrt()?;
    let (c1, c2) = closed_form_c(&g);
    let coeffs = EpsSeries::from_fn(order, |k| match k {
        0 => 1.0,
        1 => c1,
        2 => c2,
        _ => sqrt_route.coeffs()[k],
    });
    Ok(VolumeSeries {
        coeffs,
        sqrt_route,
        sqrt_det_base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ScalarFieldExpr;
    use crate::scene::{conformally_flat, euclidean4, random_smooth, sphere4_stereo, SymExprMatrix};

    fn with_pert(scene: &MetricScene, f: impl Fn(usize, usize) -> &'static str) -> MetricScene {
        scene.with_perturbation(SymExprMatrix::from_fn(4, |i, j| ScalarFieldExpr::parse(f(i, j)).unwrap()))
    }

    #[test]
    fn zero_perturbation_gives_exact_zero_orders() {
        let s = sphere4_stereo().with_perturbation(SymExprMatrix::zeros(4));
        let geo = PointGeometry::at(&s, &[0.1, 0.2, -0.3, 0.05]).unwrap();
        for k in 1..=2 {
            assert!(geo.inverse.coeff(k).iter().all(SpatialJet::is_zero));
            assert!(geo.christoffel.coeff(k).iter().all(SpatialJet::is_zero));
        }
        let r = geo.scalar_curvature();
        assert_eq!(&r.coeffs()[1..], &[0.0, 0.0]);
    }

    #[test]
    fn pert_equal_base_is_geometric() {
        let s = sphere4_stereo();
        let s = s.with_perturbation(s.base.clone());
        let geo = PointGeometry::at(&s, &[0.2, -0.1, 0.3, 0.0]).unwrap();
        let g0 = geo.inv(0).clone();
        assert!(geo.inv(1).max_abs_diff(&g0.scaled(-1.0)) <= 1e-12);
        assert!(geo.inv(2).max_abs_diff(&g0) <= 1e-12);
    }

    #[test]
    fn flat_scenes_have_vanishing_curvature() {
        let geo = PointGeometry::at(&euclidean4(), &[0.3, 0.1, 0.0, -0.2]).unwrap();
        assert_eq!(geo.scalar_curvature().coeffs(), &[0.0, 0.0, 0.0]);
        let s = with_pert(&euclidean4(), |i, j| match (i, j) {
            (0, 0) => "0.5",
            (0, 2) | (2, 0) => "0.2",
            (3, 3) => "-0.3",
            _ => "0",
        });
        let geo = PointGeometry::at(&s, &[0.3, 0.1, 0.0, -0.2]).unwrap();
        assert!(geo.christoffel.coeffs().iter().all(|c| c.iter().all(SpatialJet::is_zero)));
        assert_eq!(geo.scalar_curvature().coeffs(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn round_sphere_has_curvature_twelve() {
        for p in [[0.0; 4], [0.1, 0.2, 0.0, 0.0], [-0.4, 0.3, 0.2, 0.5]] {
            let geo = PointGeometry::at(&sphere4_stereo(), &p).unwrap();
            let r0 = geo.scalar_curvature().coeffs()[0];
            assert!((r0 - 12.0).abs() <= 1e-10, "{r0}");
        }
    }

    #[test]
    fn conformally_flat_christoffels() {
        let phi = ScalarFieldExpr::parse(crate::scene::DEFAULT_PHI).unwrap();
        let s = conformally_flat(crate::scene::DEFAULT_PHI).unwrap();
        let p = [0.2, -0.3, 0.4, 0.1];
        let geo = PointGeometry::at(&s, &p).unwrap();
        let dphi = phi.eval_jet(&p, 1).unwrap();
        let d = |k: usize| dphi.d(&[k]);
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let want = delta(k, i) * d(j) + delta(k, j) * d(i) - delta(i, j) * d(k);
                    assert!((geo.gamma(0).get(k, i, j) - want).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn pencil_inverse_matches_generic_recurrence() {
        let s = random_smooth(3);
        let pair = s.eval_metric_pair(&[0.7, 1.1, 2.9, 4.2], METRIC_DEGREE).unwrap();
        let fast = inverse_metric_series(&pair, 3).unwrap();
        let slow = crate::series::series_matrix_inverse(&metric_series(&pair, 3)).unwrap();
        for k in 0..=3 {
            for (a, b) in fast.coeff(k).iter().zip(slow.coeff(k).iter()) {
                assert!(a.max_abs_diff(b) <= 1e-12, "order {k}");
            }
        }
    }

    #[test]
    fn christoffel_symmetry() {
        let s = crate::scene::random_smooth(11);
        let geo = PointGeometry::at(&s, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        for gam in geo.christoffel.coeffs() {
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        assert!(gam.get(k, i, j).max_abs_diff(gam.get(k, j, i)) <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn volume_identity_direction() {
        let g = Matrix::<f64>::identity(4);
        assert_eq!(closed_form_c(&g), (2.0, 1.0));
        let det = determinant_series(&g, 4);
        assert_eq!(det.coeffs(), &[1.0, 4.0, 6.0, 4.0, 1.0]);
        let root = det.sqrt().unwrap();
        assert!(root.coeffs().iter().zip([1.0, 2.0, 1.0, 0.0, 0.0]).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn volume_routes_agree() {
        let s = crate::scene::random_smooth(4);
        let pair = s.eval_metric_pair(&[0.5, 1.5, 2.5, 3.5], 2).unwrap();
        let v = volume_density_series(&pair, 2).unwrap();
        assert!(v.max_route_gap() <= 1e-12);
        let z = euclidean4().eval_metric_pair(&[0.0; 4], 2).unwrap();
        assert_eq!(volume_density_series(&z, 2).unwrap().coeffs.coeffs(), &[1.0, 0.0, 0.0]);
    }
}
