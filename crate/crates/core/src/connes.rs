//! Series of the 4-dimensional Connes density
//! `A₄(f₁,f₂) = ⅓ r t + a + b − ½ d` with `t = ⟨df₁,df₂⟩`, `a = Δ⟨df₁,df₂⟩`,
//! `b = ⟨∇df₁,∇df₂⟩` and `d = Δf₁Δf₂`.

use serde::Serialize;

use crate::expr::ScalarFieldExpr;
use crate::geometry::{volume_density_series, PointGeometry};
use crate::jets::SpatialJet;
use crate::matrix::Matrix;
use crate::operators::{laplacian_apply, laplacian_apply_fixed, probe_jet, OperatorError, PROBE_DEGREE};
use crate::scene::MetricScene;
use crate::series::{Coefficient, EpsSeries};

/// A₄ series with its four components kept for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A4Series {
    pub total: Vec<f64>,
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    /// `⅓ Σ_{i+j=k} r_i t_j`.
    pub rt_third: Vec<f64>,
}

impl A4Series {
    pub fn order(&self) -> usize {
        self.total.len() - 1
    }

    pub fn series(&self) -> EpsSeries<f64> {
        EpsSeries::from_fn(self.order(), |k| self.total[k])
    }
}

fn require_dim4(n: usize) -> Result<(), OperatorError> {
    if n == 4 {
        Ok(())
    } else {
        Err(OperatorError::Unsupported(format!(
            "the Connes density is defined for n = 4 only, scene has n = {n}"
        )))
    }
}

/// `t_k = Σ ∂_j f₁ ∂_l f₂ g^{jl}[k]` as jets (one degree below the probes,
/// capped at the metric degree).
pub fn gradient_pairing_jets(geo: &PointGeometry, f1: &SpatialJet, f2: &SpatialJet) -> EpsSeries<SpatialJet> {
    let n = geo.dim;
    let degree = (f1.degree().min(f2.degree()) - 1).min(geo.inverse.coeff(0)[(0, 0)].degree());
    let d1: Vec<SpatialJet> = (0..n).map(|j| f1.differentiate(j).truncate(degree)).collect();
    let d2: Vec<SpatialJet> = (0..n).map(|j| f2.differentiate(j).truncate(degree)).collect();
    geo.inverse.map(|ginv| {
        let mut acc = d1[0].zero_like();
        for j in 0..n {
            if d1[j].is_zero() {
                continue;
            }
            let mut inner = d1[0].zero_like();
            for l in 0..n {
                ginv[(j, l)].truncate(degree).mul_add_into(&d2[l], &mut inner);
            }
            d1[j].mul_add_into(&inner, &mut acc);
        }
        acc
    })
}

/// Covariant Hessian series `H_βl[b] = δ_{b0} ∂_β∂_l f − ∂_m f Γ^m_βl[b]`.
pub fn hessian_series(geo: &PointGeometry, f: &SpatialJet) -> EpsSeries<Matrix<f64>> {
    let n = geo.dim;
    let grad: Vec<f64> = (0..n).map(|m| f.d(&[m])).collect();
    EpsSeries::from_fn(geo.order, |b| {
        let gam = geo.gamma(b);
        Matrix::from_fn(n, |be, l| {
            let mut s = if b == 0 { f.d(&[be, l]) } else { 0.0 };
            for (m, gm) in grad.iter().enumerate() {
                s -= gm * gam.get(m, be, l);
            }
            s
        })
    })
}

fn inverse_values(geo: &PointGeometry) -> EpsSeries<Matrix<f64>> {
    EpsSeries::from_fn(geo.order, |a| geo.inv(a).clone())
}

/// `b = tr(H₁ g⁻¹ H₂ g⁻¹)` as a fourfold Cauchy product.
pub fn hessian_pairing(geo: &PointGeometry, f1: &SpatialJet, f2: &SpatialJet) -> EpsSeries<f64> {
    let ginv = inverse_values(geo);
    let m1 = hessian_series(geo, f1).mul(&ginv);
    let m2 = hessian_series(geo, f2).mul(&ginv);
    m1.convolve(&m2, |x, y| x.times(y).trace())
}

/// A₄ and its components at a point from precomputed geometry.
pub fn a4_from_geometry(
    geo: &PointGeometry,
    r: &EpsSeries<f64>,
    f1: &SpatialJet,
    f2: &SpatialJet,
) -> A4Series {
    let t_jets = gradient_pairing_jets(geo, f1, f2);
    let t = t_jets.map(SpatialJet::value);
    let a = laplacian_apply(geo, &t_jets);
    let b = hessian_pairing(geo, f1, f2);
    let d = laplacian_apply_fixed(geo, f1).mul(&laplacian_apply_fixed(geo, f2));
    let rt_third = r.mul(&t).scale(1.0 / 3.0);
    let total = EpsSeries::from_fn(geo.order, |k| {
        rt_third.coeff(k) + a.coeff(k) + b.coeff(k) - 0.5 * d.coeff(k)
    });
    A4Series {
        total: total.into_coeffs(),
        r: r.coeffs().to_vec(),
        t: t.into_coeffs(),
        a: a.into_coeffs(),
        b: b.into_coeffs(),
        d: d.into_coeffs(),
        rt_third: rt_third.into_coeffs(),
    }
}

fn probe_pair(
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
    point: &[f64],
) -> Result<(SpatialJet, SpatialJet), OperatorError> {
    Ok((
        probe_jet("f1", f1, point, PROBE_DEGREE)?,
        probe_jet("f2", f2, point, PROBE_DEGREE)?,
    ))
}

pub fn gradient_pairing_series(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<EpsSeries<f64>, OperatorError> {
    let geo = PointGeometry::at(scene, point)?;
    let (j1, j2) = probe_pair(f1, f2, point)?;
    Ok(gradient_pairing_jets(&geo, &j1, &j2).map(SpatialJet::value))
}

pub fn laplacian_of_pairing_series(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<EpsSeries<f64>, OperatorError> {
    let geo = PointGeometry::at(scene, point)?;
    let (j1, j2) = probe_pair(f1, f2, point)?;
    Ok(laplacian_apply(&geo, &gradient_pairing_jets(&geo, &j1, &j2)))
}

pub fn hessian_pairing_series(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<EpsSeries<f64>, OperatorError> {
    let geo = PointGeometry::at(scene, point)?;
    let (j1, j2) = probe_pair(f1, f2, point)?;
    Ok(hessian_pairing(&geo, &j1, &j2))
}

pub fn laplacian_product_series(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<EpsSeries<f64>, OperatorError> {
    let geo = PointGeometry::at(scene, point)?;
    let (j1, j2) = probe_pair(f1, f2, point)?;
    Ok(laplacian_apply_fixed(&geo, &j1).mul(&laplacian_apply_fixed(&geo, &j2)))
}

pub fn a4_density_series(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<A4Series, OperatorError> {
    require_dim4(scene.dim)?;
    let geo = PointGeometry::at(scene, point)?;
    let r = geo.scalar_curvature();
    let (j1, j2) = probe_pair(f1, f2, point)?;
    Ok(a4_from_geometry(&geo, &r, &j1, &j2))
}

/// Per-order comparison of `A₄^k` on `(fḡ, fg̿)` against `f⁻² A₄^k` on `(ḡ, g̿)`.
#[derive(Debug, Clone, Serialize)]
pub struct CovarianceResiduals {
    pub scaled: Vec<f64>,
    pub expected: Vec<f64>,
    pub residual: Vec<f64>,
}

pub fn conformal_covariance_residual(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<CovarianceResiduals, OperatorError> {
    require_dim4(scene.dim)?;
    let f = scene.conformal_factor_at(point)?;
    let fv = f.eval(point).map_err(|source| OperatorError::Probe {
        name: "conformal_factor".into(),
        source,
    })?;
    let plain = a4_density_series(scene, point, f1, f2)?;
    let scaled = a4_density_series(&scene.conformally_scaled(f), point, f1, f2)?;
    let expected: Vec<f64> = plain.total.iter().map(|v| v / (fv * fv)).collect();
    let residual = scaled.total.iter().zip(&expected).map(|(a, b)| (a - b).abs()).collect();
    Ok(CovarianceResiduals {
        scaled: scaled.total,
        expected,
        residual,
    })
}

/// `grid[j][l] = A₄^j · c_l · √det ḡ` with `c₀ = 1`.
pub type InvariantDensityGrid = Vec<Vec<f64>>;

pub fn invariant_grid_from(a4: &A4Series, c: &EpsSeries<f64>, sqrt_det_base: f64) -> InvariantDensityGrid {
    a4.total
        .iter()
        .map(|aj| c.coeffs().iter().map(|cl| aj * cl * sqrt_det_base).collect())
        .collect()
}

pub fn bimetric_invariant_grid(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<InvariantDensityGrid, OperatorError> {
    require_dim4(scene.dim)?;
    let geo = PointGeometry::at(scene, point)?;
    let r = geo.scalar_curvature();
    let (j1, j2) = probe_pair(f1, f2, point)?;
    let a4 = a4_from_geometry(&geo, &r, &j1, &j2);
    let vol = volume_density_series(&geo.pair, scene.order).map_err(OperatorError::Geometry)?;
    Ok(invariant_grid_from(&a4, &vol.coeffs, vol.sqrt_det_base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{euclidean4, random_smooth, sphere4_stereo, SymExprMatrix};

    fn e(s: &str) -> ScalarFieldExpr {
        ScalarFieldExpr::parse(s).unwrap()
    }

    const P: [f64; 4] = [0.3, -0.2, 0.1, 0.25];

    #[test]
    fn flat_hand_values() {
        let s = euclidean4();
        let a = a4_density_series(&s, &P, &e("x1^2"), &e("x1^2")).unwrap();
        assert_eq!(a.a[0], -8.0);
        assert_eq!(a.b[0], 4.0);
        let a = a4_density_series(&s, &P, &e("x1^2"), &e("x2^2")).unwrap();
        assert_eq!(a.a, vec![0.0; 3]);
        assert_eq!(a.b, vec![0.0; 3]);
        assert_eq!(a.d, vec![4.0, 0.0, 0.0]);
        assert_eq!(a.total, vec![-2.0, 0.0, 0.0]);
        let a = a4_density_series(&s, &P, &e("x1"), &e("x2")).unwrap();
        assert_eq!(a.total, vec![0.0; 3]);
    }

    #[test]
    fn diagonal_perturbation_pairing() {
        let s = euclidean4().with_perturbation(SymExprMatrix::from_fn(4, |i, j| {
            if i == 0 && j == 0 {
                e("1")
            } else {
                e("0")
            }
        }));
        let t = gradient_pairing_series(&s, &P, &e("x1"), &e("x1")).unwrap();
        assert_eq!(t.coeffs(), &[1.0, -1.0, 1.0]);
    }

    #[test]
    fn symmetry_and_constant_probe() {
        let s = random_smooth(3);
        let p = [1.0, 2.0, 0.5, 4.0];
        let ab = a4_density_series(&s, &p, &s.probes.f1, &s.probes.f2).unwrap();
        let ba = a4_density_series(&s, &p, &s.probes.f2, &s.probes.f1).unwrap();
        for (x, y) in ab.total.iter().zip(&ba.total) {
            assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0));
        }
        let c = a4_density_series(&s, &p, &e("3.5"), &s.probes.f2).unwrap();
        assert!(c.total.iter().all(|v| v.abs() <= 1e-12));
    }

    #[test]
    fn covariance_on_sphere() {
        let s = sphere4_stereo();
        let res = conformal_covariance_residual(&s, &P, &s.probes.f1, &s.probes.f2).unwrap();
        for (r, x) in res.residual.iter().zip(&res.expected) {
            assert!(*r <= 1e-8 * x.abs().max(1.0), "{res:?}");
        }
    }

    #[test]
    fn zero_perturbation_grid() {
        let s = random_smooth(6).with_perturbation(SymExprMatrix::zeros(4));
        let g = bimetric_invariant_grid(&s, &[0.1, 0.2, 0.3, 0.4], &s.probes.f1, &s.probes.f2).unwrap();
        for (j, row) in g.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                if j > 0 || l > 0 {
                    assert_eq!(*v, 0.0);
                }
            }
        }
        assert!(g[0][0] != 0.0);
    }
}
