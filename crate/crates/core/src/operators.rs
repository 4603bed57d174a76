//! Laplacian and conformal-Laplacian series applied to probe functions.
//!
//! Sign convention: `Δ = −g^{ij}(∂_i∂_j − Γ^k_ij ∂_k)`, so `Δ(x₁²) = −2` on
//! flat space.

use serde::Serialize;

use crate::expr::{ExprError, Func, ScalarFieldExpr};
use crate::geometry::{GeometryError, PointGeometry};
use crate::jets::SpatialJet;
use crate::scene::{MetricScene, SceneError};
use crate::series::EpsSeries;

/// Probe jets need two derivatives for Δ and three when Δ acts on ⟨df₁,df₂⟩.
pub const PROBE_DEGREE: usize = 3;

pub type OperatorSeriesApplication = EpsSeries<f64>;

#[derive(Debug, thiserror::Error)]
pub enum OperatorError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("in probe `{name}`: {source}")]
    Probe { name: String, source: ExprError },
    #[error("conformal factor must be positive, got {0:e}")]
    NonPositiveFactor(f64),
    #[error("{0}")]
    Unsupported(String),
}

impl From<SceneError> for OperatorError {
    fn from(e: SceneError) -> Self {
        OperatorError::Geometry(e.into())
    }
}

/// Conformal coupling `(n−2)/(4(n−1))`.
pub fn conformal_coupling(n: usize) -> f64 {
    (n as f64 - 2.0) / (4.0 * (n as f64 - 1.0))
}

pub fn probe_jet(name: &str, e: &ScalarFieldExpr, point: &[f64], degree: usize) -> Result<SpatialJet, OperatorError> {
    e.eval_jet(point, degree).map_err(|source| OperatorError::Probe {
        name: name.to_string(),
        source,
    })
}

/// `(Δh)[k] = Σ_{a+c=k} (−g^{ij}[a] ∂_i∂_j h[c] + V^m[a] ∂_m h[c])` with
/// `V^m = g^{ij}Γ^m_ij`. `h` is a series of jets of degree ≥ 2.
pub fn laplacian_apply(geo: &PointGeometry, h: &EpsSeries<SpatialJet>) -> EpsSeries<f64> {
    let n = geo.dim;
    EpsSeries::from_fn(geo.order, |k| {
        let mut s = 0.0;
        for a in 0..=k {
            let hc = h.coeff(k - a);
            if hc.is_zero() {
                continue;
            }
            let ginv = geo.inv(a);
            let v = geo.contracted_gamma(a);
            for i in 0..n {
                s += v[i] * hc.d(&[i]);
                for j in 0..n {
                    s -= ginv[(i, j)] * hc.d(&[i, j]);
                }
            }
        }
        s
    })
}

/// Δ-series applied to an ε-independent function.
pub fn laplacian_apply_fixed(geo: &PointGeometry, u: &SpatialJet) -> EpsSeries<f64> {
    laplacian_apply(geo, &EpsSeries::constant(u.clone(), geo.order))
}

/// `Δ̃_k u = p_k u + (n−2)/(4(n−1)) r_k u`.
pub fn conformal_laplacian_apply_fixed(geo: &PointGeometry, r: &EpsSeries<f64>, u: &SpatialJet) -> EpsSeries<f64> {
    let kappa = conformal_coupling(geo.dim);
    let p = laplacian_apply_fixed(geo, u);
    EpsSeries::from_fn(geo.order, |k| p.coeff(k) + kappa * r.coeff(k) * u.value())
}

pub fn laplacian_series_apply(
    scene: &MetricScene,
    point: &[f64],
    u: &ScalarFieldExpr,
) -> Result<OperatorSeriesApplication, OperatorError> {
    let geo = PointGeometry::at(scene, point)?;
    let uj = probe_jet("u", u, point, 2)?;
    Ok(laplacian_apply_fixed(&geo, &uj))
}

pub fn conformal_laplacian_series_apply(
    scene: &MetricScene,
    point: &[f64],
    u: &ScalarFieldExpr,
) -> Result<OperatorSeriesApplication, OperatorError> {
    let geo = PointGeometry::at(scene, point)?;
    let r = geo.scalar_curvature();
    let uj = probe_jet("u", u, point, 2)?;
    Ok(conformal_laplacian_apply_fixed(&geo, &r, &uj))
}

/// How the conformal factor enters the rescaled metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `ĝ = f·g`.
    Direct,
    /// `ĝ = f^{4/(n−2)}·g`.
    Yamabe,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Direct, Convention::Yamabe];

    pub fn name(self) -> &'static str {
        match self {
            Convention::Direct => "direct",
            Convention::Yamabe => "yamabe",
        }
    }

    /// Metric multiplier as an expression in f.
    pub fn metric_factor(self, f: &ScalarFieldExpr, n: usize) -> Result<ScalarFieldExpr, OperatorError> {
        match self {
            Convention::Direct => Ok(f.clone()),
            Convention::Yamabe => {
                if n <= 2 {
                    return Err(OperatorError::Unsupported(format!(
                        "yamabe convention needs n > 2, got {n}"
                    )));
                }
                let p = 4.0 / (n as f64 - 2.0);
                if p.fract() == 0.0 {
                    Ok(ScalarFieldExpr::PowI(Box::new(f.clone()), p as i32))
                } else {
                    Ok(ScalarFieldExpr::Call(
                        Func::Exp,
                        Box::new(ScalarFieldExpr::Mul(
                            Box::new(ScalarFieldExpr::constant(p)),
                            Box::new(ScalarFieldExpr::Call(Func::Log, Box::new(f.clone()))),
                        )),
                    ))
                }
            }
        }
    }
}

/// Per-order intertwining data for one convention.
#[derive(Debug, Clone, Serialize)]
pub struct IntertwiningResiduals {
    pub convention: Convention,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residual: Vec<f64>,
}

/// `f^{(n+2)/4}(Δ̃ at ĝ)_k u` versus `(Δ̃ at g)_k (f^{(n−2)/4}u)` per order.
pub fn intertwining_residuals(
    scene: &MetricScene,
    point: &[f64],
    u: &ScalarFieldExpr,
    convention: Convention,
) -> Result<IntertwiningResiduals, OperatorError> {
    let n = scene.dim;
    let f = scene.conformal_factor_at(point)?;
    let fj = probe_jet("conformal_factor", f, point, 2)?;
    if !(fj.value() > 0.0) {
        return Err(OperatorError::NonPositiveFactor(fj.value()));
    }
    let uj = probe_jet("u", u, point, 2)?;

    let scaled = scene.conformally_scaled(&convention.metric_factor(f, n)?);
    let geo_hat = PointGeometry::at(&scaled, point)?;
    let r_hat = geo_hat.scalar_curvature();
    let pre = fj.value().powf((n as f64 + 2.0) / 4.0);
    let lhs = conformal_laplacian_apply_fixed(&geo_hat, &r_hat, &uj).scale(pre);

    let geo = PointGeometry::at(scene, point)?;
    let r = geo.scalar_curvature();
    let weight = fj
        .try_powf((n as f64 - 2.0) / 4.0)
        .map_err(|e| OperatorError::Probe {
            name: "conformal_factor".into(),
            source: e.into(),
        })?;
    let rhs = conformal_laplacian_apply_fixed(&geo, &r, &(&weight * &uj));

    let residual = lhs
        .coeffs()
        .iter()
        .zip(rhs.coeffs())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(IntertwiningResiduals {
        convention,
        lhs: lhs.into_coeffs(),
        rhs: rhs.into_coeffs(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{euclidean4, random_smooth, sphere4_stereo, SymExprMatrix};

    fn e(s: &str) -> ScalarFieldExpr {
        ScalarFieldExpr::parse(s).unwrap()
    }

    #[test]
    fn flat_laplacian_values() {
        let s = euclidean4();
        let p = [0.3, 0.2, -0.1, 0.4];
        assert_eq!(laplacian_series_apply(&s, &p, &e("x1^2")).unwrap().coeffs(), &[-2.0, 0.0, 0.0]);
        assert_eq!(laplacian_series_apply(&s, &p, &e("x1")).unwrap().coeffs(), &[0.0, 0.0, 0.0]);
        assert_eq!(conformal_laplacian_series_apply(&s, &p, &e("x1^2")).unwrap().coeffs(), &[-2.0, 0.0, 0.0]);
    }

    #[test]
    fn sphere_conformal_laplacian_of_one() {
        let s = sphere4_stereo().with_perturbation(SymExprMatrix::zeros(4));
        let v = conformal_laplacian_series_apply(&s, &[0.1, 0.0, 0.2, -0.1], &e("1")).unwrap();
        assert!((v.coeffs()[0] - 2.0).abs() <= 1e-10);
        let z = conformal_laplacian_series_apply(&random_smooth(2), &[1.0, 2.0, 3.0, 4.0], &e("0")).unwrap();
        assert_eq!(z.coeffs(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn direct_convention_intertwines_at_every_order() {
        let s = random_smooth(5);
        let u = s.probes.u.clone();
        let res = intertwining_residuals(&s, &[0.4, 1.3, 2.2, 5.0], &u, Convention::Direct).unwrap();
        for (r, l) in res.residual.iter().zip(&res.lhs) {
            assert!(*r <= 1e-9 * l.abs().max(1.0), "{:?}", res);
        }
    }

    #[test]
    fn unit_factor_gives_zero_residual() {
        let s = random_smooth(1).with_conformal_factor(e("1"));
        for c in Convention::ALL {
            let res = intertwining_residuals(&s, &[0.4, 1.3, 2.2, 5.0], &s.probes.u, c).unwrap();
            assert!(res.residual.iter().all(|r| *r <= 1e-12), "{res:?}");
        }
    }
}
