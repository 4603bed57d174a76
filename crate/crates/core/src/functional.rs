//! Integrated densities on periodic 4-torus charts: the functional
//! `∫ f₀ A₄(f₁,f₂) dVol`, its ε-variations and a Hochschild coboundary check.
//!
//! Quadrature is the uniform periodic trapezoid rule. Nodes are split into
//! fixed-size chunks in lexicographic order; each chunk is summed pairwise and
//! the chunk sums are combined pairwise, so results do not depend on the number
//! of worker threads.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::connes::{a4_from_geometry, A4Series};
use crate::expr::ScalarFieldExpr;
use crate::geometry::{volume_density_series, PointGeometry, METRIC_DEGREE};
use crate::operators::{probe_jet, OperatorError, PROBE_DEGREE};
use crate::oracle::{OracleError, SingleMetric};
use crate::scene::MetricScene;
use crate::series::EpsSeries;

pub const DEFAULT_GRID: usize = 16;
const CHUNK: usize = 4096;

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("scene `{0}` is not periodic; integral quantities need a torus chart")]
    NotPeriodic(String),
    #[error("the density functional needs dimension 4, scene has {0}")]
    Dimension(usize),
    #[error("grid size must be at least 2, got {0}")]
    Grid(usize),
    #[error("non-finite density value at node {node:?}")]
    NonFinite { node: Vec<f64> },
    #[error("at node {node:?}: {source}")]
    Node {
        node: Vec<f64>,
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

/// Uniform periodic grid with `m` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureGrid {
    pub m: usize,
    pub dim: usize,
    pub period: f64,
}

impl QuadratureGrid {
    pub fn new(m: usize, dim: usize, period: f64) -> Result<Self, FunctionalError> {
        if m < 2 {
            return Err(FunctionalError::Grid(m));
        }
        Ok(QuadratureGrid { m, dim, period })
    }

    pub fn for_scene(scene: &MetricScene, m: usize) -> Result<Self, FunctionalError> {
        if !scene.periodic {
            return Err(FunctionalError::NotPeriodic(scene.label()));
        }
        Self::new(m, scene.dim, scene.period)
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weight of every node: `(period/m)^dim`.
    pub fn weight(&self) -> f64 {
        (self.period / self.m as f64).powi(self.dim as i32)
    }

    /// Node `idx` in lexicographic order (last coordinate fastest).
    pub fn node(&self, mut idx: usize, out: &mut [f64]) {
        let step = self.period / self.m as f64;
        for d in (0..self.dim).rev() {
            out[d] = (idx % self.m) as f64 * step;
            idx /= self.m;
        }
    }
}

/// Recursive pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Integrates `ncomp` node values produced by `f` (which writes into its
/// output slice). Deterministic for any thread count.
pub fn integrate_components<F>(grid: &QuadratureGrid, ncomp: usize, f: F) -> Result<Vec<f64>, FunctionalError>
where
    F: Fn(&[f64], &mut [f64]) -> Result<(), FunctionalError> + Sync,
{
    let total = grid.len();
    let nchunks = total.div_ceil(CHUNK);
    let chunk_sums: Vec<Vec<f64>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let len = end - start;
            let mut vals = vec![0.0; ncomp * len];
            let mut node = vec![0.0; grid.dim];
            let mut out = vec![0.0; ncomp];
            for (slot, idx) in (start..end).enumerate() {
                grid.node(idx, &mut node);
                f(&node, &mut out)?;
                if out.iter().any(|v| !v.is_finite()) {
                    return Err(FunctionalError::NonFinite { node: node.clone() });
                }
                for (q, v) in out.iter().enumerate() {
                    vals[q * len + slot] = *v;
                }
            }
            Ok((0..ncomp).map(|q| pairwise_sum(&vals[q * len..(q + 1) * len])).collect())
        })
        .collect::<Result<_, FunctionalError>>()?;
    let w = grid.weight();
    Ok((0..ncomp)
        .map(|q| {
            let col: Vec<f64> = chunk_sums.iter().map(|s| s[q]).collect();
            w * pairwise_sum(&col)
        })
        .collect())
}

fn node_err(node: &[f64], e: impl std::error::Error + Send + Sync + 'static) -> FunctionalError {
    FunctionalError::Node {
        node: node.to_vec(),
        source: Box::new(e),
    }
}

/// Coefficient-wise quadrature of `density · √det ḡ`.
pub fn integrate_density_series<F, E>(
    scene: &MetricScene,
    grid: &QuadratureGrid,
    order: usize,
    density: F,
) -> Result<EpsSeries<f64>, FunctionalError>
where
    F: Fn(&[f64]) -> Result<EpsSeries<f64>, E> + Sync,
    E: std::error::Error + Send + Sync + 'static,
{
    if !scene.periodic {
        return Err(FunctionalError::NotPeriodic(scene.label()));
    }
    let vals = integrate_components(grid, order + 1, |x, out| {
        let d = density(x).map_err(|e| node_err(x, e))?;
        let base = scene.base.eval(x).map_err(|e| node_err(x, e))?;
        let w = base.determinant().sqrt();
        for (o, c) in out.iter_mut().zip(d.coeffs()) {
            *o = c * w;
        }
        Ok(())
    })?;
    Ok(EpsSeries::from_fn(order, |k| vals[k]))
}

/// Integrated expansion of `∫ f₀ A₄(f₁,f₂) dVol_{ḡ+εg̿}`.
#[derive(Debug, Clone, Serialize)]
pub struct WresVariationReport {
    pub grid: usize,
    pub nodes: usize,
    /// `[W₀, W₁, W₂, …]`, the ε-coefficients of the integral.
    pub series: Vec<f64>,
    pub value: f64,
    /// `W₁`.
    pub first_variation: f64,
    /// `2·W₂`.
    pub second_variation: f64,
    /// `invariants[j][l] = ∫ f₀ A₄^j c_l dVol_ḡ`; order k collects `j + l = k`.
    pub invariants: Vec<Vec<f64>>,
    /// Per-order integrals of the four A₄ components against the volume series,
    /// in the order ⅓rt, a, b, −½d.
    pub components: Vec<[f64; 4]>,
}

fn check_density_scene(scene: &MetricScene) -> Result<(), FunctionalError> {
    if !scene.periodic {
        return Err(FunctionalError::NotPeriodic(scene.label()));
    }
    if scene.dim != 4 {
        return Err(FunctionalError::Dimension(scene.dim));
    }
    Ok(())
}

/// Per-node A₄ series and volume coefficients.
fn node_density(
    scene: &MetricScene,
    x: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<(A4Series, EpsSeries<f64>, f64), FunctionalError> {
    let pair = scene.eval_metric_pair(x, METRIC_DEGREE).map_err(|e| node_err(x, e))?;
    let geo = PointGeometry::new(pair, scene.order).map_err(|e| node_err(x, e))?;
    let r = geo.scalar_curvature();
    let j1 = probe_jet("f1", f1, x, PROBE_DEGREE).map_err(|e| node_err(x, e))?;
    let j2 = probe_jet("f2", f2, x, PROBE_DEGREE).map_err(|e| node_err(x, e))?;
    let a4 = a4_from_geometry(&geo, &r, &j1, &j2);
    let vol = volume_density_series(&geo.pair, scene.order).map_err(|e| node_err(x, e))?;
    Ok((a4, vol.coeffs, vol.sqrt_det_base))
}

pub fn wres_variations(
    scene: &MetricScene,
    grid: &QuadratureGrid,
    f0: &ScalarFieldExpr,
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<WresVariationReport, FunctionalError> {
    check_density_scene(scene)?;
    let n1 = scene.order + 1;
    // layout: invariants n1×n1, then components n1×4
    let ncomp = n1 * n1 + 4 * n1;
    let vals = integrate_components(grid, ncomp, |x, out| {
        let w0 = f0.eval(x).map_err(|e| node_err(x, e))?;
        if w0 == 0.0 {
            out.iter_mut().for_each(|o| *o = 0.0);
            return Ok(());
        }
        let (a4, c, sqrt_det) = node_density(scene, x, f1, f2)?;
        let w = w0 * sqrt_det;
        for j in 0..n1 {
            for l in 0..n1 {
                out[j * n1 + l] = w * a4.total[j] * c.coeffs()[l];
            }
        }
        let comps = [&a4.rt_third, &a4.a, &a4.b, &a4.d];
        for k in 0..n1 {
            for (q, comp) in comps.iter().enumerate() {
                let scale = if q == 3 { -0.5 } else { 1.0 };
                let mut s = 0.0;
                for j in 0..=k {
                    s += comp[j] * c.coeffs()[k - j];
                }
                out[n1 * n1 + 4 * k + q] = w * scale * s;
            }
        }
        Ok(())
    })?;
    let invariants: Vec<Vec<f64>> = (0..n1).map(|j| vals[j * n1..(j + 1) * n1].to_vec()).collect();
    let series: Vec<f64> = (0..n1)
        .map(|k| (0..=k).map(|j| invariants[j][k - j]).sum())
        .collect();
    let components = (0..n1)
        .map(|k| {
            let b = n1 * n1 + 4 * k;
            [vals[b], vals[b + 1], vals[b + 2], vals[b + 3]]
        })
        .collect();
    Ok(WresVariationReport {
        grid: grid.m,
        nodes: grid.len(),
        value: series[0],
        first_variation: series.get(1).copied().unwrap_or(0.0),
        second_variation: 2.0 * series.get(2).copied().unwrap_or(0.0),
        series,
        invariants,
        components,
    })
}

/// `∫ f₀ A₄(f₁,f₂) dVol_g` for the collapsed metric `g = ḡ + εg̿`, at every
/// ε in `eps`, through the single-metric oracle path.
pub fn integrate_exact_many(
    scene: &MetricScene,
    grid: &QuadratureGrid,
    f0: &ScalarFieldExpr,
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
    eps: &[f64],
) -> Result<Vec<f64>, FunctionalError> {
    check_density_scene(scene)?;
    integrate_components(grid, eps.len(), |x, out| {
        let w0 = f0.eval(x).map_err(|e| node_err(x, e))?;
        if w0 == 0.0 {
            out.iter_mut().for_each(|o| *o = 0.0);
            return Ok(());
        }
        let pair = scene.eval_metric_pair(x, 2).map_err(|e| node_err(x, e))?;
        let j1 = f1.eval_jet(x, 3).map_err(|e| node_err(x, e))?;
        let j2 = f2.eval_jet(x, 3).map_err(|e| node_err(x, e))?;
        for (o, &e) in out.iter_mut().zip(eps) {
            let sm = SingleMetric::new(&pair, e).map_err(|err: OracleError| node_err(x, err))?;
            *o = w0 * sm.a4(&j1, &j2) * sm.sqrt_det();
        }
        Ok(())
    })
}

/// `bφ(f₀,f₁,f₂,f₃)` with `φ(a,b,c) = ∫ a A₄(b,c) dVol` at ε-order `order`.
#[derive(Debug, Clone, Serialize)]
pub struct HochschildResidual {
    pub grid: usize,
    pub order: usize,
    pub residual: f64,
    /// The four signed terms `φ(f₀f₁,f₂,f₃), −φ(f₀,f₁f₂,f₃), φ(f₀,f₁,f₂f₃), −φ(f₃f₀,f₁,f₂)`.
    pub terms: [f64; 4],
    /// `∫ Σ|term densities|`, the scale used for the rounding floor.
    pub magnitude: f64,
}

fn mul(a: &ScalarFieldExpr, b: &ScalarFieldExpr) -> ScalarFieldExpr {
    ScalarFieldExpr::Mul(Box::new(a.clone()), Box::new(b.clone()))
}

pub fn hochschild_residual(
    scene: &MetricScene,
    grid: &QuadratureGrid,
    probes: [&ScalarFieldExpr; 4],
    order: usize,
) -> Result<HochschildResidual, FunctionalError> {
    if order > scene.order {
        return Err(FunctionalError::Node {
            node: vec![],
            source: format!("order {order} exceeds scene order {}", scene.order).into(),
        });
    }
    Ok(hochschild_residuals(scene, grid, probes)?.swap_remove(order))
}

/// [`hochschild_residual`] at every ε-order `0..=scene.order` from one pass over the grid.
pub fn hochschild_residuals(
    scene: &MetricScene,
    grid: &QuadratureGrid,
    probes: [&ScalarFieldExpr; 4],
) -> Result<Vec<HochschildResidual>, FunctionalError> {
    check_density_scene(scene)?;
    let n1 = scene.order + 1;
    let [f0, f1, f2, f3] = probes;
    let f1f2 = mul(f1, f2);
    let f2f3 = mul(f2, f3);
    let vals = integrate_components(grid, 6 * n1, |x, out| {
        let pair = scene.eval_metric_pair(x, METRIC_DEGREE).map_err(|e| node_err(x, e))?;
        let geo = PointGeometry::new(pair, scene.order).map_err(|e| node_err(x, e))?;
        let r = geo.scalar_curvature();
        let vol = volume_density_series(&geo.pair, scene.order).map_err(|e| node_err(x, e))?;
        let jet = |name: &str, e: &ScalarFieldExpr| -> Result<_, FunctionalError> {
            probe_jet(name, e, x, PROBE_DEGREE).map_err(|err: OperatorError| node_err(x, err))
        };
        let (j1, j2, j3) = (jet("f1", f1)?, jet("f2", f2)?, jet("f3", f3)?);
        let (j12, j23) = (jet("f1f2", &f1f2)?, jet("f2f3", &f2f3)?);
        let v0 = f0.eval(x).map_err(|e| node_err(x, e))?;
        let (v1, v3) = (j1.value(), j3.value());
        let w = vol.sqrt_det_base;
        let a = [
            (w * v0 * v1, a4_from_geometry(&geo, &r, &j2, &j3)),
            (-w * v0, a4_from_geometry(&geo, &r, &j12, &j3)),
            (w * v0, a4_from_geometry(&geo, &r, &j1, &j23)),
            (-w * v3 * v0, a4_from_geometry(&geo, &r, &j1, &j2)),
        ];
        let c = vol.coeffs.coeffs();
        for k in 0..n1 {
            let slot = &mut out[6 * k..6 * k + 6];
            for (q, (scale, a4)) in a.iter().enumerate() {
                slot[q] = scale * (0..=k).map(|j| a4.total[j] * c[k - j]).sum::<f64>();
            }
            slot[4] = slot[..4].iter().sum();
            slot[5] = slot[..4].iter().map(|v| v.abs()).sum();
        }
        Ok(())
    })?;
    Ok((0..n1)
        .map(|k| {
            let v = &vals[6 * k..6 * k + 6];
            HochschildResidual {
                grid: grid.m,
                order: k,
                residual: v[4],
                terms: [v[0], v[1], v[2], v[3]],
                magnitude: v[5],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{euclidean4, torus_bump, SymExprMatrix};
    use std::f64::consts::PI;

    fn flat_torus() -> MetricScene {
        let mut s = euclidean4();
        s.periodic = true;
        s
    }

    fn e(s: &str) -> ScalarFieldExpr {
        ScalarFieldExpr::parse(s).unwrap()
    }

    #[test]
    fn quadrature_of_constants_and_low_modes() {
        let s = flat_torus();
        let g = QuadratureGrid::for_scene(&s, 8).unwrap();
        let v = integrate_density_series(&s, &g, 2, |_| Ok::<_, OperatorError>(EpsSeries::constant(1.0, 2))).unwrap();
        let vol = (2.0 * PI).powi(4);
        assert!((v.coeffs()[0] - vol).abs() <= 1e-13 * vol);
        assert_eq!(&v.coeffs()[1..], &[0.0, 0.0]);
        let sin2 = e("sin(x1)^2");
        let v = integrate_density_series(&s, &g, 2, |x| {
            Ok::<_, crate::expr::ExprError>(EpsSeries::constant(sin2.eval(x)?, 2))
        })
        .unwrap();
        assert!((v.coeffs()[0] - vol / 2.0).abs() <= 1e-12 * vol);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499500.0);
    }

    #[test]
    fn non_periodic_rejected() {
        assert!(matches!(
            QuadratureGrid::for_scene(&euclidean4(), 8),
            Err(FunctionalError::NotPeriodic(_))
        ));
    }

    #[test]
    fn trivial_variations() {
        let s = torus_bump().with_perturbation(SymExprMatrix::zeros(4));
        let g = QuadratureGrid::for_scene(&s, 6).unwrap();
        let rep = wres_variations(&s, &g, &s.probes.f0, &s.probes.f1, &s.probes.f2).unwrap();
        assert_eq!(rep.first_variation, 0.0);
        assert_eq!(rep.second_variation, 0.0);
        let s = torus_bump();
        let rep = wres_variations(&s, &g, &e("0"), &s.probes.f1, &s.probes.f2).unwrap();
        assert_eq!(rep.series, vec![0.0; 3]);
    }
}
