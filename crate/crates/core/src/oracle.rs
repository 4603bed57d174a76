//! Independent verification paths.
//!
//! * [`extract_series_fd`] recovers ε-series coefficients from samples of an
//!   evaluator by central differences with one Richardson level.
//! * [`SingleMetric`] evaluates r, Δ, Δ̃, the A₄ components and volume ratios
//!   for one numeric metric `ḡ + εg̿`. It shares only the jet and scene
//!   modules with the series pipeline: no `EpsSeries`, no series matrix
//!   inverse, and different (but equivalent) formulas: the Laplacian is taken
//!   in divergence form and the curvature via the Ricci tensor.
//! * [`spatial_fd_check`] validates jets against finite differences in space.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{ExprError, ScalarFieldExpr};
use crate::jets::{JetError, JetLayout, SpatialJet};
use crate::scene::{ChartPoint, MetricPair, MetricScene, Probes, SceneError};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_SHRINKS: usize = 4;
/// Pivot magnitude below which the oracle's Gauss–Jordan reports singularity.
pub const PIVOT_FLOOR: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("evaluator failed at eps = {eps}: {message}")]
    Evaluator { eps: f64, message: String },
    #[error("order {0} not supported by the finite-difference extractor (max 2)")]
    Order(usize),
    #[error("metric at eps = {eps} is singular or not positive definite (pivot {pivot:e})")]
    Singular { eps: f64, pivot: f64 },
    #[error("no SPD-safe step found: g ± h·g̿ fails for h = {0:e}")]
    NoSafeStep(f64),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Coefficients with per-coefficient error estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesExtraction {
    pub coeffs: Vec<f64>,
    pub errors: Vec<f64>,
    pub step: f64,
    pub richardson_levels: usize,
}

/// ε values sampled by [`extract_series_fd_batch`], in evaluation order.
pub fn fd_samples(h: f64) -> [f64; 5] {
    [0.0, h, -h, 0.5 * h, -0.5 * h]
}

/// Extraction from the five samples `f(0), f(±h), f(±h/2)`.
pub fn extract_from_samples(samples: &[f64; 5], order: usize, h: f64) -> Result<SeriesExtraction, OracleError> {
    if order == 0 || order > 2 {
        return Err(OracleError::Order(order));
    }
    let [f0, fp, fm, fp2, fm2] = *samples;
    let d1 = |a: f64, b: f64, s: f64| (a - b) / (2.0 * s);
    let d2 = |a: f64, b: f64, s: f64| (a - 2.0 * f0 + b) / (s * s);
    let (d1h, d1h2) = (d1(fp, fm, h), d1(fp2, fm2, 0.5 * h));
    let c1 = (4.0 * d1h2 - d1h) / 3.0;
    let mut coeffs = vec![f0, c1];
    let mut errors = vec![0.0, (c1 - d1h2).abs()];
    if order == 2 {
        let (d2h, d2h2) = (d2(fp, fm, h), d2(fp2, fm2, 0.5 * h));
        let c2 = 0.5 * (4.0 * d2h2 - d2h) / 3.0;
        coeffs.push(c2);
        errors.push((c2 - 0.5 * d2h2).abs());
    }
    Ok(SeriesExtraction {
        coeffs,
        errors,
        step: h,
        richardson_levels: 1,
    })
}

/// `eval_many` receives all ε samples at once (see [`fd_samples`]).
pub fn extract_series_fd_batch<E: std::fmt::Display>(
    eval_many: impl FnOnce(&[f64]) -> Result<Vec<f64>, E>,
    order: usize,
    h: f64,
) -> Result<SeriesExtraction, OracleError> {
    let eps = fd_samples(h);
    let vals = eval_many(&eps).map_err(|e| OracleError::Evaluator {
        eps: f64::NAN,
        message: e.to_string(),
    })?;
    let samples: [f64; 5] = vals.try_into().map_err(|_| OracleError::Evaluator {
        eps: f64::NAN,
        message: "evaluator returned the wrong number of samples".into(),
    })?;
    extract_from_samples(&samples, order, h)
}

pub fn extract_series_fd<E: std::fmt::Display>(
    evaluator: impl Fn(f64) -> Result<f64, E>,
    order: usize,
    h: f64,
) -> Result<SeriesExtraction, OracleError> {
    let eps = fd_samples(h);
    let mut samples = [0.0; 5];
    for (s, &e) in samples.iter_mut().zip(&eps) {
        *s = evaluator(e).map_err(|err| OracleError::Evaluator {
            eps: e,
            message: err.to_string(),
        })?;
    }
    extract_from_samples(&samples, order, h)
}

/// Halves `h` (at most [`MAX_SHRINKS`] times) until `ḡ ± hg̿` is SPD at every point.
pub fn safe_step(scene: &MetricScene, points: &[ChartPoint], h: f64) -> Result<f64, OracleError> {
    let mut step = h;
    for _ in 0..=MAX_SHRINKS {
        if scene.is_spd_at_eps(step, points)? && scene.is_spd_at_eps(-step, points)? {
            return Ok(step);
        }
        step *= 0.5;
    }
    Err(OracleError::NoSafeStep(step * 2.0))
}

type Jets = Vec<SpatialJet>;

/// Gauss–Jordan with partial pivoting on jet entries; returns the inverse and
/// the determinant.
fn gauss_jordan(mut a: Vec<Jets>, eps: f64) -> Result<(Vec<Jets>, SpatialJet), OracleError> {
    let n = a.len();
    let layout = a[0][0].layout();
    let mut inv: Vec<Jets> = (0..n)
        .map(|i| (0..n).map(|j| SpatialJet::constant_in(layout, if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    let mut det = SpatialJet::constant_in(layout, 1.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].value().abs().total_cmp(&a[y][col].value().abs()))
            .unwrap();
        let pv = a[piv][col].value();
        if pv.abs() < PIVOT_FLOOR {
            return Err(OracleError::Singular { eps, pivot: pv });
        }
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        det = &det * &a[col][col];
        let r = a[col][col].try_recip()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &r;
            inv[col][j] = &inv[col][j] * &r;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone();
            for j in 0..n {
                let t = &factor * &a[col][j];
                a[i][j].axpy(-1.0, &t);
                let t = &factor * &inv[col][j];
                inv[i][j].axpy(-1.0, &t);
            }
        }
    }
    Ok((inv, det))
}

/// All quantities the oracle can evaluate for one numeric metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    ScalarCurvature,
    Laplacian,
    ConformalLaplacian,
    GradientPairing,
    LaplacianOfPairing,
    HessianPairing,
    LaplacianProduct,
    A4,
    SqrtDetRatio,
    InverseEntry(usize, usize),
}

/// Geometry of the single metric `g = ḡ + εg̿` at one point.
pub struct SingleMetric {
    pub eps: f64,
    n: usize,
    /// g⁻¹ with jets of degree 2.
    inv: Vec<Jets>,
    /// √det g, degree 2.
    sqrt_det: SpatialJet,
    /// Γ^k_ij, degree 1, indexed `[k][i][j]`.
    gamma: Vec<Vec<Jets>>,
    sqrt_det_base: f64,
}

impl SingleMetric {
    /// Collapses the pair at a numeric ε. Jets must have degree ≥ 2.
    pub fn new(pair: &MetricPair, eps: f64) -> Result<Self, OracleError> {
        let n = pair.dim();
        let g: Vec<Jets> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = pair.base[(i, j)].clone();
                        e.axpy(eps, &pair.perturbation[(i, j)]);
                        e
                    })
                    .collect()
            })
            .collect();
        // positive definiteness via unpivoted elimination pivots (Sylvester)
        let mut m: Vec<Vec<f64>> = g.iter().map(|row| row.iter().map(SpatialJet::value).collect()).collect();
        for c in 0..n {
            let p = m[c][c];
            if !(p > 0.0) {
                return Err(OracleError::Singular { eps, pivot: p });
            }
            for i in c + 1..n {
                let f = m[i][c] / p;
                for j in c..n {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
        let (inv, det) = gauss_jordan(g.clone(), eps)?;
        let sqrt_det = det.try_sqrt()?;
        let (_, det_base) = gauss_jordan(
            (0..n).map(|i| (0..n).map(|j| pair.base[(i, j)].truncate(0)).collect()).collect(),
            0.0,
        )?;
        // first derivatives of the metric, degree 1
        let dg: Vec<Vec<Jets>> = (0..n)
            .map(|m| (0..n).map(|i| (0..n).map(|j| g[i][j].differentiate(m)).collect()).collect())
            .collect();
        let inv1: Vec<Jets> = inv.iter().map(|row| row.iter().map(|e| e.truncate(1)).collect()).collect();
        let gamma = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut acc = inv1[0][0].zero_like();
                                for l in 0..n {
                                    let mut s = dg[i][j][l].clone();
                                    s.axpy(1.0, &dg[j][i][l]);
                                    s.axpy(-1.0, &dg[l][i][j]);
                                    inv1[k][l].mul_add_into(&s, &mut acc);
                                }
                                acc.scale(0.5)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(SingleMetric {
            eps,
            n,
            inv,
            sqrt_det,
            gamma,
            sqrt_det_base: det_base.value().sqrt(),
        })
    }

    pub fn at(scene: &MetricScene, point: &[f64], eps: f64) -> Result<Self, OracleError> {
        let pair = scene.eval_metric_pair(point, 2)?;
        Self::new(&pair, eps)
    }

    pub fn inverse_entry(&self, i: usize, j: usize) -> f64 {
        self.inv[i][j].value()
    }

    pub fn sqrt_det(&self) -> f64 {
        self.sqrt_det.value()
    }

    pub fn sqrt_det_ratio(&self) -> f64 {
        self.sqrt_det.value() / self.sqrt_det_base
    }

    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[k][i][j].value()
    }

    /// `r = g^{jl} R_jl` with
    /// `R_jl = ∂_kΓ^k_jl − ∂_lΓ^k_jk + Γ^k_km Γ^m_jl − Γ^k_lm Γ^m_jk`.
    pub fn scalar_curvature(&self) -> f64 {
        let n = self.n;
        let gv = |k: usize, i: usize, j: usize| self.gamma[k][i][j].value();
        let mut r = 0.0;
        for j in 0..n {
            for l in 0..n {
                let mut ric = 0.0;
                for k in 0..n {
                    ric += self.gamma[k][j][l].d(&[k]) - self.gamma[k][j][k].d(&[l]);
                    for m in 0..n {
                        ric += gv(k, k, m) * gv(m, j, l) - gv(k, l, m) * gv(m, j, k);
                    }
                }
                r += self.inv[j][l].value() * ric;
            }
        }
        r
    }

    /// Divergence form `Δh = −(1/√g) ∂_i(√g g^{ij} ∂_j h)`; `h` needs degree ≥ 2.
    pub fn laplacian(&self, h: &SpatialJet) -> f64 {
        let n = self.n;
        let w = self.sqrt_det.truncate(1);
        let mut div = 0.0;
        for i in 0..n {
            let mut flux = w.zero_like();
            for j in 0..n {
                let dh = h.differentiate(j).truncate(1);
                if dh.is_zero() {
                    continue;
                }
                self.inv[i][j].truncate(1).mul_add_into(&dh, &mut flux);
            }
            div += (&w * &flux).d(&[i]);
        }
        -div / self.sqrt_det.value()
    }

    pub fn conformal_laplacian(&self, u: &SpatialJet) -> f64 {
        let n = self.n as f64;
        self.laplacian(u) + (n - 2.0) / (4.0 * (n - 1.0)) * self.scalar_curvature() * u.value()
    }

    /// `⟨df₁,df₂⟩` as a jet of degree `min(deg f) − 1` (capped at 2).
    fn pairing_jet(&self, f1: &SpatialJet, f2: &SpatialJet) -> SpatialJet {
        let n = self.n;
        let deg = (f1.degree().min(f2.degree()) - 1).min(2);
        let mut acc = f1.differentiate(0).truncate(deg).zero_like();
        for j in 0..n {
            let a = f1.differentiate(j).truncate(deg);
            for l in 0..n {
                let b = f2.differentiate(l).truncate(deg);
                acc = &acc + &(&(&a * &b) * &self.inv[j][l].truncate(deg));
            }
        }
        acc
    }

    pub fn gradient_pairing(&self, f1: &SpatialJet, f2: &SpatialJet) -> f64 {
        self.pairing_jet(f1, f2).value()
    }

    pub fn laplacian_of_pairing(&self, f1: &SpatialJet, f2: &SpatialJet) -> f64 {
        self.laplacian(&self.pairing_jet(f1, f2))
    }

    /// `⟨∇df₁,∇df₂⟩ = g^{ip} g^{jq} H₁_ij H₂_pq`.
    pub fn hessian_pairing(&self, f1: &SpatialJet, f2: &SpatialJet) -> f64 {
        let n = self.n;
        let hess = |f: &SpatialJet| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut s = f.d(&[i, j]);
                            for k in 0..n {
                                s -= self.christoffel(k, i, j) * f.d(&[k]);
                            }
                            s
                        })
                        .collect()
                })
                .collect()
        };
        let (h1, h2) = (hess(f1), hess(f2));
        let g = |i: usize, j: usize| self.inv[i][j].value();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if h1[i][j] == 0.0 {
                    continue;
                }
                for p in 0..n {
                    for q in 0..n {
                        s += h1[i][j] * g(i, p) * g(j, q) * h2[p][q];
                    }
                }
            }
        }
        s
    }

    pub fn laplacian_product(&self, f1: &SpatialJet, f2: &SpatialJet) -> f64 {
        self.laplacian(f1) * self.laplacian(f2)
    }

    pub fn a4(&self, f1: &SpatialJet, f2: &SpatialJet) -> f64 {
        self.scalar_curvature() * self.gradient_pairing(f1, f2) / 3.0
            + self.laplacian_of_pairing(f1, f2)
            + self.hessian_pairing(f1, f2)
            - 0.5 * self.laplacian_product(f1, f2)
    }

    pub fn quantity(&self, q: Quantity, probes: &ProbeJets) -> f64 {
        let (f1, f2, u) = (&probes.f1, &probes.f2, &probes.u);
        match q {
            Quantity::ScalarCurvature => self.scalar_curvature(),
            Quantity::Laplacian => self.laplacian(u),
            Quantity::ConformalLaplacian => self.conformal_laplacian(u),
            Quantity::GradientPairing => self.gradient_pairing(f1, f2),
            Quantity::LaplacianOfPairing => self.laplacian_of_pairing(f1, f2),
            Quantity::HessianPairing => self.hessian_pairing(f1, f2),
            Quantity::LaplacianProduct => self.laplacian_product(f1, f2),
            Quantity::A4 => self.a4(f1, f2),
            Quantity::SqrtDetRatio => self.sqrt_det_ratio(),
            Quantity::InverseEntry(i, j) => self.inverse_entry(i, j),
        }
    }
}

/// Probe jets at degree 3.
#[derive(Debug, Clone)]
pub struct ProbeJets {
    pub f0: SpatialJet,
    pub f1: SpatialJet,
    pub f2: SpatialJet,
    pub u: SpatialJet,
}

impl ProbeJets {
    pub fn at(probes: &Probes, point: &[f64]) -> Result<Self, OracleError> {
        Ok(ProbeJets {
            f0: probes.f0.eval_jet(point, 3)?,
            f1: probes.f1.eval_jet(point, 3)?,
            f2: probes.f2.eval_jet(point, 3)?,
            u: probes.u.eval_jet(point, 3)?,
        })
    }
}

/// Value of `quantity` for the collapsed metric `ḡ + εg̿` at `point`.
pub fn exact_at_eps(
    scene: &MetricScene,
    eps: f64,
    quantity: Quantity,
    point: &[f64],
    probes: &Probes,
) -> Result<f64, OracleError> {
    let sm = SingleMetric::at(scene, point, eps)?;
    let pj = ProbeJets::at(probes, point)?;
    Ok(sm.quantity(quantity, &pj))
}

/// Extracts the ε-series of `quantity` at `point` (order ≤ 2).
pub fn oracle_series(
    scene: &MetricScene,
    point: &[f64],
    quantity: Quantity,
    probes: &Probes,
    h: f64,
) -> Result<SeriesExtraction, OracleError> {
    let pair = scene.eval_metric_pair(point, 2)?;
    let pj = ProbeJets::at(probes, point)?;
    let step = safe_step(scene, &[point.to_vec()], h)?;
    extract_series_fd(
        |eps| SingleMetric::new(&pair, eps).map(|sm| sm.quantity(quantity, &pj)),
        scene.order.min(2),
        step,
    )
}

/// Like [`oracle_series`] for several quantities sharing the five metric samples.
pub fn oracle_series_many(
    scene: &MetricScene,
    point: &[f64],
    quantities: &[Quantity],
    probes: &Probes,
    h: f64,
) -> Result<Vec<SeriesExtraction>, OracleError> {
    let pair = scene.eval_metric_pair(point, 2)?;
    let pj = ProbeJets::at(probes, point)?;
    let step = safe_step(scene, &[point.to_vec()], h)?;
    let mut table = vec![[0.0; 5]; quantities.len()];
    for (s, &eps) in fd_samples(step).iter().enumerate() {
        let sm = SingleMetric::new(&pair, eps)?;
        for (row, &q) in table.iter_mut().zip(quantities) {
            row[s] = sm.quantity(q, &pj);
        }
    }
    table
        .iter()
        .map(|row| extract_from_samples(row, scene.order.min(2), step))
        .collect()
}

/// Per-derivative-order base steps: the twice Richardson-corrected tensor
/// stencils have truncation O(h⁶) and rounding O(u/h^k), so higher orders need larger h.
pub const SPATIAL_STEPS: [f64; 4] = [0.0, 2e-3, 2e-2, 8e-2];

fn stencil_1d(order: u8) -> &'static [(i32, f64)] {
    // central stencils on half-steps s = h/2 measured in units of h
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => unreachable!("spatial check supports derivative order <= 3"),
    }
}

fn fd_partial(expr: &ScalarFieldExpr, point: &[f64], alpha: &[u8], h: f64) -> Result<f64, ExprError> {
    let mut total = 0.0;
    let dim = point.len();
    let stencils: Vec<&[(i32, f64)]> = alpha.iter().map(|&a| stencil_1d(a)).collect();
    let mut idx = vec![0usize; dim];
    let mut x = point.to_vec();
    loop {
        let mut w = 1.0;
        for d in 0..dim {
            let (off, c) = stencils[d][idx[d]];
            w *= c;
            x[d] = point[d] + off as f64 * h;
        }
        total += w * expr.eval(&x)?;
        let mut d = 0;
        loop {
            if d == dim {
                let k: i32 = alpha.iter().map(|&a| a as i32).sum();
                return Ok(total / h.powi(k));
            }
            idx[d] += 1;
            if idx[d] < stencils[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Worst `|fd − jet| / max(1, |jet|)` over all multi-indices of order 1..=degree.
pub fn spatial_fd_check(expr: &ScalarFieldExpr, point: &[f64], degree: usize) -> Result<f64, OracleError> {
    if degree == 0 || degree > 3 {
        return Err(OracleError::Order(degree));
    }
    let jet = expr.eval_jet(point, degree)?;
    let layout = JetLayout::get(point.len(), degree)?;
    let mut worst: f64 = 0.0;
    for k in 1..layout.len() {
        let alpha = layout.exponent(k);
        let ord = layout.order(k);
        let h = SPATIAL_STEPS[ord];
        let [d1, d2, d4] = [1.0, 0.5, 0.25].map(|s| fd_partial(expr, point, alpha, s * h));
        let (d1, d2, d4) = (d1?, d2?, d4?);
        let (r1, r2) = ((4.0 * d2 - d1) / 3.0, (4.0 * d4 - d2) / 3.0);
        let rich = (16.0 * r2 - r1) / 15.0;
        let exact = jet.partials()[k];
        worst = worst.max((rich - exact).abs() / exact.abs().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{euclidean4, sphere4_stereo};

    #[test]
    fn polynomial_extraction_is_exact() {
        // stencils are exact for quadratics, so only rounding remains: u/h² per level
        let sq = |e: f64| Ok::<_, String>((1.0 + e) * (1.0 + e));
        let ex = extract_series_fd(sq, 2, 0.1).unwrap();
        assert!((ex.coeffs[0] - 1.0).abs() <= 1e-12);
        assert!((ex.coeffs[1] - 2.0).abs() <= 1e-10);
        assert!((ex.coeffs[2] - 1.0).abs() <= 1e-10);
        let ex = extract_series_fd(sq, 2, DEFAULT_STEP).unwrap();
        assert!((ex.coeffs[1] - 2.0).abs() <= 1e-10);
        assert!((ex.coeffs[2] - 1.0).abs() <= 2e-9);
        let ex = extract_series_fd(|_| Ok::<_, String>(7.0), 2, 1e-3).unwrap();
        assert_eq!(ex.coeffs, vec![7.0, 0.0, 0.0]);
        assert!(extract_series_fd(|_| Ok::<_, String>(1.0), 3, 1e-3).is_err());
    }

    #[test]
    fn error_estimates_bound_true_error() {
        let ex = extract_series_fd(|e: f64| Ok::<_, String>(e.exp()), 2, 1e-2).unwrap();
        assert!((ex.coeffs[1] - 1.0).abs() <= ex.errors[1].max(1e-12));
        assert!((ex.coeffs[2] - 0.5).abs() <= ex.errors[2].max(1e-12));
    }

    #[test]
    fn exact_path_values() {
        let probes = euclidean4().probes;
        let r = exact_at_eps(&euclidean4(), 0.0, Quantity::ScalarCurvature, &[0.1; 4], &probes).unwrap();
        assert_eq!(r, 0.0);
        let s = sphere4_stereo();
        let r = exact_at_eps(&s, 0.0, Quantity::ScalarCurvature, &[0.1, 0.2, 0.0, -0.3], &s.probes).unwrap();
        assert!((r - 12.0).abs() <= 1e-8);
        let s2 = s.with_perturbation(s.base.clone());
        let v = exact_at_eps(&s2, 0.1, Quantity::SqrtDetRatio, &[0.1, 0.2, 0.0, -0.3], &s.probes).unwrap();
        assert!((v - 1.21).abs() <= 1e-12);
    }

    #[test]
    fn gauss_jordan_inverse() {
        let pair = sphere4_stereo().eval_metric_pair(&[0.1, -0.2, 0.3, 0.05], 2).unwrap();
        let sm = SingleMetric::new(&pair, 0.2).unwrap();
        let g = pair.base.values();
        let q = pair.perturbation.values();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for k in 0..4 {
                    s += (g[(i, k)] + 0.2 * q[(i, k)]) * sm.inverse_entry(k, j);
                }
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn spatial_check_accuracy() {
        let poly = ScalarFieldExpr::parse("x1^3 - 2*x1*x2*x3 + x4^2 + 3").unwrap();
        assert!(spatial_fd_check(&poly, &[1.0, 0.5, -0.3, 0.2], 3).unwrap() <= 1e-9);
        let e = ScalarFieldExpr::parse("exp(x1*x2)").unwrap();
        assert!(spatial_fd_check(&e, &[0.3, 0.5, 0.0, 0.0], 3).unwrap() <= 1e-5);
        let c = ScalarFieldExpr::parse("5").unwrap();
        assert_eq!(spatial_fd_check(&c, &[0.3, 0.5, 0.0, 0.0], 3).unwrap(), 0.0);
    }
}
