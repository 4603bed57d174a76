//! Verification suites: each runs one campaign over a scene and returns checks
//! for a [`VerificationReport`](crate::report::VerificationReport).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::appendix::{crosscheck_appendix, COEFFICIENTS};
use crate::connes::{
    a4_density_series, bimetric_invariant_grid, conformal_covariance_residual, gradient_pairing_series,
    hessian_pairing_series, laplacian_of_pairing_series, laplacian_product_series,
};
use crate::expr::ScalarFieldExpr;
use crate::functional::{hochschild_residuals, QuadratureGrid};
use crate::geometry::{volume_density_series, PointGeometry, METRIC_DEGREE};
use crate::operators::{conformal_laplacian_series_apply, intertwining_residuals, laplacian_series_apply, Convention};
use crate::oracle::{oracle_series_many, Quantity, DEFAULT_STEP};
use crate::report::{rel_gap, Check};
use crate::scene::{ChartPoint, MetricScene};

/// Rounding floor of the Hochschild error bar, relative to `∫ Σ|terms|`.
pub const HOCHSCHILD_ROUNDING: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// The scene or options cannot run this suite.
    #[error("{0}")]
    Config(String),
    /// Evaluation failed (SPD breakdown, singular metric, non-finite node).
    #[error("{0}")]
    Numeric(String),
}

fn numeric(what: &str, e: impl fmt::Display) -> VerifyError {
    VerifyError::Numeric(format!("{what}: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Covariance,
    Invariants,
    Intertwining,
    Oracle,
    Appendix,
    Hochschild,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Covariance,
        Suite::Invariants,
        Suite::Intertwining,
        Suite::Oracle,
        Suite::Appendix,
        Suite::Hochschild,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Covariance => "covariance",
            Suite::Invariants => "invariants",
            Suite::Intertwining => "intertwining",
            Suite::Oracle => "oracle",
            Suite::Appendix => "appendix",
            Suite::Hochschild => "hochschild",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::Config(format!("unknown suite `{s}`")))
    }
}

/// Gate tolerances, all relative in the sense of [`rel_gap`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub covariance: f64,
    pub invariants: f64,
    pub intertwining: f64,
    pub oracle: f64,
    pub integral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            covariance: 1e-7,
            invariants: 1e-7,
            intertwining: 1e-8,
            oracle: 1e-6,
            integral: 1e-5,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 5] = ["covariance", "invariants", "intertwining", "oracle", "integral"];

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), VerifyError> {
        if !(value.is_finite() && value > 0.0) {
            return Err(VerifyError::Config(format!("tolerance {name} must be positive, got {value}")));
        }
        let slot = match name {
            "covariance" => &mut self.covariance,
            "invariants" => &mut self.invariants,
            "intertwining" => &mut self.intertwining,
            "oracle" => &mut self.oracle,
            "integral" => &mut self.integral,
            _ => {
                return Err(VerifyError::Config(format!(
                    "unknown tolerance `{name}` (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub points: Vec<ChartPoint>,
    /// Quadrature points per axis for the integral suites.
    pub grid: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
}

pub fn run_suite(scene: &MetricScene, suite: Suite, campaign: &Campaign) -> Result<SuiteOutput, VerifyError> {
    match suite {
        Suite::Covariance => covariance(scene, campaign),
        Suite::Invariants => invariants(scene, campaign),
        Suite::Intertwining => intertwining(scene, campaign),
        Suite::Oracle => oracle(scene, campaign),
        Suite::Appendix => appendix(scene, campaign),
        Suite::Hochschild => hochschild(scene, campaign),
    }
}

fn need_dim4(scene: &MetricScene, suite: &str) -> Result<(), VerifyError> {
    if scene.dim == 4 {
        Ok(())
    } else {
        Err(VerifyError::Config(format!("suite {suite} needs n = 4, scene has n = {}", scene.dim)))
    }
}

fn need_factor(scene: &MetricScene, suite: &str) -> Result<(), VerifyError> {
    match scene.conformal_factor {
        Some(_) => Ok(()),
        None => Err(VerifyError::Config(format!("suite {suite} needs a conformal factor"))),
    }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| rel_gap(*x, *y)).fold(0.0, f64::max)
}

fn covariance(scene: &MetricScene, c: &Campaign) -> Result<SuiteOutput, VerifyError> {
    need_dim4(scene, "covariance")?;
    need_factor(scene, "covariance")?;
    let mut checks = Vec::new();
    for (i, p) in c.points.iter().enumerate() {
        let res = conformal_covariance_residual(scene, p, &scene.probes.f1, &scene.probes.f2)
            .map_err(|e| numeric("covariance", e))?;
        checks.push(
            Check::gated(format!("covariance/p{i}"), max_gap(&res.scaled, &res.expected), c.tol.covariance)
                .with("point", p.clone())
                .with("scaled", res.scaled)
                .with("expected", res.expected),
        );
    }
    Ok(SuiteOutput { checks, data: serde_json::Value::Null })
}

fn invariants(scene: &MetricScene, c: &Campaign) -> Result<SuiteOutput, VerifyError> {
    need_dim4(scene, "invariants")?;
    need_factor(scene, "invariants")?;
    let mut checks = Vec::new();
    for (i, p) in c.points.iter().enumerate() {
        let f = scene.conformal_factor_at(p).map_err(|e| numeric("invariants", e))?;
        let scaled = scene.conformally_scaled(f);
        let (f1, f2) = (&scene.probes.f1, &scene.probes.f2);
        let a = bimetric_invariant_grid(scene, p, f1, f2).map_err(|e| numeric("invariants", e))?;
        let b = bimetric_invariant_grid(&scaled, p, f1, f2).map_err(|e| numeric("invariants", e))?;
        let (a, b): (Vec<f64>, Vec<f64>) = (a.concat(), b.concat());
        checks.push(
            Check::gated(format!("invariants/p{i}"), max_gap(&a, &b), c.tol.invariants)
                .with("point", p.clone())
                .with("grid", a)
                .with("scaled_grid", b),
        );
    }
    Ok(SuiteOutput { checks, data: serde_json::Value::Null })
}

fn intertwining(scene: &MetricScene, c: &Campaign) -> Result<SuiteOutput, VerifyError> {
    need_factor(scene, "intertwining")?;
    let orders = scene.order + 1;
    // worst[convention][order] over points
    let mut worst = vec![vec![0.0f64; orders]; Convention::ALL.len()];
    for p in &c.points {
        for (ci, conv) in Convention::ALL.into_iter().enumerate() {
            let res = intertwining_residuals(scene, p, &scene.probes.u, conv).map_err(|e| numeric("intertwining", e))?;
            for k in 0..orders {
                worst[ci][k] = worst[ci][k].max(rel_gap(res.lhs[k], res.rhs[k]));
            }
        }
    }
    let best = |k: usize| {
        (0..worst.len())
            .min_by(|&a, &b| worst[a][k].total_cmp(&worst[b][k]))
            .unwrap_or(0)
    };
    let b0 = best(0);
    let mut checks = vec![Check::gated("intertwining/order0", worst[b0][0], c.tol.intertwining)
        .note(format!("best convention: {}", Convention::ALL[b0].name()))];
    for k in 1..orders {
        let bk = best(k);
        checks.push(
            Check::info(format!("intertwining/order{k}"), worst[bk][k])
                .note(format!("best convention: {}", Convention::ALL[bk].name())),
        );
    }
    for (ci, conv) in Convention::ALL.into_iter().enumerate() {
        checks.push(Check::info(format!("intertwining/{}", conv.name()), worst[ci].iter().copied().fold(0.0, f64::max))
            .with("per_order", worst[ci].clone()));
    }
    Ok(SuiteOutput { checks, data: serde_json::Value::Null })
}

/// Engine series for one oracle quantity.
fn engine_series(scene: &MetricScene, p: &[f64], q: Quantity) -> Result<Vec<f64>, VerifyError> {
    let pr = &scene.probes;
    let err = |e: &dyn fmt::Display| numeric(&format!("{q:?}"), e);
    let s = match q {
        Quantity::ScalarCurvature => PointGeometry::at(scene, p).map_err(|e| err(&e))?.scalar_curvature(),
        Quantity::Laplacian => laplacian_series_apply(scene, p, &pr.u).map_err(|e| err(&e))?,
        Quantity::ConformalLaplacian => conformal_laplacian_series_apply(scene, p, &pr.u).map_err(|e| err(&e))?,
        Quantity::GradientPairing => gradient_pairing_series(scene, p, &pr.f1, &pr.f2).map_err(|e| err(&e))?,
        Quantity::LaplacianOfPairing => laplacian_of_pairing_series(scene, p, &pr.f1, &pr.f2).map_err(|e| err(&e))?,
        Quantity::HessianPairing => hessian_pairing_series(scene, p, &pr.f1, &pr.f2).map_err(|e| err(&e))?,
        Quantity::LaplacianProduct => laplacian_product_series(scene, p, &pr.f1, &pr.f2).map_err(|e| err(&e))?,
        Quantity::A4 => {
            return Ok(a4_density_series(scene, p, &pr.f1, &pr.f2).map_err(|e| err(&e))?.total);
        }
        Quantity::SqrtDetRatio => {
            let pair = scene.eval_metric_pair(p, METRIC_DEGREE).map_err(|e| err(&e))?;
            volume_density_series(&pair, scene.order).map_err(|e| err(&e))?.coeffs
        }
        Quantity::InverseEntry(..) => return Err(VerifyError::Config("inverse entries are not an oracle suite quantity".into())),
    };
    Ok(s.into_coeffs())
}

pub fn oracle_quantities(dim: usize) -> Vec<Quantity> {
    let mut q = vec![
        Quantity::ScalarCurvature,
        Quantity::Laplacian,
        Quantity::ConformalLaplacian,
        Quantity::SqrtDetRatio,
    ];
    if dim == 4 {
        q.extend([
            Quantity::GradientPairing,
            Quantity::LaplacianOfPairing,
            Quantity::HessianPairing,
            Quantity::LaplacianProduct,
            Quantity::A4,
        ]);
    }
    q
}

fn oracle(scene: &MetricScene, c: &Campaign) -> Result<SuiteOutput, VerifyError> {
    let qs = oracle_quantities(scene.dim);
    let mut checks = Vec::new();
    for (i, p) in c.points.iter().enumerate() {
        let fd = oracle_series_many(scene, p, &qs, &scene.probes, DEFAULT_STEP).map_err(|e| numeric("oracle", e))?;
        for (q, x) in qs.iter().zip(fd) {
            let eng = engine_series(scene, p, *q)?;
            let n = x.coeffs.len().min(eng.len());
            checks.push(
                Check::gated(format!("oracle/p{i}/{}", quantity_name(*q)), max_gap(&eng[..n], &x.coeffs[..n]), c.tol.oracle)
                    .with("engine", eng)
                    .with("oracle", x.coeffs)
                    .with("oracle_error", x.errors),
            );
        }
    }
    Ok(SuiteOutput { checks, data: serde_json::Value::Null })
}

pub fn quantity_name(q: Quantity) -> String {
    match q {
        Quantity::ScalarCurvature => "r".into(),
        Quantity::Laplacian => "laplacian".into(),
        Quantity::ConformalLaplacian => "conformal_laplacian".into(),
        Quantity::GradientPairing => "t".into(),
        Quantity::LaplacianOfPairing => "a".into(),
        Quantity::HessianPairing => "b".into(),
        Quantity::LaplacianProduct => "d".into(),
        Quantity::A4 => "a4".into(),
        Quantity::SqrtDetRatio => "c".into(),
        Quantity::InverseEntry(i, j) => format!("ginv{}{}", i + 1, j + 1),
    }
}

fn appendix(scene: &MetricScene, c: &Campaign) -> Result<SuiteOutput, VerifyError> {
    need_dim4(scene, "appendix")?;
    let campaign = crosscheck_appendix(&[(scene.clone(), c.points.clone())], c.tol.oracle);
    let checks = campaign
        .summary
        .iter()
        .map(|s| {
            let mut ch = Check::info(format!("appendix/{}", s.coefficient), s.max_rel_gap)
                .with("corrected_rel_gap", vec![s.max_corrected_rel_gap]);
            if s.errors > 0 {
                ch = ch.note(format!("{} evaluation errors", s.errors));
            }
            ch
        })
        .collect();
    let data = serde_json::to_value(&campaign).map_err(|e| numeric("appendix", e))?;
    debug_assert_eq!(campaign.summary.len(), COEFFICIENTS.len());
    Ok(SuiteOutput { checks, data })
}

/// Seeded probe quadruple of low trigonometric modes, periodic on `[0, period)`.
pub fn trig_quadruple(seed: u64, period: f64) -> [ScalarFieldExpr; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 2.0 * std::f64::consts::PI / period;
    let mut one = |c: f64| {
        let mut s = format!("{c}");
        for _ in 0..2 {
            let amp: f64 = rng.gen_range(-1.0..1.0);
            let axis = rng.gen_range(1..=4);
            let k = rng.gen_range(1..=2) as f64 * w;
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            s.push_str(&format!(" + {amp:.6}*sin({k:.12}*x{axis} + {phase:.6})"));
        }
        ScalarFieldExpr::parse(&s).expect("generated probe parses")
    };
    [one(1.0), one(0.0), one(0.0), one(0.5)]
}

/// Hochschild residual at grid `m` with error bar
/// `max(|R(m) − R(m/2)|, HOCHSCHILD_ROUNDING · ∫Σ|terms|)`.
#[derive(Debug, Clone, Serialize)]
pub struct HochschildDiagnostic {
    pub seed: u64,
    pub order: usize,
    pub residual: f64,
    pub coarse_residual: f64,
    pub error_bar: f64,
    pub magnitude: f64,
    pub within: bool,
}

pub fn hochschild_diagnostics(scene: &MetricScene, m: usize, seed: u64) -> Result<Vec<HochschildDiagnostic>, VerifyError> {
    if !scene.periodic {
        return Err(VerifyError::Config(format!("suite hochschild needs a periodic scene, {} is not", scene.label())));
    }
    need_dim4(scene, "hochschild")?;
    if m < 4 {
        return Err(VerifyError::Config(format!("grid {m} too small for refinement (need m ≥ 4)")));
    }
    let probes = trig_quadruple(seed, scene.period);
    let refs = [&probes[0], &probes[1], &probes[2], &probes[3]];
    let run = |m: usize| -> Result<_, VerifyError> {
        let g = QuadratureGrid::for_scene(scene, m).map_err(|e| VerifyError::Config(e.to_string()))?;
        hochschild_residuals(scene, &g, refs).map_err(|e| numeric("hochschild", e))
    };
    let fine = run(m)?;
    let coarse = run(m / 2)?;
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| {
            let bar = (f.residual - c.residual).abs().max(HOCHSCHILD_ROUNDING * f.magnitude);
            HochschildDiagnostic {
                seed,
                order: f.order,
                residual: f.residual,
                coarse_residual: c.residual,
                error_bar: bar,
                magnitude: f.magnitude,
                within: f.residual.abs() <= bar,
            }
        })
        .collect())
}

fn hochschild(scene: &MetricScene, c: &Campaign) -> Result<SuiteOutput, VerifyError> {
    let diags = hochschild_diagnostics(scene, c.grid, c.seed)?;
    let checks = diags
        .iter()
        .map(|d| {
            Check::info(format!("hochschild/order{}", d.order), d.residual.abs())
                .with("error_bar", vec![d.error_bar])
                .with("magnitude", vec![d.magnitude])
                .note(if d.within { "within error bar" } else { "exceeds error bar" })
        })
        .collect();
    let data = serde_json::to_value(&diags).map_err(|e| numeric("hochschild", e))?;
    Ok(SuiteOutput { checks, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{euclidean4, sample_points};

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("oracle", 1e-4).unwrap();
        assert_eq!(t.oracle, 1e-4);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("oracle", -1.0).is_err());
    }

    #[test]
    fn flat_oracle_gaps_vanish() {
        let s = euclidean4();
        let c = Campaign {
            points: sample_points(&s, 2, 1),
            grid: 8,
            seed: 1,
            tol: Tolerances::default(),
        };
        let out = run_suite(&s, Suite::Oracle, &c).unwrap();
        assert!(out.checks.iter().all(|ch| ch.residual == 0.0), "{:?}", out.checks);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
