//! Printed closed forms for the ε-coefficients of r, Δ⟨df₁,df₂⟩,
//! ⟨∇df₁,∇df₂⟩, Δf₁Δf₂ and Γ, evaluated as written and compared with the
//! series engine.
//!
//! The summands in [`table`] are kept exactly as typeset, with two bracket
//! repairs needed to make the displays parse at all (an unopened `(` in the
//! second-order curvature block and an unopened `[` in the last summand of
//! `d1`). Index placements that cannot be right (an index summed twice up,
//! twice down, or more than twice) are corrected only through [`FIXES`], each
//! entry individually switchable.

mod dsl;
mod fixes;
mod table;

use std::borrow::Cow;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

pub use dsl::{audit, evaluate, parse, AtomJets, DslError, IndexIssue, Node, Slot};
pub use fixes::{Fix, FIXES};

use crate::connes::a4_from_geometry;
use crate::expr::ScalarFieldExpr;
use crate::geometry::{GeometryError, PointGeometry, METRIC_DEGREE};
use crate::jets::SpatialJet;
use crate::operators::PROBE_DEGREE;
use crate::report::rel_gap;
use crate::scene::{ChartPoint, MetricScene, SceneError};
use crate::series::MAX_CONDITION;
use table::Printed;

#[derive(Debug, thiserror::Error)]
pub enum AppendixError {
    #[error("unknown coefficient `{0}` (expected one of r0..r2, a0..a2, b0..b2, d0..d2, gamma1, gamma2)")]
    UnknownCoefficient(String),
    #[error("unknown fix `{0}`")]
    UnknownFix(String),
    #[error("the printed forms are four-dimensional, scene has n = {0}")]
    Dimension(usize),
    #[error("{coefficient} summand {index}: {source}")]
    Dsl {
        coefficient: String,
        index: usize,
        source: DslError,
    },
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("probe `{name}`: {message}")]
    Probe { name: &'static str, message: String },
}

/// Every coefficient id, in report order.
pub const COEFFICIENTS: [&str; 14] = [
    "r0", "r1", "r2", "a0", "a1", "a2", "b0", "b1", "b2", "d0", "d1", "d2", "gamma1", "gamma2",
];

fn printed(name: &str) -> Result<&'static [Printed], AppendixError> {
    Ok(match name {
        "r0" => table::R0,
        "r1" => table::R1,
        "r2" => table::R2,
        "a0" => table::A0,
        "a1" => table::A1,
        "a2" => table::A2,
        "b0" => table::B0,
        "b1" => table::B1,
        "b2" => table::B2,
        "d0" => table::D0,
        "d1" => table::D1,
        "d2" => table::D2,
        "gamma1" => table::GAMMA1,
        "gamma2" => table::GAMMA2,
        _ => return Err(AppendixError::UnknownCoefficient(name.to_string())),
    })
}

/// Labels kept in the result: `Γ^k_ij` for the Christoffel terms, none otherwise.
pub fn output_labels(name: &str) -> &'static [(char, Slot)] {
    if name.starts_with("gamma") {
        &[('k', Slot::Up), ('i', Slot::Down), ('j', Slot::Down)]
    } else {
        &[]
    }
}

/// Which fixes apply.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum Variant {
    /// As printed.
    #[default]
    Verbatim,
    /// Every entry of [`FIXES`].
    Corrected,
    /// The named fixes only.
    Only(Vec<String>),
}

impl Variant {
    fn enables(&self, fix: &Fix) -> bool {
        match self {
            Variant::Verbatim => false,
            Variant::Corrected => true,
            Variant::Only(ids) => ids.iter().any(|i| *i == fix.id()),
        }
    }

    fn check(&self) -> Result<(), AppendixError> {
        if let Variant::Only(ids) = self {
            for id in ids {
                if !FIXES.iter().any(|f| f.id() == *id) {
                    return Err(AppendixError::UnknownFix(id.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Summand `index` of `name` with the fixes selected by `variant` applied.
pub fn summand_text(name: &str, index: usize, variant: &Variant) -> Result<Cow<'static, str>, AppendixError> {
    let list = printed(name)?;
    let mut text = Cow::Borrowed(list[index].text);
    for fix in FIXES {
        if fix.coefficient == name && fix.summand == index && variant.enables(fix) {
            for (from, to) in fix.edits {
                text = Cow::Owned(text.replace(from, to));
            }
        }
    }
    Ok(text)
}

/// One summand of a coefficient with its display line and parse tree.
#[derive(Debug, Clone)]
pub struct Summand {
    pub index: usize,
    pub line: u8,
    pub text: String,
    pub node: Node,
}

pub fn summands(name: &str, variant: &Variant) -> Result<Vec<Summand>, AppendixError> {
    variant.check()?;
    let list = printed(name)?;
    (0..list.len())
        .map(|index| {
            let text = summand_text(name, index, variant)?.into_owned();
            let node = parse(&text).map_err(|source| AppendixError::Dsl {
                coefficient: name.to_string(),
                index,
                source,
            })?;
            Ok(Summand {
                index,
                line: list[index].line,
                text,
                node,
            })
        })
        .collect()
}

/// Index-placement problems per summand (summands without problems omitted).
#[derive(Debug, Clone, Serialize)]
pub struct SummandAudit {
    pub coefficient: String,
    pub summand: usize,
    pub line: u8,
    pub issues: Vec<IndexIssue>,
}

pub fn audit_coefficient(name: &str, variant: &Variant) -> Result<Vec<SummandAudit>, AppendixError> {
    let out = output_labels(name);
    Ok(summands(name, variant)?
        .into_iter()
        .filter_map(|s| {
            let issues = audit(&s.node, out);
            (!issues.is_empty()).then(|| SummandAudit {
                coefficient: name.to_string(),
                summand: s.index,
                line: s.line,
                issues,
            })
        })
        .collect())
}

/// Jet degrees the whole table needs: `(metric, probes)`.
fn required_degrees() -> (usize, usize) {
    static DEG: OnceLock<(usize, usize)> = OnceLock::new();
    *DEG.get_or_init(|| {
        let (mut metric, mut probe) = (1, 0);
        for name in COEFFICIENTS {
            for variant in [Variant::Verbatim, Variant::Corrected] {
                for s in summands(name, &variant).expect("transcription table parses") {
                    let [m, g, p] = s.node.depths();
                    metric = metric.max(m.unwrap_or(0)).max(g.map_or(0, |g| g + 1));
                    probe = probe.max(p.unwrap_or(0));
                }
            }
        }
        (metric, probe)
    })
}

/// Atom jets for `(scene, point)` with probes `f₁`, `f₂`.
pub fn prepare(
    scene: &MetricScene,
    point: &[f64],
    f1: &ScalarFieldExpr,
    f2: &ScalarFieldExpr,
) -> Result<AtomJets, AppendixError> {
    if scene.dim != 4 {
        return Err(AppendixError::Dimension(scene.dim));
    }
    let (metric, probe) = required_degrees();
    let pair = scene.eval_metric_pair(point, metric)?;
    let inverse = pair
        .base
        .inverse_checked(MAX_CONDITION)
        .map_err(|e| AppendixError::Geometry(e.into()))?;
    let jet = |name, e: &ScalarFieldExpr| {
        e.eval_jet(point, probe).map_err(|e| AppendixError::Probe {
            name,
            message: e.to_string(),
        })
    };
    let (j1, j2) = (jet("f1", f1)?, jet("f2", f2)?);
    Ok(AtomJets::new(&pair.base, &inverse, &pair.perturbation, [&j1, &j2]))
}

/// Value of coefficient `name` from prepared jets: one number, or the 64
/// components `Γ^k_ij` (row-major in k, i, j) for `gamma1`/`gamma2`.
pub fn eval_prepared(name: &str, jets: &AtomJets, variant: &Variant) -> Result<Vec<f64>, AppendixError> {
    let keep: Vec<char> = output_labels(name).iter().map(|l| l.0).collect();
    let mut total: Option<Vec<f64>> = None;
    for s in summands(name, variant)? {
        let v = evaluate(&s.node, jets, &keep).map_err(|source| AppendixError::Dsl {
            coefficient: name.to_string(),
            index: s.index,
            source,
        })?;
        match total.as_mut() {
            Some(t) => t.iter_mut().zip(&v).for_each(|(a, b)| *a += b),
            None => total = Some(v),
        }
    }
    Ok(total.unwrap_or_default())
}

pub fn appendix_eval(
    name: &str,
    scene: &MetricScene,
    point: &[f64],
    probes: (&ScalarFieldExpr, &ScalarFieldExpr),
    variant: &Variant,
) -> Result<Vec<f64>, AppendixError> {
    printed(name)?;
    let jets = prepare(scene, point, probes.0, probes.1)?;
    eval_prepared(name, &jets, variant)
}

/// Engine values of every coefficient at one point, in [`COEFFICIENTS`] order.
pub fn engine_values(
    scene: &MetricScene,
    point: &[f64],
    probes: (&ScalarFieldExpr, &ScalarFieldExpr),
) -> Result<Vec<Vec<f64>>, AppendixError> {
    if scene.dim != 4 {
        return Err(AppendixError::Dimension(scene.dim));
    }
    let pair = scene.eval_metric_pair(point, METRIC_DEGREE)?;
    let geo = PointGeometry::new(pair, 2)?;
    let r = geo.scalar_curvature();
    let jet = |name, e: &ScalarFieldExpr| -> Result<SpatialJet, AppendixError> {
        e.eval_jet(point, PROBE_DEGREE).map_err(|e| AppendixError::Probe {
            name,
            message: e.to_string(),
        })
    };
    let a4 = a4_from_geometry(&geo, &r, &jet("f1", probes.0)?, &jet("f2", probes.1)?);
    let gamma = |k: usize| geo.gamma(k).iter().copied().collect::<Vec<f64>>();
    let mut out = Vec::with_capacity(COEFFICIENTS.len());
    for series in [&a4.r, &a4.a, &a4.b, &a4.d] {
        out.extend((0..3).map(|k| vec![series[k]]));
    }
    out.push(gamma(1));
    out.push(gamma(2));
    Ok(out)
}

/// Engine against transcription for one coefficient at one point.
#[derive(Debug, Clone, Serialize)]
pub struct TranscriptionDiscrepancy {
    pub coefficient: String,
    pub scene: String,
    pub point: Vec<f64>,
    /// `(k, i, j)` of the reported Christoffel component (largest verbatim gap).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<[usize; 3]>,
    pub engine: f64,
    pub transcription: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub corrected: f64,
    pub corrected_abs_gap: f64,
    pub corrected_rel_gap: f64,
    /// The verbatim form misses and the corrected form agrees.
    pub suspected_typo: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Largest gaps per coefficient over a campaign.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientSummary {
    pub coefficient: String,
    pub records: usize,
    pub max_abs_gap: f64,
    pub max_rel_gap: f64,
    pub max_corrected_abs_gap: f64,
    pub max_corrected_rel_gap: f64,
    pub suspected_typos: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixCampaign {
    pub tolerance: f64,
    pub records: Vec<TranscriptionDiscrepancy>,
    pub summary: Vec<CoefficientSummary>,
}

/// Argmax component of `|e − t|` with its flat index.
fn worst(e: &[f64], t: &[f64]) -> usize {
    let mut best = 0;
    for i in 0..e.len() {
        if (e[i] - t[i]).abs() > (e[best] - t[best]).abs() {
            best = i;
        }
    }
    best
}

fn point_records(scene: &MetricScene, point: &[f64], tol: f64) -> Vec<TranscriptionDiscrepancy> {
    let label = scene.label();
    let probes = (&scene.probes.f1, &scene.probes.f2);
    let blank = |name: &str, err: String| TranscriptionDiscrepancy {
        coefficient: name.to_string(),
        scene: label.clone(),
        point: point.to_vec(),
        component: None,
        engine: f64::NAN,
        transcription: f64::NAN,
        abs_gap: f64::NAN,
        rel_gap: f64::NAN,
        corrected: f64::NAN,
        corrected_abs_gap: f64::NAN,
        corrected_rel_gap: f64::NAN,
        suspected_typo: false,
        error: Some(err),
    };
    let prepared = engine_values(scene, point, probes)
        .and_then(|e| prepare(scene, point, probes.0, probes.1).map(|j| (e, j)));
    let (engine, jets) = match prepared {
        Ok(x) => x,
        Err(err) => return COEFFICIENTS.iter().map(|n| blank(n, err.to_string())).collect(),
    };
    COEFFICIENTS
        .iter()
        .zip(&engine)
        .map(|(&name, e)| {
            let both = eval_prepared(name, &jets, &Variant::Verbatim)
                .and_then(|v| eval_prepared(name, &jets, &Variant::Corrected).map(|c| (v, c)));
            let (v, c) = match both {
                Ok(x) => x,
                Err(err) => return blank(name, err.to_string()),
            };
            let i = worst(e, &v);
            let ic = worst(e, &c);
            let corrected_rel_gap = rel_gap(e[ic], c[ic]);
            let rel = rel_gap(e[i], v[i]);
            TranscriptionDiscrepancy {
                coefficient: name.to_string(),
                scene: label.clone(),
                point: point.to_vec(),
                component: (e.len() > 1).then(|| [i / 16, (i / 4) % 4, i % 4]),
                engine: e[i],
                transcription: v[i],
                abs_gap: (e[i] - v[i]).abs(),
                rel_gap: rel,
                corrected: c[i],
                corrected_abs_gap: (e[ic] - c[ic]).abs(),
                corrected_rel_gap,
                suspected_typo: rel > tol && corrected_rel_gap <= tol,
                error: None,
            }
        })
        .collect()
}

/// Evaluates every coefficient, verbatim and corrected, against the engine at
/// each `(scene, point)`, using each scene's `f₁`, `f₂`. Failures are recorded,
/// not raised. `tol` is the relative gap below which a value counts as agreeing.
pub fn crosscheck_appendix(cases: &[(MetricScene, Vec<ChartPoint>)], tol: f64) -> AppendixCampaign {
    let jobs: Vec<(&MetricScene, &ChartPoint)> = cases
        .iter()
        .flat_map(|(s, pts)| pts.iter().map(move |p| (s, p)))
        .collect();
    let records: Vec<TranscriptionDiscrepancy> = jobs
        .par_iter()
        .map(|(s, p)| point_records(s, p, tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let summary = COEFFICIENTS
        .iter()
        .map(|&name| {
            let mine: Vec<&TranscriptionDiscrepancy> = records.iter().filter(|r| r.coefficient == name).collect();
            let ok: Vec<&&TranscriptionDiscrepancy> = mine.iter().filter(|r| r.error.is_none()).collect();
            let max = |f: fn(&TranscriptionDiscrepancy) -> f64| ok.iter().map(|r| f(r)).fold(0.0, f64::max);
            CoefficientSummary {
                coefficient: name.to_string(),
                records: mine.len(),
                max_abs_gap: max(|r| r.abs_gap),
                max_rel_gap: max(|r| r.rel_gap),
                max_corrected_abs_gap: max(|r| r.corrected_abs_gap),
                max_corrected_rel_gap: max(|r| r.corrected_rel_gap),
                suspected_typos: ok.iter().filter(|r| r.suspected_typo).count(),
                errors: mine.len() - ok.len(),
            }
        })
        .collect();
    AppendixCampaign {
        tolerance: tol,
        records,
        summary,
    }
}
