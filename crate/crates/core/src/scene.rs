//! Metric scenes: a base metric ḡ, a perturbation g̿, an optional conformal
//! factor and the probe functions used by the density checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::expr::{ExprError, ScalarFieldExpr};
use crate::jets::{JetLayout, SpatialJet};
use crate::matrix::Matrix;

pub type ChartPoint = Vec<f64>;

pub const DEFAULT_ORDER: usize = 2;
pub const SPD_RADIUS_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read scene file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("scene JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("in `{field}`: {source}")]
    Expr {
        field: String,
        source: ExprError,
    },
    #[error("asymmetric metric spec: `{field}` has no upper-triangle counterpart `{upper}`")]
    Asymmetric { field: String, upper: String },
    #[error("bad metric key `{0}` (expected two 1-based indices such as \"12\")")]
    BadKey(String),
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error("unknown builtin scene `{0}`")]
    UnknownBuiltin(String),
    #[error("base metric is not positive definite at {point:?} (pivot {pivot:e} at row {row})")]
    NotSpd {
        point: Vec<f64>,
        row: usize,
        pivot: f64,
    },
    #[error("conformal factor is not positive at {point:?} (value {value:e})")]
    NonPositiveFactor { point: Vec<f64>, value: f64 },
    #[error("scene has no conformal factor")]
    NoConformalFactor,
}

impl SceneError {
    fn expr(field: impl Into<String>, source: ExprError) -> Self {
        SceneError::Expr {
            field: field.into(),
            source,
        }
    }
}

/// Symmetric matrix of expressions, stored as the upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymExprMatrix {
    dim: usize,
    upper: Vec<ScalarFieldExpr>,
}

impl SymExprMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ScalarFieldExpr) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(f(i, j));
            }
        }
        SymExprMatrix { dim, upper }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ScalarFieldExpr::zero())
    }

    pub fn diagonal(dim: usize, d: &ScalarFieldExpr) -> Self {
        Self::from_fn(dim, |i, j| if i == j { d.clone() } else { ScalarFieldExpr::zero() })
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarFieldExpr {
        &self.upper[self.slot(i, j)]
    }

    pub fn is_zero_literal(&self) -> bool {
        self.upper.iter().all(ScalarFieldExpr::is_zero_literal)
    }

    pub fn map(&self, f: impl Fn(&ScalarFieldExpr) -> ScalarFieldExpr) -> Self {
        SymExprMatrix {
            dim: self.dim,
            upper: self.upper.iter().map(f).collect(),
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<Matrix<f64>, ExprError> {
        let vals: Vec<f64> = self.upper.iter().map(|e| e.eval(point)).collect::<Result<_, _>>()?;
        Ok(Matrix::from_fn(self.dim, |i, j| vals[self.slot(i, j)]))
    }

    pub fn eval_jets(&self, point: &[f64], degree: usize) -> Result<Matrix<SpatialJet>, ExprError> {
        let jets: Vec<SpatialJet> = self
            .upper
            .iter()
            .map(|e| e.eval_jet(point, degree))
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_fn(self.dim, |i, j| jets[self.slot(i, j)].clone()))
    }

    fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                m.insert(format!("{}{}", i + 1, j + 1), self.get(i, j).to_string());
            }
        }
        m
    }

    fn from_map(dim: usize, field: &str, map: &BTreeMap<String, String>) -> Result<Self, SceneError> {
        let mut parsed = BTreeMap::new();
        for (key, text) in map {
            let b = key.as_bytes();
            if b.len() != 2 || !b[0].is_ascii_digit() || !b[1].is_ascii_digit() {
                return Err(SceneError::BadKey(key.clone()));
            }
            let (i, j) = ((b[0] - b'0') as usize, (b[1] - b'0') as usize);
            if i == 0 || j == 0 || i > dim || j > dim {
                return Err(SceneError::BadKey(key.clone()));
            }
            if i > j {
                // lower-triangle text is ignored when the upper entry exists
                let upper = format!("{j}{i}");
                if !map.contains_key(&upper) {
                    return Err(SceneError::Asymmetric {
                        field: format!("{field}.{key}"),
                        upper,
                    });
                }
                continue;
            }
            let e = ScalarFieldExpr::parse(text).map_err(|e| SceneError::expr(format!("{field}.{key}"), e))?;
            e.check_dim(dim)
                .map_err(|e| SceneError::expr(format!("{field}.{key}"), e))?;
            parsed.insert((i - 1, j - 1), e);
        }
        Ok(Self::from_fn(dim, |i, j| {
            parsed.get(&(i, j)).cloned().unwrap_or_else(ScalarFieldExpr::zero)
        }))
    }
}

/// Probe functions: f₀, f₁, f₂ for the density functional and u for operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Probes {
    pub f0: ScalarFieldExpr,
    pub f1: ScalarFieldExpr,
    pub f2: ScalarFieldExpr,
    pub u: ScalarFieldExpr,
}

impl Probes {
    pub fn parse(f0: &str, f1: &str, f2: &str, u: &str) -> Result<Self, SceneError> {
        let p = |name: &str, s: &str| {
            ScalarFieldExpr::parse(s).map_err(|e| SceneError::expr(format!("probes.{name}"), e))
        };
        Ok(Probes {
            f0: p("f0", f0)?,
            f1: p("f1", f1)?,
            f2: p("f2", f2)?,
            u: p("u", u)?,
        })
    }

    fn all(&self) -> [(&'static str, &ScalarFieldExpr); 4] {
        [("f0", &self.f0), ("f1", &self.f1), ("f2", &self.f2), ("u", &self.u)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricScene {
    pub name: Option<String>,
    pub dim: usize,
    pub order: usize,
    pub base: SymExprMatrix,
    pub perturbation: SymExprMatrix,
    pub conformal_factor: Option<ScalarFieldExpr>,
    pub probes: Probes,
    pub periodic: bool,
    pub period: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dim: usize,
    #[serde(default = "default_order")]
    order: usize,
    base: BTreeMap<String, String>,
    #[serde(default)]
    perturbation: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conformal_factor: Option<String>,
    probes: ProbeFile,
    #[serde(default)]
    periodic: bool,
    #[serde(default = "default_period")]
    period: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeFile {
    f0: String,
    f1: String,
    f2: String,
    u: String,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

fn default_period() -> f64 {
    2.0 * PI
}

impl MetricScene {
    pub fn from_json(text: &str) -> Result<Self, SceneError> {
        let raw: SceneFile = serde_json::from_str(text).map_err(|e| SceneError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if raw.dim == 0 || raw.dim > 9 {
            return Err(SceneError::Invalid(format!("dim {} outside 1..=9", raw.dim)));
        }
        if raw.order == 0 || raw.order > 8 {
            return Err(SceneError::Invalid(format!("order {} outside 1..=8", raw.order)));
        }
        if !(raw.period.is_finite() && raw.period > 0.0) {
            return Err(SceneError::Invalid(format!("period {} must be positive", raw.period)));
        }
        let dim = raw.dim;
        let scalar = |field: &str, s: &str| -> Result<ScalarFieldExpr, SceneError> {
            let e = ScalarFieldExpr::parse(s).map_err(|e| SceneError::expr(field, e))?;
            e.check_dim(dim).map_err(|e| SceneError::expr(field, e))?;
            Ok(e)
        };
        let scene = MetricScene {
            name: raw.name,
            dim,
            order: raw.order,
            base: SymExprMatrix::from_map(dim, "base", &raw.base)?,
            perturbation: SymExprMatrix::from_map(dim, "perturbation", &raw.perturbation)?,
            conformal_factor: raw
                .conformal_factor
                .as_deref()
                .map(|s| scalar("conformal_factor", s))
                .transpose()?,
            probes: Probes {
                f0: scalar("probes.f0", &raw.probes.f0)?,
                f1: scalar("probes.f1", &raw.probes.f1)?,
                f2: scalar("probes.f2", &raw.probes.f2)?,
                u: scalar("probes.u", &raw.probes.u)?,
            },
            periodic: raw.periodic,
            period: raw.period,
        };
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        let raw = SceneFile {
            name: self.name.clone(),
            dim: self.dim,
            order: self.order,
            base: self.base.to_map(),
            perturbation: self.perturbation.to_map(),
            conformal_factor: self.conformal_factor.as_ref().map(|e| e.to_string()),
            probes: ProbeFile {
                f0: self.probes.f0.to_string(),
                f1: self.probes.f1.to_string(),
                f2: self.probes.f2.to_string(),
                u: self.probes.u.to_string(),
            },
            periodic: self.periodic,
            period: self.period,
        };
        serde_json::to_string_pretty(&raw).expect("scene serialization cannot fail")
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "unnamed".into())
    }

    /// Returns the scene with its perturbation replaced.
    pub fn with_perturbation(&self, perturbation: SymExprMatrix) -> Self {
        MetricScene {
            perturbation,
            ..self.clone()
        }
    }

    pub fn with_conformal_factor(&self, f: ScalarFieldExpr) -> Self {
        MetricScene {
            conformal_factor: Some(f),
            ..self.clone()
        }
    }

    /// The scene `(fḡ, fg̿)` built at expression level.
    pub fn conformally_scaled(&self, f: &ScalarFieldExpr) -> Self {
        let scale = |e: &ScalarFieldExpr| {
            if e.is_zero_literal() {
                ScalarFieldExpr::zero()
            } else {
                ScalarFieldExpr::Mul(Box::new(f.clone()), Box::new(e.clone()))
            }
        };
        MetricScene {
            name: self.name.as_ref().map(|n| format!("{n}/scaled")),
            base: self.base.map(scale),
            perturbation: self.perturbation.map(scale),
            ..self.clone()
        }
    }

    /// Checks the conformal factor is present and positive at `point`.
    pub fn conformal_factor_at(&self, point: &[f64]) -> Result<&ScalarFieldExpr, SceneError> {
        let f = self.conformal_factor.as_ref().ok_or(SceneError::NoConformalFactor)?;
        let v = f.eval(point).map_err(|e| SceneError::expr("conformal_factor", e))?;
        if !(v > 0.0) {
            return Err(SceneError::NonPositiveFactor {
                point: point.to_vec(),
                value: v,
            });
        }
        Ok(f)
    }

    pub fn check_point(&self, point: &[f64]) -> Result<(), SceneError> {
        if point.len() != self.dim {
            return Err(SceneError::Invalid(format!(
                "point has {} coordinates, scene dimension is {}",
                point.len(),
                self.dim
            )));
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(SceneError::Invalid("point has non-finite coordinates".into()));
        }
        Ok(())
    }

    /// Jets of ḡ and g̿ at `point`, after checking ḡ is SPD there.
    pub fn eval_metric_pair(&self, point: &[f64], degree: usize) -> Result<MetricPair, SceneError> {
        self.check_point(point)?;
        let base = self
            .base
            .eval_jets(point, degree)
            .map_err(|e| SceneError::expr("base", e))?;
        spd_check(&base.values(), point)?;
        let pert_is_zero = self.perturbation.is_zero_literal();
        let perturbation = if pert_is_zero {
            let layout = JetLayout::get(self.dim, degree).map_err(|e| SceneError::expr("perturbation", e.into()))?;
            Matrix::from_fn(self.dim, |_, _| SpatialJet::constant_in(layout, 0.0))
        } else {
            self.perturbation
                .eval_jets(point, degree)
                .map_err(|e| SceneError::expr("perturbation", e))?
        };
        Ok(MetricPair {
            base,
            perturbation,
            perturbation_is_zero: pert_is_zero,
        })
    }

    /// Is `ḡ + εg̿` SPD at every point?
    pub fn is_spd_at_eps(&self, eps: f64, points: &[ChartPoint]) -> Result<bool, SceneError> {
        for p in points {
            let b = self.base.eval(p).map_err(|e| SceneError::expr("base", e))?;
            let q = self
                .perturbation
                .eval(p)
                .map_err(|e| SceneError::expr("perturbation", e))?;
            let m = Matrix::from_fn(self.dim, |i, j| b[(i, j)] + eps * q[(i, j)]);
            if cholesky_min_pivot(&m).is_err() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest `r ≤ cap` (to within [`SPD_RADIUS_TOL`]) such that `ḡ ± εg̿`
    /// stays SPD at all `points` for `|ε| ≤ r`.
    ///
    /// The SPD set in ε is an interval containing 0, so checking `±r` suffices.
    pub fn spd_radius(&self, points: &[ChartPoint], cap: f64) -> Result<f64, SceneError> {
        let ok = |r: f64| -> Result<bool, SceneError> {
            Ok(self.is_spd_at_eps(r, points)? && self.is_spd_at_eps(-r, points)?)
        };
        if ok(cap)? {
            return Ok(cap);
        }
        let (mut lo, mut hi) = (0.0, cap);
        while hi - lo > SPD_RADIUS_TOL {
            let mid = 0.5 * (lo + hi);
            if ok(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Checks every field expression against `dim` and every probe is defined.
    pub fn validate(&self) -> Result<(), SceneError> {
        for (name, e) in self.probes.all() {
            e.check_dim(self.dim)
                .map_err(|err| SceneError::expr(format!("probes.{name}"), err))?;
        }
        Ok(())
    }
}

/// Jets of ḡ and g̿ at one point.
#[derive(Debug, Clone)]
pub struct MetricPair {
    pub base: Matrix<SpatialJet>,
    pub perturbation: Matrix<SpatialJet>,
    pub perturbation_is_zero: bool,
}

impl MetricPair {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn degree(&self) -> usize {
        self.base[(0, 0)].degree()
    }

    /// `(fḡ, fg̿)` for a jet-valued factor.
    pub fn conformally_scaled(&self, f: &SpatialJet) -> Self {
        MetricPair {
            base: self.base.map(|e| e * f),
            perturbation: self.perturbation.map(|e| e * f),
            perturbation_is_zero: self.perturbation_is_zero,
        }
    }
}

/// Cholesky factorization returning the smallest pivot, or the first
/// non-positive pivot as `(row, pivot)`.
pub fn cholesky_min_pivot(m: &Matrix<f64>) -> Result<f64, (usize, f64)> {
    let n = m.dim();
    let mut l = vec![0.0; n * n];
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return Err((j, d));
        }
        min_pivot = min_pivot.min(d);
        let dj = d.sqrt();
        l[j * n + j] = dj;
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / dj;
        }
    }
    Ok(min_pivot)
}

fn spd_check(m: &Matrix<f64>, point: &[f64]) -> Result<(), SceneError> {
    cholesky_min_pivot(m).map(|_| ()).map_err(|(row, pivot)| SceneError::NotSpd {
        point: point.to_vec(),
        row,
        pivot,
    })
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<MetricScene, SceneError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.display().to_string(),
        source,
    })?;
    MetricScene::from_json(&text)
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "euclidean4",
    "sphere4_stereo",
    "conformally_flat",
    "torus_bump",
    "random_smooth",
];

/// Default φ for `conformally_flat`.
pub const DEFAULT_PHI: &str = "0.3*sin(x1) + 0.2*x2*x3 - 0.1*x4^2";

fn e(s: &str) -> ScalarFieldExpr {
    ScalarFieldExpr::parse(s).expect("builtin expression parses")
}

fn sym(dim: usize, entries: &[((usize, usize), &str)]) -> SymExprMatrix {
    let map: BTreeMap<(usize, usize), &str> = entries.iter().cloned().collect();
    SymExprMatrix::from_fn(dim, |i, j| {
        map.get(&(i + 1, j + 1)).map(|s| e(s)).unwrap_or_else(ScalarFieldExpr::zero)
    })
}

/// Builtin catalog. `random_smooth` uses seed 0; see [`random_smooth`].
pub fn builtin_scene(name: &str) -> Result<MetricScene, SceneError> {
    match name {
        "euclidean4" => Ok(euclidean4()),
        "sphere4_stereo" => Ok(sphere4_stereo()),
        "conformally_flat" => conformally_flat(DEFAULT_PHI),
        "torus_bump" => Ok(torus_bump()),
        "random_smooth" => Ok(random_smooth(0)),
        _ => Err(SceneError::UnknownBuiltin(name.into())),
    }
}

pub fn euclidean4() -> MetricScene {
    MetricScene {
        name: Some("euclidean4".into()),
        dim: 4,
        order: DEFAULT_ORDER,
        base: SymExprMatrix::diagonal(4, &ScalarFieldExpr::constant(1.0)),
        perturbation: SymExprMatrix::zeros(4),
        conformal_factor: Some(e("exp(0.3*x1)")),
        probes: Probes::parse("1", "x1^2", "x2^2", "x1^2").unwrap(),
        periodic: false,
        period: 2.0 * PI,
    }
}

/// Round unit 4-sphere in stereographic coordinates with a polynomial perturbation.
pub fn sphere4_stereo() -> MetricScene {
    let conf = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2";
    let base = SymExprMatrix::diagonal(4, &e(conf));
    let perturbation = SymExprMatrix::from_fn(4, |i, j| {
        let cross = format!("0.2*x{}*x{}", i + 1, j + 1);
        if i == j {
            e(&format!("1 + 0.5*x1^2 + {cross}"))
        } else {
            e(&cross)
        }
    });
    MetricScene {
        name: Some("sphere4_stereo".into()),
        dim: 4,
        order: DEFAULT_ORDER,
        base,
        perturbation,
        conformal_factor: Some(e("exp(0.3*x1)")),
        probes: Probes::parse("1 + x3", "x1 + 0.5*x2^2 - x1*x3", "x2*x3 + x4 + 0.3*x1^2", "1 + x1*x2").unwrap(),
        periodic: false,
        period: 2.0 * PI,
    }
}

/// `ḡ = e^{2φ}δ` with a mixed perturbation.
pub fn conformally_flat(phi: &str) -> Result<MetricScene, SceneError> {
    let phi = ScalarFieldExpr::parse(phi).map_err(|err| SceneError::expr("phi", err))?;
    phi.check_dim(4).map_err(|err| SceneError::expr("phi", err))?;
    let conf = ScalarFieldExpr::Call(
        crate::expr::Func::Exp,
        Box::new(ScalarFieldExpr::Mul(Box::new(ScalarFieldExpr::constant(2.0)), Box::new(phi))),
    );
    Ok(MetricScene {
        name: Some("conformally_flat".into()),
        dim: 4,
        order: DEFAULT_ORDER,
        base: SymExprMatrix::diagonal(4, &conf),
        perturbation: sym(
            4,
            &[
                ((1, 1), "0.3*cos(x2)"),
                ((2, 2), "0.2 + 0.1*x1"),
                ((3, 3), "0.4*x3*x4"),
                ((4, 4), "-0.2"),
                ((1, 2), "0.1*x1"),
                ((2, 4), "0.15*sin(x3)"),
            ],
        ),
        conformal_factor: Some(e("1 + 0.2*sin(x2) + 0.1*x1^2")),
        probes: Probes::parse("1", "sin(x1) + x2*x3", "x4^2 + cos(x2)", "x1*x3 + 2").unwrap(),
        periodic: false,
        period: 2.0 * PI,
    })
}

/// Periodic trigonometric metric pair on `[0, 2π)⁴`.
pub fn torus_bump() -> MetricScene {
    MetricScene {
        name: Some("torus_bump".into()),
        dim: 4,
        order: DEFAULT_ORDER,
        base: sym(
            4,
            &[
                ((1, 1), "1 + 0.2*sin(x2)"),
                ((2, 2), "1 + 0.15*cos(x1 + x3)"),
                ((3, 3), "1.1 + 0.2*sin(x4)"),
                ((4, 4), "1 + 0.1*cos(x1)"),
                ((1, 2), "0.1*sin(x3)"),
                ((3, 4), "0.1*cos(x2)"),
            ],
        ),
        perturbation: sym(
            4,
            &[
                ((1, 1), "0.5*cos(x1)"),
                ((2, 2), "0.3*sin(x2 + x4)"),
                ((3, 3), "0.2"),
                ((4, 4), "0.4*sin(x3)"),
                ((1, 3), "0.2*cos(x4)"),
                ((2, 4), "0.1*sin(x1)"),
            ],
        ),
        conformal_factor: Some(e("1 + 0.2*sin(x2)")),
        probes: Probes::parse(
            "1 + 0.5*cos(x3)",
            "sin(x1) + 0.3*cos(x2)",
            "cos(x1 + x4) + 0.2*sin(x3)",
            "sin(x1)*cos(x2)",
        )
        .unwrap(),
        periodic: true,
        period: 2.0 * PI,
    }
}

fn trig_term(rng: &mut ChaCha8Rng, amp: f64) -> String {
    let a = amp * rng.gen_range(-1.0..1.0);
    let k = rng.gen_range(0..4) + 1;
    let phase = rng.gen_range(0.0..2.0 * PI);
    let f = if rng.gen_bool(0.5) { "sin" } else { "cos" };
    format!("{a:.6}*{f}(x{k} + {phase:.6})")
}

/// Seeded periodic SPD pair.
///
/// Diagonal entries are `1 + t` with `|t| ≤ 0.25`; off-diagonal entries are
/// bounded by 0.12, so every row is strictly diagonally dominant and ḡ is SPD
/// everywhere (Gershgorin).
pub fn random_smooth(seed: u64) -> MetricScene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = SymExprMatrix::from_fn(4, |i, j| {
        if i == j {
            e(&format!("1 + {}", trig_term(&mut rng, 0.25)))
        } else {
            e(&trig_term(&mut rng, 0.12))
        }
    });
    let perturbation = SymExprMatrix::from_fn(4, |i, j| {
        let c = rng.gen_range(-0.3..0.3);
        let t = trig_term(&mut rng, if i == j { 0.5 } else { 0.3 });
        e(&format!("{c:.6} + {t}"))
    });
    let f = format!("1 + {} + {}", trig_term(&mut rng, 0.2), trig_term(&mut rng, 0.1));
    let probe = |rng: &mut ChaCha8Rng, c: f64| format!("{c} + {} + {}", trig_term(rng, 1.0), trig_term(rng, 0.5));
    let f0 = probe(&mut rng, 1.0);
    let f1 = probe(&mut rng, 0.0);
    let f2 = probe(&mut rng, 0.0);
    let u = probe(&mut rng, 0.5);
    MetricScene {
        name: Some(format!("random_smooth/{seed}")),
        dim: 4,
        order: DEFAULT_ORDER,
        base,
        perturbation,
        conformal_factor: Some(e(&f)),
        probes: Probes::parse(&f0, &f1, &f2, &u).unwrap(),
        periodic: true,
        period: 2.0 * PI,
    }
}

/// Seeded pair of constant metrics with polynomial probes. Every metric derivative
/// vanishes, so only the probe Hessians and gradients feed the coefficients.
pub fn constant_metric(seed: u64) -> MetricScene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = SymExprMatrix::from_fn(4, |i, j| {
        let v = if i == j { rng.gen_range(1.0..1.5) } else { rng.gen_range(-0.1..0.1) };
        ScalarFieldExpr::constant(v)
    });
    let perturbation = SymExprMatrix::from_fn(4, |i, j| {
        let v = if i == j { rng.gen_range(-0.4..0.4) } else { rng.gen_range(-0.15..0.15) };
        ScalarFieldExpr::constant(v)
    });
    let poly = |rng: &mut ChaCha8Rng| {
        let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        format!(
            "{:.6}*x1^2 + {:.6}*x2*x3 + {:.6}*x4^3 + {:.6}*x1*x4",
            a[0], a[1], a[2], a[3]
        )
    };
    let f1 = poly(&mut rng);
    let f2 = poly(&mut rng);
    MetricScene {
        name: Some(format!("constant_metric/{seed}")),
        dim: 4,
        order: DEFAULT_ORDER,
        base,
        perturbation,
        conformal_factor: Some(e("exp(0.2*x2)")),
        probes: Probes::parse("1", &f1, &f2, &f1).unwrap(),
        periodic: false,
        period: 2.0 * PI,
    }
}

/// Seeded sample points inside a scene's documented domain.
pub fn sample_points(scene: &MetricScene, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_9017);
    (0..count)
        .map(|_| {
            (0..scene.dim)
                .map(|_| {
                    if scene.periodic {
                        rng.gen_range(0.0..scene.period)
                    } else {
                        rng.gen_range(-0.5..0.5)
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid_and_spd() {
        for name in BUILTIN_NAMES {
            let s = builtin_scene(name).unwrap();
            s.validate().unwrap();
            for p in sample_points(&s, 8, 1) {
                s.eval_metric_pair(&p, 2).unwrap();
            }
        }
        assert!(matches!(builtin_scene("klein"), Err(SceneError::UnknownBuiltin(_))));
    }

    #[test]
    fn euclidean_and_sphere_values() {
        let s = euclidean4();
        let pair = s.eval_metric_pair(&[0.3, -0.1, 0.2, 0.0], 2).unwrap();
        assert_eq!(pair.base.values(), Matrix::identity(4));
        assert!(pair.perturbation.iter().all(SpatialJet::is_zero));

        let s = sphere4_stereo();
        let pair = s.eval_metric_pair(&[0.0; 4], 2).unwrap();
        assert_eq!(pair.base.values(), Matrix::identity(4).map(|v| 4.0 * v));
        for j in pair.base.iter() {
            for k in 0..4 {
                assert_eq!(j.d(&[k]), 0.0);
            }
        }
    }

    #[test]
    fn random_smooth_is_deterministic() {
        assert_eq!(random_smooth(7), random_smooth(7));
        assert_ne!(random_smooth(7), random_smooth(8));
    }

    #[test]
    fn json_round_trip() {
        for name in BUILTIN_NAMES {
            let s = builtin_scene(name).unwrap();
            let back = MetricScene::from_json(&s.to_json()).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.digest(), s.digest());
        }
    }

    #[test]
    fn lower_triangle_rules() {
        let text = r#"{"dim": 2, "base": {"11": "1", "22": "1", "12": "0.1", "21": "0.7"},
            "perturbation": {"12": "x1", "21": "x2"},
            "probes": {"f0": "1", "f1": "x1", "f2": "x2", "u": "x1"}}"#;
        let s = MetricScene::from_json(text).unwrap();
        assert_eq!(s.base.get(1, 0), &ScalarFieldExpr::constant(0.1));
        assert_eq!(s.perturbation.get(1, 0), &ScalarFieldExpr::coord(0));
        let bad = r#"{"dim": 2, "base": {"11": "1", "22": "1", "21": "0.7"},
            "probes": {"f0": "1", "f1": "x1", "f2": "x2", "u": "x1"}}"#;
        assert!(matches!(MetricScene::from_json(bad), Err(SceneError::Asymmetric { .. })));
    }

    #[test]
    fn loader_errors() {
        let unknown = r#"{"dim": 2, "base": {"11": "1", "22": "1"}, "colour": 3,
            "probes": {"f0": "1", "f1": "x1", "f2": "x2", "u": "x1"}}"#;
        assert!(matches!(MetricScene::from_json(unknown), Err(SceneError::Json { .. })));
        let malformed = r#"{"dim": 2, "base": {"11": "sin(", "22": "1"},
            "probes": {"f0": "1", "f1": "x1", "f2": "x2", "u": "x1"}}"#;
        assert!(matches!(MetricScene::from_json(malformed), Err(SceneError::Expr { .. })));
        let coord = r#"{"dim": 2, "base": {"11": "1 + x3", "22": "1"},
            "probes": {"f0": "1", "f1": "x1", "f2": "x2", "u": "x1"}}"#;
        assert!(matches!(MetricScene::from_json(coord), Err(SceneError::Expr { .. })));
    }

    #[test]
    fn non_spd_reports_pivot() {
        let mut s = euclidean4();
        s.base = sym(4, &[((1, 1), "1"), ((2, 2), "1"), ((3, 3), "1"), ((4, 4), "-1")]);
        match s.eval_metric_pair(&[0.0; 4], 2) {
            Err(SceneError::NotSpd { row, pivot, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(pivot, -1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spd_radius_bisection() {
        // ḡ = δ, g̿ = -diag(2,0,0,0): SPD iff 1 - 2ε > 0 and 1 + 2ε > 0
        let mut s = euclidean4();
        s.perturbation = sym(4, &[((1, 1), "-2")]);
        let r = s.spd_radius(&[vec![0.0; 4]], 10.0).unwrap();
        assert!((r - 0.5).abs() <= SPD_RADIUS_TOL, "{r}");
    }

    #[test]
    fn torus_scenes_are_periodic() {
        for s in [torus_bump(), random_smooth(3)] {
            for p in sample_points(&s, 4, 2) {
                let shifted: Vec<f64> = p.iter().map(|v| v + s.period).collect();
                let a = s.base.eval(&p).unwrap();
                let b = s.base.eval(&shifted).unwrap();
                assert!(a.max_abs_diff(&b) <= 1e-12);
                let a = s.perturbation.eval(&p).unwrap();
                let b = s.perturbation.eval(&shifted).unwrap();
                assert!(a.max_abs_diff(&b) <= 1e-12);
            }
        }
    }
}
