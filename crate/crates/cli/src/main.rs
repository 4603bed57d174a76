use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bimetric::connes::{
    a4_density_series, gradient_pairing_series, hessian_pairing_series, laplacian_of_pairing_series,
    laplacian_product_series,
};
use bimetric::functional::{integrate_exact_many, wres_variations, QuadratureGrid, DEFAULT_GRID};
use bimetric::geometry::{volume_density_series, PointGeometry, METRIC_DEGREE};
use bimetric::operators::{conformal_laplacian_series_apply, laplacian_series_apply};
use bimetric::oracle::{extract_series_fd_batch, DEFAULT_STEP};
use bimetric::report::{rel_gap, Check, Status, VerificationReport};
use bimetric::scene::{builtin_scene, load_scene, sample_points, MetricScene, BUILTIN_NAMES};
use bimetric::verify::{run_suite, Campaign, Suite, Tolerances, VerifyError};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "bimetric", version, about = "ε-series of Riemannian invariants for g = ḡ + εg̿")]
struct Cli {
    /// Worker threads for point and node fan-out (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print ε-series of geometric quantities at one point.
    Expand {
        #[arg(long)]
        scene: String,
        /// Comma-separated chart coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<f64>,
        /// Truncation order (default: the scene's).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long = "quantity", value_enum, required = true, num_args = 1..)]
        quantities: Vec<ExpandQuantity>,
    },
    /// Run a verification suite over seeded sample points.
    Verify {
        #[arg(long)]
        scene: String,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Seed for sample points and random probes; drawn and printed when absent.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of sample points.
        #[arg(long, default_value_t = 5)]
        points: usize,
        /// Quadrature points per axis for integral suites.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Tolerance override, e.g. `--tol oracle=1e-5`.
        #[arg(long = "tol", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
    },
    /// Integrated functional ∫ f₀A₄(f₁,f₂)dVol and its first two ε-variations.
    Wres {
        #[arg(long)]
        scene: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Grid for the refinement delta (default: half of --grid).
        #[arg(long)]
        refine_grid: Option<usize>,
        #[arg(long = "tol", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
    },
    /// Print a builtin scene as JSON, or validate a scene file.
    Scene {
        /// Builtin name or scene path.
        name: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExpandQuantity {
    R,
    Gamma,
    Ginv,
    Laplacian,
    ConformalLaplacian,
    T,
    A,
    B,
    D,
    A4,
    C,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Covariance,
    Invariants,
    Intertwining,
    Oracle,
    Appendix,
    Hochschild,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Covariance => Suite::Covariance,
            SuiteArg::Invariants => Suite::Invariants,
            SuiteArg::Intertwining => Suite::Intertwining,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Appendix => Suite::Appendix,
            SuiteArg::Hochschild => Suite::Hochschild,
        }
    }
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad tolerance value `{v}`: {e}"))?;
    Ok((k.to_string(), v))
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn config(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn numeric(what: &str, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_NUMERIC,
        message: format!("{what}: {e}"),
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Config(m) => config(m),
            VerifyError::Numeric(m) => Failure {
                code: EXIT_NUMERIC,
                message: m,
            },
        }
    }
}

/// A path if it exists, otherwise a builtin name.
fn resolve_scene(arg: &str) -> Result<MetricScene, Failure> {
    let path = Path::new(arg);
    let scene = if path.exists() {
        load_scene(path).map_err(|e| config(e.to_string()))?
    } else if BUILTIN_NAMES.contains(&arg) {
        builtin_scene(arg).map_err(|e| config(e.to_string()))?
    } else {
        return Err(config(format!(
            "scene `{arg}` is neither a file nor a builtin ({})",
            BUILTIN_NAMES.join(", ")
        )));
    };
    scene.validate().map_err(|e| config(e.to_string()))?;
    Ok(scene)
}

fn tolerances(overrides: &[(String, f64)], report: &mut VerificationReport) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    for (k, v) in overrides {
        tol.set(k, *v)?;
    }
    report.param("tolerances", tol);
    if !overrides.is_empty() {
        report.param("tolerance_overrides", overrides);
    }
    Ok(tol)
}

fn expand(
    report: &mut VerificationReport,
    scene: &MetricScene,
    point: &[f64],
    quantities: &[ExpandQuantity],
) -> Result<(), Failure> {
    if point.len() != scene.dim {
        return Err(config(format!(
            "point has {} coordinates, scene has dim {}",
            point.len(),
            scene.dim
        )));
    }
    let geo = PointGeometry::at(scene, point).map_err(|e| numeric("geometry", e))?;
    let order = scene.order;
    let pr = &scene.probes;
    let mut data = serde_json::Map::new();
    for q in quantities {
        let name = q.to_possible_value().expect("no skipped variants").get_name().to_string();
        let value: Value = match q {
            ExpandQuantity::R => json!(geo.scalar_curvature().coeffs()),
            ExpandQuantity::Ginv => json!((0..=order)
                .map(|k| (0..scene.dim)
                    .map(|i| (0..scene.dim).map(|j| geo.inv(k)[(i, j)]).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>()),
            ExpandQuantity::Gamma => json!((0..=order)
                .map(|b| (0..scene.dim)
                    .map(|k| (0..scene.dim)
                        .map(|i| (0..scene.dim).map(|j| *geo.gamma(b).get(k, i, j)).collect::<Vec<_>>())
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>()),
            ExpandQuantity::Laplacian => {
                json!(laplacian_series_apply(scene, point, &pr.u).map_err(|e| numeric(&name, e))?.coeffs())
            }
            ExpandQuantity::ConformalLaplacian => json!(conformal_laplacian_series_apply(scene, point, &pr.u)
                .map_err(|e| numeric(&name, e))?
                .coeffs()),
            ExpandQuantity::T => json!(gradient_pairing_series(scene, point, &pr.f1, &pr.f2)
                .map_err(|e| numeric(&name, e))?
                .coeffs()),
            ExpandQuantity::A => json!(laplacian_of_pairing_series(scene, point, &pr.f1, &pr.f2)
                .map_err(|e| numeric(&name, e))?
                .coeffs()),
            ExpandQuantity::B => json!(hessian_pairing_series(scene, point, &pr.f1, &pr.f2)
                .map_err(|e| numeric(&name, e))?
                .coeffs()),
            ExpandQuantity::D => json!(laplacian_product_series(scene, point, &pr.f1, &pr.f2)
                .map_err(|e| numeric(&name, e))?
                .coeffs()),
            ExpandQuantity::A4 => {
                json!(a4_density_series(scene, point, &pr.f1, &pr.f2).map_err(|e| numeric(&name, e))?)
            }
            ExpandQuantity::C => {
                let pair = scene
                    .eval_metric_pair(point, METRIC_DEGREE)
                    .map_err(|e| numeric(&name, e))?;
                let vol = volume_density_series(&pair, order).map_err(|e| numeric(&name, e))?;
                json!({
                    "closed_form": vol.coeffs.coeffs(),
                    "sqrt_route": vol.sqrt_route.coeffs(),
                    "sqrt_det_base": vol.sqrt_det_base,
                })
            }
        };
        if contains_nonfinite(&value) {
            return Err(numeric(&name, "non-finite series coefficient"));
        }
        data.insert(name, value);
    }
    report.data = Value::Object(data);
    Ok(())
}

/// `json!` turns NaN and ±inf into null; any null in a numeric payload is one.
fn contains_nonfinite(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Array(a) => a.iter().any(contains_nonfinite),
        Value::Object(m) => m.values().any(contains_nonfinite),
        _ => false,
    }
}

fn wres(
    report: &mut VerificationReport,
    scene: &MetricScene,
    grid: usize,
    refine: usize,
    tol: &Tolerances,
) -> Result<(), Failure> {
    if !scene.periodic {
        return Err(config(format!("wres needs a periodic scene, {} is not", scene.label())));
    }
    let g = QuadratureGrid::for_scene(scene, grid).map_err(|e| config(e.to_string()))?;
    let gr = QuadratureGrid::for_scene(scene, refine).map_err(|e| config(e.to_string()))?;
    let p = &scene.probes;
    let rep = wres_variations(scene, &g, &p.f0, &p.f1, &p.f2).map_err(|e| numeric("wres", e))?;
    let coarse = wres_variations(scene, &gr, &p.f0, &p.f1, &p.f2).map_err(|e| numeric("wres", e))?;
    let fd = extract_series_fd_batch(
        |eps| integrate_exact_many(scene, &g, &p.f0, &p.f1, &p.f2, eps),
        scene.order.min(2),
        DEFAULT_STEP,
    )
    .map_err(|e| numeric("wres oracle", e))?;
    let fd_first = fd.coeffs.get(1).copied().unwrap_or(0.0);
    let fd_second = 2.0 * fd.coeffs.get(2).copied().unwrap_or(0.0);
    report.extend([
        Check::gated("wres/first_variation", rel_gap(rep.first_variation, fd_first), tol.integral)
            .with("engine", vec![rep.first_variation])
            .with("oracle", vec![fd_first]),
        Check::gated("wres/second_variation", rel_gap(rep.second_variation, fd_second), tol.integral)
            .with("engine", vec![rep.second_variation])
            .with("oracle", vec![fd_second]),
        Check::info(
            "wres/refinement",
            rep.series
                .iter()
                .zip(&coarse.series)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
        .with("coarse_series", coarse.series.clone())
        .note(format!("grid {grid} against {refine}")),
    ]);
    report.data = json!({ "variations": rep, "oracle": fd });
    Ok(())
}

fn run(cli: Cli, report: &mut VerificationReport) -> Result<(), Failure> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| config(format!("thread pool: {e}")))?;
        report.param("threads", k);
    }
    match cli.command {
        Command::Expand {
            scene,
            point,
            order,
            quantities,
        } => {
            let mut sc = resolve_scene(&scene)?;
            if let Some(o) = order {
                if o == 0 {
                    return Err(config("order must be at least 1"));
                }
                sc.order = o;
            }
            report.scene(sc.label(), sc.digest());
            report.param("point", &point);
            report.param("order", sc.order);
            let names: Vec<String> = quantities
                .iter()
                .map(|q| q.to_possible_value().expect("no skipped variants").get_name().to_string())
                .collect();
            report.param("quantities", names);
            expand(report, &sc, &point, &quantities)
        }
        Command::Verify {
            scene,
            suite,
            seed,
            points,
            grid,
            tol,
        } => {
            let sc = resolve_scene(&scene)?;
            report.scene(sc.label(), sc.digest());
            let seed = seed.unwrap_or_else(|| {
                let s = rand::random::<u64>();
                eprintln!("seed: {s}");
                s
            });
            let suite: Suite = suite.into();
            report.param("suite", suite.name());
            report.param("seed", seed);
            report.param("points", points);
            report.param("grid", grid);
            let tol = tolerances(&tol, report)?;
            let campaign = Campaign {
                points: sample_points(&sc, points, seed),
                grid,
                seed,
                tol,
            };
            let out = run_suite(&sc, suite, &campaign)?;
            report.extend(out.checks);
            report.data = out.data;
            Ok(())
        }
        Command::Wres {
            scene,
            grid,
            refine_grid,
            tol,
        } => {
            let sc = resolve_scene(&scene)?;
            report.scene(sc.label(), sc.digest());
            let refine = refine_grid.unwrap_or(grid / 2);
            report.param("grid", grid);
            report.param("refine_grid", refine);
            let tol = tolerances(&tol, report)?;
            wres(report, &sc, grid, refine, &tol)
        }
        Command::Scene { name } => {
            let sc = resolve_scene(&name)?;
            report.scene(sc.label(), sc.digest());
            report.data = serde_json::from_str(&sc.to_json()).map_err(|e| config(e.to_string()))?;
            Ok(())
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Expand { .. } => "expand",
        Command::Verify { .. } => "verify",
        Command::Wres { .. } => "wres",
        Command::Scene { .. } => "scene",
    }
}

fn summarize(report: &VerificationReport) {
    for c in &report.checks {
        if c.status != Status::Info || report.checks.len() <= 20 {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            eprintln!("{status:>4}  {:<40} {:.3e}", c.name, c.residual);
        }
    }
    let s = &report.summary;
    eprintln!("{} passed, {} failed, {} info", s.passed, s.failed, s.info);
    if let Some(w) = &s.worst {
        eprintln!("worst: {w}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let mut report = VerificationReport::new(command_name(&cli.command));
    let start = Instant::now();
    let result = run(cli, &mut report);
    report.timing = Some(start.elapsed().as_secs_f64());
    report.finish();
    if let Err(f) = &result {
        eprintln!("error: {}", f.message);
        if f.code == EXIT_CONFIG {
            return ExitCode::from(EXIT_CONFIG);
        }
        report.param("error", &f.message);
    }
    let text = report.to_json();
    match &out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => println!("{text}"),
    }
    summarize(&report);
    match result {
        Err(f) => ExitCode::from(f.code),
        Ok(()) if !report.passed() => ExitCode::from(EXIT_FAIL),
        Ok(()) => ExitCode::SUCCESS,
    }
}
