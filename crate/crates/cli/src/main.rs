//! `georadon`: reproducible experiments on totally geodesic Radon transforms.
//!
//! Each command prints one JSON document on stdout and writes it, together
//! with any CSV profile, to the output directory (`--out-dir`, else
//! `GEORADON_OUT_DIR`, else the working directory).
//!
//! Exit status: 0 on success, 1 on usage or domain errors, 2 when a
//! verification command misses its tolerance.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use georadon::acceptance::{run_criterion, SuiteConfig, CRITERIA};
use georadon::constants::{inversion_constant_with, mader_constant, SphereEvenForm, Theorem};
use georadon::dual::{dual_shifted_mc, dual_shifted_mean, transform_value, DualConfig};
use georadon::geometry::{geodesic_at_distance, haar_rotation};
use georadon::inversion::{invert_thm1, invert_thm2, mader_invert_field, InversionConfig};
use georadon::kernels::{phi_closed, phi_oracle, psi_k_closed, psi_sign, KernelParams};
use georadon::phantom::phantom;
use georadon::transforms::{mean_profile, radon_forward, MeanVariant};
use georadon::{Point64, QuadConfig64, ScalarField64, Space, SpaceKind};

#[derive(Parser, Debug)]
#[command(name = "georadon", version, about = "Totally geodesic Radon transforms and their Mader-type inversion")]
struct Cli {
    /// Directory for the JSON and CSV artifacts.
    #[arg(long, global = true, env = "GEORADON_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inversion constants of a space.
    Constants {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t = SphereForm::Derived)]
        sphere_form: SphereForm,
    },
    /// Closed-form log kernel against quadrature on a grid of u.
    LemmaVerify {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        m: i32,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long, default_value_t = 4.0)]
        u_max: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Tabulates the one-dimensional kernel: the log kernel for odd k, the
    /// sign kernel for even k.
    Psi {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        u_min: f64,
        #[arg(long, default_value_t = 3.0)]
        u_max: f64,
        #[arg(long, default_value_t = 60)]
        points: usize,
    },
    /// Radon transform over a random totally geodesic submanifold at a
    /// given distance from a point.
    Forward {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0.3)]
        distance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Profile of spherical (or tilde) means about a point.
    Means {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated section parameters (radius, cosine or hyperbolic cosine).
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
        t: Vec<f64>,
        #[arg(long)]
        tilde: bool,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Reconstructs f at a point.
    Invert {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, default_value_t = 0.005)]
        grid_h: f64,
        #[arg(long, default_value_t = 24)]
        grid_j: usize,
        #[arg(long)]
        fit_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = SphereForm::Derived)]
        sphere_form: SphereForm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Monte Carlo shifted dual of Rf against its mean-value reduction.
    Crosscheck {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0.3)]
        r: f64,
        #[arg(long, default_value_t = 10_000)]
        mc_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allowed number of standard errors.
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Runs the acceptance suite.
    Report {
        /// Run only these criteria (comma-separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteConfig::default().mc_samples)]
        mc_samples: usize,
    },
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: SpaceArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

impl SpaceArgs {
    fn build(&self) -> Result<Space> {
        let kind = match self.space {
            SpaceArg::Euclidean => SpaceKind::Euclidean,
            SpaceArg::Sphere => SpaceKind::Sphere,
            SpaceArg::Hyperbolic => SpaceKind::Hyperbolic,
        };
        Ok(Space::new(kind, self.n, self.k)?)
    }
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Phantom id: gaussian, constant, sphere-quadratic, hyperbolic-radial,
    /// hyperbolic-radial4.
    #[arg(long, default_value = "gaussian")]
    phantom: String,
    /// Phantom center as comma-separated ambient coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    /// Evaluation point as comma-separated ambient coordinates (default:
    /// the origin or base point).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
}

impl FieldArgs {
    fn build(&self, space: &Space) -> Result<(ScalarField64, Point64)> {
        let center = self.center.as_ref().map(|c| parse_point(space, c, "center")).transpose()?;
        let f = phantom(&self.phantom, space, center.as_ref())?;
        let x = match &self.point {
            Some(p) => parse_point(space, p, "point")?,
            None => Point64::base(space),
        };
        Ok((f, x))
    }
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// Gauss-Legendre nodes per panel.
    #[arg(long, default_value_t = QuadConfig64::default().nodes)]
    quad_nodes: usize,
    /// Nodes per angle of the direction-sphere rules.
    #[arg(long, default_value_t = QuadConfig64::default().direction_nodes)]
    direction_nodes: usize,
}

impl QuadArgs {
    fn build(&self) -> Result<QuadConfig64> {
        positive("quad-nodes", self.quad_nodes)?;
        positive("direction-nodes", self.direction_nodes)?;
        Ok(QuadConfig64::default().with_nodes(self.quad_nodes, self.direction_nodes))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SpaceArg {
    Euclidean,
    Sphere,
    Hyperbolic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TheoremArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Mader,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SphereForm {
    Derived,
    HalfSigned,
    HalfUnsigned,
}

impl From<SphereForm> for SphereEvenForm {
    fn from(f: SphereForm) -> Self {
        match f {
            SphereForm::Derived => SphereEvenForm::Derived,
            SphereForm::HalfSigned => SphereEvenForm::HalfSigned,
            SphereForm::HalfUnsigned => SphereEvenForm::HalfUnsigned,
        }
    }
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        bail!("`--{name}` must be positive");
    }
    Ok(())
}

fn parse_point(space: &Space, coords: &[f64], what: &str) -> Result<Point64> {
    Point64::new(space, coords.to_vec()).with_context(|| format!("invalid --{what} {coords:?}"))
}

/// Evenly spaced grid on `[a, b]` with `count` points.
fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}

/// Result of a command: JSON, optional CSV rows, and whether a verification
/// tolerance was met.
struct Outcome {
    json: Value,
    csv: Option<(Vec<&'static str>, Vec<Vec<f64>>)>,
    ok: bool,
}

impl Outcome {
    fn json(json: Value) -> Self {
        Self { json, csv: None, ok: true }
    }
}

fn profile_csv(grid: &[f64], values: &[f64]) -> Option<(Vec<&'static str>, Vec<Vec<f64>>)> {
    Some((vec!["r", "value"], grid.iter().zip(values).map(|(&r, &v)| vec![r, v]).collect()))
}

fn space_json(s: &Space) -> Value {
    json!({ "space": s.kind.to_string(), "n": s.n, "k": s.k })
}

fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Constants { space, sphere_form } => {
            let s = space.build()?;
            let form = SphereEvenForm::from(*sphere_form);
            let main = if s.k % 2 == 0 { Theorem::Thm1Even } else { Theorem::Thm1Odd };
            let c1 = inversion_constant_with::<f64>(&s, main, form)?;
            let mut out = space_json(&s);
            out["theorem"] = json!(format!("{:?}", c1.theorem));
            out["constant"] = json!(c1.value);
            if s.k % 2 == 0 {
                out["constant_weighted_dual"] = json!(inversion_constant_with::<f64>(&s, Theorem::Thm2, form)?.value);
            }
            if s.kind == SpaceKind::Euclidean && s.k + 1 == s.n {
                out["constant_hyperplane"] = json!(mader_constant::<f64>(s.n)?.value);
            }
            Ok(Outcome::json(out))
        }
        Command::LemmaVerify {
            alpha,
            m,
            points,
            u_max,
            tol,
        } => {
            positive("points", *points)?;
            let p = KernelParams::new(*alpha, *m)?;
            let mut rows = Vec::with_capacity(*points);
            let mut worst = 0.0f64;
            for u in linspace(0.02, *u_max, *points) {
                if (u - 1.0).abs() < 1e-3 {
                    continue;
                }
                let closed = phi_closed(&p, u)?;
                let oracle = phi_oracle(&p, u)?;
                let err = (closed - oracle).abs();
                worst = worst.max(err);
                rows.push(vec![u, closed, oracle, err]);
            }
            let ok = worst < *tol;
            Ok(Outcome {
                json: json!({ "alpha": alpha, "m": m, "points": rows.len(), "max_abs_error": worst, "tolerance": tol, "passed": ok }),
                csv: Some((vec!["u", "closed", "oracle", "abs_error"], rows)),
                ok,
            })
        }
        Command::Psi { k, u_min, u_max, points } => {
            positive("points", *points)?;
            if !(*u_min > 0.0 && u_max > u_min) {
                bail!("need 0 < --u-min < --u-max");
            }
            let mut grid = Vec::new();
            let mut values = Vec::new();
            for u in linspace(*u_min, *u_max, *points) {
                let v = if k % 2 == 1 {
                    if u == 1.0 {
                        continue;
                    }
                    psi_k_closed(*k, u)?
                } else {
                    psi_sign(*k, u)?
                };
                grid.push(u);
                values.push(v);
            }
            let kind = if k % 2 == 1 { "log" } else { "sign" };
            Ok(Outcome {
                json: json!({ "k": k, "kernel": kind, "points": grid.len() }),
                csv: Some((vec!["u", "value"], grid.iter().zip(&values).map(|(&u, &v)| vec![u, v]).collect())),
                ok: true,
            })
        }
        Command::Forward {
            space,
            field,
            distance,
            seed,
            quad,
        } => {
            let s = space.build()?;
            let (f, x) = field.build(&s)?;
            let q = quad.build()?;
            let xi = geodesic_at_distance(&s, &x, *distance, &haar_rotation(&s, *seed))?;
            let value = radon_forward(&s, &f, &xi, &q)?;
            let exact = f.exact_radon(&s, &xi);
            let mut out = space_json(&s);
            out["phantom"] = json!(f.name());
            out["distance"] = json!(distance);
            out["estimate"] = json!(value);
            out["truth"] = json!(exact);
            out["rel_error"] = json!(exact.map(|t| ((value - t) / t).abs()));
            out["seed"] = json!(seed);
            Ok(Outcome::json(out))
        }
        Command::Means {
            space,
            field,
            t,
            tilde,
            quad,
        } => {
            let s = space.build()?;
            let (f, x) = field.build(&s)?;
            if t.is_empty() {
                bail!("`--t` needs at least one value");
            }
            let variant = if *tilde { MeanVariant::Tilde } else { MeanVariant::Plain };
            let p = mean_profile(&s, &f, &x, t, variant, &quad.build()?)?;
            let mut out = space_json(&s);
            out["phantom"] = json!(f.name());
            out["variant"] = json!(if *tilde { "tilde" } else { "plain" });
            out["points"] = json!(p.grid.len());
            Ok(Outcome {
                json: out,
                csv: profile_csv(&p.grid, &p.values),
                ok: true,
            })
        }
        Command::Invert {
            space,
            field,
            theorem,
            grid_h,
            grid_j,
            fit_degree,
            sphere_form,
            seed,
            quad,
        } => {
            let s = space.build()?;
            let (f, x) = field.build(&s)?;
            if (*grid_h).is_nan() || *grid_h <= 0.0 {
                bail!("`--grid-h` must be positive");
            }
            positive("grid-j", *grid_j)?;
            let cfg = InversionConfig {
                grid_h: *grid_h,
                grid_j: *grid_j,
                fit_degree: *fit_degree,
                sphere_form: (*sphere_form).into(),
                dual: DualConfig {
                    quad: quad.build()?,
                    seed: *seed,
                    ..DualConfig::default()
                },
                ..InversionConfig::default()
            };
            let r = match theorem {
                TheoremArg::One => invert_thm1(&s, &f, &x, &cfg)?,
                TheoremArg::Two => invert_thm2(&s, &f, &x, &cfg)?,
                TheoremArg::Mader => {
                    if s.kind != SpaceKind::Euclidean || s.k + 1 != s.n {
                        bail!("--theorem mader needs --space euclidean with k = n - 1");
                    }
                    mader_invert_field(&f, &x, &cfg)?
                }
            };
            let mut out = space_json(&s);
            out["phantom"] = json!(f.name());
            out["point"] = json!(x.coords());
            out["theorem"] = json!(format!("{:?}", r.constant.theorem));
            out["estimate"] = json!(r.estimate);
            out["truth"] = json!(r.truth);
            out["rel_error"] = json!(r.rel_error);
            out["constant"] = json!(r.constant.value);
            out["derivative"] = json!(r.derivative);
            out["derivative_order"] = json!(r.derivative_order);
            out["residual"] = json!(r.conditioning);
            out["warning"] = json!(r.warning);
            out["seed"] = json!(seed);
            Ok(Outcome {
                json: out,
                csv: profile_csv(r.profile.grid(), r.profile.values()),
                ok: true,
            })
        }
        Command::Crosscheck {
            space,
            field,
            r,
            mc_samples,
            seed,
            sigmas,
            quad,
        } => {
            let s = space.build()?;
            let (f, x) = field.build(&s)?;
            let cfg = DualConfig {
                mc_samples: *mc_samples,
                quad: quad.build()?,
                seed: *seed,
                ..DualConfig::default()
            };
            let exact = dual_shifted_mean(&s, &f, &x, *r, &cfg)?;
            let mc = dual_shifted_mc(&s, |xi| transform_value(&s, &f, xi, &cfg.quad), &x, *r, &cfg)?;
            // Floor at round-off so exactly symmetric cases do not divide by ~0.
            let se = mc.std_err.max(1e-12 * (1.0 + exact.abs()));
            let z = (mc.mean - exact).abs() / se;
            let ok = z < *sigmas;
            let mut out = space_json(&s);
            out["phantom"] = json!(f.name());
            out["r"] = json!(r);
            out["estimate"] = json!(mc.mean);
            out["std_err"] = json!(mc.std_err);
            out["samples"] = json!(mc.samples);
            out["truth"] = json!(exact);
            out["rel_error"] = json!(((mc.mean - exact) / exact).abs());
            out["z_score"] = json!(z);
            out["passed"] = json!(ok);
            out["seed"] = json!(seed);
            Ok(Outcome { json: out, csv: None, ok })
        }
        Command::Report { only, seed, mc_samples } => {
            let cfg = SuiteConfig {
                seed: *seed,
                mc_samples: *mc_samples,
            };
            let ids: Vec<u32> = if only.is_empty() {
                CRITERIA.iter().map(|c| c.0).collect()
            } else {
                only.clone()
            };
            let mut reports = Vec::with_capacity(ids.len());
            for id in ids {
                if !CRITERIA.iter().any(|c| c.0 == id) {
                    bail!("unknown criterion {id}; ids run from 1 to {}", CRITERIA.len());
                }
                let r = run_criterion(id, &cfg);
                eprintln!("{}", r.summary_line());
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.passed);
            Ok(Outcome {
                json: json!({ "seed": seed, "mc_samples": mc_samples, "passed": ok, "criteria": reports }),
                csv: None,
                ok,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Constants { .. } => "constants",
        Command::LemmaVerify { .. } => "lemma-verify",
        Command::Psi { .. } => "psi",
        Command::Forward { .. } => "forward",
        Command::Means { .. } => "means",
        Command::Invert { .. } => "invert",
        Command::Crosscheck { .. } => "crosscheck",
        Command::Report { .. } => "report",
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

fn emit<T: Serialize>(dir: &Path, name: &str, json: &T, csv: Option<&(Vec<&str>, Vec<Vec<f64>>)>) -> Result<()> {
    let text = serde_json::to_string_pretty(json)?;
    println!("{text}");
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    fs::write(dir.join(format!("{name}.json")), format!("{text}\n"))?;
    if let Some((header, rows)) = csv {
        write_csv(&dir.join(format!("{name}.csv")), header, rows)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&dir, command_name(&cli.command), &outcome.json, outcome.csv.as_ref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("tolerance check failed");
        ExitCode::from(2)
    }
}
