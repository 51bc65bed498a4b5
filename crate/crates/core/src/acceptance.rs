//! The acceptance experiments, runnable from tests and from the CLI.
//!
//! Every experiment returns a [`CriterionReport`] listing the individual
//! checks with the measured value, the target, the error and the tolerance.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{inversion_constant_with, SphereEvenForm, Theorem};
use crate::dual::{
    dual_profile, dual_shifted_mc, lambda_r, dual_shifted_mean, sub_seed, transform_value, weighted_dual_both_sides,
    DualConfig, RadialOperator, RadialWeight,
};
use crate::error::Result;
use crate::geometry::{Point, Space, SpaceKind};
use crate::inversion::{invert_thm1, invert_thm2, mader_invert_field, InversionConfig, InversionReport};
use crate::kernels::{lambda_coeffs, phi_closed, phi_oracle, psi_k_closed, KernelParams, PolyCoeffs};
use crate::numerics::{endpoint_derivative, RadialProfile};
use crate::phantom::phantom;
use crate::special::factorial;

/// One measured quantity compared against its target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub target: f64,
    pub error: f64,
    pub tolerance: f64,
    /// `true` when `error` is relative to `|target|`.
    pub relative: bool,
    pub passed: bool,
}

impl Check {
    fn absolute(label: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let error = (value - target).abs();
        Self {
            label: label.into(),
            value,
            target,
            error,
            tolerance,
            relative: false,
            passed: error < tolerance,
        }
    }

    fn relative(label: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let error = ((value - target) / target).abs();
        Self {
            label: label.into(),
            value,
            target,
            error,
            tolerance,
            relative: true,
            passed: error < tolerance,
        }
    }

    /// `|mean − target| / std_err` against a bound on the z-score.
    fn z_score(label: impl Into<String>, mean: f64, std_err: f64, target: f64, bound: f64) -> Self {
        let gap = (mean - target).abs();
        // Round-off floor for samples that are all equal.
        let error = gap / std_err.max(1e-12 * (1.0 + target.abs()));
        Self {
            label: label.into(),
            value: mean,
            target,
            error,
            tolerance: bound,
            relative: false,
            passed: error < bound,
        }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Wall-clock seconds; excluded from the serialized output so reruns
    /// compare byte for byte.
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionReport {
    fn new(id: u32, name: &str, checks: Vec<Check>, notes: Vec<String>) -> Self {
        Self {
            id,
            name: name.into(),
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
            notes,
            seconds: 0.0,
        }
    }

    fn failed(id: u32, name: &str, err: impl std::fmt::Display) -> Self {
        Self {
            id,
            name: name.into(),
            passed: false,
            checks: Vec::new(),
            notes: vec![format!("error: {err}")],
            seconds: 0.0,
        }
    }

    /// `PASS`/`FAIL` line with the worst check.
    pub fn summary_line(&self) -> String {
        let worst = self
            .checks
            .iter()
            .filter(|c| c.tolerance > 0.0)
            .max_by(|a, b| (a.error / a.tolerance).total_cmp(&(b.error / b.tolerance)));
        let detail = match worst {
            Some(c) => format!("worst: {} error {:.3e} (tol {:.1e})", c.label, c.error, c.tolerance),
            None => self.notes.first().cloned().unwrap_or_default(),
        };
        format!(
            "{} criterion {:>2}: {} [{}]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            detail
        )
    }
}

/// Seeds and sample counts of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_917,
            mc_samples: 10_000,
        }
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "log-kernel closed form against quadrature"),
    (2, "lambda coefficients use lower limit 0"),
    (3, "R^3, k=2: sign-kernel operator inversion"),
    (4, "R^2, k=1: log-kernel operator inversion"),
    (5, "R^3, k=2: weighted shifted dual inversion"),
    (6, "sphere inversions of the constant function"),
    (7, "S^4, k=2: sign of the even-k sphere constant"),
    (8, "hyperbolic inversions of (cosh d)^-6"),
    (9, "dual transform identities"),
    (10, "Lambda_r endpoint limit"),
    (11, "classical hyperplane inversion"),
    (12, "determinism of the suite output"),
];

fn name_of(id: u32) -> &'static str {
    CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown")
}

/// Runs criterion `id` (1..=12).
pub fn run_criterion(id: u32, cfg: &SuiteConfig) -> CriterionReport {
    let start = Instant::now();
    let name = name_of(id);
    let out = match id {
        1 => criterion_kernel_lemma(cfg),
        2 => criterion_lambda(),
        3 => criterion_euclid_even(),
        4 => criterion_euclid_odd(),
        5 => criterion_thm2_euclid(),
        6 => criterion_sphere(),
        7 => criterion_sphere_sign(),
        8 => criterion_hyperbolic(),
        9 => criterion_dual_identities(cfg),
        10 => criterion_lambda_limit(),
        11 => criterion_mader(),
        12 => criterion_determinism(cfg),
        _ => Err(crate::error::domain("id", id as f64, "criteria are numbered 1 to 12")),
    };
    let mut report = match out {
        Ok((checks, notes)) => CriterionReport::new(id, name, checks, notes),
        Err(e) => CriterionReport::failed(id, name, e),
    };
    report.seconds = start.elapsed().as_secs_f64();
    report
}

/// Runs criteria 1 to 11 (12 reruns them).
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    (1..=12).map(|id| run_criterion(id, cfg)).collect()
}

type Outcome = Result<(Vec<Check>, Vec<String>)>;

fn criterion_kernel_lemma(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 1));
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    let mut count = 0;
    while count < 50 {
        let m = rng.random_range(0..4);
        let alpha = rng.random_range(-0.97..(m as f64 + 0.97));
        if (alpha - alpha.round()).abs() < 0.03 {
            continue;
        }
        let u = if rng.random_bool(0.5) {
            rng.random_range(0.02..0.98)
        } else {
            rng.random_range(1.02..4.0)
        };
        let p = KernelParams::new(alpha, m)?;
        let gap = (phi_closed(&p, u)? - phi_oracle(&p, u)?).abs();
        if gap >= worst {
            worst = gap;
            worst_case = format!("alpha={alpha:.4} m={m} u={u:.4}");
        }
        count += 1;
    }
    let mut checks = vec![Check::absolute(
        format!("max |closed - oracle| over 50 cases ({worst_case})"),
        worst,
        0.0,
        1e-7,
    )];
    checks.push(Check::absolute("psi_1(0.5)", psi_k_closed(1, 0.5)?, -PI * 2f64.ln(), 1e-8));
    checks.push(Check::absolute(
        "psi_1(2)",
        psi_k_closed(1, 2.0)?,
        PI * ((2.0 + 3f64.sqrt()) / 2.0).ln(),
        1e-8,
    ));
    for (alpha, m) in [(0.3, 2), (0.5, 1), (-0.5, 0), (2.5, 3)] {
        let pc = PolyCoeffs::new(&KernelParams::new(alpha, m)?)?;
        let phi = |u: f64| pc.phi(u);
        let e = 1e-5;
        let left = 2.0 * phi(1.0 - e)? - phi(1.0 - 2.0 * e)?;
        let right = 2.0 * phi(1.0 + e)? - phi(1.0 + 2.0 * e)?;
        checks.push(Check::absolute(
            format!("one-sided limits at u=1 (alpha={alpha}, m={m})"),
            left,
            right,
            1e-6,
        ));
    }
    Ok((checks, Vec::new()))
}

fn criterion_lambda() -> Outcome {
    let l = lambda_coeffs(&KernelParams::new(0.5, 1)?);
    let checks = vec![
        Check::absolute("lambda_1(alpha=0.5, m=1)", l[0], 0.0, 1e-10),
        Check::absolute("lambda_2(alpha=0.5, m=1)", l[1], 0.5, 1e-10),
    ];
    let notes = vec![
        "the inner sum runs from l = 0; starting it at l = 1 would drop the C(alpha, m+1-r) term and \
         break the closed form (see the kernel oracle sweep)"
            .into(),
    ];
    Ok((checks, notes))
}

fn thm1_report(space: &Space, id: &str, x: &Point<f64>, center: Option<&Point<f64>>) -> Result<InversionReport<f64>> {
    let f = phantom(id, space, center)?;
    invert_thm1(space, &f, x, &InversionConfig::default())
}

fn estimate_check(label: &str, r: &InversionReport<f64>, truth: f64, tol: f64) -> Check {
    Check::relative(label, r.estimate, truth, tol)
}

fn criterion_euclid_even() -> Outcome {
    let s = Space::euclidean(3, 2)?;
    let r = thm1_report(&s, "gaussian", &Point::base(&s), None)?;
    Ok((
        vec![
            Check::relative("d^3/dr^3 L*_r at 0", r.derivative, 8.0 * PI, 1e-3),
            estimate_check("estimate of f(0)", &r, 1.0, 1e-3),
        ],
        vec![format!("d_X = {}", r.constant.value)],
    ))
}

fn criterion_euclid_odd() -> Outcome {
    let s = Space::euclidean(2, 1)?;
    let mut checks = Vec::new();
    for spatial in [[0.0, 0.0], [0.5, 0.0]] {
        let x = Point::new(&s, spatial.to_vec())?;
        let r = thm1_report(&s, "gaussian", &x, None)?;
        let truth = (-(spatial[0] * spatial[0] + spatial[1] * spatial[1])).exp();
        checks.push(estimate_check(&format!("estimate at x={spatial:?}"), &r, truth, 1e-3));
        checks.push(Check::relative(
            format!("recovered d~_X at x={spatial:?}"),
            r.derivative / truth,
            4.0 * PI,
            1e-3,
        ));
    }
    Ok((checks, Vec::new()))
}

fn criterion_thm2_euclid() -> Outcome {
    let s = Space::euclidean(3, 2)?;
    let f = phantom("gaussian", &s, None)?;
    let x = Point::base(&s);
    let cfg = InversionConfig::<f64>::default();
    let grid: Vec<f64> = (0..10).map(|j| 0.15 * j as f64).collect();
    let p = dual_profile(RadialOperator::WeightedShiftedDual, &s, &f, &x, &grid, &cfg.dual)?;
    let worst = p
        .grid()
        .iter()
        .zip(p.values())
        .map(|(&r, &v)| (v - PI * (-r * r).exp()).abs())
        .fold(0.0, f64::max);
    let r = invert_thm2(&s, &f, &x, &cfg)?;
    Ok((
        vec![
            Check::absolute("max |R*_r Rf(0) - pi e^{-r^2}| on 10 points", worst, 0.0, 1e-8),
            Check::relative("d^2/dr^2 at 0", r.derivative, -2.0 * PI, 1e-3),
            estimate_check("estimate of f(0)", &r, 1.0, 1e-3),
        ],
        Vec::new(),
    ))
}

fn criterion_sphere() -> Outcome {
    let s2 = Space::sphere(2, 1)?;
    let a = thm1_report(&s2, "constant", &Point::base(&s2), None)?;
    let s3 = Space::sphere(3, 2)?;
    let f = phantom("constant", &s3, None)?;
    let b = invert_thm2(&s3, &f, &Point::base(&s3), &InversionConfig::default())?;
    Ok((
        vec![
            estimate_check("S^2, k=1, log-kernel operator", &a, 1.0, 5e-3),
            Check::relative("d~_X for S^2, k=1", a.constant.value, 4.0 * PI, 1e-12),
            estimate_check("S^3, k=2, weighted shifted dual", &b, 1.0, 5e-3),
            Check::relative("c_X for S^3, k=2", b.constant.value, -4.0 * PI, 1e-12),
        ],
        Vec::new(),
    ))
}

fn criterion_sphere_sign() -> Outcome {
    let s = Space::sphere(4, 2)?;
    let r = thm1_report(&s, "constant", &Point::base(&s), None)?;
    let mut notes = vec![format!(
        "d^3/dr^3 L*_r at 0 = {:.6}; resolved sign of d_X: {}",
        r.derivative,
        if r.derivative < 0.0 { "negative" } else { "positive" }
    )];
    for form in [SphereEvenForm::Derived, SphereEvenForm::HalfSigned, SphereEvenForm::HalfUnsigned] {
        let c = inversion_constant_with::<f64>(&s, Theorem::Thm1Even, form)?;
        notes.push(format!(
            "{form:?}: d_X = {:.6}, estimate = {:.6}",
            c.value,
            r.derivative / c.value
        ));
    }
    Ok((
        vec![
            Check::absolute("|estimate| with the derived constant", r.estimate.abs(), 1.0, 5e-3),
            Check::absolute("estimate sign", r.estimate.signum(), 1.0, 0.5),
        ],
        notes,
    ))
}

fn criterion_hyperbolic() -> Outcome {
    let mut checks = Vec::new();
    for (n, k) in [(2, 1), (3, 2)] {
        let s = Space::hyperbolic(n, k)?;
        let r = thm1_report(&s, "hyperbolic-radial", &Point::base(&s), None)?;
        checks.push(estimate_check(&format!("H^{n}, k={k}, parity-split operator"), &r, 1.0, 5e-3));
    }
    let s = Space::hyperbolic(3, 2)?;
    let f = phantom("hyperbolic-radial", &s, None)?;
    let r = invert_thm2(&s, &f, &Point::base(&s), &InversionConfig::default())?;
    checks.push(estimate_check("H^3, k=2, weighted shifted dual", &r, 1.0, 5e-3));
    Ok((checks, Vec::new()))
}

/// A random point: spatial part with entries in `[-0.4, 0.4]`.
fn random_point(space: &Space, rng: &mut ChaCha8Rng) -> Result<Point<f64>> {
    let spatial: Vec<f64> = (0..space.n).map(|_| rng.random_range(-0.4..0.4)).collect();
    Point::from_spatial(space, &spatial)
}

fn phantom_for(space: &Space) -> &'static str {
    match space.kind {
        SpaceKind::Euclidean => "gaussian",
        SpaceKind::Sphere => "sphere-quadratic",
        SpaceKind::Hyperbolic => "hyperbolic-radial",
    }
}

fn criterion_dual_identities(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 9));
    let mut checks = Vec::new();
    let dual = DualConfig {
        mc_samples: cfg.mc_samples,
        seed: sub_seed(cfg.seed, 90),
        ..DualConfig::default()
    };
    let spaces = [
        Space::euclidean(2, 1)?,
        Space::euclidean(3, 2)?,
        Space::sphere(2, 1)?,
        Space::sphere(3, 2)?,
        Space::hyperbolic(2, 1)?,
    ];
    for (i, s) in spaces.iter().enumerate() {
        let c = random_point(s, &mut rng)?;
        let x = random_point(s, &mut rng)?;
        let r = rng.random_range(0.1..0.8);
        let f = phantom(phantom_for(s), s, Some(&c))?;
        let exact = dual_shifted_mean(s, &f, &x, r, &dual)?;
        let cfg_i = DualConfig {
            seed: sub_seed(dual.seed, i as u64),
            ..dual.clone()
        };
        let mc = dual_shifted_mc(s, |xi| transform_value(s, &f, xi, &cfg_i.quad), &x, r, &cfg_i)?;
        checks.push(Check::z_score(
            format!("R*_r Rf: {} n={} k={} r={r:.3}", s.kind, s.n, s.k),
            mc.mean,
            mc.std_err,
            exact,
            3.0,
        ));
    }
    let spaces = [Space::euclidean(2, 1)?, Space::sphere(2, 1)?, Space::hyperbolic(2, 1)?];
    for (i, s) in spaces.iter().enumerate() {
        let c = random_point(s, &mut rng)?;
        let x = random_point(s, &mut rng)?;
        let f = phantom(phantom_for(s), s, Some(&c))?;
        for (j, a) in [RadialWeight::gaussian(), RadialWeight::zero(), RadialWeight::sign_kernel(s, 0.5)]
            .iter()
            .enumerate()
        {
            let cfg_ij = DualConfig {
                seed: sub_seed(dual.seed, 100 + 10 * i as u64 + j as u64),
                ..dual.clone()
            };
            let w = weighted_dual_both_sides(s, &f, a, &x, &cfg_ij)?;
            checks.push(Check::z_score(
                format!("weighted dual, a={}: {} n={} k={}", a.name(), s.kind, s.n, s.k),
                w.lhs.mean,
                w.lhs.std_err,
                w.rhs,
                3.0,
            ));
        }
    }
    Ok((checks, vec![format!("{} Monte Carlo samples per estimate", cfg.mc_samples)]))
}

fn criterion_lambda_limit() -> Outcome {
    let s = Space::euclidean(3, 1)?;
    let x = Point::new(&s, vec![0.2, -0.1, 0.3])?;
    let f = phantom("gaussian", &s, None)?;
    let truth = f.eval(&x);
    let mut checks = Vec::new();
    let h = 0.005;
    let grid = RadialProfile::one_sided_grid(h, 24);
    for k in 1..=3usize {
        let values = grid
            .iter()
            .map(|&r| lambda_r(&s, &f, &x, r, k, &DualConfig::default()))
            .collect::<Result<Vec<f64>>>()?;
        let p = RadialProfile::new(grid.clone(), values, format!("Lambda_r, k={k}"))?;
        let d = endpoint_derivative(&p, k, k + 2)?;
        let want = factorial::<f64>(k - 1) * truth;
        checks.push(Check::relative(format!("k={k}: d^k/dr^k Lambda_r at 0"), d.value, want, 1e-3));
    }
    let s2 = Space::euclidean(3, 2)?;
    let origin = Point::base(&s2);
    let grid: Vec<f64> = (0..10).map(|j| 0.1 * j as f64).collect();
    let p = dual_profile(RadialOperator::Lambda, &s2, &f, &origin, &grid, &DualConfig::default())?;
    let worst = p
        .grid()
        .iter()
        .zip(p.values())
        .map(|(&r, &v)| (v - (1.0 - (-r * r).exp()) / 2.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::absolute("k=2 profile against (1 - e^{-r^2})/2", worst, 0.0, 1e-8));
    Ok((checks, vec![format!("x = {:?}", x.coords())]))
}

fn criterion_mader() -> Outcome {
    let cfg = InversionConfig::default();
    let mut checks = Vec::new();
    let mut mader2 = 0.0;
    for n in [2usize, 3] {
        let s = Space::euclidean(n, n - 1)?;
        let f = phantom("gaussian", &s, None)?;
        let r = mader_invert_field(&f, &Point::base(&s), &cfg)?;
        checks.push(estimate_check(&format!("R^{n} hyperplane inversion"), &r, 1.0, 1e-3));
        if n == 2 {
            mader2 = r.estimate;
        }
    }
    let s = Space::euclidean(2, 1)?;
    let t = thm1_report(&s, "gaussian", &Point::base(&s), None)?;
    checks.push(Check::relative("R^2: hyperplane vs log-kernel operator", mader2, t.estimate, 2e-3));
    Ok((checks, Vec::new()))
}

fn criterion_determinism(cfg: &SuiteConfig) -> Outcome {
    let first = suite_json(cfg);
    let second = suite_json(cfg);
    let same = first == second;
    Ok((
        vec![Check::absolute(
            "identical JSON for two runs of criteria 1-11",
            if same { 0.0 } else { 1.0 },
            0.0,
            0.5,
        )],
        vec![format!("{} bytes of JSON per run", first.len())],
    ))
}

/// JSON of criteria 1 to 11.
pub fn suite_json(cfg: &SuiteConfig) -> String {
    let reports: Vec<CriterionReport> = (1..=11).map(|id| run_criterion(id, cfg)).collect();
    serde_json::to_string_pretty(&reports).expect("reports serialize")
}
