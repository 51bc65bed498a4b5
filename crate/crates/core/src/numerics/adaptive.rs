use crate::error::{Error, Result};
use crate::scalar::{default_tol, lit, Scalar};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Absolute/relative stopping rule for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            abs: default_tol(),
            rel: default_tol(),
            max_intervals: 4000,
        }
    }
}

impl<T: Scalar> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_err: T,
    pub evals: usize,
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    err: T,
    frozen: bool,
}

fn kronrod<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * lit(0.5);
    let mid = (a + b) * lit(0.5);
    let fc = f(mid);
    let mut rk = fc * lit(WGK[7]);
    let mut rg = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        rk += s * lit(WGK[j]);
        if j % 2 == 1 {
            rg += s * lit(WG[j / 2]);
        }
    }
    (rk * half, ((rk - rg) * half).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate satisfies `tol`. Intervals narrower than the floating point
/// resolution are frozen rather than split further.
pub fn integrate_adaptive<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    tol: Tolerance<T>,
) -> Result<QuadResult<T>> {
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            abs_err: T::zero(),
            evals: 0,
        });
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut evals = 15;
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        err: e,
        frozen: false,
    }];
    loop {
        let total: T = segs.iter().map(|s| s.value).sum();
        let err: T = segs.iter().map(|s| s.err).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NonConvergence(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        let target = tol.abs.max(tol.rel * total.abs());
        if err <= target {
            return Ok(QuadResult {
                value: total,
                abs_err: err,
                evals,
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.frozen)
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).expect("finite error"))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            // Everything left is below resolution: accept with the honest estimate.
            return Ok(QuadResult {
                value: total,
                abs_err: err,
                evals,
            });
        };
        if segs.len() >= tol.max_intervals {
            return Err(Error::NonConvergence(format!(
                "{} intervals exhausted on [{a}, {b}], error estimate {err:e}",
                segs.len()
            )));
        }
        let s = segs[i];
        let m = (s.a + s.b) * lit(0.5);
        let width = (s.b - s.a).abs();
        let scale = s.a.abs().max(s.b.abs()).max(T::min_positive_value());
        if width <= scale * T::epsilon() * lit(256.0) || m == s.a || m == s.b {
            segs[i].frozen = true;
            continue;
        }
        let (v1, e1) = kronrod(&mut f, s.a, m);
        let (v2, e2) = kronrod(&mut f, m, s.b);
        evals += 30;
        segs[i] = Segment {
            a: s.a,
            b: m,
            value: v1,
            err: e1,
            frozen: false,
        };
        segs.push(Segment {
            a: m,
            b: s.b,
            value: v2,
            err: e2,
            frozen: false,
        });
    }
}

/// Integral over `[a, upper]` for integrands concentrated near `a`, split on a
/// geometric ladder `a + 1, a + 2, a + 4, ...` so that long truncated tails do
/// not starve the region where the mass lives.
pub fn integrate_semi_infinite<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    upper: T,
    tol: Tolerance<T>,
) -> Result<QuadResult<T>> {
    let mut lo = a;
    let mut step = T::one();
    let mut out = QuadResult {
        value: T::zero(),
        abs_err: T::zero(),
        evals: 0,
    };
    while lo < upper {
        let hi = (lo + step).min(upper);
        let piece = integrate_adaptive(&mut f, lo, hi, tol)?;
        out.value += piece.value;
        out.abs_err += piece.abs_err;
        out.evals += piece.evals;
        lo = hi;
        step = step + step;
    }
    Ok(out)
}
