use crate::error::{domain, Error, Result};
use crate::scalar::{default_tol, lit, Scalar};

use super::adaptive::{integrate_adaptive, Tolerance};

/// Which endpoint carries the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// Adaptive quadrature after the quadratic substitution `|t - t_s| = (b - a) s²`
/// anchored at the singular endpoint `t_s`. Square-root and logarithmic
/// endpoint behavior become (at worst) `s log s`, which the adaptive rule
/// resolves quickly.
///
/// The integrand receives `(t, d)` where `d = |t - t_s|` is computed exactly
/// from `s`, so factors like `(1 - t)^p` can be formed without cancellation.
pub fn integrate_endpoint_singular<T: Scalar, F: FnMut(T, T) -> T>(
    mut f: F,
    a: T,
    b: T,
    end: Endpoint,
    tol: Tolerance<T>,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let len = b - a;
    let two = lit::<T>(2.0);
    let g = |s: T| {
        let d = len * s * s;
        if d == T::zero() {
            return T::zero();
        }
        let t = match end {
            Endpoint::Lower => a + d,
            Endpoint::Upper => b - d,
        };
        f(t, d) * two * len * s
    };
    Ok(integrate_adaptive(g, T::zero(), T::one(), tol)?.value)
}

/// Integrates `f` over `[a, b]` where `f` may have a logarithmic singularity
/// at `s ∈ [a, b]`.
///
/// Each side of `s` is mapped by `distance = w²` and integrated by adaptive
/// Gauss–Kronrod in `w`, whose bisection grades the mesh toward the singular
/// point and toward weak endpoint singularities at `a` and `b`. The result is
/// accepted only if a second pass at a sixteen times tighter tolerance moves
/// it by less than `1e-10` (or the precision floor for `f32`).
pub fn quad_log_singular<T: Scalar, F: Fn(T) -> T>(f: F, a: T, b: T, s: T) -> Result<T> {
    if !(a <= s && s <= b) {
        return Err(domain("s", s.to_f64().unwrap_or(f64::NAN), "singular point must lie in [a, b]"));
    }
    let accept = lit::<T>(1e-10).max(default_tol::<T>() * lit(100.0));
    let coarse = accept * lit(0.01);
    let fine = coarse / lit(16.0);
    let first = both_sides(&f, a, b, s, coarse)?;
    let second = both_sides(&f, a, b, s, fine)?;
    if (first - second).abs() >= accept {
        return Err(Error::NonConvergence(format!(
            "refinement moved the log-singular integral by {:e}",
            (first - second).abs().to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(second)
}

fn both_sides<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T, s: T, tol: T) -> Result<T> {
    Ok(one_side(f, s, s - a, -T::one(), tol)? + one_side(f, s, b - s, T::one(), tol)?)
}

fn one_side<T: Scalar, F: Fn(T) -> T>(f: &F, s: T, len: T, dir: T, tol: T) -> Result<T> {
    if len <= T::zero() {
        return Ok(T::zero());
    }
    let two = lit::<T>(2.0);
    let g = |w: T| {
        let t = s + dir * w * w;
        if t == s {
            return T::zero();
        }
        f(t) * two * w
    };
    let q = integrate_adaptive(
        g,
        T::zero(),
        len.sqrt(),
        Tolerance {
            abs: tol,
            rel: T::zero(),
            max_intervals: 2000,
        },
    )
    .map_err(|e| Error::NonConvergence(format!("log-singular side integral: {e}")))?;
    if !(q.abs_err <= tol * lit(10.0)) {
        return Err(Error::NonConvergence(format!(
            "log-singular side integral stalled with error estimate {:e}",
            q.abs_err.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(q.value)
}
