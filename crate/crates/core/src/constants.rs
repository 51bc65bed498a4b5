//! Closed-form constants: sphere areas, the inversion constants of the
//! parity-split Mader operators and of the weighted shifted dual, the weight
//! `λ_X(r)`, the Beta-type constant `c_k` and the incomplete integral `Θ`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{Space, SpaceKind};
use crate::numerics::{integrate_endpoint_singular, Endpoint, Tolerance};
use crate::scalar::{from_usize, lit, sign_pow, Scalar};
use crate::special::{factorial, gamma_half_integer};

/// `σ_m = 2π^{(m+1)/2} / Γ((m+1)/2)`, the area of the unit sphere `S^m`.
pub fn sphere_area<T: Scalar>(m: i64) -> Result<T> {
    if m < 0 {
        return Err(domain("m", m as f64, "sphere dimension must be non-negative"));
    }
    let m = m as usize;
    let g: T = gamma_half_integer(m + 1)?;
    Ok(lit::<T>(2.0) * T::PI().powf(from_usize::<T>(m + 1) * lit(0.5)) / g)
}

/// Which inversion formula a constant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Sign-kernel operator `L*_r`, `k` even: `∂_r^{k+1} L*_r φ |_{r=0} = d_X f`.
    Thm1Even,
    /// Log-kernel operator `L̃*_r`, `k` odd: `∂_r^{k+1} L̃*_r φ |_{r=0} = d̃_X f`.
    Thm1Odd,
    /// Weighted shifted dual, `k` even: `∂_r^k λ_X(r) R*_r φ |_{r=0} = c_X f`.
    Thm2,
    /// Classical hyperplane formula with the log kernel, `n` even.
    MaderEven,
    /// Classical hyperplane formula with the sign kernel, `n` odd.
    MaderOdd,
}

/// How the sphere constant `d_X` for even `k` is formed.
///
/// The half-size value `2 σ_{n-k-1} σ_k σ_{k-1} (k-1)!/σ_n` and the value
/// obtained by carrying the Euclidean argument through the sphere reduction
/// differ by the factor `2(-1)^{(k+2)/2}`. `Derived` is the default and is
/// the one the sphere pipelines reproduce numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereEvenForm {
    /// `4(-1)^{(k+2)/2} σ_{n-k-1} σ_k σ_{k-1} (k-1)!/σ_n`.
    #[default]
    Derived,
    /// `(-1)^{(k+2)/2}` times the half-size value.
    HalfSigned,
    /// The half-size value without any sign factor.
    HalfUnsigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionConstant<T> {
    pub value: T,
    pub theorem: Theorem,
    pub space_kind: SpaceKind,
    pub n: usize,
    pub k: usize,
}

fn sigma<T: Scalar>(m: usize) -> T {
    sphere_area(m as i64).expect("non-negative sphere dimension")
}

/// Inversion constant for `theorem` on `space`, with the sphere even-`k`
/// constant in its [`SphereEvenForm::Derived`] form.
pub fn inversion_constant<T: Scalar>(space: &Space, theorem: Theorem) -> Result<InversionConstant<T>> {
    inversion_constant_with(space, theorem, SphereEvenForm::Derived)
}

pub fn inversion_constant_with<T: Scalar>(
    space: &Space,
    theorem: Theorem,
    form: SphereEvenForm,
) -> Result<InversionConstant<T>> {
    let (n, k) = (space.n, space.k);
    let even = k % 2 == 0;
    let ki = k as i64;
    let fact: T = factorial(k - 1);
    let sk1: T = sigma(k - 1);
    let snk: T = sigma(n - k - 1);
    let two = lit::<T>(2.0);
    let value = match theorem {
        Theorem::Thm1Even => {
            if !even {
                return Err(Error::Parity(format!("Thm1Even needs even k, got k = {k}")));
            }
            let sign = sign_pow::<T>((ki + 2) / 2);
            match space.kind {
                SpaceKind::Euclidean | SpaceKind::Hyperbolic => two * sign * snk * sk1 * fact,
                SpaceKind::Sphere => {
                    let half = two * snk * sigma::<T>(k) * sk1 * fact / sigma::<T>(n);
                    match form {
                        SphereEvenForm::Derived => two * sign * half,
                        SphereEvenForm::HalfSigned => sign * half,
                        SphereEvenForm::HalfUnsigned => half,
                    }
                }
            }
        }
        Theorem::Thm1Odd => {
            if even {
                return Err(Error::Parity(format!("Thm1Odd needs odd k, got k = {k}")));
            }
            let sign = sign_pow::<T>((ki - 1) / 2);
            match space.kind {
                SpaceKind::Euclidean | SpaceKind::Hyperbolic => T::PI() * sign * snk * sk1 * fact,
                SpaceKind::Sphere => {
                    two * T::PI() * sign * snk * sigma::<T>(k) * sk1 * fact / sigma::<T>(n)
                }
            }
        }
        Theorem::Thm2 => {
            if !even {
                return Err(Error::Parity(format!("Thm2 needs even k, got k = {k}")));
            }
            let base = sign_pow::<T>(ki / 2) * fact * sk1;
            match space.kind {
                SpaceKind::Euclidean | SpaceKind::Hyperbolic => base,
                SpaceKind::Sphere => two * base,
            }
        }
        Theorem::MaderEven | Theorem::MaderOdd => {
            return Err(Error::Parity(
                "the hyperplane constants are produced by `mader_constant`".into(),
            ))
        }
    };
    Ok(InversionConstant {
        value,
        theorem,
        space_kind: space.kind,
        n,
        k,
    })
}

/// Constant of the classical hyperplane inversion on `R^n`.
///
/// Even `n`: `A_0 = (-1)^{(n-2)/2} / (π (n-2)! σ_{n-2})`.
/// Odd `n`: `A_1 = (-1)^{(n+1)/2} / (2 (n-2)! σ_{n-2})`, paired with
/// `F_1(t) = ∫ G(s) sgn(s - t) ds`; see [`mader_constant_opposite`] for the
/// opposite sign.
pub fn mader_constant<T: Scalar>(n: usize) -> Result<InversionConstant<T>> {
    let mut c = mader_constant_opposite::<T>(n)?;
    if n % 2 == 1 {
        c.value = -c.value;
    }
    Ok(c)
}

/// Hyperplane constants with the odd-`n` sign `(-1)^{(n-1)/2}`; with `F_1`
/// built from `sgn(s - t)` this reconstructs `-f`.
pub fn mader_constant_opposite<T: Scalar>(n: usize) -> Result<InversionConstant<T>> {
    if n < 2 {
        return Err(domain("n", n as f64, "hyperplane inversion needs n >= 2"));
    }
    let fact: T = factorial(n - 2);
    let s: T = sigma(n - 2);
    let ni = n as i64;
    let (value, theorem) = if n.is_multiple_of(2) {
        (sign_pow::<T>((ni - 2) / 2) / (T::PI() * fact * s), Theorem::MaderEven)
    } else {
        (
            sign_pow::<T>((ni - 1) / 2) / (lit::<T>(2.0) * fact * s),
            Theorem::MaderOdd,
        )
    };
    Ok(InversionConstant {
        value,
        theorem,
        space_kind: SpaceKind::Euclidean,
        n,
        k: n - 1,
    })
}

/// `λ_X(r)`: 1 on `R^n`, `(1 - r²)^{(k-1)/2}` on `S^n`, `(1 + r²)^{(k-1)/2}` on `H^n`.
pub fn lambda_weight<T: Scalar>(space: &Space, r: T) -> Result<T> {
    if r < T::zero() {
        return Err(domain("r", r, "distance must be non-negative"));
    }
    let p = from_usize::<T>(space.k - 1) * lit(0.5);
    match space.kind {
        SpaceKind::Euclidean => Ok(T::one()),
        SpaceKind::Sphere => {
            if r >= T::one() {
                return Err(domain("r", r, "sphere distance function must be < 1"));
            }
            Ok((T::one() - r * r).powf(p))
        }
        SpaceKind::Hyperbolic => Ok((T::one() + r * r).powf(p)),
    }
}

/// `c_k = ∫₀¹ (1 - v²)^{k/2 - 1} dv = √π Γ(k/2) / (2 Γ((k+1)/2))`.
pub fn c_k_value<T: Scalar>(k: usize) -> Result<T> {
    if k < 1 {
        return Err(domain("k", k as f64, "k must be positive"));
    }
    let num: T = gamma_half_integer(k)?;
    let den: T = gamma_half_integer(k + 1)?;
    Ok(T::PI().sqrt() * num / (lit::<T>(2.0) * den))
}

/// `Θ(u) = ∫₁ᵘ (v² - 1)^{k/2 - 1} dv` for `u >= 1`.
pub fn theta_k<T: Scalar>(u: T, k: usize) -> Result<T> {
    if k < 1 {
        return Err(domain("k", k as f64, "k must be positive"));
    }
    if !(u >= T::one()) {
        return Err(domain("u", u, "Θ is defined for u >= 1"));
    }
    let half = lit::<T>(0.5);
    let w = (u * u - T::one()).max(T::zero()).sqrt();
    let acosh = (u + w).ln();
    Ok(match k {
        1 => acosh,
        2 => u - T::one(),
        3 => (u * w - acosh) * half,
        4 => (u - T::one()) * (u - T::one()) * (u + lit(2.0)) / lit(3.0),
        _ if k.is_multiple_of(2) => theta_k_continued(u, k)?,
        _ => {
            let p = from_usize::<T>(k) * half - T::one();
            integrate_endpoint_singular(
                |_, d: T| (d * (lit::<T>(2.0) + d)).powf(p),
                T::one(),
                u,
                Endpoint::Lower,
                Tolerance::default(),
            )?
        }
    })
}

/// Polynomial continuation of `Θ` to all real `u` for even `k`:
/// `Θ(u) = Σ_i C(j, i) (-1)^{j-i} (u^{2i+1} - 1)/(2i + 1)` with `j = k/2 - 1`.
pub fn theta_k_continued<T: Scalar>(u: T, k: usize) -> Result<T> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::Parity(format!(
            "the polynomial continuation of Θ needs even k, got k = {k}"
        )));
    }
    let j = k / 2 - 1;
    let mut binom = T::one();
    let mut acc = T::zero();
    for i in 0..=j {
        if i > 0 {
            binom = binom * from_usize::<T>(j + 1 - i) / from_usize::<T>(i);
        }
        let odd = from_usize::<T>(2 * i + 1);
        acc += binom * sign_pow::<T>((j - i) as i64) * (u.powi(2 * i as i32 + 1) - T::one()) / odd;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area::<f64>(0).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(sphere_area::<f64>(1).unwrap(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area::<f64>(2).unwrap(), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area::<f64>(3).unwrap(), 2.0 * PI * PI, max_relative = 1e-15);
        assert!(sphere_area::<f64>(-1).is_err());
    }

    #[test]
    fn sphere_area_recurrence() {
        for m in 2..30 {
            let lhs = sphere_area::<f64>(m).unwrap();
            let rhs = 2.0 * PI * sphere_area::<f64>(m - 2).unwrap() / (m as f64 - 1.0);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn desk_constants() {
        let e32 = Space::euclidean(3, 2).unwrap();
        let d = inversion_constant::<f64>(&e32, Theorem::Thm1Even).unwrap();
        assert_relative_eq!(d.value, 8.0 * PI, max_relative = 1e-14);
        let c = inversion_constant::<f64>(&e32, Theorem::Thm2).unwrap();
        assert_relative_eq!(c.value, -2.0 * PI, max_relative = 1e-14);
        let s21 = Space::sphere(2, 1).unwrap();
        let dt = inversion_constant::<f64>(&s21, Theorem::Thm1Odd).unwrap();
        assert_relative_eq!(dt.value, 4.0 * PI, max_relative = 1e-14);
        let s32 = Space::sphere(3, 2).unwrap();
        let cs = inversion_constant::<f64>(&s32, Theorem::Thm2).unwrap();
        assert_relative_eq!(cs.value, -4.0 * PI, max_relative = 1e-14);
        let e21 = Space::euclidean(2, 1).unwrap();
        let d21 = inversion_constant::<f64>(&e21, Theorem::Thm1Odd).unwrap();
        assert_relative_eq!(d21.value, 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn sphere_even_forms() {
        // n = 4, k = 2: half-size value 2 σ_1 σ_2 σ_1 / σ_4 = 12π.
        let s42 = Space::sphere(4, 2).unwrap();
        let get = |form| inversion_constant_with::<f64>(&s42, Theorem::Thm1Even, form).unwrap().value;
        assert_relative_eq!(get(SphereEvenForm::HalfUnsigned), 12.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(get(SphereEvenForm::HalfSigned), 12.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(get(SphereEvenForm::Derived), 24.0 * PI, max_relative = 1e-14);
        // k = 4 flips the sign of the signed forms.
        let s54 = Space::sphere(5, 4).unwrap();
        let signed = inversion_constant_with::<f64>(&s54, Theorem::Thm1Even, SphereEvenForm::HalfSigned)
            .unwrap()
            .value;
        assert!(signed < 0.0);
    }

    #[test]
    fn parity_mismatch() {
        let e31 = Space::euclidean(3, 1).unwrap();
        assert!(matches!(
            inversion_constant::<f64>(&e31, Theorem::Thm1Even),
            Err(Error::Parity(_))
        ));
        assert!(inversion_constant::<f64>(&e31, Theorem::Thm2).is_err());
        let e32 = Space::euclidean(3, 2).unwrap();
        assert!(inversion_constant::<f64>(&e32, Theorem::Thm1Odd).is_err());
    }

    #[test]
    fn hyperplane_constants() {
        let a0 = mader_constant::<f64>(2).unwrap();
        assert_relative_eq!(a0.value, 1.0 / (2.0 * PI), max_relative = 1e-14);
        let a1 = mader_constant::<f64>(3).unwrap();
        assert_relative_eq!(a1.value, 1.0 / (4.0 * PI), max_relative = 1e-14);
        let opposite = mader_constant_opposite::<f64>(3).unwrap();
        assert_relative_eq!(opposite.value, -1.0 / (4.0 * PI), max_relative = 1e-14);
    }

    #[test]
    fn lambda_weights() {
        let e = Space::euclidean(4, 2).unwrap();
        assert_eq!(lambda_weight(&e, 3.0).unwrap(), 1.0);
        let s = Space::sphere(4, 3).unwrap();
        assert_abs_diff_eq!(lambda_weight(&s, 0.6).unwrap(), 0.64, epsilon = 1e-15);
        assert!(lambda_weight(&s, 1.0).is_err());
        let h = Space::hyperbolic(3, 1).unwrap();
        assert_eq!(lambda_weight(&h, 5.0).unwrap(), 1.0);
    }

    #[test]
    fn c_k_matches_quadrature() {
        assert_abs_diff_eq!(c_k_value::<f64>(2).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c_k_value::<f64>(1).unwrap(), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c_k_value::<f64>(3).unwrap(), PI / 4.0, epsilon = 1e-15);
        for k in 1..=8usize {
            let p = k as f64 / 2.0 - 1.0;
            let q = integrate_endpoint_singular(
                |_, d: f64| (d * (2.0 - d)).powf(p),
                0.0,
                1.0,
                Endpoint::Upper,
                Tolerance::new(1e-14, 1e-14),
            )
            .unwrap();
            assert_abs_diff_eq!(c_k_value::<f64>(k).unwrap(), q, epsilon = 1e-10);
        }
        assert!(c_k_value::<f64>(0).is_err());
    }

    #[test]
    fn theta_closed_forms_match_quadrature() {
        assert_abs_diff_eq!(theta_k(3.0, 2).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(theta_k(2.0f64, 1).unwrap(), 2f64.acosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(theta_k(2.0f64, 1).unwrap(), 1.316_957_896_924_816_7, epsilon = 1e-14);
        for k in 1..=6usize {
            assert_eq!(theta_k(1.0f64, k).unwrap(), 0.0);
            for u in [1.1f64, 2.0, 5.0] {
                let p = k as f64 / 2.0 - 1.0;
                let q = integrate_endpoint_singular(
                    |_, d: f64| (d * (2.0 + d)).powf(p),
                    1.0,
                    u,
                    Endpoint::Lower,
                    Tolerance::new(1e-14, 1e-14),
                )
                .unwrap();
                assert_abs_diff_eq!(theta_k(u, k).unwrap(), q, epsilon = 1e-10);
            }
        }
        assert!(theta_k(0.5f64, 2).is_err());
    }

    #[test]
    fn continued_theta_is_polynomial() {
        // k = 2: u - 1 everywhere; k = 4: u³/3 - u + 2/3.
        for u in [0.0f64, 0.25, 0.8, 1.5] {
            assert_abs_diff_eq!(theta_k_continued(u, 2).unwrap(), u - 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(
                theta_k_continued(u, 4).unwrap(),
                u.powi(3) / 3.0 - u + 2.0 / 3.0,
                epsilon = 1e-15
            );
        }
        assert!(theta_k_continued(0.5f64, 3).is_err());
    }

    #[test]
    fn single_precision_constants() {
        let v: f32 = sphere_area(2).unwrap();
        assert!((v - 4.0 * std::f32::consts::PI).abs() < 1e-5);
    }
}
