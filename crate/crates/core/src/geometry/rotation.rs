use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::linalg::Mat;
use crate::scalar::{dot, lit, Scalar};

use super::{Point, Space, SpaceKind};

/// An orthogonal (`R^n`, `S^n`) or Lorentz-orthogonal (`H^n`) matrix of
/// the ambient dimension with determinant `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation<T> {
    matrix: Mat<T>,
    lorentz: bool,
}

fn lorentz_gram<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    // Mᵀ J M with J = diag(-1, ..., -1, 1).
    let n = m.rows;
    let mut jm = m.clone();
    for i in 0..n - 1 {
        for j in 0..n {
            jm[(i, j)] = -jm[(i, j)];
        }
    }
    m.transpose().matmul(&jm)
}

fn lorentz_metric<T: Scalar>(n: usize) -> Mat<T> {
    let mut j = Mat::identity(n);
    for i in 0..n - 1 {
        j[(i, i)] = -T::one();
    }
    j
}

impl<T: Scalar> Rotation<T> {
    pub fn identity(space: &Space) -> Self {
        Self {
            matrix: Mat::identity(space.ambient_dim()),
            lorentz: space.kind == SpaceKind::Hyperbolic,
        }
    }

    /// Wraps `matrix`, checking group membership within `1e-10`.
    pub fn from_matrix(space: &Space, matrix: Mat<T>) -> Result<Self> {
        let dim = space.ambient_dim();
        if matrix.rows != dim || matrix.cols != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.rows.max(matrix.cols),
            });
        }
        let r = Self {
            matrix,
            lorentz: space.kind == SpaceKind::Hyperbolic,
        };
        let defect = r.group_defect();
        let tol = lit::<T>(1e-10).max(T::epsilon() * lit(1024.0));
        if !(defect <= tol) {
            return Err(Error::InvalidGeodesic(format!(
                "matrix is not in the isometry group: defect {defect}"
            )));
        }
        if !((r.matrix.determinant() - T::one()).abs() <= tol) {
            return Err(Error::InvalidGeodesic("determinant is not +1".into()));
        }
        if r.lorentz && r.matrix[(dim - 1, dim - 1)] <= T::zero() {
            return Err(Error::InvalidGeodesic("Lorentz matrix reverses time".into()));
        }
        Ok(r)
    }

    pub(crate) fn from_raw(matrix: Mat<T>, lorentz: bool) -> Self {
        Self { matrix, lorentz }
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn is_lorentz(&self) -> bool {
        self.lorentz
    }

    /// Max-entry deviation of `MᵀM` (or `MᵀJM`) from `I` (or `J`).
    pub fn group_defect(&self) -> T {
        let n = self.matrix.rows;
        if self.lorentz {
            lorentz_gram(&self.matrix).max_abs_diff(&lorentz_metric(n))
        } else {
            self.matrix
                .transpose()
                .matmul(&self.matrix)
                .max_abs_diff(&Mat::identity(n))
        }
    }

    pub fn determinant(&self) -> T {
        self.matrix.determinant()
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.matrix.apply(v)
    }

    pub fn apply_point(&self, x: &Point<T>) -> Point<T> {
        Point::from_raw(self.apply(x.coords()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.matmul(&other.matrix),
            lorentz: self.lorentz,
        }
    }

    pub fn inverse(&self) -> Self {
        let t = self.matrix.transpose();
        let matrix = if self.lorentz {
            let j = lorentz_metric(self.matrix.rows);
            j.matmul(&t).matmul(&j)
        } else {
            t
        };
        Self {
            matrix,
            lorentz: self.lorentz,
        }
    }
}

/// Haar-distributed element of `SO(n)` drawn from `rng`, acting on the first
/// `n` coordinates (embedded as `diag(Q, 1)` for the sphere and hyperboloid).
pub fn haar_rotation_rng<T: Scalar, R: Rng + ?Sized>(space: &Space, rng: &mut R) -> Rotation<T> {
    let n = space.n;
    // Gram–Schmidt on Gaussian columns is QR with a positive diagonal in R.
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<T> = (0..n).map(|_| lit::<T>(rng.sample::<f64, _>(StandardNormal))).collect();
        for _ in 0..2 {
            for c in &cols {
                let p = dot(&v, c);
                for (vi, &ci) in v.iter_mut().zip(c) {
                    *vi -= p * ci;
                }
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > lit(1e-6) {
            cols.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let mut q = Mat::from_columns(&cols);
    if q.determinant() < T::zero() {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    let dim = space.ambient_dim();
    let mut m = Mat::identity(dim);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = q[(i, j)];
        }
    }
    Rotation::from_raw(m, space.kind == SpaceKind::Hyperbolic)
}

/// Deterministic Haar rotation for `seed`.
pub fn haar_rotation<T: Scalar>(space: &Space, seed: u64) -> Rotation<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_rotation_rng(space, &mut rng)
}

/// Fixed transport `r_x` with `r_x e_{n+1} = x` on the sphere (minimal
/// rotation in the plane of `e_{n+1}` and `x`) and hyperboloid (pure boost).
/// On `R^n` points are moved by translation instead and this is the identity.
pub fn transport<T: Scalar>(space: &Space, x: &Point<T>) -> Result<Rotation<T>> {
    let dim = space.ambient_dim();
    if x.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.dim(),
        });
    }
    let n = space.n;
    let c = x.coords();
    let spatial = &c[..n];
    let s = dot(spatial, spatial).sqrt();
    let mut m = Mat::identity(dim);
    match space.kind {
        SpaceKind::Euclidean => {}
        SpaceKind::Sphere => {
            let cos_a = c[n];
            if s == T::zero() {
                if cos_a < T::zero() {
                    m[(0, 0)] = -T::one();
                    m[(n, n)] = -T::one();
                }
            } else {
                // R = I + (cos α − 1)(e eᵀ + w wᵀ) + sin α (w eᵀ − e wᵀ).
                let w: Vec<T> = spatial.iter().map(|&v| v / s).collect();
                let k = cos_a - T::one();
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] += k * w[i] * w[j];
                    }
                    m[(i, n)] = s * w[i];
                    m[(n, i)] = -s * w[i];
                }
                m[(n, n)] = cos_a;
            }
        }
        SpaceKind::Hyperbolic => {
            if s > T::zero() {
                let u: Vec<T> = spatial.iter().map(|&v| v / s).collect();
                let k = c[n] - T::one();
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] += k * u[i] * u[j];
                    }
                    m[(i, n)] = spatial[i];
                    m[(n, i)] = spatial[i];
                }
                m[(n, n)] = c[n];
            }
        }
    }
    Ok(Rotation::from_raw(m, space.kind == SpaceKind::Hyperbolic))
}

/// The one-parameter rotation `g_θ`: in the `(e_{k+1}, e_{n+1})` plane with
/// block `[[sin θ, cos θ], [−cos θ, sin θ]]` on the sphere, the boost
/// `[[cosh θ, sinh θ], [sinh θ, cosh θ]]` in `(e_1, e_{n+1})` on the
/// hyperboloid.
pub fn g_theta<T: Scalar>(space: &Space, theta: T) -> Result<Rotation<T>> {
    let dim = space.ambient_dim();
    let n = space.n;
    let mut m = Mat::identity(dim);
    match space.kind {
        SpaceKind::Euclidean => {
            return Err(Error::InvalidSpace("g_theta is defined for the sphere and hyperboloid".into()))
        }
        SpaceKind::Sphere => {
            let (s, c) = theta.sin_cos();
            let a = space.k;
            m[(a, a)] = s;
            m[(a, n)] = c;
            m[(n, a)] = -c;
            m[(n, n)] = s;
        }
        SpaceKind::Hyperbolic => {
            let (s, c) = (theta.sinh(), theta.cosh());
            m[(0, 0)] = c;
            m[(0, n)] = s;
            m[(n, 0)] = s;
            m[(n, n)] = c;
        }
    }
    Ok(Rotation::from_raw(m, space.kind == SpaceKind::Hyperbolic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::lorentz;
    use approx::assert_abs_diff_eq;

    #[test]
    fn haar_is_deterministic_and_special_orthogonal() {
        for space in [
            Space::euclidean(3, 1).unwrap(),
            Space::sphere(4, 2).unwrap(),
            Space::hyperbolic(3, 2).unwrap(),
        ] {
            let a = haar_rotation::<f64>(&space, 7);
            let b = haar_rotation::<f64>(&space, 7);
            assert_eq!(a, b);
            assert!(a.group_defect() < 1e-10);
            assert_abs_diff_eq!(a.determinant(), 1.0, epsilon = 1e-10);
            assert_ne!(a, haar_rotation::<f64>(&space, 8));
        }
    }

    #[test]
    fn haar_entries_have_zero_mean() {
        let space = Space::euclidean(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sum = Mat::<f64>::zeros(3, 3);
        let count = 10_000;
        for _ in 0..count {
            let r = haar_rotation_rng::<f64, _>(&space, &mut rng);
            for (s, v) in sum.data.iter_mut().zip(&r.matrix().data) {
                *s += v;
            }
        }
        for s in &sum.data {
            assert!((s / count as f64).abs() < 0.05);
        }
    }

    #[test]
    fn transport_maps_base_point() {
        let s = Space::sphere(3, 1).unwrap();
        for coords in [
            vec![0.6, 0.0, 0.0, 0.8],
            vec![0.0, 0.0, 0.0, -1.0],
            vec![0.5, -0.5, 0.5, -0.5],
        ] {
            let x = Point::new(&s, coords.clone()).unwrap();
            let r = transport(&s, &x).unwrap();
            assert!(r.group_defect() < 1e-12);
            assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-12);
            let y = r.apply_point(&Point::base(&s));
            for (a, b) in y.coords().iter().zip(&coords) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-14);
            }
        }
        let h = Space::hyperbolic(3, 2).unwrap();
        let x = Point::from_spatial(&h, &[1.0, -2.0, 0.5]).unwrap();
        let r = transport(&h, &x).unwrap();
        assert!(r.group_defect() < 1e-12);
        let y = r.apply_point(&Point::base(&h));
        for (a, b) in y.coords().iter().zip(x.coords()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        let back = r.inverse().apply_point(&x);
        assert_abs_diff_eq!(back.coords()[3], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn boost_keeps_hyperboloid() {
        let h = Space::hyperbolic(2, 1).unwrap();
        for theta in [0.1, 0.7, 3.0] {
            let g = g_theta::<f64>(&h, theta).unwrap();
            let x = g.apply_point(&Point::base(&h));
            assert_abs_diff_eq!(lorentz(x.coords(), x.coords()), 1.0, epsilon = 1e-12);
            assert!(Rotation::from_matrix(&h, g.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn from_matrix_rejects_reflections() {
        let s = Space::sphere(2, 1).unwrap();
        let mut m = Mat::<f64>::identity(3);
        m[(0, 0)] = -1.0;
        assert!(Rotation::from_matrix(&s, m).is_err());
    }
}
