//! Small fixed-size linear algebra used by the segmentation stages.

use crate::scalar::{cast, Real};

/// 3-component vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    /// Euclidean norm of the xy components.
    #[inline]
    pub fn norm_xy(self) -> T {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    #[inline]
    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self * (T::one() / n))
        } else {
            None
        }
    }

    #[inline]
    pub fn scaled(self, s: T) -> Self {
        self * s
    }
}

impl<T: Real> std::ops::Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<T: Real> std::ops::Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<T: Real> std::ops::Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> std::ops::Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Symmetric 3x3 matrix stored in full.
#[derive(Debug, Clone, Copy)]
pub struct SymMat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> SymMat3<T> {
    pub fn zero() -> Self {
        Self {
            m: [[T::zero(); 3]; 3],
        }
    }

    /// Covariance of a point set around the given mean (population form).
    pub fn covariance(points: impl Iterator<Item = Vec3<T>>, mean: Vec3<T>) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        let mut n = 0usize;
        for p in points {
            let d = p - mean;
            let v = [d.x, d.y, d.z];
            for (i, vi) in v.iter().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    m[i][j] += *vi * *vj;
                }
            }
            n += 1;
        }
        if n > 0 {
            let inv = T::one() / crate::scalar::cast_usize::<T>(n);
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v *= inv;
                }
            }
        }
        Self { m }
    }

    pub fn mul_vec(&self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }
}

/// Eigendecomposition of a symmetric 3x3 matrix.
///
/// Cyclic Jacobi sweeps; converges to machine precision in a handful of
/// iterations for 3x3 input. Eigenvalues are returned in descending order
/// with matching unit eigenvectors.
pub fn sym_eigen<T: Real>(a: &SymMat3<T>) -> ([T; 3], [Vec3<T>; 3]) {
    let mut a = a.m;
    // v accumulates the rotations; columns become the eigenvectors.
    let mut v = [
        [T::one(), T::zero(), T::zero()],
        [T::zero(), T::one(), T::zero()],
        [T::zero(), T::zero(), T::one()],
    ];

    let half = cast::<T>(0.5);
    for _sweep in 0..50 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        let diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
        if off <= T::epsilon() * T::epsilon() * (diag + T::epsilon()) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == T::zero() {
                continue;
            }
            let theta = half * (a[q][q] - a[p][p]) / apq;
            // Stable tangent of the rotation angle.
            let t = {
                let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                let t = T::one() / denom;
                if theta < T::zero() {
                    -t
                } else {
                    t
                }
            };
            let c = T::one() / (t * t + T::one()).sqrt();
            let s = t * c;

            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let rp = row[p];
                let rq = row[q];
                row[p] = c * rp - s * rq;
                row[q] = s * rp + c * rq;
            }
        }
    }

    let mut pairs: [(T, Vec3<T>); 3] = [
        (a[0][0], Vec3::new(v[0][0], v[1][0], v[2][0])),
        (a[1][1], Vec3::new(v[0][1], v[1][1], v[2][1])),
        (a[2][2], Vec3::new(v[0][2], v[1][2], v[2][2])),
    ];
    pairs.sort_by(|lhs, rhs| {
        rhs.0
            .partial_cmp(&lhs.0)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    (
        [pairs[0].0, pairs[1].0, pairs[2].0],
        [pairs[0].1, pairs[1].1, pairs[2].1],
    )
}

/// Rotation of `p` about the x-axis by `angle`.
#[inline]
pub fn rotate_x<T: Real>(p: Vec3<T>, angle: T) -> Vec3<T> {
    let (s, c) = angle.sin_cos();
    Vec3::new(p.x, c * p.y - s * p.z, s * p.y + c * p.z)
}

/// Rotation of `p` about the y-axis by `angle`.
#[inline]
pub fn rotate_y<T: Real>(p: Vec3<T>, angle: T) -> Vec3<T> {
    let (s, c) = angle.sin_cos();
    Vec3::new(c * p.x + s * p.z, p.y, -s * p.x + c * p.z)
}

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle<T: Real>(a: T) -> T {
    let two_pi = cast::<T>(std::f64::consts::TAU);
    let pi = cast::<T>(std::f64::consts::PI);
    let mut r = a % two_pi;
    if r <= -pi {
        r += two_pi;
    } else if r > pi {
        r -= two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vec3::new(1.0f64, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn eigen_recovers_diagonal() {
        let a = SymMat3 {
            m: [[4.0f64, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]],
        };
        let (vals, vecs) = sym_eigen(&a);
        assert!((vals[0] - 4.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 1.0).abs() < 1e-12);
        assert!(vecs[0].x.abs() > 0.999);
        assert!(vecs[2].z.abs() > 0.999);
    }

    #[test]
    fn eigen_satisfies_definition_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mut m = [[0.0f64; 3]; 3];
            for i in 0..3 {
                for j in i..3 {
                    let v = rng.gen_range(-5.0..5.0);
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            let a = SymMat3 { m };
            let (vals, vecs) = sym_eigen(&a);
            assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
            for k in 0..3 {
                let av = a.mul_vec(vecs[k]);
                let lv = vecs[k] * vals[k];
                assert!((av - lv).norm() < 1e-9, "A*v != lambda*v: {:?}", vals);
                assert!((vecs[k].norm() - 1.0).abs() < 1e-12);
            }
            // Pairwise orthogonality.
            assert!(vecs[0].dot(vecs[1]).abs() < 1e-9);
            assert!(vecs[0].dot(vecs[2]).abs() < 1e-9);
            assert!(vecs[1].dot(vecs[2]).abs() < 1e-9);
        }
    }

    #[test]
    fn angle_normalization_is_half_open() {
        assert!((normalize_angle(std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
        assert!(
            (normalize_angle(-std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12,
            "-pi wraps to +pi"
        );
        assert!((normalize_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!(normalize_angle(0.25f64) == 0.25);
    }
}
