//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the linear algebra is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are written as `f64` literals and
/// converted with [`Real::tol`], which never goes below a small multiple of
/// the type's machine epsilon. That keeps `f64` thresholds exact and makes
/// `f32` runs use a meaningful floor instead of an unreachable one.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Converts an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts a tolerance, clamped below at `64 * epsilon`.
    fn tol(x: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(64.0);
        let t = Self::lit(x);
        if t > floor {
            t
        } else {
            floor
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cx<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn modulus<T: Real>(z: Cx<T>) -> T {
    z.norm_sqr().sqrt()
}
