//! Scalar abstraction shared by the numerical modules.
//!
//! Everything numeric in this crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Monte Carlo orchestration and persistence
//! are fixed to `f64`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    /// Converts a count or index.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Eigenvalues of a dense complex matrix through the optimized `faer`
    /// kernels, stored row-major. `None` when the backend rejects the input.
    fn faer_eigenvalues(n: usize, row_major: &[Complex<Self>]) -> Option<Vec<Complex<Self>>>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn faer_eigenvalues(n: usize, row_major: &[Complex<Self>]) -> Option<Vec<Complex<Self>>> {
                let mat = faer::Mat::<Complex<$t>>::from_fn(n, n, |i, j| row_major[i * n + j]);
                mat.eigenvalues().ok()
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// `|re| + |im|`, the cheap complex magnitude used for convergence tests.
#[inline]
pub fn abs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}
