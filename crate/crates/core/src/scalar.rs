use nalgebra::RealField;
use num_traits::{Float, FromPrimitive};

/// Real scalar used by the dense engine.
///
/// Implemented for `f32` and `f64`. Tolerances given in the API are the
/// double-precision values; [`Real::tol`] widens them for coarser types.
pub trait Real: RealField + Float + FromPrimitive + Copy + Send + Sync + 'static {
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64")
    }

    fn to_f64(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn tol(base: f64) -> Self {
        let floor = <Self as Float>::epsilon() * Self::of(256.0);
        let t = Self::of(base);
        if t > floor {
            t
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
