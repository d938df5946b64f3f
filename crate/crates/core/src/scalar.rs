//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating scalar the library is generic over (`f32` and `f64` qualify).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Sum<Self>
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

/// Converts an index into the working scalar type.
pub(crate) fn real_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("index representable in scalar type")
}

/// Formats a scalar with the fixed 12-decimal precision used by reports.
pub fn fixed12<T: Real>(x: T) -> String {
    format!("{:.12}", x.to_f64().unwrap_or(f64::NAN))
}

/// Compensated (Kahan) accumulator for long sums of scalars.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        KahanSum {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum
    }
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::<f64>::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn fixed12_is_stable() {
        assert_eq!(fixed12(0.5_f64), "0.500000000000");
        assert_eq!(fixed12(1.0 / 3.0_f64), "0.333333333333");
    }

    #[test]
    fn real_casts_work_for_f32() {
        let x: f32 = real(0.25);
        assert_eq!(x, 0.25_f32);
        let n: f32 = real_usize(7);
        assert_eq!(n, 7.0_f32);
    }
}
