use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;

/// Floating point scalar the library is written against: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Uniform draw on `[0, 1)`.
    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform draw on `(0, 1]`, safe to feed into `ln`.
    fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::one() - Self::uniform(rng)
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_count(k: u64) -> Self {
        Self::from_u64(k).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>()
    }
}

impl Real for f32 {
    #[inline]
    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f32>()
    }
}

/// `k * ln(x)` with the convention `0 * ln(0) = 0`.
#[inline]
pub(crate) fn xlogy<T: Real>(k: u64, x: T) -> T {
    if k == 0 {
        T::zero()
    } else {
        T::from_count(k) * x.ln()
    }
}

/// `ln(k!)`, exact product for small `k` and a Stirling series beyond.
pub fn ln_factorial<T: Real>(k: u64) -> T {
    if k < 16 {
        let mut acc = 1.0f64;
        for i in 2..=k {
            acc *= i as f64;
        }
        return T::lit(acc.ln());
    }
    let n = k as f64;
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    T::lit(n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_matches_direct_sum() {
        for k in 0..200u64 {
            let direct: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
            let got: f64 = ln_factorial(k);
            assert!((got - direct).abs() < 1e-10 * direct.max(1.0), "k={k}");
        }
    }

    #[test]
    fn xlogy_zero_convention() {
        assert_eq!(xlogy(0, 0.0f64), 0.0);
        assert_eq!(xlogy(2, 1.0f64), 0.0);
        assert!(xlogy(1, 0.0f64).is_infinite());
    }
}
