//! Adaptive Gauss–Kronrod quadrature and bracketed bisection.
//!
//! Small self-contained numerics used by the integrated-tail CDF of general
//! claim laws, the Cramér–Lundberg constant and inverse-CDF sampling.

use crate::error::{Error, Result};
use crate::real::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_INTERVALS: usize = 4000;

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = radius * T::lit(x);
        let pair = f(center - dx) + f(center + dx);
        kronrod += T::lit(w) * pair;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * pair;
        }
    }
    Segment { a, b, value: kronrod * radius, error: ((kronrod - gauss) * radius).abs() }
}

/// Integrates `f` over the finite interval `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, abs_tol: T) -> Result<T> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(T::zero());
    }
    if b < a {
        return integrate(f, b, a, abs_tol).map(|v| -v);
    }
    let mut segments = vec![kronrod15(&f, a, b)];
    loop {
        let total_err: T = segments.iter().map(|s| s.error).sum();
        let total: T = segments.iter().map(|s| s.value).sum();
        if !total.is_finite() {
            return Err(Error::Numerical("integrand produced a non-finite value".into()));
        }
        if total_err <= abs_tol {
            return Ok(total);
        }
        if segments.len() >= MAX_INTERVALS {
            // Round-off floor for the scalar type: accept if the error is at
            // the precision limit of the accumulated value.
            if total_err <= T::epsilon().sqrt() * total.abs().max(T::one()) {
                return Ok(total);
            }
            return Err(Error::Numerical(format!(
                "quadrature did not converge: error estimate {total_err} > {abs_tol}"
            )));
        }
        let (worst, _) = segments.iter().enumerate().fold((0usize, T::neg_infinity()), |acc, (i, s)| {
            if s.error > acc.1 {
                (i, s.error)
            } else {
                acc
            }
        });
        let seg = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            segments.push(seg);
            let total: T = segments.iter().map(|s| s.value).sum();
            return Ok(total);
        }
        segments.push(kronrod15(&f, seg.a, mid));
        segments.push(kronrod15(&f, mid, seg.b));
    }
}

/// Integrates `f` over `[a, ∞)` through the substitution `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<T: Real, F: Fn(T) -> T>(f: F, a: T, abs_tol: T) -> Result<T> {
    let one = T::one();
    let mapped = |t: T| {
        let w = one - t;
        let x = a + t / w;
        if !x.is_finite() {
            return T::zero();
        }
        let v = f(x) / (w * w);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate(mapped, T::zero(), one, abs_tol)
}

/// Bisection for a root of `f` on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
///
/// Stops once the bracket is narrower than `abs_tol + rel_tol * |mid|` or
/// cannot be split further in the scalar type.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, abs_tol: T, rel_tol: T) -> Result<T> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if (f_lo > T::zero()) == (f_hi > T::zero()) {
        return Err(Error::Numerical("bisection bracket has no sign change".into()));
    }
    let half = T::lit(0.5);
    for _ in 0..400 {
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= abs_tol + rel_tol * mid.abs() {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if (f_mid > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(half * (lo + hi))
}

/// Inverts a nondecreasing CDF at probability `p` by bracket expansion and bisection.
pub fn invert_cdf<T: Real, F: Fn(T) -> T>(cdf: F, p: T, scale: T, abs_tol: T) -> T {
    if p <= T::zero() {
        return T::zero();
    }
    let mut hi = scale.max(T::min_positive_value());
    let two = T::lit(2.0);
    while cdf(hi) < p {
        hi *= two;
        if !hi.is_finite() {
            return T::infinity();
        }
    }
    let g = |x: T| cdf(x) - p;
    bisect(g, T::zero(), hi, abs_tol, T::zero()).unwrap_or(hi)
}
