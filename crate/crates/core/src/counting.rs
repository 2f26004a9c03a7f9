//! Poisson sampling and the bivariate claim counting process `(M1, M2)`
//! with a common-shock component: `M1 = N1 + N0`, `M2 = N2 + N0`.

use rand::Rng;

use crate::claims::{Occurrence, OccurrenceIndicator};
use crate::error::{domain, invalid, Result};
use crate::real::{ln_factorial, xlogy, Real};

/// Mean above which [`sample_poisson`] switches from the uniform-product
/// method to transformed rejection.
pub const POISSON_PRODUCT_LIMIT: f64 = 30.0;

/// Poisson draw with mean `rate_times_t`.
///
/// Uses the uniform-product method up to [`POISSON_PRODUCT_LIMIT`] and
/// Hörmann's PTRS transformed rejection (1993) above it.
pub fn sample_poisson<T: Real, R: Rng + ?Sized>(rate_times_t: T, rng: &mut R) -> u64 {
    if !(rate_times_t > T::zero()) {
        return 0;
    }
    if rate_times_t <= T::lit(POISSON_PRODUCT_LIMIT) {
        let limit = (-rate_times_t).exp();
        let mut k = 0u64;
        let mut prod = T::uniform(rng);
        while prod > limit {
            k += 1;
            prod *= T::uniform(rng);
        }
        return k;
    }
    ptrs(rate_times_t.to_f64_lossy(), rng)
}

fn ptrs<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> u64 {
    let log_mu = mu.ln();
    let b = 0.931 + 2.53 * mu.sqrt();
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.gen::<f64>() - 0.5;
        let v = rng.gen::<f64>();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mu + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -mu + k * log_mu - ln_factorial::<f64>(k as u64);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// Poisson pmf evaluated in log space.
pub fn poisson_pmf<T: Real>(mean: T, k: u64) -> T {
    if mean == T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    (xlogy(k, mean) - mean - ln_factorial::<T>(k)).exp()
}

/// How a [`BivariateCount`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Independent `N0, N1, N2` superposed.
    Superposition,
    /// One Poisson(λt) counter with per-event occurrence indicators.
    TypeOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateCount<T> {
    pub m1: u64,
    pub m2: u64,
    pub t: T,
    pub method: CountMethod,
}

/// Conditioning margin for regressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Margin {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountMoments<T> {
    pub mean1: T,
    pub mean2: T,
    pub var1: T,
    pub var2: T,
    pub cov: T,
    /// Time-free correlation; NaN when a margin has zero intensity.
    pub cor: T,
    /// `E[M1 M2]`.
    pub cross_moment: T,
}

/// Rates `λ0` (shock), `λ1`, `λ2` of the three independent Poisson streams.
///
/// Individual rates may be zero, which collapses the model onto fewer lines;
/// the total `λ` must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingModel<T> {
    lambda0: T,
    lambda1: T,
    lambda2: T,
}

impl<T: Real> CountingModel<T> {
    pub fn new(lambda0: T, lambda1: T, lambda2: T) -> Result<Self> {
        for (name, rate) in [("lambda0", lambda0), ("lambda1", lambda1), ("lambda2", lambda2)] {
            if !(rate >= T::zero() && rate.is_finite()) {
                return Err(invalid(name, format!("rate must be finite and nonnegative, got {rate}")));
            }
        }
        if !(lambda0 + lambda1 + lambda2 > T::zero()) {
            return Err(invalid("lambda", "total event rate must be positive"));
        }
        Ok(CountingModel { lambda0, lambda1, lambda2 })
    }

    pub fn lambda0(&self) -> T {
        self.lambda0
    }

    pub fn lambda1(&self) -> T {
        self.lambda1
    }

    pub fn lambda2(&self) -> T {
        self.lambda2
    }

    /// `λ = λ0 + λ1 + λ2`.
    pub fn lambda(&self) -> T {
        self.lambda0 + self.lambda1 + self.lambda2
    }

    /// Event-type law `(λ1/λ, λ2/λ, λ0/λ)`.
    pub fn occurrence(&self) -> OccurrenceIndicator<T> {
        OccurrenceIndicator::proportional(self.lambda1, self.lambda2, self.lambda0)
            .expect("validated rates give valid occurrence weights")
    }

    fn check_time(t: T) -> Result<()> {
        if !(t >= T::zero() && t.is_finite()) {
            return Err(domain(format!("time must be finite and nonnegative, got {t}")));
        }
        Ok(())
    }

    pub fn sample_superposition<R: Rng + ?Sized>(&self, t: T, rng: &mut R) -> BivariateCount<T> {
        let n0 = sample_poisson(self.lambda0 * t, rng);
        let n1 = sample_poisson(self.lambda1 * t, rng);
        let n2 = sample_poisson(self.lambda2 * t, rng);
        BivariateCount { m1: n1 + n0, m2: n2 + n0, t, method: CountMethod::Superposition }
    }

    pub fn sample_type1<R: Rng + ?Sized>(&self, t: T, rng: &mut R) -> BivariateCount<T> {
        let n = sample_poisson(self.lambda() * t, rng);
        let occurrence = self.occurrence();
        let (mut m1, mut m2) = (0u64, 0u64);
        for _ in 0..n {
            match occurrence.sample(rng) {
                Occurrence::Line1 => m1 += 1,
                Occurrence::Line2 => m2 += 1,
                Occurrence::Shock => {
                    m1 += 1;
                    m2 += 1;
                }
            }
        }
        BivariateCount { m1, m2, t, method: CountMethod::TypeOne }
    }

    /// Bivariate Poisson pmf `P(M1(t) = m1, M2(t) = m2)`.
    pub fn joint_pmf(&self, t: T, m1: u64, m2: u64) -> Result<T> {
        Self::check_time(t)?;
        let (l0, l1, l2) = (self.lambda0 * t, self.lambda1 * t, self.lambda2 * t);
        let log_terms: Vec<T> = (0..=m1.min(m2))
            .map(|i| {
                xlogy(i, l0) + xlogy(m1 - i, l1) + xlogy(m2 - i, l2)
                    - ln_factorial::<T>(i)
                    - ln_factorial::<T>(m1 - i)
                    - ln_factorial::<T>(m2 - i)
            })
            .filter(|v| v.is_finite())
            .collect();
        let Some(peak) = log_terms.iter().copied().reduce(T::max) else {
            return Ok(T::zero());
        };
        let sum: T = log_terms.iter().map(|&v| (v - peak).exp()).sum();
        Ok((peak - (l0 + l1 + l2) + sum.ln()).exp())
    }

    /// `E[z1^M1 z2^M2] = exp(-λt + λ1 t z1 + λ2 t z2 + λ0 t z1 z2)`.
    pub fn joint_pgf(&self, t: T, z1: T, z2: T) -> Result<T> {
        Self::check_time(t)?;
        let unit = |z: T| z >= T::zero() && z <= T::one();
        if !(unit(z1) && unit(z2)) {
            return Err(domain(format!("pgf arguments must lie in [0, 1], got ({z1}, {z2})")));
        }
        Ok((t
            * (self.lambda1 * (z1 - T::one()) + self.lambda2 * (z2 - T::one()) + self.lambda0 * (z1 * z2 - T::one())))
        .exp())
    }

    /// Mean-square regression `E[M_s(t) | M_r(t) = m] = m λ0/(λ_r + λ0) + λ_s t`.
    pub fn conditional_mean(&self, t: T, conditioning: Margin, m: u64) -> Result<T> {
        Self::check_time(t)?;
        let (own, other) = match conditioning {
            Margin::First => (self.lambda1, self.lambda2),
            Margin::Second => (self.lambda2, self.lambda1),
        };
        let margin_rate = own + self.lambda0;
        let slope = if margin_rate > T::zero() { self.lambda0 / margin_rate } else { T::zero() };
        Ok(T::from_count(m) * slope + other * t)
    }

    pub fn moments(&self, t: T) -> Result<CountMoments<T>> {
        Self::check_time(t)?;
        let (l0, l1, l2) = (self.lambda0, self.lambda1, self.lambda2);
        let mean1 = t * (l1 + l0);
        let mean2 = t * (l2 + l0);
        Ok(CountMoments {
            mean1,
            mean2,
            var1: mean1,
            var2: mean2,
            cov: t * l0,
            cor: l0 / ((l1 + l0) * (l2 + l0)).sqrt(),
            cross_moment: l0 * t + (self.lambda() * l0 + l1 * l2) * t * t,
        })
    }

    /// The univariate sum `A = M1 + M2` at time `t`.
    pub fn sum_process(&self, t: T) -> Result<SumProcess<T>> {
        Self::check_time(t)?;
        Ok(SumProcess { model: *self, t })
    }
}

/// A transition rate out of state `from` of the sum chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<T> {
    pub from: u64,
    pub to: u64,
    pub rate: T,
}

/// `A(t) = M1(t) + M2(t)`, a Markov chain jumping by 1 at rate `λ1+λ2` and by 2 at rate `λ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumProcess<T> {
    model: CountingModel<T>,
    t: T,
}

impl<T: Real> SumProcess<T> {
    /// `E[z^A(t)] = exp[-t(λ - (λ1+λ2) z - λ0 z²)]`.
    pub fn pgf(&self, z: T) -> Result<T> {
        if !(z >= T::zero() && z <= T::one()) {
            return Err(domain(format!("pgf argument must lie in [0, 1], got {z}")));
        }
        let m = &self.model;
        Ok((-self.t * (m.lambda() - (m.lambda1 + m.lambda2) * z - m.lambda0 * z * z)).exp())
    }

    pub fn mean(&self) -> T {
        let m = &self.model;
        self.t * (m.lambda1 + m.lambda2 + T::lit(2.0) * m.lambda0)
    }

    pub fn variance(&self) -> T {
        let m = &self.model;
        self.t * (m.lambda1 + m.lambda2 + T::lit(4.0) * m.lambda0)
    }

    /// Nonzero entries of row `k` of the Q-matrix.
    pub fn q_row(&self, k: u64) -> [Transition<T>; 3] {
        let m = &self.model;
        [
            Transition { from: k, to: k, rate: -m.lambda() },
            Transition { from: k, to: k + 1, rate: m.lambda1 + m.lambda2 },
            Transition { from: k, to: k + 2, rate: m.lambda0 },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn baseline() -> CountingModel<f64> {
        CountingModel::new(10.0, 11.0, 12.0).unwrap()
    }

    #[test]
    fn poisson_zero_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sample_poisson(0.0, &mut rng), 0);
    }

    #[test]
    fn zero_time_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = baseline();
        let a = m.sample_superposition(0.0, &mut rng);
        let b = m.sample_type1(0.0, &mut rng);
        assert_eq!((a.m1, a.m2), (0, 0));
        assert_eq!((b.m1, b.m2), (0, 0));
        assert_eq!(a.method, CountMethod::Superposition);
        assert_eq!(b.method, CountMethod::TypeOne);
    }

    #[test]
    fn pmf_known_values() {
        let m = CountingModel::new(1.0, 1.0, 1.0).unwrap();
        let e3 = (-3.0f64).exp();
        assert!((m.joint_pmf(1.0, 0, 0).unwrap() - e3).abs() < 1e-15);
        assert!((m.joint_pmf(1.0, 1, 1).unwrap() - 2.0 * e3).abs() < 1e-15);
        assert!((m.joint_pmf(1.0, 0, 0).unwrap() - 0.0497871).abs() < 1e-7);
        assert!((m.joint_pmf(1.0, 1, 1).unwrap() - 0.0995741).abs() < 1e-7);
    }

    #[test]
    fn pmf_large_counts_do_not_overflow() {
        let m = CountingModel::new(100.0f64, 150.0, 120.0).unwrap();
        let p = m.joint_pmf(1.0, 250, 220).unwrap();
        assert!(p.is_finite() && p > 0.0);
    }

    #[test]
    fn pgf_edges() {
        let m = baseline();
        assert!((m.joint_pgf(1.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let unit = CountingModel::new(1.0, 1.0, 1.0).unwrap();
        assert!((unit.joint_pgf(1.0, 0.0, 0.0).unwrap() - (-3.0f64).exp()).abs() < 1e-15);
        assert!(m.joint_pgf(1.0, 1.5, 0.0).is_err());
        assert!(m.joint_pgf(-1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn regression_values() {
        let m = baseline();
        assert_eq!(m.conditional_mean(1.0, Margin::First, 0).unwrap(), 12.0);
        let v = m.conditional_mean(1.0, Margin::First, 5).unwrap();
        assert!((v - (50.0 / 21.0 + 12.0)).abs() < 1e-12);
        assert!((v - 14.380952).abs() < 1e-6);
        let v = m.conditional_mean(1.0, Margin::Second, 5).unwrap();
        assert!((v - 13.272727).abs() < 1e-6);
    }

    #[test]
    fn moment_values() {
        let m = baseline();
        let mo = m.moments(1.0).unwrap();
        assert!((mo.cor - 10.0 / 462f64.sqrt()).abs() < 1e-15);
        assert!((mo.cor - 0.465242).abs() < 1e-6);
        assert!((mo.cross_moment - 472.0).abs() < 1e-12);
        let z = m.moments(0.0).unwrap();
        assert_eq!((z.mean1, z.mean2, z.var1, z.var2, z.cov, z.cross_moment), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert!((z.cor - mo.cor).abs() < 1e-15);
    }

    #[test]
    fn sum_process_values() {
        let s = baseline().sum_process(1.0).unwrap();
        assert_eq!(s.mean(), 43.0);
        assert_eq!(s.variance(), 63.0);
        assert!((s.pgf(1.0).unwrap() - 1.0).abs() < 1e-15);
        let row = s.q_row(4);
        let total: f64 = row.iter().map(|t| t.rate).sum();
        assert_eq!(total, 0.0);
        assert_eq!(row[2].to, 6);
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(CountingModel::new(-1.0, 1.0, 1.0).is_err());
        assert!(CountingModel::new(0.0, 0.0, 0.0).is_err());
        assert!(CountingModel::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(CountingModel::new(0.0, 1.0, 0.0).is_ok());
    }
}
