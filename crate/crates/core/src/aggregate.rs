//! Bivariate total claim amount `(S1, S2)` and the total `S = S1 + S2`.

use rand::Rng;

use crate::claims::{ClaimDistribution, Exponential, Hypoexponential, Occurrence};
use crate::counting::{sample_poisson, CountingModel};
use crate::error::{domain, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateMethod {
    /// Three independent compound sums, the shock count shared by both lines.
    Direct,
    /// One Poisson(λt) event stream with per-event occurrence indicators.
    TypeOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateSample<T> {
    pub s1: T,
    pub s2: T,
    pub t: T,
    pub method: AggregateMethod,
}

impl<T: Real> AggregateSample<T> {
    pub fn total(&self) -> T {
        self.s1 + self.s2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateMoments<T> {
    pub mean1: T,
    pub mean2: T,
    pub var1: T,
    pub var2: T,
    /// `E[S1 S2]`.
    pub cross: T,
    pub cov: T,
    pub cor: T,
    pub mean_total: T,
    pub var_total: T,
}

/// Counting model plus the four claim laws: `Y1` (line 1 only), `Y2` (line 2
/// only) and the shock pair `(Y3, Y4)` paid to lines 1 and 2 together.
///
/// The shock pair is independent, so `E[Y3 Y4] = E[Y3] E[Y4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateModel<T> {
    pub counting: CountingModel<T>,
    pub y1: Exponential<T>,
    pub y2: Exponential<T>,
    pub y3: Exponential<T>,
    pub y4: Exponential<T>,
}

impl<T: Real> AggregateModel<T> {
    pub fn new(
        counting: CountingModel<T>,
        y1: Exponential<T>,
        y2: Exponential<T>,
        y3: Exponential<T>,
        y4: Exponential<T>,
    ) -> Self {
        AggregateModel { counting, y1, y2, y3, y4 }
    }

    /// Exponential claims with means `nu = (ν1, ν2, ν3, ν4)`.
    pub fn exponential(counting: CountingModel<T>, nu: [T; 4]) -> Result<Self> {
        Ok(Self::new(
            counting,
            Exponential::new(nu[0])?,
            Exponential::new(nu[1])?,
            Exponential::new(nu[2])?,
            Exponential::new(nu[3])?,
        ))
    }

    /// Law of the total shock payment `Y3 + Y4`.
    pub fn shock_sum(&self) -> Hypoexponential<T> {
        Hypoexponential::new(self.y3.mean(), self.y4.mean()).expect("exponential means are valid")
    }

    /// `E[Y3 Y4]`.
    pub fn shock_cross_moment(&self) -> T {
        self.y3.mean() * self.y4.mean()
    }

    fn check_time(t: T) -> Result<()> {
        if !(t >= T::zero() && t.is_finite()) {
            return Err(domain(format!("time must be finite and nonnegative, got {t}")));
        }
        Ok(())
    }

    pub fn sample_direct<R: Rng + ?Sized>(&self, t: T, rng: &mut R) -> AggregateSample<T> {
        let c = &self.counting;
        let n0 = sample_poisson(c.lambda0() * t, rng);
        let n1 = sample_poisson(c.lambda1() * t, rng);
        let n2 = sample_poisson(c.lambda2() * t, rng);
        let mut s1 = T::zero();
        let mut s2 = T::zero();
        for _ in 0..n1 {
            s1 += self.y1.sample(rng);
        }
        for _ in 0..n0 {
            s1 += self.y3.sample(rng);
            s2 += self.y4.sample(rng);
        }
        for _ in 0..n2 {
            s2 += self.y2.sample(rng);
        }
        AggregateSample { s1, s2, t, method: AggregateMethod::Direct }
    }

    pub fn sample_type1<R: Rng + ?Sized>(&self, t: T, rng: &mut R) -> AggregateSample<T> {
        let n = sample_poisson(self.counting.lambda() * t, rng);
        let occurrence = self.counting.occurrence();
        let mut s1 = T::zero();
        let mut s2 = T::zero();
        for _ in 0..n {
            match occurrence.sample(rng) {
                Occurrence::Line1 => s1 += self.y1.sample(rng),
                Occurrence::Line2 => s2 += self.y2.sample(rng),
                Occurrence::Shock => {
                    s1 += self.y3.sample(rng);
                    s2 += self.y4.sample(rng);
                }
            }
        }
        AggregateSample { s1, s2, t, method: AggregateMethod::TypeOne }
    }

    /// `E[exp(-z1 S1(t) - z2 S2(t))]`.
    pub fn joint_lst(&self, t: T, z1: T, z2: T) -> Result<T> {
        Self::check_time(t)?;
        let c = &self.counting;
        let l1 = self.y1.lst(z1)?;
        let l2 = self.y2.lst(z2)?;
        let shock = self.y3.lst(z1)? * self.y4.lst(z2)?;
        let exponent = c.lambda1() * (T::one() - l1) + c.lambda2() * (T::one() - l2) + c.lambda0() * (T::one() - shock);
        Ok((-t * exponent).exp())
    }

    /// `E[exp(-z S(t))]` for the total claim amount.
    pub fn total_lst(&self, t: T, z: T) -> Result<T> {
        Self::check_time(t)?;
        let c = &self.counting;
        let exponent = c.lambda1() * (T::one() - self.y1.lst(z)?)
            + c.lambda2() * (T::one() - self.y2.lst(z)?)
            + c.lambda0() * (T::one() - self.shock_sum().lst(z)?);
        Ok((-t * exponent).exp())
    }

    pub fn moments(&self, t: T) -> Result<AggregateMoments<T>> {
        Self::check_time(t)?;
        let c = &self.counting;
        let (l0, l1, l2) = (c.lambda0(), c.lambda1(), c.lambda2());
        let rate_mean1 = l1 * self.y1.mean() + l0 * self.y3.mean();
        let rate_mean2 = l2 * self.y2.mean() + l0 * self.y4.mean();
        let rate_var1 = l1 * self.y1.second_moment() + l0 * self.y3.second_moment();
        let rate_var2 = l2 * self.y2.second_moment() + l0 * self.y4.second_moment();
        let rate_cov = l0 * self.shock_cross_moment();
        let shock = self.shock_sum();
        let mean1 = t * rate_mean1;
        let mean2 = t * rate_mean2;
        Ok(AggregateMoments {
            mean1,
            mean2,
            var1: t * rate_var1,
            var2: t * rate_var2,
            cross: t * rate_cov + mean1 * mean2,
            cov: t * rate_cov,
            cor: rate_cov / (rate_var1 * rate_var2).sqrt(),
            mean_total: t * (l1 * self.y1.mean() + l0 * shock.mean() + l2 * self.y2.mean()),
            var_total: t * (l1 * self.y1.second_moment() + l0 * shock.second_moment() + l2 * self.y2.second_moment()),
        })
    }
}
