//! Claim-size laws, their integrated-tail (equilibrium) companions and the
//! one-hot occurrence indicators that route an event to a policy line.

use rand::Rng;

use crate::error::{domain, invalid, Result};
use crate::quad;
use crate::real::Real;

/// Relative parameter gap below which a hypoexponential sum is evaluated as Gamma(2).
pub const EQUAL_MEANS_REL_GAP: f64 = 1e-9;

/// Absolute tolerance of bisection inversion used by equilibrium samplers.
pub const INVERSION_TOL: f64 = 1e-12;

/// Absolute tolerance of the quadrature behind general integrated-tail CDFs.
pub const TAIL_QUAD_TOL: f64 = 1e-10;

/// A nonnegative claim-size law.
///
/// `laplace(s)` is `E[exp(-sY)]` and is expected to be valid for every
/// `s > -mgf_abscissa()`, so negative arguments give the moment generating
/// function.
pub trait ClaimDistribution<T: Real> {
    fn mean(&self) -> T;
    fn second_moment(&self) -> T;
    fn third_moment(&self) -> T;
    fn cdf(&self, x: T) -> T;
    fn pdf(&self, x: T) -> T;
    fn laplace(&self, s: T) -> T;
    /// Supremum of `r` with `E[exp(rY)] < ∞`.
    fn mgf_abscissa(&self) -> T;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T;

    fn survival(&self, x: T) -> T {
        T::one() - self.cdf(x)
    }

    fn variance(&self) -> T {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// Laplace–Stieltjes transform on its nonnegative domain.
    fn lst(&self, s: T) -> Result<T> {
        if !(s >= T::zero()) {
            return Err(domain(format!("LST argument must be nonnegative, got {s}")));
        }
        Ok(self.laplace(s))
    }

    fn mgf(&self, r: T) -> Option<T> {
        if r < self.mgf_abscissa() {
            Some(self.laplace(-r))
        } else {
            None
        }
    }

    /// `(1/E[Y]) ∫₀ˣ P(Y > y) dy`.
    fn integrated_tail_cdf(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(domain(format!("integrated tail CDF argument must be nonnegative, got {x}")));
        }
        let mean = self.mean();
        if !mean.is_finite() {
            return Err(crate::Error::Unsupported("integrated tail of an infinite-mean law".into()));
        }
        let area = quad::integrate(|y| self.survival(y), T::zero(), x, T::lit(TAIL_QUAD_TOL) * mean)?;
        Ok((area / mean).max(T::zero()).min(T::one()))
    }

    /// Draw from the integrated-tail law by bisection inversion of its CDF.
    fn sample_equilibrium<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let p = T::uniform(rng);
        quad::invert_cdf(|x| self.integrated_tail_cdf(x).unwrap_or(T::one()), p, self.mean(), T::lit(INVERSION_TOL))
    }
}

/// Exponential law with the given mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential<T> {
    mean: T,
}

impl<T: Real> Exponential<T> {
    pub fn new(mean: T) -> Result<Self> {
        if !(mean > T::zero() && mean.is_finite()) {
            return Err(invalid("mean", format!("exponential mean must be positive and finite, got {mean}")));
        }
        Ok(Exponential { mean })
    }

    pub fn mean_value(&self) -> T {
        self.mean
    }
}

impl<T: Real> ClaimDistribution<T> for Exponential<T> {
    fn mean(&self) -> T {
        self.mean
    }

    fn second_moment(&self) -> T {
        T::lit(2.0) * self.mean * self.mean
    }

    fn third_moment(&self) -> T {
        T::lit(6.0) * self.mean * self.mean * self.mean
    }

    fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            T::zero()
        } else {
            -(-x / self.mean).exp_m1()
        }
    }

    fn survival(&self, x: T) -> T {
        if x <= T::zero() {
            T::one()
        } else {
            (-x / self.mean).exp()
        }
    }

    fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            T::zero()
        } else {
            (-x / self.mean).exp() / self.mean
        }
    }

    fn laplace(&self, s: T) -> T {
        T::one() / (T::one() + self.mean * s)
    }

    fn mgf_abscissa(&self) -> T {
        T::one() / self.mean
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        -self.mean * T::uniform_open(rng).ln()
    }

    fn integrated_tail_cdf(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(domain(format!("integrated tail CDF argument must be nonnegative, got {x}")));
        }
        Ok(self.cdf(x))
    }

    fn sample_equilibrium<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.sample(rng)
    }
}

/// Law of `Y3 + Y4` with independent exponential summands of means `nu3`, `nu4`.
///
/// When the means agree to within [`EQUAL_MEANS_REL_GAP`] every formula
/// switches to the Gamma(2) form with the averaged mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hypoexponential<T> {
    nu3: T,
    nu4: T,
}

impl<T: Real> Hypoexponential<T> {
    pub fn new(nu3: T, nu4: T) -> Result<Self> {
        Exponential::new(nu3).map_err(|_| invalid("nu3", format!("must be positive and finite, got {nu3}")))?;
        Exponential::new(nu4).map_err(|_| invalid("nu4", format!("must be positive and finite, got {nu4}")))?;
        Ok(Hypoexponential { nu3, nu4 })
    }

    /// Gamma(2) law: the sum of two exponentials with a common mean.
    pub fn erlang2(nu0: T) -> Result<Self> {
        Self::new(nu0, nu0)
    }

    pub fn means(&self) -> (T, T) {
        (self.nu3, self.nu4)
    }

    /// `Some(ν0)` when the two means are treated as equal.
    pub fn common_mean(&self) -> Option<T> {
        let gap = (self.nu3 - self.nu4).abs();
        if gap <= T::lit(EQUAL_MEANS_REL_GAP) * self.nu3.max(self.nu4) {
            Some(T::lit(0.5) * (self.nu3 + self.nu4))
        } else {
            None
        }
    }

    /// `E[Y3 · Y4]` for the independent pair.
    pub fn cross_moment(&self) -> T {
        self.nu3 * self.nu4
    }

    /// LST of the integrated-tail law, `(ν3+ν4+ν3ν4 s) / ((ν3+ν4)(1+ν3 s)(1+ν4 s))`.
    pub fn equilibrium_laplace(&self, s: T) -> T {
        let (a, b) = (self.nu3, self.nu4);
        (a + b + a * b * s) / ((a + b) * (T::one() + a * s) * (T::one() + b * s))
    }
}

impl<T: Real> ClaimDistribution<T> for Hypoexponential<T> {
    fn mean(&self) -> T {
        self.nu3 + self.nu4
    }

    fn second_moment(&self) -> T {
        let (a, b) = (self.nu3, self.nu4);
        T::lit(2.0) * (a * a + a * b + b * b)
    }

    fn third_moment(&self) -> T {
        let (a, b) = (self.nu3, self.nu4);
        T::lit(6.0) * (a * a * a + a * a * b + a * b * b + b * b * b)
    }

    fn cdf(&self, x: T) -> T {
        T::one() - self.survival(x)
    }

    fn survival(&self, x: T) -> T {
        if x <= T::zero() {
            return T::one();
        }
        match self.common_mean() {
            Some(nu) => (T::one() + x / nu) * (-x / nu).exp(),
            None => {
                let (a, b) = (self.nu3, self.nu4);
                (a * (-x / a).exp() - b * (-x / b).exp()) / (a - b)
            }
        }
    }

    fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        match self.common_mean() {
            Some(nu) => x / (nu * nu) * (-x / nu).exp(),
            None => {
                let (a, b) = (self.nu3, self.nu4);
                ((-x / a).exp() - (-x / b).exp()) / (a - b)
            }
        }
    }

    fn laplace(&self, s: T) -> T {
        T::one() / ((T::one() + self.nu3 * s) * (T::one() + self.nu4 * s))
    }

    fn mgf_abscissa(&self) -> T {
        T::one() / self.nu3.max(self.nu4)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        -self.nu3 * T::uniform_open(rng).ln() - self.nu4 * T::uniform_open(rng).ln()
    }

    fn integrated_tail_cdf(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(domain(format!("integrated tail CDF argument must be nonnegative, got {x}")));
        }
        if x == T::zero() {
            return Ok(T::zero());
        }
        let value = match self.common_mean() {
            Some(nu) => {
                let e = (-x / nu).exp();
                T::one() - x / (T::lit(2.0) * nu) * e - e
            }
            None => {
                let (a, b) = (self.nu3, self.nu4);
                let (a2, b2) = (a * a, b * b);
                T::one() - (b2 * (-x / b).exp() - a2 * (-x / a).exp()) / (b2 - a2)
            }
        };
        Ok(value.max(T::zero()).min(T::one()))
    }

    /// Equal means: half Gamma(2), half exponential. Otherwise the density is
    /// a signed exponential combination and the CDF is inverted by bisection.
    fn sample_equilibrium<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self.common_mean() {
            Some(nu) => {
                let unit = T::uniform(rng);
                let first = -nu * T::uniform_open(rng).ln();
                if unit < T::lit(0.5) {
                    first - nu * T::uniform_open(rng).ln()
                } else {
                    first
                }
            }
            None => {
                let p = T::uniform(rng);
                quad::invert_cdf(
                    |x| self.integrated_tail_cdf(x).unwrap_or(T::one()),
                    p,
                    self.mean(),
                    T::lit(INVERSION_TOL),
                )
            }
        }
    }
}

/// Equilibrium law `F_I(x) = (1/E[Y]) ∫₀ˣ P(Y > y) dy` of a base claim law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedTail<D> {
    base: D,
}

impl<D> IntegratedTail<D> {
    pub fn new(base: D) -> Self {
        IntegratedTail { base }
    }

    pub fn base(&self) -> &D {
        &self.base
    }
}

impl<T: Real, D: ClaimDistribution<T>> ClaimDistribution<T> for IntegratedTail<D> {
    fn mean(&self) -> T {
        self.base.second_moment() / (T::lit(2.0) * self.base.mean())
    }

    fn second_moment(&self) -> T {
        self.base.third_moment() / (T::lit(3.0) * self.base.mean())
    }

    fn third_moment(&self) -> T {
        let mean = self.base.mean();
        quad::integrate_to_infinity(|x| x * x * x * self.base.survival(x) / mean, T::zero(), T::lit(1e-10))
            .unwrap_or(T::nan())
    }

    fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        self.base.integrated_tail_cdf(x).unwrap_or(T::nan())
    }

    fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        self.base.survival(x) / self.base.mean()
    }

    fn laplace(&self, s: T) -> T {
        let mean = self.base.mean();
        if (s * mean).abs() < T::lit(1e-6) {
            let m2 = self.base.second_moment();
            let m3 = self.base.third_moment();
            return T::one() - s * m2 / (T::lit(2.0) * mean) + s * s * m3 / (T::lit(6.0) * mean);
        }
        (T::one() - self.base.laplace(s)) / (mean * s)
    }

    fn mgf_abscissa(&self) -> T {
        self.base.mgf_abscissa()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.base.sample_equilibrium(rng)
    }
}

/// Which line an event hits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Occurrence {
    Line1,
    Line2,
    Shock,
}

impl Occurrence {
    /// The indicator triple `(I1, I2, I0)`.
    pub fn one_hot(self) -> [u8; 3] {
        match self {
            Occurrence::Line1 => [1, 0, 0],
            Occurrence::Line2 => [0, 1, 0],
            Occurrence::Shock => [0, 0, 1],
        }
    }
}

/// Categorical law over [`Occurrence`] with weights `(p1, p2, p0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccurrenceIndicator<T> {
    p1: T,
    p2: T,
    p0: T,
}

impl<T: Real> OccurrenceIndicator<T> {
    pub fn new(p1: T, p2: T, p0: T) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2), ("p0", p0)] {
            if !(p >= T::zero() && p <= T::one()) {
                return Err(invalid(name, format!("probability must lie in [0, 1], got {p}")));
            }
        }
        let total = p1 + p2 + p0;
        if (total - T::one()).abs() > T::lit(1e-9).max(T::lit(8.0) * T::epsilon()) {
            return Err(invalid("p", format!("weights must sum to 1, got {total}")));
        }
        Ok(OccurrenceIndicator { p1, p2, p0 })
    }

    /// Weights proportional to the given nonnegative masses.
    pub fn proportional(w1: T, w2: T, w0: T) -> Result<Self> {
        let total = w1 + w2 + w0;
        if !(total > T::zero() && total.is_finite()) || w1 < T::zero() || w2 < T::zero() || w0 < T::zero() {
            return Err(invalid("weights", "masses must be nonnegative with a positive finite total"));
        }
        let p1 = w1 / total;
        let p2 = w2 / total;
        Ok(OccurrenceIndicator { p1, p2, p0: (T::one() - p1 - p2).max(T::zero()) })
    }

    pub fn weights(&self) -> (T, T, T) {
        (self.p1, self.p2, self.p0)
    }

    pub fn probability(&self, which: Occurrence) -> T {
        match which {
            Occurrence::Line1 => self.p1,
            Occurrence::Line2 => self.p2,
            Occurrence::Shock => self.p0,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Occurrence {
        let u = T::uniform(rng);
        if u < self.p1 {
            Occurrence::Line1
        } else if u < self.p1 + self.p2 {
            Occurrence::Line2
        } else if self.p0 > T::zero() {
            Occurrence::Shock
        } else if self.p2 > T::zero() {
            Occurrence::Line2
        } else {
            Occurrence::Line1
        }
    }
}
