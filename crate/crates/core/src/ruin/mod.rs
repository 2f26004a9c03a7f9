//! Risk reserve `R(t) = u + ct - S(t)` and its ruin quantities.
//!
//! The two-line model with shocks behaves as a classical compound Poisson
//! risk process with event rate `λ` and per-event claim law the mixture of
//! `Y1`, `Y2` and `Y3 + Y4` with weights `(λ1, λ2, λ0)/λ`. Everything here is
//! expressed through the three rate-weighted components of that mixture.

mod curve;
mod ladder;
mod lundberg;
mod path;

pub use curve::{CurveMethod, SurvivalCurve};
pub use ladder::{sample_ladder_count, LadderHeight, MaximalLossSample, MaximalLossSampler};
pub use path::{PathOutcome, PathSimulator, RuinEvent, SURVIVOR_TAIL_BOUND};

use rand::Rng;

use crate::aggregate::AggregateModel;
use crate::claims::{ClaimDistribution, Exponential, Hypoexponential, Occurrence};
use crate::error::{invalid, Error, Result};
use crate::real::Real;

/// Per-event claim attached to one occurrence type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventClaim<T> {
    Single(Exponential<T>),
    Shock(Hypoexponential<T>),
}

impl<T: Real> ClaimDistribution<T> for EventClaim<T> {
    fn mean(&self) -> T {
        match self {
            EventClaim::Single(d) => d.mean(),
            EventClaim::Shock(d) => d.mean(),
        }
    }

    fn second_moment(&self) -> T {
        match self {
            EventClaim::Single(d) => d.second_moment(),
            EventClaim::Shock(d) => d.second_moment(),
        }
    }

    fn third_moment(&self) -> T {
        match self {
            EventClaim::Single(d) => d.third_moment(),
            EventClaim::Shock(d) => d.third_moment(),
        }
    }

    fn cdf(&self, x: T) -> T {
        match self {
            EventClaim::Single(d) => d.cdf(x),
            EventClaim::Shock(d) => d.cdf(x),
        }
    }

    fn survival(&self, x: T) -> T {
        match self {
            EventClaim::Single(d) => d.survival(x),
            EventClaim::Shock(d) => d.survival(x),
        }
    }

    fn pdf(&self, x: T) -> T {
        match self {
            EventClaim::Single(d) => d.pdf(x),
            EventClaim::Shock(d) => d.pdf(x),
        }
    }

    fn laplace(&self, s: T) -> T {
        match self {
            EventClaim::Single(d) => d.laplace(s),
            EventClaim::Shock(d) => d.laplace(s),
        }
    }

    fn mgf_abscissa(&self) -> T {
        match self {
            EventClaim::Single(d) => d.mgf_abscissa(),
            EventClaim::Shock(d) => d.mgf_abscissa(),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            EventClaim::Single(d) => d.sample(rng),
            EventClaim::Shock(d) => d.sample(rng),
        }
    }

    fn integrated_tail_cdf(&self, x: T) -> Result<T> {
        match self {
            EventClaim::Single(d) => d.integrated_tail_cdf(x),
            EventClaim::Shock(d) => d.integrated_tail_cdf(x),
        }
    }

    fn sample_equilibrium<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            EventClaim::Single(d) => d.sample_equilibrium(rng),
            EventClaim::Shock(d) => d.sample_equilibrium(rng),
        }
    }
}

/// One rate-weighted piece of the per-event claim mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component<T> {
    pub kind: Occurrence,
    pub rate: T,
    pub claim: EventClaim<T>,
}

/// Closed-form ruin quantities of a [`RiskModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinAnalytics<T> {
    /// Safety loading `c/(λμ) - 1`.
    pub rho: T,
    /// Expected claim outgo per unit time `λμ`.
    pub lambda_mu: T,
    /// Expected claim per event `μ = λμ/λ`.
    pub mean_per_event: T,
    pub psi0: T,
    pub delta0: T,
    pub p1: T,
    pub p2: T,
    pub p0: T,
    /// Mean deficit at ruin from zero capital.
    pub mean_deficit: T,
    /// `E[τ(0) | τ(0) < ∞]`; absent when the net profit condition fails.
    pub expected_ruin_time_at_zero: Option<T>,
    pub adjustment_coefficient: Option<T>,
    pub net_profit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskModel<T> {
    pub aggregate: AggregateModel<T>,
    premium_rate: T,
    initial_capital: T,
}

impl<T: Real> RiskModel<T> {
    pub fn new(aggregate: AggregateModel<T>, premium_rate: T, initial_capital: T) -> Result<Self> {
        if !(premium_rate > T::zero() && premium_rate.is_finite()) {
            return Err(invalid("premium_rate", format!("must be positive and finite, got {premium_rate}")));
        }
        if !(initial_capital >= T::zero() && initial_capital.is_finite()) {
            return Err(invalid("initial_capital", format!("must be nonnegative and finite, got {initial_capital}")));
        }
        Ok(RiskModel { aggregate, premium_rate, initial_capital })
    }

    pub fn premium_rate(&self) -> T {
        self.premium_rate
    }

    pub fn initial_capital(&self) -> T {
        self.initial_capital
    }

    pub fn with_initial_capital(&self, u: T) -> Result<Self> {
        Self::new(self.aggregate, self.premium_rate, u)
    }

    pub fn with_premium_rate(&self, c: T) -> Result<Self> {
        Self::new(self.aggregate, c, self.initial_capital)
    }

    pub fn lambda(&self) -> T {
        self.aggregate.counting.lambda()
    }

    /// The three components `(λ1, Y1)`, `(λ2, Y2)`, `(λ0, Y3 + Y4)`.
    pub fn components(&self) -> [Component<T>; 3] {
        let a = &self.aggregate;
        [
            Component { kind: Occurrence::Line1, rate: a.counting.lambda1(), claim: EventClaim::Single(a.y1) },
            Component { kind: Occurrence::Line2, rate: a.counting.lambda2(), claim: EventClaim::Single(a.y2) },
            Component { kind: Occurrence::Shock, rate: a.counting.lambda0(), claim: EventClaim::Shock(a.shock_sum()) },
        ]
    }

    /// Components with a positive rate.
    pub fn active_components(&self) -> impl Iterator<Item = Component<T>> {
        self.components().into_iter().filter(|c| c.rate > T::zero())
    }

    fn rate_weighted(&self, f: impl Fn(&EventClaim<T>) -> T) -> T {
        self.active_components().map(|c| c.rate * f(&c.claim)).sum()
    }

    /// `λμ = λ1 EY1 + λ2 EY2 + λ0 (EY3 + EY4)`.
    pub fn lambda_mu(&self) -> T {
        self.rate_weighted(|y| y.mean())
    }

    pub fn mean_per_event(&self) -> T {
        self.lambda_mu() / self.lambda()
    }

    /// `λ1 EY1² + λ2 EY2² + λ0 E(Y3 + Y4)²`.
    fn rate_second_moment(&self) -> T {
        self.rate_weighted(|y| y.second_moment())
    }

    pub fn safety_loading(&self) -> T {
        self.premium_rate / self.lambda_mu() - T::one()
    }

    pub fn net_profit_holds(&self) -> bool {
        self.premium_rate > self.lambda_mu()
    }

    pub(crate) fn require_net_profit(&self) -> Result<()> {
        if self.net_profit_holds() {
            Ok(())
        } else {
            Err(Error::NetProfitViolated {
                premium: self.premium_rate.to_f64_lossy(),
                claim_rate: self.lambda_mu().to_f64_lossy(),
            })
        }
    }

    /// `ψ(0) = λμ/c`, clamped to 1 when the net profit condition fails.
    pub fn psi0(&self) -> T {
        (self.lambda_mu() / self.premium_rate).min(T::one())
    }

    pub fn delta0(&self) -> T {
        T::one() - self.psi0()
    }

    /// Ladder-height mixture weights `p_k = λ_k E[claim_k] / λμ`.
    pub fn ladder_weights(&self) -> (T, T, T) {
        let lm = self.lambda_mu();
        let [c1, c2, c0] = self.components();
        (c1.rate * c1.claim.mean() / lm, c2.rate * c2.claim.mean() / lm, c0.rate * c0.claim.mean() / lm)
    }

    /// Mean deficit at ruin from zero capital.
    pub fn mean_deficit(&self) -> T {
        self.rate_second_moment() / (T::lit(2.0) * self.lambda_mu())
    }

    /// `E[τ(0) | τ(0) < ∞] = Σλ_k E[claim_k²] / (2 λμ (c - λμ))`.
    pub fn expected_ruin_time_at_zero(&self) -> Option<T> {
        if !self.net_profit_holds() {
            return None;
        }
        let lm = self.lambda_mu();
        Some(self.rate_second_moment() / (T::lit(2.0) * lm * (self.premium_rate - lm)))
    }

    pub fn analytics(&self) -> RuinAnalytics<T> {
        let (p1, p2, p0) = self.ladder_weights();
        RuinAnalytics {
            rho: self.safety_loading(),
            lambda_mu: self.lambda_mu(),
            mean_per_event: self.mean_per_event(),
            psi0: self.psi0(),
            delta0: self.delta0(),
            p1,
            p2,
            p0,
            mean_deficit: self.mean_deficit(),
            expected_ruin_time_at_zero: self.expected_ruin_time_at_zero(),
            adjustment_coefficient: self.adjustment_coefficient(),
            net_profit: self.net_profit_holds(),
        }
    }

    /// `E[exp(-sM)] = (c - λμ)s / (cs - λ + Σ λ_k L_k(s))` for the maximal aggregate loss.
    pub fn maximal_loss_lst(&self, s: T) -> Result<T> {
        if !(s > T::zero()) {
            return Err(crate::error::domain(format!("maximal loss LST needs s > 0, got {s}")));
        }
        self.require_net_profit()?;
        let c = self.premium_rate;
        let transforms: T = self.rate_weighted(|y| y.laplace(s));
        Ok((c - self.lambda_mu()) * s / (c * s - self.lambda() + transforms))
    }

    /// `P(deficit > x, surplus before ruin > y | ruin)` from zero capital.
    ///
    /// Depends on `(x, y)` only through `x + y`: it is the integrated-tail
    /// survival of the per-event claim evaluated at `x + y`.
    pub fn joint_deficit_surplus_tail(&self, x: T, y: T) -> Result<T> {
        if !(x >= T::zero() && y >= T::zero()) {
            return Err(crate::error::domain(format!("tail arguments must be nonnegative, got ({x}, {y})")));
        }
        Ok(T::one() - self.deficit_cdf(x + y)?)
    }

    /// The line index when exactly one line with exponential claims is active.
    fn single_exponential_line(&self) -> Option<(T, T)> {
        let active: Vec<Component<T>> = self.active_components().collect();
        match active.as_slice() {
            [Component { rate, claim: EventClaim::Single(e), .. }] => Some((*rate, e.mean())),
            _ => None,
        }
    }

    /// Exact `ψ(u) = (λν/c) exp(-(1/ν - λ/c) u)` for a single active exponential line.
    pub fn exact_ruin_probability(&self, u: T) -> Result<T> {
        let Some((rate, nu)) = self.single_exponential_line() else {
            return Err(Error::Unsupported("exact ruin probability needs a single exponential line".into()));
        };
        if !(u >= T::zero()) {
            return Err(crate::error::domain(format!("capital must be nonnegative, got {u}")));
        }
        if !self.net_profit_holds() {
            return Ok(T::one());
        }
        let c = self.premium_rate;
        Ok(rate * nu / c * (-(T::one() / nu - rate / c) * u).exp())
    }
}
