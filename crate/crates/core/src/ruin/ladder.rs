use rand::Rng;

use super::{Component, EventClaim, RiskModel};
use crate::claims::{ClaimDistribution, OccurrenceIndicator};
use crate::error::Result;
use crate::real::Real;

/// Law of the deficit at ruin from zero capital (one ladder height): the
/// `p`-weighted mixture of the integrated tails of `Y1`, `Y2` and `Y3 + Y4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderHeight<T> {
    weights: OccurrenceIndicator<T>,
    components: [Component<T>; 3],
}

impl<T: Real> LadderHeight<T> {
    pub fn weights(&self) -> &OccurrenceIndicator<T> {
        &self.weights
    }

    pub fn cdf(&self, x: T) -> Result<T> {
        let mut total = T::zero();
        for c in &self.components {
            let w = self.weights.probability(c.kind);
            if w > T::zero() {
                total += w * c.claim.integrated_tail_cdf(x)?;
            }
        }
        Ok(total.min(T::one()))
    }

    pub fn mean(&self) -> T {
        self.components
            .iter()
            .map(|c| self.weights.probability(c.kind) * c.claim.second_moment() / (T::lit(2.0) * c.claim.mean()))
            .sum()
    }

    fn claim_for(&self, kind: crate::claims::Occurrence) -> &EventClaim<T> {
        &self.components.iter().find(|c| c.kind == kind).expect("all occurrence kinds present").claim
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let kind = self.weights.sample(rng);
        self.claim_for(kind).sample_equilibrium(rng)
    }
}

/// One draw of the maximal aggregate loss `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalLossSample<T> {
    pub value: T,
    pub ladder_count: u64,
}

/// Number of ladder epochs `K` with `P(K = k) = p (1 - p)^k`, `k = 0, 1, …`.
pub fn sample_ladder_count<T: Real, R: Rng + ?Sized>(p: T, rng: &mut R) -> u64 {
    if p >= T::one() {
        return 0;
    }
    let u = T::uniform_open(rng).to_f64_lossy();
    let log_q = (-p.to_f64_lossy()).ln_1p();
    let k = (u.ln() / log_q).floor();
    if k.is_finite() && k >= 0.0 {
        k as u64
    } else {
        u64::MAX
    }
}

/// Compound-geometric sampler `M = η_1 + … + η_K` with `P(K = k) = δ(0) ψ(0)^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalLossSampler<T> {
    delta0: T,
    ladder: LadderHeight<T>,
}

impl<T: Real> MaximalLossSampler<T> {
    pub fn delta0(&self) -> T {
        self.delta0
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MaximalLossSample<T> {
        let k = sample_ladder_count(self.delta0, rng);
        let mut value = T::zero();
        for _ in 0..k {
            value += self.ladder.sample(rng);
        }
        MaximalLossSample { value, ladder_count: k }
    }
}

impl<T: Real> RiskModel<T> {
    pub fn ladder_height(&self) -> LadderHeight<T> {
        let (p1, p2, p0) = self.ladder_weights();
        let weights = OccurrenceIndicator::proportional(p1, p2, p0).expect("ladder weights are a distribution");
        LadderHeight { weights, components: self.components() }
    }

    /// CDF of the deficit at ruin given ruin from zero capital.
    pub fn deficit_cdf(&self, x: T) -> Result<T> {
        self.ladder_height().cdf(x)
    }

    /// One draw of the deficit at ruin from zero capital.
    pub fn sample_eta<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.ladder_height().sample(rng)
    }

    pub fn maximal_loss_sampler(&self) -> Result<MaximalLossSampler<T>> {
        self.require_net_profit()?;
        Ok(MaximalLossSampler { delta0: self.delta0(), ladder: self.ladder_height() })
    }

    pub fn sample_maximal_loss<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MaximalLossSample<T>> {
        Ok(self.maximal_loss_sampler()?.sample(rng))
    }
}
