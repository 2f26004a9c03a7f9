use rand::Rng;

use super::RiskModel;
use crate::claims::{ClaimDistribution, Exponential, Occurrence, OccurrenceIndicator};
use crate::error::{domain, Result};
use crate::real::Real;

/// Paths whose reserve reaches a level with Lundberg bound below this value
/// are recorded as survivors without walking on to the horizon.
pub const SURVIVOR_TAIL_BOUND: f64 = 1e-12;

/// Residual ruin mass beyond the horizon targeted by [`RiskModel::default_horizon`].
pub const HORIZON_RESIDUAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinEvent<T> {
    pub time: T,
    /// `|R(τ)|` just after the ruining claim.
    pub deficit: T,
    /// `R(τ-)` just before the ruining claim.
    pub surplus_before: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOutcome<T> {
    pub ruin: Option<RuinEvent<T>>,
}

impl<T> PathOutcome<T> {
    pub fn is_ruined(&self) -> bool {
        self.ruin.is_some()
    }
}

/// Event-driven walk of the reserve with exponential inter-arrival times.
#[derive(Debug, Clone, Copy)]
pub struct PathSimulator<T> {
    model: RiskModel<T>,
    horizon: T,
    arrivals: Exponential<T>,
    occurrence: OccurrenceIndicator<T>,
    survivor_level: Option<T>,
}

impl<T: Real> PathSimulator<T> {
    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn simulate<R: Rng + ?Sized>(&self, rng: &mut R) -> PathOutcome<T> {
        let agg = &self.model.aggregate;
        let c = self.model.premium_rate();
        let mut reserve = self.model.initial_capital();
        let mut t = T::zero();
        loop {
            let dt = self.arrivals.sample(rng);
            t += dt;
            if t > self.horizon {
                return PathOutcome { ruin: None };
            }
            reserve += c * dt;
            let claim = match self.occurrence.sample(rng) {
                Occurrence::Line1 => agg.y1.sample(rng),
                Occurrence::Line2 => agg.y2.sample(rng),
                Occurrence::Shock => agg.y3.sample(rng) + agg.y4.sample(rng),
            };
            let before = reserve;
            reserve -= claim;
            if reserve < T::zero() {
                return PathOutcome { ruin: Some(RuinEvent { time: t, deficit: -reserve, surplus_before: before }) };
            }
            if self.survivor_level.is_some_and(|level| reserve >= level) {
                return PathOutcome { ruin: None };
            }
        }
    }
}

impl<T: Real> RiskModel<T> {
    pub fn path_simulator(&self, horizon: T) -> Result<PathSimulator<T>> {
        if !(horizon > T::zero()) {
            return Err(domain(format!("horizon must be positive, got {horizon}")));
        }
        let arrivals = Exponential::new(T::one() / self.lambda())?;
        let survivor_level = self.adjustment_coefficient().map(|eps| -T::lit(SURVIVOR_TAIL_BOUND).ln() / eps);
        Ok(PathSimulator {
            model: *self,
            horizon,
            arrivals,
            occurrence: self.aggregate.counting.occurrence(),
            survivor_level,
        })
    }

    pub fn simulate_path<R: Rng + ?Sized>(&self, horizon: T, rng: &mut R) -> Result<PathOutcome<T>> {
        Ok(self.path_simulator(horizon)?.simulate(rng))
    }

    /// Horizon after which the reserve has typically drifted to a level
    /// whose Lundberg bound is below [`HORIZON_RESIDUAL`], doubled.
    pub fn default_horizon(&self) -> T {
        let floor = T::lit(100.0) / self.lambda();
        match self.adjustment_coefficient() {
            Some(eps) => {
                let level = -T::lit(HORIZON_RESIDUAL).ln() / eps - self.initial_capital();
                let drift = self.premium_rate() - self.lambda_mu();
                (T::lit(2.0) * level.max(T::zero()) / drift).max(floor)
            }
            None => T::lit(1e4) / self.lambda(),
        }
    }
}
