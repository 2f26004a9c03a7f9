use super::RiskModel;
use crate::claims::ClaimDistribution;
use crate::error::{domain, Error, Result};
use crate::quad;
use crate::real::Real;

/// Relative bracket width at which the adjustment-coefficient bisection stops.
pub const ADJUSTMENT_REL_TOL: f64 = 1e-12;

impl<T: Real> RiskModel<T> {
    /// Smallest MGF singularity over the active components.
    pub fn mgf_abscissa(&self) -> T {
        self.active_components().map(|c| c.claim.mgf_abscissa()).fold(T::infinity(), T::min)
    }

    /// `Σ λ_k (M_k(r) - 1) - c r`, absent where a component MGF diverges.
    pub fn lundberg_function(&self, r: T) -> Option<T> {
        let mut total = -self.premium_rate() * r;
        for c in self.active_components() {
            total += c.rate * (c.claim.mgf(r)? - T::one());
        }
        Some(total)
    }

    /// Positive root `ε` of the Lundberg equation, if one exists.
    pub fn adjustment_coefficient(&self) -> Option<T> {
        if !self.net_profit_holds() {
            return None;
        }
        let positive = |r: T| self.lundberg_function(r).is_some_and(|v| v > T::zero());
        let abscissa = self.mgf_abscissa();
        let half = T::lit(0.5);
        let hi = if abscissa.is_finite() {
            let mut gap = half;
            let mut found = None;
            for _ in 0..60 {
                let r = abscissa * (T::one() - gap);
                if positive(r) {
                    found = Some(r);
                    break;
                }
                gap *= half;
            }
            found?
        } else {
            let mut r = T::one();
            let mut found = None;
            for _ in 0..200 {
                if positive(r) {
                    found = Some(r);
                    break;
                }
                r *= T::lit(2.0);
            }
            found?
        };
        let mut lo = hi * half;
        while self.lundberg_function(lo)? >= T::zero() {
            lo *= half;
            if lo < T::min_positive_value().sqrt() {
                return None;
            }
        }
        let g = |r: T| self.lundberg_function(r).unwrap_or(T::infinity());
        quad::bisect(g, lo, hi, T::zero(), T::lit(ADJUSTMENT_REL_TOL)).ok()
    }

    fn require_adjustment(&self) -> Result<T> {
        self.adjustment_coefficient()
            .ok_or_else(|| Error::Unsupported("model has no positive adjustment coefficient".into()))
    }

    /// Lundberg's inequality `ψ(u) <= exp(-εu)`.
    pub fn lundberg_bound(&self, u: T) -> Result<T> {
        if !(u >= T::zero()) {
            return Err(domain(format!("capital must be nonnegative, got {u}")));
        }
        Ok((-self.require_adjustment()? * u).exp())
    }

    /// `C` in `ψ(u) ~ C exp(-εu)`:
    /// `(c - λμ) / (ε ∫₀^∞ y e^{εy} Σ λ_k P(claim_k > y) dy)`.
    pub fn cramer_lundberg_constant(&self) -> Result<T> {
        let eps = self.require_adjustment()?;
        let components: Vec<_> = self.active_components().collect();
        let tail = |y: T| -> T { components.iter().map(|c| c.rate * c.claim.survival(y)).sum() };
        let decay = self.mgf_abscissa() - eps;
        let scale = if decay.is_finite() { T::one() / decay } else { T::one() / eps };
        let tol = T::lit(1e-11) * self.lambda_mu() * scale * scale;
        let integral = quad::integrate_to_infinity(|y| y * (eps * y).exp() * tail(y), T::zero(), tol)?;
        if !(integral.is_finite() && integral > T::zero()) {
            return Err(Error::Unsupported("Cramér–Lundberg tail integral diverges".into()));
        }
        Ok((self.premium_rate() - self.lambda_mu()) / (eps * integral))
    }

    /// `C exp(-εu)`.
    pub fn cramer_lundberg_approximation(&self, u: T) -> Result<T> {
        if !(u >= T::zero()) {
            return Err(domain(format!("capital must be nonnegative, got {u}")));
        }
        let eps = self.require_adjustment()?;
        Ok(self.cramer_lundberg_constant()? * (-eps * u).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;

    #[test]
    fn single_line_exponent() {
        let m = single_line();
        let eps = m.adjustment_coefficient().unwrap();
        assert!((eps - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn baseline_exponent_residual() {
        let m = baseline();
        let eps = m.adjustment_coefficient().unwrap();
        assert!(eps > 0.0 && eps < 1.0 / 3.0);
        assert!(m.lundberg_function(eps).unwrap().abs() < 1e-9);
    }

    #[test]
    fn no_exponent_without_net_profit() {
        let m = baseline().with_premium_rate(95.0).unwrap();
        assert!(m.adjustment_coefficient().is_none());
        assert!(m.lundberg_bound(1.0).is_err());
        assert!(m.cramer_lundberg_constant().is_err());
    }

    #[test]
    fn bound_at_zero_is_one() {
        assert_eq!(baseline().lundberg_bound(0.0).unwrap(), 1.0);
    }

    #[test]
    fn single_line_constant_is_exact() {
        let m = single_line();
        let c = m.cramer_lundberg_constant().unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-9);
        for u in [0.0, 1.0, 5.0, 20.0] {
            let approx = m.cramer_lundberg_approximation(u).unwrap();
            let exact = m.exact_ruin_probability(u).unwrap();
            assert!((approx - exact).abs() < 1e-9 * exact.max(1e-300) + 1e-12);
        }
    }
}
