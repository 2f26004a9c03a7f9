use super::RiskModel;
use crate::claims::ClaimDistribution;
use crate::error::{domain, Result};
use crate::mc;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMethod {
    MonteCarlo,
    Volterra,
    ClosedForm,
}

impl CurveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveMethod::MonteCarlo => "monte-carlo",
            CurveMethod::Volterra => "volterra",
            CurveMethod::ClosedForm => "closed-form",
        }
    }
}

/// Survival probability `δ(u)` on the grid `u_i = i * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve<T> {
    pub u: Vec<T>,
    pub delta: Vec<T>,
    /// Finite-difference density of `M`, Monte Carlo curves only.
    pub density: Option<Vec<T>>,
    pub method: CurveMethod,
    pub step: T,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl<T: Real> SurvivalCurve<T> {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Ruin probabilities `1 - δ(u_i)`.
    pub fn psi(&self) -> Vec<T> {
        self.delta.iter().map(|&d| T::one() - d).collect()
    }

    /// Largest `|δ_a - δ_b|` over the grid points both curves share.
    ///
    /// Points are matched by value of `u` up to a relative `1e-9`.
    pub fn max_abs_difference(&self, other: &SurvivalCurve<T>) -> Option<T> {
        let mut worst: Option<T> = None;
        let mut j = 0;
        for (i, &u) in self.u.iter().enumerate() {
            while j < other.u.len() && other.u[j] < u - T::lit(1e-9) * u.max(T::one()) {
                j += 1;
            }
            if j < other.u.len() && (other.u[j] - u).abs() <= T::lit(1e-9) * u.max(T::one()) {
                let d = (self.delta[i] - other.delta[j]).abs();
                worst = Some(worst.map_or(d, |w| w.max(d)));
            }
        }
        worst
    }
}

fn grid<T: Real>(grid_max: T, step: T) -> Result<Vec<T>> {
    if !(step > T::zero() && step.is_finite()) {
        return Err(domain(format!("grid step must be positive, got {step}")));
    }
    if !(grid_max > T::zero() && grid_max.is_finite()) {
        return Err(domain(format!("grid maximum must be positive, got {grid_max}")));
    }
    let n = (grid_max / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    Ok((0..=n).map(|i| T::from_usize(i).expect("grid index") * step).collect())
}

/// Central differences of an empirical CDF; one-sided at both ends so the
/// atom at zero stays out of the density.
fn finite_difference_density<T: Real>(cdf: &[T], step: T) -> Vec<T> {
    let n = cdf.len();
    if n < 2 {
        return vec![T::zero(); n];
    }
    (0..n)
        .map(|i| {
            if i == 0 {
                (cdf[1] - cdf[0]) / step
            } else if i == n - 1 {
                (cdf[n - 1] - cdf[n - 2]) / step
            } else {
                (cdf[i + 1] - cdf[i - 1]) / (T::lit(2.0) * step)
            }
        })
        .collect()
}

impl<T: Real> RiskModel<T> {
    /// Empirical CDF of `samples` compound-geometric draws of `M`.
    ///
    /// Deterministic in `(seed, samples)` regardless of the thread pool.
    pub fn survival_curve_mc(&self, grid_max: T, grid_step: T, samples: u64, seed: u64) -> Result<SurvivalCurve<T>> {
        let u = grid(grid_max, grid_step)?;
        if samples == 0 {
            return Err(domain("sample count must be positive"));
        }
        let sampler = self.maximal_loss_sampler()?;
        let bins = u.len();
        let histograms = mc::map_chunks(samples, seed, |_, len, rng| {
            let mut hist = vec![0u64; bins];
            for _ in 0..len {
                let m = sampler.sample(rng).value;
                let idx = if m <= T::zero() { 0 } else { (m / grid_step).ceil().to_usize().unwrap_or(usize::MAX) };
                if idx < bins {
                    hist[idx] += 1;
                }
            }
            hist
        });
        let mut counts = vec![0u64; bins];
        for h in histograms {
            for (c, v) in counts.iter_mut().zip(h) {
                *c += v;
            }
        }
        let total = T::from_count(samples);
        let mut running = 0u64;
        let delta: Vec<T> = counts
            .iter()
            .map(|&c| {
                running += c;
                T::from_count(running) / total
            })
            .collect();
        let density = finite_difference_density(&delta, grid_step);
        Ok(SurvivalCurve {
            u,
            delta,
            density: Some(density),
            method: CurveMethod::MonteCarlo,
            step: grid_step,
            samples: Some(samples),
            seed: Some(seed),
        })
    }

    /// Solution of the ruin equation
    /// `ψ(u) = ψ(0)(1 - F_I(u)) + ∫₀ᵘ ψ(u - y) K(y) dy` with kernel
    /// `K(y) = Σ (λ_k / c) P(claim_k > y)`, reported as `δ = 1 - ψ`.
    ///
    /// Trapezoid solves at `step` and `step / 2` are combined by Richardson
    /// extrapolation, giving fourth-order accuracy on the requested grid.
    pub fn survival_curve_volterra(&self, grid_max: T, step: T) -> Result<SurvivalCurve<T>> {
        let u = grid(grid_max, step)?;
        self.require_net_profit()?;
        let n = u.len();
        let coarse = self.trapezoid_psi(n, step)?;
        let fine = self.trapezoid_psi(2 * n - 1, step * T::lit(0.5))?;
        let three = T::lit(3.0);
        let delta = (0..n)
            .map(|i| {
                let psi = (T::lit(4.0) * fine[2 * i] - coarse[i]) / three;
                T::one() - psi.max(T::zero()).min(T::one())
            })
            .collect();
        Ok(SurvivalCurve { u, delta, density: None, method: CurveMethod::Volterra, step, samples: None, seed: None })
    }

    /// Trapezoid-rule `ψ` on `n` points `0, h, 2h, ...`.
    fn trapezoid_psi(&self, n: usize, h: T) -> Result<Vec<T>> {
        let c = self.premium_rate();
        let components: Vec<_> = self.active_components().collect();
        let nodes: Vec<T> = (0..n).map(|i| T::from_usize(i).expect("grid index") * h).collect();
        let kernel: Vec<T> =
            nodes.iter().map(|&y| components.iter().map(|k| k.rate / c * k.claim.survival(y)).sum()).collect();
        let psi0 = self.psi0();
        let forcing =
            nodes.iter().map(|&x| self.deficit_cdf(x).map(|f| psi0 * (T::one() - f))).collect::<Result<Vec<T>>>()?;
        let half = T::lit(0.5);
        let denom = T::one() - half * h * kernel[0];
        let mut psi = Vec::with_capacity(n);
        psi.push(psi0);
        for i in 1..n {
            let interior: T = kernel[1..i].iter().zip(psi[1..i].iter().rev()).map(|(&k, &d)| k * d).sum();
            let rhs = forcing[i] + h * (interior + half * kernel[i] * psi0);
            psi.push(rhs / denom);
        }
        Ok(psi)
    }

    /// Exact curve for a single active exponential line.
    pub fn survival_curve_exact(&self, grid_max: T, step: T) -> Result<SurvivalCurve<T>> {
        let u = grid(grid_max, step)?;
        let delta =
            u.iter().map(|&x| self.exact_ruin_probability(x).map(|p| T::one() - p)).collect::<Result<Vec<T>>>()?;
        Ok(SurvivalCurve { u, delta, density: None, method: CurveMethod::ClosedForm, step, samples: None, seed: None })
    }
}
