//! Two-line insurance risk model with common shocks.
//!
//! Claims on two policy lines arrive from three independent Poisson streams:
//! line 1 only (rate `λ1`), line 2 only (rate `λ2`) and shock events (rate
//! `λ0`) that pay on both lines at once. The crate covers
//!
//! * [`claims`]: claim-size laws and their integrated-tail companions,
//! * [`counting`]: the bivariate counting process and its analytic law,
//! * [`aggregate`]: total claim amounts, transforms and moments,
//! * [`ruin`]: ruin probabilities by closed forms, a Volterra solver and
//!   Monte Carlo, deficit at ruin, Lundberg bounds,
//! * [`mc`]: seed-substreamed chunked Monte Carlo.
//!
//! All numerics are generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregate;
pub mod claims;
pub mod counting;
pub mod error;
pub mod mc;
pub mod quad;
pub mod real;
pub mod ruin;

pub use error::{Error, Result};
pub use real::Real;

pub type ExponentialClaim = claims::Exponential<f64>;
pub type HypoexponentialSum = claims::Hypoexponential<f64>;
pub type OccurrenceIndicator = claims::OccurrenceIndicator<f64>;
pub type CountingModel = counting::CountingModel<f64>;
pub type BivariateCount = counting::BivariateCount<f64>;
pub type AggregateModel = aggregate::AggregateModel<f64>;
pub type AggregateSample = aggregate::AggregateSample<f64>;
pub type RiskModel = ruin::RiskModel<f64>;
pub type RuinAnalytics = ruin::RuinAnalytics<f64>;
pub type SurvivalCurve = ruin::SurvivalCurve<f64>;
pub type PathOutcome = ruin::PathOutcome<f64>;
pub type MaximalLossSample = ruin::MaximalLossSample<f64>;
