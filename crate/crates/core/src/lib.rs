//! Pochhammer-polynomial expansions of functions built from the Riemann zeta
//! function, their coefficient families, and the critical functions computed
//! from zeta zeros and from primes.

pub mod coefficients;
pub mod critical;
pub mod data;
pub mod error;
pub mod expansions;
pub mod hiprec;
pub mod params;
pub mod pochhammer;

pub use coefficients::{CoefficientKind, CoefficientSeries, Kernel, PrimeRouteOptions, Route};
pub use critical::{BetaMode, CriticalConfig, CriticalSample, SweepSummary};
pub use data::{PrimeLimit, PrimeTable, ZeroTable};
pub use error::{Error, Result};
pub use expansions::{ExpansionPlan, SeriesEvaluation, SeriesTarget};
pub use hiprec::{HComplex, HReal, PrecisionContext};
pub use params::{ExactComplex, ExpansionParams};
