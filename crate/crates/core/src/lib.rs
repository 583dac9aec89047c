//! Symmetric eavesdropping on `d`-dimensional quantum key distribution with
//! mutually unbiased bases.
//!
//! The crate builds Eve's optimal symmetric incoherent attack as an explicit
//! isometry, checks by exact state-vector simulation that it disturbs every
//! signal state equally, and evaluates the Alice–Bob and Alice–Eve
//! information curves (in dits) together with their crossing point.
//!
//! | module | contents |
//! |---|---|
//! | [`quantum`] | states, density operators, partial traces, measurements |
//! | [`mub`] | mutually unbiased bases for `d = 2` and odd primes |
//! | [`attack`] | overlap closed forms and the attack isometry |
//! | [`analysis`] | simulation of disturbance, Eve's states and information |
//! | [`infocurves`] | `I_AB`, `I_AE`, crossing and dimension scan |
//! | [`oracle`] | independent optimality checks |
//! | [`cli`] | the `mub-eavesdrop` command line |

pub mod analysis;
pub mod attack;
pub mod cli;
pub mod error;
pub mod infocurves;
pub mod mub;
pub mod oracle;
pub mod output;
pub mod quantum;

pub use analysis::{verify_attack, AttackReport};
pub use attack::{build_isometry, AttackConfig, EveIsometry};
pub use error::{Error, Result};
pub use infocurves::{crossing, i_ab, i_ae, CrossingResult, InfoCurvePoint};
pub use mub::{mub_bases, verify_mub, BasisSet};
pub use oracle::{stochastic_search, OracleOutcome};
pub use quantum::{DensityOperator, LinearMap, StateVector};
