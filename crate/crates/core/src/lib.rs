//! Gradual pattern mining over a numeric candidate encoding.
//!
//! A gradual pattern such as `{age+, marks-}` reads "the higher the age, the
//! lower the marks". Every candidate pattern over `m` attributes is encoded as
//! a `2m`-bit vector (two bits per attribute: up, down) and therefore as an
//! integer. Searching for high-support patterns becomes a search over a
//! bounded integer interval, which this crate explores with four
//! metaheuristics:
//!
//! * random search ([`search::rs_grad`]),
//! * stochastic hill climbing ([`search::ls_grad`]),
//! * a genetic algorithm ([`search::ga_grad`]),
//! * particle swarm optimization ([`search::pso_grad`]).
//!
//! An exhaustive miner ([`baseline::graank_mine`]) serves both as the
//! completeness oracle and as the comparison baseline, and the [`harness`]
//! module runs paired benchmarks across the numeric and bitmap search spaces.
//!
//! ```
//! use gradmine::{dataset::Dataset, encoding::{SearchSpace, SpaceKind}, fitness::Evaluator};
//!
//! let d = Dataset::new(
//!     vec!["age".into(), "sessions".into(), "marks".into()],
//!     vec![
//!         vec![23.0, 2.0, 55.0],
//!         vec![32.0, 4.0, 64.0],
//!         vec![40.0, 5.0, 78.0],
//!         vec![25.0, 5.0, 48.0],
//!     ],
//! )
//! .unwrap();
//! let space = SearchSpace::build(d.m(), SpaceKind::Numeric).unwrap();
//! let eval = Evaluator::new(&d, &space).fitness_of(&40u32.into()).unwrap();
//! assert_eq!(eval.concordant_pairs, 4);
//! assert_eq!(eval.fitness, 0.25);
//! ```

pub mod baseline;
pub mod dataset;
pub mod encoding;
mod error;
mod serde_util;
pub mod fitness;
pub mod harness;
pub mod search;

pub use error::{Error, Result};
