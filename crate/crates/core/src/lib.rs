//! Convergence voting: candidates are ranked by the limit distribution of a
//! Markov chain built from pairwise-comparison counts.
//!
//! The pipeline runs through the modules in order:
//!
//! * [`ballots`] parses weighted partial-order ballots and counts pairwise
//!   preferences;
//! * [`graph`] turns the counts into the Condorcet graph and pads it with
//!   loops so every row sums to the same normalizer;
//! * [`chain`] divides by the normalizer and computes the exact limit
//!   distribution from the uniform start;
//! * [`rules`] wraps that as a social choice function next to the classical
//!   rules it is compared with, and apportions seats;
//! * [`simulate`] replays the same scores through the negotiation process
//!   and a random deliberation walk, as independent checks.
//!
//! ```
//! use convergence_voting::{ballots, rules};
//!
//! let profile = ballots::parse_profile("candidates: A, B\n3: A > B\n1: B > A").unwrap();
//! let board = rules::convergence_scores(&profile, None).unwrap();
//! assert_eq!(board.scores()[0].to_string(), "3/4");
//! ```

pub mod ballots;
pub mod chain;
pub mod graph;
mod linalg;
pub mod rational;
pub mod rules;
pub mod simulate;

pub use ballots::{parse_profile, CandidateRoster, PairwiseCounts, PreferenceProfile};
pub use chain::{Distribution, TransitionMatrix};
pub use graph::PCGraph;
pub use rational::Rational;
