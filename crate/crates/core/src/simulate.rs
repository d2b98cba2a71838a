//! Process-level readings of convergence voting, kept independent of the
//! graph and chain modules so they can check the analytic scores:
//!
//! * the negotiation process, where every voter repeatedly hands parts of
//!   their share of each option's support to the options they prefer;
//! * per-voter negotiating matrices and their weighted aggregate;
//! * a random deliberation walk that proposes alternatives and asks a random
//!   voter whether to switch.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ballots::{Ballot, CandidateRoster, PreferenceProfile};
use crate::chain::{self, ChainError, Distribution, TransitionMatrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulateError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("support and profile use different rosters")]
    RosterMismatch,
    #[error("voter shares sum to {0}, not 1")]
    SharesNotOne(String),
    #[error("voter shares must be non-negative")]
    NegativeShare,
    #[error("no voter matrices given")]
    NoVoters,
    #[error("at least two candidates are needed")]
    TooFewCandidates,
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// Support vectors of a negotiation run, `steps[0]` being uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportTrajectory {
    pub steps: Vec<Distribution>,
    /// First round whose L1 change fell below the tolerance.
    pub converged_at: Option<usize>,
    /// `l1_deltas[i]` is the L1 distance between `steps[i]` and `steps[i + 1]`.
    pub l1_deltas: Vec<f64>,
}

impl SupportTrajectory {
    pub fn last(&self) -> &Distribution {
        self.steps
            .last()
            .expect("trajectory starts with the uniform support")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": 1,
            "rounds": self.l1_deltas.len(),
            "converged_at": self.converged_at,
            "l1_deltas": self.l1_deltas,
            "final": self.last().to_json(),
        })
    }
}

/// One negotiation round on integer numerators over a common denominator.
///
/// Each ballot line stands for `weight` identical voters. For every option
/// `c`, a voter's share of `c` is cut into |K| - 1 parts, one per other option
/// `c2`; the part moves to `c2` if the voter prefers `c2` over `c` and stays
/// at `c` otherwise. The returned numerators are over
/// `denominator * voters * (|K| - 1)`.
fn redistribute(profile: &PreferenceProfile, numerators: &[BigInt]) -> Vec<BigInt> {
    let k = profile.candidates();
    // parts[c][target]: how many voter-parts of option c end up at target.
    let mut parts = vec![vec![0u128; k]; k];
    for ballot in profile.ballots() {
        let w = ballot.weight as u128;
        for (c, row) in parts.iter_mut().enumerate() {
            for other in (0..k).filter(|&o| o != c) {
                let target = if ballot.prefers(other, c) { other } else { c };
                row[target] += w;
            }
        }
    }
    let mut next = vec![BigInt::zero(); k];
    for (c, row) in parts.iter().enumerate() {
        for (target, &count) in row.iter().enumerate() {
            if count != 0 {
                next[target] += &numerators[c] * BigInt::from(count);
            }
        }
    }
    next
}

fn step_denominator(profile: &PreferenceProfile) -> BigInt {
    BigInt::from(profile.voters()) * BigInt::from(profile.candidates() as u64 - 1)
}

fn is_static(profile: &PreferenceProfile) -> bool {
    profile.voters() == 0 || profile.candidates() < 2
}

/// One exact negotiation round applied to support `s`. With no voters or a
/// single option nothing can move and `s` is returned unchanged.
pub fn negotiation_step(
    profile: &PreferenceProfile,
    s: &Distribution,
) -> Result<Distribution, SimulateError> {
    if s.roster() != profile.roster() {
        return Err(SimulateError::RosterMismatch);
    }
    if is_static(profile) {
        return Ok(s.clone());
    }
    let common = s
        .mass()
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let numerators: Vec<BigInt> = s
        .mass()
        .iter()
        .map(|q| q.numer() * (&common / q.denom()))
        .collect();
    let den = common * step_denominator(profile);
    let mass = redistribute(profile, &numerators)
        .into_iter()
        .map(|n| BigRational::new(n, den.clone()))
        .collect();
    Ok(Distribution::new(profile.roster().clone(), mass)?)
}

/// Iterates negotiation rounds from the uniform support until the L1 change
/// of a round drops below `tol` or `max_rounds` is reached. All supports are
/// exact; only the change is measured in floating point.
pub fn negotiate(
    profile: &PreferenceProfile,
    max_rounds: usize,
    tol: f64,
) -> Result<SupportTrajectory, SimulateError> {
    if max_rounds == 0 {
        return Err(SimulateError::Zero("max_rounds"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SimulateError::BadTolerance);
    }
    let roster = profile.roster().clone();
    let k = roster.len();
    let mut num = vec![BigInt::one(); k];
    let mut den = BigInt::from(k as u64);
    let mut steps = vec![Distribution::uniform(roster.clone())];
    let mut l1_deltas = Vec::new();
    let mut converged_at = None;
    let scale = if is_static(profile) {
        BigInt::one()
    } else {
        step_denominator(profile)
    };
    for round in 1..=max_rounds {
        let next = if is_static(profile) {
            num.clone()
        } else {
            redistribute(profile, &num)
        };
        let next_den = &den * &scale;
        let change: BigInt = next
            .iter()
            .zip(&num)
            .map(|(a, b)| (a - b * &scale).abs())
            .sum();
        let delta = rational::to_f64(&BigRational::new(change, next_den.clone()));
        let g = next.iter().fold(next_den.clone(), |acc, n| acc.gcd(n));
        num = next.into_iter().map(|n| n / &g).collect();
        den = next_den / &g;
        let mass = num
            .iter()
            .map(|n| BigRational::new(n.clone(), den.clone()))
            .collect();
        steps.push(Distribution::new(roster.clone(), mass)?);
        l1_deltas.push(delta);
        if delta < tol {
            converged_at = Some(round);
            break;
        }
    }
    Ok(SupportTrajectory {
        steps,
        converged_at,
        l1_deltas,
    })
}

/// A voter's negotiating position: row `i` says how that voter would pass
/// on their share of option `i`'s support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterMatrix {
    matrix: TransitionMatrix,
}

impl VoterMatrix {
    /// Each preferred alternative receives 1/(|K| - 1) of an option's share;
    /// the rest stays.
    pub fn from_ballot(ballot: &Ballot, roster: &CandidateRoster) -> Result<Self, SimulateError> {
        let k = roster.len();
        if k < 2 {
            return Err(SimulateError::TooFewCandidates);
        }
        let part = rational::ratio(1, k as u64 - 1);
        let p = (0..k)
            .map(|i| {
                let mut row: Vec<Rational> = (0..k)
                    .map(|j| {
                        if i != j && ballot.prefers(j, i) {
                            part.clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                row[i] = Rational::one() - rational::sum(&row);
                row
            })
            .collect();
        Ok(VoterMatrix {
            matrix: TransitionMatrix::new(roster.clone(), p)?,
        })
    }

    /// A voter who knows their own support function moves every share to it.
    pub fn from_support(support: &Distribution) -> Self {
        let row = support.mass().to_vec();
        let p = vec![row; support.mass().len()];
        VoterMatrix {
            matrix: TransitionMatrix::new(support.roster().clone(), p)
                .expect("rows equal a distribution"),
        }
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }
}

pub fn voter_matrix(
    ballot: &Ballot,
    roster: &CandidateRoster,
) -> Result<VoterMatrix, SimulateError> {
    VoterMatrix::from_ballot(ballot, roster)
}

/// One matrix per ballot line, with share `weight / voters`.
pub fn equal_voter_shares(
    profile: &PreferenceProfile,
) -> Result<Vec<(VoterMatrix, Rational)>, SimulateError> {
    if profile.voters() == 0 {
        return Err(SimulateError::NoVoters);
    }
    profile
        .ballots()
        .iter()
        .map(|b| {
            Ok((
                VoterMatrix::from_ballot(b, profile.roster())?,
                rational::ratio(b.weight, profile.voters()),
            ))
        })
        .collect()
}

/// The share-weighted sum of the voters' matrices.
pub fn aggregate_matrix(
    pairs: &[(VoterMatrix, Rational)],
) -> Result<TransitionMatrix, SimulateError> {
    let (first, _) = pairs.first().ok_or(SimulateError::NoVoters)?;
    let roster = first.matrix.roster().clone();
    let k = roster.len();
    let mut total = Rational::zero();
    let mut p = vec![vec![Rational::zero(); k]; k];
    for (vm, h) in pairs {
        if vm.matrix.roster() != &roster {
            return Err(SimulateError::RosterMismatch);
        }
        if h.is_negative() {
            return Err(SimulateError::NegativeShare);
        }
        total += h;
        for (i, row) in vm.matrix.rows().iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                p[i][j] += h * q;
            }
        }
    }
    if !total.is_one() {
        return Err(SimulateError::SharesNotOne(total.to_string()));
    }
    Ok(TransitionMatrix::new(roster, p)?)
}

/// Limit of the aggregated negotiation chain from `initial`, or from the
/// uniform support when none is given.
pub fn renegotiated_support(
    pairs: &[(VoterMatrix, Rational)],
    initial: Option<&Distribution>,
) -> Result<Distribution, SimulateError> {
    let t = aggregate_matrix(pairs)?;
    let uniform;
    let start = match initial {
        Some(s) => s,
        None => {
            uniform = Distribution::uniform(t.roster().clone());
            &uniform
        }
    };
    Ok(chain::limit_from(&t, start)?)
}

/// Outcome of a random deliberation walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkReport {
    pub candidates: Vec<String>,
    pub seed: u64,
    pub steps: u64,
    pub visit_counts: Vec<u64>,
    pub frequencies: Vec<f64>,
}

impl WalkReport {
    pub fn to_json(&self) -> Value {
        let counts: serde_json::Map<String, Value> = self
            .candidates
            .iter()
            .zip(&self.visit_counts)
            .map(|(n, &c)| (n.clone(), json!(c)))
            .collect();
        let freqs: serde_json::Map<String, Value> = self
            .candidates
            .iter()
            .zip(&self.frequencies)
            .map(|(n, &f)| (n.clone(), json!(f)))
            .collect();
        json!({
            "schema_version": 1,
            "generator": "chacha8",
            "seed": self.seed,
            "steps": self.steps,
            "visit_counts": counts,
            "frequencies": freqs,
        })
    }
}

/// Uniform integer in `0..n` by rejection sampling, so the stream of draws
/// depends only on the generator output.
fn below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    let limit = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < limit {
            return x % n;
        }
    }
}

/// Simulates iterated change of decision for `steps` rounds.
///
/// The walk starts at a uniformly drawn option. Each round proposes a
/// uniformly drawn different option, asks a voter drawn in proportion to
/// ballot weight, and switches if that voter prefers the proposal. The
/// position after each round is counted. Draws come from ChaCha8 seeded with
/// `seed`, so a report is reproducible on every platform.
pub fn random_walk(
    profile: &PreferenceProfile,
    steps: u64,
    seed: u64,
) -> Result<WalkReport, SimulateError> {
    let k = profile.candidates() as u64;
    if k < 2 {
        return Err(SimulateError::TooFewCandidates);
    }
    if steps == 0 {
        return Err(SimulateError::Zero("steps"));
    }
    let ballots = profile.ballots();
    let cumulative: Vec<u64> = ballots
        .iter()
        .scan(0u64, |acc, b| {
            *acc += b.weight;
            Some(*acc)
        })
        .collect();
    let voters = profile.voters();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visits = vec![0u64; k as usize];
    let mut current = below(&mut rng, k) as usize;
    for _ in 0..steps {
        let mut proposal = below(&mut rng, k - 1) as usize;
        if proposal >= current {
            proposal += 1;
        }
        if voters > 0 {
            let r = below(&mut rng, voters);
            let who = cumulative.partition_point(|&c| c <= r);
            if ballots[who].prefers(proposal, current) {
                current = proposal;
            }
        }
        visits[current] += 1;
    }
    let frequencies = visits.iter().map(|&v| v as f64 / steps as f64).collect();
    Ok(WalkReport {
        candidates: profile.roster().names().to_vec(),
        seed,
        steps,
        visit_counts: visits,
        frequencies,
    })
}
