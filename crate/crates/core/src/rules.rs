//! Social choice functions: convergence voting and the classical rules it is
//! compared against, plus seat apportionment from a score distribution.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ballots::{
    pairwise_counts, BallotError, CandidateRoster, PairwiseCounts, PreferenceProfile,
};
use crate::chain::{self, ChainError, Distribution, TransitionMatrix};
use crate::graph::{self, GraphError};
use crate::rational::{self, Rational, RationalJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RulesError {
    #[error(transparent)]
    Ballot(#[from] BallotError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(
        "Borda needs every ballot to rank its candidates as a single chain (ballot {0} does not)"
    )]
    NotAChain(usize),
    #[error("scores are not a probability distribution")]
    NotADistribution,
    #[error("at least one seat must be allocated")]
    NoSeats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Convergence,
    Borda,
    Plurality,
    Majority,
    Condorcet,
    Copeland,
    Mc3,
    Naive,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::Convergence,
        Rule::Borda,
        Rule::Plurality,
        Rule::Majority,
        Rule::Condorcet,
        Rule::Copeland,
        Rule::Mc3,
        Rule::Naive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Convergence => "convergence",
            Rule::Borda => "borda",
            Rule::Plurality => "plurality",
            Rule::Majority => "majority",
            Rule::Condorcet => "condorcet",
            Rule::Copeland => "copeland",
            Rule::Mc3 => "mc3",
            Rule::Naive => "naive",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Candidates grouped by exactly equal score, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub tiers: Vec<Vec<usize>>,
}

impl Ranking {
    pub fn winners(&self) -> &[usize] {
        self.tiers.first().map_or(&[], Vec::as_slice)
    }

    pub fn names(&self, roster: &CandidateRoster) -> Vec<Vec<String>> {
        self.tiers
            .iter()
            .map(|t| t.iter().map(|&i| roster.name(i).to_string()).collect())
            .collect()
    }
}

/// Per-candidate scores produced by one rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scoreboard {
    roster: CandidateRoster,
    rule: Rule,
    scores: Vec<Rational>,
}

impl Scoreboard {
    pub fn new(roster: CandidateRoster, rule: Rule, scores: Vec<Rational>) -> Self {
        assert_eq!(roster.len(), scores.len());
        Scoreboard {
            roster,
            rule,
            scores,
        }
    }

    fn from_distribution(rule: Rule, d: Distribution) -> Self {
        let roster = d.roster().clone();
        Scoreboard::new(roster, rule, d.into_mass())
    }

    pub fn roster(&self) -> &CandidateRoster {
        &self.roster
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn scores(&self) -> &[Rational] {
        &self.scores
    }

    pub fn score_of(&self, name: &str) -> Option<&Rational> {
        self.roster.index_of(name).map(|i| &self.scores[i])
    }

    pub fn ranking(&self) -> Ranking {
        rank(self)
    }

    pub fn to_distribution(&self) -> Result<Distribution, RulesError> {
        Distribution::new(self.roster.clone(), self.scores.clone())
            .map_err(|_| RulesError::NotADistribution)
    }

    /// The scoreboard wire format; `winner` is the top tier.
    pub fn to_json(&self) -> Value {
        let ranking = self.ranking();
        let scores: serde_json::Map<String, Value> = self
            .roster
            .names()
            .iter()
            .zip(&self.scores)
            .map(|(n, q)| (n.clone(), json!(RationalJson::from(q))))
            .collect();
        json!({
            "schema_version": 1,
            "rule": self.rule.name(),
            "scores": scores,
            "ranking": ranking.names(&self.roster),
            "winner": ranking.names(&self.roster).first(),
        })
    }
}

/// Sorts by exact score, highest first; exactly equal scores share a tier.
/// Within a tier candidates keep roster order.
pub fn rank(board: &Scoreboard) -> Ranking {
    let mut order: Vec<usize> = (0..board.scores.len()).collect();
    order.sort_by(|&a, &b| board.scores[b].cmp(&board.scores[a]).then(a.cmp(&b)));
    let mut tiers: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match tiers.last_mut() {
            Some(t) if board.scores[t[0]] == board.scores[i] => t.push(i),
            _ => tiers.push(vec![i]),
        }
    }
    Ranking { tiers }
}

/// The convergence-voting chain of a profile: complemented Condorcet graph
/// divided by its normalizer. With no voters or a single candidate the
/// normalizer vanishes and the chain is the identity.
pub fn convergence_chain(
    profile: &PreferenceProfile,
    normalizer_override: Option<u64>,
) -> Result<TransitionMatrix, RulesError> {
    if profile.voters() == 0 || profile.candidates() == 1 {
        return Ok(TransitionMatrix::identity(profile.roster().clone()));
    }
    let counts = pairwise_counts(profile)?;
    let g = graph::complement(
        &graph::condorcet_graph(&counts),
        profile.voters(),
        normalizer_override,
    )?;
    Ok(chain::transition_matrix(&g)?)
}

/// Convergence-voting scores: the limit distribution of the convergence
/// chain started from the uniform distribution.
pub fn convergence_scores(
    profile: &PreferenceProfile,
    normalizer_override: Option<u64>,
) -> Result<Scoreboard, RulesError> {
    let t = convergence_chain(profile, normalizer_override)?;
    let start = Distribution::uniform(profile.roster().clone());
    Ok(Scoreboard::from_distribution(
        Rule::Convergence,
        chain::limit_from(&t, &start)?,
    ))
}

/// Borda count with top = |K| - 1, next = |K| - 2, ..., unranked = 0.
pub fn borda(profile: &PreferenceProfile) -> Result<Scoreboard, RulesError> {
    let k = profile.candidates() as u64;
    let mut scores = vec![BigInt::zero(); profile.candidates()];
    for (bi, b) in profile.ballots().iter().enumerate() {
        let rel = b.relation();
        if !rel.is_chain() {
            return Err(RulesError::NotAChain(bi));
        }
        for x in rel.listed() {
            let points = k - 1 - rel.depth(x) as u64;
            scores[x] += BigInt::from(points) * BigInt::from(b.weight);
        }
    }
    Ok(Scoreboard::new(
        profile.roster().clone(),
        Rule::Borda,
        scores.into_iter().map(Rational::from_integer).collect(),
    ))
}

/// First-preference count. A ballot's weight is split equally among its
/// maximal candidates; an empty ballot counts for nobody.
pub fn plurality(profile: &PreferenceProfile) -> Scoreboard {
    let mut scores = vec![Rational::zero(); profile.candidates()];
    for b in profile.ballots() {
        let top = b.relation().maximal();
        if top.is_empty() {
            continue;
        }
        let share = rational::ratio(b.weight, top.len() as u64);
        for x in top {
            scores[x] += &share;
        }
    }
    Scoreboard::new(profile.roster().clone(), Rule::Plurality, scores)
}

/// The candidate whose plurality score exceeds half the electorate.
pub fn majority_winner(profile: &PreferenceProfile) -> Option<usize> {
    let half = rational::ratio(profile.voters(), 2);
    plurality(profile).scores.iter().position(|s| *s > half)
}

/// The candidate beating every other one in strict pairwise majority.
pub fn condorcet_winner(counts: &PairwiseCounts) -> Option<usize> {
    let k = counts.len();
    (0..k).find(|&x| (0..k).all(|y| y == x || counts.get(y, x) > counts.get(x, y)))
}

/// Pairwise wins minus pairwise losses.
pub fn copeland(counts: &PairwiseCounts) -> Scoreboard {
    let k = counts.len();
    let scores = (0..k)
        .map(|x| {
            let net: i64 = (0..k)
                .filter(|&y| y != x)
                .map(|y| match counts.get(y, x).cmp(&counts.get(x, y)) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                })
                .sum();
            Rational::from_integer(BigInt::from(net))
        })
        .collect();
    Scoreboard::new(counts.roster().clone(), Rule::Copeland, scores)
}

fn chain_with_loops(
    roster: &CandidateRoster,
    off_diagonal: Vec<Vec<Rational>>,
) -> TransitionMatrix {
    let p = off_diagonal
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            let rest = rational::sum(
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| q),
            );
            row[i] = rational::int(1) - rest;
            row
        })
        .collect();
    TransitionMatrix::new(roster.clone(), p).expect("rows are complemented to one")
}

/// MC3 / Rank Centrality chain: moving from i to j depends only on the
/// ratio of voters preferring j among those who compared the pair.
pub fn mc3_chain(counts: &PairwiseCounts) -> TransitionMatrix {
    let k = counts.len();
    let off = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let (to, back) = (counts.get(i, j), counts.get(j, i));
                    if i == j || to == 0 {
                        Rational::zero()
                    } else {
                        Rational::new(
                            BigInt::from(to),
                            BigInt::from(k as u64 - 1) * (BigInt::from(to) + BigInt::from(back)),
                        )
                    }
                })
                .collect()
        })
        .collect();
    chain_with_loops(counts.roster(), off)
}

pub fn mc3_scores(counts: &PairwiseCounts) -> Result<Scoreboard, RulesError> {
    let t = mc3_chain(counts);
    let start = Distribution::uniform(counts.roster().clone());
    Ok(Scoreboard::from_distribution(
        Rule::Mc3,
        chain::limit_from(&t, &start)?,
    ))
}

/// Each row of the Condorcet graph normalized by its own out-weight; rows
/// with nothing going out become absorbing.
pub fn naive_chain(counts: &PairwiseCounts) -> TransitionMatrix {
    let k = counts.len();
    let off = (0..k)
        .map(|i| {
            let out: u128 = counts.matrix()[i].iter().map(|&w| w as u128).sum();
            (0..k)
                .map(|j| {
                    if out == 0 || i == j {
                        Rational::zero()
                    } else {
                        Rational::new(BigInt::from(counts.get(i, j)), BigInt::from(out))
                    }
                })
                .collect()
        })
        .collect();
    chain_with_loops(counts.roster(), off)
}

pub fn naive_normalized_scores(counts: &PairwiseCounts) -> Result<Scoreboard, RulesError> {
    let t = naive_chain(counts);
    let start = Distribution::uniform(counts.roster().clone());
    Ok(Scoreboard::from_distribution(
        Rule::Naive,
        chain::limit_from(&t, &start)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeatMethod {
    LargestRemainder,
    DHondt,
}

impl SeatMethod {
    pub fn name(self) -> &'static str {
        match self {
            SeatMethod::LargestRemainder => "largest-remainder",
            SeatMethod::DHondt => "dhondt",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeatAllocation {
    pub roster: CandidateRoster,
    pub total: u64,
    pub seats: Vec<u64>,
    pub method: SeatMethod,
}

impl SeatAllocation {
    pub fn to_json(&self) -> Value {
        let seats: serde_json::Map<String, Value> = self
            .roster
            .names()
            .iter()
            .zip(&self.seats)
            .map(|(n, &s)| (n.clone(), json!(s)))
            .collect();
        json!({
            "schema_version": 1,
            "method": self.method.name(),
            "total": self.total,
            "seats": seats,
            "tie_break": "roster order",
        })
    }
}

/// Turns a score distribution into `total` integer seats. Ties go to the
/// candidate listed first in the roster.
pub fn allocate_seats(
    board: &Scoreboard,
    total: u64,
    method: SeatMethod,
) -> Result<SeatAllocation, RulesError> {
    if total == 0 {
        return Err(RulesError::NoSeats);
    }
    let dist = board.to_distribution()?;
    let shares = dist.mass();
    let k = shares.len();
    let seats = match method {
        SeatMethod::LargestRemainder => {
            let quotas: Vec<Rational> = shares.iter().map(|s| s * rational::int(total)).collect();
            let mut seats: Vec<u64> = quotas
                .iter()
                .map(|q| {
                    q.floor()
                        .to_integer()
                        .to_u64()
                        .expect("quota fits the total")
                })
                .collect();
            let mut left = total - seats.iter().sum::<u64>();
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| {
                let ra = quotas[a].fract();
                let rb = quotas[b].fract();
                rb.cmp(&ra).then(a.cmp(&b))
            });
            for i in order {
                if left == 0 {
                    break;
                }
                seats[i] += 1;
                left -= 1;
            }
            seats
        }
        SeatMethod::DHondt => {
            let mut seats = vec![0u64; k];
            for _ in 0..total {
                let mut best = 0;
                let mut best_q = &shares[0] / rational::int(seats[0] + 1);
                for i in 1..k {
                    let q = &shares[i] / rational::int(seats[i] + 1);
                    if q > best_q {
                        best = i;
                        best_q = q;
                    }
                }
                seats[best] += 1;
            }
            seats
        }
    };
    Ok(SeatAllocation {
        roster: board.roster.clone(),
        total,
        seats,
        method,
    })
}

/// What one rule produced: a scoreboard for score-based rules and the
/// winning candidates (empty when the rule elects nobody).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleResult {
    pub board: Option<Scoreboard>,
    pub winners: Vec<usize>,
}

impl RuleResult {
    fn scored(board: Scoreboard) -> Self {
        let winners = board.ranking().winners().to_vec();
        RuleResult {
            board: Some(board),
            winners,
        }
    }

    fn single(winner: Option<usize>) -> Self {
        RuleResult {
            board: None,
            winners: winner.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub result: Result<RuleResult, RulesError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub roster: CandidateRoster,
    pub outcomes: Vec<RuleOutcome>,
}

impl Comparison {
    pub fn outcome(&self, rule: Rule) -> &RuleOutcome {
        self.outcomes
            .iter()
            .find(|o| o.rule == rule)
            .expect("every rule is evaluated")
    }

    /// Winner names for `rule`, or `None` if the rule failed.
    pub fn winners(&self, rule: Rule) -> Option<Vec<&str>> {
        self.outcome(rule)
            .result
            .as_ref()
            .ok()
            .map(|r| r.winners.iter().map(|&i| self.roster.name(i)).collect())
    }

    pub fn to_json(&self) -> Value {
        let rules: Vec<Value> = self
            .outcomes
            .iter()
            .map(|o| match &o.result {
                Ok(RuleResult {
                    board: Some(board), ..
                }) => board.to_json(),
                Ok(RuleResult {
                    board: None,
                    winners,
                }) => {
                    let names: Vec<&str> = winners.iter().map(|&i| self.roster.name(i)).collect();
                    json!({
                        "schema_version": 1,
                        "rule": o.rule.name(),
                        "scores": null,
                        "ranking": null,
                        "winner": if names.is_empty() { Value::Null } else { json!(names) },
                    })
                }
                Err(e) => json!({
                    "schema_version": 1,
                    "rule": o.rule.name(),
                    "error": e.to_string(),
                }),
            })
            .collect();
        json!({
            "schema_version": 1,
            "candidates": self.roster.names(),
            "rules": rules,
        })
    }
}

fn evaluate(rule: Rule, profile: &PreferenceProfile) -> Result<RuleResult, RulesError> {
    let counts = || pairwise_counts(profile);
    Ok(match rule {
        Rule::Convergence => RuleResult::scored(convergence_scores(profile, None)?),
        Rule::Borda => RuleResult::scored(borda(profile)?),
        Rule::Plurality => RuleResult::scored(plurality(profile)),
        Rule::Majority => RuleResult::single(majority_winner(profile)),
        Rule::Condorcet => RuleResult::single(condorcet_winner(&counts()?)),
        Rule::Copeland => RuleResult::scored(copeland(&counts()?)),
        Rule::Mc3 => RuleResult::scored(mc3_scores(&counts()?)?),
        Rule::Naive => RuleResult::scored(naive_normalized_scores(&counts()?)?),
    })
}

/// Runs every rule on the profile. A failing rule is reported in its own
/// slot without stopping the others.
pub fn compare_rules(profile: &PreferenceProfile) -> Comparison {
    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = Rule::ALL
            .iter()
            .map(|&rule| {
                s.spawn(move || RuleOutcome {
                    rule,
                    result: evaluate(rule, profile),
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("rule evaluation does not panic"))
            .collect()
    });
    Comparison {
        roster: profile.roster().clone(),
        outcomes,
    }
}
