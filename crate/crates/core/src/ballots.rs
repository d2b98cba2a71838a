//! Candidate rosters, weighted partial-order ballots and the pairwise counts
//! they reduce to, plus the plain-text ballot file format.
//!
//! A ballot file looks like this:
//!
//! ```text
//! # comments run to end of line
//! candidates: A, B, C
//! 3: A > B > C
//! 1: B > C; A > C     # several chains on one line are unioned
//! 2: C                # a lone name asserts nothing
//! ```
//!
//! Chains list the most preferred candidate first. Every ballot is closed
//! transitively; a cycle after closure is rejected.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallotError {
    #[error("the candidate roster is empty")]
    EmptyRoster,
    #[error("invalid candidate name {0:?}")]
    InvalidName(String),
    #[error("candidate {0:?} is declared twice")]
    DuplicateCandidate(String),
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("candidate {0:?} appears twice in one chain")]
    DuplicateInChain(String),
    #[error("candidate index {index} is outside a roster of {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("preferences form a cycle: {}", .0.join(" > "))]
    Cycle(Vec<String>),
    #[error("ballot covers {found} candidates but the roster has {expected}")]
    RosterMismatch { expected: usize, found: usize },
    #[error("voter count overflows a 64-bit integer")]
    Overflow,
    #[error("pairwise count of {0:?} against itself must be zero")]
    NonZeroDiagonal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `candidates:` header")]
    MissingHeader,
    #[error("malformed weight {0:?}")]
    BadWeight(String),
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Ballot(#[from] BallotError),
}

/// A ballot-file error, tagged with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// The ordered set of votable options. A candidate's position in the roster
/// is its row and column in every matrix derived from a profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateRoster {
    names: Vec<String>,
}

impl CandidateRoster {
    pub fn new<I, S>(names: I) -> Result<Self, BallotError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<String> = Vec::new();
        for raw in names {
            let name = raw.as_ref().trim();
            if !valid_name(name) {
                return Err(BallotError::InvalidName(name.to_string()));
            }
            if out.iter().any(|n| n == name) {
                return Err(BallotError::DuplicateCandidate(name.to_string()));
            }
            out.push(name.to_string());
        }
        if out.is_empty() {
            return Err(BallotError::EmptyRoster);
        }
        Ok(CandidateRoster { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name.trim())
    }

    /// Ordered union: `self` followed by the names of `other` not already present.
    pub fn union(&self, other: &CandidateRoster) -> CandidateRoster {
        let mut names = self.names.clone();
        for n in &other.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        CandidateRoster { names }
    }
}

/// A strict partial order over roster indices, stored densely:
/// `prefers(x, y)` means x is strictly preferred to y.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    bits: Vec<bool>,
}

impl Relation {
    /// The fully indifferent relation.
    pub fn empty(size: usize) -> Self {
        Relation {
            size,
            bits: vec![false; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.size + y]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.size;
        (0..k * k)
            .filter(move |&i| self.bits[i])
            .map(move |i| (i / k, i % k))
    }

    pub fn pair_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Candidates that occur in at least one pair.
    pub fn listed(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| (0..self.size).any(|y| self.prefers(x, y) || self.prefers(y, x)))
            .collect()
    }

    /// Listed candidates that nobody in this ballot is preferred to.
    pub fn maximal(&self) -> Vec<usize> {
        self.listed()
            .into_iter()
            .filter(|&x| (0..self.size).all(|y| !self.prefers(y, x)))
            .collect()
    }

    /// Number of candidates ranked strictly above `x`.
    pub fn depth(&self, x: usize) -> usize {
        (0..self.size).filter(|&y| self.prefers(y, x)).count()
    }

    /// True when the listed candidates are totally ordered.
    pub fn is_chain(&self) -> bool {
        let listed = self.listed();
        listed.iter().enumerate().all(|(i, &x)| {
            listed[i + 1..]
                .iter()
                .all(|&y| self.prefers(x, y) || self.prefers(y, x))
        })
    }

    /// Listed candidates sorted from most to least preferred. Only meaningful
    /// for chains.
    pub fn chain_order(&self) -> Vec<usize> {
        let mut listed = self.listed();
        listed.sort_by_key(|&x| self.depth(x));
        listed
    }

    /// Pairs (x, y) with no z strictly between them.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .filter(|&(x, y)| !(0..self.size).any(|z| self.prefers(x, z) && self.prefers(z, y)))
            .collect()
    }
}

/// Transitively closes `pairs` over `roster`, rejecting any cycle.
pub fn close_ballot(
    roster: &CandidateRoster,
    pairs: &[(usize, usize)],
) -> Result<Relation, BallotError> {
    let k = roster.len();
    let mut rel = Relation::empty(k);
    for &(x, y) in pairs {
        for index in [x, y] {
            if index >= k {
                return Err(BallotError::IndexOutOfRange { index, size: k });
            }
        }
        rel.bits[x * k + y] = true;
    }
    // Warshall
    for m in 0..k {
        for x in 0..k {
            if !rel.bits[x * k + m] {
                continue;
            }
            for y in 0..k {
                if rel.bits[m * k + y] {
                    rel.bits[x * k + y] = true;
                }
            }
        }
    }
    if let Some(x) = (0..k).find(|&x| rel.prefers(x, x)) {
        let cycle = find_cycle(k, pairs, x)
            .into_iter()
            .map(|i| roster.name(i).to_string())
            .collect();
        return Err(BallotError::Cycle(cycle));
    }
    Ok(rel)
}

/// Shortest path x -> ... -> x through the raw pairs, as a node list that
/// starts and ends with x.
fn find_cycle(k: usize, pairs: &[(usize, usize)], x: usize) -> Vec<usize> {
    let mut parent = vec![None; k];
    let mut queue = VecDeque::new();
    for &(a, b) in pairs {
        if a == x && parent[b].is_none() {
            parent[b] = Some(x);
            queue.push_back(b);
        }
    }
    while let Some(u) = queue.pop_front() {
        if u == x {
            break;
        }
        for &(a, b) in pairs {
            if a == u && parent[b].is_none() {
                parent[b] = Some(u);
                queue.push_back(b);
            }
        }
    }
    let mut path = vec![x];
    let mut cur = parent[x];
    while let Some(p) = cur {
        path.push(p);
        if p == x {
            break;
        }
        cur = parent[p];
    }
    path.reverse();
    path
}

/// A group of `weight` voters sharing the same preference relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    pub weight: u64,
    relation: Relation,
}

impl Ballot {
    pub fn new(weight: u64, relation: Relation) -> Self {
        Ballot { weight, relation }
    }

    /// A ballot ranking `chain` from most to least preferred.
    pub fn chain(
        roster: &CandidateRoster,
        weight: u64,
        chain: &[usize],
    ) -> Result<Self, BallotError> {
        let mut pairs = Vec::new();
        for (i, &x) in chain.iter().enumerate() {
            if chain[..i].contains(&x) {
                let name = roster
                    .names()
                    .get(x)
                    .cloned()
                    .unwrap_or_else(|| x.to_string());
                return Err(BallotError::DuplicateInChain(name));
            }
            for &y in &chain[i + 1..] {
                pairs.push((x, y));
            }
        }
        Ok(Ballot::new(weight, close_ballot(roster, &pairs)?))
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    #[inline]
    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.relation.prefers(x, y)
    }
}

/// The multiset of ballots cast over a roster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    roster: CandidateRoster,
    ballots: Vec<Ballot>,
    voters: u64,
}

impl PreferenceProfile {
    pub fn new(roster: CandidateRoster, ballots: Vec<Ballot>) -> Result<Self, BallotError> {
        let mut voters: u64 = 0;
        for b in &ballots {
            if b.relation.size() != roster.len() {
                return Err(BallotError::RosterMismatch {
                    expected: roster.len(),
                    found: b.relation.size(),
                });
            }
            voters = voters.checked_add(b.weight).ok_or(BallotError::Overflow)?;
        }
        Ok(PreferenceProfile {
            roster,
            ballots,
            voters,
        })
    }

    /// Builds a profile from `(chain, weight)` pairs written with candidate names.
    pub fn from_chains(names: &[&str], chains: &[(&[&str], u64)]) -> Result<Self, BallotError> {
        let roster = CandidateRoster::new(names)?;
        let mut ballots = Vec::with_capacity(chains.len());
        for (chain, weight) in chains {
            let idx = chain
                .iter()
                .map(|n| {
                    roster
                        .index_of(n)
                        .ok_or_else(|| BallotError::UnknownCandidate(n.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ballots.push(Ballot::chain(&roster, *weight, &idx)?);
        }
        PreferenceProfile::new(roster, ballots)
    }

    pub fn roster(&self) -> &CandidateRoster {
        &self.roster
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    /// Total voter count, the sum of ballot weights.
    pub fn voters(&self) -> u64 {
        self.voters
    }

    pub fn candidates(&self) -> usize {
        self.roster.len()
    }

    /// The same ballots with one candidate struck from the roster and from
    /// every relation.
    pub fn without_candidate(&self, name: &str) -> Result<Self, BallotError> {
        let drop = self
            .roster
            .index_of(name)
            .ok_or_else(|| BallotError::UnknownCandidate(name.to_string()))?;
        let keep: Vec<usize> = (0..self.roster.len()).filter(|&i| i != drop).collect();
        let roster = CandidateRoster::new(keep.iter().map(|&i| self.roster.name(i)))?;
        let ballots = self
            .ballots
            .iter()
            .map(|b| {
                let pairs: Vec<(usize, usize)> = keep
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &x)| {
                        keep.iter()
                            .enumerate()
                            .filter(move |&(_, &y)| b.prefers(x, y))
                            .map(move |(j, _)| (i, j))
                    })
                    .collect();
                Ok(Ballot::new(b.weight, close_ballot(&roster, &pairs)?))
            })
            .collect::<Result<Vec<_>, BallotError>>()?;
        PreferenceProfile::new(roster, ballots)
    }
}

/// `n[x][y]` is the number of voters who strictly prefer y over x: the
/// weight of the Condorcet edge x -> y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseCounts {
    roster: CandidateRoster,
    n: Vec<Vec<u64>>,
}

impl PairwiseCounts {
    /// Wraps a raw count matrix. The diagonal must be zero.
    pub fn from_matrix(roster: CandidateRoster, n: Vec<Vec<u64>>) -> Result<Self, BallotError> {
        let k = roster.len();
        if n.len() != k || n.iter().any(|row| row.len() != k) {
            return Err(BallotError::RosterMismatch {
                expected: k,
                found: n.len(),
            });
        }
        if let Some(x) = (0..k).find(|&x| n[x][x] != 0) {
            return Err(BallotError::NonZeroDiagonal(roster.name(x).to_string()));
        }
        Ok(PairwiseCounts { roster, n })
    }

    pub fn roster(&self) -> &CandidateRoster {
        &self.roster
    }

    /// Number of voters preferring `y` over `x`.
    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.n[x][y]
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }
}

/// Reduces a profile to its pairwise-comparison counts.
pub fn pairwise_counts(profile: &PreferenceProfile) -> Result<PairwiseCounts, BallotError> {
    let k = profile.candidates();
    let mut n = vec![vec![0u64; k]; k];
    for b in profile.ballots() {
        for (winner, loser) in b.relation().pairs() {
            let cell = &mut n[loser][winner];
            *cell = cell.checked_add(b.weight).ok_or(BallotError::Overflow)?;
        }
    }
    Ok(PairwiseCounts {
        roster: profile.roster().clone(),
        n,
    })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_weight(raw: &str) -> Result<u64, ParseErrorKind> {
    let raw = raw.trim();
    if raw.is_empty() || !raw.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseErrorKind::BadWeight(raw.to_string()));
    }
    raw.parse()
        .map_err(|_| ParseErrorKind::BadWeight(raw.to_string()))
}

fn parse_ballot_line(roster: &CandidateRoster, line: &str) -> Result<Ballot, ParseErrorKind> {
    let (weight, body) = line
        .split_once(':')
        .ok_or_else(|| ParseErrorKind::Syntax("expected `<weight>: <chain>`".to_string()))?;
    let weight = parse_weight(weight)?;
    let body = body.trim();
    let mut pairs = Vec::new();
    if !body.is_empty() {
        for chain in body.split(';') {
            let chain = chain.trim();
            if chain.is_empty() {
                return Err(ParseErrorKind::Syntax("empty chain".to_string()));
            }
            let mut seen: Vec<usize> = Vec::new();
            for name in chain.split('>') {
                let name = name.trim();
                if name.is_empty() {
                    return Err(ParseErrorKind::Syntax(format!(
                        "missing candidate name in chain {chain:?}"
                    )));
                }
                let idx = roster
                    .index_of(name)
                    .ok_or_else(|| BallotError::UnknownCandidate(name.to_string()))?;
                if seen.contains(&idx) {
                    return Err(BallotError::DuplicateInChain(name.to_string()).into());
                }
                pairs.extend(seen.iter().map(|&above| (above, idx)));
                seen.push(idx);
            }
        }
    }
    Ok(Ballot::new(weight, close_ballot(roster, &pairs)?))
}

/// Parses a ballot file.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile, ParseError> {
    let mut roster: Option<CandidateRoster> = None;
    let mut ballots = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let err = |kind: ParseErrorKind| ParseError {
            line: line_no,
            kind,
        };
        match &roster {
            None => {
                let names = line
                    .strip_prefix("candidates")
                    .and_then(|rest| rest.trim_start().strip_prefix(':'))
                    .ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                let r = CandidateRoster::new(names.split(','))
                    .map_err(|e| err(ParseErrorKind::Ballot(e)))?;
                roster = Some(r);
            }
            Some(r) => ballots.push(parse_ballot_line(r, line).map_err(err)?),
        }
    }
    let roster = roster.ok_or(ParseError {
        line: last_line.max(1),
        kind: ParseErrorKind::MissingHeader,
    })?;
    PreferenceProfile::new(roster, ballots).map_err(|e| ParseError {
        line: last_line,
        kind: e.into(),
    })
}

/// Renders a profile in the ballot file format. Chain ballots are written as
/// one chain; other partial orders as their covering pairs.
pub fn format_profile(profile: &PreferenceProfile) -> String {
    profile.to_string()
}

impl fmt::Display for PreferenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roster = &self.roster;
        writeln!(f, "candidates: {}", roster.names().join(", "))?;
        for b in &self.ballots {
            let rel = b.relation();
            let chains: Vec<String> = if rel.is_empty() {
                Vec::new()
            } else if rel.is_chain() {
                let names: Vec<&str> = rel.chain_order().iter().map(|&x| roster.name(x)).collect();
                vec![names.join(" > ")]
            } else {
                rel.covers()
                    .iter()
                    .map(|&(x, y)| format!("{} > {}", roster.name(x), roster.name(y)))
                    .collect()
            };
            if chains.is_empty() {
                writeln!(f, "{}:", b.weight)?;
            } else {
                writeln!(f, "{}: {}", b.weight, chains.join("; "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> CandidateRoster {
        CandidateRoster::new(["A", "B", "C"]).unwrap()
    }

    #[test]
    fn two_candidate_chain() {
        let p = parse_profile("candidates: A,B\n1: A > B").unwrap();
        assert_eq!(p.ballots().len(), 1);
        let pairs: Vec<_> = p.ballots()[0].relation().pairs().collect();
        assert_eq!(pairs, vec![(0, 1)]);
        assert_eq!(p.voters(), 1);
    }

    #[test]
    fn presidential_profile_counts() {
        let text = "\
# five million voters
candidates: A, B, C
1000000: A > C > B
1000000: B > A > C
1000000: B > A
1000000: C > B
1000000: A > C
";
        let p = parse_profile(text).unwrap();
        assert_eq!(p.ballots().len(), 5);
        assert_eq!(p.voters(), 5_000_000);
        let n = pairwise_counts(&p).unwrap();
        let m = 1_000_000;
        assert_eq!(
            n.matrix(),
            &[vec![0, 2 * m, 0], vec![m, 0, 2 * m], vec![3 * m, m, 0]]
        );
    }

    #[test]
    fn cycle_across_chains_is_rejected() {
        let err = parse_profile("candidates: A,B,C\n1: A > B; B > C; C > A").unwrap_err();
        assert_eq!(err.line, 2);
        match err.kind {
            ParseErrorKind::Ballot(BallotError::Cycle(c)) => {
                assert_eq!(c.first(), c.last());
                assert_eq!(c.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("1: A > B", ParseErrorKind::MissingHeader),
            ("", ParseErrorKind::MissingHeader),
            (
                "candidates: A,B\n1: A > D",
                ParseErrorKind::Ballot(BallotError::UnknownCandidate("D".into())),
            ),
            (
                "candidates: A,B\n1: A > B > A",
                ParseErrorKind::Ballot(BallotError::DuplicateInChain("A".into())),
            ),
            (
                "candidates: A,B\n-1: A > B",
                ParseErrorKind::BadWeight("-1".into()),
            ),
            (
                "candidates: A,B\nx: A > B",
                ParseErrorKind::BadWeight("x".into()),
            ),
            (
                "candidates: A,B\n99999999999999999999: A > B",
                ParseErrorKind::BadWeight("99999999999999999999".into()),
            ),
            (
                "candidates: A,A",
                ParseErrorKind::Ballot(BallotError::DuplicateCandidate("A".into())),
            ),
            (
                "candidates: A,B c",
                ParseErrorKind::Ballot(BallotError::InvalidName("B c".into())),
            ),
        ];
        for (text, kind) in cases {
            assert_eq!(parse_profile(text).unwrap_err().kind, kind, "{text:?}");
        }
    }

    #[test]
    fn total_voter_overflow() {
        let text = format!("candidates: A\n{}: A\n1: A", u64::MAX);
        let err = parse_profile(&text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Ballot(BallotError::Overflow));
    }

    #[test]
    fn pair_count_overflow() {
        let roster = CandidateRoster::new(["A", "B"]).unwrap();
        let mut ballots = vec![Ballot::chain(&roster, u64::MAX - 1, &[0, 1]).unwrap()];
        ballots.push(Ballot::chain(&roster, 1, &[0, 1]).unwrap());
        let p = PreferenceProfile::new(roster.clone(), ballots).unwrap();
        assert_eq!(pairwise_counts(&p).unwrap().get(1, 0), u64::MAX);
    }

    #[test]
    fn empty_ballot_and_whitespace() {
        let p = parse_profile("  candidates :  A ,B,C  \n\n 4 :   # indifferent\n2:C").unwrap();
        assert_eq!(p.voters(), 6);
        assert!(p.ballots().iter().all(|b| b.relation().is_empty()));
        let n = pairwise_counts(&p).unwrap();
        assert!(n.matrix().iter().flatten().all(|&c| c == 0));
    }

    #[test]
    fn closure_of_chain() {
        let r = close_ballot(&abc(), &[(0, 1), (1, 2)]).unwrap();
        let pairs: Vec<_> = r.pairs().collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn closure_of_nothing() {
        let r = close_ballot(&abc(), &[]).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn closure_rejects_asymmetry_violation() {
        let err = close_ballot(&abc(), &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(
            err,
            BallotError::Cycle(vec!["A".into(), "B".into(), "A".into()])
        );
    }

    #[test]
    fn closure_is_idempotent() {
        let r = close_ballot(&abc(), &[(2, 0), (0, 1)]).unwrap();
        let pairs: Vec<_> = r.pairs().collect();
        assert_eq!(close_ballot(&abc(), &pairs).unwrap(), r);
    }

    #[test]
    fn closure_range_check() {
        assert_eq!(
            close_ballot(&abc(), &[(0, 3)]).unwrap_err(),
            BallotError::IndexOutOfRange { index: 3, size: 3 }
        );
    }

    #[test]
    fn relation_shape_queries() {
        let r = close_ballot(&abc(), &[(0, 2), (1, 2)]).unwrap();
        assert!(!r.is_chain());
        assert_eq!(r.maximal(), vec![0, 1]);
        let chain = close_ballot(&abc(), &[(2, 0)]).unwrap();
        assert!(chain.is_chain());
        assert_eq!(chain.chain_order(), vec![2, 0]);
        assert_eq!(chain.listed(), vec![0, 2]);
    }

    #[test]
    fn display_round_trips() {
        let text = "candidates: A, B, C, D\n2: A > B > C\n1: A > C; B > C\n0:\n3: D > A\n";
        let p = parse_profile(text).unwrap();
        assert_eq!(format_profile(&p), text);
        assert_eq!(parse_profile(&format_profile(&p)).unwrap(), p);
    }

    #[test]
    fn dropping_a_candidate() {
        let p = parse_profile("candidates: A,B,C\n2: B > A > C\n1: A > C").unwrap();
        let q = p.without_candidate("A").unwrap();
        assert_eq!(q.roster().names(), ["B", "C"]);
        let n = pairwise_counts(&q).unwrap();
        assert_eq!(n.matrix(), &[vec![0, 0], vec![2, 0]]);
        assert_eq!(q.voters(), 3);
    }

    #[test]
    fn roster_union_keeps_order() {
        let a = CandidateRoster::new(["B", "A"]).unwrap();
        let b = CandidateRoster::new(["C", "A"]).unwrap();
        assert_eq!(a.union(&b).names(), ["B", "A", "C"]);
    }
}
