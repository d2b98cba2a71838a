//! Exact analysis of finite Markov chains over the candidate roster.
//!
//! Probability vectors are row vectors and evolve as `next = current * T`.
//! A chain is split into its closed communication classes and the transient
//! states that drain into them:
//!
//! ```text
//!     | T_1  0   ...  0    0 |
//! T = |  0  T_2  ...  0    0 |
//!     |           ...        |
//!     | S_1 S_2  ... S_m   Q |
//! ```
//!
//! Each `T_k` has a unique stationary vector, and a transient state `t` ends
//! in class `k` with probability `((I - Q)^-1 S_k 1)[t]`. The limit from any
//! start follows from those two pieces without iterating. For a periodic
//! class the same formula yields the Cesàro (time-averaged) limit.

use num_integer::Integer;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::ballots::CandidateRoster;
use crate::graph::PCGraph;
use crate::linalg;
use crate::rational::{self, Rational, RationalJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("matrix is {rows}x{cols} but the roster has {expected} candidates")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("negative transition probability at ({row}, {col})")]
    Negative { row: usize, col: usize },
    #[error("row {0} does not sum to 1")]
    NotStochastic(usize),
    #[error("probability vector has a negative entry or does not sum to 1")]
    NotDistribution,
    #[error("graph is not complemented (it has no normalizer)")]
    NotComplemented,
    #[error("normalizer is zero: the electorate is empty")]
    ZeroNormalizer,
    #[error("row {row} sums to {sum}, not to the normalizer {normalizer}")]
    RowSum {
        row: usize,
        sum: u64,
        normalizer: u64,
    },
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("distribution and matrix use different rosters")]
    RosterMismatch,
    #[error("recurrent class {0:?} is periodic; iteration cannot converge")]
    Periodic(Vec<String>),
    #[error("no convergence within {0} steps")]
    NotConverged(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// Row-stochastic matrix of exact rationals indexed by the roster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    roster: CandidateRoster,
    p: Vec<Vec<Rational>>,
}

impl TransitionMatrix {
    pub fn new(roster: CandidateRoster, p: Vec<Vec<Rational>>) -> Result<Self, ChainError> {
        let k = roster.len();
        if p.len() != k || p.iter().any(|r| r.len() != k) {
            return Err(ChainError::Shape {
                rows: p.len(),
                cols: p.first().map_or(0, Vec::len),
                expected: k,
            });
        }
        for (i, row) in p.iter().enumerate() {
            if let Some(j) = row.iter().position(rational::is_negative) {
                return Err(ChainError::Negative { row: i, col: j });
            }
            if !rational::is_one(&rational::sum(row)) {
                return Err(ChainError::NotStochastic(i));
            }
        }
        Ok(TransitionMatrix { roster, p })
    }

    pub fn identity(roster: CandidateRoster) -> Self {
        let k = roster.len();
        let p = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        TransitionMatrix { roster, p }
    }

    pub fn roster(&self) -> &CandidateRoster {
        &self.roster
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.p[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.p
    }

    /// One exact step: `start * T`.
    pub fn apply(&self, start: &Distribution) -> Result<Distribution, ChainError> {
        if start.roster != self.roster {
            return Err(ChainError::RosterMismatch);
        }
        let k = self.len();
        let mass = (0..k)
            .map(|j| {
                (0..k).fold(Rational::zero(), |acc, i| {
                    acc + &start.mass[i] * &self.p[i][j]
                })
            })
            .collect();
        Ok(Distribution {
            roster: self.roster.clone(),
            mass,
        })
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.p
            .iter()
            .map(|row| row.iter().map(rational::to_f64).collect())
            .collect()
    }

    /// Positive-probability edges, loops excluded.
    fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.p[i]
            .iter()
            .enumerate()
            .filter(move |&(j, q)| j != i && !q.is_zero())
            .map(|(j, _)| j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let matrix: Vec<Vec<RationalJson>> = self
            .p
            .iter()
            .map(|row| row.iter().map(RationalJson::from).collect())
            .collect();
        serde_json::json!({
            "schema_version": 1,
            "candidates": self.roster.names(),
            "matrix": matrix,
        })
    }

    /// DOT rendering with exact fractions as edge labels.
    pub fn to_dot(&self) -> String {
        let labels: Vec<Vec<String>> = self
            .p
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| {
                        if q.is_zero() {
                            String::new()
                        } else {
                            q.to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        crate::graph::dot(self.roster.names(), &labels, None)
    }
}

/// Exact probability vector over the roster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    roster: CandidateRoster,
    mass: Vec<Rational>,
}

impl Distribution {
    pub fn new(roster: CandidateRoster, mass: Vec<Rational>) -> Result<Self, ChainError> {
        if mass.len() != roster.len()
            || mass.iter().any(rational::is_negative)
            || !rational::is_one(&rational::sum(&mass))
        {
            return Err(ChainError::NotDistribution);
        }
        Ok(Distribution { roster, mass })
    }

    pub fn uniform(roster: CandidateRoster) -> Self {
        let k = roster.len() as u64;
        let mass = vec![rational::ratio(1, k); roster.len()];
        Distribution { roster, mass }
    }

    pub fn roster(&self) -> &CandidateRoster {
        &self.roster
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.mass[i]
    }

    pub fn into_mass(self) -> Vec<Rational> {
        self.mass
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.mass.iter().map(rational::to_f64).collect()
    }

    /// `{name: {"num", "den", "decimal"}}` in roster order.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .roster
            .names()
            .iter()
            .zip(&self.mass)
            .map(|(n, q)| {
                (
                    n.clone(),
                    serde_json::to_value(RationalJson::from(q)).expect("rational serializes"),
                )
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Canonical-form decomposition of a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    /// Closed communication classes, each sorted, ordered by smallest member.
    pub closed_classes: Vec<Vec<usize>>,
    /// States outside every closed class, sorted.
    pub transient: Vec<usize>,
    /// Stationary vector of each closed class, indexed like the class.
    #[serde(skip)]
    pub class_stationaries: Vec<Vec<Rational>>,
    /// `absorption[t][k]`: probability that a walk from `transient[t]` ends in
    /// `closed_classes[k]`.
    #[serde(skip)]
    pub absorption: Vec<Vec<Rational>>,
}

fn components(t: &TransitionMatrix, members: &[usize]) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = members.iter().map(|&i| g.add_node(i)).collect();
    for (a, &i) in members.iter().enumerate() {
        for j in t.successors(i) {
            if let Some(b) = members.iter().position(|&m| m == j) {
                g.add_edge(nodes[a], nodes[b], ());
            }
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|scc| {
            let mut c: Vec<usize> = scc.into_iter().map(|n| g[n]).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

/// Stationary vector of the irreducible block of `t` restricted to `class`:
/// solves `pi (T_k - I) = 0` with one equation swapped for `sum(pi) = 1`.
fn class_stationary(t: &TransitionMatrix, class: &[usize]) -> Vec<Rational> {
    let m = class.len();
    let mut a: linalg::Matrix = (0..m)
        .map(|row| {
            (0..m)
                .map(|col| {
                    let mut v = t.p[class[col]][class[row]].clone();
                    if row == col {
                        v -= Rational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut b = vec![vec![Rational::zero()]; m];
    a[m - 1] = vec![Rational::one(); m];
    b[m - 1][0] = Rational::one();
    linalg::solve(a, b)
        .expect("an irreducible stochastic block has a unique stationary vector")
        .into_iter()
        .map(|mut row| row.remove(0))
        .collect()
}

pub fn decompose(t: &TransitionMatrix) -> ChainDecomposition {
    let k = t.len();
    let all: Vec<usize> = (0..k).collect();
    let mut closed: Vec<Vec<usize>> = components(t, &all)
        .into_iter()
        .filter(|c| c.iter().all(|&i| t.successors(i).all(|j| c.contains(&j))))
        .collect();
    closed.sort_by_key(|c| c[0]);
    let transient: Vec<usize> = all
        .iter()
        .copied()
        .filter(|i| !closed.iter().any(|c| c.contains(i)))
        .collect();
    let class_stationaries = closed.iter().map(|c| class_stationary(t, c)).collect();

    let absorption = if transient.is_empty() {
        Vec::new()
    } else {
        let r = transient.len();
        let i_minus_q: linalg::Matrix = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| {
                        let q = &t.p[transient[a]][transient[b]];
                        if a == b {
                            Rational::one() - q
                        } else {
                            -q.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let exits: linalg::Matrix = transient
            .iter()
            .map(|&s| {
                closed
                    .iter()
                    .map(|c| rational::sum(c.iter().map(|&j| &t.p[s][j])))
                    .collect()
            })
            .collect();
        linalg::solve(i_minus_q, exits).expect("I - Q is invertible for transient states")
    };

    ChainDecomposition {
        closed_classes: closed,
        transient,
        class_stationaries,
        absorption,
    }
}

/// Unique stationary distribution of an irreducible chain.
pub fn stationary_of_class(t: &TransitionMatrix) -> Result<Distribution, ChainError> {
    let all: Vec<usize> = (0..t.len()).collect();
    if components(t, &all).len() != 1 {
        return Err(ChainError::NotIrreducible);
    }
    Ok(Distribution {
        roster: t.roster.clone(),
        mass: class_stationary(t, &all),
    })
}

/// Exact limit of `start * T^n`: each closed class receives its own start
/// mass plus what the transient states send it, spread by its stationary
/// vector. Transient states end with zero.
pub fn limit_from(t: &TransitionMatrix, start: &Distribution) -> Result<Distribution, ChainError> {
    if start.roster != t.roster {
        return Err(ChainError::RosterMismatch);
    }
    let d = decompose(t);
    let mut mass = vec![Rational::zero(); t.len()];
    for (k, class) in d.closed_classes.iter().enumerate() {
        let mut class_mass = rational::sum(class.iter().map(|&i| &start.mass[i]));
        for (ti, &s) in d.transient.iter().enumerate() {
            class_mass += &start.mass[s] * &d.absorption[ti][k];
        }
        for (&i, pi) in class.iter().zip(&d.class_stationaries[k]) {
            mass[i] = &class_mass * pi;
        }
    }
    Ok(Distribution {
        roster: t.roster.clone(),
        mass,
    })
}

/// Period of the class containing `class[0]`, from BFS levels.
fn period(t: &TransitionMatrix, class: &[usize]) -> usize {
    let mut level = vec![usize::MAX; t.len()];
    level[class[0]] = 0;
    let mut queue = std::collections::VecDeque::from([class[0]]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        let loops = !t.p[u][u].is_zero();
        if loops {
            return 1;
        }
        for v in t.successors(u).filter(|v| class.contains(v)) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    g.max(1)
}

/// Floating-point result of iterating a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerIteration {
    pub distribution: Vec<f64>,
    pub steps: usize,
}

/// Iterates `rho <- rho * T` in floating point until the L1 change drops
/// below `tol`. Used to cross-check [`limit_from`].
pub fn power_iterate(
    t: &TransitionMatrix,
    start: &Distribution,
    tol: f64,
    max_steps: usize,
) -> Result<PowerIteration, ChainError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(ChainError::BadTolerance);
    }
    if start.roster != t.roster {
        return Err(ChainError::RosterMismatch);
    }
    for class in decompose(t).closed_classes {
        if period(t, &class) > 1 {
            let names = class
                .iter()
                .map(|&i| t.roster.name(i).to_string())
                .collect();
            return Err(ChainError::Periodic(names));
        }
    }
    let p = t.to_f64();
    let k = p.len();
    let mut cur = start.to_f64();
    for step in 1..=max_steps {
        let mut next = vec![0.0; k];
        for (i, row) in p.iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                next[j] += cur[i] * q;
            }
        }
        let delta: f64 = cur.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        cur = next;
        if delta < tol {
            return Ok(PowerIteration {
                distribution: cur,
                steps: step,
            });
        }
    }
    Err(ChainError::NotConverged(max_steps))
}

/// Builds `T = weights / N` from a complemented graph.
pub fn transition_matrix(graph: &PCGraph) -> Result<TransitionMatrix, ChainError> {
    let n = graph.normalizer().ok_or(ChainError::NotComplemented)?;
    if n == 0 {
        return Err(ChainError::ZeroNormalizer);
    }
    let weights = graph.weights();
    for (row, w) in weights.iter().enumerate() {
        let sum: u128 = w.iter().map(|&x| x as u128).sum();
        if sum != n as u128 {
            return Err(ChainError::RowSum {
                row,
                sum: sum.min(u64::MAX as u128) as u64,
                normalizer: n,
            });
        }
    }
    let p = weights
        .iter()
        .map(|row| row.iter().map(|&w| rational::ratio(w, n)).collect())
        .collect();
    TransitionMatrix::new(graph.roster().clone(), p)
}
