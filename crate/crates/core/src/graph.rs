//! Pairwise-comparison graphs: the Condorcet graph, its complemented form
//! with padding loops, the atomic per-pair graphs and their union.

use serde::Serialize;
use thiserror::Error;

use crate::ballots::{CandidateRoster, PairwiseCounts};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("normalizer {normalizer} is below the out-weight {row_sum} of {candidate:?}")]
    NormalizerTooSmall {
        candidate: String,
        row_sum: u64,
        normalizer: u64,
    },
    #[error("a graph with loops cannot be complemented again ({0:?} has a loop)")]
    HasLoops(String),
    #[error("an atomic graph needs two distinct candidates, got {0:?} twice")]
    SameCandidate(String),
    #[error("candidate index {0} is not in the roster")]
    UnknownCandidate(usize),
    #[error("edge weight overflows a 64-bit integer")]
    Overflow,
}

/// A weighted directed graph over the roster. `weights[x][y]` is the weight
/// of the edge x -> y and the diagonal holds loop weights. Complemented
/// graphs carry the normalizer every row sums to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PCGraph {
    roster: CandidateRoster,
    weights: Vec<Vec<u64>>,
    normalizer: Option<u64>,
}

impl PCGraph {
    pub fn zero(roster: CandidateRoster) -> Self {
        let k = roster.len();
        PCGraph {
            roster,
            weights: vec![vec![0; k]; k],
            normalizer: None,
        }
    }

    pub fn roster(&self) -> &CandidateRoster {
        &self.roster
    }

    pub fn weights(&self) -> &[Vec<u64>] {
        &self.weights
    }

    pub fn weight(&self, x: usize, y: usize) -> u64 {
        self.weights[x][y]
    }

    pub fn normalizer(&self) -> Option<u64> {
        self.normalizer
    }

    pub fn is_complemented(&self) -> bool {
        self.normalizer.is_some()
    }

    /// Sum of the weights leaving `x`, loop excluded.
    pub fn out_weight(&self, x: usize) -> u64 {
        self.weights[x]
            .iter()
            .enumerate()
            .filter(|&(y, _)| y != x)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Sets a single edge weight. Used to assemble graphs by hand.
    pub fn with_edge(mut self, x: usize, y: usize, weight: u64) -> Self {
        self.weights[x][y] = weight;
        self
    }
}

pub fn condorcet_graph(counts: &PairwiseCounts) -> PCGraph {
    PCGraph {
        roster: counts.roster().clone(),
        weights: counts.matrix().to_vec(),
        normalizer: None,
    }
}

/// Pads every row of a loop-free graph with a loop so that it sums to the
/// normalizer, `voters * (candidates - 1)` unless overridden.
pub fn complement(
    graph: &PCGraph,
    voters: u64,
    normalizer_override: Option<u64>,
) -> Result<PCGraph, GraphError> {
    let k = graph.roster.len();
    if let Some(x) = (0..k).find(|&x| graph.weights[x][x] != 0) {
        return Err(GraphError::HasLoops(graph.roster.name(x).to_string()));
    }
    let normalizer = match normalizer_override {
        Some(n) => n,
        None => voters
            .checked_mul(k as u64 - 1)
            .ok_or(GraphError::Overflow)?,
    };
    let mut weights = graph.weights.clone();
    for (x, row) in weights.iter_mut().enumerate() {
        let row_sum = row
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or(GraphError::Overflow)?;
        row[x] = normalizer
            .checked_sub(row_sum)
            .ok_or_else(|| GraphError::NormalizerTooSmall {
                candidate: graph.roster.name(x).to_string(),
                row_sum,
                normalizer,
            })?;
    }
    Ok(PCGraph {
        roster: graph.roster.clone(),
        weights,
        normalizer: Some(normalizer),
    })
}

/// The graph that records only who prefers `b` over `a`: an a -> b edge
/// with that count and a loop at `a` holding everyone else.
pub fn atomic_graph(
    counts: &PairwiseCounts,
    voters: u64,
    a: usize,
    b: usize,
) -> Result<PCGraph, GraphError> {
    let roster = counts.roster();
    for idx in [a, b] {
        if idx >= roster.len() {
            return Err(GraphError::UnknownCandidate(idx));
        }
    }
    if a == b {
        return Err(GraphError::SameCandidate(roster.name(a).to_string()));
    }
    let edge = counts.get(a, b);
    let rest = voters
        .checked_sub(edge)
        .ok_or_else(|| GraphError::NormalizerTooSmall {
            candidate: roster.name(a).to_string(),
            row_sum: edge,
            normalizer: voters,
        })?;
    Ok(PCGraph::zero(roster.clone())
        .with_edge(a, b, edge)
        .with_edge(a, a, rest))
}

/// Entrywise sum over the ordered union of both rosters.
///
/// The result carries no normalizer even when both inputs do.
pub fn graph_union(g1: &PCGraph, g2: &PCGraph) -> Result<PCGraph, GraphError> {
    let roster = g1.roster.union(&g2.roster);
    let mut out = PCGraph::zero(roster);
    for g in [g1, g2] {
        let map: Vec<usize> = g
            .roster
            .names()
            .iter()
            .map(|n| out.roster.index_of(n).expect("name is in the union"))
            .collect();
        for (x, row) in g.weights.iter().enumerate() {
            for (y, &w) in row.iter().enumerate() {
                let cell = &mut out.weights[map[x]][map[y]];
                *cell = cell.checked_add(w).ok_or(GraphError::Overflow)?;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    schema_version: u32,
    candidates: &'a [String],
    #[serde(rename = "N")]
    normalizer: Option<u64>,
    weights: &'a [Vec<u64>],
}

fn dot_id(name: &str) -> String {
    format!("\"{name}\"")
}

/// Deterministic text export. DOT omits zero-weight edges; JSON carries the
/// full matrix.
pub fn export_graph(graph: &PCGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => {
            let doc = GraphJson {
                schema_version: 1,
                candidates: graph.roster.names(),
                normalizer: graph.normalizer,
                weights: &graph.weights,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("graph serializes");
            s.push('\n');
            s
        }
        GraphFormat::Dot => {
            let labels: Vec<Vec<String>> = graph
                .weights
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&w| if w == 0 { String::new() } else { w.to_string() })
                        .collect()
                })
                .collect();
            let caption = graph.normalizer.map(|n| format!("N = {n}"));
            dot(graph.roster.names(), &labels, caption.as_deref())
        }
    }
}

/// Renders a labelled digraph. Empty labels mark absent edges.
pub(crate) fn dot(names: &[String], labels: &[Vec<String>], caption: Option<&str>) -> String {
    let mut out = String::from("digraph {\n");
    if let Some(c) = caption {
        out.push_str(&format!("  label=\"{c}\";\n"));
    }
    for n in names {
        out.push_str(&format!("  {};\n", dot_id(n)));
    }
    for (x, row) in labels.iter().enumerate() {
        for (y, label) in row.iter().enumerate() {
            if !label.is_empty() {
                out.push_str(&format!(
                    "  {} -> {} [label=\"{label}\"];\n",
                    dot_id(&names[x]),
                    dot_id(&names[y])
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::{pairwise_counts, PreferenceProfile};

    const M: u64 = 1_000_000;

    fn presidential() -> PreferenceProfile {
        PreferenceProfile::from_chains(
            &["A", "B", "C"],
            &[
                (&["A", "C", "B"], M),
                (&["B", "A", "C"], M),
                (&["B", "A"], M),
                (&["C", "B"], M),
                (&["A", "C"], M),
            ],
        )
        .unwrap()
    }

    fn two_party(n_ab: u64, n_ba: u64) -> PreferenceProfile {
        PreferenceProfile::from_chains(&["A", "B"], &[(&["B", "A"], n_ab), (&["A", "B"], n_ba)])
            .unwrap()
    }

    #[test]
    fn condorcet_graph_of_presidential_election() {
        let g = condorcet_graph(&pairwise_counts(&presidential()).unwrap());
        assert_eq!(
            g.weights(),
            &[vec![0, 2 * M, 0], vec![M, 0, 2 * M], vec![3 * M, M, 0]]
        );
        assert_eq!(g.normalizer(), None);
    }

    #[test]
    fn two_party_condorcet_graph() {
        let g = condorcet_graph(&pairwise_counts(&two_party(3, 8)).unwrap());
        assert_eq!(g.weights(), &[vec![0, 3], vec![8, 0]]);
    }

    #[test]
    fn complement_of_presidential_graph() {
        let p = presidential();
        let g = condorcet_graph(&pairwise_counts(&p).unwrap());
        let c = complement(&g, p.voters(), None).unwrap();
        assert_eq!(c.normalizer(), Some(10 * M));
        assert_eq!(
            c.weights(),
            &[
                vec![8 * M, 2 * M, 0],
                vec![M, 7 * M, 2 * M],
                vec![3 * M, M, 6 * M]
            ]
        );
    }

    #[test]
    fn complement_two_party_with_override() {
        let g = condorcet_graph(&pairwise_counts(&two_party(3, 8)).unwrap());
        let c = complement(&g, 11, Some(11)).unwrap();
        assert_eq!(c.weights(), &[vec![8, 3], vec![8, 3]]);
        assert_eq!(c.normalizer(), Some(11));
    }

    #[test]
    fn complement_rejects_small_override() {
        let g = condorcet_graph(&pairwise_counts(&presidential()).unwrap());
        assert_eq!(
            complement(&g, 5 * M, Some(3 * M)).unwrap_err(),
            GraphError::NormalizerTooSmall {
                candidate: "C".into(),
                row_sum: 4 * M,
                normalizer: 3 * M,
            }
        );
        assert!(complement(&g, 5 * M, Some(4 * M)).is_ok());
    }

    #[test]
    fn complement_rejects_loops() {
        let c = complement(
            &condorcet_graph(&pairwise_counts(&two_party(1, 1)).unwrap()),
            2,
            None,
        )
        .unwrap();
        assert_eq!(
            complement(&c, 2, None).unwrap_err(),
            GraphError::HasLoops("A".into())
        );
    }

    #[test]
    fn atomic_graphs() {
        let p = presidential();
        let n = pairwise_counts(&p).unwrap();
        let ab = atomic_graph(&n, p.voters(), 0, 1).unwrap();
        assert_eq!(ab.weight(0, 1), 2 * M);
        assert_eq!(ab.weight(0, 0), 3 * M);
        assert_eq!(ab.weights().iter().flatten().sum::<u64>(), 5 * M);
        let ac = atomic_graph(&n, p.voters(), 0, 2).unwrap();
        assert_eq!(ac.weight(0, 2), 0);
        assert_eq!(ac.weight(0, 0), 5 * M);
        assert_eq!(
            atomic_graph(&n, p.voters(), 1, 1).unwrap_err(),
            GraphError::SameCandidate("B".into())
        );
    }

    #[test]
    fn union_with_zero_is_identity() {
        let g = condorcet_graph(&pairwise_counts(&presidential()).unwrap());
        let z = PCGraph::zero(g.roster().clone());
        assert_eq!(graph_union(&g, &z).unwrap(), g);
    }

    #[test]
    fn union_adds_weights() {
        let r = CandidateRoster::new(["A", "B"]).unwrap();
        let g1 = PCGraph::zero(r.clone()).with_edge(0, 1, 3);
        let g2 = PCGraph::zero(r).with_edge(0, 1, 4);
        assert_eq!(graph_union(&g1, &g2).unwrap().weight(0, 1), 7);
    }

    #[test]
    fn union_merges_rosters() {
        let g1 = PCGraph::zero(CandidateRoster::new(["A", "B"]).unwrap()).with_edge(0, 1, 2);
        let g2 = PCGraph::zero(CandidateRoster::new(["C", "B"]).unwrap()).with_edge(0, 1, 5);
        let u = graph_union(&g1, &g2).unwrap();
        assert_eq!(u.roster().names(), ["A", "B", "C"]);
        assert_eq!(u.weights(), &[vec![0, 2, 0], vec![0, 0, 0], vec![0, 5, 0]]);
    }

    #[test]
    fn union_of_atomic_graphs_is_the_complement() {
        let p = presidential();
        let n = pairwise_counts(&p).unwrap();
        let mut acc = PCGraph::zero(p.roster().clone());
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    acc = graph_union(&acc, &atomic_graph(&n, p.voters(), a, b).unwrap()).unwrap();
                }
            }
        }
        let c = complement(&condorcet_graph(&n), p.voters(), None).unwrap();
        assert_eq!(acc.weights(), c.weights());
    }

    #[test]
    fn dot_export() {
        let p = presidential();
        let c = complement(
            &condorcet_graph(&pairwise_counts(&p).unwrap()),
            p.voters(),
            None,
        )
        .unwrap();
        let dot = export_graph(&c, GraphFormat::Dot);
        assert!(dot.starts_with("digraph {\n  label=\"N = 10000000\";\n"));
        assert_eq!(dot.matches(" -> ").count(), 8);
        assert!(dot.contains("\"A\" -> \"A\" [label=\"8000000\"];"));
        assert!(dot.contains("\"C\" -> \"A\" [label=\"3000000\"];"));
        assert!(!dot.contains("\"A\" -> \"C\""));
    }

    #[test]
    fn json_export_of_zero_graph() {
        let g = PCGraph::zero(CandidateRoster::new(["A", "B"]).unwrap());
        let v: serde_json::Value =
            serde_json::from_str(&export_graph(&g, GraphFormat::Json)).unwrap();
        assert_eq!(v["weights"], serde_json::json!([[0, 0], [0, 0]]));
        assert_eq!(v["N"], serde_json::Value::Null);
        assert_eq!(v["candidates"], serde_json::json!(["A", "B"]));
        assert_eq!(v["schema_version"], 1);
    }

    #[test]
    fn twenty_voter_graph_rows_sum_to_forty() {
        let p = PreferenceProfile::from_chains(
            &["A", "B", "C"],
            &[
                (&["B", "C", "A"], 4),
                (&["B", "A", "C"], 4),
                (&["A", "B", "C"], 1),
                (&["C", "B", "A"], 8),
                (&["C", "A", "B"], 0),
                (&["A", "C", "B"], 3),
            ],
        )
        .unwrap();
        let g = complement(&condorcet_graph(&pairwise_counts(&p).unwrap()), 20, None).unwrap();
        assert_eq!(g.normalizer(), Some(40));
        assert_eq!((g.weight(0, 0), g.weight(1, 1), g.weight(2, 2)), (12, 25, 23));
        let v: serde_json::Value =
            serde_json::from_str(&export_graph(&g, GraphFormat::Json)).unwrap();
        for row in v["weights"].as_array().unwrap() {
            let sum: u64 = row.as_array().unwrap().iter().map(|w| w.as_u64().unwrap()).sum();
            assert_eq!(sum, 40);
        }
    }
}
