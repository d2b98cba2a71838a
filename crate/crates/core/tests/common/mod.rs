//! Profile generators and fixtures shared by the integration tests.
#![allow(dead_code)]

use convergence_voting::ballots::{close_ballot, Ballot, CandidateRoster, PreferenceProfile};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

pub fn roster(k: usize) -> CandidateRoster {
    CandidateRoster::new(NAMES[..k].iter().copied()).unwrap()
}

pub fn chains(names: &[&str], lines: &[(&[&str], u64)]) -> PreferenceProfile {
    PreferenceProfile::from_chains(names, lines).unwrap()
}

pub fn presidential() -> PreferenceProfile {
    const M: u64 = 1_000_000;
    chains(
        &["A", "B", "C"],
        &[
            (&["A", "C", "B"], M),
            (&["B", "A", "C"], M),
            (&["B", "A"], M),
            (&["C", "B"], M),
            (&["A", "C"], M),
        ],
    )
}

fn six(counts: [u64; 6]) -> PreferenceProfile {
    // B>C>A, B>A>C, A>B>C, C>B>A, C>A>B, A>C>B
    chains(
        &["A", "B", "C"],
        &[
            (&["B", "C", "A"], counts[0]),
            (&["B", "A", "C"], counts[1]),
            (&["A", "B", "C"], counts[2]),
            (&["C", "B", "A"], counts[3]),
            (&["C", "A", "B"], counts[4]),
            (&["A", "C", "B"], counts[5]),
        ],
    )
}

pub fn condorcet_split() -> PreferenceProfile {
    six([4, 4, 1, 8, 0, 3])
}

pub fn near_tie() -> PreferenceProfile {
    six([4, 3, 2, 8, 0, 3])
}

pub fn c_holds() -> PreferenceProfile {
    chains(
        &["A", "B", "C"],
        &[
            (&["C", "B", "A"], 15),
            (&["B", "C", "A"], 4),
            (&["B", "A", "C"], 6),
        ],
    )
}

pub fn c_overturned() -> PreferenceProfile {
    chains(
        &["A", "B", "C"],
        &[
            (&["C", "B", "A"], 15),
            (&["B", "C", "A"], 1),
            (&["B", "A", "C"], 9),
        ],
    )
}

/// `n_ab` voters prefer B over A, `n_ba` prefer A over B.
pub fn two_party(n_ab: u64, n_ba: u64) -> PreferenceProfile {
    chains(&["A", "B"], &[(&["B", "A"], n_ab), (&["A", "B"], n_ba)])
}

/// The condorcet split with the B>C>A line raised to 8 and B>A>C dropped to 0.
pub fn condorcet_split_shifted() -> PreferenceProfile {
    six([8, 0, 1, 8, 0, 3])
}

/// One voter preferring A over B, with C unranked.
pub fn single_pair() -> PreferenceProfile {
    chains(&["A", "B", "C"], &[(&["A", "B"], 1)])
}

pub fn fixtures() -> Vec<(&'static str, PreferenceProfile)> {
    vec![
        ("presidential", presidential()),
        ("condorcet split", condorcet_split()),
        ("near tie", near_tie()),
        ("C holds", c_holds()),
        ("C overturned", c_overturned()),
        ("two party", two_party(3, 7)),
        ("single pair", single_pair()),
    ]
}

/// Profiles of complete rankings over 2..=`max_k` candidates with at most
/// `max_voters` voters in total.
pub fn total_orders(max_k: usize, max_voters: u64) -> impl Strategy<Value = PreferenceProfile> {
    (2..=max_k).prop_flat_map(move |k| {
        let line = (
            Just((0..k).collect::<Vec<usize>>()).prop_shuffle(),
            0..=max_voters,
        );
        prop::collection::vec(line, 1..=6).prop_map(move |lines| {
            let roster = roster(k);
            let mut budget = max_voters;
            let ballots = lines
                .into_iter()
                .map(|(order, w)| {
                    let w = w.min(budget);
                    budget -= w;
                    Ballot::chain(&roster, w, &order).unwrap()
                })
                .collect();
            PreferenceProfile::new(roster, ballots).unwrap()
        })
    })
}

/// Weighted strict partial orders: each ballot is the closure of a random
/// set of pairs consistent with a hidden ranking, so some candidates stay
/// unranked or incomparable.
pub fn partial_orders(max_k: usize, max_voters: u64) -> impl Strategy<Value = PreferenceProfile> {
    (2..=max_k).prop_flat_map(move |k| {
        let pairs = k * (k - 1) / 2;
        let line = (
            Just((0..k).collect::<Vec<usize>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), pairs),
            0..=max_voters,
        );
        prop::collection::vec(line, 0..=6).prop_map(move |lines| {
            let roster = roster(k);
            let mut budget = max_voters;
            let ballots = lines
                .into_iter()
                .map(|(order, keep, w)| {
                    let w = w.min(budget);
                    budget -= w;
                    let mut chosen = Vec::new();
                    let mut bit = keep.iter();
                    for i in 0..k {
                        for j in i + 1..k {
                            if *bit.next().unwrap() {
                                chosen.push((order[i], order[j]));
                            }
                        }
                    }
                    Ballot::new(w, close_ballot(&roster, &chosen).unwrap())
                })
                .collect();
            PreferenceProfile::new(roster, ballots).unwrap()
        })
    })
}

/// Draws `n` values from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize, seed: u8) -> Vec<S::Value> {
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    );
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}
