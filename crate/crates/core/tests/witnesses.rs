//! Concrete profiles showing which classical axioms convergence voting
//! gives up.

mod common;

use common::{condorcet_split, condorcet_split_shifted};
use convergence_voting::rational::ratio;
use convergence_voting::rules;

#[test]
fn dropping_a_loser_changes_the_winner() {
    let full = rules::convergence_scores(&condorcet_split(), None).unwrap();
    assert_eq!(full.ranking().winners(), &[1]);
    assert_eq!(full.scores()[0], ratio(39, 223));

    let without_a = condorcet_split().without_candidate("A").unwrap();
    let reduced = rules::convergence_scores(&without_a, None).unwrap();
    // 9 voters prefer B over C and 11 prefer C over B.
    assert_eq!(reduced.scores(), &[ratio(9, 20), ratio(11, 20)]);
    assert_eq!(reduced.roster().name(reduced.ranking().winners()[0]), "C");
}

#[test]
fn reordering_below_the_winner_can_unseat_it() {
    let before = condorcet_split();
    let after = condorcet_split_shifted();
    let b = 1;
    assert_eq!(
        rules::convergence_scores(&before, None)
            .unwrap()
            .ranking()
            .winners(),
        &[b]
    );

    // Four B>A>C voters become B>C>A; B stays on top of every changed ballot.
    let weights = |p: &convergence_voting::PreferenceProfile| {
        p.ballots().iter().map(|x| x.weight).collect::<Vec<_>>()
    };
    assert_eq!(weights(&before), [4, 4, 1, 8, 0, 3]);
    assert_eq!(weights(&after), [8, 0, 1, 8, 0, 3]);
    assert_eq!(before.ballots()[0].relation().chain_order(), [b, 2, 0]);
    assert_eq!(before.ballots()[1].relation().chain_order(), [b, 0, 2]);
    assert_eq!(
        before.ballots()[0].relation(),
        after.ballots()[0].relation()
    );

    let board = rules::convergence_scores(&after, None).unwrap();
    assert_eq!(board.ranking().winners(), &[2]);
    let counts = convergence_voting::ballots::pairwise_counts(&after).unwrap();
    assert_eq!(rules::condorcet_winner(&counts), Some(2));
}
