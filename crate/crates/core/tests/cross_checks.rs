//! Bridges between independently implemented modules: every closed form
//! against the exhaustive oracle, the hit-number identity against direct
//! classification, and the general sum against the fixed-order formulas.

use latin_census_core::board::Board;
use latin_census_core::closed::{
    derangements, k3_riordan, k3_yamamoto, k4_explicit, touchard, K4Variant,
};
use latin_census_core::general::{k_general, latin_squares, EvalOptions, GeneralForm};
use latin_census_core::numeric::{factorial, BigCount};
use latin_census_core::oracle::{
    brute_latin_squares, brute_reduced_rectangles, brute_very_reduced, OracleOptions,
};
use latin_census_core::perm::all_permutations;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn oracle() -> OracleOptions {
    OracleOptions::default()
}

fn eval() -> EvalOptions {
    EvalOptions::default()
}

#[test]
fn derangements_equal_two_row_counts() {
    for n in 2..=8 {
        assert_eq!(
            derangements(n as u64),
            brute_reduced_rectangles(2, n, &oracle()).unwrap()
        );
    }
}

#[test]
fn touchard_equals_discordance_oracle() {
    for n in 3..=9 {
        assert_eq!(
            touchard(n as u64),
            brute_very_reduced(2, n, &oracle()).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn three_row_formulas_equal_oracle() {
    for n in 3..=6 {
        let truth = brute_reduced_rectangles(3, n, &oracle()).unwrap();
        assert_eq!(k3_yamamoto(n as u64), truth, "yamamoto n={n}");
        assert_eq!(k3_riordan(n as u64), truth, "riordan n={n}");
    }
}

#[test]
fn four_row_formulas_equal_oracle() {
    for n in 4..=5 {
        let truth = brute_reduced_rectangles(4, n, &oracle()).unwrap();
        assert_eq!(
            k4_explicit(n as u64, K4Variant::Pranesachar).unwrap(),
            truth,
            "n={n}"
        );
        assert_eq!(
            k4_explicit(n as u64, K4Variant::Simplified).unwrap(),
            truth,
            "n={n}"
        );
    }
}

#[test]
fn general_sum_equals_oracle_through_degree_three() {
    for m in 2..=3usize {
        for n in m..=5 {
            let truth = brute_reduced_rectangles(m, n, &oracle()).unwrap();
            for form in GeneralForm::ALL {
                assert_eq!(
                    k_general(m, n as u64, form, &eval()).unwrap(),
                    truth,
                    "m={m} n={n} {}",
                    form.name()
                );
            }
        }
    }
}

#[test]
fn latin_square_scaling() {
    for n in 1..=4 {
        assert_eq!(
            brute_latin_squares(n, &oracle()).unwrap(),
            factorial(n as u64) * brute_reduced_rectangles(n, n, &oracle()).unwrap()
        );
    }
    assert_eq!(latin_squares(3, &eval()).unwrap(), BigCount::from(12));
}

fn random_board(rng: &mut ChaCha8Rng, n: u32) -> Board {
    let density = rng.gen_range(0.15..0.6);
    Board::new((1..=n).flat_map(|r| (1..=n).map(move |c| (r, c))).filter(|_| rng.gen_bool(density)))
}

#[test]
fn hit_numbers_classify_random_boards() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a71);
    for _ in 0..12 {
        let n = rng.gen_range(2..=6u32);
        let board = random_board(&mut rng, n);
        let hits = board.hit_numbers(n).unwrap();
        // Direct classification of all n! permutations.
        let mut counts = vec![0u64; n as usize + 1];
        let cells: std::collections::BTreeSet<(u32, u32)> = board.cells().collect();
        for p in all_permutations(n as usize).unwrap() {
            let s = (1..=n as usize)
                .filter(|&i| cells.contains(&(i as u32, p.apply(i) as u32)))
                .count();
            counts[s] += 1;
        }
        let brute: Vec<BigCount> = counts.into_iter().map(BigCount::from).collect();
        assert_eq!(hits, brute);
        let total: BigCount = hits.into_iter().sum();
        assert_eq!(total, factorial(n as u64));
    }
}
