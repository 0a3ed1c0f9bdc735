//! Property tests over randomly drawn inputs.

use latin_census_core::compositions::{count_compositions_u64, Compositions};
use latin_census_core::numeric::{factorial, multinomial};
use latin_census_core::perm::Permutation;

use proptest::prelude::*;

proptest! {
    #[test]
    fn multinomial_ignores_part_order(n in 0u64..30, mut parts in proptest::collection::vec(0u64..8, 0..5)) {
        let sum: u64 = parts.iter().sum();
        prop_assume!(sum <= n);
        let a = multinomial(n, &parts).unwrap();
        parts.reverse();
        let b = multinomial(n, &parts).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multinomial_product_identity(n in 0u64..25, parts in proptest::collection::vec(0u64..6, 0..5)) {
        let sum: u64 = parts.iter().sum();
        prop_assume!(sum <= n);
        let mut product = multinomial(n, &parts).unwrap();
        for &p in &parts {
            product *= factorial(p);
        }
        product *= factorial(n - sum);
        prop_assert_eq!(product, factorial(n));
    }

    #[test]
    fn compositions_cover_exactly(n in 0u64..7, k in 1usize..5) {
        let all: Vec<Vec<u64>> = Compositions::new(n, k).collect();
        prop_assert_eq!(all.len() as u64, count_compositions_u64(n, k).unwrap());
        for c in &all {
            prop_assert_eq!(c.iter().sum::<u64>(), n);
        }
        for w in all.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn table_round_trips(word in proptest::sample::subsequence((1u8..=8).collect::<Vec<_>>(), 1..=8).prop_shuffle()) {
        let p = Permutation::from_word(relabel(&word)).unwrap();
        prop_assert_eq!(p.inversion_table().to_permutation(), p.clone());
        prop_assert_eq!(p.covering_table().to_permutation(), p.clone());
        // Zero entries of the covering table count the cycles.
        let zeros = p.covering_table().entries().iter().filter(|&&k| k == 0).count();
        prop_assert_eq!(zeros, p.standard_cycles().cycle_count());
    }
}

/// Compresses an arbitrary distinct-value word onto `1..=m`.
fn relabel(word: &[u8]) -> Vec<u8> {
    let mut sorted: Vec<u8> = word.to_vec();
    sorted.sort_unstable();
    word.iter()
        .map(|v| (sorted.iter().position(|s| s == v).unwrap() + 1) as u8)
        .collect()
}
