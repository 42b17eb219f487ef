mod common;

use proptest::prelude::*;

use relobs::algebra::Space;
use relobs::parse::parse_operator;

fn round_trip(text: &str, space: Space) {
    let first = parse_operator(text, space).unwrap_or_else(|e| panic!("{text}: {e}"));
    let printed = first.to_string();
    let second = parse_operator(&printed, space).unwrap_or_else(|e| panic!("{printed}: {e}"));
    assert_eq!(second, first, "{text}");
    assert_eq!(second.to_string(), printed, "{text}");
}

#[test]
fn hundred_random_expressions_reach_a_print_fixpoint() {
    let mut r = common::rng(100);
    for k in 0..100 {
        let dim = 1 + k % 3;
        let n = 1 + k % 4;
        let text = common::random_expression(&mut r, n, dim, 3);
        round_trip(&text, Space::new(n, dim));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_expressions_round_trip(seed in any::<u64>(), depth in 1usize..=3) {
        let mut r = common::rng(seed);
        let text = common::random_expression(&mut r, 3, 3, depth);
        round_trip(&text, Space::new(3, 3));
    }

    #[test]
    fn whitespace_does_not_matter(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let text = common::random_expression(&mut r, 2, 3, 3);
        let spaced: String = text
            .chars()
            .map(|c| if "+-*^(),".contains(c) { format!("  {c}\t") } else { c.to_string() })
            .collect();
        let a = parse_operator(&text, Space::new(2, 3));
        let b = parse_operator(&spaced, Space::new(2, 3));
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }
}
