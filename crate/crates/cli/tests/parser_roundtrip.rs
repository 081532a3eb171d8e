//! Property tests for the expression grammars: rendering then reparsing
//! reproduces the same value.

use proptest::prelude::*;

use profinite_cli::parse;
use profinite_core::mekler::{Graph, MeklerContext};
use profinite_core::word::Word;

fn arb_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..5, -4i64..5), 0..8)
        .prop_map(|syllables| Word::from_syllables(syllables.into_iter().filter(|&(_, k)| k != 0)))
}

proptest! {
    #[test]
    fn word_render_reparse(word in arb_word()) {
        let rendered = word.to_string();
        let reparsed = parse::parse_word(&rendered).unwrap();
        prop_assert_eq!(reparsed, word);
    }

    #[test]
    fn element_render_reparse(
        alpha in prop::collection::vec(0i64..3, 5),
        beta in prop::collection::vec(0i64..3, 5),
    ) {
        let ctx = MeklerContext::new(Graph::cycle(5), 3).unwrap();
        let pairs: Vec<(usize, usize, i64)> = ctx
            .non_edges()
            .iter()
            .zip(&beta)
            .map(|(&(r, s), &b)| (r, s, b))
            .collect();
        let element = ctx.element(&alpha, &pairs).unwrap();
        let rendered = parse::render_element(&ctx, &element);
        let reparsed = parse::parse_element(&rendered, &ctx).unwrap();
        prop_assert_eq!(reparsed, element);
    }

    #[test]
    fn commutator_words_parse(i in 0usize..4, j in 0usize..4, k in -3i64..4) {
        let text = format!("[x{i},x{j}]^{k}");
        let parsed = parse::parse_word(&text).unwrap();
        let expected = {
            let c = Word::commutator(&Word::generator(i), &Word::generator(j));
            let unit = if k < 0 { c.inverse() } else { c };
            let mut acc = Word::identity();
            for _ in 0..k.unsigned_abs() {
                acc = acc.concat(&unit);
            }
            acc
        };
        prop_assert_eq!(parsed, expected);
    }
}
