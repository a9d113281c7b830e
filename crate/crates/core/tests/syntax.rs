mod common;

use gpml::syntax::{parse, render};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn render_then_parse_is_identity(q in common::ast::query()) {
        let text = render(&q);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}\n{e}")))?;
        prop_assert_eq!(back, q, "{}", text);
    }
}

#[test]
fn published_examples_parse() {
    for q in common::queries::EXAMPLES {
        let parsed = parse(q).unwrap_or_else(|e| panic!("{q}\n{e}"));
        assert_eq!(parse(&render(&parsed)).unwrap(), parsed);
    }
}
