//! Every text parser must reject garbage with an error, never a panic:
//! the CLI's exit-code contract depends on it.

use junction::algebra::{parse_value, SemiringDescriptor};
use junction::cds::KExpression;
use junction::csp::{CspInstance, SumProductInstance};
use junction::expr::{parse_expr, ExprStore, Universe};
use junction::measures::parse_matrix;
use junction::td::TreeDecomposition;

use proptest::prelude::*;

fn universe() -> Universe {
    Universe::new(vec!["a", "b"], vec!["0", "1"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_input_never_panics(input in ".{0,160}") {
        let _ = KExpression::parse(&input);
        let _ = TreeDecomposition::parse(&input);
        let _ = CspInstance::parse_json(&input);
        let _ = SumProductInstance::parse_json(&input);
        let _ = SemiringDescriptor::parse(&input);
        let _ = parse_matrix(&universe(), &input);
        let mut store = ExprStore::new(universe());
        let _ = parse_expr(&mut store, &input);
        for desc in [
            SemiringDescriptor::Boolean,
            SemiringDescriptor::Natural,
            SemiringDescriptor::Tropical,
            SemiringDescriptor::delta(SemiringDescriptor::Tropical, SemiringDescriptor::Natural),
        ] {
            let _ = parse_value(&desc, &input);
        }
    }

    #[test]
    fn structured_garbage_never_panics(
        head in "[a-z]{1,8}",
        nums in proptest::collection::vec(0usize..20, 0..6),
        depth in 0usize..4,
    ) {
        // plausible-looking s-expressions and header lines
        let mut sexpr = format!("({head}");
        for n in &nums {
            sexpr.push_str(&format!(" {n}"));
        }
        for _ in 0..depth {
            sexpr = format!("({head} {sexpr})");
        }
        sexpr.push(')');
        let _ = KExpression::parse(&sexpr);
        let mut store = ExprStore::new(universe());
        let _ = parse_expr(&mut store, &sexpr);

        let pace = format!(
            "s td {} {} {}\nb 1 {}\n",
            nums.first().copied().unwrap_or(0),
            nums.get(1).copied().unwrap_or(0),
            nums.get(2).copied().unwrap_or(0),
            nums.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "),
        );
        let _ = TreeDecomposition::parse(&pace);
    }
}
