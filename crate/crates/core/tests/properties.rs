//! Property tests for the logic and evaluation layers.

use proptest::prelude::*;

use argdec_core::gen::{generate, GenConfig};
use argdec_core::sat::Solver;
use argdec_core::{order_reverse, parse_formula, Formula, ScaleValue};

fn atom_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["p", "q", "r", "s", "t"])
        .prop_map(str::to_string)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        atom_name().prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::not(f)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn scale_value() -> impl Strategy<Value = ScaleValue> {
    (0i64..=60, 1i64..=60).prop_map(|(p, q)| {
        let p = p.min(q);
        format!("{p}/{q}").parse().unwrap()
    })
}

proptest! {
    #[test]
    fn order_reverse_is_an_involution(v in scale_value()) {
        prop_assert_eq!(order_reverse(order_reverse(v)), v);
    }

    #[test]
    fn order_reverse_is_antitone(a in scale_value(), b in scale_value()) {
        if a <= b {
            prop_assert!(order_reverse(a) >= order_reverse(b));
        }
    }

    /// Printing then reparsing is the identity up to the printer's
    /// canonical parenthesization, and never changes the models.
    #[test]
    fn printer_parser_round_trip(f in formula()) {
        let printed = f.to_string();
        let reparsed = parse_formula(&printed).unwrap();
        prop_assert_eq!(reparsed.to_string(), printed);
        let solver = Solver::default();
        prop_assert!(solver.entails(&[f.clone()], &reparsed).unwrap());
        prop_assert!(solver.entails(&[reparsed], &f).unwrap());
    }

    #[test]
    fn backends_agree_on_consistency(fs in prop::collection::vec(formula(), 1..4)) {
        let dpll = Solver::default();
        let table = Solver::truth_table();
        prop_assert_eq!(
            dpll.is_consistent(&fs).unwrap(),
            table.is_consistent(&fs).unwrap()
        );
    }

    #[test]
    fn backends_agree_on_entailment(fs in prop::collection::vec(formula(), 1..3), g in formula()) {
        let dpll = Solver::default();
        let table = Solver::truth_table();
        prop_assert_eq!(
            dpll.entails(&fs, &g).unwrap(),
            table.entails(&fs, &g).unwrap()
        );
    }

    /// Raising the cut threshold can only drop formulas.
    #[test]
    fn cuts_are_antitone(seed in 0u64..200, a in scale_value(), b in scale_value()) {
        let inst = generate(&GenConfig { seed, ..GenConfig::default() }).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for strict in [false, true] {
            let wide = inst.kb.cut(lo, strict);
            let narrow = inst.kb.cut(hi, strict);
            prop_assert!(narrow.iter().all(|f| wide.contains(f)));
            let wide_g = inst.goals.cut(lo, strict);
            let narrow_g = inst.goals.cut(hi, strict);
            prop_assert!(narrow_g.iter().all(|f| wide_g.contains(f)));
        }
    }

    /// Entailment agrees with model enumeration.
    #[test]
    fn entailment_matches_models(fs in prop::collection::vec(formula(), 1..3), g in formula()) {
        use std::sync::Arc;

        use argdec_core::logic::{evaluate, Vocabulary};

        let mut names = std::collections::BTreeSet::new();
        for f in fs.iter().chain([&g]) {
            f.collect_atoms(&mut names);
        }
        let vocab = Arc::new(Vocabulary::new(names.into_iter().collect::<Vec<_>>(), []).unwrap());
        let models = argdec_core::sat::models(&fs, &vocab, 16).unwrap();
        let by_hand = models.iter().all(|m| evaluate(m, &g));
        prop_assert_eq!(Solver::default().entails(&fs, &g).unwrap(), by_hand);
    }
}
