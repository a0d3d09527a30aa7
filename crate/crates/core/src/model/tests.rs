use proptest::prelude::*;

use super::*;
use crate::lp::Sense;

const EXAMPLE_MPS: &str = include_str!("../../../../fixtures/example1.mps");
const EXAMPLE_JSON: &str = include_str!("../../../../fixtures/example1.json");
const KNAPSACK_MPS: &str = include_str!("../../../../fixtures/knapsack_max.mps");

#[test]
fn mps_example_matches_builtin() {
    let p = parse_mps(EXAMPLE_MPS).unwrap();
    assert_eq!(p.num_vars(), 3);
    assert_eq!(p.num_rows(), 4);
    assert_eq!(p.lp().objective(), &[1.0, -2.0, -6.0]);
    assert!(p.integrality().iter().all(|&b| b));
    assert_eq!(p.lp().upper(), &[1.0; 3]);
    let builtin = example_problem();
    assert_eq!(p.lp(), builtin.lp());
}

#[test]
fn json_example_matches_builtin() {
    let p = parse_json(EXAMPLE_JSON).unwrap();
    assert_eq!(p, example_problem());
}

#[test]
fn max_sense_is_negated_internally() {
    let p = parse_mps(KNAPSACK_MPS).unwrap();
    assert_eq!(p.sense(), ObjSense::Max);
    assert_eq!(p.lp().objective(), &[-5.0, -4.0, -3.0, -1.0]);
    assert_eq!(p.integrality(), &[true, true, true, false]);
    assert_eq!(p.lp().upper(), &[1.0, 1.0, 1.0, 1.5]);
    assert_eq!(p.external_objective(-8.0), 8.0);
}

#[test]
fn name_and_endata_only_is_empty() {
    let err = parse_mps("NAME empty\nENDATA\n").unwrap_err();
    assert!(matches!(err, ModelError::Empty));
}

#[test]
fn bv_bound_makes_binary() {
    let text = "NAME t\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n BV B x\nENDATA\n";
    let p = parse_mps(text).unwrap();
    assert!(p.is_integral(0));
    assert_eq!((p.lp().lower()[0], p.lp().upper()[0]), (0.0, 1.0));
}

#[test]
fn objective_rhs_becomes_offset() {
    let text = "NAME t\nROWS\n N obj\nCOLUMNS\n x obj 1\nRHS\n R obj 4\nENDATA\n";
    let p = parse_mps(text).unwrap();
    assert_eq!(p.external_objective(0.0), -4.0);
}

#[test]
fn mps_errors_are_located() {
    let cases = [
        ("NAME t\nROWS\n N obj\n G r\n G r\nENDATA\n", 5),
        ("NAME t\nROWS\n N obj\nFOO\nENDATA\n", 4),
        (
            "NAME t\nROWS\n N obj\n G r\nCOLUMNS\n x r 1\n y r 1\n x r 2\nENDATA\n",
            8,
        ),
        (
            "NAME t\nROWS\n N obj\n G r\nCOLUMNS\n x r 1\nRANGES\n R r 2\nENDATA\n",
            7,
        ),
        ("NAME t\nROWS\n N obj\n G r\nCOLUMNS\n x q 1\nENDATA\n", 6),
        ("NAME t\nROWS\n N obj\n G r\nCOLUMNS\n x r abc\nENDATA\n", 6),
    ];
    for (text, line) in cases {
        match parse_mps(text) {
            Err(ModelError::Parse(e)) => assert_eq!(e.line, line, "{text}"),
            other => panic!("expected parse error for {text:?}, got {other:?}"),
        }
    }
}

#[test]
fn missing_endata_is_an_error() {
    let err = parse_mps("NAME t\nROWS\n N obj\nCOLUMNS\n x obj 1\n").unwrap_err();
    assert!(matches!(
        err,
        ModelError::Parse(ParseError {
            kind: ParseErrorKind::MissingEndata,
            ..
        })
    ));
}

#[test]
fn json_rejects_unknown_variable_and_empty_domain() {
    let text = r#"{"name":"t","objective":[1],"rows":[{"coefs":{"y":1},"sense":">=","rhs":0}],
                  "vars":[{"name":"x","lb":0,"ub":1}]}"#;
    assert!(matches!(parse_json(text), Err(ModelError::Invalid(_))));
    let text = r#"{"name":"t","objective":[1],"rows":[],
                  "vars":[{"name":"x","lb":0.5,"ub":0.7,"integral":true}]}"#;
    assert!(matches!(parse_json(text), Err(ModelError::Invalid(_))));
}

#[test]
fn json_infinite_bounds() {
    let text = r#"{"name":"t","objective":[1, 0],"rows":[],
                  "vars":[{"name":"x","lb":"-inf","ub":null},{"name":"y"}]}"#;
    let p = parse_json(text).unwrap();
    // a missing lower bound defaults to zero
    assert_eq!(p.lp().lower(), &[f64::NEG_INFINITY, 0.0]);
    assert_eq!(p.lp().upper(), &[f64::INFINITY, f64::INFINITY]);
    let back = parse_json(&to_json(&p)).unwrap();
    assert_eq!(back, p);
}

#[test]
fn generator_is_deterministic() {
    let prof = RandomProfile::default();
    let a = generate_random(1, 3, 2, &prof);
    let b = generate_random(1, 3, 2, &prof);
    let c = generate_random(2, 3, 2, &prof);
    assert_eq!(a, b);
    assert_ne!(a.lp(), c.lp());
    assert!(a.integrality().iter().all(|&i| i));
    assert!((0..3).all(|j| a.lp().lower()[j] == 0.0 && a.lp().upper()[j] == 1.0));
}

#[test]
fn generator_mixed_profile() {
    let prof = RandomProfile {
        continuous: 2,
        ..RandomProfile::default()
    };
    let p = generate_random(7, 6, 4, &prof);
    assert_eq!(p.integrality(), &[true, true, true, true, false, false]);
    assert!(p.lp().rows().iter().all(|r| !r.coefs.is_empty()));
    assert!(p.lp().rows().iter().any(|r| r.sense != Sense::Eq));
}

proptest! {
    #[test]
    fn json_round_trip(seed in 0u64..10_000, n in 1usize..10, m in 0usize..8, cont in 0usize..3) {
        let prof = RandomProfile { continuous: cont, ..RandomProfile::default() };
        let p = generate_random(seed, n, m, &prof);
        let back = parse_json(&to_json(&p)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn corrupted_numbers_are_rejected_with_location(
        pick in any::<prop::sample::Index>(),
        garbage in prop::sample::select(vec!["1..5", "x7", "nan", "1e400", "--2", "3,5", "0x10"]),
    ) {
        // every numeric token of the fixture, with its line number
        let lines: Vec<&str> = EXAMPLE_MPS.lines().collect();
        let mut spots = Vec::new();
        for (i, l) in lines.iter().enumerate() {
            if l.starts_with(' ') {
                for (k, tok) in l.split_whitespace().enumerate() {
                    if tok.parse::<f64>().is_ok() {
                        spots.push((i, k));
                    }
                }
            }
        }
        let (li, ti) = spots[pick.index(spots.len())];
        let mut toks: Vec<&str> = lines[li].split_whitespace().collect();
        toks[ti] = garbage;
        let mut mutated: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        mutated[li] = format!(" {}", toks.join(" "));
        let text = mutated.join("\n");
        match parse_mps(&text) {
            Err(ModelError::Parse(e)) => prop_assert_eq!(e.line, li + 1),
            other => prop_assert!(false, "mutation accepted: {:?}", other),
        }
    }
}
