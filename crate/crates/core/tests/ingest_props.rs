//! Parsing invariants.

use proptest::prelude::*;
use synergy_core::{parse_dataset, parse_line, CaseRecord};

fn label() -> impl Strategy<Value = String> {
    // No commas, quotes or line terminators; surrounding whitespace is
    // trimmed by the format, so keep labels trimmed too.
    "[A-Za-z0-9 _.\\-äöü]{0,12}".prop_map(|s| s.trim().to_string())
}

fn record() -> impl Strategy<Value = (String, Vec<String>)> {
    (label(), proptest::collection::vec(label(), 3..=4))
}

proptest! {
    #[test]
    fn quoted_round_trip((id, labels) in record()) {
        let rec = CaseRecord::new(id, labels, 1).unwrap();
        let back = parse_line(&rec.to_quoted_line(), 1).unwrap().unwrap();
        prop_assert_eq!(back, rec);
    }

    #[test]
    fn quotes_are_optional((id, labels) in record()) {
        let plain = std::iter::once(&id).chain(&labels).cloned().collect::<Vec<_>>().join(",");
        let quoted = std::iter::once(&id).chain(&labels)
            .map(|f| format!(" \"{f}\" ")).collect::<Vec<_>>().join(",");
        let a = parse_line(&plain, 3).unwrap();
        let b = parse_line(&quoted, 3).unwrap();
        prop_assert!(a.is_some());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn order_is_preserved(lines in proptest::collection::vec(
        prop_oneof![Just(String::new()), Just("  ".to_string()), "[a-z]{1,3}".prop_map(|s| format!("{s},1,2,3"))],
        1..30,
    )) {
        let expected: Vec<(u64, String)> = lines.iter().enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i as u64 + 1, l.split(',').next().unwrap().to_string()))
            .collect();
        match parse_dataset(&lines, "t") {
            Ok(ds) => {
                let got: Vec<(u64, String)> = ds.records().iter().map(|r| (r.line_number, r.id.clone())).collect();
                prop_assert_eq!(got, expected);
            }
            Err(_) => prop_assert!(expected.is_empty()),
        }
    }
}

#[test]
fn table1_and_table3_parse() {
    let t1 = parse_dataset(
        [
            r#""id1", "1", "b", "region1", "2""#,
            r#""id2", "2", "a", "region2", "1""#,
            r#""id3", "1", "a", "region2", "2""#,
            r#""id4", "1", "b", "region5", "1""#,
        ],
        "data.txt",
    )
    .unwrap();
    assert_eq!((t1.arity().get(), t1.len()), (4, 4));
    let t3 = parse_dataset(
        ["459695,1901,5,3", "459696,1901,5,5", "459697,1901,11,1", "459698,1901,11,2", "459699,1901,11,2", "459700,1901,11,2"],
        "tromso",
    )
    .unwrap();
    assert_eq!((t3.arity().get(), t3.len()), (3, 6));
    assert_eq!(t3.source_label(), "tromso");
}
