mod common;

use std::collections::BTreeSet;

use common::{both_in_box, double_box_oracle, Key};
use cubic_units::cubic_core::CubicParams;
use cubic_units::search::{reproduce_table, reproduce_table_with, solve_bounded, SearchConfig};
use cubic_units::solutions::orbit;
use cubic_units::Error;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

#[test]
fn search_agrees_with_double_box_oracle() {
    let x_max = 8;
    for a in [-1i64, 0, 1, 2, 3, 10] {
        let params = CubicParams::new(a);
        let n_max = params.theorem_n_max().to_i64().unwrap();
        let oracle = double_box_oracle(&params, n_max, x_max);
        let cfg = SearchConfig::new(&params, n_max as u64, x_max).unwrap();
        let found = solve_bounded(&cfg).unwrap();
        let all: BTreeSet<Key> = found
            .sporadic
            .iter()
            .map(|c| c.representative.canonical_key())
            .collect();
        let visible: BTreeSet<Key> = found
            .sporadic
            .iter()
            .filter(|c| both_in_box(&c.representative, x_max))
            .map(|c| c.representative.canonical_key())
            .collect();
        assert!(oracle.is_subset(&all), "a={a}");
        assert_eq!(oracle, visible, "a={a}");
    }
}

#[test]
fn emitted_triples_are_exact_solutions() {
    for a in [-1i64, 0, 1, 2] {
        let params = CubicParams::new(a);
        let cfg = SearchConfig::new(&params, 3, 12).unwrap().with_trivial(true);
        let r = solve_bounded(&cfg).unwrap();
        for c in r.sporadic.iter().chain(r.trivial.iter()) {
            for m in orbit(&c.representative) {
                m.verify().unwrap();
            }
        }
    }
}

#[test]
fn equal_first_exponents_only_for_small_parameters() {
    // A sporadic solution with x1 = x2 would need |n|^3 > a; for the tiny
    // parameters of the table this does happen, so only check a > |n|^3.
    for a in 3i64..=40 {
        let params = CubicParams::new(a);
        let cfg = SearchConfig::theorem_mode(&params).with_x_max(10).unwrap();
        for c in solve_bounded(&cfg).unwrap().sporadic {
            for m in orbit(&c.representative) {
                let n3 = m.n().abs().pow(3);
                if n3 <= BigInt::from(a) {
                    assert_ne!(m.u1().repr().x(), m.u2().repr().x(), "{m}");
                }
            }
        }
    }
}

#[test]
fn table_reproduction() {
    let r = reproduce_table().unwrap();
    assert_eq!(r.class_count, 10);
    assert_eq!(r.sporadic_triples, 60);
    assert_eq!(r.raw_hits, 60);
    assert!(r.all_n_one);
    assert_eq!(r.max_a, Some(2));
    let per: Vec<(i64, usize)> = r.classes_per_a.into_iter().collect();
    assert_eq!(per, vec![(-1, 6), (0, 2), (1, 1), (2, 1)]);
}

#[test]
fn corrupted_fixture_is_reported() {
    let text = cubic_units::search::table1_fixture().replacen(
        r#""u1": {"c": ["77", "27", "-21"], "s": 1, "x": -1, "y": 3},
   "u2": {"c": ["-76", "-27", "21"], "s": 1, "x": -4, "y": -1}"#,
        r#""u1": {"c": ["1", "1", "0"], "s": 1, "x": 1, "y": 1},
   "u2": {"c": ["0", "-1", "0"], "s": -1, "x": 1, "y": 0}"#,
        1,
    );
    assert_ne!(text, cubic_units::search::table1_fixture());
    let err = reproduce_table_with(&text, 12).unwrap_err();
    assert!(matches!(err, Error::MismatchAgainstFixture(_)), "{err}");
}
