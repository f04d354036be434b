use dirimul::{Complex64, DirichletPoly};
use dirimul_cli::{parse_series, print_series};
use proptest::prelude::*;

/// Input text and its canonical printed form.
const CORPUS: [(&str, &str); 50] = [
    ("1", "1"),
    ("0", "0"),
    ("1 + 2^-s", "1 + 2^-s"),
    ("2^-s + 1", "1 + 2^-s"),
    ("(1+2^-s)*(1+3^-s)", "1 + 2^-s + 3^-s + 6^-s"),
    ("2i*4^-s - 0.5*9^-s", "2i*4^-s - 0.5*9^-s"),
    ("-1", "-1"),
    ("i", "i"),
    ("-i", "-i"),
    ("3^(-s)", "3^-s"),
    ("(1+2^-s)*(1+2^-s)", "1 + 2*2^-s + 4^-s"),
    ("(1-2^-s)*(1+2^-s)", "1 - 4^-s"),
    ("2 + 2^-s", "2 + 2^-s"),
    ("1 + 2^-s + 3^-s", "1 + 2^-s + 3^-s"),
    ("(0.5+0.25i)*3^-s", "(0.5+0.25i)*3^-s"),
    ("(1-i)", "(1-i)"),
    ("2^-s - 2^-s", "0"),
    ("1e-7*5^-s", "1e-7*5^-s"),
    ("12345678901234567*7^-s", "1.2345678901234568e16*7^-s"),
    ("0.1 + 0.2", "0.30000000000000004"),
    ("-(1 + 2^-s)", "-1 - 2^-s"),
    ("+3^-s", "3^-s"),
    ("-(-5^-s)", "5^-s"),
    ("2*3*5^-s", "6*5^-s"),
    ("2^-s*3^-s*5^-s", "30^-s"),
    ("(2^-s + 3^-s)*(2^-s - 3^-s)", "4^-s - 9^-s"),
    ("i*i", "-1"),
    ("(1+i)*(1-i)", "2"),
    ("1.5*(2 + 4^-s)", "3 + 1.5*4^-s"),
    ("9223372036854775807^-s", "9223372036854775807^-s"),
    ("(1+2^-s)*(1+2^-s)*(1+2^-s)", "1 + 3*2^-s + 3*4^-s + 8^-s"),
    ("  1+2^-s  ", "1 + 2^-s"),
    ("2.5i", "2.5i"),
    ("-2.5i*6^-s", "-2.5i*6^-s"),
    ("(-3+4i)*10^-s", "(-3+4i)*10^-s"),
    ("(0-4i)", "-4i"),
    ("1 - 2^-s + 3^-s - 4^-s", "1 - 2^-s + 3^-s - 4^-s"),
    ("(1 + 3^-s)*(1 - 3^-s + 9^-s)", "1 + 27^-s"),
    ("0.001*2^-s", "0.001*2^-s"),
    ("0.00001*2^-s", "0.00001*2^-s"),
    ("0.000001", "1e-6"),
    ("1e16", "1e16"),
    ("9999999999999999", "1e16"),
    ("1 + (2^-s)", "1 + 2^-s"),
    ("((1))", "1"),
    ("3^-s*(2 + i)", "(2+i)*3^-s"),
    ("0.5*2^-s + 0.5*2^-s", "2^-s"),
    ("1 + 1e-300*2^-s", "1 + 1e-300*2^-s"),
    ("7^-s - 0.75 + 2i*5^-s", "-0.75 + 2i*5^-s + 7^-s"),
    ("(1 + 2^-s + 4^-s)*(1 - 2^-s)", "1 - 8^-s"),
];

#[test]
fn corpus_prints_canonically_and_round_trips() {
    for (input, canonical) in CORPUS {
        let d = parse_series(input).unwrap_or_else(|e| panic!("{input}: {e}"));
        assert_eq!(print_series(&d), canonical, "input {input}");
        assert_eq!(parse_series(canonical).unwrap(), d, "canonical {canonical}");
        assert_eq!(print_series(&parse_series(canonical).unwrap()), canonical);
    }
}

fn component() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(1.0),
        Just(-1.0),
        (-1000i32..1000).prop_map(f64::from),
        -1e3..1e3f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

fn index() -> impl Strategy<Value = u64> {
    prop_oneof![1u64..1000, 1u64..=dirimul::arith::MAX_INDEX]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn printed_series_parse_back_exactly(terms in prop::collection::vec((index(), component(), component()), 0..8)) {
        let d = DirichletPoly::from_terms(terms.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im)))).unwrap();
        let text = print_series(&d);
        let back = parse_series(&text).unwrap();
        prop_assert_eq!(&back, &d, "{}", text);
        prop_assert_eq!(print_series(&back), text);
    }
}
