//! Property tests for the text formats: parsing is the exact inverse of
//! serialization, and decimal opt-in conversion is exact.

use proptest::prelude::*;

use troprank::{BigRational, TropMatrix, TropScalar};
use troprank_cli::format::{
    parse_matrix_document, parse_rational, serialize_matrix_document, MatrixDocument,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-99i64..=99, 1i64..=23).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn document() -> impl Strategy<Value = MatrixDocument> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(rational(), r * c),
            prop::option::of("[a-z]{1,12}"),
            prop::option::of(any::<u64>()),
        )
            .prop_map(move |(v, name, seed)| MatrixDocument {
                name,
                seed,
                matrix: TropMatrix::new(r, c, v.into_iter().map(TropScalar::new).collect())
                    .expect("r*c entries"),
            })
    })
}

fn decimal_string(p: i64, k: u32) -> String {
    let digits = format!("{:0width$}", p.abs(), width = (k + 1) as usize);
    let (int_part, frac_part) = digits.split_at(digits.len() - k as usize);
    format!("{}{}.{}", if p < 0 { "-" } else { "" }, int_part, frac_part)
}

proptest! {
    #[test]
    fn matrix_documents_round_trip(doc in document()) {
        let text = serialize_matrix_document(&doc);
        let back = parse_matrix_document(&text, false).expect("own output parses");
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_matrix_document(&back), text);
    }

    #[test]
    fn decimal_conversion_is_exact(p in -99_999i64..=99_999, k in 1u32..=4) {
        let text = decimal_string(p, k);
        let parsed = parse_rational(&text, true, 1).expect("well-formed decimal");
        let expected = BigRational::new(p.into(), 10i64.pow(k).into());
        prop_assert_eq!(parsed, expected);
    }

    #[test]
    fn garbage_tokens_never_panic(tok in "[-+./0-9a-z]{0,12}") {
        let _ = parse_rational(&tok, true, 1);
        let _ = parse_rational(&tok, false, 1);
    }
}
