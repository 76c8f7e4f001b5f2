use std::collections::BTreeMap;

use proptest::prelude::*;

use torus_curves::{decide_torus, BigInt, Scheme};
use torus_curves_cli::document::{Int, SchemeDocument, TozDocument, VerdictDocument};

fn big() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        (-50i64..=50).prop_map(BigInt::from),
        any::<i128>().prop_map(BigInt::from),
        (any::<i128>(), any::<u64>()).prop_map(|(a, b)| BigInt::from(a) * BigInt::from(b) * BigInt::from(b)),
    ]
}

fn scheme_doc() -> impl Strategy<Value = SchemeDocument> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(big(), n * (n - 1) / 2),
                prop::collection::btree_map("[a-z]{1,6}", ".{0,12}", 0..3),
            )
        })
        .prop_map(|(n, e, metadata): (usize, Vec<BigInt>, BTreeMap<String, String>)| SchemeDocument {
            n,
            entries: e.into_iter().map(Int).collect(),
            metadata,
        })
}

fn small_scheme() -> impl Strategy<Value = Scheme> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(-9i64..=9, n * (n - 1) / 2).prop_map(move |e| Scheme::from_i64(n, &e).unwrap())
    })
}

proptest! {
    #[test]
    fn scheme_documents(doc in scheme_doc()) {
        let text = serde_json::to_string(&doc).unwrap();
        let back: SchemeDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_scheme().unwrap().n(), doc.n);
    }

    #[test]
    fn verdict_documents(s in small_scheme()) {
        let v = decide_torus(&s).unwrap();
        let doc = VerdictDocument::new(&v, 8);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: VerdictDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        if let Some(t) = &doc.toz {
            let text = serde_json::to_string(t).unwrap();
            prop_assert_eq!(&serde_json::from_str::<TozDocument>(&text).unwrap(), t);
        }
    }
}
