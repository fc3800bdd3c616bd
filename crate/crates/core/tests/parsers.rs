//! Stable-toolchain counterpart of the fuzz targets: the checked-in corpus
//! and random inputs go through every parser with the same round-trip checks.

use std::path::PathBuf;

use proptest::prelude::*;

use selfdual::analyze::WeightDist;
use selfdual::gf2::BitPoly;
use selfdual::io::{parse_fixture, parse_raw_matrix, read_records, render_matrix};

fn poly_from_hex(data: &[u8]) {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(hex) = std::str::from_utf8(rest) else {
        return;
    };
    let k = u32::from(k % 80);
    if let Ok(p) = BitPoly::from_hex(hex, k) {
        assert_eq!(p.degree(), Some(k - 1));
        assert_eq!(BitPoly::from_hex(&p.to_hex(), k).unwrap(), p);
        assert_eq!(BitPoly::from_tap_string(&p.to_tap_string(k)).unwrap(), p);
    }
    let _ = BitPoly::from_tap_string(hex);
}

fn fixture_csv(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_fixture(text) {
        for row in rows {
            assert_eq!(row.poly.weight(), row.ones);
            assert_eq!(row.poly.degree(), Some(row.constraint_length - 1));
            assert!(row.family.admits_weight(row.ones));
        }
    }
}

fn record_jsonl(data: &[u8]) {
    if let Ok(records) = read_records(data) {
        for r in records {
            let line = serde_json::to_string(&r).unwrap();
            assert_eq!(read_records(line.as_bytes()).unwrap(), vec![r]);
        }
    }
}

fn raw_matrix(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_raw_matrix(text) {
        assert_eq!(parse_raw_matrix(&render_matrix(&g)).unwrap(), g);
    }
}

fn weight_dist_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = WeightDist::from_json(text) {
        assert_eq!(d.get(0), 1);
        assert!(d.total().is_power_of_two());
        assert_eq!(
            WeightDist::from_json(&d.to_json()).unwrap().digest(),
            d.digest()
        );
    }
}

type Target = (&'static str, fn(&[u8]));

const TARGETS: [Target; 5] = [
    ("poly_from_hex", poly_from_hex),
    ("fixture_csv", fixture_csv),
    ("record_jsonl", record_jsonl),
    ("raw_matrix", raw_matrix),
    ("weight_dist_json", weight_dist_json),
];

#[test]
fn corpus_seeds_replay() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    for (name, target) in TARGETS {
        let dir = root.join(name);
        let mut n = 0;
        for entry in std::fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
            target(&std::fs::read(entry.unwrap().path()).unwrap());
            n += 1;
        }
        assert!(n > 0, "{name} has no seeds");
    }
}

#[test]
fn seeds_are_accepted() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let read = |p: &str| std::fs::read_to_string(root.join(p)).unwrap();
    assert_eq!(parse_fixture(&read("fixture_csv/singly")).unwrap().len(), 1);
    assert_eq!(
        read_records(read("record_jsonl/doubly_k9").as_bytes())
            .unwrap()
            .len(),
        2
    );
    assert_eq!(
        parse_raw_matrix(&read("raw_matrix/dup_identity"))
            .unwrap()
            .num_rows(),
        4
    );
    assert_eq!(
        WeightDist::from_json(&read("weight_dist_json/hamming_like"))
            .unwrap()
            .total(),
        8
    );
}

fn near_valid() -> impl Strategy<Value = Vec<u8>> {
    prop_oneof![
        any::<Vec<u8>>(),
        "[0-9A-Fa-fx ]{0,40}".prop_map(String::into_bytes),
        "[01 #\n]{0,300}".prop_map(String::into_bytes),
        "family,param1,param2,k,ones,hex\n(singly|doubly),-?[0-9]{1,4},[0-9]{0,3},[0-9]{1,2},[0-9],[0-9A-F]{1,5}\n"
            .prop_map(String::into_bytes),
        r#"\["1"(,"[0-9]{1,3}"){0,8}\]"#.prop_map(String::into_bytes),
        r#"\{"family":"(singly|doubly)","k":[0-9]{1,2},"hex":"[0-9A-F]{1,4}","ones":[0-9],"d":12,"(alpha|gamma)":-?[0-9]{1,4}(,"beta":[0-9]{1,3})?,"dist_sha":"x"\}"#
            .prop_map(String::into_bytes),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parsers_never_panic(data in near_valid()) {
        for (_, target) in TARGETS {
            target(&data);
        }
    }
}
