#![no_main]

use libfuzzer_sys::fuzz_target;
use selfdual::io::parse_fixture;

fuzz_target!(|data: &[u8]| {
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
});
