#![no_main]

use libfuzzer_sys::fuzz_target;
use selfdual::io::{parse_raw_matrix, render_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_raw_matrix(text) {
        let again = parse_raw_matrix(&render_matrix(&g)).expect("rendered matrix parses");
        assert_eq!(again, g);
    }
});
