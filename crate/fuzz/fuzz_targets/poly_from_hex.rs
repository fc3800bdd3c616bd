#![no_main]

use libfuzzer_sys::fuzz_target;
use selfdual::gf2::BitPoly;

// First byte picks the constraint length, the rest is the hex string.
fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(hex) = std::str::from_utf8(rest) else {
        return;
    };
    let k = u32::from(k % 80);
    if let Ok(p) = BitPoly::from_hex(hex, k) {
        assert_eq!(p.degree(), Some(k - 1));
        let again = BitPoly::from_hex(&p.to_hex(), k).expect("canonical hex parses");
        assert_eq!(again, p);
        let taps = p.to_tap_string(k);
        assert_eq!(
            BitPoly::from_tap_string(&taps).expect("tap string parses"),
            p
        );
    }
    let _ = BitPoly::from_tap_string(hex);
});
