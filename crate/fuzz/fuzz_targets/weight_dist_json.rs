#![no_main]

use libfuzzer_sys::fuzz_target;
use selfdual::analyze::WeightDist;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = WeightDist::from_json(text) {
        assert_eq!(d.get(0), 1);
        assert!(d.total().is_power_of_two());
        let again = WeightDist::from_json(&d.to_json()).expect("own JSON parses");
        assert_eq!(again.digest(), d.digest());
    }
});
