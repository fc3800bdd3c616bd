#![no_main]

use libfuzzer_sys::fuzz_target;
use selfdual::io::read_records;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_records(data) {
        for r in records {
            let line = serde_json::to_string(&r).expect("records serialize");
            let back = read_records(line.as_bytes()).expect("serialized record reads back");
            assert_eq!(back, vec![r]);
        }
    }
});
