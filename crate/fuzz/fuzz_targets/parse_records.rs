#![no_main]

use drlift_cli::record::{parse_records, records_to_string, Format};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for format in [Format::Csv, Format::Jsonl] {
        let Ok(records) = parse_records(text, format) else {
            continue;
        };
        // Non-finite values parse but are refused on output.
        let Ok(out) = records_to_string(&records, format) else {
            continue;
        };
        let again = parse_records(&out, format).expect("written records parse");
        assert_eq!(again, records);
    }
});
