#![no_main]

use drlift::instance::parse_epsilon;
use libfuzzer_sys::fuzz_target;
use num_rational::Ratio;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(eps) = parse_epsilon(text) {
        assert!(eps > Ratio::from_integer(0));
        assert!(eps <= Ratio::from_integer(1));
    }
});
