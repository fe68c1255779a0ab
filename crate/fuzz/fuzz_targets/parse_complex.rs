#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Parsing must never panic; a parsed complex is cheap to check.
    if let Ok(c) = grmod::json::complex_from_str(text) {
        let _ = grmod::graded::check_complex(&c);
    }
});
