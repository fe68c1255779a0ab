#![no_main]

use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static CAT: OnceLock<grmod::preadd::PreadditiveCategory> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let cat = CAT.get_or_init(|| {
        grmod::json::preadditive_from_str(include_str!("../../corpus/preadd_a2_z2.json"))
            .expect("bundled category parses")
    });
    let _ = grmod::json::topology_from_str(text, cat);
});
