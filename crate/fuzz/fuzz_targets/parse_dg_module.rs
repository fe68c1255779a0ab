#![no_main]

use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static CAT: OnceLock<std::sync::Arc<grmod::dgcat::DgCategory>> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let cat = CAT.get_or_init(|| {
        grmod::json::dg_category_from_str(include_str!("../../corpus/cat_diskend_z.json"))
            .expect("bundled category parses")
    });
    let _ = grmod::json::dg_module_from_str(text, cat);
});
