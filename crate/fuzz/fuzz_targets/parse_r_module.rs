#![no_main]

use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static REP: OnceLock<grmod::rep::DgRepresentation> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let rep = REP.get_or_init(|| {
        grmod::json::representation_from_str(include_str!("../../corpus/rep_loop_twisted_z.json"))
            .expect("bundled representation parses")
    });
    let _ = grmod::json::r_module_from_str(text, rep);
});
