//! Parsers must reject mangled input with errors, never panics. This is
//! the in-tree counterpart of the fuzz targets: deterministic mutations of
//! every corpus file are fed to the matching parser.

use std::path::PathBuf;

use grmod::json::*;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn mutations(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    // Truncations.
    for k in 1..8 {
        out.push(text[..text.len() * k / 8].to_string());
    }
    // Token substitutions that keep the JSON near-valid.
    for (from, to) in [
        ("\"0\"", "\"999\""),
        ("\"w\"", "\"\""),
        ("[", "["),
        ("1", "99999999999999999999999999"),
        ("\"ring\"", "\"rng\""),
        ("-1", "-99999999999999999"),
        (":", ": null,\"x\":"),
        ("}", "}]"),
        ("\"degrees\"", "\"d\""),
        ("\"compose\"", "\"id\""),
    ] {
        out.push(text.replacen(from, to, 1));
        out.push(text.replace(from, to));
    }
    // Byte-level damage at spread positions.
    let bytes = text.as_bytes();
    for i in (0..bytes.len()).step_by(bytes.len() / 23 + 1) {
        let mut b = bytes.to_vec();
        b[i] = b[i].wrapping_add(13);
        if let Ok(s) = String::from_utf8(b) {
            out.push(s);
        }
    }
    out
}

#[test]
fn mangled_inputs_error_instead_of_panicking() {
    let files = std::fs::read_dir(corpus_dir()).unwrap();
    let arrow_rep = representation_from_str(
        &std::fs::read_to_string(corpus_dir().join("rep_arrow_z2.json")).unwrap(),
    )
    .unwrap();
    let a2 = preadditive_from_str(
        &std::fs::read_to_string(corpus_dir().join("preadd_a2_z2.json")).unwrap(),
    )
    .unwrap();
    let diskend = dg_category_from_str(
        &std::fs::read_to_string(corpus_dir().join("cat_diskend_z.json")).unwrap(),
    )
    .unwrap();
    let mut attempts = 0usize;
    for entry in files {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        for mutant in mutations(&text) {
            // Feed the mutant to every parser: each must return, not panic.
            let _ = representation_from_str(&mutant);
            let _ = dg_category_from_str(&mutant);
            let _ = preadditive_from_str(&mutant);
            let _ = complex_from_str(&mutant);
            let _ = r_module_from_str(&mutant, &arrow_rep);
            let _ = dg_module_from_str(&mutant, &diskend);
            let _ = topology_from_str(&mutant, &a2);
            attempts += 7;
        }
    }
    assert!(
        attempts > 1000,
        "expected a substantial mutation corpus, got {}",
        attempts
    );
}
