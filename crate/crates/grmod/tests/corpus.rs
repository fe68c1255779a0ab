//! The bundled corpus is self-checking: every file parses, validates, and
//! round-trips through the writers byte-for-byte.

use std::path::PathBuf;

use grmod::dgcat::check_dg_category;
use grmod::dgmod::check_dg_module;
use grmod::gr::grothendieck;
use grmod::graded::check_complex;
use grmod::json::*;
use grmod::preadd::check_preadditive;
use grmod::rep::check_representation;
use grmod::rmod::check_r_module;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| {
        panic!("corpus file {} unreadable: {}", name, e);
    })
}

const REPS: [&str; 5] = [
    "rep_point_q.json",
    "rep_arrow_z2.json",
    "rep_loop_z4.json",
    "rep_loop_twisted_z.json",
    "rep_point_diskend_q.json",
];

const MODULES: [(&str, &str); 5] = [
    ("mod_point_q_disk.json", "rep_point_q.json"),
    ("mod_arrow_z2_simple.json", "rep_arrow_z2.json"),
    ("mod_loop_z4_trivial.json", "rep_loop_z4.json"),
    ("mod_loop_twisted_sign.json", "rep_loop_twisted_z.json"),
    ("mod_point_diskend_dual.json", "rep_point_diskend_q.json"),
];

#[test]
fn representations_validate_and_build() {
    for name in REPS {
        let rep = representation_from_str(&read(name)).unwrap_or_else(|e| {
            panic!("{}: {}", name, e);
        });
        let report = check_representation(&rep).unwrap();
        assert!(report.passed(), "{}: {}", name, report);
        let gr = grothendieck(rep).unwrap();
        let report = check_dg_category(gr.category()).unwrap();
        assert!(report.passed(), "{} Gr: {}", name, report);
    }
}

#[test]
fn modules_validate_against_their_representations() {
    for (mname, rname) in MODULES {
        let rep = representation_from_str(&read(rname)).unwrap();
        let m = r_module_from_str(&read(mname), &rep).unwrap_or_else(|e| {
            panic!("{}: {}", mname, e);
        });
        let report = check_r_module(&m, &rep).unwrap();
        assert!(report.passed(), "{}: {}", mname, report);
    }
}

#[test]
fn preadditive_categories_and_topologies_validate() {
    for name in [
        "preadd_a2_z2.json",
        "preadd_twoblock_z2.json",
        "preadd_point_z4.json",
    ] {
        let a = preadditive_from_str(&read(name)).unwrap();
        let report = check_preadditive(&a).unwrap();
        assert!(report.passed(), "{}: {}", name, report);
    }
    let a2 = preadditive_from_str(&read("preadd_a2_z2.json")).unwrap();
    for name in ["topology_a2_trivial.json", "topology_a2_maximal.json"] {
        let t = topology_from_str(&read(name), &a2).unwrap();
        let report = grmod::preadd::check_linear_topology(&a2, &t).unwrap();
        assert!(report.passed(), "{}: {}", name, report);
    }
}

#[test]
fn standalone_category_complex_and_samples_validate() {
    let cat = dg_category_from_str(&read("cat_diskend_z.json")).unwrap();
    assert!(check_dg_category(&cat).unwrap().passed());
    let c = complex_from_str(&read("complex_disk0_z.json")).unwrap();
    assert!(check_complex(&c).unwrap().passed());
    let tb = preadditive_from_str(&read("preadd_twoblock_z2.json")).unwrap();
    for name in [
        "sample_twoblock_x.json",
        "sample_twoblock_y.json",
        "sample_twoblock_xy.json",
    ] {
        let m = dg_module_from_str(&read(name), tb.cat()).unwrap();
        assert!(check_dg_module(&m).unwrap().passed(), "{}", name);
    }
}

#[test]
fn writers_reproduce_the_corpus_bytes() {
    // parse -> write is the identity on the bundled representation and
    // module files (they were produced by the same writers).
    for name in REPS {
        let text = read(name);
        let rep = representation_from_str(&text).unwrap();
        assert_eq!(
            to_pretty_string(&representation_to_json(&rep)),
            text,
            "{}",
            name
        );
    }
    for (mname, rname) in MODULES {
        let rep = representation_from_str(&read(rname)).unwrap();
        let text = read(mname);
        let m = r_module_from_str(&text, &rep).unwrap();
        assert_eq!(
            to_pretty_string(&r_module_to_json(&m, &rep)),
            text,
            "{}",
            mname
        );
    }
    for name in [
        "preadd_a2_z2.json",
        "preadd_twoblock_z2.json",
        "preadd_point_z4.json",
    ] {
        let text = read(name);
        let a = preadditive_from_str(&text).unwrap();
        assert_eq!(to_pretty_string(&preadditive_to_json(&a)), text, "{}", name);
    }
}

#[test]
fn parsers_reject_mangled_corpus_files() {
    // Deleting a required μ entry is a structural error, not a panic.
    let text = read("rep_loop_z4.json");
    let mangled = text.replace("\"s|s\"", "\"s|s-renamed\"");
    match representation_from_str(&mangled) {
        Err(_) => {}
        Ok(_) => panic!("mangled representation should not parse"),
    }
    // Truncated JSON reports a position.
    let truncated = &text[..text.len() / 2];
    let e = representation_from_str(truncated).unwrap_err();
    let msg = format!("{}", e);
    assert!(
        msg.contains("line"),
        "parse error should carry a position: {}",
        msg
    );
}
