//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `-- --nocapture` to see them). Tolerances are
//! exact everywhere; the two timed criteria assert their stated budgets.

use num::bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use grmod::classify::{center, idempotents, torsion_split, TorsionDatum};
use grmod::dgcat::{check_dg_category, BasisRef, DgCategory};
use grmod::dgmod::{compare_dg_modules, module_hom_space, DgModule};
use grmod::gens::{check_generates, generator, p_window, representable_over};
use grmod::gr::{grothendieck, GrBuild};
use grmod::graded::Complex;
use grmod::json::*;
use grmod::matrix::{self, Matrix};
use grmod::preadd::{
    check_linear_topology, enumerate_subfunctors, ideal_generated, ideal_product,
    PreadditiveCategory, Subfunctor, TopologyCandidate,
};
use grmod::rep::DgRepresentation;
use grmod::ring::{Ring, Scalar};
use grmod::rmod::{phi, psi, RModule};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus().join(name)).expect("corpus file")
}

const REPS: [(&str, &str); 5] = [
    ("rep_point_q.json", "mod_point_q_disk.json"),
    ("rep_arrow_z2.json", "mod_arrow_z2_simple.json"),
    ("rep_loop_z4.json", "mod_loop_z4_trivial.json"),
    ("rep_loop_twisted_z.json", "mod_loop_twisted_sign.json"),
    ("rep_point_diskend_q.json", "mod_point_diskend_dual.json"),
];

fn load_rep(name: &str) -> DgRepresentation {
    representation_from_str(&read(name)).expect("corpus representation parses")
}

fn load_module(name: &str, rep: &DgRepresentation) -> RModule {
    r_module_from_str(&read(name), rep).expect("corpus module parses")
}

/// The corpus module family for one representation: zero, all
/// representables, generators in low degrees, and the bundled hand-built
/// non-projective sample — all as dg-modules over Gr(R).
fn module_family(gr: &GrBuild, hand_built: &RModule) -> Vec<DgModule> {
    let cat = gr.category();
    let mut out = vec![DgModule::zero(cat.clone())];
    for at in 0..cat.objects().len() {
        out.push(representable_over(cat.clone(), at));
    }
    let gen_degrees: &[i64] = if cat.objects().len() == 1 {
        &[0, 1, 2]
    } else {
        &[0, 1]
    };
    for at in 0..cat.objects().len() {
        for &n in gen_degrees {
            out.push(generator(cat.clone(), at, n));
        }
    }
    out.push(phi(hand_built, gr).expect("phi of the hand-built sample"));
    out
}

#[test]
fn criterion_1_grothendieck_well_definedness() {
    let start = Instant::now();
    for (rep_name, _) in REPS {
        let gr = grothendieck(load_rep(rep_name)).expect("Gr(R) builds");
        let report = check_dg_category(gr.category()).expect("check runs");
        assert!(
            report.passed(),
            "criterion 1 FAIL: {} Gr(R) violates dg-category axioms: {}",
            rep_name,
            report
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 10,
        "criterion 1 FAIL: exhaustive checks took {:?} (budget 10s)",
        elapsed
    );
    println!(
        "acceptance criterion 1: PASS — Gr(R) passes exhaustive dg-category checks for all 5 corpus representations in {:?}",
        elapsed
    );
}

#[test]
fn criterion_2_equivalence_round_trips() {
    let start = Instant::now();
    let mut total = 0usize;
    for (rep_name, mod_name) in REPS {
        let rep = load_rep(rep_name);
        let gr = grothendieck(rep.clone()).expect("Gr(R) builds");
        let hand = load_module(mod_name, &rep);
        let family = module_family(&gr, &hand);
        assert!(
            family.len() >= 6,
            "criterion 2 FAIL: only {} corpus modules for {}",
            family.len(),
            rep_name
        );
        for (k, f) in family.iter().enumerate() {
            let m = psi(f, &gr).expect("psi");
            let fwd = phi(&m, &gr).expect("phi");
            let verdict = compare_dg_modules(&fwd, f).expect("compare");
            assert!(
                verdict.is_equivalence(),
                "criterion 2 FAIL: {} module {}: phi(psi(F)) vs F is {}",
                rep_name,
                k,
                verdict.label()
            );
            let back = psi(&fwd, &gr).expect("psi");
            let verdict = grmod::rmod::compare_r_modules(&back, &m, &rep).expect("compare");
            assert!(
                verdict.is_equivalence(),
                "criterion 2 FAIL: {} module {}: psi(phi(M)) vs M is {}",
                rep_name,
                k,
                verdict.label()
            );
            total += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 10,
        "criterion 2 FAIL: round trips took {:?} (budget 10s)",
        elapsed
    );
    println!(
        "acceptance criterion 2: PASS — both round trips are equivalences (in fact equalities were verified elsewhere) for {} corpus modules in {:?}",
        total, elapsed
    );
}

/// Independent unsigned oracle for degree-0 representations: the classical
/// linear Grothendieck construction with composition
/// `(g∘f)_c = Σ_{ba=c} g_b ∘ R(b)(f_a) ∘ θ_{b,a}x` and no signs.
struct UnsignedOracle<'a> {
    rep: &'a DgRepresentation,
    objects: Vec<(usize, usize)>,
}

impl<'a> UnsignedOracle<'a> {
    fn new(rep: &'a DgRepresentation) -> Self {
        let mut objects = Vec::new();
        for i in 0..rep.base().objects().len() {
            for x in 0..rep.fiber(i).objects().len() {
                objects.push((i, x));
            }
        }
        UnsignedOracle { rep, objects }
    }

    /// Summand layout of hom(p, q) in degree 0: (morphism, offset, rank).
    fn layout(&self, p: (usize, usize), q: (usize, usize)) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for a in self.rep.base().hom_set(p.0, q.0) {
            let rax = self.rep.functor(a).apply_obj(p.1);
            let rank = self.rep.fiber(q.0).hom_rank(rax, q.1, 0);
            out.push((a, off, rank));
            off += rank;
        }
        out
    }

    /// The full structure-constant table, keyed exactly like the built
    /// category's basis refs.
    fn constants(&self) -> BTreeMap<(BasisRef, BasisRef), Vec<Scalar>> {
        let ring = self.rep.fiber(0).ring();
        let mut table = BTreeMap::new();
        for (pi, &p) in self.objects.iter().enumerate() {
            for (qi, &q) in self.objects.iter().enumerate() {
                for (ri, &r) in self.objects.iter().enumerate() {
                    // f: p -> q in summand a, g: q -> r in summand b.
                    for &(a, aoff, arank) in &self.layout(p, q) {
                        for &(b, boff, brank) in &self.layout(q, r) {
                            let Some(c) = self.rep.base().compose(b, a) else {
                                continue;
                            };
                            let fiber = self.rep.fiber(r.0);
                            let rax = self.rep.functor(a).apply_obj(p.1);
                            for fj in 0..arank {
                                let f_elt = fiber_basis(self.rep, q.0, rax, q.1, fj);
                                let rb_f = self.rep.functor(b).apply_elt(&f_elt);
                                let theta = self.rep.theta_at(b, a, p.1);
                                for gj in 0..brank {
                                    let g_elt = fiber_basis(
                                        self.rep,
                                        r.0,
                                        self.rep.functor(b).apply_obj(q.1),
                                        r.1,
                                        gj,
                                    );
                                    let term =
                                        fiber.elt_compose(&fiber.elt_compose(&g_elt, &rb_f), theta);
                                    // Place into the c-summand of hom(p, r).
                                    let layout_pr = self.layout(p, r);
                                    let &(_, coff, crank) = layout_pr
                                        .iter()
                                        .find(|&&(m, _, _)| m == c)
                                        .expect("summand exists");
                                    let total: usize = layout_pr.iter().map(|&(_, _, rk)| rk).sum();
                                    let mut vec = vec![ring.zero(); total];
                                    if let Some(coeffs) = term.coeffs.get(&0) {
                                        assert_eq!(coeffs.len(), crank);
                                        for (k, cv) in coeffs.iter().enumerate() {
                                            vec[coff + k] = cv.clone();
                                        }
                                    }
                                    if vec.iter().any(|e| !ring.is_zero(e)) {
                                        let gref = BasisRef {
                                            src: qi,
                                            tgt: ri,
                                            degree: 0,
                                            index: boff + gj,
                                        };
                                        let fref = BasisRef {
                                            src: pi,
                                            tgt: qi,
                                            degree: 0,
                                            index: aoff + fj,
                                        };
                                        table.insert((gref, fref), vec);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        table
    }
}

fn fiber_basis(
    rep: &DgRepresentation,
    fiber_idx: usize,
    src: usize,
    tgt: usize,
    index: usize,
) -> grmod::dgcat::HomElt {
    rep.fiber(fiber_idx).basis_elt(BasisRef {
        src,
        tgt,
        degree: 0,
        index,
    })
}

#[test]
fn criterion_3_degree_zero_reduction_oracle() {
    // The four corpus representations concentrated in degree 0.
    let degree_zero = [
        "rep_point_q.json",
        "rep_arrow_z2.json",
        "rep_loop_z4.json",
        "rep_loop_twisted_z.json",
    ];
    let mut compared = 0usize;
    for name in degree_zero {
        let rep = load_rep(name);
        let gr = grothendieck(rep.clone()).expect("Gr(R) builds");
        let oracle = UnsignedOracle::new(&rep).constants();
        let built = gr.category().structure_constants();
        // Zero discrepancies allowed, in either direction.
        for (key, vec) in &oracle {
            let got = built.get(key);
            assert_eq!(
                got,
                Some(vec),
                "criterion 3 FAIL: {} constant {:?} differs from the unsigned oracle",
                name,
                key
            );
            compared += 1;
        }
        for (key, vec) in built {
            assert_eq!(
                oracle.get(key),
                Some(vec),
                "criterion 3 FAIL: {} built constant {:?} missing from the oracle",
                name,
                key
            );
        }
    }
    println!(
        "acceptance criterion 3: PASS — {} structure constants match the unsigned classical oracle entrywise on all degree-0 representations",
        compared
    );
}

#[test]
fn criterion_4_generators_and_adjunction_counts() {
    let mut generation_checks = 0usize;
    let mut count_checks = 0usize;
    for (rep_name, mod_name) in REPS {
        let rep = load_rep(rep_name);
        let gr = grothendieck(rep.clone()).expect("Gr(R) builds");
        let cat = gr.category();
        let ring = cat.ring();
        let hand = load_module(mod_name, &rep);
        let family = module_family(&gr, &hand);
        for (k, m) in family.iter().enumerate() {
            let report = check_generates(cat, m, (-3, 3)).expect("check runs");
            assert!(
                report.passed(),
                "criterion 4 FAIL: {} module {} not generated in window [-3,3]: {}",
                rep_name,
                k,
                report
            );
            generation_checks += 1;
        }
        // Adjunction count = brute-force count of degree-0 closed module
        // maps, for every generator against two family members.
        let probes = [&family[1], family.last().unwrap()];
        for at in 0..cat.objects().len() {
            for n in -1..=2 {
                let g = generator(cat.clone(), at, n);
                for m in probes {
                    let space = module_hom_space(&g, m);
                    let rank = m.value(at).rank(n - 1);
                    match ring {
                        Ring::Mod(q) => {
                            let brute = matrix::subgroup_size(&ring, &space.solutions).unwrap();
                            let expected = BigInt::from(q).pow(rank as u32);
                            assert_eq!(
                                brute, expected,
                                "criterion 4 FAIL: {} G_({},{}) map count",
                                rep_name, at, n
                            );
                        }
                        Ring::Int | Ring::Rat => {
                            assert_eq!(
                                space.solutions.rows(),
                                rank,
                                "criterion 4 FAIL: {} G_({},{}) hom-space rank",
                                rep_name,
                                at,
                                n
                            );
                        }
                    }
                    count_checks += 1;
                }
            }
        }
    }
    println!(
        "acceptance criterion 4: PASS — {} generation checks in window [-3,3] and {} exact adjunction-count matches",
        generation_checks, count_checks
    );
}

#[test]
fn criterion_5_centers_idempotents_torsion_splits() {
    // A₂ window over Z/2, materialized from the arrow representation.
    let rep = load_rep("rep_arrow_z2.json");
    let gr = grothendieck(rep).expect("Gr(R) builds");
    let o0 = gr.object_by_name("0:w").unwrap();
    let o1 = gr.object_by_name("1:w").unwrap();
    let window = p_window(gr.category(), &[(o0, 0), (o1, 0)]).expect("window builds");
    let z = center(&window.category).expect("center solves");
    assert_eq!(
        z.cardinality().unwrap(),
        BigInt::from(2),
        "criterion 5 FAIL: A₂ window center must have exactly 2 elements"
    );
    let idems = idempotents(&z).expect("enumeration fits");
    assert_eq!(
        idems.len(),
        2,
        "criterion 5 FAIL: A₂ window center must have exactly 2 idempotents"
    );

    let two_block = preadditive_from_str(&read("preadd_twoblock_z2.json")).unwrap();
    let z2 = center(&two_block).expect("center solves");
    let idems2 = idempotents(&z2).expect("enumeration fits");
    assert_eq!(
        idems2.len(),
        4,
        "criterion 5 FAIL: two-block center must have exactly 4 idempotents"
    );

    // Torsion splits for every found idempotent on every sample module.
    let samples: Vec<DgModule> = [
        "sample_twoblock_x.json",
        "sample_twoblock_y.json",
        "sample_twoblock_xy.json",
    ]
    .iter()
    .map(|name| dg_module_from_str(&read(name), two_block.cat()).unwrap())
    .collect();
    let sample_refs: Vec<&DgModule> = samples.iter().collect();
    for (i, coords) in idems2.iter().enumerate() {
        let datum = TorsionDatum::CentralIdempotent {
            center: &z2,
            coords: coords.clone(),
        };
        let report = torsion_split(&two_block, &datum, &sample_refs).expect("split runs");
        assert!(
            report.passed(),
            "criterion 5 FAIL: two-block idempotent e{}: {}",
            i,
            report
        );
    }
    // Window samples: the representables of the window category.
    let wsamples: Vec<DgModule> = (0..window.category.objects().len())
        .map(|x| representable_over(window.category.cat().clone(), x))
        .collect();
    let wrefs: Vec<&DgModule> = wsamples.iter().collect();
    for (i, coords) in idems.iter().enumerate() {
        let datum = TorsionDatum::CentralIdempotent {
            center: &z,
            coords: coords.clone(),
        };
        let report = torsion_split(&window.category, &datum, &wrefs).expect("split runs");
        assert!(
            report.passed(),
            "criterion 5 FAIL: A₂ window idempotent e{}: {}",
            i,
            report
        );
    }
    println!(
        "acceptance criterion 5: PASS — A₂/Z2 window center has exactly 2 elements and 2 idempotents, the two-block center has exactly 4 idempotents, and every torsion split passes on every sample"
    );
}

/// Brute-force two-sided-ideal oracle over a finite ring: literal element
/// sets closed under addition and two-sided composition by all elements.
fn oracle_ideal(
    a: &PreadditiveCategory,
    gens: &[(usize, usize, Vec<Scalar>)],
) -> BTreeMap<(usize, usize), BTreeSet<Vec<Scalar>>> {
    let ring = a.ring();
    let nobj = a.objects().len();
    let hom_elements = |x: usize, y: usize| -> Vec<Vec<Scalar>> {
        let r = a.hom_rank(x, y);
        if r == 0 {
            return vec![];
        }
        matrix::enumerate_subgroup(&ring, &Matrix::identity(&ring, r), 1 << 12).unwrap()
    };
    let mut sets: BTreeMap<(usize, usize), BTreeSet<Vec<Scalar>>> = BTreeMap::new();
    for x in 0..nobj {
        for y in 0..nobj {
            if a.hom_rank(x, y) > 0 {
                sets.insert(
                    (x, y),
                    BTreeSet::from([vec![ring.zero(); a.hom_rank(x, y)]]),
                );
            }
        }
    }
    for (x, y, v) in gens {
        sets.get_mut(&(*x, *y)).unwrap().insert(v.clone());
    }
    loop {
        let mut changed = false;
        let snapshot = sets.clone();
        for (&(x, y), set) in &snapshot {
            for f in set {
                // Closure under addition.
                for g in snapshot.get(&(x, y)).unwrap() {
                    let sum: Vec<Scalar> = f
                        .iter()
                        .zip(g.iter())
                        .map(|(p, q)| ring.add(p, q))
                        .collect();
                    changed |= sets.get_mut(&(x, y)).unwrap().insert(sum);
                }
                // Left composition by every element.
                for yp in 0..nobj {
                    for l in hom_elements(y, yp) {
                        let lf = a.compose_vec(y, yp, &l, x, f);
                        if let Some(target) = sets.get_mut(&(x, yp)) {
                            changed |= target.insert(lf);
                        }
                    }
                }
                // Right composition by every element.
                for xp in 0..nobj {
                    for r in hom_elements(xp, x) {
                        let fr = a.compose_vec(x, y, f, xp, &r);
                        if let Some(target) = sets.get_mut(&(xp, y)) {
                            changed |= target.insert(fr);
                        }
                    }
                }
            }
        }
        if !changed {
            return sets;
        }
    }
}

fn ideal_matches_oracle(
    a: &PreadditiveCategory,
    ideal: &grmod::preadd::Ideal,
    oracle: &BTreeMap<(usize, usize), BTreeSet<Vec<Scalar>>>,
) -> bool {
    let ring = a.ring();
    for (&(x, y), set) in oracle {
        let comp = ideal.component(a, x, y);
        let size = matrix::subgroup_size(&ring, &comp).unwrap();
        if size != BigInt::from(set.len() as u64) {
            return false;
        }
        for v in set {
            if !matrix::row_member(&ring, &comp, v) {
                return false;
            }
        }
    }
    // No extra components outside the oracle's nonzero support.
    for (&(x, y), comp) in &ideal.components {
        let zero = vec![ring.zero(); a.hom_rank(x, y)];
        let nonzero_oracle = oracle
            .get(&(x, y))
            .map(|s| s.iter().any(|v| *v != zero))
            .unwrap_or(false);
        let nonzero_ideal = !comp.is_zero(&ring);
        if nonzero_ideal && !nonzero_oracle {
            return false;
        }
    }
    true
}

#[test]
fn criterion_6_ideal_calculus_against_brute_force() {
    let categories = [
        "preadd_a2_z2.json",
        "preadd_twoblock_z2.json",
        "preadd_point_z4.json",
    ];
    let mut checked = 0usize;
    for name in categories {
        let a = preadditive_from_str(&read(name)).unwrap();
        let total: usize = (0..a.objects().len())
            .flat_map(|x| (0..a.objects().len()).map(move |y| (x, y)))
            .map(|(x, y)| a.hom_rank(x, y))
            .sum();
        assert!(
            total <= 16,
            "criterion 6 precondition: {} has {} generators",
            name,
            total
        );
        // All single-basis generator choices, plus the full set.
        let mut gen_sets: Vec<Vec<(usize, usize, Vec<Scalar>)>> = Vec::new();
        let mut everything = Vec::new();
        for x in 0..a.objects().len() {
            for y in 0..a.objects().len() {
                for k in 0..a.hom_rank(x, y) {
                    gen_sets.push(vec![(x, y, a.basis_vec(x, y, k))]);
                    everything.push((x, y, a.basis_vec(x, y, k)));
                }
            }
        }
        gen_sets.push(everything);
        gen_sets.push(Vec::new());
        for gens in &gen_sets {
            let ideal = ideal_generated(&a, gens);
            let oracle = oracle_ideal(&a, gens);
            assert!(
                ideal_matches_oracle(&a, &ideal, &oracle),
                "criterion 6 FAIL: {} ideal_generated disagrees with the closure oracle for {:?}",
                name,
                gens.iter().map(|(x, y, _)| (x, y)).collect::<Vec<_>>()
            );
            checked += 1;
            // Product against the oracle: I·I elementwise.
            let square = ideal_product(&a, &ideal, &ideal);
            let mut product_gens = Vec::new();
            for (&(z, y), gm) in &ideal.components {
                for gi in 0..gm.rows() {
                    for (&(x, z2), fm) in &ideal.components {
                        if z2 != z {
                            continue;
                        }
                        for fi in 0..fm.rows() {
                            let prod = a.compose_vec(z, y, gm.row(gi), x, fm.row(fi));
                            product_gens.push((x, y, prod));
                        }
                    }
                }
            }
            let product_oracle = oracle_ideal(&a, &product_gens);
            assert!(
                ideal_matches_oracle(&a, &square, &product_oracle),
                "criterion 6 FAIL: {} ideal_product disagrees with the closure oracle",
                name
            );
            checked += 1;
        }
    }
    println!(
        "acceptance criterion 6: PASS — ideal_generated and ideal_product agree exactly with the brute-force subgroup-closure oracle ({} comparisons)",
        checked
    );
}

#[test]
fn criterion_7_topology_axioms_and_deletion_mutants() {
    let a2 = preadditive_from_str(&read("preadd_a2_z2.json")).unwrap();
    let lists: Vec<Vec<Subfunctor>> = (0..a2.objects().len())
        .map(|x| enumerate_subfunctors(&a2, x, 1 << 16).unwrap())
        .collect();
    let maximal = TopologyCandidate {
        lists: lists.clone(),
    };
    let report = check_linear_topology(&a2, &maximal).expect("check runs");
    assert!(
        report.passed(),
        "criterion 7 FAIL: maximal candidate rejected: {}",
        report
    );
    let mut mutants = 0usize;
    for x in 0..lists.len() {
        for k in 0..lists[x].len() {
            let mut mutant_lists = lists.clone();
            mutant_lists[x].remove(k);
            let mutant = TopologyCandidate {
                lists: mutant_lists,
            };
            let report = check_linear_topology(&a2, &mutant).expect("check runs");
            assert!(
                !report.passed(),
                "criterion 7 FAIL: deleting J({})[{}] still passes",
                x,
                k
            );
            mutants += 1;
        }
    }
    assert_eq!(mutants, 5, "criterion 7 expects 5 single-deletion mutants");
    println!(
        "acceptance criterion 7: PASS — the maximal candidate passes and all {} single-deletion mutants fail, exhaustively over A₂ on Z/2",
        mutants
    );
}

#[test]
fn criterion_8_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_grmod");
    let tmp = tempfile::tempdir().unwrap();
    let win = tmp.path().join("win.json");
    // Pre-build a window file for the preadditive commands.
    let status = Command::new(bin)
        .current_dir(corpus())
        .args([
            "p-window",
            "--rep",
            "rep_arrow_z2.json",
            "--pairs",
            "0:w@0,1:w@0",
            "-o",
            win.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let win = win.to_str().unwrap();

    // A Gr(R)-side module file for psi, kept outside the corpus directory.
    let gr_module = tmp.path().join("gr_module.json");
    let out = Command::new(bin)
        .current_dir(corpus())
        .args([
            "phi",
            "mod_arrow_z2_simple.json",
            "--rep",
            "rep_arrow_z2.json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    std::fs::write(&gr_module, &out.stdout).unwrap();
    let gr_module_path = gr_module.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", "rep_point_diskend_q.json"],
        vec![
            "validate",
            "mod_loop_twisted_sign.json",
            "--rep",
            "rep_loop_twisted_z.json",
        ],
        vec!["groth", "rep_loop_twisted_z.json"],
        vec![
            "check-module",
            "mod_arrow_z2_simple.json",
            "--rep",
            "rep_arrow_z2.json",
        ],
        vec![
            "phi",
            "mod_arrow_z2_simple.json",
            "--rep",
            "rep_arrow_z2.json",
        ],
        vec!["psi", gr_module_path, "--rep", "rep_arrow_z2.json"],
        vec![
            "roundtrip",
            "rep_point_diskend_q.json",
            "mod_point_diskend_dual.json",
        ],
        vec![
            "generator",
            "--rep",
            "rep_arrow_z2.json",
            "--object",
            "1:w",
            "--degree",
            "0",
        ],
        vec![
            "generates",
            "mod_arrow_z2_simple.json",
            "--rep",
            "rep_arrow_z2.json",
            "--window",
            "-3:3",
        ],
        vec![
            "p-window",
            "--rep",
            "rep_arrow_z2.json",
            "--pairs",
            "0:w@0,1:w@0",
        ],
        vec!["center", win],
        vec!["idempotents", win],
        vec!["ideal", "preadd_a2_z2.json", "--gens", "0->1@a", "--square"],
        vec![
            "topology-check",
            "preadd_a2_z2.json",
            "topology_a2_maximal.json",
        ],
        vec![
            "ttf-check",
            "preadd_twoblock_z2.json",
            "--samples",
            "sample_twoblock_x.json",
            "sample_twoblock_y.json",
            "sample_twoblock_xy.json",
        ],
    ];
    for args in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "2", "4"] {
            let out = Command::new(bin)
                .current_dir(corpus())
                .env("RAYON_NUM_THREADS", threads)
                .args(args)
                .output()
                .unwrap();
            assert!(
                out.status.success(),
                "criterion 8 FAIL: {:?} exited {:?}: {}",
                args,
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(out.stdout);
        }
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "criterion 8 FAIL: {:?} output varies across thread counts",
            args
        );
    }
    println!(
        "acceptance criterion 8: PASS — all {} CLI commands are byte-reproducible across runs and thread counts",
        commands.len()
    );
}

/// The window category and all corpus constructions are immutable values;
/// a final structural sweep ties the suite together.
#[test]
fn acceptance_summary_artifacts_are_well_formed() {
    for (rep_name, _) in REPS {
        let rep = load_rep(rep_name);
        let gr = grothendieck(rep).expect("Gr(R) builds");
        assert!(gr.category().objects().len() >= 1 || rep_name.contains("empty"));
    }
    // Degenerate base: the empty category is accepted and Gr is empty.
    let empty = grmod::category::FiniteCategory::new(vec![], vec![], BTreeMap::new(), vec![])
        .expect("empty base");
    let rep = DgRepresentation::new(empty, vec![], vec![], vec![], BTreeMap::new())
        .expect("empty representation");
    let gr = grothendieck(rep).expect("empty Gr builds");
    assert_eq!(gr.category().objects().len(), 0);
    let _: &Arc<DgCategory> = gr.category();
    let _: Complex = Complex::zero(Ring::Int);
    println!("acceptance: corpus artifacts well-formed (including the empty base)");
}
