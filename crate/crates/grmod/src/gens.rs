//! Projective generators `G_{ix,n} = Gr(R)(-, ix) ⊘ Dⁿ(k)`, the adjunction
//! identifying maps out of a generator with elements of `M(ix)^{n-1}`,
//! generation checking over a finite degree window, and finite hom-windows
//! of the generator category as preadditive categories.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcat::{BasisRef, DgCategory};
use crate::dgmod::{DgModule, DgModuleMap};
use crate::error::Error;
use crate::graded::{disk, tensor, tensor_basis_pairs, Complex};
use crate::matrix::{self, Matrix};
use crate::preadd::PreadditiveCategory;
use crate::report::Report;
use crate::ring::Scalar;

/// The representable right module at an object: `value(y) = hom(y, at)`
/// with the signed precomposition action `h ↦ (-1)^{|f||h|} h∘f`.
pub fn representable_over(cat: Arc<DgCategory>, at: usize) -> DgModule {
    let ring = cat.ring();
    let values: Vec<Complex> = (0..cat.objects().len())
        .map(|y| {
            cat.hom(y, at)
                .cloned()
                .unwrap_or_else(|| Complex::zero(ring))
        })
        .collect();
    let mut actions = BTreeMap::new();
    for f in cat.all_basis() {
        // action(f): hom(f.tgt, at) -> hom(f.src, at).
        let (y, z, p) = (f.src, f.tgt, f.degree);
        let mut by = BTreeMap::new();
        for n in values[z].support() {
            let rows = values[y].rank(n + p);
            let cols = values[z].rank(n);
            if rows * cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(&ring, rows, cols);
            for k in 0..cols {
                let h = cat.basis_elt(BasisRef {
                    src: z,
                    tgt: at,
                    degree: n,
                    index: k,
                });
                let mut hf = cat.elt_compose(&h, &cat.basis_elt(f));
                if (p * n).rem_euclid(2) == 1 {
                    hf = cat.elt_neg(&hf);
                }
                if let Some(vec) = hf.coeffs.get(&(n + p)) {
                    for (i, c) in vec.iter().enumerate() {
                        m.set(i, k, c.clone());
                    }
                }
            }
            if !m.is_zero(&ring) {
                by.insert(n, m);
            }
        }
        if !by.is_empty() {
            actions.insert(f, by);
        }
    }
    DgModule::new(cat, values, actions).expect("representable shapes are consistent")
}

/// Objectwise tensor with a complex: `value(y) = F(y) ⊗ V`, action
/// `action_F(f) ⊗ id_V`. With `V` on the right the Koszul rule produces no
/// sign here (the `(-1)^{|u|}` twist lives in the tensor differential);
/// this is the unique action satisfying the dg-module axioms.
pub fn oslash(f: &DgModule, v: &Complex) -> DgModule {
    let cat = f.cat().clone();
    let ring = f.ring();
    let values: Vec<Complex> = (0..cat.objects().len())
        .map(|y| tensor(f.value(y), v))
        .collect();
    let mut actions = BTreeMap::new();
    for b in cat.all_basis() {
        let (y, z, p) = (b.src, b.tgt, b.degree);
        let mut by = BTreeMap::new();
        for n in values[z].support() {
            let src_pairs = tensor_basis_pairs(f.value(z), v, n);
            let tgt_pairs = tensor_basis_pairs(f.value(y), v, n + p);
            if src_pairs.is_empty() || tgt_pairs.is_empty() {
                continue;
            }
            let tgt_index: BTreeMap<(i64, usize, usize), usize> = tgt_pairs
                .iter()
                .copied()
                .enumerate()
                .map(|(k, t)| (t, k))
                .collect();
            let mut mat = Matrix::zero(&ring, tgt_pairs.len(), src_pairs.len());
            for (col, &(m, i, j)) in src_pairs.iter().enumerate() {
                let act = f.action_matrix(b, m);
                for ti in 0..act.rows() {
                    let c = act.get(ti, i);
                    if ring.is_zero(c) {
                        continue;
                    }
                    if let Some(&row) = tgt_index.get(&(m + p, ti, j)) {
                        mat.set(row, col, ring.add(mat.get(row, col), c));
                    }
                }
            }
            if !mat.is_zero(&ring) {
                by.insert(n, mat);
            }
        }
        if !by.is_empty() {
            actions.insert(b, by);
        }
    }
    DgModule::new(cat, values, actions).expect("tensor action shapes are consistent")
}

/// The projective generator `G_{at,n} = hom(-, at) ⊘ Dⁿ(k)`.
pub fn generator(cat: Arc<DgCategory>, at: usize, n: i64) -> DgModule {
    let ring = cat.ring();
    let repr = representable_over(cat, at);
    oslash(&repr, &disk(ring, n))
}

/// The module map `G_{at,n} -> M` corresponding to `ξ ∈ M(at)^{n-1}` under
/// the disk/representable adjunction: `g⊗e ↦ act(g)(ξ)` and
/// `g⊗f ↦ act(g)(dξ)` (no signs: `g⊗e = action_G(g)(1⊗e)` on the nose).
pub fn generator_map(
    cat: &Arc<DgCategory>,
    at: usize,
    n: i64,
    m: &DgModule,
    xi: &[Scalar],
) -> DgModuleMap {
    let ring = cat.ring();
    assert_eq!(xi.len(), m.value(at).rank(n - 1), "ξ coordinate length");
    let dxi = m.value(at).differential(n - 1).apply(xi, &ring);
    let dsk = disk(ring, n);
    let mut components = Vec::new();
    for y in 0..cat.objects().len() {
        let hom = cat
            .hom(y, at)
            .cloned()
            .unwrap_or_else(|| Complex::zero(ring));
        let mut by: BTreeMap<i64, Matrix> = BTreeMap::new();
        let supports: std::collections::BTreeSet<i64> =
            hom.support().flat_map(|p| [p + n - 1, p + n]).collect();
        for t in supports {
            let src_pairs = tensor_basis_pairs(&hom, &dsk, t);
            let rows = m.value(y).rank(t);
            if src_pairs.is_empty() || rows == 0 {
                continue;
            }
            let mut mat = Matrix::zero(&ring, rows, src_pairs.len());
            for (col, &(p, i, _)) in src_pairs.iter().enumerate() {
                let g = BasisRef {
                    src: y,
                    tgt: at,
                    degree: p,
                    index: i,
                };
                let vdeg = t - p; // n-1 for the e part, n for the f part
                let (input, vec): (i64, &[Scalar]) = if vdeg == n - 1 {
                    (n - 1, xi)
                } else {
                    (n, &dxi)
                };
                let act = m.action_matrix(g, input);
                let out = act.apply(vec, &ring);
                for (r, c) in out.iter().enumerate() {
                    mat.set(r, col, c.clone());
                }
            }
            if !mat.is_zero(&ring) {
                by.insert(t, mat);
            }
        }
        components.push(by);
    }
    DgModuleMap { components }
}

/// Does the evaluation from finite sums of generators reach every basis
/// element of `m` inside the window? The image at `(y, t)` is spanned by
/// `act(g)(ξ)` and `act(g)(dξ)` over all objects `w`, all `ξ` basis
/// elements of `M(w)^s` with `s` in the window, and all hom basis `g`.
pub fn check_generates(
    cat: &Arc<DgCategory>,
    m: &DgModule,
    window: (i64, i64),
) -> Result<Report, Error> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::structural(format!("window {}:{} is empty", lo, hi)));
    }
    if hi - lo > 256 {
        return Err(Error::refusal("window wider than 256 degrees"));
    }
    let ring = cat.ring();
    let mut report = Report::new("generation");
    for y in 0..cat.objects().len() {
        for t in lo..=hi {
            let rank = m.value(y).rank(t);
            if rank == 0 {
                continue;
            }
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for w in 0..cat.objects().len() {
                for s in lo..=hi {
                    if m.value(w).rank(s) == 0 {
                        continue;
                    }
                    // Route through ξ ⊗ e: act(g) for |g| = t - s.
                    for i in 0..cat.hom_rank(y, w, t - s) {
                        let g = BasisRef {
                            src: y,
                            tgt: w,
                            degree: t - s,
                            index: i,
                        };
                        let act = m.action_matrix(g, s);
                        for j in 0..act.cols() {
                            rows.push(act.col_vec(j));
                        }
                    }
                    // Route through ξ ⊗ f: act(g)(dξ) for |g| = t - s - 1.
                    let d = m.value(w).differential(s);
                    for i in 0..cat.hom_rank(y, w, t - s - 1) {
                        let g = BasisRef {
                            src: y,
                            tgt: w,
                            degree: t - s - 1,
                            index: i,
                        };
                        let act = m.action_matrix(g, s + 1).mul(&d, &ring);
                        for j in 0..act.cols() {
                            rows.push(act.col_vec(j));
                        }
                    }
                }
            }
            let span = if rows.is_empty() {
                Matrix::zero(&ring, 0, rank)
            } else {
                Matrix::from_rows(rows).expect("rectangular")
            };
            for k in 0..rank {
                let mut e = vec![ring.zero(); rank];
                e[k] = ring.one();
                if !matrix::row_member(&ring, &span, &e) {
                    report.fail(
                        "generation",
                        format!(
                            "basis element {} of M({})^{} is outside the evaluation image",
                            k,
                            cat.objects()[y],
                            t
                        ),
                    );
                }
            }
        }
    }
    report.sort();
    Ok(report)
}

/// A finite window of the generator category: objects are `(object, n)`
/// pairs, homs are the adjunction modules `G_{jy,m}(ix)^{n-1}`, composition
/// is module-map composition through the adjunction.
pub struct PWindow {
    pub category: PreadditiveCategory,
    pub pairs: Vec<(usize, i64)>,
    pub generators: Vec<DgModule>,
}

pub fn p_window(cat: &Arc<DgCategory>, pairs: &[(usize, i64)]) -> Result<PWindow, Error> {
    let ring = cat.ring();
    let dedup: std::collections::BTreeSet<(usize, i64)> = pairs.iter().copied().collect();
    if dedup.len() != pairs.len() {
        return Err(Error::structural("duplicate (object, n) pair in window"));
    }
    for &(o, _) in pairs {
        if o >= cat.objects().len() {
            return Err(Error::structural("window pair references unknown object"));
        }
    }
    let generators: Vec<DgModule> = pairs
        .iter()
        .map(|&(o, n)| generator(cat.clone(), o, n))
        .collect();
    let objects: Vec<String> = pairs
        .iter()
        .map(|&(o, n)| format!("{}@{}", cat.objects()[o], n))
        .collect();
    // Hom basis for (o1, n1) -> (o2, n2): the basis of G_{o2,n2}(o1)^{n1-1}.
    let mut homs = BTreeMap::new();
    for (w1, &(o1, n1)) in pairs.iter().enumerate() {
        for (w2, _) in pairs.iter().enumerate() {
            let value = generators[w2].value(o1);
            let labels: Vec<String> = value.grading().labels(n1 - 1).to_vec();
            if labels.is_empty() {
                continue;
            }
            homs.insert((w1, w2), Complex::concentrated(ring, 0, labels));
        }
    }
    // Composition: t∘s = (the map of t) evaluated at s's element.
    let mut compose = BTreeMap::new();
    for (w1, &(o1, n1)) in pairs.iter().enumerate() {
        for (w2, &(o2, n2)) in pairs.iter().enumerate() {
            let s_rank = generators[w2].value(o1).rank(n1 - 1);
            for (w3, _) in pairs.iter().enumerate() {
                let t_rank = generators[w3].value(o2).rank(n2 - 1);
                let out_rank = generators[w3].value(o1).rank(n1 - 1);
                if s_rank * t_rank == 0 {
                    continue;
                }
                for ti in 0..t_rank {
                    let mut xi = vec![ring.zero(); t_rank];
                    xi[ti] = ring.one();
                    let h = generator_map(cat, o2, n2, &generators[w3], &xi);
                    let hmat = h.components[o1]
                        .get(&(n1 - 1))
                        .cloned()
                        .unwrap_or_else(|| Matrix::zero(&ring, out_rank, s_rank));
                    for si in 0..s_rank {
                        let col = hmat.col_vec(si);
                        if col.iter().any(|c| !ring.is_zero(c)) {
                            compose.insert(
                                (
                                    BasisRef {
                                        src: w2,
                                        tgt: w3,
                                        degree: 0,
                                        index: ti,
                                    },
                                    BasisRef {
                                        src: w1,
                                        tgt: w2,
                                        degree: 0,
                                        index: si,
                                    },
                                ),
                                col,
                            );
                        }
                    }
                }
            }
        }
    }
    // Identities: 1_{o} ⊗ e at the Kronecker position.
    let mut identities = Vec::new();
    for (w, &(o, n)) in pairs.iter().enumerate() {
        let hom = cat
            .hom(o, o)
            .cloned()
            .unwrap_or_else(|| Complex::zero(ring));
        let pairs_on = tensor_basis_pairs(&hom, &disk(ring, n), n - 1);
        let id_index = cat.identity_ref(o).index;
        let pos = pairs_on
            .iter()
            .position(|&(p, i, _)| p == 0 && i == id_index)
            .ok_or_else(|| Error::structural("identity basis element missing from window hom"))?;
        identities.push(BasisRef {
            src: w,
            tgt: w,
            degree: 0,
            index: pos,
        });
    }
    let dg = DgCategory::new(ring, objects, homs, compose, identities)?;
    let category = PreadditiveCategory::new(Arc::new(dg))?;
    Ok(PWindow {
        category,
        pairs: pairs.to_vec(),
        generators,
    })
}



#[cfg(test)]
mod window_hom_tests {
    use super::*;
    use crate::dgmod::module_hom_space;
    use crate::gr::grothendieck;
    use crate::ring::Ring;
    use crate::testutil::*;

    #[test]
    fn window_hom_ranks_equal_brute_force_hom_spaces() {
        // The adjunction says hom((o1,n1), (o2,n2)) in the window is the
        // whole space of degree-0 closed maps G_{o1,n1} -> G_{o2,n2};
        // the brute-force linear solver must agree on every pair.
        for rep in [
            trivial_rep(disk_end_cat(Ring::Rat)),
            arrow_strict_rep(Ring::Mod(2)),
        ] {
            let gr = grothendieck(rep).unwrap();
            let cat = gr.category();
            let mut pairs = Vec::new();
            for o in 0..cat.objects().len() {
                for n in 0..2 {
                    pairs.push((o, n));
                }
            }
            let w = p_window(cat, &pairs).unwrap();
            for (w1, _) in pairs.iter().enumerate() {
                for (w2, _) in pairs.iter().enumerate() {
                    let space = module_hom_space(&w.generators[w1], &w.generators[w2]);
                    let declared = w.category.hom_rank(w1, w2);
                    match cat.ring() {
                        Ring::Mod(q) => {
                            let brute = crate::matrix::subgroup_size(&cat.ring(), &space.solutions)
                                .unwrap();
                            let expected = num::BigInt::from(q).pow(declared as u32);
                            assert_eq!(brute, expected, "pair ({}, {})", w1, w2);
                        }
                        _ => {
                            assert_eq!(space.solutions.rows(), declared, "pair ({}, {})", w1, w2);
                        }
                    }
                }
            }
        }
    }
}
