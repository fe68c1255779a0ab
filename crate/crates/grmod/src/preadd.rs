//! Preadditive categories at desk scale: hom groups are free modules over
//! the ground ring with bilinear composition, realized as dg-categories
//! concentrated in degree 0. Ideals, subfunctors of representables, and the
//! linear Grothendieck topology axioms live here.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcat::{check_dg_category, BasisRef, DgCategory, HomElt};
use crate::error::Error;
use crate::matrix::{self, Matrix};
use crate::report::Report;
use crate::ring::{Ring, Scalar};

/// A small preadditive category: a dg-category concentrated in degree 0
/// with zero differentials.
#[derive(Debug, Clone, PartialEq)]
pub struct PreadditiveCategory {
    cat: Arc<DgCategory>,
}

impl PreadditiveCategory {
    pub fn new(cat: Arc<DgCategory>) -> Result<PreadditiveCategory, Error> {
        for (&(x, y), c) in cat.homs() {
            for n in c.support() {
                if n != 0 {
                    return Err(Error::structural(format!(
                        "hom({}, {}) has a nonzero degree {}; preadditive categories are degree-0",
                        cat.objects()[x],
                        cat.objects()[y],
                        n
                    )));
                }
            }
            if !c.differential(0).is_zero(&cat.ring()) || !c.differential(-1).is_zero(&cat.ring()) {
                return Err(Error::structural("preadditive homs carry no differential"));
            }
        }
        Ok(PreadditiveCategory { cat })
    }

    pub fn cat(&self) -> &Arc<DgCategory> {
        &self.cat
    }

    pub fn ring(&self) -> Ring {
        self.cat.ring()
    }

    pub fn objects(&self) -> &[String] {
        self.cat.objects()
    }

    pub fn hom_rank(&self, x: usize, y: usize) -> usize {
        self.cat.hom_rank(x, y, 0)
    }

    /// Coefficient vector of `g ∘ f` for elements given by coefficient
    /// vectors over the degree-0 bases.
    pub fn compose_vec(
        &self,
        y: usize,
        z: usize,
        g: &[Scalar],
        x: usize,
        f: &[Scalar],
    ) -> Vec<Scalar> {
        let ge = self.elt(y, z, g);
        let fe = self.elt(x, y, f);
        let out = self.cat.elt_compose(&ge, &fe);
        self.vec_of(&out, x, z)
    }

    pub fn elt(&self, x: usize, y: usize, coeffs: &[Scalar]) -> HomElt {
        assert_eq!(coeffs.len(), self.hom_rank(x, y), "coefficient length");
        let mut m = BTreeMap::new();
        if !coeffs.is_empty() {
            m.insert(0, coeffs.to_vec());
        }
        HomElt {
            src: x,
            tgt: y,
            coeffs: m,
        }
    }

    pub fn vec_of(&self, e: &HomElt, x: usize, y: usize) -> Vec<Scalar> {
        e.coeffs
            .get(&0)
            .cloned()
            .unwrap_or_else(|| vec![self.ring().zero(); self.hom_rank(x, y)])
    }

    pub fn basis_vec(&self, x: usize, y: usize, index: usize) -> Vec<Scalar> {
        let mut v = vec![self.ring().zero(); self.hom_rank(x, y)];
        v[index] = self.ring().one();
        v
    }

    /// Matrix of left composition `g ↦ f∘g : hom(z, y) -> hom(z, x)`
    /// wait-free: columns are `f ∘ e_k`.
    pub fn postcompose_matrix(&self, f_src: usize, f_tgt: usize, f: &[Scalar], z: usize) -> Matrix {
        let (y, x) = (f_src, f_tgt);
        let cols = self.hom_rank(z, y);
        let rows = self.hom_rank(z, x);
        Matrix::from_fn(rows, cols, |i, k| {
            let col = self.compose_vec(y, x, f, z, &self.basis_vec(z, y, k));
            col[i].clone()
        })
    }

    pub fn identity_vec(&self, x: usize) -> Vec<Scalar> {
        let id = self.cat.identity_ref(x);
        self.basis_vec(x, x, id.index)
    }
}

/// Category axioms for the preadditive presentation.
pub fn check_preadditive(a: &PreadditiveCategory) -> Result<Report, Error> {
    check_dg_category(a.cat())
}

/// A two-sided ideal: a canonical submodule of every hom group, closed
/// under composition on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Ideal {
    /// Canonical row generators of the component at each `(x, y)`;
    /// absent pairs are zero.
    pub components: BTreeMap<(usize, usize), Matrix>,
}

impl Ideal {
    pub fn zero() -> Ideal {
        Ideal {
            components: BTreeMap::new(),
        }
    }

    /// The whole hom bifunctor.
    pub fn whole(a: &PreadditiveCategory) -> Ideal {
        let mut components = BTreeMap::new();
        for x in 0..a.objects().len() {
            for y in 0..a.objects().len() {
                let r = a.hom_rank(x, y);
                if r > 0 {
                    components.insert(
                        (x, y),
                        matrix::row_canonical(&a.ring(), &Matrix::identity(&a.ring(), r)),
                    );
                }
            }
        }
        Ideal { components }
    }

    pub fn component(&self, a: &PreadditiveCategory, x: usize, y: usize) -> Matrix {
        self.components
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&a.ring(), 0, a.hom_rank(x, y)))
    }

    pub fn contains(&self, a: &PreadditiveCategory, x: usize, y: usize, v: &[Scalar]) -> bool {
        matrix::row_member(&a.ring(), &self.component(a, x, y), v)
    }

    fn canonicalize(mut self, a: &PreadditiveCategory) -> Ideal {
        let ring = a.ring();
        let mut out = BTreeMap::new();
        for ((x, y), m) in std::mem::take(&mut self.components) {
            let canon = matrix::row_canonical(&ring, &m);
            if !canon.is_zero(&ring) {
                out.insert((x, y), canon);
            }
        }
        Ideal { components: out }
    }
}

/// The two-sided ideal generated by a set of elements, by closure
/// iteration to a fixed point.
pub fn ideal_generated(a: &PreadditiveCategory, gens: &[(usize, usize, Vec<Scalar>)]) -> Ideal {
    let ring = a.ring();
    let mut rows: BTreeMap<(usize, usize), Vec<Vec<Scalar>>> = BTreeMap::new();
    for (x, y, v) in gens {
        assert_eq!(v.len(), a.hom_rank(*x, *y), "generator coefficient length");
        rows.entry((*x, *y)).or_default().push(v.clone());
    }
    let mut current = Ideal {
        components: rows
            .into_iter()
            .map(|(k, r)| (k, Matrix::from_rows(r).expect("rectangular")))
            .collect(),
    }
    .canonicalize(a);
    loop {
        let mut next_rows: BTreeMap<(usize, usize), Vec<Vec<Scalar>>> = BTreeMap::new();
        for (&(x, y), m) in &current.components {
            for r in 0..m.rows() {
                let f = m.row_vec(r);
                next_rows.entry((x, y)).or_default().push(f.clone());
                // Left composition by every basis morphism l: y -> y'.
                for yp in 0..a.objects().len() {
                    for k in 0..a.hom_rank(y, yp) {
                        let l = a.basis_vec(y, yp, k);
                        let lf = a.compose_vec(y, yp, &l, x, &f);
                        if lf.iter().any(|c| !ring.is_zero(c)) {
                            next_rows.entry((x, yp)).or_default().push(lf);
                        }
                    }
                }
                // Right composition by every basis morphism r: x' -> x.
                for xp in 0..a.objects().len() {
                    for k in 0..a.hom_rank(xp, x) {
                        let rr = a.basis_vec(xp, x, k);
                        let fr = a.compose_vec(x, y, &f, xp, &rr);
                        if fr.iter().any(|c| !ring.is_zero(c)) {
                            next_rows.entry((xp, y)).or_default().push(fr);
                        }
                    }
                }
            }
        }
        let next = Ideal {
            components: next_rows
                .into_iter()
                .map(|(k, r)| (k, Matrix::from_rows(r).expect("rectangular")))
                .collect(),
        }
        .canonicalize(a);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// The product ideal `(I · K)(x, y) = span{ g∘f : g ∈ I(z, y), f ∈ K(x, z) }`.
pub fn ideal_product(a: &PreadditiveCategory, i: &Ideal, k: &Ideal) -> Ideal {
    let ring = a.ring();
    let mut rows: BTreeMap<(usize, usize), Vec<Vec<Scalar>>> = BTreeMap::new();
    for (&(z, y), gm) in &i.components {
        for (&(x, z2), fm) in &k.components {
            if z2 != z {
                continue;
            }
            for gi in 0..gm.rows() {
                for fi in 0..fm.rows() {
                    let prod = a.compose_vec(z, y, gm.row(gi), x, fm.row(fi));
                    if prod.iter().any(|c| !ring.is_zero(c)) {
                        rows.entry((x, y)).or_default().push(prod);
                    }
                }
            }
        }
    }
    Ideal {
        components: rows
            .into_iter()
            .map(|(key, r)| (key, Matrix::from_rows(r).expect("rectangular")))
            .collect(),
    }
    .canonicalize(a)
}

pub fn is_idempotent(a: &PreadditiveCategory, i: &Ideal) -> bool {
    ideal_product(a, i, i) == *i
}

/// Is the component family closed under two-sided composition?
pub fn check_ideal(a: &PreadditiveCategory, i: &Ideal) -> Result<Report, Error> {
    let mut report = Report::new("ideal");
    for (&(x, y), m) in &i.components {
        for r in 0..m.rows() {
            let f = m.row_vec(r);
            for yp in 0..a.objects().len() {
                for k in 0..a.hom_rank(y, yp) {
                    let lf = a.compose_vec(y, yp, &a.basis_vec(y, yp, k), x, &f);
                    if !i.contains(a, x, yp, &lf) {
                        report.fail(
                            "left closure",
                            format!("l∘f escapes at ({}, {})", a.objects()[x], a.objects()[yp]),
                        );
                    }
                }
            }
            for xp in 0..a.objects().len() {
                for k in 0..a.hom_rank(xp, x) {
                    let fr = a.compose_vec(x, y, &f, xp, &a.basis_vec(xp, x, k));
                    if !i.contains(a, xp, y, &fr) {
                        report.fail(
                            "right closure",
                            format!("f∘r escapes at ({}, {})", a.objects()[xp], a.objects()[y]),
                        );
                    }
                }
            }
        }
    }
    report.sort();
    Ok(report)
}

/// A subfunctor of the representable at `at`: a submodule of every
/// `hom(y, at)`, closed under precomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Subfunctor {
    pub at: usize,
    /// Canonical row generators per source object; absent = zero.
    pub components: BTreeMap<usize, Matrix>,
}

impl Subfunctor {
    pub fn full(a: &PreadditiveCategory, at: usize) -> Subfunctor {
        let mut components = BTreeMap::new();
        for y in 0..a.objects().len() {
            let r = a.hom_rank(y, at);
            if r > 0 {
                components.insert(
                    y,
                    matrix::row_canonical(&a.ring(), &Matrix::identity(&a.ring(), r)),
                );
            }
        }
        Subfunctor { at, components }
    }

    pub fn zero(at: usize) -> Subfunctor {
        Subfunctor {
            at,
            components: BTreeMap::new(),
        }
    }

    pub fn component(&self, a: &PreadditiveCategory, y: usize) -> Matrix {
        self.components
            .get(&y)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&a.ring(), 0, a.hom_rank(y, self.at)))
    }

    pub fn canonicalize(mut self, a: &PreadditiveCategory) -> Subfunctor {
        let ring = a.ring();
        let mut out = BTreeMap::new();
        for (y, m) in std::mem::take(&mut self.components) {
            let canon = matrix::row_canonical(&ring, &m);
            if !canon.is_zero(&ring) {
                out.insert(y, canon);
            }
        }
        Subfunctor {
            at: self.at,
            components: out,
        }
    }

    pub fn contains(&self, a: &PreadditiveCategory, y: usize, v: &[Scalar]) -> bool {
        matrix::row_member(&a.ring(), &self.component(a, y), v)
    }

    /// Closure under precomposition by basis morphisms.
    pub fn is_closed(&self, a: &PreadditiveCategory) -> bool {
        let ring = a.ring();
        for (&y, m) in &self.components {
            for r in 0..m.rows() {
                let f = m.row_vec(r);
                for z in 0..a.objects().len() {
                    for k in 0..a.hom_rank(z, y) {
                        let fr = a.compose_vec(y, self.at, &f, z, &a.basis_vec(z, y, k));
                        if fr.iter().any(|c| !ring.is_zero(c)) && !self.contains(a, z, &fr) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Pullback of a subfunctor of `repr(x)` along an element `f: y -> x`:
/// per `z`, `{ g : f∘g ∈ S(z) }`.
pub fn pullback(a: &PreadditiveCategory, f_src: usize, f: &[Scalar], s: &Subfunctor) -> Subfunctor {
    let y = f_src;
    let x = s.at;
    let mut components = BTreeMap::new();
    for z in 0..a.objects().len() {
        let cols = a.hom_rank(z, y);
        if cols == 0 {
            continue;
        }
        let c = a.postcompose_matrix(y, x, f, z);
        let w = s.component(a, z);
        let pre = matrix::preimage(&a.ring(), &c, &w);
        components.insert(z, pre);
    }
    Subfunctor { at: y, components }.canonicalize(a)
}

/// A linear-topology candidate: finitely many subfunctors per object.
#[derive(Debug, Clone)]
pub struct TopologyCandidate {
    pub lists: Vec<Vec<Subfunctor>>,
}

impl TopologyCandidate {
    fn member(&self, a: &PreadditiveCategory, x: usize, s: &Subfunctor) -> bool {
        let canon = s.clone().canonicalize(a);
        self.lists[x]
            .iter()
            .any(|t| t.clone().canonicalize(a) == canon)
    }
}

/// Enumerate every subfunctor of the representable at `x`. Finite rings
/// only; refuses when the search exceeds `cap` candidate families.
pub fn enumerate_subfunctors(
    a: &PreadditiveCategory,
    x: usize,
    cap: u64,
) -> Result<Vec<Subfunctor>, Error> {
    let ring = a.ring();
    if !ring.is_finite() {
        return Err(Error::refusal(
            "subfunctor enumeration requires a finite ground ring Z/n",
        ));
    }
    // All submodules of each hom(y, x), as canonical forms: grow from the
    // zero submodule by adjoining single elements until the lattice of
    // canonical forms is exhausted.
    let mut per_object: Vec<Vec<Matrix>> = Vec::new();
    let mut total: u128 = 1;
    for y in 0..a.objects().len() {
        let r = a.hom_rank(y, x);
        let subs: Vec<Matrix> = if r == 0 {
            vec![Matrix::zero(&ring, 0, 0)]
        } else {
            let full = matrix::row_canonical(&ring, &Matrix::identity(&ring, r));
            let elements = matrix::enumerate_subgroup(&ring, &full, 1 << 12)
                .map_err(|_| Error::refusal("hom group too large for subfunctor enumeration"))?;
            let zero = matrix::row_canonical(&ring, &Matrix::zero(&ring, 0, r));
            let mut seen = std::collections::BTreeSet::new();
            let mut work = vec![zero];
            let mut found = Vec::new();
            while let Some(m) = work.pop() {
                if !seen.insert(m.clone()) {
                    continue;
                }
                if seen.len() as u64 > cap {
                    return Err(Error::refusal("too many submodules to enumerate"));
                }
                for e in &elements {
                    let row = Matrix::from_rows(vec![e.clone()]).expect("one row");
                    let bigger = matrix::row_canonical(&ring, &m.vstack(&row));
                    if !seen.contains(&bigger) {
                        work.push(bigger);
                    }
                }
                found.push(m);
            }
            found.sort();
            found
        };
        total = total.saturating_mul(subs.len() as u128);
        if total > cap as u128 {
            return Err(Error::refusal(
                "too many subfunctor candidates to enumerate",
            ));
        }
        per_object.push(subs);
    }
    // Cartesian product, filtered by precomposition closure.
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_object.len()];
    loop {
        let mut components = BTreeMap::new();
        for (y, subs) in per_object.iter().enumerate() {
            let m = &subs[idx[y]];
            if m.cols() > 0 && !m.is_zero(&ring) {
                components.insert(y, m.clone());
            }
        }
        let s = Subfunctor { at: x, components }.canonicalize(a);
        if s.is_closed(a) && !out.contains(&s) {
            out.push(s);
        }
        let mut k = per_object.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_object[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The three linear-Grothendieck-topology axioms. Subfunctor closure
/// violations are structural errors; axiom failures are reported with the
/// witnessing subfunctor index and morphism. Axiom (3) enumerates all
/// subfunctors and all elements of covering subfunctors, so it requires a
/// finite ground ring.
pub fn check_linear_topology(
    a: &PreadditiveCategory,
    j: &TopologyCandidate,
) -> Result<Report, Error> {
    if j.lists.len() != a.objects().len() {
        return Err(Error::structural("one subfunctor list per object required"));
    }
    for (x, list) in j.lists.iter().enumerate() {
        for (k, s) in list.iter().enumerate() {
            if s.at != x {
                return Err(Error::structural(format!(
                    "J({}) entry {} is a subfunctor at the wrong object",
                    a.objects()[x],
                    k
                )));
            }
            if !s.is_closed(a) {
                return Err(Error::structural(format!(
                    "J({}) entry {} is not closed under precomposition",
                    a.objects()[x],
                    k
                )));
            }
        }
    }
    let ring = a.ring();
    let mut report = Report::new("linear topology");
    // (1) the full representable is covering.
    for x in 0..a.objects().len() {
        if !j.member(a, x, &Subfunctor::full(a, x)) {
            report.fail(
                "axiom (1)",
                format!(
                    "Hom(-, {}) missing from J({})",
                    a.objects()[x],
                    a.objects()[x]
                ),
            );
        }
    }
    // (2) pullback stability along basis morphisms.
    for x in 0..a.objects().len() {
        for (k, s) in j.lists[x].iter().enumerate() {
            for y in 0..a.objects().len() {
                for b in 0..a.hom_rank(y, x) {
                    let f = a.basis_vec(y, x, b);
                    let pb = pullback(a, y, &f, s);
                    if !j.member(a, y, &pb) {
                        report.fail(
                            "axiom (2)",
                            format!(
                                "pullback of J({})[{}] along basis {} of hom({}, {}) not in J({})",
                                a.objects()[x],
                                k,
                                b,
                                a.objects()[y],
                                a.objects()[x],
                                a.objects()[y]
                            ),
                        );
                    }
                }
            }
        }
    }
    // (3) local character, over all subfunctors and all covering elements.
    if ring.is_finite() {
        for x in 0..a.objects().len() {
            let all = enumerate_subfunctors(a, x, 1 << 16)?;
            for (k1, s1) in j.lists[x].iter().enumerate() {
                for s2 in &all {
                    if j.member(a, x, s2) {
                        continue;
                    }
                    let mut premise = true;
                    'outer: for y in 0..a.objects().len() {
                        let comp = s1.component(a, y);
                        if comp.cols() == 0 {
                            continue;
                        }
                        let elements = matrix::enumerate_subgroup(&ring, &comp, 1 << 12)
                            .map_err(|_| Error::refusal("covering subfunctor too large"))?;
                        for f in elements {
                            let pb = pullback(a, y, &f, s2);
                            if !j.member(a, y, &pb) {
                                premise = false;
                                break 'outer;
                            }
                        }
                    }
                    if premise {
                        report.fail(
                            "axiom (3)",
                            format!(
                                "subfunctor of Hom(-, {}) covered through J({})[{}] but not listed",
                                a.objects()[x],
                                a.objects()[x],
                                k1
                            ),
                        );
                    }
                }
            }
        }
    } else {
        return Err(Error::refusal(
            "axiom (3) requires enumerating subfunctor elements; use a finite ground ring Z/n",
        ));
    }
    report.sort();
    Ok(report)
}

/// A `BasisRef` into a preadditive hom, degree 0.
pub fn pref(src: usize, tgt: usize, index: usize) -> BasisRef {
    BasisRef {
        src,
        tgt,
        degree: 0,
        index,
    }
}
