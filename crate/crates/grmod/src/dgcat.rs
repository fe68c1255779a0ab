//! Finite dg-categories presented by structure constants, dg-functors,
//! natural isomorphisms of dg-functors, and the opposite category.
//!
//! Hom complexes are [`Complex`]es; composition is bilinear, given on basis
//! elements by sparse structure constants; identities are distinguished
//! basis elements of degree 0.

use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Error;
use crate::graded::{check_complex, Complex};
use crate::matrix::Matrix;
use crate::report::{Failure, Report};
use crate::ring::{Ring, Scalar};

/// A basis element of `hom(src, tgt)` in a fixed degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisRef {
    pub src: usize,
    pub tgt: usize,
    pub degree: i64,
    pub index: usize,
}

/// An element of one hom complex: a graded family of coefficient vectors.
/// Zero vectors are never stored, so `==` is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomElt {
    pub src: usize,
    pub tgt: usize,
    pub coeffs: BTreeMap<i64, Vec<Scalar>>,
}

impl HomElt {
    pub fn zero(src: usize, tgt: usize) -> HomElt {
        HomElt {
            src,
            tgt,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degrees carrying a nonzero coefficient vector.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    fn normalize(mut self, ring: &Ring) -> HomElt {
        self.coeffs
            .retain(|_, v| v.iter().any(|c| !ring.is_zero(c)));
        self
    }
}

/// A finite dg-category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgCategory {
    ring: Ring,
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), Complex>,
    compose: BTreeMap<(BasisRef, BasisRef), Vec<Scalar>>,
    identities: Vec<BasisRef>,
}

impl DgCategory {
    pub fn new(
        ring: Ring,
        objects: Vec<String>,
        homs: BTreeMap<(usize, usize), Complex>,
        compose: BTreeMap<(BasisRef, BasisRef), Vec<Scalar>>,
        identities: Vec<BasisRef>,
    ) -> Result<DgCategory, Error> {
        let n = objects.len();
        {
            let mut seen = std::collections::BTreeSet::new();
            for o in &objects {
                if !seen.insert(o) {
                    return Err(Error::structural(format!("duplicate object label {:?}", o)));
                }
            }
        }
        for (&(x, y), c) in &homs {
            if x >= n || y >= n {
                return Err(Error::structural("hom pair references unknown object"));
            }
            if c.ring() != ring {
                return Err(Error::structural(format!(
                    "hom({}, {}) declared over {} but category is over {}",
                    objects[x],
                    objects[y],
                    c.ring(),
                    ring
                )));
            }
        }
        let homs: BTreeMap<(usize, usize), Complex> = homs
            .into_iter()
            .filter(|(_, c)| c.total_rank() > 0)
            .collect();
        let rank_of =
            |r: &BasisRef| -> Option<usize> { homs.get(&(r.src, r.tgt)).map(|c| c.rank(r.degree)) };
        for (&(g, f), vec) in &compose {
            let grank = rank_of(&g).unwrap_or(0);
            let frank = rank_of(&f).unwrap_or(0);
            if g.index >= grank || f.index >= frank {
                return Err(Error::structural(format!(
                    "structure constant references basis element out of range: ({:?}, {:?})",
                    g, f
                )));
            }
            if g.src != f.tgt {
                return Err(Error::structural(format!(
                    "structure constant for non-composable pair ({:?}, {:?})",
                    g, f
                )));
            }
            let target_rank = homs
                .get(&(f.src, g.tgt))
                .map_or(0, |c| c.rank(g.degree + f.degree));
            if vec.len() != target_rank {
                return Err(Error::structural(format!(
                    "structure constant for ({:?}, {:?}) has length {}, expected {}",
                    g,
                    f,
                    vec.len(),
                    target_rank
                )));
            }
        }
        let compose: BTreeMap<(BasisRef, BasisRef), Vec<Scalar>> = compose
            .into_iter()
            .filter(|(_, v)| v.iter().any(|c| !ring.is_zero(c)))
            .collect();
        if identities.len() != n {
            return Err(Error::structural(format!(
                "expected {} identities, got {}",
                n,
                identities.len()
            )));
        }
        for (x, id) in identities.iter().enumerate() {
            if id.src != x || id.tgt != x || id.degree != 0 {
                return Err(Error::structural(format!(
                    "identity of {:?} must be a degree-0 endomorphism basis element",
                    objects[x]
                )));
            }
            if id.index >= rank_of(id).unwrap_or(0) {
                return Err(Error::structural(format!(
                    "identity of {:?} references basis element out of range",
                    objects[x]
                )));
            }
        }
        Ok(DgCategory {
            ring,
            objects,
            homs,
            compose,
            identities,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn hom(&self, src: usize, tgt: usize) -> Option<&Complex> {
        self.homs.get(&(src, tgt))
    }

    pub fn homs(&self) -> &BTreeMap<(usize, usize), Complex> {
        &self.homs
    }

    pub fn hom_rank(&self, src: usize, tgt: usize, degree: i64) -> usize {
        self.hom(src, tgt).map_or(0, |c| c.rank(degree))
    }

    pub fn identity_ref(&self, x: usize) -> BasisRef {
        self.identities[x]
    }

    pub fn identity_elt(&self, x: usize) -> HomElt {
        self.basis_elt(self.identities[x])
    }

    pub fn structure_constants(&self) -> &BTreeMap<(BasisRef, BasisRef), Vec<Scalar>> {
        &self.compose
    }

    pub fn basis_elt(&self, r: BasisRef) -> HomElt {
        let rank = self.hom_rank(r.src, r.tgt, r.degree);
        assert!(r.index < rank, "basis ref out of range");
        let mut v = vec![self.ring.zero(); rank];
        v[r.index] = self.ring.one();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(r.degree, v);
        HomElt {
            src: r.src,
            tgt: r.tgt,
            coeffs,
        }
    }

    /// All basis elements of all hom complexes, in deterministic order.
    pub fn all_basis(&self) -> Vec<BasisRef> {
        let mut out = Vec::new();
        for (&(x, y), c) in &self.homs {
            for degree in c.support() {
                for index in 0..c.rank(degree) {
                    out.push(BasisRef {
                        src: x,
                        tgt: y,
                        degree,
                        index,
                    });
                }
            }
        }
        out
    }

    /// Composite of two basis elements as an element (zero when no constant
    /// is declared).
    pub fn compose_basis(&self, g: BasisRef, f: BasisRef) -> HomElt {
        assert_eq!(g.src, f.tgt, "non-composable basis pair");
        let mut coeffs = BTreeMap::new();
        if let Some(vec) = self.compose.get(&(g, f)) {
            coeffs.insert(g.degree + f.degree, vec.clone());
        }
        HomElt {
            src: f.src,
            tgt: g.tgt,
            coeffs,
        }
        .normalize(&self.ring)
    }

    /// Bilinear extension of composition to elements.
    pub fn elt_compose(&self, g: &HomElt, f: &HomElt) -> HomElt {
        assert_eq!(g.src, f.tgt, "non-composable elements");
        let mut acc: BTreeMap<i64, Vec<Scalar>> = BTreeMap::new();
        for (&q, gvec) in &g.coeffs {
            for (&p, fvec) in &f.coeffs {
                let out_rank = self.hom_rank(f.src, g.tgt, q + p);
                for (gi, gc) in gvec.iter().enumerate() {
                    if self.ring.is_zero(gc) {
                        continue;
                    }
                    for (fi, fc) in fvec.iter().enumerate() {
                        if self.ring.is_zero(fc) {
                            continue;
                        }
                        let key = (
                            BasisRef {
                                src: g.src,
                                tgt: g.tgt,
                                degree: q,
                                index: gi,
                            },
                            BasisRef {
                                src: f.src,
                                tgt: f.tgt,
                                degree: p,
                                index: fi,
                            },
                        );
                        if let Some(cvec) = self.compose.get(&key) {
                            let scale = self.ring.mul(gc, fc);
                            let entry = acc
                                .entry(q + p)
                                .or_insert_with(|| vec![self.ring.zero(); out_rank]);
                            for (k, c) in cvec.iter().enumerate() {
                                entry[k] = self.ring.add(&entry[k], &self.ring.mul(&scale, c));
                            }
                        }
                    }
                }
            }
        }
        HomElt {
            src: f.src,
            tgt: g.tgt,
            coeffs: acc,
        }
        .normalize(&self.ring)
    }

    pub fn elt_add(&self, a: &HomElt, b: &HomElt) -> HomElt {
        assert_eq!((a.src, a.tgt), (b.src, b.tgt), "sum of mismatched elements");
        let mut coeffs = a.coeffs.clone();
        for (&n, vec) in &b.coeffs {
            let rank = self.hom_rank(a.src, a.tgt, n);
            let entry = coeffs
                .entry(n)
                .or_insert_with(|| vec![self.ring.zero(); rank]);
            for (k, c) in vec.iter().enumerate() {
                entry[k] = self.ring.add(&entry[k], c);
            }
        }
        HomElt {
            src: a.src,
            tgt: a.tgt,
            coeffs,
        }
        .normalize(&self.ring)
    }

    pub fn elt_scale(&self, s: &Scalar, a: &HomElt) -> HomElt {
        let coeffs = a
            .coeffs
            .iter()
            .map(|(&n, vec)| (n, vec.iter().map(|c| self.ring.mul(s, c)).collect()))
            .collect();
        HomElt {
            src: a.src,
            tgt: a.tgt,
            coeffs,
        }
        .normalize(&self.ring)
    }

    pub fn elt_neg(&self, a: &HomElt) -> HomElt {
        self.elt_scale(&self.ring.neg(&self.ring.one()), a)
    }

    pub fn elt_sub(&self, a: &HomElt, b: &HomElt) -> HomElt {
        self.elt_add(a, &self.elt_neg(b))
    }

    /// Apply the hom-complex differential to an element.
    pub fn elt_d(&self, a: &HomElt) -> HomElt {
        let mut coeffs = BTreeMap::new();
        if let Some(c) = self.hom(a.src, a.tgt) {
            for (&n, vec) in &a.coeffs {
                let d = c.differential(n);
                if d.rows() == 0 {
                    continue;
                }
                let out = d.apply(vec, &self.ring);
                coeffs.insert(n + 1, out);
            }
        }
        HomElt {
            src: a.src,
            tgt: a.tgt,
            coeffs,
        }
        .normalize(&self.ring)
    }

    /// A human-readable name for a basis element.
    pub fn basis_name(&self, r: BasisRef) -> String {
        let label = self
            .hom(r.src, r.tgt)
            .map(|c| c.grading().labels(r.degree).get(r.index).cloned())
            .unwrap_or(None)
            .unwrap_or_else(|| format!("#{}", r.index));
        format!(
            "{}->{}[{}]{}",
            self.objects[r.src], self.objects[r.tgt], r.degree, label
        )
    }
}

/// Validates all dg-category axioms; exhaustive over basis elements.
pub fn check_dg_category(a: &DgCategory) -> Result<Report, Error> {
    let mut report = Report::new("dg-category");
    for (&(x, y), c) in &a.homs {
        let sub = check_complex(c)?;
        report.absorb(&format!("hom({}, {})", a.objects[x], a.objects[y]), sub);
    }

    let basis = a.all_basis();

    // Identities: closed, and two-sided units on every basis element.
    for (x, _) in a.objects.iter().enumerate() {
        let id = a.identity_elt(x);
        if !a.elt_d(&id).is_zero() {
            report.fail("identity closed", format!("d(1_{}) ≠ 0", a.objects[x]));
        }
    }
    let unit_failures: Vec<Failure> = basis
        .par_iter()
        .flat_map_iter(|&f| {
            let mut fails = Vec::new();
            let felt = a.basis_elt(f);
            let left = a.elt_compose(&a.identity_elt(f.tgt), &felt);
            if left != felt {
                fails.push(Failure {
                    axiom: "left unit".into(),
                    witness: format!("1∘{} ≠ {}", a.basis_name(f), a.basis_name(f)),
                });
            }
            let right = a.elt_compose(&felt, &a.identity_elt(f.src));
            if right != felt {
                fails.push(Failure {
                    axiom: "right unit".into(),
                    witness: format!("{}∘1 ≠ {}", a.basis_name(f), a.basis_name(f)),
                });
            }
            fails
        })
        .collect();
    report.failures.extend(unit_failures);

    // Associativity on all composable basis triples.
    let pairs: Vec<(BasisRef, BasisRef)> = basis
        .iter()
        .flat_map(|&g| {
            basis
                .iter()
                .filter(move |f| g.src == f.tgt)
                .map(move |&f| (g, f))
        })
        .collect();
    let assoc_failures: Vec<Failure> = pairs
        .par_iter()
        .flat_map_iter(|&(g, f)| {
            basis
                .iter()
                .filter(move |h| h.src == g.tgt)
                .filter_map(move |&h| {
                    let hg = a.elt_compose(&a.basis_elt(h), &a.basis_elt(g));
                    let gf = a.elt_compose(&a.basis_elt(g), &a.basis_elt(f));
                    let lhs = a.elt_compose(&hg, &a.basis_elt(f));
                    let rhs = a.elt_compose(&a.basis_elt(h), &gf);
                    (lhs != rhs).then(|| Failure {
                        axiom: "associativity".into(),
                        witness: format!(
                            "({}∘{})∘{} ≠ {}∘({}∘{})",
                            a.basis_name(h),
                            a.basis_name(g),
                            a.basis_name(f),
                            a.basis_name(h),
                            a.basis_name(g),
                            a.basis_name(f)
                        ),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    report.failures.extend(assoc_failures);

    // Leibniz on all composable basis pairs.
    let leibniz_failures: Vec<Failure> = pairs
        .par_iter()
        .filter_map(|&(g, f)| {
            let gelt = a.basis_elt(g);
            let felt = a.basis_elt(f);
            let lhs = a.elt_d(&a.elt_compose(&gelt, &felt));
            let mut rhs = a.elt_compose(&a.elt_d(&gelt), &felt);
            let second = a.elt_compose(&gelt, &a.elt_d(&felt));
            rhs = if g.degree.rem_euclid(2) == 1 {
                a.elt_sub(&rhs, &second)
            } else {
                a.elt_add(&rhs, &second)
            };
            (lhs != rhs).then(|| Failure {
                axiom: "leibniz".into(),
                witness: format!(
                    "d({}∘{}) ≠ d{}∘{} + (-1)^{} {}∘d{}",
                    a.basis_name(g),
                    a.basis_name(f),
                    a.basis_name(g),
                    a.basis_name(f),
                    g.degree,
                    a.basis_name(g),
                    a.basis_name(f)
                ),
            })
        })
        .collect();
    report.failures.extend(leibniz_failures);

    report.sort();
    Ok(report)
}

/// The opposite dg-category with the Koszul sign convention
/// `f ∘_op g := (-1)^{|f||g|} g ∘ f`.
pub fn opposite(a: &DgCategory) -> DgCategory {
    let flip = |r: &BasisRef| BasisRef {
        src: r.tgt,
        tgt: r.src,
        degree: r.degree,
        index: r.index,
    };
    let homs = a
        .homs
        .iter()
        .map(|(&(x, y), c)| ((y, x), c.clone()))
        .collect();
    let compose = a
        .compose
        .iter()
        .map(|(&(g, f), vec)| {
            let sign_negative = (g.degree * f.degree).rem_euclid(2) == 1;
            let v = if sign_negative {
                vec.iter().map(|c| a.ring.neg(c)).collect()
            } else {
                vec.clone()
            };
            ((flip(&f), flip(&g)), v)
        })
        .collect();
    DgCategory::new(
        a.ring,
        a.objects.clone(),
        homs,
        compose,
        a.identities.clone(),
    )
    .expect("opposite of a well-formed category is well-formed")
}

/// A dg-functor: object map plus degree-0 linear maps on homs.
#[derive(Debug, Clone, PartialEq)]
pub struct DgFunctor {
    pub source: Arc<DgCategory>,
    pub target: Arc<DgCategory>,
    obj_map: Vec<usize>,
    /// Per source hom pair, per degree: `rank_target x rank_source` matrix.
    maps: BTreeMap<(usize, usize), BTreeMap<i64, Matrix>>,
}

impl DgFunctor {
    pub fn new(
        source: Arc<DgCategory>,
        target: Arc<DgCategory>,
        obj_map: Vec<usize>,
        maps: BTreeMap<(usize, usize), BTreeMap<i64, Matrix>>,
    ) -> Result<DgFunctor, Error> {
        if source.ring() != target.ring() {
            return Err(Error::structural(
                "functor between categories over different rings",
            ));
        }
        if obj_map.len() != source.objects().len() {
            return Err(Error::structural("object map arity mismatch"));
        }
        for &t in &obj_map {
            if t >= target.objects().len() {
                return Err(Error::structural("object map hits unknown object"));
            }
        }
        for (&(x, y), by_degree) in &maps {
            if source.hom(x, y).is_none() {
                return Err(Error::structural("functor map on undeclared hom"));
            }
            for (&n, m) in by_degree {
                let rows = target.hom_rank(obj_map[x], obj_map[y], n);
                let cols = source.hom_rank(x, y, n);
                if m.rows() != rows || m.cols() != cols {
                    return Err(Error::structural(format!(
                        "functor map on hom({}, {}) degree {} has shape {}x{}, expected {}x{}",
                        source.objects()[x],
                        source.objects()[y],
                        n,
                        m.rows(),
                        m.cols(),
                        rows,
                        cols
                    )));
                }
            }
        }
        Ok(DgFunctor {
            source,
            target,
            obj_map,
            maps,
        })
    }

    pub fn identity(cat: Arc<DgCategory>) -> DgFunctor {
        let obj_map = (0..cat.objects().len()).collect();
        let maps = cat
            .homs()
            .iter()
            .map(|(&(x, y), c)| {
                let by_degree = c
                    .support()
                    .map(|n| (n, Matrix::identity(&cat.ring(), c.rank(n))))
                    .collect();
                ((x, y), by_degree)
            })
            .collect();
        DgFunctor {
            source: cat.clone(),
            target: cat,
            obj_map,
            maps,
        }
    }

    pub fn apply_obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn map_matrix(&self, x: usize, y: usize, degree: i64) -> Matrix {
        let rows = self
            .target
            .hom_rank(self.obj_map[x], self.obj_map[y], degree);
        let cols = self.source.hom_rank(x, y, degree);
        self.maps
            .get(&(x, y))
            .and_then(|m| m.get(&degree))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&self.source.ring(), rows, cols))
    }

    /// Image of an element of `hom(x, y)` under the functor.
    pub fn apply_elt(&self, e: &HomElt) -> HomElt {
        let ring = self.source.ring();
        let mut coeffs = BTreeMap::new();
        for (&n, vec) in &e.coeffs {
            let m = self.map_matrix(e.src, e.tgt, n);
            if m.rows() == 0 {
                continue;
            }
            coeffs.insert(n, m.apply(vec, &ring));
        }
        HomElt {
            src: self.obj_map[e.src],
            tgt: self.obj_map[e.tgt],
            coeffs,
        }
        .normalize(&ring)
    }

    pub fn apply_basis(&self, r: BasisRef) -> HomElt {
        self.apply_elt(&self.source.basis_elt(r))
    }

    /// Composite `outer ∘ inner`.
    pub fn compose(outer: &DgFunctor, inner: &DgFunctor) -> DgFunctor {
        assert_eq!(
            *inner.target, *outer.source,
            "functor composition endpoint mismatch"
        );
        let obj_map: Vec<usize> = inner.obj_map.iter().map(|&x| outer.obj_map[x]).collect();
        let ring = inner.source.ring();
        let maps = inner
            .source
            .homs()
            .iter()
            .map(|(&(x, y), c)| {
                let by_degree = c
                    .support()
                    .map(|n| {
                        let first = inner.map_matrix(x, y, n);
                        let second = outer.map_matrix(inner.obj_map[x], inner.obj_map[y], n);
                        (n, second.mul(&first, &ring))
                    })
                    .collect();
                ((x, y), by_degree)
            })
            .collect();
        DgFunctor {
            source: inner.source.clone(),
            target: outer.target.clone(),
            obj_map,
            maps,
        }
    }
}

/// Identity, composition, and differential preservation on all basis data.
pub fn check_dg_functor(f: &DgFunctor) -> Result<Report, Error> {
    let mut report = Report::new("dg-functor");
    let src = &f.source;
    let tgt = &f.target;
    for (x, _) in src.objects().iter().enumerate() {
        let img = f.apply_elt(&src.identity_elt(x));
        if img != tgt.identity_elt(f.apply_obj(x)) {
            report.fail(
                "identity preservation",
                format!(
                    "F(1_{}) ≠ 1_{}",
                    src.objects()[x],
                    tgt.objects()[f.apply_obj(x)]
                ),
            );
        }
    }
    let basis = src.all_basis();
    for &g in &basis {
        for &fb in &basis {
            if g.src != fb.tgt {
                continue;
            }
            let lhs = f.apply_elt(&src.compose_basis(g, fb));
            let rhs = tgt.elt_compose(&f.apply_basis(g), &f.apply_basis(fb));
            if lhs != rhs {
                report.fail(
                    "composition preservation",
                    format!(
                        "F({}∘{}) ≠ F({})∘F({})",
                        src.basis_name(g),
                        src.basis_name(fb),
                        src.basis_name(g),
                        src.basis_name(fb)
                    ),
                );
            }
        }
        let lhs = f.apply_elt(&src.elt_d(&src.basis_elt(g)));
        let rhs = tgt.elt_d(&f.apply_basis(g));
        if lhs != rhs {
            report.fail(
                "differential preservation",
                format!("F(d {}) ≠ d F({})", src.basis_name(g), src.basis_name(g)),
            );
        }
    }
    report.sort();
    Ok(report)
}

/// A natural isomorphism of parallel dg-functors, with declared inverse
/// components. Components are stored as general graded elements so that
/// machinery downstream can consume nonzero-degree pieces; the checker
/// enforces degree-0 concentration.
#[derive(Debug, Clone, PartialEq)]
pub struct DgNatIso {
    pub source: DgFunctor,
    pub target: DgFunctor,
    pub components: Vec<HomElt>,
    pub inverses: Vec<HomElt>,
}

impl DgNatIso {
    pub fn new(
        source: DgFunctor,
        target: DgFunctor,
        components: Vec<HomElt>,
        inverses: Vec<HomElt>,
    ) -> Result<DgNatIso, Error> {
        if *source.source != *target.source || *source.target != *target.target {
            return Err(Error::structural(
                "transformation between non-parallel functors",
            ));
        }
        let n = source.source.objects().len();
        if components.len() != n {
            return Err(Error::structural("missing transformation component"));
        }
        if inverses.len() != n {
            return Err(Error::structural("missing inverse component"));
        }
        for (x, c) in components.iter().enumerate() {
            if c.src != source.apply_obj(x) || c.tgt != target.apply_obj(x) {
                return Err(Error::structural(format!(
                    "component at object index {} has endpoints ({}, {}), expected ({}, {})",
                    x,
                    c.src,
                    c.tgt,
                    source.apply_obj(x),
                    target.apply_obj(x)
                )));
            }
        }
        for (x, c) in inverses.iter().enumerate() {
            if c.src != target.apply_obj(x) || c.tgt != source.apply_obj(x) {
                return Err(Error::structural(format!(
                    "inverse component at object index {} has wrong endpoints",
                    x
                )));
            }
        }
        Ok(DgNatIso {
            source,
            target,
            components,
            inverses,
        })
    }

    /// The identity transformation on a functor.
    pub fn identity_on(f: &DgFunctor) -> DgNatIso {
        let cat = &f.target;
        let components: Vec<HomElt> = (0..f.source.objects().len())
            .map(|x| cat.identity_elt(f.apply_obj(x)))
            .collect();
        DgNatIso {
            source: f.clone(),
            target: f.clone(),
            components: components.clone(),
            inverses: components,
        }
    }

    pub fn component(&self, x: usize) -> &HomElt {
        &self.components[x]
    }

    pub fn inverse_component(&self, x: usize) -> &HomElt {
        &self.inverses[x]
    }

    /// Left whiskering `F τ` with components `F(τ_x)`.
    pub fn whisker_left(f: &DgFunctor, t: &DgNatIso) -> DgNatIso {
        DgNatIso {
            source: DgFunctor::compose(f, &t.source),
            target: DgFunctor::compose(f, &t.target),
            components: t.components.iter().map(|c| f.apply_elt(c)).collect(),
            inverses: t.inverses.iter().map(|c| f.apply_elt(c)).collect(),
        }
    }

    /// Right whiskering `τ F` with components `τ_{F x}`.
    pub fn whisker_right(t: &DgNatIso, f: &DgFunctor) -> DgNatIso {
        let pick = |cs: &[HomElt]| -> Vec<HomElt> {
            (0..f.source.objects().len())
                .map(|x| cs[f.apply_obj(x)].clone())
                .collect()
        };
        DgNatIso {
            source: DgFunctor::compose(&t.source, f),
            target: DgFunctor::compose(&t.target, f),
            components: pick(&t.components),
            inverses: pick(&t.inverses),
        }
    }

    /// Vertical composite `second ∘ first` (first applied first).
    pub fn vertical(second: &DgNatIso, first: &DgNatIso) -> DgNatIso {
        let cat = &first.source.target;
        let n = first.components.len();
        let components = (0..n)
            .map(|x| cat.elt_compose(&second.components[x], &first.components[x]))
            .collect();
        let inverses = (0..n)
            .map(|x| cat.elt_compose(&first.inverses[x], &second.inverses[x]))
            .collect();
        DgNatIso {
            source: first.source.clone(),
            target: second.target.clone(),
            components,
            inverses,
        }
    }

    /// Are all components identity elements on the nose?
    pub fn is_identity(&self) -> bool {
        let cat = &self.source.target;
        self.components
            .iter()
            .enumerate()
            .all(|(x, c)| *c == cat.identity_elt(self.source.apply_obj(x)))
    }
}

/// Closedness, degree, naturality, and two-sided invertibility.
pub fn check_dg_nat_iso(t: &DgNatIso) -> Result<Report, Error> {
    let mut report = Report::new("dg-nat-iso");
    let src_cat = &t.source.source;
    let tgt_cat = &t.source.target;
    for (x, c) in t.components.iter().enumerate() {
        if c.degrees().any(|d| d != 0) {
            report.fail(
                "degree",
                format!(
                    "component at {} has nonzero-degree part",
                    src_cat.objects()[x]
                ),
            );
        }
        if !tgt_cat.elt_d(c).is_zero() {
            report.fail(
                "closedness",
                format!("d of component at {} is nonzero", src_cat.objects()[x]),
            );
        }
    }
    for &f in &src_cat.all_basis() {
        // G(f) ∘ τ_x = τ_y ∘ F(f) for f: x -> y.
        let lhs = tgt_cat.elt_compose(&t.target.apply_basis(f), &t.components[f.src]);
        let rhs = tgt_cat.elt_compose(&t.components[f.tgt], &t.source.apply_basis(f));
        if lhs != rhs {
            report.fail(
                "naturality",
                format!("square at {} does not commute", src_cat.basis_name(f)),
            );
        }
    }
    for (x, _) in src_cat.objects().iter().enumerate() {
        let fwd = tgt_cat.elt_compose(&t.components[x], &t.inverses[x]);
        if fwd != tgt_cat.identity_elt(t.target.apply_obj(x)) {
            report.fail(
                "invertibility",
                format!("component∘inverse ≠ 1 at {}", src_cat.objects()[x]),
            );
        }
        let bwd = tgt_cat.elt_compose(&t.inverses[x], &t.components[x]);
        if bwd != tgt_cat.identity_elt(t.source.apply_obj(x)) {
            report.fail(
                "invertibility",
                format!("inverse∘component ≠ 1 at {}", src_cat.objects()[x]),
            );
        }
    }
    report.sort();
    Ok(report)
}
