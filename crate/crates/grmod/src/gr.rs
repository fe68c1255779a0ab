//! The linear Grothendieck construction: one dg-category glued from all
//! fibers of a validated dg-representation.
//!
//! Hom complexes are direct sums over base morphisms `a ∈ C(i,j)` of the
//! fiber homs `R(j)(R(a)x, y)`, with componentwise differential. Composition
//! twists through `θ = μ⁻¹` with the sign `(-1)^{(n-r)r}`:
//!
//! `(g∘f)_c^n = Σ_{ba=c} Σ_{p,r} (-1)^{(n-r)r} g_b^{n-r-p} ∘ (R(b)f_a)^p ∘ (θ_{b,a}x)^r`
//!
//! The `r`-sum is implemented in full generality: θ components of any degree
//! are consumed if present, even though validated representations force
//! degree 0. The identity of an object is the Kronecker family `η_i x` at
//! `a = 1_i`; when that element is not a basis vector of its summand the
//! summand basis is changed (within the block) so that it becomes one.

use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcat::{BasisRef, DgCategory, HomElt};
use crate::error::Error;
use crate::graded::{Complex, GradedModule};
use crate::matrix::{basis_with_first_vector, Matrix};
use crate::rep::{check_representation, DgRepresentation};
use crate::ring::{Ring, Scalar};

/// An object of `Gr(R)`: a base object paired with a fiber object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GrObject {
    /// Index of the base object `i`.
    pub base: usize,
    /// Index of the object `x` in the fiber `R(i)`.
    pub fiber: usize,
}

/// An element of a `Gr(R)` hom in summand coordinates: finitely many
/// components indexed by a base morphism and a degree, each a coefficient
/// vector over the basis of `R(j)^deg(R(a)x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrMorphism {
    pub src: GrObject,
    pub tgt: GrObject,
    pub components: BTreeMap<(usize, i64), Vec<Scalar>>,
}

impl GrMorphism {
    pub fn zero(src: GrObject, tgt: GrObject) -> GrMorphism {
        GrMorphism {
            src,
            tgt,
            components: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn normalize(mut self, ring: &Ring) -> GrMorphism {
        self.components
            .retain(|_, v| v.iter().any(|c| !ring.is_zero(c)));
        self
    }
}

/// The built construction: the resulting dg-category plus the bookkeeping
/// needed to move between summand coordinates and category basis
/// coordinates.
#[derive(Debug, Clone)]
pub struct GrBuild {
    rep: DgRepresentation,
    category: Arc<DgCategory>,
    objects: Vec<GrObject>,
    object_index: BTreeMap<(usize, usize), usize>,
    /// Basis transforms per (src, tgt, degree): `(T, T⁻¹)` with `T` carrying
    /// new (category) coordinates to old (summand) coordinates. Absent means
    /// the identity.
    transforms: BTreeMap<(usize, usize, i64), (Matrix, Matrix)>,
}

/// Summand layout of one Gr hom in one degree: `(base morphism, offset, rank)`.
struct Layout {
    blocks: Vec<(usize, usize, usize)>,
    total: usize,
}

impl GrBuild {
    pub fn rep(&self) -> &DgRepresentation {
        &self.rep
    }

    pub fn category(&self) -> &Arc<DgCategory> {
        &self.category
    }

    pub fn objects(&self) -> &[GrObject] {
        &self.objects
    }

    /// Index of the Gr object `(i, x)` in the built category.
    pub fn object(&self, base: usize, fiber: usize) -> Option<usize> {
        self.object_index.get(&(base, fiber)).copied()
    }

    pub fn gr_object(&self, index: usize) -> GrObject {
        self.objects[index]
    }

    /// Resolve an object name of the form `base:fiber`.
    pub fn object_by_name(&self, name: &str) -> Option<usize> {
        self.category.object_index(name)
    }

    fn ring(&self) -> Ring {
        self.category.ring()
    }

    /// The fiber hom complex of summand `a` for the pair `(p, q)`:
    /// `R(j)(R(a)x, y)` with its source/target fiber objects.
    fn summand_hom(&self, a: usize, p: GrObject, q: GrObject) -> Option<(usize, usize, &Complex)> {
        let j = q.base;
        let fiber = self.rep.fiber(j);
        let rax = self.rep.functor(a).apply_obj(p.fiber);
        fiber.hom(rax, q.fiber).map(|c| (rax, q.fiber, c))
    }

    fn layout(&self, p: GrObject, q: GrObject, degree: i64) -> Layout {
        let mut blocks = Vec::new();
        let mut total = 0usize;
        for a in self.rep.base().hom_set(p.base, q.base) {
            let rank = self
                .summand_hom(a, p, q)
                .map_or(0, |(_, _, c)| c.rank(degree));
            blocks.push((a, total, rank));
            total += rank;
        }
        Layout { blocks, total }
    }

    /// Summand-coordinate element -> category basis element.
    pub fn embed(&self, m: &GrMorphism) -> HomElt {
        let ring = self.ring();
        let src = self.object(m.src.base, m.src.fiber).expect("object exists");
        let tgt = self.object(m.tgt.base, m.tgt.fiber).expect("object exists");
        let mut coeffs: BTreeMap<i64, Vec<Scalar>> = BTreeMap::new();
        for (&(a, degree), vec) in &m.components {
            let layout = self.layout(m.src, m.tgt, degree);
            let &(_, offset, rank) = layout
                .blocks
                .iter()
                .find(|&&(b, _, _)| b == a)
                .expect("summand exists");
            assert_eq!(vec.len(), rank, "summand coefficient vector length");
            let entry = coeffs
                .entry(degree)
                .or_insert_with(|| vec![ring.zero(); layout.total]);
            for (k, c) in vec.iter().enumerate() {
                entry[offset + k] = ring.add(&entry[offset + k], c);
            }
        }
        // Old (raw) coordinates -> new coordinates via T⁻¹.
        let mut out: BTreeMap<i64, Vec<Scalar>> = BTreeMap::new();
        for (degree, old) in coeffs {
            let new = match self.transforms.get(&(src, tgt, degree)) {
                Some((_, tinv)) => tinv.apply(&old, &ring),
                None => old,
            };
            if new.iter().any(|c| !ring.is_zero(c)) {
                out.insert(degree, new);
            }
        }
        HomElt {
            src,
            tgt,
            coeffs: out,
        }
    }

    /// Category basis element -> summand-coordinate element.
    pub fn decompose(&self, e: &HomElt) -> GrMorphism {
        let ring = self.ring();
        let p = self.gr_object(e.src);
        let q = self.gr_object(e.tgt);
        let mut components: BTreeMap<(usize, i64), Vec<Scalar>> = BTreeMap::new();
        for (&degree, vec) in &e.coeffs {
            let old = match self.transforms.get(&(e.src, e.tgt, degree)) {
                Some((t, _)) => t.apply(vec, &ring),
                None => vec.clone(),
            };
            let layout = self.layout(p, q, degree);
            for &(a, offset, rank) in &layout.blocks {
                if rank == 0 {
                    continue;
                }
                let slice = old[offset..offset + rank].to_vec();
                if slice.iter().any(|c| !ring.is_zero(c)) {
                    components.insert((a, degree), slice);
                }
            }
        }
        GrMorphism {
            src: p,
            tgt: q,
            components,
        }
    }

    /// One summand component as an element of the fiber dg-category.
    fn component_elt(&self, m: &GrMorphism, a: usize, degree: i64) -> Option<HomElt> {
        let vec = m.components.get(&(a, degree))?;
        let (rax, y, _) = self.summand_hom(a, m.src, m.tgt)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(degree, vec.clone());
        Some(HomElt {
            src: rax,
            tgt: y,
            coeffs,
        })
    }

    /// The signed composition formula.
    pub fn gr_compose(&self, g: &GrMorphism, f: &GrMorphism) -> GrMorphism {
        assert_eq!(g.src, f.tgt, "gr_compose endpoint mismatch");
        let ring = self.ring();
        let base = self.rep.base();
        let k = g.tgt.base;
        let fiber_k = self.rep.fiber(k).clone();
        let mut out = GrMorphism::zero(f.src, g.tgt);
        for (&(b, q), _) in &g.components {
            let g_elt = self.component_elt(g, b, q).expect("component exists");
            for (&(a, p), _) in &f.components {
                let Some(c) = base.compose(b, a) else {
                    continue;
                };
                let f_elt = self.component_elt(f, a, p).expect("component exists");
                let rb_f = self.rep.functor(b).apply_elt(&f_elt);
                let theta = self.rep.theta_at(b, a, f.src.fiber).clone();
                for (&r, theta_vec) in &theta.coeffs {
                    let theta_piece = HomElt {
                        src: theta.src,
                        tgt: theta.tgt,
                        coeffs: [(r, theta_vec.clone())].into_iter().collect(),
                    };
                    let term =
                        fiber_k.elt_compose(&g_elt, &fiber_k.elt_compose(&rb_f, &theta_piece));
                    if term.is_zero() {
                        continue;
                    }
                    let n = q + p + r;
                    let signed = if ((n - r) * r).rem_euclid(2) == 1 {
                        fiber_k.elt_neg(&term)
                    } else {
                        term
                    };
                    for (&deg, vec) in &signed.coeffs {
                        let layout = self.layout(f.src, g.tgt, deg);
                        let rank = layout
                            .blocks
                            .iter()
                            .find(|&&(m, _, _)| m == c)
                            .map_or(0, |&(_, _, r)| r);
                        assert_eq!(vec.len(), rank, "composite lands in summand {}", c);
                        let entry = out
                            .components
                            .entry((c, deg))
                            .or_insert_with(|| vec![ring.zero(); rank]);
                        for (i, s) in vec.iter().enumerate() {
                            entry[i] = ring.add(&entry[i], s);
                        }
                    }
                }
            }
        }
        out.normalize(&ring)
    }

    /// The identity of `_ix`: `η_i x` at the Kronecker summand `a = 1_i`.
    pub fn gr_identity(&self, obj: GrObject) -> GrMorphism {
        let i = obj.base;
        let one = self.rep.base().identity_of(i);
        let eta = self.rep.eta_at(i, obj.fiber);
        let mut components = BTreeMap::new();
        for (&deg, vec) in &eta.coeffs {
            components.insert((one, deg), vec.clone());
        }
        GrMorphism {
            src: obj,
            tgt: obj,
            components,
        }
        .normalize(&self.ring())
    }

    /// Componentwise differential `d(f)_a := d_{R(j)}(f_a)`.
    pub fn gr_d(&self, m: &GrMorphism) -> GrMorphism {
        let ring = self.ring();
        let mut out = GrMorphism::zero(m.src, m.tgt);
        for (&(a, degree), _) in &m.components {
            let elt = self.component_elt(m, a, degree).expect("component exists");
            let fiber = self.rep.fiber(m.tgt.base);
            let de = fiber.elt_d(&elt);
            for (&deg, vec) in &de.coeffs {
                let entry = out
                    .components
                    .entry((a, deg))
                    .or_insert_with(|| vec![ring.zero(); vec.len()]);
                for (i, s) in vec.iter().enumerate() {
                    entry[i] = ring.add(&entry[i], s);
                }
            }
        }
        out.normalize(&ring)
    }
}

/// Build `Gr(R)`. The representation is validated first; validation
/// failures propagate as structural errors.
pub fn grothendieck(rep: DgRepresentation) -> Result<GrBuild, Error> {
    let report = check_representation(&rep)?;
    if !report.passed() {
        let first = &report.failures[0];
        return Err(Error::structural(format!(
            "representation fails validation ({} failure(s); first: {} @ {})",
            report.failures.len(),
            first.axiom,
            first.witness
        )));
    }
    grothendieck_unchecked(rep)
}

fn grothendieck_unchecked(rep: DgRepresentation) -> Result<GrBuild, Error> {
    let ring = rep
        .base()
        .objects()
        .first()
        .map(|_| rep.fiber(0).ring())
        .unwrap_or(Ring::Int);
    let base = rep.base().clone();

    // Objects.
    let mut objects = Vec::new();
    let mut object_index = BTreeMap::new();
    let mut names = Vec::new();
    for (i, iname) in base.objects().iter().enumerate() {
        for (x, xname) in rep.fiber(i).objects().iter().enumerate() {
            object_index.insert((i, x), objects.len());
            objects.push(GrObject { base: i, fiber: x });
            names.push(format!("{}:{}", iname, xname));
        }
    }

    // Provisional build for layout computations.
    let mut build = GrBuild {
        rep,
        category: Arc::new(DgCategory::new(
            ring,
            Vec::new(),
            BTreeMap::new(),
            BTreeMap::new(),
            Vec::new(),
        )?),
        objects: objects.clone(),
        object_index: object_index.clone(),
        transforms: BTreeMap::new(),
    };

    // Raw hom complexes: block sums of fiber homs, labels tagged by the
    // base morphism.
    let mut raw_homs: BTreeMap<(usize, usize), Complex> = BTreeMap::new();
    for (pi, &p) in objects.iter().enumerate() {
        for (qi, &q) in objects.iter().enumerate() {
            let mut degs: std::collections::BTreeSet<i64> = Default::default();
            for a in build.rep.base().hom_set(p.base, q.base) {
                if let Some((_, _, c)) = build.summand_hom(a, p, q) {
                    degs.extend(c.support());
                }
            }
            let mut degrees: BTreeMap<i64, Vec<String>> = BTreeMap::new();
            let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
            for &n in &degs {
                let layout = build.layout(p, q, n);
                let mut labels = Vec::new();
                for &(a, _, rank) in &layout.blocks {
                    if rank == 0 {
                        continue;
                    }
                    let (_, _, c) = build.summand_hom(a, p, q).expect("nonzero summand");
                    for l in c.grading().labels(n) {
                        labels.push(format!("{}:{}", build.rep.base().morphisms()[a].name, l));
                    }
                }
                if !labels.is_empty() {
                    degrees.insert(n, labels);
                }
            }
            for &n in &degs {
                let src_layout = build.layout(p, q, n);
                let tgt_layout = build.layout(p, q, n + 1);
                if src_layout.total == 0 || tgt_layout.total == 0 {
                    continue;
                }
                let mut m = Matrix::zero(&ring, tgt_layout.total, src_layout.total);
                for (bi, &(a, off, rank)) in src_layout.blocks.iter().enumerate() {
                    if rank == 0 {
                        continue;
                    }
                    let (_, toff, _) = tgt_layout.blocks[bi];
                    let (_, _, c) = build.summand_hom(a, p, q).expect("nonzero summand");
                    let d = c.differential(n);
                    for i in 0..d.rows() {
                        for j in 0..d.cols() {
                            m.set(toff + i, off + j, d.get(i, j).clone());
                        }
                    }
                }
                diffs.insert(n, m);
            }
            if !degrees.is_empty() {
                raw_homs.insert(
                    (pi, qi),
                    Complex::new(ring, GradedModule::new(degrees)?, diffs)?,
                );
            }
        }
    }

    // Identity elements in raw coordinates; normalize non-basis identities
    // by a change of basis inside the `1_i` summand block of degree 0.
    let mut identities = Vec::new();
    for (pi, &p) in objects.iter().enumerate() {
        let idm = build.gr_identity(p);
        let mut degrees: Vec<i64> = idm.components.keys().map(|&(_, d)| d).collect();
        degrees.dedup();
        if degrees != vec![0] {
            return Err(Error::structural(format!(
                "η at {} is not concentrated in degree 0",
                names[pi]
            )));
        }
        let one = build.rep.base().identity_of(p.base);
        let vec = idm.components.get(&(one, 0)).expect("η component").clone();
        // Already a standard basis vector?
        let support: Vec<usize> = vec
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(k, _)| k)
            .collect();
        let layout = build.layout(p, p, 0);
        let &(_, offset, rank) = layout
            .blocks
            .iter()
            .find(|&&(a, _, _)| a == one)
            .expect("identity summand");
        if support.len() == 1 && ring.is_one(&vec[support[0]]) {
            identities.push(BasisRef {
                src: pi,
                tgt: pi,
                degree: 0,
                index: offset + support[0],
            });
            continue;
        }
        let Some((ts, ts_inv)) = basis_with_first_vector(&ring, &vec) else {
            return Err(Error::structural(format!(
                "η at {} cannot be completed to a basis of its summand",
                names[pi]
            )));
        };
        // Full-block transform: identity outside the 1_i summand block.
        let total = layout.total;
        let mut t = Matrix::identity(&ring, total);
        let mut tinv = Matrix::identity(&ring, total);
        for i in 0..rank {
            for j in 0..rank {
                t.set(offset + i, offset + j, ts.get(i, j).clone());
                tinv.set(offset + i, offset + j, ts_inv.get(i, j).clone());
            }
        }
        // Relabel the transformed block.
        let hom = raw_homs
            .get_mut(&(pi, pi))
            .expect("endomorphism hom exists");
        let mut degrees = hom.grading().degrees().clone();
        let labels = degrees.get_mut(&0).expect("degree 0 exists");
        let aname = &build.rep.base().morphisms()[one].name;
        for (k, slot) in labels[offset..offset + rank].iter_mut().enumerate() {
            *slot = format!("{}:~{}", aname, k);
        }
        // Conjugate the differentials touching degree 0.
        let mut diffs = hom.stored_differentials().clone();
        let d_out = hom.differential(0).mul(&t, &ring);
        let d_in = tinv.mul(&hom.differential(-1), &ring);
        if !d_out.is_zero(&ring) {
            diffs.insert(0, d_out);
        } else {
            diffs.remove(&0);
        }
        if !d_in.is_zero(&ring) {
            diffs.insert(-1, d_in);
        } else {
            diffs.remove(&-1);
        }
        *hom = Complex::new(ring, GradedModule::new(degrees)?, diffs)?;
        build.transforms.insert((pi, pi, 0), (t, tinv));
        identities.push(BasisRef {
            src: pi,
            tgt: pi,
            degree: 0,
            index: offset,
        });
    }

    // Structure constants via the signed composition formula, expressed in
    // the (possibly transformed) category basis.
    let mut all_refs: Vec<BasisRef> = Vec::new();
    for (&(x, y), c) in &raw_homs {
        for degree in c.support() {
            for index in 0..c.rank(degree) {
                all_refs.push(BasisRef {
                    src: x,
                    tgt: y,
                    degree,
                    index,
                });
            }
        }
    }
    let basis_to_morphism = |r: &BasisRef| -> GrMorphism {
        let rank = raw_homs
            .get(&(r.src, r.tgt))
            .map_or(0, |c| c.rank(r.degree));
        let mut v = vec![ring.zero(); rank];
        v[r.index] = ring.one();
        let e = HomElt {
            src: r.src,
            tgt: r.tgt,
            coeffs: [(r.degree, v)].into_iter().collect(),
        };
        build.decompose(&e)
    };
    let pairs: Vec<(BasisRef, BasisRef)> = all_refs
        .iter()
        .flat_map(|&g| {
            all_refs
                .iter()
                .filter(move |f| f.tgt == g.src)
                .map(move |&f| (g, f))
        })
        .collect();
    let entries: Vec<((BasisRef, BasisRef), Vec<Scalar>)> = pairs
        .par_iter()
        .filter_map(|&(g, f)| {
            let gm = basis_to_morphism(&g);
            let fm = basis_to_morphism(&f);
            let composite = build.gr_compose(&gm, &fm);
            let e = build.embed(&composite);
            e.coeffs
                .get(&(g.degree + f.degree))
                .map(|vec| ((g, f), vec.clone()))
        })
        .collect();
    let compose: BTreeMap<(BasisRef, BasisRef), Vec<Scalar>> = entries.into_iter().collect();

    let category = Arc::new(DgCategory::new(ring, names, raw_homs, compose, identities)?);
    build.category = category;
    Ok(build)
}
