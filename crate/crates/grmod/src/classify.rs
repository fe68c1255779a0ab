//! Classification data for preadditive categories: the center and its
//! idempotents, traces of module classes, and per-sample torsion
//! decompositions induced by idempotent ideals and central idempotents.

use num::bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};

use crate::dgmod::{module_hom_space, DgModule};
use crate::error::Error;
use crate::linsys::LinSys;
use crate::matrix::{self, Matrix};
use crate::preadd::{ideal_generated, is_idempotent, Ideal, PreadditiveCategory};
use crate::report::Report;
use crate::ring::{Ring, Scalar};

/// The center of a preadditive category: generators of the solution space
/// of the commuting family system, with the induced multiplication table.
#[derive(Debug, Clone)]
pub struct CenterPresentation {
    ring: Ring,
    /// Per object: offset and End-rank in the flat coordinate layout.
    pub slots: Vec<(usize, usize)>,
    /// Canonical generators of the solution space, one per row, in flat
    /// coordinates (concatenated End(x) coefficient vectors).
    pub basis: Matrix,
    /// `mult[i][j]`: coordinates of `b_i · b_j` in the basis.
    pub mult: Vec<Vec<Vec<Scalar>>>,
    /// Coordinates of the identity family `(1_x)_x`.
    pub one: Vec<Scalar>,
}

impl CenterPresentation {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Number of elements, for finite ground rings.
    pub fn cardinality(&self) -> Option<BigInt> {
        matrix::subgroup_size(&self.ring, &self.basis)
    }

    /// Flat coordinates of a center element given by basis coordinates.
    pub fn flat(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.rank());
        let mut out = vec![self.ring.zero(); self.basis.cols()];
        for (k, c) in coords.iter().enumerate() {
            for j in 0..self.basis.cols() {
                out[j] = self
                    .ring
                    .add(&out[j], &self.ring.mul(c, self.basis.get(k, j)));
            }
        }
        out
    }

    /// The End(x)-component of a center element given in basis coordinates.
    pub fn component(&self, coords: &[Scalar], x: usize) -> Vec<Scalar> {
        let flat = self.flat(coords);
        let (off, rank) = self.slots[x];
        flat[off..off + rank].to_vec()
    }

    /// Product in basis coordinates.
    pub fn multiply(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.ring.zero(); self.rank()];
        for (i, ai) in a.iter().enumerate() {
            if self.ring.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if self.ring.is_zero(bj) {
                    continue;
                }
                let s = self.ring.mul(ai, bj);
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    out[k] = self.ring.add(&out[k], &self.ring.mul(&s, c));
                }
            }
        }
        out
    }

    pub fn is_idempotent_element(&self, coords: &[Scalar]) -> bool {
        self.multiply(coords, coords) == coords
    }
}

/// Solve `{ z_y ∘ f = f ∘ z_x }` over all basis morphisms for families
/// `(z_x ∈ End(x))_x`, and compute the induced multiplication table.
pub fn center(a: &PreadditiveCategory) -> Result<CenterPresentation, Error> {
    let ring = a.ring();
    let nobj = a.objects().len();
    let mut sys = LinSys::new(ring);
    let mut ids = Vec::new();
    let mut slots = Vec::new();
    let mut off = 0usize;
    for x in 0..nobj {
        let r = a.hom_rank(x, x);
        ids.push(sys.unknown(r, 1));
        slots.push((off, r));
        off += r;
    }
    for x in 0..nobj {
        for y in 0..nobj {
            let hom_rank = a.hom_rank(x, y);
            for b in 0..hom_rank {
                let f = a.basis_vec(x, y, b);
                // L: End(y) coords -> hom(x, y) coords, z ↦ z∘f.
                let l = Matrix::from_fn(hom_rank, a.hom_rank(y, y), |i, s| {
                    a.compose_vec(y, y, &a.basis_vec(y, y, s), x, &f)[i].clone()
                });
                // R: End(x) coords -> hom(x, y) coords, z ↦ f∘z.
                let r = Matrix::from_fn(hom_rank, a.hom_rank(x, x), |i, s| {
                    a.compose_vec(x, y, &f, x, &a.basis_vec(x, x, s))[i].clone()
                });
                let one = Matrix::identity(&ring, 1);
                sys.equation(&[(l, ids[y], one.clone(), false), (r, ids[x], one, true)]);
            }
        }
    }
    let basis = {
        // Drop zero rows of the canonical solution form (the Z/n canonical
        // shape is square and may contain them).
        let solved = sys.solve();
        let rows: Vec<Vec<Scalar>> = (0..solved.rows())
            .filter(|&i| solved.row(i).iter().any(|c| !ring.is_zero(c)))
            .map(|i| solved.row_vec(i))
            .collect();
        if rows.is_empty() {
            Matrix::zero(&ring, 0, solved.cols())
        } else {
            Matrix::from_rows(rows).expect("rectangular")
        }
    };
    // Express products of basis elements in the basis again.
    let rank = basis.rows();
    let total = basis.cols();
    let compose_flat = |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![ring.zero(); total];
        for x in 0..nobj {
            let (o, r) = slots[x];
            if r == 0 {
                continue;
            }
            let prod = a.compose_vec(x, x, &u[o..o + r], x, &v[o..o + r]);
            out[o..o + r].clone_from_slice(&prod);
        }
        out
    };
    let mut mult = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut row = Vec::with_capacity(rank);
        for j in 0..rank {
            let prod = compose_flat(basis.row(i), basis.row(j));
            let coords = matrix::solve_left(&ring, &basis, &prod).ok_or_else(|| {
                Error::structural("center is not closed under multiplication (invalid category?)")
            })?;
            row.push(coords);
        }
        mult.push(row);
    }
    let one_flat: Vec<Scalar> = {
        let mut out = vec![ring.zero(); total];
        for x in 0..nobj {
            let (o, r) = slots[x];
            let idv = a.identity_vec(x);
            out[o..o + r].clone_from_slice(&idv);
        }
        out
    };
    let one = matrix::solve_left(&ring, &basis, &one_flat)
        .ok_or_else(|| Error::structural("identity family is not central (invalid category?)"))?;
    Ok(CenterPresentation {
        ring,
        slots,
        basis,
        mult,
        one,
    })
}

/// Enumeration cap for idempotent searches.
pub const IDEMPOTENT_ENUMERATION_CAP: u64 = 1 << 20;

/// All idempotents of the center, in basis coordinates. Over `Z/n` this is
/// exhaustive enumeration (refused above the cap); over `Q` it requires a
/// diagonal presentation of rank at most 4 and enumerates supports;
/// otherwise it refuses.
pub fn idempotents(z: &CenterPresentation) -> Result<Vec<Vec<Scalar>>, Error> {
    let ring = z.ring;
    match ring {
        Ring::Mod(_) => {
            if let Some(card) = z.cardinality() {
                if card > BigInt::from(IDEMPOTENT_ENUMERATION_CAP) {
                    return Err(Error::refusal(format!(
                        "center has {} elements, above the enumeration limit {}",
                        card, IDEMPOTENT_ENUMERATION_CAP
                    )));
                }
            }
            let coeff_space = Matrix::identity(&ring, z.rank());
            let elements =
                matrix::enumerate_subgroup(&ring, &coeff_space, IDEMPOTENT_ENUMERATION_CAP)?;
            let mut out: Vec<Vec<Scalar>> = elements
                .into_iter()
                .filter(|c| z.is_idempotent_element(c))
                .collect();
            out.sort();
            out.dedup();
            Ok(out)
        }
        Ring::Rat => {
            if z.rank() > 4 {
                return Err(Error::refusal(
                    "idempotent search over Q is restricted to center rank at most 4",
                ));
            }
            // Diagonal presentation: b_i·b_j = 0 for i ≠ j and b_i² = λ_i·b_i.
            let mut lambdas = Vec::new();
            for i in 0..z.rank() {
                for j in 0..z.rank() {
                    let prod = &z.mult[i][j];
                    if i != j {
                        if prod.iter().any(|c| !ring.is_zero(c)) {
                            return Err(Error::refusal(
                                "center presentation is not diagonal; idempotent search over Q refused",
                            ));
                        }
                    } else {
                        for (k, c) in prod.iter().enumerate() {
                            if k != i && !ring.is_zero(c) {
                                return Err(Error::refusal(
                                    "center presentation is not diagonal; idempotent search over Q refused",
                                ));
                            }
                        }
                        lambdas.push(prod[i].clone());
                    }
                }
            }
            // e = Σ_{i ∈ S} λ_i⁻¹ b_i over all supports S with λ_i ≠ 0.
            let mut out = Vec::new();
            let n = z.rank();
            'support: for mask in 0..(1u32 << n) {
                let mut coords = vec![ring.zero(); n];
                for i in 0..n {
                    if mask & (1 << i) != 0 {
                        let Some(inv) = ring.inv(&lambdas[i]) else {
                            continue 'support;
                        };
                        coords[i] = inv;
                    }
                }
                if z.is_idempotent_element(&coords) && !out.contains(&coords) {
                    out.push(coords);
                }
            }
            out.sort();
            Ok(out)
        }
        Ring::Int => Err(Error::refusal(
            "idempotent enumeration over Z is not supported; use Z/n or Q",
        )),
    }
}

/// All idempotent endomorphisms of one object of a preadditive category,
/// by exhaustive enumeration over a finite ground ring. This is the raw
/// bookkeeping datum for additive-closure questions; no completion is
/// constructed.
pub fn idempotent_endomorphisms(
    a: &PreadditiveCategory,
    x: usize,
    cap: u64,
) -> Result<Vec<Vec<Scalar>>, Error> {
    let ring = a.ring();
    if !ring.is_finite() {
        return Err(Error::refusal(
            "idempotent endomorphism enumeration requires a finite ring Z/n",
        ));
    }
    let r = a.hom_rank(x, x);
    let space = Matrix::identity(&ring, r);
    let elements = matrix::enumerate_subgroup(&ring, &space, cap)?;
    let mut out: Vec<Vec<Scalar>> = elements
        .into_iter()
        .filter(|e| a.compose_vec(x, x, e, x, e) == *e)
        .collect();
    out.sort();
    Ok(out)
}

/// Per-object (and per-degree) canonical submodules of a module's values.
#[derive(Debug, Clone, PartialEq)]
pub struct Submodules {
    pub components: BTreeMap<(usize, i64), Matrix>,
}

impl Submodules {
    pub fn component(&self, m: &DgModule, x: usize, n: i64) -> Matrix {
        self.components
            .get(&(x, n))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&m.ring(), 0, m.value(x).rank(n)))
    }

    fn canonical(ring: &Ring, rows: BTreeMap<(usize, i64), Vec<Vec<Scalar>>>) -> Submodules {
        let mut components = BTreeMap::new();
        for ((x, n), r) in rows {
            let m = Matrix::from_rows(r).expect("rectangular");
            let canon = matrix::row_canonical(ring, &m);
            if !canon.is_zero(ring) {
                components.insert((x, n), canon);
            }
        }
        Submodules { components }
    }
}

/// The trace of a class of modules in `m`: the sum of images of all module
/// maps from members of the class, computed from a basis of each hom space.
pub fn trace(class: &[&DgModule], m: &DgModule) -> Submodules {
    let ring = m.ring();
    let mut rows: BTreeMap<(usize, i64), Vec<Vec<Scalar>>> = BTreeMap::new();
    for s in class {
        let space = module_hom_space(s, m);
        for h in space.basis_maps() {
            for x in 0..m.cat().objects().len() {
                let degs: BTreeSet<i64> =
                    s.value(x).support().chain(m.value(x).support()).collect();
                for n in degs {
                    let mat = h.component(s, m, x, n);
                    for j in 0..mat.cols() {
                        let col = mat.col_vec(j);
                        if col.iter().any(|c| !ring.is_zero(c)) {
                            rows.entry((x, n)).or_default().push(col);
                        }
                    }
                }
            }
        }
    }
    Submodules::canonical(&ring, rows)
}

/// The trace ideal `x ↦ tr_S(A(-, x))` of a class of modules over a
/// preadditive category.
pub fn trace_ideal(a: &PreadditiveCategory, class: &[&DgModule]) -> Ideal {
    let mut components = BTreeMap::new();
    for x in 0..a.objects().len() {
        let repr = crate::gens::representable_over(a.cat().clone(), x);
        let tr = trace(class, &repr);
        for y in 0..a.objects().len() {
            let comp = tr.component(&repr, y, 0);
            if !comp.is_zero(&a.ring()) {
                components.insert((y, x), comp);
            }
        }
    }
    Ideal { components }
}

/// The classifying datum for a torsion decomposition: either an idempotent
/// ideal or a central idempotent (given in center basis coordinates).
pub enum TorsionDatum<'a> {
    IdempotentIdeal(&'a Ideal),
    CentralIdempotent {
        center: &'a CenterPresentation,
        coords: Vec<Scalar>,
    },
}

/// Trace part `t(M) = M·I`: the span of all actions by ideal elements.
pub fn trace_part(a: &PreadditiveCategory, ideal: &Ideal, m: &DgModule) -> Submodules {
    let ring = a.ring();
    let mut rows: BTreeMap<(usize, i64), Vec<Vec<Scalar>>> = BTreeMap::new();
    for (&(x, y), gens) in &ideal.components {
        for g in 0..gens.rows() {
            let f = a.elt(x, y, gens.row(g));
            for n in m.value(y).support() {
                if let Some(mat) = m.action_of_elt(&f, n).remove(&n) {
                    for j in 0..mat.cols() {
                        let col = mat.col_vec(j);
                        if col.iter().any(|c| !ring.is_zero(c)) {
                            rows.entry((x, n)).or_default().push(col);
                        }
                    }
                }
            }
        }
    }
    Submodules::canonical(&ring, rows)
}

/// Apply the trace part again, on generators of a previous trace part.
fn trace_part_of(
    a: &PreadditiveCategory,
    ideal: &Ideal,
    m: &DgModule,
    t: &Submodules,
) -> Submodules {
    let ring = a.ring();
    let mut rows: BTreeMap<(usize, i64), Vec<Vec<Scalar>>> = BTreeMap::new();
    for (&(x, y), gens) in &ideal.components {
        for g in 0..gens.rows() {
            let f = a.elt(x, y, gens.row(g));
            for n in m.value(y).support() {
                let sub = t.component(m, y, n);
                if sub.rows() == 0 {
                    continue;
                }
                if let Some(mat) = m.action_of_elt(&f, n).remove(&n) {
                    for w in 0..sub.rows() {
                        let img = mat.apply(sub.row(w), &ring);
                        if img.iter().any(|c| !ring.is_zero(c)) {
                            rows.entry((x, n)).or_default().push(img);
                        }
                    }
                }
            }
        }
    }
    Submodules::canonical(&ring, rows)
}

/// Torsion decomposition check on finite samples. For an idempotent ideal:
/// `t(t(M)) = t(M)` and functoriality of `t` along all module maps between
/// samples. For a central idempotent additionally the exact splitting
/// `M = eM ⊕ (1-e)M`. Non-idempotent input is refused.
pub fn torsion_split(
    a: &PreadditiveCategory,
    datum: &TorsionDatum,
    samples: &[&DgModule],
) -> Result<Report, Error> {
    let ring = a.ring();
    let ideal = match datum {
        TorsionDatum::IdempotentIdeal(i) => {
            if !is_idempotent(a, i) {
                return Err(Error::refusal(
                    "ideal is not idempotent; torsion check refused",
                ));
            }
            (*i).clone()
        }
        TorsionDatum::CentralIdempotent { center, coords } => {
            if !center.is_idempotent_element(coords) {
                return Err(Error::refusal(
                    "center element is not idempotent; torsion check refused",
                ));
            }
            let gens: Vec<(usize, usize, Vec<Scalar>)> = (0..a.objects().len())
                .filter(|&x| a.hom_rank(x, x) > 0)
                .map(|x| (x, x, center.component(coords, x)))
                .collect();
            ideal_generated(a, &gens)
        }
    };
    let mut report = Report::new("torsion split");
    for (si, m) in samples.iter().enumerate() {
        let t1 = trace_part(a, &ideal, m);
        let t2 = trace_part_of(a, &ideal, m, &t1);
        if t1 != t2 {
            report.fail(
                "t(t(M)) = t(M)",
                format!("sample {} has a non-idempotent trace part", si),
            );
        }
    }
    // Functoriality along every module map between samples.
    for (si, m) in samples.iter().enumerate() {
        for (ti, nmod) in samples.iter().enumerate() {
            let tm = trace_part(a, &ideal, m);
            let tn = trace_part(a, &ideal, nmod);
            let space = module_hom_space(m, nmod);
            for h in space.basis_maps() {
                for x in 0..a.objects().len() {
                    for deg in m.value(x).support() {
                        let sub = tm.component(m, x, deg);
                        let target = tn.component(nmod, x, deg);
                        let hx = h.component(m, nmod, x, deg);
                        for w in 0..sub.rows() {
                            let img = hx.apply(sub.row(w), &ring);
                            if img.iter().any(|c| !ring.is_zero(c))
                                && !matrix::row_member(&ring, &target, &img)
                            {
                                report.fail(
                                    "functoriality",
                                    format!(
                                        "map from sample {} to sample {} does not preserve the trace part at ({}, {})",
                                        si, ti, a.objects()[x], deg
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    if let TorsionDatum::CentralIdempotent { center, coords } = datum {
        for (si, m) in samples.iter().enumerate() {
            for x in 0..a.objects().len() {
                if a.hom_rank(x, x) == 0 {
                    continue;
                }
                let e = a.elt(x, x, &center.component(coords, x));
                for n in m.value(x).support() {
                    let rank = m.value(x).rank(n);
                    let p = m
                        .action_of_elt(&e, n)
                        .remove(&n)
                        .unwrap_or_else(|| Matrix::zero(&ring, rank, rank));
                    if p.mul(&p, &ring) != p {
                        report.fail(
                            "projector",
                            format!(
                                "sample {}: e does not act idempotently at ({}, {})",
                                si,
                                a.objects()[x],
                                n
                            ),
                        );
                        continue;
                    }
                    let q = Matrix::identity(&ring, rank).sub(&p, &ring);
                    // Images as row spans.
                    let ip = matrix::row_canonical(&ring, &p.transpose());
                    let iq = matrix::row_canonical(&ring, &q.transpose());
                    let sum = matrix::row_canonical(&ring, &ip.vstack(&iq));
                    let full = matrix::row_canonical(&ring, &Matrix::identity(&ring, rank));
                    let meet = matrix::intersect(&ring, &ip, &iq);
                    if sum != full || !meet.is_zero(&ring) {
                        report.fail(
                            "splitting",
                            format!(
                                "sample {}: M ≠ eM ⊕ (1-e)M at ({}, {})",
                                si,
                                a.objects()[x],
                                n
                            ),
                        );
                    }
                }
            }
        }
    }
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgmod::check_dg_module;
    use crate::gens::representable_over;
    use crate::graded::Complex;
    use crate::testutil::*;

    fn block_module(a: &PreadditiveCategory, ranks: &[usize]) -> DgModule {
        let ring = a.ring();
        let values: Vec<Complex> = ranks
            .iter()
            .enumerate()
            .map(|(x, &r)| {
                Complex::concentrated(ring, 0, (0..r).map(|k| format!("m{}_{}", x, k)).collect())
            })
            .collect();
        let mut actions = BTreeMap::new();
        for x in 0..ranks.len() {
            if ranks[x] > 0 {
                let id = a.cat().identity_ref(x);
                actions.insert(
                    id,
                    [(0i64, Matrix::identity(&ring, ranks[x]))]
                        .into_iter()
                        .collect(),
                );
            }
        }
        DgModule::new(a.cat().clone(), values, actions).unwrap()
    }

    #[test]
    fn centers_of_the_corpus_categories() {
        // Ground ring as one-object category: center ≅ k.
        let p = point_preadd(Ring::Rat);
        let z = center(&p).unwrap();
        assert_eq!(z.rank(), 1);
        assert_eq!(z.multiply(&z.one.clone(), &z.one.clone()), z.one);

        // A₂ over Z/2: the arrow forces equal diagonal scalars.
        let a2 = a2_preadd(Ring::Mod(2));
        let z = center(&a2).unwrap();
        assert_eq!(z.cardinality().unwrap(), 2u32.into());
        let idems = idempotents(&z).unwrap();
        assert_eq!(idems.len(), 2);

        // Two blocks: no cross constraints, center ≅ Z/2 × Z/2.
        let tb = two_block_preadd(Ring::Mod(2));
        let z = center(&tb).unwrap();
        assert_eq!(z.cardinality().unwrap(), 4u32.into());
        assert_eq!(idempotents(&z).unwrap().len(), 4);

        // Z/4 as one-object category: 4 elements, idempotents {0, 1}.
        let p4 = point_preadd(Ring::Mod(4));
        let z = center(&p4).unwrap();
        assert_eq!(z.cardinality().unwrap(), 4u32.into());
        let idems = idempotents(&z).unwrap();
        assert_eq!(idems.len(), 2);

        // Commutativity of the multiplication table.
        for cat in [a2_preadd(Ring::Mod(2)), two_block_preadd(Ring::Mod(2))] {
            let z = center(&cat).unwrap();
            for i in 0..z.rank() {
                for j in 0..z.rank() {
                    assert_eq!(z.mult[i][j], z.mult[j][i]);
                }
            }
        }
    }

    #[test]
    fn rational_idempotents_via_diagonal_supports() {
        let p = point_preadd(Ring::Rat);
        let z = center(&p).unwrap();
        let idems = idempotents(&z).unwrap();
        assert_eq!(idems.len(), 2); // 0 and 1
    }

    #[test]
    fn integer_center_idempotents_are_refused() {
        let p = point_preadd(Ring::Int);
        let z = center(&p).unwrap();
        assert!(matches!(idempotents(&z), Err(Error::Refusal(_))));
    }

    #[test]
    fn traces_in_the_a2_category() {
        let a2 = a2_preadd(Ring::Mod(2));
        let p0 = representable_over(a2.cat().clone(), 0);
        let p1 = representable_over(a2.cat().clone(), 1);
        assert!(check_dg_module(&p0).unwrap().passed());
        assert!(check_dg_module(&p1).unwrap().passed());

        // Trace of a module in itself is everything.
        let t = trace(&[&p1], &p1);
        for y in 0..2 {
            let rank = p1.value(y).rank(0);
            if rank > 0 {
                assert_eq!(
                    t.component(&p1, y, 0),
                    matrix::row_canonical(&a2.ring(), &Matrix::identity(&a2.ring(), rank))
                );
            }
        }
        // Trace of the zero module is zero.
        let z = DgModule::zero(a2.cat().clone());
        assert!(trace(&[&z], &p1).components.is_empty());

        // Hom(P_0, P_1) ≅ A(0,1) = k·α: the trace of P_0 in P_1 is exactly
        // the arrow component (full at object 0, zero at object 1); in the
        // other direction Hom(P_1, P_0) ≅ A(1,0) = 0 so the trace vanishes.
        let t01 = trace(&[&p0], &p1);
        assert_eq!(t01.components.len(), 1);
        assert_eq!(
            t01.component(&p1, 0, 0),
            matrix::row_canonical(&a2.ring(), &Matrix::identity(&a2.ring(), 1))
        );
        let t10 = trace(&[&p1], &p0);
        assert!(t10.components.is_empty());

        // Trace ideal of {P_0}: full at (0,0) and (0,1), zero elsewhere;
        // an idempotent ideal (P_0 is a representable).
        let ti = trace_ideal(&a2, &[&p0]);
        assert!(crate::preadd::check_ideal(&a2, &ti).unwrap().passed());
        assert!(is_idempotent(&a2, &ti));
        assert_eq!(
            ti.components.keys().copied().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1)]
        );
        // Trace ideal of both representables is the whole category.
        let tw = trace_ideal(&a2, &[&p0, &p1]);
        assert_eq!(tw, Ideal::whole(&a2));
        assert!(is_idempotent(&a2, &tw));
    }

    #[test]
    fn torsion_split_on_two_blocks() {
        let tb = two_block_preadd(Ring::Mod(2));
        let z = center(&tb).unwrap();
        let idems = idempotents(&z).unwrap();
        assert_eq!(idems.len(), 4);
        let mx = block_module(&tb, &[1, 0]);
        let my = block_module(&tb, &[0, 1]);
        let mxy = block_module(&tb, &[2, 1]);
        let samples = [&mx, &my, &mxy];
        for m in &samples {
            assert!(check_dg_module(m).unwrap().passed());
        }
        for e in &idems {
            let datum = TorsionDatum::CentralIdempotent {
                center: &z,
                coords: e.clone(),
            };
            let report = torsion_split(&tb, &datum, &samples).unwrap();
            assert!(report.passed(), "idempotent {:?}: {}", e, report);
        }
        // e = 1 gives t(M) = M; e = 0 gives t(M) = 0.
        let one = z.one.clone();
        let ideal_one = ideal_generated(
            &tb,
            &(0..2)
                .map(|x| (x, x, z.component(&one, x)))
                .collect::<Vec<_>>(),
        );
        let t = trace_part(&tb, &ideal_one, &mxy);
        assert_eq!(
            t.component(&mxy, 0, 0),
            matrix::row_canonical(&tb.ring(), &Matrix::identity(&tb.ring(), 2))
        );
        let zero_coords = vec![tb.ring().zero(); z.rank()];
        let ideal_zero = ideal_generated(
            &tb,
            &(0..2)
                .map(|x| (x, x, z.component(&zero_coords, x)))
                .collect::<Vec<_>>(),
        );
        assert!(trace_part(&tb, &ideal_zero, &mxy).components.is_empty());
    }

    #[test]
    fn non_idempotent_input_is_refused() {
        let a2 = a2_preadd(Ring::Mod(2));
        let alpha = a2.basis_vec(0, 1, 0);
        let arrow = ideal_generated(&a2, &[(0, 1, alpha)]);
        let m = block_module(&a2, &[1, 1]);
        let datum = TorsionDatum::IdempotentIdeal(&arrow);
        assert!(matches!(
            torsion_split(&a2, &datum, &[&m]),
            Err(Error::Refusal(_))
        ));
    }

    #[test]
    fn idempotent_ideal_route_passes_on_a2() {
        let a2 = a2_preadd(Ring::Mod(2));
        let p0 = representable_over(a2.cat().clone(), 0);
        let ti = trace_ideal(&a2, &[&p0]);
        let m0 = block_module(&a2, &[1, 0]);
        let m1 = block_module(&a2, &[1, 1]);
        let datum = TorsionDatum::IdempotentIdeal(&ti);
        let report = torsion_split(&a2, &datum, &[&m0, &m1, &p0]).unwrap();
        assert!(report.passed(), "{}", report);
    }
}

#[cfg(test)]
mod endo_tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn idempotent_endomorphism_lists() {
        // k[C2] over Z/2 (one object, End rank 2 with s² = 1): the
        // idempotents are 0 and 1 only ((1+s)² = 0, s² = 1, (1+s)+1 = s...).
        let rep = loop_strict_rep(crate::ring::Ring::Mod(2));
        let gr = crate::gr::grothendieck(rep).unwrap();
        let w = crate::gens::p_window(gr.category(), &[(0, 0)]).unwrap();
        let idems = idempotent_endomorphisms(&w.category, 0, 1 << 12).unwrap();
        assert_eq!(idems.len(), 2);

        // Over Z/4 the scalar ring contributes exactly 0 and 1 as well.
        let p4 = point_preadd(crate::ring::Ring::Mod(4));
        let idems = idempotent_endomorphisms(&p4, 0, 1 << 12).unwrap();
        assert_eq!(idems.len(), 2);

        // Refusal over Z.
        let pz = point_preadd(crate::ring::Ring::Int);
        assert!(matches!(
            idempotent_endomorphisms(&pz, 0, 1 << 12),
            Err(Error::Refusal(_))
        ));
    }
}
