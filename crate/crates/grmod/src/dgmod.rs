//! Right dg-modules over a dg-category: a complex per object with a
//! contravariant action by hom basis elements, under the fixed op-sign
//! convention `action(g∘f) = (-1)^{|f||g|} action(f)∘action(g)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::dgcat::{BasisRef, DgCategory, HomElt};
use crate::error::Error;
use crate::graded::{check_complex, Complex};
use crate::linsys::LinSys;
use crate::matrix::{self, Matrix};
use crate::report::Report;
use crate::ring::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct DgModule {
    cat: Arc<DgCategory>,
    values: Vec<Complex>,
    /// Per basis morphism `f: x -> y` of degree `p`, per input degree `n`:
    /// a matrix `value(x).rank(n+p) x value(y).rank(n)`. Zero when absent.
    actions: BTreeMap<BasisRef, BTreeMap<i64, Matrix>>,
}

impl DgModule {
    pub fn new(
        cat: Arc<DgCategory>,
        values: Vec<Complex>,
        actions: BTreeMap<BasisRef, BTreeMap<i64, Matrix>>,
    ) -> Result<DgModule, Error> {
        if values.len() != cat.objects().len() {
            return Err(Error::structural("one value complex per object required"));
        }
        for (x, v) in values.iter().enumerate() {
            if v.ring() != cat.ring() {
                return Err(Error::structural(format!(
                    "value at {} over a different ring",
                    cat.objects()[x]
                )));
            }
        }
        for (f, by_degree) in &actions {
            if cat.hom_rank(f.src, f.tgt, f.degree) <= f.index {
                return Err(Error::structural(format!(
                    "action references unknown basis element {:?}",
                    f
                )));
            }
            for (&n, m) in by_degree {
                let rows = values[f.src].rank(n + f.degree);
                let cols = values[f.tgt].rank(n);
                if m.rows() != rows || m.cols() != cols {
                    return Err(Error::structural(format!(
                        "action of {} at input degree {} has shape {}x{}, expected {}x{}",
                        cat.basis_name(*f),
                        n,
                        m.rows(),
                        m.cols(),
                        rows,
                        cols
                    )));
                }
            }
        }
        let ring = cat.ring();
        let actions = actions
            .into_iter()
            .map(|(f, by)| {
                (
                    f,
                    by.into_iter().filter(|(_, m)| !m.is_zero(&ring)).collect(),
                )
            })
            .filter(|(_, by): &(_, BTreeMap<i64, Matrix>)| !by.is_empty())
            .collect();
        Ok(DgModule {
            cat,
            values,
            actions,
        })
    }

    pub fn zero(cat: Arc<DgCategory>) -> DgModule {
        let values = (0..cat.objects().len())
            .map(|_| Complex::zero(cat.ring()))
            .collect();
        DgModule {
            cat,
            values,
            actions: BTreeMap::new(),
        }
    }

    pub fn cat(&self) -> &Arc<DgCategory> {
        &self.cat
    }

    pub fn ring(&self) -> Ring {
        self.cat.ring()
    }

    pub fn value(&self, x: usize) -> &Complex {
        &self.values[x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.total_rank() == 0)
    }

    /// The action of a basis morphism at one input degree, materialized.
    pub fn action_matrix(&self, f: BasisRef, n: i64) -> Matrix {
        let rows = self.values[f.src].rank(n + f.degree);
        let cols = self.values[f.tgt].rank(n);
        self.actions
            .get(&f)
            .and_then(|by| by.get(&n))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&self.ring(), rows, cols))
    }

    /// Action of a general element at one input degree: for each degree-`p`
    /// piece a matrix into output degree `n + p`.
    pub fn action_of_elt(&self, e: &HomElt, n: i64) -> BTreeMap<i64, Matrix> {
        let ring = self.ring();
        let mut out: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (&p, vec) in &e.coeffs {
            let rows = self.values[e.src].rank(n + p);
            let cols = self.values[e.tgt].rank(n);
            let mut acc = Matrix::zero(&ring, rows, cols);
            for (k, c) in vec.iter().enumerate() {
                if ring.is_zero(c) {
                    continue;
                }
                let m = self.action_matrix(
                    BasisRef {
                        src: e.src,
                        tgt: e.tgt,
                        degree: p,
                        index: k,
                    },
                    n,
                );
                acc = acc.add(&m.scale(c, &ring), &ring);
            }
            out.insert(n + p, acc);
        }
        out
    }

    pub fn actions(&self) -> &BTreeMap<BasisRef, BTreeMap<i64, Matrix>> {
        &self.actions
    }
}

/// Validates the dg-module axioms exhaustively over basis pairs.
pub fn check_dg_module(m: &DgModule) -> Result<Report, Error> {
    let mut report = Report::new("dg-module");
    let cat = m.cat();
    let ring = m.ring();
    for (x, v) in (0..cat.objects().len()).map(|x| (x, m.value(x))) {
        report.absorb(&format!("value({})", cat.objects()[x]), check_complex(v)?);
    }
    // Unit: action(1_x) is the identity in every degree.
    for x in 0..cat.objects().len() {
        let id = cat.identity_ref(x);
        for n in m.value(x).support() {
            if m.action_matrix(id, n) != Matrix::identity(&ring, m.value(x).rank(n)) {
                report.fail(
                    "unit action",
                    format!("action(1_{}) ≠ id at degree {}", cat.objects()[x], n),
                );
            }
        }
    }
    let basis = cat.all_basis();
    // Functoriality with the Koszul sign.
    for &g in &basis {
        for &f in &basis {
            if f.tgt != g.src {
                continue;
            }
            // g∘f: f.src -> g.tgt; action goes value(g.tgt) -> value(f.src).
            let gf = cat.compose_basis(g, f);
            for n in m.value(g.tgt).support() {
                let lhs = m
                    .action_of_elt(&gf, n)
                    .remove(&(n + g.degree + f.degree))
                    .unwrap_or_else(|| {
                        Matrix::zero(
                            &ring,
                            m.value(f.src).rank(n + g.degree + f.degree),
                            m.value(g.tgt).rank(n),
                        )
                    });
                let mut rhs = m
                    .action_matrix(f, n + g.degree)
                    .mul(&m.action_matrix(g, n), &ring);
                if (f.degree * g.degree).rem_euclid(2) == 1 {
                    rhs = rhs.neg(&ring);
                }
                if lhs != rhs {
                    report.fail(
                        "functoriality",
                        format!(
                            "action({}∘{}) ≠ (-1)^{{|f||g|}} action({})∘action({}) at input degree {}",
                            cat.basis_name(g),
                            cat.basis_name(f),
                            cat.basis_name(f),
                            cat.basis_name(g),
                            n
                        ),
                    );
                }
            }
        }
    }
    // d(action(f)) = action(df).
    for &f in &basis {
        let df = cat.elt_d(&cat.basis_elt(f));
        let p = f.degree;
        let degs: BTreeSet<i64> = m
            .value(f.tgt)
            .support()
            .chain(m.value(f.src).support().map(|n| n - p - 1))
            .collect();
        for n in degs {
            let lhs_a = m
                .value(f.src)
                .differential(n + p)
                .mul(&m.action_matrix(f, n), &ring);
            let mut lhs_b = m
                .action_matrix(f, n + 1)
                .mul(&m.value(f.tgt).differential(n), &ring);
            if p.rem_euclid(2) == 1 {
                lhs_b = lhs_b.neg(&ring);
            }
            let lhs = lhs_a.sub(&lhs_b, &ring);
            let rhs = m
                .action_of_elt(&df, n)
                .remove(&(n + p + 1))
                .unwrap_or_else(|| {
                    Matrix::zero(
                        &ring,
                        m.value(f.src).rank(n + p + 1),
                        m.value(f.tgt).rank(n),
                    )
                });
            if lhs != rhs {
                report.fail(
                    "differential compatibility",
                    format!(
                        "d(action({})) ≠ action(d {}) at input degree {}",
                        cat.basis_name(f),
                        cat.basis_name(f),
                        n
                    ),
                );
            }
        }
    }
    report.sort();
    Ok(report)
}

/// Direct sum, computed valuewise with block-diagonal actions.
pub fn direct_sum_dg(a: &DgModule, b: &DgModule) -> DgModule {
    assert_eq!(**a.cat(), **b.cat(), "direct sum over different categories");
    let cat = a.cat().clone();
    let ring = a.ring();
    let values: Vec<Complex> = (0..cat.objects().len())
        .map(|x| crate::graded::direct_sum(&[("l", a.value(x)), ("r", b.value(x))]))
        .collect();
    let mut actions = BTreeMap::new();
    for f in cat.all_basis() {
        let mut by = BTreeMap::new();
        let degs: BTreeSet<i64> = a
            .value(f.tgt)
            .support()
            .chain(b.value(f.tgt).support())
            .collect();
        for n in degs {
            let am = a.action_matrix(f, n);
            let bm = b.action_matrix(f, n);
            let rows = am.rows() + bm.rows();
            let cols = am.cols() + bm.cols();
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(&ring, rows, cols);
            for i in 0..am.rows() {
                for j in 0..am.cols() {
                    m.set(i, j, am.get(i, j).clone());
                }
            }
            for i in 0..bm.rows() {
                for j in 0..bm.cols() {
                    m.set(am.rows() + i, am.cols() + j, bm.get(i, j).clone());
                }
            }
            by.insert(n, m);
        }
        if !by.is_empty() {
            actions.insert(f, by);
        }
    }
    DgModule::new(cat, values, actions).expect("block sum shapes are consistent")
}

/// A degree-0 family of maps `a(x)^n -> b(x)^n`, the raw data of a module
/// homomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct DgModuleMap {
    pub components: Vec<BTreeMap<i64, Matrix>>,
}

impl DgModuleMap {
    pub fn component(&self, a: &DgModule, b: &DgModule, x: usize, n: i64) -> Matrix {
        self.components[x]
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&a.ring(), b.value(x).rank(n), a.value(x).rank(n)))
    }

    pub fn identity(m: &DgModule) -> DgModuleMap {
        let components = (0..m.cat().objects().len())
            .map(|x| {
                m.value(x)
                    .support()
                    .map(|n| (n, Matrix::identity(&m.ring(), m.value(x).rank(n))))
                    .collect()
            })
            .collect();
        DgModuleMap { components }
    }
}

/// Is `h` a degree-0 closed module homomorphism `a -> b`?
pub fn check_dg_module_map(a: &DgModule, b: &DgModule, h: &DgModuleMap) -> Result<Report, Error> {
    if **a.cat() != **b.cat() {
        return Err(Error::structural(
            "module map between modules over different categories",
        ));
    }
    if h.components.len() != a.cat().objects().len() {
        return Err(Error::structural(
            "one component family per object required",
        ));
    }
    let ring = a.ring();
    let mut report = Report::new("dg-module map");
    let degs =
        |x: usize| -> BTreeSet<i64> { a.value(x).support().chain(b.value(x).support()).collect() };
    for x in 0..a.cat().objects().len() {
        for n in degs(x) {
            let lhs = b
                .value(x)
                .differential(n)
                .mul(&h.component(a, b, x, n), &ring);
            let rhs = h
                .component(a, b, x, n + 1)
                .mul(&a.value(x).differential(n), &ring);
            if lhs != rhs {
                report.fail(
                    "chain map",
                    format!("at object {} degree {}", a.cat().objects()[x], n),
                );
            }
        }
    }
    for f in a.cat().all_basis() {
        for n in degs(f.tgt) {
            let lhs = h
                .component(a, b, f.src, n + f.degree)
                .mul(&a.action_matrix(f, n), &ring);
            let rhs = b
                .action_matrix(f, n)
                .mul(&h.component(a, b, f.tgt, n), &ring);
            if lhs != rhs {
                report.fail(
                    "action compatibility",
                    format!("at {} input degree {}", a.cat().basis_name(f), n),
                );
            }
        }
    }
    report.sort();
    Ok(report)
}

/// The space of degree-0 closed module homomorphisms `a -> b`, as a linear
/// system plus canonical solution generators.
pub struct HomSpace {
    sys: LinSys,
    index: BTreeMap<(usize, i64), usize>,
    objects: usize,
    pub solutions: Matrix,
}

impl HomSpace {
    pub fn basis_maps(&self) -> Vec<DgModuleMap> {
        (0..self.solutions.rows())
            .map(|r| self.unpack(self.solutions.row(r)))
            .collect()
    }

    pub fn unpack(&self, row: &[Scalar]) -> DgModuleMap {
        let mats = self.sys.unpack(row);
        let mut components: Vec<BTreeMap<i64, Matrix>> = vec![BTreeMap::new(); self.objects];
        for (&(x, n), &id) in &self.index {
            let m = mats[id].clone();
            if m.rows() * m.cols() > 0 {
                components[x].insert(n, m);
            }
        }
        DgModuleMap { components }
    }
}

pub fn module_hom_space(a: &DgModule, b: &DgModule) -> HomSpace {
    assert_eq!(**a.cat(), **b.cat(), "hom space over different categories");
    let ring = a.ring();
    let cat = a.cat();
    let mut sys = LinSys::new(ring);
    let mut index = BTreeMap::new();
    for x in 0..cat.objects().len() {
        let degs: BTreeSet<i64> = a.value(x).support().chain(b.value(x).support()).collect();
        for n in degs {
            let id = sys.unknown(b.value(x).rank(n), a.value(x).rank(n));
            index.insert((x, n), id);
        }
    }
    let lookup = |x: usize, n: i64| index.get(&(x, n)).copied();
    // Chain-map equations.
    for x in 0..cat.objects().len() {
        let degs: BTreeSet<i64> = a.value(x).support().chain(b.value(x).support()).collect();
        for &n in &degs {
            let out_rows = b.value(x).rank(n + 1);
            let out_cols = a.value(x).rank(n);
            if out_rows * out_cols == 0 {
                continue;
            }
            let mut terms = Vec::new();
            if let Some(h) = lookup(x, n) {
                terms.push((
                    b.value(x).differential(n),
                    h,
                    Matrix::identity(&ring, a.value(x).rank(n)),
                    false,
                ));
            }
            if let Some(h) = lookup(x, n + 1) {
                terms.push((
                    Matrix::identity(&ring, b.value(x).rank(n + 1)),
                    h,
                    a.value(x).differential(n),
                    true,
                ));
            }
            if !terms.is_empty() {
                sys.equation(&terms);
            }
        }
    }
    // Action-compatibility equations.
    for f in cat.all_basis() {
        let degs: BTreeSet<i64> = a
            .value(f.tgt)
            .support()
            .chain(b.value(f.tgt).support())
            .collect();
        for n in degs {
            let out_rows = b.value(f.src).rank(n + f.degree);
            let out_cols = a.value(f.tgt).rank(n);
            if out_rows * out_cols == 0 {
                continue;
            }
            let mut terms = Vec::new();
            if let Some(h) = lookup(f.src, n + f.degree) {
                terms.push((
                    Matrix::identity(&ring, out_rows),
                    h,
                    a.action_matrix(f, n),
                    false,
                ));
            }
            if let Some(h) = lookup(f.tgt, n) {
                terms.push((
                    b.action_matrix(f, n),
                    h,
                    Matrix::identity(&ring, out_cols),
                    true,
                ));
            }
            if !terms.is_empty() {
                sys.equation(&terms);
            }
        }
    }
    let solutions = sys.solve();
    HomSpace {
        sys,
        index,
        objects: cat.objects().len(),
        solutions,
    }
}

/// Verdict of a module comparison.
#[derive(Debug, Clone)]
pub enum Verdict {
    Equal,
    Isomorphic(DgModuleMap),
    NotIsomorphic(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equal => "Equal",
            Verdict::Isomorphic(_) => "Isomorphic",
            Verdict::NotIsomorphic(_) => "NotIsomorphic",
        }
    }

    pub fn is_equivalence(&self) -> bool {
        !matches!(self, Verdict::NotIsomorphic(_))
    }
}

/// Entrywise equality of values and actions (ignoring basis labels).
pub(crate) fn dg_modules_equal(a: &DgModule, b: &DgModule) -> bool {
    let cat = a.cat();
    for x in 0..cat.objects().len() {
        let degs: BTreeSet<i64> = a.value(x).support().chain(b.value(x).support()).collect();
        for n in degs.iter().copied() {
            if a.value(x).rank(n) != b.value(x).rank(n) {
                return false;
            }
            if a.value(x).differential(n) != b.value(x).differential(n) {
                return false;
            }
        }
    }
    for f in cat.all_basis() {
        let degs: BTreeSet<i64> = a
            .value(f.tgt)
            .support()
            .chain(b.value(f.tgt).support())
            .collect();
        for n in degs {
            if a.action_matrix(f, n) != b.action_matrix(f, n) {
                return false;
            }
        }
    }
    true
}

fn rank_profiles_match(a: &DgModule, b: &DgModule) -> Option<String> {
    let cat = a.cat();
    for x in 0..cat.objects().len() {
        let degs: BTreeSet<i64> = a.value(x).support().chain(b.value(x).support()).collect();
        for n in degs {
            if a.value(x).rank(n) != b.value(x).rank(n) {
                return Some(format!(
                    "rank profile mismatch at object {} degree {}: {} vs {}",
                    cat.objects()[x],
                    n,
                    a.value(x).rank(n),
                    b.value(x).rank(n)
                ));
            }
        }
    }
    None
}

fn map_is_invertible(a: &DgModule, b: &DgModule, h: &DgModuleMap) -> bool {
    let ring = a.ring();
    for x in 0..a.cat().objects().len() {
        let degs: BTreeSet<i64> = a.value(x).support().chain(b.value(x).support()).collect();
        for n in degs {
            if !matrix::is_invertible(&ring, &h.component(a, b, x, n)) {
                return false;
            }
        }
    }
    true
}

/// Search a solution row space for a member passing the `ok` predicate:
/// exhaustive over finite rings (within the enumeration cap), otherwise a
/// deterministic small-coefficient grid. Returns the first hit.
pub(crate) fn search_invertible<W>(
    ring: &Ring,
    solutions: &Matrix,
    unpack: impl Fn(&[Scalar]) -> W,
    ok: impl Fn(&W) -> bool,
) -> Option<W> {
    if solutions.rows() == 0 {
        let zero = unpack(&vec![ring.zero(); solutions.cols()]);
        return ok(&zero).then_some(zero);
    }
    if ring.is_finite() {
        if let Ok(elements) = matrix::enumerate_subgroup(ring, solutions, 1 << 20) {
            for v in elements {
                let h = unpack(&v);
                if ok(&h) {
                    return Some(h);
                }
            }
            return None;
        }
    }
    let r = solutions.rows();
    let try_combo = |coeffs: &[i64]| -> Option<W> {
        let mut flat = vec![ring.zero(); solutions.cols()];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = ring.from_i64(c);
            for j in 0..solutions.cols() {
                flat[j] = ring.add(&flat[j], &ring.mul(&s, solutions.get(k, j)));
            }
        }
        let h = unpack(&flat);
        ok(&h).then_some(h)
    };
    for k in 0..r {
        let mut coeffs = vec![0i64; r];
        coeffs[k] = 1;
        if let Some(h) = try_combo(&coeffs) {
            return Some(h);
        }
    }
    if let Some(h) = try_combo(&vec![1; r]) {
        return Some(h);
    }
    if r <= 8 {
        let mut idx = vec![0usize; r];
        loop {
            let coeffs: Vec<i64> = idx.iter().map(|&i| [(-1i64), 0, 1][i]).collect();
            if let Some(h) = try_combo(&coeffs) {
                return Some(h);
            }
            let mut k = r;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < 3 {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    None
}

/// Search the solution space for a degreewise invertible member.
fn find_invertible(a: &DgModule, b: &DgModule, space: &HomSpace) -> Option<DgModuleMap> {
    let ring = a.ring();
    search_invertible(
        &ring,
        &space.solutions,
        |row| space.unpack(row),
        |h| map_is_invertible(a, b, h),
    )
}

/// Strict equality first, then a finite search for a degreewise invertible
/// module map.
pub fn compare_dg_modules(a: &DgModule, b: &DgModule) -> Result<Verdict, Error> {
    if **a.cat() != **b.cat() {
        return Err(Error::structural(
            "comparison of modules over different categories",
        ));
    }
    if dg_modules_equal(a, b) {
        return Ok(Verdict::Equal);
    }
    if let Some(reason) = rank_profiles_match(a, b) {
        return Ok(Verdict::NotIsomorphic(reason));
    }
    let space = module_hom_space(a, b);
    if space.solutions.rows() == 0 && !a.is_zero() {
        return Ok(Verdict::NotIsomorphic(
            "the commuting linear system has only the zero solution".into(),
        ));
    }
    match find_invertible(a, b, &space) {
        Some(h) => Ok(Verdict::Isomorphic(h)),
        None => Ok(Verdict::NotIsomorphic(format!(
            "no degreewise invertible module map found (hom space has {} generators; search exhausted)",
            space.solutions.rows()
        ))),
    }
}
