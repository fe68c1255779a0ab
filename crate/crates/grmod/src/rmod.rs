//! Right modules over a dg-representation: a dg-module per fiber plus
//! structure maps along base morphisms, the restriction functor `a*`, and
//! the equivalence functors Φ and Ψ between this presentation and
//! dg-modules over the Grothendieck construction.

use std::collections::{BTreeMap, BTreeSet};

use crate::dgcat::{BasisRef, HomElt};
use crate::dgmod::{check_dg_module, dg_modules_equal, search_invertible, DgModule, DgModuleMap};
use crate::error::Error;
use crate::gr::{GrBuild, GrMorphism, GrObject};
use crate::linsys::LinSys;
use crate::matrix::{self, Matrix};
use crate::rep::DgRepresentation;
use crate::report::Report;
use crate::ring::Scalar;

/// A right module over a dg-representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RModule {
    modules: Vec<DgModule>,
    /// `maps[a][x][n]`: the structure map `M(a)` at fiber object `x` and
    /// degree `n`, a matrix `M_i(x)^n <- M_j(R(a)x)^n` for `a: i -> j`.
    maps: Vec<Vec<BTreeMap<i64, Matrix>>>,
}

impl RModule {
    pub fn new(
        rep: &DgRepresentation,
        modules: Vec<DgModule>,
        maps: Vec<Vec<BTreeMap<i64, Matrix>>>,
    ) -> Result<RModule, Error> {
        let base = rep.base();
        if modules.len() != base.objects().len() {
            return Err(Error::structural(
                "one fiber module per base object required",
            ));
        }
        for (i, m) in modules.iter().enumerate() {
            if **m.cat() != **rep.fiber(i) {
                return Err(Error::structural(format!(
                    "module at base object {} is not over the fiber R({})",
                    base.objects()[i],
                    base.objects()[i]
                )));
            }
        }
        if maps.len() != base.morphisms().len() {
            return Err(Error::structural(
                "one structure map per base morphism required",
            ));
        }
        for (a, per_obj) in maps.iter().enumerate() {
            let mor = &base.morphisms()[a];
            let (i, j) = (mor.src, mor.tgt);
            if per_obj.len() != rep.fiber(i).objects().len() {
                return Err(Error::structural(format!(
                    "M({}) needs one component per object of R({})",
                    mor.name,
                    base.objects()[i]
                )));
            }
            for (x, by_degree) in per_obj.iter().enumerate() {
                let rax = rep.functor(a).apply_obj(x);
                for (&n, mat) in by_degree {
                    let rows = modules[i].value(x).rank(n);
                    let cols = modules[j].value(rax).rank(n);
                    if mat.rows() != rows || mat.cols() != cols {
                        return Err(Error::structural(format!(
                            "M({}) at object {} degree {} has shape {}x{}, expected {}x{}",
                            mor.name,
                            rep.fiber(i).objects()[x],
                            n,
                            mat.rows(),
                            mat.cols(),
                            rows,
                            cols
                        )));
                    }
                }
            }
        }
        Ok(RModule { modules, maps })
    }

    pub fn zero(rep: &DgRepresentation) -> RModule {
        let modules = (0..rep.base().objects().len())
            .map(|i| DgModule::zero(rep.fiber(i).clone()))
            .collect();
        let maps = rep
            .base()
            .morphisms()
            .iter()
            .map(|m| vec![BTreeMap::new(); rep.fiber(m.src).objects().len()])
            .collect();
        RModule { modules, maps }
    }

    pub fn module(&self, i: usize) -> &DgModule {
        &self.modules[i]
    }

    pub fn modules(&self) -> &[DgModule] {
        &self.modules
    }

    pub fn structure_map(&self, rep: &DgRepresentation, a: usize, x: usize, n: i64) -> Matrix {
        let mor = &rep.base().morphisms()[a];
        let rax = rep.functor(a).apply_obj(x);
        let rows = self.modules[mor.src].value(x).rank(n);
        let cols = self.modules[mor.tgt].value(rax).rank(n);
        self.maps[a][x]
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(&self.modules[mor.src].ring(), rows, cols))
    }

    pub fn raw_maps(&self) -> &Vec<Vec<BTreeMap<i64, Matrix>>> {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(|m| m.is_zero())
    }
}

/// Restriction along a base morphism: `(a*M)(x) = M(R(a)x)` with action
/// through `R(a)`.
pub fn restrict(rep: &DgRepresentation, a: usize, m: &DgModule) -> Result<DgModule, Error> {
    let mor = &rep.base().morphisms()[a];
    let (i, j) = (mor.src, mor.tgt);
    if **m.cat() != **rep.fiber(j) {
        return Err(Error::structural(format!(
            "restriction along {} expects a module over R({})",
            mor.name,
            rep.base().objects()[j]
        )));
    }
    let fiber_i = rep.fiber(i).clone();
    let functor = rep.functor(a);
    let values: Vec<_> = (0..fiber_i.objects().len())
        .map(|x| m.value(functor.apply_obj(x)).clone())
        .collect();
    let mut actions = BTreeMap::new();
    for f in fiber_i.all_basis() {
        let image = functor.apply_basis(f);
        let mut by = BTreeMap::new();
        for n in values[f.tgt].support() {
            if let Some(mat) = m.action_of_elt(&image, n).remove(&(n + f.degree)) {
                by.insert(n, mat);
            }
        }
        if !by.is_empty() {
            actions.insert(f, by);
        }
    }
    DgModule::new(fiber_i, values, actions)
}

/// Structural and axiomatic validation of an R-module:
/// per-fiber dg-module axioms, closedness and naturality of each `M(a)`,
/// and the coherence triangles (Mod.1) and (Mod.2).
pub fn check_r_module(m: &RModule, rep: &DgRepresentation) -> Result<Report, Error> {
    let base = rep.base();
    let mut report = Report::new("r-module");
    for (i, module) in m.modules.iter().enumerate() {
        report.absorb(
            &format!("M_{}", base.objects()[i]),
            check_dg_module(module)?,
        );
    }
    let ring = rep.fiber(0).ring();
    for (a, mor) in base.morphisms().iter().enumerate() {
        let (i, j) = (mor.src, mor.tgt);
        let functor = rep.functor(a);
        for x in 0..rep.fiber(i).objects().len() {
            let rax = functor.apply_obj(x);
            // Degree 0 and closed: commutes with the value differentials.
            let degs: BTreeSet<i64> = m.modules[j]
                .value(rax)
                .support()
                .chain(m.modules[i].value(x).support())
                .collect();
            for &n in &degs {
                let lhs = m.modules[i]
                    .value(x)
                    .differential(n)
                    .mul(&m.structure_map(rep, a, x, n), &ring);
                let rhs = m
                    .structure_map(rep, a, x, n + 1)
                    .mul(&m.modules[j].value(rax).differential(n), &ring);
                if lhs != rhs {
                    report.fail(
                        "structure map closed",
                        format!(
                            "M({}) at object {} degree {}",
                            mor.name,
                            rep.fiber(i).objects()[x],
                            n
                        ),
                    );
                }
            }
        }
        // Naturality in x: M(a)_x ∘ M_j(R(a)f) = M_i(f) ∘ M(a)_y for f: x -> y.
        for f in rep.fiber(i).all_basis() {
            let (x, y, p) = (f.src, f.tgt, f.degree);
            let ray = functor.apply_obj(y);
            let image = functor.apply_basis(f);
            for n in m.modules[j].value(ray).support() {
                let act_j = m.modules[j]
                    .action_of_elt(&image, n)
                    .remove(&(n + p))
                    .unwrap_or_else(|| {
                        Matrix::zero(
                            &ring,
                            m.modules[j].value(functor.apply_obj(x)).rank(n + p),
                            m.modules[j].value(ray).rank(n),
                        )
                    });
                let lhs = m.structure_map(rep, a, x, n + p).mul(&act_j, &ring);
                let rhs = m.modules[i]
                    .action_matrix(f, n)
                    .mul(&m.structure_map(rep, a, y, n), &ring);
                if lhs != rhs {
                    report.fail(
                        "structure map naturality",
                        format!(
                            "M({}) against {} at input degree {}",
                            mor.name,
                            rep.fiber(i).basis_name(f),
                            n
                        ),
                    );
                }
            }
        }
    }
    // (Mod.1): M(a) ∘ a*M(b) = M(ba) ∘ (θ_{b,a}·1).
    for (b, a) in base.composable_pairs() {
        let Some(ba) = base.compose(b, a) else {
            continue;
        };
        let i = base.morphisms()[a].src;
        let k = base.morphisms()[b].tgt;
        for x in 0..rep.fiber(i).objects().len() {
            let rax = rep.functor(a).apply_obj(x);
            let rbrax = rep.functor(b).apply_obj(rax);
            let theta = rep.theta_at(b, a, x);
            for n in m.modules[k].value(rbrax).support() {
                let lhs = m
                    .structure_map(rep, a, x, n)
                    .mul(&m.structure_map(rep, b, rax, n), &ring);
                let act_theta = m.modules[k]
                    .action_of_elt(theta, n)
                    .remove(&n)
                    .unwrap_or_else(|| {
                        Matrix::zero(
                            &ring,
                            m.modules[k].value(rep.functor(ba).apply_obj(x)).rank(n),
                            m.modules[k].value(rbrax).rank(n),
                        )
                    });
                let rhs = m.structure_map(rep, ba, x, n).mul(&act_theta, &ring);
                if lhs != rhs {
                    report.fail(
                        "(Mod.1)",
                        format!(
                            "pair ({}, {}) at object {} degree {}",
                            base.morphisms()[a].name,
                            base.morphisms()[b].name,
                            rep.fiber(i).objects()[x],
                            n
                        ),
                    );
                }
            }
        }
    }
    // (Mod.2): M(1_i) ∘ (η_i·1) = 1.
    for (i, _) in base.objects().iter().enumerate() {
        let one = base.identity_of(i);
        for x in 0..rep.fiber(i).objects().len() {
            let eta = rep.eta_at(i, x);
            for n in m.modules[i].value(x).support() {
                let act_eta = m.modules[i]
                    .action_of_elt(eta, n)
                    .remove(&n)
                    .unwrap_or_else(|| {
                        Matrix::zero(
                            &ring,
                            m.modules[i].value(rep.functor(one).apply_obj(x)).rank(n),
                            m.modules[i].value(x).rank(n),
                        )
                    });
                let lhs = m.structure_map(rep, one, x, n).mul(&act_eta, &ring);
                if lhs != Matrix::identity(&ring, m.modules[i].value(x).rank(n)) {
                    report.fail(
                        "(Mod.2)",
                        format!("object {} degree {}", rep.fiber(i).objects()[x], n),
                    );
                }
            }
        }
    }
    report.sort();
    Ok(report)
}

/// Φ: repackage an R-module as a dg-module over `Gr(R)` via
/// `F_M[(f_a^p)] = Σ_a M(a)_x ∘ M_j(f_a)`.
pub fn phi(m: &RModule, gr: &GrBuild) -> Result<DgModule, Error> {
    let rep = gr.rep();
    let cat = gr.category().clone();
    let ring = cat.ring();
    let values: Vec<_> = gr
        .objects()
        .iter()
        .map(|&GrObject { base, fiber }| m.module(base).value(fiber).clone())
        .collect();
    let mut actions = BTreeMap::new();
    for fref in cat.all_basis() {
        let gm = gr.decompose(&cat.basis_elt(fref));
        let p_obj = gm.src;
        let q_obj = gm.tgt;
        let (_, x) = (p_obj.base, p_obj.fiber);
        let (j, y) = (q_obj.base, q_obj.fiber);
        let mut by: BTreeMap<i64, Matrix> = BTreeMap::new();
        for n in m.module(j).value(y).support() {
            let rows = values[fref.src].rank(n + fref.degree);
            let cols = values[fref.tgt].rank(n);
            if rows * cols == 0 {
                continue;
            }
            let mut acc = Matrix::zero(&ring, rows, cols);
            for (&(a, p), vec) in &gm.components {
                debug_assert_eq!(p, fref.degree);
                let rax = rep.functor(a).apply_obj(x);
                let fa = HomElt {
                    src: rax,
                    tgt: y,
                    coeffs: [(p, vec.clone())].into_iter().collect(),
                };
                let act = m
                    .module(j)
                    .action_of_elt(&fa, n)
                    .remove(&(n + p))
                    .unwrap_or_else(|| {
                        Matrix::zero(
                            &ring,
                            m.module(j).value(rax).rank(n + p),
                            m.module(j).value(y).rank(n),
                        )
                    });
                acc = acc.add(&m.structure_map(rep, a, x, n + p).mul(&act, &ring), &ring);
            }
            by.insert(n, acc);
        }
        if !by.is_empty() {
            actions.insert(fref, by);
        }
    }
    DgModule::new(cat, values, actions)
}

/// Ψ: recover an R-module from a dg-module over `Gr(R)`. Fiber actions go
/// through `g∘(η_i x)` in the Kronecker summand; structure maps through the
/// summand identity `(1_{R(a)x})` at `a`.
pub fn psi(f: &DgModule, gr: &GrBuild) -> Result<RModule, Error> {
    if **f.cat() != **gr.category() {
        return Err(Error::structural("Ψ expects a module over the built Gr(R)"));
    }
    let rep = gr.rep();
    let base = rep.base();
    let mut modules = Vec::new();
    for i in 0..base.objects().len() {
        let fiber = rep.fiber(i).clone();
        let values: Vec<_> = (0..fiber.objects().len())
            .map(|x| f.value(gr.object(i, x).expect("object present")).clone())
            .collect();
        let mut actions = BTreeMap::new();
        for g in fiber.all_basis() {
            // g: x -> x' gives the Gr morphism with the single component
            // g ∘ η_i x at a = 1_i, from _ix to _ix'.
            let (x, x2) = (g.src, g.tgt);
            let eta = rep.eta_at(i, x);
            let composite = fiber.elt_compose(&fiber.basis_elt(g), eta);
            let one = base.identity_of(i);
            let mut gm = GrMorphism::zero(
                GrObject { base: i, fiber: x },
                GrObject { base: i, fiber: x2 },
            );
            for (&deg, vec) in &composite.coeffs {
                gm.components.insert((one, deg), vec.clone());
            }
            let w = gr.embed(&gm);
            let mut by = BTreeMap::new();
            for n in values[x2].support() {
                if let Some(mat) = f.action_of_elt(&w, n).remove(&(n + g.degree)) {
                    by.insert(n, mat);
                }
            }
            if !by.is_empty() {
                actions.insert(g, by);
            }
        }
        modules.push(DgModule::new(fiber, values, actions)?);
    }
    let mut maps = Vec::new();
    for (a, mor) in base.morphisms().iter().enumerate() {
        let (i, j) = (mor.src, mor.tgt);
        let mut per_obj = Vec::new();
        for x in 0..rep.fiber(i).objects().len() {
            let rax = rep.functor(a).apply_obj(x);
            let fiber_j = rep.fiber(j);
            let ident = fiber_j.identity_elt(rax);
            let mut gm = GrMorphism::zero(
                GrObject { base: i, fiber: x },
                GrObject {
                    base: j,
                    fiber: rax,
                },
            );
            for (&deg, vec) in &ident.coeffs {
                gm.components.insert((a, deg), vec.clone());
            }
            let w = gr.embed(&gm);
            let mut by = BTreeMap::new();
            let tgt_obj = gr.object(j, rax).expect("object present");
            for n in f.value(tgt_obj).support() {
                if let Some(mat) = f.action_of_elt(&w, n).remove(&n) {
                    by.insert(n, mat);
                }
            }
            per_obj.push(by);
        }
        maps.push(per_obj);
    }
    RModule::new(rep, modules, maps)
}

/// Verdict of an R-module comparison.
#[derive(Debug, Clone)]
pub enum RVerdict {
    Equal,
    Isomorphic(RModuleMap),
    NotIsomorphic(String),
}

impl RVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            RVerdict::Equal => "Equal",
            RVerdict::Isomorphic(_) => "Isomorphic",
            RVerdict::NotIsomorphic(_) => "NotIsomorphic",
        }
    }

    pub fn is_equivalence(&self) -> bool {
        !matches!(self, RVerdict::NotIsomorphic(_))
    }
}

/// A family `h_i: M_i -> N_i` of degree-0 maps, the raw data of an
/// R-module homomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct RModuleMap {
    pub components: Vec<DgModuleMap>,
}

/// Validity of an R-module map: each `h_i` is a dg-module map and the
/// squares `N(a) ∘ a*h_j = h_i ∘ M(a)` commute.
pub fn check_r_module_map(
    m: &RModule,
    n: &RModule,
    h: &RModuleMap,
    rep: &DgRepresentation,
) -> Result<Report, Error> {
    if h.components.len() != m.modules.len() {
        return Err(Error::structural(
            "one component family per base object required",
        ));
    }
    let mut report = Report::new("r-module map");
    for i in 0..m.modules.len() {
        report.absorb(
            &format!("h_{}", rep.base().objects()[i]),
            crate::dgmod::check_dg_module_map(&m.modules[i], &n.modules[i], &h.components[i])?,
        );
    }
    let ring = rep.fiber(0).ring();
    for (a, mor) in rep.base().morphisms().iter().enumerate() {
        let (i, j) = (mor.src, mor.tgt);
        for x in 0..rep.fiber(i).objects().len() {
            let rax = rep.functor(a).apply_obj(x);
            let degs: BTreeSet<i64> = m.modules[j]
                .value(rax)
                .support()
                .chain(n.modules[j].value(rax).support())
                .collect();
            for deg in degs {
                let lhs = n.structure_map(rep, a, x, deg).mul(
                    &h.components[j].component(&m.modules[j], &n.modules[j], rax, deg),
                    &ring,
                );
                let rhs = h.components[i]
                    .component(&m.modules[i], &n.modules[i], x, deg)
                    .mul(&m.structure_map(rep, a, x, deg), &ring);
                if lhs != rhs {
                    report.fail(
                        "structure compatibility",
                        format!(
                            "M({}) square at object {} degree {}",
                            mor.name,
                            rep.fiber(i).objects()[x],
                            deg
                        ),
                    );
                }
            }
        }
    }
    report.sort();
    Ok(report)
}

/// Φ on morphisms: the same matrices, re-indexed over `Gr(R)` objects.
pub fn phi_map(h: &RModuleMap, gr: &GrBuild) -> DgModuleMap {
    let components = gr
        .objects()
        .iter()
        .map(|&GrObject { base, fiber }| h.components[base].components[fiber].clone())
        .collect();
    DgModuleMap { components }
}

/// Ψ on morphisms.
pub fn psi_map(h: &DgModuleMap, gr: &GrBuild) -> RModuleMap {
    let rep = gr.rep();
    let components = (0..rep.base().objects().len())
        .map(|i| {
            let comps = (0..rep.fiber(i).objects().len())
                .map(|x| h.components[gr.object(i, x).expect("object present")].clone())
                .collect();
            DgModuleMap { components: comps }
        })
        .collect();
    RModuleMap { components }
}

/// Direct sum of R-modules, computed valuewise.
pub fn direct_sum_r(a: &RModule, b: &RModule, rep: &DgRepresentation) -> RModule {
    let ring = rep.fiber(0).ring();
    let modules: Vec<DgModule> = (0..a.modules.len())
        .map(|i| crate::dgmod::direct_sum_dg(&a.modules[i], &b.modules[i]))
        .collect();
    let mut maps = Vec::new();
    for (m_idx, mor) in rep.base().morphisms().iter().enumerate() {
        let (i, _) = (mor.src, mor.tgt);
        let mut per_obj = Vec::new();
        for x in 0..rep.fiber(i).objects().len() {
            let rax = rep.functor(m_idx).apply_obj(x);
            let degs: BTreeSet<i64> = a.modules[mor.tgt]
                .value(rax)
                .support()
                .chain(b.modules[mor.tgt].value(rax).support())
                .collect();
            let mut by = BTreeMap::new();
            for n in degs {
                let am = a.structure_map(rep, m_idx, x, n);
                let bm = b.structure_map(rep, m_idx, x, n);
                let rows = am.rows() + bm.rows();
                let cols = am.cols() + bm.cols();
                if rows * cols == 0 {
                    continue;
                }
                let mut mat = Matrix::zero(&ring, rows, cols);
                for r in 0..am.rows() {
                    for c in 0..am.cols() {
                        mat.set(r, c, am.get(r, c).clone());
                    }
                }
                for r in 0..bm.rows() {
                    for c in 0..bm.cols() {
                        mat.set(am.rows() + r, am.cols() + c, bm.get(r, c).clone());
                    }
                }
                by.insert(n, mat);
            }
            per_obj.push(by);
        }
        maps.push(per_obj);
    }
    RModule { modules, maps }
}

fn r_modules_equal(a: &RModule, b: &RModule, rep: &DgRepresentation) -> bool {
    for i in 0..a.modules.len() {
        if !dg_modules_equal(&a.modules[i], &b.modules[i]) {
            return false;
        }
    }
    for (m_idx, mor) in rep.base().morphisms().iter().enumerate() {
        for x in 0..rep.fiber(mor.src).objects().len() {
            let rax = rep.functor(m_idx).apply_obj(x);
            let degs: BTreeSet<i64> = a.modules[mor.tgt]
                .value(rax)
                .support()
                .chain(b.modules[mor.tgt].value(rax).support())
                .collect();
            for n in degs {
                if a.structure_map(rep, m_idx, x, n) != b.structure_map(rep, m_idx, x, n) {
                    return false;
                }
            }
        }
    }
    true
}

/// Strict equality first, then a search for a family of degreewise
/// invertible maps commuting with all fiber actions and structure maps.
pub fn compare_r_modules(
    a: &RModule,
    b: &RModule,
    rep: &DgRepresentation,
) -> Result<RVerdict, Error> {
    if a.modules.len() != b.modules.len() {
        return Err(Error::structural(
            "comparison of modules over different bases",
        ));
    }
    if r_modules_equal(a, b, rep) {
        return Ok(RVerdict::Equal);
    }
    let ring = rep.fiber(0).ring();
    for i in 0..a.modules.len() {
        for x in 0..rep.fiber(i).objects().len() {
            let degs: BTreeSet<i64> = a.modules[i]
                .value(x)
                .support()
                .chain(b.modules[i].value(x).support())
                .collect();
            for n in degs {
                if a.modules[i].value(x).rank(n) != b.modules[i].value(x).rank(n) {
                    return Ok(RVerdict::NotIsomorphic(format!(
                        "rank profile mismatch at base {} object {} degree {}",
                        rep.base().objects()[i],
                        rep.fiber(i).objects()[x],
                        n
                    )));
                }
            }
        }
    }
    // One big linear system across all fibers and structure maps.
    let mut sys = LinSys::new(ring);
    let mut index: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
    for i in 0..a.modules.len() {
        for x in 0..rep.fiber(i).objects().len() {
            let degs: BTreeSet<i64> = a.modules[i]
                .value(x)
                .support()
                .chain(b.modules[i].value(x).support())
                .collect();
            for n in degs {
                let id = sys.unknown(b.modules[i].value(x).rank(n), a.modules[i].value(x).rank(n));
                index.insert((i, x, n), id);
            }
        }
    }
    let lookup = |i: usize, x: usize, n: i64| index.get(&(i, x, n)).copied();
    for i in 0..a.modules.len() {
        let am = &a.modules[i];
        let bm = &b.modules[i];
        for x in 0..rep.fiber(i).objects().len() {
            let degs: BTreeSet<i64> = am.value(x).support().chain(bm.value(x).support()).collect();
            for &n in &degs {
                let out_rows = bm.value(x).rank(n + 1);
                let out_cols = am.value(x).rank(n);
                if out_rows * out_cols == 0 {
                    continue;
                }
                let mut terms = Vec::new();
                if let Some(h) = lookup(i, x, n) {
                    terms.push((
                        bm.value(x).differential(n),
                        h,
                        Matrix::identity(&ring, out_cols),
                        false,
                    ));
                }
                if let Some(h) = lookup(i, x, n + 1) {
                    terms.push((
                        Matrix::identity(&ring, out_rows),
                        h,
                        am.value(x).differential(n),
                        true,
                    ));
                }
                if !terms.is_empty() {
                    sys.equation(&terms);
                }
            }
        }
        for f in rep.fiber(i).all_basis() {
            let degs: BTreeSet<i64> = am
                .value(f.tgt)
                .support()
                .chain(bm.value(f.tgt).support())
                .collect();
            for n in degs {
                let out_rows = bm.value(f.src).rank(n + f.degree);
                let out_cols = am.value(f.tgt).rank(n);
                if out_rows * out_cols == 0 {
                    continue;
                }
                let mut terms = Vec::new();
                if let Some(h) = lookup(i, f.src, n + f.degree) {
                    terms.push((
                        Matrix::identity(&ring, out_rows),
                        h,
                        am.action_matrix(f, n),
                        false,
                    ));
                }
                if let Some(h) = lookup(i, f.tgt, n) {
                    terms.push((
                        bm.action_matrix(f, n),
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
    }
    for (m_idx, mor) in rep.base().morphisms().iter().enumerate() {
        let (i, j) = (mor.src, mor.tgt);
        for x in 0..rep.fiber(i).objects().len() {
            let rax = rep.functor(m_idx).apply_obj(x);
            let degs: BTreeSet<i64> = a.modules[j]
                .value(rax)
                .support()
                .chain(b.modules[j].value(rax).support())
                .collect();
            for n in degs {
                let out_rows = b.modules[i].value(x).rank(n);
                let out_cols = a.modules[j].value(rax).rank(n);
                if out_rows * out_cols == 0 {
                    continue;
                }
                let mut terms = Vec::new();
                if let Some(h) = lookup(j, rax, n) {
                    terms.push((
                        b.structure_map(rep, m_idx, x, n),
                        h,
                        Matrix::identity(&ring, out_cols),
                        false,
                    ));
                }
                if let Some(h) = lookup(i, x, n) {
                    terms.push((
                        Matrix::identity(&ring, out_rows),
                        h,
                        a.structure_map(rep, m_idx, x, n),
                        true,
                    ));
                }
                if !terms.is_empty() {
                    sys.equation(&terms);
                }
            }
        }
    }
    let solutions = sys.solve();
    let unpack = |row: &[Scalar]| -> RModuleMap {
        let mats = sys.unpack(row);
        let components = (0..a.modules.len())
            .map(|i| {
                let comps = (0..rep.fiber(i).objects().len())
                    .map(|x| {
                        let mut by = BTreeMap::new();
                        for (&(ii, xx, n), &id) in &index {
                            if ii == i && xx == x {
                                let mmat = mats[id].clone();
                                if mmat.rows() * mmat.cols() > 0 {
                                    by.insert(n, mmat);
                                }
                            }
                        }
                        by
                    })
                    .map(|by| by)
                    .collect::<Vec<_>>();
                DgModuleMap { components: comps }
            })
            .collect();
        RModuleMap { components }
    };
    let is_invertible = |h: &RModuleMap| -> bool {
        for i in 0..a.modules.len() {
            for x in 0..rep.fiber(i).objects().len() {
                let degs: BTreeSet<i64> = a.modules[i]
                    .value(x)
                    .support()
                    .chain(b.modules[i].value(x).support())
                    .collect();
                for n in degs {
                    let mat = h.components[i].component(&a.modules[i], &b.modules[i], x, n);
                    if !matrix::is_invertible(&ring, &mat) {
                        return false;
                    }
                }
            }
        }
        true
    };
    if solutions.rows() == 0 && !a.is_zero() {
        return Ok(RVerdict::NotIsomorphic(
            "the commuting linear system has only the zero solution".into(),
        ));
    }
    match search_invertible(&ring, &solutions, unpack, is_invertible) {
        Some(h) => Ok(RVerdict::Isomorphic(h)),
        None => Ok(RVerdict::NotIsomorphic(format!(
            "no degreewise invertible family found (hom space has {} generators; search exhausted)",
            solutions.rows()
        ))),
    }
}

/// A `BasisRef` re-export convenience for callers manipulating raw actions.
pub type FiberBasisRef = BasisRef;
