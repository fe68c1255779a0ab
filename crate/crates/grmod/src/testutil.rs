//! Shared fixtures for in-crate tests: small dg-categories built by hand.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcat::{BasisRef, DgCategory};
use crate::graded::{Complex, GradedModule};
use crate::matrix::Matrix;
use crate::ring::{Ring, Scalar};

pub(crate) struct CatBuilder {
    ring: Ring,
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), Complex>,
    compose: BTreeMap<(BasisRef, BasisRef), Vec<Scalar>>,
    identities: BTreeMap<usize, BasisRef>,
}

impl CatBuilder {
    pub fn new(ring: Ring, objects: &[&str]) -> CatBuilder {
        CatBuilder {
            ring,
            objects: objects.iter().map(|s| s.to_string()).collect(),
            homs: BTreeMap::new(),
            compose: BTreeMap::new(),
            identities: BTreeMap::new(),
        }
    }

    fn obj(&self, name: &str) -> usize {
        self.objects
            .iter()
            .position(|o| o == name)
            .expect("known object")
    }

    /// Declare a hom complex: per-degree labels and per-degree differential rows.
    pub fn hom(
        mut self,
        src: &str,
        tgt: &str,
        degrees: &[(i64, &[&str])],
        diffs: &[(i64, &[&[i64]])],
    ) -> Self {
        let mut map = BTreeMap::new();
        for (n, labels) in degrees {
            map.insert(*n, labels.iter().map(|l| l.to_string()).collect());
        }
        let grading = GradedModule::new(map).unwrap();
        let mut d = BTreeMap::new();
        for (n, rows) in diffs {
            let m = Matrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|v| self.ring.from_i64(*v)).collect())
                    .collect(),
            )
            .unwrap();
            d.insert(*n, m);
        }
        let c = Complex::new(self.ring, grading, d).unwrap();
        self.homs.insert((self.obj(src), self.obj(tgt)), c);
        self
    }

    fn find(&self, src: usize, tgt: usize, label: &str) -> BasisRef {
        let c = self.homs.get(&(src, tgt)).expect("hom declared");
        for degree in c.support() {
            if let Some(index) = c.grading().labels(degree).iter().position(|l| l == label) {
                return BasisRef {
                    src,
                    tgt,
                    degree,
                    index,
                };
            }
        }
        panic!("label {:?} not found in hom", label);
    }

    /// Structure constant `g ∘ f = Σ coeff · basis(label)`.
    pub fn comp(
        mut self,
        g: (&str, &str, &str),
        f: (&str, &str, &str),
        result: &[(&str, i64)],
    ) -> Self {
        let gref = self.find(self.obj(g.0), self.obj(g.1), g.2);
        let fref = self.find(self.obj(f.0), self.obj(f.1), f.2);
        assert_eq!(gref.src, fref.tgt, "non-composable fixture pair");
        let tgt_hom = self
            .homs
            .get(&(fref.src, gref.tgt))
            .expect("target hom declared");
        let deg = gref.degree + fref.degree;
        let mut vec = vec![self.ring.zero(); tgt_hom.rank(deg)];
        for (label, coeff) in result {
            let r = self.find(fref.src, gref.tgt, label);
            assert_eq!(r.degree, deg, "result label in wrong degree");
            vec[r.index] = self.ring.add(&vec[r.index], &self.ring.from_i64(*coeff));
        }
        self.compose.insert((gref, fref), vec);
        self
    }

    pub fn id(mut self, obj: &str, label: &str) -> Self {
        let x = self.obj(obj);
        let r = self.find(x, x, label);
        self.identities.insert(x, r);
        self
    }

    pub fn build(self) -> Arc<DgCategory> {
        let n = self.objects.len();
        let ids = (0..n)
            .map(|x| *self.identities.get(&x).expect("identity declared"))
            .collect();
        Arc::new(DgCategory::new(self.ring, self.objects, self.homs, self.compose, ids).unwrap())
    }
}

/// The ground ring as a one-object dg-category concentrated in degree 0.
pub(crate) fn ground_cat(ring: Ring) -> Arc<DgCategory> {
    CatBuilder::new(ring, &["w"])
        .hom("w", "w", &[(0, &["1"])], &[])
        .comp(("w", "w", "1"), ("w", "w", "1"), &[("1", 1)])
        .id("w", "1")
        .build()
}

/// One object, hom `k·1 ⊕ k·ε` with `|ε| = 1`, `ε∘ε = 0`, zero differential.
pub(crate) fn eps_cat(ring: Ring) -> Arc<DgCategory> {
    CatBuilder::new(ring, &["w"])
        .hom("w", "w", &[(0, &["1"]), (1, &["eps"])], &[])
        .comp(("w", "w", "1"), ("w", "w", "1"), &[("1", 1)])
        .comp(("w", "w", "1"), ("w", "w", "eps"), &[("eps", 1)])
        .comp(("w", "w", "eps"), ("w", "w", "1"), &[("eps", 1)])
        .id("w", "1")
        .build()
}

/// The endomorphism dg-category of the disk complex `k --1--> k`:
/// basis `q` (degree -1), `1, u` (degree 0), `p` (degree 1) with
/// `d(q) = 1`, `d(u) = -p`, `p∘q = u`, `q∘p = 1 - u`, `u` idempotent.
/// Its composable odd-degree elements exercise every Leibniz sign.
pub(crate) fn disk_end_cat(ring: Ring) -> Arc<DgCategory> {
    CatBuilder::new(ring, &["w"])
        .hom(
            "w",
            "w",
            &[(-1, &["q"]), (0, &["1", "u"]), (1, &["p"])],
            &[(-1, &[&[1], &[0]]), (0, &[&[0, -1]])],
        )
        .comp(("w", "w", "1"), ("w", "w", "1"), &[("1", 1)])
        .comp(("w", "w", "1"), ("w", "w", "u"), &[("u", 1)])
        .comp(("w", "w", "u"), ("w", "w", "1"), &[("u", 1)])
        .comp(("w", "w", "1"), ("w", "w", "p"), &[("p", 1)])
        .comp(("w", "w", "p"), ("w", "w", "1"), &[("p", 1)])
        .comp(("w", "w", "1"), ("w", "w", "q"), &[("q", 1)])
        .comp(("w", "w", "q"), ("w", "w", "1"), &[("q", 1)])
        .comp(("w", "w", "u"), ("w", "w", "u"), &[("u", 1)])
        .comp(("w", "w", "u"), ("w", "w", "p"), &[("p", 1)])
        .comp(("w", "w", "q"), ("w", "w", "u"), &[("q", 1)])
        .comp(("w", "w", "p"), ("w", "w", "q"), &[("u", 1)])
        .comp(("w", "w", "q"), ("w", "w", "p"), &[("1", 1), ("u", -1)])
        .id("w", "1")
        .build()
}

/// The path category of the quiver `0 --a--> 1`, linearized.
pub(crate) fn a2_cat(ring: Ring) -> Arc<DgCategory> {
    CatBuilder::new(ring, &["0", "1"])
        .hom("0", "0", &[(0, &["1_0"])], &[])
        .hom("1", "1", &[(0, &["1_1"])], &[])
        .hom("0", "1", &[(0, &["a"])], &[])
        .comp(("0", "0", "1_0"), ("0", "0", "1_0"), &[("1_0", 1)])
        .comp(("1", "1", "1_1"), ("1", "1", "1_1"), &[("1_1", 1)])
        .comp(("1", "1", "1_1"), ("0", "1", "a"), &[("a", 1)])
        .comp(("0", "1", "a"), ("0", "0", "1_0"), &[("a", 1)])
        .id("0", "1_0")
        .id("1", "1_1")
        .build()
}

/// A fiber with two objects swapped by an involution: `u`, `v` with only
/// scalar endomorphisms.
pub(crate) fn two_point_cat(ring: Ring) -> Arc<DgCategory> {
    CatBuilder::new(ring, &["u", "v"])
        .hom("u", "u", &[(0, &["1_u"])], &[])
        .hom("v", "v", &[(0, &["1_v"])], &[])
        .comp(("u", "u", "1_u"), ("u", "u", "1_u"), &[("1_u", 1)])
        .comp(("v", "v", "1_v"), ("v", "v", "1_v"), &[("1_v", 1)])
        .id("u", "1_u")
        .id("v", "1_v")
        .build()
}

use crate::category::{arrow_category, c2_category, FiniteCategory};
use crate::dgcat::DgFunctor;
use crate::rep::DgRepresentation;

/// A functor between structurally equal categories, mapping objects by name
/// and homs by identity matrices.
pub(crate) fn iso_functor_by_names(src: Arc<DgCategory>, tgt: Arc<DgCategory>) -> DgFunctor {
    let obj_map: Vec<usize> = src
        .objects()
        .iter()
        .map(|o| tgt.object_index(o).expect("same object names"))
        .collect();
    let maps = src
        .homs()
        .iter()
        .map(|(&(x, y), c)| {
            let by_degree = c
                .support()
                .map(|n| (n, Matrix::identity(&src.ring(), c.rank(n))))
                .collect();
            ((x, y), by_degree)
        })
        .collect();
    DgFunctor::new(src, tgt, obj_map, maps).unwrap()
}

/// Trivial base (one object, one morphism) with the given fiber, strict.
pub(crate) fn trivial_rep(fiber: Arc<DgCategory>) -> DgRepresentation {
    let base = FiniteCategory::point();
    let f = DgFunctor::identity(fiber.clone());
    DgRepresentation::strict(base, vec![fiber], vec![f]).unwrap()
}

/// Arrow base `0 -> 1` with ground-ring fibers and `R(a)` the evident
/// identification.
pub(crate) fn arrow_strict_rep(ring: Ring) -> DgRepresentation {
    let base = arrow_category();
    let f0 = ground_cat(ring);
    let f1 = ground_cat(ring);
    let functors = vec![
        DgFunctor::identity(f0.clone()),
        DgFunctor::identity(f1.clone()),
        iso_functor_by_names(f0.clone(), f1.clone()),
    ];
    DgRepresentation::strict(base, vec![f0, f1], functors).unwrap()
}

/// Group base ℤ/2 with the ground-ring fiber, strict (`R(s)` = identity).
pub(crate) fn loop_strict_rep(ring: Ring) -> DgRepresentation {
    let base = c2_category();
    let fiber = ground_cat(ring);
    let functors = vec![
        DgFunctor::identity(fiber.clone()),
        DgFunctor::identity(fiber.clone()),
    ];
    DgRepresentation::strict(base, vec![fiber], functors).unwrap()
}

/// Group base ℤ/2 whose fiber has two objects swapped by `R(s)`, with the
/// genuinely non-identity coherence `μ_{s,s} = -1`.
pub(crate) fn loop_twisted_rep(ring: Ring) -> DgRepresentation {
    loop_twisted_rep_with_mu(ring, &[-1, -1])
}

/// Same data but with chosen scalars `μ_{s,s}` at the two fiber objects.
pub(crate) fn loop_twisted_rep_with_mu(ring: Ring, mu_ss: &[i64; 2]) -> DgRepresentation {
    let base = c2_category();
    let fiber = two_point_cat(ring);
    let swap = {
        let obj_map = vec![1, 0];
        let maps = fiber
            .homs()
            .iter()
            .map(|(&(x, y), c)| {
                let by_degree = c
                    .support()
                    .map(|n| (n, Matrix::identity(&ring, c.rank(n))))
                    .collect();
                ((x, y), by_degree)
            })
            .collect();
        DgFunctor::new(fiber.clone(), fiber.clone(), obj_map, maps).unwrap()
    };
    let functors = vec![DgFunctor::identity(fiber.clone()), swap];
    let ids: Vec<HomElt> = (0..2).map(|x| fiber.identity_elt(x)).collect();
    // μ_{s,1} and μ_{1,s} live at the swapped object.
    let ids_swapped: Vec<HomElt> = (0..2).map(|x| fiber.identity_elt(1 - x)).collect();
    let delta = vec![(ids.clone(), ids.clone())];
    let mut mu = BTreeMap::new();
    mu.insert((0usize, 0usize), (ids.clone(), ids.clone()));
    mu.insert((0, 1), (ids_swapped.clone(), ids_swapped.clone()));
    mu.insert((1, 0), (ids_swapped.clone(), ids_swapped.clone()));
    let comps: Vec<HomElt> = (0..2)
        .map(|x| fiber.elt_scale(&ring.from_i64(mu_ss[x]), &fiber.identity_elt(x)))
        .collect();
    let invs: Vec<HomElt> = (0..2)
        .map(|x| {
            let s = ring
                .inv(&ring.from_i64(mu_ss[x]))
                .expect("μ_{s,s} scalar must be a unit");
            fiber.elt_scale(&s, &fiber.identity_elt(x))
        })
        .collect();
    mu.insert((1, 1), (comps, invs));
    DgRepresentation::new(base, vec![fiber], functors, delta, mu).unwrap()
}

use crate::dgcat::HomElt;

/// Trivial base with a fiber over a ring where 2 is a unit, and the
/// non-identity unit coherence `δ = 2·id`, `η = ½`, `μ = ½·id`, `θ = 2·id`.
pub(crate) fn scaled_delta_rep(fiber: Arc<DgCategory>) -> DgRepresentation {
    let ring = fiber.ring();
    let base = FiniteCategory::point();
    let two = ring.from_i64(2);
    let half = ring
        .inv(&two)
        .expect("2 must be a unit for the scaled-δ fixture");
    let n = fiber.objects().len();
    let scaled = |s: &crate::ring::Scalar| -> Vec<HomElt> {
        (0..n)
            .map(|x| fiber.elt_scale(s, &fiber.identity_elt(x)))
            .collect()
    };
    let delta = vec![(scaled(&two), scaled(&half))];
    let mut mu = BTreeMap::new();
    mu.insert((0usize, 0usize), (scaled(&half), scaled(&two)));
    let f = DgFunctor::identity(fiber.clone());
    DgRepresentation::new(base, vec![fiber], vec![f], delta, mu).unwrap()
}

use crate::dgmod::DgModule;
use crate::graded::Complex as Cx;
use crate::rmod::RModule;

/// A module over a one-object fiber whose only basis morphism is the
/// identity: any complex as value, identity action.
pub(crate) fn ground_value_module(cat: Arc<DgCategory>, value: Cx) -> DgModule {
    let id = cat.identity_ref(0);
    let by: BTreeMap<i64, Matrix> = value
        .support()
        .map(|n| (n, Matrix::identity(&cat.ring(), value.rank(n))))
        .collect();
    DgModule::new(cat, vec![value], [(id, by)].into_iter().collect()).unwrap()
}

/// R-module over a trivial-base representation with a one-object ground
/// fiber; `M(1)` is forced to be `act(η)⁻¹` by (Mod.2).
pub(crate) fn ground_rmodule(rep: &DgRepresentation, value: Cx) -> RModule {
    let ring = value.ring();
    let m = ground_value_module(rep.fiber(0).clone(), value);
    let eta = rep.eta_at(0, 0);
    let mut by = BTreeMap::new();
    for n in m.value(0).support() {
        let act = m
            .action_of_elt(eta, n)
            .remove(&n)
            .unwrap_or_else(|| Matrix::zero(&ring, m.value(0).rank(n), m.value(0).rank(n)));
        by.insert(
            n,
            crate::matrix::invert(&ring, &act).expect("η acts invertibly"),
        );
    }
    RModule::new(rep, vec![m], vec![vec![by]]).unwrap()
}

/// Over the twisted loop: rank-1 values at both fiber objects with
/// `M(s)_u = sign`, `M(s)_v = -sign` (forced by `θ_{s,s} = -1`).
pub(crate) fn sign_module(rep: &DgRepresentation, sign: i64) -> RModule {
    sign_module_raw(rep, sign, -sign)
}

/// The invalid variant with both components equal: breaks (Mod.1) at (s, s).
pub(crate) fn sign_module_broken(rep: &DgRepresentation) -> RModule {
    sign_module_raw(rep, 1, 1)
}

fn sign_module_raw(rep: &DgRepresentation, at_u: i64, at_v: i64) -> RModule {
    let fiber = rep.fiber(0).clone();
    let ring = fiber.ring();
    let value = |label: &str| Cx::concentrated(ring, 0, vec![label.into()]);
    let mut actions = BTreeMap::new();
    for x in 0..2 {
        let id = fiber.identity_ref(x);
        actions.insert(
            id,
            [(0i64, Matrix::identity(&ring, 1))].into_iter().collect(),
        );
    }
    let m = DgModule::new(fiber, vec![value("mu"), value("mv")], actions).unwrap();
    let one_map = vec![
        [(0i64, Matrix::identity(&ring, 1))].into_iter().collect(),
        [(0i64, Matrix::identity(&ring, 1))].into_iter().collect(),
    ];
    let s_map = vec![
        [(
            0i64,
            Matrix::identity(&ring, 1).scale(&ring.from_i64(at_u), &ring),
        )]
        .into_iter()
        .collect(),
        [(
            0i64,
            Matrix::identity(&ring, 1).scale(&ring.from_i64(at_v), &ring),
        )]
        .into_iter()
        .collect(),
    ];
    RModule::new(rep, vec![m], vec![one_map, s_map]).unwrap()
}

/// Over the strict loop (group algebra): rank-1 value with `M(s) = sign`.
pub(crate) fn c2_scalar_module(rep: &DgRepresentation, sign: i64) -> RModule {
    let fiber = rep.fiber(0).clone();
    let ring = fiber.ring();
    let m = ground_value_module(fiber, Cx::concentrated(ring, 0, vec!["m".into()]));
    let mk = |v: i64| -> Vec<BTreeMap<i64, Matrix>> {
        vec![[(
            0i64,
            Matrix::identity(&ring, 1).scale(&ring.from_i64(v), &ring),
        )]
        .into_iter()
        .collect()]
    };
    RModule::new(rep, vec![m], vec![mk(1), mk(sign)]).unwrap()
}

/// Over the strict arrow: the simple module supported at the source.
pub(crate) fn simple_at_source(rep: &DgRepresentation) -> RModule {
    let ring = rep.fiber(0).ring();
    let m0 = ground_value_module(
        rep.fiber(0).clone(),
        Cx::concentrated(ring, 0, vec!["m".into()]),
    );
    let m1 = DgModule::zero(rep.fiber(1).clone());
    let id_map = |m: &DgModule| -> Vec<BTreeMap<i64, Matrix>> {
        vec![m
            .value(0)
            .support()
            .map(|n| (n, Matrix::identity(&ring, m.value(0).rank(n))))
            .collect()]
    };
    let maps = vec![id_map(&m0), id_map(&m1), vec![BTreeMap::new()]];
    RModule::new(rep, vec![m0, m1], maps).unwrap()
}

/// Over the strict arrow: the same value at both ends with `M(a)` the
/// identity (the "constant" module).
pub(crate) fn constant_arrow_module(rep: &DgRepresentation, value: Cx) -> RModule {
    let ring = value.ring();
    let m0 = ground_value_module(rep.fiber(0).clone(), value.clone());
    let m1 = ground_value_module(rep.fiber(1).clone(), value.clone());
    let ids = |v: &Cx| -> Vec<BTreeMap<i64, Matrix>> {
        vec![v
            .support()
            .map(|n| (n, Matrix::identity(&ring, v.rank(n))))
            .collect()]
    };
    let maps = vec![ids(&value), ids(&value), ids(&value)];
    RModule::new(rep, vec![m0, m1], maps).unwrap()
}

/// Over the disk-endomorphism fiber (trivial base): the module of maps
/// from the disk to the ground ring. Values: rank 1 in degrees -1 and 0
/// with connecting differential; `q` shifts `h0` to `h1`, `u` projects,
/// `p` maps `h1` to `-h0`.
pub(crate) fn dual_point_module(rep: &DgRepresentation) -> RModule {
    let fiber = rep.fiber(0).clone();
    let ring = fiber.ring();
    let mut degrees = BTreeMap::new();
    degrees.insert(-1, vec!["h1".to_string()]);
    degrees.insert(0, vec!["h0".to_string()]);
    let mut d = BTreeMap::new();
    d.insert(-1, Matrix::identity(&ring, 1));
    let value = Cx::new(ring, crate::graded::GradedModule::new(degrees).unwrap(), d).unwrap();

    let find = |label: &str| -> crate::dgcat::BasisRef {
        let c = fiber.hom(0, 0).unwrap();
        c.support()
            .find_map(|n| {
                c.grading()
                    .labels(n)
                    .iter()
                    .position(|l| l == label)
                    .map(|index| crate::dgcat::BasisRef {
                        src: 0,
                        tgt: 0,
                        degree: n,
                        index,
                    })
            })
            .unwrap()
    };
    let one = |v: i64| Matrix::identity(&ring, 1).scale(&ring.from_i64(v), &ring);
    let mut actions: BTreeMap<crate::dgcat::BasisRef, BTreeMap<i64, Matrix>> = BTreeMap::new();
    actions.insert(
        find("1"),
        [(-1i64, one(1)), (0, one(1))].into_iter().collect(),
    );
    actions.insert(find("u"), [(-1i64, one(1))].into_iter().collect());
    actions.insert(find("q"), [(0i64, one(1))].into_iter().collect());
    actions.insert(find("p"), [(-1i64, one(-1))].into_iter().collect());
    let m = DgModule::new(fiber, vec![value], actions).unwrap();
    let maps = vec![vec![m
        .value(0)
        .support()
        .map(|n| (n, Matrix::identity(&ring, m.value(0).rank(n))))
        .collect()]];
    RModule::new(rep, vec![m], maps).unwrap()
}

use crate::preadd::PreadditiveCategory;

/// The A₂ path category as a preadditive category.
pub(crate) fn a2_preadd(ring: Ring) -> PreadditiveCategory {
    PreadditiveCategory::new(a2_cat(ring)).unwrap()
}

/// Disjoint union of two one-object categories (two blocks).
pub(crate) fn two_block_preadd(ring: Ring) -> PreadditiveCategory {
    let cat = CatBuilder::new(ring, &["x", "y"])
        .hom("x", "x", &[(0, &["1_x"])], &[])
        .hom("y", "y", &[(0, &["1_y"])], &[])
        .comp(("x", "x", "1_x"), ("x", "x", "1_x"), &[("1_x", 1)])
        .comp(("y", "y", "1_y"), ("y", "y", "1_y"), &[("1_y", 1)])
        .id("x", "1_x")
        .id("y", "1_y")
        .build();
    PreadditiveCategory::new(cat).unwrap()
}

/// The ground ring as a one-object preadditive category.
pub(crate) fn point_preadd(ring: Ring) -> PreadditiveCategory {
    PreadditiveCategory::new(ground_cat(ring)).unwrap()
}

/// Group base ℤ/2 over Q with *every* coherence cell nontrivial:
/// δ = 2·id, μ_{s,1} = μ_{1,s} = μ_{1,1} = ½·id, μ_{s,s} = λ·id.
/// (Rep.2) forces the ½ entries; (Rep.1) holds for any unit λ.
pub(crate) fn c2_fully_scaled_rep(lambda: i64) -> DgRepresentation {
    let ring = Ring::Rat;
    let base = c2_category();
    let fiber = ground_cat(ring);
    let functors = vec![
        DgFunctor::identity(fiber.clone()),
        DgFunctor::identity(fiber.clone()),
    ];
    let scaled = |num: i64, den: i64| -> Vec<HomElt> {
        let s = ring.div(&ring.from_i64(num), &ring.from_i64(den)).unwrap();
        vec![fiber.elt_scale(&s, &fiber.identity_elt(0))]
    };
    let delta = vec![(scaled(2, 1), scaled(1, 2))];
    let mut mu = BTreeMap::new();
    mu.insert((0usize, 0usize), (scaled(1, 2), scaled(2, 1)));
    mu.insert((0, 1), (scaled(1, 2), scaled(2, 1)));
    mu.insert((1, 0), (scaled(1, 2), scaled(2, 1)));
    mu.insert((1, 1), (scaled(lambda, 1), scaled(1, lambda)));
    DgRepresentation::new(base, vec![fiber], functors, delta, mu).unwrap()
}
