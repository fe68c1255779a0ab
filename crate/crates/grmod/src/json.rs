//! JSON interchange for every external format: ground rings, complexes,
//! dg-categories, finite categories, representations, modules, preadditive
//! categories, and topology candidates.
//!
//! Parsers treat their input as untrusted: every failure is a reported
//! error with a field path, never a panic, and degrees are bounded so that
//! downstream arithmetic cannot overflow. Writers produce byte-stable
//! output (object keys sorted).

use num::bigint::BigInt;
use num::One;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use crate::category::{FiniteCategory, Morphism};
use crate::classify::CenterPresentation;
use crate::dgcat::{BasisRef, DgCategory, DgFunctor, HomElt};
use crate::dgmod::DgModule;
use crate::error::Error;
use crate::graded::{Complex, GradedModule};
use crate::matrix::Matrix;
use crate::preadd::{PreadditiveCategory, Subfunctor, TopologyCandidate};
use crate::rep::DgRepresentation;
use crate::ring::{Ring, Scalar};
use crate::rmod::RModule;

/// Degrees are clamped so that `degree ± small` arithmetic cannot overflow.
pub const MAX_DEGREE: i64 = 1 << 40;

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::parse(format!("{}: {}", path, msg))
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, Error> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, Error> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, Error> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn field<'a>(m: &'a Map<String, Value>, name: &str, path: &str) -> Result<&'a Value, Error> {
    m.get(name)
        .ok_or_else(|| err(path, format!("missing field {:?}", name)))
}

fn parse_degree(s: &str, path: &str) -> Result<i64, Error> {
    let n: i64 = s
        .parse()
        .map_err(|_| err(path, format!("invalid degree {:?}", s)))?;
    if n.abs() > MAX_DEGREE {
        return Err(err(path, format!("degree {} out of bounds", n)));
    }
    Ok(n)
}

fn parse_name(v: &Value, path: &str) -> Result<String, Error> {
    let s = as_str(v, path)?;
    if s.is_empty() || s.len() > 256 {
        return Err(err(path, "name must be 1..=256 characters"));
    }
    if s.contains("->") || s.contains('|') {
        return Err(err(path, "name must not contain '->' or '|'"));
    }
    Ok(s.to_string())
}

/// `{"ring": "Z"}`, `{"ring": "Q"}`, or `{"ring": "Z/n", "n": 4}`.
pub fn parse_ring(v: &Value) -> Result<Ring, Error> {
    let m = as_obj(v, "ring")?;
    let kind = as_str(field(m, "ring", "ring")?, "ring.ring")?;
    match kind {
        "Z" => Ok(Ring::Int),
        "Q" => Ok(Ring::Rat),
        "Z/n" => {
            let n = field(m, "n", "ring")?
                .as_u64()
                .ok_or_else(|| err("ring.n", "expected a positive integer"))?;
            Ring::new_mod(n)
        }
        other => Err(err("ring.ring", format!("unknown ring {:?}", other))),
    }
}

pub fn ring_to_json(ring: Ring) -> Map<String, Value> {
    let mut m = Map::new();
    match ring {
        Ring::Int => {
            m.insert("ring".into(), json!("Z"));
        }
        Ring::Rat => {
            m.insert("ring".into(), json!("Q"));
        }
        Ring::Mod(n) => {
            m.insert("ring".into(), json!("Z/n"));
            m.insert("n".into(), json!(n));
        }
    }
    m
}

fn parse_scalar(ring: Ring, v: &Value, path: &str) -> Result<Scalar, Error> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(ring.from_i64(i))
            } else {
                Err(err(path, "scalar out of i64 range; use a string"))
            }
        }
        Value::String(s) => {
            if let Some((num, den)) = s.split_once('/') {
                if ring != Ring::Rat {
                    return Err(err(path, "fractional scalar over a non-Q ring"));
                }
                let n = BigInt::from_str(num.trim())
                    .map_err(|_| err(path, format!("invalid numerator {:?}", num)))?;
                let d = BigInt::from_str(den.trim())
                    .map_err(|_| err(path, format!("invalid denominator {:?}", den)))?;
                if d == BigInt::from(0) {
                    return Err(err(path, "zero denominator"));
                }
                Ok(Scalar::Rat(num::rational::BigRational::new(n, d)))
            } else {
                let n = BigInt::from_str(s.trim())
                    .map_err(|_| err(path, format!("invalid integer {:?}", s)))?;
                Ok(ring.from_bigint(&n))
            }
        }
        _ => Err(err(path, "expected a number or a string scalar")),
    }
}

fn scalar_to_json(ring: Ring, s: &Scalar) -> Value {
    match s {
        Scalar::Int(v) => {
            if let Ok(i) = i64::try_from(v.clone()) {
                json!(i)
            } else {
                json!(v.to_string())
            }
        }
        Scalar::Rat(v) => {
            if v.denom().is_one() {
                if let Ok(i) = i64::try_from(v.numer().clone()) {
                    json!(i)
                } else {
                    json!(v.numer().to_string())
                }
            } else {
                json!(format!("{}/{}", v.numer(), v.denom()))
            }
        }
        Scalar::Mod(v) => {
            let _ = ring;
            json!(v)
        }
    }
}

fn parse_vector(ring: Ring, v: &Value, path: &str) -> Result<Vec<Scalar>, Error> {
    as_arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| parse_scalar(ring, e, &format!("{}[{}]", path, i)))
        .collect()
}

fn parse_matrix(ring: Ring, v: &Value, path: &str) -> Result<Matrix, Error> {
    let rows = as_arr(v, path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        out.push(parse_vector(ring, r, &format!("{}[{}]", path, i))?);
    }
    Matrix::from_rows(out).map_err(|e| err(path, e))
}

fn matrix_to_json(ring: Ring, m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| scalar_to_json(ring, m.get(i, j)))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// `{"degrees": {"-1": ["e"], "0": ["f"]}, "d": {"-1": [[1]]}}`.
pub fn parse_complex(ring: Ring, v: &Value, path: &str) -> Result<Complex, Error> {
    let m = as_obj(v, path)?;
    let mut degrees = BTreeMap::new();
    for (k, labels) in as_obj(field(m, "degrees", path)?, &format!("{}.degrees", path))? {
        let n = parse_degree(k, &format!("{}.degrees.{}", path, k))?;
        let labels = as_arr(labels, &format!("{}.degrees.{}", path, k))?
            .iter()
            .enumerate()
            .map(|(i, l)| {
                as_str(l, &format!("{}.degrees.{}[{}]", path, k, i)).map(|s| s.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        degrees.insert(n, labels);
    }
    let grading = GradedModule::new(degrees).map_err(|e| err(path, e))?;
    let mut diffs = BTreeMap::new();
    if let Some(d) = m.get("d") {
        for (k, mat) in as_obj(d, &format!("{}.d", path))? {
            let n = parse_degree(k, &format!("{}.d.{}", path, k))?;
            diffs.insert(n, parse_matrix(ring, mat, &format!("{}.d.{}", path, k))?);
        }
    }
    Complex::new(ring, grading, diffs).map_err(|e| err(path, e))
}

pub fn complex_to_json(c: &Complex) -> Value {
    let mut degrees = Map::new();
    for n in c.support() {
        degrees.insert(
            n.to_string(),
            Value::Array(c.grading().labels(n).iter().map(|l| json!(l)).collect()),
        );
    }
    let mut d = Map::new();
    for (n, m) in c.stored_differentials() {
        d.insert(n.to_string(), matrix_to_json(c.ring(), m));
    }
    let mut out = Map::new();
    out.insert("degrees".into(), Value::Object(degrees));
    if !d.is_empty() {
        out.insert("d".into(), Value::Object(d));
    }
    Value::Object(out)
}

fn split_hom_key(key: &str, path: &str) -> Result<(String, String), Error> {
    let (a, b) = key.split_once("->").ok_or_else(|| {
        err(
            path,
            format!("hom key {:?} is not of the form src->tgt", key),
        )
    })?;
    Ok((a.to_string(), b.to_string()))
}

struct HomTable {
    homs: BTreeMap<(usize, usize), Complex>,
}

impl HomTable {
    fn resolve(
        &self,
        objects: &[String],
        v: &Value,
        path: &str,
    ) -> Result<(BasisRef, usize), Error> {
        let arr = as_arr(v, path)?;
        let (key, deg, label) = match arr.len() {
            3 => (
                as_str(&arr[0], path)?,
                match &arr[1] {
                    Value::Number(n) => {
                        n.as_i64().ok_or_else(|| err(path, "degree out of range"))?
                    }
                    other => parse_degree(as_str(other, path)?, path)?,
                },
                as_str(&arr[2], path)?,
            ),
            2 => (as_str(&arr[0], path)?, 0, as_str(&arr[1], path)?),
            _ => return Err(err(path, "expected [hom, degree, label] or [hom, label]")),
        };
        if deg.abs() > MAX_DEGREE {
            return Err(err(path, "degree out of bounds"));
        }
        let (s, t) = split_hom_key(key, path)?;
        let src = objects
            .iter()
            .position(|o| *o == s)
            .ok_or_else(|| err(path, format!("unknown object {:?}", s)))?;
        let tgt = objects
            .iter()
            .position(|o| *o == t)
            .ok_or_else(|| err(path, format!("unknown object {:?}", t)))?;
        let hom = self
            .homs
            .get(&(src, tgt))
            .ok_or_else(|| err(path, format!("hom {:?} not declared", key)))?;
        let index = hom
            .grading()
            .labels(deg)
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| {
                err(
                    path,
                    format!("label {:?} not found in {:?} degree {}", label, key, deg),
                )
            })?;
        Ok((
            BasisRef {
                src,
                tgt,
                degree: deg,
                index,
            },
            hom.rank(deg),
        ))
    }
}

/// The dg-category format; also used (with degree-0 homs, where a plain
/// label list is accepted as shorthand) for preadditive categories.
pub fn parse_dg_category(v: &Value) -> Result<Arc<DgCategory>, Error> {
    let m = as_obj(v, "category")?;
    let ring = parse_ring(v)?;
    let mut objects = Vec::new();
    for (i, o) in as_arr(field(m, "objects", "category")?, "objects")?
        .iter()
        .enumerate()
    {
        objects.push(parse_name(o, &format!("objects[{}]", i))?);
    }
    if objects.len() > 256 {
        return Err(err("objects", "too many objects (max 256)"));
    }
    let mut homs = BTreeMap::new();
    for (key, cv) in as_obj(field(m, "hom", "category")?, "hom")? {
        let path = format!("hom.{}", key);
        let (s, t) = split_hom_key(key, &path)?;
        let src = objects
            .iter()
            .position(|o| *o == s)
            .ok_or_else(|| err(&path, format!("unknown object {:?}", s)))?;
        let tgt = objects
            .iter()
            .position(|o| *o == t)
            .ok_or_else(|| err(&path, format!("unknown object {:?}", t)))?;
        let complex = if cv.is_array() {
            // Degree-0 shorthand: a list of basis labels.
            let labels = as_arr(cv, &path)?
                .iter()
                .enumerate()
                .map(|(i, l)| as_str(l, &format!("{}[{}]", path, i)).map(|s| s.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            Complex::concentrated(ring, 0, labels)
        } else {
            parse_complex(ring, cv, &path)?
        };
        homs.insert((src, tgt), complex);
    }
    let table = HomTable { homs };
    let total: usize = table.homs.values().map(|c| c.total_rank()).sum();
    if total > 1 << 12 {
        return Err(err("hom", "total basis too large (max 4096)"));
    }
    let mut compose = BTreeMap::new();
    if let Some(list) = m.get("compose") {
        for (i, entry) in as_arr(list, "compose")?.iter().enumerate() {
            let path = format!("compose[{}]", i);
            let arr = as_arr(entry, &path)?;
            if arr.len() != 3 {
                return Err(err(&path, "expected [g, f, result-vector]"));
            }
            let (g, _) = table.resolve(&objects, &arr[0], &format!("{}.g", path))?;
            let (f, _) = table.resolve(&objects, &arr[1], &format!("{}.f", path))?;
            if g.src != f.tgt {
                return Err(err(&path, "pair is not composable"));
            }
            let result = parse_vector(ring, &arr[2], &format!("{}.result", path))?;
            compose.insert((g, f), result);
        }
    }
    let mut identities = Vec::new();
    let ids = as_obj(field(m, "id", "category")?, "id")?;
    for (x, name) in objects.iter().enumerate() {
        let label = as_str(field(ids, name, "id")?, &format!("id.{}", name))?;
        let hom = table
            .homs
            .get(&(x, x))
            .ok_or_else(|| err(&format!("id.{}", name), "endomorphism hom not declared"))?;
        let index = hom
            .grading()
            .labels(0)
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| {
                err(
                    &format!("id.{}", name),
                    format!("label {:?} not found in degree 0", label),
                )
            })?;
        identities.push(BasisRef {
            src: x,
            tgt: x,
            degree: 0,
            index,
        });
    }
    DgCategory::new(ring, objects, table.homs, compose, identities)
        .map(Arc::new)
        .map_err(|e| err("category", e))
}

pub fn dg_category_to_json(cat: &DgCategory) -> Value {
    let mut out = ring_to_json(cat.ring());
    out.insert("kind".into(), json!("dg-category"));
    out.insert(
        "objects".into(),
        Value::Array(cat.objects().iter().map(|o| json!(o)).collect()),
    );
    let mut homs = Map::new();
    for (&(x, y), c) in cat.homs() {
        homs.insert(
            format!("{}->{}", cat.objects()[x], cat.objects()[y]),
            complex_to_json(c),
        );
    }
    out.insert("hom".into(), Value::Object(homs));
    let ref_json = |r: &BasisRef| -> Value {
        let label = cat
            .hom(r.src, r.tgt)
            .map(|c| c.grading().labels(r.degree)[r.index].clone())
            .unwrap_or_default();
        json!([
            format!("{}->{}", cat.objects()[r.src], cat.objects()[r.tgt]),
            r.degree,
            label
        ])
    };
    let compose: Vec<Value> = cat
        .structure_constants()
        .iter()
        .map(|(&(g, f), vec)| {
            json!([
                ref_json(&g),
                ref_json(&f),
                Value::Array(vec.iter().map(|s| scalar_to_json(cat.ring(), s)).collect())
            ])
        })
        .collect();
    out.insert("compose".into(), Value::Array(compose));
    let mut ids = Map::new();
    for (x, name) in cat.objects().iter().enumerate() {
        let r = cat.identity_ref(x);
        let label = cat
            .hom(x, x)
            .map(|c| c.grading().labels(0)[r.index].clone())
            .unwrap_or_default();
        ids.insert(name.clone(), json!(label));
    }
    out.insert("id".into(), Value::Object(ids));
    Value::Object(out)
}

pub fn parse_finite_category(v: &Value) -> Result<FiniteCategory, Error> {
    let m = as_obj(v, "base")?;
    let mut objects = Vec::new();
    for (i, o) in as_arr(field(m, "objects", "base")?, "base.objects")?
        .iter()
        .enumerate()
    {
        objects.push(parse_name(o, &format!("base.objects[{}]", i))?);
    }
    let mut morphisms = Vec::new();
    for (i, mv) in as_arr(field(m, "morphisms", "base")?, "base.morphisms")?
        .iter()
        .enumerate()
    {
        let path = format!("base.morphisms[{}]", i);
        let mo = as_obj(mv, &path)?;
        let name = parse_name(field(mo, "name", &path)?, &format!("{}.name", path))?;
        let src_name = as_str(field(mo, "src", &path)?, &format!("{}.src", path))?;
        let tgt_name = as_str(field(mo, "tgt", &path)?, &format!("{}.tgt", path))?;
        let src = objects
            .iter()
            .position(|o| o == src_name)
            .ok_or_else(|| err(&path, format!("unknown source {:?}", src_name)))?;
        let tgt = objects
            .iter()
            .position(|o| o == tgt_name)
            .ok_or_else(|| err(&path, format!("unknown target {:?}", tgt_name)))?;
        morphisms.push(Morphism { name, src, tgt });
    }
    if morphisms.len() > 256 {
        return Err(err("base.morphisms", "too many morphisms (max 256)"));
    }
    let find_mor = |name: &str, path: &str| -> Result<usize, Error> {
        morphisms
            .iter()
            .position(|mo| mo.name == name)
            .ok_or_else(|| err(path, format!("unknown morphism {:?}", name)))
    };
    let mut compose = BTreeMap::new();
    for (i, cv) in as_arr(field(m, "compose", "base")?, "base.compose")?
        .iter()
        .enumerate()
    {
        let path = format!("base.compose[{}]", i);
        let arr = as_arr(cv, &path)?;
        if arr.len() != 3 {
            return Err(err(&path, "expected [b, a, b∘a]"));
        }
        let b = find_mor(as_str(&arr[0], &path)?, &path)?;
        let a = find_mor(as_str(&arr[1], &path)?, &path)?;
        let c = find_mor(as_str(&arr[2], &path)?, &path)?;
        compose.insert((b, a), c);
    }
    let ids = as_obj(field(m, "id", "base")?, "base.id")?;
    let mut identities = Vec::new();
    for name in &objects {
        let mor = as_str(field(ids, name, "base.id")?, &format!("base.id.{}", name))?;
        identities.push(find_mor(mor, &format!("base.id.{}", name))?);
    }
    FiniteCategory::new(objects, morphisms, compose, identities).map_err(|e| err("base", e))
}

pub fn finite_category_to_json(c: &FiniteCategory) -> Value {
    let mut out = Map::new();
    out.insert(
        "objects".into(),
        Value::Array(c.objects().iter().map(|o| json!(o)).collect()),
    );
    out.insert(
        "morphisms".into(),
        Value::Array(
            c.morphisms()
                .iter()
                .map(|m| {
                    json!({
                        "name": m.name,
                        "src": c.objects()[m.src],
                        "tgt": c.objects()[m.tgt]
                    })
                })
                .collect(),
        ),
    );
    let mut table = Vec::new();
    for (b, a) in c.composable_pairs() {
        if let Some(ba) = c.compose(b, a) {
            table.push(json!([
                c.morphisms()[b].name,
                c.morphisms()[a].name,
                c.morphisms()[ba].name
            ]));
        }
    }
    out.insert("compose".into(), Value::Array(table));
    let mut ids = Map::new();
    for (x, o) in c.objects().iter().enumerate() {
        ids.insert(o.clone(), json!(c.morphisms()[c.identity_of(x)].name));
    }
    out.insert("id".into(), Value::Object(ids));
    Value::Object(out)
}

fn parse_elt(
    ring: Ring,
    cat: &DgCategory,
    src: usize,
    tgt: usize,
    v: &Value,
    path: &str,
) -> Result<HomElt, Error> {
    let m = as_obj(v, path)?;
    let mut coeffs = BTreeMap::new();
    for (k, vec) in m {
        let n = parse_degree(k, &format!("{}.{}", path, k))?;
        let rank = cat.hom_rank(src, tgt, n);
        let vec = parse_vector(ring, vec, &format!("{}.{}", path, k))?;
        if vec.len() != rank {
            return Err(err(
                &format!("{}.{}", path, k),
                format!("expected {} coefficients, got {}", rank, vec.len()),
            ));
        }
        coeffs.insert(n, vec);
    }
    coeffs.retain(|_, v| v.iter().any(|c| !ring.is_zero(c)));
    Ok(HomElt { src, tgt, coeffs })
}

fn elt_to_json(ring: Ring, e: &HomElt) -> Value {
    let mut m = Map::new();
    for (n, vec) in &e.coeffs {
        m.insert(
            n.to_string(),
            Value::Array(vec.iter().map(|s| scalar_to_json(ring, s)).collect()),
        );
    }
    Value::Object(m)
}

/// Full representation format: base, fibers, functors, δ/η, μ/θ.
pub fn parse_representation(v: &Value) -> Result<DgRepresentation, Error> {
    let m = as_obj(v, "representation")?;
    let ring = parse_ring(v)?;
    let base = parse_finite_category(field(m, "base", "representation")?)?;
    let fibers_json = as_obj(field(m, "fibers", "representation")?, "fibers")?;
    let mut fibers = Vec::new();
    for name in base.objects() {
        let fv = field(fibers_json, name, "fibers")?;
        // Fibers inherit the file-level ring.
        let mut with_ring = as_obj(fv, &format!("fibers.{}", name))?.clone();
        for (k, v) in ring_to_json(ring) {
            with_ring.insert(k, v);
        }
        let cat = parse_dg_category(&Value::Object(with_ring))
            .map_err(|e| err(&format!("fibers.{}", name), e))?;
        fibers.push(cat);
    }
    let functors_json = as_obj(field(m, "functors", "representation")?, "functors")?;
    let mut functors = Vec::new();
    for mor in base.morphisms() {
        let path = format!("functors.{}", mor.name);
        let fv = as_obj(field(functors_json, &mor.name, "functors")?, &path)?;
        let src_cat = fibers[mor.src].clone();
        let tgt_cat = fibers[mor.tgt].clone();
        let obj_json = as_obj(field(fv, "obj", &path)?, &format!("{}.obj", path))?;
        let mut obj_map = Vec::new();
        for name in src_cat.objects() {
            let image = as_str(
                field(obj_json, name, &format!("{}.obj", path))?,
                &format!("{}.obj.{}", path, name),
            )?;
            let idx = tgt_cat
                .object_index(image)
                .ok_or_else(|| err(&format!("{}.obj.{}", path, name), "unknown target object"))?;
            obj_map.push(idx);
        }
        let mut maps = BTreeMap::new();
        if let Some(maps_json) = fv.get("maps") {
            for (key, by_degree) in as_obj(maps_json, &format!("{}.maps", path))? {
                let kpath = format!("{}.maps.{}", path, key);
                let (s, t) = split_hom_key(key, &kpath)?;
                let src = src_cat
                    .object_index(&s)
                    .ok_or_else(|| err(&kpath, format!("unknown object {:?}", s)))?;
                let tgt = src_cat
                    .object_index(&t)
                    .ok_or_else(|| err(&kpath, format!("unknown object {:?}", t)))?;
                let mut by = BTreeMap::new();
                for (dk, mat) in as_obj(by_degree, &kpath)? {
                    let n = parse_degree(dk, &format!("{}.{}", kpath, dk))?;
                    by.insert(n, parse_matrix(ring, mat, &format!("{}.{}", kpath, dk))?);
                }
                maps.insert((src, tgt), by);
            }
        }
        functors.push(DgFunctor::new(src_cat, tgt_cat, obj_map, maps).map_err(|e| err(&path, e))?);
    }
    let parse_components = |name: &str,
                            cat: &Arc<DgCategory>,
                            srcs: &dyn Fn(usize) -> usize,
                            tgts: &dyn Fn(usize) -> usize,
                            v: &Value|
     -> Result<Vec<HomElt>, Error> {
        let o = as_obj(v, name)?;
        let mut out = Vec::new();
        for x in 0..cat.objects().len() {
            let key = cat.objects()[x].clone();
            let ev = field(o, &key, name)?;
            out.push(parse_elt(
                ring,
                cat,
                srcs(x),
                tgts(x),
                ev,
                &format!("{}.{}", name, key),
            )?);
        }
        Ok(out)
    };
    let delta_json = as_obj(field(m, "delta", "representation")?, "delta")?;
    let eta_json = as_obj(field(m, "eta", "representation")?, "eta")?;
    let mut delta = Vec::new();
    for (i, iname) in base.objects().iter().enumerate() {
        let fiber = &fibers[i];
        let ru = &functors[base.identity_of(i)];
        let path = format!("delta.{}", iname);
        let comps = parse_components(
            &path,
            fiber,
            &|x| x,
            &|x| ru.apply_obj(x),
            field(delta_json, iname, "delta")?,
        )?;
        let ipath = format!("eta.{}", iname);
        let invs = parse_components(
            &ipath,
            fiber,
            &|x| ru.apply_obj(x),
            &|x| x,
            field(eta_json, iname, "eta")?,
        )?;
        delta.push((comps, invs));
    }
    let mu_json = as_obj(field(m, "mu", "representation")?, "mu")?;
    let theta_json = as_obj(field(m, "theta", "representation")?, "theta")?;
    let mut mu = BTreeMap::new();
    for (b, a) in base.composable_pairs() {
        let key = format!("{}|{}", base.morphisms()[b].name, base.morphisms()[a].name);
        let Some(ba) = base.compose(b, a) else {
            continue;
        };
        let i = base.morphisms()[a].src;
        let fiber_i = &fibers[i];
        let comp_obj = |x: usize| functors[b].apply_obj(functors[a].apply_obj(x));
        let tgt_obj = |x: usize| functors[ba].apply_obj(x);
        let k_fiber = functors[b].target.clone();
        let path = format!("mu.{}", key);
        let mv = field(mu_json, &key, "mu")
            .map_err(|_| err("mu", format!("missing μ for composable pair {:?}", key)))?;
        let o = as_obj(mv, &path)?;
        let mut comps = Vec::new();
        for xname in fiber_i.objects() {
            let ev = field(o, xname, &path)?;
            let x = fiber_i.object_index(xname).unwrap();
            comps.push(parse_elt(
                ring,
                &k_fiber,
                comp_obj(x),
                tgt_obj(x),
                ev,
                &format!("{}.{}", path, xname),
            )?);
        }
        let tpath = format!("theta.{}", key);
        let tv = field(theta_json, &key, "theta")
            .map_err(|_| err("theta", format!("missing θ for composable pair {:?}", key)))?;
        let o = as_obj(tv, &tpath)?;
        let mut invs = Vec::new();
        for xname in fiber_i.objects() {
            let ev = field(o, xname, &tpath)?;
            let x = fiber_i.object_index(xname).unwrap();
            invs.push(parse_elt(
                ring,
                &k_fiber,
                tgt_obj(x),
                comp_obj(x),
                ev,
                &format!("{}.{}", tpath, xname),
            )?);
        }
        mu.insert((b, a), (comps, invs));
    }
    DgRepresentation::new(base, fibers, functors, delta, mu).map_err(|e| err("representation", e))
}

pub fn representation_to_json(rep: &DgRepresentation) -> Value {
    let ring = rep.fiber(0).ring();
    let base = rep.base();
    let mut out = ring_to_json(ring);
    out.insert("kind".into(), json!("representation"));
    out.insert("base".into(), finite_category_to_json(base));
    let mut fibers = Map::new();
    for (i, name) in base.objects().iter().enumerate() {
        let mut cat = match dg_category_to_json(rep.fiber(i)) {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        cat.remove("ring");
        cat.remove("n");
        cat.remove("kind");
        fibers.insert(name.clone(), Value::Object(cat));
    }
    out.insert("fibers".into(), Value::Object(fibers));
    let mut functors = Map::new();
    for (a, mor) in base.morphisms().iter().enumerate() {
        let f = rep.functor(a);
        let src = &f.source;
        let mut obj = Map::new();
        for (x, name) in src.objects().iter().enumerate() {
            obj.insert(
                name.clone(),
                json!(f.target.objects()[f.apply_obj(x)].clone()),
            );
        }
        let mut maps = Map::new();
        for (&(x, y), c) in src.homs() {
            let mut by = Map::new();
            for n in c.support() {
                let mat = f.map_matrix(x, y, n);
                if !mat.is_zero(&ring) {
                    by.insert(n.to_string(), matrix_to_json(ring, &mat));
                }
            }
            if !by.is_empty() {
                maps.insert(
                    format!("{}->{}", src.objects()[x], src.objects()[y]),
                    Value::Object(by),
                );
            }
        }
        functors.insert(
            mor.name.clone(),
            json!({"obj": Value::Object(obj), "maps": Value::Object(maps)}),
        );
    }
    out.insert("functors".into(), Value::Object(functors));
    let mut delta = Map::new();
    let mut eta = Map::new();
    for (i, name) in base.objects().iter().enumerate() {
        let d = rep.delta(i);
        let fiber = rep.fiber(i);
        let mut comps = Map::new();
        let mut invs = Map::new();
        for (x, xname) in fiber.objects().iter().enumerate() {
            comps.insert(xname.clone(), elt_to_json(ring, d.component(x)));
            invs.insert(xname.clone(), elt_to_json(ring, d.inverse_component(x)));
        }
        delta.insert(name.clone(), Value::Object(comps));
        eta.insert(name.clone(), Value::Object(invs));
    }
    out.insert("delta".into(), Value::Object(delta));
    out.insert("eta".into(), Value::Object(eta));
    let mut mu = Map::new();
    let mut theta = Map::new();
    for (b, a) in base.composable_pairs() {
        if base.compose(b, a).is_none() {
            continue;
        }
        let key = format!("{}|{}", base.morphisms()[b].name, base.morphisms()[a].name);
        let t = rep.mu(b, a);
        let fiber_i = rep.fiber(base.morphisms()[a].src);
        let mut comps = Map::new();
        let mut invs = Map::new();
        for (x, xname) in fiber_i.objects().iter().enumerate() {
            comps.insert(xname.clone(), elt_to_json(ring, t.component(x)));
            invs.insert(xname.clone(), elt_to_json(ring, t.inverse_component(x)));
        }
        mu.insert(key.clone(), Value::Object(comps));
        theta.insert(key, Value::Object(invs));
    }
    out.insert("mu".into(), Value::Object(mu));
    out.insert("theta".into(), Value::Object(theta));
    Value::Object(out)
}

/// Dg-module over a given category: values per object, actions per basis
/// morphism (`[[homkey, degree, label], {"n": matrix, ...}]` entries).
pub fn parse_dg_module(v: &Value, cat: &Arc<DgCategory>) -> Result<DgModule, Error> {
    let m = as_obj(v, "module")?;
    let ring = cat.ring();
    if let Ok(file_ring) = parse_ring(v) {
        if file_ring != ring {
            return Err(err(
                "module.ring",
                "module ring differs from the category ring",
            ));
        }
    }
    let values_json = as_obj(field(m, "values", "module")?, "module.values")?;
    let mut values = Vec::new();
    for name in cat.objects() {
        match values_json.get(name) {
            Some(cv) => values.push(parse_complex(ring, cv, &format!("module.values.{}", name))?),
            None => values.push(Complex::zero(ring)),
        }
    }
    let table = HomTable {
        homs: cat.homs().clone(),
    };
    let mut actions = BTreeMap::new();
    if let Some(list) = m.get("actions") {
        for (i, entry) in as_arr(list, "module.actions")?.iter().enumerate() {
            let path = format!("module.actions[{}]", i);
            let arr = as_arr(entry, &path)?;
            if arr.len() != 2 {
                return Err(err(&path, "expected [basis-ref, degree-matrix-map]"));
            }
            let (f, _) = table.resolve(cat.objects(), &arr[0], &format!("{}.f", path))?;
            let mut by = BTreeMap::new();
            for (dk, mat) in as_obj(&arr[1], &format!("{}.maps", path))? {
                let n = parse_degree(dk, &format!("{}.maps.{}", path, dk))?;
                by.insert(
                    n,
                    parse_matrix(ring, mat, &format!("{}.maps.{}", path, dk))?,
                );
            }
            actions.insert(f, by);
        }
    }
    DgModule::new(cat.clone(), values, actions).map_err(|e| err("module", e))
}

pub fn dg_module_to_json(m: &DgModule) -> Value {
    let cat = m.cat();
    let ring = m.ring();
    let mut out = ring_to_json(ring);
    out.insert("kind".into(), json!("dg-module"));
    let mut values = Map::new();
    for (x, name) in cat.objects().iter().enumerate() {
        if m.value(x).total_rank() > 0 {
            values.insert(name.clone(), complex_to_json(m.value(x)));
        }
    }
    out.insert("values".into(), Value::Object(values));
    let mut actions = Vec::new();
    for (f, by) in m.actions() {
        let label = cat
            .hom(f.src, f.tgt)
            .map(|c| c.grading().labels(f.degree)[f.index].clone())
            .unwrap_or_default();
        let mut maps = Map::new();
        for (n, mat) in by {
            maps.insert(n.to_string(), matrix_to_json(ring, mat));
        }
        actions.push(json!([
            [
                format!("{}->{}", cat.objects()[f.src], cat.objects()[f.tgt]),
                f.degree,
                label
            ],
            Value::Object(maps)
        ]));
    }
    out.insert("actions".into(), Value::Array(actions));
    Value::Object(out)
}

/// R-module over a given representation.
pub fn parse_r_module(v: &Value, rep: &DgRepresentation) -> Result<RModule, Error> {
    let m = as_obj(v, "r-module")?;
    let ring = rep.fiber(0).ring();
    if let Ok(file_ring) = parse_ring(v) {
        if file_ring != ring {
            return Err(err(
                "r-module.ring",
                "module ring differs from the representation ring",
            ));
        }
    }
    let base = rep.base();
    let modules_json = as_obj(field(m, "modules", "r-module")?, "r-module.modules")?;
    let mut modules = Vec::new();
    for (i, name) in base.objects().iter().enumerate() {
        match modules_json.get(name) {
            Some(mv) => modules.push(
                parse_dg_module(mv, rep.fiber(i))
                    .map_err(|e| err(&format!("r-module.modules.{}", name), e))?,
            ),
            None => modules.push(DgModule::zero(rep.fiber(i).clone())),
        }
    }
    let maps_json = as_obj(field(m, "maps", "r-module")?, "r-module.maps")?;
    let mut maps = Vec::new();
    for (a, mor) in base.morphisms().iter().enumerate() {
        let fiber_i = rep.fiber(mor.src);
        let mut per_obj = vec![BTreeMap::new(); fiber_i.objects().len()];
        if let Some(av) = maps_json.get(&mor.name) {
            let path = format!("r-module.maps.{}", mor.name);
            for (xname, by_degree) in as_obj(av, &path)? {
                let x = fiber_i
                    .object_index(xname)
                    .ok_or_else(|| err(&path, format!("unknown fiber object {:?}", xname)))?;
                let mut by = BTreeMap::new();
                for (dk, mat) in as_obj(by_degree, &format!("{}.{}", path, xname))? {
                    let n = parse_degree(dk, &format!("{}.{}.{}", path, xname, dk))?;
                    by.insert(
                        n,
                        parse_matrix(ring, mat, &format!("{}.{}.{}", path, xname, dk))?,
                    );
                }
                per_obj[x] = by;
            }
        }
        maps.push(per_obj);
        let _ = a;
    }
    RModule::new(rep, modules, maps).map_err(|e| err("r-module", e))
}

pub fn r_module_to_json(m: &RModule, rep: &DgRepresentation) -> Value {
    let ring = rep.fiber(0).ring();
    let base = rep.base();
    let mut out = ring_to_json(ring);
    out.insert("kind".into(), json!("r-module"));
    let mut modules = Map::new();
    for (i, name) in base.objects().iter().enumerate() {
        let mut mv = match dg_module_to_json(m.module(i)) {
            Value::Object(o) => o,
            _ => unreachable!(),
        };
        mv.remove("ring");
        mv.remove("n");
        mv.remove("kind");
        modules.insert(name.clone(), Value::Object(mv));
    }
    out.insert("modules".into(), Value::Object(modules));
    let mut maps = Map::new();
    for (a, mor) in base.morphisms().iter().enumerate() {
        let fiber_i = rep.fiber(mor.src);
        let mut per_obj = Map::new();
        for (x, xname) in fiber_i.objects().iter().enumerate() {
            let mut by = Map::new();
            let rax = rep.functor(a).apply_obj(x);
            let degs: std::collections::BTreeSet<i64> = m
                .module(mor.tgt)
                .value(rax)
                .support()
                .chain(m.module(mor.src).value(x).support())
                .collect();
            for n in degs {
                let mat = m.structure_map(rep, a, x, n);
                if !mat.is_zero(&ring) {
                    by.insert(n.to_string(), matrix_to_json(ring, &mat));
                }
            }
            if !by.is_empty() {
                per_obj.insert(xname.clone(), Value::Object(by));
            }
        }
        maps.insert(mor.name.clone(), Value::Object(per_obj));
    }
    out.insert("maps".into(), Value::Object(maps));
    Value::Object(out)
}

pub fn parse_preadditive(v: &Value) -> Result<PreadditiveCategory, Error> {
    let cat = parse_dg_category(v)?;
    PreadditiveCategory::new(cat).map_err(|e| err("category", e))
}

pub fn preadditive_to_json(a: &PreadditiveCategory) -> Value {
    let mut out = match dg_category_to_json(a.cat()) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    out.insert("kind".into(), json!("preadditive"));
    Value::Object(out)
}

/// `{"J": {"x": [{"name": ..., "components": {"y": [[row], ...]}}, ...]}}`.
pub fn parse_topology(v: &Value, a: &PreadditiveCategory) -> Result<TopologyCandidate, Error> {
    let m = as_obj(v, "topology")?;
    let j = as_obj(field(m, "J", "topology")?, "topology.J")?;
    let ring = a.ring();
    let mut lists = vec![Vec::new(); a.objects().len()];
    for (xname, list) in j {
        let x = a
            .objects()
            .iter()
            .position(|o| o == xname)
            .ok_or_else(|| err("topology.J", format!("unknown object {:?}", xname)))?;
        for (i, sv) in as_arr(list, &format!("topology.J.{}", xname))?
            .iter()
            .enumerate()
        {
            let path = format!("topology.J.{}[{}]", xname, i);
            let so = as_obj(sv, &path)?;
            let mut components = BTreeMap::new();
            for (yname, rows) in as_obj(field(so, "components", &path)?, &path)? {
                let y = a
                    .objects()
                    .iter()
                    .position(|o| o == yname)
                    .ok_or_else(|| err(&path, format!("unknown object {:?}", yname)))?;
                let mat = parse_matrix(ring, rows, &format!("{}.components.{}", path, yname))?;
                if mat.cols() != a.hom_rank(y, x) {
                    return Err(err(
                        &format!("{}.components.{}", path, yname),
                        format!("rows must have length {}", a.hom_rank(y, x)),
                    ));
                }
                components.insert(y, mat);
            }
            lists[x].push(Subfunctor { at: x, components }.canonicalize(a));
        }
    }
    Ok(TopologyCandidate { lists })
}

pub fn topology_to_json(a: &PreadditiveCategory, t: &TopologyCandidate) -> Value {
    let ring = a.ring();
    let mut j = Map::new();
    for (x, list) in t.lists.iter().enumerate() {
        let arr: Vec<Value> = list
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut comps = Map::new();
                for (&y, m) in &s.components {
                    comps.insert(a.objects()[y].clone(), matrix_to_json(ring, m));
                }
                json!({"name": format!("S{}", i), "components": Value::Object(comps)})
            })
            .collect();
        j.insert(a.objects()[x].clone(), Value::Array(arr));
    }
    json!({ "J": Value::Object(j) })
}

pub fn center_to_json(a: &PreadditiveCategory, z: &CenterPresentation) -> Value {
    let ring = a.ring();
    let mut out = ring_to_json(ring);
    out.insert("rank".into(), json!(z.rank()));
    if let Some(card) = z.cardinality() {
        out.insert("cardinality".into(), json!(card.to_string()));
    }
    let mut basis = Vec::new();
    for i in 0..z.rank() {
        let mut fam = Map::new();
        let coords: Vec<Scalar> = {
            let mut c = vec![ring.zero(); z.rank()];
            c[i] = ring.one();
            c
        };
        for (x, name) in a.objects().iter().enumerate() {
            let comp = z.component(&coords, x);
            if comp.iter().any(|s| !ring.is_zero(s)) {
                fam.insert(
                    name.clone(),
                    Value::Array(comp.iter().map(|s| scalar_to_json(ring, s)).collect()),
                );
            }
        }
        basis.push(Value::Object(fam));
    }
    out.insert("basis".into(), Value::Array(basis));
    let mult: Vec<Value> = (0..z.rank())
        .map(|i| {
            Value::Array(
                (0..z.rank())
                    .map(|j| {
                        Value::Array(
                            z.mult[i][j]
                                .iter()
                                .map(|s| scalar_to_json(ring, s))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    out.insert("mult".into(), Value::Array(mult));
    out.insert(
        "one".into(),
        Value::Array(z.one.iter().map(|s| scalar_to_json(ring, s)).collect()),
    );
    Value::Object(out)
}

/// Parse entry points from raw text, for callers and fuzz targets.
pub fn value_from_str(s: &str) -> Result<Value, Error> {
    serde_json::from_str(s)
        .map_err(|e| Error::parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

pub fn representation_from_str(s: &str) -> Result<DgRepresentation, Error> {
    parse_representation(&value_from_str(s)?)
}

pub fn dg_category_from_str(s: &str) -> Result<Arc<DgCategory>, Error> {
    parse_dg_category(&value_from_str(s)?)
}

pub fn preadditive_from_str(s: &str) -> Result<PreadditiveCategory, Error> {
    parse_preadditive(&value_from_str(s)?)
}

pub fn complex_from_str(s: &str) -> Result<Complex, Error> {
    let v = value_from_str(s)?;
    let ring = parse_ring(&v)?;
    parse_complex(ring, &v, "complex")
}

pub fn dg_module_from_str(s: &str, cat: &Arc<DgCategory>) -> Result<DgModule, Error> {
    parse_dg_module(&value_from_str(s)?, cat)
}

pub fn r_module_from_str(s: &str, rep: &DgRepresentation) -> Result<RModule, Error> {
    parse_r_module(&value_from_str(s)?, rep)
}

pub fn topology_from_str(s: &str, a: &PreadditiveCategory) -> Result<TopologyCandidate, Error> {
    parse_topology(&value_from_str(s)?, a)
}

/// Render a JSON value deterministically (sorted keys, trailing newline).
pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
