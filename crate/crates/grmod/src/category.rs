//! Finite base categories: explicit object and morphism lists with a
//! composition table.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    /// `(b, a) -> b∘a` for `a: i -> j`, `b: j -> k`.
    compose: BTreeMap<(usize, usize), usize>,
    identities: Vec<usize>,
}

impl FiniteCategory {
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        compose: BTreeMap<(usize, usize), usize>,
        identities: Vec<usize>,
    ) -> Result<FiniteCategory, Error> {
        {
            let mut seen = std::collections::BTreeSet::new();
            for o in &objects {
                if !seen.insert(o) {
                    return Err(Error::structural(format!("duplicate object {:?}", o)));
                }
            }
            let mut seen = std::collections::BTreeSet::new();
            for m in &morphisms {
                if !seen.insert(&m.name) {
                    return Err(Error::structural(format!(
                        "duplicate morphism {:?}",
                        m.name
                    )));
                }
            }
        }
        for m in &morphisms {
            if m.src >= objects.len() || m.tgt >= objects.len() {
                return Err(Error::structural(format!(
                    "morphism {:?} has dangling source/target",
                    m.name
                )));
            }
        }
        for (&(b, a), &c) in &compose {
            for idx in [a, b, c] {
                if idx >= morphisms.len() {
                    return Err(Error::structural(
                        "composition table references unknown morphism",
                    ));
                }
            }
            if morphisms[b].src != morphisms[a].tgt {
                return Err(Error::structural(format!(
                    "composition entry ({}, {}) is not composable",
                    morphisms[b].name, morphisms[a].name
                )));
            }
            if morphisms[c].src != morphisms[a].src || morphisms[c].tgt != morphisms[b].tgt {
                return Err(Error::structural(format!(
                    "composite of ({}, {}) has wrong endpoints",
                    morphisms[b].name, morphisms[a].name
                )));
            }
        }
        if identities.len() != objects.len() {
            return Err(Error::structural(
                "one identity morphism per object required",
            ));
        }
        for (x, &id) in identities.iter().enumerate() {
            if id >= morphisms.len() || morphisms[id].src != x || morphisms[id].tgt != x {
                return Err(Error::structural(format!(
                    "identity of {:?} is not an endomorphism of it",
                    objects[x]
                )));
            }
        }
        Ok(FiniteCategory {
            objects,
            morphisms,
            compose,
            identities,
        })
    }

    /// The one-object one-morphism category.
    pub fn point() -> FiniteCategory {
        FiniteCategory::new(
            vec!["*".into()],
            vec![Morphism {
                name: "1".into(),
                src: 0,
                tgt: 0,
            }],
            [((0, 0), 0)].into_iter().collect(),
            vec![0],
        )
        .unwrap()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn identity_of(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn compose(&self, b: usize, a: usize) -> Option<usize> {
        self.compose.get(&(b, a)).copied()
    }

    /// Morphisms `i -> j`, sorted by name for deterministic summand order.
    pub fn hom_set(&self, i: usize, j: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].src == i && self.morphisms[m].tgt == j)
            .collect();
        out.sort_by(|&a, &b| self.morphisms[a].name.cmp(&self.morphisms[b].name));
        out
    }

    /// All composable pairs `(b, a)` (`a` first, then `b`).
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.morphisms.len() {
            for a in 0..self.morphisms.len() {
                if self.morphisms[b].src == self.morphisms[a].tgt {
                    out.push((b, a));
                }
            }
        }
        out
    }
}

/// Category axioms, exhaustively over all composable pairs and triples.
pub fn check_finite_category(c: &FiniteCategory) -> Result<Report, Error> {
    let mut report = Report::new("finite category");
    for (b, a) in c.composable_pairs() {
        if c.compose(b, a).is_none() {
            report.fail(
                "totality",
                format!(
                    "composite {}∘{} is not in the table",
                    c.morphisms[b].name, c.morphisms[a].name
                ),
            );
        }
    }
    for (x, _) in c.objects.iter().enumerate() {
        let id = c.identity_of(x);
        for (m, mor) in c.morphisms.iter().enumerate() {
            if mor.src == x {
                if let Some(r) = c.compose(m, id) {
                    if r != m {
                        report.fail(
                            "right identity",
                            format!("{}∘{} ≠ {}", mor.name, c.morphisms[id].name, mor.name),
                        );
                    }
                }
            }
            if mor.tgt == x {
                if let Some(r) = c.compose(id, m) {
                    if r != m {
                        report.fail(
                            "left identity",
                            format!("{}∘{} ≠ {}", c.morphisms[id].name, mor.name, mor.name),
                        );
                    }
                }
            }
        }
    }
    for (b, a) in c.composable_pairs() {
        for h in 0..c.morphisms.len() {
            if c.morphisms[h].src != c.morphisms[b].tgt {
                continue;
            }
            let left = c.compose(b, a).and_then(|ba| c.compose(h, ba));
            let right = c.compose(h, b).and_then(|hb| c.compose(hb, a));
            if let (Some(l), Some(r)) = (left, right) {
                if l != r {
                    report.fail(
                        "associativity",
                        format!(
                            "({}∘{})∘{} ≠ {}∘({}∘{})",
                            c.morphisms[h].name,
                            c.morphisms[b].name,
                            c.morphisms[a].name,
                            c.morphisms[h].name,
                            c.morphisms[b].name,
                            c.morphisms[a].name
                        ),
                    );
                }
            }
        }
    }
    report.sort();
    Ok(report)
}

/// The arrow category `0 -> 1` (three morphisms).
pub fn arrow_category() -> FiniteCategory {
    FiniteCategory::new(
        vec!["0".into(), "1".into()],
        vec![
            Morphism {
                name: "1_0".into(),
                src: 0,
                tgt: 0,
            },
            Morphism {
                name: "1_1".into(),
                src: 1,
                tgt: 1,
            },
            Morphism {
                name: "a".into(),
                src: 0,
                tgt: 1,
            },
        ],
        [((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2)]
            .into_iter()
            .collect(),
        vec![0, 1],
    )
    .unwrap()
}

/// The cyclic group of order two as a one-object category (`s∘s = 1`).
pub fn c2_category() -> FiniteCategory {
    FiniteCategory::new(
        vec!["*".into()],
        vec![
            Morphism {
                name: "1".into(),
                src: 0,
                tgt: 0,
            },
            Morphism {
                name: "s".into(),
                src: 0,
                tgt: 0,
            },
        ],
        [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)]
            .into_iter()
            .collect(),
        vec![0],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_arrow_and_c2_pass() {
        assert!(check_finite_category(&FiniteCategory::point())
            .unwrap()
            .passed());
        assert!(check_finite_category(&arrow_category()).unwrap().passed());
        assert!(check_finite_category(&c2_category()).unwrap().passed());
    }

    #[test]
    fn missing_composite_fails_totality() {
        let mut compose: BTreeMap<(usize, usize), usize> = [((0, 0), 0), ((1, 1), 1), ((2, 0), 2)]
            .into_iter()
            .collect();
        compose.remove(&((2, 0)));
        let c = FiniteCategory::new(
            vec!["0".into(), "1".into()],
            vec![
                Morphism {
                    name: "1_0".into(),
                    src: 0,
                    tgt: 0,
                },
                Morphism {
                    name: "1_1".into(),
                    src: 1,
                    tgt: 1,
                },
                Morphism {
                    name: "a".into(),
                    src: 0,
                    tgt: 1,
                },
            ],
            compose,
            vec![0, 1],
        )
        .unwrap();
        let report = check_finite_category(&c).unwrap();
        assert!(report.failures.iter().any(|f| f.axiom == "totality"));
    }

    #[test]
    fn dangling_endpoint_is_structural() {
        let r = FiniteCategory::new(
            vec!["0".into()],
            vec![Morphism {
                name: "f".into(),
                src: 0,
                tgt: 3,
            }],
            BTreeMap::new(),
            vec![0],
        );
        assert!(r.is_err());
    }
}
