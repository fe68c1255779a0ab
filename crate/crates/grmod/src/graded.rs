//! Graded free modules, cochain complexes, chain maps, disks, tensor
//! products, and cohomology. Degrees are integers, differentials raise
//! degree by one, and every object has finite declared support.

use num::bigint::BigInt;
use num::One;
use std::collections::BTreeMap;

use crate::error::Error;
use crate::matrix::{self, Matrix};
use crate::report::Report;
use crate::ring::Ring;

/// Basis-indexed free module per degree. Degrees outside the map have rank 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedModule {
    degrees: BTreeMap<i64, Vec<String>>,
}

impl GradedModule {
    pub fn new(degrees: BTreeMap<i64, Vec<String>>) -> Result<GradedModule, Error> {
        for (n, labels) in &degrees {
            let mut seen = std::collections::BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(Error::structural(format!(
                        "duplicate basis label {:?} in degree {}",
                        l, n
                    )));
                }
            }
        }
        let degrees = degrees.into_iter().filter(|(_, l)| !l.is_empty()).collect();
        Ok(GradedModule { degrees })
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |l| l.len())
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.degrees.get(&degree).map_or(&[], |l| l.as_slice())
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.degrees.keys().copied()
    }

    pub fn degrees(&self) -> &BTreeMap<i64, Vec<String>> {
        &self.degrees
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.values().map(|l| l.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }
}

/// A cochain complex of free modules with finite support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    ring: Ring,
    grading: GradedModule,
    /// `d[n]` maps degree `n` to degree `n+1`; shape `rank(n+1) x rank(n)`.
    /// Only nonzero components are stored.
    d: BTreeMap<i64, Matrix>,
}

impl Complex {
    pub fn new(
        ring: Ring,
        grading: GradedModule,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<Complex, Error> {
        for (n, m) in &diffs {
            let (rows, cols) = (grading.rank(n + 1), grading.rank(*n));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::structural(format!(
                    "differential at degree {} has shape {}x{}, expected {}x{}",
                    n,
                    m.rows(),
                    m.cols(),
                    rows,
                    cols
                )));
            }
        }
        let d = diffs
            .into_iter()
            .filter(|(_, m)| !m.is_zero(&ring))
            .collect();
        Ok(Complex { ring, grading, d })
    }

    /// The complex with the given basis labels in one degree and zero differential.
    pub fn concentrated(ring: Ring, degree: i64, labels: Vec<String>) -> Complex {
        let mut degrees = BTreeMap::new();
        degrees.insert(degree, labels);
        Complex {
            ring,
            grading: GradedModule::new(degrees).expect("unique labels"),
            d: BTreeMap::new(),
        }
    }

    /// The zero complex.
    pub fn zero(ring: Ring) -> Complex {
        Complex {
            ring,
            grading: GradedModule::default(),
            d: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn grading(&self) -> &GradedModule {
        &self.grading
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.grading.rank(degree)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.grading.support()
    }

    pub fn total_rank(&self) -> usize {
        self.grading.total_rank()
    }

    /// The differential out of `degree`, materializing zero when absent.
    pub fn differential(&self, degree: i64) -> Matrix {
        match self.d.get(&degree) {
            Some(m) => m.clone(),
            None => Matrix::zero(&self.ring, self.rank(degree + 1), self.rank(degree)),
        }
    }

    pub fn stored_differentials(&self) -> &BTreeMap<i64, Matrix> {
        &self.d
    }
}

/// The disk complex: the ground ring in degrees `n-1` and `n` with the
/// identity differential between them; acyclic by construction.
pub fn disk(ring: Ring, n: i64) -> Complex {
    let mut degrees = BTreeMap::new();
    degrees.insert(n - 1, vec!["e".to_string()]);
    degrees.insert(n, vec!["f".to_string()]);
    let mut d = BTreeMap::new();
    d.insert(n - 1, Matrix::identity(&ring, 1));
    Complex::new(ring, GradedModule::new(degrees).unwrap(), d).unwrap()
}

/// `d∘d = 0` in every degree; failures name the degree and the product.
pub fn check_complex(c: &Complex) -> Result<Report, Error> {
    // Shape validation happens at construction; revalidate here so raw data
    // routed through serde still gets a structural error.
    for (n, m) in &c.d {
        if m.rows() != c.rank(n + 1) || m.cols() != c.rank(*n) {
            return Err(Error::structural(format!(
                "differential at degree {} has shape {}x{}, expected {}x{}",
                n,
                m.rows(),
                m.cols(),
                c.rank(n + 1),
                c.rank(*n)
            )));
        }
    }
    let mut report = Report::new("complex");
    for n in c.support() {
        let dd = c.differential(n + 1).mul(&c.differential(n), &c.ring);
        if !dd.is_zero(&c.ring) {
            report.fail(
                "d∘d = 0",
                format!("degree {}: product {}", n, render_matrix(&dd)),
            );
        }
    }
    Ok(report)
}

pub(crate) fn render_matrix(m: &Matrix) -> String {
    let mut rows = Vec::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        rows.push(format!("[{}]", row.join(", ")));
    }
    format!("[{}]", rows.join(", "))
}

/// A degree-`p` graded map between complexes. Closedness (`d∘f = (-1)^p f∘d`)
/// is a separate predicate checked by [`check_chain_map`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub degree: i64,
    /// `components[n]`: source degree `n` -> target degree `n + degree`;
    /// shape `target.rank(n+degree) x source.rank(n)`. Zero when absent.
    pub components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(
        source: Complex,
        target: Complex,
        degree: i64,
        components: BTreeMap<i64, Matrix>,
    ) -> Result<ChainMap, Error> {
        for (n, m) in &components {
            let (rows, cols) = (target.rank(n + degree), source.rank(*n));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::structural(format!(
                    "chain map component at degree {} has shape {}x{}, expected {}x{}",
                    n,
                    m.rows(),
                    m.cols(),
                    rows,
                    cols
                )));
            }
        }
        let ring = source.ring();
        let components = components
            .into_iter()
            .filter(|(_, m)| !m.is_zero(&ring))
            .collect();
        Ok(ChainMap {
            source,
            target,
            degree,
            components,
        })
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let comps = c
            .support()
            .map(|n| (n, Matrix::identity(&c.ring(), c.rank(n))))
            .collect();
        ChainMap::new(c.clone(), c.clone(), 0, comps).unwrap()
    }

    pub fn component(&self, n: i64) -> Matrix {
        match self.components.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                &self.source.ring(),
                self.target.rank(n + self.degree),
                self.source.rank(n),
            ),
        }
    }
}

/// Validates shapes and, when requested, closedness under the convention
/// `d∘f = (-1)^{deg f} f∘d`.
pub fn check_chain_map(f: &ChainMap, require_closed: bool) -> Result<Report, Error> {
    if f.source.ring() != f.target.ring() {
        return Err(Error::structural(
            "chain map endpoints over different rings",
        ));
    }
    let ring = f.source.ring();
    let mut report = Report::new("chain map");
    if require_closed {
        let degs: std::collections::BTreeSet<i64> =
            f.source.support().flat_map(|n| [n, n - 1]).collect();
        for n in degs {
            let lhs = f
                .target
                .differential(n + f.degree)
                .mul(&f.component(n), &ring);
            let mut rhs = f.component(n + 1).mul(&f.source.differential(n), &ring);
            if f.degree.rem_euclid(2) == 1 {
                rhs = rhs.neg(&ring);
            }
            let diff = lhs.sub(&rhs, &ring);
            if !diff.is_zero(&ring) {
                report.fail(
                    "closedness",
                    format!(
                        "degree {}: d∘f - (-1)^{} f∘d = {}",
                        n,
                        f.degree,
                        render_matrix(&diff)
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// Basis of degree `n` of a tensor product, as `(p, i, j)` triples meaning
/// `x`-basis index `i` in degree `p` paired with `y`-basis index `j` in
/// degree `n - p`, in construction order.
pub fn tensor_basis_pairs(x: &Complex, y: &Complex, n: i64) -> Vec<(i64, usize, usize)> {
    let mut out = Vec::new();
    for p in x.support() {
        let q = n - p;
        for i in 0..x.rank(p) {
            for j in 0..y.rank(q) {
                out.push((p, i, j));
            }
        }
    }
    out
}

/// Total-degree tensor product with the Koszul differential
/// `d(u⊗v) = du⊗v + (-1)^{|u|} u⊗dv`.
pub fn tensor(x: &Complex, y: &Complex) -> Complex {
    assert_eq!(x.ring(), y.ring(), "tensor factors over different rings");
    let ring = x.ring();
    let mut degrees: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let supports: std::collections::BTreeSet<i64> = x
        .support()
        .flat_map(|p| y.support().map(move |q| p + q))
        .collect();
    for &n in &supports {
        let labels: Vec<String> = tensor_basis_pairs(x, y, n)
            .into_iter()
            .map(|(p, i, j)| {
                format!(
                    "({})⊗({})",
                    x.grading().labels(p)[i],
                    y.grading().labels(n - p)[j]
                )
            })
            .collect();
        if !labels.is_empty() {
            degrees.insert(n, labels);
        }
    }
    let grading = GradedModule::new(degrees).expect("tensor labels are pairwise distinct");

    let mut diffs = BTreeMap::new();
    for &n in &supports {
        let src = tensor_basis_pairs(x, y, n);
        let tgt = tensor_basis_pairs(x, y, n + 1);
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let index: BTreeMap<(i64, usize, usize), usize> = tgt
            .iter()
            .copied()
            .enumerate()
            .map(|(k, t)| (t, k))
            .collect();
        let mut m = Matrix::zero(&ring, tgt.len(), src.len());
        for (col, &(p, i, j)) in src.iter().enumerate() {
            let q = n - p;
            // du ⊗ v
            let dx = x.differential(p);
            for ti in 0..x.rank(p + 1) {
                let c = dx.get(ti, i);
                if ring.is_zero(c) {
                    continue;
                }
                if let Some(&row) = index.get(&(p + 1, ti, j)) {
                    m.set(row, col, ring.add(m.get(row, col), c));
                }
            }
            // (-1)^{|u|} u ⊗ dv
            let dy = y.differential(q);
            for tj in 0..y.rank(q + 1) {
                let c = dy.get(tj, j);
                if ring.is_zero(c) {
                    continue;
                }
                let signed = if p.rem_euclid(2) == 1 {
                    ring.neg(c)
                } else {
                    c.clone()
                };
                if let Some(&row) = index.get(&(p, i, tj)) {
                    m.set(row, col, ring.add(m.get(row, col), &signed));
                }
            }
        }
        diffs.insert(n, m);
    }
    Complex::new(ring, grading, diffs).expect("tensor differential shapes are consistent")
}

/// Direct sum of complexes (block diagonal differential); labels are
/// prefixed to stay unique.
pub fn direct_sum(parts: &[(&str, &Complex)]) -> Complex {
    assert!(!parts.is_empty(), "direct sum of no complexes needs a ring");
    let ring = parts[0].1.ring();
    let mut degrees: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let supports: std::collections::BTreeSet<i64> = parts
        .iter()
        .flat_map(|(_, c)| c.support().collect::<Vec<_>>())
        .collect();
    for &n in &supports {
        let mut labels = Vec::new();
        for (tag, c) in parts {
            for l in c.grading().labels(n) {
                labels.push(format!("{}:{}", tag, l));
            }
        }
        if !labels.is_empty() {
            degrees.insert(n, labels);
        }
    }
    let grading = GradedModule::new(degrees).expect("tagged labels unique");
    let mut diffs = BTreeMap::new();
    for &n in &supports {
        let rows: usize = parts.iter().map(|(_, c)| c.rank(n + 1)).sum();
        let cols: usize = parts.iter().map(|(_, c)| c.rank(n)).sum();
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(&ring, rows, cols);
        let mut ro = 0usize;
        let mut co = 0usize;
        for (_, c) in parts {
            let d = c.differential(n);
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    m.set(ro + i, co + j, d.get(i, j).clone());
                }
            }
            ro += c.rank(n + 1);
            co += c.rank(n);
        }
        diffs.insert(n, m);
    }
    Complex::new(ring, grading, diffs).expect("block differential shapes consistent")
}

/// One cohomology group: a free part and invariant factors of the torsion
/// part (over `Q` the torsion list is always empty; over `Z/n` the group is
/// finite so the free rank is zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Cohomology of a complex in every supported degree. Requires `d∘d = 0`.
pub fn cohomology(c: &Complex) -> Result<BTreeMap<i64, CohomologyGroup>, Error> {
    let rep = check_complex(c)?;
    if !rep.passed() {
        return Err(Error::structural("cohomology of a non-complex (d∘d ≠ 0)"));
    }
    let ring = c.ring();
    let mut out = BTreeMap::new();
    for n in c.support() {
        let r = c.rank(n);
        let d_out = c.differential(n);
        let d_in = c.differential(n - 1);
        let group = match ring {
            Ring::Rat => {
                let ker = r - matrix::rank(&ring, &d_out);
                let im = matrix::rank(&ring, &d_in);
                CohomologyGroup {
                    free_rank: ker - im,
                    torsion: Vec::new(),
                }
            }
            Ring::Int => {
                let kernel = matrix::left_kernel(&ring, &d_out.transpose());
                let image = matrix::row_canonical(&ring, &d_in.transpose());
                quotient_group(&ring, &kernel, &image)?
            }
            Ring::Mod(m) => {
                // Lift: kernel lattice {v : d v ≡ 0 mod m} and image lattice
                // (columns of d_in plus m·Z^r), both inside Z^r.
                let int = Ring::Int;
                let lift = |mat: &Matrix| -> Matrix {
                    Matrix::from_fn(mat.rows(), mat.cols(), |i, j| {
                        int.from_bigint(&ring.lift(mat.get(i, j)).unwrap())
                    })
                };
                let modulus = int.from_bigint(&BigInt::from(m));
                let scaled = Matrix::identity(&int, r).scale(&modulus, &int);
                let g = lift(&d_out.transpose())
                    .vstack(&Matrix::identity(&int, c.rank(n + 1)).scale(&modulus, &int));
                // {(v, t) : v d^T + m t = 0} projected to v.
                let k = matrix::left_kernel(&int, &g);
                let kernel_rows = Matrix::from_fn(k.rows(), r, |i, j| k.get(i, j).clone());
                let kernel = matrix::row_canonical(&int, &kernel_rows.vstack(&scaled));
                let image = matrix::row_canonical(&int, &lift(&d_in.transpose()).vstack(&scaled));
                quotient_group(&int, &kernel, &image)?
            }
        };
        out.insert(n, group);
    }
    Ok(out)
}

/// The abelian group (row span of `kernel`) / (row span of `image`) over `Z`,
/// assuming the image is contained in the kernel.
fn quotient_group(ring: &Ring, kernel: &Matrix, image: &Matrix) -> Result<CohomologyGroup, Error> {
    let k = kernel.rows();
    let mut coord_rows = Vec::new();
    for i in 0..image.rows() {
        let coords = matrix::solve_left(ring, kernel, image.row(i))
            .ok_or_else(|| Error::structural("image is not contained in kernel (d∘d ≠ 0?)"))?;
        coord_rows.push(coords);
    }
    let c = if coord_rows.is_empty() {
        Matrix::zero(ring, 0, k)
    } else {
        Matrix::from_rows(coord_rows).expect("rectangular")
    };
    let factors = matrix::smith_int(&c);
    Ok(CohomologyGroup {
        free_rank: k - factors.len(),
        torsion: factors.into_iter().filter(|f| !f.is_one()).collect(),
    })
}
