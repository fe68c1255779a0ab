//! Dense exact matrices over a ground ring, with the row-reduction kernels
//! everything else is built on: RREF over `Q`, Hermite and Smith normal
//! forms over `Z`, and `Z/n` linear algebra by lifting to `Z` (a submodule
//! of `(Z/n)^m` is handled as the integer lattice spanned by lifted
//! generators together with `n·Z^m`).
//!
//! Row convention: subgroups/submodules are row spans; linear maps act on
//! column vectors.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::Error;
use crate::ring::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::structural("ragged matrix rows"));
            }
            entries.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self, ring: &Ring) -> bool {
        self.entries.iter().all(|e| ring.is_zero(e))
    }

    pub fn add(&self, other: &Matrix, ring: &Ring) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix add shape"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            ring.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Matrix, ring: &Ring) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix sub shape"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            ring.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn neg(&self, ring: &Ring) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.neg(self.get(i, j)))
    }

    pub fn scale(&self, s: &Scalar, ring: &Ring) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.mul(s, self.get(i, j)))
    }

    pub fn mul(&self, other: &Matrix, ring: &Ring) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix mul shape");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                acc = ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        })
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Scalar], ring: &Ring) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix apply shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    acc = ring.add(&acc, &ring.mul(self.get(i, k), &v[k]));
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, v: &[Scalar], ring: &Ring) -> Vec<Scalar> {
        assert_eq!(self.rows, v.len(), "matrix apply_left shape");
        (0..self.cols)
            .map(|j| {
                let mut acc = ring.zero();
                for k in 0..self.rows {
                    acc = ring.add(&acc, &ring.mul(&v[k], self.get(k, j)));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack shape");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack shape");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn submatrix_cols(&self, lo: usize, hi: usize) -> Matrix {
        Matrix::from_fn(self.rows, hi - lo, |i, j| self.get(i, lo + j).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

// ---------------------------------------------------------------------------
// Integer kernels: Hermite form, Smith form, Bareiss determinant.
// ---------------------------------------------------------------------------

fn to_bigint_grid(m: &Matrix, ring: &Ring) -> Result<Vec<Vec<BigInt>>, Error> {
    let mut out = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut row = Vec::with_capacity(m.cols);
        for j in 0..m.cols {
            row.push(ring.lift(m.get(i, j))?);
        }
        out.push(row);
    }
    Ok(out)
}

fn grid_to_matrix(g: &[Vec<BigInt>], ring: &Ring) -> Matrix {
    let rows = g.len();
    let cols = g.first().map_or(0, |r| r.len());
    Matrix::from_fn(rows, cols, |i, j| ring.from_bigint(&g[i][j]))
}

/// Row Hermite normal form over `Z` with a unimodular transform:
/// returns `(H, U, pivots)` with `U * A = H`, `U` unimodular, `H` canonical
/// (pivots positive and strictly ordered, entries above a pivot reduced into
/// `[0, pivot)`, zero rows at the bottom). `pivots[r]` is the pivot column
/// of row `r`.
pub fn hermite_int(a: &Matrix) -> (Matrix, Matrix, Vec<usize>) {
    let ring = Ring::Int;
    let mut h = to_bigint_grid(a, &ring).expect("hermite_int expects integer entries");
    let rows = a.rows;
    let cols = a.cols;
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // Clear everything below row r in column c down to one gcd entry.
        let mut found = None;
        for i in r..rows {
            if !h[i][c].is_zero() {
                found = Some(i);
                break;
            }
        }
        let Some(first) = found else { continue };
        h.swap(r, first);
        u.swap(r, first);
        for i in (r + 1)..rows {
            if h[i][c].is_zero() {
                continue;
            }
            let (g, x, y) = extgcd(&h[r][c], &h[i][c]);
            let (pr, pi) = (h[r][c].clone(), h[i][c].clone());
            let (cr, ci) = (&pr / &g, &pi / &g);
            for j in 0..cols {
                let nr = &x * &h[r][j] + &y * &h[i][j];
                let ni = -&ci * &h[r][j] + &cr * &h[i][j];
                h[r][j] = nr;
                h[i][j] = ni;
            }
            for j in 0..rows {
                let nr = &x * &u[r][j] + &y * &u[i][j];
                let ni = -&ci * &u[r][j] + &cr * &u[i][j];
                u[r][j] = nr;
                u[i][j] = ni;
            }
        }
        if h[r][c].is_negative() {
            for j in 0..cols {
                h[r][j] = -h[r][j].clone();
            }
            for j in 0..rows {
                u[r][j] = -u[r][j].clone();
            }
        }
        // Reduce the rows above r modulo the new pivot.
        let pivot = h[r][c].clone();
        for i in 0..r {
            if h[i][c].is_zero() {
                continue;
            }
            let q = h[i][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                h[i][j] = &h[i][j] - &q * &h[r][j];
            }
            for j in 0..rows {
                u[i][j] = &u[i][j] - &q * &u[r][j];
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (grid_to_matrix(&h, &ring), grid_to_matrix(&u, &ring), pivots)
}

/// Extended gcd: `(g, x, y)` with `x*a + y*b = g`, `g = gcd(a,b) >= 0`.
pub fn extgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (s0, s1) = (s1.clone(), &s0 - &q * &s1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Smith normal form over `Z`: returns the positive invariant factors
/// `d_1 | d_2 | ... | d_r` (length = rank).
pub fn smith_int(a: &Matrix) -> Vec<BigInt> {
    let mut m = to_bigint_grid(a, &Ring::Int).expect("smith_int expects integer entries");
    let rows = a.rows;
    let cols = a.cols;
    let mut factors = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < rows && left < cols {
        // Find a nonzero entry to pivot on.
        let mut pivot = None;
        'search: for i in top..rows {
            for j in left..cols {
                if !m[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(left, pj);
        }
        loop {
            // Clear the column with row operations.
            let mut dirty = false;
            for i in (top + 1)..rows {
                if m[i][left].is_zero() {
                    continue;
                }
                let (g, x, y) = extgcd(&m[top][left], &m[i][left]);
                let (a0, b0) = (m[top][left].clone(), m[i][left].clone());
                let (ca, cb) = (&a0 / &g, &b0 / &g);
                for j in left..cols {
                    let nt = &x * &m[top][j] + &y * &m[i][j];
                    let ni = -&cb * &m[top][j] + &ca * &m[i][j];
                    m[top][j] = nt;
                    m[i][j] = ni;
                }
            }
            // Clear the row with column operations.
            for j in (left + 1)..cols {
                if m[top][j].is_zero() {
                    continue;
                }
                let (g, x, y) = extgcd(&m[top][left], &m[top][j]);
                let (a0, b0) = (m[top][left].clone(), m[top][j].clone());
                let (ca, cb) = (&a0 / &g, &b0 / &g);
                for i in top..rows {
                    let nl = &x * &m[i][left] + &y * &m[i][j];
                    let nj = -&cb * &m[i][left] + &ca * &m[i][j];
                    m[i][left] = nl;
                    m[i][j] = nj;
                }
                dirty = true;
            }
            if !dirty {
                break;
            }
        }
        factors.push(m[top][left].abs());
        top += 1;
        left += 1;
    }
    // Enforce the divisibility chain d_i | d_{i+1}.
    let n = factors.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (factors[i].clone(), factors[j].clone());
            if (&b % &a).is_zero() {
                continue;
            }
            let g = a.gcd(&b);
            let l = (&a * &b) / &g;
            factors[i] = g;
            factors[j] = l;
        }
    }
    factors
}

/// Fraction-free (Bareiss) determinant of an integer square matrix.
pub fn det_int(a: &Matrix) -> BigInt {
    assert_eq!(a.rows, a.cols, "determinant of non-square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = to_bigint_grid(a, &Ring::Int).expect("det_int expects integer entries");
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

// ---------------------------------------------------------------------------
// Rational kernel: reduced row echelon form with transform.
// ---------------------------------------------------------------------------

/// RREF over `Q` with transform: `(R, U, pivots)`, `U * A = R`, `U` invertible.
pub fn rref_rat(a: &Matrix) -> (Matrix, Matrix, Vec<usize>) {
    let ring = Ring::Rat;
    let mut h = a.clone();
    let mut u = Matrix::identity(&ring, a.rows);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..a.cols {
        let Some(p) = (r..a.rows).find(|&i| !ring.is_zero(h.get(i, c))) else {
            continue;
        };
        h.swap_rows(r, p);
        u.swap_rows(r, p);
        let inv = ring.inv(h.get(r, c)).expect("nonzero rational is a unit");
        for j in 0..a.cols {
            h.set(r, j, ring.mul(&inv, h.get(r, j)));
        }
        for j in 0..a.rows {
            u.set(r, j, ring.mul(&inv, u.get(r, j)));
        }
        for i in 0..a.rows {
            if i == r || ring.is_zero(h.get(i, c)) {
                continue;
            }
            let f = h.get(i, c).clone();
            for j in 0..a.cols {
                let v = ring.sub(h.get(i, j), &ring.mul(&f, h.get(r, j)));
                h.set(i, j, v);
            }
            for j in 0..a.rows {
                let v = ring.sub(u.get(i, j), &ring.mul(&f, u.get(r, j)));
                u.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.rows {
            break;
        }
    }
    (h, u, pivots)
}

// ---------------------------------------------------------------------------
// Ring-dispatched operations. `Z/n` questions are answered by lifting the
// generators to `Z` and adjoining `n` times the ambient standard basis.
// ---------------------------------------------------------------------------

fn mod_lift_with_n(a: &Matrix, n: u64) -> Matrix {
    let int = Ring::Int;
    let lifted = Matrix::from_fn(a.rows, a.cols, |i, j| {
        int.from_bigint(&Ring::Mod(n).lift(a.get(i, j)).expect("mod lift"))
    });
    let scaled = Matrix::identity(&int, a.cols).scale(&int.from_i64(n as i64), &int);
    lifted.vstack(&scaled)
}

fn reduce_int_matrix_mod(a: &Matrix, n: u64) -> Matrix {
    let m = Ring::Mod(n);
    Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        m.from_bigint(&Ring::Int.lift(a.get(i, j)).expect("int entry"))
    })
}

fn drop_zero_rows(a: &Matrix, ring: &Ring) -> Matrix {
    let rows: Vec<Vec<Scalar>> = (0..a.rows)
        .filter(|&i| a.row(i).iter().any(|e| !ring.is_zero(e)))
        .map(|i| a.row_vec(i))
        .collect();
    if rows.is_empty() {
        Matrix::zero(ring, 0, a.cols)
    } else {
        Matrix::from_rows(rows).expect("rectangular")
    }
}

/// Canonical row form of the submodule of `ring^cols` spanned by the rows.
///
/// Equal submodules yield byte-identical canonical matrices. Over `Q` and `Z`
/// zero rows are dropped; over `Z/n` the result is always `cols x cols` (the
/// reduced Hermite form of the lifted lattice, which contains `n Z^cols`).
pub fn row_canonical(ring: &Ring, a: &Matrix) -> Matrix {
    match ring {
        Ring::Rat => {
            let (r, _, _) = rref_rat(a);
            drop_zero_rows(&r, ring)
        }
        Ring::Int => {
            let (h, _, _) = hermite_int(a);
            drop_zero_rows(&h, ring)
        }
        Ring::Mod(n) => {
            let (h, _, _) = hermite_int(&mod_lift_with_n(a, *n));
            let square = Matrix::from_fn(a.cols, a.cols, |i, j| h.get(i, j).clone());
            reduce_int_matrix_mod(&square, *n)
        }
    }
}

/// Does `v` lie in the row span of `a` (as a submodule of `ring^cols`)?
pub fn row_member(ring: &Ring, a: &Matrix, v: &[Scalar]) -> bool {
    solve_left(ring, a, v).is_some()
}

/// Solve `x * A = b` over the ring; returns one solution if any exists.
pub fn solve_left(ring: &Ring, a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.cols, b.len(), "solve_left shape");
    match ring {
        Ring::Rat => {
            let (h, u, pivots) = rref_rat(a);
            let mut residual = b.to_vec();
            let mut coeffs = vec![ring.zero(); a.rows];
            for (r, &c) in pivots.iter().enumerate() {
                let f = residual[c].clone();
                if ring.is_zero(&f) {
                    continue;
                }
                for j in 0..a.cols {
                    residual[j] = ring.sub(&residual[j], &ring.mul(&f, h.get(r, j)));
                }
                coeffs[r] = f;
            }
            if residual.iter().any(|e| !ring.is_zero(e)) {
                return None;
            }
            Some(u.apply_left(&coeffs, ring))
        }
        Ring::Int => solve_left_int(a, b),
        Ring::Mod(n) => {
            let int = Ring::Int;
            let g = mod_lift_with_n(a, *n);
            let bl: Vec<Scalar> = b
                .iter()
                .map(|s| int.from_bigint(&ring.lift(s).expect("mod lift")))
                .collect();
            let sol = solve_left_int(&g, &bl)?;
            Some(
                sol[..a.rows]
                    .iter()
                    .map(|s| ring.from_bigint(&int.lift(s).unwrap()))
                    .collect(),
            )
        }
    }
}

fn solve_left_int(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let ring = Ring::Int;
    let (h, u, pivots) = hermite_int(a);
    let mut residual: Vec<BigInt> = b.iter().map(|s| ring.lift(s).expect("int entry")).collect();
    let mut coeffs = vec![BigInt::zero(); a.rows];
    for (r, &c) in pivots.iter().enumerate() {
        if residual[c].is_zero() {
            continue;
        }
        let p = ring.lift(h.get(r, c)).unwrap();
        let (q, rem) = residual[c].div_rem(&p);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..a.cols {
            let hv = ring.lift(h.get(r, j)).unwrap();
            residual[j] = &residual[j] - &q * hv;
        }
        coeffs[r] = q;
    }
    if residual.iter().any(|e| !e.is_zero()) {
        return None;
    }
    let coeff_scalars: Vec<Scalar> = coeffs.iter().map(|c| ring.from_bigint(c)).collect();
    Some(u.apply_left(&coeff_scalars, &ring))
}

/// Canonical generators of the left kernel `{ x : x * A = 0 }`.
pub fn left_kernel(ring: &Ring, a: &Matrix) -> Matrix {
    match ring {
        Ring::Rat => {
            let (h, u, _) = rref_rat(a);
            let rows: Vec<Vec<Scalar>> = (0..a.rows)
                .filter(|&i| h.row(i).iter().all(|e| ring.is_zero(e)))
                .map(|i| u.row_vec(i))
                .collect();
            let m = if rows.is_empty() {
                Matrix::zero(ring, 0, a.rows)
            } else {
                Matrix::from_rows(rows).expect("rectangular")
            };
            row_canonical(ring, &m)
        }
        Ring::Int => {
            let (h, u, _) = hermite_int(a);
            let rows: Vec<Vec<Scalar>> = (0..a.rows)
                .filter(|&i| h.row(i).iter().all(|e| ring.is_zero(e)))
                .map(|i| u.row_vec(i))
                .collect();
            let m = if rows.is_empty() {
                Matrix::zero(ring, 0, a.rows)
            } else {
                Matrix::from_rows(rows).expect("rectangular")
            };
            row_canonical(ring, &m)
        }
        Ring::Mod(n) => {
            let g = mod_lift_with_n(a, *n);
            let k = left_kernel(&Ring::Int, &g);
            let projected = Matrix::from_fn(k.rows(), a.rows, |i, j| k.get(i, j).clone());
            row_canonical(ring, &reduce_int_matrix_mod(&projected, *n))
        }
    }
}

/// Canonical generators of `{ v : C v ∈ rowspan(W) }` where `C` maps column
/// vectors of length `C.cols` and `W`'s rows live in `ring^{C.rows}`.
pub fn preimage(ring: &Ring, c: &Matrix, w: &Matrix) -> Matrix {
    assert_eq!(c.rows(), w.cols(), "preimage shape");
    // (v, t) with v*C^T - t*W = 0  <=>  C v = W^T t.
    let stacked = c.transpose().vstack(&w.neg(ring));
    let k = left_kernel(ring, &stacked);
    let projected = Matrix::from_fn(k.rows(), c.cols(), |i, j| k.get(i, j).clone());
    row_canonical(ring, &projected)
}

/// Canonical generators of the intersection of two row spans.
pub fn intersect(ring: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols, b.cols, "intersect ambient mismatch");
    let stacked = a.vstack(&b.neg(ring));
    let k = left_kernel(ring, &stacked);
    let xs = Matrix::from_fn(k.rows(), a.rows, |i, j| k.get(i, j).clone());
    row_canonical(ring, &xs.mul(a, ring))
}

/// Rank of the row span over the fraction field (`Q` for `Z` entries).
/// Not defined over `Z/n`.
pub fn rank(ring: &Ring, a: &Matrix) -> usize {
    match ring {
        Ring::Rat => rref_rat(a).2.len(),
        Ring::Int => hermite_int(a).2.len(),
        Ring::Mod(_) => panic!("rank is not defined over Z/n; use subgroup_size"),
    }
}

/// Determinant over the ring.
pub fn det(ring: &Ring, a: &Matrix) -> Scalar {
    match ring {
        Ring::Rat => {
            let (_, u, pivots) = rref_rat(a);
            // det(U) * det(A) = det(R); R is RREF of a square matrix.
            if pivots.len() < a.rows {
                return ring.zero();
            }
            // A = U^{-1} R = U^{-1}; det(A) = 1/det(U).
            let du = det_rat_gauss(&u);
            ring.div(&ring.one(), &du).expect("transform is invertible")
        }
        Ring::Int => Scalar::Int(det_int(a)),
        Ring::Mod(_) => {
            let int = Ring::Int;
            let lifted = Matrix::from_fn(a.rows, a.cols, |i, j| {
                int.from_bigint(&ring.lift(a.get(i, j)).expect("mod lift"))
            });
            ring.from_bigint(&det_int(&lifted))
        }
    }
}

fn det_rat_gauss(a: &Matrix) -> Scalar {
    let ring = Ring::Rat;
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut detv = ring.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !ring.is_zero(m.get(i, k))) else {
            return ring.zero();
        };
        if p != k {
            m.swap_rows(k, p);
            detv = ring.neg(&detv);
        }
        let pivot = m.get(k, k).clone();
        detv = ring.mul(&detv, &pivot);
        let inv = ring.inv(&pivot).unwrap();
        for i in (k + 1)..n {
            let f = ring.mul(m.get(i, k), &inv);
            if ring.is_zero(&f) {
                continue;
            }
            for j in k..n {
                let v = ring.sub(m.get(i, j), &ring.mul(&f, m.get(k, j)));
                m.set(i, j, v);
            }
        }
    }
    detv
}

/// Is the square matrix invertible over the ring?
pub fn is_invertible(ring: &Ring, a: &Matrix) -> bool {
    if a.rows != a.cols {
        return false;
    }
    ring.is_unit(&det(ring, a))
}

/// Inverse of a square matrix, if invertible over the ring.
pub fn invert(ring: &Ring, a: &Matrix) -> Option<Matrix> {
    if !is_invertible(ring, a) {
        return None;
    }
    // Solve A^T x = e_i columnwise: x * A = e_i gives rows of A^{-1}.
    let mut rows = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut e = vec![ring.zero(); a.cols];
        e[i] = ring.one();
        rows.push(solve_left(ring, a, &e)?);
    }
    Some(Matrix::from_rows(rows).expect("rectangular"))
}

/// Number of elements of the row-span subgroup of `(Z/n)^cols`.
pub fn subgroup_size(ring: &Ring, a: &Matrix) -> Option<BigInt> {
    let Ring::Mod(n) = ring else { return None };
    let (h, _, _) = hermite_int(&mod_lift_with_n(a, *n));
    let mut size = BigInt::one();
    let nn = BigInt::from(*n);
    for i in 0..a.cols {
        let d = Ring::Int.lift(h.get(i, i)).unwrap();
        size *= &nn / d;
    }
    Some(size)
}

/// Enumerate every element of the row-span subgroup of `(Z/n)^cols`,
/// refusing above `cap` elements. Deterministic order.
pub fn enumerate_subgroup(ring: &Ring, a: &Matrix, cap: u64) -> Result<Vec<Vec<Scalar>>, Error> {
    let Ring::Mod(n) = ring else {
        return Err(Error::refusal(
            "element enumeration requires a finite ring Z/n",
        ));
    };
    let (h, _, _) = hermite_int(&mod_lift_with_n(a, *n));
    let m = a.cols;
    let mut counts: Vec<u64> = Vec::with_capacity(m);
    let mut total: u128 = 1;
    for i in 0..m {
        let d: u64 = Ring::Int
            .lift(h.get(i, i))
            .unwrap()
            .try_into()
            .map_err(|_| Error::structural("pivot exceeds u64"))?;
        let c = n / d;
        total = total.saturating_mul(c as u128);
        counts.push(c);
    }
    if total > cap as u128 {
        return Err(Error::refusal(format!(
            "subgroup has {} elements, above the enumeration limit {}",
            total, cap
        )));
    }
    let rows: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| ring.from_bigint(&Ring::Int.lift(h.get(i, j)).unwrap()))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0u64; m];
    loop {
        let mut v = vec![ring.zero(); m];
        for i in 0..m {
            if idx[i] == 0 {
                continue;
            }
            let c = ring.from_bigint(&BigInt::from(idx[i]));
            for j in 0..m {
                v[j] = ring.add(&v[j], &ring.mul(&c, &rows[i][j]));
            }
        }
        out.push(v);
        // Odometer increment.
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < counts[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// An invertible change of basis whose first new basis vector is `v`:
/// returns `(T, Tinv)` with `T` carrying new coordinates to old ones and
/// `T`'s first column equal to `v`. `None` when `v` cannot be completed to
/// a basis of `ring^m` (zero vector, or content not a unit).
pub fn basis_with_first_vector(ring: &Ring, v: &[Scalar]) -> Option<(Matrix, Matrix)> {
    let m = v.len();
    if m == 0 {
        return None;
    }
    match ring {
        Ring::Rat => {
            let i = v.iter().position(|e| !ring.is_zero(e))?;
            // U v^T = e_0 by: swap(0,i); scale row0 by 1/v_i; subtract.
            let mut u = Matrix::identity(ring, m);
            let mut vin = Matrix::identity(ring, m);
            u.swap_rows(0, i);
            vin.swap_rows(0, i); // inverse of a swap is itself (columns == rows here)
            let vi = &v[i];
            let inv = ring.inv(vi)?;
            for j in 0..m {
                u.set(0, j, ring.mul(&inv, u.get(0, j)));
            }
            for r in 0..m {
                let val = ring.mul(vi, vin.get(r, 0));
                vin.set(r, 0, val);
            }
            // Current transformed vector w = U v has w_0 = 1, w_j = v_j (j != i, reordered).
            let mut w: Vec<Scalar> = v.to_vec();
            w.swap(0, i);
            w[0] = ring.one();
            for j in 1..m {
                if ring.is_zero(&w[j]) {
                    continue;
                }
                let f = w[j].clone();
                for jj in 0..m {
                    let val = ring.sub(u.get(j, jj), &ring.mul(&f, u.get(0, jj)));
                    u.set(j, jj, val);
                }
                for r in 0..m {
                    let val = ring.add(vin.get(r, 0), &ring.mul(&f, vin.get(r, j)));
                    vin.set(r, 0, val);
                }
            }
            Some((vin, u))
        }
        Ring::Int | Ring::Mod(_) => {
            let lifted: Vec<BigInt> = v.iter().map(|s| ring.lift(s).expect("liftable")).collect();
            if lifted.iter().all(|e| e.is_zero()) {
                return None;
            }
            let mut w = lifted;
            let mut u = Matrix::identity(ring, m);
            let mut t = Matrix::identity(ring, m);
            if w[0].is_zero() {
                let i = w.iter().position(|e| !e.is_zero()).unwrap();
                w.swap(0, i);
                u.swap_rows(0, i);
                // T := T * swap (column swap).
                let mut tt = t.transpose();
                tt.swap_rows(0, i);
                t = tt.transpose();
            }
            for j in 1..m {
                if w[j].is_zero() {
                    continue;
                }
                let (g, x, y) = extgcd(&w[0], &w[j]);
                let (ca, cb) = (&w[0] / &g, &w[j] / &g);
                let (xs, ys) = (ring.from_bigint(&x), ring.from_bigint(&y));
                let (cas, cbs) = (ring.from_bigint(&ca), ring.from_bigint(&cb));
                for jj in 0..m {
                    let n0 = ring.add(&ring.mul(&xs, u.get(0, jj)), &ring.mul(&ys, u.get(j, jj)));
                    let nj = ring.sub(&ring.mul(&cas, u.get(j, jj)), &ring.mul(&cbs, u.get(0, jj)));
                    u.set(0, jj, n0);
                    u.set(j, jj, nj);
                }
                // Inverse block [[ca, -y],[cb, x]] acts on columns 0, j of T.
                for r in 0..m {
                    let c0 = t.get(r, 0).clone();
                    let cj = t.get(r, j).clone();
                    let n0 = ring.add(&ring.mul(&cas, &c0), &ring.mul(&cbs, &cj));
                    let nj = ring.add(&ring.mul(&ring.neg(&ys), &c0), &ring.mul(&xs, &cj));
                    t.set(r, 0, n0);
                    t.set(r, j, nj);
                }
                w[0] = g;
                w[j] = BigInt::zero();
            }
            // w = (g, 0, ..., 0); need g to be a unit in the ring.
            let g = ring.from_bigint(&w[0]);
            let ginv = ring.inv(&g)?;
            for jj in 0..m {
                let val = ring.mul(&ginv, u.get(0, jj));
                u.set(0, jj, val);
            }
            for r in 0..m {
                let val = ring.mul(&g, t.get(r, 0));
                t.set(r, 0, val);
            }
            Some((t, u))
        }
    }
}
