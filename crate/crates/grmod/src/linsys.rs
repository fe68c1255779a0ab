//! Homogeneous linear systems whose unknowns are matrices, solved exactly
//! over the ground ring. Equations have the shape `Σ_t ± C_t · H_{k_t} · D_t = 0`
//! entrywise; the solution space comes back as canonical row generators.

use crate::matrix::{left_kernel, Matrix};
use crate::ring::{Ring, Scalar};

pub struct LinSys {
    ring: Ring,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<Vec<Scalar>>,
}

impl LinSys {
    pub fn new(ring: Ring) -> LinSys {
        LinSys {
            ring,
            shapes: Vec::new(),
            offsets: Vec::new(),
            total: 0,
            rows: Vec::new(),
        }
    }

    /// Register an unknown matrix of the given shape; returns its id.
    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.shapes.push((rows, cols));
        self.offsets.push(self.total);
        self.total += rows * cols;
        self.shapes.len() - 1
    }

    pub fn num_unknowns(&self) -> usize {
        self.total
    }

    /// Add the entrywise equations of `Σ_t sign_t · C_t · H_{k_t} · D_t = 0`.
    /// Every term must produce the same output shape.
    pub fn equation(&mut self, terms: &[(Matrix, usize, Matrix, bool)]) {
        if terms.is_empty() {
            return;
        }
        let out_rows = terms[0].0.rows();
        let out_cols = terms[0].2.cols();
        for (c, k, d, _) in terms {
            assert_eq!(c.rows(), out_rows, "term output row mismatch");
            assert_eq!(d.cols(), out_cols, "term output col mismatch");
            let (hr, hc) = self.shapes[*k];
            assert_eq!(c.cols(), hr, "C width must match unknown height");
            assert_eq!(d.rows(), hc, "D height must match unknown width");
        }
        for i in 0..out_rows {
            for j in 0..out_cols {
                let mut row = vec![self.ring.zero(); self.total];
                let mut nonzero = false;
                for (c, k, d, negate) in terms {
                    let (hr, hc) = self.shapes[*k];
                    let off = self.offsets[*k];
                    for p in 0..hr {
                        let cim = c.get(i, p);
                        if self.ring.is_zero(cim) {
                            continue;
                        }
                        for q in 0..hc {
                            let coeff = self.ring.mul(cim, d.get(q, j));
                            if self.ring.is_zero(&coeff) {
                                continue;
                            }
                            let coeff = if *negate {
                                self.ring.neg(&coeff)
                            } else {
                                coeff
                            };
                            let slot = &mut row[off + p * hc + q];
                            *slot = self.ring.add(slot, &coeff);
                            nonzero = true;
                        }
                    }
                }
                if nonzero {
                    self.rows.push(row);
                }
            }
        }
    }

    /// Canonical generators of the solution space, one row per generator.
    pub fn solve(&self) -> Matrix {
        if self.total == 0 {
            return Matrix::zero(&self.ring, 0, 0);
        }
        if self.rows.is_empty() {
            return Matrix::identity(&self.ring, self.total);
        }
        // Solutions u of E u = 0 are the left kernel of E^T.
        let e = Matrix::from_rows(self.rows.clone()).expect("rectangular equations");
        left_kernel(&self.ring, &e.transpose())
    }

    /// Slice one flat solution row back into matrices.
    pub fn unpack(&self, row: &[Scalar]) -> Vec<Matrix> {
        assert_eq!(row.len(), self.total, "solution length");
        self.shapes
            .iter()
            .zip(self.offsets.iter())
            .map(|(&(r, c), &off)| Matrix::from_fn(r, c, |i, j| row[off + i * c + j].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutant_of_a_jordan_block_over_q() {
        // H with H·J = J·H for J = [[0,1],[0,0]]: H = aI + bJ, a 2-dim space.
        let ring = Ring::Rat;
        let j = Matrix::from_rows(vec![
            vec![ring.from_i64(0), ring.from_i64(1)],
            vec![ring.from_i64(0), ring.from_i64(0)],
        ])
        .unwrap();
        let mut sys = LinSys::new(ring);
        let h = sys.unknown(2, 2);
        let i2 = Matrix::identity(&ring, 2);
        sys.equation(&[
            (i2.clone(), h, j.clone(), false),
            (j.clone(), h, i2.clone(), true),
        ]);
        let sols = sys.solve();
        assert_eq!(sols.rows(), 2);
        for r in 0..sols.rows() {
            let m = &sys.unpack(sols.row(r))[0];
            assert_eq!(m.mul(&j, &ring), j.mul(m, &ring));
        }
    }

    #[test]
    fn mod_system_solutions() {
        // x * 2 = 0 over Z/4 for a 1x1 unknown: x in {0, 2}.
        let ring = Ring::Mod(4);
        let mut sys = LinSys::new(ring);
        let h = sys.unknown(1, 1);
        let two = Matrix::identity(&ring, 1).scale(&ring.from_i64(2), &ring);
        let one = Matrix::identity(&ring, 1);
        sys.equation(&[(one, h, two, false)]);
        let sols = sys.solve();
        let elems = crate::matrix::enumerate_subgroup(&ring, &sols, 100).unwrap();
        assert_eq!(elems.len(), 2);
    }
}
