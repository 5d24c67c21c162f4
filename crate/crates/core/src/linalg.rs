//! Dense matrices over an exact field and symmetric (congruence)
//! diagonalization.

use std::fmt;

use crate::error::{domain, Result};
use crate::field::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(domain!("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>]) -> Result<Self> {
        let n = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(domain!("ragged matrix columns"));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(domain!(
                "shape mismatch {}x{} * {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(domain!("vector length {} != {}", v.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect())
    }

    /// `selfᵀ · g · self`.
    pub fn congruence(&self, g: &Self) -> Result<Self> {
        self.transpose().mul(g)?.mul(self)
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.add_row_multiple(r, col, &-f.clone());
                    inv.add_row_multiple(r, col, &-f);
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Result<F> {
        if !self.is_square() {
            return Err(domain!("determinant of non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Ok(F::zero());
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            let pinv = p.inv().expect("nonzero pivot");
            det = det * p;
            for r in col + 1..n {
                if !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone() * pinv.clone();
                    a.add_row_multiple(r, col, &-f);
                }
            }
        }
        Ok(det)
    }

    /// Basis of the right kernel `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            let p = a[(r, c)].inv().expect("nonzero pivot");
            a.scale_row(r, &p);
            for i in 0..self.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.add_row_multiple(i, r, &-f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: &F) {
        for j in 0..self.cols {
            self[(r, j)] = self[(r, j)].clone() * f.clone();
        }
    }

    /// row[dst] += f * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &F) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * f.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, f: &F) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * f.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of congruence diagonalization: `transformᵀ · G · transform` is
/// `diag(entries ++ [0; radical_dim])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalization<F: Scalar> {
    pub entries: Vec<F>,
    pub radical_dim: usize,
    pub transform: Matrix<F>,
}

impl<F: Scalar> Diagonalization<F> {
    /// All diagonal entries, nonzero ones first, in the column order of
    /// `transform`.
    pub fn full_diagonal(&self) -> Vec<F> {
        let mut d = self.entries.clone();
        d.extend(std::iter::repeat_with(F::zero).take(self.radical_dim));
        d
    }
}

/// Symmetric Gaussian elimination. The pivot is the first nonzero diagonal
/// entry of the remaining block; if the block has zero diagonal but is not
/// zero, the first nonzero off-diagonal entry (i, j) is turned into a
/// diagonal one by `e_i += e_j`.
pub fn diagonalize<F: Scalar>(gram: &Matrix<F>) -> Result<Diagonalization<F>> {
    if !gram.is_symmetric() {
        return Err(domain!("Gram matrix is not symmetric"));
    }
    let n = gram.rows();
    let mut a = gram.clone();
    let mut t = Matrix::identity(n);
    // Columns of `t` still to be processed.
    let mut active: Vec<usize> = (0..n).collect();
    let mut entries = Vec::new();
    let mut order = Vec::new();
    while !active.is_empty() {
        let piv = match active.iter().position(|&i| !a[(i, i)].is_zero()) {
            Some(p) => active[p],
            None => {
                let hit = active.iter().enumerate().find_map(|(k, &i)| {
                    active[k + 1..]
                        .iter()
                        .find(|&&j| !a[(i, j)].is_zero())
                        .map(|&j| (i, j))
                });
                let Some((i, j)) = hit else { break };
                // e_i <- e_i + e_j: a_ii becomes 2 a_ij.
                let one = F::one();
                a.add_col_multiple(i, j, &one);
                a.add_row_multiple(i, j, &one);
                t.add_col_multiple(i, j, &one);
                i
            }
        };
        let p = a[(piv, piv)].clone();
        let pinv = p.inv().expect("nonzero pivot");
        for &j in &active {
            if j != piv && !a[(piv, j)].is_zero() {
                let f = -(a[(piv, j)].clone() * pinv.clone());
                a.add_col_multiple(j, piv, &f);
                a.add_row_multiple(j, piv, &f);
                t.add_col_multiple(j, piv, &f);
            }
        }
        entries.push(p);
        order.push(piv);
        active.retain(|&j| j != piv);
    }
    let radical_dim = active.len();
    order.extend(active);
    let cols: Vec<Vec<F>> = order.iter().map(|&j| t.column(j)).collect();
    Ok(Diagonalization {
        entries,
        radical_dim,
        transform: Matrix::from_columns(&cols)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf, Q};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .unwrap()
    }

    fn check(g: &Matrix<Q>) -> Diagonalization<Q> {
        let d = diagonalize(g).unwrap();
        let lhs = d.transform.congruence(g).unwrap();
        assert_eq!(lhs, Matrix::diagonal(&d.full_diagonal()));
        assert!(d.transform.inverse().is_some());
        d
    }

    #[test]
    fn identity_is_fixed() {
        let d = check(&Matrix::identity(3));
        assert_eq!(d.entries, vec![q(1), q(1), q(1)]);
        assert_eq!(d.transform, Matrix::identity(3));
    }

    #[test]
    fn hyperbolic_plane() {
        let d = check(&mat(&[&[0, 1], &[1, 0]]));
        assert_eq!(d.entries, vec![q(2), qf(-1, 2)]);
    }

    #[test]
    fn first_pivot_completion() {
        let d = check(&mat(&[&[2, 1], &[1, 2]]));
        assert_eq!(d.entries, vec![q(2), qf(3, 2)]);
        assert_eq!(d.transform, Matrix::from_rows(vec![vec![q(1), qf(-1, 2)], vec![q(0), q(1)]]).unwrap());
    }

    #[test]
    fn radical_is_reported() {
        let d = check(&mat(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 0]]));
        assert_eq!(d.entries, vec![q(1)]);
        assert_eq!(d.radical_dim, 2);
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(diagonalize(&mat(&[&[1, 2], &[0, 1]])).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        assert_eq!(m.determinant().unwrap(), q(18));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_vectors_are_killed() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).unwrap().iter().all(|x| x == &q(0)));
        }
    }

    proptest! {
        #[test]
        fn congruence_holds(entries in proptest::collection::vec(-6i64..6, 10)) {
            // Symmetric 4x4 from its upper triangle.
            let mut g = Matrix::<Q>::zeros(4, 4);
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    g[(i, j)] = q(entries[k]);
                    g[(j, i)] = q(entries[k]);
                    k += 1;
                }
            }
            let d = diagonalize(&g).unwrap();
            prop_assert_eq!(d.transform.congruence(&g).unwrap(), Matrix::diagonal(&d.full_diagonal()));
            prop_assert!(d.transform.inverse().is_some());
            // Rank is preserved.
            let rank = 4 - g.nullspace().len();
            prop_assert_eq!(d.entries.len(), rank);
        }
    }
}
