//! Exact dense linear algebra over the scalar tower: row reduction, kernels,
//! characteristic polynomials, Jordan data, induced operators on bivectors,
//! and the bilinear-form utilities (congruence diagonalisation, signatures,
//! isotropic vectors) the geometric layers are built on.

use crate::poly::Poly;
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("the given value is not an eigenvalue of the operator")]
    NotAnEigenvalue,
}

/// Row-major dense matrix with exact entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Index pairs for the basis of the bivector space of a four-dimensional
/// space, in lexicographic order.
pub const BIVECTOR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: Vec<Vec<Scalar>>) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a square matrix from integer entries, a convenience for tests
    /// and fixed operators.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
                .collect(),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Any radicand appearing among the entries.
    pub fn radicand(&self) -> Option<u64> {
        self.data.iter().find_map(Scalar::radicand)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * k)
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    /// Reduced row echelon form and the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).try_inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as vectors of length `n_cols`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        let piv_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::zero(); self.cols];
            vec[free] = Scalar::one();
            for (col, slot) in piv_of_col.iter().enumerate() {
                if let Some(row) = slot {
                    vec[col] = -r.get(*row, free);
                }
            }
            out.push(vec);
        }
        out
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    let a = m.get(c, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(c, j, b);
                    m.set(p, j, a);
                }
                det = -det;
            }
            det *= m.get(c, c);
            let inv = m.get(c, c).try_inv().unwrap();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Monic characteristic polynomial `det(x I - A)`, computed by the
    /// trace recursion of Faddeev and LeVerrier (valid in characteristic
    /// zero, no divisions by matrix entries).
    pub fn char_poly(&self) -> Poly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::identity(n);
        for k in 1..=n {
            m = self.matmul(&m);
            let c = -(m.trace() / Scalar::int(k as i64));
            for i in 0..n {
                let v = m.get(i, i) + &c;
                m.set(i, i, v);
            }
            coeffs[n - k] = c;
        }
        Poly::from_coeffs(coeffs)
    }

    /// The induced derivation on bivectors: for a 4x4 operator `A`, the 6x6
    /// matrix acting on `x ^ y` by `A x ^ y + x ^ A y`.
    pub fn exterior_square(&self) -> Matrix {
        assert_eq!((self.rows, self.cols), (4, 4));
        let mut d = Matrix::zeros(6, 6);
        for (col, &(i, j)) in BIVECTOR_PAIRS.iter().enumerate() {
            // A e_i ^ e_j
            for k in 0..4 {
                let a = self.get(k, i);
                if !a.is_zero() && k != j {
                    let (row, sgn) = pair_index(k, j);
                    let v = d.get(row, col) + &if sgn { a.clone() } else { -a };
                    d.set(row, col, v);
                }
            }
            // e_i ^ A e_j
            for k in 0..4 {
                let b = self.get(k, j);
                if !b.is_zero() && k != i {
                    let (row, sgn) = pair_index(i, k);
                    let v = d.get(row, col) + &if sgn { b.clone() } else { -b };
                    d.set(row, col, v);
                }
            }
        }
        d
    }
}

/// Position and orientation of the (unordered) pair `{i, j}` in the
/// lexicographic bivector basis; the flag is true when `i < j`.
fn pair_index(i: usize, j: usize) -> (usize, bool) {
    debug_assert!(i != j);
    let (a, b, sgn) = if i < j { (i, j, true) } else { (j, i, false) };
    let row = BIVECTOR_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("indices below 4");
    (row, sgn)
}

/// Coordinates of `x ^ y` in the lexicographic bivector basis.
pub fn wedge(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    assert!(x.len() == 4 && y.len() == 4);
    BIVECTOR_PAIRS
        .iter()
        .map(|&(i, j)| &x[i] * &y[j] - &x[j] * &y[i])
        .collect()
}

/// The quadratic form whose vanishing characterises decomposable bivectors.
pub fn plucker_quadric(w: &[Scalar]) -> Scalar {
    assert_eq!(w.len(), 6);
    &w[0] * &w[5] - &w[1] * &w[4] + &w[2] * &w[3]
}

/// The antisymmetric 4x4 matrix with upper entries given by the bivector
/// coordinates.
pub fn omega_matrix(w: &[Scalar]) -> Matrix {
    assert_eq!(w.len(), 6);
    let mut m = Matrix::zeros(4, 4);
    for (r, &(i, j)) in BIVECTOR_PAIRS.iter().enumerate() {
        m.set(i, j, w[r].clone());
        m.set(j, i, -&w[r]);
    }
    m
}

/// Recovers a spanning pair of vectors from a nonzero decomposable
/// bivector; `None` when the bivector is zero or not decomposable.
pub fn decompose_bivector(w: &[Scalar]) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    if w.iter().all(Scalar::is_zero) || !plucker_quadric(w).is_zero() {
        return None;
    }
    let omega = omega_matrix(w);
    let plane = Subspace::from_vectors(4, &(0..4).map(|j| omega.column(j)).collect::<Vec<_>>());
    debug_assert_eq!(plane.dim(), 2);
    let b = plane.basis_vectors();
    Some((b[0].clone(), b[1].clone()))
}

/// A linear subspace in canonical form: the basis rows are the reduced row
/// echelon form of any spanning set, so two values are equal exactly when
/// the subspaces coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn from_vectors(ambient: usize, vecs: &[Vec<Scalar>]) -> Subspace {
        if vecs.is_empty() {
            return Subspace {
                ambient,
                basis: vec![],
            };
        }
        let (r, pivots) = Matrix::from_rows(vecs.to_vec()).rref();
        Subspace {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i)).collect(),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace::from_vectors(ambient, &Matrix::identity(ambient).rows_vec())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis_vectors(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace {
                ambient: self.ambient,
                basis: vec![],
            };
        }
        // Solve sum a_i u_i = sum b_j w_j via the kernel of [U^T | -W^T].
        let k = self.dim();
        let m = Matrix::from_fn(self.ambient, k + other.dim(), |r, c| {
            if c < k {
                self.basis[c][r].clone()
            } else {
                -&other.basis[c - k][r]
            }
        });
        let vecs: Vec<Vec<Scalar>> = m
            .kernel()
            .into_iter()
            .map(|coef| {
                let mut v = vec![Scalar::zero(); self.ambient];
                for (i, a) in coef[..k].iter().enumerate() {
                    for (x, b) in v.iter_mut().zip(&self.basis[i]) {
                        *x += &(a * b);
                    }
                }
                v
            })
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        Subspace::from_vectors(self.ambient, &vecs)
    }
}

/// How an eigenvalue is presented to the Jordan analysis: a real value in
/// the tower, or a complex conjugate pair given by its monic quadratic
/// `x^2 - sum x + prod`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigClass {
    Real(Scalar),
    Pair { sum: Scalar, prod: Scalar },
}

/// Jordan block sizes of `m` at the given eigenvalue (class), derived from
/// the rank sequence of the associated nilpotent-on-its-eigenspace operator.
/// For a complex pair the sizes count complex blocks, each occupying twice
/// its size in real dimensions.
pub fn jordan_structure(m: &Matrix, class: &EigClass) -> Result<Vec<usize>, LinalgError> {
    let n = m.n_rows();
    let (nmat, step) = match class {
        EigClass::Real(l) => (m.sub(&Matrix::identity(n).scale(l)), 1),
        EigClass::Pair { sum, prod } => (
            m.matmul(m)
                .sub(&m.scale(sum))
                .add(&Matrix::identity(n).scale(prod)),
            2,
        ),
    };
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    loop {
        p = p.matmul(&nmat);
        let r = p.rank();
        ranks.push(r);
        if r == *ranks.get(ranks.len().wrapping_sub(2)).unwrap_or(&n) || ranks.len() > n {
            break;
        }
    }
    if ranks[1] == n {
        return Err(LinalgError::NotAnEigenvalue);
    }
    // Nullity increments delta_k count blocks of size >= k (per complex
    // conjugate pair when step == 2).
    let mut deltas: Vec<usize> = Vec::new();
    for k in 1..ranks.len() {
        let d = ranks[k - 1] - ranks[k];
        debug_assert!(d % step == 0, "pair ranks drop evenly");
        deltas.push(d / step);
    }
    let mut sizes = Vec::new();
    for k in 0..deltas.len() {
        let here = deltas[k];
        let next = deltas.get(k + 1).copied().unwrap_or(0);
        for _ in 0..here.saturating_sub(next) {
            sizes.push(k + 1);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

/// Congruence diagonalisation of a symmetric bilinear form: returns the
/// diagonal values and the row basis `s` with `s G s^T` diagonal.
pub fn congruence_diagonalize(g: &Matrix) -> (Vec<Scalar>, Matrix) {
    assert!(g.is_symmetric(), "form must be symmetric");
    let n = g.n_rows();
    let mut a = g.clone();
    let mut s = Matrix::identity(n);
    let swap_rows = |m: &mut Matrix, x: usize, y: usize| {
        for j in 0..m.n_cols() {
            let u = m.get(x, j).clone();
            let v = m.get(y, j).clone();
            m.set(x, j, v);
            m.set(y, j, u);
        }
    };
    let swap_cols = |m: &mut Matrix, x: usize, y: usize| {
        for i in 0..m.n_rows() {
            let u = m.get(i, x).clone();
            let v = m.get(i, y).clone();
            m.set(i, x, v);
            m.set(i, y, u);
        }
    };
    for i in 0..n {
        if a.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                swap_rows(&mut a, i, j);
                swap_cols(&mut a, i, j);
                swap_rows(&mut s, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a.get(i, j).is_zero()) {
                // Zero diagonal block: adding row j folds the off-diagonal
                // entry onto the diagonal (2 a_ij since a_jj = 0).
                for c in 0..n {
                    let v = a.get(i, c) + a.get(j, c);
                    a.set(i, c, v);
                }
                for r in 0..n {
                    let v = a.get(r, i) + a.get(r, j);
                    a.set(r, i, v);
                }
                for c in 0..n {
                    let v = s.get(i, c) + s.get(j, c);
                    s.set(i, c, v);
                }
            } else {
                continue; // row i is entirely zero in the remaining block
            }
        }
        let inv = a.get(i, i).try_inv().unwrap();
        for j in i + 1..n {
            if a.get(j, i).is_zero() {
                continue;
            }
            let f = a.get(j, i) * &inv;
            for c in 0..n {
                let v = a.get(j, c) - &(&f * a.get(i, c));
                a.set(j, c, v);
            }
            for r in 0..n {
                let v = a.get(r, j) - &(&f * a.get(r, i));
                a.set(r, j, v);
            }
            for c in 0..n {
                let v = s.get(j, c) - &(&f * s.get(i, c));
                s.set(j, c, v);
            }
        }
    }
    ((0..n).map(|i| a.get(i, i).clone()).collect(), s)
}

/// Counts of positive and negative squares of a symmetric form.
pub fn signature(g: &Matrix) -> (usize, usize) {
    let (diag, _) = congruence_diagonalize(g);
    let p = diag.iter().filter(|d| d.sign() > 0).count();
    let q = diag.iter().filter(|d| d.sign() < 0).count();
    (p, q)
}

/// A nonzero vector with `g(x, x) = 0`, when one exists.  Definite forms
/// yield `None`; degenerate forms yield a kernel vector; indefinite forms
/// combine a positive and a negative direction, introducing at most one
/// square root.
pub fn isotropic_vector(g: &Matrix) -> Result<Option<Vec<Scalar>>, ScalarError> {
    let n = g.n_rows();
    if n == 0 {
        return Ok(None);
    }
    if let Some(v) = g.kernel().into_iter().next() {
        return Ok(Some(v));
    }
    let (diag, s) = congruence_diagonalize(g);
    let pos = diag.iter().position(|d| d.sign() > 0);
    let neg = diag.iter().position(|d| d.sign() < 0);
    let (Some(i), Some(j)) = (pos, neg) else {
        return Ok(None); // definite
    };
    // x = q s_i + sqrt(p q) s_j satisfies p q^2 - (p q) q = 0.
    let p = diag[i].clone();
    let q = -&diag[j];
    let root = p.try_mul(&q)?.sqrt()?;
    let si = s.row(i);
    let sj = s.row(j);
    let mut x = vec![Scalar::zero(); n];
    for k in 0..n {
        x[k] = q.try_mul(&si[k])?.try_add(&root.try_mul(&sj[k])?)?;
    }
    Ok(Some(x))
}

/// The matrix of a bilinear form restricted to the span of the given rows:
/// entry `(i, j)` is `rows[i] G rows[j]^T`.
pub fn restrict_bilinear(g: &Matrix, rows: &[Vec<Scalar>]) -> Matrix {
    Matrix::from_fn(rows.len(), rows.len(), |i, j| {
        let gv = g.mul_vec(&rows[j]);
        let mut acc = Scalar::zero();
        for (a, b) in rows[i].iter().zip(&gv) {
            acc += &(a * b);
        }
        acc
    })
}

/// Evaluates `g(x, y)`.
pub fn bilinear(g: &Matrix, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let gy = g.mul_vec(y);
    let mut acc = Scalar::zero();
    for (a, b) in x.iter().zip(&gy) {
        acc += &(a * b);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::factor_over_field;

    #[test]
    fn rref_rank_kernel() {
        let m = Matrix::from_int_rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_int_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 1]]);
        assert_eq!(m.det(), Scalar::int(3));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Matrix::identity(3));
        let sing = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.det().is_zero());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn characteristic_polynomials() {
        let m = Matrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 4]]);
        let cp = m.char_poly();
        let roots = factor_over_field(&cp).unwrap().roots();
        assert_eq!(
            roots,
            (1..=4).map(|k| (Scalar::int(k), 1)).collect::<Vec<_>>()
        );
        let n = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(n.char_poly(), Poly::from_coeffs(vec![
            Scalar::zero(),
            Scalar::zero(),
            Scalar::one()
        ]));
    }

    #[test]
    fn exterior_square_examples() {
        assert_eq!(
            Matrix::identity(4).exterior_square(),
            Matrix::identity(6).scale(&Scalar::int(2))
        );
        let d = Matrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 4]]);
        let e = d.exterior_square();
        let expect = [3i64, 4, 5, 5, 6, 7];
        for (i, v) in expect.iter().enumerate() {
            assert_eq!(e.get(i, i), &Scalar::int(*v));
        }
    }

    #[test]
    fn exterior_square_is_a_derivation_on_commutators() {
        let a = Matrix::from_int_rows(&[&[1, 2, 0, -1], &[0, 1, 3, 0], &[2, 0, 1, 1], &[0, 1, 0, 2]]);
        let b = Matrix::from_int_rows(&[&[0, 1, 1, 0], &[1, 0, 0, 2], &[0, 3, 1, 0], &[1, 0, 0, 1]]);
        let comm = a.matmul(&b).sub(&b.matmul(&a));
        let da = a.exterior_square();
        let db = b.exterior_square();
        assert_eq!(da.matmul(&db).sub(&db.matmul(&da)), comm.exterior_square());
    }

    #[test]
    fn wedge_and_plucker() {
        let e1: Vec<Scalar> = (0..4).map(|i| Scalar::int((i == 0) as i64)).collect();
        let e2: Vec<Scalar> = (0..4).map(|i| Scalar::int((i == 1) as i64)).collect();
        let w = wedge(&e1, &e2);
        assert_eq!(w[0], Scalar::one());
        assert!(w[1..].iter().all(Scalar::is_zero));
        assert!(plucker_quadric(&w).is_zero());
        let (v1, v2) = decompose_bivector(&w).unwrap();
        let plane = Subspace::from_vectors(4, &[v1, v2]);
        assert_eq!(plane, Subspace::from_vectors(4, &[e1, e2]));
        // e1^e2 + e3^e4 is not decomposable.
        let mut nd = vec![Scalar::zero(); 6];
        nd[0] = Scalar::one();
        nd[5] = Scalar::one();
        assert!(decompose_bivector(&nd).is_none());
    }

    #[test]
    fn jordan_structures() {
        let m = Matrix::from_int_rows(&[&[2, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 3]]);
        assert_eq!(
            jordan_structure(&m, &EigClass::Real(Scalar::int(2))).unwrap(),
            vec![2]
        );
        assert_eq!(
            jordan_structure(&m, &EigClass::Real(Scalar::int(3))).unwrap(),
            vec![1, 1]
        );
        assert_eq!(
            jordan_structure(&m, &EigClass::Real(Scalar::int(5))),
            Err(LinalgError::NotAnEigenvalue)
        );
        // Two semisimple complex pairs at +-i.
        let rot = Matrix::from_int_rows(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        assert_eq!(
            jordan_structure(
                &rot,
                &EigClass::Pair {
                    sum: Scalar::zero(),
                    prod: Scalar::one()
                }
            )
            .unwrap(),
            vec![1, 1]
        );
        // One non-semisimple pair at +-i.
        let jp = Matrix::from_int_rows(&[&[0, -1, 1, 0], &[1, 0, 0, 1], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        assert_eq!(
            jordan_structure(
                &jp,
                &EigClass::Pair {
                    sum: Scalar::zero(),
                    prod: Scalar::one()
                }
            )
            .unwrap(),
            vec![2]
        );
    }

    #[test]
    fn subspace_canonical_form_and_intersection() {
        let e = |i: usize| -> Vec<Scalar> {
            (0..4).map(|k| Scalar::int((k == i) as i64)).collect()
        };
        let a = Subspace::from_vectors(4, &[e(0), e(1)]);
        let b = Subspace::from_vectors(4, &[e(1), e(2)]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(1)));
        // Same span, different generators, equal canonical form.
        let sum = vec![Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()];
        let c = Subspace::from_vectors(4, &[sum, e(1)]);
        assert_eq!(a, c);
        assert!(a.contains(&e(0)));
        assert!(!a.contains(&e(2)));
    }

    #[test]
    fn signatures() {
        let neutral = Matrix::from_int_rows(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, -1, 0],
            &[0, 0, 0, -1],
        ]);
        assert_eq!(signature(&neutral), (2, 2));
        let hyperbolic = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(signature(&hyperbolic), (1, 1));
        let skewish = Matrix::from_int_rows(&[
            &[0, 0, 0, -1],
            &[0, 0, 1, 0],
            &[0, 1, 0, 0],
            &[-1, 0, 0, 0],
        ]);
        assert_eq!(signature(&skewish), (2, 2));
        let lorentz = Matrix::from_int_rows(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, -1],
        ]);
        assert_eq!(signature(&lorentz), (3, 1));
    }

    #[test]
    fn isotropic_vectors() {
        let definite = Matrix::from_int_rows(&[&[1, 0], &[0, 1]]);
        assert_eq!(isotropic_vector(&definite).unwrap(), None);
        let ind = Matrix::from_int_rows(&[&[2, 0], &[0, -3]]);
        let v = isotropic_vector(&ind).unwrap().unwrap();
        assert!(v.iter().any(|c| !c.is_zero()));
        assert!(bilinear(&ind, &v, &v).is_zero());
        assert_eq!(v.iter().find_map(Scalar::radicand), Some(6));
        let hyp = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let w = isotropic_vector(&hyp).unwrap().unwrap();
        assert!(bilinear(&hyp, &w, &w).is_zero());
        let degenerate = Matrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        let z = isotropic_vector(&degenerate).unwrap().unwrap();
        assert!(bilinear(&degenerate, &z, &z).is_zero());
    }

    #[test]
    fn restricted_forms() {
        let g = Matrix::from_int_rows(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, -1, 0],
            &[0, 0, 0, -1],
        ]);
        let rows = vec![
            vec![Scalar::one(), Scalar::zero(), Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one(), Scalar::zero(), Scalar::one()],
        ];
        let r = restrict_bilinear(&g, &rows);
        assert!(r.is_zero(), "both rows are null and orthogonal");
    }
}
