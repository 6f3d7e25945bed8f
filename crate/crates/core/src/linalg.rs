//! Dense exact linear algebra over [`CycScalar`].
//!
//! Matrices of size (n+m)×(n+m) are identified with vectors of length
//! (n+m)² by row-major flattening: entry (i, j) sits at index `i*(n+m) + j`.

use std::fmt;

use thiserror::Error;

use crate::cyclotomic::{CycError, CycScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error(transparent)]
    Scalar(#[from] CycError),
}

fn check_dim(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![CycScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = CycScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Ragged);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer entries, mostly for tests and fixed constructions.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycScalar::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<CycScalar>) -> Result<Self, LinalgError> {
        check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    /// A square matrix from its row-major flattening.
    pub fn unflatten(size: usize, v: &[CycScalar]) -> Result<Self, LinalgError> {
        Self::from_flat(size, size, v.to_vec())
    }

    pub fn flatten(&self) -> Vec<CycScalar> {
        self.data.clone()
    }

    /// E_ij of a size×size matrix.
    pub fn unit(size: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(size, size);
        m.data[i * size + j] = CycScalar::one();
        m
    }

    pub fn unit_rect(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.data[i * cols + j] = CycScalar::one();
        m
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

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[CycScalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CycScalar, &CycScalar) -> CycScalar) -> Result<Self, LinalgError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    /// Kronecker product; `self` indexes the outer blocks.
    pub fn kronecker(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * other.rows + k) * c + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[CycScalar]) -> Result<Vec<CycScalar>, LinalgError> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = CycScalar::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows: Vec<Vec<CycScalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref_rows(&mut rows, self.cols);
        let data = rows.into_iter().flatten().collect();
        (
            Self {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// {v : self·v = 0}.
    pub fn nullspace(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut vecs = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![CycScalar::zero(); self.cols];
            v[f] = CycScalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                let c = r.get(row, f);
                if !c.is_zero() {
                    v[p] = -c;
                }
            }
            vecs.push(v);
        }
        Subspace::span(self.cols, vecs).expect("nullspace vectors have the column count")
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut rows: Vec<Vec<CycScalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { CycScalar::one() } else { CycScalar::zero() }));
                r
            })
            .collect();
        let pivots = rref_rows(&mut rows, n);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(LinalgError::Singular);
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Ok(Self { rows: n, cols: n, data })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        *self == self.transpose().neg()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// The permutation matrix with `P e_j = e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut p = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            p.set(i, j, CycScalar::one());
        }
        p
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Gauss-Jordan elimination restricted to the first `ncols` columns.
/// Rows are permuted in place; returns the pivot columns.
fn rref_rows(rows: &mut Vec<Vec<CycScalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if !rows[r][c].is_one() {
            let inv = rows[r][c].inv().expect("pivot is nonzero");
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x -= &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of F^n held as the nonzero rows of its reduced row-echelon
/// basis, so equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<CycScalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: vec![],
            pivots: vec![],
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![CycScalar::zero(); ambient];
                    v[i] = CycScalar::one();
                    v
                })
                .collect(),
        )
        .expect("unit vectors")
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<CycScalar>>) -> Result<Self, LinalgError> {
        for v in &vectors {
            check_dim(ambient, v.len())?;
        }
        let mut rows = vectors;
        let pivots = rref_rows(&mut rows, ambient);
        rows.truncate(pivots.len());
        Ok(Self {
            ambient,
            basis: rows,
            pivots,
        })
    }

    /// Span of matrices, flattened row-major.
    pub fn span_matrices<'a>(ambient: usize, mats: impl IntoIterator<Item = &'a Matrix>) -> Result<Self, LinalgError> {
        Self::span(ambient, mats.into_iter().map(Matrix::flatten).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<CycScalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as square matrices.
    pub fn basis_matrices(&self) -> Vec<Matrix> {
        let size = (self.ambient as f64).sqrt().round() as usize;
        assert_eq!(size * size, self.ambient, "ambient dimension is not a square");
        self.basis
            .iter()
            .map(|v| Matrix::unflatten_unchecked(size, v))
            .collect()
    }

    /// Coefficients of `v` in the echelon basis, or None if `v` is outside.
    pub fn coordinates(&self, v: &[CycScalar]) -> Result<Option<Vec<CycScalar>>, LinalgError> {
        check_dim(self.ambient, v.len())?;
        let coords: Vec<CycScalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in rest.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &(c * b);
                }
            }
        }
        Ok(if rest.iter().all(CycScalar::is_zero) {
            Some(coords)
        } else {
            None
        })
    }

    pub fn contains(&self, v: &[CycScalar]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains_matrix(&self, m: &Matrix) -> Result<bool, LinalgError> {
        self.contains(m.entries())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn span_equal(&self, other: &Self) -> Result<bool, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        Ok(self == other)
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.ambient, vs)
    }

    pub fn sum_all<'a>(ambient: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Self, LinalgError> {
        let mut vs = Vec::new();
        for p in parts {
            check_dim(ambient, p.ambient)?;
            vs.extend(p.basis.iter().cloned());
        }
        Self::span(ambient, vs)
    }

    /// U ∩ V from the kernel of [U^t | -V^t].
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let (du, dv) = (self.dim(), other.dim());
        let mut m = Matrix::zeros(self.ambient, du + dv);
        for (j, u) in self.basis.iter().enumerate() {
            for (i, x) in u.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m.set(i, du + j, -x);
            }
        }
        let ker = m.nullspace();
        let vecs = ker
            .basis
            .iter()
            .map(|coef| combine(&self.basis, &coef[..du], self.ambient))
            .collect();
        Self::span(self.ambient, vecs)
    }

    /// The image of this subspace under a linear map on F^n.
    pub fn image(&self, map: &Matrix) -> Result<Self, LinalgError> {
        check_dim(self.ambient, map.cols())?;
        let vs = self
            .basis
            .iter()
            .map(|v| map.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::span(map.rows(), vs)
    }
}

/// Σ coef[i]·vecs[i].
pub fn combine(vecs: &[Vec<CycScalar>], coef: &[CycScalar], ambient: usize) -> Vec<CycScalar> {
    let mut out = vec![CycScalar::zero(); ambient];
    for (c, v) in coef.iter().zip(vecs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += &(c * x);
            }
        }
    }
    out
}

/// {x ∈ within : xb = bx for all b in `of`}; matrices of size `size`.
pub fn centralizer(size: usize, within: &Subspace, of: &[Matrix]) -> Result<Subspace, LinalgError> {
    check_dim(size * size, within.ambient())?;
    let gens = within.basis_matrices();
    if gens.is_empty() {
        return Ok(Subspace::zero(within.ambient()));
    }
    // Column k holds the commutators [w_k, b] for all b, stacked.
    let mut rows: Vec<Vec<CycScalar>> = Vec::new();
    let comms: Vec<Vec<Matrix>> = gens
        .iter()
        .map(|w| of.iter().map(|b| Ok(w.mul(b)?.sub(&b.mul(w)?)?)).collect())
        .collect::<Result<_, LinalgError>>()?;
    for (bi, _) in of.iter().enumerate() {
        for p in 0..size * size {
            let row: Vec<CycScalar> = comms.iter().map(|c| c[bi].entries()[p].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let coeffs = if rows.is_empty() {
        Subspace::full(gens.len())
    } else {
        Matrix::from_rows(rows)?.nullspace()
    };
    let flat: Vec<Vec<CycScalar>> = gens.iter().map(|g| g.flatten()).collect();
    let vecs = coeffs
        .basis()
        .iter()
        .map(|c| combine(&flat, c, within.ambient()))
        .collect();
    Subspace::span(within.ambient(), vecs)
}

impl Matrix {
    fn unflatten_unchecked(size: usize, v: &[CycScalar]) -> Self {
        Self {
            rows: size,
            cols: size,
            data: v.to_vec(),
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}", self.dim(), self.ambient)?;
        for v in &self.basis {
            let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "; [{}]", row.join(", "))?;
        }
        write!(f, ")")
    }
}
