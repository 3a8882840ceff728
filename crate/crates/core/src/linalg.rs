//! Dense exact matrices and canonical (RREF) subspaces over any [`Field`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalars::{primitive_integer_vector, Field, PrimeField, Rational, Rationals, ScalarError};

/// Row-major dense matrix that carries its field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix {
            field: field.clone(),
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [F::Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Matrix<F>) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, &other[(k, j)]);
                    f.add_assign(&mut out[(i, j)], &t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|r| dot(f, self.row(r), v))
            .collect()
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Matrix<F>) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn push_row(&mut self, row: Vec<F::Elem>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(&self.field, idx.len(), self.cols, |r, c| self[(idx[r], c)].clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(&self.field, self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Reduce to RREF in place; returns the pivot columns. Zero rows sink to the bottom.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !f.is_zero(&self[(i, c)])) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self[(r, c)]).expect("nonzero pivot");
            for j in c..cols {
                self[(r, j)] = f.mul(&self[(r, j)], &inv);
            }
            for i in 0..rows {
                if i == r || f.is_zero(&self[(i, c)]) {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &self[(r, j)]);
                    self[(i, j)] = f.sub(&self[(i, j)], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        // forward elimination only
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&m[(r, c)]).unwrap();
            for i in r + 1..rows {
                if f.is_zero(&m[(i, c)]) {
                    continue;
                }
                let factor = f.mul(&m[(i, c)], &inv);
                for j in c..cols {
                    let t = f.mul(&factor, &m[(r, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &t);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis (as rows, canonical) of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Matrix<F> {
        let f = &self.field;
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out[(k, fc)] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                out[(k, pc)] = f.neg(&red[(i, fc)]);
            }
        }
        out
    }

    pub fn determinant(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !f.is_zero(&m[(i, c)])) else {
                return f.zero();
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let piv = m[(c, c)].clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).unwrap();
            for i in c + 1..n {
                if f.is_zero(&m[(i, c)]) {
                    continue;
                }
                let factor = f.mul(&m[(i, c)], &inv);
                for j in c..n {
                    let t = f.mul(&factor, &m[(c, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &t);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::from_fn(f, n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                f.one()
            } else {
                f.zero()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(f, n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Solve `x M = b` for a row vector `x` (i.e. express `b` in the rows of `M`).
    pub fn solve_left(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        // Solve M^T x = b.
        let f = &self.field;
        let mt = self.transpose();
        let mut aug = Matrix::from_fn(f, mt.rows, mt.cols + 1, |r, c| {
            if c < mt.cols {
                mt[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&mt.cols) {
            return None;
        }
        let mut x = vec![f.zero(); mt.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(i, mt.cols)].clone();
        }
        Some(x)
    }

    pub fn map<G: Field>(&self, target: &G, mut g: impl FnMut(&F::Elem) -> G::Elem) -> Matrix<G> {
        Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut g).collect(),
        }
    }

    pub fn try_map<G: Field, E>(
        &self,
        target: &G,
        mut g: impl FnMut(&F::Elem) -> Result<G::Elem, E>,
    ) -> Result<Matrix<G>, E> {
        let data = self.data.iter().map(&mut g).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl Matrix<Rationals> {
    pub fn reduce_mod(&self, fp: &PrimeField) -> Result<Matrix<PrimeField>, ScalarError> {
        self.try_map(fp, |x| fp.reduce(x))
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            &Rationals,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F::Elem;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F::Elem {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if f.is_zero(x) || f.is_zero(y) {
            continue;
        }
        acc = f.add(&acc, &f.mul(x, y));
    }
    acc
}

pub fn scale_vec<F: Field>(f: &F, c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(c, x)).collect()
}

pub fn add_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// Whether `a` and `b` are nonzero multiples of each other.
pub fn proportional<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    if a.len() != b.len() || is_zero_vec(f, a) || is_zero_vec(f, b) {
        return false;
    }
    let i = a.iter().position(|x| !f.is_zero(x)).unwrap();
    if f.is_zero(&b[i]) {
        return false;
    }
    let ratio = f.div(&b[i], &a[i]).unwrap();
    a.iter().zip(b).all(|(x, y)| f.mul(&ratio, x) == *y)
}

/// Linear subspace of `F^n`, stored as its unique RREF basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient(), self.basis.row_vecs())
    }
}

impl<F: Field> Subspace<F> {
    /// Canonicalize any spanning set.
    pub fn from_matrix(m: &Matrix<F>) -> Self {
        let (mut red, pivots) = m.rref();
        red.rows = pivots.len();
        red.data.truncate(pivots.len() * red.cols);
        Subspace { basis: red, pivots }
    }

    pub fn span(field: &F, ambient: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        Self::from_matrix(&Matrix::from_rows(field, ambient, vectors))
    }

    pub fn zero(field: &F, ambient: usize) -> Self {
        Self::from_matrix(&Matrix::zeros(field, 0, ambient))
    }

    pub fn whole(field: &F, ambient: usize) -> Self {
        Self::from_matrix(&Matrix::identity(field, ambient))
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: &F, ambient: usize, idx: &[usize]) -> Self {
        let m = Matrix::from_fn(field, idx.len(), ambient, |r, c| {
            if c == idx[r] {
                field.one()
            } else {
                field.zero()
            }
        });
        Self::from_matrix(&m)
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }

    /// Rows are the linear forms vanishing on the subspace.
    pub fn annihilator(&self) -> Matrix<F> {
        if self.dim() == 0 {
            return Matrix::identity(self.field(), self.ambient());
        }
        self.basis.kernel()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.field();
        // Reduce v against the RREF rows.
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            if f.is_zero(&w[pc]) {
                continue;
            }
            let c = w[pc].clone();
            for (j, x) in self.basis.row(i).iter().enumerate() {
                w[j] = f.sub(&w[j], &f.mul(&c, x));
            }
        }
        is_zero_vec(f, &w)
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r)))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        Subspace::from_matrix(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        let ann = self.annihilator().vstack(&other.annihilator());
        let ker = ann.kernel();
        Subspace::from_matrix(&ker)
    }

    pub fn with_vector(&self, v: Vec<F::Elem>) -> Subspace<F> {
        let mut m = self.basis.clone();
        m.push_row(v);
        Subspace::from_matrix(&m)
    }

    pub fn map<G: Field>(&self, target: &G, g: impl FnMut(&F::Elem) -> G::Elem) -> Subspace<G> {
        Subspace::from_matrix(&self.basis.map(target, g))
    }
}

impl Subspace<Rationals> {
    /// Reduction mod `p` of the lattice `self ∩ Z^n`. The dimension is always preserved.
    pub fn reduce_mod(&self, fp: &PrimeField) -> Subspace<PrimeField> {
        let rows: Vec<Vec<BigInt>> = self.basis_rows().iter().map(|r| primitive_integer_vector(r)).collect();
        Subspace::from_matrix(&saturate_mod(rows, fp))
    }

    /// Primitive integer vectors spanning the same rational space, one per RREF row.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.basis_rows().iter().map(|r| primitive_integer_vector(r)).collect()
    }

    /// A basis of the lattice `self ∩ Z^n`, found by saturating at each prime dividing the
    /// gcd of the maximal minors. Meant for small dimensions: every minor is computed.
    pub fn saturated_integer_rows(&self) -> Vec<Vec<BigInt>> {
        let mut rows = self.integer_rows();
        let k = rows.len();
        if k == 0 {
            return rows;
        }
        let m = Matrix::from_rows(&Rationals, self.ambient(), rows.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect());
        let mut index = BigInt::zero();
        for cols in crate::planes::pivot_patterns(self.ambient(), k) {
            let d = m.select_columns(&cols).determinant();
            index = index.gcd(d.numer());
        }
        let mut primes = Vec::new();
        let mut rest = index.abs();
        let mut q = 2u32;
        while BigInt::from(q) * BigInt::from(q) <= rest && q < 1 << 20 {
            if (&rest % q).is_zero() {
                primes.push(q);
                while (&rest % q).is_zero() {
                    rest /= q;
                }
            }
            q += 1;
        }
        if rest > BigInt::from(1u32) {
            if let Some(r) = rest.to_u32() {
                primes.push(r);
            }
        }
        for p in primes {
            if let Ok(fp) = PrimeField::new(p) {
                saturate_at(&mut rows, &fp);
            }
        }
        rows
    }

    pub fn from_i64_rows(ambient: usize, rows: &[Vec<i64>]) -> Self {
        if rows.is_empty() {
            return Subspace::zero(&Rationals, ambient);
        }
        Subspace::from_matrix(&Matrix::from_i64_rows(rows))
    }
}

/// Reduce integer rows mod `p` after `p`-saturating their lattice: while the
/// reductions are dependent, replace a row by `(Σ c_i b_i) / p`.
pub fn saturate_mod(mut rows: Vec<Vec<BigInt>>, fp: &PrimeField) -> Matrix<PrimeField> {
    saturate_at(&mut rows, fp)
}

fn saturate_at(rows: &mut [Vec<BigInt>], fp: &PrimeField) -> Matrix<PrimeField> {
    let p = BigInt::from(fp.modulus());
    let n = rows.first().map_or(0, |r| r.len());
    loop {
        let red = Matrix::from_rows(fp, n, rows.iter().map(|r| r.iter().map(|x| fp.reduce_int(x)).collect()).collect());
        let rel = red.transpose().kernel();
        if rel.rows() == 0 {
            return red;
        }
        // scale the relation so that c_k = 1; then the new rows span a lattice containing
        // the old one with index exactly p
        let k = rel.row(0).iter().position(|&x| x != 0).unwrap();
        let s = fp.inv(&rel[(0, k)]).unwrap();
        let c: Vec<BigInt> = rel.row(0).iter().map(|x| BigInt::from(fp.mul(x, &s))).collect();
        let mut combo = vec![BigInt::zero(); n];
        for (ci, r) in c.iter().zip(rows.iter()) {
            for (t, x) in combo.iter_mut().zip(r) {
                *t += ci * x;
            }
        }
        rows[k] = combo.into_iter().map(|x| {
            let (q, r) = x.div_rem(&p);
            debug_assert!(r.is_zero());
            q
        }).collect();
    }
}
