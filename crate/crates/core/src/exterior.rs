//! Exterior algebra of a coordinate space of dimension at most 8.
//!
//! Sign convention (shared by every module in the crate):
//!
//! | item | convention |
//! |------|------------|
//! | basis of `∧^k V` | `e_I = e_{i1} ∧ … ∧ e_{ik}`, `i1 < … < ik`, ordered lexicographically by `(i1, …, ik)` |
//! | `e_I ∧ e_J` | `(-1)^{#{(i, j) ∈ I × J : i > j}} e_{I ∪ J}`, or 0 if `I ∩ J ≠ ∅` |
//! | volume | `vol(e_0 ∧ … ∧ e_{n-1}) = 1` |
//! | pairing on `∧^3 C^6` | `(α, β) = vol(α ∧ β)` |
//!
//! For `∧^3` of a 6-space the lexicographic basis is
//! `012, 013, 014, 015, 023, 024, 025, 034, 035, 045, 123, 124, 125, 134, 135, 145, 234, 235, 245, 345`.

use std::sync::OnceLock;

use thiserror::Error;

use crate::linalg::{is_zero_vec, proportional, Matrix, Subspace};
use crate::scalars::Field;

pub const MAX_AMBIENT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("degree overflow: {0} + {1} exceeds the ambient dimension {2}")]
    DegreeOverflow(usize, usize, usize),
    #[error("operation requires ambient dimension 6, got {0}")]
    WrongAmbient(usize),
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("input multivector is zero")]
    ZeroInput,
    #[error("ambient dimension {0} is outside 1..=8")]
    AmbientTooLarge(usize),
    #[error("ambient mismatch: {0} vs {1}")]
    MixedAmbient(usize, usize),
}

struct Table {
    masks: Vec<u16>,
    index: Vec<u16>,
}

fn table(n: usize, k: usize) -> &'static Table {
    static TABLES: OnceLock<Vec<Vec<Table>>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        (0..=MAX_AMBIENT)
            .map(|n| (0..=n).map(|k| build_table(n, k)).collect())
            .collect()
    });
    &all[n][k]
}

fn build_table(n: usize, k: usize) -> Table {
    let mut masks = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u16>) {
        if cur.len() == k {
            out.push(cur.iter().fold(0u16, |m, &i| m | (1 << i)));
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut masks);
    let mut index = vec![u16::MAX; 1 << n];
    for (i, &m) in masks.iter().enumerate() {
        index[m as usize] = i as u16;
    }
    Table { masks, index }
}

/// Basis subsets of `∧^k` of an `n`-space, as bit masks, in lexicographic order.
pub fn basis_masks(n: usize, k: usize) -> &'static [u16] {
    &table(n, k).masks
}

/// Position of the subset `mask` in the lexicographic basis.
pub fn basis_index(n: usize, mask: u16) -> usize {
    let k = mask.count_ones() as usize;
    let i = table(n, k).index[mask as usize];
    debug_assert!(i != u16::MAX);
    i as usize
}

pub fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `e_A ∧ e_B` relative to `e_{A ∪ B}`; 0 when the subsets overlap.
pub fn shuffle_sign(a: u16, b: u16) -> i8 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // elements of a strictly greater than j
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Homogeneous element of `∧^k F^n` in the lexicographic wedge basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KVector<F: Field> {
    field: F,
    ambient: usize,
    degree: usize,
    coords: Vec<F::Elem>,
}

/// Element of `∧^3 V`: 20 coordinates for `dim V = 6`, 35 for `dim V = 7`.
pub type TriVector<F> = KVector<F>;

impl<F: Field> KVector<F> {
    pub fn zero(field: &F, ambient: usize, degree: usize) -> Self {
        assert!(ambient <= MAX_AMBIENT && degree <= ambient);
        KVector {
            field: field.clone(),
            ambient,
            degree,
            coords: vec![field.zero(); binomial(ambient, degree)],
        }
    }

    pub fn from_coords(field: &F, ambient: usize, degree: usize, coords: Vec<F::Elem>) -> Result<Self, ExteriorError> {
        if ambient == 0 || ambient > MAX_AMBIENT {
            return Err(ExteriorError::AmbientTooLarge(ambient));
        }
        if degree > ambient || coords.len() != binomial(ambient, degree) {
            return Err(ExteriorError::WrongDimension {
                expected: binomial(ambient, degree),
                got: coords.len(),
            });
        }
        Ok(KVector {
            field: field.clone(),
            ambient,
            degree,
            coords,
        })
    }

    /// `e_{i1} ∧ … ∧ e_{ik}` for arbitrary (possibly unsorted) indices.
    pub fn basis(field: &F, ambient: usize, indices: &[usize]) -> Self {
        let mut v = KVector::zero(field, ambient, indices.len());
        let mut sorted = indices.to_vec();
        // bubble sort tracking parity
        let mut sign = 1i64;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return v;
        }
        let mask = sorted.iter().fold(0u16, |m, &i| m | (1 << i));
        v.coords[basis_index(ambient, mask)] = field.from_i64(sign);
        v
    }

    /// A vector of `V` viewed as a 1-vector.
    pub fn from_vector(field: &F, v: &[F::Elem]) -> Self {
        KVector {
            field: field.clone(),
            ambient: v.len(),
            degree: 1,
            coords: v.to_vec(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F::Elem> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.field, &self.coords)
    }

    pub fn coefficient(&self, indices: &[usize]) -> F::Elem {
        let mask = indices.iter().fold(0u16, |m, &i| m | (1 << i));
        self.coords[basis_index(self.ambient, mask)].clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.ambient, self.degree), (other.ambient, other.degree));
        let f = &self.field;
        KVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f.add(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        KVector {
            coords: self.coords.iter().map(|a| f.mul(c, a)).collect(),
            ..self.clone()
        }
    }

    pub fn proportional_to(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.degree == other.degree
            && proportional(&self.field, &self.coords, &other.coords)
    }
}

/// Graded-anticommutative product in the fixed basis.
pub fn wedge<F: Field>(a: &KVector<F>, b: &KVector<F>) -> Result<KVector<F>, ExteriorError> {
    if a.ambient != b.ambient {
        return Err(ExteriorError::MixedAmbient(a.ambient, b.ambient));
    }
    let n = a.ambient;
    let deg = a.degree + b.degree;
    if deg > n {
        return Err(ExteriorError::DegreeOverflow(a.degree, b.degree, n));
    }
    let f = &a.field;
    let mut out = KVector::zero(f, n, deg);
    let ma = basis_masks(n, a.degree);
    let mb = basis_masks(n, b.degree);
    for (i, x) in a.coords.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.coords.iter().enumerate() {
            if f.is_zero(y) {
                continue;
            }
            let s = shuffle_sign(ma[i], mb[j]);
            if s == 0 {
                continue;
            }
            let idx = basis_index(n, ma[i] | mb[j]);
            let t = f.mul(x, y);
            out.coords[idx] = if s > 0 {
                f.add(&out.coords[idx], &t)
            } else {
                f.sub(&out.coords[idx], &t)
            };
        }
    }
    Ok(out)
}

/// Coefficient of a top-degree form on `e_0 ∧ … ∧ e_{n-1}`.
pub fn volume<F: Field>(top: &KVector<F>) -> Result<F::Elem, ExteriorError> {
    if top.degree != top.ambient {
        return Err(ExteriorError::WrongDimension {
            expected: top.ambient,
            got: top.degree,
        });
    }
    Ok(top.coords[0].clone())
}

/// `(α, β) = vol(α ∧ β)` on `∧^3 C^6`.
pub fn symplectic_form<F: Field>(a: &KVector<F>, b: &KVector<F>) -> Result<F::Elem, ExteriorError> {
    for v in [a, b] {
        if v.ambient != 6 {
            return Err(ExteriorError::WrongAmbient(v.ambient));
        }
        if v.degree != 3 {
            return Err(ExteriorError::WrongDimension {
                expected: 3,
                got: v.degree,
            });
        }
    }
    Ok(pairing_coords(&a.field, &a.coords, &b.coords))
}

/// Signs `s_I` with `(e_I, e_J) = s_I` when `J` is the complement of `I`, 0 otherwise.
pub fn complement_table() -> &'static [(usize, i8); 20] {
    static T: OnceLock<[(usize, i8); 20]> = OnceLock::new();
    T.get_or_init(|| {
        let masks = basis_masks(6, 3);
        let mut t = [(0usize, 0i8); 20];
        for (i, &m) in masks.iter().enumerate() {
            let c = !m & 0b11_1111;
            t[i] = (basis_index(6, c), shuffle_sign(m, c));
        }
        t
    })
}

/// Symplectic pairing on raw wedge-basis coordinates of `∧^3 C^6`.
pub fn pairing_coords<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (i, &(j, s)) in complement_table().iter().enumerate() {
        if f.is_zero(&a[i]) || f.is_zero(&b[j]) {
            continue;
        }
        let t = f.mul(&a[i], &b[j]);
        acc = if s > 0 { f.add(&acc, &t) } else { f.sub(&acc, &t) };
    }
    acc
}

/// Gram matrix of the pairing in the wedge basis: entry `(I, J) = (e_I, e_J)`.
pub fn symplectic_gram<F: Field>(f: &F) -> Matrix<F> {
    let mut g = Matrix::zeros(f, 20, 20);
    for (i, &(j, s)) in complement_table().iter().enumerate() {
        g[(i, j)] = f.from_i64(s as i64);
    }
    g
}

/// Wedge of the given vectors (rows) as a `k`-vector.
pub fn wedge_vectors<F: Field>(f: &F, ambient: usize, rows: &[Vec<F::Elem>]) -> KVector<F> {
    let k = rows.len();
    let masks = basis_masks(ambient, k);
    let coords = masks
        .iter()
        .map(|&m| {
            let cols = mask_indices(m);
            let minor = Matrix::from_fn(f, k, k, |r, c| rows[r][cols[c]].clone());
            minor.determinant()
        })
        .collect();
    KVector {
        field: f.clone(),
        ambient,
        degree: k,
        coords,
    }
}

/// Plücker point of a 3-dimensional subspace: wedge of its RREF basis rows.
pub fn plucker<F: Field>(w: &Subspace<F>) -> Result<TriVector<F>, ExteriorError> {
    if w.dim() != 3 {
        return Err(ExteriorError::WrongDimension {
            expected: 3,
            got: w.dim(),
        });
    }
    if w.ambient() > MAX_AMBIENT {
        return Err(ExteriorError::AmbientTooLarge(w.ambient()));
    }
    Ok(wedge_vectors(w.field(), w.ambient(), &w.basis_rows()))
}

/// Matrix of `v ↦ v ∧ α` from `V` to `∧^{k+1} V`; column `i` is `e_i ∧ α`.
pub fn left_wedge_matrix<F: Field>(a: &KVector<F>) -> Matrix<F> {
    let f = &a.field;
    let n = a.ambient;
    let rows = binomial(n, a.degree + 1);
    let mut m = Matrix::zeros(f, rows, n);
    let masks = basis_masks(n, a.degree);
    for (j, x) in a.coords.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for i in 0..n {
            let ei = 1u16 << i;
            let s = shuffle_sign(ei, masks[j]);
            if s == 0 {
                continue;
            }
            let r = basis_index(n, ei | masks[j]);
            m[(r, i)] = if s > 0 {
                f.add(&m[(r, i)], x)
            } else {
                f.sub(&m[(r, i)], x)
            };
        }
    }
    m
}

/// Matrix of `α ↦ v ∧ α` from `∧^k V` to `∧^{k+1} V`.
pub fn wedge_by_vector_matrix<F: Field>(f: &F, v: &[F::Elem], k: usize) -> Matrix<F> {
    let n = v.len();
    let src = basis_masks(n, k);
    let mut m = Matrix::zeros(f, binomial(n, k + 1), src.len());
    for (j, &mj) in src.iter().enumerate() {
        for (i, vi) in v.iter().enumerate() {
            if f.is_zero(vi) {
                continue;
            }
            let ei = 1u16 << i;
            let s = shuffle_sign(ei, mj);
            if s == 0 {
                continue;
            }
            let r = basis_index(n, ei | mj);
            m[(r, j)] = if s > 0 {
                f.add(&m[(r, j)], vi)
            } else {
                f.sub(&m[(r, j)], vi)
            };
        }
    }
    m
}

/// `{v : v ∧ α = 0}`.
pub fn support<F: Field>(a: &KVector<F>) -> Result<Subspace<F>, ExteriorError> {
    if a.is_zero() {
        return Err(ExteriorError::ZeroInput);
    }
    if a.degree == a.ambient {
        return Ok(Subspace::whole(&a.field, a.ambient));
    }
    let m = left_wedge_matrix(a);
    Ok(Subspace::from_matrix(&m.kernel()))
}

/// Decomposability test; returns the support when `α = w_1 ∧ … ∧ w_k`.
pub fn is_decomposable<F: Field>(a: &KVector<F>) -> Result<(bool, Option<Subspace<F>>), ExteriorError> {
    let s = support(a)?;
    if s.dim() != a.degree {
        return Ok((false, None));
    }
    let w = wedge_vectors(&a.field, a.ambient, &s.basis_rows());
    if w.proportional_to(a) {
        Ok((true, Some(s)))
    } else {
        Ok((false, None))
    }
}
