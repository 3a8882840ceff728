//! Sparse multivariate polynomials with graded-lexicographic term order.

mod gcd;
mod interp;
mod univariate;

pub use gcd::gcd_multivariate;
pub use interp::{
    interpolate_homogeneous, interpolate_homogeneous_in, interpolate_homogeneous_multimodular, simplex_points,
};
pub use univariate::{roots_modp, UniPoly};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalars::{Field, PrimeField, Rational, Rationals, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("evaluations are inconsistent with a homogeneous polynomial of degree {0}")]
    InconsistentEvaluations(usize),
    #[error("chart does not complement the base point")]
    BadChart,
    #[error("point is not on the hypersurface")]
    NotOnHypersurface,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("characteristic {0} is too small for degree {1}")]
    CharacteristicTooSmall(u64, usize),
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("coefficients did not stabilize under rational reconstruction")]
    NoReconstruction,
    #[error("gcd computation failed on every attempted base point")]
    GcdFailed,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Exponent vector, ordered by total degree and then lexicographically
/// (`x_0` heaviest).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<F: Field = Rationals> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms_desc()
            .map(|(m, c)| format!("{}*x^{:?}", self.field.to_rational_string(c), m.0))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, nvars, vec![0; nvars], c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, nvars, e, field.one())
    }

    pub fn monomial(field: &F, nvars: usize, exps: Vec<u16>, c: F::Elem) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms(field: &F, nvars: usize, terms: impl IntoIterator<Item = (Vec<u16>, F::Elem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(field: &F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            field,
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = f.add(v, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    /// Terms in decreasing graded-lex order (leading term first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u16]) -> F::Elem {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.nvars);
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), f.mul(c, x))).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u16> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[F::Elem]) -> F::Elem {
        assert_eq!(x.len(), self.nvars);
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(xi, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitute `x_i ↦ images[i]`.
    pub fn compose(&self, images: &[MultiPoly<F>]) -> MultiPoly<F> {
        assert_eq!(images.len(), self.nvars);
        let f = &self.field;
        let m = images.first().map_or(0, |p| p.nvars);
        let maxdeg: Vec<usize> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|k| k.0[i] as usize).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MultiPoly<F>>> = images
            .iter()
            .zip(&maxdeg)
            .map(|(p, &d)| {
                let mut v = vec![MultiPoly::one(f, m)];
                for k in 1..=d {
                    let next = v[k - 1].mul(p);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(f, m);
        for (mono, c) in &self.terms {
            let mut t = MultiPoly::constant(f, m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, target: &G, mut g: impl FnMut(&F::Elem) -> G::Elem) -> MultiPoly<G> {
        MultiPoly::from_terms(target, self.nvars, self.terms.iter().map(|(m, c)| (m.0.clone(), g(c))))
    }

    /// Scale so that the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    /// Set `x_i = 1` and drop the variable.
    pub fn dehomogenize(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.field, self.nvars - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(i);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Homogenize to degree `d` with a new variable inserted at position `i`.
    pub fn homogenize(&self, i: usize, d: usize) -> Self {
        let mut out = Self::zero(&self.field, self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(i, (d - m.degree()) as u16);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }
}

impl MultiPoly<Rationals> {
    pub fn reduce_mod(&self, fp: &PrimeField) -> Result<MultiPoly<PrimeField>, ScalarError> {
        let mut out = MultiPoly::zero(fp, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), fp.reduce(c)?);
        }
        Ok(out)
    }

    /// Scale to coprime integer coefficients with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs: Vec<Rational> = self.terms.values().cloned().collect();
        let ints = crate::scalars::primitive_integer_vector(&coeffs);
        let lead_negative = ints.last().map(|x| crate::scalars::bigint_sign(x) < 0).unwrap_or(false);
        let terms = self.terms.keys().cloned().zip(ints).map(|(m, v)| {
            let v = if lead_negative { -v } else { v };
            (m, Rational::from_integer(v))
        });
        MultiPoly {
            field: Rationals,
            nvars: self.nvars,
            terms: terms.collect(),
        }
    }

    pub fn from_i64_terms(nvars: usize, terms: &[(&[u16], i64)]) -> Self {
        Self::from_terms(
            &Rationals,
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), Rational::from(*c))),
        )
    }
}

/// `q` with `f = q g`, or `NotDivisible`.
pub fn exact_divide<F: Field>(f: &MultiPoly<F>, g: &MultiPoly<F>) -> Result<MultiPoly<F>, PolyError> {
    if f.nvars != g.nvars {
        return Err(PolyError::VarMismatch(f.nvars, g.nvars));
    }
    let (lg, cg) = g.leading_term().ok_or(PolyError::ZeroPolynomial)?;
    let fld = f.field.clone();
    let cg_inv = fld.inv(cg).unwrap();
    let mut r = f.clone();
    let mut q = MultiPoly::zero(&fld, f.nvars);
    while let Some((lr, cr)) = r.leading_term() {
        if !lg.divides(lr) {
            return Err(PolyError::NotDivisible);
        }
        let e: Vec<u16> = lr.0.iter().zip(&lg.0).map(|(a, b)| a - b).collect();
        let c = fld.mul(cr, &cg_inv);
        let t = MultiPoly::monomial(&fld, f.nvars, e, c);
        r = r.sub(&t.mul(g));
        q = q.add(&t);
    }
    Ok(q)
}

fn check_chart<F: Field>(f: &MultiPoly<F>, v0: &[F::Elem], chart: &[Vec<F::Elem>]) -> Result<(), PolyError> {
    let n = f.nvars;
    if v0.len() != n || chart.len() + 1 != n || chart.iter().any(|c| c.len() != n) {
        return Err(PolyError::BadChart);
    }
    let mut rows = vec![v0.to_vec()];
    rows.extend(chart.iter().cloned());
    if Matrix::from_rows(&f.field, n, rows).rank() < n {
        return Err(PolyError::BadChart);
    }
    Ok(())
}

/// Graded parts `g_0, …, g_d` of `w ↦ f(v_0 + Σ w_j c_j)` in the chart variables `w`.
pub fn taylor_parts<F: Field>(f: &MultiPoly<F>, v0: &[F::Elem], chart: &[Vec<F::Elem>]) -> Result<Vec<MultiPoly<F>>, PolyError> {
    check_chart(f, v0, chart)?;
    let fld = &f.field;
    let m = chart.len();
    let images: Vec<MultiPoly<F>> = (0..f.nvars)
        .map(|i| {
            let lin: Vec<F::Elem> = chart.iter().map(|c| c[i].clone()).collect();
            MultiPoly::linear(fld, &lin).add(&MultiPoly::constant(fld, m, v0[i].clone()))
        })
        .collect();
    let g = f.compose(&images);
    let d = f.degree().unwrap_or(0);
    Ok((0..=d).map(|k| g.homogeneous_part(k)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentCone<F: Field> {
    pub multiplicity: usize,
    pub lowest: MultiPoly<F>,
    /// Rank of the symmetric matrix of `g_2` when the multiplicity is 2.
    pub quadratic_rank: Option<usize>,
}

impl<F: Field> TangentCone<F> {
    /// Double point with a rank-one tangent cone.
    pub fn is_cusp_like(&self) -> bool {
        self.multiplicity == 2 && self.quadratic_rank == Some(1)
    }
}

pub fn tangent_cone<F: Field>(f: &MultiPoly<F>, v0: &[F::Elem], chart: &[Vec<F::Elem>]) -> Result<TangentCone<F>, PolyError> {
    let parts = taylor_parts(f, v0, chart)?;
    if !parts[0].is_zero() {
        return Err(PolyError::NotOnHypersurface);
    }
    let m = parts.iter().position(|g| !g.is_zero()).ok_or(PolyError::ZeroPolynomial)?;
    let lowest = parts[m].clone();
    let quadratic_rank = (m == 2).then(|| quadratic_form_rank(&lowest));
    Ok(TangentCone {
        multiplicity: m,
        lowest,
        quadratic_rank,
    })
}

/// Rank of the (doubled) symmetric matrix of a quadratic form.
pub fn quadratic_form_rank<F: Field>(q: &MultiPoly<F>) -> usize {
    let f = &q.field;
    let n = q.nvars;
    let mut m = Matrix::zeros(f, n, n);
    for (mono, c) in q.terms() {
        let idx: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat(i).take(mono.0[i] as usize)).collect();
        if idx[0] == idx[1] {
            m[(idx[0], idx[0])] = f.add(c, c);
        } else {
            m[(idx[0], idx[1])] = c.clone();
            m[(idx[1], idx[0])] = c.clone();
        }
    }
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn poly(nv: usize, t: &[(&[u16], i64)]) -> MultiPoly {
        MultiPoly::from_i64_terms(nv, t)
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0, 0]);
        let b = Monomial(vec![0, 1, 2]);
        let c = Monomial(vec![0, 3, 0]);
        assert!(b > a);
        assert!(c > b);
        assert!(Monomial(vec![1, 0]) > Monomial(vec![0, 1]));
    }

    #[test]
    fn arithmetic_and_eval() {
        let x = MultiPoly::var(&Rationals, 2, 0);
        let y = MultiPoly::var(&Rationals, 2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p, poly(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]));
        assert_eq!(p.eval(&[q(2), q(3)]), q(25));
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), Some(2));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn division_examples() {
        let s = poly(3, &[(&[0, 3, 3], 2), (&[1, 2, 3], -1), (&[6, 0, 0], 5), (&[2, 2, 2], 1)]);
        let x4 = MultiPoly::var(&Rationals, 3, 0).pow(4);
        assert_eq!(exact_divide(&x4.mul(&s), &x4).unwrap(), s);
        assert_eq!(exact_divide(&s, &s).unwrap(), MultiPoly::one(&Rationals, 3));
        let f = poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let g = MultiPoly::var(&Rationals, 2, 0);
        assert_eq!(exact_divide(&f, &g), Err(PolyError::NotDivisible));
        assert_eq!(
            exact_divide(&f, &MultiPoly::zero(&Rationals, 2)),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn taylor_example() {
        // f = x0 x2^2 at e0 with chart (e1, e2)
        let f = poly(3, &[(&[1, 0, 2], 1)]);
        let v0 = vec![q(1), q(0), q(0)];
        let chart = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let parts = taylor_parts(&f, &v0, &chart).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(parts[0].is_zero() && parts[1].is_zero() && parts[3].is_zero());
        assert_eq!(parts[2], poly(2, &[(&[0, 2], 1)]));
        let bad = vec![vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]];
        assert_eq!(taylor_parts(&f, &v0, &bad), Err(PolyError::BadChart));
    }

    #[test]
    fn tangent_cones() {
        // affine models at the origin of P^2 chart x0 = 1
        let v0 = vec![q(1), q(0), q(0)];
        let chart = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let cusp = poly(3, &[(&[1, 2, 0], 1), (&[0, 0, 3], -1)]);
        let t = tangent_cone(&cusp, &v0, &chart).unwrap();
        assert_eq!((t.multiplicity, t.quadratic_rank), (2, Some(1)));
        assert!(t.is_cusp_like());
        let node = poly(3, &[(&[0, 1, 1], 1)]);
        let t = tangent_cone(&node, &v0, &chart).unwrap();
        assert_eq!((t.multiplicity, t.quadratic_rank), (2, Some(2)));
        let triple = poly(3, &[(&[0, 3, 0], 1), (&[0, 0, 3], -1)]);
        assert_eq!(tangent_cone(&triple, &v0, &chart).unwrap().multiplicity, 3);
        let off = poly(3, &[(&[1, 0, 0], 1)]);
        assert_eq!(tangent_cone(&off, &v0, &chart), Err(PolyError::NotOnHypersurface));
    }

    #[test]
    fn primitive_normalization() {
        let p = MultiPoly::from_terms(
            &Rationals,
            2,
            vec![(vec![2, 0], Rational::new(-2, 3).unwrap()), (vec![0, 2], Rational::new(4, 9).unwrap())],
        );
        assert_eq!(p.primitive(), poly(2, &[(&[2, 0], -3), (&[0, 2], 2)]).neg().neg().scale(&q(-1)));
    }

    fn arb_poly(nv: usize, maxdeg: u16) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((proptest::collection::vec(0..=maxdeg, nv), -5i64..=5), 0..6).prop_map(move |t| {
            MultiPoly::from_terms(&Rationals, nv, t.into_iter().map(|(e, c)| (e, Rational::from(c))))
        })
    }

    proptest! {
        #[test]
        fn division_round_trip(f in arb_poly(3, 3), g in arb_poly(3, 2)) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!(exact_divide(&f.mul(&g), &g).unwrap(), f);
        }

        #[test]
        fn taylor_parts_resum(f in arb_poly(3, 3), a in -3i64..=3, b in -3i64..=3) {
            let v0 = vec![q(1), q(a), q(b)];
            let chart = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
            let parts = taylor_parts(&f, &v0, &chart).unwrap();
            for (k, g) in parts.iter().enumerate() {
                prop_assert!(g.is_zero() || g.degree() == Some(k));
            }
            // Σ g_i evaluated at w equals f(v0 + w)
            let sum = parts.iter().fold(MultiPoly::zero(&Rationals, 2), |acc, g| acc.add(g));
            for (s, t) in [(1i64, 2i64), (-1, 3), (0, 0)] {
                let x = vec![q(1), q(a + s), q(b + t)];
                prop_assert_eq!(sum.eval(&[q(s), q(t)]), f.eval(&x));
            }
        }

        #[test]
        fn multiplicity_chart_independent(a in 1i64..=4, b in -3i64..=3, c in -3i64..=3) {
            // f = (x1)^2 x0 - x2^3 has a cusp at e0
            let f = poly(3, &[(&[1, 2, 0], 1), (&[0, 0, 3], -1)]);
            let v0 = vec![q(1), q(0), q(0)];
            let c1 = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
            let c2 = vec![vec![q(b), q(a), q(c)], vec![q(c), q(1), q(a + 1)]];
            prop_assume!(Matrix::from_rows(&Rationals, 3, vec![v0.clone(), c2[0].clone(), c2[1].clone()]).rank() == 3);
            let t1 = tangent_cone(&f, &v0, &c1).unwrap();
            let t2 = tangent_cone(&f, &v0, &c2).unwrap();
            prop_assert_eq!(t1.multiplicity, t2.multiplicity);
            prop_assert_eq!(t1.quadratic_rank, t2.quadratic_rank);
        }
    }
}
