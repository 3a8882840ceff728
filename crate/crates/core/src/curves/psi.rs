//! The Plücker quadratic forms `ψ^{v_0}_w(β̄) = vol(v_0 ∧ w ∧ β ∧ β)` on `∧^2 V_0 / ∧^2 W_0`.
//!
//! `V_0` has basis `u_0..u_4` with `W_0 = ⟨u_0, u_1⟩`; `∧^2 V_0 / ∧^2 W_0` has basis
//! `u_a ∧ u_b`, `(a, b) ≠ (0, 1)`. The form is taken with the divided square
//! `β^{(2)} = Σ_{i<j} c_i c_j b_i ∧ b_j`, so it makes sense in characteristic 2;
//! its matrix is the polar form `B_ij = vol(v_0 ∧ w ∧ b_i ∧ b_j)`.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_frame, frame_completion, CurveError};
use crate::exterior::wedge_vectors;
use crate::lagrangian::{f_of, LagrangianSubspace};
use crate::linalg::{Matrix, Subspace};
use crate::planes::random_unimodular;
use crate::poly::{interpolate_homogeneous_in, MultiPoly};
use crate::scalars::{Field, PrimeField, Rational, Rationals};

/// Index pairs of the basis of `∧^2 V_0`, lexicographic; position 0 is `u_0 ∧ u_1`.
fn pairs() -> [(usize, usize); 10] {
    [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiFrame<F: Field = Rationals> {
    pub v0: Vec<F::Elem>,
    /// `u_0..u_4`; the first two span `W_0`.
    pub u: Vec<Vec<F::Elem>>,
}

impl<F: Field> PsiFrame<F> {
    /// Requires `v_0, u_0..u_4` to be a basis of `F^6`; then `V_0 = ⟨u⟩` is complementary
    /// to `[v_0]` and `V_0 ∩ ⟨v_0, u_0, u_1⟩ = W_0`.
    pub fn new(f: &F, v0: Vec<F::Elem>, w0: [Vec<F::Elem>; 2], rest: [Vec<F::Elem>; 3]) -> Result<Self, CurveError> {
        let mut u: Vec<Vec<F::Elem>> = w0.into_iter().collect();
        u.extend(rest);
        let mut rows = vec![v0.clone()];
        rows.extend(u.iter().cloned());
        if rows.iter().any(|r| r.len() != 6) || Matrix::from_rows(f, 6, rows).rank() != 6 {
            return Err(CurveError::BadFrame("v0, W0, V0 are not complementary".into()));
        }
        Ok(PsiFrame { v0, u })
    }

    fn field_det(&self, f: &F, vs: [&Vec<F::Elem>; 6]) -> F::Elem {
        Matrix::from_rows(f, 6, vs.iter().map(|v| (*v).clone()).collect()).determinant()
    }

    /// Full `10 × 10` polar matrix on `∧^2 V_0` (row and column 0 vanish).
    fn polar_full(&self, f: &F, w: &[F::Elem]) -> Matrix<F> {
        let w = w.to_vec();
        let p = pairs();
        Matrix::from_fn(f, 10, 10, |i, j| {
            let ((a, b), (c, d)) = (p[i], p[j]);
            if a == c || a == d || b == c || b == d {
                return f.zero();
            }
            self.field_det(f, [&self.v0, &w, &self.u[a], &self.u[b], &self.u[c], &self.u[d]])
        })
    }

    fn check_in_w0(&self, f: &F, w: &[F::Elem]) -> Result<(), CurveError> {
        let m = Matrix::from_rows(f, 6, vec![self.u[0].clone(), self.u[1].clone(), w.to_vec()]);
        if w.len() != 6 || m.rank() != 2 {
            return Err(CurveError::BadFrame("w is not in W0".into()));
        }
        Ok(())
    }
}

impl PsiFrame<Rationals> {
    /// Columns of a seeded random unimodular matrix: `v_0`, then `W_0`, then the rest of `V_0`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_unimodular(&mut rng, 6);
        let c = |i: usize| g.column(i);
        PsiFrame::new(&Rationals, c(0), [c(1), c(2)], [c(3), c(4), c(5)]).expect("unimodular")
    }
}

/// The `9 × 9` symmetric polar matrix of `ψ^{v_0}_w`.
pub fn psi_form<F: Field>(f: &F, frame: &PsiFrame<F>, w: &[F::Elem]) -> Result<Matrix<F>, CurveError> {
    if w.iter().any(|x| !f.is_zero(x)) {
        frame.check_in_w0(f, w)?;
    }
    let full = frame.polar_full(f, w);
    let idx: Vec<usize> = (1..10).collect();
    Ok(full.select_rows(&idx).select_columns(&idx))
}

/// `Σ_{i<j} c_i c_j B_ij`.
fn quadratic_value<F: Field>(f: &F, b: &Matrix<F>, c: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for i in 0..c.len() {
        if f.is_zero(&c[i]) {
            continue;
        }
        for j in i + 1..c.len() {
            if !f.is_zero(&c[j]) && !f.is_zero(&b[(i, j)]) {
                acc = f.add(&acc, &f.mul(&f.mul(&c[i], &c[j]), &b[(i, j)]));
            }
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoncisvalleReport {
    pub prime: u32,
    /// Points of `P(∧^2 V_0)` scanned.
    pub ambient_points: usize,
    /// Points of `P(∧^2 V_0 / ∧^2 W_0)` where every `ψ_w` vanishes.
    pub zero_set_points: usize,
    /// Points of the projected Grassmannian `ρ̃(Gr(2, V_0) ∖ {∧^2 W_0})`.
    pub projected_grassmannian_points: usize,
    pub contained: bool,
    /// `zero_set_points − projected_grassmannian_points`.
    pub discrepancy: i64,
}

/// Scan `P(∧^2 V_0)` over `F_p` and compare the common zeros of `ψ_{u_0}, ψ_{u_1}` with
/// the projection of the decomposable points from `∧^2 W_0`.
pub fn roncisvalle_check(frame: &PsiFrame<Rationals>, p: u32) -> Result<RoncisvalleReport, CurveError> {
    let fp = PrimeField::new(p).map_err(|_| CurveError::NotPrime(p))?;
    let red = |v: &Vec<Rational>| -> Result<Vec<u32>, CurveError> {
        v.iter().map(|x| fp.reduce(x).map_err(|_| CurveError::BadReduction(p))).collect()
    };
    let v0 = red(&frame.v0)?;
    let u: Vec<Vec<u32>> = frame.u.iter().map(red).collect::<Result<_, _>>()?;
    let fr = PsiFrame::new(&fp, v0, [u[0].clone(), u[1].clone()], [u[2].clone(), u[3].clone(), u[4].clone()])
        .map_err(|_| CurveError::BadReduction(p))?;
    let forms = [fr.polar_full(&fp, &fr.u[0]), fr.polar_full(&fp, &fr.u[1])];
    let pr = pairs();
    let coord = |c: &[u32], a: usize, b: usize| -> u32 { c[pr.iter().position(|&q| q == (a, b)).unwrap()] };
    let decomposable = |c: &[u32]| -> bool {
        // c_ab c_cd − c_ac c_bd + c_ad c_bc = 0 for a < b < c < d
        (0..5).all(|a| {
            (a + 1..5).all(|b| {
                (b + 1..5).all(|cc| {
                    (cc + 1..5).all(|d| {
                        let t1 = fp.mul(&coord(c, a, b), &coord(c, cc, d));
                        let t2 = fp.mul(&coord(c, a, cc), &coord(c, b, d));
                        let t3 = fp.mul(&coord(c, a, d), &coord(c, b, cc));
                        fp.add(&fp.sub(&t1, &t2), &t3) == 0
                    })
                })
            })
        })
    };
    let normalize = |c: &[u32]| -> Vec<u32> {
        let lead = c.iter().find(|&&x| x != 0).copied().unwrap();
        let inv = fp.inv(&lead).unwrap();
        c.iter().map(|x| fp.mul(x, &inv)).collect()
    };
    let points = super::projective_points(p, 10);
    let mut zeros = HashSet::new();
    let mut projected = HashSet::new();
    for c in &points {
        if c[1..].iter().all(|&x| x == 0) {
            continue;
        }
        let image = normalize(&c[1..]);
        if forms.iter().all(|b| quadratic_value(&fp, b, c) == 0) {
            zeros.insert(image.clone());
        }
        if decomposable(c) {
            projected.insert(image);
        }
    }
    Ok(RoncisvalleReport {
        prime: p,
        ambient_points: points.len(),
        zero_set_points: zeros.len(),
        projected_grassmannian_points: projected.len(),
        contained: projected.is_subset(&zeros),
        discrepancy: zeros.len() as i64 - projected.len() as i64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerm<F: Field = Rationals> {
    /// `dim(A ∩ F_{v_0}) − 1`.
    pub kbar: usize,
    /// `det(ψ_w |_K̄)` in the two chart variables (`w = t_0 w_j + t_1 w_k`, `j < k` the
    /// frame indices other than the first nonzero coordinate of `x`).
    pub det: MultiPoly<F>,
}

/// The frame used at a point `x` of `P(W)`: `W_0` spanned by the two other frame
/// vectors, `V_0` adding the standard completion of `W`.
pub(crate) fn psi_frame_at<F: Field>(f: &F, frame: &[Vec<F::Elem>], x: &[F::Elem]) -> Result<PsiFrame<F>, CurveError> {
    let pivot = x
        .iter()
        .position(|c| !f.is_zero(c))
        .ok_or_else(|| CurveError::BadFrame("zero point".into()))?;
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let v0 = super::frame_point(f, frame, x);
    let rest = frame_completion(f, frame);
    PsiFrame::new(
        f,
        v0,
        [frame[others[0]].clone(), frame[others[1]].clone()],
        [rest[0].clone(), rest[1].clone(), rest[2].clone()],
    )
}

/// `k̄` and `det(ψ^{v_0}_w |_K̄)` for `v_0 = Σ x_i w_i`.
pub fn leading_term(a: &LagrangianSubspace, frame: &[Vec<Rational>], x: &[Rational]) -> Result<LeadingTerm, CurveError> {
    leading_term_in(a, frame, x)
}

/// As [`leading_term`] over any field of characteristic 0 or larger than `k̄`.
pub fn leading_term_in<F: Field>(
    a: &LagrangianSubspace<F>,
    frame: &[Vec<F::Elem>],
    x: &[F::Elem],
) -> Result<LeadingTerm<F>, CurveError> {
    let f = a.field();
    check_frame(a, frame)?;
    let pf = psi_frame_at(f, frame, x)?;
    let k = a.space().intersect(f_of(f, &pf.v0)?.space());
    let kbar = k.dim() - 1;
    // β ↦ v_0 ∧ β on the wedge basis of ∧^2 V_0
    let images: Vec<Vec<F::Elem>> = pairs()
        .iter()
        .map(|&(i, j)| wedge_vectors(f, 6, &[pf.v0.clone(), pf.u[i].clone(), pf.u[j].clone()]).into_coords())
        .collect();
    let m = Matrix::from_rows(f, 20, images);
    let classes: Vec<Vec<F::Elem>> = k
        .basis_rows()
        .iter()
        .map(|alpha| m.solve_left(alpha).expect("F_{v0} = v0 ∧ ∧^2 V_0")[1..].to_vec())
        .collect();
    let kb = Subspace::span(f, 9, classes);
    if kb.dim() != kbar {
        return Err(CurveError::InternalInconsistency("K̄ has unexpected dimension".into()));
    }
    let b0 = psi_form(f, &pf, &pf.u[0])?;
    let b1 = psi_form(f, &pf, &pf.u[1])?;
    let kt = kb.basis().transpose();
    let g0 = kb.basis().mul(&b0).mul(&kt);
    let g1 = kb.basis().mul(&b1).mul(&kt);
    let det = if kbar == 0 {
        MultiPoly::one(f, 2)
    } else {
        interpolate_homogeneous_in(f, 2, kbar, |t| {
            Matrix::from_fn(f, kbar, kbar, |i, j| f.add(&f.mul(&t[0], &g0[(i, j)]), &f.mul(&t[1], &g1[(i, j)])))
                .determinant()
        })?
    };
    Ok(LeadingTerm { kbar, det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    fn standard_frame() -> PsiFrame {
        let e = |i: usize| -> Vec<Rational> { (0..6).map(|j| Rational::from((i == j) as i64)).collect() };
        PsiFrame::new(&Rationals, e(0), [e(1), e(2)], [e(3), e(4), e(5)]).unwrap()
    }

    #[test]
    fn frame_validation() {
        let e = |i: usize| -> Vec<Rational> { (0..6).map(|j| Rational::from((i == j) as i64)).collect() };
        assert!(matches!(
            PsiFrame::new(&Rationals, e(0), [e(1), e(0)], [e(3), e(4), e(5)]),
            Err(CurveError::BadFrame(_))
        ));
        let f = standard_frame();
        assert!(psi_form(&Rationals, &f, &e(3)).is_err());
    }

    #[test]
    fn decomposable_classes_are_isotropic() {
        let f = standard_frame();
        let b = psi_form(&Rationals, &f, &q(&[0, 0, 1, 0, 0, 0])).unwrap();
        // β = u_2 ∧ u_3 is decomposable
        let mut c = vec![Rational::zero(); 9];
        c[6] = Rational::one();
        assert!(quadratic_value(&Rationals, &b, &c).is_zero());
        // u_2 ∧ u_3 + u_0 ∧ u_4 is not, and is detected by ψ_{u_1}
        c[2] = Rational::one();
        assert!(!quadratic_value(&Rationals, &b, &c).is_zero());
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(b[(i, j)], b[(j, i)]);
            }
        }
    }

    #[test]
    fn roncisvalle_small_primes() {
        let f = standard_frame();
        let r2 = roncisvalle_check(&f, 2).unwrap();
        assert_eq!(r2.ambient_points, 1023);
        assert!(r2.contained);
        let r3 = roncisvalle_check(&f, 3).unwrap();
        assert_eq!(r3.ambient_points, 29524);
        assert!(r3.contained);
        for seed in 0..2 {
            assert!(roncisvalle_check(&PsiFrame::random(seed), 2).unwrap().contained);
        }
    }

    proptest! {
        #[test]
        fn psi_is_linear_in_w(a in -4i64..=4, b in -4i64..=4) {
            let f = standard_frame();
            let w1 = q(&[0, 1, 0, 0, 0, 0]);
            let w2 = q(&[0, 0, 1, 0, 0, 0]);
            let w = q(&[0, a, b, 0, 0, 0]);
            let lhs = psi_form(&Rationals, &f, &w).unwrap();
            let m1 = psi_form(&Rationals, &f, &w1).unwrap();
            let m2 = psi_form(&Rationals, &f, &w2).unwrap();
            for i in 0..9 {
                for j in 0..9 {
                    let rhs = &(&Rational::from(a) * &m1[(i, j)]) + &(&Rational::from(b) * &m2[(i, j)]);
                    prop_assert_eq!(&lhs[(i, j)], &rhs);
                }
            }
        }
    }
}
