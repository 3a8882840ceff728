//! EPW sextics `Y_A = {[v] : F_v ∩ A ≠ 0}` of Lagrangian subspaces `A ⊂ ∧^3 C^6`.
//!
//! For a hyperplane `V_0 = {l = 0}` the 20 rows `A_1..A_10, v∧β_1..v∧β_10`
//! (`β_j` the wedge basis of `∧^2 V_0`) have a determinant of degree 10 in `v`.
//! Off `V_0` the second block spans `F_v`; on `V_0` it has rank 6, so the
//! determinant is `l^4 · y_A`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{plucker, wedge_by_vector_matrix, wedge_vectors};
use crate::lagrangian::{
    f_of, graph_lagrangian, intersection_dim, theta_enumerate_modp, transform_lagrangian, LagrangianError,
    LagrangianSubspace,
};
use crate::linalg::{Matrix, Subspace};
use crate::planes::{i_plus_plane, random_unimodular};
use crate::poly::{
    exact_divide, interpolate_homogeneous_multimodular, roots_modp, tangent_cone, MultiPoly, PolyError, UniPoly,
};
use crate::scalars::{Field, PrimeField, Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpwError {
    #[error("expected a hyperplane of C^6, got a subspace of dimension {0}")]
    BadHyperplane(usize),
    #[error("construction failed for every attempted hyperplane: {0}")]
    ConstructionDegenerate(String),
    #[error("only {0} independent vectors")]
    SpanDeficient(usize),
    #[error("Y_A is all of P^5")]
    IdenticallyZero,
    #[error("no suitable Lagrangian found within {0} attempts")]
    SearchExhausted(usize),
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Linear data of the determinant: constant rows and rows linear in `v`.
struct DeterminantModel {
    a_rows: Vec<Vec<BigInt>>,
    /// `lin[j][i]` = coordinates of `e_i ∧ β_j`
    lin: Vec<Vec<Vec<BigInt>>>,
}

impl DeterminantModel {
    fn new(a: &LagrangianSubspace, v0: &Subspace<Rationals>) -> Self {
        let basis = v0.integer_rows();
        let mut betas = Vec::new();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let rows: Vec<Vec<Rational>> = [&basis[i], &basis[j]]
                    .iter()
                    .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
                    .collect();
                betas.push(wedge_vectors(&Rationals, 6, &rows).into_coords());
            }
        }
        let lin = betas
            .iter()
            .map(|b| {
                (0..6)
                    .map(|i| {
                        let mut e = vec![Rational::zero(); 6];
                        e[i] = Rational::one();
                        let w = wedge_by_vector_matrix(&Rationals, &e, 2).mul_vec(b);
                        w.iter().map(|x| x.numer().clone()).collect()
                    })
                    .collect()
            })
            .collect();
        DeterminantModel {
            a_rows: a.space().integer_rows(),
            lin,
        }
    }

    fn matrix_at<F: Field>(&self, f: &F, conv: impl Fn(&BigInt) -> F::Elem, v: &[F::Elem]) -> Matrix<F> {
        let mut rows: Vec<Vec<F::Elem>> = self.a_rows.iter().map(|r| r.iter().map(&conv).collect()).collect();
        for lj in &self.lin {
            let mut row = vec![f.zero(); 20];
            for (vi, li) in v.iter().zip(lj) {
                if f.is_zero(vi) {
                    continue;
                }
                for (x, c) in row.iter_mut().zip(li) {
                    let c = conv(c);
                    if !f.is_zero(&c) {
                        *x = f.add(x, &f.mul(vi, &c));
                    }
                }
            }
            rows.push(row);
        }
        Matrix::from_rows(f, 20, rows)
    }
}

fn hyperplane_form(v0: &Subspace<Rationals>) -> Result<Vec<Rational>, EpwError> {
    if v0.ambient() != 6 || v0.dim() != 5 {
        return Err(EpwError::BadHyperplane(v0.dim()));
    }
    let l = Subspace::from_matrix(&v0.annihilator()).integer_rows().remove(0);
    Ok(l.into_iter().map(Rational::from_integer).collect())
}

/// Coordinate hyperplane `{x_k = 0}`.
pub fn coordinate_hyperplane(k: usize) -> Subspace<Rationals> {
    let idx: Vec<usize> = (0..6).filter(|&i| i != k).collect();
    Subspace::coordinate(&Rationals, 6, &idx)
}

/// Kernel of the linear form `l`.
pub fn hyperplane_of(l: &[Rational]) -> Subspace<Rationals> {
    Subspace::from_matrix(&Matrix::from_rows(&Rationals, 6, vec![l.to_vec()]).kernel())
}

/// The degree-10 determinant in `x_0..x_5`.
pub fn epw_determinant(a: &LagrangianSubspace, v0: &Subspace<Rationals>) -> Result<MultiPoly, EpwError> {
    hyperplane_form(v0)?;
    let model = DeterminantModel::new(a, v0);
    let det = interpolate_homogeneous_multimodular(
        6,
        10,
        |fp, v| Some(model.matrix_at(fp, |x| fp.reduce_int(x), v).determinant()),
        |v| model.matrix_at(&Rationals, |x| Rational::from_integer(x.clone()), v).determinant(),
    )?;
    Ok(det)
}

/// `epw_determinant / l^4`, primitive with positive leading coefficient; `None`
/// when the determinant vanishes identically.
fn sextic_for(a: &LagrangianSubspace, v0: &Subspace<Rationals>) -> Result<Option<MultiPoly>, EpwError> {
    let l = MultiPoly::linear(&Rationals, &hyperplane_form(v0)?);
    let det = epw_determinant(a, v0)?;
    if det.is_zero() {
        return Ok(None);
    }
    let y = exact_divide(&det, &l.pow(4))?;
    if exact_divide(&y, &l).is_ok() {
        return Err(EpwError::ConstructionDegenerate("determinant divisible by l^5".into()));
    }
    if y.degree() != Some(6) {
        return Err(EpwError::ConstructionDegenerate(format!("quotient has degree {:?}", y.degree())));
    }
    Ok(Some(y.primitive()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipCheck {
    pub prime: u32,
    pub points: usize,
    /// Sampled points with `y_A(v) = 0`.
    pub on_hypersurface: usize,
    pub mismatches: usize,
}

/// Compare `y_A(v) = 0` with `dim(A ∩ F_v) ≥ 1` over `F_p` (`p` odd) on `count` points,
/// about half of them chosen on `Y_A` by root finding along random lines.
pub fn membership_check(a: &LagrangianSubspace, y: &MultiPoly, p: u32, count: usize, seed: u64) -> Result<MembershipCheck, EpwError> {
    let fp = PrimeField::new(p).map_err(|_| LagrangianError::NotPrime(p))?;
    let ap = a.reduce_mod(&fp);
    let yp = y.reduce_mod(&fp).map_err(PolyError::from)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_point = |rng: &mut ChaCha8Rng| -> Vec<u32> {
        loop {
            let v: Vec<u32> = (0..6).map(|_| rng.gen_range(0..p)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    };
    let mut points = Vec::with_capacity(count);
    let mut tries = 0;
    while points.len() < count / 2 && tries < 20 * count {
        tries += 1;
        let (base, dir) = (random_point(&mut rng), random_point(&mut rng));
        let at = |t: u32| -> Vec<u32> { base.iter().zip(&dir).map(|(b, d)| fp.add(b, &fp.mul(&t, d))).collect() };
        let values: Vec<u32> = (0..7).map(|t| yp.eval(&at(t))).collect();
        let line = UniPoly::interpolate_at_naturals(&fp, &values);
        if line.is_zero() {
            continue;
        }
        if let Some(&t) = roots_modp(&fp, &line, rng.gen()).first() {
            let v = at(t);
            if v.iter().any(|&x| x != 0) {
                points.push(v);
            }
        }
    }
    while points.len() < count {
        points.push(random_point(&mut rng));
    }
    let mut on = 0;
    let mut mismatches = 0;
    for v in &points {
        let zero = yp.eval(v) == 0;
        let fv = f_of(&fp, v)?;
        let meets = intersection_dim(ap.space(), fv.space()) >= 1;
        on += zero as usize;
        mismatches += (zero != meets) as usize;
    }
    Ok(MembershipCheck {
        prime: p,
        points: count,
        on_hypersurface: on,
        mismatches,
    })
}

pub const TEST_PRIME: u32 = 2_147_483_647;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpwEquation {
    /// `None` when `Y_A = P^5`.
    pub y: Option<MultiPoly>,
    /// Coefficients of `l`, where `V_0 = {l = 0}`.
    pub hyperplane: Vec<Rational>,
    /// Hyperplane of the proportionality cross-check.
    pub cross_check: Option<Vec<Rational>>,
    pub membership: Option<MembershipCheck>,
}

impl EpwEquation {
    pub fn is_identically_zero(&self) -> bool {
        self.y.is_none()
    }
}

/// `y_A` with its three validations: degree 6, proportionality under a second
/// hyperplane, and agreement with the rank oracle on 200 points mod a 31-bit prime.
pub fn epw_equation(a: &LagrangianSubspace) -> Result<EpwEquation, EpwError> {
    let mut failures = Vec::new();
    let ones = vec![Rational::one(); 6];
    for k in 0..6 {
        let v0 = coordinate_hyperplane(k);
        let l = hyperplane_form(&v0)?;
        let y = match sextic_for(a, &v0) {
            Ok(Some(y)) => y,
            Ok(None) => {
                return Ok(EpwEquation {
                    y: None,
                    hyperplane: l,
                    cross_check: None,
                    membership: None,
                })
            }
            Err(e) => {
                failures.push(format!("x_{k}: {e}"));
                continue;
            }
        };
        match sextic_for(a, &hyperplane_of(&ones)) {
            Ok(Some(y2)) if y2.proportional_to(&y) => {}
            other => {
                failures.push(format!("x_{k}: cross-check failed ({:?})", other.map(|_| ())));
                continue;
            }
        }
        let membership = membership_check(a, &y, TEST_PRIME, 200, k as u64)?;
        if membership.mismatches > 0 {
            failures.push(format!("x_{k}: {} membership mismatches", membership.mismatches));
            continue;
        }
        return Ok(EpwEquation {
            y: Some(y),
            hyperplane: l,
            cross_check: Some(ones),
            membership: Some(membership),
        });
    }
    Err(EpwError::ConstructionDegenerate(failures.join("; ")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multiplicity {
    pub intersection_dim: usize,
    /// Order of vanishing of `y_A` at `v`; `None` off the hypersurface.
    pub taylor_order: Option<usize>,
}

/// `dim(A ∩ F_v)` and the multiplicity of `Y_A` at `[v]`.
pub fn epw_multiplicity(a: &LagrangianSubspace, eq: &EpwEquation, v: &[Rational]) -> Result<Multiplicity, EpwError> {
    let fv = f_of(&Rationals, v)?;
    let k = intersection_dim(a.space(), fv.space());
    let y = eq.y.as_ref().ok_or(EpwError::IdenticallyZero)?;
    let pivot = v.iter().position(|x| !x.is_zero()).unwrap();
    let chart: Vec<Vec<Rational>> = (0..6)
        .filter(|&i| i != pivot)
        .map(|i| {
            let mut e = vec![Rational::zero(); 6];
            e[i] = Rational::one();
            e
        })
        .collect();
    let taylor_order = match tangent_cone(y, v, &chart) {
        Ok(t) => Some(t.multiplicity),
        Err(PolyError::NotOnHypersurface) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Multiplicity {
        intersection_dim: k,
        taylor_order,
    })
}

/// Ten points of `P(U)` whose `i₊`-planes span `A₊(U)`.
pub fn a_plus_points() -> Vec<[Rational; 4]> {
    let mut pts = Vec::new();
    for i in 0..4 {
        let mut u = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        u[i] = Rational::one();
        pts.push(u);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let mut u = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
            u[i] = Rational::one();
            u[j] = Rational::one();
            pts.push(u);
        }
    }
    pts
}

/// `A₊(U)` in the coordinates `e_0..e_5 = u_0u_1, u_0u_2, u_0u_3, u_1u_2, u_1u_3, u_2u_3`.
pub fn build_a_plus() -> Result<LagrangianSubspace, EpwError> {
    let rows: Vec<Vec<Rational>> = a_plus_points()
        .iter()
        .map(|u| plucker(&i_plus_plane(u)).expect("i₊ planes are planes").into_coords())
        .collect();
    let span = Subspace::span(&Rationals, 20, rows);
    if span.dim() != 10 {
        return Err(EpwError::SpanDeficient(span.dim()));
    }
    Ok(LagrangianSubspace::new(span)?)
}

/// `x_0x_5 − x_1x_4 + x_2x_3`.
pub fn plucker_quadric() -> MultiPoly {
    MultiPoly::from_i64_terms(6, &[(&[1, 0, 0, 0, 0, 1], 1), (&[0, 1, 0, 0, 1, 0], -1), (&[0, 0, 1, 1, 0, 0], 1)])
}

#[derive(Debug, Clone)]
pub struct SliceConstruction {
    pub a: LagrangianSubspace,
    pub v0: Vec<Rational>,
    pub k: usize,
    /// Primes at which no member of `Θ_A` through `v0` was found.
    pub theta_free_primes: Vec<u32>,
}

/// A Lagrangian `A` and a point `v0` with `dim(A ∩ F_{v0}) = k` and no plane of
/// `Θ_A` through `v0` over `F_2` and `F_3`.
///
/// Built as the graph of `S = R^T D R` over `F_{e_0}`, where the rows of `R` cut out
/// a random `k`-dimensional kernel, then moved by a random unimodular `g`.
pub fn lagrangian_with_slice(k: usize, seed: u64) -> Result<SliceConstruction, EpwError> {
    const ATTEMPTS: usize = 64;
    assert!((1..=10).contains(&k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51_1ce);
    let e0: Vec<Rational> = (0..6).map(|i| Rational::from((i == 0) as i64)).collect();
    for _ in 0..ATTEMPTS {
        let kernel: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..10).map(|_| Rational::from(rng.gen_range(-2i64..=2))).collect())
            .collect();
        let kernel = Subspace::span(&Rationals, 10, kernel);
        if kernel.dim() != k {
            continue;
        }
        let r = kernel.annihilator();
        let m = r.rows();
        let d = crate::lagrangian::random_symmetric(&mut rng, m, 3);
        if d.determinant().is_zero() {
            continue;
        }
        let s = r.transpose().mul(&d).mul(&r);
        let a0 = graph_lagrangian(&s)?;
        let f_e0 = f_of(&Rationals, &e0)?;
        if intersection_dim(a0.space(), f_e0.space()) != k {
            continue;
        }
        let mut clean = true;
        for p in [2u32, 3] {
            let theta = theta_enumerate_modp(&a0, p)?;
            let e0p: Vec<u32> = (0..6).map(|i| (i == 0) as u32).collect();
            if theta.members.iter().any(|w| w.contains(&e0p)) {
                clean = false;
                break;
            }
        }
        if !clean {
            continue;
        }
        let g = random_unimodular(&mut rng, 6);
        let a = transform_lagrangian(&g, &a0);
        let v0 = g.column(0);
        return Ok(SliceConstruction {
            a,
            v0,
            k,
            theta_free_primes: vec![2, 3],
        });
    }
    Err(EpwError::SearchExhausted(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::random_lagrangian;

    #[test]
    fn a_plus_is_lagrangian_and_contains_i_plus_planes() {
        let a = build_a_plus().unwrap();
        let u = [Rational::from(2), Rational::from(-1), Rational::from(5), Rational::from(3)];
        assert!(a.contains_plane(&i_plus_plane(&u)));
        let u0 = [Rational::one(), Rational::zero(), Rational::zero(), Rational::zero()];
        assert_eq!(i_plus_plane(&u0), Subspace::coordinate(&Rationals, 6, &[0, 1, 2]));
    }

    #[test]
    fn a_plus_theta_counts_match_projective_space() {
        // Θ over F_p is the image of P^3(F_p) under i₊
        let a = build_a_plus().unwrap();
        assert_eq!(theta_enumerate_modp(&a, 2).unwrap().members.len(), 15);
        assert_eq!(theta_enumerate_modp(&a, 3).unwrap().members.len(), 40);
    }

    #[test]
    fn f_w_is_identically_zero() {
        let e0: Vec<Rational> = (0..6).map(|i| Rational::from((i == 0) as i64)).collect();
        let a = f_of(&Rationals, &e0).unwrap();
        let det = epw_determinant(&a, &coordinate_hyperplane(0)).unwrap();
        assert!(det.is_zero());
        assert!(epw_equation(&a).unwrap().is_identically_zero());
    }

    #[test]
    fn bad_hyperplane() {
        let a = random_lagrangian(0);
        let v0 = Subspace::coordinate(&Rationals, 6, &[0, 1]);
        assert_eq!(epw_determinant(&a, &v0), Err(EpwError::BadHyperplane(2)));
    }

    #[test]
    fn determinant_vanishes_where_rank_oracle_says() {
        let a = random_lagrangian(4);
        let det = epw_determinant(&a, &coordinate_hyperplane(0)).unwrap();
        assert_eq!(det.degree(), Some(10));
        let x0 = MultiPoly::var(&Rationals, 6, 0);
        assert!(exact_divide(&det, &x0.pow(4)).is_ok());
        for v in [[1i64, 0, 2, -1, 3, 1], [1, 1, 1, 1, 1, 1], [2, -3, 0, 1, 0, 5]] {
            let v: Vec<Rational> = v.iter().map(|&x| Rational::from(x)).collect();
            let fv = f_of(&Rationals, &v).unwrap();
            let meets = intersection_dim(a.space(), fv.space()) >= 1;
            assert_eq!(det.eval(&v).is_zero(), meets);
        }
    }

    #[test]
    fn slice_construction_has_requested_dimension() {
        let c = lagrangian_with_slice(2, 0).unwrap();
        let fv = f_of(&Rationals, &c.v0).unwrap();
        assert_eq!(intersection_dim(c.a.space(), fv.space()), 2);
    }

    #[test]
    fn a_plus_sextic_is_triple_quadric() {
        let eq = epw_equation(&build_a_plus().unwrap()).unwrap();
        assert!(eq.y.unwrap().proportional_to(&plucker_quadric().pow(3)));
    }

    #[test]
    fn random_lagrangian_sextic_validates() {
        let a = random_lagrangian(11);
        let eq = epw_equation(&a).unwrap();
        let y = eq.y.as_ref().unwrap();
        assert_eq!(y.degree(), Some(6));
        assert!(y.is_homogeneous());
        assert_eq!(eq.membership.as_ref().unwrap().mismatches, 0);
        assert!(eq.membership.as_ref().unwrap().on_hypersurface > 0);
    }

    #[test]
    fn multiplicity_matches_slice_dimension() {
        for k in 1..=3 {
            let c = lagrangian_with_slice(k, 1).unwrap();
            let eq = epw_equation(&c.a).unwrap();
            let m = epw_multiplicity(&c.a, &eq, &c.v0).unwrap();
            assert_eq!(m, Multiplicity { intersection_dim: k, taylor_order: Some(k) });
        }
    }
}
