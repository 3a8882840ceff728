//! The plane sextic `C_{W,A} = {[v] ∈ P(W) : dim(F_v ∩ A) ≥ 2}` and its singularities.
//!
//! A frame `w_0, w_1, w_2` of `W` gives coordinates `x` on `P(W)` via `v = Σ x_i w_i`.
//! After moving `W` to `⟨e_0, e_1, e_2⟩`, the quotient `(∧^3 W)^⊥ / ∧^3 W` is spanned by
//! the wedge basis minus `e_{012}` and `e_{345}`. For `k < 3` the nine vectors `x ∧ e_i ∧ e_j`
//! with `i, j ≠ k` and `{i, j} ≠ {0,1,2} ∖ {k}` span `F_x / ∧^3 W` when `x_k ≠ 0`, so the
//! resulting `18 × 18` determinant is `λ x_k^3 c(x)` with `c` the sextic.

mod audit;
mod psi;
mod singular;

pub use audit::{bound_audit, maximize_bound, BoundAudit, ConstraintCheck};
pub use psi::{leading_term, leading_term_in, psi_form, roncisvalle_check, LeadingTerm, PsiFrame, RoncisvalleReport};
pub use singular::{b_locus_member, singularity_report, PointRecord, SingularityReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{pairing_coords, plucker, wedge_vectors};
use crate::lagrangian::{f_of, intersection_dim, transform_lagrangian, LagrangianError, LagrangianSubspace};
use crate::linalg::{Matrix, Subspace};
use crate::poly::{exact_divide, gcd_multivariate, interpolate_homogeneous, roots_modp, MultiPoly, PolyError, UniPoly};
use crate::scalars::{Field, PrimeField, Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("plane is not a member of Θ_A")]
    NotAMember,
    #[error("bad frame: {0}")]
    BadFrame(String),
    #[error("curve construction failed: {0}")]
    ConstructionDegenerate(String),
    #[error("C_(W,A) is the whole plane")]
    NotACurve,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
    #[error("frame has bad reduction mod {0}")]
    BadReduction(u32),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(∧^3 W)^⊥ / ⟨∧^3 W⟩` with an explicit basis.
#[derive(Debug, Clone)]
pub struct ReducedSpace {
    pub omega: Vec<Rational>,
    /// `(∧^3 W)^⊥`, dimension 19.
    pub perp: Subspace<Rationals>,
    /// 18 vectors completing `ω` to a basis of `perp`.
    pub basis: Matrix<Rationals>,
    /// Induced symplectic form on the quotient.
    pub form: Matrix<Rationals>,
}

impl ReducedSpace {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of the class of `α`, or `None` when `α ∉ (∧^3 W)^⊥`.
    pub fn project(&self, alpha: &[Rational]) -> Option<Vec<Rational>> {
        let mut m = Matrix::from_rows(&Rationals, 20, vec![self.omega.clone()]);
        m = m.vstack(&self.basis);
        m.solve_left(alpha).map(|x| x[1..].to_vec())
    }

    pub fn project_subspace(&self, s: &Subspace<Rationals>) -> Option<Subspace<Rationals>> {
        let rows: Option<Vec<Vec<Rational>>> = s.basis_rows().iter().map(|r| self.project(r)).collect();
        rows.map(|r| Subspace::span(&Rationals, self.dim(), r))
    }
}

pub fn reduced_space(w: &Subspace<Rationals>) -> Result<ReducedSpace, CurveError> {
    if w.ambient() != 6 || w.dim() != 3 {
        return Err(CurveError::BadFrame(format!("expected a 3-space of C^6, got dim {}", w.dim())));
    }
    let omega = plucker(w).expect("3-space").into_coords();
    let form_row: Vec<Rational> = (0..20)
        .map(|j| {
            let mut e = vec![Rational::zero(); 20];
            e[j] = Rational::one();
            pairing_coords(&Rationals, &omega, &e)
        })
        .collect();
    let perp = Subspace::from_matrix(&Matrix::from_rows(&Rationals, 20, vec![form_row]).kernel());
    let mut span = Subspace::span(&Rationals, 20, vec![omega.clone()]);
    let mut rows = Vec::new();
    for r in perp.basis_rows() {
        if !span.contains(&r) {
            span = span.with_vector(r.clone());
            rows.push(r);
        }
    }
    let basis = Matrix::from_rows(&Rationals, 20, rows);
    let form = Matrix::from_fn(&Rationals, basis.rows(), basis.rows(), |i, j| {
        pairing_coords(&Rationals, basis.row(i), basis.row(j))
    });
    Ok(ReducedSpace {
        omega,
        perp,
        basis,
        form,
    })
}

/// A basis of the lattice `W ∩ Z^6`, so the frame stays a frame modulo every prime.
pub fn default_frame(w: &Subspace<Rationals>) -> Vec<Vec<Rational>> {
    w.saturated_integer_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect()
}

/// Standard basis vectors completing the frame to a basis of `F^6`.
pub(crate) fn frame_completion<F: Field>(f: &F, frame: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let mut span = Subspace::span(f, 6, frame.to_vec());
    let mut out = Vec::new();
    for i in 0..6 {
        let e: Vec<F::Elem> = (0..6).map(|j| if i == j { f.one() } else { f.zero() }).collect();
        if !span.contains(&e) {
            span = span.with_vector(e.clone());
            out.push(e);
        }
    }
    out
}

pub(crate) fn check_frame<F: Field>(a: &LagrangianSubspace<F>, frame: &[Vec<F::Elem>]) -> Result<Subspace<F>, CurveError> {
    if frame.len() != 3 || frame.iter().any(|v| v.len() != 6) {
        return Err(CurveError::BadFrame("expected three vectors of length 6".into()));
    }
    let w = Subspace::span(a.field(), 6, frame.to_vec());
    if w.dim() != 3 {
        return Err(CurveError::BadFrame("frame vectors are dependent".into()));
    }
    if !a.contains_plane(&w) {
        return Err(CurveError::NotAMember);
    }
    Ok(w)
}

/// `Σ x_i w_i`.
pub fn frame_point<F: Field>(f: &F, frame: &[Vec<F::Elem>], x: &[F::Elem]) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); 6];
    for (xi, wi) in x.iter().zip(frame) {
        for (a, b) in v.iter_mut().zip(wi) {
            *a = f.add(a, &f.mul(xi, b));
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveEquation {
    /// The sextic in frame coordinates; `None` when `C_{W,A} = P(W)`.
    pub c: Option<MultiPoly>,
    pub frame: Vec<Vec<Rational>>,
    /// Agreement check against the rank oracle performed during construction.
    pub check: Option<CurveCheck>,
}

impl CurveEquation {
    pub fn is_plane(&self) -> bool {
        self.c.is_none()
    }

    pub fn curve(&self) -> Result<&MultiPoly, CurveError> {
        self.c.as_ref().ok_or(CurveError::NotACurve)
    }
}

/// The determinant `D_k` for `k < 3`, degree 9 in the frame coordinates.
fn minor_determinant(a0_rows: &[Vec<Rational>], k: usize) -> Result<MultiPoly, CurveError> {
    let pair: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let mut betas = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            if i == k || j == k || (i == pair[0] && j == pair[1]) {
                continue;
            }
            betas.push((i, j));
        }
    }
    debug_assert_eq!(betas.len(), 9);
    // lin[b][m] = class of e_m ∧ e_i ∧ e_j
    let unit = |i: usize| -> Vec<Rational> { (0..6).map(|t| Rational::from((t == i) as i64)).collect() };
    let lin: Vec<Vec<Vec<Rational>>> = betas
        .iter()
        .map(|&(i, j)| {
            (0..3)
                .map(|m| project_standard(&wedge_vectors(&Rationals, 6, &[unit(m), unit(i), unit(j)]).into_coords()))
                .collect()
        })
        .collect();
    let poly = interpolate_homogeneous(3, 9, |x| {
        let mut rows: Vec<Vec<Rational>> = a0_rows.to_vec();
        for l in &lin {
            let mut row = vec![Rational::zero(); 18];
            for (xm, lm) in x.iter().zip(l) {
                for (r, c) in row.iter_mut().zip(lm) {
                    *r = &*r + &(xm * c);
                }
            }
            rows.push(row);
        }
        Matrix::from_rows(&Rationals, 18, rows).determinant()
    })?;
    Ok(poly)
}

/// Drop the coordinates of `e_{012}` and `e_{345}`.
fn project_standard(alpha: &[Rational]) -> Vec<Rational> {
    alpha[1..19].to_vec()
}

/// `c = gcd(D_i, D_j)`, checking `D_k / c ∝ x_k^3` and `deg c = 6`.
fn sextic_from_minors(d: &[MultiPoly], i: usize, j: usize) -> Result<MultiPoly, String> {
    if d[i].is_zero() || d[j].is_zero() {
        return Err("a minor vanishes".into());
    }
    let c = gcd_multivariate(&d[i], &d[j]).map_err(|e| e.to_string())?.primitive();
    for k in [i, j] {
        let q = exact_divide(&d[k], &c).map_err(|_| "gcd does not divide".to_string())?;
        if !q.proportional_to(&MultiPoly::var(&Rationals, 3, k).pow(3)) {
            return Err(format!("extraneous factor beyond x_{k}^3"));
        }
    }
    if c.degree() != Some(6) {
        return Err(format!("degree {:?}", c.degree()));
    }
    Ok(c)
}

/// `C_{W,A}` using the primitive integer RREF frame of `W`.
pub fn curve_equation(a: &LagrangianSubspace, w: &Subspace<Rationals>) -> Result<CurveEquation, CurveError> {
    if !a.contains_plane(w) {
        return Err(CurveError::NotAMember);
    }
    curve_equation_with_frame(a, &default_frame(w))
}

pub fn curve_equation_with_frame(a: &LagrangianSubspace, frame: &[Vec<Rational>]) -> Result<CurveEquation, CurveError> {
    check_frame(a, frame)?;
    let mut cols: Vec<Vec<Rational>> = frame.to_vec();
    cols.extend(frame_completion(&Rationals, frame));
    // g e_i = i-th column
    let g = Matrix::from_fn(&Rationals, 6, 6, |r, c| cols[c][r].clone());
    let g_inv = g.inverse().expect("frame completion is a basis");
    let a0 = transform_lagrangian(&g_inv, a);
    if a0.space().pivots().first() != Some(&0) {
        return Err(CurveError::ConstructionDegenerate("∧^3 W missing after change of frame".into()));
    }
    let a0_rows: Vec<Vec<Rational>> = Subspace::span(&Rationals, 20, a0.space().basis_rows()[1..].to_vec())
        .integer_rows()
        .into_iter()
        .map(|r| project_standard(&r.into_iter().map(Rational::from_integer).collect::<Vec<_>>()))
        .collect();
    let d: Vec<MultiPoly> = (0..3).map(|k| minor_determinant(&a0_rows, k)).collect::<Result<_, _>>()?;
    if d.iter().all(|m| m.is_zero()) {
        return Ok(CurveEquation {
            c: None,
            frame: frame.to_vec(),
            check: None,
        });
    }
    let mut last = String::from("all minors but one vanish");
    let mut found = None;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        match sextic_from_minors(&d, i, j) {
            Ok(c) => {
                found = Some(c);
                break;
            }
            Err(why) => last = why,
        }
    }
    let c = found.ok_or(CurveError::ConstructionDegenerate(last))?;
    let mut eq = CurveEquation {
        c: Some(c),
        frame: frame.to_vec(),
        check: None,
    };
    let check = curve_oracle_check(a, &eq, crate::epw::TEST_PRIME, 100, 0)?;
    if check.mismatches > 0 {
        return Err(CurveError::ConstructionDegenerate(format!("{} oracle mismatches", check.mismatches)));
    }
    eq.check = Some(check);
    Ok(eq)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveCheck {
    pub prime: u32,
    pub points: usize,
    pub on_curve: usize,
    /// Points where `dim(F_v ∩ A) ≥ 2` over `F_p`.
    pub oracle_on_curve: usize,
    pub mismatches: usize,
    pub exhaustive: bool,
    /// Every point of `P^2(F_p)` satisfies the rank condition but `c` does not vanish on all
    /// of them: the degeneracy locus of `A mod p` is the whole plane.
    pub degenerate_reduction: bool,
}

/// Compare `c(x) = 0` with `dim(F_v ∩ A) ≥ 2` over `F_p`, `v = Σ x_i w_i`: every point of
/// `P^2(F_p)` when `p < 50`, otherwise `count` points of which about half lie on the curve.
pub fn curve_oracle_check(
    a: &LagrangianSubspace,
    eq: &CurveEquation,
    p: u32,
    count: usize,
    seed: u64,
) -> Result<CurveCheck, CurveError> {
    let fp = PrimeField::new(p).map_err(|_| CurveError::NotPrime(p))?;
    let c = eq.curve()?;
    let cp = c.reduce_mod(&fp).map_err(PolyError::from)?;
    let ap = a.reduce_mod(&fp);
    let frame: Vec<Vec<u32>> = eq
        .frame
        .iter()
        .map(|r| r.iter().map(|x| fp.reduce(x)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(PolyError::from)?;
    if Matrix::from_rows(&fp, 6, frame.clone()).rank() != 3 {
        return Err(CurveError::BadReduction(p));
    }
    let exhaustive = p < 50;
    let points: Vec<Vec<u32>> = if exhaustive {
        projective_points(p, 3)
    } else {
        sample_points_modp(&fp, &cp, count, seed)
    };
    let mut on = 0;
    let mut oracle_on = 0;
    let mut mismatches = 0;
    for x in &points {
        let v = frame_point(&fp, &frame, x);
        let zero = cp.eval(x) == 0;
        let fv = f_of(&fp, &v)?;
        let deg = intersection_dim(ap.space(), fv.space()) >= 2;
        on += zero as usize;
        oracle_on += deg as usize;
        mismatches += (zero != deg) as usize;
    }
    Ok(CurveCheck {
        prime: p,
        points: points.len(),
        on_curve: on,
        oracle_on_curve: oracle_on,
        mismatches,
        exhaustive,
        degenerate_reduction: exhaustive && oracle_on == points.len() && on < oracle_on,
    })
}

/// `count` points of `P^2(F_p)`, about half of them zeros of `cp` found on random lines.
pub(crate) fn sample_points_modp(fp: &PrimeField, cp: &MultiPoly<PrimeField>, count: usize, seed: u64) -> Vec<Vec<u32>> {
    let p = fp.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    let rand_pt = |rng: &mut ChaCha8Rng| -> Vec<u32> {
        loop {
            let v: Vec<u32> = (0..3).map(|_| rng.gen_range(0..p)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    };
    let mut tries = 0;
    while pts.len() < count / 2 && tries < 20 * count {
        tries += 1;
        let (b, d) = (rand_pt(&mut rng), rand_pt(&mut rng));
        let at = |t: u32| -> Vec<u32> { b.iter().zip(&d).map(|(x, y)| fp.add(x, &fp.mul(&t, y))).collect() };
        let vals: Vec<u32> = (0..7).map(|t| cp.eval(&at(t))).collect();
        let line = UniPoly::interpolate_at_naturals(fp, &vals);
        if line.is_zero() {
            continue;
        }
        if let Some(&t) = roots_modp(fp, &line, rng.gen()).first() {
            let v = at(t);
            if v.iter().any(|&x| x != 0) {
                pts.push(v);
            }
        }
    }
    while pts.len() < count {
        pts.push(rand_pt(&mut rng));
    }
    pts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingTermCheck {
    pub prime: u32,
    pub points: usize,
    /// Number of tested points with `k̄ = 0, 1, 2, ...`.
    pub kbar_counts: Vec<usize>,
    /// Points where the Taylor expansion disagrees with the leading-term formula.
    pub failures: usize,
}

/// At sampled points of `P(W)` over `F_p`, compare the Taylor expansion of `c` with
/// `k̄` and `det(ψ|_K̄)`: the parts below `k̄` must vanish and part `k̄` must be a
/// multiple of the determinant.
pub fn leading_term_check(
    a: &LagrangianSubspace,
    eq: &CurveEquation,
    p: u32,
    count: usize,
    seed: u64,
) -> Result<LeadingTermCheck, CurveError> {
    let fp = PrimeField::new(p).map_err(|_| CurveError::NotPrime(p))?;
    let cp = eq.curve()?.reduce_mod(&fp).map_err(PolyError::from)?;
    let ap = a.reduce_mod(&fp);
    let frame: Vec<Vec<u32>> = eq
        .frame
        .iter()
        .map(|r| r.iter().map(|x| fp.reduce(x)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(PolyError::from)?;
    let mut kbar_counts = Vec::new();
    let mut failures = 0;
    let points = sample_points_modp(&fp, &cp, count, seed);
    for x in &points {
        let lt = psi::leading_term_in(&ap, &frame, x)?;
        let pivot = x.iter().position(|&v| v != 0).unwrap();
        let chart: Vec<Vec<u32>> = (0..3).filter(|&i| i != pivot).map(|i| (0..3).map(|j| (i == j) as u32).collect()).collect();
        let parts = crate::poly::taylor_parts(&cp, x, &chart)?;
        let ok = lt.kbar < parts.len() && parts[..lt.kbar].iter().all(|g| g.is_zero()) && parts[lt.kbar].proportional_to(&lt.det);
        failures += (!ok) as usize;
        if kbar_counts.len() <= lt.kbar {
            kbar_counts.resize(lt.kbar + 1, 0);
        }
        kbar_counts[lt.kbar] += 1;
    }
    Ok(LeadingTermCheck {
        prime: p,
        points: points.len(),
        kbar_counts,
        failures,
    })
}

/// Normalized representatives of `P^{n-1}(F_p)`.
pub fn projective_points(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = (p as u64).pow(free as u32);
        for mut idx in 0..total {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            out.push(v);
        }
    }
    out
}

/// Frame coordinates of a vector of `W`.
pub fn frame_coordinates(frame: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    Matrix::from_rows(&Rationals, 6, frame.to_vec()).solve_left(v)
}
