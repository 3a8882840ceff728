//! Lagrangian subspaces of `(∧^3 C^6, vol(α ∧ β))`, the spaces `F_v`, and the sets
//! `Θ_A` of planes whose Plücker point lies in `A`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{basis_masks, complement_table, mask_indices, pairing_coords, plucker, symplectic_gram, wedge_by_vector_matrix, wedge_vectors};
use crate::linalg::{Matrix, Subspace};
use crate::planes::{
    family_report, incident, incident_subspaces_modp, morin_classify, scan_grassmannian,
    smooth_quadric_containing, FamilyReport, MorinFlags, PlaneFamily, PlanesError,
};
use crate::scalars::{Field, PrimeField, Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LagrangianError {
    #[error("members {0} and {1} are not incident")]
    NotIncident(usize, usize),
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("expected a 10-dimensional isotropic subspace of ∧^3 C^6, got dimension {0}")]
    NotLagrangian(usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("plane is not a member of Θ_A")]
    NotAMember,
    #[error("expected ambient dimension {expected}, got {got}")]
    WrongAmbient { expected: usize, got: usize },
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error(transparent)]
    Planes(#[from] PlanesError),
}

/// A 10-dimensional isotropic subspace of `∧^3 F^6` (coordinates in the wedge basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianSubspace<F: Field = Rationals> {
    space: Subspace<F>,
}

impl<F: Field> LagrangianSubspace<F> {
    pub fn new(space: Subspace<F>) -> Result<Self, LagrangianError> {
        if space.ambient() != 20 {
            return Err(LagrangianError::WrongAmbient {
                expected: 20,
                got: space.ambient(),
            });
        }
        if space.dim() != 10 {
            return Err(LagrangianError::NotLagrangian(space.dim()));
        }
        if !is_isotropic(&space) {
            return Err(LagrangianError::NotIsotropic);
        }
        Ok(LagrangianSubspace { space })
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }

    pub fn field(&self) -> &F {
        self.space.field()
    }

    pub fn contains(&self, alpha: &[F::Elem]) -> bool {
        self.space.contains(alpha)
    }

    pub fn contains_plane(&self, w: &Subspace<F>) -> bool {
        plucker(w).map(|p| self.contains(p.coords())).unwrap_or(false)
    }
}

impl LagrangianSubspace<Rationals> {
    /// Reduction of the lattice `A ∩ Z^20`; isotropy is preserved.
    pub fn reduce_mod(&self, fp: &PrimeField) -> LagrangianSubspace<PrimeField> {
        LagrangianSubspace {
            space: self.space.reduce_mod(fp),
        }
    }
}

pub fn is_isotropic<F: Field>(s: &Subspace<F>) -> bool {
    let f = s.field();
    let rows = s.basis_rows();
    rows.iter()
        .enumerate()
        .all(|(i, a)| rows[i + 1..].iter().all(|b| f.is_zero(&pairing_coords(f, a, b))))
}

pub fn intersection_dim<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> usize {
    a.dim() + b.dim() - a.sum(b).dim()
}

/// `F_v = {α : v ∧ α = 0}`.
pub fn f_of<F: Field>(f: &F, v: &[F::Elem]) -> Result<LagrangianSubspace<F>, LagrangianError> {
    if v.len() != 6 {
        return Err(LagrangianError::WrongAmbient { expected: 6, got: v.len() });
    }
    if v.iter().all(|x| f.is_zero(x)) {
        return Err(LagrangianError::ZeroVector);
    }
    let m = wedge_by_vector_matrix(f, v, 3);
    Ok(LagrangianSubspace {
        space: Subspace::from_matrix(&m.kernel()),
    })
}

/// Span of the Plücker points of the members; errors if two members are not incident.
pub fn isotropic_span(t: &PlaneFamily<Rationals>) -> Result<Subspace<Rationals>, LagrangianError> {
    if t.ambient() != 6 {
        return Err(LagrangianError::WrongAmbient {
            expected: 6,
            got: t.ambient(),
        });
    }
    let m = t.members();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if !incident(&m[i], &m[j])? {
                return Err(LagrangianError::NotIncident(i, j));
            }
        }
    }
    let rows = m.iter().map(|w| plucker(w).unwrap().into_coords()).collect();
    let b = Subspace::span(&Rationals, 20, rows);
    if !is_isotropic(&b) {
        return Err(LagrangianError::NotIsotropic);
    }
    Ok(b)
}

/// Extend an isotropic subspace to a Lagrangian one by repeatedly adjoining a vector of
/// `B^⊥ ∖ B`: seeded random combinations of a basis of `B^⊥` first, then the basis itself.
pub fn lagrangian_complete(b: &Subspace<Rationals>, seed: u64) -> Result<LagrangianSubspace<Rationals>, LagrangianError> {
    if b.ambient() != 20 {
        return Err(LagrangianError::WrongAmbient {
            expected: 20,
            got: b.ambient(),
        });
    }
    if b.dim() > 10 || !is_isotropic(b) {
        return Err(LagrangianError::NotIsotropic);
    }
    let g = symplectic_gram(&Rationals);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = b.clone();
    while cur.dim() < 10 {
        let perp = cur.basis().mul(&g).kernel();
        let mut next = None;
        for _ in 0..16 {
            let mut v = vec![Rational::zero(); 20];
            for r in 0..perp.rows() {
                let c = Rational::from(rng.gen_range(-3i64..=3));
                for (x, y) in v.iter_mut().zip(perp.row(r)) {
                    *x = &*x + &(&c * y);
                }
            }
            if !cur.contains(&v) {
                next = Some(v);
                break;
            }
        }
        let v = match next {
            Some(v) => v,
            None => (0..perp.rows())
                .map(|r| perp.row(r).to_vec())
                .find(|r| !cur.contains(r))
                .expect("B^⊥ strictly contains B below dimension 10"),
        };
        cur = cur.with_vector(v);
    }
    LagrangianSubspace::new(cur)
}

/// The graph `{p + S p}` of a symmetric `10 × 10` matrix over `F_{e_0}`: row `i` is
/// `e_{I_i} + Σ_j S_ij s_j e_{I_j^c}` where `I_0..I_9` are the triples containing 0
/// and `s_j = (e_{I_j}, e_{I_j^c})`. Unimodular, so it has good reduction everywhere.
pub fn graph_lagrangian(s: &Matrix<Rationals>) -> Result<LagrangianSubspace<Rationals>, LagrangianError> {
    assert_eq!((s.rows(), s.cols()), (10, 10));
    let table = complement_table();
    let mut m = Matrix::zeros(&Rationals, 10, 20);
    for i in 0..10 {
        m[(i, i)] = Rational::one();
        for j in 0..10 {
            let (c, sign) = table[j];
            m[(i, c)] = &s[(i, j)] * &Rational::from(sign as i64);
        }
    }
    LagrangianSubspace::new(Subspace::from_matrix(&m))
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, bound: i64) -> Matrix<Rationals> {
    let mut s = Matrix::zeros(&Rationals, n, n);
    for i in 0..n {
        for j in i..n {
            let v = Rational::from(rng.gen_range(-bound..=bound));
            s[(i, j)] = v.clone();
            s[(j, i)] = v;
        }
    }
    s
}

/// A seeded Lagrangian with small integer coordinates.
pub fn random_lagrangian(seed: u64) -> LagrangianSubspace<Rationals> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    graph_lagrangian(&random_symmetric(&mut rng, 10, 3)).expect("graphs of symmetric maps are Lagrangian")
}

/// `∧^3 g` acting on wedge-basis coordinates: entry `(I, J) = det g[I, J]`.
pub fn wedge3_matrix<F: Field>(g: &Matrix<F>) -> Matrix<F> {
    let f = g.field();
    let masks = basis_masks(6, 3);
    Matrix::from_fn(f, 20, 20, |i, j| {
        let ri = mask_indices(masks[i]);
        let cj = mask_indices(masks[j]);
        Matrix::from_fn(f, 3, 3, |a, b| g[(ri[a], cj[b])].clone()).determinant()
    })
}

/// `∧^3 g (A)`; again Lagrangian for invertible `g` since the pairing scales by `det g`.
pub fn transform_lagrangian<F: Field>(g: &Matrix<F>, a: &LagrangianSubspace<F>) -> LagrangianSubspace<F> {
    let w = wedge3_matrix(g);
    LagrangianSubspace {
        space: Subspace::from_matrix(&a.space.basis().mul(&w.transpose())),
    }
}

/// `Θ_A` as found by a scan of `Gr(3, F_p^6)`.
#[derive(Debug, Clone)]
pub struct ThetaSet<F: Field> {
    pub members: Vec<Subspace<F>>,
    pub visited: u64,
}

/// Every plane `W ⊂ F_p^6` with `∧^3 W ∈ A`.
pub fn theta_enumerate(a: &LagrangianSubspace<PrimeField>) -> ThetaSet<PrimeField> {
    let fp = *a.field();
    let p = fp.modulus() as u64;
    let ann = a.space.annihilator();
    let ann: Vec<u64> = (0..ann.rows()).flat_map(|r| ann.row(r).iter().map(|&x| x as u64).collect::<Vec<_>>()).collect();
    let masks: Vec<[usize; 3]> = basis_masks(6, 3)
        .iter()
        .map(|&m| {
            let v = mask_indices(m);
            [v[0], v[1], v[2]]
        })
        .collect();
    let scan = scan_grassmannian(&fp, 6, 3, |w| {
        let mut pl = [0u64; 20];
        for (slot, c) in pl.iter_mut().zip(&masks) {
            let e = |r: usize, k: usize| w[r * 6 + c[k]] as u64;
            let t1 = e(0, 0) * ((e(1, 1) * e(2, 2) + p * p - e(1, 2) * e(2, 1)) % p);
            let t2 = e(0, 1) * ((e(1, 0) * e(2, 2) + p * p - e(1, 2) * e(2, 0)) % p);
            let t3 = e(0, 2) * ((e(1, 0) * e(2, 1) + p * p - e(1, 1) * e(2, 0)) % p);
            *slot = (t1 % p + p - t2 % p + t3 % p) % p;
        }
        ann.chunks(20).all(|row| row.iter().zip(&pl).fold(0u64, |acc, (x, y)| (acc + x * y) % p) == 0)
    });
    ThetaSet {
        members: scan.matches,
        visited: scan.visited,
    }
}

pub fn theta_enumerate_modp(a: &LagrangianSubspace<Rationals>, p: u32) -> Result<ThetaSet<PrimeField>, LagrangianError> {
    let fp = PrimeField::new(p).map_err(|_| LagrangianError::NotPrime(p))?;
    Ok(theta_enumerate(&a.reduce_mod(&fp)))
}

/// Three-term Plücker relations of `Gr(3, 6)` as lists of `(sign, I, J)` meaning
/// `Σ sign · p_I p_J = 0`, indices into the wedge basis.
pub fn plucker_relations() -> Vec<Vec<(i8, usize, usize)>> {
    let n = 6;
    let mut out = Vec::new();
    for &a in basis_masks(n, 2) {
        for &b in basis_masks(n, 4) {
            let ai = mask_indices(a);
            let bj = mask_indices(b);
            let mut terms = Vec::new();
            for (l, &j) in bj.iter().enumerate() {
                if a & (1 << j) != 0 {
                    continue;
                }
                // p_{a ∪ j} with j appended last, times p_{b ∖ j}
                let mut first = ai.clone();
                first.push(j);
                let (s1, m1) = sorted_sign(&first);
                let rest: Vec<usize> = bj.iter().copied().filter(|&x| x != j).collect();
                let m2 = rest.iter().fold(0u16, |m, &i| m | (1 << i));
                let sign = if l % 2 == 0 { s1 } else { -s1 };
                terms.push((sign, crate::exterior::basis_index(n, m1), crate::exterior::basis_index(n, m2)));
            }
            if !terms.is_empty() {
                out.push(terms);
            }
        }
    }
    out
}

fn sorted_sign(idx: &[usize]) -> (i8, u16) {
    let mut inv = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inv += 1;
            }
        }
    }
    let m = idx.iter().fold(0u16, |m, &i| m | (1 << i));
    (if inv % 2 == 0 { 1 } else { -1 }, m)
}

/// Dimension of the Zariski tangent space of `P(A) ∩ Gr(3, 6)` at `[∧^3 W]`, from the
/// Jacobian of the Plücker relations restricted to `A`.
pub fn theta_tangent_dim<F: Field>(a: &LagrangianSubspace<F>, w: &Subspace<F>) -> Result<usize, LagrangianError> {
    let f = a.field().clone();
    let omega = plucker(w).map_err(|_| LagrangianError::NotAMember)?;
    if !a.contains(omega.coords()) {
        return Err(LagrangianError::NotAMember);
    }
    let om = omega.coords();
    let rels = plucker_relations();
    let mut jac = Matrix::zeros(&f, rels.len(), 20);
    for (r, terms) in rels.iter().enumerate() {
        for &(s, i, j) in terms {
            let s = f.from_i64(s as i64);
            jac[(r, j)] = f.add(&jac[(r, j)], &f.mul(&s, &om[i]));
            jac[(r, i)] = f.add(&jac[(r, i)], &f.mul(&s, &om[j]));
        }
    }
    let restricted = jac.mul(&a.space.basis().transpose());
    Ok(10 - restricted.rank() - 1)
}

/// `S_W = (∧^2 W) ∧ F^6`.
pub fn s_w_space<F: Field>(w: &Subspace<F>) -> Subspace<F> {
    let f = w.field();
    let b = w.basis_rows();
    let mut rows = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for k in 0..6 {
            let mut e = vec![f.zero(); 6];
            e[k] = f.one();
            rows.push(wedge_vectors(f, 6, &[b[i].clone(), b[j].clone(), e]).into_coords());
        }
    }
    Subspace::span(f, 20, rows)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    CompleteCertifiedAtPrimes { primes: Vec<u32> },
    Incomplete { witness: Vec<Vec<Rational>>, strategy: String },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeEvidence {
    pub prime: u32,
    /// Size of `Θ_A` mod p (Lagrangian route) or number of incident planes (direct route).
    pub found: usize,
    pub family_size: usize,
    pub matches_family: bool,
    pub visited: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub ambient: usize,
    pub family_size: usize,
    pub report: FamilyReport,
    pub route: String,
    pub isotropic_span_dim: Option<usize>,
    pub spanning_lagrangian: bool,
    pub tangent_dims: Vec<usize>,
    pub morin: Option<MorinFlags>,
    pub evidence: Vec<PrimeEvidence>,
    pub skipped_primes: Vec<u32>,
    pub verdict: Verdict,
}

fn reduced_set(members: &[Subspace<PrimeField>]) -> BTreeSet<Vec<Vec<u32>>> {
    members.iter().map(|m| m.basis_rows()).collect()
}

fn lift_plane(w: &Subspace<PrimeField>) -> Subspace<Rationals> {
    let fp = *w.field();
    let rows = w
        .basis_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rational::from(fp.lift(x))).collect())
        .collect();
    Subspace::span(&Rationals, w.ambient(), rows)
}

fn verified_witness(t: &PlaneFamily<Rationals>, w: &Subspace<Rationals>) -> bool {
    w.dim() == 3
        && !t.members().contains(w)
        && t.members().iter().all(|m| incident(m, w).unwrap_or(false))
}

fn witness_rows(w: &Subspace<Rationals>) -> Vec<Vec<Rational>> {
    w.basis_rows()
}

fn small_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(Rational::from).collect();
        }
    }
}

fn combo(rng: &mut impl Rng, s: &Subspace<Rationals>) -> Vec<Rational> {
    let c = small_vector(rng, s.dim());
    let mut v = vec![Rational::zero(); s.ambient()];
    for (ci, row) in c.iter().zip(s.basis_rows()) {
        for (x, y) in v.iter_mut().zip(&row) {
            *x = &*x + &(ci * y);
        }
    }
    v
}

/// Search for an extra incident plane using the structure of the infinite families.
fn find_witness(t: &PlaneFamily<Rationals>, seed: u64) -> Option<(Subspace<Rationals>, &'static str)> {
    let f = Rationals;
    let n = t.ambient();
    let members = t.members();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let tries = 24;
    let accept = |w: Subspace<Rationals>| verified_witness(t, &w).then_some(w);

    // a common point
    let common = members.iter().skip(1).fold(members[0].clone(), |acc, m| acc.intersect(m));
    if common.dim() >= 1 {
        let p = common.basis_rows().remove(0);
        for _ in 0..tries {
            let w = Subspace::span(&f, n, vec![p.clone(), small_vector(&mut rng, n), small_vector(&mut rng, n)]);
            if let Some(w) = accept(w) {
                return Some((w, "common-point"));
            }
        }
    }
    // a small span: any plane inside it meets every member
    let span = t.span();
    if span.dim() <= 5 {
        for _ in 0..tries {
            let w = Subspace::span(&f, n, (0..3).map(|_| combo(&mut rng, &span)).collect());
            if let Some(w) = accept(w) {
                return Some((w, "small-span"));
            }
        }
    }
    // two members sharing a line L: planes through L and a point of another member
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            let l = a.intersect(b);
            if l.dim() != 2 {
                continue;
            }
            for m in members {
                for _ in 0..4 {
                    let w = l.with_vector(combo(&mut rng, m));
                    if let Some(w) = accept(w) {
                        return Some((w, "line-pencil"));
                    }
                }
            }
        }
    }
    if n == 6 {
        // planes meeting a fixed plane M in a line; M spanned by pairwise intersection points
        let mut pts = Subspace::zero(&f, 6);
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let c = a.intersect(b);
                if c.dim() == 1 {
                    pts = pts.sum(&c);
                }
            }
        }
        if pts.dim() == 3 && members.iter().all(|w| w.intersect(&pts).dim() >= 2) {
            for _ in 0..tries {
                let w = Subspace::span(&f, 6, vec![combo(&mut rng, &pts), combo(&mut rng, &pts), small_vector(&mut rng, 6)]);
                if let Some(w) = accept(w) {
                    return Some((w, "plane-of-lines"));
                }
            }
        }
        // one ruling of a smooth quadric: move a member by a product of two reflections
        if let Some(q) = smooth_quadric_containing(t, seed) {
            let bil = |x: &[Rational], y: &[Rational]| -> Rational {
                let qy = q.mul_vec(y);
                x.iter().zip(&qy).fold(Rational::zero(), |acc, (a, b)| &acc + &(a * b))
            };
            let reflect = |r: &[Rational], x: &[Rational]| -> Vec<Rational> {
                let c = &(&Rational::from(2) * &bil(x, r)) * &bil(r, r).recip().unwrap();
                x.iter().zip(r).map(|(a, b)| a - &(&c * b)).collect()
            };
            for _ in 0..tries {
                let r1 = small_vector(&mut rng, 6);
                let r2 = small_vector(&mut rng, 6);
                if bil(&r1, &r1).is_zero() || bil(&r2, &r2).is_zero() {
                    continue;
                }
                let src = &members[rng.gen_range(0..members.len())];
                let rows = src.basis_rows().iter().map(|x| reflect(&r1, &reflect(&r2, x))).collect();
                if let Some(w) = accept(Subspace::span(&f, 6, rows)) {
                    return Some((w, "quadric-ruling"));
                }
            }
        }
    }
    None
}

/// Evidence that a finite family of pairwise incident planes is complete.
pub fn completeness_certificate(t: &PlaneFamily<Rationals>, primes: &[u32], seed: u64) -> Result<Certificate, LagrangianError> {
    if t.is_empty() {
        return Err(PlanesError::TooSmall.into());
    }
    let report = family_report(t);
    if let Some((i, j)) = (0..t.len())
        .flat_map(|i| (i + 1..t.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !report.incidence[i][j])
    {
        return Err(LagrangianError::NotIncident(i, j));
    }
    let fields: Vec<PrimeField> = primes
        .iter()
        .map(|&p| PrimeField::new(p).map_err(|_| LagrangianError::NotPrime(p)))
        .collect::<Result<_, _>>()?;
    let mut cert = Certificate {
        ambient: t.ambient(),
        family_size: t.len(),
        report: report.clone(),
        route: String::new(),
        isotropic_span_dim: None,
        spanning_lagrangian: false,
        tangent_dims: Vec::new(),
        morin: None,
        evidence: Vec::new(),
        skipped_primes: Vec::new(),
        verdict: Verdict::Inconclusive { reason: String::new() },
    };
    if t.ambient() == 6 {
        let b = isotropic_span(t)?;
        cert.isotropic_span_dim = Some(b.dim());
        if t.len() >= 2 {
            cert.morin = Some(morin_classify(t, None, seed)?);
        }
        if b.dim() == 10 && !report.not_finitely_completable {
            cert.route = "lagrangian".into();
            cert.spanning_lagrangian = true;
            let a = LagrangianSubspace::new(b)?;
            cert.tangent_dims = t.members().iter().map(|w| theta_tangent_dim(&a, w)).collect::<Result<_, _>>()?;
            let mut extra = None;
            for fp in &fields {
                let Ok(tp) = t.reduce_mod(fp) else {
                    cert.skipped_primes.push(fp.modulus());
                    continue;
                };
                let theta = theta_enumerate(&a.reduce_mod(fp));
                let found = reduced_set(&theta.members);
                let matches = found == reduced_set(tp.members());
                if !matches && extra.is_none() {
                    let want = reduced_set(tp.members());
                    extra = theta.members.iter().find(|m| !want.contains(&m.basis_rows())).cloned();
                }
                cert.evidence.push(PrimeEvidence {
                    prime: fp.modulus(),
                    found: found.len(),
                    family_size: t.len(),
                    matches_family: matches,
                    visited: theta.visited,
                });
            }
            cert.verdict = conclude(t, &cert, extra);
            return Ok(cert);
        }
    }
    cert.route = "incident-planes".into();
    if let Some((w, strategy)) = find_witness(t, seed) {
        cert.verdict = Verdict::Incomplete {
            witness: witness_rows(&w),
            strategy: strategy.into(),
        };
        return Ok(cert);
    }
    let mut extra = None;
    for fp in &fields {
        let Ok(tp) = t.reduce_mod(fp) else {
            cert.skipped_primes.push(fp.modulus());
            continue;
        };
        let scan = incident_subspaces_modp(tp.members(), t.ambient(), 3, fp);
        let found = reduced_set(&scan.matches);
        let want = reduced_set(tp.members());
        let matches = found == want;
        if !matches && extra.is_none() {
            extra = scan.matches.iter().find(|m| !want.contains(&m.basis_rows())).cloned();
        }
        cert.evidence.push(PrimeEvidence {
            prime: fp.modulus(),
            found: found.len(),
            family_size: t.len(),
            matches_family: matches,
            visited: scan.visited,
        });
    }
    cert.verdict = conclude(t, &cert, extra);
    Ok(cert)
}

fn conclude(t: &PlaneFamily<Rationals>, cert: &Certificate, extra: Option<Subspace<PrimeField>>) -> Verdict {
    if let Some(e) = extra {
        let lifted = lift_plane(&e);
        if verified_witness(t, &lifted) {
            return Verdict::Incomplete {
                witness: witness_rows(&lifted),
                strategy: format!("lift from p = {}", e.field().modulus()),
            };
        }
        return Verdict::Inconclusive {
            reason: format!(
                "an extra plane exists mod {} but its small lift is not incident to the family over Q",
                e.field().modulus()
            ),
        };
    }
    if cert.report.not_finitely_completable {
        return Verdict::Inconclusive {
            reason: "two members meet in a line; no finite completion exists but no witness was found".into(),
        };
    }
    let primes: Vec<u32> = cert.evidence.iter().filter(|e| e.matches_family).map(|e| e.prime).collect();
    if primes.is_empty() {
        return Verdict::Inconclusive {
            reason: "no prime of good reduction was checked".into(),
        };
    }
    Verdict::CompleteCertifiedAtPrimes { primes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{is_decomposable, KVector};
    use crate::planes::{fano_family, fano_restricted, i_plus_plane, random_incident_family, GeneratorMode};

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn f_of_e0() {
        let mut e0 = vec![r(0); 6];
        e0[0] = r(1);
        let fv = f_of(&Rationals, &e0).unwrap();
        let expect = Subspace::coordinate(&Rationals, 20, &(0..10).collect::<Vec<_>>());
        assert_eq!(fv.space(), &expect);
        let v = vec![r(1), r(2), r(0), r(-1), r(3), r(1)];
        let v2: Vec<Rational> = v.iter().map(|x| x * &r(2)).collect();
        assert_eq!(f_of(&Rationals, &v).unwrap(), f_of(&Rationals, &v2).unwrap());
        assert_eq!(f_of(&Rationals, &vec![r(0); 6]), Err(LagrangianError::ZeroVector));
    }

    #[test]
    fn intersection_dims() {
        let v = vec![r(1), r(2), r(0), r(-1), r(3), r(1)];
        let fv = f_of(&Rationals, &v).unwrap();
        assert_eq!(intersection_dim(fv.space(), fv.space()), 10);
        let a = random_lagrangian(3);
        assert_eq!(intersection_dim(a.space(), fv.space()), 0);
    }

    #[test]
    fn isotropic_spans() {
        let b = isotropic_span(&fano_restricted(4)).unwrap();
        assert_eq!(b.dim(), 4);
        let one = PlaneFamily::new(6, vec![Subspace::coordinate(&Rationals, 6, &[0, 1, 2])]).unwrap();
        assert_eq!(isotropic_span(&one).unwrap().dim(), 1);
        let bad = PlaneFamily::new(
            6,
            vec![Subspace::coordinate(&Rationals, 6, &[0, 1, 2]), Subspace::coordinate(&Rationals, 6, &[3, 4, 5])],
        )
        .unwrap();
        assert_eq!(isotropic_span(&bad), Err(LagrangianError::NotIncident(0, 1)));
    }

    #[test]
    fn completion_contains_seed() {
        let b = Subspace::span(&Rationals, 20, vec![KVector::basis(&Rationals, 6, &[0, 1, 2]).into_coords()]);
        let a = lagrangian_complete(&b, 1).unwrap();
        assert!(a.space().contains_subspace(&b));
        assert_eq!(lagrangian_complete(a.space(), 9).unwrap(), a);
        let full = Subspace::whole(&Rationals, 20);
        assert_eq!(lagrangian_complete(&full, 0), Err(LagrangianError::NotIsotropic));
    }

    #[test]
    fn graph_lagrangians() {
        let a = random_lagrangian(11);
        assert_eq!(a.space().dim(), 10);
        assert!(is_isotropic(a.space()));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_symmetric(&mut rng, 10, 2);
        let mut ns = s.clone();
        ns[(0, 1)] = &ns[(0, 1)] + &r(1);
        let rows = graph_lagrangian(&s).unwrap();
        assert_eq!(rows.space().dim(), 10);
        // a non-symmetric graph is not isotropic
        let table = complement_table();
        let m = Matrix::from_fn(&Rationals, 10, 20, |i, c| {
            if c == i {
                r(1)
            } else if let Some(j) = (0..10).find(|&j| table[j].0 == c) {
                &ns[(i, j)] * &r(table[j].1 as i64)
            } else {
                r(0)
            }
        });
        assert!(!is_isotropic(&Subspace::from_matrix(&m)));
    }

    #[test]
    fn wedge3_preserves_pairing_for_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = crate::planes::random_unimodular(&mut rng, 6);
        let a = random_lagrangian(5);
        let b = transform_lagrangian(&g, &a);
        assert!(is_isotropic(b.space()));
        assert_eq!(b.space().dim(), 10);
    }

    #[test]
    fn theta_of_completion_contains_seeded_plane() {
        let w = Subspace::coordinate(&Rationals, 6, &[0, 1, 2]);
        let b = Subspace::span(&Rationals, 20, vec![plucker(&w).unwrap().into_coords()]);
        let a = lagrangian_complete(&b, 3).unwrap();
        let fp = PrimeField::new(3).unwrap();
        let th = theta_enumerate_modp(&a, 3).unwrap();
        assert!(th.members.contains(&w.reduce_mod(&fp)));
        assert_eq!(th.visited, 33880);
    }

    #[test]
    fn generic_theta_is_empty_mod_two() {
        let a = random_lagrangian(1);
        let th = theta_enumerate_modp(&a, 2).unwrap();
        // oracle: test every plane of Gr(3, F_2^6) for membership with generic linear algebra
        let fp = PrimeField::new(2).unwrap();
        let ap = a.reduce_mod(&fp);
        let scan = scan_grassmannian(&fp, 6, 3, |_| true);
        let brute: Vec<_> = scan.matches.iter().filter(|w| ap.contains_plane(w)).cloned().collect();
        assert_eq!(th.members, brute);
    }

    #[test]
    fn plucker_relations_vanish_on_decomposables() {
        let rels = plucker_relations();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let rows: Vec<Vec<Rational>> = (0..3).map(|_| small_vector(&mut rng, 6)).collect();
            let p = wedge_vectors(&Rationals, 6, &rows).into_coords();
            for rel in &rels {
                let s = rel.iter().fold(r(0), |acc, &(s, i, j)| &acc + &(&r(s as i64) * &(&p[i] * &p[j])));
                assert!(s.is_zero());
            }
        }
        // and not on e012 + e345
        let mut q = vec![r(0); 20];
        q[0] = r(1);
        q[19] = r(1);
        assert!(!is_decomposable(&KVector::from_coords(&Rationals, 6, 3, q.clone()).unwrap()).unwrap().0);
        assert!(rels.iter().any(|rel| !rel
            .iter()
            .fold(r(0), |acc, &(s, i, j)| &acc + &(&r(s as i64) * &(&q[i] * &q[j])))
            .is_zero()));
    }

    #[test]
    fn tangent_dim_matches_s_w_oracle() {
        for seed in 0..3 {
            let w = Subspace::coordinate(&Rationals, 6, &[0, 1, 2]);
            let b = Subspace::span(&Rationals, 20, vec![plucker(&w).unwrap().into_coords()]);
            let a = lagrangian_complete(&b, seed).unwrap();
            let oracle = intersection_dim(a.space(), &s_w_space(&w)) - 1;
            assert_eq!(theta_tangent_dim(&a, &w).unwrap(), oracle);
        }
        let a = random_lagrangian(0);
        let w = Subspace::coordinate(&Rationals, 6, &[0, 1, 2]);
        if !a.contains_plane(&w) {
            assert_eq!(theta_tangent_dim(&a, &w), Err(LagrangianError::NotAMember));
        }
    }

    #[test]
    fn s_w_has_dimension_ten() {
        let w = Subspace::coordinate(&Rationals, 6, &[0, 1, 2]);
        let s = s_w_space(&w);
        assert_eq!(s.dim(), 10);
        assert!(s.contains(KVector::basis(&Rationals, 6, &[0, 1, 5]).coords()));
    }

    #[test]
    fn fano_certificate() {
        let c = completeness_certificate(&fano_family(), &[2, 3], 0).unwrap();
        assert!(matches!(c.verdict, Verdict::CompleteCertifiedAtPrimes { ref primes } if primes == &[2, 3]));
    }

    #[test]
    fn infinite_families_are_incomplete() {
        for mode in GeneratorMode::ALL {
            let t = random_incident_family(2, 5, mode).unwrap();
            let c = completeness_certificate(&t, &[2], 0).unwrap();
            match c.verdict {
                Verdict::Incomplete { witness, .. } => {
                    let w = Subspace::span(&Rationals, 6, witness);
                    assert!(verified_witness(&t, &w), "{mode:?}");
                }
                other => panic!("{mode:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn i_plus_planes_in_the_p4_family() {
        let u = |v: [i64; 4]| v.map(Rational::from);
        let t = PlaneFamily::new(6, vec![i_plus_plane(&u([1, 0, 0, 0])), i_plus_plane(&u([0, 1, 0, 0]))]).unwrap();
        let c = completeness_certificate(&t, &[2], 0).unwrap();
        assert!(matches!(c.verdict, Verdict::Incomplete { .. }));
    }
}
