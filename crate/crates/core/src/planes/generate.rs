//! Seeded generators of pairwise incident plane families in `P^5`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PlaneFamily, PlanesError};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Rational, Rationals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorMode {
    /// Planes through a common point.
    CommonPoint,
    /// Planes meeting a fixed plane in a line.
    LineInPlane,
    /// Planes inside a fixed `P^4`.
    Hyperplane,
    /// Planes of one ruling of a smooth quadric (images of `i₊`-planes).
    QuadricRuling,
    /// Each new plane is spanned by at most three points covering all earlier members.
    Greedy,
}

impl GeneratorMode {
    pub const ALL: [GeneratorMode; 5] = [
        GeneratorMode::CommonPoint,
        GeneratorMode::LineInPlane,
        GeneratorMode::Hyperplane,
        GeneratorMode::QuadricRuling,
        GeneratorMode::Greedy,
    ];

    fn tag(self) -> u64 {
        match self {
            GeneratorMode::CommonPoint => 1,
            GeneratorMode::LineInPlane => 2,
            GeneratorMode::Hyperplane => 3,
            GeneratorMode::QuadricRuling => 4,
            GeneratorMode::Greedy => 5,
        }
    }
}

/// `i₊([u]) = P{u ∧ x : x ∈ U}` in the coordinates
/// `e_0..e_5 = u_0u_1, u_0u_2, u_0u_3, u_1u_2, u_1u_3, u_2u_3` of `∧^2 U`.
pub fn i_plus_plane(u: &[Rational; 4]) -> Subspace<Rationals> {
    let rows = (0..4)
        .map(|k| {
            let mut x = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
            x[k] = Rational::one();
            wedge_u(u, &x)
        })
        .collect();
    Subspace::span(&Rationals, 6, rows)
}

pub(crate) fn wedge_u(a: &[Rational; 4], b: &[Rational; 4]) -> Vec<Rational> {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    PAIRS
        .iter()
        .map(|&(i, j)| &(&a[i] * &b[j]) - &(&a[j] * &b[i]))
        .collect()
}

/// Random integer matrix of determinant 1 built from elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> Matrix<Rationals> {
    let mut g = Matrix::identity(&Rationals, n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = Rational::from(rng.gen_range(-2i64..=2));
        for col in 0..n {
            let t = &g[(i, col)] + &(&c * &g[(j, col)]);
            g[(i, col)] = t;
        }
    }
    g
}

fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(Rational::from).collect();
        }
    }
}

fn random_point_in(rng: &mut impl Rng, s: &Subspace<Rationals>) -> Vec<Rational> {
    let basis = s.basis_rows();
    let c = random_vector(rng, basis.len());
    let mut v = vec![Rational::zero(); s.ambient()];
    for (ci, row) in c.iter().zip(&basis) {
        for (x, y) in v.iter_mut().zip(row) {
            *x = &*x + &(ci * y);
        }
    }
    v
}

/// Image of `w` under the linear map `x ↦ g x`.
fn transform(g: &Matrix<Rationals>, w: &Subspace<Rationals>) -> Subspace<Rationals> {
    Subspace::from_matrix(&w.basis().mul(&g.transpose()))
}

pub fn random_incident_family(seed: u64, k: usize, mode: GeneratorMode) -> Result<PlaneFamily<Rationals>, PlanesError> {
    if k < 2 {
        return Err(PlanesError::TooSmall);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ mode.tag());
    let f = Rationals;
    let budget = 50 * k;
    let mut attempts = 0;
    let mut members: Vec<Subspace<Rationals>> = Vec::new();

    // shared data per mode
    let point = random_vector(&mut rng, 6);
    let fixed_plane = loop {
        let s = Subspace::span(&f, 6, (0..3).map(|_| random_vector(&mut rng, 6)).collect());
        if s.dim() == 3 {
            break s;
        }
    };
    let hyper = loop {
        let s = Subspace::span(&f, 6, (0..5).map(|_| random_vector(&mut rng, 6)).collect());
        if s.dim() == 5 {
            break s;
        }
    };
    let g = random_unimodular(&mut rng, 6);

    while members.len() < k {
        attempts += 1;
        if attempts > budget {
            return Err(PlanesError::GenerationFailed { mode, attempts: budget });
        }
        let candidate = match mode {
            GeneratorMode::CommonPoint => {
                Subspace::span(&f, 6, vec![point.clone(), random_vector(&mut rng, 6), random_vector(&mut rng, 6)])
            }
            GeneratorMode::LineInPlane => Subspace::span(
                &f,
                6,
                vec![
                    random_point_in(&mut rng, &fixed_plane),
                    random_point_in(&mut rng, &fixed_plane),
                    random_vector(&mut rng, 6),
                ],
            ),
            GeneratorMode::Hyperplane => Subspace::span(&f, 6, (0..3).map(|_| random_point_in(&mut rng, &hyper)).collect()),
            GeneratorMode::QuadricRuling => {
                let u = random_vector(&mut rng, 4);
                let u: [Rational; 4] = u.try_into().unwrap();
                transform(&g, &i_plus_plane(&u))
            }
            GeneratorMode::Greedy => match greedy_candidate(&mut rng, &members) {
                Some(c) => c,
                None => continue,
            },
        };
        if candidate.dim() != 3 || members.contains(&candidate) {
            continue;
        }
        if !members.iter().all(|m| m.intersect(&candidate).dim() >= 1) {
            continue;
        }
        members.push(candidate);
    }
    PlaneFamily::new(6, members)
}

/// Cover the existing members by at most three points, preferring pairwise
/// intersection points, and span a plane through them.
fn greedy_candidate(rng: &mut impl Rng, members: &[Subspace<Rationals>]) -> Option<Subspace<Rationals>> {
    let f = Rationals;
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            let c = a.intersect(b);
            if c.dim() == 1 {
                points.push(c.basis_rows().remove(0));
            }
        }
    }
    for m in members {
        points.push(random_point_in(rng, m));
    }
    let covers = |p: &Vec<Rational>| -> Vec<bool> { members.iter().map(|m| m.contains(p)).collect() };
    let mut uncovered = vec![true; members.len()];
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    while uncovered.iter().any(|&u| u) {
        if chosen.len() == 3 {
            return None;
        }
        let best = points
            .iter()
            .map(|p| {
                let c = covers(p);
                let gain = c.iter().zip(&uncovered).filter(|(c, u)| **c && **u).count();
                (gain, p)
            })
            .max_by_key(|(gain, _)| *gain)?;
        if best.0 == 0 {
            return None;
        }
        let c = covers(best.1);
        for (u, c) in uncovered.iter_mut().zip(c) {
            if c {
                *u = false;
            }
        }
        chosen.push(best.1.clone());
    }
    while chosen.len() < 3 {
        chosen.push(random_vector(rng, 6));
    }
    Some(Subspace::span(&f, 6, chosen))
}
