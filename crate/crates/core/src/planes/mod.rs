//! Families of projective planes, given as 3-dimensional linear subspaces.

mod enumerate;
mod generate;
mod morin;

pub use enumerate::{
    enumerate_incident_lines_modp, enumerate_incident_planes_modp, gaussian_binomial, incident_subspaces_modp,
    pivot_patterns, scan_grassmannian, GrassmannianScan,
};
pub use generate::{i_plus_plane, random_incident_family, random_unimodular, GeneratorMode};
pub use morin::{morin_classify, quadric_system, smooth_quadric_containing, MorinFlags};

use serde::Serialize;
use thiserror::Error;

use crate::linalg::Subspace;
use crate::scalars::{Field, PrimeField, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanesError {
    #[error("ambient mismatch: {0} vs {1}")]
    MixedAmbient(usize, usize),
    #[error("member {index} has dimension {dim}, expected 3")]
    NotAPlane { index: usize, dim: usize },
    #[error("members {0} and {1} coincide")]
    DuplicateMember(usize, usize),
    #[error("family has bad reduction at p = {p}")]
    BadReduction { p: u32 },
    #[error("family is too small for this operation")]
    TooSmall,
    #[error("operation requires ambient dimension {expected}, got {got}")]
    WrongAmbient { expected: usize, got: usize },
    #[error("generator {mode:?} failed after {attempts} attempts")]
    GenerationFailed { mode: GeneratorMode, attempts: usize },
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
}

/// Ordered list of pairwise distinct planes in a common ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneFamily<F: Field = Rationals> {
    ambient: usize,
    members: Vec<Subspace<F>>,
}

impl<F: Field> PlaneFamily<F> {
    pub fn new(ambient: usize, members: Vec<Subspace<F>>) -> Result<Self, PlanesError> {
        for (i, m) in members.iter().enumerate() {
            if m.ambient() != ambient {
                return Err(PlanesError::MixedAmbient(ambient, m.ambient()));
            }
            if m.dim() != 3 {
                return Err(PlanesError::NotAPlane { index: i, dim: m.dim() });
            }
            if let Some(j) = members[..i].iter().position(|x| x == m) {
                return Err(PlanesError::DuplicateMember(j, i));
            }
        }
        Ok(PlaneFamily { ambient, members })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn members(&self) -> &[Subspace<F>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Linear span of all members.
    pub fn span(&self) -> Subspace<F> {
        let mut s = Subspace::zero(&self.field(), self.ambient);
        for m in &self.members {
            s = s.sum(m);
        }
        s
    }

    fn field(&self) -> F {
        self.members
            .first()
            .map(|m| m.field().clone())
            .expect("field of an empty family")
    }
}

impl PlaneFamily<Rationals> {
    /// Reduction of every member; fails when two members collapse mod `p`.
    pub fn reduce_mod(&self, fp: &PrimeField) -> Result<PlaneFamily<PrimeField>, PlanesError> {
        let members = self.members.iter().map(|m| m.reduce_mod(fp)).collect();
        PlaneFamily::new(self.ambient, members).map_err(|_| PlanesError::BadReduction { p: fp.modulus() })
    }
}

pub fn intersect<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>, PlanesError> {
    if a.ambient() != b.ambient() {
        return Err(PlanesError::MixedAmbient(a.ambient(), b.ambient()));
    }
    Ok(a.intersect(b))
}

/// Two planes are incident when their linear intersection is nonzero.
pub fn incident<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<bool, PlanesError> {
    if a.ambient() != b.ambient() {
        return Err(PlanesError::MixedAmbient(a.ambient(), b.ambient()));
    }
    // dim(a ∩ b) = dim a + dim b - dim(a + b)
    Ok(a.dim() + b.dim() > a.sum(b).dim())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub size: usize,
    pub incidence: Vec<Vec<bool>>,
    /// Linear dimensions of pairwise intersections (diagonal: 3).
    pub intersection_dims: Vec<Vec<usize>>,
    pub incident_pairs: usize,
    pub all_pairwise_incident: bool,
    /// Pairs meeting in a line; such a family is never finitely completable.
    pub line_pairs: Vec<(usize, usize)>,
    pub not_finitely_completable: bool,
    pub span_dim: usize,
}

pub fn family_report<F: Field>(t: &PlaneFamily<F>) -> FamilyReport {
    let n = t.len();
    let mut dims = vec![vec![3usize; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = t.members[i].intersect(&t.members[j]).dim();
            dims[i][j] = d;
            dims[j][i] = d;
        }
    }
    let incidence: Vec<Vec<bool>> = dims.iter().map(|r| r.iter().map(|&d| d >= 1).collect()).collect();
    let mut line_pairs = Vec::new();
    let mut incident_pairs = 0;
    for i in 0..n {
        for j in i + 1..n {
            if dims[i][j] >= 1 {
                incident_pairs += 1;
            }
            if dims[i][j] == 2 {
                line_pairs.push((i, j));
            }
        }
    }
    let span_dim = if n == 0 { 0 } else { t.span().dim() };
    FamilyReport {
        size: n,
        incidence,
        intersection_dims: dims,
        incident_pairs,
        all_pairwise_incident: incident_pairs == n * n.saturating_sub(1) / 2,
        not_finitely_completable: !line_pairs.is_empty(),
        line_pairs,
        span_dim,
    }
}

/// Index triples of the seven Fano planes in ambient 7.
pub const FANO_TRIPLES: [[usize; 3]; 7] = [
    [0, 1, 2],
    [2, 3, 4],
    [0, 4, 5],
    [1, 3, 5],
    [0, 3, 6],
    [1, 4, 6],
    [2, 5, 6],
];

/// Points of `P^2(F_2)` labelling `v_0, …, v_6`.
pub const FANO_LABELS: [[u8; 3]; 7] = [
    [0, 1, 0],
    [0, 1, 1],
    [0, 0, 1],
    [1, 0, 1],
    [1, 0, 0],
    [1, 1, 0],
    [1, 1, 1],
];

pub fn fano_family() -> PlaneFamily<Rationals> {
    let members = FANO_TRIPLES
        .iter()
        .map(|t| Subspace::coordinate(&Rationals, 7, t))
        .collect();
    PlaneFamily::new(7, members).expect("fano planes are distinct")
}

/// Whether the labels of a plane's three points form a line of `P^2(F_2)`.
pub fn fano_member_is_line(triple: &[usize; 3]) -> bool {
    let [a, b, c] = triple.map(|i| FANO_LABELS[i]);
    (0..3).all(|k| a[k] ^ b[k] == c[k])
}

/// The first `k` Fano planes restricted to the first six coordinates.
pub fn fano_restricted(k: usize) -> PlaneFamily<Rationals> {
    let members = FANO_TRIPLES[..k]
        .iter()
        .map(|t| Subspace::coordinate(&Rationals, 6, t))
        .collect();
    PlaneFamily::new(6, members).expect("distinct")
}
