//! Detectors for the first four infinite families of pairwise incident planes in `P^5`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{PlaneFamily, PlanesError};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Field, Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorinFlags {
    /// (1) all members share a point.
    pub common_point: bool,
    /// (2) the supplied plane meets every member in at least a projective line; `None`
    /// when no witness was given.
    pub witness_plane: Option<bool>,
    /// (3) the members span at most a `P^4`.
    pub in_p4: bool,
    /// (4) the members lie on a smooth quadric and pairwise meet in odd dimension.
    pub quadric_ruling: bool,
    /// None of the above.
    pub unknown: bool,
    /// Dimension of the space of quadrics containing every member.
    pub quadric_space_dim: usize,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // position of (i, j), i <= j, in the lexicographic list of pairs
    (0..i).map(|r| n - r).sum::<usize>() + (j - i)
}

/// Basis (rows, 21 coordinates `c_ij`, `i ≤ j`) of the quadrics `Σ c_ij x_i x_j`
/// containing every member.
pub fn quadric_system(t: &PlaneFamily<Rationals>) -> Matrix<Rationals> {
    let n = t.ambient();
    let m = n * (n + 1) / 2;
    let f = Rationals;
    let mut eqs = Matrix::zeros(&f, 0, m);
    for w in t.members() {
        let b = w.basis_rows();
        for a in 0..b.len() {
            for c in a..b.len() {
                let mut row = vec![f.zero(); m];
                for i in 0..n {
                    for j in i..n {
                        // twice the polar form: 2 c_ii a_i b_i + c_ij (a_i b_j + a_j b_i)
                        let v = if i == j {
                            &Rational::from(2) * &(&b[a][i] * &b[c][i])
                        } else {
                            &(&b[a][i] * &b[c][j]) + &(&b[a][j] * &b[c][i])
                        };
                        row[pair_index(n, i, j)] = v;
                    }
                }
                eqs.push_row(row);
            }
        }
    }
    eqs.kernel()
}

/// Symmetric Gram matrix `Q` with `x^T Q x = Σ c_ij x_i x_j`.
pub fn quadric_gram(n: usize, c: &[Rational]) -> Matrix<Rationals> {
    let half = Rational::new(1, 2).unwrap();
    Matrix::from_fn(&Rationals, n, n, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let v = c[pair_index(n, a, b)].clone();
        if i == j {
            v
        } else {
            &v * &half
        }
    })
}

/// A nondegenerate quadric containing every member, if the linear system has one.
pub fn smooth_quadric_containing(t: &PlaneFamily<Rationals>, seed: u64) -> Option<Matrix<Rationals>> {
    let n = t.ambient();
    let k = quadric_system(t);
    if k.rows() == 0 {
        return None;
    }
    for r in 0..k.rows() {
        let q = quadric_gram(n, k.row(r));
        if !q.determinant().is_zero() {
            return Some(q);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut c = vec![Rational::zero(); k.cols()];
        for r in 0..k.rows() {
            let s = Rational::from(rng.gen_range(-5i64..=5));
            for (x, y) in c.iter_mut().zip(k.row(r)) {
                *x = &*x + &(&s * y);
            }
        }
        let q = quadric_gram(n, &c);
        if !q.determinant().is_zero() {
            return Some(q);
        }
    }
    None
}

pub fn morin_classify(
    t: &PlaneFamily<Rationals>,
    witness: Option<&Subspace<Rationals>>,
    seed: u64,
) -> Result<MorinFlags, PlanesError> {
    if t.ambient() != 6 {
        return Err(PlanesError::WrongAmbient {
            expected: 6,
            got: t.ambient(),
        });
    }
    if t.len() < 2 {
        return Err(PlanesError::TooSmall);
    }
    let members = t.members();
    let common = members
        .iter()
        .skip(1)
        .fold(members[0].clone(), |acc, m| acc.intersect(m));
    let common_point = common.dim() >= 1;
    let witness_plane = match witness {
        Some(m) => {
            if m.ambient() != 6 {
                return Err(PlanesError::MixedAmbient(6, m.ambient()));
            }
            Some(members.iter().all(|w| w.intersect(m).dim() >= 2))
        }
        None => None,
    };
    let in_p4 = t.span().dim() <= 5;
    let quadric_space_dim = quadric_system(t).rows();
    let odd = members
        .iter()
        .enumerate()
        .all(|(i, a)| members[i + 1..].iter().all(|b| a.intersect(b).dim() % 2 == 1));
    let quadric_ruling = odd && smooth_quadric_containing(t, seed).is_some();
    let unknown = !(common_point || witness_plane == Some(true) || in_p4 || quadric_ruling);
    Ok(MorinFlags {
        common_point,
        witness_plane,
        in_p4,
        quadric_ruling,
        unknown,
        quadric_space_dim,
    })
}
