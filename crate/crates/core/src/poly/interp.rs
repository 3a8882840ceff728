//! Recovery of homogeneous polynomials from an evaluation oracle.
//!
//! The oracle is sampled on the chart `x_0 = 1` at the lattice simplex
//! `{b ∈ N^{n-1} : |b| ≤ d}`; forward differences give the coefficients in the
//! binomial basis, which are then rewritten in monomials. A fixed set of extra
//! points (some on `x_0 = 0`) must also agree.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{MultiPoly, PolyError, UniPoly};
use crate::scalars::{large_primes, rational_reconstruct, Field, PrimeField, Rational, Rationals};

const CHECK_POINTS: usize = 12;

/// All `b ∈ N^nv` with `|b| ≤ d`, in lexicographic order.
pub fn simplex_points(nv: usize, d: usize) -> Vec<Vec<u16>> {
    fn rec(nv: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == nv {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e as u16);
            rec(nv, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nv, d, &mut Vec::with_capacity(nv), &mut out);
    out
}

/// Coefficients of `binom(y, a)` in powers of `y`, for `a = 0..=d`.
fn binomial_basis<F: Field>(f: &F, d: usize) -> Vec<Vec<F::Elem>> {
    let mut out = Vec::with_capacity(d + 1);
    let mut p = UniPoly::new(f, vec![f.one()]);
    for a in 0..=d {
        out.push(p.coeffs().to_vec());
        // binom(y, a+1) = binom(y, a) (y - a) / (a + 1)
        let inv = f.inv(&f.from_i64(a as i64 + 1)).expect("characteristic exceeds degree");
        let lin = UniPoly::new(f, vec![f.mul(&f.neg(&f.from_i64(a as i64)), &inv), inv]);
        p = p.mul(&lin);
    }
    out
}

/// Polynomial of degree `≤ d` in `nv` variables with prescribed values on the simplex.
fn newton_simplex<F: Field>(f: &F, nv: usize, d: usize, points: &[Vec<u16>], mut values: Vec<F::Elem>) -> MultiPoly<F> {
    let index: HashMap<&[u16], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let lines = |axis: usize| -> Vec<Vec<usize>> {
        points
            .iter()
            .filter(|p| p[axis] == 0)
            .map(|p| {
                let rest: usize = p.iter().map(|&e| e as usize).sum();
                let mut q = p.clone();
                (0..=d - rest)
                    .map(|k| {
                        q[axis] = k as u16;
                        index[q.as_slice()]
                    })
                    .collect()
            })
            .collect()
    };
    for axis in 0..nv {
        for line in lines(axis) {
            let m = line.len();
            for k in 1..m {
                for j in (k..m).rev() {
                    values[line[j]] = f.sub(&values[line[j]], &values[line[j - 1]]);
                }
            }
        }
    }
    // binomial basis to monomials, one axis at a time
    let basis = binomial_basis(f, d);
    for axis in 0..nv {
        for line in lines(axis) {
            let mut w = vec![f.zero(); line.len()];
            for (a, &i) in line.iter().enumerate() {
                for (j, t) in basis[a].iter().enumerate() {
                    f.add_assign(&mut w[j], &f.mul(&values[i], t));
                }
            }
            for (&i, x) in line.iter().zip(w) {
                values[i] = x;
            }
        }
    }
    MultiPoly::from_terms(f, nv, points.iter().cloned().zip(values))
}

fn check_points<F: Field>(f: &F, n: usize) -> Vec<Vec<F::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_c0ffee);
    (0..CHECK_POINTS)
        .map(|k| {
            (0..n)
                .map(|i| {
                    if i == 0 && k % 3 == 0 && n > 1 {
                        f.zero()
                    } else {
                        f.from_i64(rng.gen_range(-40i64..=40))
                    }
                })
                .collect()
        })
        .collect()
}

/// Homogeneous polynomial of degree `d` in `n` variables agreeing with `eval`,
/// over any field of characteristic 0 or greater than `d`.
pub fn interpolate_homogeneous_in<F, E>(f: &F, n: usize, d: usize, eval: E) -> Result<MultiPoly<F>, PolyError>
where
    F: Field,
    E: Fn(&[F::Elem]) -> F::Elem + Sync,
{
    let ch = f.characteristic();
    if ch != 0 && ch <= d as u64 {
        return Err(PolyError::CharacteristicTooSmall(ch, d));
    }
    let points = simplex_points(n - 1, d);
    let values: Vec<F::Elem> = points
        .par_iter()
        .map(|b| {
            let mut x = vec![f.one()];
            x.extend(b.iter().map(|&e| f.from_i64(e as i64)));
            eval(&x)
        })
        .collect();
    let poly = newton_simplex(f, n - 1, d, &points, values).homogenize(0, d);
    for x in check_points(f, n) {
        if poly.eval(&x) != eval(&x) {
            return Err(PolyError::InconsistentEvaluations(d));
        }
    }
    Ok(poly)
}

pub fn interpolate_homogeneous<E>(n: usize, d: usize, eval: E) -> Result<MultiPoly<Rationals>, PolyError>
where
    E: Fn(&[Rational]) -> Rational + Sync,
{
    interpolate_homogeneous_in(&Rationals, n, d, eval)
}

/// Interpolate modulo successive 31-bit primes, lift by Chinese remaindering and
/// rational reconstruction, and accept once the lift is stable and agrees with
/// the exact oracle. `eval_p` may return `None` to reject a prime.
pub fn interpolate_homogeneous_multimodular<EP, EQ>(
    n: usize,
    d: usize,
    eval_p: EP,
    eval_q: EQ,
) -> Result<MultiPoly<Rationals>, PolyError>
where
    EP: Fn(&PrimeField, &[u32]) -> Option<u32> + Sync,
    EQ: Fn(&[Rational]) -> Rational,
{
    const MAX_PRIMES: usize = 400;
    let monos: Vec<Vec<u16>> = simplex_points(n - 1, d)
        .into_iter()
        .map(|b| {
            let mut e = vec![(d - b.iter().map(|&x| x as usize).sum::<usize>()) as u16];
            e.extend(b);
            e
        })
        .collect();
    let mut residue = vec![BigInt::zero(); monos.len()];
    let mut modulus = BigInt::from(1u32);
    let mut previous: Option<MultiPoly<Rationals>> = None;
    let checks = check_points(&Rationals, n);
    for (used, p) in large_primes().take(MAX_PRIMES).enumerate() {
        let fp = PrimeField::new(p)?;
        let rejected = std::sync::atomic::AtomicBool::new(false);
        let modp = interpolate_homogeneous_in(&fp, n, d, |x| {
            eval_p(&fp, x).unwrap_or_else(|| {
                rejected.store(true, std::sync::atomic::Ordering::Relaxed);
                0
            })
        });
        let modp = match modp {
            Ok(poly) if !rejected.into_inner() => poly,
            _ => continue,
        };
        // incremental CRT: x' = x + M ((r - x) M^{-1} mod p)
        let m_mod = (&modulus % p).to_u32().unwrap();
        let m_inv = fp.inv(&m_mod).expect("distinct primes");
        for (x, e) in residue.iter_mut().zip(&monos) {
            let r = modp.coeff(e);
            let x_mod = (&*x % p).to_u32().unwrap();
            let t = fp.mul(&fp.sub(&r, &x_mod), &m_inv);
            *x += &modulus * t;
        }
        modulus *= p;
        if used == 0 {
            continue;
        }
        let bound = (&modulus / 2u32).sqrt();
        let lifted: Option<Vec<Rational>> = residue
            .iter()
            .map(|x| rational_reconstruct(x, &modulus, &bound))
            .collect();
        let Some(lifted) = lifted else { continue };
        let candidate = MultiPoly::from_terms(&Rationals, n, monos.iter().cloned().zip(lifted));
        if previous.as_ref() == Some(&candidate) && checks.iter().take(3).all(|x| candidate.eval(x) == eval_q(x)) {
            return Ok(candidate);
        }
        previous = Some(candidate);
    }
    Err(PolyError::NoReconstruction)
}
