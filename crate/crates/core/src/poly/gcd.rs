//! Multivariate gcd over `Q` by restriction to lines.
//!
//! On a line through a generic base point `P_0` the univariate gcd of the
//! restrictions is the restriction of the gcd `h`. Normalizing it at `P_0`
//! gives the value of `h / h(P_0)` at the far end of the line, which is
//! interpolated in randomly mixed coordinates and then checked by exact division.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{exact_divide, interpolate_homogeneous, MultiPoly, PolyError, UniPoly};
use crate::linalg::Matrix;
use crate::scalars::{Field, Rational, Rationals};

const ATTEMPTS: u64 = 6;

fn restrict(f: &MultiPoly, p0: &[Rational], x: &[Rational]) -> UniPoly<Rationals> {
    // t ↦ f(P_0 + t (X - P_0)) sampled at t = 0..=deg
    let d = f.degree().unwrap_or(0);
    let values: Vec<Rational> = (0..=d)
        .map(|t| {
            let t = Rational::from(t as i64);
            let pt: Vec<Rational> = p0.iter().zip(x).map(|(a, b)| a + &(&t * &(b - a))).collect();
            f.eval(&pt)
        })
        .collect();
    UniPoly::interpolate_at_naturals(&Rationals, &values)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::from(rng.gen_range(-97i64..=97))).collect()
}

const BASE_POINTS: usize = 4;

fn homogeneous_gcd(f: &MultiPoly, g: &MultiPoly, seed: u64) -> Result<MultiPoly, PolyError> {
    let n = f.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<Vec<Rational>> = (0..BASE_POINTS).map(|_| random_point(&mut rng, n)).collect();
    if bases.iter().any(|p| f.eval(p).is_zero() || g.eval(p).is_zero()) {
        return Err(PolyError::GcdFailed);
    }
    let line_gcd = |p0: &[Rational], x: &[Rational]| restrict(f, p0, x).gcd(&restrict(g, p0, x));
    // lines on which neither input drops degree
    let (df, dg) = (f.degree(), g.degree());
    let mut degrees = Vec::new();
    for _ in 0..20 {
        let x = random_point(&mut rng, n);
        if restrict(f, &bases[0], &x).degree() == df && restrict(g, &bases[0], &x).degree() == dg {
            degrees.push(line_gcd(&bases[0], &x).degree().unwrap_or(0));
            if degrees.len() == 2 {
                break;
            }
        }
    }
    let e = degrees.into_iter().min().ok_or(PolyError::GcdFailed)?;
    if e == 0 {
        return Ok(MultiPoly::one(&Rationals, n));
    }
    // h(X) / h(P) from the line through P and X, when that line is generic enough
    let ratio = |p0: &[Rational], x: &[Rational]| -> Option<Rational> {
        let u = line_gcd(p0, x);
        let u0 = u.eval(&Rational::zero());
        (u.degree() == Some(e) && !u0.is_zero()).then(|| Rationals.div(&u.eval(&Rational::one()), &u0).unwrap())
    };
    // h(P_j) / h(P_0), for the base points reachable from P_0 by a good line
    let scales: Vec<Option<Rational>> = bases
        .iter()
        .enumerate()
        .map(|(j, p)| if j == 0 { Some(Rational::one()) } else { ratio(&bases[0], p) })
        .collect();
    // sample h∘M on the interpolation grid, so that the nodes avoid the special points
    // where the cofactors of h share a zero
    let m = loop {
        let m = Matrix::from_fn(&Rationals, n, n, |_, _| Rational::from(rng.gen_range(-9i64..=9)));
        if let Some(inv) = m.inverse() {
            break (m, inv);
        }
    };
    let failed = std::sync::atomic::AtomicBool::new(false);
    let hm = interpolate_homogeneous(n, e, |y| {
        let x = m.0.mul_vec(y);
        let found = bases
            .iter()
            .zip(&scales)
            .find_map(|(p, s)| s.as_ref().and_then(|s| ratio(p, &x).map(|r| &r * s)));
        found.unwrap_or_else(|| {
            failed.store(true, std::sync::atomic::Ordering::Relaxed);
            Rational::zero()
        })
    });
    if failed.into_inner() {
        return Err(PolyError::GcdFailed);
    }
    let images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::linear(&Rationals, m.1.row(i))).collect();
    let h = hm.map_err(|_| PolyError::GcdFailed)?.compose(&images);
    exact_divide(f, &h).map_err(|_| PolyError::GcdFailed)?;
    exact_divide(g, &h).map_err(|_| PolyError::GcdFailed)?;
    Ok(h)
}

/// Greatest common divisor over `Q`, normalized to leading coefficient 1.
pub fn gcd_multivariate(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    if f.nvars() != g.nvars() {
        return Err(PolyError::VarMismatch(f.nvars(), g.nvars()));
    }
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let homogeneous = f.is_homogeneous() && g.is_homogeneous();
    let (fh, gh) = if homogeneous {
        (f.clone(), g.clone())
    } else {
        let n = f.nvars();
        (f.homogenize(n, f.degree().unwrap()), g.homogenize(n, g.degree().unwrap()))
    };
    if fh.nvars() == 1 {
        let e = fh.degree().unwrap().min(gh.degree().unwrap());
        return Ok(MultiPoly::var(&Rationals, 1, 0).pow(e));
    }
    for seed in 0..ATTEMPTS {
        if let Ok(h) = homogeneous_gcd(&fh, &gh, seed) {
            let h = if homogeneous { h } else { h.dehomogenize(f.nvars()) };
            return Ok(h.monic());
        }
    }
    Err(PolyError::GcdFailed)
}
