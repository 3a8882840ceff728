//! Dense univariate polynomials over a field, low degree first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalars::{Field, PrimeField};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn x(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, t), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(f, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        self.add(&Self::new(f, other.coeffs.iter().map(|c| f.neg(c)).collect()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                f.add_assign(&mut c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, c)
    }

    /// `(q, r)` with `self = q d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = f.inv(d.coeffs.last().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![f.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = f.mul(r.last().unwrap(), &lc_inv);
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(&r[k + i], &f.mul(&c, dc));
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|c| f.is_zero(c)) {
                r.pop();
            }
        }
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let f = &self.field;
                let inv = f.inv(lc).unwrap();
                Self::new(f, self.coeffs.iter().map(|c| f.mul(c, &inv)).collect())
            }
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let f = &self.field;
        let mut base = self.div_rem(m).1;
        let mut acc = Self::new(f, vec![f.one()]).div_rem(m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(m).1;
            }
            base = base.mul(&base).div_rem(m).1;
            e >>= 1;
        }
        acc
    }

    /// Newton interpolation through `(i, values[i])`, `i = 0, 1, …`.
    /// The nodes must be distinct in the field.
    pub fn interpolate_at_naturals(field: &F, values: &[F::Elem]) -> Self {
        let f = field;
        let n = values.len();
        let nodes: Vec<F::Elem> = (0..n).map(|i| f.from_i64(i as i64)).collect();
        let mut dd = values.to_vec();
        for k in 1..n {
            for i in (k..n).rev() {
                let num = f.sub(&dd[i], &dd[i - 1]);
                let den = f.sub(&nodes[i], &nodes[i - k]);
                dd[i] = f.mul(&num, &f.inv(&den).expect("distinct nodes"));
            }
        }
        let mut p = Self::zero(f);
        for k in (0..n).rev() {
            let shift = Self::new(f, vec![f.neg(&nodes[k]), f.one()]);
            p = p.mul(&shift).add(&Self::new(f, vec![dd[k].clone()]));
        }
        p
    }
}


/// Distinct roots in `F_p` of a nonzero polynomial (sorted). Requires `p` odd.
pub fn roots_modp(fp: &PrimeField, poly: &UniPoly<PrimeField>, seed: u64) -> Vec<u32> {
    let p = fp.modulus();
    assert!(p > 2, "odd characteristic required");
    if poly.is_zero() {
        return Vec::new();
    }
    let x = UniPoly::x(fp);
    let f = poly.monic();
    let xp = x.pow_mod(p as u64, &f);
    let g = xp.sub(&x).gcd(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    split(fp, &g, &mut rng, &mut out);
    out.sort_unstable();
    out
}

fn split(fp: &PrimeField, g: &UniPoly<PrimeField>, rng: &mut ChaCha8Rng, out: &mut Vec<u32>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(fp.neg(&g.coeffs()[0])),
        Some(d) => loop {
            let a: u32 = rng.gen_range(0..fp.modulus());
            let shifted = UniPoly::new(fp, vec![a, 1]);
            let h = shifted
                .pow_mod(((fp.modulus() - 1) / 2) as u64, g)
                .sub(&UniPoly::new(fp, vec![1]));
            let u = h.gcd(g);
            if let Some(e) = u.degree() {
                if e > 0 && e < d {
                    split(fp, &u, rng, out);
                    split(fp, &g.div_rem(&u).0, rng, out);
                    return;
                }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Rational, Rationals};
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> UniPoly<Rationals> {
        UniPoly::new(&Rationals, c.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn gcd_over_q() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = qp(&[-2, 1, 1]);
        let b = qp(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), qp(&[-1, 1]));
        assert_eq!(qp(&[1, 1]).gcd(&qp(&[2, 1])), qp(&[1]));
    }

    #[test]
    fn interpolation_recovers() {
        let p = qp(&[5, -1, 0, 2]);
        let vals: Vec<Rational> = (0..4).map(|i| p.eval(&Rational::from(i))).collect();
        assert_eq!(UniPoly::interpolate_at_naturals(&Rationals, &vals), p);
    }

    proptest! {
        #[test]
        fn roots_of_split_polynomial(roots in proptest::collection::btree_set(0u32..101, 1..6), extra in 0u32..101) {
            let fp = PrimeField::new(101).unwrap();
            let mut f = UniPoly::new(&fp, vec![1]);
            for &r in &roots {
                f = f.mul(&UniPoly::new(&fp, vec![fp.neg(&r), 1]));
            }
            // t^2 - n with n a non-residue has no roots
            let nonres = (1..101u32).find(|&n| fp.pow(&n, 50) == 100).unwrap();
            let irr = UniPoly::new(&fp, vec![fp.neg(&fp.mul(&nonres, &fp.mul(&extra.max(1), &extra.max(1)))), 0, 1]);
            let got = roots_modp(&fp, &f.mul(&irr), extra as u64);
            let oracle: Vec<u32> = (0..101).filter(|t| f.mul(&irr).eval(t) == 0).collect();
            prop_assert_eq!(&got, &oracle);
            prop_assert_eq!(got, roots.into_iter().collect::<Vec<_>>());
        }
    }
}
