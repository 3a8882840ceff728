//! Exhaustive scans of `Gr(k, F_p^n)` by RREF shape.
//!
//! Every `k`-dimensional subspace has a unique RREF basis, determined by its pivot
//! columns and the entries to the right of each pivot that are not themselves pivot
//! columns. Work is split by pivot pattern and by the first free entries, so the
//! tasks are independent and the collected output order is fixed.

use rayon::prelude::*;

use super::{PlaneFamily, PlanesError};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{PrimeField, Rationals};

/// `[n choose k]_q`, the number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn pivot_patterns(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut cur, &mut out);
    }
    out
}

#[derive(Debug, Clone)]
pub struct GrassmannianScan {
    pub prime: u32,
    pub ambient: usize,
    pub dim: usize,
    /// Number of RREF matrices examined.
    pub visited: u64,
    pub matches: Vec<Subspace<PrimeField>>,
}

struct Task {
    pivots: Vec<usize>,
    /// flat positions `row * n + col` of free entries
    free: Vec<usize>,
    prefix: Vec<u32>,
}

/// Stream every `k`-dimensional subspace of `F_p^n` through `pred` (which sees the flat
/// row-major RREF basis) and collect those accepted.
pub fn scan_grassmannian<P>(fp: &PrimeField, n: usize, k: usize, pred: P) -> GrassmannianScan
where
    P: Fn(&[u32]) -> bool + Sync,
{
    let p = fp.modulus();
    let mut tasks = Vec::new();
    for pivots in pivot_patterns(n, k) {
        let mut free = Vec::new();
        for (r, &c) in pivots.iter().enumerate() {
            for j in c + 1..n {
                if !pivots.contains(&j) {
                    free.push(r * n + j);
                }
            }
        }
        let split = free.len().min(2);
        let count = (p as usize).pow(split as u32);
        for t in 0..count {
            let mut prefix = Vec::with_capacity(split);
            let mut x = t;
            for _ in 0..split {
                prefix.push((x % p as usize) as u32);
                x /= p as usize;
            }
            tasks.push(Task {
                pivots: pivots.clone(),
                free: free.clone(),
                prefix,
            });
        }
    }
    let results: Vec<(u64, Vec<Vec<u32>>)> = tasks
        .par_iter()
        .map(|task| {
            let mut buf = vec![0u32; k * n];
            for (r, &c) in task.pivots.iter().enumerate() {
                buf[r * n + c] = 1;
            }
            for (i, &v) in task.prefix.iter().enumerate() {
                buf[task.free[i]] = v;
            }
            let rest = &task.free[task.prefix.len()..];
            let mut visited = 0u64;
            let mut found = Vec::new();
            loop {
                visited += 1;
                if pred(&buf) {
                    found.push(buf.clone());
                }
                // odometer over the remaining free entries
                let mut i = 0;
                loop {
                    if i == rest.len() {
                        return (visited, found);
                    }
                    let pos = rest[i];
                    buf[pos] += 1;
                    if buf[pos] < p {
                        break;
                    }
                    buf[pos] = 0;
                    i += 1;
                }
            }
        })
        .collect();
    let mut visited = 0;
    let mut matches = Vec::new();
    for (v, found) in results {
        visited += v;
        for flat in found {
            let rows = flat.chunks(n).map(|c| c.to_vec()).collect();
            matches.push(Subspace::from_matrix(&Matrix::from_rows(fp, n, rows)));
        }
    }
    GrassmannianScan {
        prime: p,
        ambient: n,
        dim: k,
        visited,
        matches,
    }
}

/// Rank of a small row-major matrix mod `p`, destroying it.
pub(crate) fn small_rank(m: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = mod_inv(m[r * cols + c], p);
        for i in r + 1..rows {
            let f = m[i * cols + c] * inv % p;
            if f == 0 {
                continue;
            }
            for j in c..cols {
                m[i * cols + j] = (m[i * cols + j] + (p - f) * m[r * cols + j]) % p;
            }
        }
        r += 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Tests whether a `k`-space meets each of the fixed subspaces nontrivially:
/// `dim(U ∩ Λ) ≥ 1` iff `rank(N_Λ · U^T) < k` where the rows of `N_Λ` cut out `Λ`.
struct MeetsAll {
    p: u64,
    n: usize,
    k: usize,
    anns: Vec<(Vec<u64>, usize)>,
}

impl MeetsAll {
    fn new(fp: &PrimeField, n: usize, k: usize, members: &[Subspace<PrimeField>]) -> Self {
        let anns = members
            .iter()
            .map(|m| {
                let a = m.annihilator();
                let flat = (0..a.rows())
                    .flat_map(|r| a.row(r).iter().map(|&x| x as u64).collect::<Vec<_>>())
                    .collect();
                (flat, a.rows())
            })
            .collect();
        MeetsAll {
            p: fp.modulus() as u64,
            n,
            k,
            anns,
        }
    }

    fn test(&self, w: &[u32]) -> bool {
        let (n, k, p) = (self.n, self.k, self.p);
        let mut prod = [0u64; 64];
        self.anns.iter().all(|(ann, r)| {
            if *r == 0 {
                return true;
            }
            for i in 0..*r {
                for j in 0..k {
                    let mut acc = 0u64;
                    for c in 0..n {
                        acc = (acc + ann[i * n + c] * w[j * n + c] as u64) % p;
                    }
                    prod[i * k + j] = acc;
                }
            }
            small_rank(&mut prod[..r * k], *r, k, p) < k
        })
    }
}

/// All `k`-dimensional subspaces of `F_p^n` meeting every given subspace nontrivially.
pub fn incident_subspaces_modp(members: &[Subspace<PrimeField>], n: usize, k: usize, fp: &PrimeField) -> GrassmannianScan {
    assert!(n * k <= 64);
    let t = MeetsAll::new(fp, n, k, members);
    scan_grassmannian(fp, n, k, |w| t.test(w))
}

fn prime(p: u32) -> Result<PrimeField, PlanesError> {
    PrimeField::new(p).map_err(|_| PlanesError::NotPrime(p))
}

/// Every plane of `P(F_p^n)` incident to all members of the reduced family.
pub fn enumerate_incident_planes_modp(t: &PlaneFamily<Rationals>, p: u32) -> Result<GrassmannianScan, PlanesError> {
    let fp = prime(p)?;
    let tp = t.reduce_mod(&fp)?;
    Ok(incident_subspaces_modp(tp.members(), t.ambient(), 3, &fp))
}

/// Every line of `P^5(F_p)` meeting all members of the reduced family.
pub fn enumerate_incident_lines_modp(t: &PlaneFamily<Rationals>, p: u32) -> Result<GrassmannianScan, PlanesError> {
    if t.ambient() != 6 {
        return Err(PlanesError::WrongAmbient {
            expected: 6,
            got: t.ambient(),
        });
    }
    let fp = prime(p)?;
    let tp = t.reduce_mod(&fp)?;
    Ok(incident_subspaces_modp(tp.members(), 6, 2, &fp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planes::{fano_family, fano_restricted};
    use std::collections::BTreeSet;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(7, 3, 2), 11811);
        assert_eq!(gaussian_binomial(7, 3, 3), 925771);
        assert_eq!(gaussian_binomial(6, 3, 2), 1395);
        assert_eq!(gaussian_binomial(6, 2, 2), 651);
        assert_eq!(gaussian_binomial(4, 0, 5), 1);
        assert_eq!(gaussian_binomial(3, 4, 5), 0);
    }

    #[test]
    fn visited_counts_match_formula() {
        for p in [2u32, 3, 5] {
            let fp = PrimeField::new(p).unwrap();
            for n in 1..=5 {
                for k in 0..=n {
                    let s = scan_grassmannian(&fp, n, k, |_| true);
                    assert_eq!(s.visited as u128, gaussian_binomial(n, k, p as u64), "n={n} k={k} p={p}");
                    let distinct: BTreeSet<Vec<Vec<u32>>> = s.matches.iter().map(|m| m.basis_rows()).collect();
                    assert_eq!(distinct.len(), s.matches.len());
                }
            }
        }
    }

    #[test]
    fn brute_force_plane_count_f2() {
        // every 2-dim subspace of F_2^4 as the span of a pair of distinct nonzero vectors
        let fp = PrimeField::new(2).unwrap();
        let mut seen = BTreeSet::new();
        for a in 1u32..16 {
            for b in 1u32..16 {
                if a == b {
                    continue;
                }
                let v = |x: u32| (0..4).map(|i| (x >> i) & 1).collect::<Vec<u32>>();
                seen.insert(Subspace::span(&fp, 4, vec![v(a), v(b)]).basis_rows());
            }
        }
        let s = scan_grassmannian(&fp, 4, 2, |_| true);
        let got: BTreeSet<_> = s.matches.iter().map(|m| m.basis_rows()).collect();
        assert_eq!(got, seen);
    }

    #[test]
    fn fano_is_complete_mod_two() {
        let s = enumerate_incident_planes_modp(&fano_family(), 2).unwrap();
        assert_eq!(s.visited, 11811);
        let fp = PrimeField::new(2).unwrap();
        let expect: BTreeSet<_> = fano_family().members().iter().map(|m| m.reduce_mod(&fp).basis_rows()).collect();
        let got: BTreeSet<_> = s.matches.iter().map(|m| m.basis_rows()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn three_lines_mod_two() {
        let s = enumerate_incident_lines_modp(&fano_restricted(4), 2).unwrap();
        let fp = PrimeField::new(2).unwrap();
        let expect: BTreeSet<_> = [[0usize, 3], [1, 4], [2, 5]]
            .iter()
            .map(|ix| Subspace::coordinate(&fp, 6, ix).basis_rows())
            .collect();
        let got: BTreeSet<_> = s.matches.iter().map(|m| m.basis_rows()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn one_plane_cell_count() {
        // planes missing span(e3,e4,e5) are exactly the cell with pivots (0,1,2)
        let t = PlaneFamily::new(6, vec![Subspace::coordinate(&Rationals, 6, &[3, 4, 5])]).unwrap();
        let s = enumerate_incident_planes_modp(&t, 2).unwrap();
        let cells: u128 = pivot_patterns(6, 3)
            .iter()
            .filter(|pv| pv.as_slice() != [0, 1, 2])
            .map(|pv| {
                let free: usize = pv.iter().enumerate().map(|(r, &c)| 6 - c - 1 - (2 - r)).sum();
                1u128 << free
            })
            .sum();
        assert_eq!(s.matches.len() as u128, cells);
        assert_eq!(cells, 883);
    }

    #[test]
    fn empty_family_gives_all_lines() {
        let t = PlaneFamily::new(6, vec![]).unwrap();
        let s = enumerate_incident_lines_modp(&t, 3).unwrap();
        assert_eq!(s.matches.len() as u128, gaussian_binomial(6, 2, 3));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(
            enumerate_incident_planes_modp(&fano_family(), 4).unwrap_err(),
            PlanesError::NotPrime(4)
        );
    }
}
