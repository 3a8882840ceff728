//! Singular points of `C_{W,A}` coming from other members of `Θ_A`.

use serde::Serialize;

use super::{frame_coordinates, CurveEquation, CurveError};
use crate::lagrangian::{f_of, s_w_space, LagrangianSubspace};
use crate::linalg::{proportional, Subspace};
use crate::poly::tangent_cone;
use crate::scalars::{Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    /// Frame coordinates of `p`.
    pub point: Vec<Rational>,
    pub on_curve: bool,
    pub multiplicity: usize,
    pub cusp: bool,
    pub n_p: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub points: Vec<PointRecord>,
    /// `ℓ_1..ℓ_4`.
    pub tallies: [usize; 4],
    /// Number of irreducible components, as supplied by the caller.
    pub components: usize,
}

fn chart_at(x: &[Rational]) -> Vec<Vec<Rational>> {
    let pivot = x.iter().position(|c| !c.is_zero()).expect("nonzero point");
    (0..3)
        .filter(|&i| i != pivot)
        .map(|i| (0..3).map(|j| Rational::from((i == j) as i64)).collect())
        .collect()
}

/// Check the implications relating `n_p`, multiplicity and cusps, then tally.
pub fn check_records(points: Vec<PointRecord>, components: usize) -> Result<SingularityReport, CurveError> {
    let mut tallies = [0; 4];
    for r in &points {
        let bad = |why: &str| Err(CurveError::InternalInconsistency(format!("point {:?}: {why}", r.point)));
        if r.n_p > 4 {
            return bad(&format!("n_p = {} exceeds 4", r.n_p));
        }
        if r.n_p == 0 {
            continue;
        }
        if !r.on_curve {
            return bad("n_p > 0 but the point is off the curve");
        }
        if r.multiplicity < 2 {
            return bad("smooth point of the curve");
        }
        if r.n_p == 2 && !r.cusp && r.multiplicity < 3 {
            return bad("n_p = 2 without a cusp or a triple point");
        }
        if r.n_p >= 3 && r.multiplicity < 3 {
            return bad("n_p ≥ 3 with multiplicity 2");
        }
        tallies[r.n_p - 1] += 1;
    }
    Ok(SingularityReport {
        points,
        tallies,
        components,
    })
}

/// Records for the points `P(W ∩ W′)`, `W′ ∈ members ∖ {W}`. Members not meeting `W`
/// in exactly a point are skipped.
pub fn singularity_report(
    eq: &CurveEquation,
    w: &Subspace<Rationals>,
    members: &[Subspace<Rationals>],
    components: usize,
) -> Result<SingularityReport, CurveError> {
    let c = eq.curve()?;
    let mut groups: Vec<(Vec<Rational>, usize)> = Vec::new();
    for m in members {
        if m == w {
            continue;
        }
        let meet = w.intersect(m);
        if meet.dim() != 1 {
            continue;
        }
        let x = frame_coordinates(&eq.frame, &meet.basis_rows()[0])
            .ok_or_else(|| CurveError::BadFrame("frame does not span W".into()))?;
        match groups.iter_mut().find(|(y, _)| proportional(&Rationals, y, &x)) {
            Some(g) => g.1 += 1,
            None => groups.push((x, 1)),
        }
    }
    let mut records = Vec::new();
    for (x, n_p) in groups {
        let tc = tangent_cone(c, &x, &chart_at(&x))?;
        records.push(PointRecord {
            on_curve: tc.multiplicity > 0,
            multiplicity: tc.multiplicity,
            cusp: tc.is_cusp_like(),
            n_p,
            point: x,
        });
    }
    check_records(records, components)
}

/// `[v] ∈ B(W, A)`: either `v` lies on another known member of `Θ_A`, or
/// `dim(A ∩ F_v ∩ S_W) ≥ 2`.
pub fn b_locus_member(
    a: &LagrangianSubspace,
    w: &Subspace<Rationals>,
    members: &[Subspace<Rationals>],
    v: &[Rational],
) -> Result<bool, CurveError> {
    if !w.contains(v) || v.iter().all(|x| x.is_zero()) {
        return Err(CurveError::BadFrame("v is not a point of P(W)".into()));
    }
    if members.iter().any(|m| m != w && m.contains(v)) {
        return Ok(true);
    }
    let fv = f_of(&Rationals, v)?;
    Ok(a.space().intersect(fv.space()).intersect(&s_w_space(w)).dim() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::curve_equation;
    use crate::curves::tests::two_plane_lagrangian;
    use crate::poly::MultiPoly;

    fn record(n_p: usize, m: usize, cusp: bool) -> PointRecord {
        PointRecord {
            point: vec![Rational::one(), Rational::zero(), Rational::zero()],
            on_curve: m > 0,
            multiplicity: m,
            cusp,
            n_p,
        }
    }

    #[test]
    fn tripwires() {
        assert!(matches!(check_records(vec![record(5, 6, false)], 1), Err(CurveError::InternalInconsistency(_))));
        assert!(check_records(vec![record(1, 1, false)], 1).is_err());
        assert!(check_records(vec![record(2, 2, false)], 1).is_err());
        assert!(check_records(vec![record(3, 2, true)], 1).is_err());
        let ok = check_records(vec![record(1, 2, false), record(2, 2, true), record(4, 3, false)], 2).unwrap();
        assert_eq!(ok.tallies, [1, 1, 0, 1]);
    }

    #[test]
    fn cusp_local_model() {
        // x1^2 x0 - x2^3 at [1:0:0]
        let c = MultiPoly::from_i64_terms(3, &[(&[1, 2, 0], 1), (&[0, 0, 3], -1)]);
        let x = vec![Rational::one(), Rational::zero(), Rational::zero()];
        let tc = tangent_cone(&c, &x, &chart_at(&x)).unwrap();
        assert_eq!(tc.multiplicity, 2);
        assert!(tc.is_cusp_like());
    }

    #[test]
    fn report_for_two_planes() {
        let (a, t) = two_plane_lagrangian(2);
        let w = &t.members()[0];
        let eq = curve_equation(&a, w).unwrap();
        let rep = singularity_report(&eq, w, t.members(), 1).unwrap();
        assert_eq!(rep.points.len(), 1);
        assert_eq!(rep.points[0].n_p, 1);
        assert!(rep.points[0].multiplicity >= 2);
        assert_eq!(rep.tallies, [1, 0, 0, 0]);
    }

    #[test]
    fn b_locus_clauses() {
        let (a, t) = two_plane_lagrangian(4);
        let (w, w2) = (&t.members()[0], &t.members()[1]);
        let p = w.intersect(w2).basis_rows().remove(0);
        assert!(b_locus_member(&a, w, t.members(), &p).unwrap());
        let generic: Vec<Rational> = {
            let rows = w.basis_rows();
            (0..6).map(|i| &(&rows[0][i] + &(&Rational::from(3) * &rows[1][i])) + &(&Rational::from(-5) * &rows[2][i])).collect()
        };
        assert!(!b_locus_member(&a, w, t.members(), &generic).unwrap());
        assert!(b_locus_member(&a, w, t.members(), &vec![Rational::zero(); 6]).is_err());
    }
}
