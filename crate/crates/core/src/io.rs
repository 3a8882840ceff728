//! JSON file formats. Scalars are decimal strings `"n"` or `"n/d"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curves::CurveEquation;
use crate::epw::EpwEquation;
use crate::error::Error;
use crate::lagrangian::LagrangianSubspace;
use crate::linalg::Subspace;
use crate::planes::PlaneFamily;
use crate::poly::MultiPoly;
use crate::scalars::{Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneEntry {
    pub basis: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneFamilyFile {
    pub ambient: usize,
    pub planes: Vec<PlaneEntry>,
}

impl PlaneFamilyFile {
    pub fn from_family(t: &PlaneFamily) -> Self {
        PlaneFamilyFile {
            ambient: t.ambient(),
            planes: t.members().iter().map(|m| PlaneEntry { basis: m.basis_rows() }).collect(),
        }
    }

    /// Validates dimensions; bases are brought to RREF.
    pub fn to_family(&self) -> Result<PlaneFamily, Error> {
        if !(self.ambient == 6 || self.ambient == 7) {
            return Err(Error::Format(format!("ambient must be 6 or 7, got {}", self.ambient)));
        }
        let mut members = Vec::with_capacity(self.planes.len());
        for (i, p) in self.planes.iter().enumerate() {
            if p.basis.iter().any(|r| r.len() != self.ambient) {
                return Err(Error::Format(format!("plane {i}: rows must have length {}", self.ambient)));
            }
            members.push(Subspace::span(&Rationals, self.ambient, p.basis.clone()));
        }
        Ok(PlaneFamily::new(self.ambient, members)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagrangianFile {
    pub ambient: usize,
    pub basis: Vec<Vec<Rational>>,
    /// Known members of `Θ_A`, as plane bases.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<PlaneEntry>,
}

impl LagrangianFile {
    pub fn from_lagrangian(a: &LagrangianSubspace, members: &[Subspace<Rationals>]) -> Self {
        LagrangianFile {
            ambient: 6,
            basis: a.space().basis_rows(),
            members: members.iter().map(|m| PlaneEntry { basis: m.basis_rows() }).collect(),
        }
    }

    pub fn to_lagrangian(&self) -> Result<LagrangianSubspace, Error> {
        if self.ambient != 6 {
            return Err(Error::Format(format!("ambient must be 6, got {}", self.ambient)));
        }
        if self.basis.iter().any(|r| r.len() != 20) {
            return Err(Error::Format("basis rows must have length 20".into()));
        }
        Ok(LagrangianSubspace::new(Subspace::span(&Rationals, 20, self.basis.clone()))?)
    }

    pub fn member_spaces(&self) -> Result<Vec<Subspace<Rationals>>, Error> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.basis.iter().any(|r| r.len() != 6) {
                    return Err(Error::Format(format!("member {i}: rows must have length 6")));
                }
                let w = Subspace::span(&Rationals, 6, p.basis.clone());
                if w.dim() != 3 {
                    return Err(Error::Format(format!("member {i} has dimension {}", w.dim())));
                }
                Ok(w)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: Vec<u16>,
    pub coeff: Rational,
}

/// Terms in increasing graded-lex order.
pub fn poly_terms(f: &MultiPoly) -> Vec<Term> {
    f.terms()
        .map(|(m, c)| Term {
            exp: m.0.clone(),
            coeff: c.clone(),
        })
        .collect()
}

pub fn poly_from_terms(nvars: usize, terms: &[Term]) -> Result<MultiPoly, Error> {
    if terms.iter().any(|t| t.exp.len() != nvars) {
        return Err(Error::Format(format!("exponent vectors must have length {nvars}")));
    }
    Ok(MultiPoly::from_terms(
        &Rationals,
        nvars,
        terms.iter().map(|t| (t.exp.clone(), t.coeff.clone())),
    ))
}

pub fn epw_json(eq: &EpwEquation) -> Value {
    json!({
        "poly": eq.y.as_ref().map(poly_terms),
        "identically_zero": eq.is_identically_zero(),
        "hyperplane": eq.hyperplane,
        "cross_check_hyperplane": eq.cross_check,
        "membership": eq.membership,
    })
}

pub fn curve_json(eq: &CurveEquation) -> Value {
    json!({
        "plane_marker": eq.is_plane(),
        "poly": eq.c.as_ref().map(poly_terms),
        "frame": eq.frame,
        "oracle_check": eq.check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planes::fano_family;

    #[test]
    fn family_round_trip() {
        let t = fano_family();
        let s = serde_json::to_string(&PlaneFamilyFile::from_family(&t)).unwrap();
        let back: PlaneFamilyFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_family().unwrap().members(), t.members());
    }

    #[test]
    fn non_rref_input_is_canonicalized() {
        let s = r#"{"ambient": 6, "planes": [{"basis": [["2","0","0","0","0","0"],["1","1","0","0","0","0"],["0","0","1/2","0","0","0"]]}]}"#;
        let f: PlaneFamilyFile = serde_json::from_str(s).unwrap();
        let t = f.to_family().unwrap();
        assert_eq!(t.members()[0], Subspace::coordinate(&Rationals, 6, &[0, 1, 2]));
        let bad = r#"{"ambient": 5, "planes": []}"#;
        let f: PlaneFamilyFile = serde_json::from_str(bad).unwrap();
        assert!(matches!(f.to_family(), Err(Error::Format(_))));
    }

    #[test]
    fn poly_round_trip() {
        let f = MultiPoly::from_i64_terms(3, &[(&[2, 0, 0], 3), (&[0, 1, 1], -1)]);
        let terms = poly_terms(&f);
        assert_eq!(terms[0].exp, vec![0, 1, 1]);
        let s = serde_json::to_string(&terms).unwrap();
        assert!(s.contains(r#""coeff":"-1""#));
        let back: Vec<Term> = serde_json::from_str(&s).unwrap();
        assert_eq!(poly_from_terms(3, &back).unwrap(), f);
    }

    #[test]
    fn lagrangian_round_trip() {
        let a = crate::lagrangian::random_lagrangian(7);
        let file = LagrangianFile::from_lagrangian(&a, &[]);
        let s = serde_json::to_string(&file).unwrap();
        assert!(!s.contains("members"));
        let back: LagrangianFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_lagrangian().unwrap(), a);
    }
}
