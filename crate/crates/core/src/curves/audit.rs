//! Inequality ledger bounding `#Θ_A` through the singularities of one curve `C_{W,A}`.

use serde::Serialize;

use super::CurveError;

pub const GLOBAL_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundAudit {
    pub l: [usize; 4],
    pub s: usize,
    /// `1 + ℓ_1 + 2ℓ_2 + 3ℓ_3 + 4ℓ_4`.
    pub count_bound: usize,
    /// Cap from the case analysis on `s` and `ℓ_3 + ℓ_4`.
    pub case_cap: usize,
    pub max_theta: usize,
    /// Which of `count_bound`, `case_cap` and the global cap attains `max_theta`.
    pub binding: String,
    pub constraints: Vec<ConstraintCheck>,
    pub violated: Vec<String>,
    pub note: String,
}

impl BoundAudit {
    pub fn feasible(&self) -> bool {
        self.violated.is_empty()
    }
}

fn check(name: &str, lhs: usize, rhs: usize) -> ConstraintCheck {
    ConstraintCheck {
        name: name.to_string(),
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

fn case_cap(l: [usize; 4], s: usize) -> usize {
    let l34 = l[2] + l[3];
    match s {
        0 | 1 if l34 <= 1 => 19,
        0 | 1 => 17,
        2 => 17,
        _ => GLOBAL_CAP,
    }
}

/// Upper bound on `#Θ_A` given the tallies `ℓ_j` and the component count `s` of `C_{W,A}`.
pub fn bound_audit(l: [usize; 4], s: usize) -> Result<BoundAudit, CurveError> {
    let [l1, l2, l3, l4] = l;
    let genus = check("l1 + l2 + 3 l3 + 3 l4 <= 9 + s", l1 + l2 + 3 * l3 + 3 * l4, 9 + s);
    if !genus.holds {
        return Err(CurveError::InfeasibleInput(format!(
            "l1 + l2 + 3 l3 + 3 l4 = {} exceeds 9 + s = {}",
            genus.lhs, genus.rhs
        )));
    }
    let mut constraints = vec![genus, check("l1 + l2 + l3 + l4 <= 15", l1 + l2 + l3 + l4, 15)];
    if s == 1 && l3 + l4 == 0 {
        constraints.push(check("2 l1 + 3 l2 <= 27", 2 * l1 + 3 * l2, 27));
    }
    let count_bound = 1 + l1 + 2 * l2 + 3 * l3 + 4 * l4;
    let case_cap = case_cap(l, s);
    let max_theta = count_bound.min(case_cap).min(GLOBAL_CAP);
    let binding = if max_theta == count_bound {
        "count_bound"
    } else if max_theta == case_cap {
        "case_cap"
    } else {
        "global_cap"
    };
    let violated = constraints.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect();
    Ok(BoundAudit {
        l,
        s,
        count_bound,
        case_cap,
        max_theta,
        binding: binding.to_string(),
        constraints,
        violated,
        note: format!("s = {s} is taken as given, not verified"),
    })
}

/// Largest bound over inputs violating no constraint, with `s` fixed or ranging over
/// `1..=6`, and `ℓ_3 + ℓ_4` restricted when `l34` is given. Returns the bound and an input
/// attaining it.
pub fn maximize_bound(s: Option<usize>, l34: Option<usize>) -> (usize, BoundAudit) {
    let ss: Vec<usize> = match s {
        Some(s) => vec![s],
        None => (1..=6).collect(),
    };
    let mut best: Option<BoundAudit> = None;
    for &s in &ss {
        for l3 in 0..=5 {
            for l4 in 0..=5 {
                if l34.is_some_and(|k| l3 + l4 != k) {
                    continue;
                }
                for l1 in 0..=15 {
                    for l2 in 0..=15 {
                        let Ok(a) = bound_audit([l1, l2, l3, l4], s) else { continue };
                        if a.feasible() && best.as_ref().map_or(true, |b| a.max_theta > b.max_theta) {
                            best = Some(a);
                        }
                    }
                }
            }
        }
    }
    let best = best.expect("the zero input is feasible");
    (best.max_theta, best)
}
