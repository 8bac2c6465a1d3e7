//! Relay test along lattice covers and the relay graph over inhabited faces.

mod export;

pub use export::to_dot;

use std::cell::RefCell;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Sign;
use crate::equilibria::{EquilibriumSolver, FaceEquilibrium, FaceSolve};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::network::{extract_network, minimal_siphons, siphon_lattice, Cover, SiphonLattice};
use crate::stability::{invasion_number, las_test, matrix_hurwitz, tangential_block, LasVerdict};
use crate::algebra::HurwitzVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RelayVerdict {
    RelayHolds,
    Undecided,
    SuccessorExistsUnstable,
    NoSuccessor,
    /// The transversal abscissa is exactly zero: a threshold point.
    Boundary,
    NoInvasion,
    /// The upper face hosts no existing equilibrium.
    NoResident,
}

/// The three-valued output of the reference procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StrictVerdict {
    RelayHolds,
    NoRelay,
    Undecided,
}

impl RelayVerdict {
    pub fn strict(self) -> StrictVerdict {
        match self {
            RelayVerdict::RelayHolds => StrictVerdict::RelayHolds,
            RelayVerdict::Undecided => StrictVerdict::Undecided,
            _ => StrictVerdict::NoRelay,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessorEvidence {
    pub label: String,
    pub coords: Vec<String>,
    pub las: LasVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidentEvidence {
    pub label: String,
    pub coords: Vec<String>,
    pub abscissa_sign: Option<Sign>,
    pub invasion_value: Option<String>,
    /// Hurwitz verdict of the Jacobian restricted to the non-invader variables.
    pub tangential_hurwitz: Option<HurwitzVerdict>,
    pub successors: Vec<SuccessorEvidence>,
    pub verdict: RelayVerdict,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelayReport {
    pub upper: Vec<String>,
    pub lower: Vec<String>,
    pub sigma: Vec<String>,
    pub verdict: RelayVerdict,
    pub strict: StrictVerdict,
    pub residents: Vec<ResidentEvidence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeClass {
    /// The resident has exactly one unstable transversal direction.
    Full,
    /// Several blocks invade the resident at once.
    Multiple,
    /// A Lotka-Volterra block invades a resident that already hosts another
    /// population, switching between equilibrium branches.
    CrossBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeEquilibrium {
    pub label: String,
    pub coords: Vec<String>,
    pub las: LasVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelayNode {
    pub face: Vec<String>,
    pub equilibria: Vec<NodeEquilibrium>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelayEdge {
    pub upper: Vec<String>,
    pub lower: Vec<String>,
    pub sigma: Vec<String>,
    pub resident: String,
    pub successors: Vec<String>,
    pub invasion_value: Option<String>,
    pub verdict: RelayVerdict,
    pub class: EdgeClass,
    /// The tangential block is Hurwitz, so the relay-pair identity applies.
    pub identity_guaranteed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelayGraph {
    pub nodes: Vec<RelayNode>,
    pub edges: Vec<RelayEdge>,
    /// Covers out of inhabited faces along which nothing invades.
    pub quiet: Vec<RelayEdge>,
}

/// Face solves and lattice for one instantiated model, shared across covers.
pub struct RelayContext {
    pub solver: EquilibriumSolver,
    pub lattice: SiphonLattice,
    lv: Vec<Vec<usize>>,
    faces: RefCell<BTreeMap<Vec<usize>, FaceSolve>>,
}

fn show(e: &FaceEquilibrium) -> Vec<String> {
    e.coords.iter().map(|c| c.to_string()).collect()
}

impl RelayContext {
    pub fn new(m: &Model) -> Result<Self> {
        let rn = extract_network(m)?;
        let mins = minimal_siphons(&rn);
        let lv = mins.iter().filter(|s| s.lotka_volterra).map(|s| s.members.clone()).collect();
        let lattice = siphon_lattice(&rn, &mins);
        Ok(RelayContext { solver: EquilibriumSolver::new(m)?, lattice, lv, faces: RefCell::new(BTreeMap::new()) })
    }

    pub fn model(&self) -> &Model {
        &self.solver.model
    }

    pub fn face(&self, face: &[usize]) -> FaceSolve {
        if let Some(f) = self.faces.borrow().get(face) {
            return f.clone();
        }
        let solved = self.solver.face_equilibria(face).unwrap_or_else(|_| FaceSolve {
            face: face.to_vec(),
            equilibria: Vec::new(),
            undecided: Vec::new(),
        });
        self.faces.borrow_mut().insert(face.to_vec(), solved.clone());
        solved
    }

    /// Equilibria of a face that pass the positivity check.
    pub fn residents(&self, face: &[usize]) -> Vec<FaceEquilibrium> {
        self.face(face).equilibria.into_iter().filter(|e| self.solver.positivity_check(e).exists).collect()
    }

    fn names(&self, vars: &[usize]) -> Vec<String> {
        vars.iter().map(|&v| self.model().variables[v].clone()).collect()
    }

    fn test_resident(&self, cover: &Cover, e: &FaceEquilibrium) -> ResidentEvidence {
        let m = self.model();
        let sigma = &cover.sigma;
        let tangential_hurwitz = tangential_block(m, sigma, e).ok().and_then(|t| matrix_hurwitz(&t));
        let mut ev = ResidentEvidence {
            label: e.label(m),
            coords: show(e),
            abscissa_sign: None,
            invasion_value: None,
            tangential_hurwitz,
            successors: Vec::new(),
            verdict: RelayVerdict::Undecided,
            note: None,
        };
        match invasion_number(m, sigma, e, None) {
            Ok(r) => {
                ev.abscissa_sign = Some(r.abscissa_sign);
                ev.invasion_value = r.value.map(|v| v.to_string());
            }
            Err(err) => {
                ev.note = Some(err.to_string());
                return ev;
            }
        }
        match ev.abscissa_sign {
            Some(Sign::Negative) => {
                ev.verdict = RelayVerdict::NoInvasion;
                return ev;
            }
            Some(Sign::Zero) => {
                ev.verdict = RelayVerdict::Boundary;
                return ev;
            }
            _ => {}
        }
        let lower = self.face(&cover.lower);
        for s in &lower.equilibria {
            if !self.solver.positivity_check(s).exists || !sigma.iter().all(|&v| s.coords[v].sign() == Sign::Positive) {
                continue;
            }
            ev.successors.push(SuccessorEvidence { label: s.label(m), coords: show(s), las: las_test(m, s).verdict });
        }
        ev.verdict = if ev.successors.iter().any(|s| s.las == LasVerdict::LAS) {
            RelayVerdict::RelayHolds
        } else if ev.successors.iter().any(|s| s.las == LasVerdict::Undecided) {
            RelayVerdict::Undecided
        } else if !ev.successors.is_empty() {
            RelayVerdict::SuccessorExistsUnstable
        } else if !lower.undecided.is_empty() {
            ev.note = Some("successor face has undecided branches".into());
            RelayVerdict::Undecided
        } else {
            RelayVerdict::NoSuccessor
        };
        ev
    }

    /// Relay test from the face of `upper` to the face of `lower`.
    pub fn test_cover(&self, upper: &[usize], lower: &[usize]) -> Result<RelayReport> {
        let mut upper = upper.to_vec();
        let mut lower = lower.to_vec();
        upper.sort_unstable();
        lower.sort_unstable();
        let m = self.model();
        let Some(cover) = self.lattice.find_cover(&upper, &lower).cloned() else {
            return Err(Error::BadCover(m.format_set(&upper), m.format_set(&lower)));
        };
        let residents: Vec<ResidentEvidence> = self.residents(&upper).iter().map(|e| self.test_resident(&cover, e)).collect();
        let verdict = residents.iter().map(|r| r.verdict).min().unwrap_or(RelayVerdict::NoResident);
        Ok(RelayReport {
            upper: self.names(&upper),
            lower: self.names(&lower),
            sigma: self.names(&cover.sigma),
            verdict,
            strict: verdict.strict(),
            residents,
        })
    }

    pub fn graph(&self) -> RelayGraph {
        let m = self.model();
        let mut nodes = Vec::new();
        for face in self.lattice.faces() {
            let res = self.residents(&face);
            if res.is_empty() {
                continue;
            }
            let equilibria = res
                .iter()
                .map(|e| NodeEquilibrium { label: e.label(m), coords: show(e), las: las_test(m, e).verdict })
                .collect();
            nodes.push(RelayNode { face: self.names(&face), equilibria });
        }
        let mut edges = Vec::new();
        let mut quiet = Vec::new();
        for face in self.lattice.faces() {
            let covers: Vec<Cover> = self.lattice.covers_from(&face).cloned().collect();
            for e in self.residents(&face) {
                let tests: Vec<(Cover, ResidentEvidence)> = covers.iter().map(|c| (c.clone(), self.test_resident(c, &e))).collect();
                let invaded = tests.iter().filter(|(_, r)| r.abscissa_sign == Some(Sign::Positive)).count();
                for (c, r) in tests {
                    let class = if self.lv.contains(&c.sigma) && face != self.lattice.dfe {
                        EdgeClass::CrossBranch
                    } else if invaded == 1 {
                        EdgeClass::Full
                    } else {
                        EdgeClass::Multiple
                    };
                    let edge = RelayEdge {
                        upper: self.names(&c.upper),
                        lower: self.names(&c.lower),
                        sigma: self.names(&c.sigma),
                        resident: r.label.clone(),
                        successors: r.successors.iter().map(|s| s.label.clone()).collect(),
                        invasion_value: r.invasion_value.clone(),
                        verdict: r.verdict,
                        class,
                        identity_guaranteed: r.tangential_hurwitz == Some(HurwitzVerdict::Hurwitz),
                    };
                    if r.verdict == RelayVerdict::NoInvasion {
                        quiet.push(edge);
                    } else {
                        edges.push(edge);
                    }
                }
            }
        }
        RelayGraph { nodes, edges, quiet }
    }
}

/// Relay test along the cover `(sigma_prime, sigma)` at the model's parameter point.
pub fn relay_test_cover(m: &Model, sigma: &[usize], sigma_prime: &[usize]) -> Result<RelayReport> {
    RelayContext::new(m)?.test_cover(sigma, sigma_prime)
}

pub fn relay_graph(m: &Model) -> Result<RelayGraph> {
    Ok(RelayContext::new(m)?.graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::builtin::builtin_model;

    fn set(m: &Model, s: &str) -> Vec<usize> {
        m.parse_var_set(s).unwrap()
    }

    #[test]
    fn default_point_covers() {
        let m = builtin_model("osn_omega0").unwrap();
        let ctx = RelayContext::new(&m).unwrap();
        let r = ctx.test_cover(&set(&m, "W,S1,B1,S2,B2"), &set(&m, "W,S2,B2")).unwrap();
        assert_eq!(r.verdict, RelayVerdict::RelayHolds);
        let r = ctx.test_cover(&set(&m, "W,S1,B1,S2,B2"), &set(&m, "W,S1,B1")).unwrap();
        assert_eq!(r.verdict, RelayVerdict::NoInvasion);
        let r = ctx.test_cover(&set(&m, "U,W,S1,B1,S2,B2"), &set(&m, "W,S1,B1,S2,B2")).unwrap();
        assert_eq!(r.verdict, RelayVerdict::SuccessorExistsUnstable);
        assert_eq!(r.strict, StrictVerdict::NoRelay);
        assert!(matches!(ctx.test_cover(&set(&m, "W,S1,B1,S2,B2"), &set(&m, "W")), Err(Error::BadCover(..))));
    }

    #[test]
    fn graph_at_default_point() {
        let m = builtin_model("osn_omega0").unwrap();
        let g = relay_graph(&m).unwrap();
        let labels: Vec<String> = g.nodes.iter().flat_map(|n| n.equilibria.iter().map(|e| e.label.clone())).collect();
        for want in ["DFE", "gOSN", "E1g"] {
            assert!(labels.contains(&want.to_string()), "{labels:?}");
        }
        let e = g.edges.iter().find(|e| e.resident == "gOSN" && e.successors == ["E1g"]).unwrap();
        assert_eq!(e.verdict, RelayVerdict::RelayHolds);
    }

    #[test]
    fn below_threshold_only_dfe() {
        let m = builtin_model("osn_omega0").unwrap();
        let mut v = m.values.clone();
        v.insert("Lambda".into(), rat(1, 2));
        let g = relay_graph(&m.with_values(&v).unwrap()).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(g.nodes[0].equilibria[0].label, "DFE");
        assert_eq!(g.nodes[0].equilibria[0].las, LasVerdict::LAS);
        assert!(g.edges.is_empty());
    }
}
