//! Exact equilibria on siphon faces.
//!
//! On the face of `Z`, variables of `Z` vanish, the remaining variables of
//! the DFE siphon ("lattice residents") must be positive so their factors are
//! cancelled, and variables outside the DFE siphon may vanish, which splits
//! the computation into branches.

mod eliminate;
mod oracle;

pub use eliminate::{Branch, BranchEnd, Problem, UndecidedReason};
pub use oracle::{closed_form_oracle, e1_quadratic, ee_quadratic, e1_strain_formula};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{quad_solve, ExactScalar, MultiPoly, RatFunc, Rational, RootSet, Sign, UniPoly};
use crate::builtin::label_equilibrium;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::network::{extract_network, minimal_siphons};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Classification {
    Rational,
    /// Coordinates live in `Q(sqrt d)`; `poly` is the minimal quadratic of the
    /// keep variable and `root` the chosen root.
    QuadraticRUR { poly: String, root: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceEquilibrium {
    /// Zero set, sorted.
    pub face: Vec<usize>,
    /// Full state vector; face coordinates are zero.
    pub coords: Vec<ExactScalar>,
    pub classification: Classification,
    pub name: Option<String>,
}

impl FaceEquilibrium {
    pub fn label(&self, m: &Model) -> String {
        self.name.clone().unwrap_or_else(|| format!("E{}", m.format_set(&self.face)))
    }

    pub fn value(&self, v: usize) -> &ExactScalar {
        &self.coords[v]
    }

    /// Exact zero pattern: the face plus free variables that happen to vanish.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i].is_zero()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Undecided {
    pub reason: UndecidedReason,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceSolve {
    pub face: Vec<usize>,
    pub equilibria: Vec<FaceEquilibrium>,
    pub undecided: Vec<Undecided>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub variable: String,
    pub required: &'static str,
    pub actual: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub exists: bool,
    pub violated: Vec<Violation>,
}

/// The union of minimal siphons of a model.
pub fn dfe_siphon(m: &Model) -> Result<Vec<usize>> {
    let rn = extract_network(m)?;
    let set: BTreeSet<usize> = minimal_siphons(&rn).into_iter().flat_map(|s| s.members).collect();
    Ok(set.into_iter().collect())
}

/// The elimination problem of a face: numerators of the restricted
/// right-hand sides and the unknowns off the face.
pub fn face_problem(m: &Model, dfe: &[usize], face: &[usize]) -> (Problem, Vec<MultiPoly>, BTreeSet<usize>) {
    let n = m.n();
    let zeros: BTreeMap<usize, Rational> = face.iter().map(|&v| (v, Rational::zero())).collect();
    let eqs = m.rhs().iter().map(|r| r.num().substitute_values(&zeros)).collect();
    let unknowns: BTreeSet<usize> = (0..n).filter(|v| !face.contains(v)).collect();
    let residents = unknowns.iter().copied().filter(|v| dfe.contains(v)).collect();
    let free = unknowns.iter().copied().filter(|v| !dfe.contains(v)).collect();
    let keep = m.metadata.keep.filter(|k| unknowns.contains(k));
    (Problem { n, residents, free, keep }, eqs, unknowns)
}

/// Face solver bound to one instantiated model.
#[derive(Debug, Clone)]
pub struct EquilibriumSolver {
    pub model: Model,
    pub dfe: Vec<usize>,
    rhs: Vec<RatFunc>,
}

impl EquilibriumSolver {
    pub fn new(m: &Model) -> Result<Self> {
        let dfe = dfe_siphon(m)?;
        let model = m.instantiate()?;
        let rhs = model.rhs();
        Ok(EquilibriumSolver { model, dfe, rhs })
    }

    pub fn residents(&self, face: &[usize]) -> Vec<usize> {
        self.dfe.iter().copied().filter(|v| !face.contains(v)).collect()
    }

    /// All equilibria on the relative interior candidates of a face.
    pub fn face_equilibria(&self, face: &[usize]) -> Result<FaceSolve> {
        let mut face = face.to_vec();
        face.sort_unstable();
        let (problem, eqs, unknowns) = face_problem(&self.model, &self.dfe, &face);
        if eqs.iter().all(|e| e.is_zero()) {
            return Err(Error::DegenerateFace(self.model.format_set(&face)));
        }
        let mut out = FaceSolve { face: face.clone(), equilibria: Vec::new(), undecided: Vec::new() };
        for branch in problem.solve(eqs, unknowns) {
            self.finish_branch(&face, branch, &mut out);
        }
        Ok(out)
    }

    fn finish_branch(&self, face: &[usize], br: Branch, out: &mut FaceSolve) {
        let n = self.model.n();
        let names = self.model.symbols();
        let mut groups: Vec<(Vec<ExactScalar>, Classification)> = Vec::new();
        let seeds: Vec<(Option<(usize, ExactScalar)>, Classification)> = match &br.end {
            BranchEnd::Triangular => vec![(None, Classification::Rational)],
            BranchEnd::Degenerate(vars) => {
                out.undecided.push(Undecided {
                    reason: UndecidedReason::EliminationStall,
                    detail: format!("unconstrained {}", self.model.format_set(vars)),
                });
                return;
            }
            BranchEnd::Stall(eqs) => {
                let shown: Vec<String> = eqs.iter().map(|e| e.display_with(&names)).collect();
                out.undecided.push(Undecided { reason: UndecidedReason::EliminationStall, detail: shown.join("; ") });
                return;
            }
            BranchEnd::Univariate(u, g) => {
                let coeffs: Vec<Rational> = g.coeffs_in(*u).iter().map(|c| c.constant_value().expect("instantiated")).collect();
                let poly = UniPoly::new(coeffs).square_free();
                let mut rest = poly.clone();
                let mut seeds = Vec::new();
                for r in poly.rational_roots() {
                    rest = rest.div_rem(&UniPoly::new(vec![-r.clone(), Rational::from_integer(1.into())])).0;
                    seeds.push((Some((*u, ExactScalar::rational(r))), Classification::Rational));
                }
                match rest.degree() {
                    0 => {}
                    2 => {
                        let c = rest.coeffs();
                        let text = rest.display_in(&names[*u]);
                        if let Ok(RootSet::QuadExt { roots, .. }) = quad_solve(&c[2], &c[1], &c[0]) {
                            for r in roots {
                                let cls = Classification::QuadraticRUR { poly: text.clone(), root: r.to_string() };
                                seeds.push((Some((*u, r)), cls));
                            }
                        }
                    }
                    d => out.undecided.push(Undecided {
                        reason: UndecidedReason::DegreeOverflow(d),
                        detail: rest.display_in(&names[*u]),
                    }),
                }
                seeds
            }
        };
        for (seed, cls) in seeds {
            let mut vals: BTreeMap<usize, ExactScalar> = face.iter().map(|&v| (v, ExactScalar::zero())).collect();
            for &z in &br.zeros {
                vals.insert(z, ExactScalar::zero());
            }
            if let Some((u, x)) = seed {
                vals.insert(u, x);
            }
            let mut ok = true;
            for (v, expr) in br.subs.iter().rev() {
                match expr.evaluate_exact(&|i| vals.get(&i).cloned()) {
                    Ok(x) => {
                        vals.insert(*v, x);
                    }
                    Err(Error::MixedExtensions(..)) => {
                        out.undecided.push(Undecided { reason: UndecidedReason::MixedRadicals, detail: names[*v].clone() });
                        ok = false;
                        break;
                    }
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || vals.len() != n {
                continue;
            }
            let coords: Vec<ExactScalar> = (0..n).map(|i| vals[&i].clone()).collect();
            if self.residents(face).iter().any(|&v| coords[v].is_zero()) {
                continue;
            }
            if !self.is_equilibrium(&coords) {
                continue;
            }
            groups.push((coords, cls));
        }

        let admissible: Vec<bool> = groups.iter().map(|(c, _)| self.check_coords(face, c).exists).collect();
        let quad_ok = groups
            .iter()
            .zip(&admissible)
            .any(|((_, cls), ok)| *ok && matches!(cls, Classification::QuadraticRUR { .. }));
        for ((coords, cls), ok) in groups.into_iter().zip(admissible) {
            if quad_ok && !ok && matches!(cls, Classification::QuadraticRUR { .. }) {
                continue;
            }
            if out.equilibria.iter().any(|e| e.coords == coords) {
                continue;
            }
            let w_zero = self.model.var_index("W").map(|w| coords[w].is_zero()).unwrap_or(true);
            let name = label_equilibrium(&self.model, face, w_zero);
            out.equilibria.push(FaceEquilibrium { face: face.to_vec(), coords, classification: cls, name });
        }
    }

    /// Exact residual check of `rhs(x) = 0`.
    pub fn is_equilibrium(&self, coords: &[ExactScalar]) -> bool {
        self.rhs
            .iter()
            .all(|r| matches!(r.evaluate_exact(&|i| coords.get(i).cloned()), Ok(v) if v.is_zero()))
    }

    fn check_coords(&self, face: &[usize], coords: &[ExactScalar]) -> ExistenceVerdict {
        let residents = self.residents(face);
        let mut violated = Vec::new();
        for (i, x) in coords.iter().enumerate() {
            if face.contains(&i) {
                continue;
            }
            let s = x.sign();
            let (required, bad) = if residents.contains(&i) { (">0", s != Sign::Positive) } else { (">=0", s == Sign::Negative) };
            if bad {
                violated.push(Violation { variable: self.model.variables[i].clone(), required, actual: s });
            }
        }
        ExistenceVerdict { exists: violated.is_empty(), violated }
    }

    /// Residents strictly positive, every other off-face coordinate nonnegative.
    pub fn positivity_check(&self, e: &FaceEquilibrium) -> ExistenceVerdict {
        self.check_coords(&e.face, &e.coords)
    }

    /// Equilibria on every face of the lattice, largest siphon first, then the interior.
    pub fn all_faces(&self, faces: &[Vec<usize>]) -> Result<Vec<FaceSolve>> {
        faces.iter().map(|f| self.face_equilibria(f)).collect()
    }

    /// First equilibrium carrying `name` that exists, else the first one
    /// carrying it at all.
    pub fn find_named(&self, faces: &[Vec<usize>], name: &str) -> Result<Option<FaceEquilibrium>> {
        let mut fallback = None;
        for f in faces {
            for e in self.face_equilibria(f)?.equilibria.into_iter().filter(|e| e.name.as_deref() == Some(name)) {
                if self.positivity_check(&e).exists {
                    return Ok(Some(e));
                }
                fallback.get_or_insert(e);
            }
        }
        Ok(fallback)
    }
}

/// Elimination with parameters left symbolic.
pub fn symbolic_face_branches(m: &Model, face: &[usize]) -> Result<Vec<Branch>> {
    let dfe = dfe_siphon(m)?;
    let (problem, eqs, unknowns) = face_problem(m, &dfe, face);
    Ok(problem.solve(eqs, unknowns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::builtin::builtin_model;

    fn face(m: &Model, names: &[&str]) -> Vec<usize> {
        m.parse_var_set(&names.join(",")).unwrap()
    }

    #[test]
    fn dfe_and_gosn_at_default_point() {
        let m = builtin_model("osn_omega0").unwrap();
        let s = EquilibriumSolver::new(&m).unwrap();
        let dfe = s.face_equilibria(&face(&m, &["U", "W", "S1", "B1", "S2", "B2"])).unwrap();
        assert_eq!(dfe.equilibria.len(), 1);
        assert_eq!(dfe.equilibria[0].coords[0], ExactScalar::rational(rat(2, 1)));
        assert_eq!(dfe.equilibria[0].name.as_deref(), Some("DFE"));
        let g = s.face_equilibria(&face(&m, &["W", "S1", "B1", "S2", "B2"])).unwrap();
        assert_eq!(g.equilibria.len(), 1);
        assert_eq!(g.equilibria[0].coords[..2], [ExactScalar::from_int(1), ExactScalar::from_int(1)]);
        let rfe = s.face_equilibria(&face(&m, &["S1", "B1", "S2", "B2"])).unwrap();
        assert_eq!(rfe.equilibria.len(), 1);
        assert!(!s.positivity_check(&rfe.equilibria[0]).exists);
    }

    #[test]
    fn omega_pos_e1_is_quadratic() {
        let m = builtin_model("osn_omega_pos").unwrap();
        let s = EquilibriumSolver::new(&m).unwrap();
        let e1 = s.face_equilibria(&face(&m, &["S2", "B2"])).unwrap();
        assert!(e1.undecided.is_empty(), "{:?}", e1.undecided);
        assert!(!e1.equilibria.is_empty());
        assert!(e1.equilibria.iter().all(|e| matches!(e.classification, Classification::QuadraticRUR { .. })));
        let rf = s.face_equilibria(&face(&m, &["S1", "B1", "S2", "B2"])).unwrap();
        let names: Vec<_> = rf.equilibria.iter().map(|e| e.name.clone().unwrap()).collect();
        assert_eq!(names, vec!["gOSN", "RFE"]);
    }
}
