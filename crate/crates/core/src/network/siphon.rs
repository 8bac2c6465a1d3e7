use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use super::ReactionNetwork;
use crate::algebra::Rational;
use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Siphon {
    /// Sorted species indices.
    pub members: Vec<usize>,
    pub minimal: bool,
    /// Every member factors out of its own right-hand side.
    pub lotka_volterra: bool,
    /// The union of all minimal siphons.
    pub dfe: bool,
    /// Every DFE-siphon species off the face keeps a production reaction
    /// whose reactants all live off the face.
    pub inhabited_candidate: bool,
}

/// Every reaction producing a member consumes a member.
pub fn is_siphon(rn: &ReactionNetwork, set: &[usize]) -> bool {
    violating_reaction(rn, set).is_none()
}

fn violating_reaction(rn: &ReactionNetwork, set: &[usize]) -> Option<usize> {
    rn.reactions
        .iter()
        .position(|r| set.iter().any(|&s| r.produces(s)) && !r.consumes_any(set))
}

/// All inclusion-minimal siphons in canonical order (size, then members).
///
/// Starting from each singleton, a reaction that breaks the siphon property
/// must be repaired by adding one of its reactants; every minimal siphon
/// containing the seed is reached along some branch.
pub fn minimal_siphons(rn: &ReactionNetwork) -> Vec<Siphon> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in 0..rn.n_species() {
        let mut stack = vec![vec![s]];
        while let Some(set) = stack.pop() {
            if !seen.insert(set.clone()) {
                continue;
            }
            if found.iter().any(|f| f.iter().all(|x| set.contains(x))) {
                continue;
            }
            match violating_reaction(rn, &set) {
                None => {
                    found.insert(set);
                }
                Some(r) => {
                    for (sp, &k) in rn.reactions[r].reactants.iter().enumerate() {
                        if k > 0 && !set.contains(&sp) {
                            let mut next = set.clone();
                            next.push(sp);
                            next.sort_unstable();
                            stack.push(next);
                        }
                    }
                }
            }
        }
    }
    let sets: Vec<Vec<usize>> = found.iter().cloned().collect();
    let mut minimal: Vec<Vec<usize>> = sets
        .iter()
        .filter(|a| !sets.iter().any(|b| b != *a && b.iter().all(|x| a.contains(x))))
        .cloned()
        .collect();
    minimal.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let dfe: BTreeSet<usize> = minimal.iter().flatten().copied().collect();
    let dfe: Vec<usize> = dfe.into_iter().collect();
    minimal.into_iter().map(|m| siphon_flags(rn, &m, &dfe, true)).collect()
}

/// Builds the flag record of a siphon given the DFE siphon.
pub fn siphon_flags(rn: &ReactionNetwork, members: &[usize], dfe: &[usize], minimal: bool) -> Siphon {
    let lotka_volterra = members.iter().all(|&v| rn.rhs[v].num().monomial_content().exp(v) > 0);
    let inhabited_candidate = dfe.iter().filter(|v| !members.contains(v)).all(|&v| {
        rn.reactions.iter().any(|r| {
            i64::from(r.products[v]) > i64::from(r.reactants[v]) && !r.consumes_any(members)
        })
    });
    Siphon {
        members: members.to_vec(),
        minimal,
        lotka_volterra,
        dfe: members == dfe,
        inhabited_candidate,
    }
}

/// True when each right-hand side indexed by `z` vanishes identically once
/// the variables of `z` are set to zero.
pub fn verify_face_invariance(m: &Model, z: &[usize]) -> bool {
    let zeros: BTreeMap<usize, Rational> = z.iter().map(|&v| (v, Rational::zero())).collect();
    let rhs = m.rhs();
    z.iter().all(|&i| {
        let num = rhs[i].num().substitute_values(&zeros);
        let den = rhs[i].den().substitute_values(&zeros);
        num.is_zero() && !den.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_model;
    use crate::model::parse_model;
    use crate::network::extract_network;

    fn names(m: &Model, s: &Siphon) -> Vec<String> {
        s.members.iter().map(|&i| m.variables[i].clone()).collect()
    }

    #[test]
    fn osn_minimal_siphons() {
        let m = builtin_model("osn_omega_pos").unwrap();
        let rn = extract_network(&m).unwrap();
        let got: Vec<Vec<String>> = minimal_siphons(&rn).iter().map(|s| names(&m, s)).collect();
        assert_eq!(got, vec![vec!["U"], vec!["S1", "B1"], vec!["S2", "B2"]]);
        let z = builtin_model("osn_omega0").unwrap();
        let rn = extract_network(&z).unwrap();
        let sips = minimal_siphons(&rn);
        let got: Vec<Vec<String>> = sips.iter().map(|s| names(&z, s)).collect();
        assert_eq!(got, vec![vec!["U"], vec!["W"], vec!["S1", "B1"], vec!["S2", "B2"]]);
        assert!(sips[0].lotka_volterra && sips[1].lotka_volterra && !sips[2].lotka_volterra);
    }

    #[test]
    fn single_reaction() {
        let m = parse_model("[variables]\nA, B\n[parameters]\nk\n[equations]\nA' = -k*A\nB' = k*A\n").unwrap();
        let rn = extract_network(&m).unwrap();
        let s = minimal_siphons(&rn);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].members, vec![0]);
    }

    #[test]
    fn face_invariance_examples() {
        let m = builtin_model("osn_omega_pos").unwrap();
        let idx = |n: &str| m.var_index(n).unwrap();
        assert!(verify_face_invariance(&m, &[idx("S1"), idx("B1")]));
        assert!(!verify_face_invariance(&m, &[idx("S1")]));
        assert!(!verify_face_invariance(&m, &[idx("x1")]));
    }
}
