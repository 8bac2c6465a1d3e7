use std::collections::BTreeSet;

use serde::Serialize;

use super::siphon::{siphon_flags, Siphon};
use super::ReactionNetwork;

/// A distance-one step `lower < upper`: `upper` adds one minimal siphon to
/// `lower` and no lattice node lies strictly between. `lower` may be empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cover {
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    /// `upper \ lower`, the block freed by the step.
    pub sigma: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SiphonLattice {
    pub minimal: Vec<Siphon>,
    /// All nonempty unions of minimal siphons, largest first.
    pub nodes: Vec<Siphon>,
    pub dfe: Vec<usize>,
    pub covers: Vec<Cover>,
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let s: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

/// Union closure of the minimal siphons with its covers; the empty set acts
/// as the bottom element so that every minimal siphon is covered.
pub fn siphon_lattice(rn: &ReactionNetwork, mins: &[Siphon]) -> SiphonLattice {
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for m in mins {
        let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
        sets.insert(m.members.clone());
        for s in current {
            sets.insert(union(&s, &m.members));
        }
    }
    let dfe = mins.iter().fold(Vec::new(), |acc, m| union(&acc, &m.members));
    let mut order: Vec<Vec<usize>> = sets.into_iter().collect();
    order.sort_by(|a, b| (b.len(), a).cmp(&(a.len(), b)));

    let mut with_bottom = order.clone();
    with_bottom.push(Vec::new());
    let mut covers = Vec::new();
    for lower in &with_bottom {
        let mut seen = BTreeSet::new();
        for m in mins {
            if subset(&m.members, lower) {
                continue;
            }
            let upper = union(lower, &m.members);
            if !seen.insert(upper.clone()) {
                continue;
            }
            let between = order
                .iter()
                .any(|n| n.len() > lower.len() && n.len() < upper.len() && subset(lower, n) && subset(n, &upper));
            if !between {
                let sigma = upper.iter().filter(|x| !lower.contains(x)).copied().collect();
                covers.push(Cover { upper, lower: lower.clone(), sigma });
            }
        }
    }
    covers.sort();
    let minimal_sets: Vec<&Vec<usize>> = mins.iter().map(|m| &m.members).collect();
    let nodes = order
        .iter()
        .map(|s| siphon_flags(rn, s, &dfe, minimal_sets.contains(&s)))
        .collect();
    SiphonLattice { minimal: mins.to_vec(), nodes, dfe, covers }
}

impl SiphonLattice {
    /// Faces to solve on: every node and the empty face.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut f: Vec<Vec<usize>> = self.nodes.iter().map(|n| n.members.clone()).collect();
        f.push(Vec::new());
        f
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        s.is_empty() || self.nodes.iter().any(|n| n.members == s)
    }

    pub fn find_cover(&self, upper: &[usize], lower: &[usize]) -> Option<&Cover> {
        self.covers.iter().find(|c| c.upper == upper && c.lower == lower)
    }

    /// Covers whose upper face is `upper`.
    pub fn covers_from<'a>(&'a self, upper: &'a [usize]) -> impl Iterator<Item = &'a Cover> + 'a {
        self.covers.iter().filter(move |c| c.upper == upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_model;
    use crate::model::parse_model;
    use crate::network::{extract_network, minimal_siphons};

    #[test]
    fn disjoint_siphons() {
        let m = builtin_model("osn_omega_pos").unwrap();
        let rn = extract_network(&m).unwrap();
        let l = siphon_lattice(&rn, &minimal_siphons(&rn));
        assert_eq!(l.nodes.len(), 7);
        assert_eq!(l.covers.len(), 12);
        assert!(l.nodes[0].dfe);
        let z = builtin_model("osn_omega0").unwrap();
        let rn = extract_network(&z).unwrap();
        assert_eq!(siphon_lattice(&rn, &minimal_siphons(&rn)).nodes.len(), 15);
    }

    #[test]
    fn single_siphon_has_only_the_bottom_cover() {
        let m = parse_model("[variables]\nA, B\n[equations]\nA' = -A\nB' = A\n").unwrap();
        let rn = extract_network(&m).unwrap();
        let l = siphon_lattice(&rn, &minimal_siphons(&rn));
        assert_eq!(l.nodes.len(), 1);
        assert_eq!(l.covers, vec![Cover { upper: vec![0], lower: vec![], sigma: vec![0] }]);
    }
}
